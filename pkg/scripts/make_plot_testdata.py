#!/usr/bin/env python3
"""Regenerate the CSV fixtures consumed by the plotting frontend.

Everything goes through the installed collision-spin command so the
fixtures exercise the same interface the frontend sees in production;
nothing is written through the Python API.
"""

import argparse
import pathlib
import subprocess

HERE = pathlib.Path(__file__).resolve().parent.parent
DEFAULT_OUT = HERE / "frontend" / "testdata"

RUNS = [
    ("lagrange.csv", ["integrate", "--preset", "lagrange-homothetic"]),
    ("perturbed.csv", ["integrate", "--preset", "near-homothetic-perturbed"]),
    ("spiral.csv", ["spin-demo", "--c", "1", "--t-max", "10000"]),
    ("quartic.csv", ["grad-flow", "--potential", "quartic", "--x0", "0.3,0.4"]),
]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=str(DEFAULT_OUT), help="fixture directory")
    args = parser.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, cmd in RUNS:
        target = out / name
        subprocess.run(
            ["collision-spin", *cmd, "--output", str(target)],
            check=True,
        )
        print(f"wrote {target}")


if __name__ == "__main__":
    main()
