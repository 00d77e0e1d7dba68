"""Command-line front end.

Subcommands:
  cc-find    multistart search for central configurations, JSON catalog out
  integrate  run a preset (or configured) collision orbit, CSV trajectory out
  spin-demo  horizontal lift of the log spiral, CSV out
  grad-flow  model gradient flow with decay bound and arclength report, CSV out
  catalog    list shipped presets with one-line reproduction commands

Exit codes: 0 success, 1 domain/computation error (JSON diagnostics on
stderr), 2 usage error.  Outputs are deterministic: fixed column orders,
floats at 17 significant digits, LF newlines, sorted JSON keys.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from .central import classify, multistart_catalog
from .dynamics import BlownUpState, IntegrationControls, integrate
from .errors import ConvergenceError, DomainError, IntegrationError
from .gradflow import (
    ModelFlow,
    arclength_certificate,
    flat_potential,
    orthogonal_perturbation,
    quadratic_potential,
    quartic_potential,
    run_model_flow,
)
from .masses import MassSystem
from .presets import OrbitPreset, load_preset, preset_catalog, spiral_demo
from .spindemo import horizontal_lift, infinite_spin_certificate, spiral_curve

THREADS_ENV = "COLLISION_SPIN_THREADS"


@dataclass
class Table:
    """Minimal column/row pair quacking like a trajectory record for emit_csv."""

    names: list
    data: np.ndarray

    def columns(self):
        return list(self.names)

    def rows(self):
        return self.data


def emit_csv(table, path) -> None:
    """Write any object with columns()/rows() as deterministic CSV."""
    cols = table.columns()
    rows = np.atleast_2d(np.asarray(table.rows(), dtype=float))
    lines = [",".join(cols)]
    if rows.size:
        for row in rows:
            lines.append(",".join(format(float(x), ".17g") for x in row))
    _write_text(path, "\n".join(lines) + "\n")


def emit_json(obj, path) -> None:
    _write_text(path, json.dumps(obj, sort_keys=True, indent=2) + "\n")


def _write_text(path, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _max_workers() -> int:
    raw = os.environ.get(THREADS_ENV, "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _load_masses(args) -> MassSystem:
    if getattr(args, "config", None):
        with open(args.config, "r", encoding="utf-8") as fh:
            return MassSystem.from_json(fh.read())
    if getattr(args, "masses", None):
        return MassSystem([float(tok) for tok in args.masses.split(",")])
    raise DomainError("no mass system given; pass --masses a,b,c or --config file.json")


def _cc_entry(cc) -> dict:
    cls = classify(cc)
    return {
        "s0": [[float(x.real), float(x.imag)] for x in cc.s0],
        "V0": float(cc.V0),
        "v0": float(cc.v0),
        "spectrum": [[float(e.real), float(e.imag)] for e in cls.restpoint_eigenvalues],
        "degenerate": bool(cc.degenerate),
        "morse_index": int(cls.morse_index),
    }


# -- subcommands -------------------------------------------------------------


def _cmd_cc_find(args) -> int:
    system = _load_masses(args)
    catalog = multistart_catalog(
        system,
        n_seeds=args.n_seeds,
        seed=args.seed,
        radius=args.radius,
        tol=args.tol,
        max_workers=_max_workers(),
    )
    emit_json([_cc_entry(cc) for cc in catalog], args.output)
    return 0


def _state_from_config(doc) -> tuple[MassSystem, BlownUpState, float]:
    system = MassSystem.from_json({"masses": doc["masses"]})
    st = doc["state"]
    s = np.array([complex(re, im) for re, im in st["s"]])
    w = np.array([complex(re, im) for re, im in st["w"]])
    state = BlownUpState(r=float(st["r"]), v=float(st["v"]), s=s, w=w)
    return system, state, float(doc.get("h", 0.0))


def _cmd_integrate(args) -> int:
    capture = None
    fit_window = None
    if args.preset:
        preset = load_preset(args.preset)
        if not isinstance(preset, OrbitPreset):
            raise DomainError(
                f"preset {args.preset!r} is a shape curve, not an orbit; "
                "run: collision-spin spin-demo --c 1 --t-max 10000"
            )
        system, state, h = preset.system, preset.state, preset.h
        tau_max = args.tau_max if args.tau_max is not None else preset.tau_max
        capture = preset.capture
        fit_window = preset.fit_window
    elif args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
        system, state, h = _state_from_config(doc)
        tau_max = args.tau_max if args.tau_max is not None else 50.0
    else:
        raise DomainError("nothing to integrate; pass --preset NAME or --config file.json")

    if args.h is not None:
        h = args.h
    if capture is not None and args.capture_tol is not None:
        from .dynamics import CaptureSpec

        capture = CaptureSpec(target=capture.target, tol=args.capture_tol, stop=capture.stop)
    controls = IntegrationControls(rtol=args.tol, atol=args.tol * 1e-2, n_samples=args.n_samples)
    record = integrate(system, state, tau_max, controls=controls, h=h, capture=capture)
    emit_csv(record, args.output)
    if args.summary:
        from .dynamics import spin_and_arclength

        rep = spin_and_arclength(record, fit_window=fit_window)
        emit_json(
            {
                "status": record.status,
                "energy_drift": record.energy_drift,
                "capture_tau": record.capture_tau,
                "theta_final": rep.theta_final,
                "arclength_final": rep.arclength_final,
                "theta_converged": rep.theta_converged,
                "tail_rate": rep.tail_rate,
            },
            args.summary,
        )
    return 0


def _cmd_spin_demo(args) -> int:
    preset = spiral_demo(c=args.c, t_max=args.t_max, tol=args.tol)
    curve = spiral_curve(preset.c, t_end=preset.t_max)
    lift = horizontal_lift(
        curve,
        rtol=preset.tol * 1e-4,
        atol=preset.tol * 1e-6,
        n_samples=args.n_samples,
    )
    s1 = np.array([curve.s(t)[0] for t in lift.t])
    closed = lift.closed_form if lift.closed_form is not None else np.full_like(lift.theta, np.nan)
    table = Table(
        names=["t", "s1_re", "s1_im", "theta", "theta_closed_form", "J_residual", "rot_component_norm"],
        data=np.column_stack([lift.t, s1.real, s1.imag, lift.theta, closed, lift.J_residual, lift.rotation_norm]),
    )
    emit_csv(table, args.output)
    if args.summary:
        cert = infinite_spin_certificate(lift)
        emit_json(
            {
                "theta_final": float(lift.theta[-1]),
                "max_abs_err": lift.max_abs_err,
                "log_slope": cert.log_slope,
                "diverged": cert.diverged,
                "inequality_ok": cert.inequality_ok,
            },
            args.summary,
        )
    return 0


def _load_potential(args):
    if args.potential == "quad":
        return quadratic_potential()
    if args.potential == "quartic":
        return quartic_potential()
    if args.potential == "flat":
        return flat_potential()
    if args.potential == "file":
        if not args.potential_file:
            raise DomainError("--potential file needs --potential-file pointing at a module with W and grad_W")
        import importlib.util

        spec = importlib.util.spec_from_file_location("user_potential", args.potential_file)
        mod = importlib.util.module_from_spec(spec)
        spec.loader.exec_module(mod)
        return mod.W, mod.grad_W
    raise DomainError(f"unknown potential {args.potential!r}")


def _cmd_grad_flow(args) -> int:
    W, grad = _load_potential(args)
    gamma = orthogonal_perturbation(grad, args.c) if args.c > 0 else None
    flow = ModelFlow(W=W, grad_W=grad, alpha=args.alpha, k_const=args.k, gamma=gamma, c=args.c, name=args.potential)
    x0 = np.array([float(tok) for tok in args.x0.split(",")])
    report = run_model_flow(flow, x0, args.tau_max, mode=args.mode)
    table = Table(
        names=["tau", "W", "bound_curve", "arclength"],
        data=np.column_stack([report.tau, report.W_samples, report.bound_curve, report.arclength_partials]),
    )
    emit_csv(table, args.output)
    if args.summary:
        cert = arclength_certificate(report)
        emit_json(
            {
                "violation_max": report.violation_max,
                "monotone": report.monotone,
                "lambda": report.lam,
                "certificate_total": cert.total_bound,
                "certificate_infinite": cert.total_bound_infinite,
                "measured_arclength": cert.measured_total,
                "finite": cert.finite,
            },
            args.summary,
        )
    return 0


def _cmd_catalog(args) -> int:
    emit_json(preset_catalog(), args.output)
    return 0


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="collision-spin",
        description="planar n-body total-collision laboratory",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cc-find", help="multistart central-configuration catalog (JSON)")
    p.add_argument("--masses", help="comma-separated mass list, e.g. 1,1,1")
    p.add_argument("--config", help="JSON file with a masses key")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-seeds", type=int, default=64)
    p.add_argument("--radius", type=float, default=3.0)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--output", "-o", default="-")
    p.set_defaults(func=_cmd_cc_find)

    p = sub.add_parser("integrate", help="integrate a collision orbit (CSV)")
    p.add_argument("--preset", help="one of the shipped presets; see the catalog subcommand")
    p.add_argument("--config", help="JSON file: {masses, state:{r,v,s,w}, h}")
    p.add_argument("--h", type=float, default=None, help="energy parameter override")
    p.add_argument("--tau-max", type=float, default=None)
    p.add_argument("--tol", type=float, default=1e-11, help="integrator relative tolerance")
    p.add_argument("--capture-tol", type=float, default=None)
    p.add_argument("--n-samples", type=int, default=2001)
    p.add_argument("--output", "-o", default="-")
    p.add_argument("--summary", help="optional JSON summary path")
    p.set_defaults(func=_cmd_integrate)

    p = sub.add_parser("spin-demo", help="horizontal lift of the log spiral (CSV)")
    p.add_argument("--c", type=float, default=1.0, help="spiral angular rate")
    p.add_argument("--t-max", type=float, default=1e4)
    p.add_argument("--tol", type=float, default=1e-6, help="target accuracy of the lifted angle")
    p.add_argument("--n-samples", type=int, default=2001)
    p.add_argument("--output", "-o", default="-")
    p.add_argument("--summary", help="optional JSON summary path")
    p.set_defaults(func=_cmd_spin_demo)

    p = sub.add_parser("grad-flow", help="model gradient flow with decay bound (CSV)")
    p.add_argument("--potential", choices=["quad", "quartic", "flat", "file"], default="quartic")
    p.add_argument("--potential-file", help="python file with W and grad_W (for --potential file)")
    p.add_argument("--alpha", type=float, default=1.5)
    p.add_argument("--k", type=float, default=1.0)
    p.add_argument("--c", type=float, default=0.0, help="orthogonal perturbation strength")
    p.add_argument("--x0", default="0.1,0")
    p.add_argument("--tau-max", type=float, default=50.0)
    p.add_argument("--mode", choices=["explicit-c", "normalized"], default="explicit-c")
    p.add_argument("--output", "-o", default="-")
    p.add_argument("--summary", help="optional JSON summary path")
    p.set_defaults(func=_cmd_grad_flow)

    p = sub.add_parser("catalog", help="list shipped presets (JSON)")
    p.add_argument("--output", "-o", default="-")
    p.set_defaults(func=_cmd_catalog)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DomainError, ConvergenceError, IntegrationError) as exc:
        payload = exc.payload() if hasattr(exc, "payload") else {}
        doc = {"error": type(exc).__name__, "message": str(exc), **payload}
        sys.stderr.write(json.dumps(doc, sort_keys=True) + "\n")
        return 1
    except FileNotFoundError as exc:
        sys.stderr.write(json.dumps({"error": "FileNotFoundError", "message": str(exc)}) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
