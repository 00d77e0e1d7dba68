#!/usr/bin/env python3
"""Run every shipped orbit preset and print a one-screen report.

Useful as a quick regression sweep after touching the integrator: each
preset prints its termination status, worst energy defect, capture time,
and the spin/arclength verdict with the measured tail rate.
"""

import numpy as np

from collision_spin import (
    classify,
    horizontal_lift,
    integrate,
    load_preset,
    preset_catalog,
    spin_and_arclength,
)
from collision_spin.presets import OrbitPreset


def run_orbit(preset):
    rec = integrate(
        preset.system,
        preset.state,
        preset.tau_max,
        h=preset.h,
        capture=preset.capture,
    )
    rep = spin_and_arclength(rec, fit_window=preset.fit_window)
    drift = float(np.max(np.abs(rec.energy_residual)))
    print(f"  status          {rec.status}")
    print(f"  energy drift    {drift:.3e}")
    if rec.capture_tau is not None:
        print(f"  capture tau     {rec.capture_tau:.4f}")
    print(f"  theta final     {rep.theta_final:.6e}  converged={rep.theta_converged}")
    print(f"  arclength       {rep.arclength_final:.6e}  converged={rep.arclength_converged}")
    if rep.tail_rate is not None:
        expected = min(classify(preset.cc).stable_rates)
        print(f"  tail rate       {rep.tail_rate:.4f}  (slowest stable rate {expected:.4f})")


def run_spiral(preset):
    from collision_spin import infinite_spin_certificate, spiral_curve

    lift = horizontal_lift(spiral_curve(preset.c, t_end=preset.t_max))
    cert = infinite_spin_certificate(lift)
    print(f"  theta final     {lift.theta[-1]:.6f}")
    print(f"  closed-form gap {lift.max_abs_err:.3e}")
    print(f"  log slope       {cert.log_slope:.6f}  diverged={cert.diverged}")
    print(f"  twist inequality margin {cert.inequality_margin:.3e}  ok={cert.inequality_ok}")


def main():
    for entry in preset_catalog():
        print(f"{entry['name']}: {entry['description']}")
        preset = load_preset(entry["name"])
        if isinstance(preset, OrbitPreset):
            run_orbit(preset)
        else:
            run_spiral(preset)
        print()


if __name__ == "__main__":
    main()
