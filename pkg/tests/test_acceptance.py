"""End-to-end acceptance checks.

One test per shipped guarantee; each prints a single
"[acceptance] <name>: PASS/FAIL" line so the suite output doubles as a
checklist.  Tolerances here are contractual: loosening them is an API
change, not a test fix.
"""

import json

import numpy as np
import pytest

from collision_spin import (
    IntegrationControls,
    ModelFlow,
    ReducedState,
    ShapePoint,
    ShapeVelocity,
    arclength_certificate,
    check_lojasiewicz,
    classify,
    from_chart,
    fs_matrix,
    fs_norm_sq,
    horizontal_lift,
    integrate,
    integrate_unreduced,
    restpoint_spectrum,
    run_model_flow,
    spin_and_arclength,
    spiral_curve,
    velocity_from_chart,
)
from collision_spin.cli import main
from collision_spin.gradflow import flat_potential, quartic_potential


def report(name, ok, detail=""):
    tail = f"  ({detail})" if detail and not ok else ""
    print(f"[acceptance] {name}: {'PASS' if ok else 'FAIL'}{tail}")
    return ok


def test_restpoint_correctness(tmp_path, capsys):
    out = tmp_path / "catalog.json"
    code = main(
        ["cc-find", "--masses", "1,1,1", "--n-seeds", "24", "--output", str(out)]
    )
    entries = json.loads(out.read_text())
    lagrange = [e for e in entries if abs(e["V0"] - 3.0) < 1e-6]
    ok = code == 0 and bool(lagrange)
    if lagrange:
        e = lagrange[0]
        ok = ok and abs(e["V0"] - 3.0) < 1e-10
        ok = ok and abs(e["v0"] + np.sqrt(6.0)) < 1e-10
    with capsys.disabled():
        assert report("restpoint-correctness", ok)


def test_spectrum_formula(capsys):
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(100):
        v0 = -float(rng.uniform(0.1, 10.0))
        c = float(rng.uniform(-20.0, 20.0))
        ours = sorted(restpoint_spectrum(v0, c), key=lambda z: (z.real, z.imag))
        ref = sorted(
            np.linalg.eigvals(np.array([[0.0, 1.0], [c, -v0 / 2.0]])),
            key=lambda z: (z.real, z.imag),
        )
        worst = max(worst, max(abs(a - b) for a, b in zip(ours, ref)))
    ok = worst < 1e-12
    # Exact zero eigenvalue exactly when the Hessian mode vanishes.
    lp, lm = restpoint_spectrum(-2.0, 0.0)
    ok = ok and lm == 0.0 and lp != 0.0
    for c in (-3.0, 0.5, 17.0):
        lp, lm = restpoint_spectrum(-2.0, c)
        ok = ok and abs(lp) > 1e-13 and abs(lm) > 1e-13
    with capsys.disabled():
        assert report("spectrum-formula", ok, f"worst formula gap {worst:.3g}")


def test_homothetic_energy(lagrange_record, capsys):
    rec = lagrange_record
    drift = float(np.max(np.abs(rec.energy_residual)))
    tail = rec.tau > rec.tau[-1] - 10.0
    slope = float(np.polyfit(rec.tau[tail], np.log(rec.r[tail]), 1)[0])
    v0 = -np.sqrt(6.0)
    rel = abs(slope - v0) / abs(v0)
    ok = rec.tau[-1] == pytest.approx(50.0) and drift < 1e-9 and rel < 0.01
    with capsys.disabled():
        assert report(
            "homothetic-energy", ok, f"drift {drift:.3g}, slope rel err {rel:.3g}"
        )


def test_finite_spin(perturbed_preset, perturbed_record, capsys):
    rep = spin_and_arclength(perturbed_record, fit_window=perturbed_preset.fit_window)
    expected = min(classify(perturbed_preset.cc).stable_rates)
    ok = rep.theta_converged and rep.arclength_converged
    ok = ok and np.isfinite(rep.theta_final) and np.isfinite(rep.arclength_final)
    rate_ok = rep.tail_rate is not None and abs(rep.tail_rate - expected) / expected < 0.10
    ok = ok and rate_ok
    detail = f"tail rate {rep.tail_rate}, expected {expected:.6g}"
    with capsys.disabled():
        assert report("finite-spin", ok, detail)


def test_infinite_spin_demo(spiral_lift, capsys):
    T = spiral_lift.t[-1]
    t0 = 1.0 + 1e-6
    expected = -np.log((T + 1.0) / (t0 + 1.0))
    rel = abs(spiral_lift.theta[-1] - expected) / abs(expected)
    J_max = float(np.max(np.abs(spiral_lift.J_residual)))
    rot_max = float(np.max(spiral_lift.rotation_norm))
    ok = rel < 1e-6 and J_max < 1e-10 and rot_max < 1e-10 and spiral_lift.diverged
    with capsys.disabled():
        assert report(
            "infinite-spin-demo",
            ok,
            f"angle rel err {rel:.3g}, J {J_max:.3g}, rotation {rot_max:.3g}",
        )


def test_reduction_consistency(equal3, capsys):
    # One momentum-free orbit, two routes: plain Newtonian integration in
    # the full plane versus the reduced chart equations, one time unit.
    point = ShapePoint(r=1.0, theta=0.3, s=np.array([0.25 - 0.95j]))
    z0 = from_chart(point)
    omega0 = np.array([0.15 + 0.1j])
    from collision_spin import spin_rate

    vel = ShapeVelocity(rho=-0.2, theta_dot=spin_rate(point.s, omega0), omega=omega0)
    zeta0 = velocity_from_chart(point, vel)

    full = integrate_unreduced(equal3, z0, zeta0, 1.0, n_samples=501)
    series = full.chart_series()

    reduced = integrate(
        equal3,
        ReducedState(r=1.0, rho=-0.2, s=point.s, omega=omega0),
        1.0,
        controls=IntegrationControls(rtol=1e-12, atol=1e-14, n_samples=501),
        theta0=0.3,
    )
    dr = float(np.max(np.abs(series["r"] - reduced.r)))
    dth = float(np.max(np.abs(series["theta"] - reduced.theta)))
    ds = float(np.max(np.abs(series["s"].reshape(-1) - reduced.s.reshape(-1))))
    ok = dr < 1e-6 and dth < 1e-6 and ds < 1e-6
    with capsys.disabled():
        assert report(
            "reduction-consistency", ok, f"dr {dr:.3g}, dtheta {dth:.3g}, ds {ds:.3g}"
        )


def test_lojasiewicz_suite(capsys):
    W, grad = quartic_potential()
    flow = ModelFlow(W=W, grad_W=grad, alpha=1.5)
    rep = run_model_flow(flow, np.array([0.3, 0.4]), 50.0)
    W0 = rep.W_samples[0]
    closed = W0 / (1.0 + 8.0 * np.sqrt(W0) * rep.tau) ** 2
    ok = rep.violation_max <= 1e-9
    ok = ok and float(np.max(np.abs(rep.W_samples - closed))) < 1e-8
    cert = arclength_certificate(rep)
    ok = ok and cert.finite and cert.total_bound >= cert.measured_total

    Wf, gradf = flat_potential()
    radial = np.geomspace(0.07, 0.8, 64)
    points = np.column_stack([radial, np.zeros_like(radial)])
    flat_fails = all(
        not check_lojasiewicz(
            ModelFlow(W=Wf, grad_W=gradf, alpha=a), points
        ).holds
        for a in (1.1, 1.3, 1.5, 1.7, 1.9)
    )
    ok = ok and flat_fails
    with capsys.disabled():
        assert report(
            "lojasiewicz-suite",
            ok,
            f"violation {rep.violation_max:.3g}, flat fails {flat_fails}",
        )


def test_metric_properties(capsys):
    ok = True
    for dim in (1, 2, 3):
        A0 = fs_matrix(np.zeros(dim, complex)).matrix
        ok = ok and np.array_equal(A0, np.eye(2 * dim))
    rng = np.random.default_rng(77)
    min_eig = np.inf
    for _ in range(1000):
        dim = int(rng.integers(1, 4))
        s = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        norm = np.linalg.norm(s)
        if norm > 0:
            s = s * (rng.uniform(0.0, 10.0) / norm)
        min_eig = min(min_eig, float(np.linalg.eigvalsh(fs_matrix(s).matrix).min()))
    ok = ok and min_eig > 0.0
    for _ in range(200):
        s = rng.normal(size=2) * 3 + 1j * rng.normal(size=2) * 3
        omega = rng.normal(size=2) + 1j * rng.normal(size=2)
        ok = ok and fs_norm_sq(s, np.zeros(2, complex)) == 0.0
        if np.linalg.norm(omega) > 1e-10:
            ok = ok and fs_norm_sq(s, omega) > 0.0
    with capsys.disabled():
        assert report("metric-properties", ok, f"min eigenvalue {min_eig:.3g}")
