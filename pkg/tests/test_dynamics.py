import numpy as np
import pytest

from collision_spin import (
    BlownUpState,
    IntegrationControls,
    MassSystem,
    ReducedState,
    blownup_vector_field,
    integrate,
    integrate_unreduced,
    load_preset,
    reduced_vector_field,
    spin_and_arclength,
)
from collision_spin.dynamics import (
    blowup_energy_residual,
    covariant_blowup_residual,
    covariant_shape_residual,
    reduced_energy,
)
from collision_spin.errors import DomainError


def random_reduced(rng, dim=1):
    return ReducedState(
        r=float(rng.uniform(0.5, 2.0)),
        rho=float(rng.normal()),
        s=rng.normal(size=dim) * 0.8 + 1j * rng.normal(size=dim) * 0.8,
        omega=rng.normal(size=dim) + 1j * rng.normal(size=dim),
    )


def to_blowup(state):
    return BlownUpState(
        r=state.r,
        v=np.sqrt(state.r) * state.rho,
        s=state.s.copy(),
        w=state.r**1.5 * state.omega,
    )


def test_restpoint_is_stationary(equal3, lagrange_cc):
    state = BlownUpState(
        r=0.0,
        v=lagrange_cc.v0,
        s=lagrange_cc.s0,
        w=np.zeros_like(lagrange_cc.s0),
    )
    field = blownup_vector_field(equal3, state)
    assert abs(field.r) < 1e-15
    assert abs(field.v) < 1e-12
    assert np.linalg.norm(field.s) < 1e-15
    assert np.linalg.norm(field.w) < 1e-12


def test_covariant_residuals_vanish(equal3):
    rng = np.random.default_rng(8)
    for _ in range(25):
        red = random_reduced(rng)
        assert covariant_shape_residual(equal3, red) < 1e-10
        assert covariant_blowup_residual(equal3, to_blowup(red)) < 1e-10


def test_blowup_field_is_time_rescaled_reduced_field(equal3):
    # The two expansions were derived separately; they must agree through
    # v = sqrt(r) rho, w = r^(3/2) omega and the r^(3/2) clock change.
    rng = np.random.default_rng(13)
    for _ in range(25):
        red = random_reduced(rng)
        dred = reduced_vector_field(equal3, red)
        blow = blownup_vector_field(equal3, to_blowup(red))
        scale = red.r**1.5
        r, rho = red.r, red.rho
        assert np.isclose(blow.r, scale * dred.r, rtol=1e-9, atol=1e-11)
        dv = scale * (np.sqrt(r) * dred.rho + 0.5 * rho**2 / np.sqrt(r) * 1.0)
        assert np.isclose(blow.v, dv, rtol=1e-9, atol=1e-9)
        assert np.allclose(blow.s, scale * dred.s, rtol=1e-9, atol=1e-11)
        dw = scale * (1.5 * np.sqrt(r) * dred.r * red.omega + r**1.5 * dred.omega)
        assert np.allclose(blow.w, dw, rtol=1e-8, atol=1e-9)


def test_reduced_energy_is_conserved_by_field(equal3):
    rng = np.random.default_rng(4)
    for _ in range(20):
        red = random_reduced(rng)
        d = reduced_vector_field(equal3, red)
        eps = 1e-7
        plus = ReducedState(
            r=red.r + eps * d.r,
            rho=red.rho + eps * d.rho,
            s=red.s + eps * d.s,
            omega=red.omega + eps * d.omega,
        )
        minus = ReducedState(
            r=red.r - eps * d.r,
            rho=red.rho - eps * d.rho,
            s=red.s - eps * d.s,
            omega=red.omega - eps * d.omega,
        )
        dE = (reduced_energy(equal3, plus) - reduced_energy(equal3, minus)) / (2 * eps)
        assert abs(dE) < 1e-6


def test_energy_residual_cocycle(equal3):
    # The rescaled energy defect obeys (defect)' = v * defect, so starting
    # off-shell the defect grows or shrinks at exactly that rate.
    rng = np.random.default_rng(6)
    for _ in range(20):
        state = to_blowup(random_reduced(rng))
        h = float(rng.normal())
        d = blownup_vector_field(equal3, state)
        eps = 1e-7
        plus = BlownUpState(state.r + eps * d.r, state.v + eps * d.v, state.s + eps * d.s, state.w + eps * d.w)
        minus = BlownUpState(state.r - eps * d.r, state.v - eps * d.v, state.s - eps * d.s, state.w - eps * d.w)
        lhs = (blowup_energy_residual(equal3, plus, h) - blowup_energy_residual(equal3, minus, h)) / (2 * eps)
        rhs = state.v * blowup_energy_residual(equal3, state, h)
        assert np.isclose(lhs, rhs, rtol=1e-5, atol=1e-5)


def test_reduced_field_rejects_collapsed_size(equal3):
    with pytest.raises(DomainError):
        reduced_vector_field(
            equal3, ReducedState(r=0.0, rho=0.0, s=np.zeros(1, complex), omega=np.zeros(1, complex))
        )


def test_homothetic_benchmark(lagrange_record):
    rec = lagrange_record
    assert rec.status == "captured"
    assert rec.capture_tau is not None
    assert rec.extrapolated_from is not None
    assert np.max(np.abs(rec.energy_residual)) < 1e-9
    # Shape frozen, spin absent: theta and the shape arclength stay tiny.
    assert np.max(np.abs(rec.theta)) < 1e-8
    assert rec.arclength[-1] < 1e-7
    # r decays; v approaches the restpoint value.
    assert np.all(np.diff(rec.r) < 0)
    assert abs(rec.v[-1] - rec.v[0]) > 0.1 or abs(rec.v[-1] + np.sqrt(6.0)) < 1e-6


def test_homothetic_tail_slope(lagrange_record):
    rec = lagrange_record
    tail = rec.tau > rec.tau[-1] - 10.0
    slope = np.polyfit(rec.tau[tail], np.log(rec.r[tail]), 1)[0]
    assert abs(slope + np.sqrt(6.0)) / np.sqrt(6.0) < 1e-6


def test_extrapolated_tail_is_smooth(lagrange_record):
    rec = lagrange_record
    cut = rec.extrapolated_from
    # No jump at the junction: log r stays concave-free to first order,
    # i.e. consecutive slope estimates agree across the seam.
    j = np.searchsorted(rec.tau, cut)
    window = slice(max(j - 3, 1), min(j + 3, len(rec.tau) - 1))
    slopes = np.diff(np.log(rec.r))[window] / np.diff(rec.tau)[window]
    assert np.ptp(slopes) < 1e-3 * abs(slopes[0])


def test_collinear_benchmark_stays_exactly_collinear():
    preset = load_preset("euler-homothetic")
    rec = integrate(preset.system, preset.state, preset.tau_max, h=preset.h, capture=preset.capture)
    assert rec.status == "captured"
    assert np.max(np.abs(rec.energy_residual)) < 1e-9
    assert np.all(rec.s.imag == 0.0)
    assert np.all(rec.w.imag == 0.0)


def test_collision_manifold_is_invariant(perturbed_record):
    assert np.max(np.abs(perturbed_record.r)) == 0.0
    assert np.max(np.abs(perturbed_record.energy_residual)) < 1e-12


def test_collision_manifold_v_monotone(perturbed_record):
    # v is gradient-like on the r = 0 set.
    assert np.all(np.diff(perturbed_record.v) >= -1e-13)


def test_perturbed_spin_report(perturbed_preset, perturbed_record):
    report = spin_and_arclength(perturbed_record, fit_window=perturbed_preset.fit_window)
    assert report.theta_converged
    assert report.arclength_converged
    assert report.bound_satisfied
    assert np.isfinite(report.arclength_final)
    assert report.k_max == pytest.approx(1.0, abs=1e-3)
    expected = perturbed_preset.notes["expected_rate"]
    assert report.tail_rate == pytest.approx(expected, rel=0.05)


def test_capture_tail_bounds_present(lagrange_record):
    assert lagrange_record.tail_theta_bound is not None
    assert lagrange_record.tail_arclength_bound is not None
    assert lagrange_record.tail_theta_bound >= 0.0


def test_sample_grid_and_monotone_time(lagrange_record):
    assert np.all(np.diff(lagrange_record.tau) > 0)
    assert lagrange_record.tau[0] == 0.0
    assert lagrange_record.tau[-1] == pytest.approx(50.0)


def test_two_body_pure_radial_motion():
    system = MassSystem([1.0, 1.0])
    state = BlownUpState(r=1.0, v=0.0, s=np.zeros(0, complex), w=np.zeros(0, complex))
    rec = integrate(system, state, 2.0, h=-system.shape_potential(np.zeros(0, complex)))
    assert rec.status == "completed"
    assert np.max(np.abs(rec.energy_residual)) < 1e-10
    assert np.all(np.diff(rec.r) < 0)


def test_reduced_route_matches_blowup_route(equal3, lagrange_cc):
    # Same physical orbit, both time parametrizations, compared at the
    # final radius through the r-clock rather than the time label.
    s0 = lagrange_cc.s0
    red = ReducedState(r=1.0, rho=-0.5, s=s0, omega=np.zeros_like(s0))
    h = reduced_energy(equal3, red)
    rec_red = integrate(equal3, red, 0.4, controls=IntegrationControls(n_samples=401))
    blown = to_blowup(red)
    rec_blow = integrate(equal3, blown, 2.0, h=h, controls=IntegrationControls(n_samples=2001))
    r_target = rec_red.r[-1]
    j = int(np.argmin(np.abs(rec_blow.r - r_target)))
    v_red_end = rec_red.v[-1] * np.sqrt(r_target)  # rho -> v
    assert rec_blow.r[j] == pytest.approx(r_target, rel=1e-3)
    assert rec_blow.v[j] == pytest.approx(v_red_end, abs=2e-3)


def test_unreduced_momentum_and_energy_conservation(equal3):
    rng = np.random.default_rng(3)
    z0 = rng.normal(size=2) + 1j * rng.normal(size=2)
    zeta0 = 0.3 * (rng.normal(size=2) + 1j * rng.normal(size=2))
    rec = integrate_unreduced(equal3, z0, zeta0, 0.5)
    from collision_spin import angular_momentum

    J = [angular_momentum(z, zeta) for z, zeta in zip(rec.z, rec.zeta)]
    E = [equal3.total_energy(z, zeta) for z, zeta in zip(rec.z, rec.zeta)]
    assert np.ptp(J) < 1e-10
    assert np.ptp(E) < 1e-9


def test_spin_report_on_pure_homothetic(lagrange_record):
    report = spin_and_arclength(lagrange_record)
    assert report.theta_converged
    assert abs(report.theta_final) < 1e-8
    assert report.arclength_final < 1e-7
