import numpy as np
import pytest

from collision_spin import (
    ModelFlow,
    arclength_certificate,
    ball_cloud,
    check_lojasiewicz,
    run_model_flow,
)
from collision_spin.errors import DomainError
from collision_spin.gradflow import (
    flat_potential,
    orthogonal_perturbation,
    quadratic_potential,
    quartic_potential,
)


def make_flow(builder, alpha, **kw):
    W, grad = builder()
    return ModelFlow(W=W, grad_W=grad, alpha=alpha, **kw)


def test_exponent_validation():
    W, grad = quadratic_potential()
    for alpha in (0.5, 1.0, 2.0, 3.0):
        with pytest.raises(DomainError):
            ModelFlow(W=W, grad_W=grad, alpha=alpha)
    with pytest.raises(DomainError):
        ModelFlow(W=W, grad_W=grad, alpha=1.5, k_const=0.0)
    with pytest.raises(DomainError):
        ModelFlow(W=W, grad_W=grad, alpha=1.5, k_const=1.0, c=1.0)


def test_quadratic_flow_closed_form():
    flow = make_flow(quadratic_potential, 1.5)
    report = run_model_flow(flow, np.array([0.1, 0.0]), 5.0)
    expected = report.W_samples[0] * np.exp(-4.0 * report.tau)
    assert np.max(np.abs(report.W_samples - expected)) < 1e-12
    assert report.monotone
    assert report.violation_max <= 0.0 + 1e-12


def test_quadratic_arclength_is_straight_line_distance():
    flow = make_flow(quadratic_potential, 1.5)
    report = run_model_flow(flow, np.array([0.1, 0.0]), 5.0)
    cert = arclength_certificate(report)
    assert cert.measured_total == pytest.approx(0.1, abs=1e-4)
    assert cert.finite
    assert cert.total_bound >= cert.measured_total


def test_quartic_flow_matches_closed_form_exactly():
    # alpha = 3/2 with k = 1 makes the certified bound coincide with the
    # true solution W0 / (1 + 8 sqrt(W0) tau)^2.
    flow = make_flow(quartic_potential, 1.5)
    x0 = np.array([0.3, 0.4])
    report = run_model_flow(flow, x0, 50.0)
    W0 = report.W_samples[0]
    closed = W0 / (1.0 + 8.0 * np.sqrt(W0) * report.tau) ** 2
    assert np.max(np.abs(report.W_samples - closed)) < 1e-8
    assert np.max(np.abs(report.bound_curve - closed)) < 1e-10
    assert report.violation_max < 1e-9
    assert report.loj_constant == pytest.approx(16.0, rel=1e-12)
    assert report.epsilon == pytest.approx(0.5)


def test_quartic_certificate_dominates_measurement():
    flow = make_flow(quartic_potential, 1.5)
    report = run_model_flow(flow, np.array([0.3, 0.4]), 50.0)
    cert = arclength_certificate(report, tau_split=1.0)
    assert cert.finite
    assert cert.total_bound >= cert.measured_total
    assert cert.tail_bound >= cert.measured_tail
    assert cert.total_bound_infinite >= cert.total_bound
    assert np.isfinite(cert.total_bound_infinite)


def test_orthogonal_perturbation_preserves_decay():
    # gamma rotates the velocity; radial decay is untouched, so W(tau)
    # matches the unperturbed run to roundoff while the path bends.
    base = make_flow(quadratic_potential, 1.5)
    W, grad = quadratic_potential()
    bent = ModelFlow(
        W=W, grad_W=grad, alpha=1.5, c=0.3, gamma=orthogonal_perturbation(grad, 0.3)
    )
    x0 = np.array([0.1, 0.0])
    plain = run_model_flow(base, x0, 5.0)
    curved = run_model_flow(bent, x0, 5.0)
    assert np.max(np.abs(plain.W_samples - curved.W_samples)) < 1e-12
    assert curved.monotone
    # The bent path is strictly longer.
    assert (
        arclength_certificate(curved).measured_total
        > arclength_certificate(plain).measured_total
    )


def test_gamma_contract_is_enforced():
    W, grad = quadratic_potential()
    cheat = ModelFlow(
        W=W, grad_W=grad, alpha=1.5, c=0.1, gamma=orthogonal_perturbation(grad, 0.3)
    )
    with pytest.raises(DomainError, match="contract"):
        run_model_flow(cheat, np.array([0.1, 0.0]), 1.0)


def test_normalized_mode_requires_unit_constant():
    flow = make_flow(quartic_potential, 1.5)
    report = run_model_flow(flow, np.array([0.3, 0.4]), 5.0, mode="normalized")
    assert report.k2_decay == pytest.approx(1.0)
    weak = make_flow(quadratic_potential, 1.5)
    with pytest.raises(DomainError, match="normalized"):
        run_model_flow(weak, np.array([5.0, 0.0]), 1.0, mode="normalized")


def test_unknown_mode_rejected():
    flow = make_flow(quartic_potential, 1.5)
    with pytest.raises(DomainError):
        run_model_flow(flow, np.array([0.3, 0.4]), 1.0, mode="optimistic")


def test_zero_start_rejected():
    flow = make_flow(quartic_potential, 1.5)
    with pytest.raises(DomainError):
        run_model_flow(flow, np.zeros(2), 1.0)


def test_flat_potential_fails_every_tested_exponent():
    # The inequality needs |grad W|^2 >= W^alpha near the minimum; the
    # exponentially flat well violates it for each alpha < 2 once the
    # sample cloud reaches small enough radius.
    W, grad = flat_potential()
    radial = np.geomspace(0.07, 0.8, 64)
    points = np.column_stack([radial, np.zeros_like(radial)])
    for alpha in (1.1, 1.3, 1.5, 1.7, 1.9):
        flow = ModelFlow(W=W, grad_W=grad, alpha=alpha)
        result = check_lojasiewicz(flow, points)
        assert not result.holds, f"alpha={alpha} unexpectedly held"
        assert result.worst_ratio < 1.0


def test_flat_potential_skips_underflow_points():
    W, grad = flat_potential()
    flow = ModelFlow(W=W, grad_W=grad, alpha=1.5)
    points = np.array([[1e-200, 0.0], [0.5, 0.0]])
    result = check_lojasiewicz(flow, points)
    assert result.n_skipped == 1
    with pytest.raises(DomainError):
        check_lojasiewicz(flow, np.array([[1e-200, 0.0]]))


def test_quartic_ratio_is_scale_free():
    W, grad = quartic_potential()
    flow = ModelFlow(W=W, grad_W=grad, alpha=1.5)
    for r in (1e-6, 1e-3, 1.0, 1e3):
        res = check_lojasiewicz(flow, np.array([[r, 0.0]]))
        assert res.worst_ratio == pytest.approx(16.0, rel=1e-9)


def test_ball_cloud_deterministic_annulus():
    a = ball_cloud(2, 1.0, count=64, seed=5, r_min=0.1)
    b = ball_cloud(2, 1.0, count=64, seed=5, r_min=0.1)
    assert np.array_equal(a, b)
    radii = np.linalg.norm(a, axis=1)
    assert radii.min() >= 0.1
    assert radii.max() <= 1.0
    assert a.shape == (64, 2)


def test_certificate_needs_room_after_split():
    flow = make_flow(quartic_potential, 1.5)
    report = run_model_flow(flow, np.array([0.3, 0.4]), 0.5)
    with pytest.raises(DomainError):
        arclength_certificate(report, tau_split=1.0)


def test_custom_region_points_are_respected():
    W, grad = quartic_potential()
    flow = ModelFlow(W=W, grad_W=grad, alpha=1.5)
    pts = np.array([[0.3, 0.0], [0.0, 0.2]])
    report = run_model_flow(flow, np.array([0.3, 0.0]), 2.0, region_points=pts)
    assert report.loj_constant == pytest.approx(16.0, rel=1e-9)
