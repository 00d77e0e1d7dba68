"""Model gradient flows with Lojasiewicz-type decay bounds.

Isolated lab for the inequality machinery that controls shape arclength
near a degenerate minimum: flows x' = -k grad^ W(x) + gamma(x) with
|gamma| <= c |grad^ W| and c < k, where grad^ is the gradient with respect
to an optional Riemannian metric (identity by default).  A certified
gradient inequality |grad^ W|^2 >= C |W|^alpha with 1 < alpha < 2 yields
the algebraic decay

    W(tau) <= W0 / (1 + lam tau)^{1/(alpha-1)},  lam = k2 (alpha-1) W0^{alpha-1},

with k2 = (k - c) C, and a Cauchy-Schwarz split certifies finite arclength.
The constant C is kept explicit by default; the normalized mode insists on
C >= 1 and uses k2 = k - c.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp
from scipy.stats import qmc

from .errors import DomainError, IntegrationError

__all__ = [
    "ModelFlow",
    "DecayReport",
    "LojCheck",
    "ArclengthCertificate",
    "quadratic_potential",
    "quartic_potential",
    "flat_potential",
    "orthogonal_perturbation",
    "ball_cloud",
    "check_lojasiewicz",
    "run_model_flow",
    "arclength_certificate",
]


@dataclass(frozen=True)
class ModelFlow:
    """A potential, its exponent, and the flow controls.

    gamma, when present, must obey |gamma(x)| <= c |grad^ W(x)| on the
    sampled region; run_model_flow enforces this before integrating.
    metric, when present, maps x to a symmetric positive matrix.
    """

    W: Callable[[np.ndarray], float]
    grad_W: Callable[[np.ndarray], np.ndarray]
    alpha: float
    k_const: float = 1.0
    gamma: Callable[[np.ndarray], np.ndarray] | None = None
    c: float = 0.0
    metric: Callable[[np.ndarray], np.ndarray] | None = None
    name: str = ""

    def __post_init__(self):
        if not (1.0 < self.alpha < 2.0):
            raise DomainError("exponent alpha must lie in (1, 2)")
        if not self.k_const > 0:
            raise DomainError("flow constant k must be positive")
        if self.c < 0 or self.c >= self.k_const:
            raise DomainError("perturbation bound c must satisfy 0 <= c < k")

    def metric_at(self, x) -> np.ndarray | None:
        return None if self.metric is None else np.asarray(self.metric(np.asarray(x, float)))

    def hat_grad(self, x) -> np.ndarray:
        g = np.asarray(self.grad_W(np.asarray(x, float)), dtype=float)
        a = self.metric_at(x)
        return g if a is None else np.linalg.solve(a, g)

    def hat_norm(self, x, u) -> float:
        u = np.asarray(u, dtype=float)
        a = self.metric_at(x)
        return float(np.linalg.norm(u)) if a is None else float(np.sqrt(u @ (a @ u)))

    def hat_grad_norm_sq(self, x) -> float:
        g = np.asarray(self.grad_W(np.asarray(x, float)), dtype=float)
        a = self.metric_at(x)
        return float(g @ g) if a is None else float(g @ np.linalg.solve(a, g))

    def velocity(self, x) -> np.ndarray:
        v = -self.k_const * self.hat_grad(x)
        if self.gamma is not None:
            v = v + np.asarray(self.gamma(np.asarray(x, float)), dtype=float)
        return v


@dataclass(frozen=True)
class LojCheck:
    holds: bool
    worst_ratio: float
    worst_point: np.ndarray
    n_skipped: int


@dataclass(frozen=True)
class DecayReport:
    tau: np.ndarray
    W_samples: np.ndarray
    bound_curve: np.ndarray
    lam: float
    arclength_partials: np.ndarray
    violation_max: float
    alpha: float
    epsilon: float
    k2_grad: float
    k2_decay: float
    k_plus: float
    loj_constant: float
    monotone: bool


@dataclass(frozen=True)
class ArclengthCertificate:
    finite: bool
    head_bound: float
    tail_bound: float
    total_bound: float
    tail_bound_infinite: float
    total_bound_infinite: float
    measured_total: float
    measured_tail: float
    tau_split: float
    weighted_integral: float
    weight_factor: float


# -- bundled potentials ------------------------------------------------------


def quadratic_potential():
    """W = |x|^2; the flow is a straight-line exponential contraction."""

    def W(x):
        x = np.asarray(x, float)
        return float(x @ x)

    def grad(x):
        return 2.0 * np.asarray(x, float)

    return W, grad


def quartic_potential():
    """W = |x|^4; degenerate minimum with exact exponent alpha = 3/2."""

    def W(x):
        x = np.asarray(x, float)
        return float((x @ x) ** 2)

    def grad(x):
        x = np.asarray(x, float)
        return 4.0 * float(x @ x) * x

    return W, grad


def flat_potential():
    """W = exp(-1/|x|^2), W(0) = 0; fails the inequality for every alpha < 2."""

    def W(x):
        x = np.asarray(x, float)
        rsq = float(x @ x)
        return float(np.exp(-1.0 / rsq)) if rsq > 0 else 0.0

    def grad(x):
        x = np.asarray(x, float)
        rsq = float(x @ x)
        if rsq == 0:
            return np.zeros_like(x)
        return (2.0 * np.exp(-1.0 / rsq) / rsq**2) * x

    return W, grad


def orthogonal_perturbation(grad_W, strength: float):
    """gamma(x) = strength * rotate90(grad W(x)); 2-D only, |gamma| = strength |grad W|."""

    def gamma(x):
        g = np.asarray(grad_W(np.asarray(x, float)), dtype=float)
        if g.size != 2:
            raise DomainError("the rotating perturbation is two-dimensional")
        return strength * np.array([-g[1], g[0]])

    return gamma


def ball_cloud(dim: int, radius: float, count: int = 512, seed: int = 0, r_min: float = 0.0):
    """Deterministic low-discrepancy cloud in an annulus r_min <= |x| <= radius."""
    sampler = qmc.Halton(d=dim, scramble=True, seed=seed)
    pts = []
    while len(pts) < count:
        batch = radius * (2.0 * sampler.random(128) - 1.0)
        for row in batch:
            rr = np.linalg.norm(row)
            if r_min <= rr <= radius:
                pts.append(row)
                if len(pts) == count:
                    break
    return np.array(pts)


# -- checks -------------------------------------------------------------------


def check_lojasiewicz(flow: ModelFlow, points, alpha: float | None = None) -> LojCheck:
    """Worst sampled ratio |grad^ W|^2 / |W|^alpha over a point cloud.

    holds when the minimum ratio is >= 1 (the normalized inequality).
    Points where W underflows to exactly zero carry no information about
    the exponent and are skipped (counted in n_skipped).
    """
    alpha = flow.alpha if alpha is None else float(alpha)
    worst = np.inf
    worst_x = None
    skipped = 0
    for x in np.atleast_2d(np.asarray(points, float)):
        w = abs(flow.W(x))
        denom = w**alpha
        # w itself or w^alpha can underflow to an exact zero near a flat
        # minimum; either way the sample says nothing about the exponent.
        if denom == 0.0:
            skipped += 1
            continue
        ratio = flow.hat_grad_norm_sq(x) / denom
        if ratio < worst:
            worst, worst_x = ratio, x.copy()
    if worst_x is None:
        raise DomainError("no usable sample points (W vanished everywhere)")
    return LojCheck(holds=bool(worst >= 1.0), worst_ratio=float(worst), worst_point=worst_x, n_skipped=skipped)


def _verify_gamma_bound(flow: ModelFlow, points):
    if flow.gamma is None:
        return 0.0
    worst = 0.0
    for x in np.atleast_2d(np.asarray(points, float)):
        gn = flow.hat_norm(x, flow.hat_grad(x))
        if gn == 0.0:
            continue
        worst = max(worst, flow.hat_norm(x, np.asarray(flow.gamma(x), float)) / gn)
    if worst > flow.c * (1.0 + 1e-9) + 1e-15:
        raise DomainError(
            f"perturbation exceeds its contract: sampled |gamma|/|grad^ W| = {worst:.6g} > c = {flow.c}"
        )
    return worst


# -- the flow -----------------------------------------------------------------


def run_model_flow(
    flow: ModelFlow,
    x0,
    tau_max: float,
    mode: str = "explicit-c",
    region_points=None,
    rtol: float = 1e-11,
    atol: float = 1e-13,
    n_samples: int = 1001,
) -> DecayReport:
    """Integrate the flow from x0 and check the decay bound pointwise.

    The gradient inequality and the perturbation contract are certified on
    region_points first (default: a Halton cloud spanning 1.05 |x0|, plus
    x0 itself).  mode "explicit-c" folds the certified constant into the
    bound; mode "normalized" requires the constant to be >= 1 and uses
    k2 = k - c as is.
    """
    x0 = np.asarray(x0, dtype=float)
    if region_points is None:
        radius = 1.05 * float(np.linalg.norm(x0))
        region_points = ball_cloud(x0.size, radius, count=512, seed=0, r_min=5e-3 * radius)
        region_points = np.vstack([region_points, x0])

    _verify_gamma_bound(flow, region_points)
    loj = check_lojasiewicz(flow, region_points)
    if mode == "normalized":
        if not loj.holds:
            raise DomainError(
                f"normalized mode needs the inequality with constant 1; sampled constant {loj.worst_ratio:.6g}"
            )
        C_used = 1.0
    elif mode == "explicit-c":
        C_used = loj.worst_ratio
    else:
        raise DomainError(f"unknown mode {mode!r}")

    k, c, alpha = flow.k_const, flow.c, flow.alpha
    k2_grad = k - c
    k2_decay = (k - c) * C_used
    W0 = float(flow.W(x0))
    if W0 <= 0:
        raise DomainError("x0 must start at positive potential")
    lam = k2_decay * (alpha - 1.0) * W0 ** (alpha - 1.0)
    epsilon = (1.0 / (alpha - 1.0) - 1.0) / 2.0

    dim = x0.size

    def rhs(_t, y):
        x = y[:dim]
        v = flow.velocity(x)
        return np.concatenate([v, [flow.hat_norm(x, v)]])

    sol = solve_ivp(
        rhs,
        (0.0, tau_max),
        np.concatenate([x0, [0.0]]),
        method="DOP853",
        rtol=rtol,
        atol=atol,
        t_eval=np.linspace(0.0, tau_max, n_samples),
    )
    if sol.status != 0:
        raise IntegrationError(f"model flow solve failed: {sol.message}")

    tau = sol.t
    W_samples = np.array([flow.W(sol.y[:dim, i]) for i in range(tau.size)])
    arclength = sol.y[dim, :].copy()
    bound = W0 / (1.0 + lam * tau) ** (1.0 / (alpha - 1.0))
    violation = float(np.max(W_samples - bound))
    monotone = bool(np.all(np.diff(W_samples) <= 1e-12 * max(W0, 1.0)))

    return DecayReport(
        tau=tau,
        W_samples=W_samples,
        bound_curve=bound,
        lam=float(lam),
        arclength_partials=arclength,
        violation_max=violation,
        alpha=alpha,
        epsilon=float(epsilon),
        k2_grad=float(k2_grad),
        k2_decay=float(k2_decay),
        k_plus=float(k + c),
        loj_constant=float(loj.worst_ratio),
        monotone=monotone,
    )


def arclength_certificate(report: DecayReport, tau_split: float = 1.0) -> ArclengthCertificate:
    """Cauchy-Schwarz arclength bound from the decay data alone.

    Head piece on [0, tau_split] by plain Cauchy-Schwarz against -W'; tail
    piece with the weight tau^{1+eps}, its integral evaluated through the
    integration-by-parts form boundary terms + (1+eps) int W tau^eps.  The
    infinite-horizon numbers extend the tail with the decay bound.  Raises
    for eps <= 0, where the weight trick carries no information.
    """
    eps = report.epsilon
    if eps <= 0:
        raise DomainError("certificate needs alpha < 2 (positive epsilon)")
    tau, W = report.tau, report.W_samples
    if tau[-1] <= tau_split:
        raise DomainError("trajectory too short for the requested split")
    k2, kp = report.k2_grad, report.k_plus
    W_split = float(np.interp(tau_split, tau, W))
    W_end = float(W[-1])
    T = float(tau[-1])

    head = kp * np.sqrt(max(report.W_samples[0] - W_split, 0.0) / k2) * np.sqrt(tau_split)

    mask = tau >= tau_split
    tt = np.concatenate([[tau_split], tau[mask]])
    ww = np.concatenate([[W_split], W[mask]])
    weighted = float(np.trapezoid(ww * tt**eps, tt))
    ibp = W_split * tau_split ** (1.0 + eps) - W_end * T ** (1.0 + eps) + (1.0 + eps) * weighted
    ibp = max(ibp, 0.0)
    weight_factor = (tau_split ** (-eps) - T ** (-eps)) / eps
    tail = kp * np.sqrt(ibp / k2) * np.sqrt(max(weight_factor, 0.0))

    # infinite-horizon extension through the decay bound W <= W0/(lam tau)^{1+2 eps}
    W0, lam = float(report.W_samples[0]), report.lam
    if lam > 0:
        ext = (1.0 + eps) * W0 * lam ** (-(1.0 + 2.0 * eps)) * T ** (-eps) / eps
    else:
        ext = np.inf
    ibp_inf = ibp + W_end * T ** (1.0 + eps) + ext
    weight_inf = tau_split ** (-eps) / eps
    tail_inf = kp * np.sqrt(ibp_inf / k2) * np.sqrt(weight_inf)

    L = report.arclength_partials
    measured_total = float(L[-1])
    measured_tail = measured_total - float(np.interp(tau_split, tau, L))

    return ArclengthCertificate(
        finite=bool(np.isfinite(tail_inf)),
        head_bound=float(head),
        tail_bound=float(tail),
        total_bound=float(head + tail),
        tail_bound_infinite=float(tail_inf),
        total_bound_infinite=float(head + tail_inf),
        measured_total=measured_total,
        measured_tail=measured_tail,
        tau_split=float(tau_split),
        weighted_integral=float(ibp),
        weight_factor=float(weight_factor),
    )
