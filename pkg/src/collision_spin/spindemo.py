"""Horizontal lifts of shape curves and the infinite-spin spiral.

A curve of shapes t -> s(t), traversed at zero angular momentum and unit
size, forces the rotating frame to turn at the spin rate
-Omega(s, sdot)/|(s,1)|^2.  Integrating that rate is the horizontal lift.
For the logarithmic spiral s1(t) = t^{-1/2} e^{i c t} the lift has the
closed form theta(t) = theta0 - c log((t+1)/(t0+1)): the shape converges
to a point while the frame angle diverges, the cautionary example that the
exponential-tail estimates rule out for orbits reaching a nondegenerate
central configuration.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp

from .chart import (
    ShapePoint,
    ShapeVelocity,
    angular_momentum,
    fs_norm_sq,
    from_chart,
    saari_decompose,
    spin_rate,
    symplectic_form,
    velocity_from_chart,
)
from .errors import DomainError, IntegrationError

__all__ = [
    "ShapeCurve",
    "LiftResult",
    "SpinCertificate",
    "spiral_curve",
    "horizontal_lift",
    "infinite_spin_certificate",
]

DEFAULT_SPIRAL_T0 = 1.0 + 1e-6


@dataclass(frozen=True)
class ShapeCurve:
    """Parametrized shape curve with its velocity.

    s and sdot map a time to a complex (n-2,) vector.  When a closed form
    for the lifted angle increment is known, theta_increment(t) returns
    theta(t) - theta(t_start) and the lift reports the comparison error.
    """

    s: Callable[[float], np.ndarray]
    sdot: Callable[[float], np.ndarray]
    t_start: float
    t_end: float
    description: str = ""
    theta_increment: Callable[[float], float] | None = None


@dataclass(frozen=True)
class LiftResult:
    t: np.ndarray
    theta: np.ndarray
    closed_form: np.ndarray | None
    max_abs_err: float
    diverged: bool
    J_residual: np.ndarray
    rotation_norm: np.ndarray
    shape_speed: np.ndarray  # Fubini-Study speed of the shape curve itself
    twist: np.ndarray  # Omega(s, sdot) samples, the comparison integrand
    twist_integral: np.ndarray  # cumulative integral of the twist, ODE-accurate
    theta0: float


# A curve's speed must have dropped by at least this factor from its peak
# before a large angle swing counts as divergence rather than plain motion.
SPEED_SETTLED_FACTOR = 5e-2


@dataclass(frozen=True)
class SpinCertificate:
    log_slope: float
    log_intercept: float
    fit_residual: float
    diverged: bool
    inequality_ok: bool
    inequality_margin: float
    final_shape_speed: float


def spiral_curve(
    c: float,
    t0: float = DEFAULT_SPIRAL_T0,
    t_end: float = 1e4,
    n_shape: int = 1,
) -> ShapeCurve:
    """The in-disc spiral s1(t) = t^{-1/2} e^{i c t}, other coordinates zero.

    Starts just past t = 1 so the whole curve lies in the unit disc; for
    c > 0 it winds counterclockwise while shrinking to the origin.
    """
    if t0 <= 1.0:
        raise DomainError("spiral must start at t0 > 1 to stay inside the unit disc")

    def s(t):
        out = np.zeros(n_shape, dtype=complex)
        out[0] = t**-0.5 * np.exp(1j * c * t)
        return out

    def sdot(t):
        out = np.zeros(n_shape, dtype=complex)
        out[0] = (-0.5 * t**-1.5 + 1j * c * t**-0.5) * np.exp(1j * c * t)
        return out

    def theta_increment(t):
        return -c * np.log((t + 1.0) / (t0 + 1.0))

    return ShapeCurve(
        s=s,
        sdot=sdot,
        t_start=t0,
        t_end=t_end,
        description=f"log spiral, angular speed {c}",
        theta_increment=theta_increment,
    )


def horizontal_lift(
    curve: ShapeCurve,
    theta0: float = 0.0,
    rtol: float = 1e-10,
    atol: float = 1e-12,
    n_samples: int = 2001,
    divergence_threshold: float | None = 2.0 * np.pi,
) -> LiftResult:
    """Quadrature of the spin rate along a shape curve.

    At every sample the lift is checked against first principles: the
    reconstructed configuration velocity must carry zero angular momentum
    and a vanishing rotational component in the scaling/rotation/shape
    split.  Size is pinned to r = 1; the checks are scale-free anyway.
    """

    def rhs(t, _y):
        s_t, sd_t = curve.s(t), curve.sdot(t)
        return [spin_rate(s_t, sd_t), symplectic_form(s_t, sd_t)]

    sol = solve_ivp(
        rhs,
        (curve.t_start, curve.t_end),
        [theta0, 0.0],
        method="DOP853",
        rtol=rtol,
        atol=atol,
        t_eval=np.linspace(curve.t_start, curve.t_end, n_samples),
        dense_output=False,
    )
    if sol.status != 0:
        raise IntegrationError(f"lift quadrature failed: {sol.message}")

    t = sol.t
    theta = sol.y[0]
    twist_integral = sol.y[1]
    N = t.size
    J = np.empty(N)
    rot = np.empty(N)
    speed = np.empty(N)
    twist = np.empty(N)
    for i in range(N):
        s_i = curve.s(t[i])
        sd_i = curve.sdot(t[i])
        point = ShapePoint(r=1.0, theta=float(theta[i]), s=s_i)
        vel = ShapeVelocity(rho=0.0, theta_dot=spin_rate(s_i, sd_i), omega=sd_i)
        z = from_chart(point)
        zeta = velocity_from_chart(point, vel)
        J[i] = angular_momentum(z, zeta)
        rot[i] = float(np.linalg.norm(saari_decompose(z, zeta).rotation))
        speed[i] = np.sqrt(max(fs_norm_sq(s_i, sd_i), 0.0))
        twist[i] = symplectic_form(s_i, sd_i)

    closed = None
    max_err = 0.0
    if curve.theta_increment is not None:
        closed = theta0 + np.array([curve.theta_increment(ti) for ti in t])
        max_err = float(np.max(np.abs(theta - closed)))

    diverged = False
    if divergence_threshold is not None:
        swing = float(np.max(np.abs(theta - theta0)))
        settled = speed[-1] < SPEED_SETTLED_FACTOR * max(np.max(speed), 1e-300)
        diverged = bool(swing > divergence_threshold and settled)

    return LiftResult(
        t=t,
        theta=theta,
        closed_form=closed,
        max_abs_err=max_err,
        diverged=diverged,
        J_residual=J,
        rotation_norm=rot,
        shape_speed=speed,
        twist=twist,
        twist_integral=twist_integral,
        theta0=theta0,
    )


def infinite_spin_certificate(result: LiftResult, threshold: float = 2.0 * np.pi) -> SpinCertificate:
    """Logarithmic-divergence diagnosis of a lifted angle.

    Fits theta against a + b log(t+1), checks the halved-twist inequality
    theta(t) - theta0 <= -(1/2) int Omega(s, sdot) using the ODE-accumulated
    twist integral, and flags divergence when the angle swings past the
    threshold while the shape curve's own FS speed has died away.
    """
    t, theta = result.t, result.theta
    basis = np.column_stack([np.ones_like(t), np.log(t + 1.0)])
    coef, *_ = np.linalg.lstsq(basis, theta, rcond=None)
    fit = basis @ coef
    fit_residual = float(np.max(np.abs(fit - theta)))

    margin = float(np.max((theta - result.theta0) + 0.5 * result.twist_integral))
    inequality_ok = bool(margin <= 1e-8)

    swing = float(np.max(np.abs(theta - result.theta0)))
    speed_end = float(result.shape_speed[-1])
    speed_peak = float(np.max(result.shape_speed)) if result.shape_speed.size else 0.0
    diverged = bool(swing > threshold and speed_end < SPEED_SETTLED_FACTOR * max(speed_peak, 1e-300))

    return SpinCertificate(
        log_slope=float(coef[1]),
        log_intercept=float(coef[0]),
        fit_residual=fit_residual,
        diverged=diverged,
        inequality_ok=inequality_ok,
        inequality_margin=margin,
        final_shape_speed=speed_end,
    )
