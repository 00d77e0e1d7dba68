"""Shape chart, Fubini-Study metric, and the scaling/rotation/shape split.

Everything here assumes mass-orthonormalized complex coordinates (see
``masses``), where the machinery is mass-free: a reduced configuration
z in C^{n-1} away from the last coordinate's zero set is written

    z = r e^{i theta} (s, 1) / |(s, 1)|

with size r > 0, rotation angle theta, and shape coordinate s in C^{n-2}.
The induced metric on shapes is the Fubini-Study form; its quadratic form,
matrix, directional derivatives and the zero-angular-momentum spin rate
live in :class:`FSMetric` and the functions below.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .errors import ChartDomainError
from .masses import deinterleave, hermitian_to_real, interleave

__all__ = [
    "ShapePoint",
    "ShapeVelocity",
    "SaariSplit",
    "FSMetric",
    "to_chart",
    "from_chart",
    "velocity_to_chart",
    "velocity_from_chart",
    "radial_form",
    "symplectic_form",
    "chart_norm_sq",
    "fs_norm_sq",
    "fs_matrix",
    "spin_rate",
    "spin_rate_bound",
    "angular_momentum",
    "saari_decompose",
]


@dataclass(frozen=True)
class ShapePoint:
    """Chart coordinates (r, theta, s); theta is a plain real, never wrapped."""

    r: float
    theta: float
    s: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "s", np.asarray(self.s, dtype=complex))
        if not (self.r > 0):
            raise ChartDomainError("chart radius must be positive")


@dataclass(frozen=True)
class ShapeVelocity:
    """Chart velocity (rdot, thetadot, sdot)."""

    rho: float
    theta_dot: float
    omega: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "omega", np.asarray(self.omega, dtype=complex))


@dataclass(frozen=True)
class SaariSplit:
    """Velocity decomposition into scaling, rotation, and pure shape parts."""

    scaling: np.ndarray
    rotation: np.ndarray
    pure_shape: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return self.scaling + self.rotation + self.pure_shape


def chart_norm_sq(s) -> float:
    """|(s, 1)|^2 = 1 + |s|^2."""
    s = np.asarray(s, dtype=complex)
    return 1.0 + float(np.vdot(s, s).real)


def _pairing(s, omega) -> complex:
    # Hermitian pairing <<(s,1), (omega,0)>> in orthonormal coordinates.
    return complex(np.vdot(np.asarray(s, dtype=complex), np.asarray(omega, dtype=complex)))


def radial_form(s, omega) -> float:
    """Real part of <<(s,1),(omega,0)>>: the size-change pairing."""
    return _pairing(s, omega).real


def symplectic_form(s, omega) -> float:
    """Imaginary part of <<(s,1),(omega,0)>>: the rotational pairing."""
    return _pairing(s, omega).imag


def to_chart(z) -> ShapePoint:
    """Chart coordinates of a reduced configuration.

    Raises ChartDomainError when the last coordinate vanishes (the chart
    does not cover that set).  theta is the principal argument of the last
    coordinate; continuous unwrapping along trajectories is the caller's
    (or the integrator's) job.
    """
    z = np.asarray(z, dtype=complex)
    last = z[-1]
    if last == 0:
        raise ChartDomainError("last coordinate vanishes; configuration is outside the chart")
    r = float(np.sqrt(np.vdot(z, z).real))
    theta = float(np.arctan2(last.imag, last.real))
    return ShapePoint(r=r, theta=theta, s=z[:-1] / last)


def from_chart(point: ShapePoint) -> np.ndarray:
    """Reduced configuration of chart coordinates."""
    u = np.append(point.s, 1.0)
    u /= np.sqrt(np.vdot(u, u).real)
    return point.r * np.exp(1j * point.theta) * u


def velocity_to_chart(z, zeta) -> ShapeVelocity:
    """Chart velocity of (z, zdot).

    rho is the radial speed, theta_dot the frame rotation rate, omega the
    shape velocity; the identity theta_dot = J/r^2 - Omega/|(s,1)|^2 holds
    by construction.
    """
    z = np.asarray(z, dtype=complex)
    zeta = np.asarray(zeta, dtype=complex)
    last = z[-1]
    if last == 0:
        raise ChartDomainError("last coordinate vanishes; configuration is outside the chart")
    r = float(np.sqrt(np.vdot(z, z).real))
    rho = float(np.vdot(z, zeta).real) / r
    theta_dot = float((zeta[-1] / last).imag)
    omega = zeta[:-1] / last - z[:-1] * zeta[-1] / last**2
    return ShapeVelocity(rho=rho, theta_dot=theta_dot, omega=omega)


def velocity_from_chart(point: ShapePoint, vel: ShapeVelocity) -> np.ndarray:
    """Reduced velocity of chart data: inverse of :func:`velocity_to_chart`."""
    z = from_chart(point)
    nsq = chart_norm_sq(point.s)
    radial = vel.rho / point.r - radial_form(point.s, vel.omega) / nsq
    lifted = np.append(vel.omega, 0.0)
    return (radial + 1j * vel.theta_dot) * z + (
        point.r * np.exp(1j * point.theta) / np.sqrt(nsq)
    ) * lifted


def fs_norm_sq(s, omega) -> float:
    """Squared Fubini-Study norm of a shape velocity.

    (|(s,1)|^2 |(omega,0)|^2 - |<<(s,1),(omega,0)>>|^2) / |(s,1)|^4,
    evaluated directly from the pairing (the matrix route lives in
    :class:`FSMetric`; the two agree to roundoff and are tested as such).
    """
    s = np.asarray(s, dtype=complex)
    omega = np.asarray(omega, dtype=complex)
    nsq = chart_norm_sq(s)
    wsq = float(np.vdot(omega, omega).real)
    pair = _pairing(s, omega)
    val = wsq / nsq - (pair.real**2 + pair.imag**2) / nsq**2
    return max(val, 0.0)


class FSMetric:
    """Fubini-Study metric at a fixed shape, as a real quadratic form.

    The matrix acts on interleaved real shape velocities.  A Cholesky
    factorization is cached for the inverse-metric solves that the reduced
    and blown-up vector fields need; directional derivatives of the matrix
    supply the covariant-derivative terms.
    """

    def __init__(self, s):
        self.s = np.asarray(s, dtype=complex)
        self.nsq = chart_norm_sq(self.s)
        k = self.s.size
        if k:
            h = np.eye(k) / self.nsq - np.outer(self.s, np.conj(self.s)) / self.nsq**2
            self.matrix = hermitian_to_real(h)
            self._cho = cho_factor(self.matrix)
        else:
            self.matrix = np.zeros((0, 0))
            self._cho = None

    def norm_sq(self, omega_x) -> float:
        """Quadratic form on an interleaved real shape velocity."""
        omega_x = np.asarray(omega_x, dtype=float)
        if omega_x.size == 0:
            return 0.0
        return float(omega_x @ (self.matrix @ omega_x))

    def solve(self, b) -> np.ndarray:
        """Inverse metric applied to an interleaved real covector."""
        b = np.asarray(b, dtype=float)
        if b.size == 0:
            return b
        return cho_solve(self._cho, b)

    def directional_derivative(self, delta) -> np.ndarray:
        """d/dt of the matrix along a complex shape direction delta."""
        delta = np.asarray(delta, dtype=complex)
        if delta.size == 0:
            return np.zeros((0, 0))
        s, nsq = self.s, self.nsq
        dn = 2.0 * float(np.vdot(s, delta).real)
        dh = (
            -dn * np.eye(s.size) / nsq**2
            - (np.outer(delta, np.conj(s)) + np.outer(s, np.conj(delta))) / nsq**2
            + 2.0 * dn * np.outer(s, np.conj(s)) / nsq**3
        )
        return hermitian_to_real(dh)

    def grad_norm_sq(self, omega_x) -> np.ndarray:
        """Gradient in s (omega held fixed) of the squared FS norm.

        Interleaved real layout.  Closed form from differentiating the
        pairing; cross-checked against the matrix directional derivatives
        in the test suite.
        """
        omega = deinterleave(np.asarray(omega_x, dtype=float))
        if omega.size == 0:
            return np.zeros(0)
        s, nsq = self.s, self.nsq
        wsq = float(np.vdot(omega, omega).real)
        pair = complex(np.vdot(s, omega))
        g = (
            -2.0 * wsq * s / nsq**2
            - 2.0 * np.conj(pair) * omega / nsq**2
            + 4.0 * abs(pair) ** 2 * s / nsq**3
        )
        return interleave(g)

    def spin_bound(self) -> float:
        """Best constant K(s) with |spin rate| <= K(s) * FS speed."""
        if self.s.size == 0:
            return 0.0
        u = interleave(1j * self.s)
        return float(np.sqrt(u @ self.solve(u))) / self.nsq


def fs_matrix(s) -> FSMetric:
    return FSMetric(s)


def spin_rate(s, omega) -> float:
    """Frame rotation rate enforced by zero angular momentum.

    theta_dot = -Omega(s, omega) / |(s,1)|^2; the horizontal lift of a
    shape curve integrates exactly this.
    """
    return -symplectic_form(s, omega) / chart_norm_sq(s)


def spin_rate_bound(s) -> float:
    """K(s) in |theta_dot| <= K(s) ||omega||_FS (zero angular momentum)."""
    return FSMetric(s).spin_bound()


def angular_momentum(z, zeta) -> float:
    """Total angular momentum Im <<z, zeta>> in orthonormal coordinates."""
    return float(np.vdot(np.asarray(z, dtype=complex), np.asarray(zeta, dtype=complex)).imag)


def saari_decompose(z, v) -> SaariSplit:
    """Split a velocity into scaling, rotation, and pure shape parts.

    scaling = (Re<<z,v>>/I) z, rotation = (Im<<z,v>>/I) (iz), pure shape the
    remainder; the three are orthogonal and the rotation part vanishes
    exactly when the angular momentum J(z, v) does.
    """
    z = np.asarray(z, dtype=complex)
    v = np.asarray(v, dtype=complex)
    inertia = float(np.vdot(z, z).real)
    if inertia == 0.0:
        raise ChartDomainError("cannot split velocities at the total collision point")
    pair = complex(np.vdot(z, v))
    scaling = (pair.real / inertia) * z
    rotation = (pair.imag / inertia) * (1j * z)
    return SaariSplit(scaling=scaling, rotation=rotation, pure_shape=v - scaling - rotation)
