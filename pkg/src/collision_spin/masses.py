"""Mass metric and potential for the translation-reduced planar n-body problem.

Planar positions are complex numbers.  Fixing the center of mass at the
origin leaves n-1 complex degrees of freedom; we use relative coordinates
(each body against the last one) and then change basis once and for all so
that the Hermitian mass metric becomes the standard inner product.  Every
other module works in these mass-orthonormalized coordinates, where the
moment of inertia is plainly ``|z|^2`` and angular momentum is
``Im(conj(z) . zdot)``.
"""

from __future__ import annotations

import json

import numpy as np

from .errors import CollisionError

__all__ = [
    "MassSystem",
    "interleave",
    "deinterleave",
    "hermitian_to_real",
    "COLLISION_GUARD",
]

# Pair separations below COLLISION_GUARD times the configuration scale are
# treated as collisions (domain error) rather than fed to 1/r.
COLLISION_GUARD = 1e-13


def interleave(v) -> np.ndarray:
    """Complex vector -> real vector (re0, im0, re1, im1, ...)."""
    v = np.asarray(v, dtype=complex)
    out = np.empty(2 * v.size)
    out[0::2] = v.real
    out[1::2] = v.imag
    return out


def deinterleave(x) -> np.ndarray:
    """Inverse of :func:`interleave`."""
    x = np.asarray(x, dtype=float)
    return x[0::2] + 1j * x[1::2]


def hermitian_to_real(h) -> np.ndarray:
    """Real symmetric matrix of the quadratic form x -> conj(v)^T h v.

    ``h`` is Hermitian on C^k; the result acts on the interleaved real
    layout of v and satisfies x^T A x = conj(v)^T h v exactly.
    """
    h = np.asarray(h, dtype=complex)
    k = h.shape[0]
    a = np.empty((2 * k, 2 * k))
    a[0::2, 0::2] = h.real
    a[1::2, 1::2] = h.real
    a[0::2, 1::2] = -h.imag
    a[1::2, 0::2] = h.imag
    return a


def _pair_distances(q: np.ndarray):
    """All pairwise separations of complex positions, with index pairs."""
    n = q.size
    idx = [(i, j) for i in range(n) for j in range(i + 1, n)]
    d = np.array([abs(q[i] - q[j]) for i, j in idx])
    return idx, d


class MassSystem:
    """Masses plus the reduction / orthonormalization machinery.

    Attributes
    ----------
    masses : (n,) positive floats.
    P : (n, n-1) real matrix mapping relative coordinates to centered
        positions, acting on complex vectors componentwise.
    M : (n-1, n-1) real symmetric positive definite mass matrix
        P^T diag(m) P.  Viewed on complex vectors it is the Hermitian mass
        form; its interleaved realification is ``M_real``.
    C : (n-1, n-1) change of basis from orthonormalized to relative
        coordinates (inverse transpose of the Cholesky factor of M).
    Phi : P @ C, mapping orthonormalized coordinates straight to positions.
    """

    def __init__(self, masses):
        m = np.atleast_1d(np.asarray(masses, dtype=float))
        if m.ndim != 1 or m.size < 2:
            raise ValueError("need at least two masses")
        if not np.all(np.isfinite(m)) or np.any(m <= 0):
            raise ValueError("masses must be finite and positive")
        self.masses = m
        self.n = m.size
        mtot = m.sum()

        n = self.n
        P = np.zeros((n, n - 1))
        P[: n - 1, :] = np.eye(n - 1)
        P -= np.tile(m[: n - 1] / mtot, (n, 1))
        self.P = P
        self.M = P.T @ (m[:, None] * P)
        L = np.linalg.cholesky(self.M)
        self._L = L
        # y = C z with the metric standard in z; C = L^{-T}
        self.C = np.linalg.inv(L).T
        self.Phi = P @ self.C
        self._Phi_real = np.kron(self.Phi, np.eye(2))

    # -- construction -----------------------------------------------------

    @classmethod
    def from_json(cls, doc) -> "MassSystem":
        """Build from a JSON document (or dict) of the form {"masses": [..]}."""
        if isinstance(doc, (str, bytes)):
            doc = json.loads(doc)
        if not isinstance(doc, dict) or "masses" not in doc:
            raise ValueError('expected a JSON object with a "masses" key')
        return cls(doc["masses"])

    @property
    def M_real(self) -> np.ndarray:
        return np.kron(self.M, np.eye(2))

    # -- coordinates -------------------------------------------------------

    def positions(self, z) -> np.ndarray:
        """Centered complex positions of all n bodies."""
        return self.Phi @ np.asarray(z, dtype=complex)

    def reduce(self, q) -> np.ndarray:
        """Orthonormalized coordinates of a (not necessarily centered) configuration."""
        q = np.asarray(q, dtype=complex)
        y = q[:-1] - q[-1]
        return self._L.T @ y

    # -- metric ------------------------------------------------------------

    def hermitian_mass(self, v, w) -> complex:
        """Hermitian mass product of two reduced configurations.

        Computed through the mass matrix on relative coordinates, so the
        orthonormalization itself is exercised; algebraically this equals
        sum(conj(v) * w).
        """
        yv = self.C @ np.asarray(v, dtype=complex)
        yw = self.C @ np.asarray(w, dtype=complex)
        return complex(np.conj(yv) @ (self.M @ yw))

    def mass_product_relative(self, yv, yw) -> complex:
        """Hermitian mass product in raw relative coordinates."""
        return complex(np.conj(np.asarray(yv, dtype=complex)) @ (self.M @ np.asarray(yw, dtype=complex)))

    def moment_of_inertia(self, z) -> float:
        z = np.asarray(z, dtype=complex)
        return float(np.vdot(z, z).real)

    # -- potential ---------------------------------------------------------

    def _guarded_positions(self, z):
        z = np.asarray(z, dtype=complex)
        q = self.positions(z)
        idx, d = _pair_distances(q)
        scale = float(np.sqrt(np.vdot(z, z).real))
        k = int(np.argmin(d))
        if d[k] < COLLISION_GUARD * scale or (scale > 0 and d[k] == 0.0):
            raise CollisionError(idx[k], d[k], scale)
        if scale == 0.0:
            raise CollisionError(idx[k], 0.0, 0.0)
        return q, idx, d

    def potential(self, z) -> float:
        """Newtonian potential sum m_i m_j / r_ij, positive by convention."""
        q, idx, d = self._guarded_positions(z)
        m = self.masses
        return float(sum(m[i] * m[j] / d[k] for k, (i, j) in enumerate(idx)))

    def grad_potential(self, z) -> np.ndarray:
        """Gradient of the potential in orthonormalized coordinates.

        Real gradient with respect to the interleaved real coordinates,
        packaged as a complex vector: d U = Re(conj(grad) . dz).
        """
        q, idx, d = self._guarded_positions(z)
        m = self.masses
        gq = np.zeros(self.n, dtype=complex)
        for k, (i, j) in enumerate(idx):
            pull = m[i] * m[j] * (q[j] - q[i]) / d[k] ** 3
            gq[i] += pull
            gq[j] -= pull
        return self.Phi.T @ gq

    def hess_potential_real(self, z) -> np.ndarray:
        """Hessian of the potential, interleaved real layout, (2n-2)^2."""
        q, idx, d = self._guarded_positions(z)
        m = self.masses
        n = self.n
        hq = np.zeros((2 * n, 2 * n))
        for k, (i, j) in enumerate(idx):
            dv = np.array([(q[i] - q[j]).real, (q[i] - q[j]).imag])
            r = d[k]
            block = m[i] * m[j] * (3.0 * np.outer(dv, dv) / r**2 - np.eye(2)) / r**3
            si, sj = 2 * i, 2 * j
            hq[si : si + 2, si : si + 2] += block
            hq[sj : sj + 2, sj : sj + 2] += block
            hq[si : si + 2, sj : sj + 2] -= block
            hq[sj : sj + 2, si : si + 2] -= block
        return self._Phi_real.T @ hq @ self._Phi_real

    def total_energy(self, z, zeta) -> float:
        """Kinetic minus potential in orthonormalized coordinates."""
        zeta = np.asarray(zeta, dtype=complex)
        return 0.5 * float(np.vdot(zeta, zeta).real) - self.potential(z)

    # -- shape potential ---------------------------------------------------

    def _lifted(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=complex)
        return np.append(s, 1.0)

    def shape_potential(self, s) -> float:
        """Potential of the chart section, |(s,1)| * U((s,1)).

        Scale-free: equals r * U at any configuration with shape s.
        """
        u = self._lifted(s)
        return float(np.sqrt(np.vdot(u, u).real)) * self.potential(u)

    def grad_shape_potential(self, s) -> np.ndarray:
        """Euclidean gradient of the shape potential, interleaved real layout."""
        u = self._lifted(s)
        norm = float(np.sqrt(np.vdot(u, u).real))
        uval = self.potential(u)
        gz = interleave(self.grad_potential(u))[: 2 * (self.n - 2)]
        x = interleave(np.asarray(s, dtype=complex))
        return uval * x / norm + norm * gz

    def hess_shape_potential(self, s) -> np.ndarray:
        """Analytic Hessian of the shape potential, interleaved real layout."""
        u = self._lifted(s)
        k = 2 * (self.n - 2)
        norm = float(np.sqrt(np.vdot(u, u).real))
        uval = self.potential(u)
        gu = interleave(self.grad_potential(u))[:k]
        hu = self.hess_potential_real(u)[:k, :k]
        x = interleave(np.asarray(s, dtype=complex))
        gn = x / norm
        hn = np.eye(k) / norm - np.outer(x, x) / norm**3
        h = np.outer(gn, gu) + np.outer(gu, gn) + uval * hn + norm * hu
        return 0.5 * (h + h.T)
