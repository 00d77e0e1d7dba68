"""Central configurations in the shape chart and collision restpoint spectra.

A central configuration is a critical point of the shape potential V; each
one spawns a pair of restpoints of the blown-up collision flow at radial
speed v0 = -sqrt(2 V).  The linearization of that flow at a restpoint
block-diagonalizes over the eigenvectors of the FS-Hessian of V, and each
eigenvalue c contributes the quadratic pair

    lambda_{+,-} = (-v0 +/- sqrt(v0^2 + 16 c)) / 4.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
from scipy.stats import qmc

from .chart import fs_matrix
from .errors import ChartDomainError, ConvergenceError, DomainError
from .masses import MassSystem, deinterleave, interleave

__all__ = [
    "CentralConfig",
    "Classification",
    "cc_residual_full",
    "restpoint_spectrum",
    "find_cc",
    "classify",
    "multistart_catalog",
    "chart_ball_seeds",
]

DEGENERACY_RTOL = 1e-8


@dataclass(frozen=True)
class CentralConfig:
    """A solved critical point of the shape potential."""

    s0: np.ndarray
    V0: float
    v0: float
    hessian_spectrum: np.ndarray  # eigenvalues of the FS-Hessian, ascending
    lambda_pairs: tuple  # ((lambda_plus, lambda_minus) per eigenvalue)
    degenerate: bool
    residual: float
    iterations: int = 0


@dataclass(frozen=True)
class Classification:
    nondegenerate: bool
    morse_index: int
    restpoint_eigenvalues: tuple
    stable_rates: tuple  # |Re lambda| over the stable part, ascending
    nonreal_all_unstable: bool
    lambda_plus_unstable: bool


def cc_residual_full(system: MassSystem, q, lam: float) -> np.ndarray:
    """Stacked central-configuration residual grad_i U(q) + lam m_i q_i.

    Positions are complex; the residual comes back interleaved real so its
    norm is the full-space defect.  Zero exactly at a central configuration
    with multiplier lam = U/I.
    """
    q = np.asarray(q, dtype=complex)
    m = system.masses
    idx = [(i, j) for i in range(system.n) for j in range(i + 1, system.n)]
    gq = np.zeros(system.n, dtype=complex)
    for i, j in idx:
        d = abs(q[i] - q[j])
        pull = m[i] * m[j] * (q[j] - q[i]) / d**3
        gq[i] += pull
        gq[j] -= pull
    return interleave(gq + lam * m * q)


def restpoint_spectrum(v0: float, c: float) -> tuple[complex, complex]:
    """Eigenvalue pair of the restpoint linearization for one Hessian mode.

    Roots of lambda^2 + (v0/2) lambda - c = 0; returned as (plus, minus)
    with the plus branch carrying the + square root.  Requires v0 < 0.
    """
    if not v0 < 0:
        raise DomainError("restpoint radial speed v0 must be negative")
    disc = v0 * v0 + 16.0 * c
    root = np.sqrt(complex(disc)) if disc < 0 else complex(np.sqrt(disc))
    lam_plus = (-v0 + root) / 4.0
    lam_minus = (-v0 - root) / 4.0
    return complex(lam_plus), complex(lam_minus)


def _solve_spectrum(system: MassSystem, x: np.ndarray):
    s = deinterleave(x)
    hess = system.hess_shape_potential(s)
    metric = fs_matrix(s)
    c = scipy.linalg.eigh(hess, metric.matrix, eigvals_only=True)
    return np.asarray(c), hess


def _build_cc(system: MassSystem, x: np.ndarray, residual: float, iterations: int) -> CentralConfig:
    s = deinterleave(x)
    V0 = system.shape_potential(s)
    v0 = -float(np.sqrt(2.0 * V0))
    c, _ = _solve_spectrum(system, x)
    pairs = tuple(restpoint_spectrum(v0, float(ci)) for ci in c)
    cmax = float(np.max(np.abs(c))) if c.size else 0.0
    degenerate = bool(c.size and np.min(np.abs(c)) < DEGENERACY_RTOL * max(cmax, 1.0))
    return CentralConfig(
        s0=s,
        V0=V0,
        v0=v0,
        hessian_spectrum=c,
        lambda_pairs=pairs,
        degenerate=degenerate,
        residual=float(residual),
        iterations=iterations,
    )


def find_cc(
    system: MassSystem,
    s_init,
    tol: float = 1e-12,
    max_iter: int = 200,
    ball_radius: float = 1e3,
) -> CentralConfig:
    """Damped Newton search for a critical point of the shape potential.

    Newton steps on grad V with Armijo backtracking against |grad V|^2;
    when the Hessian solve fails or the step stalls, falls back to descent
    along the inverse-FS-metric gradient.  Deterministic throughout.
    """
    x = interleave(np.asarray(s_init, dtype=complex))
    grad = system.grad_shape_potential
    g = grad(deinterleave(x))
    gnorm = float(np.linalg.norm(g))
    trace = [gnorm]

    for it in range(max_iter):
        if gnorm < tol:
            return _build_cc(system, x, gnorm, it)
        if float(np.linalg.norm(x)) > ball_radius:
            raise ChartDomainError("central-configuration search left the chart ball")

        s = deinterleave(x)
        step = None
        try:
            hess = system.hess_shape_potential(s)
            d = np.linalg.solve(hess, -g)
            if np.all(np.isfinite(d)):
                t = 1.0
                while t > 2.0**-40:
                    try:
                        g_new = grad(deinterleave(x + t * d))
                    except DomainError:
                        t *= 0.5
                        continue
                    if float(np.linalg.norm(g_new)) <= (1.0 - 1e-4 * t) * gnorm:
                        step = (x + t * d, g_new)
                        break
                    t *= 0.5
        except np.linalg.LinAlgError:
            pass

        if step is None:
            # descent on V along the inverse-metric gradient
            metric = fs_matrix(s)
            d = -metric.solve(g)
            V_here = system.shape_potential(s)
            t = 1.0 / max(1.0, float(np.linalg.norm(d)))
            while t > 2.0**-40:
                try:
                    x_new = x + t * d
                    if system.shape_potential(deinterleave(x_new)) < V_here:
                        step = (x_new, grad(deinterleave(x_new)))
                        break
                except DomainError:
                    pass
                t *= 0.5
        if step is None:
            raise ConvergenceError(
                f"no acceptable step at iteration {it} (|grad V| = {gnorm:.3e})", trace
            )
        x, g = step
        gnorm = float(np.linalg.norm(g))
        trace.append(gnorm)

    raise ConvergenceError(
        f"no convergence after {max_iter} iterations (|grad V| = {gnorm:.3e})", trace
    )


def classify(cc: CentralConfig, tol_degenerate: float = DEGENERACY_RTOL) -> Classification:
    """Morse data and restpoint stability bookkeeping for a solved point."""
    c = np.asarray(cc.hessian_spectrum, dtype=float)
    cmax = float(np.max(np.abs(c))) if c.size else 0.0
    scale = tol_degenerate * max(cmax, 1.0)
    morse_index = int(np.sum(c < -scale))
    nondegenerate = bool(not c.size or np.min(np.abs(c)) >= scale)

    eigs = [complex(cc.v0)]
    for lp, lm in cc.lambda_pairs:
        eigs.extend([lp, lm])
    nonreal_ok = all(e.real > 0 for e in eigs if abs(e.imag) > 0)
    plus_ok = all(lp.real > 0 for lp, _ in cc.lambda_pairs)
    stable = sorted(abs(e.real) for e in eigs if e.real < 0)
    return Classification(
        nondegenerate=nondegenerate,
        morse_index=morse_index,
        restpoint_eigenvalues=tuple(eigs),
        stable_rates=tuple(stable),
        nonreal_all_unstable=bool(nonreal_ok),
        lambda_plus_unstable=bool(plus_ok),
    )


def chart_ball_seeds(dim: int, count: int, seed: int, radius: float = 3.0) -> np.ndarray:
    """Deterministic low-discrepancy points in the ball |x| <= radius."""
    sampler = qmc.Halton(d=dim, scramble=True, seed=seed)
    points = []
    while len(points) < count:
        batch = radius * (2.0 * sampler.random(64) - 1.0)
        for row in batch:
            if np.linalg.norm(row) <= radius:
                points.append(row)
                if len(points) == count:
                    break
    return np.array(points)


def multistart_catalog(
    system: MassSystem,
    n_seeds: int = 64,
    seed: int = 0,
    radius: float = 3.0,
    tol: float = 1e-12,
    dedupe_tol: float = 1e-6,
    max_workers: int = 1,
) -> list[CentralConfig]:
    """Solve from a deterministic seed cloud and dedupe the results.

    Seeds that fail to converge or leave the chart are skipped.  Output is
    sorted by potential value then chart position, so identical inputs give
    identical catalogs regardless of worker count.
    """
    dim = 2 * (system.n - 2)
    if dim == 0:
        return []
    seeds = chart_ball_seeds(dim, n_seeds, seed, radius)

    def solve(row):
        try:
            return find_cc(system, deinterleave(row), tol=tol)
        except (DomainError, ConvergenceError, np.linalg.LinAlgError):
            return None

    if max_workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            results = list(pool.map(solve, seeds))
    else:
        results = [solve(row) for row in seeds]

    unique: list[CentralConfig] = []
    for cc in results:
        if cc is None:
            continue
        if any(np.linalg.norm(cc.s0 - other.s0) < dedupe_tol for other in unique):
            continue
        unique.append(cc)
    unique.sort(key=lambda cc: (cc.V0, tuple(interleave(cc.s0))))
    return unique
