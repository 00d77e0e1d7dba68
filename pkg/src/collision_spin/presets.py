"""Ready-made initial data for the benchmark orbits.

Each preset bundles a mass system, a blown-up initial state, the central
configuration it aims at, and the bookkeeping the CLI and tests need to
reproduce the headline checks with one command.  All presets use three
equal unit masses; the shape chart then has a single complex coordinate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .central import CentralConfig, classify, find_cc, restpoint_spectrum
from .chart import fs_matrix, fs_norm_sq, to_chart
from .dynamics import BlownUpState, CaptureSpec
from .errors import DomainError
from .masses import MassSystem, deinterleave

__all__ = [
    "OrbitPreset",
    "SpiralPreset",
    "PRESETS",
    "PRESET_INFO",
    "load_preset",
    "preset_catalog",
    "lagrange_homothetic",
    "euler_homothetic",
    "near_homothetic_perturbed",
    "spiral_demo",
]


@dataclass(frozen=True)
class OrbitPreset:
    name: str
    description: str
    system: MassSystem
    state: BlownUpState
    h: float
    tau_max: float
    cc: CentralConfig
    capture: CaptureSpec
    fit_window: tuple[float, float] | None = None
    notes: dict = field(default_factory=dict)


@dataclass(frozen=True)
class SpiralPreset:
    """Parameters of the infinite-spin shape curve (a curve, not an orbit)."""

    name: str
    description: str
    c: float = 1.0
    t_max: float = 1e4
    tol: float = 1e-6


def _equal_masses() -> MassSystem:
    return MassSystem([1.0, 1.0, 1.0])


def equilateral_shape_seed(system: MassSystem) -> np.ndarray:
    """Chart coordinates of the unit-side equilateral triangle."""
    q = np.array([0.0 + 0.0j, 1.0 + 0.0j, np.exp(1j * np.pi / 3.0)])
    return to_chart(system.reduce(q)).s


def collinear_shape_seed(system: MassSystem) -> np.ndarray:
    """Chart coordinates of an evenly spaced line of bodies."""
    q = np.array([-1.0 + 0.0j, 0.0 + 0.0j, 1.0 + 0.0j])
    return to_chart(system.reduce(q)).s


def _homothetic(system, cc, name, description, h, r0, tau_max, capture_tol) -> OrbitPreset:
    # Energy fixes the initial radial speed: v^2/2 = V0 + r0 h at w = 0.
    vsq = 2.0 * (cc.V0 + r0 * h)
    if vsq <= 0.0:
        raise DomainError(
            f"no homothetic collapse from r0={r0} at h={h}: V0 + r0*h = {cc.V0 + r0 * h:.6g} <= 0"
        )
    state = BlownUpState(r=r0, v=-float(np.sqrt(vsq)), s=cc.s0, w=np.zeros_like(cc.s0))
    return OrbitPreset(
        name=name,
        description=description,
        system=system,
        state=state,
        h=h,
        tau_max=tau_max,
        cc=cc,
        capture=CaptureSpec(target=cc, tol=capture_tol, stop=True),
        notes={"v0": cc.v0, "r0": r0},
    )


def lagrange_homothetic(h: float = -1.0, r0: float = 1.0, tau_max: float = 50.0) -> OrbitPreset:
    system = _equal_masses()
    cc = find_cc(system, equilateral_shape_seed(system))
    # The equilateral restpoint has unstable shape modes (lambda_plus ~ 2.82),
    # so rounding noise grows like exp(2.82 tau) and the capture metric
    # bottoms out near 4e-8 around tau = 7; 1e-7 is the tightest reliable
    # capture threshold in double precision.
    return _homothetic(
        system,
        cc,
        "lagrange-homothetic",
        "equilateral homothetic total-collision orbit, equal masses",
        h,
        r0,
        tau_max,
        capture_tol=1e-7,
    )


def euler_homothetic(h: float = -1.0, r0: float = 1.0, tau_max: float = 50.0) -> OrbitPreset:
    system = _equal_masses()
    cc = find_cc(system, collinear_shape_seed(system))
    # Collinear shapes are preserved exactly in floating point (symmetric
    # pulls cancel to zero imaginary part), so this orbit reaches the
    # restpoint to machine precision and tolerates a tight capture.
    return _homothetic(
        system,
        cc,
        "euler-homothetic",
        "collinear homothetic total-collision orbit, equal masses",
        h,
        r0,
        tau_max,
        capture_tol=1e-10,
    )


def near_homothetic_perturbed(epsilon: float = 1e-6, tau_fraction: float = 0.9) -> OrbitPreset:
    """Stable-manifold orbit on the collision manifold near the Lagrange point.

    Starts at r = 0 displaced along the slowest stable eigenvector, with the
    shape velocity matched to the linearized mode (w = lambda_minus * ds) so
    the orbit rides the slow direction.  v is solved from the r = 0 energy
    relation, making the initial defect zero to rounding.

    The unstable direction is excited only at second order in epsilon, so
    the linear description holds until roughly
    tau* = log(1/epsilon)/(|lambda_minus| + lambda_plus); the run stops at
    tau_fraction of that, and the rate-fit window sits inside the clean
    stretch after the fast transient has died.
    """
    if not 0.0 < epsilon < 1e-2:
        raise DomainError("perturbation size must sit in (0, 1e-2)")
    system = _equal_masses()
    cc = find_cc(system, equilateral_shape_seed(system))
    cls = classify(cc)
    if not cls.nondegenerate:
        raise DomainError("perturbed preset needs a nondegenerate target")

    hess = system.hess_shape_potential(cc.s0)
    metric = fs_matrix(cc.s0)
    c, vecs = scipy.linalg.eigh(hess, metric.matrix)
    i = int(np.argmin(c))
    if c[i] <= 0.0:
        raise DomainError("slow-mode construction expects a local minimum of the shape potential")
    e = vecs[:, i]
    j = int(np.argmax(np.abs(e)))
    if e[j] < 0.0:
        e = -e
    lam_plus, lam_minus = restpoint_spectrum(cc.v0, float(c[i]))

    ds = deinterleave(e)
    s = cc.s0 + epsilon * ds
    w = epsilon * lam_minus.real * ds
    vsq = 2.0 * system.shape_potential(s) - fs_norm_sq(s, w)
    if vsq <= 0.0:
        raise DomainError("perturbation too large: collision-manifold energy relation has no root")
    state = BlownUpState(r=0.0, v=-float(np.sqrt(vsq)), s=s, w=w)

    rate_slow = abs(lam_minus.real)
    tau_star = np.log(1.0 / epsilon) / (rate_slow + lam_plus.real)
    tau_max = tau_fraction * tau_star
    fit_window = (0.2 * tau_max, 0.78 * tau_max)

    return OrbitPreset(
        name="near-homothetic-perturbed",
        description="slow stable-manifold orbit into the Lagrange restpoint at r = 0",
        system=system,
        state=state,
        h=0.0,
        tau_max=float(tau_max),
        cc=cc,
        capture=CaptureSpec(target=cc, tol=1e-8, stop=False),
        fit_window=fit_window,
        notes={
            "epsilon": epsilon,
            "c_slow": float(c[i]),
            "lambda_plus": lam_plus.real,
            "lambda_minus": lam_minus.real,
            "expected_rate": rate_slow,
            "tau_star": float(tau_star),
        },
    )


def spiral_demo(c: float = 1.0, t_max: float = 1e4, tol: float = 1e-6) -> SpiralPreset:
    return SpiralPreset(
        name="spiral-demo",
        description="horizontal lift of the shrinking log spiral; theta diverges like -c log t",
        c=c,
        t_max=t_max,
        tol=tol,
    )


PRESETS = {
    "lagrange-homothetic": lagrange_homothetic,
    "euler-homothetic": euler_homothetic,
    "near-homothetic-perturbed": near_homothetic_perturbed,
    "spiral-demo": spiral_demo,
}

PRESET_INFO = {
    "lagrange-homothetic": (
        "equilateral homothetic total-collision orbit, equal masses",
        "collision-spin integrate --preset lagrange-homothetic --tau-max 50 --output lagrange.csv",
    ),
    "euler-homothetic": (
        "collinear homothetic total-collision orbit, equal masses",
        "collision-spin integrate --preset euler-homothetic --tau-max 50 --output euler.csv",
    ),
    "near-homothetic-perturbed": (
        "slow stable-manifold orbit into the Lagrange restpoint at r = 0",
        "collision-spin integrate --preset near-homothetic-perturbed --output perturbed.csv",
    ),
    "spiral-demo": (
        "horizontal lift of the shrinking log spiral; theta diverges like -c log t",
        "collision-spin spin-demo --c 1 --t-max 10000 --output spiral.csv",
    ),
}


def load_preset(name: str, **overrides):
    try:
        factory = PRESETS[name]
    except KeyError:
        raise DomainError(f"unknown preset {name!r}; available: {', '.join(sorted(PRESETS))}") from None
    return factory(**overrides)


def preset_catalog() -> list[dict]:
    return [
        {"name": name, "description": desc, "command": cmd}
        for name, (desc, cmd) in sorted(PRESET_INFO.items())
    ]
