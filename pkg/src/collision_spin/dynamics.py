"""Reduced n-body dynamics and the total-collision blow-up.

Two vector fields, one chart.  The reduced field evolves (r, rho, s, omega)
in physical time at zero angular momentum; the blown-up field evolves
(r, v, s, w) with v = sqrt(r) rho, w = r^{3/2} omega in the rescaled time
d tau = r^{-3/2} dt, which makes {r = 0} an invariant manifold carrying
restpoints over each central configuration.  Both fields drag the frame
angle theta and the Fubini-Study arclength L along as extra quadratures,
so spin and arclength come out of the same adaptive solve as the orbit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .central import CentralConfig, classify
from .chart import (
    chart_norm_sq,
    fs_matrix,
    fs_norm_sq,
    spin_rate,
    spin_rate_bound,
    to_chart,
    velocity_to_chart,
)
from .errors import DomainError, IntegrationError
from .masses import MassSystem, deinterleave, interleave

__all__ = [
    "ReducedState",
    "BlownUpState",
    "CaptureSpec",
    "IntegrationControls",
    "TrajectoryRecord",
    "SpinArclengthReport",
    "reduced_vector_field",
    "blownup_vector_field",
    "covariant_shape_residual",
    "covariant_blowup_residual",
    "reduced_energy",
    "blowup_energy_residual",
    "integrate",
    "spin_and_arclength",
    "integrate_unreduced",
    "UnreducedRecord",
]


@dataclass(frozen=True)
class ReducedState:
    """Chart state (r, rho, s, omega) in physical time; also used for its
    own derivative, where the fields hold (rdot, rhodot, sdot, omegadot)."""

    r: float
    rho: float
    s: np.ndarray
    omega: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "s", np.asarray(self.s, dtype=complex))
        object.__setattr__(self, "omega", np.asarray(self.omega, dtype=complex))


@dataclass(frozen=True)
class BlownUpState:
    """Blown-up state (r, v, s, w); r = 0 is the collision manifold."""

    r: float
    v: float
    s: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "s", np.asarray(self.s, dtype=complex))
        object.__setattr__(self, "w", np.asarray(self.w, dtype=complex))


@dataclass(frozen=True)
class CaptureSpec:
    """Stop (or just mark) when an orbit settles onto a restpoint.

    The capture metric is |w|_FS + |grad V(s)| + |v - v0| with v0 taken from
    the target central configuration.
    """

    target: CentralConfig
    tol: float = 1e-10
    stop: bool = True
    extrapolate: bool = True


@dataclass(frozen=True)
class IntegrationControls:
    rtol: float = 1e-11
    atol: float = 1e-13
    method: str = "DOP853"
    n_samples: int = 2001
    s_max: float = 1e3
    collision_tol: float = 1e-8
    max_step: float = np.inf


# -- vector fields ---------------------------------------------------------


def _shape_force(system: MassSystem, s):
    """Common per-step geometry: metric, potential, gradient."""
    metric = fs_matrix(s)
    V = system.shape_potential(s)
    g = system.grad_shape_potential(s)
    return metric, V, g


def _blowup_rhs(system: MassSystem, r, v, x, wx):
    s = deinterleave(x)
    w = deinterleave(wx)
    metric, V, g = _shape_force(system, s)
    F = metric.norm_sq(wx)
    dA_w = metric.directional_derivative(w)
    dr = v * r
    dv = 0.5 * v * v + F - V
    dwx = metric.solve(g + 0.5 * metric.grad_norm_sq(wx) - dA_w @ wx) - 0.5 * v * wx
    dtheta = spin_rate(s, w)
    dL = np.sqrt(max(F, 0.0))
    return dr, dv, wx.copy(), dwx, dtheta, dL


def _reduced_rhs(system: MassSystem, r, rho, x, ox):
    s = deinterleave(x)
    omega = deinterleave(ox)
    metric, V, g = _shape_force(system, s)
    F = metric.norm_sq(ox)
    dA_o = metric.directional_derivative(omega)
    dr = rho
    drho = r * F - V / r**2
    dox = metric.solve(g / r**3 + 0.5 * metric.grad_norm_sq(ox) - dA_o @ ox) - 2.0 * rho * ox / r
    dtheta = spin_rate(s, omega)
    dL = np.sqrt(max(F, 0.0))
    return dr, drho, ox.copy(), dox, dtheta, dL


def reduced_vector_field(system: MassSystem, state: ReducedState) -> ReducedState:
    """Time derivative of a reduced chart state (zero angular momentum)."""
    if not state.r > 0:
        raise DomainError("reduced equations need r > 0; use the blown-up field at collision")
    dr, drho, dox_s, dox, _, _ = _reduced_rhs(
        system, state.r, state.rho, interleave(state.s), interleave(state.omega)
    )
    return ReducedState(r=dr, rho=drho, s=state.omega.copy(), omega=deinterleave(dox))


def blownup_vector_field(system: MassSystem, state: BlownUpState) -> BlownUpState:
    """Rescaled-time derivative of a blown-up state."""
    dr, dv, _, dwx, _, _ = _blowup_rhs(
        system, state.r, state.v, interleave(state.s), interleave(state.w)
    )
    return BlownUpState(r=dr, v=dv, s=state.w.copy(), w=deinterleave(dwx))


def covariant_shape_residual(system: MassSystem, state: ReducedState) -> float:
    """Defect of the covariant form of the shape equation at a reduced state.

    Substitutes the expanded field into
    D_t omega + 2 (rho/r) omega - (1/r^3) grad~ V, where D_t omega adds the
    metric's Christoffel terms back onto omegadot.  Zero up to roundoff.
    """
    deriv = reduced_vector_field(system, state)
    ox = interleave(state.omega)
    metric = fs_matrix(state.s)
    christoffel = -0.5 * metric.grad_norm_sq(ox) + metric.directional_derivative(state.omega) @ ox
    cov = interleave(deriv.omega) + metric.solve(christoffel)
    target = metric.solve(system.grad_shape_potential(state.s)) / state.r**3 - 2.0 * (
        state.rho / state.r
    ) * ox
    return float(np.linalg.norm(cov - target))


def covariant_blowup_residual(system: MassSystem, state: BlownUpState) -> float:
    """Defect of the covariant form D_tau w = grad~ V - (v/2) w."""
    deriv = blownup_vector_field(system, state)
    wx = interleave(state.w)
    metric = fs_matrix(state.s)
    christoffel = -0.5 * metric.grad_norm_sq(wx) + metric.directional_derivative(state.w) @ wx
    cov = interleave(deriv.w) + metric.solve(christoffel)
    target = metric.solve(system.grad_shape_potential(state.s)) - 0.5 * state.v * wx
    return float(np.linalg.norm(cov - target))


def reduced_energy(system: MassSystem, state: ReducedState) -> float:
    """Conserved energy rho^2/2 + r^2 F/2 - V/r of the reduced equations."""
    F = fs_norm_sq(state.s, state.omega)
    return 0.5 * state.rho**2 + 0.5 * state.r**2 * F - system.shape_potential(state.s) / state.r


def blowup_energy_residual(system: MassSystem, state: BlownUpState, h: float) -> float:
    """Defect of the rescaled energy relation v^2/2 + F/2 - V = r h."""
    F = fs_norm_sq(state.s, state.w)
    return 0.5 * state.v**2 + 0.5 * F - system.shape_potential(state.s) - state.r * h


# -- trajectory records ------------------------------------------------------


@dataclass
class TrajectoryRecord:
    """Sampled trajectory with spin angle, arclength, and energy defect."""

    kind: str  # "blownup" or "reduced"
    tau: np.ndarray
    r: np.ndarray
    v: np.ndarray  # rho for reduced runs
    s: np.ndarray  # (N, n-2) complex
    w: np.ndarray  # omega for reduced runs
    theta: np.ndarray
    arclength: np.ndarray
    energy_residual: np.ndarray
    h: float
    status: str
    capture_tau: float | None = None
    tail_theta_bound: float | None = None
    tail_arclength_bound: float | None = None
    extrapolated_from: float | None = None

    @property
    def energy_drift(self) -> float:
        return float(np.max(np.abs(self.energy_residual))) if self.tau.size else 0.0

    def columns(self) -> list[str]:
        time_name = "tau" if self.kind == "blownup" else "t"
        speed_name = "v" if self.kind == "blownup" else "rho"
        shape_name = "w" if self.kind == "blownup" else "omega"
        cols = [time_name, "r", speed_name]
        k = self.s.shape[1] if self.s.ndim == 2 else 0
        for j in range(k):
            cols += [f"s{j + 1}_re", f"s{j + 1}_im"]
        for j in range(k):
            cols += [f"{shape_name}{j + 1}_re", f"{shape_name}{j + 1}_im"]
        cols += ["theta", "arclength", "energy_residual"]
        return cols

    def rows(self) -> np.ndarray:
        k = self.s.shape[1] if self.s.ndim == 2 else 0
        parts = [self.tau, self.r, self.v]
        for j in range(k):
            parts += [self.s[:, j].real, self.s[:, j].imag]
        for j in range(k):
            parts += [self.w[:, j].real, self.w[:, j].imag]
        parts += [self.theta, self.arclength, self.energy_residual]
        return np.column_stack(parts) if self.tau.size else np.empty((0, len(self.columns())))

    def final_state(self):
        i = -1
        if self.kind == "blownup":
            return BlownUpState(r=self.r[i], v=self.v[i], s=self.s[i], w=self.w[i])
        return ReducedState(r=self.r[i], rho=self.v[i], s=self.s[i], omega=self.w[i])


def _capture_metric(system: MassSystem, v, s, wx, v0):
    g = system.grad_shape_potential(s)
    F = fs_matrix(s).norm_sq(wx)
    return np.sqrt(max(F, 0.0)) + float(np.linalg.norm(g)) + abs(v - v0)


def integrate(
    system: MassSystem,
    initial,
    tau_max: float,
    controls: IntegrationControls | None = None,
    h: float | None = None,
    theta0: float = 0.0,
    capture: CaptureSpec | None = None,
) -> TrajectoryRecord:
    """Integrate a blown-up or reduced state with spin/arclength quadratures.

    For blown-up initial data with r > 0 the energy parameter h is inferred
    from the state unless given; on the collision manifold every h labels
    the same flow and 0 is used.  Termination: end of the requested span, a
    capture event (if capture.stop), leaving the chart ball, or approaching
    a collision shape.
    """
    controls = controls or IntegrationControls()
    blowup = isinstance(initial, BlownUpState)
    k = initial.s.size
    x0 = interleave(initial.s)
    wx0 = interleave(initial.w if blowup else initial.omega)

    if blowup:
        F0 = fs_norm_sq(initial.s, initial.w)
        energy0 = 0.5 * initial.v**2 + 0.5 * F0 - system.shape_potential(initial.s)
        if h is None:
            h = energy0 / initial.r if initial.r > 0 else 0.0
        y0 = np.concatenate(([initial.r, initial.v], x0, wx0, [theta0, 0.0]))

        def rhs(_t, y):
            dr, dv, dx, dwx, dth, dL = _blowup_rhs(system, y[0], y[1], y[2 : 2 + k * 2], y[2 + 2 * k : 2 + 4 * k])
            return np.concatenate(([dr, dv], dx, dwx, [dth, dL]))

    else:
        if not initial.r > 0:
            raise DomainError("reduced integration needs r > 0")
        st = ReducedState(r=initial.r, rho=initial.rho, s=initial.s, omega=initial.omega)
        h = reduced_energy(system, st) if h is None else h
        y0 = np.concatenate(([initial.r, initial.rho], x0, wx0, [theta0, 0.0]))

        def rhs(_t, y):
            dr, drho, dx, dox, dth, dL = _reduced_rhs(system, y[0], y[1], y[2 : 2 + 2 * k], y[2 + 2 * k : 2 + 4 * k])
            return np.concatenate(([dr, drho], dx, dox, [dth, dL]))

    events = []

    def chart_exit(_t, y):
        return controls.s_max - float(np.linalg.norm(y[2 : 2 + 2 * k]))

    chart_exit.terminal = True
    chart_exit.direction = -1
    events.append(("chart-exit", chart_exit))

    def collision(_t, y):
        s = deinterleave(y[2 : 2 + 2 * k])
        u = np.append(s, 1.0)
        q = system.positions(u)
        n = q.size
        dmin = min(abs(q[i] - q[j]) for i in range(n) for j in range(i + 1, n))
        return dmin / np.sqrt(chart_norm_sq(s)) - controls.collision_tol

    collision.terminal = True
    collision.direction = -1
    events.append(("collision", collision))

    if capture is not None and blowup:
        v0 = capture.target.v0

        def captured(_t, y):
            s = deinterleave(y[2 : 2 + 2 * k])
            return _capture_metric(system, y[1], s, y[2 + 2 * k : 2 + 4 * k], v0) - capture.tol

        captured.terminal = bool(capture.stop)
        captured.direction = -1
        events.append(("captured", captured))

    t_eval = np.linspace(0.0, tau_max, controls.n_samples)
    sol = solve_ivp(
        rhs,
        (0.0, tau_max),
        y0,
        method=controls.method,
        rtol=controls.rtol,
        atol=controls.atol,
        t_eval=t_eval,
        events=[ev for _, ev in events],
        max_step=controls.max_step,
    )
    if sol.status == -1:
        raise IntegrationError(f"solver failed: {sol.message}")

    names = [name for name, _ in events]
    status = "completed"
    capture_tau = None
    ts, ys = sol.t, sol.y
    if sol.status == 1:
        for name, times, states in zip(names, sol.t_events, sol.y_events):
            if times.size and (name != "captured" or capture.stop):
                status = name if name != "captured" else "captured"
                if ts.size == 0 or times[0] > ts[-1] + 1e-15:
                    ts = np.append(ts, times[0])
                    ys = np.column_stack([ys, states[0]]) if ys.size else states[0][:, None]
    if capture is not None and blowup:
        cap_times = sol.t_events[names.index("captured")]
        if cap_times.size:
            capture_tau = float(cap_times[0])

    N = ts.size
    r_arr = ys[0, :].copy()
    v_arr = ys[1, :].copy()
    s_arr = np.empty((N, k), dtype=complex)
    w_arr = np.empty((N, k), dtype=complex)
    for i in range(N):
        s_arr[i] = deinterleave(ys[2 : 2 + 2 * k, i])
        w_arr[i] = deinterleave(ys[2 + 2 * k : 2 + 4 * k, i])
    theta_arr = ys[-2, :].copy()
    L_arr = ys[-1, :].copy()
    s_at_stop = s_arr[-1] if N else None
    w_at_stop = w_arr[-1] if N else None

    # Past a terminal capture the true orbit is shadowed by the invariant
    # frozen-shape subsystem r' = vr, v' = v^2/2 - V(s_c), whose solution is
    # closed-form; extending with it reaches tau_max without asking the
    # integrator to track an exponentially unstable restpoint forever.
    extrapolated_from = None
    if (
        blowup
        and status == "captured"
        and capture is not None
        and capture.extrapolate
        and N
        and ts[-1] < tau_max - 1e-12
    ):
        tau_c = float(ts[-1])
        r_c, v_c = float(r_arr[-1]), float(v_arr[-1])
        s_c, th_c, L_c = s_arr[-1].copy(), float(theta_arr[-1]), float(L_arr[-1])
        V_c = system.shape_potential(s_c)
        v0e = -float(np.sqrt(2.0 * V_c))
        kappa = (v_c - v0e) / (v_c + v0e)
        tail = t_eval[t_eval > tau_c + 1e-12]
        if tail.size:
            decay = np.exp(v0e * (tail - tau_c))
            u = kappa * decay
            ts = np.concatenate([ts, tail])
            r_arr = np.concatenate([r_arr, r_c * decay * ((1.0 - kappa) / (1.0 - u)) ** 2])
            v_arr = np.concatenate([v_arr, v0e * (1.0 + u) / (1.0 - u)])
            s_arr = np.vstack([s_arr, np.tile(s_c, (tail.size, 1))])
            w_arr = np.vstack([w_arr, np.zeros((tail.size, k), dtype=complex)])
            theta_arr = np.concatenate([theta_arr, np.full(tail.size, th_c)])
            L_arr = np.concatenate([L_arr, np.full(tail.size, L_c)])
            N = ts.size
            extrapolated_from = tau_c

    resid = np.empty(N)
    for i in range(N):
        if blowup:
            F = fs_norm_sq(s_arr[i], w_arr[i])
            resid[i] = 0.5 * v_arr[i] ** 2 + 0.5 * F - system.shape_potential(s_arr[i]) - r_arr[i] * h
        else:
            F = fs_norm_sq(s_arr[i], w_arr[i])
            resid[i] = (
                0.5 * v_arr[i] ** 2
                + 0.5 * r_arr[i] ** 2 * F
                - system.shape_potential(s_arr[i]) / r_arr[i]
                - h
            )

    record = TrajectoryRecord(
        kind="blownup" if blowup else "reduced",
        tau=ts,
        r=r_arr,
        v=v_arr,
        s=s_arr,
        w=w_arr,
        theta=theta_arr,
        arclength=L_arr,
        energy_residual=resid,
        h=float(h),
        status=status,
        capture_tau=capture_tau,
        extrapolated_from=extrapolated_from,
    )

    if capture is not None and capture_tau is not None and s_at_stop is not None:
        rate = min(classify(capture.target).stable_rates, default=0.0)
        if rate > 0:
            speed_end = np.sqrt(max(fs_norm_sq(s_at_stop, w_at_stop), 0.0))
            record.tail_theta_bound = spin_rate_bound(s_at_stop) * speed_end / rate
            record.tail_arclength_bound = speed_end / rate
    return record


# -- spin / arclength reporting ----------------------------------------------


@dataclass(frozen=True)
class SpinArclengthReport:
    theta_final: float
    arclength_final: float
    theta_converged: bool
    theta_tail_variation: float
    arclength_converged: bool
    arclength_tail: float
    bound_satisfied: bool
    bound_margin: float
    k_max: float
    tail_rate: float | None = None


def spin_and_arclength(
    record: TrajectoryRecord,
    tol: float = 1e-6,
    fit_window: tuple[float, float] | None = None,
) -> SpinArclengthReport:
    """Convergence report for the spin angle and shape arclength.

    theta is declared convergent when the per-point bound constant times the
    remaining arclength drops below tol and the actual tail variation agrees;
    the subinterval inequality |dtheta| <= max-K * dL is checked on every
    sampling interval.  With fit_window=(a, b), the FS speed is log-fit over
    tau in [a, b] and the decay rate returned.
    """
    N = record.tau.size
    speeds = np.array([np.sqrt(max(fs_norm_sq(record.s[i], record.w[i]), 0.0)) for i in range(N)])
    K = np.array([spin_rate_bound(record.s[i]) for i in range(N)])
    k_max = float(np.max(K)) if N else 0.0
    L = record.arclength
    theta = record.theta

    remaining = k_max * (L[-1] - L)
    certified = np.nonzero(remaining < tol)[0]
    if certified.size and certified[0] < N - 1:
        i0 = int(certified[0])
        theta_tail_variation = float(np.ptp(theta[i0:]))
        theta_converged = theta_tail_variation <= tol
    else:
        i0 = int(0.75 * (N - 1))
        theta_tail_variation = float(np.ptp(theta[i0:]))
        theta_converged = False

    arc_tail = float(L[-1] - L[int(0.75 * (N - 1))])
    arclength_converged = arc_tail < tol

    dtheta = np.abs(np.diff(theta))
    dL = np.diff(L)
    k_pair = np.maximum(K[:-1], K[1:])
    margin = dtheta - (k_pair * dL * (1.0 + 1e-6) + 1e-12)
    bound_margin = float(np.max(margin)) if margin.size else 0.0
    bound_satisfied = bool(bound_margin <= 0.0)

    tail_rate = None
    if fit_window is not None:
        a, b = fit_window
        mask = (record.tau >= a) & (record.tau <= b) & (speeds > 0)
        if int(mask.sum()) >= 5:
            slope = np.polyfit(record.tau[mask], np.log(speeds[mask]), 1)[0]
            tail_rate = float(-slope)

    return SpinArclengthReport(
        theta_final=float(theta[-1]) if N else 0.0,
        arclength_final=float(L[-1]) if N else 0.0,
        theta_converged=bool(theta_converged),
        theta_tail_variation=theta_tail_variation,
        arclength_converged=bool(arclength_converged),
        arclength_tail=arc_tail,
        bound_satisfied=bound_satisfied,
        bound_margin=bound_margin,
        k_max=k_max,
        tail_rate=tail_rate,
    )


# -- unreduced oracle ----------------------------------------------------------


@dataclass
class UnreducedRecord:
    """Plain Newton-equation trajectory in orthonormalized coordinates."""

    t: np.ndarray
    z: np.ndarray  # (N, n-1) complex
    zeta: np.ndarray
    angular_momentum: np.ndarray
    energy: np.ndarray

    def chart_series(self) -> dict:
        """Chart coordinates along the trajectory, theta unwrapped."""
        N = self.t.size
        r = np.empty(N)
        theta = np.empty(N)
        s = np.empty((N, self.z.shape[1] - 1), dtype=complex)
        rho = np.empty(N)
        theta_dot = np.empty(N)
        omega = np.empty_like(s)
        for i in range(N):
            p = to_chart(self.z[i])
            vel = velocity_to_chart(self.z[i], self.zeta[i])
            r[i], theta[i], s[i] = p.r, p.theta, p.s
            rho[i], theta_dot[i], omega[i] = vel.rho, vel.theta_dot, vel.omega
        theta = np.unwrap(theta)
        return {
            "r": r,
            "theta": theta,
            "s": s,
            "rho": rho,
            "theta_dot": theta_dot,
            "omega": omega,
        }


def integrate_unreduced(
    system: MassSystem,
    z0,
    zeta0,
    t_max: float,
    rtol: float = 1e-12,
    atol: float = 1e-14,
    n_samples: int = 1001,
) -> UnreducedRecord:
    """Integrate zddot = grad U(z) directly; the oracle for the reduced route."""
    z0 = np.asarray(z0, dtype=complex)
    zeta0 = np.asarray(zeta0, dtype=complex)
    m = z0.size

    def rhs(_t, y):
        z = deinterleave(y[: 2 * m])
        return np.concatenate([y[2 * m :], interleave(system.grad_potential(z))])

    y0 = np.concatenate([interleave(z0), interleave(zeta0)])
    sol = solve_ivp(
        rhs,
        (0.0, t_max),
        y0,
        method="DOP853",
        rtol=rtol,
        atol=atol,
        t_eval=np.linspace(0.0, t_max, n_samples),
    )
    if sol.status != 0:
        raise IntegrationError(f"unreduced solve failed: {sol.message}")

    N = sol.t.size
    z = np.empty((N, m), dtype=complex)
    zeta = np.empty((N, m), dtype=complex)
    J = np.empty(N)
    E = np.empty(N)
    for i in range(N):
        z[i] = deinterleave(sol.y[: 2 * m, i])
        zeta[i] = deinterleave(sol.y[2 * m :, i])
        J[i] = float(np.vdot(z[i], zeta[i]).imag)
        E[i] = system.total_energy(z[i], zeta[i])
    return UnreducedRecord(t=sol.t, z=z, zeta=zeta, angular_momentum=J, energy=E)
