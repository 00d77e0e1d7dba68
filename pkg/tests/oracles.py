"""Independent reference computations for the test suite.

Everything here works directly on position-space data with its own loops,
no imports from the package under test, so agreement is evidence rather
than tautology.
"""

import numpy as np


def center_of_mass(masses, q):
    m = np.asarray(masses, float)
    q = np.asarray(q, complex)
    return (m * q).sum() / m.sum()


def potential_positions(masses, q):
    """U = sum over pairs of m_i m_j / |q_i - q_j|."""
    m = np.asarray(masses, float)
    q = np.asarray(q, complex)
    total = 0.0
    for i in range(len(m)):
        for j in range(i + 1, len(m)):
            total += m[i] * m[j] / abs(q[i] - q[j])
    return total


def grad_potential_positions(masses, q):
    """Complex representation of the position-space gradient of U."""
    m = np.asarray(masses, float)
    q = np.asarray(q, complex)
    g = np.zeros(len(m), dtype=complex)
    for i in range(len(m)):
        for j in range(len(m)):
            if i == j:
                continue
            d = q[j] - q[i]
            g[i] += m[i] * m[j] * d / abs(d) ** 3
    return g


def moment_positions(masses, q):
    """Moment of inertia about the center of mass."""
    m = np.asarray(masses, float)
    q = np.asarray(q, complex)
    c = center_of_mass(m, q)
    return float((m * np.abs(q - c) ** 2).sum())


def angular_momentum_positions(masses, q, qdot):
    m = np.asarray(masses, float)
    q = np.asarray(q, complex)
    qdot = np.asarray(qdot, complex)
    c = center_of_mass(m, q)
    cdot = (m * qdot).sum() / m.sum()
    return float(np.sum(m * np.imag(np.conj(q - c) * (qdot - cdot))))


def energy_positions(masses, q, qdot):
    m = np.asarray(masses, float)
    qdot = np.asarray(qdot, complex)
    c = center_of_mass(m, q)
    cdot = (m * qdot).sum() / m.sum()
    kinetic = 0.5 * float((m * np.abs(qdot - cdot) ** 2).sum())
    return kinetic - potential_positions(m, q)


def shape_potential_positions(masses, q):
    """V = U at the configuration rescaled to unit moment of inertia."""
    return potential_positions(masses, q) * np.sqrt(moment_positions(masses, q))


def golden_min(f, a, b, tol=1e-12):
    """Golden-section minimizer, returns (x_min, f_min)."""
    phi = (np.sqrt(5.0) - 1.0) / 2.0
    c = b - phi * (b - a)
    d = a + phi * (b - a)
    fc, fd = f(c), f(d)
    while abs(b - a) > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - phi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + phi * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(np.array(x) if np.ndim(x) else x)


def collinear_shape_value(masses, u):
    """Shape potential of three collinear bodies at 0, u, 1."""
    q = np.array([0.0, u, 1.0], dtype=complex)
    return shape_potential_positions(masses, q)


def fd_gradient(f, x, h=1e-6):
    x = np.asarray(x, float)
    g = np.zeros_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        g[i] = (f(x + e) - f(x - e)) / (2.0 * h)
    return g


def fd_hessian(f, x, h=1e-4):
    x = np.asarray(x, float)
    n = x.size
    H = np.zeros((n, n))
    for i in range(n):
        ei = np.zeros(n)
        ei[i] = h
        for j in range(n):
            ej = np.zeros(n)
            ej[j] = h
            H[i, j] = (f(x + ei + ej) - f(x + ei - ej) - f(x - ei + ej) + f(x - ei - ej)) / (4.0 * h * h)
    return 0.5 * (H + H.T)
