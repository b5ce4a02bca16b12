"""Independent brute-force oracles used to freeze expected test values.

Everything here is implemented with plain loops and naive finite
differences, deliberately sharing no code with the package under test.
"""

import numpy as np


def fd_metric_derivatives(g_fn, p, h=1e-6):
    """First derivatives of the metric by plain central differences."""
    n = len(p)
    dg = np.zeros((n, n, n))
    for i in range(n):
        up, dn = p.copy(), p.copy()
        up[i] += h
        dn[i] -= h
        dg[i] = (np.asarray(g_fn(up)) - np.asarray(g_fn(dn))) / (2 * h)
    return dg


def christoffel_loops(g_fn, p, h=1e-6):
    """Levi-Civita connection from the textbook formula, all loops."""
    n = len(p)
    g = np.asarray(g_fn(p), dtype=float)
    g_inv = np.linalg.inv(g)
    dg = fd_metric_derivatives(g_fn, p, h)
    gamma = np.zeros((n, n, n))
    for l in range(n):
        for i in range(n):
            for k in range(n):
                s = 0.0
                for m in range(n):
                    s += g_inv[l, m] * (dg[i, m, k] + dg[k, m, i] - dg[m, i, k])
                gamma[l, i, k] = 0.5 * s
    return gamma


def riemann_mixed_loops(gamma_fn, p, h=1e-5):
    """Mixed curvature from finite differences of a Christoffel supplier.

    Index layout matches the package: ``out[l, k, i, j]`` multiplies
    ``partial_l`` in ``R(partial_i, partial_j) partial_k``.
    """
    n = len(p)
    gamma = gamma_fn(p)
    dgamma = np.zeros((n, n, n, n))
    for j in range(n):
        up, dn = p.copy(), p.copy()
        up[j] += h
        dn[j] -= h
        dgamma[j] = (gamma_fn(up) - gamma_fn(dn)) / (2 * h)
    out = np.zeros((n, n, n, n))
    for l in range(n):
        for k in range(n):
            for i in range(n):
                for j in range(n):
                    val = dgamma[i, l, j, k] - dgamma[j, l, i, k]
                    for hh in range(n):
                        val += (gamma[hh, j, k] * gamma[l, i, hh]
                                - gamma[hh, i, k] * gamma[l, j, hh])
                    out[l, k, i, j] = val
    return out


def lower_loops(g, mixed):
    n = g.shape[0]
    lowered = np.zeros((n, n, n, n))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    for m in range(n):
                        lowered[i, j, k, l] += g[i, m] * mixed[m, j, k, l]
    return lowered


def ricci_loops(g_inv, lowered):
    n = g_inv.shape[0]
    ric = np.zeros((n, n))
    for i in range(n):
        for k in range(n):
            for hh in range(n):
                for j in range(n):
                    ric[i, k] += g_inv[hh, j] * lowered[hh, i, j, k]
    return ric


def kretschmann_loops(g_inv, lowered):
    n = g_inv.shape[0]
    total = 0.0
    rng4 = range(n)
    for i in rng4:
        for j in rng4:
            for k in rng4:
                for l in rng4:
                    raised = 0.0
                    for a in rng4:
                        for b in rng4:
                            for c in rng4:
                                for d in rng4:
                                    raised += (g_inv[i, a] * g_inv[j, b]
                                               * g_inv[k, c] * g_inv[l, d]
                                               * lowered[a, b, c, d])
                    total += lowered[i, j, k, l] * raised
    return total


def svp_residual_loops(mixed, g, w, x, y, z, signs, sigma):
    """Componentwise residual of the full stationarity system, all loops."""
    n = len(w)

    def action(a, b, c):
        out = np.zeros(n)
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    for l in range(n):
                        out[i] += mixed[i, j, k, l] * a[j] * b[k] * c[l]
        return out

    parts = [action(x, y, z) - sigma * w,
             action(w, z, y) - sigma * x,
             action(z, w, x) - sigma * y,
             action(y, x, w) - sigma * z]
    cons = [float(v @ g @ v) - s
            for v, s in zip((w, x, y, z), signs)]
    return np.concatenate(parts + [np.array(cons)])
