"""Reference computations that share no code with the package."""

import numpy as np


def kron_by_definition(a, b):
    a, b = np.asarray(a, float), np.asarray(b, float)
    m, n = a.shape
    p, q = b.shape
    out = np.zeros((m * p, n * q))
    for i in range(m):
        for j in range(n):
            for r in range(p):
                for s in range(q):
                    out[i * p + r, j * q + s] = a[i, j] * b[r, s]
    return out


def penrose_residuals(a, p):
    """Frobenius norms of the four Penrose conditions."""
    ap, pa = a @ p, p @ a
    return (
        np.linalg.norm(a @ p @ a - a),
        np.linalg.norm(p @ a @ p - p),
        np.linalg.norm(ap.T - ap),
        np.linalg.norm(pa.T - pa),
    )


def log_scales_lstsq(a):
    """Row/column scales from least squares on log|a_ij| over the nonzeros.

    The normal equations of this problem are exactly "every row and column of
    the core has log-magnitude sum zero", so the fitted core is the balanced one.
    """
    a = np.asarray(a, float)
    m, n = a.shape
    nz = np.argwhere(a != 0)
    if len(nz) == 0:
        return np.ones(m), np.ones(n)
    design = np.zeros((len(nz), m + n))
    rhs = np.zeros(len(nz))
    for k, (i, j) in enumerate(nz):
        design[k, i] = 1.0
        design[k, m + j] = 1.0
        rhs[k] = np.log(abs(a[i, j]))
    x = np.linalg.lstsq(design, rhs, rcond=None)[0]
    return np.exp(x[:m]), np.exp(x[m:])


def balanced_core(a):
    d, e = log_scales_lstsq(a)
    return np.asarray(a, float) / np.outer(d, e)


def uc_inverse_oracle(a):
    d, e = log_scales_lstsq(a)
    s = np.asarray(a, float) / np.outer(d, e)
    return np.linalg.pinv(s) / np.outer(e, d)


def min_norm_solution(j, v):
    """Minimal-norm solution via normal equations on the nonzero rows."""
    j, v = np.asarray(j, float), np.asarray(v, float)
    keep = np.any(j != 0, axis=1)
    jr = j[keep]
    return jr.T @ np.linalg.solve(jr @ jr.T, v[keep])


def central_difference(f, q, h=1e-6):
    q = np.asarray(q, float)
    cols = []
    for k in range(q.size):
        e = np.zeros_like(q)
        e[k] = h
        cols.append((f(q + e) - f(q - e)) / (2 * h))
    return np.array(cols).T
