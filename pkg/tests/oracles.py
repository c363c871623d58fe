"""Independent reference implementations used to pin expected test values.

Nothing here imports from marginsparse: these are deliberately separate
code paths (dense eigendecompositions, projected gradient, exhaustive
enumeration) so agreement is meaningful.
"""

import itertools

import numpy as np


def eig_spectral_norm(M):
    """Largest singular value via an eigendecomposition of the Gram matrix."""
    M = np.asarray(M, dtype=np.float64)
    G = M.T @ M if M.shape[0] >= M.shape[1] else M @ M.T
    if G.size == 0:
        return 0.0
    w = np.linalg.eigvalsh(G)
    return float(np.sqrt(max(w[-1], 0.0)))


def project_dual_feasible(v, y, C):
    """Euclidean projection onto {0 <= a <= C, y.a = 0} for y in {+-1}^n.

    The KKT system gives a = clip(v - lam*y, 0, C) with lam chosen so the
    equality constraint holds.  g(lam) = y.clip(v - lam*y, 0, C) is piecewise
    linear and nonincreasing with kinks at lam in {v*y, (v-C)*y}; the root is
    found exactly by scanning the sorted kinks and interpolating.
    """
    v = np.asarray(v, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)

    def g(lam):
        return float(y @ np.clip(v - lam * y, 0.0, C))

    bps = np.sort(np.concatenate([v * y, (v - C) * y]))
    vals = np.array([g(b) for b in bps])
    if vals[0] <= 0.0:
        lam = bps[0]
    elif vals[-1] >= 0.0:
        lam = bps[-1]
    else:
        k = int(np.searchsorted(-vals, 0.0, side="left")) - 1
        k = min(max(k, 0), bps.size - 2)
        run, drop = bps[k + 1] - bps[k], vals[k] - vals[k + 1]
        lam = bps[k] if drop <= 0.0 else bps[k] + vals[k] * run / drop
    return np.clip(v - lam * y, 0.0, C)


def qp_dual_solve(X, y, C, iters=30000, tol=1e-14):
    """Projected-gradient reference solver for the box/equality SVM dual.

    Returns (alpha, dual objective).  Slow and simple on purpose; intended
    for n <= a few dozen.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    Q = (y[:, None] * y[None, :]) * (X @ X.T)
    lam_max = float(np.linalg.eigvalsh(Q)[-1])
    step = 1.0 / max(lam_max, 1e-12)
    a = project_dual_feasible(np.zeros(y.size), y, C)
    for _ in range(iters):
        a_new = project_dual_feasible(a - step * (Q @ a - 1.0), y, C)
        moved = float(np.abs(a_new - a).max())
        a = a_new
        if moved <= tol * max(1.0, C):
            break
    obj = float(a.sum() - 0.5 * (a @ Q @ a))
    return a, obj


def exhaustive_meb(P):
    """Exact smallest enclosing ball for small planar instances.

    Enumerates every ball determined by 1, 2, or 3 points and returns the
    smallest one covering all points (radius, center).  In the plane the
    optimum is always determined by at most 3 points.
    """
    P = np.asarray(P, dtype=np.float64)
    n = P.shape[0]

    def covers(c, r):
        d2 = np.einsum("ij,ij->i", P - c, P - c)
        return np.all(d2 <= r * r * (1.0 + 1e-12) + 1e-12)

    best_r, best_c = np.inf, None
    for i in range(n):
        if covers(P[i], 0.0):
            return 0.0, P[i]
    for i, j in itertools.combinations(range(n), 2):
        c = 0.5 * (P[i] + P[j])
        r = 0.5 * np.linalg.norm(P[i] - P[j])
        if r < best_r and covers(c, r):
            best_r, best_c = r, c
    for i, j, k in itertools.combinations(range(n), 3):
        A = 2.0 * np.array([P[j] - P[i], P[k] - P[i]])
        if abs(np.linalg.det(A)) < 1e-12:
            continue
        rhs = np.array([P[j] @ P[j] - P[i] @ P[i], P[k] @ P[k] - P[i] @ P[i]])
        c = np.linalg.solve(A, rhs)
        r = float(np.linalg.norm(P[i] - c))
        if r < best_r and covers(c, r):
            best_r, best_c = r, c
    return float(best_r), best_c


def sampled_gram_error(V, indices, weights):
    """|| V'V - V'RR'V ||_2 computed directly from the selection lists."""
    V = np.asarray(V, dtype=np.float64)
    S = (weights[:, None] * V[indices]).T @ (weights[:, None] * V[indices])
    return eig_spectral_norm(V.T @ V - S)
