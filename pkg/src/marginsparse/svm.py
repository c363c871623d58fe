"""Linear soft-margin SVM, solved in the dual.

    max_a  1'a - 1/2 a' Y X X' Y a   s.t.  y'a = 0,  0 <= a <= C

Pairwise (SMO-style) coordinate ascent: each step picks the maximal
violating pair with a second-order gain heuristic for the partner and
solves the two-variable subproblem exactly, which preserves y'a = 0 by
construction.  Stops when the violation gap m(a) - M(a) drops below
kkt_tol, at which point every point's KKT residual (with the bias chosen
inside [M, m]) is at most kkt_tol.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError, NumericalError
from .data import LabeledDataset
from .linalg import is_sparse, to_dense

SV_THRESHOLD_REL = 1e-6  # alpha > 1e-6 * C counts as a support vector


@dataclass(frozen=True)
class SvmModel:
    alpha: np.ndarray
    w: np.ndarray
    b: float
    support_indices: np.ndarray
    margin: float
    C: float
    objective: float
    converged: bool
    kkt_gap: float


def margin(model: SvmModel) -> float:
    """Geometric margin 1/||w||; rejects degenerate zero-weight models."""
    if not np.isfinite(model.margin):
        raise NumericalError("degenerate model: w = 0 has no margin")
    return model.margin


def support_vectors(model: SvmModel) -> np.ndarray:
    return model.support_indices


def predict(model: SvmModel, X) -> np.ndarray:
    if X.shape[1] != model.w.size:
        raise DataError(f"model has {model.w.size} features, data has {X.shape[1]}")
    scores = np.asarray(X @ model.w).ravel() + model.b
    return np.where(scores >= 0, 1.0, -1.0)


def error_rate(model: SvmModel, data: LabeledDataset) -> float:
    return float(np.mean(predict(model, data.X) != data.y))


def solve_dual(data: LabeledDataset, C: float = 1.0, kkt_tol: float = 1e-4,
               max_passes: int | None = None) -> SvmModel:
    """Solve the dual on (X, y); max_passes counts epochs of n pair updates."""
    if C <= 0:
        raise DataError("C must be positive")
    if data.n < 2:
        raise DataError("need at least two points")
    if not data.has_both_classes:
        raise DataError("both classes must be present")
    n = data.n
    if max_passes is None:
        max_passes = 10 * n

    X = to_dense(data.X) if is_sparse(data.X) else np.asarray(data.X, dtype=np.float64)
    y = data.y
    K = X @ X.T
    Kdiag = np.diag(K).copy()

    alpha = np.zeros(n)
    grad = -np.ones(n)  # gradient of 1/2 a'Qa - 1'a at a = 0
    pos = y > 0

    converged = False
    gap = np.inf
    for _ in range(max_passes):
        for _ in range(n):
            neg_yg = -y * grad  # equals y_i - w.x_i
            up = np.where(pos, alpha < C, alpha > 0)
            low = np.where(pos, alpha > 0, alpha < C)
            if not up.any() or not low.any():
                converged = True
                gap = 0.0
                break
            up_idx = np.flatnonzero(up)
            i = up_idx[np.argmax(neg_yg[up_idx])]
            m_val = neg_yg[i]
            low_idx = np.flatnonzero(low)
            M_val = np.min(neg_yg[low_idx])
            gap = m_val - M_val
            if gap <= kkt_tol:
                converged = True
                break
            # Second-order partner: maximize (violation)^2 / curvature over
            # the points on the low side that actually violate against i.
            viol = m_val - neg_yg[low_idx]
            mask = viol > 0
            cand = low_idx[mask]
            bvec = viol[mask]
            avec = Kdiag[i] + Kdiag[cand] - 2.0 * K[i, cand]
            avec = np.maximum(avec, 1e-12)
            j = cand[np.argmax(bvec * bvec / avec)]

            # Exact 2-variable solve along a + s(y_i e_i - y_j e_j).
            a_ij = max(Kdiag[i] + Kdiag[j] - 2.0 * K[i, j], 1e-12)
            s = (m_val - neg_yg[j]) / a_ij
            s_max_i = (C - alpha[i]) if pos[i] else alpha[i]
            s_max_j = alpha[j] if pos[j] else (C - alpha[j])
            s = min(s, s_max_i, s_max_j)
            di = y[i] * s
            dj = -y[j] * s
            alpha[i] = min(max(alpha[i] + di, 0.0), C)
            alpha[j] = min(max(alpha[j] + dj, 0.0), C)
            grad += (y[i] * di) * (y * K[i]) + (y[j] * dj) * (y * K[j])
        if converged:
            break

    w = X.T @ (y * alpha)
    neg_yg = y - X @ w  # recomputed exactly: y_i - w.x_i
    sv_threshold = SV_THRESHOLD_REL * C
    free = (alpha > sv_threshold) & (alpha < C - sv_threshold)
    if free.any():
        b = float(np.mean(neg_yg[free]))
    else:
        up = np.where(pos, alpha < C, alpha > 0)
        low = np.where(pos, alpha > 0, alpha < C)
        hi = np.max(neg_yg[up]) if up.any() else 0.0
        lo = np.min(neg_yg[low]) if low.any() else 0.0
        b = float(0.5 * (hi + lo))

    norm_w = float(np.linalg.norm(w))
    gamma = 1.0 / norm_w if norm_w > 0 else np.inf
    objective = float(alpha.sum() - 0.5 * norm_w**2)
    support = np.flatnonzero(alpha > sv_threshold)
    return SvmModel(alpha=alpha, w=w, b=b, support_indices=support,
                    margin=gamma, C=float(C), objective=objective,
                    converged=converged, kkt_gap=float(gap))
