"""Deterministic spectral column selection.

Given V (d x ell) with orthonormal columns, greedily pick r > ell rows
(= features) with positive weights so that the sampled Gram matrix
V^T R R^T V stays spectrally close to the identity.  The selection is
driven by two barrier potentials on the eigenvalues of the running
matrix A = sum of t * v v^T over accepted rows: a lower barrier L that
advances by 1 per step and an upper barrier U advancing by
delta_upper = (1 + sqrt(ell/r)) / (1 - sqrt(ell/r)).  A row v is
acceptable when its upper score does not exceed its lower score; the
step size t is pinned between them.  After r steps every singular value
of R^T V lies in [1 - sqrt(ell/r), 1 + sqrt(ell/r)], hence

    ||V^T V - V^T R R^T V||_2 <= 3 sqrt(ell / r).

The procedure is fully deterministic: no randomness anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError
from .linalg import check_matrix, require_orthonormal, row_norms_sq
from .operators import SamplingOperator

# Relative slack when testing uscore <= lscore, so exact ties survive rounding.
SCORE_SLACK = 1e-12


def lower_potential(L, eigenvalues):
    """sum_i 1/(lambda_i - L); requires the barrier L below the spectrum."""
    lam = np.asarray(eigenvalues, dtype=np.float64)
    if lam.size and lam.min() <= L:
        raise ValueError(f"lower barrier {L} is not below the spectrum (min {lam.min()})")
    return float(np.sum(1.0 / (lam - L)))


def upper_potential(U, eigenvalues):
    """sum_i 1/(U - lambda_i); requires the barrier U above the spectrum."""
    lam = np.asarray(eigenvalues, dtype=np.float64)
    if lam.size and lam.max() >= U:
        raise ValueError(f"upper barrier {U} is not above the spectrum (max {lam.max()})")
    return float(np.sum(1.0 / (U - lam)))


@dataclass(frozen=True)
class BarrierState:
    """Running matrix A = sum t * v v^T with its cached eigendecomposition."""

    A: np.ndarray
    tau: int
    eigenvalues: np.ndarray   # ascending
    eigenvectors: np.ndarray  # columns match eigenvalues

    @classmethod
    def initial(cls, ell: int) -> "BarrierState":
        return cls(np.zeros((ell, ell)), 0, np.zeros(ell), np.eye(ell))

    def updated(self, v, t: float) -> "BarrierState":
        A = self.A + t * np.outer(v, v)
        A = 0.5 * (A + A.T)
        lam, W = np.linalg.eigh(A)
        return BarrierState(A, self.tau + 1, lam, W)


def candidate_scores(v, state: BarrierState, L, U, delta_lower, delta_upper):
    """Lower/upper scores of one candidate row against the current barriers.

    lscore = v^T (A - (L+dL)I)^-2 v / (Phi(L+dL) - Phi(L)) - v^T (A - (L+dL)I)^-1 v
    uscore = v^T ((U+dU)I - A)^-2 v / (Phihat(U) - Phihat(U+dU)) + v^T ((U+dU)I - A)^-1 v

    Resolvents are applied through the cached eigendecomposition.  The
    shifted points L+dL / U+dU may sit inside the spectrum as long as they
    do not hit an eigenvalue exactly.
    """
    lam = state.eigenvalues
    q2 = (state.eigenvectors.T @ np.asarray(v, dtype=np.float64)) ** 2
    gap_lo = lam - (L + delta_lower)
    gap_hi = (U + delta_upper) - lam
    if np.any(gap_lo == 0.0) or np.any(gap_hi == 0.0):
        raise NumericalError("shifted barrier coincides with an eigenvalue")
    dphi_l = np.sum(1.0 / gap_lo) - np.sum(1.0 / (lam - L))
    dphi_u = np.sum(1.0 / (U - lam)) - np.sum(1.0 / gap_hi)
    if dphi_l == 0.0 or dphi_u == 0.0:
        raise NumericalError("degenerate potential difference")
    lscore = np.sum(q2 / gap_lo**2) / dphi_l - np.sum(q2 / gap_lo)
    uscore = np.sum(q2 / gap_hi**2) / dphi_u + np.sum(q2 / gap_hi)
    return float(lscore), float(uscore)


@dataclass(frozen=True)
class BssDiagnostics:
    """Instrumentation from one bss_select run.

    eig_count counts eigendecompositions (one per iteration); together with
    score_evaluations == r * d it witnesses the per-iteration cost profile.
    """

    eig_count: int
    score_evaluations: int
    step_sizes: np.ndarray
    reselections: int


def bss_select(V, r: int, *, return_diagnostics: bool = False):
    """Select r weighted rows of an orthonormal-column V (d x ell).

    Returns a SamplingOperator R with exactly r selections (indices may
    repeat) such that all singular values of R^T V lie in
    [1 - sqrt(ell/r), 1 + sqrt(ell/r)].  Requires r > ell.  Deterministic.
    """
    V = np.ascontiguousarray(np.asarray(V, dtype=np.float64))
    check_matrix(V, name="V")
    require_orthonormal(V, name="V")
    d, ell = V.shape
    if r <= ell:
        raise ValueError(f"need r > ell, got r={r} with ell={ell}")

    ratio = math.sqrt(ell / r)
    delta_lower = 1.0
    delta_upper = (1.0 + ratio) / (1.0 - ratio)
    sqrt_rl = math.sqrt(r * ell)

    row_sq = row_norms_sq(V)
    A = np.zeros((ell, ell))
    taken = np.zeros(d, dtype=bool)
    indices = np.empty(r, dtype=np.intp)
    steps = np.empty(r)
    eig_count = 0
    score_evals = 0
    reselections = 0

    for tau in range(r):
        lam, W = np.linalg.eigh(A)
        eig_count += 1
        L = tau - sqrt_rl
        U = delta_upper * (tau + sqrt_rl)
        if not (lam[0] > L and lam[-1] < U):
            raise NumericalError(
                f"barrier crossed at iteration {tau}: spectrum "
                f"[{lam[0]:.9g}, {lam[-1]:.9g}] vs barriers ({L:.9g}, {U:.9g})"
            )
        gap_lo = lam - (L + delta_lower)
        gap_hi = (U + delta_upper) - lam
        if gap_lo[0] <= 0.0:
            # The potential bound keeps lambda_min > L + 1; hitting this
            # means accumulated rounding broke the induction.
            raise NumericalError(
                f"lower barrier shift overtook the spectrum at iteration {tau}"
            )
        dphi_l = np.sum(1.0 / gap_lo) - np.sum(1.0 / (lam - L))
        dphi_u = np.sum(1.0 / (U - lam)) - np.sum(1.0 / gap_hi)

        # Score all d rows at once in the eigenbasis of A: O(d ell^2).
        P2 = (V @ W) ** 2
        lsc = (P2 @ gap_lo**-2) / dphi_l - P2 @ (1.0 / gap_lo)
        usc = (P2 @ gap_hi**-2) / dphi_u + P2 @ (1.0 / gap_hi)
        score_evals += d

        slack = SCORE_SLACK * np.maximum(np.abs(lsc), np.abs(usc))
        eligible = (usc <= lsc + slack) & (usc + lsc > 0.0)
        if not eligible.any():
            raise NumericalError(
                f"no acceptable column at iteration {tau} "
                f"(max lscore-uscore = {np.max(lsc - usc):.3e}, "
                f"potentials {np.sum(1.0 / (lam - L)):.6g}/{np.sum(1.0 / (U - lam)):.6g}, "
                f"spectrum [{lam[0]:.9g}, {lam[-1]:.9g}], barriers ({L:.9g}, {U:.9g}))"
            )
        cand = np.flatnonzero(eligible & ~taken)
        if cand.size == 0:
            cand = np.flatnonzero(eligible)  # allow re-selection
            reselections += 1
        i = cand[np.argmax(row_sq[cand])]

        t = 2.0 / (usc[i] + lsc[i])
        A += t * np.outer(V[i], V[i])
        taken[i] = True
        indices[tau] = i
        steps[tau] = t

    weights = np.sqrt(steps) * math.sqrt((1.0 - ratio) / r)
    op = SamplingOperator(d, indices, weights)
    if return_diagnostics:
        diag = BssDiagnostics(eig_count, score_evals, steps.copy(), reselections)
        return op, diag
    return op
