"""Minimum enclosing ball and the radius-preservation check.

The ball is computed by the core-set iteration: repeatedly move the center
toward the farthest point with harmonic step 1/(k+1).  The center is a
convex combination u of data points throughout, which yields the dual
lower bound  g(u) = sum_i u_i ||x_i||^2 - ||c||^2  <= B*^2, so the loop can
stop with a certificate as soon as the covering radius satisfies
max_dist^2 <= (1+delta)^2 g(u); the iteration cap ceil(1/delta^2) is the
classical worst case and is rarely approached.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DataError
from .linalg import spectral_norm, thin_svd, to_dense
from .operators import SamplingOperator


@dataclass(frozen=True)
class EnclosingBall:
    center: np.ndarray
    radius: float
    delta: float
    iterations: int
    certified: bool


def meb_radius(X, delta: float = 1e-3) -> EnclosingBall:
    """(1+delta)-approximate minimum enclosing ball of the rows of X.

    The returned radius is the actual covering radius of the returned
    center (max distance to any row), so every point is inside the ball
    and the radius is at most (1+delta) times the optimum when the run
    ends certified.
    """
    if not (0.0 < delta < 1.0):
        raise DataError("delta must be in (0, 1)")
    P = to_dense(X).astype(np.float64, copy=False)
    if P.ndim != 2 or P.shape[0] < 1:
        raise DataError("need at least one point")
    n = P.shape[0]
    shift = P.mean(axis=0)
    P = P - shift  # work near the origin to tame cancellation in g(u)
    sq = np.einsum("ij,ij->i", P, P)

    u = np.zeros(n)
    u[0] = 1.0
    c = P[0].copy()
    max_iter = math.ceil(1.0 / delta**2)
    certified = False
    k = 0
    for k in range(1, max_iter + 1):
        d2 = sq - 2.0 * (P @ c) + c @ c
        far = int(np.argmax(d2))
        gap_target = (1.0 + delta) ** 2 * (u @ sq - c @ c)
        if d2[far] <= gap_target:
            certified = True
            break
        step = 1.0 / (k + 1.0)
        u *= 1.0 - step
        u[far] += step
        c += step * (P[far] - c)

    d2 = sq - 2.0 * (P @ c) + c @ c
    radius = float(math.sqrt(max(d2.max(), 0.0)))
    return EnclosingBall(center=c + shift, radius=radius, delta=delta,
                         iterations=k, certified=certified)


@dataclass(frozen=True)
class RadiusCheck:
    radius_full: float
    radius_sampled: float
    spectral_error: float
    passed: bool
    bound: float


def augmented_right_basis(X, delta: float = 1e-3) -> np.ndarray:
    """Right singular basis of X with the MEB center appended as a row.

    This is the matrix the radius-preservation argument samples from: the
    guarantee needs the selection to be accurate on the span of the data
    AND the ball center.
    """
    P = to_dense(X)
    ball = meb_radius(P, delta)
    return thin_svd(np.vstack([P, ball.center[None, :]])).V


def radius_bound_check(X, R: SamplingOperator, delta: float = 1e-3) -> RadiusCheck:
    """Check the sampled-space ball radius against the spectral error bound.

    Computes B on X and B~ on X R, measures E_B on the center-augmented
    right basis V_B, and tests  B~^2 <= (1 + ||E_B||) (1+delta)^2 B^2.
    The (1+delta)^2 factor covers the approximation slack of the two ball
    computations; R must come from the basis of the augmented matrix for
    the measured ||E_B|| to be the relevant error.
    """
    P = to_dense(X)
    if P.shape[1] != R.n_features:
        raise DataError(f"operator built for {R.n_features} features, data has {P.shape[1]}")
    ball_full = meb_radius(P, delta)
    ball_sampled = meb_radius(R.apply(P), delta)
    V_B = thin_svd(np.vstack([P, ball_full.center[None, :]])).V
    M = R.matrix().T @ V_B
    E = V_B.T @ V_B - M.T @ M
    err = spectral_norm(E)
    bound = (1.0 + err) * (1.0 + delta) ** 2 * ball_full.radius**2
    passed = ball_sampled.radius**2 <= bound * (1.0 + 1e-9)
    return RadiusCheck(radius_full=ball_full.radius,
                       radius_sampled=ball_sampled.radius,
                       spectral_error=err, passed=passed, bound=bound)
