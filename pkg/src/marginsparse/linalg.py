"""Core matrix routines: thin SVD, spectral norm, row norms.

Matrices are plain 2-D float ``numpy.ndarray`` objects or
``scipy.sparse.csr_matrix`` / ``csr_array`` (rows are data points, columns
are features). All functions here are pure.
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import DataError, NumericalError

# Relative cutoff below which singular values count as zero.
DEFAULT_RANK_THRESHOLD = 1e-10

# Sparse inputs above this column count must go through the sketching path
# instead of a dense SVD.
DENSIFY_COLUMN_LIMIT = 100_000


def is_sparse(M) -> bool:
    return sp.issparse(M)


def check_matrix(M, name: str = "matrix"):
    """Validate a feature matrix: 2-D, finite, sane sparse structure."""
    if is_sparse(M):
        if M.ndim != 2:
            raise DataError(f"{name} must be 2-D, got shape {M.shape}")
        if not np.all(np.isfinite(M.data)):
            raise DataError(f"{name} contains non-finite values")
        return
    M = np.asarray(M)
    if M.ndim != 2:
        raise DataError(f"{name} must be 2-D, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise DataError(f"{name} contains non-finite values")


def to_dense(M) -> np.ndarray:
    if is_sparse(M):
        return np.asarray(M.todense(), dtype=float)
    return np.asarray(M, dtype=float)


@dataclass(frozen=True)
class ThinSvd:
    """Rank-truncated SVD: M ~= U @ diag(singular_values) @ V.T.

    U is n x rho, V is d x rho, singular values are positive and
    non-increasing; rho is the numerical rank.
    """

    U: np.ndarray
    singular_values: np.ndarray
    V: np.ndarray

    @property
    def rank(self) -> int:
        return self.singular_values.size

    def reconstruct(self) -> np.ndarray:
        return (self.U * self.singular_values) @ self.V.T


def thin_svd(M, rank_threshold: float = DEFAULT_RANK_THRESHOLD) -> ThinSvd:
    """Thin SVD with relative rank truncation.

    Singular values <= rank_threshold * sigma_1 are dropped. A zero matrix
    yields rank 0 with empty factors.
    """
    check_matrix(M)
    if rank_threshold <= 0:
        raise ValueError("rank_threshold must be positive")
    if is_sparse(M):
        if M.shape[1] > DENSIFY_COLUMN_LIMIT:
            raise DataError(
                f"sparse matrix with {M.shape[1]} columns is too wide for a "
                "dense SVD; use the Gaussian sketch path instead"
            )
        M = to_dense(M)
    else:
        M = np.asarray(M, dtype=float)
    n, d = M.shape
    if n == 0 or d == 0 or not M.any():
        return ThinSvd(np.zeros((n, 0)), np.zeros(0), np.zeros((d, 0)))
    U, s, Vt = np.linalg.svd(M, full_matrices=False)
    keep = s > rank_threshold * s[0]
    return ThinSvd(U[:, keep], s[keep], Vt[keep].T)


def spectral_norm(M, tol: float = 1e-9, max_iter: int = 20_000) -> float:
    """Largest singular value via power iteration on M^T M.

    Deterministic: the starting vector comes from a fixed-seed generator.
    Returns 0.0 for a zero matrix. Works for dense and sparse inputs
    without densifying.
    """
    check_matrix(M)
    n, d = M.shape
    if n == 0 or d == 0:
        return 0.0
    # Iterate on the skinny side so each step is one pair of mat-vecs on a
    # min(n, d)-length vector; M and M.T then run the identical recursion,
    # which makes the result exactly transpose-invariant.
    A = M.T if d > n else M
    k = min(n, d)
    rng = np.random.default_rng(0x5EED)
    x = rng.standard_normal(k)
    x /= np.linalg.norm(x)
    sigma = 0.0
    for _ in range(max_iter):
        y = np.asarray(A.T @ (A @ x)).ravel()
        norm_y = np.linalg.norm(y)
        if norm_y == 0.0:
            return 0.0
        sigma_new = float(np.sqrt(norm_y))  # ||x|| = 1, so ||A^T A x|| -> sigma^2
        x = y / norm_y
        if abs(sigma_new - sigma) <= 0.1 * tol * sigma_new:
            sigma = sigma_new
            break
        sigma = sigma_new
    v = np.asarray(A @ x).ravel()
    return float(np.linalg.norm(v))


def row_norms_sq(M) -> np.ndarray:
    """Squared Euclidean norm of every row."""
    check_matrix(M)
    if is_sparse(M):
        out = np.asarray(M.multiply(M).sum(axis=1)).ravel()
        return out.astype(float)
    M = np.asarray(M, dtype=float)
    return np.einsum("ij,ij->i", M, M)


def orthonormality_defect(V: np.ndarray) -> float:
    """Spectral norm of V^T V - I; small for orthonormal columns."""
    V = np.asarray(V, dtype=float)
    G = V.T @ V
    if G.size == 0:
        return 0.0
    return float(np.abs(np.linalg.eigvalsh(G - np.eye(V.shape[1]))).max())


def require_orthonormal(V: np.ndarray, tol: float = 1e-8, name: str = "V"):
    V = np.asarray(V, dtype=float)
    if V.ndim != 2:
        raise DataError(f"{name} must be 2-D")
    if V.shape[1] == 0:
        raise DataError(f"{name} has no columns (rank 0 input)")
    defect = orthonormality_defect(V)
    if defect > tol:
        raise NumericalError(
            f"{name} does not have orthonormal columns "
            f"(defect {defect:.3e} > {tol:.1e})"
        )
    return V
