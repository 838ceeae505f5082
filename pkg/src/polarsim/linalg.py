"""Deterministic dense linear algebra used as the classical oracle layer.

Everything downstream (dilations, phase-estimation simulation, learning loops)
checks itself against the functions in this module, so two properties matter
more than speed: calling a function twice on the same matrix must return
bit-identical results, and singular/eigen vectors must carry a fixed phase so
factorizations are comparable across routes.  The phase convention used
throughout: rotate each right singular vector (or eigenvector) so its
largest-magnitude entry is real and positive, breaking magnitude ties by
lowest index.  Left vectors inherit the same rotation, keeping the
reconstruction untouched.
"""

from __future__ import annotations

import dataclasses

import numpy as np

# Relative cutoff below which a singular value counts as zero.
RANK_TOL_FACTOR = 1e-12

# Default tolerance for the boolean predicates.
DEFAULT_ATOL = 1e-10


def _as_complex_matrix(a: np.ndarray, name: str = "matrix") -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2:
        raise ValueError(f"{name} must be two-dimensional, got shape {a.shape}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ValueError(f"{name} contains non-finite entries")
    return a


def _fix_column_phases(
    primary: np.ndarray, follower: np.ndarray | None = None
) -> tuple[np.ndarray, np.ndarray | None]:
    """Rotate each column of ``primary`` so its largest-magnitude entry is
    real positive (ties broken by lowest index); apply the same per-column
    rotation to ``follower`` so products like ``follower @ primary.conj().T``
    are unchanged."""
    primary = primary.copy()
    follower = None if follower is None else follower.copy()
    for j in range(primary.shape[1]):
        col = primary[:, j]
        k = int(np.argmax(np.abs(col)))
        z = col[k]
        if z == 0:
            continue
        factor = np.conj(z) / abs(z)
        primary[:, j] = col * factor
        if follower is not None:
            follower[:, j] = follower[:, j] * factor
    return primary, follower


@dataclasses.dataclass(frozen=True)
class SVDResult:
    """Economy singular value decomposition A = sum_j s_j l_j r_j^dag.

    Attributes:
        left_vectors: (m, k) orthonormal columns l_j.
        singular_values: (k,) nonnegative, descending, k = min(m, n).
        right_vectors: (n, k) orthonormal columns r_j, phase-fixed.
    """

    left_vectors: np.ndarray
    singular_values: np.ndarray
    right_vectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        """Reassemble the original matrix from the triplets."""
        return (self.left_vectors * self.singular_values) @ self.right_vectors.conj().T

    def rank(self, tol: float | None = None) -> int:
        """Numerical rank under the relative cutoff used across the package."""
        return int(np.count_nonzero(self.singular_values > rank_cutoff(self.singular_values, tol)))


@dataclasses.dataclass(frozen=True)
class PolarFactors:
    """Polar factorization A = isometry @ right_positive = left_positive @ isometry."""

    isometry: np.ndarray
    right_positive: np.ndarray
    left_positive: np.ndarray


def rank_cutoff(singular_values: np.ndarray, tol: float | None = None) -> float:
    """Absolute cutoff: RANK_TOL_FACTOR (or ``tol``) times the largest singular value."""
    factor = RANK_TOL_FACTOR if tol is None else tol
    if singular_values.size == 0:
        return 0.0
    return factor * float(np.max(singular_values))


def svd(a: np.ndarray) -> SVDResult:
    """Deterministic economy SVD with the package phase convention.

    Args:
        a: (m, n) complex matrix with finite entries.

    Returns:
        SVDResult with descending singular values and phase-fixed vectors.
    """
    a = _as_complex_matrix(a)
    u, s, vh = np.linalg.svd(a, full_matrices=False)
    v = vh.conj().T
    v, u = _fix_column_phases(v, u)
    return SVDResult(left_vectors=u, singular_values=s, right_vectors=v)


def classical_polar(a: np.ndarray, tol: float | None = None) -> PolarFactors:
    """Polar decomposition via the SVD oracle.

    The isometry sums l_j r_j^dag over singular values above the rank cutoff,
    so for rank-deficient or rectangular input it is a partial isometry on the
    co-kernel.  right_positive = (A^dag A)^(1/2) and
    left_positive = (A A^dag)^(1/2) keep their kernel blocks at zero.
    """
    res = svd(a)
    cut = rank_cutoff(res.singular_values, tol)
    keep = res.singular_values > cut
    l_keep = res.left_vectors[:, keep]
    r_keep = res.right_vectors[:, keep]
    isometry = l_keep @ r_keep.conj().T
    right_positive = (res.right_vectors * res.singular_values) @ res.right_vectors.conj().T
    left_positive = (res.left_vectors * res.singular_values) @ res.left_vectors.conj().T
    return PolarFactors(
        isometry=isometry,
        right_positive=right_positive,
        left_positive=left_positive,
    )


def hermitian_eig(h: np.ndarray, atol: float = DEFAULT_ATOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix, ascending, phase-fixed.

    Args:
        h: square matrix; rejected if ||h - h^dag||_F exceeds ``atol`` scaled
            by max(1, ||h||_F).

    Returns:
        (eigenvalues, eigenvectors) with eigenvectors in columns.
    """
    h = _as_complex_matrix(h)
    if h.shape[0] != h.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {h.shape}")
    asym = float(np.linalg.norm(h - h.conj().T))
    if asym > atol * max(1.0, float(np.linalg.norm(h))):
        raise ValueError(f"matrix is not Hermitian: asymmetry norm {asym:.3e}")
    w, v = np.linalg.eigh(h)
    v, _ = _fix_column_phases(v)
    return w, v


def matrix_exp_hermitian(h: np.ndarray, t: float) -> np.ndarray:
    """e^{-i h t} for Hermitian h, computed in the eigenbasis."""
    w, v = hermitian_eig(h)
    return (v * np.exp(-1j * w * t)) @ v.conj().T


def closest_positive(h: np.ndarray) -> np.ndarray:
    """(h^dag h)^(1/2) for Hermitian h: the spectrum loses its signs."""
    w, v = hermitian_eig(h)
    return (v * np.abs(w)) @ v.conj().T


def frobenius_distance(a: np.ndarray, b: np.ndarray) -> float:
    """||a - b||_F; shapes must agree."""
    a = _as_complex_matrix(a, "first matrix")
    b = _as_complex_matrix(b, "second matrix")
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b))


def is_hermitian(a: np.ndarray, atol: float = DEFAULT_ATOL) -> bool:
    a = _as_complex_matrix(a)
    return a.shape[0] == a.shape[1] and bool(np.allclose(a, a.conj().T, atol=atol, rtol=0.0))


def is_unitary(a: np.ndarray, atol: float = DEFAULT_ATOL) -> bool:
    a = _as_complex_matrix(a)
    if a.shape[0] != a.shape[1]:
        return False
    eye = np.eye(a.shape[0])
    return bool(np.allclose(a.conj().T @ a, eye, atol=atol, rtol=0.0))


def is_isometry(a: np.ndarray, atol: float = DEFAULT_ATOL) -> bool:
    """Columns orthonormal: a^dag a = identity (requires rows >= cols)."""
    a = _as_complex_matrix(a)
    eye = np.eye(a.shape[1])
    return bool(np.allclose(a.conj().T @ a, eye, atol=atol, rtol=0.0))


def is_positive_semidefinite(a: np.ndarray, atol: float = DEFAULT_ATOL) -> bool:
    a = _as_complex_matrix(a)
    if not is_hermitian(a, atol):
        return False
    w = np.linalg.eigvalsh((a + a.conj().T) / 2)
    return bool(np.min(w) >= -atol)
