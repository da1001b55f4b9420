"""Dense complex matrix arithmetic and the Hermitian eigensolver.

All functions operate on square ``complex128`` numpy arrays and treat them
as immutable values: nothing here mutates its arguments. The eigensolver
delegates to LAPACK through ``numpy.linalg`` and then checks the
reconstruction and orthonormality residuals, so a returned decomposition
is always certified against its tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CrossCheckError, DimensionMismatchError, NotHermitianError

HERMITIAN_TOL = 1e-10
EIG_TOL = 1e-9
PSD_TOL = 1e-9
RANK_TOL = 1e-8
PROJ_TOL = 1e-8
EIG_GROUP_TOL = 1e-8


def as_matrix(a) -> np.ndarray:
    """Coerce to a square, finite complex matrix."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {m.shape}")
    if m.size and not (np.all(np.isfinite(m.real)) and np.all(np.isfinite(m.imag))):
        raise ValueError("matrix contains non-finite entries")
    return m


def max_norm(a) -> float:
    """Largest entry magnitude (the max norm used by all tolerance checks)."""
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def require_same_dim(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise DimensionMismatchError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")


def mat_mul(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    require_same_dim(a, b)
    return a @ b


def adjoint(a) -> np.ndarray:
    """Conjugate transpose."""
    return as_matrix(a).conj().T


def trace(a) -> complex:
    return complex(np.trace(as_matrix(a)))


def is_hermitian(a, tol: float = HERMITIAN_TOL) -> bool:
    a = as_matrix(a)
    return max_norm(a - a.conj().T) <= tol


def require_hermitian(a, tol: float = HERMITIAN_TOL) -> np.ndarray:
    a = as_matrix(a)
    dev = max_norm(a - a.conj().T)
    if dev > tol:
        raise NotHermitianError(f"matrix deviates from Hermitian by {dev:.3e} (tol {tol:.1e})")
    return a


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues in ascending order with orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def hermitian_eig(a, eig_tol: float = EIG_TOL, hermitian_tol: float = HERMITIAN_TOL) -> SpectralDecomposition:
    """Eigendecomposition of a Hermitian matrix, certified after the fact.

    Raises ``NotHermitianError`` for non-Hermitian input and
    ``CrossCheckError`` if the reconstruction ``V diag(w) V+`` or the
    orthonormality of ``V`` misses ``eig_tol`` in max norm.
    """
    a = require_hermitian(a, hermitian_tol)
    try:
        vals, vecs = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise CrossCheckError(f"eigensolver failed to converge: {exc}") from exc
    vals = vals.astype(float)
    recon_err = max_norm((vecs * vals) @ vecs.conj().T - a)
    ortho_err = max_norm(vecs.conj().T @ vecs - np.eye(a.shape[0]))
    if recon_err > eig_tol or ortho_err > eig_tol:
        raise CrossCheckError(
            f"spectral decomposition failed certification: reconstruction {recon_err:.3e}, "
            f"orthonormality {ortho_err:.3e} (tol {eig_tol:.1e})"
        )
    vals.setflags(write=False)
    vecs.setflags(write=False)
    return SpectralDecomposition(vals, vecs)


def hermitian_eigenvalues(a, hermitian_tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Ascending eigenvalues only (no certification of eigenvectors)."""
    return np.linalg.eigvalsh(require_hermitian(a, hermitian_tol)).astype(float)


def orthonormalize(vectors, rank_tol: float = RANK_TOL) -> list[np.ndarray]:
    """Modified Gram-Schmidt with one reorthogonalization pass.

    Vectors whose residual norm after projection falls below ``rank_tol``
    are dropped, so the output is an orthonormal basis of the input span.
    The output may be empty when all inputs are (numerically) zero.
    """
    basis: list[np.ndarray] = []
    dim = None
    for v in vectors:
        w = np.asarray(v, dtype=complex).reshape(-1)
        if dim is None:
            dim = w.shape[0]
        elif w.shape[0] != dim:
            raise DimensionMismatchError(f"vector dimension {w.shape[0]} != {dim}")
        for _ in range(2):
            for u in basis:
                w = w - u * np.vdot(u, w)
        norm = float(np.linalg.norm(w))
        if norm >= rank_tol:
            basis.append(w / norm)
    return basis


def is_positive_semidefinite(
    a, psd_tol: float = PSD_TOL, hermitian_tol: float = HERMITIAN_TOL
) -> tuple[bool, np.ndarray | None]:
    """PSD test with a witness.

    Returns ``(True, None)`` when the smallest eigenvalue is >= -psd_tol,
    otherwise ``(False, x)`` where x is the unit eigenvector of the most
    negative eigenvalue, so that <x|ax> < -psd_tol.
    """
    a = require_hermitian(a, hermitian_tol)
    vals = np.linalg.eigvalsh(a)
    if float(vals[0]) >= -psd_tol:
        return True, None
    _, vecs = np.linalg.eigh(a)
    witness = vecs[:, 0].copy()
    witness.setflags(write=False)
    return False, witness
