"""Partial density operators under the Loewner order, with chain suprema.

A partial density operator is a Hermitian positive-semidefinite matrix
with trace at most one. The trace deficit 1 - tr(f) is the probability
that the computation producing f has not terminated. Increasing chains
of such operators converge to a supremum; ``chain_supremum`` detects the
limit through the trace gap, which for PSD differences dominates the
operator-norm gap.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import (
    ChainMonotonicityError,
    DimensionMismatchError,
    InvalidOperatorError,
    NotPositiveError,
)


class PartialDensityOperator:
    """Validated Hermitian PSD matrix with trace in [0, 1].

    Construction validates; instances are immutable afterwards. With
    ``repair=True``, eigenvalues in [-psd_tol, 0) are clamped to zero by
    projecting onto the PSD cone; anything more negative still raises.
    """

    __slots__ = ("_matrix", "_trace")

    def __init__(
        self,
        matrix,
        *,
        hermitian_tol: float = linalg.HERMITIAN_TOL,
        psd_tol: float = linalg.PSD_TOL,
        repair: bool = False,
    ):
        m = linalg.require_hermitian(matrix, hermitian_tol)
        eigs = np.linalg.eigvalsh(m)
        lowest = float(eigs[0])
        if lowest < -psd_tol:
            _, vecs = np.linalg.eigh(m)
            raise NotPositiveError(
                f"operator has eigenvalue {lowest:.3e} < -{psd_tol:.1e}",
                witness=vecs[:, 0].copy(),
                eigenvalue=lowest,
            )
        if repair and lowest < 0.0:
            vals, vecs = np.linalg.eigh(m)
            vals = np.maximum(vals, 0.0)
            m = (vecs * vals) @ vecs.conj().T
            m = 0.5 * (m + m.conj().T)
        tr = float(np.trace(m).real)
        if tr > 1.0 + psd_tol:
            raise InvalidOperatorError(f"trace {tr:.12g} exceeds 1 (tol {psd_tol:.1e})")
        if tr < -psd_tol:
            raise InvalidOperatorError(f"trace {tr:.12g} below 0 (tol {psd_tol:.1e})")
        m = np.array(m, dtype=complex)
        m.setflags(write=False)
        self._matrix = m
        self._trace = tr

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def dim(self) -> int:
        return self._matrix.shape[0]

    @property
    def trace(self) -> float:
        return self._trace

    def __repr__(self):
        return f"PartialDensityOperator(dim={self.dim}, trace={self._trace:.6g})"

    @classmethod
    def zero(cls, dim: int) -> "PartialDensityOperator":
        return cls(np.zeros((dim, dim), dtype=complex))

    @classmethod
    def pure(cls, vector) -> "PartialDensityOperator":
        """Rank-one state |v><v| of the normalized vector (trace one)."""
        v = np.asarray(vector, dtype=complex).reshape(-1)
        norm = float(np.linalg.norm(v))
        if norm == 0.0:
            raise InvalidOperatorError("cannot normalize the zero vector")
        v = v / norm
        return cls(np.outer(v, v.conj()))

    @classmethod
    def maximally_mixed(cls, dim: int) -> "PartialDensityOperator":
        return cls(np.eye(dim, dtype=complex) / dim)

    @classmethod
    def ground_state(cls, dim: int) -> "PartialDensityOperator":
        m = np.zeros((dim, dim), dtype=complex)
        m[0, 0] = 1.0
        return cls(m)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "re": self._matrix.real.tolist(),
            "im": self._matrix.imag.tolist(),
        }

    @classmethod
    def from_json(cls, data: dict, **kwargs) -> "PartialDensityOperator":
        return cls(matrix_from_json(data), **kwargs)


def matrix_from_json(data: dict) -> np.ndarray:
    """Read the {dim, re, im} wire form back into a complex matrix."""
    try:
        dim = int(data["dim"])
        re = np.asarray(data["re"], dtype=float)
        im = np.asarray(data["im"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidOperatorError(f"malformed operator JSON: {exc}") from exc
    if re.shape != (dim, dim) or im.shape != (dim, dim):
        raise InvalidOperatorError(
            f"operator JSON arrays have shape {re.shape}/{im.shape}, expected ({dim}, {dim})"
        )
    return re + 1j * im


def matrix_to_json(matrix) -> dict:
    m = linalg.as_matrix(matrix)
    return {"dim": m.shape[0], "re": m.real.tolist(), "im": m.imag.tolist()}


def new_partial_density(matrix, **kwargs) -> PartialDensityOperator:
    """Functional alias for the validating constructor."""
    return PartialDensityOperator(matrix, **kwargs)


def loewner_leq(
    f: PartialDensityOperator, g: PartialDensityOperator, psd_tol: float = linalg.PSD_TOL
) -> tuple[bool, np.ndarray | None]:
    """Decide f <= g in the Loewner order (g - f PSD), with witness.

    When the order fails, the witness x is a unit vector along which
    <x|(g-f)x> < -psd_tol, i.e. f assigns strictly more mass than g.
    """
    if f.dim != g.dim:
        raise DimensionMismatchError(f"dimension mismatch: {f.dim} vs {g.dim}")
    return linalg.is_positive_semidefinite(g.matrix - f.matrix, psd_tol)


def scale(f: PartialDensityOperator, r: float) -> PartialDensityOperator:
    if not 0.0 <= r <= 1.0:
        raise ValueError(f"scale factor must lie in [0, 1], got {r}")
    return PartialDensityOperator(r * f.matrix)


def nontermination_probability(f: PartialDensityOperator) -> float:
    return min(1.0, max(0.0, 1.0 - f.trace))


def dyadic_diagonal_state(bits, dim: int) -> PartialDensityOperator:
    """Diagonal operator with entry b_i / 2^(i+1) for each bit b_i.

    Realizes the binary expansion sum(b_i / 2^(i+1)) <= 1 as a partial
    state whose value on every basis axis is a dyadic rational.
    """
    bits = list(bits)
    if len(bits) > dim:
        raise DimensionMismatchError(f"{len(bits)} bits do not fit in dimension {dim}")
    if any(b not in (0, 1) for b in bits):
        raise ValueError("bits must be 0 or 1")
    diag = np.zeros(dim)
    for i, b in enumerate(bits):
        diag[i] = b / 2.0 ** (i + 1)
    return PartialDensityOperator(np.diag(diag).astype(complex))


@dataclass(frozen=True)
class FixpointConfig:
    """Stopping rules for chain suprema and loop fixpoints."""

    max_iterations: int = 10000
    trace_tol: float = 1e-9
    monotonicity_check: bool = True

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not self.trace_tol > 0.0:
            raise ValueError("trace_tol must be positive")


def chain_supremum(
    chain, cfg: FixpointConfig | None = None
) -> tuple[PartialDensityOperator, int, bool]:
    """Supremum of an increasing chain of partial density operators.

    Consumes the chain until the trace gap between consecutive elements
    drops below ``cfg.trace_tol`` (converged), the chain ends (a finite
    chain attains its supremum exactly), or ``cfg.max_iterations``
    elements have been consumed (not converged). Returns
    ``(operator, iterations_used, converged)`` where the operator is the
    last element consumed.

    With ``cfg.monotonicity_check`` every consecutive pair is checked in
    the Loewner order and a violation raises ``ChainMonotonicityError``:
    suprema only exist for increasing families.
    """
    cfg = cfg or FixpointConfig()
    it = iter(chain)
    try:
        current = next(it)
    except StopIteration:
        raise ValueError("supremum of an empty chain is undefined") from None
    count = 1
    while count < cfg.max_iterations:
        try:
            nxt = next(it)
        except StopIteration:
            return _revalidated(current), count, True
        if cfg.monotonicity_check:
            ok, witness = loewner_leq(current, nxt)
            if not ok:
                raise ChainMonotonicityError(
                    f"chain decreases between elements {count} and {count + 1}",
                    index=count,
                    witness=witness,
                )
        gap = nxt.trace - current.trace
        if gap < cfg.trace_tol:
            return _revalidated(nxt), count, True
        current = nxt
        count += 1
    return _revalidated(current), cfg.max_iterations, False


def _revalidated(f: PartialDensityOperator) -> PartialDensityOperator:
    return PartialDensityOperator(f.matrix)
