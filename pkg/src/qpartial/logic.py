"""Closed subspaces (quantum events), their lattice, and the measure view.

A closed subspace of the finite Hilbert space is stored canonically as
its orthogonal projection matrix. The measure view of a partial density
operator f assigns tr(P_K f) to every event K; this is a sub-probability
measure, and the map f -> measure is an order isomorphism between the
Loewner order and the pointwise order on measures (dim > 2 is needed
only for surjectivity, which plays no computational role here: every
measure this module produces carries its source operator).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .density import PartialDensityOperator
from .errors import CrossCheckError, DimensionMismatchError

_IMAG_TOL = 1e-9
_ADDITIVITY_TOL = 1e-8


class ClosedSubspace:
    """A quantum event, canonically an orthogonal projection matrix.

    Validation requires the matrix to be Hermitian within
    ``hermitian_tol`` and idempotent within ``proj_tol``; the rank is the
    number of eigenvalues above one half.
    """

    __slots__ = ("_projection", "_rank", "_basis")

    def __init__(
        self,
        projection,
        *,
        proj_tol: float = linalg.PROJ_TOL,
        hermitian_tol: float = linalg.HERMITIAN_TOL,
    ):
        p = linalg.require_hermitian(projection, hermitian_tol)
        idem = linalg.max_norm(p @ p - p)
        if idem > proj_tol:
            raise ValueError(f"matrix is not idempotent: |P^2 - P| = {idem:.3e} (tol {proj_tol:.1e})")
        vals, vecs = np.linalg.eigh(p)
        keep = vals > 0.5
        p = np.array(p, dtype=complex)
        p.setflags(write=False)
        basis = np.array(vecs[:, keep])
        basis.setflags(write=False)
        self._projection = p
        self._rank = int(np.count_nonzero(keep))
        self._basis = basis

    @property
    def projection(self) -> np.ndarray:
        return self._projection

    @property
    def dim(self) -> int:
        return self._projection.shape[0]

    @property
    def rank(self) -> int:
        return self._rank

    @property
    def basis(self) -> np.ndarray:
        """Orthonormal basis of the subspace, as matrix columns."""
        return self._basis

    def __repr__(self):
        return f"ClosedSubspace(dim={self.dim}, rank={self.rank})"

    def __eq__(self, other):
        if not isinstance(other, ClosedSubspace):
            return NotImplemented
        return self.dim == other.dim and np.array_equal(self._projection, other._projection)

    @classmethod
    def zero(cls, dim: int) -> "ClosedSubspace":
        return cls(np.zeros((dim, dim), dtype=complex))

    @classmethod
    def full(cls, dim: int) -> "ClosedSubspace":
        return cls(np.eye(dim, dtype=complex))


def subspace_from_vectors(vectors, dim: int | None = None, rank_tol: float = linalg.RANK_TOL) -> ClosedSubspace:
    """Projection onto the span of the given vectors.

    ``dim`` is only required for an empty family, which yields the zero
    subspace.
    """
    vecs = [np.asarray(v, dtype=complex).reshape(-1) for v in vectors]
    if not vecs:
        if dim is None:
            raise ValueError("empty vector family needs an explicit dimension")
        return ClosedSubspace.zero(dim)
    n = vecs[0].shape[0]
    if dim is not None and dim != n:
        raise DimensionMismatchError(f"vectors have dimension {n}, expected {dim}")
    basis = linalg.orthonormalize(vecs, rank_tol)
    if not basis:
        return ClosedSubspace.zero(n)
    b = np.column_stack(basis)
    return ClosedSubspace(b @ b.conj().T)


def orthocomplement(k: ClosedSubspace) -> ClosedSubspace:
    return ClosedSubspace(np.eye(k.dim, dtype=complex) - k.projection)


def join(k1: ClosedSubspace, k2: ClosedSubspace, rank_tol: float = linalg.RANK_TOL) -> ClosedSubspace:
    """Smallest subspace containing both: the span of their union."""
    _require_same_space(k1, k2)
    columns = [k1.basis[:, j] for j in range(k1.rank)] + [k2.basis[:, j] for j in range(k2.rank)]
    return subspace_from_vectors(columns, dim=k1.dim, rank_tol=rank_tol)


def meet(k1: ClosedSubspace, k2: ClosedSubspace, rank_tol: float = linalg.RANK_TOL) -> ClosedSubspace:
    """Intersection, through the De Morgan dual of the join."""
    _require_same_space(k1, k2)
    return orthocomplement(join(orthocomplement(k1), orthocomplement(k2), rank_tol))


def are_orthogonal(k1: ClosedSubspace, k2: ClosedSubspace, proj_tol: float = linalg.PROJ_TOL) -> bool:
    _require_same_space(k1, k2)
    return linalg.max_norm(k1.projection @ k2.projection) <= proj_tol


def subspace_leq(k1: ClosedSubspace, k2: ClosedSubspace, proj_tol: float = linalg.PROJ_TOL) -> bool:
    """Inclusion K1 is a subspace of K2, tested as P2 P1 = P1."""
    _require_same_space(k1, k2)
    return linalg.max_norm(k2.projection @ k1.projection - k1.projection) <= proj_tol


def gleason_measure(
    f: PartialDensityOperator, k: ClosedSubspace, psd_tol: float = linalg.PSD_TOL
) -> float:
    """Probability tr(P_K f) that the event K occurs in the partial state f.

    The value is clamped to [0, 1] when it lies within ``psd_tol`` of that
    range; an imaginary component beyond 1e-9 signals corrupted inputs
    and raises ``CrossCheckError``.
    """
    if f.dim != k.dim:
        raise DimensionMismatchError(f"dimension mismatch: {f.dim} vs {k.dim}")
    value = complex(np.trace(k.projection @ f.matrix))
    if abs(value.imag) > _IMAG_TOL:
        raise CrossCheckError(f"measure has imaginary part {value.imag:.3e}")
    x = value.real
    if -psd_tol <= x <= 1.0 + psd_tol:
        x = min(1.0, max(0.0, x))
    return x


class PartialState:
    """The sub-probability measure K -> tr(P_K f), carrying its source f."""

    __slots__ = ("source",)

    def __init__(self, source: PartialDensityOperator):
        self.source = source

    def __call__(self, event: ClosedSubspace) -> float:
        return gleason_measure(self.source, event)

    @property
    def total(self) -> float:
        """Mass of the whole space; 1 - total is the nontermination probability."""
        return min(1.0, max(0.0, self.source.trace))


def gleason(f: PartialDensityOperator) -> PartialState:
    return PartialState(f)


def state_leq(
    f: PartialDensityOperator, g: PartialDensityOperator, psd_tol: float = linalg.PSD_TOL
) -> tuple[bool, ClosedSubspace | None]:
    """Decide the measure order G(f) <= G(g) via the operator order.

    The two orders coincide, so the test is whether g - f is PSD. On
    failure the returned event is the line spanned by the most negative
    eigendirection x of g - f; on it, f measures strictly more than g.
    """
    if f.dim != g.dim:
        raise DimensionMismatchError(f"dimension mismatch: {f.dim} vs {g.dim}")
    ok, witness = linalg.is_positive_semidefinite(g.matrix - f.matrix, psd_tol)
    if ok:
        return True, None
    return False, subspace_from_vectors([witness])


@dataclass
class AxiomCheckReport:
    """Outcome of randomized sub-probability axiom checks for one operator."""

    trials: int
    seed: int
    zero_event_value: float
    full_space_value: float
    worst_additivity_deviation: float
    failures: list = field(default_factory=list)
    passed: bool = True

    def to_json(self) -> dict:
        return {
            "trials": self.trials,
            "seed": self.seed,
            "zero_event_value": self.zero_event_value,
            "full_space_value": self.full_space_value,
            "worst_additivity_deviation": self.worst_additivity_deviation,
            "failures": list(self.failures),
            "passed": self.passed,
        }


def check_subprobability_axioms(
    f: PartialDensityOperator, trials: int, rng_seed: int
) -> AxiomCheckReport:
    """Randomized check of the three sub-probability measure axioms.

    Per trial, a random unitary image of a random partition of basis
    vectors gives a family of mutually orthogonal subspaces; additivity
    requires the measure of the join to match the sum of the members'
    measures within 1e-8. The zero event must measure exactly 0 and the
    whole space at most 1 (within the PSD tolerance).
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    n = f.dim
    zero_value = gleason_measure(f, ClosedSubspace.zero(n))
    full_value = gleason_measure(f, ClosedSubspace.full(n))
    report = AxiomCheckReport(
        trials=trials,
        seed=rng_seed,
        zero_event_value=zero_value,
        full_space_value=full_value,
        worst_additivity_deviation=0.0,
    )
    if zero_value != 0.0:
        report.failures.append({"check": "zero_event", "value": zero_value})
    if full_value > 1.0 + linalg.PSD_TOL:
        report.failures.append({"check": "full_space", "value": full_value})
    for t in range(trials):
        rng = np.random.default_rng([rng_seed, t])
        family = _random_orthogonal_family(n, rng)
        total = sum(gleason_measure(f, k) for k in family)
        joined = family[0]
        for k in family[1:]:
            joined = join(joined, k)
        deviation = abs(gleason_measure(f, joined) - total)
        report.worst_additivity_deviation = max(report.worst_additivity_deviation, deviation)
        if deviation > _ADDITIVITY_TOL:
            report.failures.append({"check": "additivity", "trial": t, "deviation": deviation})
    report.passed = not report.failures
    return report


def _random_orthogonal_family(n: int, rng: np.random.Generator) -> list[ClosedSubspace]:
    """Mutually orthogonal subspaces spanned by unitary images of basis blocks."""
    from .sampling import random_unitary

    u = random_unitary(n, rng)
    subset_size = int(rng.integers(1, n + 1))
    axes = rng.permutation(n)[:subset_size]
    group_count = int(rng.integers(1, subset_size + 1))
    groups: list[list[int]] = [[] for _ in range(group_count)]
    for idx, axis in enumerate(axes):
        groups[idx % group_count].append(int(axis))
    return [subspace_from_vectors([u[:, i] for i in g], dim=n) for g in groups]


def _require_same_space(k1: ClosedSubspace, k2: ClosedSubspace) -> None:
    if k1.dim != k2.dim:
        raise DimensionMismatchError(f"dimension mismatch: {k1.dim} vs {k2.dim}")
