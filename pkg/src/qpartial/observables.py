"""Bounded observables, their projection-valued measures, and interval
expected values.

An observable is a Hermitian matrix together with its grouped spectral
decomposition: distinct eigenvalues paired with eigenprojections. In
finite dimension the projection-valued measure factors through the
spectrum, so Borel sets are represented as finite unions of intervals;
membership of each eigenvalue is all that matters.

The expected value against a partial density operator f is the compact
interval

    tr(A f) + (1 - tr(f)) * [min spec, max spec]

whose width reflects that the nonterminated probability mass is known to
sit somewhere in the spectrum's range, but not where.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .density import PartialDensityOperator
from .errors import CrossCheckError, DimensionMismatchError
from .intervals import CompactInterval, scale_interval, translate
from .logic import ClosedSubspace

_E0_CROSS_TOL = 1e-7


@dataclass(frozen=True)
class BorelInterval:
    """One real interval with open/closed endpoint tags; endpoints may be inf."""

    lo: float
    hi: float
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        if math.isnan(self.lo) or math.isnan(self.hi):
            raise ValueError("NaN endpoint")
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    def contains(self, x: float) -> bool:
        if self.lo < x < self.hi:
            return True
        if x == self.lo and self.lo_closed and not math.isinf(x):
            return True
        if x == self.hi and self.hi_closed and not math.isinf(x):
            return True
        return False

    def intersects(self, other: "BorelInterval") -> bool:
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if lo > hi:
            return False
        if lo < hi:
            return True
        return self.contains(lo) and other.contains(lo)


class BorelSet:
    """A finite union of pairwise disjoint intervals, kept sorted."""

    __slots__ = ("intervals",)

    def __init__(self, intervals):
        parts = sorted(intervals, key=lambda iv: (iv.lo, iv.hi))
        for prev, cur in zip(parts, parts[1:]):
            if prev.intersects(cur):
                raise ValueError(f"intervals {prev} and {cur} are not disjoint")
        self.intervals = tuple(parts)

    def contains(self, x: float) -> bool:
        return any(iv.contains(x) for iv in self.intervals)

    @classmethod
    def empty(cls) -> "BorelSet":
        return cls(())

    @classmethod
    def reals(cls) -> "BorelSet":
        return cls((BorelInterval(-math.inf, math.inf, False, False),))

    @classmethod
    def closed(cls, lo: float, hi: float) -> "BorelSet":
        return cls((BorelInterval(lo, hi),))

    def __repr__(self):
        return f"BorelSet({list(self.intervals)!r})"


class BoundedObservable:
    """Hermitian operator with its grouped spectral decomposition cached.

    Eigenvalues closer than ``eig_group_tol`` are merged into a single
    eigenprojection; the grouped data is certified at construction:
    projections resolve the identity, reconstruct the operator, and are
    mutually orthogonal, all within 1e-9.
    """

    __slots__ = ("_operator", "_spectral")

    def __init__(
        self,
        operator,
        *,
        eig_group_tol: float = linalg.EIG_GROUP_TOL,
        hermitian_tol: float = linalg.HERMITIAN_TOL,
    ):
        a = linalg.require_hermitian(operator, hermitian_tol)
        vals, vecs = np.linalg.eigh(a)
        groups = _group_indices(vals, eig_group_tol)
        spectral = []
        for idx in groups:
            cols = vecs[:, idx]
            proj = cols @ cols.conj().T
            lam = float(np.mean(vals[idx]))
            spectral.append((lam, ClosedSubspace(proj)))
        _certify_spectral(a, spectral)
        a = np.array(a, dtype=complex)
        a.setflags(write=False)
        self._operator = a
        self._spectral = tuple(spectral)

    @property
    def operator(self) -> np.ndarray:
        return self._operator

    @property
    def dim(self) -> int:
        return self._operator.shape[0]

    @property
    def spectral(self) -> tuple[tuple[float, ClosedSubspace], ...]:
        """Pairs (eigenvalue, eigenprojection), eigenvalues ascending and distinct."""
        return self._spectral

    @property
    def eigenvalues(self) -> list[float]:
        return [lam for lam, _ in self._spectral]

    def __repr__(self):
        return f"BoundedObservable(dim={self.dim}, spectrum={self.eigenvalues})"


def _group_indices(vals: np.ndarray, tol: float) -> list[np.ndarray]:
    """Cluster ascending eigenvalues whose consecutive gaps stay within tol."""
    groups = []
    start = 0
    for i in range(1, len(vals) + 1):
        if i == len(vals) or vals[i] - vals[i - 1] > tol:
            groups.append(np.arange(start, i))
            start = i
    return groups


def _certify_spectral(a: np.ndarray, spectral) -> None:
    n = a.shape[0]
    resolution = sum(k.projection for _, k in spectral)
    recon = sum(lam * k.projection for lam, k in spectral)
    res_err = linalg.max_norm(resolution - np.eye(n))
    rec_err = linalg.max_norm(recon - a)
    if res_err > 1e-9 or rec_err > 1e-9:
        raise CrossCheckError(
            f"spectral grouping failed certification: identity {res_err:.3e}, "
            f"reconstruction {rec_err:.3e}"
        )
    for i in range(len(spectral)):
        for j in range(i + 1, len(spectral)):
            if linalg.max_norm(spectral[i][1].projection @ spectral[j][1].projection) > 1e-9:
                raise CrossCheckError("eigenprojections are not mutually orthogonal")


def observable_from_hermitian(a, **kwargs) -> BoundedObservable:
    return BoundedObservable(a, **kwargs)


def pvm_map(r: BoundedObservable, u: BorelSet) -> ClosedSubspace:
    """Event that the observable's value lies in the Borel set u.

    The join of eigenprojections with eigenvalue in u; being mutually
    orthogonal, their join is just the sum.
    """
    proj = np.zeros((r.dim, r.dim), dtype=complex)
    for lam, k in r.spectral:
        if u.contains(lam):
            proj = proj + k.projection
    return ClosedSubspace(proj)


def spectrum_bounds(r: BoundedObservable) -> tuple[float, float]:
    eigs = r.eigenvalues
    return eigs[0], eigs[-1]


@dataclass(frozen=True)
class SubDistribution:
    """Sub-probability distribution on the spectrum: weights sum to <= 1."""

    support: tuple[tuple[float, float], ...]
    total: float

    def __post_init__(self):
        if any(w < -linalg.PSD_TOL for _, w in self.support):
            raise ValueError("negative weight in sub-distribution")
        if self.total > 1.0 + linalg.PSD_TOL:
            raise ValueError(f"total mass {self.total} exceeds 1")


def distribution(r: BoundedObservable, f: PartialDensityOperator) -> SubDistribution:
    """Push the state's measure through the observable's PVM."""
    _require_same_dim(r, f)
    support = []
    total = 0.0
    for lam, k in r.spectral:
        w = float(np.trace(k.projection @ f.matrix).real)
        support.append((lam, w))
        total += w
    return SubDistribution(tuple(support), total)


def e0(r: BoundedObservable, f: PartialDensityOperator) -> float:
    """Expectation of the observed part: sum of eigenvalue * weight.

    Cross-checked against tr(A f); divergence beyond 1e-7 means the
    cached spectral data no longer matches the operator.
    """
    _require_same_dim(r, f)
    dist = distribution(r, f)
    spectral_sum = sum(lam * w for lam, w in dist.support)
    trace_form = float(np.trace(r.operator @ f.matrix).real)
    if abs(spectral_sum - trace_form) > _E0_CROSS_TOL:
        raise CrossCheckError(
            f"spectral expectation {spectral_sum!r} and trace form {trace_form!r} diverge"
        )
    return spectral_sum


def missing_probability(f: PartialDensityOperator) -> float:
    return min(1.0, max(0.0, 1.0 - f.trace))


def expected_interval(r: BoundedObservable, f: PartialDensityOperator) -> CompactInterval:
    """Interval expected value: e0 plus the missing mass spread over [m, M]."""
    _require_same_dim(r, f)
    m, big_m = spectrum_bounds(r)
    return translate(e0(r, f), scale_interval(missing_probability(f), CompactInterval(m, big_m)))


def expected_interval_op(a, f: PartialDensityOperator) -> CompactInterval:
    """Same as ``expected_interval`` for a raw Hermitian matrix."""
    return expected_interval(BoundedObservable(a), f)


def observable_square_interval(a, f: PartialDensityOperator) -> CompactInterval:
    """Expected value of the square, from the original operator's spectrum.

    The square's spectrum range is [k^2, K^2] with k and K the smallest
    and largest eigenvalue magnitudes of the original operator.
    """
    r = BoundedObservable(a)
    _require_same_dim(r, f)
    magnitudes = [abs(lam) for lam in r.eigenvalues]
    k, big_k = min(magnitudes), max(magnitudes)
    center = float(np.trace(r.operator @ r.operator @ f.matrix).real)
    spread = scale_interval(missing_probability(f), CompactInterval(k * k, big_k * big_k))
    return translate(center, spread)


def commutes(a, b, tol: float = 1e-10) -> bool:
    a, b = linalg.as_matrix(a), linalg.as_matrix(b)
    linalg.require_same_dim(a, b)
    return linalg.max_norm(a @ b - b @ a) <= tol


@dataclass(frozen=True)
class ExpectationSummary:
    """Wire form of an interval expectation with its ingredients."""

    lo: float
    hi: float
    e0: float
    missing: float
    m: float
    M: float

    def to_json(self) -> dict:
        return {
            "lo": self.lo,
            "hi": self.hi,
            "e0": self.e0,
            "missing": self.missing,
            "m": self.m,
            "M": self.M,
        }


def expectation_summary(a, f: PartialDensityOperator) -> ExpectationSummary:
    r = BoundedObservable(a)
    m, big_m = spectrum_bounds(r)
    center = e0(r, f)
    miss = missing_probability(f)
    interval = translate(center, scale_interval(miss, CompactInterval(m, big_m)))
    return ExpectationSummary(interval.lo, interval.hi, center, miss, m, big_m)


def _require_same_dim(r: BoundedObservable, f: PartialDensityOperator) -> None:
    if r.dim != f.dim:
        raise DimensionMismatchError(f"dimension mismatch: {r.dim} vs {f.dim}")
