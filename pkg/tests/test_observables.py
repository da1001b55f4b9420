import math

import numpy as np
import pytest

from qpartial import linalg, sampling
from qpartial.density import PartialDensityOperator, new_partial_density, scale
from qpartial.errors import CrossCheckError, NotHermitianError
from qpartial.intervals import (
    CompactInterval,
    add_intervals,
    directed_intersection,
    reverse_inclusion_leq,
    scale_interval,
)
from qpartial.logic import are_orthogonal, join
from qpartial.observables import (
    BorelInterval,
    BorelSet,
    BoundedObservable,
    commutes,
    distribution,
    e0,
    expectation_summary,
    expected_interval,
    expected_interval_op,
    observable_square_interval,
    pvm_map,
    spectrum_bounds,
)

PAULI_Z = np.diag([1.0, -1.0]).astype(complex)
PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)


def rng_for(test_id: int) -> np.random.Generator:
    return np.random.default_rng([13, test_id])


class TestSpectralData:
    def test_pauli_z(self):
        r = BoundedObservable(PAULI_Z)
        assert r.eigenvalues == [-1.0, 1.0]
        low, high = r.spectral
        assert np.allclose(low[1].projection, np.diag([0.0, 1.0]))
        assert np.allclose(high[1].projection, np.diag([1.0, 0.0]))

    def test_identity_has_single_projection(self):
        r = BoundedObservable(np.eye(3))
        assert len(r.spectral) == 1
        assert r.spectral[0][0] == pytest.approx(1.0)
        assert r.spectral[0][1].rank == 3

    def test_invariants_on_random_input(self):
        rng = rng_for(1)
        a = sampling.random_hermitian(6, rng)
        r = BoundedObservable(a)
        resolution = sum(k.projection for _, k in r.spectral)
        recon = sum(lam * k.projection for lam, k in r.spectral)
        assert linalg.max_norm(resolution - np.eye(6)) <= 1e-9
        assert linalg.max_norm(recon - a) <= 1e-9
        for i, (_, ki) in enumerate(r.spectral):
            for _, kj in r.spectral[i + 1 :]:
                assert are_orthogonal(ki, kj)

    def test_degenerate_eigenvalues_grouped(self):
        r = BoundedObservable(np.diag([2.0, 1.0, 1.0]))
        assert len(r.spectral) == 2
        assert r.spectral[0][1].rank == 2

    def test_finer_grouping_leaves_expectations_unchanged(self):
        rng = rng_for(2)
        a = np.diag([1.0, 1.0 + 1e-12, 3.0]).astype(complex)
        f = sampling.random_pdo(3, rng)
        coarse = BoundedObservable(a)
        fine = BoundedObservable(a, eig_group_tol=1e-14)
        assert len(fine.spectral) > len(coarse.spectral)
        a_int = expected_interval(coarse, f)
        b_int = expected_interval(fine, f)
        assert a_int.lo == pytest.approx(b_int.lo, abs=1e-10)
        assert a_int.hi == pytest.approx(b_int.hi, abs=1e-10)

    def test_rejects_non_hermitian(self):
        with pytest.raises(NotHermitianError):
            BoundedObservable(np.array([[0, 1], [0, 0]], dtype=complex))


class TestPvmMap:
    def test_empty_set(self):
        r = BoundedObservable(PAULI_Z)
        assert pvm_map(r, BorelSet.empty()).rank == 0

    def test_whole_line(self):
        r = BoundedObservable(PAULI_Z)
        assert pvm_map(r, BorelSet.reals()).rank == 2

    def test_pauli_z_positive_halfline(self):
        r = BoundedObservable(PAULI_Z)
        k = pvm_map(r, BorelSet.closed(0.0, 2.0))
        assert np.allclose(k.projection, np.diag([1.0, 0.0]))

    def test_boundedness_interval(self):
        rng = rng_for(3)
        r = sampling.random_observable(5, rng)
        m, big_m = spectrum_bounds(r)
        a = max(abs(m), abs(big_m))
        assert pvm_map(r, BorelSet.closed(-a, a)).rank == 5

    def test_disjoint_sets_orthogonal_union_joins(self):
        rng = rng_for(4)
        r = sampling.random_observable(4, rng)
        m, big_m = spectrum_bounds(r)
        cut = 0.5 * (m + big_m)
        low = BorelSet((BorelInterval(-math.inf, cut, False, True),))
        high = BorelSet((BorelInterval(cut, math.inf, False, False),))
        k_low, k_high = pvm_map(r, low), pvm_map(r, high)
        assert are_orthogonal(k_low, k_high)
        union = BorelSet(
            (BorelInterval(-math.inf, cut, False, True), BorelInterval(cut, math.inf, False, False))
        )
        assert linalg.max_norm(
            pvm_map(r, union).projection - join(k_low, k_high).projection
        ) <= linalg.PROJ_TOL

    def test_borel_set_rejects_overlap(self):
        with pytest.raises(ValueError, match="disjoint"):
            BorelSet((BorelInterval(0, 2), BorelInterval(1, 3)))

    def test_half_open_intervals_partition(self):
        s1 = BorelInterval(0.0, 1.0, True, False)
        s2 = BorelInterval(1.0, 2.0, True, True)
        bs = BorelSet((s1, s2))
        assert bs.contains(1.0)
        assert not s1.contains(1.0)


class TestSpectrumBounds:
    def test_examples(self):
        assert spectrum_bounds(BoundedObservable(PAULI_Z)) == (-1.0, 1.0)
        assert spectrum_bounds(BoundedObservable(np.eye(2))) == (1.0, 1.0)
        m, big_m = spectrum_bounds(BoundedObservable(np.diag([2.0, 5.0, 3.0])))
        assert (m, big_m) == (2.0, 5.0)


class TestDistribution:
    def test_zero_state(self):
        r = BoundedObservable(PAULI_Z)
        d = distribution(r, PartialDensityOperator.zero(2))
        assert d.total == 0.0
        assert all(w == 0.0 for _, w in d.support)

    def test_pauli_z_weights(self):
        r = BoundedObservable(PAULI_Z)
        d = distribution(r, new_partial_density(np.diag([0.5, 0.25])))
        weights = dict(d.support)
        assert weights[-1.0] == pytest.approx(0.25)
        assert weights[1.0] == pytest.approx(0.5)
        assert d.total == pytest.approx(0.75)

    def test_state_gives_probability_distribution(self):
        rng = rng_for(5)
        r = sampling.random_observable(3, rng)
        f = sampling.random_density(3, rng)
        assert distribution(r, f).total == pytest.approx(1.0, abs=1e-10)


class TestE0:
    def test_zero_state(self):
        assert e0(BoundedObservable(PAULI_Z), PartialDensityOperator.zero(2)) == 0.0

    def test_pauli_z_example(self):
        value = e0(BoundedObservable(PAULI_Z), new_partial_density(np.diag([0.5, 0.25])))
        assert value == pytest.approx(0.25, abs=1e-15)

    def test_identity_gives_trace(self):
        rng = rng_for(6)
        f = sampling.random_pdo(4, rng)
        assert e0(BoundedObservable(np.eye(4)), f) == pytest.approx(f.trace, abs=1e-10)

    def test_matches_trace_form(self):
        rng = rng_for(7)
        for _ in range(20):
            r = sampling.random_observable(4, rng)
            f = sampling.random_pdo(4, rng)
            assert e0(r, f) == pytest.approx(float(np.trace(r.operator @ f.matrix).real), abs=1e-9)

    def test_corrupted_spectral_cache_raises(self):
        r = BoundedObservable(PAULI_Z)
        r._operator = np.diag([5.0, -1.0]).astype(complex)  # desync operator from cache
        with pytest.raises(CrossCheckError, match="diverge"):
            e0(r, PartialDensityOperator.maximally_mixed(2))


class TestExpectedInterval:
    def test_total_ignorance(self):
        rng = rng_for(8)
        r = sampling.random_observable(3, rng)
        m, big_m = spectrum_bounds(r)
        box = expected_interval(r, PartialDensityOperator.zero(3))
        assert box == CompactInterval(m, big_m)

    def test_classical_case_degenerates(self):
        rng = rng_for(9)
        r = sampling.random_observable(3, rng)
        f = sampling.random_density(3, rng)
        box = expected_interval(r, f)
        assert box.width <= 1e-10
        assert box.lo == pytest.approx(float(np.trace(r.operator @ f.matrix).real), abs=1e-10)

    def test_pauli_z_hand_computation(self):
        box = expected_interval(BoundedObservable(PAULI_Z), new_partial_density(np.diag([0.5, 0.25])))
        assert box.lo == pytest.approx(0.0, abs=1e-12)
        assert box.hi == pytest.approx(0.5, abs=1e-12)

    def test_operator_entry_point_identical(self):
        rng = rng_for(10)
        a = sampling.random_hermitian(4, rng)
        f = sampling.random_pdo(4, rng)
        assert expected_interval_op(a, f) == expected_interval(BoundedObservable(a), f)

    def test_scalar_observable_degenerates(self):
        f = sampling.random_pdo(3, rng_for(11), trace=0.4)
        box = expected_interval_op(2.0 * np.eye(3), f)
        assert box.lo == pytest.approx(box.hi)
        assert box.lo == pytest.approx(2.0 * 0.4 + 0.6 * 2.0)

    def test_summary_fields(self):
        s = expectation_summary(PAULI_Z, new_partial_density(np.diag([0.5, 0.25])))
        assert (s.lo, s.hi, s.e0, s.missing, s.m, s.M) == pytest.approx((0.0, 0.5, 0.25, 0.25, -1.0, 1.0))
        assert set(s.to_json()) == {"lo", "hi", "e0", "missing", "m", "M"}


class TestMonotonicityAndContinuity:
    def test_expected_interval_monotone(self):
        rng = rng_for(12)
        for _ in range(50):
            dim = int(rng.integers(2, 5))
            r = sampling.random_observable(dim, rng)
            f, g = sampling.loewner_pair(dim, rng)
            assert reverse_inclusion_leq(expected_interval(r, f), expected_interval(r, g))

    def test_scott_continuity_along_geometric_chain(self):
        rng = rng_for(13)
        r = sampling.random_observable(3, rng)
        f = sampling.random_pdo(3, rng, trace=0.8)
        chain = [scale(f, 1.0 - 2.0**-n) for n in range(1, 40)]
        boxes = [expected_interval(r, fn) for fn in chain]
        limit = directed_intersection(boxes, tol=1e-13)
        target = expected_interval(r, f)
        assert limit.lo == pytest.approx(target.lo, abs=1e-6)
        assert limit.hi == pytest.approx(target.hi, abs=1e-6)

    def test_e0_converges_and_sup_form_for_nonnegative_spectrum(self):
        rng = rng_for(14)
        a = sampling.random_hermitian(3, rng)
        a = a - np.linalg.eigvalsh(a)[0] * np.eye(3)  # spectrum >= 0
        r = BoundedObservable(a)
        f = sampling.random_pdo(3, rng, trace=0.7)
        values = [e0(r, scale(f, 1.0 - 2.0**-n)) for n in range(1, 40)]
        assert max(values) == pytest.approx(e0(r, f), abs=1e-8)
        assert values == sorted(values)

    def test_containment_of_total_completions(self):
        rng = rng_for(15)
        for _ in range(50):
            dim = int(rng.integers(2, 5))
            r = sampling.random_observable(dim, rng)
            f = sampling.random_pdo(dim, rng, trace=float(rng.uniform(0.0, 0.99)))
            g = sampling.total_completion(f, rng)
            ok, _ = linalg.is_positive_semidefinite(g.matrix - f.matrix)
            assert ok and g.trace == pytest.approx(1.0, abs=1e-9)
            value = float(np.trace(r.operator @ g.matrix).real)
            assert expected_interval(r, f).contains(value, slack=1e-9)


class TestLinearity:
    def test_product_spectrum_pairs_exact(self):
        rng = rng_for(16)
        for _ in range(50):
            a, b = sampling.commuting_pair_product_spectrum((2, 2), rng)
            assert commutes(a, b, tol=1e-9)
            f = sampling.random_pdo(4, rng)
            k = float(rng.uniform(-3, 3))
            ell = float(rng.uniform(-3, 3))
            left = expected_interval_op(k * a + ell * b, f)
            right = add_intervals(
                scale_interval(k, expected_interval_op(a, f)),
                scale_interval(ell, expected_interval_op(b, f)),
            )
            assert left.lo == pytest.approx(right.lo, abs=1e-9)
            assert left.hi == pytest.approx(right.hi, abs=1e-9)

    def test_general_commuting_pairs_only_contain(self):
        # without the product-spectrum structure, the combined interval is
        # contained in the interval-arithmetic sum but need not equal it
        rng = rng_for(17)
        for _ in range(30):
            u = sampling.random_unitary(3, rng)
            a = u @ np.diag(rng.uniform(-1, 1, size=3)) @ u.conj().T
            b = u @ np.diag(rng.uniform(-1, 1, size=3)) @ u.conj().T
            a, b = 0.5 * (a + a.conj().T), 0.5 * (b + b.conj().T)
            assert commutes(a, b, tol=1e-9)
            f = sampling.random_pdo(3, rng, trace=0.5)
            k, ell = 1.0, 1.0
            left = expected_interval_op(k * a + ell * b, f)
            right = add_intervals(
                scale_interval(k, expected_interval_op(a, f)),
                scale_interval(ell, expected_interval_op(b, f)),
            )
            assert right.lo <= left.lo + 1e-9 and left.hi <= right.hi + 1e-9

    def test_extreme_additivity_fails_off_product_class(self):
        # A = diag(0,1) and B = diag(1,0) commute, yet A + B = I has
        # spectrum {1}, not {0} + {0}: endpoint additivity needs the
        # product-spectrum structure
        a, b = np.diag([0.0, 1.0]), np.diag([1.0, 0.0])
        assert commutes(a, b)
        f = PartialDensityOperator.zero(2)
        combined = expected_interval_op(a + b, f)
        summed = add_intervals(expected_interval_op(a, f), expected_interval_op(b, f))
        assert combined == CompactInterval(1.0, 1.0)
        assert summed == CompactInterval(0.0, 2.0)
        assert combined != summed


class TestSquareLaw:
    def test_pauli_z_square_is_certain(self):
        rng = rng_for(18)
        for trace in (0.0, 0.3, 1.0):
            f = sampling.random_pdo(2, rng, trace=trace)
            box = observable_square_interval(PAULI_Z, f)
            assert box.lo == pytest.approx(1.0, abs=1e-10)
            assert box.hi == pytest.approx(1.0, abs=1e-10)

    def test_pure_ignorance(self):
        box = observable_square_interval(np.diag([0.0, 2.0]), PartialDensityOperator.zero(2))
        assert box == CompactInterval(0.0, 4.0)

    def test_matches_square_operator_route(self):
        rng = rng_for(19)
        for _ in range(30):
            dim = int(rng.integers(2, 5))
            a = sampling.random_hermitian(dim, rng)
            f = sampling.random_pdo(dim, rng)
            left = observable_square_interval(a, f)
            right = expected_interval_op(a @ a, f)
            assert left.lo == pytest.approx(right.lo, abs=1e-9)
            assert left.hi == pytest.approx(right.hi, abs=1e-9)


class TestCommutes:
    def test_diagonal_pair(self):
        assert commutes(np.diag([1.0, 2.0]), np.diag([3.0, 4.0]))

    def test_pauli_x_z_anticommute(self):
        assert not commutes(PAULI_X, PAULI_Z)

    def test_operator_with_its_square(self):
        a = sampling.random_hermitian(3, rng_for(20))
        assert commutes(a, a @ a, tol=1e-9)
