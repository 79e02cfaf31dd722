import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logminor.errors import (
    CholeskyBreakdown,
    IndexOutOfRange,
    NoConvergence,
    NotFinite,
    NotPositiveDefinite,
    NotSquare,
    NotSymmetric,
    UsageError,
)
from logminor.generators import gen_e1, gen_e3, gen_haar_orthogonal
from logminor.linalg import (
    IndexSet,
    differential_entropy,
    eigenvalues_sym,
    jacobi_eigenvalues,
    log_det,
    log_det_batch,
    make_spd,
    principal_submatrix,
)

from conftest import random_spd


class TestMakeSpd:
    def test_identity(self):
        m = make_spd(np.eye(2))
        np.testing.assert_allclose(m.eigenvalues, [1.0, 1.0])
        assert m.condition_number == pytest.approx(1.0)
        assert m.is_diagonal

    def test_diag_3_1(self):
        m = make_spd(np.diag([3.0, 1.0]))
        assert m.condition_number == pytest.approx(3.0)
        assert m.ell == 0.0

    def test_indefinite(self):
        with pytest.raises(NotPositiveDefinite):
            make_spd([[1.0, 2.0], [2.0, 1.0]])

    def test_relative_pd_threshold(self):
        with pytest.raises(NotPositiveDefinite):
            make_spd(np.diag([1.0, 1e-13]))
        # scale invariant: the same shape far from 1 passes
        make_spd(np.diag([1e-20, 1e-25]))

    @pytest.mark.parametrize("bad", [np.ones((2, 3)), np.ones(3), np.zeros((0, 0))])
    def test_not_square(self, bad):
        with pytest.raises(NotSquare):
            make_spd(bad)

    def test_not_finite(self):
        with pytest.raises(NotFinite):
            make_spd([[1.0, np.nan], [np.nan, 1.0]])

    def test_symmetrizes_by_default(self):
        m = make_spd([[2.0, 0.2], [0.0, 2.0]])
        assert m.entries[0, 1] == m.entries[1, 0] == 0.1

    def test_strict_rejects_asymmetry(self):
        with pytest.raises(NotSymmetric):
            make_spd([[2.0, 0.2], [0.0, 2.0]], strict=True)
        make_spd([[2.0, 0.1], [0.1, 2.0]], strict=True)

    def test_immutable(self):
        m = make_spd(np.eye(3))
        with pytest.raises(ValueError):
            m.entries[0, 0] = 5.0


class TestSpectrum:
    def test_ell_zero_iff_extreme_is_one(self):
        assert make_spd(np.diag([2.0, 1.0])).ell == 0.0
        assert make_spd(np.diag([1.0, 0.5])).ell == 0.0
        assert make_spd(np.diag([4.0, 2.0])).ell == pytest.approx(math.log(2.0))
        assert make_spd(np.diag([2.0, 0.25])).ell == pytest.approx(math.log(2.0))

    def test_straddles(self):
        assert make_spd(np.diag([2.0, 0.5])).spectrum.straddles_one
        assert not make_spd(np.diag([4.0, 2.0])).spectrum.straddles_one


class TestIndexSet:
    def test_strictly_increasing(self):
        with pytest.raises(UsageError):
            IndexSet((1, 1))
        with pytest.raises(UsageError):
            IndexSet((2, 1))
        assert IndexSet.of([3, 0, 2]).indices == (0, 2, 3)

    def test_empty_and_negative(self):
        with pytest.raises(UsageError):
            IndexSet(())
        with pytest.raises(IndexOutOfRange):
            IndexSet((-1, 2))


class TestPrincipalSubmatrix:
    def test_diagonal_selection(self):
        m = make_spd(np.diag([3.0, 2.0, 1.0]))
        np.testing.assert_array_equal(principal_submatrix(m, IndexSet((0, 2))).entries, np.diag([3.0, 1.0]))

    def test_full_selection(self):
        m = random_spd(5, 1)
        assert principal_submatrix(m, range(5)) == m

    def test_e1_size5(self):
        m = gen_e1(20, 3.0)
        sub = principal_submatrix(m, IndexSet((0, 4, 9, 10, 19)))
        assert sub.is_diagonal
        assert set(np.diag(sub.entries).tolist()) <= {3.0, 1.0}
        np.testing.assert_array_equal(np.diag(sub.entries), [3.0, 3.0, 3.0, 1.0, 1.0])

    def test_out_of_range(self):
        with pytest.raises(IndexOutOfRange):
            principal_submatrix(make_spd(np.eye(3)), IndexSet((0, 3)))


class TestLogDet:
    def test_identity(self):
        for n in (1, 4, 17):
            assert log_det(make_spd(np.eye(n))) == 0.0

    def test_diagonal(self):
        assert log_det(make_spd(np.diag([3.0, 3.0, 1.0, 1.0]))) == pytest.approx(2 * math.log(3), rel=1e-14)
        assert 2 * math.log(3) == pytest.approx(2.1972, abs=1e-4)

    def test_matches_eigen_sum(self):
        m = random_spd(8, 7)
        expected = float(np.sum(np.log(eigenvalues_sym(m, "jacobi").eigenvalues)))
        assert log_det(m) == pytest.approx(expected, rel=1e-8)

    def test_breakdown(self):
        with pytest.raises(CholeskyBreakdown):
            log_det(np.array([[1.0, 2.0], [2.0, 1.0]]))

    def test_batch_matches_scalar(self):
        m = random_spd(6, 3)
        idx = np.array([[0, 1, 2], [1, 3, 5], [0, 4, 5]])
        got = log_det_batch(m.entries[idx[:, :, None], idx[:, None, :]])
        want = [log_det(principal_submatrix(m, row)) for row in idx]
        np.testing.assert_allclose(got, want, rtol=1e-14)

    def test_entropy(self):
        assert differential_entropy(np.eye(3)) == pytest.approx(1.5 * (1 + math.log(2 * math.pi)))


class TestEigenvalues:
    def test_diagonal_sorted(self):
        d = [2.0, 5.0, 1.0, 3.0]
        np.testing.assert_array_equal(eigenvalues_sym(np.diag(d)).eigenvalues, [5.0, 3.0, 2.0, 1.0])

    def test_similarity(self):
        q = gen_haar_orthogonal(2, 11)
        spec = eigenvalues_sym(q.T @ np.diag([3.0, 1.0]) @ q, "jacobi")
        np.testing.assert_allclose(spec.eigenvalues, [3.0, 1.0], atol=1e-10)

    def test_e3_matches_e1(self):
        np.testing.assert_allclose(gen_e3(20, 3.0, 5).eigenvalues, gen_e1(20, 3.0).eigenvalues, atol=1e-10)

    @pytest.mark.parametrize("n", [1, 2, 3, 8, 21, 40])
    def test_against_lapack(self, n):
        a = np.random.default_rng(n).standard_normal((n, n))
        a = a + a.T
        ours = np.sort(jacobi_eigenvalues(a))
        np.testing.assert_allclose(ours, np.linalg.eigvalsh(a), atol=1e-10 * max(1.0, np.abs(a).max()))

    def test_methods_agree(self):
        m = random_spd(12, 2)
        np.testing.assert_allclose(
            eigenvalues_sym(m, "jacobi").eigenvalues, eigenvalues_sym(m, "lapack").eigenvalues, rtol=1e-12
        )

    def test_no_convergence(self):
        with pytest.raises(NoConvergence):
            jacobi_eigenvalues([[1.0, 0.5], [0.5, 2.0]], max_sweeps=0)

    def test_unknown_method(self):
        with pytest.raises(UsageError):
            eigenvalues_sym(np.eye(2), "qr")


matrix_case = st.tuples(st.integers(2, 9), st.integers(0, 2**32 - 1), st.floats(1.5, 50.0))


@settings(max_examples=40, deadline=None)
@given(case=matrix_case, data=st.data())
def test_interlacing_and_support(case, data):
    n, seed, spread = case
    m = random_spd(n, seed, spread)
    k = data.draw(st.integers(1, n))
    idx = IndexSet.of(data.draw(st.permutations(range(n)))[:k])
    sub = principal_submatrix(m, idx)
    lo, hi = m.eigenvalues[-1], m.eigenvalues[0]
    ev = sub.eigenvalues
    assert ev[-1] >= lo * (1 - 1e-10) and ev[0] <= hi * (1 + 1e-10)
    y = log_det(sub)
    assert k * math.log(lo) - 1e-9 <= y <= k * math.log(hi) + 1e-9


@settings(max_examples=40, deadline=None)
@given(case=matrix_case, data=st.data())
def test_permutation_invariance(case, data):
    n, seed, spread = case
    m = random_spd(n, seed, spread)
    perm = np.array(data.draw(st.permutations(range(n))))
    p = np.eye(n)[perm]
    assert log_det(p @ m.entries @ p.T) == pytest.approx(log_det(m), abs=1e-10)


@settings(max_examples=25, deadline=None)
@given(case=matrix_case)
def test_orthogonal_invariance(case):
    n, seed, spread = case
    m = random_spd(n, seed, spread)
    q = gen_haar_orthogonal(n, seed)
    a = q.T @ m.entries @ q
    np.testing.assert_allclose(
        eigenvalues_sym((a + a.T) / 2, "jacobi").eigenvalues, m.eigenvalues, atol=1e-10 * m.eigenvalues[0]
    )
