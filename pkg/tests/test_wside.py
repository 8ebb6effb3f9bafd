import itertools

import numpy as np
import pytest

from modyangian.repmod import evaluation_module
from modyangian.scalars import GF, matmul, rank
from modyangian.series import LowerSeries
from modyangian.suites import walgebra_suite
from modyangian.wside import (
    OrderingConditionError,
    UPElement,
    act_on_vector,
    act_up,
    build_pyramid,
    cross_check_theorem,
    dir_element,
    eta,
    grading_degree,
    levi_baby_verma,
    levi_simple,
    rectangular_nilpotent,
    rho_shift_beta,
    verify_er_lemma,
    w_side_series,
)


def test_pyramid_maps():
    pyr = build_pyramid(3)
    for i in range(1, 4):
        assert (pyr.row(i), pyr.col(i)) == (1, i)
        assert (pyr.row(i + 3), pyr.col(i + 3)) == (2, i)
    assert grading_degree(pyr, 1, 3) == 2
    assert grading_degree(pyr, 6, 4) == -2


def test_rectangular_nilpotent():
    assert not rectangular_nilpotent(1).any()
    e = rectangular_nilpotent(2)
    want = np.zeros((4, 4), dtype=np.int64)
    want[0, 1] = want[2, 3] = 1
    assert np.array_equal(e, want)
    assert rank(GF(5), e) == 2


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_dim_m(n):
    assert len(build_pyramid(n).m_units()) == 2 * n * n - 2 * n


@pytest.mark.parametrize("n", [1, 2, 3])
def test_eta(n):
    pyr = build_pyramid(n)
    for i in range(1, n + 1):
        assert eta(pyr, i, i) == eta(pyr, i + n, i + n) == 2 * (i - n)
    assert eta(pyr, 1, 2 * n) == 0


@pytest.mark.parametrize("n", [1, 2, 3])
def test_dir_element_level_one(n):
    d1 = dir_element(1, 1, n)
    d2 = dir_element(2, 1, n)
    assert d1.terms == {((c, c),): 1 for c in range(1, n + 1)}
    assert d2.terms == {((c + n, c + n),): 1 for c in range(1, n + 1)}


def test_dir_element_truncation_at_n1():
    assert dir_element(1, 2, 1).is_zero()
    assert str(dir_element(2, 2, 1)) == "-E(2,1)*E(1,2)"


def test_dir_element_factors_lie_in_parabolic():
    for n in (2, 3):
        pyr = build_pyramid(n)
        for i, r in itertools.product((1, 2), range(1, n + 3)):
            for word in dir_element(i, r, pyr).terms:
                assert all(pyr.col(a) <= pyr.col(b) for a, b in word)


def test_levi_modules():
    assert levi_baby_verma(2, (0,), (0,)).dim == 2
    assert levi_baby_verma(3, (0, 1), (2, 2)).dim == 9
    M = levi_baby_verma(3, (1, 0), (0, 0))
    assert M.block_weights(1) == (0, 2)  # 1 + 2(2-1) = 3 = 0 mod 3
    assert levi_simple(3, (1, 1), (1, 1)).dim == 1
    assert levi_simple(3, (1, 2), (0, 0)).dim == 6
    assert levi_simple(2, (1, 1), (0, 0)).dim == 4


def test_unshifted_diagonal_eigenvalue_before_reduction():
    # block-1 e11 eigenvalue on zbar: alpha_1 + 2(n-1) = 3 over the integers, 0 mod 3
    M = levi_baby_verma(3, (1, 0), (0, 0))
    assert M.unit_matrix(1, 1)[0, 0] == 3 % 3
    M5 = levi_baby_verma(5, (1, 0), (0, 0))
    assert M5.unit_matrix(1, 1)[0, 0] == 3


def test_act_up_examples():
    M = levi_baby_verma(3, (1, 2), (0, 1))
    n = 2
    for c in (1, 2):
        x = UPElement(n, {((c, c),): 1})
        want = (M.unit_matrix(c, c) + 2 * (c - n) * np.eye(M.dim, dtype=np.int64)) % 3
        assert np.array_equal(act_up(x, M), want)
    assert not act_up(UPElement(n, {((1, 2),): 1}), M).any()
    with pytest.raises(ValueError):
        act_up(UPElement(n, {((2, 1),): 1}), M)


def test_er_lemma_example():
    rep = verify_er_lemma(3, 2, (1, 2), (0, 0), r_max=3)
    assert rep["passed"]
    assert rep["values"]["d1(1)"] == 0  # e_1 = 3 = 0 mod 3
    assert rep["values"]["d1(2)"] == 2
    assert rep["values"]["d1(3)"] == 0


def test_er_lemma_zero_tuples():
    rep = verify_er_lemma(2, 3, (0, 0, 0), (0, 0, 0))
    assert rep["passed"]
    assert all(v == 0 for v in rep["values"].values())


@pytest.mark.parametrize("p,n", [(2, 1), (2, 2), (3, 1), (3, 2)])
def test_er_lemma_exhaustive_small(p, n):
    for tup in itertools.product(range(p), repeat=2 * n):
        assert verify_er_lemma(p, n, tup[:n], tup[n:])["passed"]


def test_er_lemma_detects_a_wrong_module():
    M = levi_baby_verma(3, (1, 1), (0, 0))
    assert verify_er_lemma(3, 2, (1, 1), (0, 0), module=M)["passed"]
    # e_1(2, 1) = 0 differs from e_1(1, 1) = 2, so the mismatch must be reported
    wrong = levi_baby_verma(3, (2, 1), (0, 0))
    rep = verify_er_lemma(3, 2, (1, 1), (0, 0), module=wrong)
    assert not rep["passed"]
    assert {(m["i"], m["r"]) for m in rep["mismatches"]} >= {(1, 1)}


@pytest.mark.parametrize("p,n,alpha,beta", [(3, 2, (1, 2), (0, 1)), (2, 3, (1, 0, 1), (0, 0, 1)), (3, 2, (0, 0), (0, 0))])
def test_d_operators_commute(p, n, alpha, beta):
    F = GF(p)
    M = levi_baby_verma(F, alpha, beta)
    ops = [act_up(dir_element(i, r, n), M) for i in (1, 2) for r in range(1, n + 1)]
    for A, B in itertools.combinations(ops, 2):
        assert np.array_equal(matmul(F, A, B), matmul(F, B, A))


@pytest.mark.parametrize("p", [2, 3, 5])
def test_n1_matches_evaluation_module(p):
    F = GF(p)
    for a, b in itertools.product(range(p), repeat=2):
        M = levi_simple(F, (a,), (b,))
        E = evaluation_module(F, a, b)
        assert np.array_equal(act_up(dir_element(1, 1, 1), M), E.t(1, 1, 1))
        assert np.array_equal(act_up(dir_element(2, 1, 1), M), E.t(2, 2, 1))


def test_cross_check_examples():
    rep = cross_check_theorem(3, (1, 2), (0, 0))
    assert rep["passed"] and rep["dim_levi"] == rep["dim_yangian"] == 6
    # 1 + 3u^-1 + 2u^-2 reduces to 1 + 2u^-2 over F_3
    assert rep["w_series"] == ["1 + 2u^-2", "1"]
    rep = cross_check_theorem(2, (1, 1, 1), (0, 0, 0))
    assert rep["passed"] and rep["dim_levi"] == 8
    rep = cross_check_theorem(3, (2, 1), (2, 1))
    assert rep["passed"] and rep["dim_levi"] == 1


def test_cross_check_requires_ordering():
    with pytest.raises(OrderingConditionError):
        cross_check_theorem(3, (2, 0), (0, 1))


def test_w_side_series_is_elementary_symmetric():
    F = GF(3)
    w1, w2 = w_side_series(levi_simple(F, (1, 2), (0, 1)))
    assert w1 == LowerSeries.from_roots(F, (1, 2))
    assert w2 == LowerSeries.from_roots(F, (0, 1))


def test_act_on_sparse_vector_is_linear():
    M = levi_baby_verma(3, (1, 2), (0, 1))
    x = dir_element(1, 2, 2)
    u, v = {(0, 0): 1}, {(1, 2): 2}
    both = act_on_vector(x, M, {(0, 0): 1, (1, 2): 2})
    a, b = act_on_vector(x, M, u), act_on_vector(x, M, v)
    merged = {k: (a.get(k, 0) + b.get(k, 0)) % 3 for k in set(a) | set(b)}
    assert {k: c for k, c in merged.items() if c} == both


def test_rho_shift_round_trip():
    assert rho_shift_beta(3, (0, 2)) == (2, 1)
    assert rho_shift_beta(3, rho_shift_beta(3, (0, 2)), inverse=True) == (0, 2)


def test_walgebra_suite_samples_beyond_the_exhaustive_limit():
    rep = walgebra_suite(3, 2, seed=5, exhaustive_limit=10, samples=20)
    assert rep["passed"] and not rep["exhaustive"] and rep["checked"] == 20
    again = walgebra_suite(3, 2, seed=5, exhaustive_limit=10, samples=20)
    assert again == rep
