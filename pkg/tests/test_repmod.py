import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from modyangian.repmod import (
    ContractViolation,
    MatrixModule,
    NotCyclicError,
    are_isomorphic,
    direct_sum,
    evaluation_module,
    gauss_operators,
    gl2_baby_verma,
    highest_weight_vectors,
    irreducibility_test,
    is_irreducible,
    simple_head,
    spin,
    tensor,
    tensor_all,
    trivial_module,
    twist,
    verify_module,
)
from modyangian.scalars import GF, matmul
from modyangian.series import LowerSeries, elementary_symmetric_series, is_restricted
from modyangian.spinning import irreducibility, projective_points, quotient_action

F2, F3, F5 = GF(2), GF(3), GF(5)


def ls(F, *c):
    return LowerSeries(F, (1,) + c)


def comm(F, A, B):
    return F.vsub(matmul(F, A, B), matmul(F, B, A))


@pytest.mark.parametrize("p", [2, 3, 5])
def test_evaluation_modules_are_gl2_modules(p):
    F = GF(p)
    for a, b in itertools.product(range(p), repeat=2):
        M = evaluation_module(F, a, b)
        e = {(i, j): M.t(i, j, 1) for i in (1, 2) for j in (1, 2)}
        for (i, j), (k, l) in itertools.product(e, repeat=2):
            want = np.zeros((M.dim, M.dim), dtype=np.int64)
            if j == k:
                want = F.vadd(want, e[(i, l)])
            if l == i:
                want = F.vsub(want, e[(k, j)])
            assert np.array_equal(comm(F, e[(i, j)], e[(k, l)]), want)


def test_evaluation_module_examples():
    M = evaluation_module(F3, 2, 0)
    assert M.dim == 3
    e12 = M.t(1, 2, 1)
    assert e12[0, 1] == 2 and e12[1, 2] == 2
    N = evaluation_module(F5, 3, 1)
    assert N.dim == 3
    one = evaluation_module(F3, 1, 1)
    assert one.dim == 1
    assert one.t(1, 1, 1).tolist() == [[1]]
    assert not one.t(2, 1, 1).any()


def test_tensor_with_trivial_module():
    M = evaluation_module(F3, 2, 0)
    assert tensor(M, trivial_module(F3)) == M
    assert tensor(trivial_module(F3), M) == M


def test_tensor_level_two_is_product_of_level_one():
    M, N = evaluation_module(F3, 1, 0), evaluation_module(F3, 2, 0)
    T = tensor(M, N)
    assert T.dim == 6
    for i, j in itertools.product((1, 2), repeat=2):
        want = sum(np.kron(M.t(i, k, 1), N.t(k, j, 1)) for k in (1, 2)) % 3
        assert np.array_equal(T.t(i, j, 2), want)
    assert T.level_support == 2


def test_twist_examples():
    M = evaluation_module(F3, 2, 0)
    assert twist(M, LowerSeries.one(F3)) == M
    T = twist(trivial_module(F2), ls(F2, 1))
    assert T.t(1, 1, 1).tolist() == [[1]] and T.t(2, 2, 1).tolist() == [[1]]


def test_twist_rejects_non_restricted_series():
    M = evaluation_module(F3, 1, 0)
    f = ls(F3, 0, 1)  # N = u^2 + 1 has no roots in F_3
    assert not is_restricted(f)
    with pytest.raises(ContractViolation):
        twist(M, f)
    twist(M, f, restricted=False)


@settings(max_examples=30, deadline=None)
@given(a=st.lists(st.integers(0, 2), max_size=2), b=st.lists(st.integers(0, 2), max_size=2))
def test_twist_composition(a, b):
    M = tensor(evaluation_module(F3, 1, 0), evaluation_module(F3, 2, 1))
    f, g = LowerSeries.from_roots(F3, a), LowerSeries.from_roots(F3, b)
    assert twist(twist(M, f), g) == twist(M, f * g)


def test_twist_moves_highest_weight():
    # twisting L(l1/l2 realized by roots, 1) by l2 multiplies both eigenvalue series by l2
    M = evaluation_module(F3, 2, 0)
    f = ls(F3, 1)
    hw = highest_weight_vectors(twist(M, f))
    assert len(hw) == 1
    assert hw[0].lambda1 == ls(F3, 2) * f
    assert hw[0].lambda2 == f


@pytest.mark.parametrize("a,b", list(itertools.product(range(3), repeat=2)))
def test_highest_weight_of_evaluation_module(a, b):
    hw = highest_weight_vectors(evaluation_module(F3, a, b))
    assert len(hw) == 1 and hw[0].space_dim == 1
    assert hw[0].lambda1 == ls(F3, a) and hw[0].lambda2 == ls(F3, b)


def test_highest_weight_of_tensor_is_product():
    alphas, betas = (1, 2), (0, 0)
    M = tensor_all(evaluation_module(F3, a, b) for a, b in zip(alphas, betas))
    hw = highest_weight_vectors(M)
    assert len(hw) == 1
    assert hw[0].lambda1 == elementary_symmetric_series(F3, alphas)
    assert str(hw[0].lambda1) == "1 + 2u^-2"
    assert hw[0].lambda2 == LowerSeries.one(F3)


def test_highest_weight_space_of_direct_sum():
    M = direct_sum(trivial_module(F3), trivial_module(F3))
    hw = highest_weight_vectors(M)
    assert hw and hw[0].space_dim == 2


def test_spin_examples():
    M = evaluation_module(F3, 2, 0)
    assert len(spin(M, [0, 0, 0])) == 0
    assert len(spin(M, [1, 0, 0])) == 3
    S = direct_sum(M, M)
    assert len(spin(S, [1, 0, 0, 0, 0, 0])) == 3


def test_irreducibility_examples():
    T = tensor(evaluation_module(F3, 1, 0), evaluation_module(F3, 2, 0))
    res = irreducibility_test(T)
    assert res.verdict is True and res.certified and res.method == "exhaustive"
    assert T.dim == 6
    assert is_irreducible(trivial_module(F3))
    D = direct_sum(evaluation_module(F3, 0, 0), evaluation_module(F3, 0, 0))
    res = irreducibility_test(D)
    assert res.verdict is False and res.witness is not None


@pytest.mark.parametrize("first,second,sub", [((2, 0), (0, 1), 3), ((0, 1), (2, 0), 6)])
def test_badly_ordered_tensors(first, second, sub):
    # [0 - 1] = 2 > [2 - 1] = 1, so neither order satisfies the ordering condition;
    # both happen to be reducible, with these submodule dimensions
    T = tensor(evaluation_module(F3, *first), evaluation_module(F3, *second))
    res = irreducibility_test(T)
    assert res.verdict is False and res.submodule_dim == sub


def test_strategies_agree_on_small_modules():
    # exhaustive versus Norton on the same matrices
    for factors in [((1, 0), (2, 0)), ((2, 0), (1, 0)), ((0, 0), (2, 1)), ((2, 0), (2, 0))]:
        M = tensor_all(evaluation_module(F3, a, b) for a, b in factors)
        ex = irreducibility(F3, M.operators(), M.dim)
        nor = irreducibility(F3, M.operators(), M.dim, budget=1)
        assert ex.method == "exhaustive"
        assert ex.verdict == nor.verdict


def test_simple_head_of_baby_verma():
    Z = gl2_baby_verma(F3, 0, 0)
    assert Z.dim == 3
    assert Z.t(1, 2, 1)[0, 1] == 0  # e12 v1 = 0 v0
    H = simple_head(Z, [1, 0, 0])
    assert H.dim == 1
    M = evaluation_module(F3, 2, 0)
    assert simple_head(M, [1, 0, 0]) == M


def test_simple_head_requires_cyclic_vector():
    M = direct_sum(evaluation_module(F3, 1, 0), evaluation_module(F3, 1, 0))
    with pytest.raises(NotCyclicError):
        simple_head(M, [1, 0, 1, 0])


@pytest.mark.parametrize("p", [2, 3])
def test_verify_module_on_evaluation_modules(p):
    F = GF(p)
    for a, b in itertools.product(range(p), repeat=2):
        rep = verify_module(evaluation_module(F, a, b))
        assert rep.passed, rep.failures


def test_verify_module_detects_corruption():
    M = tensor(evaluation_module(F3, 1, 0), evaluation_module(F3, 2, 0))
    A = M.t(1, 1, 1).copy()
    A[0, 0] = (A[0, 0] + 1) % 3
    bad = M.with_action((1, 1, 1), A)
    rep = verify_module(bad)
    assert not rep.passed
    assert any(f.get("check") == "rtt" for f in rep.failures)


def test_verify_module_flags_non_restricted_twist():
    M = twist(evaluation_module(F3, 1, 0), ls(F3, 0, 1), restricted=False)
    assert not verify_module(M).passed
    assert verify_module(M, restricted=False).passed


def test_gauss_operators_reproduce_t():
    M = tensor(evaluation_module(F3, 1, 0), evaluation_module(F3, 2, 0))
    ops = gauss_operators(M, 4)
    # t12(u) = d1(u) e(u) at order u^-1: e^(1) = t12^(1)
    assert np.array_equal(ops["e"][1], M.t(1, 2, 1))
    assert np.array_equal(ops["f"][1], M.t(2, 1, 1))


def test_json_round_trip():
    M = tensor(evaluation_module(F3, 1, 0), evaluation_module(F3, 2, 0))
    assert MatrixModule.loads(M.dumps()) == M
    assert M.to_json()["schema"] == 1


def test_stored_matrices_are_read_only():
    M = evaluation_module(F3, 2, 0)
    with pytest.raises(ValueError):
        M.t(1, 2, 1)[0, 0] = 1


def test_isomorphism_separates_highest_weights():
    F = F3
    comps = [c for c in itertools.product(range(3), repeat=2)]
    seen = {}
    for a, b in itertools.product(comps, repeat=2):
        M = tensor_all(evaluation_module(F, x, y) for x, y in zip(a, b))
        hw = highest_weight_vectors(M)
        key = tuple((str(h.lambda1), str(h.lambda2)) for h in hw)
        seen.setdefault(key, []).append((a, b))
    # different restricted pairs never share an eigenvalue profile unless their series agree
    for key, members in seen.items():
        series = {(str(elementary_symmetric_series(F, a)), str(elementary_symmetric_series(F, b))) for a, b in members}
        assert len(series) == 1


def test_are_isomorphic():
    M = tensor(evaluation_module(F3, 1, 0), evaluation_module(F3, 2, 0))
    perm = np.array([[0, 1], [1, 0]])
    P = np.kron(np.eye(3, dtype=np.int64), perm) % 3
    conj = MatrixModule(F3, M.dim, {k: matmul(F3, matmul(F3, P, A), P) for k, A in M.action.items()})
    assert are_isomorphic(M, conj) is True
    assert are_isomorphic(M, evaluation_module(F3, 2, 0)) is False
    assert are_isomorphic(evaluation_module(F3, 1, 0), evaluation_module(F3, 2, 1)) is False


def test_joint_kernel_nonzero_on_constructed_modules():
    for a, b in itertools.product(itertools.product(range(2), repeat=2), repeat=2):
        M = tensor_all(evaluation_module(F2, x, y) for x, y in zip(a, b))
        assert highest_weight_vectors(M)


def test_projective_points_and_quotient():
    pts = list(projective_points(F3, 3))
    assert len(pts) == 13
    A = np.array([[1, 1], [0, 1]])
    Q, comp = quotient_action(F3, A, np.array([[1, 0]]))
    assert Q.tolist() == [[1]] and comp == [1]
