import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from modyangian.scalars import (
    GF,
    EchelonBasis,
    FieldScalar,
    FieldSpec,
    bracket,
    frobenius_fix,
    identity,
    inverse,
    kernel,
    matmul,
    rank,
    row_reduce,
    solve,
)

FIELDS = [(2, 1), (2, 2), (3, 1), (5, 1), (3, 2), (2, 3)]


def test_composite_characteristic_rejected():
    with pytest.raises(ValueError):
        GF(4)
    with pytest.raises(ValueError):
        GF(2, 0)


def test_f4_modulus_is_lexicographically_least():
    F = GF(2, 2)
    w = F.generator
    # w^2 = w + 1
    assert F.mul(w, w) == F.add(w, 1)
    assert F.q == 4


@pytest.mark.parametrize("p,m", FIELDS)
def test_every_element_is_fixed_by_q_power(p, m):
    F = GF(p, m)
    for x in F.elements():
        assert F.pow(x, F.q) == x


@pytest.mark.parametrize("p,m", [(2, 1), (2, 2), (3, 1), (5, 1)])
@settings(max_examples=200, deadline=None)
@given(data=st.data())
def test_field_axioms(p, m, data):
    F = GF(p, m)
    el = st.integers(0, F.q - 1)
    a, b, c = data.draw(el), data.draw(el), data.draw(el)
    assert F.add(a, F.add(b, c)) == F.add(F.add(a, b), c)
    assert F.mul(a, F.mul(b, c)) == F.mul(F.mul(a, b), c)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.add(a, F.neg(a)) == 0
    assert F.mul(a, b) == F.mul(b, a)
    if a:
        assert F.mul(a, F.inv(a)) == 1


@pytest.mark.parametrize("p,m", [(2, 1), (2, 2), (3, 1), (5, 1)])
def test_field_axioms_bulk(p, m):
    # 10^4 seeded triples, vectorised
    F = GF(p, m)
    rng = np.random.default_rng(7)
    a, b, c = rng.integers(0, F.q, (3, 10_000))
    assert np.array_equal(F.vmul(a, F.vadd(b, c)), F.vadd(F.vmul(a, b), F.vmul(a, c)))
    assert np.array_equal(F.vmul(a, F.vmul(b, c)), F.vmul(F.vmul(a, b), c))
    assert np.array_equal(F.vadd(a, F.vneg(a)), np.zeros_like(a))


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        GF(5).inv(0)


@pytest.mark.parametrize("p,m,x,expected", [
    (2, 2, 1, True),
    (2, 2, "w", False),
    (3, 1, 2, True),
])
def test_frobenius_fix_examples(p, m, x, expected):
    F = GF(p, m)
    val = FieldScalar(F, F.generator if x == "w" else x)
    assert frobenius_fix(val) is expected


@pytest.mark.parametrize("p,m", [(2, 2), (2, 3), (3, 2), (2, 6), (5, 2), (7, 2)])
def test_frobenius_fix_matches_prime_subfield(p, m):
    F = GF(p, m)
    fixed = {x for x in F.elements() if frobenius_fix(FieldScalar(F, x))}
    assert fixed == set(F.prime_subfield())


@pytest.mark.parametrize("p,n,expected", [(5, 3, 3), (5, -1, 4), (2, 0, 0), (3, 7, 1)])
def test_bracket(p, n, expected):
    assert bracket(GF(p), n) == expected


def test_bracket_outside_prime_subfield():
    F = GF(2, 2)
    with pytest.raises(ValueError):
        bracket(F, FieldScalar(F, F.generator))


def test_scalar_operators():
    F = GF(2, 2)
    w = FieldScalar(F, F.generator)
    assert w * w == w + 1
    assert (w / w) == FieldScalar(F, 1)
    assert w ** 3 == FieldScalar(F, 1)


@pytest.mark.parametrize("M,p,expected", [
    (np.eye(3, dtype=np.int64), 5, 0),
    (np.zeros((2, 3), dtype=np.int64), 2, 3),
    (np.array([[1, 1], [1, 1]]), 2, 1),
])
def test_kernel_examples(M, p, expected):
    F = GF(p)
    K = kernel(F, M)
    assert len(K) == expected
    for v in K:
        assert not matmul(F, M, v[:, None]).any()


def test_kernel_of_all_ones_over_f2():
    K = kernel(GF(2), np.array([[1, 1], [1, 1]]))
    assert K.tolist() == [[1, 1]]


@pytest.mark.parametrize("p,m", [(2, 1), (3, 1), (2, 2), (5, 1)])
@settings(max_examples=60, deadline=None)
@given(rows=st.integers(1, 6), cols=st.integers(1, 6), seed=st.integers(0, 2**32 - 1))
def test_rank_nullity(p, m, rows, cols, seed):
    F = GF(p, m)
    A = np.random.default_rng(seed).integers(0, F.q, (rows, cols))
    K = kernel(F, A)
    assert rank(F, A) + len(K) == cols
    assert rank(F, A) <= min(rows, cols)
    if len(K):
        assert not matmul(F, A, K.T).any()
        assert rank(F, K) == len(K)
    R, piv = row_reduce(F, A)
    R2, piv2 = row_reduce(F, R)
    assert np.array_equal(R, R2) and piv == piv2


def test_solve_and_inverse():
    F = GF(7)
    A = np.array([[2, 1], [1, 1]])
    Ainv = inverse(F, A)
    assert np.array_equal(matmul(F, A, Ainv), identity(2))
    x = solve(F, A, np.array([3, 4]))
    assert np.array_equal(matmul(F, A, x[:, None])[:, 0], [3, 4])
    assert solve(F, np.array([[1, 1], [1, 1]]), np.array([0, 1])) is None


def test_echelon_basis():
    F = GF(3)
    eb = EchelonBasis(F, 3)
    assert eb.add(np.array([1, 2, 0]))
    assert not eb.add(np.array([2, 1, 0]))
    assert eb.add(np.array([0, 0, 1]))
    assert eb.contains(np.array([1, 2, 2]))
    assert len(eb) == 2


def test_field_json_round_trip():
    F = GF(3, 2)
    assert FieldSpec.from_json(F.to_json()) == F
