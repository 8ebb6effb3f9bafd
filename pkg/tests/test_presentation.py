import itertools

import pytest
from hypothesis import given, settings, strategies as st

from modyangian.presentation import (
    D1,
    D2,
    E,
    F_,
    ElementParseError,
    Gen,
    LevelBoundError,
    NCPoly,
    dprime_expand,
    is_normal,
    nilpotency_cap,
    nilpotency_witness,
    normal_form,
    p_center_b,
    parse_element,
    rtt_to_drinfeld,
    straighten,
    verify_rtt_relation,
)
from modyangian.scalars import GF

F2, F3, F5 = GF(2), GF(3), GF(5)


def P(text, F=F3):
    return parse_element(text, F)


@pytest.mark.parametrize("r,expected", [(0, "1"), (1, "-d1(1)"), (2, "-d1(2) + d1(1)^2")])
def test_dprime_examples(r, expected):
    assert dprime_expand(1, r, F5) == P(expected, F5)


def test_dprime_inverts_d_series():
    F = F5
    for r in range(1, 6):
        acc = NCPoly.zero(F)
        for t in range(r + 1):
            d = NCPoly.one(F) if t == 0 else NCPoly.d(F, 2, t)
            acc = acc + d * dprime_expand(2, r - t, F)
        assert straighten(acc).is_zero()


def test_ef_commutator_example():
    assert straighten(P("e(1)*f(1)")) == P("f(1)*e(1) + d1(1) - d2(1)")
    assert str(straighten(P("e(1)*f(1)"))) == "d1(1) - d2(1) + f(1)*e(1)"


def test_ed1_example():
    # d1(1) e(1) = e(1) d1(1) + e(1), written in normal order
    assert straighten(P("e(1)*d1(1)")) == P("d1(1)*e(1) - e(1)")


def test_restricted_f_square_vanishes_at_p2():
    assert straighten(P("f(1)*f(1)", F2), mode="restricted").is_zero()
    assert not straighten(P("f(1)*f(1)", F2)).is_zero()


@pytest.mark.parametrize("i,j,r,expected", [
    (1, 1, 2, "d1(2)"),
    (1, 2, 1, "e(1)"),
    (2, 2, 1, "d2(1)"),
    (2, 1, 1, "f(1)"),
])
def test_rtt_to_drinfeld_examples(i, j, r, expected):
    assert straighten(rtt_to_drinfeld(i, j, r, F3)) == P(expected)


@pytest.mark.parametrize("args", [(1, 1, 1, 1, 1, 1), (1, 1, 1, 2, 2, 1), (2, 3, 1, 2, 2, 1)])
def test_rtt_examples(args):
    assert verify_rtt_relation(*args, F3)


def test_rtt_in_restricted_mode():
    for i, j, k, l in itertools.product((1, 2), repeat=4):
        assert verify_rtt_relation(2, 2, i, j, k, l, F3, mode="restricted")


def test_p_center_examples():
    assert p_center_b(1, 1, F2).is_zero()
    assert p_center_b(1, 2, F2) == P("d1(1) + d1(1)^2", F2)


@pytest.mark.parametrize("p", [2, 3])
def test_low_p_center_coefficients_vanish(p):
    F = GF(p)
    for i in (1, 2):
        for N in range(1, p):
            assert straighten(p_center_b(i, N, F), mode="restricted").is_zero()


@pytest.mark.parametrize("x,p,expected", [("f(1)", 3, 3), ("f(1)", 2, 2), ("0", 3, 1)])
def test_nilpotency_examples(x, p, expected):
    assert nilpotency_witness(P(x, GF(p))) == expected


@pytest.mark.parametrize("p", [2, 3])
def test_nilpotency_of_f1_plus_f2(p):
    F = GF(p)
    x = P("f(1) + f(2)", F)
    n = nilpotency_witness(x)
    assert n <= nilpotency_cap(x)
    assert n <= 4 if p == 2 else n <= 9
    assert straighten(x ** n, mode="restricted").is_zero()
    assert not straighten(x ** (n - 1), mode="restricted").is_zero()


def test_nilpotency_rejects_non_f_elements():
    with pytest.raises(ValueError):
        nilpotency_witness(P("e(1)"))


def test_level_bound_is_enforced():
    with pytest.raises(LevelBoundError):
        normal_form((Gen(E, 9),), 3)
    with pytest.raises(LevelBoundError):
        normal_form((Gen(E, 5), Gen(F_, 5)), 3, L=8)


def test_unknown_strategy_or_mode():
    with pytest.raises(ValueError):
        normal_form((Gen(E, 1),), 3, strategy="random")
    with pytest.raises(ValueError):
        normal_form((Gen(E, 1),), 3, mode="weird")


def test_parse_element_errors_are_positioned():
    with pytest.raises(ElementParseError) as exc:
        parse_element("e(1) * g(2)", F3)
    assert exc.value.pos == 7
    with pytest.raises(ElementParseError):
        parse_element("e(1) +", F3)


def test_parse_t_generator_and_dprime():
    assert straighten(P("t(1,2;1)")) == P("e(1)")
    assert straighten(P("d1'(1)")) == P("-d1(1)")


gen_st = st.builds(Gen, st.sampled_from([F_, D1, D2, E]), st.integers(1, 3))
word_st = st.lists(gen_st, min_size=1, max_size=4).map(tuple)


@settings(max_examples=80, deadline=None)
@given(p=st.sampled_from([2, 3, 5]), w=word_st)
def test_normal_forms_are_sorted_and_levels_do_not_grow(p, w):
    nf = normal_form(w, p, L=24)
    total = sum(g.level for g in w)
    for word in nf:
        assert is_normal(word)
        assert sum(g.level for g in word) <= total


@settings(max_examples=80, deadline=None)
@given(p=st.sampled_from([2, 3, 5]), w=word_st, v=word_st, a=st.integers(0, 4), b=st.integers(0, 4))
def test_straighten_laws(p, w, v, a, b):
    F = GF(p)
    x, y = NCPoly(F, {w: 1}), NCPoly(F, {v: 1})
    sx = straighten(x, L=24)
    assert straighten(sx, L=24) == sx
    assert straighten(x.scale(a) + y.scale(b), L=24) == sx.scale(a) + straighten(y, L=24).scale(b)
    assert straighten(x, strategy="rightmost", L=24) == sx


@settings(max_examples=40, deadline=None)
@given(p=st.sampled_from([2, 3]), w=word_st, v=word_st)
def test_straightening_respects_products(p, w, v):
    # NF(x y) = NF(NF(x) NF(y))
    F = GF(p)
    x, y = NCPoly(F, {w: 1}), NCPoly(F, {v: 1})
    assert straighten(x * y, L=24) == straighten(straighten(x, L=24) * straighten(y, L=24), L=24)


def test_restricted_mode_kills_only_e_f_powers():
    F = F2
    assert not straighten(P("d1(1)*d1(1)", F), mode="restricted").is_zero()
    assert straighten(P("e(2)*e(2)", F), mode="restricted").is_zero()


def test_ncpoly_printing_and_arithmetic():
    x = P("2*f(1)^2 + e(1)")
    assert str(x) == "e(1) - f(1)^2"
    assert x - x == NCPoly.zero(F3)
    assert (x * NCPoly.one(F3)) == x
    assert x.max_level() == 1
