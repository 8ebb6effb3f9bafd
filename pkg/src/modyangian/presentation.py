"""Drinfeld-generator words for the Yangian of gl_2 and their PBW normal forms.

Words are tuples of :class:`Gen`.  The normal order is

    f-block < d1-block < d2-block < e-block,  levels ascending within a block,

so a word is in normal form exactly when it is sorted.  Straightening repeatedly
rewrites an out-of-order adjacent pair ``x y`` (``x > y``) using the defining
relations, written here in the form "x y = y x + lower terms":

* ``d_i^(r) d_j^(s)`` commute,
* ``d_i^(r) f^(s) = f^(s) d_i^(r) + sgn_i sum_{t<r} f^(r+s-1-t) d_i^(t)``
  with ``sgn_1 = -1``, ``sgn_2 = +1``,
* ``e^(r) d_i^(s) = d_i^(s) e^(r) - sgn'_i sum_{t<s} d_i^(t) e^(r+s-1-t)``
  with ``sgn'_1 = +1``, ``sgn'_2 = -1``,
* ``e^(r) f^(s) = f^(s) e^(r) - sum_{t<r+s} d1'^(t) d2^(r+s-1-t)``,
* ``e^(r) e^(s)`` and ``f^(r) f^(s)`` for ``r > s`` via their commutators.

None of these increases the total superscript sum, and each strictly lowers
(superscript sum, inversions), so straightening terminates.  Coefficients
produced by the relations are integers, so normal forms are cached over F_p and
scaled into the working field afterwards.

In *restricted* mode monomials containing ``(e^(r))^p`` or ``(f^(r))^p`` are
discarded: these elements are central, so the two-sided ideal they generate is
spanned by normal monomials in which some e- or f-exponent is at least p.
Powers of the d-generators are never reduced symbolically.
"""

from __future__ import annotations

import re
import sys
from functools import lru_cache
from math import comb
from typing import Iterable, NamedTuple

from .scalars import FieldSpec, GF

__all__ = [
    "F_", "D1", "D2", "E",
    "Gen",
    "NCPoly",
    "LevelBoundError",
    "NilpotencyCapError",
    "ElementParseError",
    "DEFAULT_LEVEL_BOUND",
    "straighten",
    "normal_form",
    "dprime_expand",
    "rtt_to_drinfeld",
    "verify_rtt_relation",
    "rtt_relation_sides",
    "p_center_b",
    "nilpotency_witness",
    "nilpotency_cap",
    "pbw_exponents",
    "is_normal",
    "parse_element",
]

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))

F_, D1, D2, E = 0, 1, 2, 3
_FAMILY_NAMES = {F_: "f", D1: "d1", D2: "d2", E: "e"}

DEFAULT_LEVEL_BOUND = 8


class LevelBoundError(RuntimeError):
    """A generator level exceeded the configured bound L."""


class NilpotencyCapError(RuntimeError):
    pass


class Gen(NamedTuple):
    family: int
    level: int

    def __str__(self):
        return f"{_FAMILY_NAMES[self.family]}({self.level})"


Word = tuple  # tuple[Gen, ...]


def is_normal(word: Word) -> bool:
    return all(word[k] <= word[k + 1] for k in range(len(word) - 1))


def pbw_exponents(word: Word) -> dict[str, dict[int, int]]:
    """Exponent maps (level -> exponent) for the f, d1, d2 and e blocks."""
    if not is_normal(word):
        raise ValueError("word is not in normal order")
    out = {"f": {}, "d1": {}, "d2": {}, "e": {}}
    for g in word:
        block = out[_FAMILY_NAMES[g.family]]
        block[g.level] = block.get(g.level, 0) + 1
    return out


# ---------------------------------------------------------------------------
# noncommutative polynomials
# ---------------------------------------------------------------------------


class NCPoly:
    """Finite linear combination of words with coefficients in ``field``."""

    __slots__ = ("field", "terms")

    def __init__(self, field: FieldSpec, terms: dict | None = None):
        self.field = field
        self.terms = {w: c for w, c in (terms or {}).items() if c}

    # constructors
    @classmethod
    def zero(cls, F: FieldSpec) -> "NCPoly":
        return cls(F)

    @classmethod
    def one(cls, F: FieldSpec, c: int = 1) -> "NCPoly":
        return cls(F, {(): F.coerce(c)})

    @classmethod
    def gen(cls, F: FieldSpec, family: int, level: int) -> "NCPoly":
        if level == 0:
            if family in (D1, D2):
                return cls.one(F)
            return cls.zero(F)
        if level < 0:
            raise ValueError("negative level")
        return cls(F, {(Gen(family, level),): 1})

    @classmethod
    def e(cls, F, r):
        return cls.gen(F, E, r)

    @classmethod
    def f(cls, F, r):
        return cls.gen(F, F_, r)

    @classmethod
    def d(cls, F, i, r):
        return cls.gen(F, {1: D1, 2: D2}[i], r)

    # algebra
    def __add__(self, other: "NCPoly") -> "NCPoly":
        F = self.field
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = F.add(out.get(w, 0), c)
        return NCPoly(F, out)

    def __neg__(self) -> "NCPoly":
        F = self.field
        return NCPoly(F, {w: F.neg(c) for w, c in self.terms.items()})

    def __sub__(self, other: "NCPoly") -> "NCPoly":
        return self + (-other)

    def scale(self, c) -> "NCPoly":
        F = self.field
        c = F.coerce(c)
        return NCPoly(F, {w: F.mul(c, v) for w, v in self.terms.items()})

    def __mul__(self, other) -> "NCPoly":
        if not isinstance(other, NCPoly):
            return self.scale(self.field.coerce(other))
        F = self.field
        out: dict = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                out[w] = F.add(out.get(w, 0), F.mul(c1, c2))
        return NCPoly(F, out)

    def __rmul__(self, c) -> "NCPoly":
        return self.scale(self.field.coerce(c))

    def __pow__(self, k: int) -> "NCPoly":
        result = NCPoly.one(self.field)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self.field == other.field and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def max_level(self) -> int:
        return max((g.level for w in self.terms for g in w), default=0)

    def families(self) -> set[int]:
        return {g.family for w in self.terms for g in w}

    def is_normal(self) -> bool:
        return all(is_normal(w) for w in self.terms)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda wc: (len(wc[0]), wc[0]))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        F = self.field
        pieces = []
        for w, c in self.sorted_terms():
            neg = False
            if F.m == 1 and c == F.p - 1 and F.p > 2:
                neg, c = True, 1
            mono = _word_str(w)
            if not mono:
                body = F.fmt(c)
            elif c == 1:
                body = mono
            else:
                s = F.fmt(c)
                body = f"({s})*{mono}" if "+" in s else f"{s}*{mono}"
            pieces.append(("-" if neg else "+", body))
        out = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    __repr__ = __str__


def _word_str(w: Word) -> str:
    parts = []
    k = 0
    while k < len(w):
        j = k
        while j < len(w) and w[j] == w[k]:
            j += 1
        parts.append(str(w[k]) if j - k == 1 else f"{w[k]}^{j - k}")
        k = j
    return "*".join(parts)


# ---------------------------------------------------------------------------
# rewriting
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _dprime_terms(i: int, r: int, p: int) -> tuple:
    """d_i'^(r) as ((coef, sorted word), ...) over F_p."""
    fam = D1 if i == 1 else D2
    if r == 0:
        return ((1, ()),)
    acc: dict = {}
    for t in range(1, r + 1):
        for c, w in _dprime_terms(i, r - t, p):
            key = tuple(sorted((Gen(fam, t),) + w))
            acc[key] = (acc.get(key, 0) - c) % p
    return tuple((c, w) for w, c in sorted(acc.items()) if c)


def dprime_expand(i: int, r: int, field: FieldSpec | int) -> NCPoly:
    """d_i'^(r), the u^-r coefficient of d_i(u)^-1, as a polynomial in the d_i^(s)."""
    F = field if isinstance(field, FieldSpec) else GF(field)
    if i not in (1, 2) or r < 0:
        raise ValueError("need i in {1,2} and r >= 0")
    return NCPoly(F, {w: c for c, w in _dprime_terms(i, r, F.p)})


def _swap_rule(x: Gen, y: Gen, p: int) -> list[tuple[int, Word]]:
    """x y = sum of c * word, for an adjacent pair with x > y."""
    out: list[tuple[int, Word]] = [(1, (y, x))]
    fx, r = x
    fy, s = y
    if fx in (D1, D2) and fy in (D1, D2):
        return out
    if fx in (D1, D2) and fy == F_:
        sign = -1 if fx == D1 else 1
        for t in range(r):
            w = (Gen(F_, r + s - 1 - t),) + ((Gen(fx, t),) if t else ())
            out.append((sign % p, w))
        return out
    if fx == E and fy in (D1, D2):
        sign = -1 if fy == D1 else 1  # minus the bracket coefficient
        for t in range(s):
            w = ((Gen(fy, t),) if t else ()) + (Gen(E, r + s - 1 - t),)
            out.append((sign % p, w))
        return out
    if fx == E and fy == F_:
        n = r + s - 1
        for t in range(n + 1):
            d2 = (Gen(D2, n - t),) if n - t else ()
            for c, w in _dprime_terms(1, t, p):
                out.append(((-c) % p, w + d2))
        return out
    if fx == fy == E:
        # r > s
        for t in range(1, s):
            out.append((1, (Gen(E, t), Gen(E, r + s - 1 - t))))
        for t in range(1, r):
            out.append((p - 1, (Gen(E, t), Gen(E, r + s - 1 - t))))
        return out
    if fx == fy == F_:
        for t in range(1, r):
            out.append((1, (Gen(F_, t), Gen(F_, r + s - 1 - t))))
        for t in range(1, s):
            out.append((p - 1, (Gen(F_, t), Gen(F_, r + s - 1 - t))))
        return out
    raise AssertionError(f"no rule for {x} {y}")


def _killed(word: Word, p: int) -> bool:
    run = 1
    for k in range(1, len(word)):
        if word[k] == word[k - 1] and word[k].family in (E, F_):
            run += 1
            if run >= p:
                return True
        else:
            run = 1
    return False


class _Straightener:
    """Memoised rewriting.

    With leftmost rewriting the prefix left of the first descent is always
    sorted, so a word is normalised by appending its letters one at a time to
    a normal word; each append only ever rewrites at the junction.  Rightmost
    rewriting is the mirror image (prepending letters from the right).  Both
    recursions are memoised on (normal word, generator).
    """

    def __init__(self, p: int, restricted: bool, strategy: str, L: int):
        if strategy not in ("leftmost", "rightmost"):
            raise ValueError(f"unknown rewrite strategy {strategy!r}")
        self.p = p
        self.restricted = restricted
        self.rightmost = strategy == "rightmost"
        self.L = L
        self.memo: dict = {}
        self._app: dict = {}
        self._pre: dict = {}

    def nf(self, word: Word) -> dict:
        hit = self.memo.get(word)
        if hit is not None:
            return hit
        acc: dict = {(): 1}
        letters = reversed(word) if self.rightmost else word
        for g in letters:
            acc = self._extend(acc, g)
        self.memo[word] = acc
        return acc

    def _extend(self, acc: dict, g: Gen, step=None) -> dict:
        p = self.p
        out: dict = {}
        step = step or (self._prepend if self.rightmost else self._append)
        for w, c in acc.items():
            for nw, v in step(w, g).items():
                out[nw] = (out.get(nw, 0) + c * v) % p
        return {w: v for w, v in out.items() if v}

    def _check(self, rep: Word):
        for g in rep:
            if g.level > self.L:
                raise LevelBoundError(f"rewriting produced {g}, above the level bound {self.L}")

    def _leaf(self, word: Word) -> dict:
        if self.restricted and _killed(word, self.p):
            return {}
        return {word: 1}

    def _append(self, W: Word, y: Gen) -> dict:
        key = (W, y)
        hit = self._app.get(key)
        if hit is not None:
            return hit
        if not W or W[-1] <= y:
            res = self._leaf(W + (y,))
        else:
            p = self.p
            res = {}
            for c, rep in _swap_rule(W[-1], y, p):
                if c == 0:
                    continue
                self._check(rep)
                acc = {W[:-1]: 1}
                for g in rep:
                    acc = self._extend(acc, g, self._append)
                for w, v in acc.items():
                    res[w] = (res.get(w, 0) + c * v) % p
            res = {w: v for w, v in res.items() if v}
        self._app[key] = res
        return res

    def _prepend(self, W: Word, x: Gen) -> dict:
        key = (W, x)
        hit = self._pre.get(key)
        if hit is not None:
            return hit
        if not W or x <= W[0]:
            res = self._leaf((x,) + W)
        else:
            p = self.p
            res = {}
            for c, rep in _swap_rule(x, W[0], p):
                if c == 0:
                    continue
                self._check(rep)
                acc = {W[1:]: 1}
                for g in reversed(rep):
                    acc = self._extend(acc, g, self._prepend)
                for w, v in acc.items():
                    res[w] = (res.get(w, 0) + c * v) % p
            res = {w: v for w, v in res.items() if v}
        self._pre[key] = res
        return res


@lru_cache(maxsize=None)
def _engine(p: int, restricted: bool, strategy: str, L: int) -> _Straightener:
    return _Straightener(p, restricted, strategy, L)


def normal_form(word: Word, p: int, mode: str = "plain", strategy: str = "leftmost",
                L: int = DEFAULT_LEVEL_BOUND) -> dict:
    """Normal form of a single word as {normal word: coefficient mod p}."""
    if mode not in ("plain", "restricted"):
        raise ValueError(f"unknown mode {mode!r}")
    for g in word:
        if g.level > L:
            raise LevelBoundError(f"{g} exceeds the level bound {L}")
    return _engine(p, mode == "restricted", strategy, L).nf(tuple(word))


def straighten(x: NCPoly, mode: str = "plain", strategy: str = "leftmost",
               L: int = DEFAULT_LEVEL_BOUND) -> NCPoly:
    """Rewrite ``x`` as a linear combination of ordered PBW monomials."""
    F = x.field
    out: dict = {}
    for w, c in x.terms.items():
        for nw, v in normal_form(w, F.p, mode, strategy, L).items():
            out[nw] = F.add(out.get(nw, 0), F.mul(c, v))
    return NCPoly(F, out)


# ---------------------------------------------------------------------------
# RTT generators
# ---------------------------------------------------------------------------


def rtt_to_drinfeld(i: int, j: int, r: int, field: FieldSpec | int) -> NCPoly:
    """t_{i,j}^(r) from the Gauss factorisation T(u) = F(u) D(u) E(u)."""
    F = field if isinstance(field, FieldSpec) else GF(field)
    if i not in (1, 2) or j not in (1, 2) or r < 0:
        raise ValueError("need 1 <= i,j <= 2 and r >= 0")
    if r == 0:
        return NCPoly.one(F) if i == j else NCPoly.zero(F)
    d1 = lambda a: NCPoly.d(F, 1, a)
    if (i, j) == (1, 1):
        return d1(r)
    if (i, j) == (1, 2):
        out = NCPoly.zero(F)
        for b in range(1, r + 1):
            out = out + d1(r - b) * NCPoly.e(F, b)
        return out
    if (i, j) == (2, 1):
        out = NCPoly.zero(F)
        for a in range(1, r + 1):
            out = out + NCPoly.f(F, a) * d1(r - a)
        return out
    out = NCPoly.d(F, 2, r)
    for a in range(1, r + 1):
        for c in range(1, r - a + 1):
            out = out + NCPoly.f(F, a) * d1(r - a - c) * NCPoly.e(F, c)
    return out


def rtt_relation_sides(r, s, i, j, k, l, field, mode="plain", L=DEFAULT_LEVEL_BOUND):
    """Normal forms of both sides of the RTT relation for [t_ij^(r), t_kl^(s)]."""
    F = field if isinstance(field, FieldSpec) else GF(field)
    T = lambda a, b, n: rtt_to_drinfeld(a, b, n, F)
    lhs = T(i, j, r) * T(k, l, s) - T(k, l, s) * T(i, j, r)
    rhs = NCPoly.zero(F)
    for t in range(min(r, s)):
        rhs = rhs + T(k, j, t) * T(i, l, r + s - 1 - t) - T(k, j, r + s - 1 - t) * T(i, l, t)
    return straighten(lhs, mode, L=L), straighten(rhs, mode, L=L)


def verify_rtt_relation(r, s, i, j, k, l, field, mode="plain", L=DEFAULT_LEVEL_BOUND) -> bool:
    lhs, rhs = rtt_relation_sides(r, s, i, j, k, l, field, mode, L)
    return lhs == rhs


# ---------------------------------------------------------------------------
# p-centre series and nilpotency
# ---------------------------------------------------------------------------


def p_center_b(i: int, N: int, field: FieldSpec | int, L: int = DEFAULT_LEVEL_BOUND) -> NCPoly:
    """u^-N coefficient of b_i(u) = d_i(u) d_i(u-1) ... d_i(u-p+1).

    Uses (u-j)^-r = sum_k C(r+k-1, k) j^k u^-(r+k), so the u^-n coefficient of
    d_i(u-j) is sum_{1<=r<=n} C(n-1, r-1) j^(n-r) d_i^(r).
    """
    F = field if isinstance(field, FieldSpec) else GF(field)
    if N < 0:
        raise ValueError("N must be non-negative")
    if N > L:
        raise LevelBoundError(f"level {N} exceeds the bound {L}")
    p = F.p
    # series are lists of NCPoly indexed by u-degree, truncated at N
    acc = [NCPoly.one(F)] + [NCPoly.zero(F) for _ in range(N)]
    for j in range(p):
        shifted = [NCPoly.one(F)]
        for n in range(1, N + 1):
            term = NCPoly.zero(F)
            for r in range(1, n + 1):
                c = comb(n - 1, r - 1) * pow(j, n - r, p) % p if n > r else 1
                if c:
                    term = term + NCPoly.d(F, i, r).scale(c)
            shifted.append(term)
        acc = [
            sum((acc[a] * shifted[n - a] for a in range(n + 1)), NCPoly.zero(F))
            for n in range(N + 1)
        ]
    return straighten(acc[N], L=L)


def nilpotency_cap(x: NCPoly) -> int:
    """Power at which an element of the positive f-part must vanish.

    A product of n f-generators of level <= R straightens to words of length n
    and superscript sum <= nR.  A restricted monomial of length n uses at least
    n/(p-1) distinct levels, which forces n <= (p-1)(2R-1).
    """
    p = x.field.p
    R = x.max_level()
    return (p - 1) * (2 * R - 1) + 1


def nilpotency_witness(x: NCPoly, cap: int | None = None, L: int | None = None) -> int:
    """Smallest n with x^n = 0 in the restricted quotient."""
    if any(len(w) == 0 for w in x.terms) or x.families() - {F_}:
        raise ValueError("x must be a combination of nonempty words in the f-generators")
    if x.is_zero():
        return 1
    if cap is None:
        cap = nilpotency_cap(x)
    if L is None:
        L = max(DEFAULT_LEVEL_BOUND, cap * x.max_level())
    y = straighten(x, "restricted", L=L)
    n = 1
    while not y.is_zero():
        if n >= cap:
            raise NilpotencyCapError(f"x^{n} is still nonzero at the cap {cap}")
        y = straighten(y * x, "restricted", L=L)
        n += 1
    return n


# ---------------------------------------------------------------------------
# element syntax:  e(1)*f(1) - d1(2),  t(1,2;3),  d1'(2),  f(1)^2
# ---------------------------------------------------------------------------


class ElementParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        self.text = text
        self.pos = pos
        super().__init__(f"{message} at position {pos}\n  {text}\n  {' ' * pos}^")


_ELEM_TOKEN = re.compile(
    r"\s*(?:(?P<t>t\(\s*(\d+)\s*,\s*(\d+)\s*;\s*(\d+)\s*\))"
    r"|(?P<g>(d1'|d2'|d1|d2|e|f)\(\s*(\d+)\s*\))"
    r"|(?P<int>\d+)|(?P<op>[-+*^()]))"
)


def parse_element(text: str, field: FieldSpec | int) -> NCPoly:
    """Parse an element; t- and d'-generators are expanded immediately."""
    F = field if isinstance(field, FieldSpec) else GF(field)
    tokens = []
    pos = 0
    s = text.rstrip()
    while pos < len(s):
        m = _ELEM_TOKEN.match(s, pos)
        if not m:
            lead = len(s[pos:]) - len(s[pos:].lstrip())
            raise ElementParseError("unexpected character", text, pos + lead)
        if m.group("t"):
            i, j, r = int(m.group(2)), int(m.group(3)), int(m.group(4))
            if i not in (1, 2) or j not in (1, 2):
                raise ElementParseError("t indices must be 1 or 2", text, m.start("t"))
            tokens.append(("atom", rtt_to_drinfeld(i, j, r, F), m.start("t")))
        elif m.group("g"):
            name, r = m.group(6), int(m.group(7))
            if name in ("e", "f") and r == 0:
                raise ElementParseError(f"{name} has no level-0 generator", text, m.start("g"))
            if name.endswith("'"):
                val = dprime_expand(int(name[1]), r, F)
            else:
                fam = {"d1": D1, "d2": D2, "e": E, "f": F_}[name]
                val = NCPoly.gen(F, fam, r)
            tokens.append(("atom", val, m.start("g")))
        elif m.group("int"):
            tokens.append(("int", int(m.group("int")), m.start("int")))
        else:
            tokens.append(("op", m.group("op"), m.start("op")))
        pos = m.end()
    return _ElementParser(tokens, F, text, len(s)).parse()


class _ElementParser:
    def __init__(self, tokens, F, text, end):
        self.toks = tokens
        self.F = F
        self.text = text
        self.end = end
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("eof", None, self.end)

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def parse(self) -> NCPoly:
        val = self.expr()
        t = self.peek()
        if t[0] != "eof":
            raise ElementParseError("unexpected token", self.text, t[2])
        return val

    def expr(self) -> NCPoly:
        neg = False
        if self.peek()[0] == "op" and self.peek()[1] in "+-":
            neg = self.take()[1] == "-"
        acc = self.term()
        if neg:
            acc = -acc
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self) -> NCPoly:
        acc = self.factor()
        while True:
            t = self.peek()
            if t[0] == "op" and t[1] == "*":
                self.take()
                acc = acc * self.factor()
            elif t[0] in ("atom", "int") or (t[0] == "op" and t[1] == "("):
                acc = acc * self.factor()
            else:
                return acc

    def factor(self) -> NCPoly:
        t = self.take()
        if t[0] == "atom":
            base = t[1]
        elif t[0] == "int":
            base = NCPoly.one(self.F, t[1])
        elif t[0] == "op" and t[1] == "(":
            base = self.expr()
            close = self.take()
            if close[1] != ")":
                raise ElementParseError("expected ')'", self.text, close[2])
        else:
            raise ElementParseError("expected a generator, number or '('", self.text, t[2])
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            k = self.take()
            if k[0] != "int":
                raise ElementParseError("expected an integer exponent", self.text, k[2])
            base = base ** k[1]
        return base
