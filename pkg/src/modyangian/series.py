"""Polynomials in u, polynomials in u^-1 with constant term 1, and their ratios.

A :class:`LowerSeries` ``1 + c_1 u^-1 + ... + c_k u^-k`` is stored exactly; it
corresponds to the monic polynomial ``N(u) = u^k + c_1 u^{k-1} + ... + c_k``
via ``N(u) = u^k lambda(u)``.  Writing ``N(u) = prod (u + a_i)`` the ``a_i`` are
called the *roots* of the series (so ``1 + a u^-1`` has root ``a``).
Trailing zero coefficients are dropped, which means a root equal to zero is
never visible in a series; see :mod:`modyangian.classify` for the consequences.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable

from .scalars import FieldScalar, FieldSpec, GF, bracket

__all__ = [
    "Poly",
    "LowerSeries",
    "RationalSeries",
    "NeedsLargerFieldError",
    "ParseError",
    "is_restricted",
    "restrictedness",
    "product_shifts",
    "elementary_symmetric_series",
    "drinfeld_polynomial",
    "mu_twist_series",
    "series_ratio",
    "root_multisets",
    "artin_schreier",
    "parse_series",
]


class NeedsLargerFieldError(ValueError):
    """A polynomial does not split into linear factors over the working field."""

    def __init__(self, field: FieldSpec, required_degree: int, poly: "Poly"):
        self.field = field
        self.required_degree = required_degree
        self.poly = poly
        super().__init__(
            f"{poly} does not split over {field}; an extension of degree "
            f"{required_degree} over F{field.p} is required"
        )


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        self.text = text
        self.pos = pos
        super().__init__(f"{message} at position {pos}\n  {text}\n  {' ' * pos}^")


# ---------------------------------------------------------------------------
# polynomials in u
# ---------------------------------------------------------------------------


def _strip(coeffs: Iterable[int]) -> tuple[int, ...]:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class Poly:
    """Polynomial in u over ``field``; ``coeffs[i]`` multiplies ``u^i``."""

    field: FieldSpec
    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _strip(self.coeffs))

    @classmethod
    def const(cls, F: FieldSpec, c: int = 1) -> "Poly":
        return cls(F, (c,))

    @classmethod
    def u(cls, F: FieldSpec) -> "Poly":
        return cls(F, (0, 1))

    @classmethod
    def linear(cls, F: FieldSpec, a: int) -> "Poly":
        """u + a."""
        return cls(F, (a, 1))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __add__(self, other: "Poly") -> "Poly":
        F = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return Poly(F, tuple(F.add(x, y) for x, y in zip(a, b)))

    def __neg__(self) -> "Poly":
        return Poly(self.field, tuple(self.field.neg(c) for c in self.coeffs))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def scale(self, c: int) -> "Poly":
        return Poly(self.field, tuple(self.field.mul(c, x) for x in self.coeffs))

    def __mul__(self, other: "Poly") -> "Poly":
        F = self.field
        if not self.coeffs or not other.coeffs:
            return Poly(F, ())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] = F.add(out[i + j], F.mul(a, b))
        return Poly(F, tuple(out))

    def __pow__(self, k: int) -> "Poly":
        result = Poly.const(self.field)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        F = self.field
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        inv_lead = F.inv(other.lead())
        quot = [0] * max(len(rem) - dq, 0)
        for k in range(len(rem) - 1, dq - 1, -1):
            c = F.mul(rem[k], inv_lead)
            if c == 0:
                continue
            quot[k - dq] = c
            for j, b in enumerate(other.coeffs):
                rem[k - dq + j] = F.sub(rem[k - dq + j], F.mul(c, b))
        return Poly(F, tuple(quot)), Poly(F, tuple(rem))

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self) -> "Poly":
        return self.scale(self.field.inv(self.lead()))

    def __call__(self, x: int) -> int:
        F = self.field
        acc = 0
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, x), c)
        return acc

    def shift(self, c: int) -> "Poly":
        """P(u + c)."""
        F = self.field
        lin = Poly(F, (c, 1))
        acc = Poly(F, ())
        for a in reversed(self.coeffs):
            acc = acc * lin + Poly(F, (a,))
        return acc

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def powmod(self, k: int, mod: "Poly") -> "Poly":
        result = Poly.const(self.field) % mod
        base = self % mod
        while k:
            if k & 1:
                result = (result * base) % mod
            base = (base * base) % mod
            k >>= 1
        return result

    def roots(self) -> list[int]:
        """Roots in the working field, with multiplicity (sorted by encoding).

        Found by exhaustive search and repeated division; raises
        :class:`NeedsLargerFieldError` if a non-linear factor is left.
        """
        found, rest = self._split_off_roots()
        if rest.degree > 0:
            raise NeedsLargerFieldError(self.field, self.field.m * rest.splitting_degree(), rest)
        return found

    def roots_in_field(self) -> list[int]:
        """Roots lying in the working field, ignoring any non-split factor."""
        return self._split_off_roots()[0]

    def splits(self) -> bool:
        return self._split_off_roots()[1].degree <= 0

    def _split_off_roots(self) -> tuple[list[int], "Poly"]:
        if self.is_zero():
            raise ValueError("the zero polynomial has no root multiset")
        F = self.field
        rest = self
        found = []
        for x in F.elements():
            lin = Poly(F, (F.neg(x), 1))
            while rest.degree > 0 and rest(x) == 0:
                rest = rest // lin
                found.append(x)
        return found, rest

    def splitting_degree(self) -> int:
        """Degree over the working field of the splitting field.

        Distinct-degree factorisation: the lcm of the degrees of the
        irreducible factors.
        """
        F = self.field
        g = self.monic()
        u = Poly.u(F)
        h = u
        degrees = []
        d = 0
        while g.degree > 0:
            d += 1
            if 2 * d > g.degree:
                degrees.append(g.degree)
                break
            h = h.powmod(F.q, g)
            common = g.gcd(h - u)
            if common.degree > 0:
                degrees.append(d)
                g = g // common
                h = h % g
        return math.lcm(*degrees) if degrees else 1

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        F = self.field
        parts = []
        for i in reversed(range(len(self.coeffs))):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("u" if i == 1 else f"u^{i}")
            parts.append(_term(F, c, mono))
        return _join(parts)


def _coef_str(F: FieldSpec, c: int) -> str:
    s = F.fmt(c)
    return f"({s})" if "+" in s else s


def _term(F: FieldSpec, c: int, mono: str) -> str:
    if not mono:
        return F.fmt(c)
    if c == 1:
        return mono
    return f"{_coef_str(F, c)}{mono}"


def _join(parts: list[str]) -> str:
    return " + ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# lower series and ratios
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LowerSeries:
    """``1 + c_1 u^-1 + ... + c_k u^-k``; ``coeffs = (1, c_1, ..., c_k)``."""

    field: FieldSpec
    coeffs: tuple[int, ...] = (1,)

    def __post_init__(self):
        c = _strip(self.coeffs)
        if not c or c[0] != 1:
            raise ValueError("a lower series must have constant term 1")
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def one(cls, F: FieldSpec) -> "LowerSeries":
        return cls(F, (1,))

    @classmethod
    def from_coefficients(cls, F: FieldSpec, tail: Iterable) -> "LowerSeries":
        """From ``(c_1, ..., c_k)``."""
        return cls(F, (1,) + tuple(F.coerce(c) for c in tail))

    @classmethod
    def from_roots(cls, F: FieldSpec, roots: Iterable) -> "LowerSeries":
        """``prod (1 + a u^-1)`` over the given roots."""
        coeffs = [1]
        for a in roots:
            a = F.coerce(a)
            nxt = coeffs + [0]
            for i in range(1, len(nxt)):
                nxt[i] = F.add(nxt[i], F.mul(a, coeffs[i - 1]))
            coeffs = nxt
        return cls(F, tuple(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coefficient(self, r: int) -> int:
        return self.coeffs[r] if r < len(self.coeffs) else 0

    def numerator_poly(self) -> Poly:
        """N(u) = u^k lambda(u)."""
        return Poly(self.field, tuple(reversed(self.coeffs)))

    def roots(self) -> list[int]:
        """The a_i with N(u) = prod (u + a_i); zero roots are never present."""
        F = self.field
        return sorted(F.neg(x) for x in self.numerator_poly().roots())

    def __mul__(self, other: "LowerSeries") -> "LowerSeries":
        F = self.field
        prod = Poly(F, self.coeffs) * Poly(F, other.coeffs)
        return LowerSeries(F, prod.coeffs)

    def __str__(self) -> str:
        F = self.field
        parts = []
        for r, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if r == 0 else f"u^-{r}"
            parts.append(_term(F, c, mono))
        return _join(parts)


@dataclass(frozen=True)
class RationalSeries:
    """``num / den``, kept with no common factor."""

    num: LowerSeries
    den: LowerSeries

    def __post_init__(self):
        if self.num.field != self.den.field:
            raise ValueError("numerator and denominator over different fields")
        g = self.num.numerator_poly().gcd(self.den.numerator_poly())
        if g.degree > 0:
            F = self.field
            n = self.num.numerator_poly() // g
            d = self.den.numerator_poly() // g
            object.__setattr__(self, "num", LowerSeries(F, tuple(reversed(n.monic().coeffs))))
            object.__setattr__(self, "den", LowerSeries(F, tuple(reversed(d.monic().coeffs))))

    @property
    def field(self) -> FieldSpec:
        return self.num.field

    @classmethod
    def of(cls, x: "LowerSeries | RationalSeries") -> "RationalSeries":
        if isinstance(x, RationalSeries):
            return x
        return cls(x, LowerSeries.one(x.field))

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def __mul__(self, other):
        other = RationalSeries.of(other)
        return RationalSeries(self.num * other.num, self.den * other.den)

    def __truediv__(self, other):
        other = RationalSeries.of(other)
        return RationalSeries(self.num * other.den, self.den * other.num)

    def __eq__(self, other):
        if isinstance(other, LowerSeries):
            other = RationalSeries.of(other)
        if not isinstance(other, RationalSeries):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        return hash((self.num, self.den))

    def u_fraction(self) -> tuple[Poly, Poly]:
        """(A, B) with num/den = A(u)/B(u) and deg A = deg B."""
        u = Poly.u(self.field)
        a = self.num.numerator_poly() * u ** self.den.degree
        b = self.den.numerator_poly() * u ** self.num.degree
        return a, b

    def __str__(self):
        if self.is_polynomial():
            return str(self.num)
        return f"({self.num})/({self.den})"


Seriesish = "LowerSeries | RationalSeries"


def series_ratio(l1, l2) -> RationalSeries:
    return RationalSeries.of(l1) / RationalSeries.of(l2)


def mu_twist_series(f: LowerSeries, lam: LowerSeries) -> LowerSeries:
    """Effect of the twist t(u) -> f(u) t(u) on a d-eigenvalue series."""
    if f.field != lam.field:
        raise ValueError("series over different fields")
    return f * lam


def elementary_symmetric_series(F: FieldSpec, values: Iterable) -> LowerSeries:
    """``prod (1 + a_i u^-1)``; the u^-r coefficient is e_r(a).  Entries must lie in F_p."""
    vals = [F.coerce(v) for v in values]
    for v in vals:
        if v >= F.p:
            raise ValueError(f"{F.fmt(v)} is not in the prime subfield")
    return LowerSeries.from_roots(F, vals)


# ---------------------------------------------------------------------------
# restrictedness
# ---------------------------------------------------------------------------


def _shift_product(N: Poly) -> Poly:
    F = N.field
    out = Poly.const(F)
    for i in range(F.p):
        out = out * N.shift(F.neg(i % F.p))
    return out


def _u_p_minus_u(F: FieldSpec) -> Poly:
    c = [0] * (F.p + 1)
    c[1] = F.neg(1)
    c[F.p] = 1
    return Poly(F, tuple(c))


def product_shifts(lam: LowerSeries) -> tuple[Poly, Poly]:
    """``(prod_{i<p} N(u-i), (u^p - u)^k)`` for ``N(u) = u^k lambda(u)``."""
    N = lam.numerator_poly()
    return _shift_product(N), _u_p_minus_u(lam.field) ** lam.degree


def restrictedness(lam) -> dict:
    """Decide restrictedness and record the criterion used.

    For a polynomial series this is ``prod_i lambda(u-i) = 1`` cleared of
    denominators.  For a ratio ``A/B`` the identity is cross-multiplied:
    ``prod_i N_A(u-i) (u^p-u)^{deg B} = prod_i N_B(u-i) (u^p-u)^{deg A}``.
    """
    if isinstance(lam, LowerSeries) or (isinstance(lam, RationalSeries) and lam.is_polynomial()):
        lam = lam if isinstance(lam, LowerSeries) else lam.num
        lhs, rhs = product_shifts(lam)
        return {"restricted": lhs == rhs, "definition": "polynomial product identity",
                "lhs": str(lhs), "rhs": str(rhs)}
    a, b = lam.num, lam.den
    w = _u_p_minus_u(lam.field)
    lhs = _shift_product(a.numerator_poly()) * w ** b.degree
    rhs = _shift_product(b.numerator_poly()) * w ** a.degree
    return {"restricted": lhs == rhs, "definition": "cross-multiplied product identity",
            "lhs": str(lhs), "rhs": str(rhs)}


def is_restricted(lam, method: str = "product") -> bool:
    """Whether ``lam(u) lam(u-1) ... lam(u-p+1) = 1``.

    ``method="product"`` checks the polynomial identity directly.
    ``method="roots"`` (polynomial series only) checks that N(u) splits with
    every root in F_p, which is equivalent.
    """
    if method == "product":
        return restrictedness(lam)["restricted"]
    if method == "roots":
        if isinstance(lam, RationalSeries):
            if not lam.is_polynomial():
                raise ValueError("the root criterion applies to polynomial series only")
            lam = lam.num
        found, rest = lam.numerator_poly()._split_off_roots()
        return rest.degree <= 0 and all(x < lam.field.p for x in found)
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# Drinfeld polynomials
# ---------------------------------------------------------------------------


def artin_schreier(F: FieldSpec, x: int) -> int:
    """x^p - x; two elements differ by an element of F_p iff these agree."""
    return F.sub(F.pow(x, F.p), x)


def root_multisets(ratio: RationalSeries) -> tuple[list[int], list[int]]:
    """Roots (a_i), (b_i) with ratio = prod(u+a_i)/prod(u+b_i), equal counts."""
    A, B = ratio.u_fraction()
    F = ratio.field
    alphas = sorted(F.neg(x) for x in A.roots())
    betas = sorted(F.neg(x) for x in B.roots())
    return alphas, betas


def drinfeld_polynomial(l1, l2) -> Poly | None:
    """Monic P with l1/l2 = P(u+1)/P(u), or None if there is none.

    The reduced ratio is factored as prod(u+a_i)/prod(u+b_i).  Roots are
    matched within Artin-Schreier classes; each pair contributes
    (u+b)(u+b+1)...(u+a-1).  The identity is checked before returning.
    """
    ratio = series_ratio(l1, l2)
    F = ratio.field
    alphas, betas = root_multisets(ratio)
    classes_a: dict[int, list[int]] = {}
    classes_b: dict[int, list[int]] = {}
    for a in alphas:
        classes_a.setdefault(artin_schreier(F, a), []).append(a)
    for b in betas:
        classes_b.setdefault(artin_schreier(F, b), []).append(b)
    if {k: len(v) for k, v in classes_a.items()} != {k: len(v) for k, v in classes_b.items()}:
        return None
    P = Poly.const(F)
    for key in sorted(classes_a):
        for a, b in zip(sorted(classes_a[key]), sorted(classes_b[key])):
            steps = bracket(F, FieldScalar(F, F.sub(a, b)))
            for j in range(steps):
                P = P * Poly.linear(F, F.add(b, j % F.p))
    A, B = ratio.u_fraction()
    if A * P != B * P.shift(1):
        raise AssertionError("constructed polynomial fails the ratio identity")
    return P


def satisfies_drinfeld_identity(l1, l2, P: Poly) -> bool:
    """Cross-multiplied check of l1/l2 = P(u+1)/P(u)."""
    A, B = series_ratio(l1, l2).u_fraction()
    return A * P == B * P.shift(1)


__all__.append("satisfies_drinfeld_identity")


# ---------------------------------------------------------------------------
# text syntax
# ---------------------------------------------------------------------------

_FIELD_RE = re.compile(r"@\s*F\s*(\d+)\s*(?:\^\s*(\d+))?\s*$")
_TOKEN_RE = re.compile(r"\s*(?:(\d+)|(w)|(u)|([-+*/^()]))")


def parse_series(text: str, field: FieldSpec | None = None):
    """Parse ``1 + 2u^-1 + u^-2`` or ``(...)/(...)``, optionally ending ``@F{p}^{m}``.

    The coefficient ``w`` denotes the generator of an extension field.
    Returns a :class:`LowerSeries` or, when a ``/`` is present, a
    :class:`RationalSeries`.
    """
    body = text
    m = _FIELD_RE.search(text)
    if m:
        F_ann = GF(int(m.group(1)), int(m.group(2) or 1))
        if field is not None and field != F_ann:
            raise ParseError(f"field annotation {F_ann} conflicts with {field}", text, m.start())
        field = F_ann
        body = text[: m.start()]
    if field is None:
        raise ParseError("no field given (append @F<p> or pass a field)", text, len(text))
    return _SeriesParser(body, field, text).parse()


class _SeriesParser:
    # values are polynomials in x = u^-1, as Poly objects (variable renamed)

    def __init__(self, body: str, F: FieldSpec, full: str):
        self.F = F
        self.full = full
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        body_stripped = body.rstrip()
        while pos < len(body_stripped):
            mt = _TOKEN_RE.match(body_stripped, pos)
            if not mt or mt.end() == pos:
                raise ParseError("unexpected character", full, pos + (len(body_stripped[pos:]) - len(body_stripped[pos:].lstrip())))
            kind = "int" if mt.group(1) else "w" if mt.group(2) else "u" if mt.group(3) else "op"
            val = mt.group(mt.lastindex)
            self.tokens.append((kind, val, mt.start(mt.lastindex)))
            pos = mt.end()
        self.i = 0
        self.end = len(body_stripped)

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("eof", "", self.end)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, val):
        tok = self.take()
        if tok[1] != val:
            raise ParseError(f"expected {val!r}", self.full, tok[2])
        return tok

    def parse(self):
        num = self.expr()
        den = None
        if self.peek()[1] == "/":
            self.take()
            den = self.expr()
        tok = self.peek()
        if tok[0] != "eof":
            raise ParseError("unexpected token", self.full, tok[2])
        num_s = self._to_series(num, 0)
        if den is None:
            return num_s
        return RationalSeries(num_s, self._to_series(den, 0))

    def _to_series(self, poly: Poly, pos: int) -> LowerSeries:
        if not poly.coeffs or poly.coeffs[0] != 1:
            raise ParseError("series must have constant term 1", self.full, pos)
        return LowerSeries(self.F, poly.coeffs)

    def expr(self) -> Poly:
        F = self.F
        sign = 1
        if self.peek()[1] in "+-" and self.peek()[0] == "op":
            sign = -1 if self.take()[1] == "-" else 1
        acc = self.term()
        if sign < 0:
            acc = -acc
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def _starts_atom(self, tok) -> bool:
        return tok[0] in ("int", "w", "u") or tok[1] == "("

    def term(self) -> Poly:
        acc = self.power()
        while True:
            tok = self.peek()
            if tok[1] == "*":
                self.take()
                acc = acc * self.power()
            elif self._starts_atom(tok):
                acc = acc * self.power()
            else:
                return acc

    def power(self) -> Poly:
        F = self.F
        tok = self.take()
        if tok[0] == "u":
            if self.peek()[1] != "^":
                raise ParseError("u must carry a non-positive exponent, e.g. u^-1", self.full, tok[2])
            self.take()
            neg = False
            if self.peek()[1] == "-":
                self.take()
                neg = True
            k_tok = self.take()
            if k_tok[0] != "int":
                raise ParseError("expected an integer exponent", self.full, k_tok[2])
            k = int(k_tok[1])
            if k and not neg:
                raise ParseError("positive powers of u are not lower series", self.full, tok[2])
            return Poly(F, (0,) * k + (1,))
        if tok[0] == "int":
            base = Poly(F, (int(tok[1]) % F.p,))
        elif tok[0] == "w":
            if F.m == 1:
                raise ParseError("w needs an extension field (@F<p>^<m>, m > 1)", self.full, tok[2])
            base = Poly(F, (F.generator,))
        elif tok[1] == "(":
            base = self.expr()
            self.expect(")")
        else:
            raise ParseError("expected a term", self.full, tok[2])
        if self.peek()[1] == "^":
            self.take()
            k_tok = self.take()
            if k_tok[0] != "int":
                raise ParseError("expected a non-negative integer exponent", self.full, k_tok[2])
            base = base ** int(k_tok[1])
        return base
