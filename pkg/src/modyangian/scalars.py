"""Finite fields F_p and F_{p^m} and dense linear algebra over them.

Field elements are stored as plain integers in ``range(q)``.  For ``m == 1``
the integer is the residue itself; for ``m > 1`` the base-``p`` digits of the
integer are the coefficients of ``1, w, w^2, ...`` where ``w`` is a root of the
field's defining polynomial.  Residues ``0..p-1`` are therefore always the
prime subfield, whatever ``m`` is.

Matrices are ``numpy`` int64 arrays of such encodings.  All routines treat
their inputs as read-only and return fresh arrays.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np
import sympy

__all__ = [
    "FieldSpec",
    "FieldScalar",
    "GF",
    "bracket",
    "frobenius_fix",
    "row_reduce",
    "rank",
    "kernel",
    "solve",
    "inverse",
    "matmul",
    "identity",
    "zeros",
    "EchelonBasis",
]

# Extension fields use precomputed tables; this caps their size.
MAX_EXTENSION_ORDER = 1024


def _least_irreducible(p: int, m: int) -> tuple[int, ...]:
    """Coefficients (c_0, ..., c_{m-1}, 1) of the least monic irreducible.

    Candidates x^m + c_{m-1}x^{m-1} + ... + c_0 are visited in increasing
    order of the integer sum(c_i p^i), i.e. lexicographically from the top
    non-leading coefficient down.
    """
    x = sympy.symbols("x")
    for code in range(p**m):
        low = [(code // p**i) % p for i in range(m)]
        coeffs_high_first = [1] + low[::-1]
        if sympy.Poly(coeffs_high_first, x, modulus=p).is_irreducible:
            return tuple(low) + (1,)
    raise AssertionError("no irreducible polynomial found")  # unreachable for prime p


@dataclass(frozen=True)
class FieldSpec:
    """The field F_{p^m}, with a fixed defining polynomial.

    ``modulus`` lists the coefficients of the defining polynomial from the
    constant term up (monic, so the last entry is 1).  Use :func:`GF` to get
    cached instances.
    """

    p: int
    m: int = 1
    modulus: tuple[int, ...] = ()

    def __post_init__(self):
        if not (isinstance(self.p, (int, np.integer)) and sympy.isprime(int(self.p))):
            raise ValueError(f"characteristic must be prime, got {self.p!r}")
        if self.m < 1:
            raise ValueError("extension degree must be >= 1")
        if self.p**self.m > MAX_EXTENSION_ORDER and self.m > 1:
            raise ValueError(f"F_{self.p}^{self.m} exceeds the supported size {MAX_EXTENSION_ORDER}")
        if not self.modulus:
            mod = (0, 1) if self.m == 1 else _least_irreducible(self.p, self.m)
            object.__setattr__(self, "modulus", mod)
        if len(self.modulus) != self.m + 1 or self.modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree m")
        if self.m > 1:
            self._build_tables()

    # -- table construction (extension fields only) -------------------------

    def _build_tables(self):
        p, m, q = self.p, self.m, self.q
        digits = np.array([[(a // p**i) % p for i in range(m)] for a in range(q)], dtype=np.int64)
        weights = p ** np.arange(m, dtype=np.int64)
        add = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
        neg = ((-digits) % p) @ weights
        # w^k reduced, for k < 2m - 1
        red = np.zeros((2 * m - 1, m), dtype=np.int64)
        for k in range(2 * m - 1):
            if k < m:
                red[k, k] = 1
            else:
                prev = np.roll(red[k - 1], 1)
                prev[0] = 0
                top = red[k - 1, m - 1]
                prev = (prev - top * np.array(self.modulus[:m])) % p
                red[k] = prev
        conv = np.zeros((q, q, 2 * m - 1), dtype=np.int64)
        for i in range(m):
            for j in range(m):
                conv[:, :, i + j] += digits[:, None, i] * digits[None, :, j]
        mul = ((conv % p) @ red % p) @ weights
        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            inv[a] = int(np.nonzero(mul[a] == 1)[0][0])
        object.__setattr__(self, "_digits", digits)
        object.__setattr__(self, "_reduce_powers", red)
        object.__setattr__(self, "_add", add)
        object.__setattr__(self, "_neg", neg)
        object.__setattr__(self, "_mul", mul)
        object.__setattr__(self, "_inv", inv)

    # -- basic facts ---------------------------------------------------------

    @property
    def q(self) -> int:
        return self.p**self.m

    @property
    def generator(self) -> int:
        """Encoding of w, the class of x modulo the defining polynomial."""
        if self.m == 1:
            raise ValueError("F_p has no distinguished extension generator")
        return self.p

    def elements(self) -> range:
        return range(self.q)

    def prime_subfield(self) -> range:
        return range(self.p)

    def __str__(self):
        return f"F{self.p}" if self.m == 1 else f"F{self.p}^{self.m}"

    # -- scalar arithmetic on encodings --------------------------------------

    def coerce(self, x) -> int:
        """Map a Python int (read mod p) or FieldScalar to an encoding."""
        if isinstance(x, FieldScalar):
            if x.field != self:
                raise ValueError("scalar from a different field")
            return x.value
        return int(x) % self.p

    def add(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.p
        return int(self._add[a, b])

    def sub(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a - b) % self.p
        return int(self._add[a, self._neg[b]])

    def neg(self, a: int) -> int:
        if self.m == 1:
            return (-a) % self.p
        return int(self._neg[a])

    def mul(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a * b) % self.p
        return int(self._mul[a, b])

    def inv(self, a: int) -> int:
        if a % self.q == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.m == 1:
            return pow(int(a), -1, self.p)
        return int(self._inv[a])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        if k < 0:
            return self.pow(self.inv(a), -k)
        if self.m == 1:
            return pow(int(a), k, self.p)
        result, base = 1, int(a)
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    # -- vectorised arithmetic ----------------------------------------------

    def vadd(self, a, b):
        if self.m == 1:
            return (np.asarray(a) + b) % self.p
        return self._add[a, b]

    def vsub(self, a, b):
        if self.m == 1:
            return (np.asarray(a) - b) % self.p
        return self._add[a, self._neg[b]]

    def vneg(self, a):
        if self.m == 1:
            return (-np.asarray(a)) % self.p
        return self._neg[a]

    def vmul(self, a, b):
        if self.m == 1:
            return (np.asarray(a) * b) % self.p
        return self._mul[a, b]

    def array(self, values) -> np.ndarray:
        """Integer-valued array-like (prime subfield, read mod p) or encodings."""
        arr = np.array(values, dtype=np.int64)
        if self.m == 1:
            return arr % self.p
        if arr.size and (arr.min() < 0 or arr.max() >= self.q):
            raise ValueError("encodings out of range")
        return arr

    def fmt(self, a: int) -> str:
        """Human-readable form: residues for F_p, polynomials in w otherwise."""
        a = int(a)
        if self.m == 1 or a < self.p:
            return str(a)
        parts = []
        for i in reversed(range(self.m)):
            c = (a // self.p**i) % self.p
            if not c:
                continue
            mono = "" if i == 0 else ("w" if i == 1 else f"w^{i}")
            if i == 0:
                parts.append(str(c))
            else:
                parts.append(mono if c == 1 else f"{c}{mono}")
        return "+".join(parts)

    def to_json(self) -> dict:
        return {"p": self.p, "m": self.m, "modulus": list(self.modulus)}

    @classmethod
    def from_json(cls, data: dict) -> "FieldSpec":
        spec = GF(data["p"], data.get("m", 1))
        if "modulus" in data and tuple(data["modulus"]) != spec.modulus:
            spec = FieldSpec(data["p"], data.get("m", 1), tuple(data["modulus"]))
        return spec


@functools.lru_cache(maxsize=None)
def GF(p: int, m: int = 1) -> FieldSpec:
    """Cached field constructor."""
    return FieldSpec(int(p), int(m))


@dataclass(frozen=True)
class FieldScalar:
    """An element of a :class:`FieldSpec`, with operator overloading."""

    field: FieldSpec
    value: int

    def __post_init__(self):
        if not 0 <= self.value < self.field.q:
            raise ValueError("encoding out of range")

    @classmethod
    def of(cls, F: FieldSpec, x) -> "FieldScalar":
        return cls(F, F.coerce(x))

    def _other(self, other) -> int:
        if isinstance(other, FieldScalar):
            if other.field != self.field:
                raise ValueError("scalars from different fields")
            return other.value
        if isinstance(other, (int, np.integer)):
            return int(other) % self.field.p
        return NotImplemented

    def _wrap(self, v: int) -> "FieldScalar":
        return FieldScalar(self.field, v)

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.sub(self.value, o))

    def __rsub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.sub(o, self.value))

    def __mul__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.div(self.value, o))

    def __rtruediv__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.div(o, self.value))

    def __neg__(self):
        return self._wrap(self.field.neg(self.value))

    def __pow__(self, k: int):
        return self._wrap(self.field.pow(self.value, k))

    def __eq__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return self.value == o

    def __hash__(self):
        return hash((self.field, self.value))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"FieldScalar({self.field}, {self.field.fmt(self.value)})"

    def __str__(self):
        return self.field.fmt(self.value)


def frobenius_fix(x: FieldScalar) -> bool:
    """True iff x lies in the prime subfield, i.e. x^p == x."""
    return x.field.pow(x.value, x.field.p) == x.value


def bracket(F: FieldSpec, n) -> int:
    """The least natural number congruent to ``n`` modulo p.

    ``n`` may be a Python int (any sign) or a prime-subfield scalar.  Elements
    outside the prime subfield raise ``ValueError``.
    """
    if isinstance(n, FieldScalar):
        if not frobenius_fix(n):
            raise ValueError(f"{n} is not in the prime subfield")
        return n.value
    return int(n) % F.p


# ---------------------------------------------------------------------------
# dense linear algebra
# ---------------------------------------------------------------------------


def zeros(rows: int, cols: int | None = None) -> np.ndarray:
    return np.zeros((rows, rows if cols is None else cols), dtype=np.int64)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def matmul(F: FieldSpec, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    if F.m == 1:
        return (A @ B) % F.p
    p, m = F.p, F.m
    Ad = [(A // p**i) % p for i in range(m)]
    Bd = [(B // p**i) % p for i in range(m)]
    conv = [None] * (2 * m - 1)
    for i in range(m):
        for j in range(m):
            prod = Ad[i] @ Bd[j]
            conv[i + j] = prod if conv[i + j] is None else conv[i + j] + prod
    out = 0
    red = F._reduce_powers
    for l in range(m):
        digit = sum(conv[k] * int(red[k, l]) for k in range(2 * m - 1)) % p
        out = out + digit * p**l
    return np.asarray(out, dtype=np.int64)


def row_reduce(F: FieldSpec, A: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns.  Zero rows are dropped."""
    R = np.array(A, dtype=np.int64, copy=True)
    if R.ndim != 2:
        raise ValueError("expected a 2-d array")
    rows, cols = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            R[[r, k]] = R[[k, r]]
        R[r] = F.vmul(R[r], F.inv(int(R[r, c])))
        col = R[:, c].copy()
        col[r] = 0
        if col.any():
            R = F.vsub(R, F.vmul(col[:, None], R[r][None, :]))
        pivots.append(c)
        r += 1
    return R[:r], pivots


def rank(F: FieldSpec, A: np.ndarray) -> int:
    return len(row_reduce(F, A)[1])


def kernel(F: FieldSpec, A: np.ndarray) -> np.ndarray:
    """Basis of {x : A x = 0}, one vector per row."""
    A = np.asarray(A, dtype=np.int64)
    cols = A.shape[1]
    R, pivots = row_reduce(F, A)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for t, fc in enumerate(free):
        basis[t, fc] = 1
        for i, pc in enumerate(pivots):
            basis[t, pc] = F.neg(int(R[i, fc]))
    return basis


def solve(F: FieldSpec, A: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """One solution x of A x = b, or None when the system is inconsistent."""
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1, 1)
    R, pivots = row_reduce(F, np.hstack([A, b]))
    n = A.shape[1]
    if pivots and pivots[-1] == n:
        return None
    x = np.zeros(n, dtype=np.int64)
    for i, pc in enumerate(pivots):
        x[pc] = R[i, n]
    return x


def inverse(F: FieldSpec, A: np.ndarray) -> np.ndarray:
    n = A.shape[0]
    R, pivots = row_reduce(F, np.hstack([A, identity(n)]))
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return R[:n, n:]


class EchelonBasis:
    """Incrementally grown subspace kept in reduced row echelon form."""

    def __init__(self, F: FieldSpec, dim: int):
        self.F = F
        self.dim = dim
        self.rows = np.zeros((0, dim), dtype=np.int64)
        self.pivots: list[int] = []

    def __len__(self):
        return len(self.pivots)

    def reduce(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=np.int64)
        if not self.pivots:
            return v.copy()
        F = self.F
        coeffs = v[..., self.pivots]
        return F.vsub(v, matmul(F, coeffs, self.rows))

    def add(self, v: np.ndarray) -> bool:
        """Add ``v``; return True if it enlarged the span."""
        w = self.reduce(v)
        nz = np.nonzero(w)[0]
        if nz.size == 0:
            return False
        F = self.F
        pc = int(nz[0])
        w = F.vmul(w, F.inv(int(w[pc])))
        if self.pivots:
            col = self.rows[:, pc]
            if col.any():
                self.rows = F.vsub(self.rows, F.vmul(col[:, None], w[None, :]))
        order = np.searchsorted(np.array(self.pivots, dtype=np.int64), pc)
        self.rows = np.insert(self.rows, order, w, axis=0)
        self.pivots.insert(int(order), pc)
        return True

    def contains(self, v: np.ndarray) -> bool:
        return not self.reduce(v).any()

    def basis(self) -> np.ndarray:
        return self.rows.copy()
