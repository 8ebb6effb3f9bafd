"""The finite W-algebra side for the rectangular nilpotent of Jordan type (n, n).

Boxes are numbered 1..2n along rows; box i (1 <= i <= n) sits in row 1,
box i' = i + n in row 2, both in column i.  Matrix units e_{i,j} of gl_{2n}
have degree col(j) - col(i).  The Levi subalgebra (degree 0) is a sum of n
copies of gl_2, block c spanned by e_{c,c}, e_{c,c'}, e_{c',c}, e_{c',c'}.

Elements of U(p) are stored as integer combinations of words in the shifted
units ~e_{i,j} = e_{i,j} + eta(e_{i,j}), where eta(e_{i,i}) = 2(col(i) - n).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from itertools import product
from typing import Sequence

import numpy as np

from .scalars import FieldSpec, GF, bracket, identity, matmul, zeros
from .series import LowerSeries, elementary_symmetric_series

__all__ = [
    "Pyramid",
    "UPElement",
    "LeviModule",
    "build_pyramid",
    "grading_degree",
    "rectangular_nilpotent",
    "eta",
    "dir_element",
    "levi_baby_verma",
    "levi_simple",
    "act_up",
    "act_on_vector",
    "verify_er_lemma",
    "cross_check_theorem",
    "rho_shift_beta",
    "w_side_series",
    "OrderingConditionError",
]


class OrderingConditionError(ValueError):
    pass


@dataclass(frozen=True)
class Pyramid:
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")

    @property
    def size(self) -> int:
        return 2 * self.n

    def row(self, i: int) -> int:
        self._check(i)
        return 1 if i <= self.n else 2

    def col(self, i: int) -> int:
        self._check(i)
        return i if i <= self.n else i - self.n

    def box(self, row: int, col: int) -> int:
        return col if row == 1 else col + self.n

    def _check(self, i):
        if not 1 <= i <= 2 * self.n:
            raise ValueError(f"box {i} outside 1..{2 * self.n}")

    def boxes(self) -> range:
        return range(1, 2 * self.n + 1)

    def degree(self, i: int, j: int) -> int:
        return self.col(j) - self.col(i)

    def m_units(self) -> list[tuple[int, int]]:
        """Matrix units of negative degree."""
        return [(a, b) for a in self.boxes() for b in self.boxes() if self.degree(a, b) < 0]


@lru_cache(maxsize=None)
def build_pyramid(n: int) -> Pyramid:
    return Pyramid(n)


def grading_degree(pyr: Pyramid, i: int, j: int) -> int:
    return pyr.degree(i, j)


def rectangular_nilpotent(n: int) -> np.ndarray:
    """e = sum_{i<n} e_{i,i+1} + e_{i',(i+1)'} as an integer 2n x 2n matrix."""
    e = np.zeros((2 * n, 2 * n), dtype=np.int64)
    for i in range(1, n):
        e[i - 1, i] = 1
        e[n + i - 1, n + i] = 1
    return e


def eta(pyr: Pyramid, i: int, j: int) -> int:
    """eta(e_{i,j}) as an integer (zero off the diagonal)."""
    return 2 * (pyr.col(i) - pyr.n) if i == j else 0


@dataclass
class UPElement:
    """Integer combination of words in the shifted units ~e_{i,j}."""

    n: int
    terms: dict = dc_field(default_factory=dict)  # tuple of (i, j) -> int

    def __post_init__(self):
        self.terms = {w: c for w, c in self.terms.items() if c}

    def reduced(self, p: int) -> "UPElement":
        return UPElement(self.n, {w: c % p for w, c in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other):
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return UPElement(self.n, out)

    def __len__(self):
        return len(self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for w, c in sorted(self.terms.items(), key=lambda t: (len(t[0]), t[0])):
            mono = "*".join(f"E({i},{j})" for i, j in w) or "1"
            pieces.append((c, mono))
        out = ""
        for k, (c, mono) in enumerate(pieces):
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            body = mono if mag == 1 else f"{mag}*{mono}"
            out += (("-" if sign == "-" else "") + body) if k == 0 else f" {sign} {body}"
        return out


def dir_element(i: int, r: int, pyr: Pyramid | int) -> UPElement:
    """d_i^(r) in U(p) as a signed sum of words ~e_{i1,j1} ... ~e_{is,js}.

    Sequences satisfy: total degree + s = r; each factor has col(i_t) <= col(j_t);
    row(i_1) = row(j_s) = i; row(j_t) = row(i_{t+1}); and between factors
    col(j_t) < col(i_{t+1}) when row(j_t) >= i, col(j_t) >= col(i_{t+1}) otherwise.
    The sign is (-1)^(r-s) times (-1)^#{t < s : row(j_t) <= i-1}.
    """
    pyr = pyr if isinstance(pyr, Pyramid) else build_pyramid(pyr)
    if i not in (1, 2) or r < 1:
        raise ValueError("need i in {1, 2} and r >= 1")
    return UPElement(pyr.n, dict(_dir_terms(pyr, i, r)))


@lru_cache(maxsize=None)
def _dir_terms(pyr: Pyramid, i: int, r: int) -> tuple:
    terms: dict = {}
    boxes = list(pyr.boxes())

    def extend(seq, budget, flips, start_candidates):
        # choose the next factor (a, b) with a in start_candidates
        for a in start_candidates:
            for b in boxes:
                deg = pyr.col(b) - pyr.col(a)
                if deg < 0 or deg + 1 > budget:
                    continue
                nseq = seq + ((a, b),)
                rest = budget - deg - 1
                if rest == 0 and pyr.row(b) == i:
                    s = len(nseq)
                    sign = (-1) ** ((r - s) + flips)
                    terms[nseq] = terms.get(nseq, 0) + sign
                if rest > 0:
                    rb = pyr.row(b)
                    if rb >= i:
                        nxt = [x for x in boxes if pyr.row(x) == rb and pyr.col(b) < pyr.col(x)]
                    else:
                        nxt = [x for x in boxes if pyr.row(x) == rb and pyr.col(b) >= pyr.col(x)]
                    extend(nseq, rest, flips + (1 if rb <= i - 1 else 0), nxt)

    extend((), r, 0, [x for x in boxes if pyr.row(x) == i])
    return tuple(sorted((w, c) for w, c in terms.items() if c))


# ---------------------------------------------------------------------------
# Levi modules
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LeviModule:
    """Tensor product over the n gl_2 blocks, inflated to p (nilradical acts as 0).

    Block c has highest weight (a_c, b_c) = (alpha_c + 2(n-c), beta_c + 2(n-c))
    and basis w_0..w_{dim_c - 1} with
    e_{c,c} w_k = (a-k) w_k, e_{c',c'} w_k = (b+k) w_k, e_{c',c} w_k = w_{k+1},
    e_{c,c'} w_k = k(a-b-k+1) w_{k-1}.
    """

    field: FieldSpec
    n: int
    alpha: tuple
    beta: tuple
    kind: str  # "baby_verma" or "simple"
    block_dims: tuple

    @property
    def pyramid(self) -> Pyramid:
        return build_pyramid(self.n)

    @property
    def dim(self) -> int:
        out = 1
        for d in self.block_dims:
            out *= d
        return out

    def block_weights(self, c: int) -> tuple[int, int]:
        F = self.field
        shift = (2 * (self.n - c)) % F.p
        return F.add(self.alpha[c - 1], shift), F.add(self.beta[c - 1], shift)

    # basis indices are tuples (k_1, ..., k_n); flat index is row-major
    def flat(self, ks: Sequence[int]) -> int:
        idx = 0
        for k, d in zip(ks, self.block_dims):
            idx = idx * d + k
        return idx

    def unflat(self, idx: int) -> tuple[int, ...]:
        ks = []
        for d in reversed(self.block_dims):
            ks.append(idx % d)
            idx //= d
        return tuple(reversed(ks))

    def zbar(self) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[0] = 1
        return v

    def unit_on_basis(self, a: int, b: int, ks: tuple) -> tuple[int, tuple] | None:
        """e_{a,b} (unshifted) on a basis tensor: (scalar, new index tuple) or None for zero."""
        pyr = self.pyramid
        F = self.field
        ca, cb = pyr.col(a), pyr.col(b)
        if ca > cb:
            raise ValueError(f"e({a},{b}) is not in the parabolic")
        if ca < cb:
            return None
        c = ca
        k = ks[c - 1]
        A, B = self.block_weights(c)
        ra, rb = pyr.row(a), pyr.row(b)
        kk = k % F.p
        if ra == rb == 1:
            return F.sub(A, kk), ks
        if ra == rb == 2:
            return F.add(B, kk), ks
        if ra == 2 and rb == 1:  # lowering
            if k + 1 >= self.block_dims[c - 1]:
                return None
            return 1, ks[: c - 1] + (k + 1,) + ks[c:]
        # raising e_{c,c'}
        if k == 0:
            return None
        coef = F.mul(kk, F.add(F.sub(A, B), (1 - k) % F.p))
        if coef == 0:
            return None
        return coef, ks[: c - 1] + (k - 1,) + ks[c:]

    def shifted_on_basis(self, a: int, b: int, ks: tuple) -> dict:
        """~e_{a,b} on a basis tensor as {index tuple: coefficient}."""
        F = self.field
        out = {}
        hit = self.unit_on_basis(a, b, ks)
        if hit is not None:
            out[hit[1]] = hit[0]
        sh = eta(self.pyramid, a, b) % F.p
        if sh:
            out[ks] = F.add(out.get(ks, 0), sh)
        return {k: v for k, v in out.items() if v}

    def unit_matrix(self, a: int, b: int, shifted: bool = False) -> np.ndarray:
        M = zeros(self.dim)
        for idx in range(self.dim):
            ks = self.unflat(idx)
            if shifted:
                for nk, c in self.shifted_on_basis(a, b, ks).items():
                    M[self.flat(nk), idx] = c
            else:
                hit = self.unit_on_basis(a, b, ks)
                if hit is not None:
                    M[self.flat(hit[1]), idx] = hit[0]
        return M


def _tuple_in_Fp(F: FieldSpec, xs) -> tuple:
    out = []
    for x in xs:
        v = F.coerce(x)
        if v >= F.p:
            raise ValueError("entries must lie in F_p")
        out.append(v)
    return tuple(out)


def rho_shift_beta(F: FieldSpec | int, beta: Sequence, inverse: bool = False) -> tuple:
    """Translate beta to the weight convention shifted by rho_h = -sum eps_{i'}.

    That convention differs from the one used here by beta -> beta - 1 in each
    coordinate; ``inverse=True`` converts back.
    """
    F = F if isinstance(F, FieldSpec) else GF(F)
    step = 1 if inverse else F.p - 1
    return tuple(F.add(b, step) for b in _tuple_in_Fp(F, beta))


def levi_baby_verma(F: FieldSpec | int, alpha: Sequence, beta: Sequence) -> LeviModule:
    F = F if isinstance(F, FieldSpec) else GF(F)
    a, b = _tuple_in_Fp(F, alpha), _tuple_in_Fp(F, beta)
    if len(a) != len(b) or not a:
        raise ValueError("alpha and beta must be nonempty tuples of equal length")
    return LeviModule(F, len(a), a, b, "baby_verma", (F.p,) * len(a))


def levi_simple(F: FieldSpec | int, alpha: Sequence, beta: Sequence) -> LeviModule:
    F = F if isinstance(F, FieldSpec) else GF(F)
    a, b = _tuple_in_Fp(F, alpha), _tuple_in_Fp(F, beta)
    if len(a) != len(b) or not a:
        raise ValueError("alpha and beta must be nonempty tuples of equal length")
    dims = tuple(bracket(F, F.sub(x, y)) + 1 for x, y in zip(a, b))
    return LeviModule(F, len(a), a, b, "simple", dims)


def act_on_vector(x: UPElement, M: LeviModule, v: dict) -> dict:
    """x applied to a vector given as {index tuple: coefficient}."""
    F = M.field
    pyr = M.pyramid
    out: dict = {}
    for word, c in x.terms.items():
        c = c % F.p
        if c == 0:
            continue
        if any(pyr.col(a) < pyr.col(b) for a, b in word):
            continue
        cur = dict(v)
        for a, b in reversed(word):
            nxt: dict = {}
            for ks, val in cur.items():
                for nk, s in M.shifted_on_basis(a, b, ks).items():
                    nxt[nk] = F.add(nxt.get(nk, 0), F.mul(val, s))
            cur = {k: w for k, w in nxt.items() if w}
            if not cur:
                break
        for ks, val in cur.items():
            out[ks] = F.add(out.get(ks, 0), F.mul(c, val))
    return {k: w for k, w in out.items() if w}


def act_up(x: UPElement, M: LeviModule) -> np.ndarray:
    """Matrix of x on M; words with a factor of positive degree act as zero."""
    pyr = M.pyramid
    for word in x.terms:
        for a, b in word:
            if pyr.col(a) > pyr.col(b):
                raise ValueError(f"e({a},{b}) is not in the parabolic")
    A = zeros(M.dim)
    for idx in range(M.dim):
        img = act_on_vector(x, M, {M.unflat(idx): 1})
        for ks, c in img.items():
            A[M.flat(ks), idx] = c
    return A


def _elementary(F: FieldSpec, values, r: int) -> int:
    return elementary_symmetric_series(F, values).coefficient(r)


def verify_er_lemma(p: int | FieldSpec, n: int, alpha, beta, r_max: int | None = None,
                    module: LeviModule | None = None) -> dict:
    """Check d_i^(r) zbar = e_r(alpha or beta) zbar on the Levi baby Verma module, r <= r_max."""
    F = p if isinstance(p, FieldSpec) else GF(p)
    M = module or levi_baby_verma(F, alpha, beta)
    if M.n != n:
        raise ValueError("tuple length does not match n")
    if r_max is None:
        r_max = n + 2
    alpha, beta = _tuple_in_Fp(F, alpha), _tuple_in_Fp(F, beta)
    z = {(0,) * n: 1}
    mismatches = []
    values = {}
    for i, tup in ((1, alpha), (2, beta)):
        for r in range(1, r_max + 1):
            img = act_on_vector(dir_element(i, r, M.pyramid), M, z)
            want = _elementary(F, tup, r)
            got = img.get((0,) * n, 0)
            scalar = set(img) <= {(0,) * n}
            values[f"d{i}({r})"] = got if scalar else None
            if not scalar or got != want:
                mismatches.append({"i": i, "r": r, "expected": want,
                                   "got": {str(k): v for k, v in sorted(img.items())}})
    return {
        "p": F.p, "n": n, "alpha": list(alpha), "beta": list(beta), "r_max": r_max,
        "passed": not mismatches, "values": values, "mismatches": mismatches,
    }


def w_side_series(M: LeviModule, r_max: int | None = None) -> tuple[LowerSeries, LowerSeries]:
    """d-eigenvalue series read off on the distinguished vector of M."""
    F = M.field
    n = M.n
    r_max = n + 2 if r_max is None else r_max
    z = {(0,) * n: 1}
    coeffs = {1: [], 2: []}
    for i in (1, 2):
        for r in range(1, r_max + 1):
            img = act_on_vector(dir_element(i, r, M.pyramid), M, z)
            if not set(img) <= {(0,) * n}:
                raise AssertionError(f"d{i}({r}) does not act by a scalar on the distinguished vector")
            coeffs[i].append(img.get((0,) * n, 0))
    return LowerSeries(F, (1,) + tuple(coeffs[1])), LowerSeries(F, (1,) + tuple(coeffs[2]))


def cross_check_theorem(p: int | FieldSpec, alpha, beta) -> dict:
    """Compare the Yangian-side tensor module with the Levi simple module."""
    from .classify import satisfies_ordering
    from .repmod import evaluation_module, highest_weight_vectors, tensor_all

    F = p if isinstance(p, FieldSpec) else GF(p)
    a, b = _tuple_in_Fp(F, alpha), _tuple_in_Fp(F, beta)
    if not satisfies_ordering(F, list(zip(a, b))):
        raise OrderingConditionError(f"alpha={a}, beta={b} violate the ordering condition")
    L = levi_simple(F, a, b)
    Y = tensor_all(evaluation_module(F, x, y) for x, y in zip(a, b))
    hw = highest_weight_vectors(Y)
    lam_a = elementary_symmetric_series(F, a)
    lam_b = elementary_symmetric_series(F, b)
    w1, w2 = w_side_series(L)
    y_series = [(str(h.lambda1), str(h.lambda2)) for h in hw]
    ok_dim = L.dim == Y.dim
    ok_y = len(hw) == 1 and hw[0].lambda1 == lam_a and hw[0].lambda2 == lam_b
    ok_w = w1 == lam_a and w2 == lam_b
    return {
        "p": F.p, "alpha": list(a), "beta": list(b),
        "dim_levi": L.dim, "dim_yangian": Y.dim,
        "yangian_series": y_series, "w_series": [str(w1), str(w2)],
        "expected_series": [str(lam_a), str(lam_b)],
        "passed": ok_dim and ok_y and ok_w,
    }
