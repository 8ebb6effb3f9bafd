"""Reduced enveloping algebras U_chi(gl_2n) for chi = (e, .) and modules induced from p.

Words are tuples of matrix units (a, b).  The straightening order puts the
negative part m first, then the Levi part h, then the nilradical of p; inside
a block units are ordered by degree col(a) - col(b) descending, then
lexicographically by (col(b), row(b), col(a), row(a)).
Besides [e_ab, e_cd] = delta_bc e_ad - delta_da e_cb, p consecutive equal
units are replaced using the central elements x^p - x^[p] - chi(x)^p:
e_ab^p -> chi(e_ab)^p for a != b and e_aa^p -> e_aa.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field as dc_field
from functools import lru_cache

import numpy as np

from .scalars import FieldSpec, GF, identity, kernel, matmul, zeros
from .spinning import BudgetExceeded, IrreducibilityResult, irreducibility
from .wside import LeviModule, Pyramid, build_pyramid, rectangular_nilpotent

__all__ = [
    "ChiForm",
    "InducedModule",
    "DEFAULT_DIM_BUDGET",
    "chi_of",
    "u_straighten",
    "induce",
    "m_chi_invariants",
    "p_power_identities",
    "simplicity_check",
    "weight_bookkeeping",
]

DEFAULT_DIM_BUDGET = 10_000


@dataclass(frozen=True)
class ChiForm:
    n: int
    values: tuple  # ((a, b), value) for the nonzero values

    def __call__(self, a: int, b: int) -> int:
        return dict(self.values).get((a, b), 0)

    def as_matrix(self) -> np.ndarray:
        """Entry [a-1, b-1] is chi(e_{a,b})."""
        M = np.zeros((2 * self.n, 2 * self.n), dtype=np.int64)
        for (a, b), v in self.values:
            M[a - 1, b - 1] = v
        return M


@lru_cache(maxsize=None)
def chi_of(n: int) -> ChiForm:
    """chi(x) = trace(e x); so chi(e_{a,b}) = e[b, a]."""
    e = rectangular_nilpotent(n)
    vals = []
    for a in range(1, 2 * n + 1):
        for b in range(1, 2 * n + 1):
            v = int(e[b - 1, a - 1])
            if v:
                vals.append(((a, b), v))
    return ChiForm(n, tuple(vals))


def _key(pyr: Pyramid, u: tuple[int, int]) -> tuple:
    a, b = u
    deg = pyr.col(b) - pyr.col(a)
    block = 0 if deg < 0 else (1 if deg == 0 else 2)
    return (block, deg, pyr.col(b), pyr.row(b), pyr.col(a), pyr.row(a))


class _UStraightener:
    def __init__(self, n: int, p: int):
        self.pyr = build_pyramid(n)
        self.p = p
        self.chi = chi_of(n)
        self.memo: dict = {}

    def nf(self, w: tuple) -> dict:
        hit = self.memo.get(w)
        if hit is not None:
            return hit
        p = self.p
        res: dict = {}
        run = self._power_run(w)
        if run is not None:
            pos, (a, b) = run
            rest = w[:pos] + w[pos + p:]
            if a == b:
                sub = [(1, w[:pos] + ((a, b),) + w[pos + p:])]
            else:
                c = pow(self.chi(a, b), p, p)
                sub = [(c, rest)] if c else []
            for c, nw in sub:
                for x, v in self.nf(nw).items():
                    res[x] = (res.get(x, 0) + c * v) % p
        else:
            k = self._descent(w)
            if k < 0:
                res = {w: 1}
            else:
                (a, b), (c, d) = w[k], w[k + 1]
                pre, post = w[:k], w[k + 2:]
                pieces = [(1, pre + ((c, d), (a, b)) + post)]
                if b == c:
                    pieces.append((1, pre + ((a, d),) + post))
                if d == a:
                    pieces.append((p - 1, pre + ((c, b),) + post))
                for coef, nw in pieces:
                    for x, v in self.nf(nw).items():
                        res[x] = (res.get(x, 0) + coef * v) % p
        res = {x: v for x, v in res.items() if v}
        self.memo[w] = res
        return res

    def _power_run(self, w):
        p = self.p
        run = 1
        for i in range(1, len(w)):
            run = run + 1 if w[i] == w[i - 1] else 1
            if run >= p:
                return i - p + 1, w[i]
        return None

    def _descent(self, w):
        pyr = self.pyr
        for k in range(len(w) - 1):
            if _key(pyr, w[k]) > _key(pyr, w[k + 1]):
                return k
        return -1


@lru_cache(maxsize=None)
def _ustr(n: int, p: int) -> _UStraightener:
    return _UStraightener(n, p)


def u_straighten(word, n: int, p: int) -> dict:
    """Normal form of a word of matrix units in U_chi(gl_2n), as {word: coefficient mod p}."""
    w = tuple((int(a), int(b)) for a, b in word)
    for a, b in w:
        if not (1 <= a <= 2 * n and 1 <= b <= 2 * n):
            raise ValueError(f"e({a},{b}) is not a unit of gl_{2 * n}")
    return _ustr(n, p).nf(w)


# ---------------------------------------------------------------------------
# induced modules
# ---------------------------------------------------------------------------


@dataclass
class InducedModule:
    """U_chi(g) (x)_{U_0(p)} seed, with basis (m-monomial) x (seed basis)."""

    field: FieldSpec
    n: int
    seed: LeviModule
    monomials: list  # exponent tuples over m_units
    m_units: list
    action: dict = dc_field(repr=False)  # (a, b) -> matrix

    @property
    def dim(self) -> int:
        return len(self.monomials) * self.seed.dim

    def operators(self) -> list[np.ndarray]:
        return [self.action[k] for k in sorted(self.action)]

    def matrix(self, a: int, b: int) -> np.ndarray:
        return self.action[(a, b)]


def _m_order(pyr: Pyramid) -> list[tuple[int, int]]:
    units = pyr.m_units()
    return sorted(units, key=lambda u: _key(pyr, u))


def induce(seed: LeviModule, budget: int = DEFAULT_DIM_BUDGET) -> InducedModule:
    F = seed.field
    if F.m != 1:
        raise ValueError("induction is implemented over prime fields")
    p, n = F.p, seed.n
    pyr = build_pyramid(n)
    units = _m_order(pyr)
    n_mono = p ** len(units)
    dim = n_mono * seed.dim
    if dim > budget:
        raise BudgetExceeded(f"induced dimension {dim} exceeds the budget {budget}")
    monomials = list(itertools.product(range(p), repeat=len(units)))
    mono_index = {m: k for k, m in enumerate(monomials)}
    seed_dim = seed.dim
    seed_units = {}
    for a in pyr.boxes():
        for b in pyr.boxes():
            if pyr.col(a) <= pyr.col(b):
                seed_units[(a, b)] = seed.unit_matrix(a, b)

    def mono_word(m):
        w = []
        for u, e in zip(units, m):
            w.extend([u] * e)
        return tuple(w)

    def split(word):
        # normal word = m-part, then p-part
        k = 0
        while k < len(word) and pyr.col(word[k][0]) > pyr.col(word[k][1]):
            k += 1
        return word[:k], word[k:]

    def exps(mword):
        cnt = Counter(mword)
        return tuple(cnt.get(u, 0) for u in units)

    action = {}
    for a in pyr.boxes():
        for b in pyr.boxes():
            A = zeros(dim)
            for mi, m in enumerate(monomials):
                nf = u_straighten(((a, b),) + mono_word(m), n, p)
                for word, c in nf.items():
                    mpart, ppart = split(word)
                    target = mono_index[exps(mpart)]
                    # p-part acts on the seed, rightmost factor first
                    P = identity(seed_dim)
                    for u in reversed(ppart):
                        P = matmul(F, seed_units[u], P)
                    if not P.any():
                        continue
                    blk = A[target * seed_dim:(target + 1) * seed_dim, mi * seed_dim:(mi + 1) * seed_dim]
                    A[target * seed_dim:(target + 1) * seed_dim, mi * seed_dim:(mi + 1) * seed_dim] = (
                        blk + c * P) % p
            action[(a, b)] = A
    return InducedModule(F, n, seed, monomials, units, action)


def m_chi_invariants(V: InducedModule) -> np.ndarray:
    """Basis of {v : (x - chi(x)) v = 0 for x in m}."""
    F = V.field
    chi = chi_of(V.n)
    if not V.m_units:
        return identity(V.dim)
    blocks = []
    for a, b in V.m_units:
        A = V.matrix(a, b)
        c = chi(a, b) % F.p
        blocks.append(F.vsub(A, F.vmul(identity(V.dim), c)) if c else A)
    return kernel(F, np.vstack(blocks))


def p_power_identities(V: InducedModule) -> dict:
    """x^p - x^[p] = chi(x)^p as operators, for every matrix unit x."""
    F = V.field
    p = F.p
    chi = chi_of(V.n)
    results = {}
    for (a, b), A in sorted(V.action.items()):
        P = identity(V.dim)
        for _ in range(p):
            P = matmul(F, P, A)
        lhs = F.vsub(P, A) if a == b else P
        want = F.vmul(identity(V.dim), pow(chi(a, b), p, p))
        results[f"e({a},{b})"] = bool(np.array_equal(lhs, want))
    return results


def simplicity_check(V: InducedModule, seed: int = 0, random_spins: int = 200,
                     budget: int | None = None) -> IrreducibilityResult:
    kwargs = {} if budget is None else {"budget": budget}
    return irreducibility(V.field, V.operators(), V.dim, seed=seed, random_spins=random_spins, **kwargs)


def weight_bookkeeping(V: InducedModule) -> dict:
    """Compare the t-weights of V with seed weights plus weights of m-monomials."""
    F = V.field
    p = F.p
    n = V.n
    diag = [V.matrix(i, i) for i in range(1, 2 * n + 1)]
    is_diag = all(np.array_equal(D, np.diag(np.diag(D))) for D in diag)
    observed = Counter(tuple(int(D[k, k]) for D in diag) for k in range(V.dim))
    seed = V.seed
    seed_diag = [seed.unit_matrix(i, i) for i in range(1, 2 * n + 1)]
    seed_weights = [tuple(int(D[k, k]) for D in seed_diag) for k in range(seed.dim)]
    predicted = Counter()
    for m in V.monomials:
        shift = [0] * (2 * n)
        for (a, b), e in zip(V.m_units, m):
            shift[a - 1] += e
            shift[b - 1] -= e
        for w in seed_weights:
            predicted[tuple((x + s) % p for x, s in zip(w, shift))] += 1
    return {"diagonal": is_diag, "passed": is_diag and observed == predicted,
            "distinct_weights": len(observed)}
