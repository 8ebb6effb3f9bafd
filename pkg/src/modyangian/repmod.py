"""Finite-dimensional Yangian modules given by matrices for the t_{i,j}^(r).

A :class:`MatrixModule` stores the operators of ``t_{i,j}^(r)`` for ``r >= 1``;
``t_{i,j}^(0) = delta_{ij}`` is implicit.  Matrices act on column vectors.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field as dc_field
from math import comb
from typing import Iterable

import numpy as np

from .scalars import (
    EchelonBasis,
    FieldScalar,
    FieldSpec,
    GF,
    bracket,
    identity,
    inverse,
    kernel,
    matmul,
    row_reduce,
    zeros,
)
from .series import LowerSeries, is_restricted
from .spinning import (
    DEFAULT_EXHAUSTIVE_BUDGET,
    BudgetExceeded,
    IrreducibilityResult,
    irreducibility,
    joint_kernel,
    projective_points,
    quotient_action,
)
from .spinning import spin as _spin

__all__ = [
    "MatrixModule",
    "HighestWeightData",
    "ModuleReport",
    "ContractViolation",
    "NotCyclicError",
    "evaluation_module",
    "gl2_module",
    "gl2_baby_verma",
    "trivial_module",
    "direct_sum",
    "tensor",
    "tensor_all",
    "twist",
    "highest_weight_vectors",
    "spin",
    "is_irreducible",
    "irreducibility_test",
    "simple_head",
    "verify_module",
    "gauss_operators",
    "are_isomorphic",
]

PAIRS = ((1, 1), (1, 2), (2, 1), (2, 2))


class ContractViolation(ValueError):
    pass


class NotCyclicError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class MatrixModule:
    field: FieldSpec
    dim: int
    action: dict  # (i, j, r) -> ndarray, r >= 1, nonzero only

    def __post_init__(self):
        clean = {}
        for key, A in self.action.items():
            i, j, r = key
            if (i, j) not in PAIRS or r < 1:
                raise ValueError(f"bad action key {key}")
            A = np.asarray(A, dtype=np.int64)
            if A.shape != (self.dim, self.dim):
                raise ValueError(f"matrix for {key} has shape {A.shape}")
            if A.any():
                A = A.copy()
                A.setflags(write=False)
                clean[(i, j, r)] = A
        object.__setattr__(self, "action", clean)

    @property
    def level_support(self) -> int:
        return max((r for (_, _, r) in self.action), default=0)

    def t(self, i: int, j: int, r: int) -> np.ndarray:
        if r == 0:
            return identity(self.dim) if i == j else zeros(self.dim)
        A = self.action.get((i, j, r))
        return A if A is not None else zeros(self.dim)

    def operators(self) -> list[np.ndarray]:
        return [self.action[k] for k in sorted(self.action)]

    def __eq__(self, other):
        if not isinstance(other, MatrixModule):
            return NotImplemented
        return (
            self.field == other.field
            and self.dim == other.dim
            and self.action.keys() == other.action.keys()
            and all(np.array_equal(self.action[k], other.action[k]) for k in self.action)
        )

    __hash__ = None

    def with_action(self, key, matrix) -> "MatrixModule":
        act = dict(self.action)
        act[key] = matrix
        return MatrixModule(self.field, self.dim, act)

    # -- serialisation -------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "field": self.field.to_json(),
            "dim": self.dim,
            "action": [
                {"i": i, "j": j, "r": r, "entries": [int(x) for x in self.action[(i, j, r)].ravel()]}
                for (i, j, r) in sorted(self.action)
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "MatrixModule":
        if data.get("schema") != 1:
            raise ValueError("unsupported module schema")
        F = FieldSpec.from_json(data["field"])
        n = int(data["dim"])
        act = {}
        for item in data["action"]:
            entries = np.array(item["entries"], dtype=np.int64)
            if entries.size != n * n:
                raise ValueError("wrong number of matrix entries")
            if entries.size and (entries.min() < 0 or entries.max() >= F.q):
                raise ValueError("matrix entries out of range")
            act[(int(item["i"]), int(item["j"]), int(item["r"]))] = entries.reshape(n, n)
        return cls(F, n, act)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def loads(cls, text: str) -> "MatrixModule":
        return cls.from_json(json.loads(text))


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------


def gl2_module(F: FieldSpec, e11, e12, e21, e22) -> MatrixModule:
    """Pull a gl_2-module back along t_{i,j}(u) -> delta_{ij} + e_{i,j} u^-1."""
    mats = {(1, 1, 1): e11, (1, 2, 1): e12, (2, 1, 1): e21, (2, 2, 1): e22}
    dim = np.asarray(e11).shape[0]
    return MatrixModule(F, dim, mats)


def _elt(F: FieldSpec, x) -> int:
    return F.coerce(x)


def evaluation_module(F: FieldSpec, alpha, beta) -> MatrixModule:
    """The simple gl_2-module with highest weight (alpha, beta), alpha - beta in F_p.

    Basis v_k = e21^k xi for 0 <= k <= [alpha - beta].
    """
    a, b = _elt(F, alpha), _elt(F, beta)
    diff = F.sub(a, b)
    if diff >= F.p:
        raise ValueError("alpha - beta must lie in the prime subfield")
    n = bracket(F, diff) + 1
    return _sl2_string(F, a, b, n)


def gl2_baby_verma(F: FieldSpec, alpha, beta) -> MatrixModule:
    """The p-dimensional baby Verma module for gl_2 with highest weight (alpha, beta)."""
    return _sl2_string(F, _elt(F, alpha), _elt(F, beta), F.p)


def _sl2_string(F: FieldSpec, a: int, b: int, n: int) -> MatrixModule:
    e11, e12, e21, e22 = (zeros(n) for _ in range(4))
    for k in range(n):
        kk = k % F.p
        e11[k, k] = F.sub(a, kk)
        e22[k, k] = F.add(b, kk)
        if k + 1 < n:
            e21[k + 1, k] = 1
        if k >= 1:
            # k (a - b - k + 1)
            e12[k - 1, k] = F.mul(kk, F.add(F.sub(a, b), (1 - k) % F.p))
    return gl2_module(F, e11, e12, e21, e22)


def trivial_module(F: FieldSpec, dim: int = 1) -> MatrixModule:
    return MatrixModule(F, dim, {})


def direct_sum(M: MatrixModule, N: MatrixModule) -> MatrixModule:
    if M.field != N.field:
        raise ValueError("modules over different fields")
    n = M.dim + N.dim
    act = {}
    for key in set(M.action) | set(N.action):
        A = zeros(n)
        A[: M.dim, : M.dim] = M.t(*key)
        A[M.dim:, M.dim:] = N.t(*key)
        act[key] = A
    return MatrixModule(M.field, n, act)


def _kron(F: FieldSpec, A, B):
    if F.m == 1:
        return np.kron(A, B) % F.p
    # entrywise products through the multiplication table
    out = F.vmul(np.repeat(np.repeat(A, B.shape[0], 0), B.shape[1], 1), np.tile(B, A.shape))
    return np.asarray(out, dtype=np.int64)


def tensor(M: MatrixModule, N: MatrixModule) -> MatrixModule:
    """Delta(t_{i,j}(u)) = sum_k t_{i,k}(u) (x) t_{k,j}(u)."""
    if M.field != N.field:
        raise ValueError("modules over different fields")
    F = M.field
    n = M.dim * N.dim
    act = {}
    for i, j in PAIRS:
        for r in range(1, M.level_support + N.level_support + 1):
            A = zeros(n)
            for k in (1, 2):
                for s in range(r + 1):
                    X, Y = M.t(i, k, s), N.t(k, j, r - s)
                    if X.any() and Y.any():
                        A = F.vadd(A, _kron(F, X, Y))
            act[(i, j, r)] = A
    return MatrixModule(F, n, act)


def tensor_all(modules: Iterable[MatrixModule]) -> MatrixModule:
    mods = list(modules)
    if not mods:
        raise ValueError("empty tensor product")
    out = mods[0]
    for M in mods[1:]:
        out = tensor(out, M)
    return out


def twist(M: MatrixModule, f: LowerSeries, restricted: bool = True) -> MatrixModule:
    """Pull back along t_{i,j}(u) -> f(u) t_{i,j}(u)."""
    F = M.field
    if f.field != F:
        raise ValueError("series over a different field")
    if restricted and not is_restricted(f):
        raise ContractViolation(f"twisting series {f} is not restricted")
    act = {}
    for i, j in PAIRS:
        for r in range(1, M.level_support + f.degree + 1):
            A = zeros(M.dim)
            for s in range(0, min(r, f.degree) + 1):
                c = f.coefficient(s)
                T = M.t(i, j, r - s)
                if c and T.any():
                    A = F.vadd(A, F.vmul(T, c))
            act[(i, j, r)] = A
    return MatrixModule(F, M.dim, act)


# ---------------------------------------------------------------------------
# highest weights, spinning, irreducibility
# ---------------------------------------------------------------------------


@dataclass
class HighestWeightData:
    vector: np.ndarray
    lambda1: LowerSeries
    lambda2: LowerSeries
    space_dim: int = 1

    def to_json(self):
        return {"vector": [int(x) for x in self.vector], "lambda1": str(self.lambda1),
                "lambda2": str(self.lambda2), "space_dim": self.space_dim}


def _restrict(F, A, S):
    """Coordinates B with A s_i = sum_j B[i, j] s_j, or None if S is not A-stable."""
    eb = EchelonBasis(F, S.shape[1])
    for row in S:
        eb.add(row)
    # S is already in reduced echelon form when it comes from kernel/ spin; solve via pivots
    piv = eb.pivots
    Sr = eb.basis()
    images = matmul(F, S, A.T.copy())
    B = images[:, piv]
    if not np.array_equal(matmul(F, B, Sr), images):
        return None, Sr
    return B, Sr


def highest_weight_vectors(M: MatrixModule) -> list[HighestWeightData]:
    """Vectors killed by every t_{1,2}^(r), split into joint d-eigenvectors.

    On such a vector d_1(u) = t_{1,1}(u) and d_2(u) = t_{2,2}(u).  Only joint
    eigenvectors are returned; a non-semisimple part of the kernel contributes
    its eigenvectors only.
    """
    F = M.field
    L = M.level_support
    ops12 = [M.t(1, 2, r) for r in range(1, L + 1)]
    K = joint_kernel(F, ops12, M.dim)
    if len(K) == 0:
        return []
    spaces = [(row_reduce(F, K)[0], ())]
    diag_ops = [((1, 1), r) for r in range(1, L + 1)] + [((2, 2), r) for r in range(1, L + 1)]
    for (ij, r) in diag_ops:
        A = M.t(ij[0], ij[1], r)
        nxt = []
        for S, vals in spaces:
            B, Sr = _restrict(F, A, S)
            if B is None:
                raise AssertionError("highest-weight space is not stable under d")
            for c in F.elements():
                C = F.vsub(B, F.vmul(identity(len(B)), c))
                coords = kernel(F, C.T.copy())
                if len(coords):
                    nxt.append((row_reduce(F, matmul(F, coords, Sr))[0], vals + (c,)))
        spaces = nxt
    out = []
    for S, vals in spaces:
        lam1 = LowerSeries(F, (1,) + vals[:L])
        lam2 = LowerSeries(F, (1,) + vals[L:])
        for row in S:
            out.append(HighestWeightData(row.copy(), lam1, lam2, len(S)))
    return out


def spin(M: MatrixModule, v) -> np.ndarray:
    """Basis of the submodule generated by v (empty for v = 0)."""
    v = np.asarray(v, dtype=np.int64)
    if not v.any():
        return np.zeros((0, M.dim), dtype=np.int64)
    return _spin(M.field, M.operators(), v, M.dim)


def irreducibility_test(M: MatrixModule, budget: int = DEFAULT_EXHAUSTIVE_BUDGET,
                        seed: int = 0) -> IrreducibilityResult:
    return irreducibility(M.field, M.operators(), M.dim, budget=budget, seed=seed)


def is_irreducible(M: MatrixModule, budget: int = DEFAULT_EXHAUSTIVE_BUDGET, seed: int = 0) -> bool:
    """True/False; raises ValueError when undecided."""
    return bool(irreducibility_test(M, budget, seed))


def simple_head(M: MatrixModule, v, budget: int = DEFAULT_EXHAUSTIVE_BUDGET) -> MatrixModule:
    """Quotient of the cyclic module M = <v> by its unique maximal submodule.

    The maximal submodule is the sum of all proper cyclic submodules, found by
    spinning every line of M.
    """
    F = M.field
    v = np.asarray(v, dtype=np.int64)
    if len(spin(M, v)) != M.dim:
        raise NotCyclicError("v does not generate M")
    if (F.q**M.dim - 1) // (F.q - 1) > budget:
        raise BudgetExceeded("too many lines to enumerate for the head computation")
    rad = EchelonBasis(F, M.dim)
    ops = M.operators()
    for w in projective_points(F, M.dim):
        if rad.contains(w):
            continue
        S = _spin(F, ops, w, M.dim)
        if len(S) < M.dim:
            for row in S:
                rad.add(row)
            if len(rad) == M.dim:
                raise NotCyclicError("M has no unique maximal submodule")
    if rad.contains(v):
        raise NotCyclicError("generator lies in the maximal submodule")
    sub = rad.basis()
    act = {}
    for key, A in M.action.items():
        Q, _ = quotient_action(F, A, sub)
        act[key] = Q
    return MatrixModule(F, M.dim - len(sub), act)


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------


@dataclass
class ModuleReport:
    passed: bool
    level_bound: int
    checks: dict = dc_field(default_factory=dict)
    failures: list = dc_field(default_factory=list)

    def to_json(self) -> dict:
        return {"passed": self.passed, "level_bound": self.level_bound,
                "checks": dict(sorted(self.checks.items())), "failures": self.failures[:20]}


def _series_shift(F, coeffs, m, N, const):
    """Coefficients (through u^-N) of X(u - m) where X(u) = const + sum_r coeffs[r] u^-r."""
    dim = const.shape[0]
    out = [const.copy()] + [zeros(dim) for _ in range(N)]
    for n in range(1, N + 1):
        acc = zeros(dim)
        for r in range(1, n + 1):
            X = coeffs.get(r)
            if X is None:
                continue
            c = comb(n - 1, r - 1) * pow(m, n - r, F.p) % F.p if n > r else 1
            if c:
                acc = F.vadd(acc, F.vmul(X, c))
        out[n] = acc
    return out


def _series_mul(F, A, B, N):
    dim = A[0].shape[0]
    out = []
    for n in range(N + 1):
        acc = zeros(dim)
        for a in range(n + 1):
            if A[a].any() and B[n - a].any():
                acc = F.vadd(acc, matmul(F, A[a], B[n - a]))
        out.append(acc)
    return out


def _shift_product(F, coeffs, const, N):
    """Coefficients of X(u) X(u-1) ... X(u-p+1) through u^-N."""
    acc = None
    for m in range(F.p):
        s = _series_shift(F, coeffs, m, N, const)
        acc = s if acc is None else _series_mul(F, acc, s, N)
    return acc


def gauss_operators(M: MatrixModule, N: int) -> dict:
    """Operators of d_1^(r), d_2^(r), e^(r), f^(r) for 1 <= r <= N.

    From T(u) = F(u) D(u) E(u): d_1 = t_11, e = d_1^-1 t_12, f = t_21 d_1^-1
    and d_2 = t_22 - f d_1 e.
    """
    F = M.field
    n = M.dim
    T = lambda i, j, r: M.t(i, j, r)
    dinv = [identity(n)]
    for r in range(1, N + 1):
        acc = zeros(n)
        for t in range(1, r + 1):
            X = T(1, 1, t)
            if X.any() and dinv[r - t].any():
                acc = F.vsub(acc, matmul(F, X, dinv[r - t]))
        dinv.append(acc)
    e = [zeros(n)]
    f = [zeros(n)]
    for r in range(1, N + 1):
        ae, af = zeros(n), zeros(n)
        for a in range(r + 1):
            b = r - a
            if dinv[a].any() and T(1, 2, b).any():
                ae = F.vadd(ae, matmul(F, dinv[a], T(1, 2, b)))
            if T(2, 1, a).any() and dinv[b].any():
                af = F.vadd(af, matmul(F, T(2, 1, a), dinv[b]))
        e.append(ae)
        f.append(af)
    d1 = [T(1, 1, r) for r in range(N + 1)]
    # f(u) d1(u) e(u), coefficientwise
    fd = _series_mul(F, f, d1, N)
    fde = _series_mul(F, fd, e, N)
    d2 = [identity(n)] + [F.vsub(T(2, 2, r), fde[r]) for r in range(1, N + 1)]
    return {"d1": d1, "d2": d2, "e": e, "f": f, "d1inv": dinv}


def _matpow(F, A, k):
    out = identity(A.shape[0])
    for _ in range(k):
        out = matmul(F, out, A)
    return out


def verify_module(M: MatrixModule, N: int | None = None, restricted: bool = True) -> ModuleReport:
    """Check the RTT relations and (optionally) the restricted conditions through level N.

    * RTT: [t_ij^(r), t_kl^(s)] = sum_{t<min(r,s)} (t_kj^(t) t_il^(r+s-1-t) - t_kj^(r+s-1-t) t_il^(t)),
      all r, s <= N;
    * s_ij(u) = t_ij(u) t_ij(u-1) ... t_ij(u-p+1) equals delta_ij through u^-N;
    * (e^(r))^p = (f^(r))^p = 0 for r <= N;
    * b_i(u) = d_i(u) d_i(u-1) ... d_i(u-p+1) equals 1 through u^-N.
    """
    F = M.field
    p = F.p
    L = M.level_support
    if N is None:
        N = p * (L + 1)
    if N < L:
        raise ValueError("level bound below the level support")
    n = M.dim
    failures = []
    checks = {}
    prod_cache = {}

    def prod(a, x, b, y):
        key = (a, x, b, y)
        hit = prod_cache.get(key)
        if hit is None:
            X, Y = M.t(*a, x), M.t(*b, y)
            hit = matmul(F, X, Y) if (X.any() and Y.any()) else None
            prod_cache[key] = hit
        return hit

    count = 0
    for (i, j), (k, l) in itertools.product(PAIRS, PAIRS):
        for r in range(1, N + 1):
            for s in range(1, N + 1):
                lhs = zeros(n)
                P1, P2 = prod((i, j), r, (k, l), s), prod((k, l), s, (i, j), r)
                if P1 is not None:
                    lhs = F.vadd(lhs, P1)
                if P2 is not None:
                    lhs = F.vsub(lhs, P2)
                rhs = zeros(n)
                for t in range(min(r, s)):
                    u = r + s - 1 - t
                    A = prod((k, j), t, (i, l), u)
                    B = prod((k, j), u, (i, l), t)
                    if A is not None:
                        rhs = F.vadd(rhs, A)
                    if B is not None:
                        rhs = F.vsub(rhs, B)
                count += 1
                if not np.array_equal(lhs, rhs):
                    failures.append({"check": "rtt", "i": i, "j": j, "k": k, "l": l, "r": r, "s": s})
    checks["rtt"] = count

    if restricted:
        for i, j in PAIRS:
            coeffs = {r: M.t(i, j, r) for r in range(1, L + 1)}
            const = identity(n) if i == j else zeros(n)
            s_ser = _shift_product(F, coeffs, const, N)
            for m_ in range(N + 1):
                want = identity(n) if (i == j and m_ == 0) else zeros(n)
                if not np.array_equal(s_ser[m_], want):
                    failures.append({"check": "s", "i": i, "j": j, "N": m_})
        checks["s_series"] = 4 * (N + 1)

        g = gauss_operators(M, N)
        for name in ("e", "f"):
            for r in range(1, N + 1):
                if _matpow(F, g[name][r], p).any():
                    failures.append({"check": f"{name}^p", "r": r})
        checks["ef_pth_powers"] = 2 * N

        for idx, name in ((1, "d1"), (2, "d2")):
            coeffs = {r: g[name][r] for r in range(1, N + 1)}
            b_ser = _shift_product(F, coeffs, identity(n), N)
            for m_ in range(1, N + 1):
                if b_ser[m_].any():
                    failures.append({"check": "b", "i": idx, "N": m_})
        checks["b_series"] = 2 * N

    return ModuleReport(not failures, N, checks, failures)


# ---------------------------------------------------------------------------
# isomorphism
# ---------------------------------------------------------------------------


def hom_space(M: MatrixModule, N: MatrixModule) -> np.ndarray:
    """Basis of {X : X t_M = t_N X for every generator}, X flattened row-major."""
    F = M.field
    m, n = M.dim, N.dim
    basis = identity(m * n)  # current solution space, rows are flattened X (n x m)
    keys = sorted(set(M.action) | set(N.action))
    for key in keys:
        A, B = M.t(*key), N.t(*key)
        # constraint B X - X A = 0 on X = sum c_b basis_b
        imgs = []
        for row in basis:
            X = row.reshape(n, m)
            imgs.append(F.vsub(matmul(F, B, X), matmul(F, X, A)).ravel())
        if not imgs:
            break
        C = np.array(imgs, dtype=np.int64)
        coeff_ker = kernel(F, C.T.copy())
        basis = matmul(F, coeff_ker, basis) if len(coeff_ker) else np.zeros((0, m * n), dtype=np.int64)
        if len(basis) == 0:
            break
    return basis


__all__.append("hom_space")


def are_isomorphic(M: MatrixModule, N: MatrixModule, budget: int = 100_000, seed: int = 0) -> bool | None:
    """Search the intertwiner space for an invertible map; None when undecided."""
    if M.field != N.field:
        raise ValueError("modules over different fields")
    if M.dim != N.dim:
        return False
    F = M.field
    H = hom_space(M, N)
    k = len(H)
    if k == 0:
        return False

    def invertible(coords):
        X = np.zeros(M.dim * N.dim, dtype=np.int64)
        for c, row in zip(coords, H):
            if c:
                X = F.vadd(X, F.vmul(row, int(c)))
        X = X.reshape(N.dim, M.dim)
        return len(row_reduce(F, X)[1]) == M.dim

    if F.q**k <= budget:
        return any(invertible(c) for c in projective_points(F, k))
    rng = np.random.default_rng(seed)
    for _ in range(500):
        if invertible(rng.integers(0, F.q, k)):
            return True
    return None
