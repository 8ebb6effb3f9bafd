"""Submodule spinning and irreducibility tests for a finite set of matrices.

Everything here works with an arbitrary list of square matrices over one
field (acting on column vectors); the module classes in :mod:`repmod` and
:mod:`redenv` hand in their action matrices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Iterator, Sequence

import numpy as np

from .scalars import EchelonBasis, FieldSpec, identity, kernel, matmul, row_reduce

__all__ = [
    "DEFAULT_EXHAUSTIVE_BUDGET",
    "IrreducibilityResult",
    "BudgetExceeded",
    "spin",
    "projective_points",
    "irreducibility",
    "find_proper_submodule",
    "joint_kernel",
    "quotient_action",
]

DEFAULT_EXHAUSTIVE_BUDGET = 300_000


class BudgetExceeded(RuntimeError):
    pass


def _apply(F: FieldSpec, A: np.ndarray, v: np.ndarray) -> np.ndarray:
    if F.m == 1:
        return (A @ v) % F.p
    return matmul(F, A, v[:, None])[:, 0]


def spin(F: FieldSpec, ops: Sequence[np.ndarray], vectors, dim: int | None = None) -> np.ndarray:
    """Basis (rows, reduced echelon form) of the smallest invariant subspace containing ``vectors``."""
    vecs = np.atleast_2d(np.asarray(vectors, dtype=np.int64))
    if dim is None:
        dim = vecs.shape[1]
    basis = EchelonBasis(F, dim)
    queue = []
    for v in vecs:
        if basis.add(v):
            queue.append(v)
    while queue:
        w = queue.pop()
        for A in ops:
            x = _apply(F, A, w)
            if basis.add(x):
                queue.append(x)
                if len(basis) == dim:
                    return basis.basis()
    return basis.basis()


def projective_points(F: FieldSpec, dim: int) -> Iterator[np.ndarray]:
    """One representative (first nonzero entry 1) of each line in F^dim."""
    for lead in range(dim):
        tail = dim - lead - 1
        for rest in itertools.product(range(F.q), repeat=tail):
            v = np.zeros(dim, dtype=np.int64)
            v[lead] = 1
            v[lead + 1:] = rest
            yield v


def _n_points(q: int, dim: int) -> int:
    return (q**dim - 1) // (q - 1)


def joint_kernel(F: FieldSpec, ops: Sequence[np.ndarray], dim: int) -> np.ndarray:
    if not ops:
        return identity(dim)
    return kernel(F, np.vstack(list(ops)))


@dataclass
class IrreducibilityResult:
    """Outcome of an irreducibility test.

    ``verdict`` is True/False, or None when nothing could be decided.  A True
    verdict with ``certified=False`` came from random spinning only.
    """

    verdict: bool | None
    certified: bool
    method: str
    witness: list[int] | None = None
    submodule_dim: int | None = None
    details: dict = dc_field(default_factory=dict)

    def __bool__(self):
        if self.verdict is None:
            raise ValueError("irreducibility undetermined")
        return self.verdict

    @property
    def label(self) -> str:
        if self.verdict is None:
            return "indeterminate"
        if not self.verdict:
            return "reducible"
        return "irreducible" if self.certified else "irreducible (probabilistic)"

    def to_json(self) -> dict:
        return {
            "verdict": self.label,
            "certified": self.certified,
            "method": self.method,
            "witness": self.witness,
            "submodule_dim": self.submodule_dim,
        }


def _reducible(method: str, v: np.ndarray, sub: int) -> IrreducibilityResult:
    return IrreducibilityResult(False, True, method, [int(x) for x in v], sub)


def find_proper_submodule(F, ops, dim, vectors) -> tuple[np.ndarray, np.ndarray] | None:
    """First vector among ``vectors`` that spins to a proper subspace, with that subspace."""
    for v in vectors:
        if not np.any(v):
            continue
        S = spin(F, ops, v, dim)
        if len(S) < dim:
            return v, S
    return None


def _random_algebra_elements(F, ops, rng, count):
    # short random words in the operators, combined linearly
    dim = ops[0].shape[0]
    for _ in range(count):
        acc = np.zeros((dim, dim), dtype=np.int64)
        for _ in range(3):
            length = int(rng.integers(1, 4))
            prod = identity(dim)
            for _ in range(length):
                prod = matmul(F, prod, ops[int(rng.integers(len(ops)))])
            c = int(rng.integers(1, F.q))
            acc = F.vadd(acc, F.vmul(prod, c))
        yield acc


def _nullity(F, A) -> int:
    return A.shape[1] - len(row_reduce(F, A)[1])


def irreducibility(
    F: FieldSpec,
    ops: Sequence[np.ndarray],
    dim: int,
    budget: int = DEFAULT_EXHAUSTIVE_BUDGET,
    seed: int = 0,
    random_spins: int = 100,
    norton_tries: int = 20,
) -> IrreducibilityResult:
    """Decide whether the algebra generated by ``ops`` acts irreducibly on F^dim.

    Strategies, in order:

    1. ``exhaustive``: spin every line of F^dim (when their number fits the budget).
    2. ``norton``: take a singular element A of the algebra with small nullity;
       the space is irreducible iff every line of ker A spins to everything and
       every line of ker A^T spins to everything under the transposed operators.
    3. ``randomized``: seeded random vectors for both the action and its
       transpose; a failure is certified, success is only probabilistic.
    """
    if dim <= 0:
        raise ValueError("irreducibility of the zero space is undefined")
    ops = [np.asarray(A, dtype=np.int64) for A in ops if np.any(A)]
    if dim == 1:
        return IrreducibilityResult(True, True, "trivial")
    if not ops:
        v = np.zeros(dim, dtype=np.int64)
        v[0] = 1
        return _reducible("trivial", v, 1)
    if _n_points(F.q, dim) <= budget:
        hit = find_proper_submodule(F, ops, dim, projective_points(F, dim))
        if hit is not None:
            return _reducible("exhaustive", hit[0], len(hit[1]))
        return IrreducibilityResult(True, True, "exhaustive",
                                    details={"points": _n_points(F.q, dim)})

    rng = np.random.default_rng(seed)
    opsT = [A.T.copy() for A in ops]
    best = None
    for A in _random_algebra_elements(F, ops, rng, norton_tries):
        for c in range(F.q):
            B = F.vsub(A, F.vmul(identity(dim), c)) if c else A
            k = _nullity(F, B)
            if 0 < k and (best is None or k < best[0]):
                best = (k, B)
        if best is not None and best[0] == 1:
            break
    if best is not None and 2 * _n_points(F.q, best[0]) <= budget:
        k, B = best
        K = kernel(F, B)
        KT = kernel(F, B.T.copy())
        for coords in projective_points(F, k):
            v = _combine(F, coords, K)
            S = spin(F, ops, v, dim)
            if len(S) < dim:
                return _reducible("norton", v, len(S))
        for coords in projective_points(F, k):
            w = _combine(F, coords, KT)
            S = spin(F, opsT, w, dim)
            if len(S) < dim:
                # annihilator of the dual submodule is a submodule of the original
                W = kernel(F, S)
                return _reducible("norton", W[0], len(W))
        return IrreducibilityResult(True, True, "norton", details={"nullity": k})

    for _ in range(random_spins):
        v = rng.integers(0, F.q, dim)
        if not v.any():
            continue
        S = spin(F, ops, v, dim)
        if len(S) < dim:
            return _reducible("randomized", v, len(S))
        w = rng.integers(0, F.q, dim)
        if w.any():
            S = spin(F, opsT, w, dim)
            if len(S) < dim:
                W = kernel(F, S)
                return _reducible("randomized", W[0], len(W))
    return IrreducibilityResult(True, False, "randomized", details={"spins": random_spins})


def _combine(F, coords, basis):
    out = np.zeros(basis.shape[1], dtype=np.int64)
    for c, row in zip(coords, basis):
        if c:
            out = F.vadd(out, F.vmul(row, int(c)))
    return out


def quotient_action(F: FieldSpec, A: np.ndarray, sub: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Matrix of A on V/sub in the basis of standard vectors off the pivots of ``sub``."""
    dim = A.shape[0]
    eb = EchelonBasis(F, dim)
    for row in sub:
        eb.add(row)
    comp = [c for c in range(dim) if c not in set(eb.pivots)]
    Q = np.zeros((len(comp), len(comp)), dtype=np.int64)
    for b, c in enumerate(comp):
        img = eb.reduce(A[:, c])
        Q[:, b] = img[comp]
    return Q, comp
