"""Parameters of simple restricted modules: restricted pairs, root pairings, dimensions."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .repmod import MatrixModule, evaluation_module, tensor_all, trivial_module
from .scalars import FieldScalar, FieldSpec, GF, bracket
from .series import (
    LowerSeries,
    Poly,
    RationalSeries,
    drinfeld_polynomial,
    is_restricted,
)
from .spinning import BudgetExceeded

__all__ = [
    "RestrictedTuple",
    "DegreeMismatchError",
    "NotRestrictedError",
    "DEFAULT_ENUMERATION_BUDGET",
    "renumerate",
    "satisfies_ordering",
    "predicted_dimension",
    "enumerate_simples",
    "restricted_series",
    "is_finite_dimensional",
    "simple_module",
    "roots_of",
]

DEFAULT_ENUMERATION_BUDGET = 1_000_000


class DegreeMismatchError(ValueError):
    pass


class NotRestrictedError(ValueError):
    pass


@dataclass(frozen=True)
class RestrictedTuple:
    lambda1: LowerSeries
    lambda2: LowerSeries

    def to_json(self, n: int | None = None) -> dict:
        return {"lambda1": _coeff_vector(self.lambda1, n), "lambda2": _coeff_vector(self.lambda2, n)}

    def __str__(self):
        return f"({self.lambda1}, {self.lambda2})"


def _coeff_vector(lam: LowerSeries, n: int | None) -> list[int]:
    k = lam.degree if n is None else n
    return [lam.coefficient(r) for r in range(1, k + 1)]


def _residues(F: FieldSpec, values) -> list[int]:
    out = []
    for v in values:
        x = F.coerce(v)
        if x >= F.p:
            raise ValueError(f"{F.fmt(x)} is not in the prime subfield")
        out.append(x)
    return out


def renumerate(F: FieldSpec, alphas: Sequence, betas: Sequence) -> list[tuple[int, int]]:
    """Greedy pairing: repeatedly take the remaining (alpha, beta) minimising [alpha - beta].

    Ties go to the smallest [alpha], then the smallest [beta].  The result
    satisfies: for each i, [a_i - b_i] <= [a_j - b_l] for all j, l >= i.
    """
    A = _residues(F, alphas)
    B = _residues(F, betas)
    if len(A) != len(B):
        raise DegreeMismatchError(f"{len(A)} alpha roots against {len(B)} beta roots")
    A.sort()
    B.sort()
    pairs = []
    while A:
        best = min(
            ((F.sub(a, b), a, b) for a in A for b in B),
            key=lambda t: (t[0], t[1], t[2]),
        )
        _, a, b = best
        A.remove(a)
        B.remove(b)
        pairs.append((a, b))
    return pairs


def satisfies_ordering(F: FieldSpec, pairs: Sequence[tuple]) -> bool:
    """Whether each [a_i - b_i] is minimal among [a_j - b_l] with j, l >= i."""
    pr = [(F.coerce(a), F.coerce(b)) for a, b in pairs]
    for i in range(len(pr)):
        d = F.sub(*pr[i])
        for j in range(i, len(pr)):
            for l in range(i, len(pr)):
                if F.sub(pr[j][0], pr[l][1]) < d:
                    return False
    return True


def roots_of(lam: LowerSeries) -> list[int]:
    """Nonzero roots a of lam = prod (1 + a u^-1); zero roots cannot be recovered."""
    return lam.roots()


def _pairing_from(lambda1, lambda2, alphas, betas, pad_zero_roots):
    if lambda1 is not None:
        F = lambda1.field
        for lam in (lambda1, lambda2):
            if not is_restricted(lam):
                raise NotRestrictedError(f"{lam} is not restricted")
        if alphas is None:
            alphas = roots_of(lambda1)
        if betas is None:
            betas = roots_of(lambda2)
        if LowerSeries.from_roots(F, alphas) != lambda1 or LowerSeries.from_roots(F, betas) != lambda2:
            raise ValueError("explicit roots do not reproduce the given series")
    else:
        if alphas is None or betas is None:
            raise ValueError("give series or explicit root multisets")
        F = None
    return alphas, betas, F


def predicted_dimension(
    lambda1: LowerSeries | None = None,
    lambda2: LowerSeries | None = None,
    *,
    alphas: Sequence | None = None,
    betas: Sequence | None = None,
    field: FieldSpec | None = None,
    pad_zero_roots: bool = False,
) -> tuple[int, list[tuple[int, int]]]:
    """prod([a_i - b_i] + 1) over the greedy pairing, with the pairing.

    Roots come from factoring the series unless given explicitly.  Zero roots
    are invisible in a series, so unequal root counts are an error unless
    ``pad_zero_roots`` is set, in which case the shorter list is padded with 0.
    """
    alphas, betas, F = _pairing_from(lambda1, lambda2, alphas, betas, pad_zero_roots)
    F = F or field
    if F is None:
        raise ValueError("a field is required with explicit roots")
    alphas, betas = list(alphas), list(betas)
    if len(alphas) != len(betas):
        if not pad_zero_roots:
            raise DegreeMismatchError(
                f"root counts differ ({len(alphas)} vs {len(betas)}); supply explicit multisets")
        k = max(len(alphas), len(betas))
        alphas += [0] * (k - len(alphas))
        betas += [0] * (k - len(betas))
    pairs = renumerate(F, alphas, betas)
    dim = 1
    for a, b in pairs:
        dim *= bracket(F, F.sub(a, b)) + 1
    return dim, pairs


def restricted_series(F: FieldSpec | int, n: int, budget: int = DEFAULT_ENUMERATION_BUDGET) -> list[LowerSeries]:
    """All restricted 1 + c_1 u^-1 + ... + c_n u^-n with c in F_p, lexicographic in (c_1..c_n)."""
    F = F if isinstance(F, FieldSpec) else GF(F)
    if n < 0:
        raise ValueError("n must be non-negative")
    if F.p**n > budget:
        raise BudgetExceeded(f"{F.p}^{n} coefficient vectors exceed the budget {budget}")
    out = []
    for vec in itertools.product(range(F.p), repeat=n):
        lam = LowerSeries(F, (1,) + vec)
        if is_restricted(lam, method="roots"):
            out.append(lam)
    return out


def enumerate_simples(F: FieldSpec | int, n: int, budget: int = DEFAULT_ENUMERATION_BUDGET) -> list[RestrictedTuple]:
    """Restricted pairs of degree <= n, i.e. the simple modules of the degree-n truncation."""
    comps = restricted_series(F, n, budget)
    if len(comps) ** 2 > budget:
        raise BudgetExceeded("too many pairs")
    return [RestrictedTuple(a, b) for a in comps for b in comps]


def is_finite_dimensional(lambda1, lambda2) -> tuple[bool, Poly | None]:
    """Finite-dimensionality criterion: a Drinfeld polynomial exists."""
    P = drinfeld_polynomial(lambda1, lambda2)
    return P is not None, P


def simple_module(
    lambda1: LowerSeries | None = None,
    lambda2: LowerSeries | None = None,
    *,
    alphas=None,
    betas=None,
    field: FieldSpec | None = None,
    pad_zero_roots: bool = True,
) -> tuple[MatrixModule, list[tuple[int, int]]]:
    """Tensor product of evaluation modules over the greedy pairing.

    Under the ordering condition this is the simple module with highest
    weight (lambda1, lambda2).
    """
    _, pairs = predicted_dimension(lambda1, lambda2, alphas=alphas, betas=betas,
                                   field=field, pad_zero_roots=pad_zero_roots)
    F = lambda1.field if lambda1 is not None else field
    if not pairs:
        return trivial_module(F), pairs
    return tensor_all(evaluation_module(F, a, b) for a, b in pairs), pairs
