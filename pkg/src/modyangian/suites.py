"""Verification suites shared by the CLI and the acceptance tests.

Each suite returns a JSON-ready dict with a boolean ``passed`` and enough
detail to locate a failure.  All randomness comes from the seed argument.
"""

from __future__ import annotations

import itertools
import time

import numpy as np

from .classify import satisfies_ordering
from .presentation import (
    NCPoly,
    Gen,
    nilpotency_witness,
    p_center_b,
    straighten,
    verify_rtt_relation,
)
from .redenv import induce, m_chi_invariants, p_power_identities, simplicity_check, weight_bookkeeping
from .repmod import MatrixModule, evaluation_module, is_irreducible, tensor_all, verify_module
from .scalars import GF, bracket
from .wside import cross_check_theorem, levi_simple, verify_er_lemma

__all__ = [
    "random_word",
    "random_element",
    "rtt_suite",
    "straightening_suite",
    "nilpotency_suite",
    "module_suite",
    "tensor_irreducibility_suite",
    "walgebra_suite",
    "cross_check_suite",
    "premet_suite",
    "SUITES",
]

CONFLUENCE_LEVEL_BOUND = 24  # six letters of level <= 4 never produce a level above 24


def random_word(rng: np.random.Generator, max_len: int = 6, max_level: int = 4) -> tuple:
    k = int(rng.integers(1, max_len + 1))
    return tuple(Gen(int(rng.integers(0, 4)), int(rng.integers(1, max_level + 1))) for _ in range(k))


def random_element(F, rng, terms: int = 3, **kw) -> NCPoly:
    return NCPoly(F, {random_word(rng, **kw): int(rng.integers(1, F.p)) for _ in range(terms)})


def rtt_suite(p: int, r_max: int = 3) -> dict:
    F = GF(p)
    failures = [
        [r, s, i, j, k, l]
        for r in range(1, r_max + 1)
        for s in range(1, r_max + 1)
        for i, j, k, l in itertools.product((1, 2), repeat=4)
        if not verify_rtt_relation(r, s, i, j, k, l, F)
    ]
    return {"suite": "rtt", "p": p, "r_max": r_max, "checked": r_max * r_max * 16,
            "failures": failures, "passed": not failures}


def straightening_suite(p: int, words: int = 1000, seed: int = 0) -> dict:
    """Idempotence, linearity and leftmost/rightmost confluence on seeded random words."""
    F = GF(p)
    L = CONFLUENCE_LEVEL_BOUND
    rng = np.random.default_rng([seed, p])
    bad = {"idempotence": 0, "linearity": 0, "confluence": 0}
    for _ in range(words):
        w = random_word(rng)
        x = NCPoly(F, {w: 1})
        nf = straighten(x, L=L)
        if straighten(nf, L=L) != nf:
            bad["idempotence"] += 1
        if straighten(x, strategy="rightmost", L=L) != nf:
            bad["confluence"] += 1
        y = NCPoly(F, {random_word(rng): 1})
        a, b = (int(c) for c in rng.integers(0, p, 2))
        lhs = straighten(x.scale(a) + y.scale(b), L=L)
        if lhs != nf.scale(a) + straighten(y, L=L).scale(b):
            bad["linearity"] += 1
    return {"suite": "straightening", "p": p, "words": words, "seed": seed,
            "mismatches": bad, "passed": not any(bad.values())}


def nilpotency_suite(p: int) -> dict:
    F = GF(p)
    f1 = NCPoly.f(F, 1)
    fp_zero = straighten(f1 ** p, mode="restricted").is_zero()
    out = {"suite": "nilpotency", "p": p, "f1_power_p_zero": fp_zero}
    ok = fp_zero
    if p <= 3:
        n = nilpotency_witness(f1 + NCPoly.f(F, 2))
        out["f1_plus_f2_order"] = n
        ok = ok and n <= p * p
    b_ok = all(p_center_b(i, N, F).is_zero() for i in (1, 2) for N in range(1, p))
    out["b_low_coefficients_zero"] = b_ok
    out["passed"] = bool(ok and b_ok)
    return out


def _eval_params(p):
    return list(itertools.product(range(p), repeat=2))


def module_suite(p: int, max_factors: int = 3, module: MatrixModule | None = None) -> dict:
    """verify_module on every evaluation module and every tensor of up to ``max_factors`` of them."""
    if module is not None:
        rep = verify_module(module)
        return {"suite": "modules", "source": "file", "checked": 1,
                "failures": [] if rep.passed else [rep.to_json()], "passed": rep.passed}
    F = GF(p)
    factors = [evaluation_module(F, a, b) for a, b in _eval_params(p)]
    failures = []
    checked = 0
    for k in range(1, max_factors + 1):
        for combo in itertools.product(range(len(factors)), repeat=k):
            M = tensor_all(factors[c] for c in combo)
            rep = verify_module(M)
            checked += 1
            if not rep.passed:
                failures.append({"factors": [list(_eval_params(p)[c]) for c in combo],
                                 "report": rep.to_json()})
    return {"suite": "modules", "p": p, "max_factors": max_factors, "checked": checked,
            "failures": failures, "passed": not failures}


def tensor_irreducibility_suite(p: int = 3, factors: int = 2) -> dict:
    F = GF(p)
    checked, failures = 0, []
    for choice in itertools.product(_eval_params(p), repeat=factors):
        if not satisfies_ordering(F, choice):
            continue
        M = tensor_all(evaluation_module(F, a, b) for a, b in choice)
        want = int(np.prod([bracket(F, F.sub(a, b)) + 1 for a, b in choice]))
        checked += 1
        if M.dim != want or not is_irreducible(M):
            failures.append([list(c) for c in choice])
    return {"suite": "tensor_irreducibility", "p": p, "factors": factors, "checked": checked,
            "failures": failures, "passed": not failures}


def walgebra_suite(p: int, n: int, seed: int = 0, exhaustive_limit: int = 729, samples: int = 20,
                   r_max: int | None = None) -> dict:
    F = GF(p)
    space = list(itertools.product(range(p), repeat=2 * n))
    if p ** (2 * n) <= exhaustive_limit:
        chosen = space
    else:
        rng = np.random.default_rng([seed, p, n])
        chosen = [space[int(i)] for i in rng.choice(len(space), size=samples, replace=False)]
    failures = []
    for tup in chosen:
        rep = verify_er_lemma(F, n, tup[:n], tup[n:], r_max=r_max)
        if not rep["passed"]:
            failures.append(rep)
    return {"suite": "walgebra", "p": p, "n": n, "checked": len(chosen),
            "exhaustive": len(chosen) == len(space), "failures": failures, "passed": not failures}


def cross_check_suite(p: int = 3, n: int = 2) -> dict:
    F = GF(p)
    checked, failures = 0, []
    for a in itertools.product(range(p), repeat=n):
        for b in itertools.product(range(p), repeat=n):
            if not satisfies_ordering(F, list(zip(a, b))):
                continue
            rep = cross_check_theorem(F, a, b)
            checked += 1
            if not rep["passed"]:
                failures.append(rep)
    return {"suite": "cross_check", "p": p, "n": n, "checked": checked,
            "failures": failures, "passed": not failures}


def premet_suite(p: int = 2, n: int = 2, alpha=(1, 1), beta=(0, 0), seed: int = 0) -> dict:
    F = GF(p)
    seed_mod = levi_simple(F, alpha, beta)
    V = induce(seed_mod)
    dims = [bracket(F, F.sub(a, b)) + 1 for a, b in zip(seed_mod.alpha, seed_mod.beta)]
    predicted = p ** (2 * n * n - 2 * n) * int(np.prod(dims))
    inv = len(m_chi_invariants(V))
    powers = p_power_identities(V)
    simple = simplicity_check(V, seed=seed)
    weights = weight_bookkeeping(V)
    ok = (V.dim == predicted and inv == seed_mod.dim and all(powers.values())
          and simple.verdict is True and weights["passed"])
    return {"suite": "premet", "p": p, "n": n, "alpha": list(seed_mod.alpha), "beta": list(seed_mod.beta),
            "dim": V.dim, "predicted_dim": predicted, "invariants_dim": inv, "seed_dim": seed_mod.dim,
            "p_power_identities": powers, "simplicity": simple.to_json(), "weights": weights,
            "passed": bool(ok)}


def _timed(fn, *args, **kw):
    t0 = time.perf_counter()
    rep = fn(*args, **kw)
    rep["seconds"] = round(time.perf_counter() - t0, 3)
    return rep


# suite name -> callable(p, n, seed, module) -> list of reports
def _yangian(p, n, seed, module):
    return [_timed(rtt_suite, p), _timed(straightening_suite, p, seed=seed), _timed(nilpotency_suite, p)]


def _modules(p, n, seed, module):
    if module is not None:
        return [_timed(module_suite, p, module=module)]
    reps = [_timed(module_suite, p, max_factors=2 if p > 3 else 3)]
    if p == 3:
        reps.append(_timed(tensor_irreducibility_suite, p))
    return reps


def _walgebra(p, n, seed, module):
    reps = [_timed(walgebra_suite, p, n, seed=seed)]
    if p == 3 and n == 2:
        reps.append(_timed(cross_check_suite, p, n))
    return reps


def _premet(p, n, seed, module):
    return [_timed(premet_suite, p, n, alpha=(1,) * n, beta=(0,) * n, seed=seed)]


SUITES = {"yangian": _yangian, "modules": _modules, "walgebra": _walgebra, "premet": _premet}
