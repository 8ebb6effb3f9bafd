"""Command-line interface: ``modyangian <command> [options]``.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
3 budget exceeded or a larger field required.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field as dc_field

from . import __version__
from .classify import (
    DEFAULT_ENUMERATION_BUDGET,
    DegreeMismatchError,
    NotRestrictedError,
    enumerate_simples,
    predicted_dimension,
    satisfies_ordering,
)
from .presentation import DEFAULT_LEVEL_BOUND, ElementParseError, LevelBoundError
from .redenv import DEFAULT_DIM_BUDGET, induce, m_chi_invariants, p_power_identities, simplicity_check
from .repmod import MatrixModule, evaluation_module, highest_weight_vectors, irreducibility_test, \
    tensor_all, verify_module
from .scalars import GF, FieldScalar, FieldSpec
from .series import LowerSeries, NeedsLargerFieldError, ParseError, drinfeld_polynomial, parse_series
from .spinning import DEFAULT_EXHAUSTIVE_BUDGET, BudgetExceeded
from .suites import SUITES
from .wside import OrderingConditionError, levi_simple, verify_er_lemma

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
SCHEMA = 1

ENV_BUDGETS = {
    "exhaustive_budget": ("MODYANGIAN_EXHAUSTIVE_BUDGET", DEFAULT_EXHAUSTIVE_BUDGET),
    "dim_budget": ("MODYANGIAN_DIM_BUDGET", DEFAULT_DIM_BUDGET),
    "enum_budget": ("MODYANGIAN_ENUM_BUDGET", DEFAULT_ENUMERATION_BUDGET),
}


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    p: int
    m: int = 1
    n: int = 1
    L: int = DEFAULT_LEVEL_BOUND
    seed: int = 0
    fmt: str = "text"
    output: str | None = None
    budgets: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        F = GF(self.p, self.m)  # raises on a non-prime p or m < 1
        del F
        if self.n < 0:
            raise UsageError("--n must be non-negative")
        if self.L < 1:
            raise UsageError("--L must be positive")
        if self.fmt not in ("text", "json", "csv"):
            raise UsageError(f"unknown format {self.fmt!r}")
        for k, v in self.budgets.items():
            if v <= 0:
                raise UsageError(f"budget {k} must be positive")

    @property
    def field(self) -> FieldSpec:
        return GF(self.p, self.m)

    def budget(self, name: str) -> int:
        return self.budgets[name]


def _env_budgets(args) -> dict:
    out = {}
    for name, (var, default) in ENV_BUDGETS.items():
        val = getattr(args, name, None)
        if val is None:
            raw = os.environ.get(var)
            try:
                val = int(raw) if raw else default
            except ValueError:
                raise UsageError(f"{var} must be an integer, got {raw!r}")
        out[name] = val
    return out


def config_from_args(args) -> RunConfig:
    try:
        return RunConfig(p=args.p, m=args.m, n=args.n, L=args.L, seed=args.seed, fmt=args.format,
                         output=args.output, budgets=_env_budgets(args))
    except UsageError:
        raise
    except ValueError as e:
        raise UsageError(str(e))


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


def _emit(cfg: RunConfig, report: dict, text: str, rows: list[dict] | None = None):
    if cfg.fmt == "json":
        body = json.dumps({"schema": SCHEMA, **report}, sort_keys=True, indent=2) + "\n"
    elif cfg.fmt == "csv":
        if rows is None:
            raise UsageError("csv output is only available for flat tables (irreps, dim)")
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(rows[0]) if rows else ["empty"], lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        body = buf.getvalue()
    else:
        body = text.rstrip("\n") + "\n"
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(body)
    else:
        sys.stdout.write(body)


def _field_value(F: FieldSpec, tok: str):
    tok = tok.strip()
    if tok == "w":
        return FieldScalar(F, F.generator)
    try:
        return int(tok)
    except ValueError:
        raise UsageError(f"cannot read {tok!r} as a field element")


def _csv_values(cfg: RunConfig, text: str | None):
    if text is None:
        return None
    if not text.strip():
        return []
    return [_field_value(cfg.field, t) for t in text.split(",")]


def _series(cfg: RunConfig, text: str) -> LowerSeries:
    s = parse_series(text, cfg.field)
    if not isinstance(s, LowerSeries):
        if s.is_polynomial():
            return s.num
        raise UsageError(f"{text!r} is not a polynomial in u^-1")
    return s


def _parse_factors(cfg: RunConfig, text: str) -> list[tuple]:
    out = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        inner = chunk.strip("()")
        parts = inner.split(",")
        if not (chunk.startswith("(") and chunk.endswith(")")) or len(parts) != 2:
            raise UsageError(f"factor {chunk!r} should look like (alpha,beta)")
        out.append(tuple(_field_value(cfg.field, x) for x in parts))
    if not out:
        raise UsageError("no factors given")
    return out


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_irreps(cfg: RunConfig, args) -> int:
    if cfg.m != 1:
        raise UsageError("irreps enumerates over prime fields")
    simples = enumerate_simples(cfg.field, cfg.n, cfg.budget("enum_budget"))
    rows = [{"index": k, "lambda1": str(t.lambda1), "lambda2": str(t.lambda2)} for k, t in enumerate(simples)]
    report = {"command": "irreps", "p": cfg.p, "n": cfg.n, "count": len(simples)}
    if args.list:
        report["pairs"] = [t.to_json(cfg.n) for t in simples]
        text = "\n".join(f"{r['lambda1']}\t{r['lambda2']}" for r in rows)
    else:
        text = str(len(simples))
    _emit(cfg, report, text, rows if args.list else [{"p": cfg.p, "n": cfg.n, "count": len(simples)}])
    return EXIT_OK


def cmd_dim(cfg: RunConfig, args) -> int:
    F = cfg.field
    alphas, betas = _csv_values(cfg, args.alpha), _csv_values(cfg, args.beta)
    lam1 = _series(cfg, args.lambda1) if args.lambda1 else None
    lam2 = _series(cfg, args.lambda2) if args.lambda2 else None
    if (lam1 is None) != (lam2 is None):
        raise UsageError("give both --lambda1 and --lambda2")
    if lam1 is None and (alphas is None or betas is None):
        raise UsageError("give --alpha/--beta or --lambda1/--lambda2")
    dim, pairs = predicted_dimension(lam1, lam2, alphas=alphas, betas=betas, field=F,
                                     pad_zero_roots=args.pad_zero_roots)
    ordered = satisfies_ordering(F, pairs)
    report = {"command": "dim", "p": cfg.p, "m": cfg.m, "dim": dim, "ordering_condition": ordered,
              "pairs": [[F.fmt(a), F.fmt(b)] for a, b in pairs]}
    _emit(cfg, report, str(dim), [{"dim": dim, "pairs": " ".join(f"({F.fmt(a)},{F.fmt(b)})" for a, b in pairs)}])
    return EXIT_OK


def cmd_tensor(cfg: RunConfig, args) -> int:
    F = cfg.field
    factors = _parse_factors(cfg, args.factors)
    M = tensor_all(evaluation_module(F, a, b) for a, b in factors)
    report = {"command": "tensor", "p": cfg.p, "m": cfg.m, "dim": M.dim,
              "factors": [[F.fmt(F.coerce(a)), F.fmt(F.coerce(b))] for a, b in factors]}
    lines = [f"dim {M.dim}"]
    code = EXIT_OK
    if args.check_irreducible:
        res = irreducibility_test(M, budget=cfg.budget("exhaustive_budget"), seed=cfg.seed)
        report["irreducibility"] = res.to_json()
        lines[0] = f"{res.label}, dim {M.dim}"
    if args.highest_weight:
        hw = highest_weight_vectors(M)
        report["highest_weight"] = [h.to_json() for h in hw]
        lines += [f"highest weight ({h.lambda1}, {h.lambda2})" for h in hw]
    if args.verify:
        rep = verify_module(M)
        report["verification"] = rep.to_json()
        lines.append("relations: " + ("pass" if rep.passed else "FAIL"))
        code = EXIT_OK if rep.passed else EXIT_FAIL
    if args.save:
        with open(args.save, "w") as fh:
            fh.write(M.dumps())
        report["saved"] = args.save
    _emit(cfg, report, "\n".join(lines))
    return code


def cmd_drinfeld_poly(cfg: RunConfig, args) -> int:
    lam1, lam2 = _series(cfg, args.lambda1), _series(cfg, args.lambda2)
    F = lam1.field
    P = drinfeld_polynomial(lam1, lam2)
    report = {"command": "drinfeld-poly", "field": str(F), "lambda1": str(lam1), "lambda2": str(lam2),
              "P": None if P is None else str(P),
              "P_coefficients": None if P is None else [F.fmt(c) for c in P.coeffs]}
    text = f"P(u)={P}" if P is not None else "no Drinfeld polynomial: the module is infinite-dimensional"
    _emit(cfg, report, text)
    return EXIT_OK


def cmd_wverify(cfg: RunConfig, args) -> int:
    F = cfg.field
    n = cfg.n
    if args.all:
        import itertools
        tuples = [(t[:n], t[n:]) for t in itertools.product(range(cfg.p), repeat=2 * n)]
    else:
        a, b = _csv_values(cfg, args.alpha), _csv_values(cfg, args.beta)
        if a is None or b is None:
            raise UsageError("give --all or both --alpha and --beta")
        if len(a) != n or len(b) != n:
            raise UsageError(f"--alpha and --beta need {n} entries each")
        tuples = [(a, b)]
    reports = [verify_er_lemma(F, n, a, b, r_max=args.rmax) for a, b in tuples]
    failed = [r for r in reports if not r["passed"]]
    report = {"command": "wverify", "p": cfg.p, "n": n, "checked": len(reports),
              "passed": not failed, "results": reports if not args.all else failed}
    _emit(cfg, report, f"{'pass' if not failed else 'FAIL'}: {len(reports) - len(failed)}/{len(reports)} tuples")
    return EXIT_OK if not failed else EXIT_FAIL


def cmd_uchi(cfg: RunConfig, args) -> int:
    if cfg.m != 1:
        raise UsageError("uchi works over prime fields")
    a, b = _csv_values(cfg, args.alpha), _csv_values(cfg, args.beta)
    if a is None or b is None or len(a) != cfg.n or len(b) != cfg.n:
        raise UsageError(f"--alpha and --beta need {cfg.n} entries each")
    seed_mod = levi_simple(cfg.field, a, b)
    V = induce(seed_mod, budget=cfg.budget("dim_budget"))
    report = {"command": "uchi", "p": cfg.p, "n": cfg.n, "alpha": list(seed_mod.alpha),
              "beta": list(seed_mod.beta), "seed_dim": seed_mod.dim, "dim": V.dim,
              "ordering_condition": satisfies_ordering(cfg.field, list(zip(seed_mod.alpha, seed_mod.beta)))}
    lines = [f"dim {V.dim}"]
    code = EXIT_OK
    if args.invariants:
        k = len(m_chi_invariants(V))
        report["invariants_dim"] = k
        lines.append(f"invariants {k}")
    if args.simplicity:
        res = simplicity_check(V, seed=cfg.seed, budget=cfg.budget("exhaustive_budget"))
        report["simplicity"] = res.to_json()
        lines.append(res.label)
    if args.powers:
        pw = p_power_identities(V)
        report["p_power_identities"] = pw
        ok = all(pw.values())
        lines.append("p-power identities: " + ("pass" if ok else "FAIL"))
        code = EXIT_OK if ok else EXIT_FAIL
    _emit(cfg, report, "\n".join(lines))
    return code


def cmd_verify(cfg: RunConfig, args) -> int:
    names = sorted(SUITES) if args.suite == "all" else [args.suite]
    module = None
    if args.module_file:
        if args.suite not in ("modules", "all"):
            raise UsageError("--module-file goes with --suite modules")
        with open(args.module_file) as fh:
            try:
                module = MatrixModule.loads(fh.read())
            except (KeyError, ValueError, TypeError) as e:
                raise UsageError(f"cannot read module file: {e}")
    reports = []
    partial = False
    for name in names:
        try:
            reports.extend(SUITES[name](cfg.p, cfg.n, cfg.seed, module if name == "modules" else None))
        except BudgetExceeded as e:
            reports.append({"suite": name, "passed": False, "budget_exceeded": str(e)})
            partial = True
    if args.no_timing:
        for r in reports:
            r.pop("seconds", None)
    ok = all(r["passed"] for r in reports)
    report = {"command": "verify", "suite": args.suite, "p": cfg.p, "n": cfg.n, "seed": cfg.seed,
              "passed": ok, "reports": sorted(reports, key=lambda r: r["suite"])}
    text = "\n".join(f"{r['suite']}: {'pass' if r['passed'] else 'FAIL'}" for r in report["reports"])
    _emit(cfg, report, text)
    if partial:
        return EXIT_BUDGET
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _common(sp: argparse.ArgumentParser, need_n: bool = False):
    sp.add_argument("--p", type=int, required=True, help="field characteristic")
    sp.add_argument("--m", type=int, default=1, help="extension degree (field of p^m elements)")
    sp.add_argument("--n", type=int, default=None if need_n else 1, required=need_n, help="truncation level / rank")
    sp.add_argument("--L", type=int, default=DEFAULT_LEVEL_BOUND, help="level bound for symbolic work")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--format", choices=("text", "json", "csv"), default="text")
    sp.add_argument("--output", "-o", default=None, help="write the report here instead of stdout")
    sp.add_argument("--exhaustive-budget", dest="exhaustive_budget", type=int, default=None)
    sp.add_argument("--dim-budget", dest="dim_budget", type=int, default=None)
    sp.add_argument("--enum-budget", dest="enum_budget", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="modyangian", description="Restricted Yangian of gl_2 in characteristic p.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("irreps", help="enumerate simple modules of the truncated restricted Yangian")
    _common(sp, need_n=True)
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--count", action="store_true", help="print the number of parameters (default)")
    g.add_argument("--list", action="store_true", help="list the restricted pairs")
    sp.set_defaults(func=cmd_irreps)

    sp = sub.add_parser("dim", help="dimension of a simple module from roots or series")
    _common(sp)
    sp.add_argument("--alpha", help="comma-separated roots, e.g. 1,2")
    sp.add_argument("--beta", help="comma-separated roots")
    sp.add_argument("--lambda1", help='series such as "1+u^-1"')
    sp.add_argument("--lambda2")
    sp.add_argument("--pad-zero-roots", action="store_true", help="pad unequal root counts with zeros")
    sp.set_defaults(func=cmd_dim)

    sp = sub.add_parser("tensor", help="tensor product of evaluation modules")
    _common(sp)
    sp.add_argument("--factors", required=True, help='e.g. "(1,0);(2,0)"')
    sp.add_argument("--check-irreducible", action="store_true")
    sp.add_argument("--highest-weight", action="store_true")
    sp.add_argument("--verify", action="store_true", help="check the defining relations on the module")
    sp.add_argument("--save", help="write the module as JSON")
    sp.set_defaults(func=cmd_tensor)

    sp = sub.add_parser("drinfeld-poly", help="Drinfeld polynomial of a pair of series")
    _common(sp)
    sp.add_argument("--lambda1", required=True)
    sp.add_argument("--lambda2", required=True)
    sp.set_defaults(func=cmd_drinfeld_poly)

    sp = sub.add_parser("wverify", help="check d-eigenvalues on Levi baby Verma modules")
    _common(sp, need_n=True)
    sp.add_argument("--all", action="store_true", help="every (alpha, beta) over F_p")
    sp.add_argument("--alpha")
    sp.add_argument("--beta")
    sp.add_argument("--rmax", type=int, default=None, help="largest r (default n+2)")
    sp.set_defaults(func=cmd_wverify)

    sp = sub.add_parser("uchi", help="induced modules for the reduced enveloping algebra")
    _common(sp, need_n=True)
    sp.add_argument("--alpha", required=True)
    sp.add_argument("--beta", required=True)
    sp.add_argument("--invariants", action="store_true")
    sp.add_argument("--simplicity", action="store_true")
    sp.add_argument("--powers", action="store_true", help="check the p-power operator identities")
    sp.set_defaults(func=cmd_uchi)

    sp = sub.add_parser("verify", help="run verification suites")
    _common(sp)
    sp.add_argument("--suite", choices=sorted(SUITES) + ["all"], default="all")
    sp.add_argument("--module-file", help="verify a saved module instead of the built-in family")
    sp.add_argument("--no-timing", action="store_true", help="omit timings so reports are byte-stable")
    sp.set_defaults(func=cmd_verify)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        cfg = config_from_args(args)
        return args.func(cfg, args)
    except (ParseError, ElementParseError) as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, DegreeMismatchError, NotRestrictedError, OrderingConditionError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except NeedsLargerFieldError as e:
        print(f"error: {e} (rerun with --m {e.required_degree})", file=sys.stderr)
        return EXIT_BUDGET
    except (BudgetExceeded, LevelBoundError) as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
