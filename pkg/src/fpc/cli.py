"""Command-line surface.

Subcommands: bounds, oracle, construct, verify, audit, sweep, diagnose.
Exit codes: 0 success, 1 bad input or internal refusal, 2 a checked property
failed (verify found a witness, audit found a violation). All randomness
flows from --seed; a missing seed is generated and printed so any run can be
reproduced. FPC_BUDGET overrides the exact-checker comparison budget.
"""

from __future__ import annotations

import argparse
import json
import os
import secrets
import sys
import time
from typing import Optional, Sequence

from . import fileio
from .construct import (
    ConstructionConfig,
    ConstructionError,
    construct,
    own_subsequence_audit,
    build_extremal_complement,
)
from .core import BudgetExceededError, DEFAULT_BUDGET, is_frameproof
from .extremal import (
    EXHAUSTIVE_CAP,
    ExhaustiveCapError,
    bounds_report,
    emc_value,
    lambda_of,
    m_exact,
)
from .packing import (
    SparsifierConfig,
    degree_diagnostics,
    greedy_packing,
    rs_packing,
)


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; 2 is reserved for failed checks here.
    def error(self, message):
        raise CliError(message)


def _env_budget() -> int:
    raw = os.environ.get("FPC_BUDGET")
    if raw is None:
        return DEFAULT_BUDGET
    try:
        return int(raw)
    except ValueError:
        raise CliError(f"FPC_BUDGET must be an integer, got {raw!r}") from None


def _resolve_seed(seed: Optional[int]) -> tuple[int, bool]:
    if seed is not None:
        return seed, False
    return secrets.randbits(32), True


def _print_kv(pairs):
    for k, v in pairs:
        print(f"{k} = {v}")


def build_parser() -> _Parser:
    parser = _Parser(prog="fpc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", help="size bounds and the rate limit for (c, l, q)")
    p.add_argument("c", type=int)
    p.add_argument("l", type=int)
    p.add_argument("q", type=int)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("oracle", help="extremal matching value m(l, t, lambda)")
    p.add_argument("l", type=int)
    p.add_argument("t", type=int)
    p.add_argument("lam", type=int, metavar="lambda")
    p.add_argument(
        "--method", choices=["exhaustive", "formula", "both"], default="both"
    )
    p.add_argument("--cap", type=int, default=EXHAUSTIVE_CAP)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("construct", help="build a frameproof code and write it out")
    _add_construction_flags(p)
    p.add_argument("--out", required=True, help="code file destination")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("verify", help="exact frameproof check of a code file")
    p.add_argument("--in", dest="path", required=True)
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--budget", type=int, default=None)

    p = sub.add_parser("audit", help="own-subsequence profile and conditional floor")
    p.add_argument("--in", dest="path", required=True)
    p.add_argument("--c", type=int, required=True)

    p = sub.add_parser("sweep", help="grid of constructions to a CSV")
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--q-list", required=True, help="comma-separated q values")
    p.add_argument("--eta-list", default="0.05", help="comma-separated eta values")
    p.add_argument("--seeds", default=None, help="comma-separated seeds")
    p.add_argument("--mode", choices=["strict", "relaxed"], default="relaxed")
    p.add_argument("--packing", choices=["rs", "greedy"], default="rs")
    p.add_argument("--matching", choices=["greedy", "nibble"], default="greedy")
    p.add_argument("--verify", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--out", required=True, help="CSV destination")

    p = sub.add_parser("diagnose", help="degree diagnostics of a packing")
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--eta", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--packing", choices=["rs", "greedy"], default="rs")
    p.add_argument("--json", action="store_true")

    return parser


def _add_construction_flags(p: argparse.ArgumentParser):
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--eta", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--mode", choices=["strict", "relaxed"], default="relaxed")
    p.add_argument("--packing", choices=["rs", "greedy"], default="rs")
    p.add_argument("--matching", choices=["greedy", "nibble"], default="greedy")
    p.add_argument("--verify", action=argparse.BooleanOptionalAction, default=True)


def cmd_bounds(args) -> int:
    report = bounds_report(args.c, args.l, args.q)
    if args.json:
        print(json.dumps(report.as_dict(), sort_keys=True))
    else:
        _print_kv(report.as_dict().items())
    return 0


def cmd_oracle(args) -> int:
    results = {}
    if args.method in ("formula", "both"):
        results["formula"] = emc_value(args.l, args.t, args.lam)
    if args.method in ("exhaustive", "both"):
        try:
            results["exhaustive"] = m_exact(args.l, args.t, args.lam, cap=args.cap)
        except ExhaustiveCapError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
    if args.json:
        print(
            json.dumps(
                {k: {"value": v.value, "status": v.status} for k, v in results.items()},
                sort_keys=True,
            )
        )
    else:
        for k, v in results.items():
            print(f"{k}: m({args.l},{args.t},{args.lam}) = {v.value} [{v.status}]")
    if len(results) == 2:
        if results["formula"].value == results["exhaustive"].value:
            print("agreement")
        else:
            print(
                f"DISAGREEMENT: formula {results['formula'].value} vs "
                f"exhaustive {results['exhaustive'].value}",
                file=sys.stderr,
            )
            return 1
    return 0


def cmd_construct(args) -> int:
    seed, generated = _resolve_seed(args.seed)
    cfg = ConstructionConfig(
        c=args.c,
        l=args.l,
        q=args.q,
        eta=args.eta,
        seed=seed,
        mode=args.mode,
        packing=args.packing,
        matching=args.matching,
        verify=args.verify,
    )
    code, report = construct(cfg, budget=_env_budget())
    comments = [
        f"c={cfg.c} l={cfg.l} q={cfg.q} eta={cfg.eta} seed={cfg.seed}",
        f"mode={cfg.mode} packing={cfg.packing} matching={cfg.matching}",
    ]
    fileio.write_code_file(args.out, code, comments)
    payload = report.as_dict()
    payload["out"] = args.out
    if generated:
        payload["seed_generated"] = True
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        _print_kv(payload.items())
    return 0


def cmd_verify(args) -> int:
    code = fileio.read_code_file(args.path)
    budget = args.budget if args.budget is not None else _env_budget()
    verdict = is_frameproof(code, args.c, budget)
    if verdict.ok:
        print(f"frameproof: ok ({len(code)} words, c={args.c})")
        return 0
    w = verdict.witness
    print(f"frameproof: VIOLATION (c={args.c})")
    print(f"word      = {' '.join(map(str, w.word))}")
    for member in w.coalition:
        print(f"coalition = {' '.join(map(str, member))}")
    return 2


def cmd_audit(args) -> int:
    code = fileio.read_code_file(args.path)
    result = own_subsequence_audit(code, args.c)
    print(
        f"t = {result.t}  lambda = {result.lam}  m = {result.m.value} "
        f"[{result.m.status}]  required_own_t = {result.required}"
    )
    print(f"{'word':<{3 * code.l}} own_t own_t-1 floor_applies ok")
    for row in result.rows:
        word = " ".join(map(str, row.word))
        print(
            f"{word:<{3 * code.l}} {row.own_t_count:>5} {row.own_tminus1_count:>7} "
            f"{str(row.bound_applies).lower():>13} {str(row.ok).lower()}"
        )
    if result.ok:
        print("own-subsequence floor: ok")
        return 0
    print(f"own-subsequence floor: {len(result.violations)} violation(s)")
    return 2


def cmd_sweep(args) -> int:
    qs = _parse_int_list(args.q_list, "--q-list")
    etas = _parse_float_list(args.eta_list, "--eta-list")
    if args.seeds is None:
        seed, _ = _resolve_seed(None)
        print(f"seed = {seed} (generated)")
        seeds = [seed]
    else:
        seeds = _parse_int_list(args.seeds, "--seeds")
    budget = _env_budget()
    rows = []
    for q in qs:
        for eta in etas:
            for seed in seeds:
                cfg = ConstructionConfig(
                    c=args.c,
                    l=args.l,
                    q=q,
                    eta=eta,
                    seed=seed,
                    mode=args.mode,
                    packing=args.packing,
                    matching=args.matching,
                    verify=args.verify,
                )
                started = time.perf_counter()
                _code, report = construct(cfg, budget=budget)
                elapsed_ms = int((time.perf_counter() - started) * 1000)
                if report.verified is None:
                    verified = "skipped"
                else:
                    verified = "true" if report.verified.ok else "false"
                rows.append(
                    {
                        "c": cfg.c,
                        "l": cfg.l,
                        "q": q,
                        "eta": eta,
                        "seed": seed,
                        "mode": cfg.mode,
                        "packing": cfg.packing,
                        "matching": cfg.matching,
                        "packing_size": report.packing_size,
                        "accepted": report.accepted_count,
                        "code_size": report.code_size,
                        "rate": report.rate,
                        "rate_limit": report.rate_limit,
                        "blackburn": report.blackburn,
                        "improved": report.improved,
                        "verified": verified,
                        "elapsed_ms": elapsed_ms,
                    }
                )
    fileio.write_sweep_csv(args.out, rows)
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


def cmd_diagnose(args) -> int:
    seed, generated = _resolve_seed(args.seed)
    t, _lam = lambda_of(args.c, args.l)
    _chosen, complement = build_extremal_complement(args.c, args.l)
    if args.packing == "rs":
        pack = rs_packing(args.l, t, args.q)
    else:
        pack = greedy_packing(args.l, t, args.q, seed)
    diag = degree_diagnostics(pack, SparsifierConfig(eta=args.eta, seed=seed), complement)
    payload = {
        "c": args.c,
        "l": args.l,
        "q": args.q,
        "t": t,
        "eta": args.eta,
        "seed": seed,
        "packing": args.packing,
        "packing_size": len(pack),
        "dP_max": diag.dP_max,
        "dP_min": diag.dP_min,
        "frac_high_degree": diag.frac_high_degree,
        "dH_mean": diag.dH_mean,
        "expected_D": diag.expected_D,
        "lambda_F": diag.lambda_F,
        "max_codegree": diag.max_codegree,
    }
    if generated:
        payload["seed_generated"] = True
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        _print_kv(payload.items())
    return 0


def _parse_int_list(raw: str, flag: str) -> list[int]:
    try:
        return [int(part) for part in raw.split(",") if part != ""]
    except ValueError:
        raise CliError(f"{flag} must be comma-separated integers, got {raw!r}") from None


def _parse_float_list(raw: str, flag: str) -> list[float]:
    try:
        return [float(part) for part in raw.split(",") if part != ""]
    except ValueError:
        raise CliError(f"{flag} must be comma-separated numbers, got {raw!r}") from None


_COMMANDS = {
    "bounds": cmd_bounds,
    "oracle": cmd_oracle,
    "construct": cmd_construct,
    "verify": cmd_verify,
    "audit": cmd_audit,
    "sweep": cmd_sweep,
    "diagnose": cmd_diagnose,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except (
        CliError,
        ValueError,
        OSError,
        BudgetExceededError,
        ConstructionError,
        fileio.CodeFileError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
