"""Command-line entry point. Every subcommand writes JSON lines to stdout.

Each JSON object carries a ``manifest`` (subcommand, parameters, seed,
version). Worker count is left out of the manifest on purpose: output must
not depend on it. Errors go to stderr as {"error_kind": ..., "message": ...}.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from typing import TextIO

from . import __version__
from .census import (
    DEFAULT_BUDGET,
    census,
    giant_lower_bound,
    weil_trials,
)
from .errors import DomainError, ParityError, UsageError, VerificationFailed
from .ffield import field_of_order, make_field, prime_power
from .gf2 import mask_members, rank
from .mds import (
    EvaluationSet,
    code_to_record,
    coeven_pair_census,
    construct_self_dual,
    enumerate_omega,
    generator_text,
    read_records,
    verify_record,
)
from .paley import adjacency_gf2, build_paley, edge_list
from .parity import SimpleGraph, brute_force_coeven, coeven_dimension, coeven_sets, count_coeven
from .randmodel import monte_carlo

BUDGET_ENV = "PALEYPARITY_BUDGET"
RANK_SUMMARY_MAX_Q = 2048


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


class Emitter:
    def __init__(self, out: TextIO, manifest: dict):
        self.out = out
        self.manifest = manifest

    def emit(self, obj: dict) -> None:
        rec = dict(obj)
        rec["manifest"] = self.manifest
        self.out.write(json.dumps(rec, sort_keys=True, separators=(",", ":")) + "\n")

    def text(self, s: str) -> None:
        self.out.write(s)


def _field(q: int):
    prime_power(q)
    return field_of_order(q)


# -- subcommands ---------------------------------------------------------------

def cmd_field_info(args, em: Emitter) -> int:
    if args.modulus:
        p, e = prime_power(args.q)
        F = make_field(p, e, [int(c) for c in args.modulus.split(",")])
    else:
        F = _field(args.q)
    em.emit({
        "q": F.q,
        "field": F.to_json(),
        "nonsquare": F.nonsquare(),
        "minus_one_is_square": F.eta(F.neg(1)) == 1,
        "paley": "graph" if F.q % 4 == 1 else "tournament",
    })
    return 0


def cmd_paley(args, em: Emitter) -> int:
    P = build_paley(_field(args.q))
    if args.edges:
        em.text(edge_list(P))
        return 0
    arcs = sum(r.bit_count() for r in P.rows)
    em.emit({
        "q": P.q,
        "kind": P.kind,
        "field": P.field.to_json(),
        "out_degree": (P.q - 1) // 2,
        "edges": arcs if P.directed else arcs // 2,
        "rank2": rank(adjacency_gf2(P)) if P.q <= RANK_SUMMARY_MAX_Q else None,
    })
    return 0


def cmd_coeven(args, em: Emitter) -> int:
    P = build_paley(_field(args.q))
    if P.directed:
        raise DomainError(f"q = {args.q} gives a tournament; co-even counting needs q = 1 mod 4")
    G = SimpleGraph.from_paley(P)
    if args.method == "brute":
        count = brute_force_coeven(G, workers=args.workers)
        dim = count.bit_length() - 1
    else:
        count, dim = count_coeven(G), coeven_dimension(G)
    em.emit({"q": P.q, "count": str(count), "dimension": dim, "method": args.method})
    if args.list:
        sets, truncated = coeven_sets(G, args.list)
        for V1 in sets:
            em.emit({"q": P.q, "part1": mask_members(V1), "part2": mask_members(G.full ^ V1)})
        em.emit({"q": P.q, "listed": len(sets), "truncated": truncated})
    return 0


def cmd_census(args, em: Emitter) -> int:
    P = build_paley(_field(args.q))
    r_max = args.r_max if args.r_max is not None else args.r_min
    reps = census(P, args.r_min, r_max, args.mode, args.budget or DEFAULT_BUDGET,
                  args.samples, args.seed, args.workers)
    for rep in reps:
        em.emit(rep.to_json())
    return 0


def cmd_bound(args, em: Emitter) -> int:
    em.emit(giant_lower_bound(args.n, args.theta).to_json())
    return 0


def cmd_weil(args, em: Emitter) -> int:
    if args.q is not None:
        _field(args.q)
    reps = weil_trials(args.trials, args.seed, q=args.q, deg=args.deg, q_max=args.q_max)
    if args.details:
        for rep in reps:
            em.emit(rep.to_json())
    failures = [rep.to_json() for rep in reps if not rep.ok]
    worst = max((rep.lhs / rep.bound for rep in reps), default=0.0)
    em.emit({"trials": len(reps), "ok": not failures, "failures": failures, "max_ratio": worst})
    return 0 if not failures else 1


def cmd_mds_search(args, em: Emitter) -> int:
    F = _field(args.q)
    om = enumerate_omega(F, args.n, args.budget or DEFAULT_BUDGET, args.workers)
    shown = om.sets if args.limit is None else om.sets[: args.limit]
    for alphas in shown:
        C = construct_self_dual(EvaluationSet(F, alphas))
        if args.format == "text":
            em.text(generator_text(C) + "\n")
        else:
            em.emit(code_to_record(C))
    if args.format == "json":
        em.emit({"q": F.q, "size": args.n, "length": om.code_length, "count": str(om.count),
                 "emitted": len(shown), "summary": True})
    return 0


def cmd_mds_verify(args, em: Emitter) -> int:
    try:
        with open(args.file) as fh:
            records = read_records(fh)
    except OSError as exc:
        raise DomainError(f"cannot read {args.file}: {exc.strerror}") from exc
    failed = 0
    for rec in records:
        res = verify_record(rec)
        failed += not res["ok"]
        em.emit(res)
    em.emit({"records": len(records), "failed": failed})
    if failed:
        raise VerificationFailed(f"{failed} of {len(records)} codes failed verification")
    return 0


def cmd_coeven_pairs(args, em: Emitter) -> int:
    res = coeven_pair_census(_field(args.q), cap=args.cap, method=args.method)
    em.emit(res.to_json())
    return 0


def cmd_random_expect(args, em: Emitter) -> int:
    rep = monte_carlo(args.n, args.p, args.r, args.trials, args.seed, args.kind,
                      args.workers, args.budget or DEFAULT_BUDGET)
    em.emit(rep.to_json())
    return 0


def cmd_verify_all(args, em: Emitter) -> int:
    from .acceptance import run_criterion

    numbers = [int(x) for x in args.only.split(",")] if args.only else list(range(1, 12))
    failed = 0
    for k in numbers:
        c = run_criterion(k)
        failed += not c.passed
        rec = {"criterion": c.number, "name": c.name, "passed": c.passed, "detail": c.detail}
        if args.timing:
            rec["seconds"] = c.seconds
        em.emit(rec)
    em.emit({"criteria": len(numbers), "failed": failed})
    return 0 if failed == 0 else 1


# -- parser --------------------------------------------------------------------

def _positive(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="paleyparity", description="Parity of induced subgraphs of Paley graphs and tournaments.")
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("--workers", type=_positive, default=1, help="worker processes (output does not depend on it)")
    ap.add_argument("--budget", type=_positive, default=None,
                    help=f"enumeration cap; default from ${BUDGET_ENV} or {DEFAULT_BUDGET}")
    ap.add_argument("--timing", action="store_true", help="append wall-clock time (breaks byte-identity)")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("field-info", help="describe F_q and its quadratic character")
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--modulus", help="comma-separated monic modulus coefficients, low to high")
    s.set_defaults(func=cmd_field_info)

    s = sub.add_parser("paley", help="P_q (q = 1 mod 4) or PT_q (q = 3 mod 4): summary or edge list")
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--edges", action="store_true", help="print 'u v' lines instead of JSON")
    s.set_defaults(func=cmd_paley)

    s = sub.add_parser(
        "coeven",
        help="count co-even partitions of P_q: 2 when q = 5 mod 8, 2^((q+1)/2) when q = 1 mod 8",
        description="Counts vertex sets V1 with P_q[V1] and P_q[V - V1] both even, as 2^dim of "
        "the odd-parity cover space of the odd-extension; 'brute' tests all 2^q subsets.",
    )
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--method", choices=["rank", "brute"], default="rank")
    s.add_argument("--list", type=_positive, default=None, metavar="N", help="also list up to N partitions")
    s.set_defaults(func=cmd_coeven)

    s = sub.add_parser(
        "census",
        help="even/odd/mixed induced sub(di)graph counts by order",
        description="Exhaustive or sampled census. The even fraction tends to 2^(1-r) for P_q and "
        "PT_q; PT_q has no even subtournament with r = 2, 3 mod 4 and no odd one with r = 1, 2 mod 4.",
    )
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--r-min", type=int, required=True)
    s.add_argument("--r-max", type=int, default=None)
    s.add_argument("--mode", choices=["exhaustive", "sample"], default="exhaustive")
    s.add_argument("--samples", type=_positive, default=10**5)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_census)

    s = sub.add_parser(
        "bound",
        help="lower bound C(n, n-theta) / C(n - ceil(theta/2), n - theta) on even induced subgraphs",
    )
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--theta", type=int, required=True)
    s.set_defaults(func=cmd_bound)

    s = sub.add_parser(
        "weil",
        help="check |sum_c eta(f_W(c)^n)| <= (|W| - 1) sqrt(q) on random cases",
    )
    s.add_argument("--q", type=int, default=None, help="fixed field order (default: random odd q <= --q-max)")
    s.add_argument("--deg", type=int, default=None, help="number of roots |W| (default: random in 2..6)")
    s.add_argument("--q-max", type=int, default=101)
    s.add_argument("--trials", type=_positive, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--details", action="store_true", help="one line per trial")
    s.set_defaults(func=cmd_weil)

    s = sub.add_parser(
        "mds",
        help="MDS self-dual (extended) GRS codes from evaluation sets",
        description="An n-set S carries a self-dual GRS code (n even) when all eta(D_S(a)) agree, "
        "and an extended one (n odd) when every eta(-D_S(a)) = 1.",
    )
    msub = s.add_subparsers(dest="mds_command", parser_class=_Parser)
    m = msub.add_parser("search", help="stream one code record per feasible n-subset of F_q")
    m.add_argument("--q", type=int, required=True)
    m.add_argument("--n", type=int, required=True)
    m.add_argument("--limit", type=int, default=None)
    m.add_argument("--format", choices=["json", "text"], default="json")
    m.set_defaults(func=cmd_mds_search)
    m = msub.add_parser("verify", help="re-verify code records; exit 1 on any failure")
    m.add_argument("--file", required=True)
    m.set_defaults(func=cmd_mds_verify)

    s = sub.add_parser(
        "coeven-pairs",
        help="even-size S whose codes on S and on F_q - S are both self-dual",
        description="Counts S (|S| even, 2 <= |S| <= q-1) with eta(D_S(a)) = 1 on S and "
        "eta(D_{F-S}(b)) = 1 on the complement; zero unless q = 1 mod 8.",
    )
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--cap", type=int, default=64, help="witnesses to list")
    s.add_argument("--method", choices=["auto", "scan", "rank"], default="auto")
    s.set_defaults(func=cmd_coeven_pairs)

    s = sub.add_parser(
        "random-expect",
        help="exact expected even-subgraph counts in G(n,p) / D(n,p) against Monte Carlo",
    )
    s.add_argument("--kind", choices=["graph", "digraph"], default="graph")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--p", required=True, help="probability as NUM/DEN")
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--trials", type=_positive, default=10**4)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_random_expect)

    s = sub.add_parser("verify-all", help="run the acceptance suite, one line per criterion")
    s.add_argument("--only", default=None, help="comma-separated criterion numbers")
    s.set_defaults(func=cmd_verify_all)
    return ap


def _manifest(args) -> dict:
    skip = {"func", "workers", "timing", "command", "mds_command"}
    params = {k: v for k, v in sorted(vars(args).items()) if k not in skip}
    sub = args.command + (f" {args.mds_command}" if args.command == "mds" else "")
    return {"tool": "paleyparity", "version": __version__, "subcommand": sub,
            "params": params, "seed": params.get("seed")}


def _default_budget() -> int | None:
    raw = os.environ.get(BUDGET_ENV)
    if not raw:
        return None
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"${BUDGET_ENV} must be an integer") from None
    if value < 1:
        raise UsageError(f"${BUDGET_ENV} must be positive")
    return value


def _error(stderr: TextIO, exc: Exception) -> None:
    kind = exc.kind if isinstance(exc, ParityError) else type(exc).__name__
    stderr.write(json.dumps({"error_kind": kind, "message": str(exc)}, sort_keys=True) + "\n")


def main(argv=None, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.command is None or (args.command == "mds" and args.mds_command is None):
            raise UsageError("missing subcommand")
        if args.budget is None:
            args.budget = _default_budget()
    except UsageError as exc:
        _error(stderr, exc)
        return 2
    em = Emitter(stdout, _manifest(args))
    t0 = time.perf_counter()
    try:
        code = args.func(args, em)
    except UsageError as exc:
        _error(stderr, exc)
        return 2
    except (ParityError, ValueError, ZeroDivisionError) as exc:
        _error(stderr, exc)
        return 1
    if args.timing:
        em.emit({"wall_time": round(time.perf_counter() - t0, 3)})
    return code

