"""Command-line front end: ``fewnomial {bound,random,gale,solve,verify,plot}``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .bounds import bound_report
from .errors import (
    EvenIndex,
    FewnomialError,
    InstanceFormatError,
    RankDeficient,
    SamplingExhausted,
    UnsupportedDimension,
    UnsupportedK,
)
from .gale import build_gale_dual, verify_duality
from .instances import dumps, random_instance, read_instance, to_dict
from .lattice import kouchnirenko_bound, span_index_parity
from .oracle import oracle_count
from .solver import UNVERIFIED, SolveOptions, solve_sparse

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_HYPOTHESIS, EXIT_MISMATCH = 0, 1, 2, 3, 4


def default_seed() -> int:
    raw = os.environ.get("FEWNOMIAL_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"FEWNOMIAL_SEED must be an integer, got {raw!r}")


def _emit(data: dict, as_json: bool, table: list[tuple[str, object]] | None = None) -> None:
    if as_json or table is None:
        print(json.dumps(data, indent=2, sort_keys=True))
        return
    width = max(len(k) for k, _ in table)
    for key, value in table:
        print(f"{key:<{width}}  {value}")


def cmd_bound(args) -> int:
    if args.n < 1 or args.k < 0:
        print("error: need n >= 1 and k >= 0", file=sys.stderr)
        return EXIT_USAGE
    rep = bound_report(args.n, args.k)
    data = rep.to_dict()
    table = [
        ("n, k", f"{args.n}, {args.k}"),
        ("new bound", f"{float(rep.new_bound):.6g}  (integer {rep.new_bound.strict_int})"),
        ("positive bound", f"{float(rep.positive_bound):.6g}  (integer {rep.positive_bound.strict_int})"),
        ("khovanskii bound", rep.khovanskii_bound),
    ]
    if rep.sharp is not None:
        table.append(("sharp (k = 1)", f"2n+1 = {rep.sharp[0]}, positive n+1 = {rep.sharp[1]}"))
    if rep.ledger is not None:
        led = rep.ledger
        table.append(("ledger", f"|V(Gamma)| <= {led.gamma_term}, flat terms {[str(t) for t in led.flat_terms]}, total {led.total}"))
    if args.with_support:
        inst = read_instance(args.with_support)
        parity = span_index_parity(inst.support)
        applicable = parity.odd and inst.n == args.n and inst.k == args.k
        extra = {"parity": str(parity), "applicable": applicable}
        if inst.n <= 3:
            extra["kouchnirenko"] = kouchnirenko_bound(inst.support)
        data.update(extra)
        table += [(k, v) for k, v in extra.items()]
    _emit(data, args.json, table)
    return EXIT_OK


def cmd_random(args) -> int:
    sysm = random_instance(
        args.n,
        args.k,
        args.seed,
        exp_range=args.exp_range,
        coef_range=args.coef_range,
        require_odd=args.require_odd,
        exp_step=args.exp_step,
    )
    meta = {"seed": args.seed, "generator": "random", "exp_range": args.exp_range, "coef_range": args.coef_range}
    text = dumps(sysm, meta)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_gale(args) -> int:
    inst = read_instance(args.file)
    gd = build_gale_dual(inst)
    rep = verify_duality(inst, gd, samples=args.samples, seed=args.seed)
    data = {
        "forms": [[str(a) for a in f] for f in gd.forms],
        "weights": [[str(b) for b in row] for row in gd.weights.B],
        "duality": rep.to_dict(),
    }
    _emit(data, True)
    return EXIT_OK


def _solve_report(inst, args) -> tuple[dict, int]:
    out: dict = {"instance": to_dict(inst)}
    code = EXIT_OK
    kr = None
    if args.method in ("kr", "both"):
        kr = solve_sparse(inst, SolveOptions(seed=args.seed, perturb=args.perturb))
        out["kr"] = kr.to_dict()
        if kr.status == UNVERIFIED:
            code = EXIT_MISMATCH
    if args.method in ("oracle", "both"):
        target = kr.system if kr is not None and kr.system is not None else inst
        orc = oracle_count(target)
        out["oracle"] = orc.to_dict()
        if kr is not None:
            out["verdict"] = "MATCH" if kr.status != UNVERIFIED and kr.count == orc.count else "MISMATCH"
            if kr.perturbed:
                out["oracle_unperturbed_count"] = oracle_count(inst, locate=False).count
            if out["verdict"] == "MISMATCH":
                code = EXIT_MISMATCH
    return out, code


def cmd_solve(args) -> int:
    inst = read_instance(args.file)
    out, code = _solve_report(inst, args)
    if args.json:
        _emit(out, True)
        return code
    if "kr" in out:
        k = out["kr"]
        print(f"kr: {k['status']}, {k['count']} nondegenerate solution(s)" + (" (perturbed)" if k["perturbed"] else ""))
        for s in k["solutions"]:
            print(f"  x = {s['x']}  residual {s['sparse_residual']}")
        if k["ledger"]:
            led = k["ledger"]
            print(f"  ledger: flat {led['flat']} + |V(Gamma)| {led['gamma_points']} = {led['rhs']}")
    if "oracle" in out:
        print(f"oracle: {out['oracle']['count']} nondegenerate solution(s)")
    if "verdict" in out:
        print(out["verdict"])
    return code


def cmd_verify(args) -> int:
    from .campaign import run_campaign

    summary = run_campaign(args.campaign, seed=args.seed, size=args.size, jobs=args.jobs)
    data = summary.to_dict()
    if not args.json:
        data.pop("results")
    table = [
        ("campaign", f"{summary.campaign} (seed {summary.seed})"),
        ("instances", summary.instances),
        ("matches", summary.matches),
        ("mismatches", summary.mismatches),
        ("unverified", summary.unverified),
        ("ledger violations", summary.ledger_violations),
        ("kouchnirenko violations", summary.kouchnirenko_violations),
    ] + [(f"max count n={n} k={k}", summary.max_count(n, k)) for n, k in sorted({(r.n, r.k) for r in summary.results})]
    _emit(data, args.json, table)
    bad = summary.mismatches or summary.ledger_violations or summary.kouchnirenko_violations
    return EXIT_MISMATCH if bad else EXIT_OK


def cmd_plot(args) -> int:
    from .plot import plot_instance

    inst = read_instance(args.file)
    svg = plot_instance(inst, seed=args.seed)
    if args.output:
        Path(args.output).write_text(svg)
    else:
        sys.stdout.write(svg)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fewnomial", description="Fewnomial bounds and real solution counting")
    sub = p.add_subparsers(dest="command", required=True)
    seed = default_seed()

    b = sub.add_parser("bound", help="print the fewnomial bounds for (n, k)")
    b.add_argument("-n", type=int, required=True)
    b.add_argument("-k", type=int, required=True)
    b.add_argument("--with-support", metavar="FILE", help="instance file: also report parity and Kouchnirenko")
    b.add_argument("--json", action="store_true")
    b.set_defaults(func=cmd_bound)

    r = sub.add_parser("random", help="write a seeded random instance")
    r.add_argument("-n", type=int, required=True)
    r.add_argument("-k", type=int, required=True)
    r.add_argument("--seed", type=int, default=seed)
    r.add_argument("--exp-range", type=int, default=5)
    r.add_argument("--exp-step", type=int, default=1, help="exponents are multiples of this")
    r.add_argument("--coef-range", type=int, default=10)
    r.add_argument("--require-odd", action=argparse.BooleanOptionalAction, default=True)
    r.add_argument("-o", "--output")
    r.set_defaults(func=cmd_random)

    g = sub.add_parser("gale", help="print the Gale dual of an instance and check the correspondence")
    g.add_argument("file")
    g.add_argument("--samples", type=int, default=100)
    g.add_argument("--seed", type=int, default=seed)
    g.set_defaults(func=cmd_gale)

    s = sub.add_parser("solve", help="count nondegenerate nonzero real solutions")
    s.add_argument("file")
    s.add_argument("--method", choices=("kr", "oracle", "both"), default="both")
    s.add_argument("--perturb", choices=("auto", "always", "never"), default="auto")
    s.add_argument("--seed", type=int, default=seed)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="run a randomized KR-versus-oracle campaign")
    v.add_argument("--campaign", choices=("small", "full"), default="small")
    v.add_argument("--seed", type=int, default=seed)
    v.add_argument("--size", type=int, default=None, help="override the number of instances")
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify)

    pl = sub.add_parser("plot", help="draw the arrangement, traced curves and solutions as SVG")
    pl.add_argument("file")
    pl.add_argument("-o", "--output")
    pl.add_argument("--seed", type=int, default=seed)
    pl.set_defaults(func=cmd_plot)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (EvenIndex, RankDeficient) as exc:
        print(f"hypothesis failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except (InstanceFormatError, SamplingExhausted, UnsupportedK, UnsupportedDimension, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FewnomialError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
