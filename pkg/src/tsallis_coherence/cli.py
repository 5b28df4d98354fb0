"""``coh`` command-line front end.

Exit codes: 0 success, 2 usage or input error, 3 reproduction mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import channels, ordering, qubit, registry
from .errors import CoherenceError
from .formats import (
    curve_rows,
    curves_to_csv,
    curves_to_json,
    dumps_report,
    format_number,
    parse_state,
)
from .measures import MeasureId, MeasureKind, measure

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_MISMATCH = 3

DEFAULT_MEASURES = ("l1", "l2", "tsallis:0.5", "rel", "tsallis:2")
EQ3_ALPHAS = (0.3, 0.5, 1.5, 2.0)
PURE_ALPHAS = (None, 0.3, 0.5, 1.0, 1.5, 2.0)
CHECK_MEASURES = ("l1", "l2", "rel", "tsallis:0.3", "tsallis:0.5", "tsallis:1.5", "tsallis:2")


class UsageError(Exception):
    pass


def _measure_arg(text: str) -> MeasureId:
    try:
        return MeasureId.parse(text)
    except CoherenceError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _write(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text)
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc}") from None


def _sig(x: float) -> str:
    return f"{x:.10g}"


# measure -----------------------------------------------------------------


def cmd_measure(args) -> int:
    if args.text is not None:
        text = args.text.replace(";", "\n")
    elif args.state in (None, "-"):
        text = sys.stdin.read()
    else:
        try:
            text = Path(args.state).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read {args.state}: {exc}") from None
    parsed = parse_state(text, renormalize=args.renormalize)
    measures = args.measure or [MeasureId.parse(m) for m in DEFAULT_MEASURES]
    print(f"{'measure':<12} {'alpha':>8} {'value':>18}")
    for mid in measures:
        value = measure(parsed.state, mid).value
        alpha = "-" if mid.effective_alpha is None else f"{mid.effective_alpha:g}"
        print(f"{mid.kind.value:<12} {alpha:>8} {_sig(value):>18}")
    return EXIT_OK


# reproduce ---------------------------------------------------------------


def cmd_reproduce(args) -> int:
    if args.list:
        for c in registry.counterexample_registry():
            print(c.name)
        return EXIT_OK
    try:
        result = registry.reproduce(args.case)
    except KeyError:
        names = ", ".join(registry.case_names())
        raise UsageError(f"unknown case {args.case!r}; choose 'all' or one of: {names}") from None

    print(f"{'state':<10} {'measure':<12} {'expected':>10} {'computed':>16}  ok")
    for v in result.values:
        print(f"{v.state:<10} {v.measure.label:<12} {v.expected:>10.5g} {_sig(v.computed):>16}  "
              f"{'yes' if v.ok else 'NO'}")
    print()
    for v in result.verdicts:
        print(f"{v.case:<20} expected={v.expected.value:<13} computed={v.computed.value:<13} "
              f"{'yes' if v.ok else 'NO'}")
    n_val = sum(v.ok for v in result.values)
    n_ver = sum(v.ok for v in result.verdicts)
    print(f"\n{n_val}/{len(result.values)} measure values matched "
          f"(tol {registry.REPRODUCE_TOL:g}), {n_ver}/{len(result.verdicts)} violation verdicts confirmed")
    if not result.ok:
        for m in result.mismatches():
            print(f"MISMATCH: {m}", file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


# curves ------------------------------------------------------------------


def cmd_curves(args) -> int:
    rows = curve_rows(args.alpha, args.steps)
    text = curves_to_csv(rows) if args.format == "csv" else curves_to_json(rows)
    _write(text, args.out)
    return EXIT_OK


# scan --------------------------------------------------------------------


def cmd_scan(args) -> int:
    if args.family == "qudit":
        report = ordering.scan_pure_qudit_pairs(
            args.dim, args.measure_a, args.measure_b, args.n, args.seed, args.eps)
    else:
        report = ordering.scan_qubit_pairs(
            args.family, args.measure_a, args.measure_b, args.n, args.seed, args.eps)
    if args.format == "json":
        text = dumps_report(report.to_dict())
    else:
        lines = ["index,params1,params2,A1,A2,B1,B2,verdict"]
        for v in report.violations:
            vals = v.record.values()
            lines.append(",".join([
                str(v.index),
                '"' + json.dumps(v.params1, sort_keys=True).replace('"', '""') + '"',
                '"' + json.dumps(v.params2, sort_keys=True).replace('"', '""') + '"',
                *(format_number(vals[k]) for k in ("A1", "A2", "B1", "B2")),
                v.record.verdict.value,
            ]))
        text = "\n".join(lines) + "\n"
    if args.out not in (None, "-"):
        _write(text, args.out)
    print(report.summary())
    return EXIT_OK


# monotonicity ------------------------------------------------------------


def _grid_report(rep, header: str) -> bool:
    print(header)
    print(f"{'point':>14} {'quotient':>16} {'claim':>6}  ok")
    for x, q, claim, ok in rep.rows():
        print(f"{x:>14.8f} {q:>16.8e} {claim:>6}  {'yes' if ok else 'NO'}")
    status = "PASS" if rep.passed else "FAIL"
    print(f"{status}: {int(rep.passes.sum())}/{rep.passes.size} points\n")
    return rep.passed


def _batch_report(res, verbose: bool, assert_pass: bool = True) -> bool:
    if verbose:
        print(f"{'case':>7} {'lhs':>16} {'rhs':>16}  ok")
        for k in range(res.cases):
            print(f"{k:>7} {res.lhs[k]:>16.10g} {res.rhs[k]:>16.10g}  "
                  f"{'yes' if res.passed[k] else 'NO'}")
    else:
        for k in res.failures[:20]:
            print(f"  case {k}: lhs={res.lhs[k]:.10g} rhs={res.rhs[k]:.10g}")
    tag = "PASS" if res.all_passed else ("FAIL" if assert_pass else "WITNESSES")
    print(f"{tag}: {res.summary()}")
    return res.all_passed or not assert_pass


def _replay(path: str) -> int:
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    worst = 0.0
    count = 0
    for line in lines:
        rec = json.loads(line)
        if rec.get("kind") != "c2b":
            continue
        rep = channels.replay_c2b_witness(rec)
        diff = max(abs(rep.lhs - rec["lhs"]), abs(rep.rhs - rec["rhs"]))
        worst = max(worst, diff)
        count += 1
        print(f"witness seed={rec['seed']} index={rec['index']} {rec['measure']}: "
              f"lhs={rep.lhs:.12g} rhs={rep.rhs:.12g} replay_diff={diff:.3e}")
    ok = worst <= 1e-10
    print(f"{'PASS' if ok else 'FAIL'}: {count} witnesses replayed, max difference {worst:.3e}")
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_monotonicity(args) -> int:
    kind = args.kind
    ok = True
    ts = args.t or [0.2, 0.5, 0.8]

    if kind == "prop1":
        for a in args.alpha or PURE_ALPHAS:
            rep = qubit.monotonicity_check("pure_p", alpha=a, grid=args.grid)
            name = "C_l1" if a is None else f"C_alpha, alpha={a:g}"
            ok &= _grid_report(rep, f"d {name} / dp for pure qubits")
    elif kind == "prop2":
        for t in ts:
            for a in args.alpha or [2.0, 1.0, 0.5]:
                rep = qubit.monotonicity_check("qubit_z", fixed=t, alpha=a, grid=args.grid)
                ok &= _grid_report(rep, f"d C_alpha(rho(t,z))/dz, t={t:g}, alpha={a:g}")
    elif kind == "appendix":
        for t in ts:
            rep = qubit.monotonicity_check("r_half_z", fixed=t, grid=args.grid)
            ok &= _grid_report(rep, f"d r_1/2/dz, t={t:g}")
    elif kind == "eq3":
        data = channels.generate_cases(args.dim, args.cases, args.seed)
        for a in args.alpha or EQ3_ALPHAS:
            res = channels.run_eq3(args.dim, args.cases, a, args.seed, data=data)
            ok &= _batch_report(res, args.verbose)
    elif kind == "c2a":
        data = channels.generate_cases(args.dim, args.cases, args.seed)
        for m in args.measure or [MeasureId.parse(x) for x in CHECK_MEASURES]:
            ok &= _batch_report(channels.run_c2a(args.dim, args.cases, m, args.seed, data=data),
                                args.verbose)
    elif kind == "c3":
        data = channels.generate_ensembles(args.dim, args.cases, args.seed)
        for m in args.measure or [MeasureId.parse(x) for x in CHECK_MEASURES]:
            ok &= _batch_report(channels.run_c3(args.dim, args.cases, m, args.seed, data=data),
                                args.verbose)
    elif kind == "c2b":
        if args.replay:
            return _replay(args.replay)
        data = channels.generate_cases(args.dim, args.cases, args.seed)
        measures = args.measure or [MeasureId.l1()] + [MeasureId.tsallis(a) for a in EQ3_ALPHAS]
        log_lines = []
        for m in measures:
            if m.kind is MeasureKind.TSALLIS:
                res, witnesses = channels.explore_c2b(args.dim, args.cases, m.alpha, args.seed,
                                                      data=data)
                _batch_report(res, args.verbose, assert_pass=False)
                log_lines.append({"kind": "c2b-run", "measure": m.label, "dim": args.dim,
                                  "seed": args.seed, "cases": args.cases,
                                  "witnesses": len(witnesses)})
                log_lines.extend(witnesses)
            else:
                res = channels.run_c2b(args.dim, args.cases, m, args.seed, data=data)
                ok &= _batch_report(res, args.verbose)
        if args.log:
            _write("".join(json.dumps(rec, sort_keys=True) + "\n" for rec in log_lines), args.log)
    return EXIT_OK if ok else 1


# parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="coh", description="Coherence measures and ordering checks.")
    sub = p.add_subparsers(dest="command", required=True)

    m = sub.add_parser("measure", help="evaluate coherence measures on a state file")
    m.add_argument("state", nargs="?", help="state file path, or '-' for stdin")
    m.add_argument("--text", help="inline state description; ';' separates lines")
    m.add_argument("--measure", action="append", type=_measure_arg,
                   help="l1, l2, rel or tsallis:<alpha>; repeatable")
    m.add_argument("--renormalize", action="store_true",
                   help="rescale pure amplitudes that are not unit norm")
    m.set_defaults(func=cmd_measure)

    r = sub.add_parser("reproduce", help="replay the registered counterexamples")
    r.add_argument("case", nargs="?", default="all")
    r.add_argument("--list", action="store_true", help="list case names")
    r.set_defaults(func=cmd_reproduce)

    c = sub.add_parser("curves", help="emit C_max/C_min envelope data")
    c.add_argument("--alpha", type=float, choices=[2.0, 1.0, 0.5], required=True)
    c.add_argument("--steps", type=int, default=100)
    c.add_argument("--format", choices=["csv", "json"], default="csv")
    c.add_argument("--out", default="-")
    c.set_defaults(func=cmd_curves)

    s = sub.add_parser("scan", help="search random state pairs for ordering violations")
    s.add_argument("--family", choices=["pure", "mixed_disk", "qudit"], required=True)
    s.add_argument("--dim", type=int, default=3, help="dimension for the qudit family")
    s.add_argument("--measure-a", type=_measure_arg, default=MeasureId.l1())
    s.add_argument("--measure-b", type=_measure_arg, required=True)
    s.add_argument("--n", type=int, default=10000)
    s.add_argument("--seed", type=int, default=7)
    s.add_argument("--eps", type=float, default=ordering.DEFAULT_EPS)
    s.add_argument("--format", choices=["json", "csv"], default="json")
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_scan)

    k = sub.add_parser("monotonicity", help="finite-difference and channel monotonicity checks")
    k.add_argument("kind", choices=["prop1", "prop2", "appendix", "eq3", "c2b", "c2a", "c3"])
    k.add_argument("--t", type=float, action="append", help="fixed t; repeatable")
    k.add_argument("--alpha", type=float, action="append", help="repeatable")
    k.add_argument("--grid", type=int, default=99)
    k.add_argument("--dim", type=int, default=2)
    k.add_argument("--cases", type=int, default=10000)
    k.add_argument("--seed", type=int, default=11)
    k.add_argument("--measure", action="append", type=_measure_arg)
    k.add_argument("--log", help="c2b: write witness log (JSON lines)")
    k.add_argument("--replay", help="c2b: replay a witness log instead of searching")
    k.add_argument("--verbose", action="store_true", help="print every case")
    k.set_defaults(func=cmd_monotonicity)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"coh: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CoherenceError as exc:
        print(f"coh: invalid input: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
