"""Command-line front end: ``tcand closure|solve|gen|bench``.

Exit codes: 0 success, 2 parse error, 3 semantic or precondition error,
4 infeasible instance or failed randomized run, 5 internal solver error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .bench import SCHEMA_VERSION, SUITES, format_table, run_bench, write_csv
from .errors import InfeasibleError, InstanceError, ParseError, SolverError, TcandError
from .fd import bounded_closure, closure, format_instance, parse_instance
from .generators import gen_gap_instance, gen_random_instance, gen_vc_instance
from .oracle import MAX_EXACT, exact_rbsc, exact_tcand
from .redblue import RBSCInstance, parse_rbsc, rbsc_greedy, rbsc_to_tcand, red_cost
from .solve import MODES, applicable, run_mode

EXIT_OK, EXIT_PARSE, EXIT_SEMANTIC, EXIT_INFEASIBLE, EXIT_SOLVER = 0, 2, 3, 4, 5


class CommandFailed(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _read(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise CommandFailed(f"cannot read {path}: {exc.strerror}", EXIT_PARSE) from None


def _is_rbsc(text: str) -> bool:
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        return "->" not in line and line.split(":", 1)[0].strip().lower() in {
            "red", "reds", "blue", "blues", "set",
        }
    return False


def _split_names(values) -> list[str]:
    out = []
    for v in values or []:
        out += [p for p in v.replace(",", " ").split() if p]
    return out


def _emit(obj, out) -> None:
    out.write(json.dumps(obj, indent=2) + "\n")


def _ratio(a, b):
    if b is None:
        return None
    if b == 0:
        return 1.0 if a == 0 else None
    return a / b


# --- closure --------------------------------------------------------------

def cmd_closure(args, out) -> int:
    inst = parse_instance(_read(args.file))
    names = _split_names(args.attrs)
    attrs = inst.ids(names)
    if args.rounds is None:
        result = closure(attrs, inst.fds)
    else:
        if args.rounds < 0:
            raise InstanceError("rounds must be non-negative")
        result = bounded_closure(attrs, inst.fds, args.rounds)
    _emit({
        "schema_version": SCHEMA_VERSION,
        "input": inst.label(attrs),
        "rounds": args.rounds,
        "closure": inst.label(result),
    }, out)
    return EXIT_OK


# --- solve ----------------------------------------------------------------

def _solve_record(inst, mode, args) -> dict:
    res = run_mode(inst, mode, seed=args.seed, c=args.c, with_lp=True)
    rec = {
        "mode": mode,
        "solution": inst.label(res.solution),
        "size": res.size,
        "feasible": res.feasible,
        "lp_bound": res.lp_bound,
        "ratio_vs_lp": _ratio(res.size, res.lp_bound),
        "elapsed_ms": round(res.elapsed_ms, 3),
    }
    rec.update(res.extra)
    return rec


def _solve_tcand(inst, args, out) -> int:
    if args.compare:
        exact = len(exact_tcand(inst)) if inst.n <= MAX_EXACT else None
        rows = []
        for mode in MODES:
            if applicable(inst, mode):
                rec = _solve_record(inst, mode, args)
                rec["ratio_vs_exact"] = _ratio(rec["size"], exact)
                rows.append(rec)
        report = {"schema_version": SCHEMA_VERSION, "exact": exact, "results": rows}
        if args.pretty:
            out.write(_compare_table(rows) + "\n")
        else:
            _emit(report, out)
        return EXIT_OK if all(r["feasible"] for r in rows) else EXIT_INFEASIBLE
    rec = {"schema_version": SCHEMA_VERSION, **_solve_record(inst, args.mode, args)}
    if args.pretty:
        out.write(_compare_table([rec]) + "\n")
    else:
        _emit(rec, out)
    if not rec["feasible"]:
        print(f"error: {args.mode} produced no feasible solution", file=sys.stderr)
        return EXIT_INFEASIBLE
    return EXIT_OK


def _compare_table(rows) -> str:
    lines = [f"{'mode':<12} {'size':>4} {'feasible':>8} {'lp_bound':>9} {'ms':>9}  solution"]
    for r in rows:
        lp = "-" if r["lp_bound"] is None else f"{r['lp_bound']:.4f}"
        lines.append(
            f"{r['mode']:<12} {r['size']:>4} {str(r['feasible']):>8} {lp:>9} "
            f"{r['elapsed_ms']:>9.2f}  {' '.join(r['solution'])}"
        )
    return "\n".join(lines)


def _repair_cover(rb: RBSCInstance, chosen) -> tuple[int, ...]:
    """Add the set with fewest new reds for each blue still uncovered."""
    chosen = set(chosen)
    for b in sorted(rb.blues, key=repr):
        if any(b in rb.sets[i] for i in chosen):
            continue
        options = [i for i, s in enumerate(rb.sets) if b in s]
        if not options:
            raise InfeasibleError(f"blue element {b!r} lies in no set")
        chosen.add(min(options, key=lambda i: (red_cost(rb, chosen | {i}), i)))
    return tuple(sorted(chosen))


def _solve_rbsc(rb: RBSCInstance, args, out) -> int:
    modes = ["exact", "rbsc-greedy", "lp-det", "lp-rand"] if args.compare else [args.mode]
    if "simple" in modes:
        raise InstanceError("simple mode does not apply to Red-Blue instances")
    rows = []
    for mode in modes:
        if mode == "exact":
            cover, _ = exact_rbsc(rb)
        elif mode == "rbsc-greedy":
            cover, _ = rbsc_greedy(rb)
        else:
            inst, mapping = rbsc_to_tcand(rb)
            res = run_mode(inst, mode, seed=args.seed, c=args.c)
            cover = _repair_cover(rb, mapping.attrs_to_cover(rb, res.solution))
        rows.append({
            "mode": mode,
            "cover": list(cover),
            "red_cost": red_cost(rb, cover),
            "feasible": rb.covers(cover),
        })
    report = {"schema_version": SCHEMA_VERSION, "problem": "red-blue", "results": rows}
    if args.pretty:
        for r in rows:
            out.write(f"{r['mode']:<12} cost={r['red_cost']} sets={r['cover']}\n")
    else:
        _emit(report if args.compare else {"schema_version": SCHEMA_VERSION, **rows[0]}, out)
    return EXIT_OK if all(r["feasible"] for r in rows) else EXIT_INFEASIBLE


def cmd_solve(args, out) -> int:
    if args.c < 1:
        raise InstanceError("--c must be at least 1")
    text = _read(args.file)
    if _is_rbsc(text):
        return _solve_rbsc(parse_rbsc(text), args, out)
    return _solve_tcand(parse_instance(text), args, out)


# --- gen ------------------------------------------------------------------

def _parse_edges(text: str) -> list[tuple[str, str]]:
    edges = []
    for tok in text.replace(",", " ").split():
        u, sep, v = tok.partition("-")
        if not sep or not u or not v:
            raise ParseError(f"bad edge {tok!r}; expected u-v")
        edges.append((u, v))
    return edges


def cmd_gen(args, out) -> int:
    if args.kind == "gap":
        inst = gen_gap_instance(args.g, args.rounds or 1)
        note = f"gap instance g={args.g} D={inst.rounds}"
    elif args.kind == "vc":
        if args.edges is None and args.edge_file is None:
            raise InstanceError("vc needs --edges or --edge-file")
        edge_text = args.edges if args.edges is not None else _read(args.edge_file)
        inst = gen_vc_instance(_parse_edges(edge_text))
        note = "vertex cover encoding"
    else:
        inst = gen_random_instance(
            args.n, args.m, max_lhs=args.max_lhs, target_fraction=args.target_fraction,
            seed=args.seed, rounds=args.rounds,
        )
        note = f"random instance n={args.n} m={args.m} seed={args.seed}"
    text = format_instance(inst, comment=note)
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise CommandFailed(f"cannot write {args.out}: {exc.strerror}", EXIT_SEMANTIC) from None
    else:
        out.write(text)
    return EXIT_OK


# --- bench ----------------------------------------------------------------

def cmd_bench(args, out) -> int:
    report = run_bench(args.suite, repeat=args.repeat, seed=args.seed, c=args.c)
    if args.csv:
        write_csv(report, args.csv)
    if args.plot_dir:
        from .plotting import render_report

        report["figures"] = render_report(report, args.plot_dir)
    if args.pretty and not args.json:
        out.write(format_table(report) + "\n")
    else:
        _emit(report, out)
    return EXIT_OK if all(r["feasible"] for r in report["rows"]) else EXIT_INFEASIBLE


# --- wiring ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tcand", description="Target-set candidate keys under FDs.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("closure", help="attribute closure or D-round closure")
    c.add_argument("file")
    c.add_argument("--attrs", nargs="*", default=[], help="attribute names (space or comma separated)")
    c.add_argument("--rounds", type=int, default=None, help="inference rounds (default: unbounded)")
    c.set_defaults(func=cmd_closure)

    s = sub.add_parser("solve", help="solve a TCAND or Red-Blue instance")
    s.add_argument("file")
    s.add_argument("--mode", choices=MODES, default="lp-det")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--c", type=float, default=2.0, help="oversampling constant for lp-rand")
    s.add_argument("--compare", action="store_true", help="run every applicable mode")
    s.add_argument("--pretty", action="store_true", help="human-readable table instead of JSON")
    s.set_defaults(func=cmd_solve)

    g = sub.add_parser("gen", help="write a generated instance")
    g.add_argument("kind", choices=("gap", "vc", "random"))
    g.add_argument("--g", type=int, default=5, help="gap layer width")
    g.add_argument("--rounds", type=int, default=None)
    g.add_argument("--edges", help="vc edges as 'u-v,u-v,...'")
    g.add_argument("--edge-file", help="vc edges, one 'u-v' token per entry")
    g.add_argument("--n", type=int, default=10)
    g.add_argument("--m", type=int, default=15)
    g.add_argument("--max-lhs", type=int, default=2)
    g.add_argument("--target-fraction", type=float, default=0.3)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    b = sub.add_parser("bench", help="run a benchmark suite")
    b.add_argument("suite", choices=SUITES)
    b.add_argument("--repeat", type=int, default=1)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--c", type=float, default=2.0)
    b.add_argument("--json", action="store_true", help="JSON output (the default)")
    b.add_argument("--pretty", action="store_true", help="human-readable table")
    b.add_argument("--csv", help="also write rows as CSV")
    b.add_argument("--plot-dir", help="also render PNG figures into this directory")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except CommandFailed as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InstanceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except TcandError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC


if __name__ == "__main__":
    sys.exit(main())
