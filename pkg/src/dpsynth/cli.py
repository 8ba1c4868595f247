"""Command-line front end: ``dpsynth plan | solve | bench``.

Exit codes for ``solve``: 0 fully realizable, 10 partially, 20 nullary,
30 timeout, 2 usage/parse errors, 1 anything else.
"""
from __future__ import annotations

import argparse
import contextlib
import csv
import json
import logging
import signal
import sys
from pathlib import Path

from .cnf import QdimacsError, read_qdimacs
from .pipeline import ENGINES, EXIT_CODES, EXIT_ERROR, EXIT_TIMEOUT, SolveStats, solve
from .planner import PLANNERS, plan, tree_width, validate_tree

log = logging.getLogger("dpsynth")

STAT_FIELDS = [f for f in SolveStats.__dataclass_fields__ if f not in ("instance", "engine")]
QDIMACS_SUFFIXES = (".qdimacs", ".qdimacs.txt", ".cnf")


class SolveTimeout(Exception):
    pass


@contextlib.contextmanager
def time_limit(seconds: float | None):
    """SIGALRM-based limit; a no-op without a limit or off the main thread."""
    if not seconds or not hasattr(signal, "setitimer"):
        yield
        return

    def fire(signum, frame):
        raise SolveTimeout(f"exceeded {seconds} s")

    try:
        old = signal.signal(signal.SIGALRM, fire)
    except ValueError:  # not the main thread
        yield
        return
    signal.setitimer(signal.ITIMER_REAL, seconds)
    try:
        yield
    finally:
        signal.setitimer(signal.ITIMER_REAL, 0)
        signal.signal(signal.SIGALRM, old)


def _dump_json(path: str, data) -> None:
    text = json.dumps(data, indent=2, sort_keys=True) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def cmd_plan(args) -> int:
    p = read_qdimacs(args.file)
    tree = plan(p, args.planner)
    problems = validate_tree(p, tree)
    width = tree_width(p, tree)
    if args.dot:
        Path(args.dot).write_text(tree.to_dot(p))
    if args.json:
        _dump_json(args.json, tree.to_json())
    print(f"planner: {args.planner}")
    print(f"width: {width}")
    if problems:
        print("valid: no")
        for v in problems:
            print(f"  {v}")
        return 1
    print("valid: yes")
    return 0


def cmd_solve(args) -> int:
    p = read_qdimacs(args.file)
    with time_limit(args.timeout):
        res = solve(p, planner=args.planner, engine=args.engine, verify=args.verify,
                    oracle_bound=args.max_oracle_vars, name=Path(args.file).name)
    if res.witnesses is not None and args.witnesses:
        _dump_json(args.witnesses, res.witnesses.to_json(p))
    if args.stats:
        _dump_json(args.stats, res.stats.to_json())
    print(f"verdict: {res.stats.verdict}")
    if res.report is not None:
        print(f"verification: {'ok' if res.report.ok else 'FAILED'}")
        if not res.report.ok:
            print(f"counterexample: {res.report.counterexample}")
            return 1
    return EXIT_CODES[res.outcome.verdict]


def bench_instances(directory: str) -> list[Path]:
    d = Path(directory)
    return sorted(f for f in d.iterdir() if f.is_file() and f.name.endswith(QDIMACS_SUFFIXES))


def run_bench(directory: str, engines=ENGINES, planner: str = "treedecomp",
              timeout: float | None = None, verify: bool = True) -> list[dict]:
    """One row per instance with ``<engine>_<field>`` cells; failures leave
    the engine's cells empty apart from the verdict marker."""
    rows = []
    for f in bench_instances(directory):
        row = {"instance": f.name}
        try:
            p = read_qdimacs(f)
        except QdimacsError as exc:
            log.warning("%s: %s", f.name, exc)
            for e in engines:
                row[f"{e}_verdict"] = "parse-error"
            rows.append(row)
            continue
        for e in engines:
            try:
                with time_limit(timeout):
                    res = solve(p, planner=planner, engine=e, verify=verify, name=f.name)
            except SolveTimeout:
                row[f"{e}_verdict"] = "timeout"
                continue
            except Exception as exc:  # recorded, never aborts the batch
                log.warning("%s/%s: %s", f.name, e, exc)
                row[f"{e}_verdict"] = "error"
                continue
            for k, v in res.stats.to_json().items():
                if k in STAT_FIELDS:
                    row[f"{e}_{k}"] = round(v, 3) if isinstance(v, float) else v
        rows.append(row)
    return rows


def bench_columns(engines) -> list[str]:
    return ["instance"] + [f"{e}_{k}" for e in engines for k in STAT_FIELDS]


def write_csv(rows: list[dict], engines, out) -> None:
    w = csv.DictWriter(out, fieldnames=bench_columns(engines), restval="", lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)


def cmd_bench(args) -> int:
    engines = ENGINES if args.engines == "both" else (args.engines,)
    rows = run_bench(args.dir, engines, args.planner, args.timeout, verify=not args.no_verify)
    if args.csv and args.csv != "-":
        with open(args.csv, "w", newline="") as fh:
            write_csv(rows, engines, fh)
    else:
        write_csv(rows, engines, sys.stdout)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dpsynth", description="Boolean realizability and synthesis "
                                 "over graded project-join trees.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("plan", help="build and validate a graded project-join tree")
    sp.add_argument("file")
    sp.add_argument("--planner", choices=sorted(PLANNERS), default="treedecomp")
    sp.add_argument("--dot", help="write the tree in DOT format")
    sp.add_argument("--json", help="write the tree as JSON ('-' for stdout)")
    sp.set_defaults(func=cmd_plan)

    ss = sub.add_parser("solve", help="decide realizability and synthesize witnesses")
    ss.add_argument("file")
    ss.add_argument("--planner", choices=sorted(PLANNERS), default="treedecomp")
    ss.add_argument("--engine", choices=ENGINES, default="dpsynth")
    ss.add_argument("--witnesses", help="witness JSON output path ('-' for stdout)")
    ss.add_argument("--stats", help="stats JSON output path ('-' for stdout)")
    ss.add_argument("--verify", action="store_true", help="check witnesses against the CNF")
    ss.add_argument("--max-oracle-vars", type=int, default=20,
                    help="enumeration cross-check bound on |X|+|Y|")
    ss.add_argument("--timeout", type=float, help="seconds")
    ss.set_defaults(func=cmd_solve)

    sb = sub.add_parser("bench", help="run both engines over a directory of QDIMACS files")
    sb.add_argument("dir")
    sb.add_argument("--engines", choices=("both",) + ENGINES, default="both")
    sb.add_argument("--planner", choices=sorted(PLANNERS), default="treedecomp")
    sb.add_argument("--timeout", type=float, help="seconds per engine per instance")
    sb.add_argument("--csv", help="CSV output path (default stdout)")
    sb.add_argument("--no-verify", action="store_true")
    sb.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except QdimacsError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except SolveTimeout as exc:
        print(f"timeout: {exc}", file=sys.stderr)
        return EXIT_TIMEOUT


if __name__ == "__main__":
    sys.exit(main())
