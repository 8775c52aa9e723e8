"""Command line entry point: `workbench run | list-suites | describe-ring`.

Exit codes: 0 all pass, 1 a conclusive failure, 2 usage or config error,
3 budget exhausted somewhere with no conclusive failure.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from .config import SUITES, load_config
from .errors import ParseError, UnknownConstructor, UnknownSuite, WorkbenchError

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="workbench", description="Finite-ring and ordered-monoid checks.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    r = sub.add_parser("run", help="run suites over the configured corpus")
    r.add_argument("--config", required=True)
    r.add_argument("--suite", action="append", default=None, help="suite id (repeatable)")
    r.add_argument("--json", dest="json_out", help="write the JSON report here")
    r.add_argument("--dot", dest="dot_dir", help="write one ideal-lattice DOT file per ring here")
    r.add_argument("--seed", type=int)
    r.add_argument("--threads", type=int)
    r.add_argument("--replay", help="re-verify the evidence in a JSON report or record")
    r.add_argument("--timings", action="store_true", help="include elapsed seconds (breaks byte identity)")
    sub.add_parser("list-suites", help="list suite ids")
    d = sub.add_parser("describe-ring", help="tables and ideal lattice of a configured ring")
    d.add_argument("name")
    d.add_argument("--config", required=True)
    return p


def _run(args) -> int:
    from .report import emit, replay
    from .suites import run_all

    if args.replay:
        with open(args.replay, encoding="utf-8") as fh:
            doc = json.load(fh)
        results = replay(doc)
        for label, ok in results:
            print(f"{'confirmed' if ok else 'NOT CONFIRMED'}: {label}")
        print(f"{sum(ok for _, ok in results)}/{len(results)} witnesses confirmed")
        return EXIT_OK if all(ok for _, ok in results) else EXIT_FAIL
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg.seed = args.seed
    if args.threads is not None:
        cfg.threads = max(1, args.threads)
    suites = args.suite or cfg.suites
    for s in suites:
        if s not in SUITES:
            raise UnknownSuite(f"unknown suite {s!r}")
    timings = args.timings or cfg.output.get("timings", "no").lower() in ("yes", "true", "1")
    results = run_all(cfg, suites, timings)
    status = EXIT_OK
    for res in results:
        sm = res.summary
        print(f"{res.suite:14s} pass {sm['pass']:4d}  fail {sm['fail']:3d}  unknown {sm['unknown']:3d}")
        for rec in res.records:
            if rec["verdict"] == "fail":
                print(f"  FAIL {rec['subject']} {rec['check']}: {rec['value']}")
        if sm["fail"]:
            status = EXIT_FAIL
        elif sm["unknown"] and status == EXIT_OK:
            status = EXIT_BUDGET
    blob = emit(results, "json", cfg.digest(), cfg.seed)
    out = args.json_out or cfg.output.get("json")
    if out:
        with open(out, "wb") as fh:
            fh.write(blob)
    dot_dir = args.dot_dir or cfg.output.get("dot")
    if dot_dir:
        from .ideals import build_lattice
        os.makedirs(dot_dir, exist_ok=True)
        for name, R in cfg.built_rings.items():
            with open(os.path.join(dot_dir, f"{name}.dot"), "wb") as fh:
                fh.write(emit(build_lattice(R), "dot"))
    return status


def _describe(args) -> int:
    from .ideals import build_lattice, lattice_to_dot
    from .rings import verify_ring_axioms
    cfg = load_config(args.config)
    if args.name not in cfg.built_rings:
        print(f"no ring named {args.name!r} in {args.config}", file=sys.stderr)
        return EXIT_USAGE
    R = cfg.built_rings[args.name]
    print(f"{args.name} = {R.meta}: {R.size} elements, {'unit ' + R.labels[R.unit] if R.unit is not None else 'no unit'}")
    print("elements:", " ".join(R.labels))
    ax = verify_ring_axioms(R)
    print("axioms:", "ok" if ax.ok else "VIOLATED")
    L = build_lattice(R)
    print(f"ideals: {len(L.ideals)}")
    print(lattice_to_dot(L), end="")
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "list-suites":
            from .suites import DESCRIPTIONS
            for s in SUITES:
                print(f"{s:14s} {DESCRIPTIONS[s]}")
            return EXIT_OK
        if args.command == "describe-ring":
            return _describe(args)
        return _run(args)
    except (ParseError, UnknownSuite, UnknownConstructor, OSError) as e:
        print(f"workbench: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_USAGE
    except WorkbenchError as e:
        print(f"workbench: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_FAIL


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
