"""Command line front end: ``classes``, ``search``, ``verify`` and ``table2``.

Exit codes: 0 completed certifying run (or valid verdict), 1 usage or schema
error, 2 a solver run hit its resource cap so nothing was certified,
3 verification found a violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path

from . import __version__
from .boolfun import CATALOG, npn_canonical, npn_class_sizes, parse_function
from .optimize import DEFAULT_MAX_POINTS
from .search import (
    SchemaError, SearchOptions, TABLE2_EXPECTED, TABLE2_ROWS, render_table2, result_document,
    run_table2, search_scfo,
)
from .verify import verify_file

EXIT_OK, EXIT_USAGE, EXIT_NONCERTIFYING, EXIT_VIOLATION = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def write_atomic(path: str | Path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _options(args) -> SearchOptions:
    if args.threads < 1:
        raise UsageError("--threads must be at least 1")
    if args.explore_delta < 0:
        raise UsageError("--explore-delta must be nonnegative")
    return SearchOptions(workers=args.threads, prune=args.prune, first=args.first,
                         explore_delta=args.explore_delta, max_points=args.max_points,
                         trace=bool(args.trace))


def _config(args) -> dict:
    keys = ("command", "function", "n", "threads", "prune", "first", "explore_delta", "max_points")
    return {k: getattr(args, k) for k in keys if hasattr(args, k)}


def cmd_classes(args) -> int:
    if not 1 <= args.n <= 4:
        raise UsageError("--n must be between 1 and 4")
    names = {}
    for e in CATALOG.values():
        if e.n == args.n:
            names.setdefault(npn_canonical(e.table), []).append(e.name)
    sizes = npn_class_sizes(args.n)
    print(f"{len(sizes)} NPN classes of {args.n}-variable functions (table index: x1 most significant)")
    for rep, size in sizes.items():
        print(f"{rep.bits}  size={size:<5} {' '.join(names.get(rep, []))}".rstrip())
    return EXIT_OK


def cmd_search(args) -> int:
    opts = _options(args)
    try:
        name, f = parse_function(args.function, args.n)
    except (KeyError, ValueError) as exc:
        raise UsageError(str(exc.args[0] if exc.args else exc)) from None
    out = sys.stdout if args.out else sys.stderr
    print(f"function {name}: n={f.n} table={f.bits} (index order x1 most significant)", file=out)
    res = search_scfo(f, opts, name)
    doc = result_document(res)
    doc["config"] = _config(args)
    st = res.stats
    if res.trivial:
        print("constant function: trivially computable", file=out)
    elif res.entries:
        best = res.best()
        print(f"protocol found: k0={best.k0} arrangement={[p + 1 for p in best.perm]} insertion={list(best.y)}",
              file=out)
        pats = doc["opening_patterns"]
        print(f"  output 0 ~ {pats['0']['cards']}   output 1 ~ {pats['1']['cards']}", file=out)
    else:
        print("no protocol: " + ("impossibility certified" if res.certifying else "NOT certified"), file=out)
    print(f"  instances={st.instances} infeasible={st.infeasible} rejected={st.rejected} "
          f"accepted={st.accepted} indeterminate={st.indeterminate} time={st.wall_time:.1f}s", file=out)
    if res.exploratory:
        print(f"  beyond-optimal accepted insertions: {len(res.exploratory)}", file=out)
    if args.out:
        write_atomic(args.out, dumps(doc))
        print(f"wrote {args.out}", file=out)
    else:
        sys.stdout.write(dumps(doc))
    if args.trace:
        write_atomic(args.trace, "".join(line + "\n" for line in res.trace))
    return EXIT_OK if res.certifying else EXIT_NONCERTIFYING


def cmd_verify(args) -> int:
    try:
        name, verdict = verify_file(args.path)
    except (OSError, SchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"{name}: {verdict.kind}")
    if not verdict.valid:
        print(f"  witness: {verdict.witness}")
        print(f"  {verdict.message}")
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_table2(args) -> int:
    opts = _options(args)
    names = args.only or TABLE2_ROWS
    for nm in names:
        if nm not in TABLE2_EXPECTED:
            raise UsageError(f"{nm} is not a row of the table; rows: {', '.join(TABLE2_ROWS)}")

    def progress(row, res):
        print(f"  {row.name:<8} {'✓' if row.exists else '×'}  {res.stats.wall_time:7.1f}s", file=sys.stderr)

    rows = run_table2(opts, names, progress)
    text = render_table2(rows)
    sys.stdout.write(text)
    if args.out:
        doc = {
            "kind": "table2", "tool_version": __version__, "config": _config(args),
            "rows": [{"name": r.name, "label": r.label, "exists": r.exists, "k0": r.k0,
                      "certifying": r.certifying, "matches_published": r.matches,
                      "tallies": r.stats.to_dict()} for r in rows],
        }
        write_atomic(args.out, dumps(doc))
    return EXIT_OK if all(r.certifying for r in rows) else EXIT_NONCERTIFYING


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="scfo", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"scfo {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("classes", help="list NPN class representatives")
    c.add_argument("--n", type=int, default=3)
    c.set_defaults(run=cmd_classes)

    def search_flags(sp):
        sp.add_argument("--threads", type=int, default=1, help="worker processes")
        sp.add_argument("--prune", action="store_true", help="skip arrangements equal up to rotation")
        sp.add_argument("--first", action="store_true", help="stop at the first accepted protocol")
        sp.add_argument("--explore-delta", type=int, default=0,
                        help="also test feasible insertions up to this many cards above the optimum")
        sp.add_argument("--max-points", type=int, default=DEFAULT_MAX_POINTS,
                        help="per-instance enumeration cap before a run is declared indeterminate")
        sp.add_argument("--out", help="write the JSON document here")
        sp.add_argument("--trace", help="write a per-instance solver audit trace here")

    s = sub.add_parser("search", help="search protocols for one function")
    s.add_argument("function", help="catalog name or truth-table bitstring")
    s.add_argument("--n", type=int, default=None, help="number of variables for a bitstring")
    search_flags(s)
    s.set_defaults(run=cmd_search)

    v = sub.add_parser("verify", help="verify a protocol template or certificate file")
    v.add_argument("path")
    v.set_defaults(run=cmd_verify)

    t = sub.add_parser("table2", help="reproduce the results table")
    t.add_argument("--only", nargs="+", help="restrict to these rows")
    search_flags(t)
    t.set_defaults(run=cmd_table2)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except UsageError as exc:
        print(f"scfo: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
