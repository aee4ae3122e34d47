"""Command-line front end.

Commands read one spec file, print a machine-readable first line followed by
detail lines, and use exit codes 0 (success / true verdict), 1 (false
verdict), 2 (input error), 3 (search-space guard).  DFA and multigraph
inputs are converted to coalgebras where a command needs one.
"""

from __future__ import annotations

import argparse
import sys

from .automata import (PartialDFA, defined_inputs, dfa_to_coalgebra,
                       rooted_paths)
from .base import CoalgebraError, SearchSpaceTooLarge
from .coalgebra import (Multigraph, PointedCoalgebra, canonical_graph,
                        multigraph_to_bag)
from .dot import to_dot
from .oracles import (bfs_reachable, reachable_by_definition,
                      tree_refute_by_definition)
from .reachability import is_reachable, reach_levels, reachable_part
from .specfile import emit_spec, parse_spec
from .unravelling import copy_counts, tree_check, tree_unravelling, unravel


def _load(path: str):
    with open(path, encoding="utf-8") as fh:
        return parse_spec(fh.read())


def _as_coalgebra(obj) -> PointedCoalgebra:
    if isinstance(obj, PointedCoalgebra):
        return obj
    if isinstance(obj, PartialDFA):
        return dfa_to_coalgebra(obj)
    return multigraph_to_bag(obj)


def _braces(names, sep=", ") -> str:
    return "{" + sep.join(names) + "}"


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    print(f"wrote {path}")


def cmd_check(args) -> int:
    obj = _load(args.file)
    if isinstance(obj, PointedCoalgebra):
        open_note = f", {len(obj.frontier)} open" if len(obj.frontier) else ""
        print(f"valid coalgebra: {len(obj.carrier)} states{open_note}")
    elif isinstance(obj, PartialDFA):
        print(f"valid dfa: {len(obj.states)} states, "
              f"{len(obj.alphabet)} letters, {len(obj.delta)} transitions")
    else:
        print(f"valid multigraph: {len(obj.vertices)} vertices, "
              f"{len(obj.edges)} edges")
    return 0


def cmd_reachable(args) -> int:
    c = _as_coalgebra(_load(args.file))
    seq = reach_levels(c)
    part = reachable_part(c)
    verdict = is_reachable(c)
    print("reachable" if verdict else "not reachable")
    print("levels: " + ", ".join(_braces(level, sep=",")
                                 for level in seq.levels))
    print(f"reachable part = {_braces(part.sub)}")
    if args.emit:
        _write(args.emit, emit_spec(part.coalgebra))
    if args.oracle:
        bfs = bfs_reachable(canonical_graph(c))
        agree = part.sub.as_set() == bfs.as_set()
        agree = agree and reachable_by_definition(c) == verdict
        print("oracle: agree" if agree else "oracle: MISMATCH")
        if not agree:
            return 1
    return 0 if verdict else 1


def cmd_is_tree(args) -> int:
    c = _as_coalgebra(_load(args.file))
    report = tree_check(c)
    if report.ok:
        print("true")
    else:
        print(f"false: {report.reason} ({report.detail})")
    if args.oracle:
        found = tree_refute_by_definition(c, min(len(c.carrier) + 2, 6))
        if found is None:
            print("oracle: no refuter found (not a proof)")
        else:
            print(f"oracle: refuted by a {len(found.source.carrier)}-state "
                  f"coalgebra")
        if (found is None) != report.ok:
            print("oracle: MISMATCH" if report.ok
                  else "oracle: no refuter within bound")
    return 0 if report.ok else 1


def cmd_unravel(args) -> int:
    c = _as_coalgebra(_load(args.file))
    if args.depth is not None:
        if args.depth <= 0:
            raise CoalgebraError("--depth must be positive")
        result = unravel(c, args.depth)
    else:
        result = tree_unravelling(c)
    print(f"complete: {'true' if result.complete else 'false'}")
    print(f"tree states: {len(result.tree.carrier)}")
    counts = copy_counts(result.projection)
    print("copies: " + ", ".join(f"{y}={n}" for y, n in counts.items()))
    if not result.complete:
        print(f"frontier: {_braces(result.frontier)}")
    if result.complete and result.projection.is_bijective():
        print("note: input is already a tree")
    if args.emit:
        _write(args.emit, emit_spec(result.tree))
    if args.dot:
        _write(args.dot, to_dot(result.tree))
    return 0


def cmd_dfa_inputs(args) -> int:
    obj = _load(args.file)
    if not isinstance(obj, PartialDFA):
        raise CoalgebraError("dfa-inputs needs a 'kind: dfa' spec file")
    maxlen = args.maxlen if args.maxlen is not None else 2 * len(obj.states)
    result = defined_inputs(obj, maxlen)
    print(f"complete: {'true' if result.complete else 'false'}"
          + ("" if result.complete else f" (maxlen {maxlen})"))
    print(f"P = {_braces(result.tree.carrier)}")
    print("delta*:")
    for w in result.tree.carrier:
        print(f"  {w} -> {result.projection[w]}")
    if args.emit:
        _write(args.emit, emit_spec(result.tree))
    if args.dot:
        _write(args.dot, to_dot(result.tree))
    return 0


def cmd_paths(args) -> int:
    obj = _load(args.file)
    if not isinstance(obj, Multigraph):
        raise CoalgebraError("paths needs a 'kind: multigraph' spec file")
    maxlen = args.maxlen if args.maxlen is not None else 2 * len(obj.vertices)
    result = rooted_paths(obj, maxlen)
    print(f"complete: {'true' if result.complete else 'false'}"
          + ("" if result.complete else f" (maxlen {maxlen})"))
    print(f"{len(result.tree.carrier)} rooted paths")
    counts = copy_counts(result.projection)
    print("targets: " + ", ".join(f"{v}={n}" for v, n in counts.items()))
    print("t:")
    for p in result.tree.carrier:
        print(f"  {p} -> {result.projection[p]}")
    if args.emit:
        _write(args.emit, emit_spec(result.tree))
    if args.dot:
        _write(args.dot, to_dot(result.tree))
    return 0


def cmd_dot(args) -> int:
    obj = _load(args.file)
    text = to_dot(obj)
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coalg",
        description="reachability and tree unravelling of pointed coalgebras")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **flags):
        p = sub.add_parser(name)
        p.add_argument("file", help="spec file")
        if flags.get("depth"):
            p.add_argument("--depth", type=int, default=None,
                           help="truncate the unravelling at this depth")
        if flags.get("maxlen"):
            p.add_argument("--maxlen", type=int, default=None,
                           help="word/path length cap for cyclic inputs")
        if flags.get("emit"):
            p.add_argument("--emit", metavar="PATH",
                           help="write the resulting object as a spec file")
        if flags.get("dot"):
            p.add_argument("--dot", metavar="PATH",
                           help="write a DOT rendering of the result")
        if flags.get("oracle"):
            p.add_argument("--oracle", action="store_true",
                           help="cross-check with the brute-force oracle")
        if flags.get("out"):
            p.add_argument("--out", metavar="PATH",
                           help="output path (default: stdout)")
        p.set_defaults(fn=fn)
        return p

    add("check", cmd_check)
    add("reachable", cmd_reachable, emit=True, oracle=True)
    add("is-tree", cmd_is_tree, oracle=True)
    add("unravel", cmd_unravel, depth=True, emit=True, dot=True)
    add("dfa-inputs", cmd_dfa_inputs, maxlen=True, emit=True, dot=True)
    add("paths", cmd_paths, maxlen=True, emit=True, dot=True)
    add("dot", cmd_dot, out=True)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except SearchSpaceTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except CoalgebraError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
