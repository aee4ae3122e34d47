"""Tree unravelling via iterated precise factorization.

Level k+1 is the middle carrier of the precise factorization of the structure
map restricted to level k, so every slot of every level-k value gets a private
copy of its successor.  The coproduct of all levels is the unravelled tree;
the coalgebra is itself a tree iff the combined projection is a bijection
onto the carrier.

Cyclic inputs unravel forever, so the constructions take a depth cap and the
decision procedure checks the canonical graph for reachable cycles up front
instead of waiting for a level overflow (the two are equivalent: a copy in
level k spawns a successor copy in level k+1 exactly along canonical-graph
edges).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .base import FiniteSet, ShapeError, StateId, TotalMap, fresh_namer
from .coalgebra import (PointedCoalgebra, canonical_graph, is_acyclic,
                        reachable_subgraph)
from .factorization import FMap, precise_factorize
from .functors import (Bag, Compose, Const, Coproduct, Exponent, FunctorExpr,
                       FValue, Identity, Pow, Product, fmap, iter_slots)


@dataclass(frozen=True)
class TreeLevels:
    """Levels T_k with precise step maps t_k: T_k -> F(T_{k+1}) and
    projections h_k: T_k -> C satisfying fmap(h_{k+1}, t_k(x)) = c(h_k(x)).

    Level states are named `<k>:<projected state>` (with `~n` counters when
    a state gets several copies on one level), globally unique across levels.
    """

    levels: tuple[FiniteSet, ...]
    step_maps: tuple[FMap, ...]
    projections: tuple[TotalMap, ...]
    truncated: bool

    def states(self) -> FiniteSet:
        acc = FiniteSet()
        for level in self.levels:
            acc = acc.union(level)
        return acc

    def projection(self) -> TotalMap:
        """The combined map [h_k] from the coproduct of levels."""
        target = self.projections[0].codomain
        mapping = {}
        for h in self.projections:
            for x in h.domain:
                mapping[x] = h[x]
        return TotalMap(self.states(), target, mapping)


@dataclass(frozen=True)
class UnravelResult:
    tree: PointedCoalgebra
    projection: TotalMap
    complete: bool
    frontier: FiniteSet


@dataclass(frozen=True)
class TreeReport:
    """Verdict of the tree decision with a diagnostic on failure.

    reason is one of "powerset-degenerate", "cycle", "not-reachable",
    "sharing", or None when ok.  levels/projection are filled when the
    level construction ran (they are skipped for the two early checks).
    """

    ok: bool
    reason: str | None = None
    detail: str | None = None
    levels: TreeLevels | None = None
    projection: TotalMap | None = None


def tree_levels(c: PointedCoalgebra, max_depth: int) -> TreeLevels:
    """Iterate precise factorization of c . h_k, at most max_depth steps.

    Stops early once a level is empty (the unravelling is finite and fully
    built); otherwise the last level is left without a step map and the
    result is marked truncated.
    """
    if not c.is_total():
        raise ShapeError("tree levels need a total coalgebra, found open states")
    if max_depth < 0:
        raise ValueError("max_depth must be >= 0")
    alloc = fresh_namer()
    root = alloc(f"0:{c.point}")
    levels = [FiniteSet([root])]
    projections = [TotalMap(levels[0], c.carrier, {root: c.point})]
    step_maps: list[FMap] = []
    while len(levels[-1]) > 0 and len(step_maps) < max_depth:
        cur, h = levels[-1], projections[-1]
        f = FMap(cur, c.carrier, c.functor,
                 {x: c.structure[h[x]] for x in cur})
        middle, p, hm = precise_factorize(f).parts()
        depth = len(step_maps) + 1
        ren = {r: alloc(f"{depth}:{hm[r]}") for r in middle}
        nxt = FiniteSet(ren[r] for r in middle)
        levels.append(nxt)
        projections.append(TotalMap(nxt, c.carrier,
                                    {ren[r]: hm[r] for r in middle}))
        step_maps.append(FMap(cur, nxt, c.functor,
                              {x: fmap(c.functor, ren, p.value(x))
                               for x in cur}))
    return TreeLevels(tuple(levels), tuple(step_maps), tuple(projections),
                      truncated=len(levels[-1]) > 0)


def unravel(c: PointedCoalgebra, max_depth: int) -> UnravelResult:
    """Assemble the coproduct of tree levels into one pointed coalgebra.

    When truncated, the whole deepest level becomes the frontier: those
    states stay open even if their structure would still be expressible.
    """
    tl = tree_levels(c, max_depth)
    states = tl.states()
    structure: dict[StateId, FValue] = {}
    for t in tl.step_maps:
        for x, v in t.items():
            structure[x] = v
    frontier = tl.levels[-1] if tl.truncated else FiniteSet()
    root = next(iter(tl.levels[0]))
    tree = PointedCoalgebra(c.functor, states, structure, root, frontier)
    return UnravelResult(tree, tl.projection(), not tl.truncated, frontier)


def tree_check(c: PointedCoalgebra) -> TreeReport:
    """Decide whether c is a tree; diagnose the failure if not.

    Checks run in order: non-empty powerset values on reachable states
    (nothing with successors can be a powerset tree), reachable cycles
    (levels would never empty), then the level construction with the
    projection checked for surjectivity (reachability) and injectivity
    (no shared successors).
    """
    if not c.is_total():
        raise ShapeError("tree check needs a total coalgebra, found open states")
    graph = reachable_subgraph(canonical_graph(c))
    for x in graph.vertices:
        if _pow_nonempty(c.functor, c.structure[x]):
            return TreeReport(False, "powerset-degenerate",
                              f"state {x} carries a non-empty powerset value")
    if not is_acyclic(graph):
        return TreeReport(False, "cycle", "levels non-empty past bound")
    tl = tree_levels(c, len(c.carrier) + 1)
    proj = tl.projection()
    if not proj.is_surjective():
        missing = [x for x in c.carrier if x not in proj.image()]
        return TreeReport(False, "not-reachable",
                          f"states never reached: {', '.join(missing)}",
                          tl, proj)
    if not proj.is_injective():
        return TreeReport(False, "sharing",
                          f"coproduct of levels has {len(proj.domain)} states, "
                          f"carrier has {len(c.carrier)}", tl, proj)
    return TreeReport(True, levels=tl, projection=proj)


def is_tree(c: PointedCoalgebra) -> bool:
    return tree_check(c).ok


def tree_unravelling(c: PointedCoalgebra,
                     truncate_at: int | None = None) -> UnravelResult:
    """Full unravelling when finite, else truncated with complete=False.

    Finiteness is the absence of reachable cycles; in that case every root
    path has fewer than |carrier| steps, so depth |carrier| suffices.  The
    default truncation depth 3*|carrier| shows any cycle unrolled at least
    three times.
    """
    if not c.is_total():
        raise ShapeError("unravelling needs a total coalgebra, found open states")
    if is_acyclic(reachable_subgraph(canonical_graph(c))):
        return unravel(c, len(c.carrier))
    depth = truncate_at if truncate_at is not None else 3 * len(c.carrier)
    return unravel(c, depth)


def copy_counts(projection: TotalMap) -> dict[StateId, int]:
    """Preimage sizes of an unravelling projection, keyed by target state."""
    counts = Counter(projection[x] for x in projection.domain)
    return {y: counts.get(y, 0) for y in projection.codomain}


def _pow_nonempty(functor: FunctorExpr, value: FValue) -> bool:
    """True when some powerset layer of the value is a non-empty set.

    Mirrors exactly the condition under which precise factorization raises
    PowNotPrecise.  Members are treated as opaque, so the same walk works on
    the outer layer of a composition.
    """
    if isinstance(functor, (Identity, Const, Bag)):
        return False
    if isinstance(functor, Pow):
        return len(value.members) > 0
    if isinstance(functor, Product):
        return any(_pow_nonempty(f, v)
                   for f, v in zip(functor.factors, value.items))
    if isinstance(functor, Coproduct):
        return _pow_nonempty(functor.summands[value.tag], value.value)
    if isinstance(functor, Exponent):
        return any(_pow_nonempty(functor.base, v) for _, v in value.entries)
    if isinstance(functor, Compose):
        if _pow_nonempty(functor.outer, value):
            return True
        return any(_pow_nonempty(functor.inner, m)
                   for m, _ in iter_slots(functor.outer, value))
    raise ShapeError(f"unknown functor {functor!r}")


def tree_fingerprint(c: PointedCoalgebra) -> str:
    """Canonical serialization of the unfolding from the point.

    Two total coalgebras over the same functor have equal fingerprints iff
    their unfoldings are isomorphic; on trees this decides isomorphism.
    Bags are rendered as sorted child fingerprints with merged counts and
    sets as sorted deduplicated fingerprints, so sibling order and state
    names cannot leak in.  Cyclic inputs have infinite unfoldings and are
    rejected.
    """
    memo: dict[StateId, str] = {}
    on_stack: set[StateId] = set()

    def fp_state(x: StateId) -> str:
        if x in c.frontier:
            return "?"
        if x in memo:
            return memo[x]
        if x in on_stack:
            raise ShapeError(f"cannot fingerprint a cyclic coalgebra ({x})")
        on_stack.add(x)
        out = fp_value(c.functor, c.structure[x], fp_state)
        on_stack.discard(x)
        memo[x] = out
        return out

    def fp_value(f: FunctorExpr, v: FValue, leaf) -> str:
        if isinstance(f, Identity):
            return leaf(v.member)
        if isinstance(f, Const):
            return f"#{v.element!r}"
        if isinstance(f, Product):
            return "(" + ",".join(fp_value(g, w, leaf)
                                  for g, w in zip(f.factors, v.items)) + ")"
        if isinstance(f, Coproduct):
            return f"{v.tag}:" + fp_value(f.summands[v.tag], v.value, leaf)
        if isinstance(f, Exponent):
            parts = sorted((a, fp_value(f.base, w, leaf)) for a, w in v.entries)
            return "{" + ",".join(f"{a}:{s}" for a, s in parts) + "}"
        if isinstance(f, Bag):
            tally = Counter()
            for m, n in v.entries:
                tally[leaf(m)] += n
            return "[" + ",".join(f"{s}*{n}" for s, n in sorted(tally.items())) + "]"
        if isinstance(f, Pow):
            return "{|" + ",".join(sorted({leaf(m) for m in v.members})) + "|}"
        if isinstance(f, Compose):
            return fp_value(f.outer, v, lambda m: fp_value(f.inner, m, leaf))
        raise ShapeError(f"unknown functor {f!r}")

    return fp_state(c.point)
