"""Pointed coalgebras, homomorphism checking, coproducts, multigraph views.

A pointed coalgebra fixes a functor, a finite carrier, a structure map, and a
distinguished point.  Carriers may declare a `frontier` of open states with no
structure entry: depth-truncated constructions end in such states instead of
inventing bottom values (the grammar has no universal bottom).  Ordinary
coalgebras have an empty frontier.
"""

from __future__ import annotations

import graphlib
from collections import deque
from collections.abc import Mapping
from dataclasses import dataclass, field

from .base import FiniteSet, ShapeError, StateId, TotalMap
from .factorization import FMap
from .functors import (Bag, BagVal, FunctorExpr, FValue, fmap, used_states,
                       validate_value)


@dataclass(frozen=True, eq=False)
class PointedCoalgebra:
    functor: FunctorExpr
    carrier: FiniteSet
    structure: Mapping[StateId, FValue]
    point: StateId
    frontier: FiniteSet = field(default_factory=FiniteSet)

    def __post_init__(self):
        object.__setattr__(self, "structure", dict(self.structure))
        if self.point not in self.carrier:
            raise ShapeError(f"point {self.point!r} not in carrier")
        for x in self.frontier:
            if x not in self.carrier:
                raise ShapeError(f"frontier state {x!r} not in carrier")
        closed = [x for x in self.carrier if x not in self.frontier]
        for x in closed:
            if x not in self.structure:
                raise ShapeError(f"no structure for state {x!r}")
            validate_value(self.functor, self.structure[x], self.carrier)
        for x in self.structure:
            if x not in self.carrier or x in self.frontier:
                raise ShapeError(f"structure given for unexpected state {x!r}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PointedCoalgebra):
            return NotImplemented
        return (self.functor == other.functor and self.carrier == other.carrier
                and self.point == other.point and self.frontier == other.frontier
                and all(self.structure[x] == other.structure[x]
                        for x in self.carrier if x not in self.frontier))

    def is_total(self) -> bool:
        return len(self.frontier) == 0

    def structure_map(self) -> FMap:
        """The structure as a map from the closed states into F(carrier)."""
        closed = self.carrier.restrict(x for x in self.carrier
                                       if x not in self.frontier)
        return FMap(closed, self.carrier, self.functor, dict(self.structure))

    def __repr__(self) -> str:
        return (f"PointedCoalgebra({len(self.carrier)} states, "
                f"point={self.point!r})")


@dataclass(frozen=True)
class Edge:
    id: str
    src: StateId
    tgt: StateId


@dataclass(frozen=True)
class Multigraph:
    """Directed multigraph with named edges and a root vertex."""

    vertices: FiniteSet
    edges: tuple[Edge, ...]
    root: StateId

    def __post_init__(self):
        if self.root not in self.vertices:
            raise ShapeError(f"root {self.root!r} not a vertex")
        ids = [e.id for e in self.edges]
        if len(set(ids)) != len(ids):
            raise ShapeError("duplicate edge id")
        for e in self.edges:
            if e.src not in self.vertices or e.tgt not in self.vertices:
                raise ShapeError(f"edge {e.id!r} touches a non-vertex")

    def out_edges(self, v: StateId) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if e.src == v)


@dataclass(frozen=True)
class HomReport:
    """Outcome of a homomorphism check: square failures per state, plus the
    point-preservation flag.  Frontier states of the source are skipped (they
    have no structure to compare) and recorded."""

    ok: bool
    point_ok: bool
    failures: tuple[tuple[StateId, FValue | None, FValue | None], ...]
    skipped: tuple[StateId, ...] = ()


def check_morphism(h: TotalMap, source: PointedCoalgebra,
                   target: PointedCoalgebra) -> HomReport:
    """Check that h is a pointed coalgebra homomorphism from source to target.

    For every closed source state x the square requires
    target.structure[h(x)] == fmap(h, source.structure[x]), and the point must
    map to the point.
    """
    if source.functor != target.functor:
        raise ShapeError("source and target live over different functors")
    if h.domain != source.carrier or h.codomain != target.carrier:
        raise ShapeError("map carriers do not match the coalgebras")
    point_ok = h[source.point] == target.point
    failures: list[tuple[StateId, FValue | None, FValue | None]] = []
    skipped: list[StateId] = []
    for x in source.carrier:
        if x in source.frontier:
            skipped.append(x)
            continue
        actual = fmap(source.functor, h, source.structure[x])
        y = h[x]
        if y in target.frontier:
            failures.append((x, None, actual))
            continue
        expected = target.structure[y]
        if expected != actual:
            failures.append((x, expected, actual))
    return HomReport(ok=point_ok and not failures, point_ok=point_ok,
                     failures=tuple(failures), skipped=tuple(skipped))


def coproduct(c1: PointedCoalgebra, c2: PointedCoalgebra) -> PointedCoalgebra:
    """Coproduct of two coalgebras over the same functor.

    Carriers are kept apart by systematic `left.`/`right.` prefixes; the point
    is the left point.
    """
    if c1.functor != c2.functor:
        raise ShapeError("coproduct needs a common functor")
    ren1 = {x: f"left.{x}" for x in c1.carrier}
    ren2 = {x: f"right.{x}" for x in c2.carrier}
    carrier = FiniteSet([ren1[x] for x in c1.carrier]
                        + [ren2[x] for x in c2.carrier])
    structure: dict[StateId, FValue] = {}
    for x in c1.carrier:
        if x not in c1.frontier:
            structure[ren1[x]] = fmap(c1.functor, ren1, c1.structure[x])
    for x in c2.carrier:
        if x not in c2.frontier:
            structure[ren2[x]] = fmap(c2.functor, ren2, c2.structure[x])
    frontier = FiniteSet([ren1[x] for x in c1.frontier]
                         + [ren2[x] for x in c2.frontier])
    return PointedCoalgebra(c1.functor, carrier, structure,
                            ren1[c1.point], frontier)


def canonical_graph(c: PointedCoalgebra) -> Multigraph:
    """Simple directed graph with an edge x -> y whenever y occurs in c(x).

    Frontier states contribute no out-edges.  Multiplicities are forgotten;
    use bag_to_multigraph for the multiplicity-faithful view of a bag
    coalgebra.
    """
    edges = []
    for x in c.carrier:
        if x in c.frontier:
            continue
        for y in used_states(c.functor, c.structure[x]):
            edges.append(Edge(f"{x}->{y}", x, y))
    return Multigraph(c.carrier, tuple(edges), c.point)


def multigraph_to_bag(g: Multigraph) -> PointedCoalgebra:
    """Bag coalgebra of a multigraph: c(u)(v) = number of edges u -> v."""
    structure = {}
    for u in g.vertices:
        structure[u] = BagVal((e.tgt, 1) for e in g.edges if e.src == u)
    return PointedCoalgebra(Bag(), g.vertices, structure, g.root)


def bag_to_multigraph(c: PointedCoalgebra) -> Multigraph:
    """Multigraph with c(u)(v) parallel edges u -> v; inverse of
    multigraph_to_bag up to edge names."""
    if not isinstance(c.functor, Bag):
        raise ShapeError("bag_to_multigraph needs a Bag coalgebra")
    if not c.is_total():
        raise ShapeError("coalgebra has open states")
    edges = []
    for u in c.carrier:
        for v, n in c.structure[u].entries:
            for k in range(1, n + 1):
                edges.append(Edge(f"{u}>{v}#{k}", u, v))
    return Multigraph(c.carrier, tuple(edges), c.point)


def reachable_vertices(g: Multigraph) -> FiniteSet:
    """Vertices with a directed path from the root, in BFS discovery order."""
    order = [g.root]
    seen = {g.root}
    queue = deque([g.root])
    while queue:
        u = queue.popleft()
        for e in g.out_edges(u):
            if e.tgt not in seen:
                seen.add(e.tgt)
                order.append(e.tgt)
                queue.append(e.tgt)
    return FiniteSet(order)


def is_acyclic(g: Multigraph) -> bool:
    ts = graphlib.TopologicalSorter({v: set() for v in g.vertices})
    for e in g.edges:
        ts.add(e.tgt, e.src)
    try:
        ts.prepare()
    except graphlib.CycleError:
        return False
    return True


def reachable_subgraph(g: Multigraph) -> Multigraph:
    """Induced subgraph on the root-reachable vertices."""
    verts = reachable_vertices(g)
    edges = tuple(e for e in g.edges if e.src in verts)
    return Multigraph(verts, edges, g.root)
