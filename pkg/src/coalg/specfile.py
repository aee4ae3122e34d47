"""Plain-text spec files for coalgebras, partial DFAs, and multigraphs.

A document is a handful of `key: ...` header lines followed by body lines;
the `kind:` header (default "coalgebra") selects the layout:

    kind: coalgebra          kind: dfa                kind: multigraph
    functor: Id x Id + 1     alphabet: a, b           vertices: r, p
    states: p, q, r          states: q0, q1           root: r
    point: p                 initial: q0              edge e1 r p
    open: r                  accepting: q1            edge e2 r p
    p = 0: (@q, @r)          trans q0 a q1
    q = 1: #⊥

Structure values are written shape-first: `@state` (Id), `#elem` (constant),
`(v, v)` (product), `tag: v` (coproduct, by summand index), `{a: v, b: v}`
(exponent), `[m*2, m]` (bag, `*1` implied), `{|m, m|}` / `{||}` (powerset);
under composition the member slots hold nested values.  Comments are
full-line only (`#` opens a constant inside values).  Names are bare unless
they contain one of the reserved characters, in which case they are written
in double quotes; quotes themselves cannot occur in names.
"""

from __future__ import annotations

from .automata import PartialDFA
from .base import FiniteSet, ShapeError, SpecFormatError, StateId
from .coalgebra import Edge, Multigraph, PointedCoalgebra
from .functors import (Bag, BagVal, Compose, Const, ConstVal, Coproduct,
                       Exponent, FunVal, FunctorExpr, FunctorSyntaxError,
                       FValue, IdVal, Identity, Pow, Product, SetVal, TagVal,
                       TupleVal, format_functor, parse_functor)

RESERVED = set(' \t\r\n"#@(){}[]|*:,=')

_KEYS = ("kind", "functor", "states", "point", "open",
         "alphabet", "initial", "accepting", "vertices", "root")


def _quote(name: StateId) -> str:
    if '"' in name:
        raise SpecFormatError(f"name {name!r} contains a double quote")
    if name and not any(ch in RESERVED for ch in name):
        return name
    return f'"{name}"'


# --------------------------------------------------------------------------
# line-level tokenizing


class _Line:
    __slots__ = ("text", "pos", "no")

    def __init__(self, text: str, no: int):
        self.text = text
        self.pos = 0
        self.no = no

    def error(self, msg: str) -> SpecFormatError:
        return SpecFormatError(f"line {self.no}: {msg}")

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch: str) -> None:
        if self.peek() != ch:
            found = self.peek() or "end of line"
            raise self.error(f"expected {ch!r}, found {found!r}")
        self.pos += 1

    def at_end(self) -> bool:
        return self.peek() == ""

    def expect_end(self) -> None:
        if not self.at_end():
            raise self.error(f"unexpected trailing text "
                             f"{self.text[self.pos:].strip()!r}")

    def name(self) -> StateId:
        ch = self.peek()
        if ch == '"':
            self.pos += 1
            end = self.text.find('"', self.pos)
            if end < 0:
                raise self.error("unterminated quoted name")
            out = self.text[self.pos:end]
            self.pos = end + 1
            return out
        start = self.pos
        while (self.pos < len(self.text)
               and self.text[self.pos] not in RESERVED):
            self.pos += 1
        if self.pos == start:
            raise self.error(f"expected a name, found {ch or 'end of line'!r}")
        return self.text[start:self.pos]

    def integer(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise self.error("expected a number")
        return int(self.text[start:self.pos])

    def rest(self) -> str:
        out = self.text[self.pos:].strip()
        self.pos = len(self.text)
        return out

    def names_rest(self) -> list[StateId]:
        out = [self.name()]
        while self.peek() == ",":
            self.take(",")
            out.append(self.name())
        self.expect_end()
        return out


# --------------------------------------------------------------------------
# shape-directed value syntax


def _parse_value(functor: FunctorExpr, cur: _Line, member) -> FValue:
    if isinstance(functor, Identity):
        cur.take("@")
        return IdVal(member(cur))
    if isinstance(functor, Const):
        cur.take("#")
        return ConstVal(cur.name())
    if isinstance(functor, Product):
        cur.take("(")
        items = []
        for i, f in enumerate(functor.factors):
            if i:
                cur.take(",")
            items.append(_parse_value(f, cur, member))
        cur.take(")")
        return TupleVal(tuple(items))
    if isinstance(functor, Coproduct):
        tag = cur.integer()
        if tag >= len(functor.summands):
            raise cur.error(f"coproduct tag {tag} out of range")
        cur.take(":")
        return TagVal(tag, _parse_value(functor.summands[tag], cur, member))
    if isinstance(functor, Exponent):
        cur.take("{")
        entries = []
        seen = set()
        while cur.peek() != "}":
            if entries:
                cur.take(",")
            a = cur.name()
            if a not in functor.alphabet.as_set():
                raise cur.error(f"letter {a!r} outside the alphabet")
            if a in seen:
                raise cur.error(f"duplicate letter {a!r}")
            seen.add(a)
            cur.take(":")
            entries.append((a, _parse_value(functor.base, cur, member)))
        cur.take("}")
        missing = [a for a in functor.alphabet if a not in seen]
        if missing:
            raise cur.error(f"missing letter {missing[0]!r}")
        return FunVal(entries)
    if isinstance(functor, Bag):
        cur.take("[")
        entries = []
        while cur.peek() != "]":
            if entries:
                cur.take(",")
            m = member(cur)
            mult = 1
            if cur.peek() == "*":
                cur.take("*")
                mult = cur.integer()
            entries.append((m, mult))
        cur.take("]")
        return BagVal(entries)
    if isinstance(functor, Pow):
        cur.take("{")
        cur.take("|")
        members = []
        while cur.peek() != "|":
            if members:
                cur.take(",")
            members.append(member(cur))
        cur.take("|")
        cur.take("}")
        return SetVal(members)
    if isinstance(functor, Compose):
        return _parse_value(functor.outer, cur,
                            lambda c: _parse_value(functor.inner, c, member))
    raise cur.error(f"unknown functor {functor!r}")


def parse_value(functor: FunctorExpr, text: str, line_no: int = 0) -> FValue:
    cur = _Line(text, line_no)
    v = _parse_value(functor, cur, lambda c: c.name())
    cur.expect_end()
    return v


def _fmt_value(functor: FunctorExpr, value: FValue, member) -> str:
    if isinstance(functor, Identity):
        return "@" + member(value.member)
    if isinstance(functor, Const):
        return "#" + _quote(value.element)
    if isinstance(functor, Product):
        return "(" + ", ".join(_fmt_value(f, v, member) for f, v in
                               zip(functor.factors, value.items)) + ")"
    if isinstance(functor, Coproduct):
        inner = _fmt_value(functor.summands[value.tag], value.value, member)
        return f"{value.tag}: {inner}"
    if isinstance(functor, Exponent):
        parts = (f"{_quote(a)}: {_fmt_value(functor.base, value[a], member)}"
                 for a in functor.alphabet)
        return "{" + ", ".join(parts) + "}"
    if isinstance(functor, Bag):
        parts = (f"{member(m)}*{n}" for m, n in value.entries)
        return "[" + ", ".join(parts) + "]"
    if isinstance(functor, Pow):
        return "{|" + ", ".join(member(m) for m in value.members) + "|}"
    if isinstance(functor, Compose):
        return _fmt_value(functor.outer, value,
                          lambda m: _fmt_value(functor.inner, m, member))
    raise SpecFormatError(f"unknown functor {functor!r}")


def format_value(functor: FunctorExpr, value: FValue) -> str:
    return _fmt_value(functor, value, _quote)


# --------------------------------------------------------------------------
# documents


def emit_coalgebra(c: PointedCoalgebra) -> str:
    lines = ["kind: coalgebra",
             f"functor: {format_functor(c.functor)}",
             f"states: {', '.join(_quote(x) for x in c.carrier)}",
             f"point: {_quote(c.point)}"]
    if len(c.frontier) > 0:
        lines.append(f"open: {', '.join(_quote(x) for x in c.frontier)}")
    for x in c.carrier:
        if x not in c.frontier:
            lines.append(f"{_quote(x)} = "
                         f"{format_value(c.functor, c.structure[x])}")
    return "\n".join(lines) + "\n"


def emit_dfa(d: PartialDFA) -> str:
    lines = ["kind: dfa",
             f"alphabet: {', '.join(_quote(a) for a in d.alphabet)}",
             f"states: {', '.join(_quote(q) for q in d.states)}",
             f"initial: {_quote(d.initial)}"]
    acc = [q for q in d.states if q in d.accepting]
    if acc:
        lines.append(f"accepting: {', '.join(_quote(q) for q in acc)}")
    for q in d.states:
        for a in d.alphabet:
            if (q, a) in d.delta:
                lines.append(f"trans {_quote(q)} {_quote(a)} "
                             f"{_quote(d.delta[(q, a)])}")
    return "\n".join(lines) + "\n"


def emit_multigraph(g: Multigraph) -> str:
    lines = ["kind: multigraph",
             f"vertices: {', '.join(_quote(v) for v in g.vertices)}",
             f"root: {_quote(g.root)}"]
    for e in g.edges:
        lines.append(f"edge {_quote(e.id)} {_quote(e.src)} {_quote(e.tgt)}")
    return "\n".join(lines) + "\n"


def emit_spec(obj) -> str:
    if isinstance(obj, PointedCoalgebra):
        return emit_coalgebra(obj)
    if isinstance(obj, PartialDFA):
        return emit_dfa(obj)
    if isinstance(obj, Multigraph):
        return emit_multigraph(obj)
    raise SpecFormatError(f"cannot emit a {type(obj).__name__}")


def parse_spec(text: str) -> PointedCoalgebra | PartialDFA | Multigraph:
    """Parse a spec document into the object its kind tag names."""
    keys: dict[str, _Line] = {}
    body: list[_Line] = []
    for no, raw in enumerate(text.splitlines(), 1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        cur = _Line(raw, no)
        if cur.peek() != '"':
            probe = _Line(raw, no)
            word = probe.name()
            if word in _KEYS and probe.peek() == ":":
                probe.take(":")
                if word in keys:
                    raise probe.error(f"duplicate key {word!r}")
                keys[word] = probe
                continue
        body.append(cur)

    kind = keys.pop("kind").rest() if "kind" in keys else "coalgebra"
    if kind == "coalgebra":
        return _build_coalgebra(keys, body)
    if kind == "dfa":
        return _build_dfa(keys, body)
    if kind == "multigraph":
        return _build_multigraph(keys, body)
    raise SpecFormatError(f"unknown kind {kind!r}")


def _require(keys: dict[str, _Line], kind: str, needed: tuple[str, ...],
             optional: tuple[str, ...] = ()) -> None:
    for k in needed:
        if k not in keys:
            raise SpecFormatError(f"{kind} document needs a {k!r} line")
    for k in keys:
        if k not in needed and k not in optional:
            raise SpecFormatError(
                f"line {keys[k].no}: key {k!r} does not belong in a "
                f"{kind} document")


def _build_coalgebra(keys, body) -> PointedCoalgebra:
    _require(keys, "coalgebra", ("functor", "states", "point"), ("open",))
    ftext = keys["functor"].rest()
    try:
        functor = parse_functor(ftext)
    except FunctorSyntaxError as exc:
        raise SpecFormatError(
            f"line {keys['functor'].no}: bad functor: {exc}") from exc
    states = FiniteSet(keys["states"].names_rest())
    point = keys["point"].name()
    keys["point"].expect_end()
    frontier = FiniteSet(keys["open"].names_rest()) if "open" in keys \
        else FiniteSet()
    known = states.as_set()

    def member(cur2: _Line) -> StateId:
        m = cur2.name()
        if m not in known:
            raise cur2.error(f"state {m!r} not in the carrier")
        return m

    structure = {}
    for cur in body:
        x = cur.name()
        if x not in known:
            raise cur.error(f"structure for unknown state {x!r}")
        if x in structure:
            raise cur.error(f"duplicate structure for state {x!r}")
        cur.take("=")
        structure[x] = _parse_value(functor, cur, member)
        cur.expect_end()
    try:
        return PointedCoalgebra(functor, states, structure, point, frontier)
    except ShapeError as exc:
        raise SpecFormatError(str(exc)) from exc


def _build_dfa(keys, body) -> PartialDFA:
    _require(keys, "dfa", ("alphabet", "states", "initial"), ("accepting",))
    alphabet = FiniteSet(keys["alphabet"].names_rest())
    states = FiniteSet(keys["states"].names_rest())
    initial = keys["initial"].name()
    keys["initial"].expect_end()
    accepting = frozenset(keys["accepting"].names_rest()) \
        if "accepting" in keys else frozenset()
    delta = {}
    for cur in body:
        word = cur.name()
        if word != "trans":
            raise cur.error(f"expected a 'trans' line, found {word!r}")
        q, a, q2 = cur.name(), cur.name(), cur.name()
        cur.expect_end()
        if (q, a) in delta:
            raise cur.error(f"duplicate transition {q!r} on {a!r}")
        delta[(q, a)] = q2
    try:
        return PartialDFA(alphabet, states, accepting, delta, initial)
    except ShapeError as exc:
        raise SpecFormatError(str(exc)) from exc


def _build_multigraph(keys, body) -> Multigraph:
    _require(keys, "multigraph", ("vertices", "root"))
    vertices = FiniteSet(keys["vertices"].names_rest())
    root = keys["root"].name()
    keys["root"].expect_end()
    edges = []
    for cur in body:
        word = cur.name()
        if word != "edge":
            raise cur.error(f"expected an 'edge' line, found {word!r}")
        eid, src, tgt = cur.name(), cur.name(), cur.name()
        cur.expect_end()
        edges.append(Edge(eid, src, tgt))
    try:
        return Multigraph(vertices, tuple(edges), root)
    except ShapeError as exc:
        raise SpecFormatError(str(exc)) from exc
