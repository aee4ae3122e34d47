"""Functor grammar over finite sets, and the values of those functors.

A functor expression is one of::

    Id | {e1,...,en} | F x G | F + G | F ^ {a,...} | F . G | Bag | Pow

with `^` binding tightest, then `.` (right-associative), then `x`, then `+`.
The numeral 1 abbreviates the constant singleton {⊥}; a numeral n >= 2
abbreviates {0,...,n-1}.

Values are immutable and normalized on construction: bag entries with equal
members are merged (zero multiplicities dropped), powerset duplicates are
collapsed.  Under composition the member slots of the outer layer hold values
of the inner layer instead of state identifiers.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable, Iterator, Mapping
from dataclasses import dataclass
from typing import Union

from .base import FiniteSet, FunctorSyntaxError, ShapeError, StateId, TotalMap

BOTTOM = "⊥"

# --------------------------------------------------------------------------
# functor expressions


@dataclass(frozen=True)
class Identity:
    def __repr__(self) -> str:
        return "Id"


@dataclass(frozen=True)
class Const:
    values: FiniteSet

    def __post_init__(self):
        if len(self.values) == 0:
            raise ValueError("constant functor needs a non-empty set")

    def __repr__(self) -> str:
        return f"Const({{{','.join(self.values)}}})"


@dataclass(frozen=True)
class Product:
    factors: tuple["FunctorExpr", ...]

    def __post_init__(self):
        if not self.factors:
            raise ValueError("product needs at least one factor")


@dataclass(frozen=True)
class Coproduct:
    summands: tuple["FunctorExpr", ...]

    def __post_init__(self):
        if not self.summands:
            raise ValueError("coproduct needs at least one summand")


@dataclass(frozen=True)
class Exponent:
    base: "FunctorExpr"
    alphabet: FiniteSet

    def __post_init__(self):
        if len(self.alphabet) == 0:
            raise ValueError("exponent needs a non-empty alphabet")


@dataclass(frozen=True)
class Compose:
    outer: "FunctorExpr"
    inner: "FunctorExpr"


@dataclass(frozen=True)
class Bag:
    def __repr__(self) -> str:
        return "Bag"


@dataclass(frozen=True)
class Pow:
    def __repr__(self) -> str:
        return "Pow"


FunctorExpr = Union[Identity, Const, Product, Coproduct, Exponent, Compose, Bag, Pow]

# --------------------------------------------------------------------------
# values

# Member slots hold state ids at the bottom layer and inner values under
# composition.
Member = Union[StateId, "FValue"]


@dataclass(frozen=True)
class IdVal:
    member: Member


@dataclass(frozen=True)
class ConstVal:
    element: StateId


@dataclass(frozen=True)
class TupleVal:
    items: tuple["FValue", ...]


@dataclass(frozen=True)
class TagVal:
    tag: int
    value: "FValue"


@dataclass(frozen=True, eq=False)
class FunVal:
    """Total map from letters to values; compared pointwise."""

    entries: tuple[tuple[str, "FValue"], ...]

    def __init__(self, entries: Iterable[tuple[str, "FValue"]]):
        pairs = tuple(entries)
        letters = [a for a, _ in pairs]
        if len(set(letters)) != len(letters):
            raise ValueError("duplicate letter in exponent value")
        object.__setattr__(self, "entries", pairs)

    def __getitem__(self, letter: str) -> "FValue":
        for a, v in self.entries:
            if a == letter:
                return v
        raise KeyError(letter)

    def letters(self) -> tuple[str, ...]:
        return tuple(a for a, _ in self.entries)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FunVal):
            return NotImplemented
        return dict(self.entries) == dict(other.entries)

    def __hash__(self) -> int:
        return hash(frozenset(self.entries))


@dataclass(frozen=True, eq=False)
class BagVal:
    """Finite multiset of members; merged and zero-free in stored form."""

    entries: tuple[tuple[Member, int], ...]

    def __init__(self, entries: Iterable[tuple[Member, int]] = ()):
        merged: dict[Member, int] = {}
        for m, n in entries:
            if n < 0:
                raise ValueError(f"negative multiplicity {n} for {m!r}")
            if n == 0:
                continue
            merged[m] = merged.get(m, 0) + n
        object.__setattr__(self, "entries", tuple(merged.items()))

    def multiplicity(self, m: Member) -> int:
        return dict(self.entries).get(m, 0)

    def total(self) -> int:
        return sum(n for _, n in self.entries)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BagVal):
            return NotImplemented
        return dict(self.entries) == dict(other.entries)

    def __hash__(self) -> int:
        return hash(frozenset(self.entries))


@dataclass(frozen=True, eq=False)
class SetVal:
    """Finite set of members; duplicates collapse on construction."""

    members: tuple[Member, ...]

    def __init__(self, members: Iterable[Member] = ()):
        out: list[Member] = []
        seen: set[Member] = set()
        for m in members:
            if m not in seen:
                seen.add(m)
                out.append(m)
        object.__setattr__(self, "members", tuple(out))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SetVal):
            return NotImplemented
        return frozenset(self.members) == frozenset(other.members)

    def __hash__(self) -> int:
        return hash(frozenset(self.members))


FValue = Union[IdVal, ConstVal, TupleVal, TagVal, FunVal, BagVal, SetVal]

_VALUE_CLASS: dict[type, type] = {
    Identity: IdVal, Const: ConstVal, Product: TupleVal, Coproduct: TagVal,
    Exponent: FunVal, Bag: BagVal, Pow: SetVal,
}


def _expect(functor: FunctorExpr, value: FValue) -> None:
    if isinstance(functor, Compose):
        return
    want = _VALUE_CLASS[type(functor)]
    if not isinstance(value, want):
        raise ShapeError(
            f"expected {want.__name__} for {format_functor(functor)}, "
            f"got {type(value).__name__}")


# --------------------------------------------------------------------------
# generic traversal

def map_members(functor: FunctorExpr, value: FValue,
                fn: Callable[[Member], Member]) -> FValue:
    """Rebuild `value` with `fn` applied to every bottom member slot.

    This is the functor's action on maps, generalized to an arbitrary member
    transform; `fmap` is the instance where `fn` relabels state ids.  Bag
    images merge multiplicities of collided members; Pow images collapse
    duplicates.
    """
    _expect(functor, value)
    if isinstance(functor, Identity):
        return IdVal(fn(value.member))
    if isinstance(functor, Const):
        return value
    if isinstance(functor, Product):
        if len(value.items) != len(functor.factors):
            raise ShapeError(f"product arity mismatch: {len(value.items)} items "
                             f"for {len(functor.factors)} factors")
        return TupleVal(tuple(map_members(f, v, fn)
                              for f, v in zip(functor.factors, value.items)))
    if isinstance(functor, Coproduct):
        if not 0 <= value.tag < len(functor.summands):
            raise ShapeError(f"coproduct tag {value.tag} out of range")
        return TagVal(value.tag, map_members(functor.summands[value.tag], value.value, fn))
    if isinstance(functor, Exponent):
        return FunVal((a, map_members(functor.base, value[a], fn))
                      for a in functor.alphabet)
    if isinstance(functor, Compose):
        return map_members(functor.outer, value,
                           lambda m: map_members(functor.inner, m, fn))
    if isinstance(functor, Bag):
        return BagVal((fn(m), n) for m, n in value.entries)
    if isinstance(functor, Pow):
        return SetVal(fn(m) for m in value.members)
    raise ShapeError(f"unknown functor {functor!r}")


def iter_slots(functor: FunctorExpr, value: FValue) -> Iterator[tuple[Member, int]]:
    """Yield every bottom member slot with its multiplicity weight."""
    _expect(functor, value)
    if isinstance(functor, Identity):
        yield (value.member, 1)
    elif isinstance(functor, Const):
        return
    elif isinstance(functor, Product):
        for f, v in zip(functor.factors, value.items):
            yield from iter_slots(f, v)
    elif isinstance(functor, Coproduct):
        yield from iter_slots(functor.summands[value.tag], value.value)
    elif isinstance(functor, Exponent):
        for a in functor.alphabet:
            yield from iter_slots(functor.base, value[a])
    elif isinstance(functor, Compose):
        for m, n in iter_slots(functor.outer, value):
            for m2, n2 in iter_slots(functor.inner, m):
                yield (m2, n * n2)
    elif isinstance(functor, Bag):
        yield from value.entries
    elif isinstance(functor, Pow):
        for m in value.members:
            yield (m, 1)


def used_states(functor: FunctorExpr, value: FValue) -> FiniteSet:
    """States that actually occur in the value, in first-occurrence order."""
    out: list[StateId] = []
    seen: set[StateId] = set()
    for m, _ in iter_slots(functor, value):
        if not isinstance(m, str):
            raise ShapeError(f"bottom member is not a state id: {m!r}")
        if m not in seen:
            seen.add(m)
            out.append(m)
    return FiniteSet(out)


def leaf_count(functor: FunctorExpr, value: FValue) -> int:
    """Number of bottom member slots, counting multiplicity."""
    return sum(n for _, n in iter_slots(functor, value))


def fmap(functor: FunctorExpr, h, value: FValue) -> FValue:
    """Apply the functor to a carrier relabelling.

    `h` may be a TotalMap, a mapping, or a callable on state ids.
    """
    if isinstance(h, TotalMap):
        hf = h.__getitem__
    elif isinstance(h, Mapping):
        hf = h.__getitem__
    else:
        hf = h

    def rename(m: Member) -> Member:
        if not isinstance(m, str):
            raise ShapeError(f"bottom member is not a state id: {m!r}")
        return hf(m)

    return map_members(functor, value, rename)


def _validate(functor: FunctorExpr, value: FValue,
              check_member: Callable[[Member, str], None], path: str) -> None:
    _expect(functor, value)
    if isinstance(functor, Identity):
        check_member(value.member, path)
    elif isinstance(functor, Const):
        if value.element not in functor.values:
            raise ShapeError(f"{path}: {value.element!r} not in constant set "
                             f"{{{','.join(functor.values)}}}")
    elif isinstance(functor, Product):
        if len(value.items) != len(functor.factors):
            raise ShapeError(f"{path}: product arity mismatch")
        for i, (f, v) in enumerate(zip(functor.factors, value.items)):
            _validate(f, v, check_member, f"{path}.{i}")
    elif isinstance(functor, Coproduct):
        if not 0 <= value.tag < len(functor.summands):
            raise ShapeError(f"{path}: coproduct tag {value.tag} out of range")
        _validate(functor.summands[value.tag], value.value, check_member,
                  f"{path}.t{value.tag}")
    elif isinstance(functor, Exponent):
        have = set(value.letters())
        want = functor.alphabet.as_set()
        if have != want:
            raise ShapeError(f"{path}: exponent letters {sorted(have)} do not "
                             f"match alphabet {sorted(want)}")
        for a in functor.alphabet:
            _validate(functor.base, value[a], check_member, f"{path}.{a}")
    elif isinstance(functor, Compose):
        def check_inner(m: Member, p: str) -> None:
            if isinstance(m, str):
                raise ShapeError(f"{p}: expected an inner value under composition, "
                                 f"got state id {m!r}")
            _validate(functor.inner, m, check_member, p)
        _validate(functor.outer, value, check_inner, path)
    elif isinstance(functor, Bag):
        for m, n in value.entries:
            if n < 1:
                raise ShapeError(f"{path}: non-positive multiplicity")
            check_member(m, path)
    elif isinstance(functor, Pow):
        for m in value.members:
            check_member(m, path)


def validate_value(functor: FunctorExpr, value: FValue,
                   carrier: FiniteSet | None = None) -> None:
    """Check that `value` inhabits `functor` applied to `carrier`.

    With carrier=None only the shape is checked, not state membership.
    """

    def check_member(m: Member, path: str) -> None:
        if not isinstance(m, str):
            raise ShapeError(f"{path}: expected a state id, got {type(m).__name__}")
        if carrier is not None and m not in carrier:
            raise ShapeError(f"{path}: state {m!r} not in carrier")

    _validate(functor, value, check_member, "value")


def fvalue_equal(functor: FunctorExpr, v1: FValue, v2: FValue) -> bool:
    """Structural equality of two values of the same functor.

    Both values are shape-checked first; bags compare by multiplicity,
    powerset values as sets, exponent values pointwise.
    """
    validate_value(functor, v1)
    validate_value(functor, v2)
    return v1 == v2


# --------------------------------------------------------------------------
# concrete syntax

_NAME_DELIMS = set(" \t\r\n,;()[]{}|*=")


class _Cursor:
    __slots__ = ("text", "pos")

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch: str) -> bool:
        if self.peek() == ch:
            self.pos += 1
            return True
        return False

    def expect(self, ch: str, what: str) -> None:
        if not self.take(ch):
            raise FunctorSyntaxError(f"expected {what}", self.pos)

    def word(self) -> str:
        """Maximal run of identifier characters (letters, digits, _)."""
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum()
                                             or self.text[self.pos] == "_"):
            self.pos += 1
        return self.text[start:self.pos]

    def bare_name(self) -> str:
        """Maximal run of non-delimiter characters (set literal members)."""
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] not in _NAME_DELIMS:
            self.pos += 1
        if self.pos == start:
            raise FunctorSyntaxError("expected a name", start)
        return self.text[start:self.pos]

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)


def _parse_set_literal(cur: _Cursor) -> FiniteSet:
    cur.expect("{", "'{'")
    if cur.peek() == "}":
        raise FunctorSyntaxError("empty set is not allowed", cur.pos)
    names = [cur.bare_name()]
    while cur.take(","):
        names.append(cur.bare_name())
    cur.expect("}", "'}'")
    try:
        return FiniteSet(names)
    except ValueError as e:
        raise FunctorSyntaxError(str(e), cur.pos) from None


def _parse_atom(cur: _Cursor) -> FunctorExpr:
    ch = cur.peek()
    if ch == "(":
        cur.take("(")
        inner = _parse_coproduct(cur)
        cur.expect(")", "')'")
        return inner
    if ch == "{":
        return Const(_parse_set_literal(cur))
    if ch.isdigit():
        start = cur.pos
        word = cur.word()
        if not word.isdigit():
            raise FunctorSyntaxError(f"bad numeral {word!r}", start)
        n = int(word)
        if n == 0:
            raise FunctorSyntaxError("numeral 0 denotes the empty constant, "
                                     "which is not allowed", start)
        if n == 1:
            return Const(FiniteSet((BOTTOM,)))
        return Const(FiniteSet(str(i) for i in range(n)))
    start = cur.pos
    word = cur.word()
    if word == "Id":
        return Identity()
    if word == "Bag":
        return Bag()
    if word == "Pow":
        return Pow()
    raise FunctorSyntaxError(
        f"expected a functor, got {word!r}" if word else "expected a functor", start)


def _parse_postfix(cur: _Cursor) -> FunctorExpr:
    f = _parse_atom(cur)
    while cur.peek() == "^":
        cur.take("^")
        f = Exponent(f, _parse_set_literal(cur))
    return f


def _parse_compose(cur: _Cursor) -> FunctorExpr:
    parts = [_parse_postfix(cur)]
    while cur.peek() == ".":
        cur.take(".")
        parts.append(_parse_postfix(cur))
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = Compose(p, out)
    return out


def _parse_product(cur: _Cursor) -> FunctorExpr:
    factors = [_parse_compose(cur)]
    while True:
        cur.skip_ws()
        mark = cur.pos
        if cur.peek() == "x":
            word = cur.word()
            if word == "x":
                factors.append(_parse_compose(cur))
                continue
            cur.pos = mark
        break
    return factors[0] if len(factors) == 1 else Product(tuple(factors))


def _parse_coproduct(cur: _Cursor) -> FunctorExpr:
    summands = [_parse_product(cur)]
    while cur.take("+"):
        summands.append(_parse_product(cur))
    return summands[0] if len(summands) == 1 else Coproduct(tuple(summands))


def parse_functor(text: str) -> FunctorExpr:
    """Parse a functor expression; round-trips with `format_functor`."""
    cur = _Cursor(text)
    f = _parse_coproduct(cur)
    if not cur.at_end():
        raise FunctorSyntaxError("trailing input after functor expression", cur.pos)
    return f


def _format_set(s: FiniteSet) -> str:
    return "{" + ",".join(s) + "}"


def _const_text(c: Const) -> str:
    elems = tuple(c.values)
    if elems == (BOTTOM,):
        return "1"
    if len(elems) >= 2 and elems == tuple(str(i) for i in range(len(elems))):
        return str(len(elems))
    return _format_set(c.values)


# precedence: coproduct 0 < product 1 < compose 2 < postfix 3
def _fmt(f: FunctorExpr, ctx: int) -> str:
    if isinstance(f, Identity):
        return "Id"
    if isinstance(f, Bag):
        return "Bag"
    if isinstance(f, Pow):
        return "Pow"
    if isinstance(f, Const):
        return _const_text(f)
    if isinstance(f, Exponent):
        return _fmt(f.base, 3) + "^" + _format_set(f.alphabet)
    if isinstance(f, Compose):
        body = _fmt(f.outer, 3) + " . " + _fmt(f.inner, 2)
        return f"({body})" if ctx > 2 else body
    if isinstance(f, Product):
        body = " x ".join(_fmt(g, 2) for g in f.factors)
        return f"({body})" if ctx > 1 else body
    if isinstance(f, Coproduct):
        body = " + ".join(_fmt(g, 1) for g in f.summands)
        return f"({body})" if ctx > 0 else body
    raise ShapeError(f"unknown functor {f!r}")


def format_functor(f: FunctorExpr) -> str:
    """Canonical text for a functor expression."""
    return _fmt(f, 0)
