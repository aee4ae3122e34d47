"""Shared primitives: finite carriers, total maps, and the error taxonomy.

State identifiers are plain strings.  Carriers are `FiniteSet`s: duplicate-free
sequences with a fixed, deterministic iteration order (insertion order), so
every construction downstream is reproducible byte for byte.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping
from typing import Callable

StateId = str


class CoalgebraError(Exception):
    """Base class for all library errors."""


class FunctorSyntaxError(CoalgebraError):
    """Functor expression text is malformed; carries the offset of the fault."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


class ShapeError(CoalgebraError):
    """A value does not fit the functor/carrier it is claimed to inhabit."""


class PowNotPrecise(CoalgebraError):
    """Raised when a precise factorization is requested for a powerset map
    with a non-empty value; the powerset functor admits none."""


class NotIsomorphic(CoalgebraError):
    """Two factorizations are not related by a mediating bijection."""


class NotAHomomorphism(CoalgebraError):
    """An operation required a coalgebra homomorphism and got something else."""


class SearchSpaceTooLarge(CoalgebraError):
    """A brute-force oracle refused to enumerate past its guard."""


class SpecFormatError(CoalgebraError):
    """A spec document is malformed; message carries the line number."""


class FiniteSet:
    """An ordered finite set of state identifiers.

    Equality and hashing are order-sensitive (it is a duplicate-free
    sequence); use `as_set()` when only membership matters.
    """

    __slots__ = ("_elems", "_index")

    def __init__(self, elems: Iterable[StateId] = ()):
        self._elems: tuple[StateId, ...] = tuple(elems)
        self._index = {e: i for i, e in enumerate(self._elems)}
        if len(self._index) != len(self._elems):
            seen: set[StateId] = set()
            for e in self._elems:
                if e in seen:
                    raise ValueError(f"duplicate element {e!r} in finite set")
                seen.add(e)
        for e in self._elems:
            if not isinstance(e, str) or not e:
                raise ValueError(f"set elements must be non-empty strings, got {e!r}")

    def __iter__(self) -> Iterator[StateId]:
        return iter(self._elems)

    def __len__(self) -> int:
        return len(self._elems)

    def __contains__(self, item: object) -> bool:
        return item in self._index

    def __getitem__(self, i: int) -> StateId:
        return self._elems[i]

    def index(self, e: StateId) -> int:
        return self._index[e]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteSet):
            return NotImplemented
        return self._elems == other._elems

    def __hash__(self) -> int:
        return hash(self._elems)

    def __repr__(self) -> str:
        return "FiniteSet(" + ", ".join(self._elems) + ")"

    def as_set(self) -> frozenset[StateId]:
        return frozenset(self._elems)

    def union(self, other: Iterable[StateId]) -> "FiniteSet":
        """Order-preserving union: self first, then unseen elements of other."""
        out = list(self._elems)
        seen = set(out)
        for e in other:
            if e not in seen:
                seen.add(e)
                out.append(e)
        return FiniteSet(out)

    def restrict(self, keep: Iterable[StateId]) -> "FiniteSet":
        """Subset of self, in self's order."""
        keepset = set(keep)
        return FiniteSet(e for e in self._elems if e in keepset)


class TotalMap:
    """A total function between finite carriers, validated at construction."""

    __slots__ = ("domain", "codomain", "_mapping")

    def __init__(self, domain: FiniteSet, codomain: FiniteSet,
                 mapping: Mapping[StateId, StateId]):
        self.domain = domain
        self.codomain = codomain
        self._mapping = dict(mapping)
        missing = [x for x in domain if x not in self._mapping]
        if missing:
            raise ValueError(f"map is not total: no image for {missing[:3]}")
        extra = [x for x in self._mapping if x not in domain]
        if extra:
            raise ValueError(f"map defined outside its domain: {extra[:3]}")
        bad = [x for x in domain if self._mapping[x] not in codomain]
        if bad:
            raise ValueError(
                f"image of {bad[0]!r} ({self._mapping[bad[0]]!r}) not in codomain")

    @classmethod
    def identity(cls, carrier: FiniteSet) -> "TotalMap":
        return cls(carrier, carrier, {x: x for x in carrier})

    def __getitem__(self, x: StateId) -> StateId:
        return self._mapping[x]

    def __call__(self, x: StateId) -> StateId:
        return self._mapping[x]

    def items(self):
        return ((x, self._mapping[x]) for x in self.domain)

    def mapping(self) -> dict[StateId, StateId]:
        return {x: self._mapping[x] for x in self.domain}

    def then(self, other: "TotalMap") -> "TotalMap":
        """Composite `other after self` (diagram order)."""
        return TotalMap(self.domain, other.codomain,
                        {x: other[self[x]] for x in self.domain})

    def image(self) -> FiniteSet:
        out: list[StateId] = []
        seen: set[StateId] = set()
        for x in self.domain:
            y = self._mapping[x]
            if y not in seen:
                seen.add(y)
                out.append(y)
        return FiniteSet(out)

    def is_injective(self) -> bool:
        return len(self.image()) == len(self.domain)

    def is_surjective(self) -> bool:
        return self.image().as_set() == self.codomain.as_set()

    def is_bijective(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TotalMap):
            return NotImplemented
        return (self.domain == other.domain and self.codomain == other.codomain
                and all(self[x] == other[x] for x in self.domain))

    def __hash__(self) -> int:
        return hash((self.domain, self.codomain,
                     tuple(self._mapping[x] for x in self.domain)))

    def __repr__(self) -> str:
        body = ", ".join(f"{x}->{self._mapping[x]}" for x in self.domain)
        return f"TotalMap({body})"


def fresh_namer(taken: Iterable[StateId] = ()) -> Callable[[str], StateId]:
    """Allocator of fresh names: returns the candidate itself when free,
    otherwise the first `candidate~k` (k >= 2) that is."""
    used = set(taken)

    def alloc(candidate: str) -> StateId:
        name = candidate
        k = 2
        while name in used:
            name = f"{candidate}~{k}"
            k += 1
        used.add(name)
        return name

    return alloc
