"""Dependence, constancy and independence assertions.

Text format, one assertion per line::

    universe: a b c
    dep: a b -> c
    const: a
    indep: a b _||_ c

Attribute tokens are whitespace separated and an empty side is written
``()``.  ``#`` starts a comment.  Without a ``universe:`` line the universe is
the set of mentioned attributes in order of first appearance.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from .ground import EMPTY, DivrankError, GroundSet, SubsetLike, parse_subset

DEP = "dep"
CONST = "const"
INDEP = "indep"
KINDS = (DEP, CONST, INDEP)

INDEP_SEP = "_||_"
DEP_SEP = "->"


class ParseError(DivrankError, ValueError):
    def __init__(self, message: str, line: Optional[int] = None, source: str = "<text>"):
        self.line = line
        self.source = source
        where = f"{source}:{line}: " if line is not None else f"{source}: "
        super().__init__(where + message)


class UsageError(DivrankError, ValueError):
    """An operation was called outside its precondition."""


@dataclass(frozen=True, eq=False)
class Assertion:
    """``=(lhs, rhs)``, ``=(lhs)`` or ``lhs ⊥ rhs``.

    Independence is symmetric, so two independence assertions with swapped
    sides compare equal.
    """

    kind: str
    lhs: frozenset
    rhs: frozenset = EMPTY

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown assertion kind {self.kind!r}")
        object.__setattr__(self, "lhs", frozenset(self.lhs))
        object.__setattr__(self, "rhs", frozenset(self.rhs) if self.kind != CONST else EMPTY)

    @classmethod
    def dep(cls, x: SubsetLike, y: SubsetLike) -> "Assertion":
        return cls(DEP, parse_subset(x), parse_subset(y))

    @classmethod
    def const(cls, x: SubsetLike) -> "Assertion":
        return cls(CONST, parse_subset(x))

    @classmethod
    def indep(cls, x: SubsetLike, y: SubsetLike) -> "Assertion":
        return cls(INDEP, parse_subset(x), parse_subset(y))

    def _key(self):
        if self.kind == INDEP:
            return (INDEP, frozenset((self.lhs, self.rhs)))
        return (self.kind, self.lhs, self.rhs)

    def __eq__(self, other):
        if not isinstance(other, Assertion):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    @property
    def attrs(self) -> frozenset:
        return self.lhs | self.rhs

    def as_dep(self) -> "Assertion":
        """Constancy ``=(x)`` read as ``=(∅, x)``."""
        if self.kind == CONST:
            return Assertion(DEP, EMPTY, self.lhs)
        return self

    def as_indep(self) -> "Assertion":
        """Constancy ``=(x)`` read as ``x ⊥ x``."""
        if self.kind == CONST:
            return Assertion(INDEP, self.lhs, self.lhs)
        return self

    def show(self, ground: Optional[GroundSet] = None) -> str:
        f = ground.fmt if ground is not None else _fmt_plain
        if self.kind == DEP:
            return f"=({f(self.lhs)}, {f(self.rhs)})"
        if self.kind == CONST:
            return f"=({f(self.lhs)})"
        return f"{f(self.lhs)} ⊥ {f(self.rhs)}"

    def to_text(self, ground: Optional[GroundSet] = None) -> str:
        def side(x):
            if not x:
                return "()"
            return " ".join(ground.ordered(x) if ground is not None else sorted(x))

        if self.kind == DEP:
            return f"dep: {side(self.lhs)} {DEP_SEP} {side(self.rhs)}"
        if self.kind == CONST:
            return f"const: {side(self.lhs)}"
        return f"indep: {side(self.lhs)} {INDEP_SEP} {side(self.rhs)}"

    def __str__(self):
        return self.show()


def _fmt_plain(x: frozenset) -> str:
    if not x:
        return "∅"
    names = sorted(x)
    return ("," if any(len(a) > 1 for a in names) else "").join(names)


class AssertionSet:
    """A deduplicated set of assertions over a declared universe."""

    def __init__(self, universe, assertions: Iterable[Assertion] = ()):
        if not isinstance(universe, GroundSet):
            universe = GroundSet(universe)
        self.universe = universe
        items = []
        seen = set()
        for a in assertions:
            for attr in a.attrs:
                universe.index(attr)
            if a not in seen:
                seen.add(a)
                items.append(a)
        self._items = tuple(items)
        self._set = frozenset(items)

    def __iter__(self) -> Iterator[Assertion]:
        return iter(self._items)

    def __len__(self) -> int:
        return len(self._items)

    def __contains__(self, a: object) -> bool:
        return a in self._set

    def __eq__(self, other):
        if not isinstance(other, AssertionSet):
            return NotImplemented
        return self.universe == other.universe and self._set == other._set

    def __hash__(self):
        return hash((self.universe, self._set))

    def __repr__(self):
        return f"AssertionSet({list(self.universe)}, {len(self)} assertions)"

    @property
    def kinds(self) -> frozenset:
        return frozenset(a.kind for a in self._items)

    def as_set(self) -> frozenset:
        return self._set

    def sorted(self) -> list:
        g = self.universe
        order = {DEP: 0, CONST: 1, INDEP: 2}
        return sorted(
            self._items, key=lambda a: (order[a.kind], g.sort_key(a.lhs), g.sort_key(a.rhs))
        )

    def to_text(self) -> str:
        lines = ["universe: " + " ".join(self.universe.attrs)]
        lines += [a.to_text(self.universe) for a in self.sorted()]
        return "\n".join(lines) + "\n"


def _parse_side(text: str) -> frozenset:
    text = text.strip()
    if text in ("", "()"):
        return EMPTY
    tokens = text.split()
    if "()" in tokens:
        raise ValueError(f"'()' cannot be mixed with attribute names: {text!r}")
    return frozenset(tokens)


def parse_assertion(line: str) -> Assertion:
    """Parse a single ``dep:``/``const:``/``indep:`` line."""
    tag, sep, body = line.partition(":")
    tag = tag.strip().lower()
    if not sep:
        raise ValueError(f"missing 'kind:' prefix in {line!r}")
    if tag == DEP:
        if DEP_SEP not in body:
            raise ValueError(f"dependence needs '{DEP_SEP}': {line!r}")
        lhs, _, rhs = body.partition(DEP_SEP)
        return Assertion(DEP, _parse_side(lhs), _parse_side(rhs))
    if tag == CONST:
        return Assertion(CONST, _parse_side(body))
    if tag == INDEP:
        if INDEP_SEP not in body:
            raise ValueError(f"independence needs '{INDEP_SEP}': {line!r}")
        lhs, _, rhs = body.partition(INDEP_SEP)
        return Assertion(INDEP, _parse_side(lhs), _parse_side(rhs))
    raise ValueError(f"unknown assertion kind {tag!r}")


def parse_assertions(text: str, source: str = "<text>", universe=None) -> AssertionSet:
    declared = None
    items = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.lower().startswith("universe:"):
            if declared is not None:
                raise ParseError("universe declared twice", lineno, source)
            declared = line.split(":", 1)[1].split()
            continue
        try:
            items.append(parse_assertion(line))
        except ValueError as exc:
            raise ParseError(str(exc), lineno, source) from None
    if universe is None:
        if declared is not None:
            universe = declared
        else:
            universe = []
            for a in items:
                for side in (a.lhs, a.rhs):
                    for attr in sorted(side):
                        if attr not in universe:
                            universe.append(attr)
    try:
        return AssertionSet(universe, items)
    except ValueError as exc:
        raise ParseError(str(exc), None, source) from None
