"""Finite attribute universes and their subsets.

Subsets are plain ``frozenset`` objects of attribute names.  A
:class:`GroundSet` fixes the universe, its declared order, and the canonical
enumeration order of subsets (by size, then lexicographically by position),
which every exhaustive checker in the package follows.  Internally subsets are
also addressed as bitmasks, bit ``i`` standing for ``attrs[i]``.
"""

from __future__ import annotations

from functools import cached_property
from typing import Iterable, Iterator, Union

import numpy as np

AttrSubset = frozenset

SubsetLike = Union[str, Iterable[str], None]


class DivrankError(Exception):
    """Base class for errors raised by this package."""


class DomainError(DivrankError, ValueError):
    """An attribute does not belong to the ground set."""


class SizeError(DivrankError, ValueError):
    """A ground set is too large for exhaustive enumeration."""


EMPTY: frozenset = frozenset()


def parse_subset(text: SubsetLike) -> frozenset:
    """Read ``"a,b"``, ``"a b"``, ``"()"``, ``""`` or an iterable of names."""
    if text is None:
        return EMPTY
    if isinstance(text, str):
        text = text.strip()
        if text in ("", "()", "{}", "∅"):
            return EMPTY
        return frozenset(t for t in text.replace(",", " ").split() if t)
    return frozenset(text)


class GroundSet:
    """An ordered finite set of attribute names."""

    def __init__(self, attrs: Iterable[str] = ()):
        attrs = tuple(str(a) for a in attrs)
        if len(set(attrs)) != len(attrs):
            dupes = sorted({a for a in attrs if attrs.count(a) > 1})
            raise DomainError(f"duplicate attributes in ground set: {dupes}")
        self.attrs = attrs
        self._index = {a: i for i, a in enumerate(attrs)}

    def __repr__(self) -> str:
        return f"GroundSet({list(self.attrs)!r})"

    def __len__(self) -> int:
        return len(self.attrs)

    def __iter__(self) -> Iterator[str]:
        return iter(self.attrs)

    def __contains__(self, attr: object) -> bool:
        return attr in self._index

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GroundSet) and self.attrs == other.attrs

    def __hash__(self) -> int:
        return hash(self.attrs)

    @property
    def full(self) -> frozenset:
        return frozenset(self.attrs)

    def index(self, attr: str) -> int:
        try:
            return self._index[attr]
        except KeyError:
            raise DomainError(f"attribute {attr!r} not in ground set {list(self.attrs)}") from None

    def subset(self, x: SubsetLike) -> frozenset:
        """Validate ``x`` against the ground set and return it as a frozenset."""
        x = parse_subset(x)
        for a in x:
            self.index(a)
        return x

    # -- bitmask addressing -------------------------------------------------

    def mask(self, x: SubsetLike) -> int:
        m = 0
        for a in self.subset(x):
            m |= 1 << self._index[a]
        return m

    def from_mask(self, m: int) -> frozenset:
        return self._subsets_by_mask[m]

    @cached_property
    def _subsets_by_mask(self) -> tuple:
        n = len(self.attrs)
        return tuple(
            frozenset(self.attrs[i] for i in range(n) if m >> i & 1) for m in range(1 << n)
        )

    @cached_property
    def canonical_masks(self) -> np.ndarray:
        """All subset masks in canonical order: by size, then lexicographically."""
        n = len(self.attrs)
        masks = sorted(range(1 << n), key=lambda m: (bin(m).count("1"), _bits(m)))
        return np.array(masks, dtype=np.int64)

    @cached_property
    def canonical_position(self) -> np.ndarray:
        pos = np.empty(1 << len(self.attrs), dtype=np.int64)
        pos[self.canonical_masks] = np.arange(len(pos))
        return pos

    def subsets(self) -> list:
        """Every subset of the ground set, in canonical order."""
        return [self.from_mask(int(m)) for m in self.canonical_masks]

    def sort_key(self, x: frozenset) -> tuple:
        idx = sorted(self.index(a) for a in x)
        return (len(idx), tuple(idx))

    def ordered(self, x: frozenset) -> list:
        return sorted(x, key=self.index)

    def fmt(self, x: frozenset, empty: str = "∅", sep: str = "") -> str:
        """Render a subset the way the notation ``xy`` for unions reads."""
        if not x:
            return empty
        names = self.ordered(x)
        if sep == "" and any(len(a) > 1 for a in names):
            sep = ","
        return sep.join(names)

    def check_size(self, cap: int) -> None:
        if len(self.attrs) > cap:
            raise SizeError(
                f"ground set has {len(self.attrs)} attributes; enumeration cap is {cap}"
            )


def _bits(m: int) -> tuple:
    out = []
    i = 0
    while m:
        if m & 1:
            out.append(i)
        m >>= 1
        i += 1
    return tuple(out)
