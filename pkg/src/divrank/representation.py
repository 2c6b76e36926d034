"""Realising an Armstrong-closed set of dependence atoms as a rank function.

Subsets that determine each other form classes ``E_x``; the classes are
partially ordered by ``E_y <= E_x`` iff ``=(x, y)`` is in the set.  An
order-preserving injection ``f`` of the classes into ``{0} ∪ (1, 2)`` with
``f(E_∅) = 0`` then gives the rank ``r(x) = f(E_x)``, whose dependence
atoms are exactly the given set.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .assertions import CONST, DEP, Assertion, AssertionSet, UsageError
from .core import dep_atoms
from .dependence import CLOSE_CAP, armstrong_close
from .ground import DivrankError, GroundSet
from .models import ExplicitRankTable, explicit_rank_build


class NotClosedError(DivrankError, ValueError):
    """The assertion set is not closed under Armstrong's rules."""

    def __init__(self, missing: Assertion, universe: GroundSet):
        self.missing = missing
        super().__init__(
            f"assertion set is not closed: {missing.show(universe)} follows but is missing"
        )


def _dep_set(sigma: AssertionSet) -> AssertionSet:
    bad = [a for a in sigma if a.kind not in (DEP, CONST)]
    if bad:
        raise UsageError(f"representation needs dependence atoms only, got {bad[0]}")
    if CONST in sigma.kinds:
        return AssertionSet(sigma.universe, [a.as_dep() for a in sigma])
    return sigma


def check_closed(sigma: AssertionSet, cap: int = CLOSE_CAP) -> AssertionSet:
    sigma = _dep_set(sigma)
    closed = armstrong_close(sigma, cap)
    if len(closed) != len(sigma):
        g = sigma.universe
        missing = sorted(
            (a for a in closed if a not in sigma), key=lambda a: (g.sort_key(a.lhs), g.sort_key(a.rhs))
        )
        raise NotClosedError(missing[0], g)
    return sigma


@dataclass(frozen=True)
class EquivClassPoset:
    """Classes of mutually determining subsets and their order.

    ``classes[i]`` lists the members of class ``i`` canonically; its first
    member is the representative.  Class 0 is ``E_∅``.  ``leq[i, j]`` holds
    iff ``E_i <= E_j``.
    """

    universe: GroundSet
    classes: tuple
    leq: np.ndarray
    class_of: dict

    def __len__(self):
        return len(self.classes)

    def representative(self, i: int) -> frozenset:
        return self.classes[i][0]

    def less(self, i: int, j: int) -> bool:
        return i != j and bool(self.leq[i, j])

    def comparable(self, i: int, j: int) -> bool:
        return bool(self.leq[i, j] or self.leq[j, i])

    def name(self, i: int) -> str:
        return "E_" + self.universe.fmt(self.representative(i))

    def covers(self) -> list:
        """Pairs ``(i, j)`` with ``E_i < E_j`` and nothing strictly between."""
        n = len(self.classes)
        out = []
        for i in range(n):
            for j in range(n):
                if self.less(i, j) and not any(self.less(i, k) and self.less(k, j) for k in range(n)):
                    out.append((i, j))
        return out

    def to_dot(self) -> str:
        lines = ["digraph classes {"]
        for i, members in enumerate(self.classes):
            label = " = ".join(self.universe.fmt(m) for m in members)
            lines.append(f'  "{self.name(i)}" [label="{label}"];')
        for i, j in self.covers():
            lines.append(f'  "{self.name(i)}" -> "{self.name(j)}";')
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_poset(sigma: AssertionSet, cap: int = CLOSE_CAP) -> EquivClassPoset:
    sigma = check_closed(sigma, cap)
    g = sigma.universe
    subsets = g.subsets()
    n = len(subsets)
    member = sigma.as_set()
    dep = np.array([[Assertion(DEP, x, y) in member for y in subsets] for x in subsets], dtype=bool)
    equiv = dep & dep.T

    class_ids = [-1] * n
    classes = []
    for i in range(n):
        if class_ids[i] >= 0:
            continue
        members = [j for j in range(n) if equiv[i, j]]
        for j in members:
            class_ids[j] = len(classes)
        classes.append(tuple(subsets[j] for j in members))

    k = len(classes)
    reps = [subsets.index(c[0]) for c in classes]
    leq = np.zeros((k, k), dtype=bool)
    for a in range(k):
        for b in range(k):
            # E_a <= E_b iff the representative of b determines that of a
            leq[a, b] = dep[reps[b], reps[a]]
    class_of = {subsets[j]: class_ids[j] for j in range(n)}
    return EquivClassPoset(g, tuple(classes), leq, class_of)


@dataclass(frozen=True)
class InterpolationAssignment:
    values: tuple

    def __getitem__(self, i: int) -> Fraction:
        return self.values[i]

    def problems(self, poset: EquivClassPoset) -> list:
        """Violated invariants, empty when the assignment is valid."""
        out = []
        v = self.values
        if v[0] != 0:
            out.append("f(E_∅) != 0")
        if len(set(v)) != len(v):
            out.append("f is not injective")
        for i in range(1, len(v)):
            if not 1 < v[i] < 2:
                out.append(f"f({poset.name(i)}) = {v[i]} outside (1, 2)")
        for i in range(len(v)):
            for j in range(len(v)):
                if poset.leq[i, j] and v[i] > v[j]:
                    out.append(f"{poset.name(i)} <= {poset.name(j)} but f decreases")
        return out


def _dyadic_pick(lo: Fraction, hi: Fraction, used: set) -> Fraction:
    """First unused point of ``lo + k (hi-lo) / 2^level``, coarsest level first."""
    level = 1
    while True:
        step = (hi - lo) / 2**level
        for k in range(1, 2**level, 2):
            v = lo + k * step
            if v not in used:
                return v
        level += 1


def assign_values(poset: EquivClassPoset) -> InterpolationAssignment:
    values = [Fraction(0)]
    used = set()
    for i in range(1, len(poset)):
        lo = max([values[j] for j in range(1, i) if poset.less(j, i)] + [Fraction(1)])
        hi = min([values[j] for j in range(1, i) if poset.less(i, j)] + [Fraction(2)])
        assert lo < hi, f"empty interval for {poset.name(i)}"
        v = _dyadic_pick(lo, hi, used)
        used.add(v)
        values.append(v)
    return InterpolationAssignment(tuple(values))


def realize_rank(sigma: AssertionSet, cap: int = CLOSE_CAP) -> ExplicitRankTable:
    poset = build_poset(sigma, cap)
    f = assign_values(poset)
    entries = {x: f[i] for x, i in poset.class_of.items()}
    return explicit_rank_build(poset.universe, entries)


def roundtrip_verify(sigma: AssertionSet, table) -> bool:
    """True iff the dependence atoms true in ``table`` are exactly ``sigma``."""
    sigma = _dep_set(sigma)
    if table.ground != sigma.universe:
        raise UsageError(
            f"universe mismatch: {list(sigma.universe.attrs)} vs {list(table.ground.attrs)}"
        )
    return dep_atoms(table) == sigma.as_set()
