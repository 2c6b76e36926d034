"""Entailment of independence atoms and the countermodel teams.

The rules are Empty Set (``x ⊥ ∅``), Symmetry, Decomposition (``x ⊥ yz``
gives ``x ⊥ y``), Mixing (``x ⊥ y`` and ``xy ⊥ z`` give ``x ⊥ yz``) and
Constancy (``z ⊥ z`` gives ``z ⊥ x``).  Entailment is decided by saturating
the assertion set over the subsets of its universe.

Restricting rule instances to the universe loses nothing: intersecting every
atom of a derivation with the universe maps each rule instance to an
instance of the same rule (union and intersection distribute), and leaves
the hypotheses and a universe-bounded goal unchanged.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import Optional

import numpy as np

from .assertions import CONST, INDEP, Assertion, AssertionSet, UsageError
from .ground import EMPTY, GroundSet, SizeError
from .models import Team

SATURATION_CAP = 8
TEAM_CAP = 16

HYPOTHESIS = "Hypothesis"
EMPTY_SET = "Empty Set"
SYMMETRY = "Symmetry"
DECOMPOSITION = "Decomposition"
MIXING = "Mixing"
CONSTANCY = "Constancy"


def _indeps(sigma: AssertionSet) -> list:
    bad = [a for a in sigma if a.kind not in (INDEP, CONST)]
    if bad:
        raise UsageError(f"independence inference got a non-independence assertion: {bad[0]}")
    return [a.as_indep() for a in sigma]


class SaturationState:
    """All independence atoms derivable from an assertion set.

    ``derived[x, y]`` (bitmasks) is true iff ``x ⊥ y`` is derivable; the
    matrix is kept symmetric.  ``why`` maps each derived ordered pair to the
    first justification found: ``(rule, premise pairs)``.
    """

    def __init__(self, universe: GroundSet, derived: np.ndarray, why: dict):
        self.universe = universe
        self.derived = derived
        self.why = why

    def entails(self, x, y) -> bool:
        g = self.universe
        return bool(self.derived[g.mask(x), g.mask(y)])

    def __contains__(self, a: Assertion) -> bool:
        a = a.as_indep()
        return a.kind == INDEP and self.entails(a.lhs, a.rhs)

    def atoms(self) -> list:
        """Derived atoms, each once with the canonically smaller side first."""
        g = self.universe
        masks = g.canonical_masks
        out = []
        for i, x in enumerate(masks):
            row = self.derived[x, masks[i:]]
            for j in np.nonzero(row)[0]:
                out.append(Assertion(INDEP, g.from_mask(int(x)), g.from_mask(int(masks[i + j]))))
        return out

    @property
    def constancy_set(self) -> frozenset:
        g = self.universe
        return frozenset(a for i, a in enumerate(g.attrs) if self.derived[1 << i, 1 << i])

    def proof(self, x, y) -> list:
        """Derivation of ``x ⊥ y`` as ``(conclusion, rule, premises)`` lines, premises first."""
        g = self.universe
        root = (g.mask(x), g.mask(y))
        if not self.derived[root]:
            return []
        lines, done = [], set()

        def visit(pair):
            key = pair if pair in self.why else (pair[1], pair[0])
            if key in done:
                return
            done.add(key)
            rule, premises = self.why[key]
            for p in premises:
                visit(p)
            lines.append((self._atom(pair), rule, tuple(self._atom(p) for p in premises)))

        visit(root)
        return lines

    def _atom(self, pair) -> Assertion:
        g = self.universe
        return Assertion(INDEP, g.from_mask(pair[0]), g.from_mask(pair[1]))


def _set(D, why, pairs, rule, premises_of):
    """Mark ``pairs`` (and mirrors) derived, recording a justification for new ones."""
    for k, (a, b) in enumerate(pairs):
        if not D[a, b]:
            D[a, b] = True
            why[(a, b)] = (rule, premises_of(k))
        if not D[b, a]:
            D[b, a] = True
            why[(b, a)] = (SYMMETRY, ((a, b),))


def _saturate(universe: GroundSet, atoms: tuple) -> SaturationState:
    n = len(universe)
    N = 1 << n
    D = np.zeros((N, N), dtype=bool)
    why: dict = {}
    for a in atoms:
        x, y = universe.mask(a.lhs), universe.mask(a.rhs)
        _set(D, why, [(x, y)], HYPOTHESIS, lambda k: ())
    _set(D, why, [(x, 0) for x in range(N)], EMPTY_SET, lambda k: ())
    everything = np.arange(N)

    while True:
        before = int(D.sum())

        # Decomposition: drop one attribute from a right side.  The matrix is
        # symmetric, so scanning rows of D finds every (c, big) with c ⊥ big.
        for i in range(n):
            bit = 1 << i
            big = everything[(everything & bit) != 0]
            fresh = D[big] & ~D[big ^ bit]
            if fresh.any():
                rows, cols = np.nonzero(fresh)
                pairs = [(int(c), int(big[r] ^ bit)) for r, c in zip(rows, cols)]
                src = [(int(c), int(big[r])) for r, c in zip(rows, cols)]
                _set(D, why, pairs, DECOMPOSITION, lambda k: (src[k],))

        # Constancy: z ⊥ z gives z ⊥ x for every x.
        for z in np.nonzero(np.diag(D))[0]:
            z = int(z)
            missing = np.nonzero(~D[z])[0]
            if len(missing):
                _set(D, why, [(z, int(x)) for x in missing], CONSTANCY, lambda k, z=z: ((z, z),))

        # Mixing: x ⊥ y and xy ⊥ z give x ⊥ yz.
        for x in range(N):
            ys = np.nonzero(D[x])[0]
            if not len(ys):
                continue
            rows = D[x | ys]
            targets = ys[:, None] | everything[None, :]
            fresh = rows & ~D[x, targets]
            if not fresh.any():
                continue
            yi, zs = np.nonzero(fresh)
            for j, z in zip(yi, zs):
                y, z = int(ys[j]), int(z)
                if not D[x, y | z]:
                    prem = ((x, y), (x | y, z))
                    _set(D, why, [(x, y | z)], MIXING, lambda k, p=prem: p)

        if int(D.sum()) == before:
            break
    return SaturationState(universe, D, why)


@lru_cache(maxsize=512)
def _cached(sigma: AssertionSet, cap: int) -> SaturationState:
    if len(sigma.universe) > cap:
        raise SizeError(f"universe has {len(sigma.universe)} attributes; saturation cap is {cap}")
    return _saturate(sigma.universe, tuple(_indeps(sigma)))


def indep_saturate(sigma: AssertionSet, cap: int = SATURATION_CAP) -> SaturationState:
    """Least set of atoms over the universe containing ``sigma`` and closed under the rules."""
    return _cached(sigma, cap)


def _goal(sigma: AssertionSet, goal: Assertion) -> Assertion:
    if goal.kind not in (INDEP, CONST):
        raise UsageError(f"goal {goal} is not an independence atom")
    goal = goal.as_indep()
    for attr in goal.attrs:
        sigma.universe.index(attr)
    return goal


def indep_entails(sigma: AssertionSet, goal: Assertion, cap: int = SATURATION_CAP) -> bool:
    goal = _goal(sigma, goal)
    return indep_saturate(sigma, cap).entails(goal.lhs, goal.rhs)


def constancy_set(sigma: AssertionSet, cap: int = SATURATION_CAP) -> frozenset:
    """Attributes ``a`` with ``{a} ⊥ {a}`` derivable."""
    return indep_saturate(sigma, cap).constancy_set


def minimize_target(sigma: AssertionSet, goal: Assertion, cap: int = SATURATION_CAP) -> Assertion:
    """Shrink a non-derivable goal to a minimal non-derivable sub-pair.

    Attributes are dropped from the left side, then the right side, in the
    universe's order, whenever the smaller pair is still not derivable.  As
    derivable atoms are closed under taking subsets, one pass per side gives a
    pair all of whose proper sub-pairs are derivable.
    """
    goal = _goal(sigma, goal)
    state = indep_saturate(sigma, cap)
    x, y = goal.lhs, goal.rhs
    if state.entails(x, y):
        raise UsageError(f"{goal.show(sigma.universe)} is derivable; nothing to minimize")
    g = sigma.universe
    for a in g.ordered(x):
        if not state.entails(x - {a}, y):
            x = x - {a}
    for b in g.ordered(y):
        if not state.entails(x, y - {b}):
            y = y - {b}
    return Assertion(INDEP, x, y)


def constancy_team(universe: GroundSet, fixed: frozenset) -> Team:
    """All 0/1 assignments over the universe that vanish on ``fixed``."""
    free = [a for a in universe if a not in fixed]
    rows = []
    for bits in product((0, 1), repeat=len(free)):
        s = dict.fromkeys(universe.attrs, 0)
        s.update(zip(free, bits))
        rows.append(s)
    return Team(universe, rows)


def parity_team(universe: GroundSet, x: frozenset, y: frozenset) -> Team:
    """0/1 assignments with equal parity on ``x`` and ``y`` and zeros elsewhere."""
    if x & y:
        raise ValueError("parity team needs disjoint sides")
    xs, ys = universe.ordered(x), universe.ordered(y)
    free = xs + ys
    rows = []
    for bits in product((0, 1), repeat=len(free)):
        if sum(bits[: len(xs)]) % 2 != sum(bits[len(xs):]) % 2:
            continue
        s = dict.fromkeys(universe.attrs, 0)
        s.update(zip(free, bits))
        rows.append(s)
    return Team(universe, rows)


def indep_countermodel(
    sigma: AssertionSet, goal: Assertion, cap: int = SATURATION_CAP, team_cap: int = TEAM_CAP
) -> Team:
    """A team whose relational rank satisfies ``sigma`` and refutes ``goal``."""
    goal = _goal(sigma, goal)
    universe = sigma.universe
    if len(universe) > team_cap:
        raise SizeError(f"universe has {len(universe)} attributes; countermodel cap is {team_cap}")
    minimal = minimize_target(sigma, goal, cap)
    x, y = minimal.lhs, minimal.rhs
    if x == y and len(x) == 1:
        return constancy_team(universe, constancy_set(sigma, cap))
    if x & y:
        raise AssertionError(f"minimal refuted pair {minimal.show(universe)} overlaps")
    return parity_team(universe, x, y)


def format_proof(lines: list, ground: Optional[GroundSet] = None) -> list:
    out = []
    for concl, rule, premises in lines:
        prem = ", ".join(p.show(ground) for p in premises)
        out.append(f"{concl.show(ground)}    [{rule}{': ' + prem if prem else ''}]")
    return out


__all__ = [
    "SaturationState",
    "indep_saturate",
    "indep_entails",
    "constancy_set",
    "minimize_target",
    "indep_countermodel",
    "constancy_team",
    "parity_team",
    "format_proof",
    "EMPTY",
]
