"""Entailment of dependence atoms under Reflexivity, Augmentation, Transitivity.

Entailment is decided by attribute closure: ``Σ ⊢ =(x, y)`` iff ``y`` lies in
the closure of ``x``, because a dependence is derivable exactly when each
single attribute of its right side is.  Refuted goals come with the two
countermodels used for completeness: a two-valued rank and a two-row team.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .assertions import CONST, DEP, Assertion, AssertionSet, UsageError
from .ground import GroundSet, SizeError, SubsetLike
from .models import Team, TwoValuedRank

CLOSE_CAP = 10


def _deps(sigma: AssertionSet) -> list:
    bad = [a for a in sigma if a.kind not in (DEP, CONST)]
    if bad:
        raise UsageError(f"dependence inference got a non-dependence assertion: {bad[0]}")
    return [a.as_dep() for a in sigma]


def attribute_closure(sigma: AssertionSet, x: SubsetLike) -> frozenset:
    """Least superset of ``x`` closed under every ``=(z, w)`` in ``sigma``."""
    deps = _deps(sigma)
    closure = set(sigma.universe.subset(x))
    changed = True
    while changed:
        changed = False
        for a in deps:
            if a.lhs <= closure and not a.rhs <= closure:
                closure |= a.rhs
                changed = True
    return frozenset(closure)


def dep_entails(sigma: AssertionSet, goal: Assertion) -> bool:
    goal = _goal(sigma, goal)
    return goal.rhs <= attribute_closure(sigma, goal.lhs)


def _goal(sigma: AssertionSet, goal: Assertion) -> Assertion:
    if goal.kind not in (DEP, CONST):
        raise UsageError(f"goal {goal} is not a dependence atom")
    goal = goal.as_dep()
    for attr in goal.attrs:
        sigma.universe.index(attr)
    return goal


@dataclass(frozen=True)
class Step:
    conclusion: Assertion
    rule: str
    premises: tuple = ()

    def show(self, ground: Optional[GroundSet] = None) -> str:
        prem = ", ".join(p.show(ground) for p in self.premises)
        return f"{self.conclusion.show(ground)}    [{self.rule}{': ' + prem if prem else ''}]"


def dep_derivation(sigma: AssertionSet, goal: Assertion) -> list:
    """Replay the closure computation as a list of rule applications.

    Returns an empty list when the goal is not entailed.
    """
    goal = _goal(sigma, goal)
    deps = _deps(sigma)
    x = goal.lhs
    current = x
    steps = [Step(Assertion.dep(x, x), "Reflexivity")]
    changed = True
    while changed and not goal.rhs <= current:
        changed = False
        for a in deps:
            if a.lhs <= current and not a.rhs <= current:
                grown = current | a.rhs
                steps.append(Step(a, "Hypothesis"))
                # =(z, w) augmented by the current set gives =(current, current ∪ w) since z ⊆ current
                aug = Assertion.dep(current, grown)
                steps.append(Step(aug, "Augmentation", (a,)))
                if current != x:
                    steps.append(
                        Step(Assertion.dep(x, grown), "Transitivity", (Assertion.dep(x, current), aug))
                    )
                current = grown
                changed = True
                if goal.rhs <= current:
                    break
    if not goal.rhs <= current:
        return []
    if goal.rhs != current:
        refl = Assertion.dep(current, goal.rhs)
        steps.append(Step(refl, "Reflexivity"))
        steps.append(Step(goal, "Transitivity", (Assertion.dep(x, current), refl)))
    return steps


def dep_countermodel(sigma: AssertionSet, goal: Assertion):
    """Two-valued rank and two-row team satisfying ``sigma`` but not ``goal``.

    ``V`` is the closure of the goal's left side.  The rank gives singletons
    in ``V`` rank 0 and all others rank 1; the team has the all-zero row and
    the row that is 1 exactly outside ``V``.
    """
    goal = _goal(sigma, goal)
    closure = attribute_closure(sigma, goal.lhs)
    if goal.rhs <= closure:
        raise UsageError(f"{goal.show(sigma.universe)} is derivable; no countermodel exists")
    universe = sigma.universe
    outside = universe.full - closure
    rank = TwoValuedRank(universe, outside)
    team = Team(universe, [[0] * len(universe), [0 if a in closure else 1 for a in universe]])
    return rank, team


def armstrong_close(sigma: AssertionSet, cap: int = CLOSE_CAP) -> AssertionSet:
    """Every ``=(x, y)`` over the universe with ``y`` inside the closure of ``x``."""
    universe = sigma.universe
    if len(universe) > cap:
        raise SizeError(f"universe has {len(universe)} attributes; closure cap is {cap}")
    _deps(sigma)
    subsets = universe.subsets()
    out = []
    for x in subsets:
        cl = attribute_closure(sigma, x)
        out.extend(Assertion(DEP, x, y) for y in subsets if y <= cl)
    return AssertionSet(universe, out)
