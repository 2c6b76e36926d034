import random

import pytest

from divrank import (
    Assertion,
    AssertionSet,
    GroundSet,
    RelationalRank,
    UsageError,
    constancy_set,
    indep_countermodel,
    indep_entails,
    indep_holds,
    indep_saturate,
    minimize_target,
)
from divrank.ground import SizeError
from divrank.independence import format_proof, parity_team

from randmodels import block_model, team_counts

I = Assertion.indep


def sigma(*atoms, universe="abc"):
    return AssertionSet(GroundSet(universe), atoms)


def naive_saturation(s: AssertionSet) -> set:
    """Apply the five rules as sets of pairs until nothing changes."""
    subs = s.universe.subsets()
    derived = {(a.lhs, a.rhs) for a in (b.as_indep() for b in s)}
    while True:
        new = set(derived)
        new |= {(x, frozenset()) for x in subs}
        for x, y in derived:
            new.add((y, x))
            for y2 in subs:
                if y2 <= y:
                    new.add((x, y2))
            if x == y:
                new |= {(x, z) for z in subs}
            for x2, z in derived:
                if x2 == x | y:
                    new.add((x, y | z))
        if new == derived:
            return derived
        derived = new


def test_saturation_examples():
    assert indep_entails(sigma(I("a", "b"), I("a,b", "c")), I("a", "b,c"))
    state = indep_saturate(sigma())
    assert set(state.atoms()) == {I(x, "") for x in GroundSet("abc").subsets()}
    assert indep_entails(sigma(I("c", "c"), I("a", "b")), I("a,c", "b"))


def test_entailment_examples():
    assert indep_entails(sigma(), I("a,b", ""))
    assert indep_entails(sigma(I("a", "b,c")), I("a", "c"))
    assert not indep_entails(sigma(I("a", "b")), I("a", "b,c"))
    assert indep_entails(sigma(Assertion.const("a")), I("a", "b,c"))


def test_constancy_set_examples():
    assert constancy_set(sigma(I("a", "a"))) == {"a"}
    assert constancy_set(sigma(I("a,b", "a,b"))) == {"a", "b"}
    assert constancy_set(sigma(I("a", "b"))) == frozenset()


def test_minimize_examples():
    m = minimize_target(sigma(), I("a,b", "c"))
    assert len(m.lhs) == 1 and len(m.rhs) == 1
    assert minimize_target(sigma(), I("a", "b")) == I("a", "b")
    assert minimize_target(sigma(I("a", "c")), I("a,b", "c")) == I("b", "c")


def test_minimize_refuses_entailed_goal():
    with pytest.raises(UsageError):
        minimize_target(sigma(I("a", "b")), I("b", "a"))


def test_countermodel_examples():
    team = indep_countermodel(sigma(universe="ab"), I("a", "b"))
    assert sorted(team.rows) == [(0, 0), (1, 1)]
    assert team.count("a") * team.count("b") == 4 != team.count("a,b")

    team = indep_countermodel(sigma(universe="ab"), I("a", "a"))
    assert len(team) == 4 and team.count("a") == 2

    team = indep_countermodel(sigma(I("c", "c")), I("a", "b"))
    assert team.project("c") == {(0,)}
    assert not indep_holds(RelationalRank(team), "a", "b")


def test_parity_team_has_no_mixed_row():
    g = GroundSet("abcd")
    team = parity_team(g, frozenset("ab"), frozenset("cd"))
    rows = set(team.rows)
    # ones on {a, c} restricted to x, zeros on y: parity 1 vs 0
    assert not any(r[0] == 1 and r[1] == 0 and r[2] == 0 and r[3] == 0 for r in rows)
    assert not indep_holds(RelationalRank(team), "a,b", "c,d")


def test_mixed_or_dependence_input_is_rejected():
    with pytest.raises(UsageError):
        indep_saturate(sigma(Assertion.dep("a", "b")))


def test_saturation_cap():
    with pytest.raises(SizeError):
        indep_saturate(AssertionSet([f"v{i}" for i in range(9)], []))


def random_sigma(rng, g, k):
    subs = g.subsets()
    return AssertionSet(g, [I(rng.choice(subs), rng.choice(subs)) for _ in range(k)])


def test_saturation_matches_naive_rule_application():
    rng = random.Random(1)
    for n in (1, 2, 3):
        g = GroundSet("abc"[:n])
        for _ in range(60):
            s = random_sigma(rng, g, rng.randint(0, 3))
            state = indep_saturate(s)
            naive = naive_saturation(s)
            for x in g.subsets():
                for y in g.subsets():
                    assert state.entails(x, y) == ((x, y) in naive)


def test_saturation_invariants():
    rng = random.Random(2)
    g = GroundSet("abcd")
    for _ in range(80):
        s = random_sigma(rng, g, rng.randint(0, 4))
        state = indep_saturate(s)
        V = state.constancy_set
        assert (state.derived == state.derived.T).all()
        for a in state.atoms():
            assert a.lhs & a.rhs <= V


def test_proofs_replay():
    rng = random.Random(3)
    g = GroundSet("abcd")
    for _ in range(60):
        s = random_sigma(rng, g, 3)
        state = indep_saturate(s)
        hyps = {a.as_indep() for a in s}
        for goal in state.atoms()[::7]:
            lines = state.proof(goal.lhs, goal.rhs)
            known = []
            for concl, rule, premises in lines:
                for p in premises:
                    assert any(p.lhs == k.lhs and p.rhs == k.rhs for k in known)
                x, y = concl.lhs, concl.rhs
                if rule == "Hypothesis":
                    assert concl in hyps
                elif rule == "Empty Set":
                    assert not y
                elif rule == "Symmetry":
                    (p,) = premises
                    assert (p.lhs, p.rhs) == (y, x)
                elif rule == "Decomposition":
                    (p,) = premises
                    assert p.lhs == x and y <= p.rhs
                elif rule == "Constancy":
                    (p,) = premises
                    assert p.lhs == p.rhs == x
                elif rule == "Mixing":
                    p, q = premises
                    assert p.lhs == x and q.lhs == x | p.rhs and y == p.rhs | q.rhs
                else:
                    raise AssertionError(rule)
                known.append(concl)
            assert (known[-1].lhs, known[-1].rhs) == (goal.lhs, goal.rhs)
            assert format_proof(lines, g)


def test_completeness_on_random_five_attribute_sets():
    rng = random.Random(4)
    g = GroundSet("abcde")
    subs = g.subsets()
    for _ in range(40):
        s = random_sigma(rng, g, rng.randint(0, 4))
        state = indep_saturate(s)
        for _ in range(40):
            goal = I(rng.choice(subs), rng.choice(subs))
            if state.entails(goal.lhs, goal.rhs):
                continue
            m = minimize_target(s, goal)
            assert m.lhs <= goal.lhs and m.rhs <= goal.rhs
            assert not (m.lhs & m.rhs) or (m.lhs == m.rhs and len(m.lhs) == 1)
            counts = team_counts(indep_countermodel(s, goal))
            ok = lambda x, y: counts[g.mask(x) | g.mask(y)] == counts[g.mask(x)] * counts[g.mask(y)]
            assert all(ok(a.lhs, a.rhs) for a in s)
            assert not ok(goal.lhs, goal.rhs)


def test_rules_are_sound_in_random_models():
    rng = random.Random(5)
    g = GroundSet("abc")
    subs = g.subsets()
    for _ in range(120):
        m = block_model(rng, 3)
        ind = {(x, y) for x in subs for y in subs if indep_holds(m, x, y)}
        for x, y in ind:
            assert (y, x) in ind
            for y2 in subs:
                if y2 <= y:
                    assert (x, y2) in ind
            if x == y:
                assert all((x, z) in ind for z in subs)
            for z in subs:
                if (x | y, z) in ind:
                    assert (x, y | z) in ind
