"""Random model instances and brute-force oracles shared by the tests."""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction

from divrank import (
    ConstantRank,
    CoverageRank,
    Distribution,
    EntropyRank,
    GroundSet,
    LinearRank,
    RelationalRank,
    SingularRank,
    Team,
    TwoValuedRank,
    UniformRank,
    VectorFamily,
)


def names(n: int) -> list:
    return [chr(ord("a") + i) for i in range(n)]


# -- generators ------------------------------------------------------------


def random_team(rng: random.Random, n_vars=None, max_rows=8, values=3) -> Team:
    n = n_vars or rng.randint(1, 5)
    rows = [[rng.randrange(values) for _ in range(n)] for _ in range(rng.randint(1, max_rows))]
    return Team(names(n), rows)


def random_distribution(rng: random.Random, n_vars=None, values=3) -> Distribution:
    """Either a product of random marginals (so independence shows up) or a random joint."""
    n = n_vars or rng.randint(1, 4)
    alphabets = [list(range(rng.randint(1, values))) for _ in range(n)]
    if rng.random() < 0.4:
        margs = []
        for alpha in alphabets:
            w = [rng.randint(1, 4) for _ in alpha]
            margs.append([Fraction(x, sum(w)) for x in w])
        outcomes = []
        for key in itertools.product(*[range(len(a)) for a in alphabets]):
            p = math.prod(margs[i][k] for i, k in enumerate(key))
            outcomes.append((key, p))
        return Distribution(names(n), outcomes)
    support = list(itertools.product(*alphabets))
    rng.shuffle(support)
    support = support[: rng.randint(1, len(support))]
    w = [rng.randint(1, 5) for _ in support]
    return Distribution(names(n), [(k, Fraction(x, sum(w))) for k, x in zip(support, w)])


def random_vectors(rng: random.Random, n_vars=None, dim=None) -> VectorFamily:
    n = n_vars or rng.randint(1, 6)
    d = dim or rng.randint(1, 4)
    vecs = []
    for _ in range(n):
        roll = rng.random()
        if roll < 0.15:
            vecs.append([0] * d)
        elif roll < 0.35 and vecs:
            base = rng.choice(vecs)
            c = Fraction(rng.choice([-2, -1, 1, 2, 3]), rng.choice([1, 2, 3]))
            vecs.append([c * v for v in base])
        else:
            vecs.append([Fraction(rng.randint(-2, 2), rng.choice([1, 1, 2])) for _ in range(d)])
    return VectorFamily(names(n), vecs)


def random_coverage(rng: random.Random, n_vars=None) -> CoverageRank:
    n = n_vars or rng.randint(1, 6)
    sets = {a: {rng.randrange(8) for _ in range(rng.randint(0, 4))} for a in names(n)}
    return CoverageRank(sets)


def random_simple(rng: random.Random, kind: str, n_vars=None):
    n = n_vars or rng.randint(1, 6)
    g = names(n)
    if kind == "constant":
        return ConstantRank(g, Fraction(rng.randint(0, 20), rng.randint(1, 7)))
    if kind == "singular":
        return SingularRank(g, rng.choice(g))
    if kind == "two_valued":
        return TwoValuedRank(g, [a for a in g if rng.random() < 0.5])
    if kind == "uniform":
        return UniformRank(g)
    if kind == "coverage":
        return random_coverage(rng, n)
    if kind == "entropy":
        return EntropyRank(random_distribution(rng, n, values=3 if n <= 4 else 2))
    if kind == "linear":
        return LinearRank(random_vectors(rng, n))
    if kind == "relational":
        return RelationalRank(random_team(rng, min(n, 5)))
    raise ValueError(kind)


# -- block-structured models (for soundness sampling) -----------------------


def _blocks(rng: random.Random, attrs: list) -> list:
    """Random set partition, all singletons with probability 1/3."""
    if rng.random() < 1 / 3:
        return [[a] for a in attrs]
    blocks: list = []
    for a in attrs:
        if blocks and rng.random() < 0.5:
            rng.choice(blocks).append(a)
        else:
            blocks.append([a])
    return blocks


def block_model(rng: random.Random, n: int):
    """A model whose variables split into constant ones and independent blocks.

    The constant set is uniform over all subsets, so every pattern of
    constancy atoms is well represented.
    """
    g = names(n)
    const = [a for a in g if rng.random() < 0.5]
    free = [a for a in g if a not in const]
    blocks = _blocks(rng, free)
    kind = rng.choice(["team", "team", "parity", "dist", "linear", "coverage"])

    if kind in ("team", "parity"):
        parts = []
        for b in blocks:
            if kind == "parity" and len(b) >= 2:
                rows = [r for r in itertools.product((0, 1), repeat=len(b)) if sum(r) % 2 == 0]
            else:
                rows = {tuple(rng.randrange(3) for _ in b) for _ in range(rng.randint(1, 5))}
            parts.append((b, list(rows)))
        rows = []
        for combo in itertools.product(*[p[1] for p in parts]):
            s = dict.fromkeys(const, 0)
            for (b, _), vals in zip(parts, combo):
                s.update(zip(b, vals))
            rows.append(s)
        return RelationalRank(Team(g, rows))

    if kind == "dist":
        parts = []
        for b in blocks:
            support = list(itertools.product(range(2), repeat=len(b)))
            support = rng.sample(support, rng.randint(1, len(support)))
            w = [rng.randint(1, 4) for _ in support]
            parts.append((b, [(k, Fraction(x, sum(w))) for k, x in zip(support, w)]))
        outcomes = {}
        for combo in itertools.product(*[p[1] for p in parts]):
            s = dict.fromkeys(const, 0)
            p = Fraction(1)
            for (b, _), (vals, q) in zip(parts, combo):
                s.update(zip(b, vals))
                p *= q
            outcomes[tuple(s[a] for a in g)] = p
        return EntropyRank(Distribution(g, list(outcomes.items())))

    if kind == "linear":
        dims = [rng.randint(1, len(b)) for b in blocks]
        total = sum(dims) or 1
        vecs = dict.fromkeys(g)
        offset = 0
        for b, d in zip(blocks, dims):
            for a in b:
                v = [0] * total
                for k in range(d):
                    v[offset + k] = rng.randint(-1, 2)
                if not any(v):
                    v[offset] = 1
                vecs[a] = v
            offset += d
        for a in const:
            vecs[a] = [0] * total
        return LinearRank(VectorFamily(g, [vecs[a] for a in g]))

    sets = dict.fromkeys(const, set())
    for k, b in enumerate(blocks):
        for a in b:
            sets[a] = {(k, rng.randrange(3)) for _ in range(rng.randint(1, 3))}
    return CoverageRank(sets, g)


# -- brute-force oracles -----------------------------------------------------


def team_fd(team: Team, x, y) -> bool:
    """Any two rows agreeing on x agree on y."""
    g = team.variables
    xi = [g.index(a) for a in x]
    yi = [g.index(a) for a in y]
    for s, t in itertools.combinations(team.rows, 2):
        if all(s[i] == t[i] for i in xi) and not all(s[i] == t[i] for i in yi):
            return False
    return True


def team_totality(team: Team, x, y) -> bool:
    """For all rows s, s' some row agrees with s on x and with s' on y."""
    g = team.variables
    xi = [g.index(a) for a in x]
    yi = [g.index(a) for a in y]
    rows = set(team.rows)
    for s in rows:
        for t in rows:
            if not any(
                all(u[i] == s[i] for i in xi) and all(u[i] == t[i] for i in yi) for u in rows
            ):
                return False
    return True


def direct_entropy(dist: Distribution, x) -> float:
    g = dist.variables
    pos = [g.index(a) for a in g.ordered(g.subset(x))]
    marg: dict = {}
    for key, p in dist.outcomes.items():
        k = tuple(key[i] for i in pos)
        marg[k] = marg.get(k, 0) + p
    return -sum(float(p) * math.log2(float(p)) for p in marg.values() if p < 1)


def team_counts(team: Team) -> list:
    """Distinct-row counts indexed by subset bitmask."""
    n = len(team.variables)
    out = []
    for m in range(1 << n):
        pos = [i for i in range(n) if m >> i & 1]
        out.append(len({tuple(r[i] for i in pos) for r in team.rows}))
    return out


__all__ = [
    "GroundSet",
    "names",
    "random_team",
    "random_distribution",
    "random_vectors",
    "random_coverage",
    "random_simple",
    "block_model",
    "team_fd",
    "team_totality",
    "direct_entropy",
    "team_counts",
]
