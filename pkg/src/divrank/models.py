"""Concrete rank functions.

``constant``, ``singular``, ``two_valued``, ``uniform``, ``coverage``,
``entropy``, ``relational``, ``linear`` and ``explicit`` tables.  All of them
except the relational rank are submodular; the relational rank (log of the
number of distinct projected rows of a team) satisfies R1-R4 but can fail
SUBM.
"""

from __future__ import annotations

import math
from collections import defaultdict
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .core import DEFAULT_CAP, RankModel, check_axioms
from .ground import EMPTY, DivrankError, GroundSet, SubsetLike, parse_subset
from .values import DEFAULT_TOLERANCE, LogCount, is_exact, to_exact

SIMPLE_KINDS = ("constant", "singular", "two_valued", "uniform", "coverage")


class ConstructionError(DivrankError, ValueError):
    """A model payload is malformed or violates the rank axioms."""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


def _ground(g) -> GroundSet:
    return g if isinstance(g, GroundSet) else GroundSet(g)


def _number(v):
    if isinstance(v, float):
        return v
    return to_exact(v)


# -- simple ranks ----------------------------------------------------------


class ConstantRank(RankModel):
    """``r(∅) = 0`` and ``r(x) = c`` for every non-empty ``x``."""

    kind = "constant"

    def __init__(self, ground, c=0, tolerance: Optional[float] = None):
        c = _number(c)
        if c < 0:
            raise ConstructionError(f"constant rank must be non-negative, got {c}")
        if isinstance(c, float) and tolerance is None:
            tolerance = DEFAULT_TOLERANCE
        super().__init__(_ground(ground), tolerance)
        self.c = c

    def _rank(self, x):
        return self.c if x else 0


class SingularRank(RankModel):
    """Rank 1 exactly on the sets containing the chosen attribute."""

    kind = "singular"

    def __init__(self, ground, a0: str):
        super().__init__(_ground(ground))
        self.ground.index(a0)
        self.a0 = a0

    def _rank(self, x):
        return 1 if self.a0 in x else 0


class TwoValuedRank(RankModel):
    """Singletons rank 0 or 1; a set ranks as the max over its members."""

    kind = "two_valued"

    def __init__(self, ground, ones: SubsetLike = ()):
        super().__init__(_ground(ground))
        self.ones = self.ground.subset(ones)

    def _rank(self, x):
        return 1 if x & self.ones else 0


class UniformRank(RankModel):
    """Cardinality."""

    kind = "uniform"

    def __init__(self, ground):
        super().__init__(_ground(ground))

    def _rank(self, x):
        return len(x)


class CoverageRank(RankModel):
    """Size of the union of the data sets attached to the members of ``x``."""

    kind = "coverage"

    def __init__(self, sets: Mapping[str, Iterable], ground=None):
        if ground is None:
            ground = list(sets)
        super().__init__(_ground(ground))
        missing = [a for a in self.ground if a not in sets]
        extra = [a for a in sets if a not in self.ground]
        if missing or extra:
            raise ConstructionError(f"coverage sets must match ground set (missing {missing}, extra {extra})")
        self.sets = {a: frozenset(sets[a]) for a in self.ground}

    @property
    def universe(self) -> frozenset:
        return frozenset().union(*self.sets.values())

    def _rank(self, x):
        return len(frozenset().union(*(self.sets[a] for a in x)))


# -- relational ------------------------------------------------------------


class Team:
    """A non-empty set of assignments from variables to values.

    ``rows`` may be mappings or sequences aligned with ``variables``; values
    are opaque hashable tokens compared by equality.  Repeated rows collapse.
    """

    def __init__(self, variables, rows: Iterable):
        self.variables = _ground(variables)
        names = self.variables.attrs
        seen = {}
        for row in rows:
            if isinstance(row, Mapping):
                missing = [v for v in names if v not in row]
                if missing:
                    raise ConstructionError(f"row {dict(row)} does not assign {missing}")
                unknown = [v for v in row if v not in self.variables]
                if unknown:
                    raise ConstructionError(f"row {dict(row)} assigns unknown variables {unknown}")
                t = tuple(row[v] for v in names)
            else:
                t = tuple(row)
                if len(t) != len(names):
                    raise ConstructionError(f"row {t} has {len(t)} values for {len(names)} variables")
            seen.setdefault(t, None)
        if not seen:
            raise ConstructionError("a team needs at least one row")
        self.rows = tuple(seen)
        self._counts: dict = {}

    def __len__(self):
        return len(self.rows)

    def __repr__(self):
        return f"Team({list(self.variables.attrs)}, {len(self.rows)} rows)"

    def __eq__(self, other):
        if not isinstance(other, Team):
            return NotImplemented
        return self.variables == other.variables and set(self.rows) == set(other.rows)

    def __hash__(self):
        return hash((self.variables, frozenset(self.rows)))

    def _positions(self, x: frozenset) -> list:
        return sorted(self.variables.index(a) for a in x)

    def project(self, x: SubsetLike) -> set:
        pos = self._positions(self.variables.subset(x))
        return {tuple(r[i] for i in pos) for r in self.rows}

    def count(self, x: SubsetLike) -> int:
        """Number of distinct values ``x`` takes in the team; 1 for ``∅``."""
        x = self.variables.subset(x)
        try:
            return self._counts[x]
        except KeyError:
            c = self._counts[x] = len(self.project(x))
            return c

    def as_dicts(self) -> list:
        names = self.variables.attrs
        return [dict(zip(names, r)) for r in self.rows]


def relational_rank(team: Team, x: SubsetLike) -> LogCount:
    return LogCount(team.count(x))


class RelationalRank(RankModel):
    kind = "relational"

    def __init__(self, team: Team):
        super().__init__(team.variables)
        self.team = team

    def _rank(self, x):
        return LogCount(self.team.count(x))


# -- entropy ---------------------------------------------------------------


class Distribution:
    """A finite joint distribution with exact rational probabilities.

    Each variable may take values from its own alphabet.
    """

    def __init__(self, variables, outcomes):
        self.variables = _ground(variables)
        names = self.variables.attrs
        if isinstance(outcomes, Mapping):
            outcomes = outcomes.items()
        table = {}
        for assignment, p in outcomes:
            if isinstance(assignment, Mapping):
                if set(assignment) != set(names):
                    raise ConstructionError(
                        f"assignment {dict(assignment)} must cover exactly {list(names)}"
                    )
                key = tuple(assignment[v] for v in names)
            else:
                key = tuple(assignment)
                if len(key) != len(names):
                    raise ConstructionError(f"assignment {key} has wrong length")
            try:
                p = to_exact(p)
            except (TypeError, ValueError, ZeroDivisionError):
                raise ConstructionError(f"probability {p!r} is not an exact rational") from None
            if p <= 0:
                raise ConstructionError(f"probability of {key} must be positive, got {p}")
            if key in table:
                raise ConstructionError(f"duplicate outcome {key}")
            table[key] = Fraction(p)
        if sum(table.values()) != 1:
            raise ConstructionError(f"probabilities sum to {sum(table.values())}, not 1")
        self.outcomes = table
        self._marginals: dict = {}

    def __repr__(self):
        return f"Distribution({list(self.variables.attrs)}, {len(self.outcomes)} outcomes)"

    def marginal(self, x: SubsetLike) -> dict:
        x = self.variables.subset(x)
        try:
            return self._marginals[x]
        except KeyError:
            pass
        pos = sorted(self.variables.index(a) for a in x)
        out = defaultdict(Fraction)
        for key, p in self.outcomes.items():
            out[tuple(key[i] for i in pos)] += p
        m = self._marginals[x] = dict(out)
        return m


def entropy_rank(dist: Distribution, x: SubsetLike) -> float:
    """Joint entropy of ``x`` in bits."""
    h = 0.0
    for p in dist.marginal(x).values():
        if p != 1:
            h -= float(p) * math.log2(p)
    return h + 0.0


def entropy_indep_exact(dist: Distribution, x: SubsetLike, y: SubsetLike) -> bool:
    """``P(x=u, y=v) = P(x=u) P(y=v)`` for every pair of values, in exact arithmetic."""
    g = dist.variables
    x = g.subset(x)
    y = g.subset(y)
    px = dist.marginal(x)
    py = dist.marginal(y)
    xpos = sorted(g.index(a) for a in x)
    ypos = sorted(g.index(a) for a in y)
    joint = defaultdict(Fraction)
    for key, p in dist.outcomes.items():
        joint[(tuple(key[i] for i in xpos), tuple(key[i] for i in ypos))] += p
    return all(joint.get((u, v), 0) == pu * pv for u, pu in px.items() for v, pv in py.items())


class EntropyRank(RankModel):
    kind = "entropy"

    def __init__(self, dist: Distribution, tolerance: float = DEFAULT_TOLERANCE):
        super().__init__(dist.variables, tolerance)
        self.dist = dist

    def _rank(self, x):
        return entropy_rank(self.dist, x)


# -- linear ----------------------------------------------------------------


def matrix_rank(rows: Sequence[Sequence]) -> int:
    """Rank over the rationals by Gaussian elimination on exact fractions."""
    m = [[Fraction(v) for v in row] for row in rows]
    if not m:
        return 0
    n_cols = len(m[0])
    rank = 0
    for col in range(n_cols):
        pivot = next((r for r in range(rank, len(m)) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        pr = m[rank]
        for r in range(rank + 1, len(m)):
            f = m[r][col]
            if f:
                f /= pr[col]
                m[r] = [a - f * b for a, b in zip(m[r], pr)]
        rank += 1
        if rank == len(m):
            break
    return rank


class VectorFamily:
    """One rational vector per label, all of the same dimension."""

    def __init__(self, labels, vectors):
        self.labels = _ground(labels)
        if isinstance(vectors, Mapping):
            missing = [a for a in self.labels if a not in vectors]
            if missing:
                raise ConstructionError(f"no vector for {missing}")
            vectors = [vectors[a] for a in self.labels]
        vectors = [tuple(Fraction(to_exact(v)) for v in vec) for vec in vectors]
        if len(vectors) != len(self.labels):
            raise ConstructionError(f"{len(vectors)} vectors for {len(self.labels)} labels")
        dims = {len(v) for v in vectors}
        if len(dims) > 1:
            raise ConstructionError(f"vectors have differing dimensions {sorted(dims)}")
        self.dimension = dims.pop() if dims else 0
        self.vectors = dict(zip(self.labels.attrs, vectors))


def linear_rank(fam: VectorFamily, x: SubsetLike) -> int:
    """Dimension of the span of the vectors labelled by ``x``."""
    x = fam.labels.subset(x)
    return matrix_rank([fam.vectors[a] for a in fam.labels.ordered(x)])


class LinearRank(RankModel):
    kind = "linear"

    def __init__(self, fam: VectorFamily):
        super().__init__(fam.labels)
        self.family = fam

    def _rank(self, x):
        return linear_rank(self.family, x)


# -- explicit tables -------------------------------------------------------


class ExplicitRankTable(RankModel):
    """A rank given subset by subset.

    The constructor only checks that the table is total and non-negative;
    :func:`explicit_rank_build` also enforces R1-R4.  Tables holding any
    float, or built with an explicit tolerance, compare with that tolerance.
    """

    kind = "explicit"

    def __init__(self, ground, entries: Mapping, tolerance: Optional[float] = None):
        ground = _ground(ground)
        table = {}
        for k, v in entries.items():
            x = ground.subset(k)
            if x in table:
                raise ConstructionError(f"subset {ground.fmt(x)} given twice")
            try:
                v = _number(v)
            except (TypeError, ValueError, ZeroDivisionError):
                raise ConstructionError(f"rank of {ground.fmt(x)} is not a number: {v!r}") from None
            if v < 0:
                raise ConstructionError(f"rank of {ground.fmt(x)} is negative: {v}")
            table[x] = v
        missing = [x for x in ground.subsets() if x not in table]
        if missing:
            shown = ", ".join(ground.fmt(x, empty="()", sep=",") for x in missing[:5])
            raise ConstructionError(f"table has no entry for {len(missing)} subsets: {shown}")
        if tolerance is None and not all(is_exact(v) for v in table.values()):
            tolerance = DEFAULT_TOLERANCE
        if tolerance is not None:
            table = {k: float(v) for k, v in table.items()}
        super().__init__(ground, tolerance)
        self.entries = table

    def _rank(self, x):
        return self.entries[x]


def explicit_rank_build(ground, entries: Mapping, tolerance: Optional[float] = None, cap: int = DEFAULT_CAP):
    """Build a table and reject it unless R1-R4 hold; SUBM is not required."""
    table = ExplicitRankTable(ground, entries, tolerance)
    report = check_axioms(table, cap=cap, triple_cap=cap, exhaustive=True)
    if not report.is_diversity_rank:
        bad = "; ".join(r.describe(table.ground) for r in report.failures() if r.name != "SUBM")
        raise ConstructionError(f"not a diversity rank: {bad}", report)
    return table


# -- dispatch --------------------------------------------------------------


def make_simple(kind: str, ground, params=None) -> RankModel:
    """Build one of the parameter-only models.

    ``params`` is the constant for ``constant``, the distinguished attribute
    for ``singular``, the rank-1 attributes for ``two_valued``, nothing for
    ``uniform`` and a label-to-set mapping for ``coverage``.
    """
    ground = _ground(ground)
    try:
        if kind == "constant":
            return ConstantRank(ground, 0 if params is None else params)
        if kind == "singular":
            if params is None:
                raise ConstructionError("singular rank needs the distinguished attribute")
            return SingularRank(ground, params)
        if kind == "two_valued":
            return TwoValuedRank(ground, parse_subset(params))
        if kind == "uniform":
            return UniformRank(ground)
        if kind == "coverage":
            if not isinstance(params, Mapping):
                raise ConstructionError("coverage rank needs a mapping from labels to sets")
            return CoverageRank(params, ground)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, DivrankError):
            raise
        raise ConstructionError(f"malformed parameters for {kind}: {exc}") from None
    raise ConstructionError(f"unknown simple rank kind {kind!r}; expected one of {SIMPLE_KINDS}")


def simple_rank(kind: str, ground, params, x: SubsetLike):
    return make_simple(kind, ground, params).rank(x)


__all__ = [
    "EMPTY",
    "SIMPLE_KINDS",
    "ConstructionError",
    "ConstantRank",
    "SingularRank",
    "TwoValuedRank",
    "UniformRank",
    "CoverageRank",
    "Team",
    "RelationalRank",
    "relational_rank",
    "Distribution",
    "EntropyRank",
    "entropy_rank",
    "entropy_indep_exact",
    "VectorFamily",
    "LinearRank",
    "linear_rank",
    "matrix_rank",
    "ExplicitRankTable",
    "explicit_rank_build",
    "make_simple",
    "simple_rank",
]
