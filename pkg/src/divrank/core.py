"""Diversity rank functions, the atoms they induce, and exhaustive law checks.

A rank function assigns a non-negative value to every subset of a finite
ground set.  It is a *diversity rank* when

* R1: ``r(∅) = 0``
* R2: ``r(x) <= r(xy) <= r(x) + r(y)``
* R3: ``r(xy) = r(x)`` implies ``r(xyz) = r(xz)``
* R4: ``r(xyz) = r(x) + r(yz)`` implies ``r(xy) = r(x) + r(y)``

and it is submodular (SUBM) when ``r(xyz) + r(z) <= r(xz) + r(yz)``.
Dependence ``=(x, y)`` means ``r(xy) = r(x)``, constancy ``=(x)`` means
``r(x) = 0`` and independence ``x ⊥ y`` means ``r(xy) = r(x) + r(y)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .assertions import Assertion
from .ground import EMPTY, GroundSet, SubsetLike
from .values import LogCount, format_value, value_le, values_equal

DEFAULT_CAP = 12
DEFAULT_TRIPLE_CAP = 8
DEFAULT_SAMPLES = 64

AXIOMS = ("R1", "R2-left", "R2-right", "R3", "R4", "SUBM")
RANK_AXIOMS = AXIOMS[:5]
INTERACTION_LAWS = ("Constancy Equivalence", "Propagation")
MATROID_LAWS = ("M1", "M2", "M3")


class RankModel:
    """Base class for concrete rank functions.

    Subclasses set ``kind`` and implement ``_rank`` on validated subsets.
    ``tolerance`` is ``None`` for exact comparison, otherwise the absolute
    tolerance used by every equality and inequality test on this model.
    """

    kind = "abstract"

    def __init__(self, ground: GroundSet, tolerance: Optional[float] = None):
        if not isinstance(ground, GroundSet):
            ground = GroundSet(ground)
        if tolerance is not None and not tolerance > 0:
            raise ValueError("tolerance must be positive")
        self.ground = ground
        self.tolerance = tolerance
        self._cache: dict = {}

    def _rank(self, x: frozenset):
        raise NotImplementedError

    def rank(self, x: SubsetLike):
        x = self.ground.subset(x)
        try:
            return self._cache[x]
        except KeyError:
            v = self._cache[x] = self._rank(x)
            return v

    def __call__(self, x: SubsetLike):
        return self.rank(x)

    @property
    def mode(self) -> str:
        return "exact" if self.tolerance is None else f"epsilon({self.tolerance:g})"

    def table(self) -> list:
        """Rank of every subset, indexed by bitmask."""
        g = self.ground
        return [self.rank(g.from_mask(m)) for m in range(1 << len(g))]

    def __repr__(self):
        return f"<{type(self).__name__} over {list(self.ground.attrs)}>"


# -- atoms -----------------------------------------------------------------


def rank_eval(model: RankModel, x: SubsetLike):
    return model.rank(x)


def dep_holds(model: RankModel, x: SubsetLike, y: SubsetLike) -> bool:
    """``=(x, y)``: adding ``y`` to ``x`` adds no diversity."""
    x = model.ground.subset(x)
    y = model.ground.subset(y)
    return values_equal(model.rank(x | y), model.rank(x), model.tolerance)


def constancy_holds(model: RankModel, x: SubsetLike) -> bool:
    return values_equal(model.rank(x), 0, model.tolerance)


def indep_holds(model: RankModel, x: SubsetLike, y: SubsetLike) -> bool:
    """``x ⊥ y``: the ranks of ``x`` and ``y`` add up to the rank of ``xy``."""
    x = model.ground.subset(x)
    y = model.ground.subset(y)
    return values_equal(model.rank(x) + model.rank(y), model.rank(x | y), model.tolerance)


def holds(model: RankModel, a: Assertion) -> bool:
    if a.kind == "dep":
        return dep_holds(model, a.lhs, a.rhs)
    if a.kind == "const":
        return constancy_holds(model, a.lhs)
    return indep_holds(model, a.lhs, a.rhs)


# -- vectorised encoding ---------------------------------------------------

_INT_LIMIT = 1 << 60


@dataclass
class _Encoded:
    """Rank table as a numpy array on which +, = and <= stay faithful.

    Log-count tables are stored as counts with multiplication as the sum;
    rational tables are scaled to a common denominator.
    """

    vals: np.ndarray
    multiplicative: bool
    tolerance: Optional[float]

    def comb(self, a, b):
        return a * b if self.multiplicative else a + b

    def eq(self, a, b):
        if self.tolerance is None:
            return np.asarray(a == b, dtype=bool)
        return np.abs(a - b) <= self.tolerance

    def le(self, a, b):
        if self.tolerance is None:
            return np.asarray(a <= b, dtype=bool)
        return a <= b + self.tolerance


def _encode(model: RankModel) -> _Encoded:
    table = model.table()
    if model.tolerance is not None:
        return _Encoded(np.array([float(v) for v in table], dtype=float), False, model.tolerance)
    if all(isinstance(v, LogCount) for v in table):
        counts = [v.count for v in table]
        dtype = np.int64 if max(counts) ** 2 < _INT_LIMIT else object
        return _Encoded(np.array(counts, dtype=dtype), True, None)
    if any(isinstance(v, LogCount) for v in table):
        raise TypeError("a rank table cannot mix log-counts with other values")
    denom = 1
    for v in table:
        if isinstance(v, Fraction):
            denom = math.lcm(denom, v.denominator)
    scaled = [int(v * denom) for v in table]
    bound = max((abs(s) for s in scaled), default=0)
    dtype = np.int64 if 4 * bound < _INT_LIMIT else object
    return _Encoded(np.array(scaled, dtype=dtype), False, None)


# -- reports ---------------------------------------------------------------


@dataclass
class LawResult:
    name: str
    passed: bool
    witness: Optional[tuple] = None
    values: dict = field(default_factory=dict)
    sampled: bool = False

    def describe(self, ground: GroundSet) -> str:
        if self.passed:
            return f"{self.name}: PASS" + (" (sampled)" if self.sampled else "")
        names = "xyz"
        wit = " ".join(
            f"{names[i]}={ground.fmt(s, empty='()', sep=',')}" for i, s in enumerate(self.witness)
        )
        detail = ", ".join(f"{k} = {format_value(v)}" for k, v in self.values.items())
        return f"{self.name}: FAIL witness {wit}" + (f" [{detail}]" if detail else "")


@dataclass
class AxiomReport:
    ground: GroundSet
    mode: str
    exhaustive: bool
    results: dict

    def __getitem__(self, name: str) -> LawResult:
        return self.results[name]

    def passed(self, names=None) -> bool:
        names = self.results if names is None else names
        return all(self.results[n].passed for n in names)

    @property
    def is_diversity_rank(self) -> bool:
        return self.passed(RANK_AXIOMS)

    def failures(self) -> list:
        return [r for r in self.results.values() if not r.passed]

    def lines(self) -> list:
        return [r.describe(self.ground) for r in self.results.values()]

    def __str__(self):
        return "\n".join(self.lines())

    def to_json(self) -> dict:
        from .values import json_value

        g = self.ground
        out = {}
        for name, r in self.results.items():
            entry = {"passed": r.passed, "sampled": r.sampled}
            if not r.passed:
                entry["witness"] = [g.ordered(s) for s in r.witness]
                entry["values"] = {k: json_value(v) for k, v in r.values.items()}
            out[name] = entry
        return {"mode": self.mode, "exhaustive": self.exhaustive, "results": out}


def _first(viol: np.ndarray):
    if viol.any():
        return int(np.argmax(viol.ravel()))
    return None


def _triple_positions(n_subsets, sampled, samples, seed):
    if not sampled:
        return None
    rng = np.random.default_rng(seed)
    picks = rng.choice(n_subsets, size=min(samples, n_subsets), replace=False)
    return set(int(p) for p in picks)


def check_axioms(
    model: RankModel,
    cap: int = DEFAULT_CAP,
    triple_cap: int = DEFAULT_TRIPLE_CAP,
    exhaustive: bool = False,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
) -> AxiomReport:
    """Test R1, R2 (both halves), R3, R4 and SUBM over all subset tuples.

    Tuples are visited in canonical order (``x`` outermost) and the first
    violation of each law is reported as its witness.  Above ``triple_cap``
    attributes the three-subset laws are checked on ``samples`` randomly
    chosen ``x`` unless ``exhaustive`` is set; pairs are always exhaustive.
    """
    g = model.ground
    g.check_size(cap)
    enc = _encode(model)
    sampled = len(g) > triple_cap and not exhaustive
    masks = g.canonical_masks
    n_sub = len(masks)
    V = enc.vals
    rank = model.rank
    sub = g.from_mask
    tol = model.tolerance

    results = {}
    r0 = rank(EMPTY)
    if values_equal(r0, 0, tol):
        results["R1"] = LawResult("R1", True)
    else:
        results["R1"] = LawResult("R1", False, (EMPTY,), {"r(∅)": r0})

    x_sample = _triple_positions(n_sub, sampled, samples, seed)
    Y = masks
    Z = masks
    YZ = Y[:, None] | Z[None, :]
    rY = V[Y]
    rZ = V[Z]
    rYZ = V[YZ]

    pending = set(AXIOMS[1:])
    for xi in range(n_sub):
        if not pending:
            break
        x = int(masks[xi])
        rx = V[x]
        xy = x | Y
        rxy = V[xy]
        if "R2-left" in pending:
            j = _first(~enc.le(rx, rxy))
            if j is not None:
                xs, ys = sub(x), sub(int(Y[j]))
                results["R2-left"] = LawResult(
                    "R2-left", False, (xs, ys), {"r(x)": rank(xs), "r(xy)": rank(xs | ys)}
                )
                pending.discard("R2-left")
        if "R2-right" in pending:
            j = _first(~enc.le(rxy, enc.comb(rx, rY)))
            if j is not None:
                xs, ys = sub(x), sub(int(Y[j]))
                results["R2-right"] = LawResult(
                    "R2-right",
                    False,
                    (xs, ys),
                    {"r(xy)": rank(xs | ys), "r(x)+r(y)": rank(xs) + rank(ys)},
                )
                pending.discard("R2-right")
        if x_sample is not None and xi not in x_sample:
            continue
        triple_laws = pending & {"R3", "R4", "SUBM"}
        if not triple_laws:
            continue
        XYZ = xy[:, None] | Z[None, :]
        rXYZ = V[XYZ]
        rxz = V[x | Z][None, :]
        for law in sorted(triple_laws):
            if law == "R3":
                viol = enc.eq(rxy, rx)[:, None] & ~enc.eq(rXYZ, rxz)
            elif law == "R4":
                viol = enc.eq(rXYZ, enc.comb(rx, rYZ)) & ~enc.eq(rxy, enc.comb(rx, rY))[:, None]
            else:
                viol = ~enc.le(enc.comb(rXYZ, rZ[None, :]), enc.comb(rxz, rYZ))
            k = _first(viol)
            if k is None:
                continue
            yj, zj = divmod(k, n_sub)
            xs, ys, zs = sub(x), sub(int(Y[yj])), sub(int(Z[zj]))
            results[law] = LawResult(law, False, (xs, ys, zs), _triple_values(law, rank, xs, ys, zs))
            pending.discard(law)

    for law in AXIOMS[1:]:
        if law not in results:
            triple = law in ("R3", "R4", "SUBM")
            results[law] = LawResult(law, True, sampled=sampled and triple)
    ordered = {name: results[name] for name in AXIOMS}
    return AxiomReport(g, model.mode, not sampled, ordered)


def _triple_values(law, rank, x, y, z) -> dict:
    if law == "R3":
        return {
            "r(xy)": rank(x | y),
            "r(x)": rank(x),
            "r(xyz)": rank(x | y | z),
            "r(xz)": rank(x | z),
        }
    if law == "R4":
        return {
            "r(xyz)": rank(x | y | z),
            "r(x)+r(yz)": rank(x) + rank(y | z),
            "r(xy)": rank(x | y),
            "r(x)+r(y)": rank(x) + rank(y),
        }
    return {
        "r(xyz)+r(z)": rank(x | y | z) + rank(z),
        "r(xz)+r(yz)": rank(x | z) + rank(y | z),
    }


def check_interaction(model: RankModel, cap: int = DEFAULT_CAP) -> AxiomReport:
    """Check Constancy Equivalence and Propagation over all subsets.

    * ``x ⊥ x`` iff ``=(∅, x)``
    * ``x ⊥ y`` and ``=(y, z)`` imply ``x ⊥ yz``
    """
    g = model.ground
    g.check_size(cap)
    enc = _encode(model)
    masks = g.canonical_masks
    n_sub = len(masks)
    V = enc.vals
    sub = g.from_mask
    results = {}

    rX = V[masks]
    self_indep = enc.eq(enc.comb(rX, rX), rX)
    const = enc.eq(rX, V[0])
    k = _first(self_indep != const)
    if k is None:
        results["Constancy Equivalence"] = LawResult("Constancy Equivalence", True)
    else:
        xs = sub(int(masks[k]))
        results["Constancy Equivalence"] = LawResult(
            "Constancy Equivalence",
            False,
            (xs,),
            {"x ⊥ x": bool(self_indep[k]), "=(∅,x)": bool(const[k])},
        )

    Y = masks
    YZ = Y[:, None] | masks[None, :]
    rY = V[Y]
    rYZ = V[YZ]
    dep_yz = enc.eq(rYZ, rY[:, None])
    found = None
    for xi in range(n_sub):
        x = int(masks[xi])
        rx = V[x]
        ind_xy = enc.eq(enc.comb(rx, rY), V[x | Y])
        rows = np.nonzero(ind_xy)[0]
        if len(rows) == 0:
            continue
        concl = enc.eq(enc.comb(rx, rYZ[rows]), V[x | YZ[rows]])
        viol = dep_yz[rows] & ~concl
        k = _first(viol)
        if k is not None:
            yj, zj = divmod(k, n_sub)
            found = (sub(x), sub(int(Y[rows[yj]])), sub(int(masks[zj])))
            break
    if found is None:
        results["Propagation"] = LawResult("Propagation", True)
    else:
        x, y, z = found
        results["Propagation"] = LawResult(
            "Propagation",
            False,
            found,
            {"r(x)+r(yz)": model.rank(x) + model.rank(y | z), "r(xyz)": model.rank(x | y | z)},
        )
    return AxiomReport(g, model.mode, True, results)


def check_matroid(model: RankModel, cap: int = DEFAULT_CAP) -> AxiomReport:
    """Check the matroid laws, exactly.

    * M1: ``r(x)`` is an integer with ``0 <= r(x) <= |x|``
    * M2: ``r(x ∪ y) + r(x ∩ y) <= r(x) + r(y)``
    * M3: ``r(x) <= r(x ∪ {a}) <= r(x) + 1``
    """
    g = model.ground
    g.check_size(cap)
    subsets = g.subsets()
    rank = model.rank
    found = {}
    for x in subsets:
        rx = rank(x)
        if "M1" not in found and not (isinstance(rx, int) and 0 <= rx <= len(x)):
            found["M1"] = ((x,), {"r(x)": rx, "|x|": len(x)})
        if "M3" not in found:
            for a in g.attrs:
                rxa = rank(x | {a})
                if not rx <= rxa <= rx + 1:
                    found["M3"] = ((x, frozenset({a})), {"r(x)": rx, "r(xy)": rxa})
                    break
        if "M2" not in found:
            for y in subsets:
                lhs, rhs = rank(x | y) + rank(x & y), rx + rank(y)
                if not lhs <= rhs:
                    found["M2"] = ((x, y), {"r(x∪y)+r(x∩y)": lhs, "r(x)+r(y)": rhs})
                    break
    results = {}
    for law in MATROID_LAWS:
        if law in found:
            witness, values = found[law]
            results[law] = LawResult(law, False, witness, values)
        else:
            results[law] = LawResult(law, True)
    return AxiomReport(g, model.mode, True, results)


def atoms_of(model: RankModel, cap: int = DEFAULT_CAP) -> list:
    """All dependence and independence atoms true in ``model``.

    Dependence atoms come first, ordered by ``(x, y)`` canonically; each
    independence atom is listed once, with the canonically smaller side first.
    """
    g = model.ground
    g.check_size(cap)
    enc = _encode(model)
    masks = g.canonical_masks
    V = enc.vals
    sub = g.from_mask
    rY = V[masks]
    deps, indeps = [], []
    for xi, x in enumerate(masks):
        x = int(x)
        rxy = V[x | masks]
        for j in np.nonzero(enc.eq(rxy, V[x]))[0]:
            deps.append(Assertion("dep", sub(x), sub(int(masks[j]))))
        ind = enc.eq(enc.comb(V[x], rY[xi:]), rxy[xi:])
        for j in np.nonzero(ind)[0]:
            indeps.append(Assertion("indep", sub(x), sub(int(masks[xi + j]))))
    return deps + indeps


def dep_atoms(model: RankModel, cap: int = DEFAULT_CAP) -> frozenset:
    return frozenset(a for a in atoms_of(model, cap) if a.kind == "dep")
