"""Reading and writing models and assertion sets.

* Team: CSV, header row of variable names, one row per assignment.  Cell
  text is kept verbatim; repeated rows collapse.
* Distribution: JSON ``{"variables": [...], "outcomes": [{"assignment":
  {...} or [...], "p": "1/4"}, ...]}``.
* Vectors: JSON ``{"labels": [...], "vectors": [[1, "1/2"], ...]}`` (or
  ``vectors`` as a label-keyed object).
* Explicit table: JSON ``{"ground": [...], "ranks": {"": 0, "a": 1.5, "a,b":
  "21/10"}}``; a bare object of ranks is accepted too.  JSON decimals are
  read as exact rationals; ``"tolerance"`` switches to tolerance comparison.
* Assertions: see :mod:`divrank.assertions`.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Union

from .assertions import AssertionSet, ParseError, parse_assertions
from .ground import GroundSet, parse_subset
from .models import ConstructionError, Distribution, ExplicitRankTable, Team, VectorFamily, explicit_rank_build
from .values import json_value

PathLike = Union[str, Path]


def _read(path: PathLike) -> str:
    return Path(path).read_text(encoding="utf-8")


def _json(text: str, source: str):
    try:
        return json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg} (column {exc.colno})", exc.lineno, source) from None


def _build(source: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except ConstructionError:
        raise
    except (TypeError, ValueError, KeyError) as exc:
        raise ParseError(str(exc), None, source) from None


# -- teams -----------------------------------------------------------------


def parse_team_csv(text: str, source: str = "<csv>") -> Team:
    reader = csv.reader(io.StringIO(text))
    rows = [r for r in reader if r and any(cell.strip() for cell in r)]
    if not rows:
        raise ParseError("empty team file", None, source)
    header = [h.strip() for h in rows[0]]
    body = []
    for lineno, r in enumerate(rows[1:], start=2):
        if len(r) != len(header):
            raise ParseError(f"expected {len(header)} cells, got {len(r)}", lineno, source)
        body.append(tuple(cell.strip() for cell in r))
    return _build(source, Team, header, body)


def load_team(path: PathLike) -> Team:
    return parse_team_csv(_read(path), str(path))


def team_to_csv(team: Team) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(team.variables.attrs)
    for row in team.rows:
        w.writerow(row)
    return buf.getvalue()


def write_team(team: Team, path: PathLike) -> None:
    Path(path).write_text(team_to_csv(team), encoding="utf-8")


# -- distributions ---------------------------------------------------------


def parse_distribution(text: str, source: str = "<json>") -> Distribution:
    data = _json(text, source)
    if not isinstance(data, dict) or "variables" not in data or "outcomes" not in data:
        raise ParseError('expected an object with "variables" and "outcomes"', None, source)
    outcomes = []
    for k, item in enumerate(data["outcomes"]):
        if not isinstance(item, dict) or "assignment" not in item or "p" not in item:
            raise ParseError(f'outcome {k} needs "assignment" and "p"', None, source)
        a = item["assignment"]
        if isinstance(a, list):
            a = tuple(_hashable(v) for v in a)
        elif isinstance(a, dict):
            a = {name: _hashable(v) for name, v in a.items()}
        outcomes.append((a, item["p"]))
    return _build(source, Distribution, data["variables"], outcomes)


def _hashable(v):
    if isinstance(v, Fraction):
        return str(v) if v.denominator != 1 else int(v)
    if isinstance(v, (list, dict)):
        return json.dumps(v, sort_keys=True)
    return v


def load_distribution(path: PathLike) -> Distribution:
    return parse_distribution(_read(path), str(path))


# -- vectors ---------------------------------------------------------------


def parse_vectors(text: str, source: str = "<json>") -> VectorFamily:
    data = _json(text, source)
    if not isinstance(data, dict) or "vectors" not in data:
        raise ParseError('expected an object with "vectors"', None, source)
    vectors = data["vectors"]
    labels = data.get("labels")
    if labels is None:
        if not isinstance(vectors, dict):
            raise ParseError('"labels" is required when "vectors" is a list', None, source)
        labels = list(vectors)
    return _build(source, VectorFamily, labels, vectors)


def load_vectors(path: PathLike) -> VectorFamily:
    return parse_vectors(_read(path), str(path))


# -- explicit tables -------------------------------------------------------


def parse_explicit(text: str, source: str = "<json>", validate: bool = True) -> ExplicitRankTable:
    data = _json(text, source)
    if not isinstance(data, dict):
        raise ParseError("expected a JSON object", None, source)
    tolerance = None
    if "ranks" in data:
        ranks = data["ranks"]
        ground = data.get("ground")
        if "tolerance" in data:
            tolerance = float(data["tolerance"])
    else:
        ranks, ground = data, None
    if not isinstance(ranks, dict):
        raise ParseError('"ranks" must be an object', None, source)
    if ground is None:
        ground = []
        for key in ranks:
            for a in sorted(parse_subset(key)):
                if a not in ground:
                    ground.append(a)
    fn = explicit_rank_build if validate else ExplicitRankTable
    return _build(source, fn, GroundSet(ground), ranks, tolerance)


def load_explicit(path: PathLike, validate: bool = True) -> ExplicitRankTable:
    return parse_explicit(_read(path), str(path), validate)


def explicit_to_json(table: ExplicitRankTable) -> str:
    g = table.ground
    ranks = {",".join(g.ordered(x)): json_value(table.rank(x)) for x in g.subsets()}
    data = {"ground": list(g.attrs), "ranks": ranks}
    if table.tolerance is not None:
        data["tolerance"] = table.tolerance
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


# -- assertions ------------------------------------------------------------


def load_assertions(path: PathLike) -> AssertionSet:
    return parse_assertions(_read(path), str(path))


# -- shipped examples ------------------------------------------------------

FIXTURES = {
    "table": "nonsubmodular_table.json",
    "team": "nonsubmodular_team.csv",
    "sigma": "ab_determines_c.txt",
    "sigma_closed": "ab_determines_c_closed.txt",
}


def fixture_path(name: str) -> Path:
    """Filesystem path of a shipped example file."""
    return Path(str(resources.files("divrank") / "data" / FIXTURES.get(name, name)))
