"""Diversity rank functions: models, axiom checks, dependence and independence."""

__version__ = "0.1.0"

from .assertions import CONST, DEP, INDEP, Assertion, AssertionSet, ParseError, UsageError, parse_assertion, parse_assertions
from .core import AxiomReport, LawResult, RankModel, atoms_of, check_axioms, check_interaction, check_matroid, constancy_holds, dep_holds, holds, indep_holds, rank_eval
from .dependence import armstrong_close, attribute_closure, dep_countermodel, dep_derivation, dep_entails
from .formats import fixture_path, load_assertions, load_distribution, load_explicit, load_team, load_vectors
from .ground import DivrankError, DomainError, GroundSet, SizeError
from .independence import constancy_set, indep_countermodel, indep_entails, indep_saturate, minimize_target
from .models import (
    ConstantRank,
    ConstructionError,
    CoverageRank,
    Distribution,
    EntropyRank,
    ExplicitRankTable,
    LinearRank,
    RelationalRank,
    SingularRank,
    Team,
    TwoValuedRank,
    UniformRank,
    VectorFamily,
    explicit_rank_build,
    make_simple,
)
from .representation import EquivClassPoset, InterpolationAssignment, NotClosedError, build_poset, realize_rank, roundtrip_verify
from .values import LogCount
