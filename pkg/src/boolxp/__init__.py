"""Exact Shapley values and formal explanations for truth-table classifiers."""

from .constructions import (
    ConstructionResult,
    SeedKind,
    build_i1,
    build_i2,
    build_i3,
    build_i4,
    build_i5,
    lower_bound,
    seed,
    verify,
)
from .issues import IssueReport, detect, implies_i2
from .model import (
    BooleanFunction,
    ExplanationProblem,
    Instance,
    evaluate,
    gate,
    is_constant,
    parse_function,
    pointwise,
    serialize_function,
    shift_vars,
)
from .search import SurveyResult, find_first, survey
from .shapley import PhiTable, phi_table, shapley_all, shapley_brute, shapley_value
from .xplain import (
    ExplanationSets,
    Relevancy,
    check_duality,
    classify_features,
    enumerate_axps,
    enumerate_cxps,
    explain,
    is_waxp,
    is_wcxp,
    waxp_map,
)

__version__ = "0.1.0"
