"""Sparse linear integer scoring systems: exact training, analysis,
generalization bounds, and MIP export."""

from .bounds import BoundReport, coprime_class_gap, farey_count, finite_class_gap
from .coefset import (
    CoefficientDomain,
    CoefficientSet,
    Tier,
    bounded_integers,
    coprime_reduce,
    digit_values,
    explicit_values,
    load_domains,
    signed_integers,
    uniform,
)
from .data import Dataset, FoldAssignment, load_csv, split_folds, to_csv
from .errors import (
    ConfigError,
    DataError,
    DomainError,
    ReportError,
    ScoresysError,
    VerifyError,
)
from .harness import (
    CvAggregate,
    CvRecord,
    CvReport,
    FrontierPoint,
    default_c0_grid,
    frontier,
    frontier_from_report,
    run_cv,
    select_c0,
)
from .mipmodel import (
    MipModel,
    build_model,
    complete_assignment,
    parse_lp,
    read_solution,
    verify_solution,
    write_lp,
)
from .objective import (
    ObjectiveValue,
    TrainConfig,
    c0_range,
    default_c1,
    default_weights,
    evaluate,
)
from .report import (
    DecisionTable,
    ScoringSystem,
    induce_decision_table,
    parse_label_map,
    parse_score_sheet,
    render_results_table,
    render_score_sheet,
)
from .solver import (
    SearchState,
    SolveResult,
    TracePoint,
    lower_bound_of,
    solve,
    warm_start,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
