"""Choose the cheapest set of paraphrases that brings a text within bounds on
length, average sentence length and function-word share."""

from .analysis import (
    Direction,
    FlexibilityReport,
    Metric,
    analyze_flexibility,
    apply_solution,
    flexibility_table,
    sweep_constraint,
)
from .candidates import (
    CandidateSet,
    ParaphraseCandidate,
    build_candidate_set,
    derive_coefficients,
    load_candidates,
    validate_candidate_set,
)
from .config import RunSettings, load_config
from .cost_model import CostWeights, MeaningClass, classify_meaning_effect, compute_cost, discourse_effect
from .ilp_model import IlpModel, ModelConfig, build_model
from .solver import (
    Solution,
    Status,
    check_feasibility,
    enumerate_feasible_bruteforce,
    solve_branch_and_bound,
    solve_bruteforce,
)
from .text_metrics import (
    Document,
    MetricsSummary,
    WordClass,
    classify_words,
    compute_metrics,
    load_lexicon,
    measure_text,
    tokenize,
)

__version__ = "0.1.0"
