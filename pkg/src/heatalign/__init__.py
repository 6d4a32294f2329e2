"""Bayesian entity alignment for attribute-rich event-driven graphs."""

from .engine import (
    AlignmentMatrix,
    AlignmentRow,
    CandidateScore,
    PriorSpec,
    StageConfig,
    eat,
    indicator_coefficient,
    match_count,
    posterior_predictive,
    rarity_weight,
)
from .errors import (
    ConfigError,
    EvalError,
    GraphIntegrityError,
    HeatAlignError,
    NodeNotFoundError,
    ParseError,
)
from .evaluation import EvalPoint, EvalReport, precision_recall
from .graph import (
    AttributeFrequencyTable,
    EntityNode,
    EventHub,
    FactGraph,
    FactTriple,
    load_validate,
)
from .ingest import (
    GroundTruth,
    load_fact_graph,
    load_ground_truth,
    load_pipeline_config,
    save_fact_graph,
)
from .matchers import (
    AttributeExtractorSpec,
    ConstraintSpec,
    IndicatorSpec,
    attribute_frequencies,
    candidate_set,
    extract,
    normalized_levenshtein,
)
from .pipeline import MergeRecord, UnifiedGraph, heat, merge_nodes, run_stage
from .synth import SynthSpec, generate_synthetic

__version__ = "0.1.0"
