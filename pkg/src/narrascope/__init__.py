"""Quantify narrative structure in segmented texts.

Pipeline: parse a screenplay or prose document into ordered segments,
count terms per segment, map segments and terms into a shared factor
space, then read structure off that space: contiguity-constrained
episodization, randomization baselines for narrative attributes, and
backbone extraction for summaries.
"""

from .baseline import (
    ATTRIBUTES,
    AttributeSeries,
    PermutationReport,
    attribute_series,
    permutation_test,
    register_attribute,
    scalar_attribute,
)
from .ca import (
    FactorModel,
    analyze_counts,
    chi2_distance,
    correspondence_analysis,
    project_supplementary,
)
from .chrono import (
    Dendrogram,
    Merge,
    Segmentation,
    constrained_cluster,
    cut,
    nodal_scores,
    ultrametric,
)
from .corpus import (
    Segment,
    SegmentedDocument,
    TermSegmentMatrix,
    Vocabulary,
    beat_document,
    build_matrix,
    parse_prose,
    parse_screenplay,
    tokenize,
)
from .errors import (
    DegenerateMatrix,
    EmptyDocument,
    NarrascopeError,
    NoCommonSegments,
    NoScenesFound,
    RankTooLow,
    TooShort,
    ZeroProfile,
)
from .summarize import (
    Backbone,
    SalienceReport,
    compare_configurations,
    extract_backbone,
    salience,
)

__version__ = "0.1.0"

__all__ = [
    "ATTRIBUTES",
    "AttributeSeries",
    "Backbone",
    "Dendrogram",
    "DegenerateMatrix",
    "EmptyDocument",
    "FactorModel",
    "Merge",
    "NarrascopeError",
    "NoCommonSegments",
    "NoScenesFound",
    "PermutationReport",
    "RankTooLow",
    "SalienceReport",
    "Segment",
    "SegmentedDocument",
    "Segmentation",
    "TermSegmentMatrix",
    "TooShort",
    "Vocabulary",
    "ZeroProfile",
    "analyze_counts",
    "attribute_series",
    "beat_document",
    "build_matrix",
    "chi2_distance",
    "compare_configurations",
    "constrained_cluster",
    "correspondence_analysis",
    "cut",
    "extract_backbone",
    "nodal_scores",
    "parse_prose",
    "parse_screenplay",
    "permutation_test",
    "project_supplementary",
    "register_attribute",
    "salience",
    "scalar_attribute",
    "tokenize",
    "ultrametric",
]
