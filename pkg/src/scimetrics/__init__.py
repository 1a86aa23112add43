"""Citation-metric battery, criterion validation, and composite ranking."""

from .corpus import (
    Author,
    Corpus,
    CorpusPaths,
    CriterionRanking,
    DownloadEvent,
    Journal,
    LoadReport,
    Paper,
    Unit,
    ValidationReport,
    corpus_fingerprint,
    parse_corpus,
    snapshot_at,
    validate_corpus,
    write_corpus,
)
from .battery import MetricMatrix, build_metric_matrix
from .errors import (
    CorpusFormatError,
    DegenerateInputError,
    InsufficientDataError,
    ScimetricsError,
    UnknownIdError,
)
from .graphs import GraphScores, hits_scores, pagerank
from .metrics import (
    chronometrics,
    citation_count,
    co_citedness_score,
    cocitation,
    coauthorship_score,
    download_count,
    endogamy,
    exogamy,
    h_from_counts,
    h_index,
    immediacy_index,
    journal_impact_factor,
    publication_count,
    textual_proximity,
)
from .ranking import (
    OaAdvantage,
    RankingResult,
    WeightVector,
    composite_rank,
    oa_advantage,
    univariate_rank,
    zscore,
)
from .synth import GeneratorConfig, GroundTruth, generate, generate_to_dir
from .validation import (
    CorrelatorResult,
    FactorResult,
    RegressionModel,
    ReliabilityReport,
    constrained_refit,
    cross_validate,
    download_citation_correlator,
    factor_analysis,
    fit_regression,
    pearson,
    spearman,
    split_half_reliability,
    test_retest_reliability,
)

__version__ = "0.1.0"

__all__ = [
    "Author",
    "Corpus",
    "CorpusFormatError",
    "CorpusPaths",
    "CorrelatorResult",
    "CriterionRanking",
    "DegenerateInputError",
    "DownloadEvent",
    "FactorResult",
    "GeneratorConfig",
    "GraphScores",
    "GroundTruth",
    "InsufficientDataError",
    "Journal",
    "LoadReport",
    "MetricMatrix",
    "OaAdvantage",
    "Paper",
    "RankingResult",
    "RegressionModel",
    "ReliabilityReport",
    "ScimetricsError",
    "Unit",
    "UnknownIdError",
    "ValidationReport",
    "WeightVector",
    "build_metric_matrix",
    "chronometrics",
    "citation_count",
    "co_citedness_score",
    "cocitation",
    "coauthorship_score",
    "composite_rank",
    "constrained_refit",
    "corpus_fingerprint",
    "cross_validate",
    "download_count",
    "download_citation_correlator",
    "endogamy",
    "exogamy",
    "factor_analysis",
    "fit_regression",
    "generate",
    "generate_to_dir",
    "h_from_counts",
    "h_index",
    "hits_scores",
    "immediacy_index",
    "journal_impact_factor",
    "oa_advantage",
    "pagerank",
    "parse_corpus",
    "pearson",
    "publication_count",
    "snapshot_at",
    "spearman",
    "split_half_reliability",
    "test_retest_reliability",
    "textual_proximity",
    "univariate_rank",
    "validate_corpus",
    "write_corpus",
    "zscore",
]
