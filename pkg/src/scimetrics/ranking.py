"""Normalization, univariate/composite ranking, and the OA citation advantage.

Composite scores are weighted sums of z-scored metrics with L1-normalized
weights, so slider settings stay comparable across batteries of different
size. Negative weights are legal: a metric can be penalized.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .battery import MetricMatrix
from .corpus import Corpus, CriterionRanking
from .errors import DegenerateInputError, UnknownIdError
from .serialize import fmt_float
from .validation import average_ranks, criterion_scores, spearman


@dataclass(frozen=True)
class WeightVector:
    metric_names: tuple[str, ...]
    weights: tuple[float, ...]
    normalized: bool = False

    def __post_init__(self):
        if len(self.metric_names) != len(self.weights):
            raise ValueError("weights and names differ in length")

    def normalize(self) -> "WeightVector":
        """Scale so the absolute weights sum to 1; all-zero stays all-zero."""
        total = sum(abs(w) for w in self.weights)
        if total == 0:
            return WeightVector(self.metric_names, self.weights, True)
        return WeightVector(
            self.metric_names,
            tuple(w / total for w in self.weights),
            True,
        )


@dataclass(frozen=True)
class RankingRow:
    unit_id: str
    composite_score: float
    rank: float


@dataclass(frozen=True)
class RankingResult:
    discipline_id: str
    rows: tuple[RankingRow, ...]
    spearman_vs_criterion: float | None = None

    def to_csv(self) -> str:
        lines = ["unit_id,score,rank"]
        for row in self.rows:
            lines.append(
                f"{row.unit_id},{fmt_float(row.composite_score)},{fmt_float(row.rank)}"
            )
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ZscoreResult:
    matrix: MetricMatrix
    dropped_columns: tuple[str, ...]


def zscore(matrix: MetricMatrix) -> ZscoreResult:
    """Standardize each column to mean 0, sample sd 1; drop constant columns.

    Missing cells stay missing; means and sds come from the finite cells.
    """
    if len(matrix.row_ids) == 0:
        raise DegenerateInputError("empty matrix")
    kept, cols = [], []
    dropped = []
    for j, name in enumerate(matrix.metric_names):
        col = matrix.values[:, j].astype(float)
        finite = col[np.isfinite(col)]
        sd = finite.std(ddof=1) if len(finite) > 1 else 0.0
        if len(finite) == 0 or sd == 0:
            dropped.append(name)
            continue
        kept.append(name)
        cols.append((col - finite.mean()) / sd)
    values = np.column_stack(cols) if cols else np.empty((len(matrix.row_ids), 0))
    return ZscoreResult(
        matrix=MetricMatrix(
            level=matrix.level,
            discipline_id=matrix.discipline_id,
            row_ids=matrix.row_ids,
            metric_names=tuple(kept),
            values=values,
        ),
        dropped_columns=tuple(dropped),
    )


def rank_descending(values) -> np.ndarray:
    """Tie-averaged ranks with 1 = largest; missing values tie at the bottom."""
    v = np.asarray(values, dtype=float)
    ranks = np.empty(len(v))
    nan_mask = np.isnan(v)
    finite_idx = np.where(~nan_mask)[0]
    if len(finite_idx):
        ranks[finite_idx] = average_ranks(v[finite_idx], descending=True)
    if nan_mask.any():
        k = len(finite_idx)
        m = int(nan_mask.sum())
        ranks[nan_mask] = (2 * k + 1 + m) / 2  # mean of positions k+1 .. k+m
    return ranks


def _result_rows(row_ids, scores, ranks) -> tuple[RankingRow, ...]:
    order = sorted(
        range(len(row_ids)),
        key=lambda i: (
            ranks[i],
            row_ids[i],
        ),
    )
    return tuple(
        RankingRow(
            unit_id=row_ids[i],
            composite_score=float(scores[i]),
            rank=float(ranks[i]),
        )
        for i in order
    )


def _criterion_agreement(scores, criterion, row_ids):
    if criterion is None:
        return None
    finite = np.isfinite(scores)
    if finite.sum() < 3:
        return None
    s = criterion_scores(criterion, [row_ids[i] for i in np.where(finite)[0]])
    picked = np.asarray(scores)[finite]
    if np.all(picked == picked[0]) or np.all(s == s[0]):
        return None
    return spearman(picked, s)


def univariate_rank(matrix: MetricMatrix, metric_name: str,
                    criterion: CriterionRanking | None = None) -> RankingResult:
    """Descending ranking on one raw metric; ties share the average rank."""
    values = matrix.column(metric_name)
    ranks = rank_descending(values)
    return RankingResult(
        discipline_id=matrix.discipline_id,
        rows=_result_rows(matrix.row_ids, values, ranks),
        spearman_vs_criterion=_criterion_agreement(values, criterion, matrix.row_ids),
    )


def composite_rank(matrix: MetricMatrix, weights: WeightVector,
                   criterion: CriterionRanking | None = None) -> RankingResult:
    """Weighted sum of z-scored metrics; missing cells contribute zero.

    Expects a z-scored matrix (see zscore); weights are L1-normalized here
    if they were not already.
    """
    for name in weights.metric_names:
        if name not in matrix.metric_names:
            raise UnknownIdError(f"weight on missing column {name!r}")
    w = weights if weights.normalized else weights.normalize()
    scores = np.zeros(len(matrix.row_ids))
    for name, weight in zip(w.metric_names, w.weights):
        col = matrix.column(name)
        scores += weight * np.where(np.isfinite(col), col, 0.0)
    ranks = rank_descending(scores)
    return RankingResult(
        discipline_id=matrix.discipline_id,
        rows=_result_rows(matrix.row_ids, scores, ranks),
        spearman_vs_criterion=_criterion_agreement(scores, criterion, matrix.row_ids),
    )


@dataclass(frozen=True)
class OaAdvantage:
    ratio: float
    n_pairs: int
    skipped_cells: int


def oa_advantage(corpus: Corpus, discipline: str) -> OaAdvantage:
    """Within-journal-year OA vs non-OA mean-citation ratio.

    Each journal-year cell holding both kinds of paper contributes one
    ratio; cells whose non-OA papers are entirely uncited are skipped (the
    ratio is undefined there) but counted.
    """
    cells: dict[tuple[str, int], tuple[list, list]] = {}
    for pid in corpus.discipline_papers(discipline):
        p = corpus.papers[pid]
        oa_list, other = cells.setdefault((p.journal_id, p.pub_date.year), ([], []))
        (oa_list if p.is_oa else other).append(len(corpus.cited_by[pid]))
    ratios = []
    skipped = 0
    for (journal, year) in sorted(cells):
        oa_counts, other_counts = cells[(journal, year)]
        if not oa_counts or not other_counts:
            continue
        non_oa_mean = sum(other_counts) / len(other_counts)
        if non_oa_mean == 0:
            skipped += 1
            continue
        oa_mean = sum(oa_counts) / len(oa_counts)
        ratios.append(oa_mean / non_oa_mean)
    if not ratios:
        raise DegenerateInputError("no eligible cells")
    return OaAdvantage(
        ratio=sum(ratios) / len(ratios),
        n_pairs=len(ratios),
        skipped_cells=skipped,
    )
