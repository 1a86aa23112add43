"""Metric-matrix assembly: the full battery evaluated over a discipline.

A MetricMatrix is rows (units, papers, or authors of one discipline) by
columns (named metrics), reals with NaN as the missing marker. Paper-native
metrics are lifted to author/unit rows by the unweighted mean over the
entity's papers (submitted papers for units), skipping missing values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import metrics as m
from .corpus import Corpus
from .errors import DegenerateInputError, UnknownIdError
from .graphs import hits_scores, pagerank
from .serialize import fmt_float


def _paper_textual_proximity(corpus: Corpus, pid: str) -> float:
    """Mean TF-cosine between a paper and the papers it cites."""
    if corpus.papers[pid].tokens is None:
        return m.MISSING
    sims = [
        m.textual_proximity(corpus, pid, ref)
        for ref in corpus.references_of[pid]
        if corpus.papers[ref].tokens is not None
    ]
    sims = [s for s in sims if not math.isnan(s)]
    return sum(sims) / len(sims) if sims else m.MISSING


def _chrono_field(field, source="citations"):
    def fn(corpus, eid, level):
        value = getattr(m.chronometrics(corpus, eid, level, source=source), field)
        return float(value)
    return fn


PAPER_FNS = {
    "citation_count": lambda c, pid, _l: float(len(c.cited_by[pid])),
    "journal_impact_factor": lambda c, pid, _l: m.journal_impact_factor(
        c, c.papers[pid].journal_id, c.papers[pid].pub_date.year),
    "immediacy_index": lambda c, pid, _l: m.immediacy_index(
        c, c.papers[pid].journal_id, c.papers[pid].pub_date.year),
    "cocitation_count": lambda c, pid, _l: float(m.cocitation_total(c, pid)),
    "co_citedness": lambda c, pid, _l: m.co_citedness_score(c, pid),
    "hub": lambda c, pid, _l: hits_scores(c).hub[pid],
    "authority": lambda c, pid, _l: hits_scores(c).authority[pid],
    "pagerank": lambda c, pid, _l: pagerank(c)[pid],
    "age_years": _chrono_field("age_years"),
    "growth_slope": _chrono_field("growth_slope"),
    "latency_to_peak": _chrono_field("latency_to_peak_years"),
    "decay_rate": _chrono_field("decay_rate"),
    "download_count": lambda c, pid, _l: float(m.download_count(c, pid)),
    "download_count_6mo": lambda c, pid, _l: float(
        m.download_count(c, pid, (0.0, 6.0))),
    "dl_growth_slope": _chrono_field("growth_slope", "downloads"),
    "dl_latency_to_peak": _chrono_field("latency_to_peak_years", "downloads"),
    "dl_decay_rate": _chrono_field("decay_rate", "downloads"),
    "endogamy": lambda c, pid, _l: m.endogamy(c, pid, "paper"),
    "exogamy": lambda c, pid, _l: m.exogamy(c, pid, "paper"),
    "textual_proximity": lambda c, pid, _l: _paper_textual_proximity(c, pid),
}

AUTHOR_FNS = {
    "citation_count": lambda c, aid, _l: float(m.citation_count(c, aid, "author")),
    "publication_count": lambda c, aid, _l: float(
        m.publication_count(c, aid, "author")),
    "h_index": lambda c, aid, _l: float(m.h_index(c, aid, "author")),
    "coauthorship": lambda c, aid, _l: m.coauthorship_score(c, aid, "author"),
    "endogamy": lambda c, aid, _l: m.endogamy(c, aid, "author"),
    "exogamy": lambda c, aid, _l: m.exogamy(c, aid, "author"),
    "age_years": _chrono_field("age_years"),
    "growth_slope": _chrono_field("growth_slope"),
    "latency_to_peak": _chrono_field("latency_to_peak_years"),
    "decay_rate": _chrono_field("decay_rate"),
}

UNIT_FNS = {
    "citation_count": lambda c, uid, _l: float(m.citation_count(c, uid, "unit")),
    "publication_count": lambda c, uid, _l: float(
        m.publication_count(c, uid, "unit")),
    "h_index": lambda c, uid, _l: float(m.h_index(c, uid, "unit")),
    "coauthorship": lambda c, uid, _l: m.coauthorship_score(c, uid, "unit"),
    "endogamy": lambda c, uid, _l: m.endogamy(c, uid, "unit"),
    "exogamy": lambda c, uid, _l: m.exogamy(c, uid, "unit"),
    "prior_funding": lambda c, uid, _l: float(c.units[uid].prior_funding),
    "student_count": lambda c, uid, _l: float(c.units[uid].student_count),
}

METRIC_NAMES = sorted(set(PAPER_FNS) | set(AUTHOR_FNS) | set(UNIT_FNS))

DEFAULT_UNIT_METRICS = (
    "publication_count",
    "citation_count",
    "h_index",
    "journal_impact_factor",
    "authority",
    "pagerank",
    "growth_slope",
    "download_count",
    "coauthorship",
    "endogamy",
    "prior_funding",
    "student_count",
)


@dataclass(frozen=True)
class MetricMatrix:
    level: str
    discipline_id: str
    row_ids: tuple[str, ...]
    metric_names: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        if len(set(self.row_ids)) != len(self.row_ids):
            raise ValueError("duplicate row ids")
        if len(set(self.metric_names)) != len(self.metric_names):
            raise ValueError("duplicate metric names")
        if self.values.shape != (len(self.row_ids), len(self.metric_names)):
            raise ValueError("matrix shape does not match row/column labels")
        self.values.setflags(write=False)

    def column(self, name: str) -> np.ndarray:
        try:
            j = self.metric_names.index(name)
        except ValueError:
            raise UnknownIdError(f"unknown metric {name!r}") from None
        return self.values[:, j]

    def row(self, row_id: str) -> np.ndarray:
        try:
            i = self.row_ids.index(row_id)
        except ValueError:
            raise UnknownIdError(f"unknown row {row_id!r}") from None
        return self.values[i, :]

    def to_csv(self) -> str:
        lines = ["row_id," + ",".join(self.metric_names)]
        for i, rid in enumerate(self.row_ids):
            cells = [fmt_float(v) for v in self.values[i]]
            lines.append(rid + "," + ",".join(cells))
        return "\n".join(lines) + "\n"


def _rows_for(corpus: Corpus, discipline: str, level: str) -> list[str]:
    if level == "unit":
        return corpus.discipline_units(discipline)
    if level == "paper":
        return corpus.discipline_papers(discipline)
    if level == "author":
        return corpus.discipline_authors(discipline)
    raise ValueError(f"unknown level {level!r}")


def _aggregate_pool(corpus: Corpus, row_id: str, level: str) -> tuple[str, ...]:
    if level == "unit":
        return corpus.unit_papers(row_id)
    return corpus.author_papers[row_id]


def build_metric_matrix(corpus: Corpus, discipline: str, level: str = "unit",
                        metric_names=None) -> MetricMatrix:
    """One row per entity of the discipline, one column per metric.

    Unknown metric names fail up front; an empty discipline is an error.
    """
    if discipline not in corpus.disciplines:
        raise UnknownIdError(f"unknown discipline {discipline!r}")
    native = {"paper": PAPER_FNS, "author": AUTHOR_FNS, "unit": UNIT_FNS}[level]
    if metric_names is None:
        metric_names = DEFAULT_UNIT_METRICS if level == "unit" else tuple(sorted(native))
    metric_names = tuple(metric_names)
    for name in metric_names:
        if name not in native and name not in PAPER_FNS:
            raise UnknownIdError(f"unknown metric {name!r}")
    rows = _rows_for(corpus, discipline, level)
    if not rows:
        raise DegenerateInputError(
            f"discipline {discipline!r} has no {level} rows"
        )
    values = np.empty((len(rows), len(metric_names)))
    for j, name in enumerate(metric_names):
        if name in native:
            fn = native[name]
            for i, rid in enumerate(rows):
                values[i, j] = fn(corpus, rid, level)
        else:
            # paper-native metric lifted by mean over the entity's papers
            fn = PAPER_FNS[name]
            for i, rid in enumerate(rows):
                vals = [fn(corpus, pid, "paper")
                        for pid in _aggregate_pool(corpus, rid, level)]
                vals = [v for v in vals if not math.isnan(v)]
                values[i, j] = sum(vals) / len(vals) if vals else m.MISSING
    return MetricMatrix(
        level=level,
        discipline_id=discipline,
        row_ids=tuple(rows),
        metric_names=metric_names,
        values=values,
    )
