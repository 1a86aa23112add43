"""Payload assembly shared by the CLI and the HTTP service.

Both frontends must emit byte-identical JSON for the same computation, so
every response body is built here and serialized through json_dumps. The
result dataclasses pass through serialize.jsonable unchanged; this module
only adds the composites (corpus summary, full run report) and the small
parsers for weight/constraint/window strings.
"""

from __future__ import annotations

from .battery import build_metric_matrix
from .corpus import Corpus
from .errors import ScimetricsError, UnknownIdError
from .ranking import WeightVector, composite_rank, oa_advantage, zscore
from .serialize import fmt_float, jsonable
from .validation import (
    download_citation_correlator,
    factor_analysis,
    fit_regression,
    split_half_reliability,
)


def parse_weights(text: str) -> WeightVector:
    """Parse "name:w,name:w" into a WeightVector (not yet normalized)."""
    names, weights = [], []
    for token in text.split(","):
        token = token.strip()
        name, sep, raw = token.partition(":")
        if not sep or not name.strip():
            raise ValueError(f"malformed weight token {token!r} (want name:value)")
        try:
            value = float(raw)
        except ValueError:
            raise ValueError(
                f"malformed weight token {token!r} (want name:value)") from None
        names.append(name.strip())
        weights.append(value)
    return WeightVector(tuple(names), tuple(weights))


def parse_constraints(text: str) -> dict[str, float]:
    """Parse "name:v,name:v" into a constraint mapping."""
    vec = parse_weights(text)
    return dict(zip(vec.metric_names, vec.weights))


def parse_window(text: str) -> tuple[float, float | None]:
    """Parse "a:b" into a month window; "a:" leaves the end open."""
    start, sep, end = text.partition(":")
    if not sep:
        raise ValueError(f"malformed window {text!r} (want start:end or start:)")
    try:
        return (float(start), float(end) if end.strip() else None)
    except ValueError:
        raise ValueError(
            f"malformed window {text!r} (want start:end or start:)") from None


def summary_payload(corpus: Corpus) -> dict:
    return {
        "n_papers": len(corpus.papers),
        "n_authors": len(corpus.authors),
        "n_units": len(corpus.units),
        "n_journals": len(corpus.journals),
        "n_downloads": len(corpus.downloads),
        "disciplines": corpus.disciplines,
        "criteria_disciplines": sorted(corpus.criteria),
        "snapshot_date": corpus.snapshot_date,
    }


def require_criterion(corpus: Corpus, discipline: str):
    try:
        return corpus.criteria[discipline]
    except KeyError:
        raise UnknownIdError(
            f"no criterion ranking for discipline {discipline!r}") from None


def fit_for(corpus: Corpus, discipline: str, metric_names=None,
            ridge_lambda: float | None = None, matrix=None):
    """Fit one discipline's model; the single code path behind CLI and API."""
    if matrix is None:
        matrix = build_metric_matrix(corpus, discipline,
                                     metric_names=metric_names)
    criterion = require_criterion(corpus, discipline)
    if ridge_lambda is None:
        return matrix, fit_regression(matrix, criterion)
    return matrix, fit_regression(matrix, criterion, ridge_lambda=ridge_lambda)


def rank_for(corpus: Corpus, discipline: str, weights: WeightVector,
             matrix=None):
    """Composite ranking on the z-scored battery; shared by CLI and API."""
    if matrix is None:
        matrix = build_metric_matrix(corpus, discipline)
    return composite_rank(zscore(matrix).matrix, weights.normalize(),
                          corpus.criteria.get(discipline))


# sections of the run report, in emission order
REPORT_SECTIONS = (
    "metrics",
    "model",
    "reliability",
    "factor",
    "correlator",
    "oa_advantage",
)


def run_report(corpus: Corpus, discipline: str, metric_names=None,
               reliability_metric: str = "citation_count",
               split_seed: int = 0) -> dict:
    """One self-contained summary of every analysis on one discipline.

    Sections are computed independently; one that cannot be computed on
    this corpus (say, no OA papers) reports its error string instead of
    aborting the rest.
    """
    sections: dict[str, dict] = {}

    def attempt(name, fn):
        try:
            sections[name] = {"ok": True, "value": jsonable(fn())}
        except ScimetricsError as exc:
            sections[name] = {"ok": False, "error": str(exc)}

    matrix = build_metric_matrix(corpus, discipline, metric_names=metric_names)
    sections["metrics"] = {"ok": True, "value": jsonable(matrix)}
    attempt("model", lambda: fit_for(corpus, discipline, matrix=matrix)[1])
    attempt("reliability", lambda: split_half_reliability(
        corpus, reliability_metric, seed=split_seed))
    attempt("factor", lambda: factor_analysis(matrix))
    attempt("correlator", lambda: download_citation_correlator(corpus))
    attempt("oa_advantage", lambda: oa_advantage(corpus, discipline))
    return {
        "discipline": discipline,
        "summary": jsonable(summary_payload(corpus)),
        **{name: sections[name] for name in REPORT_SECTIONS},
    }


def report_text(report: dict) -> str:
    """Human-readable rendering of a run_report payload."""
    lines = [f"run report for discipline {report['discipline']}"]
    s = report["summary"]
    lines.append(
        f"  corpus: {s['n_papers']} papers, {s['n_authors']} authors, "
        f"{s['n_units']} units, snapshot {s['snapshot_date']}")

    def value_or_skip(name):
        section = report[name]
        if not section["ok"]:
            lines.append(f"  {name}: skipped ({section['error']})")
            return None
        return section["value"]

    v = value_or_skip("metrics")
    if v is not None:
        lines.append(
            f"  metrics: {len(v['row_ids'])} rows x "
            f"{len(v['metric_names'])} metrics at {v['level']} level")
    v = value_or_skip("model")
    if v is not None:
        betas = ", ".join(
            f"{name}={fmt_float(b)}"
            for name, b in zip(v["metric_names"], v["beta"]))
        lines.append(f"  model: R^2={fmt_float(v['r_squared'])} ({betas})")
    v = value_or_skip("reliability")
    if v is not None:
        lines.append(
            f"  reliability: split-half r={fmt_float(v['spearman_brown_r'])} "
            f"on {v['metric_name']} (n={v['n']}, seed {v['seed']})")
    v = value_or_skip("factor")
    if v is not None:
        lines.append(
            f"  factor: first component explains "
            f"{fmt_float(v['variance_explained'][0])} of variance")
    v = value_or_skip("correlator")
    if v is not None:
        lines.append(f"  correlator: r={fmt_float(v['r'])} over {v['n']} papers")
    v = value_or_skip("oa_advantage")
    if v is not None:
        lines.append(
            f"  oa advantage: ratio={fmt_float(v['ratio'])} "
            f"over {v['n_pairs']} journal-year cells")
    return "\n".join(lines) + "\n"
