"""Psychometric validation: correlations, reliability, criterion regression,
factor analysis, and leave-one-out cross-validation.

Criterion direction is fixed once here: rank 1 (best) maps to score 1, so a
positive beta always reads "more of this metric, better assessment". All
fits z-score predictors and criterion within the discipline, which makes the
betas standardized and scale-free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import date

import numpy as np

from .battery import MetricMatrix
from .corpus import Corpus, CriterionRanking, snapshot_at
from .errors import (
    DegenerateInputError,
    InsufficientDataError,
    UnknownIdError,
)
from .metrics import months_since

DEFAULT_RIDGE = 1e-8
DEFAULT_DL_WINDOW = (0.0, 6.0)
DEFAULT_CIT_WINDOW = (12.0, None)


# ---------------------------------------------------------------------------
# Correlation primitives
# ---------------------------------------------------------------------------


def average_ranks(values, descending: bool = False) -> np.ndarray:
    """Tie-averaged 1-based ranks. Inputs must be finite."""
    v = np.asarray(values, dtype=float)
    order = np.argsort(-v if descending else v, kind="stable")
    ranks = np.empty(len(v))
    sorted_vals = v[order]
    i = 0
    while i < len(v):
        j = i
        while j < len(v) and sorted_vals[j] == sorted_vals[i]:
            j += 1
        avg = (i + 1 + j) / 2  # mean of positions i+1 .. j
        ranks[order[i:j]] = avg
        i = j
    return ranks


def _check_series(x: np.ndarray, y: np.ndarray) -> None:
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
    if len(x) < 3:
        raise InsufficientDataError("need at least 3 observations")
    if not (np.isfinite(x).all() and np.isfinite(y).all()):
        raise ValueError("non-finite values in correlation input")
    if np.all(x == x[0]) or np.all(y == y[0]):
        raise DegenerateInputError("zero variance")


def pearson(x, y) -> float:
    """Sample Pearson correlation; rejects constant or mismatched series."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    _check_series(x, y)
    if np.array_equal(x, y):
        # identical series correlate at exactly 1; the general formula can
        # land one ulp under it
        return 1.0
    dx = x - x.mean()
    dy = y - y.mean()
    # rescale before squaring: deviations near 1e-160 would otherwise
    # underflow in the dot products
    dx = dx / np.abs(dx).max()
    dy = dy / np.abs(dy).max()
    r = float((dx @ dy) / math.sqrt((dx @ dx) * (dy @ dy)))
    return max(-1.0, min(1.0, r))


def spearman(x, y) -> float:
    """Pearson over tie-averaged ranks."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    _check_series(x, y)
    return pearson(average_ranks(x), average_ranks(y))


def criterion_scores(criterion: CriterionRanking, row_ids) -> np.ndarray:
    """Map ranks to scores in [0,1] with 1 = best; ties average-ranked first."""
    ranks = []
    for rid in row_ids:
        if rid not in criterion.ranks:
            raise UnknownIdError(f"no criterion rank for {rid!r}")
        ranks.append(criterion.ranks[rid])
    n = len(ranks)
    if n < 2:
        raise InsufficientDataError("criterion needs at least 2 ranked rows")
    avg = average_ranks(np.asarray(ranks, dtype=float))
    return (n - avg) / (n - 1)


# ---------------------------------------------------------------------------
# Download/citation correlator
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CorrelatorResult:
    r: float
    n: int
    points: tuple  # (paper_id, downloads, citations) per eligible paper
    dl_window: tuple
    cit_window: tuple


def _months_window_ok(window, allow_open_end: bool) -> bool:
    start, end = window
    if start is None or start < 0:
        return False
    if end is None:
        return allow_open_end
    return end > start


def download_citation_correlator(
    corpus: Corpus,
    dl_window: tuple = DEFAULT_DL_WINDOW,
    cit_window: tuple = DEFAULT_CIT_WINDOW,
) -> CorrelatorResult:
    """Pearson r between early downloads and later citations per paper.

    Windows are months since publication, half-open. A paper participates
    only once it is old enough for the citation window to have opened.
    """
    if not _months_window_ok(dl_window, allow_open_end=True):
        raise DegenerateInputError(f"degenerate download window {dl_window}")
    if not _months_window_ok(cit_window, allow_open_end=True):
        raise DegenerateInputError(f"degenerate citation window {cit_window}")
    c_start, c_end = cit_window
    d_start, d_end = dl_window
    points = []
    for pid, paper in corpus.papers.items():
        if months_since(paper.pub_date, corpus.snapshot_date) < c_start:
            continue
        dl = 0
        for at in corpus.downloads_of[pid]:
            m = months_since(paper.pub_date, at)
            if m >= max(0.0, d_start) and (d_end is None or m < d_end):
                dl += 1
        cit = 0
        for citer in corpus.cited_by[pid]:
            m = months_since(paper.pub_date, corpus.papers[citer].pub_date)
            if m >= c_start and (c_end is None or m < c_end):
                cit += 1
        points.append((pid, dl, cit))
    if len(points) < 3:
        raise InsufficientDataError(
            f"only {len(points)} papers eligible for the correlator"
        )
    dls = [p[1] for p in points]
    cits = [p[2] for p in points]
    return CorrelatorResult(
        r=pearson(dls, cits),
        n=len(points),
        points=tuple(points),
        dl_window=tuple(dl_window),
        cit_window=tuple(cit_window),
    )


# ---------------------------------------------------------------------------
# Reliability
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ReliabilityReport:
    metric_name: str
    raw_r: float
    spearman_brown_r: float
    n: int
    seed: int


def _subset_citations(corpus: Corpus, pool) -> float:
    own = set(pool)
    return float(sum(
        1 for pid in pool for c in corpus.cited_by[pid] if c not in own
    ))


def _subset_h_index(corpus: Corpus, pool) -> float:
    own = set(pool)
    counts = sorted(
        (sum(1 for c in corpus.cited_by[pid] if c not in own) for pid in pool),
        reverse=True,
    )
    h = 0
    for i, c in enumerate(counts, start=1):
        if c >= i:
            h = i
    return float(h)


# metrics computable on an arbitrary subset of an entity's papers
SUBSET_METRICS = {
    "citation_count": _subset_citations,
    "publication_count": lambda corpus, pool: float(len(pool)),
    "h_index": _subset_h_index,
    "download_count": lambda corpus, pool: float(
        sum(len(corpus.downloads_of[pid]) for pid in pool)
    ),
}


def _subset_metric_fn(metric_name: str):
    fn = SUBSET_METRICS.get(metric_name)
    if fn is None:
        raise UnknownIdError(
            f"metric {metric_name!r} not supported for reliability "
            f"(choose from {sorted(SUBSET_METRICS)})"
        )
    return fn


def spearman_brown(raw_r: float) -> float:
    if raw_r <= -1.0:
        return -1.0
    return 2.0 * raw_r / (1.0 + raw_r)


def split_half_reliability(
    corpus: Corpus,
    metric_name: str,
    seed: int,
    level: str = "author",
    duplicate_halves: bool = False,
) -> ReliabilityReport:
    """Randomly split each author's papers in half; correlate the halves.

    Odd paper counts put the extra paper in half A. duplicate_halves clones
    every paper into both halves, a self-check that must give raw_r = 1.
    """
    if level != "author":
        raise ValueError("split-half reliability is defined at author level")
    fn = _subset_metric_fn(metric_name)
    rng = np.random.default_rng(seed)
    a_vals, b_vals = [], []
    for aid in sorted(corpus.authors):
        papers = sorted(corpus.author_papers[aid])
        if len(papers) < 2:
            continue
        perm = rng.permutation(len(papers))
        if duplicate_halves:
            half_a = half_b = papers
        else:
            cut = (len(papers) + 1) // 2
            half_a = [papers[i] for i in perm[:cut]]
            half_b = [papers[i] for i in perm[cut:]]
        a_vals.append(fn(corpus, half_a))
        b_vals.append(fn(corpus, half_b))
    if len(a_vals) < 3:
        raise InsufficientDataError(
            f"only {len(a_vals)} authors with >= 2 papers"
        )
    raw_r = pearson(a_vals, b_vals)
    return ReliabilityReport(
        metric_name=metric_name,
        raw_r=raw_r,
        spearman_brown_r=spearman_brown(raw_r),
        n=len(a_vals),
        seed=seed,
    )


def test_retest_reliability(
    corpus: Corpus,
    metric_name: str,
    window1: tuple[date, date],
    window2: tuple[date, date],
    level: str = "author",
) -> ReliabilityReport:
    """Correlate entity metric values across two date windows.

    Each window (start, end) is evaluated on snapshot_at(end) with citing
    events from start onward, i.e. a closed [start, end] interval. No
    Spearman-Brown correction applies; the corrected field echoes raw_r.
    """
    for w in (window1, window2):
        if w[0] is None or w[1] is None or w[0] > w[1]:
            raise DegenerateInputError(f"degenerate window {w}")
    fn = _subset_metric_fn(metric_name)
    if level == "author":
        entities = [a for a in sorted(corpus.authors) if corpus.author_papers[a]]
        pool_of = lambda snap, eid: sorted(
            pid for pid in corpus.author_papers[eid] if pid in snap.papers
        )
    elif level == "unit":
        entities = [u for u in sorted(corpus.units) if corpus.unit_papers(u)]
        pool_of = lambda snap, eid: sorted(
            pid for pid in corpus.unit_papers(eid) if pid in snap.papers
        )
    else:
        raise ValueError("test-retest supports author and unit level")
    if len(entities) < 3:
        raise InsufficientDataError("fewer than 3 entities with papers")

    def window_values(window):
        start, end = window
        snap = snapshot_at(corpus, end)
        values = []
        for eid in entities:
            pool = pool_of(snap, eid)
            if metric_name == "publication_count":
                pool = [p for p in pool if snap.papers[p].pub_date >= start]
                values.append(float(len(pool)))
            elif metric_name == "download_count":
                values.append(float(sum(
                    1 for pid in pool for at in snap.downloads_of[pid]
                    if at >= start
                )))
            else:
                own = set(pool)
                if metric_name == "citation_count":
                    values.append(float(sum(
                        1 for pid in pool for c in snap.cited_by[pid]
                        if c not in own and snap.papers[c].pub_date >= start
                    )))
                else:  # h_index
                    counts = sorted(
                        (sum(1 for c in snap.cited_by[pid]
                             if c not in own and snap.papers[c].pub_date >= start)
                         for pid in pool),
                        reverse=True,
                    )
                    h = 0
                    for i, c in enumerate(counts, start=1):
                        if c >= i:
                            h = i
                    values.append(float(h))
        return values

    v1 = window_values(window1)
    v2 = window_values(window2)
    raw_r = pearson(v1, v2)
    return ReliabilityReport(
        metric_name=metric_name,
        raw_r=raw_r,
        spearman_brown_r=raw_r,
        n=len(entities),
        seed=0,
    )


# ---------------------------------------------------------------------------
# Criterion regression
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RegressionModel:
    discipline_id: str
    metric_names: tuple[str, ...]
    beta: tuple[float, ...]
    intercept: float
    r_squared: float
    adjusted_r_squared: float
    ridge_lambda: float
    condition_number: float
    residuals: tuple[float, ...]
    dropped_columns: tuple[str, ...]
    imputed_cells: tuple = ()


@dataclass
class _Design:
    """Imputed, z-scored design shared by fit, refit, and cross-validation."""

    names: tuple[str, ...]
    Z: np.ndarray
    col_means: np.ndarray
    col_sds: np.ndarray
    dropped: tuple[str, ...]
    imputed: tuple


def _prepare_design(matrix: MetricMatrix, row_mask=None) -> _Design:
    rows = np.arange(len(matrix.row_ids)) if row_mask is None else np.where(row_mask)[0]
    names, cols, means, sds, dropped, imputed = [], [], [], [], [], []
    for j, name in enumerate(matrix.metric_names):
        col = matrix.values[rows, j].astype(float)
        finite = np.isfinite(col)
        if not finite.any():
            dropped.append(name)
            continue
        mean = col[finite].mean()
        if not finite.all():
            for k in np.where(~finite)[0]:
                imputed.append((matrix.row_ids[rows[k]], name))
            col = np.where(finite, col, mean)
        sd = col.std(ddof=1) if len(col) > 1 else 0.0
        if sd == 0:
            dropped.append(name)
            continue
        names.append(name)
        cols.append((col - mean) / sd)
        means.append(mean)
        sds.append(sd)
    Z = np.column_stack(cols) if cols else np.empty((len(rows), 0))
    return _Design(
        names=tuple(names),
        Z=Z,
        col_means=np.asarray(means),
        col_sds=np.asarray(sds),
        dropped=tuple(dropped),
        imputed=tuple(imputed),
    )


def _ridge_solve(Z: np.ndarray, zy: np.ndarray, lam: float) -> np.ndarray:
    p = Z.shape[1]
    A = Z.T @ Z + lam * np.eye(p)
    return np.linalg.solve(A, Z.T @ zy)


def _condition_number(Z: np.ndarray) -> float:
    n, p = Z.shape
    if p == 0:
        return 1.0
    corr = (Z.T @ Z) / (n - 1)
    vals = np.linalg.eigvalsh(corr)
    lo, hi = float(vals[0]), float(vals[-1])
    if lo <= 0:
        return math.inf
    return hi / lo


def fit_regression(
    matrix: MetricMatrix,
    criterion: CriterionRanking,
    ridge_lambda: float = DEFAULT_RIDGE,
) -> RegressionModel:
    """Standardized ridge regression of criterion scores on the battery.

    Missing cells are imputed at the column mean (and flagged); constant or
    all-missing columns are dropped. The tiny default ridge keeps collinear
    batteries solvable without visibly biasing the fit.
    """
    if ridge_lambda < 0:
        raise ValueError("ridge_lambda must be nonnegative")
    n = len(matrix.row_ids)
    s = criterion_scores(criterion, matrix.row_ids)
    design = _prepare_design(matrix)
    p = design.Z.shape[1]
    if p == 0:
        raise DegenerateInputError("no usable metric columns after drops")
    if n < p + 2:
        raise InsufficientDataError(
            f"underdetermined: {n} rows for {p} predictors (need >= {p + 2})"
        )
    mean_s = s.mean()
    sd_s = s.std(ddof=1)
    if sd_s == 0:
        raise DegenerateInputError("criterion has zero variance")
    zy = (s - mean_s) / sd_s
    beta = _ridge_solve(design.Z, zy, ridge_lambda)
    yhat = design.Z @ beta
    ss_res = float(((zy - yhat) ** 2).sum())
    ss_tot = float((zy ** 2).sum())
    r2 = min(1.0, max(0.0, 1.0 - ss_res / ss_tot))
    adj = 1.0 - (1.0 - r2) * (n - 1) / (n - p - 1)
    intercept = float(
        mean_s - sd_s * float(beta @ (design.col_means / design.col_sds))
    )
    residuals = (zy - yhat) * sd_s
    return RegressionModel(
        discipline_id=matrix.discipline_id,
        metric_names=design.names,
        beta=tuple(float(b) for b in beta),
        intercept=intercept,
        r_squared=r2,
        adjusted_r_squared=adj,
        ridge_lambda=ridge_lambda,
        condition_number=_condition_number(design.Z),
        residuals=tuple(float(r) for r in residuals),
        dropped_columns=design.dropped,
        imputed_cells=design.imputed,
    )


def constrained_refit(
    model: RegressionModel,
    matrix: MetricMatrix,
    criterion: CriterionRanking,
    constraints: dict[str, float],
) -> RegressionModel:
    """Refit with some betas pinned (typically to 0, removing a bias source).

    Free betas are refit against the criterion residualized on the pinned
    part, so constrained R^2 can only fall short of the unconstrained fit.
    """
    for name in constraints:
        if name in model.dropped_columns:
            raise UnknownIdError(f"constraint on dropped column {name!r}")
        if name not in model.metric_names:
            raise UnknownIdError(f"constraint on unknown metric {name!r}")
    n = len(matrix.row_ids)
    s = criterion_scores(criterion, matrix.row_ids)
    design = _prepare_design(matrix)
    if design.names != model.metric_names:
        raise ValueError("matrix does not match the fitted model's columns")
    mean_s = s.mean()
    sd_s = s.std(ddof=1)
    zy = (s - mean_s) / sd_s
    fixed_idx = [design.names.index(name) for name in constraints]
    fixed_val = np.array([constraints[name] for name in constraints], dtype=float)
    free_idx = [j for j in range(len(design.names)) if j not in set(fixed_idx)]
    target = zy - design.Z[:, fixed_idx] @ fixed_val
    beta = np.zeros(len(design.names))
    beta[fixed_idx] = fixed_val
    if free_idx:
        beta[free_idx] = _ridge_solve(
            design.Z[:, free_idx], target, model.ridge_lambda
        )
    yhat = design.Z @ beta
    ss_res = float(((zy - yhat) ** 2).sum())
    ss_tot = float((zy ** 2).sum())
    r2 = min(1.0, max(0.0, 1.0 - ss_res / ss_tot))
    p = len(design.names)
    adj = 1.0 - (1.0 - r2) * (n - 1) / (n - p - 1)
    intercept = float(
        mean_s - sd_s * float(beta @ (design.col_means / design.col_sds))
    )
    residuals = (zy - yhat) * sd_s
    return RegressionModel(
        discipline_id=model.discipline_id,
        metric_names=design.names,
        beta=tuple(float(b) for b in beta),
        intercept=intercept,
        r_squared=r2,
        adjusted_r_squared=adj,
        ridge_lambda=model.ridge_lambda,
        condition_number=model.condition_number,
        residuals=tuple(float(r) for r in residuals),
        dropped_columns=design.dropped,
        imputed_cells=design.imputed,
    )


# ---------------------------------------------------------------------------
# Factor analysis
# ---------------------------------------------------------------------------


def jacobi_eigh(C: np.ndarray, tol: float = 1e-10, max_sweeps: int = 100):
    """Cyclic Jacobi eigendecomposition of a symmetric matrix.

    Sweeps annihilate each off-diagonal pair in turn until the off-diagonal
    Frobenius mass falls below tol. Returns (eigenvalues, eigenvectors) with
    eigenvectors in columns, unordered.
    """
    a = np.array(C, dtype=float, copy=True)
    n = a.shape[0]
    v = np.eye(n)
    for _ in range(max_sweeps):
        # the subtraction can cancel to a tiny negative once the matrix
        # is effectively diagonal
        off = math.sqrt(max(0.0, float((a ** 2).sum() - (np.diag(a) ** 2).sum())))
        if off < tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) < tol / (n * n):
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (
                    abs(theta) + math.sqrt(theta * theta + 1.0)
                )
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                rot_p = c * a[:, p] - s * a[:, q]
                rot_q = s * a[:, p] + c * a[:, q]
                a[:, p], a[:, q] = rot_p, rot_q
                rot_p = c * a[p, :] - s * a[q, :]
                rot_q = s * a[p, :] + c * a[q, :]
                a[p, :], a[q, :] = rot_p, rot_q
                rot_p = c * v[:, p] - s * v[:, q]
                rot_q = s * v[:, p] + c * v[:, q]
                v[:, p], v[:, q] = rot_p, rot_q
    return np.diag(a).copy(), v


@dataclass(frozen=True)
class FactorResult:
    eigenvalues: tuple[float, ...]
    loadings: np.ndarray  # metrics x factors, columns are eigenvectors
    variance_explained: tuple[float, ...]
    g_loadings: tuple[float, ...]
    metric_names: tuple[str, ...] = ()


def factor_analysis(matrix: MetricMatrix) -> FactorResult:
    """PCA of the metric correlation matrix via cyclic Jacobi.

    Uses only complete rows; constant columns are excluded up front. Factor
    columns are sign-aligned (loading sum >= 0) and sorted by eigenvalue.
    """
    complete = ~np.isnan(matrix.values).any(axis=1)
    X = matrix.values[complete]
    if X.shape[0] < 3:
        raise InsufficientDataError(
            f"only {X.shape[0]} complete rows (need >= 3)"
        )
    keep = [j for j in range(X.shape[1]) if X[:, j].std(ddof=1) > 0]
    if len(keep) < 2:
        raise DegenerateInputError("fewer than 2 non-constant metric columns")
    names = tuple(matrix.metric_names[j] for j in keep)
    Z = (X[:, keep] - X[:, keep].mean(axis=0)) / X[:, keep].std(axis=0, ddof=1)
    C = (Z.T @ Z) / (Z.shape[0] - 1)
    eigvals, eigvecs = jacobi_eigh(C)
    order = np.argsort(-eigvals, kind="stable")
    eigvals = np.clip(eigvals[order], 0.0, None)
    loadings = eigvecs[:, order]
    for k in range(loadings.shape[1]):
        if loadings[:, k].sum() < 0:
            loadings[:, k] = -loadings[:, k]
    total = float(eigvals.sum())
    variance = eigvals / total if total > 0 else eigvals
    loadings.setflags(write=False)
    return FactorResult(
        eigenvalues=tuple(float(x) for x in eigvals),
        loadings=loadings,
        variance_explained=tuple(float(x) for x in variance),
        g_loadings=tuple(float(x) for x in loadings[:, 0]),
        metric_names=names,
    )


# ---------------------------------------------------------------------------
# Cross-validation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CrossValidation:
    mean_oos_spearman: float
    folds: int


def cross_validate(
    matrix: MetricMatrix,
    criterion: CriterionRanking,
    ridge_lambda: float = DEFAULT_RIDGE,
) -> CrossValidation:
    """Leave-one-out criterion prediction.

    Every fold re-imputes and re-standardizes from its training rows alone,
    so the held-out unit never leaks into the fit.
    """
    n = len(matrix.row_ids)
    s = criterion_scores(criterion, matrix.row_ids)
    full = _prepare_design(matrix)
    p = full.Z.shape[1]
    if p == 0:
        raise DegenerateInputError("no usable metric columns after drops")
    if n < p + 2:
        raise InsufficientDataError(
            f"underdetermined: {n} rows for {p} predictors"
        )
    preds = np.empty(n)
    for i in range(n):
        mask = np.ones(n, dtype=bool)
        mask[i] = False
        design = _prepare_design(matrix, row_mask=mask)
        s_train = s[mask]
        mean_s = s_train.mean()
        sd_s = s_train.std(ddof=1)
        if design.Z.shape[1] == 0 or sd_s == 0:
            preds[i] = mean_s
            continue
        zy = (s_train - mean_s) / sd_s
        beta = _ridge_solve(design.Z, zy, ridge_lambda)
        x = np.empty(len(design.names))
        for j, name in enumerate(design.names):
            raw = matrix.values[i, matrix.metric_names.index(name)]
            if not np.isfinite(raw):
                raw = design.col_means[j]
            x[j] = (raw - design.col_means[j]) / design.col_sds[j]
        preds[i] = mean_s + sd_s * float(x @ beta)
    return CrossValidation(
        mean_oos_spearman=spearman(preds, s),
        folds=n,
    )
