"""Seeded synthetic corpus with planted ground truth.

The generator is the oracle for the validation machinery: it plants a
single latent quality per unit, leaks that quality into the observable
channels (citations, downloads, funding, students) with configurable
loadings, and records what an infinite-sample regression should recover.

Randomness comes from numpy's default_rng (PCG64); the seed alone
determines every byte of the output. Generation is single-threaded on
purpose: a fixed draw order is what makes same-seed runs bit-identical.

Structural choices, fixed rather than configurable:

- Papers are single-authored; every author belongs to one unit.
- The final simulated year holds only "late" papers. They cite but are
  never cited, which gives every earlier paper a citer pool and keeps
  the citation graph free of anachronisms.
- Citing papers stay within their discipline 90% of the time.
- With noise_sigma = 0 all latent channels collapse to exact functions
  of quality and counts are realized by deterministic apportionment, so
  unit mean citation counts are strictly ordered by quality.
- dl_cit_coupling targets the realized paper-level correlation between
  first-six-month downloads and year-plus citations. The generator
  solves the internal mix weight from the closed-form count moments;
  targets below the structural floor (both channels already share
  quality through their loadings) or above the count-noise ceiling
  saturate at the nearer attainable edge.
"""

import dataclasses
import math
from dataclasses import dataclass, field
from datetime import date, timedelta
from pathlib import Path
from typing import Mapping

import numpy as np

from .corpus import (
    Author,
    Corpus,
    CriterionRanking,
    DownloadEvent,
    Paper,
    Unit,
    write_corpus,
)
from .errors import DegenerateInputError, UnknownIdError
from .serialize import json_dumps

START_YEAR = 2015
JOURNALS_PER_DISCIPLINE = 3
CROSS_DISCIPLINE_RATE = 0.1

# channels a latent loading can be planted on
PLANTED_CHANNELS = (
    "citation_count",
    "download_count",
    "prior_funding",
    "student_count",
)

CIT_BASE = 12.0       # mean citations of an average early paper
CIT_SCALE = 0.3       # log-link gain; small enough that exp stays near-linear
DL_BASE = 60.0        # mean first-six-months downloads
DL_SCALE = 0.55
FUND_BASE = 1.0e6
FUND_SCALE = 0.4
STU_BASE = 25.0
STU_SCALE = 0.5
NOISE_GAIN = 3.0      # unit-level disturbance per unit of noise_sigma

# grid resolution for solving the download/citation mix weight
COUPLING_GRID = 2001

# citations arrive mostly after a year; sub-year citers are down-weighted
RECENT_LAG_WEIGHT = 0.25


def _default_loadings() -> dict[str, float]:
    return {
        "citation_count": 0.9,
        "download_count": 0.6,
        "prior_funding": 0.5,
        "student_count": 0.3,
    }


@dataclass(frozen=True)
class GeneratorConfig:
    seed: int
    n_units: int
    authors_per_unit: int
    papers_per_author: int
    n_disciplines: int = 1
    latent_loadings: Mapping[str, float] = field(default_factory=_default_loadings)
    noise_sigma: float = 0.1
    oa_fraction: float = 0.2
    oa_citation_multiplier: float = 2.0
    dl_cit_coupling: float = 0.5
    years: int = 6

    def __post_init__(self):
        if self.n_units < 1 or self.authors_per_unit < 1 \
                or self.papers_per_author < 1:
            raise ValueError("unit, author, and paper counts must be positive")
        if not 1 <= self.n_disciplines <= self.n_units:
            raise ValueError("need 1..n_units disciplines")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be nonnegative")
        if not 0.0 <= self.oa_fraction <= 1.0:
            raise ValueError("oa_fraction must lie in [0,1]")
        if self.oa_citation_multiplier <= 0:
            raise ValueError("oa_citation_multiplier must be positive")
        if not 0.0 <= self.dl_cit_coupling <= 1.0:
            raise ValueError("dl_cit_coupling must lie in [0,1]")
        if self.years < 2:
            raise ValueError("need at least 2 simulated years")
        for name in self.latent_loadings:
            if name not in PLANTED_CHANNELS:
                raise ValueError(f"no planted channel for metric {name!r}")


@dataclass(frozen=True)
class GroundTruth:
    quality: Mapping[str, float]
    unit_discipline: Mapping[str, str]
    true_betas: Mapping[str, float]
    criteria: tuple[CriterionRanking, ...]

    @property
    def criterion(self) -> CriterionRanking:
        """The sole criterion ranking of a one-discipline corpus."""
        if len(self.criteria) != 1:
            raise DegenerateInputError(
                "multiple disciplines present; index into criteria instead")
        return self.criteria[0]


@dataclass(frozen=True)
class GenerationResult:
    corpus: Corpus
    truth: GroundTruth


def ground_truth_criterion(truth: GroundTruth,
                           discipline_id: str | None = None) -> CriterionRanking:
    """Rank a discipline's units by descending quality.

    Equal qualities break lexicographically on unit id, so insertion
    order never matters.
    """
    disciplines = sorted(set(truth.unit_discipline.values()))
    if discipline_id is None:
        if len(disciplines) != 1:
            raise DegenerateInputError(
                "multiple disciplines present; pass discipline_id")
        discipline_id = disciplines[0]
    elif discipline_id not in disciplines:
        raise UnknownIdError(f"unknown discipline {discipline_id!r}")
    members = sorted(
        (uid for uid, d in truth.unit_discipline.items() if d == discipline_id),
        key=lambda uid: (-truth.quality[uid], uid),
    )
    return CriterionRanking(
        discipline_id, {uid: i + 1 for i, uid in enumerate(members)})


def _mix_moments(cfg: GeneratorConfig) -> tuple[float, float, float]:
    """Variances of the two download-mix ingredients and their correlation.

    The citation propensity w carries the unit citation latent, paper
    noise, and the OA bump (treated as normal here; its variance share
    is small). The independent ingredient v is the download latent plus
    its own paper noise. They correlate only through quality.
    """
    load = cfg.latent_loadings
    a_c = float(load.get("citation_count", 0.0))
    a_d = float(load.get("download_count", 0.0))
    sigma = cfg.noise_sigma
    n_eff = sigma * NOISE_GAIN
    f = cfg.oa_fraction
    var_w = CIT_SCALE ** 2 * (a_c ** 2 + n_eff ** 2) + sigma ** 2 \
        + math.log(cfg.oa_citation_multiplier) ** 2 * f * (1.0 - f)
    var_v = a_d ** 2 + n_eff ** 2 + sigma ** 2
    if var_w > 0 and var_v > 0:
        lam0 = CIT_SCALE * a_c * a_d / math.sqrt(var_w * var_v)
    else:
        lam0 = 0.0
    return var_w, var_v, lam0


def _window_moments(cfg: GeneratorConfig) -> tuple[float, float]:
    """First two moments of the in-window citation share.

    A cited paper keeps a citation for the default correlator window
    only when the citer is at least a year younger. The retained share
    depends on where the cited paper sits in the span; integrate it
    over the design densities (early papers uniform over the first
    years - 1, late papers uniform over the final year).
    """
    n_late = max(1, cfg.papers_per_author // cfg.years)
    early_span = float(cfg.years - 1)
    late_mass = n_late / cfg.papers_per_author
    early_density = (1.0 - late_mass) / early_span
    u = (np.arange(2000) + 0.5) * (early_span / 2000.0)
    in_early = early_density * np.maximum(0.0, early_span - u - 1.0)
    rec_early = early_density * np.minimum(1.0, early_span - u)
    in_late = late_mass * np.minimum(1.0, early_span - u)
    rec_late = late_mass - in_late
    w_in = in_early + in_late
    w_rec = RECENT_LAG_WEIGHT * (rec_early + rec_late)
    p = w_in / (w_in + w_rec)
    return float(p.mean()), float((p ** 2).mean())


def _predicted_correlation(cfg: GeneratorConfig, mix: np.ndarray) -> np.ndarray:
    """Paper-level corr(downloads, in-window citations) per mix weight.

    Both counts are Poisson with lognormal intensities, so the
    correlation has a closed form; the citation side is then thinned to
    the within-window share.
    """
    var_w, var_v, lam0 = _mix_moments(cfg)
    if var_w <= 0 or var_v <= 0:
        return np.zeros_like(mix)
    rest = np.sqrt(1.0 - mix ** 2)
    var_g = 1.0 + 2.0 * mix * rest * lam0
    rho_gw = (mix + rest * lam0) / np.sqrt(var_g)

    s_d = DL_SCALE
    e_d = DL_BASE * math.exp(s_d ** 2 / 2.0)
    var_d = e_d + DL_BASE ** 2 * (math.exp(2 * s_d ** 2) - math.exp(s_d ** 2))
    e_k = CIT_BASE * math.exp(var_w / 2.0)
    var_k = e_k + CIT_BASE ** 2 * (math.exp(2 * var_w) - math.exp(var_w))
    cov = DL_BASE * CIT_BASE * math.exp((s_d ** 2 + var_w) / 2.0) \
        * (np.exp(s_d * rho_gw * math.sqrt(var_w)) - 1.0)

    p1, p2 = _window_moments(cfg)
    var_kw = p2 * var_k + (p1 - p2) * e_k + (p2 - p1 ** 2) * e_k ** 2
    return p1 * cov / math.sqrt(var_d * var_kw)


def _coupling_mix(cfg: GeneratorConfig) -> float:
    """Mix weight whose realized download/citation correlation is nearest
    the requested coupling.

    Attainable correlations live between a structural floor (both count
    streams already share quality through their loadings) and a
    count-noise ceiling; requests outside that band saturate at the
    nearer edge.
    """
    if cfg.noise_sigma == 0:
        return cfg.dl_cit_coupling
    grid = np.linspace(0.0, 1.0, COUPLING_GRID)
    pred = _predicted_correlation(cfg, grid)
    return float(grid[int(np.argmin(np.abs(pred - cfg.dl_cit_coupling)))])


def _channel_moment_table(cfg: GeneratorConfig) -> list[dict]:
    """Closed-form moment parameters of each planted unit metric.

    Every channel is (a sum of) Poisson counts with intensity
    base * exp(U + W): U is the unit-level normal exponent and W the
    paper-level one (absent for the one-draw-per-unit channels, which
    also skip the Poisson stage). The OA multiplier is folded in as a
    normal exponent contribution, exact when oa_fraction is 0.
    """
    sigma = cfg.noise_sigma
    n_eff = sigma * NOISE_GAIN
    load = {m: float(cfg.latent_loadings.get(m, 0.0)) for m in PLANTED_CHANNELS}
    f = cfg.oa_fraction
    m2 = cfg.oa_citation_multiplier
    var_l = math.log(m2) ** 2 * f * (1.0 - f)
    n_late = max(1, cfg.papers_per_author // cfg.years)
    p_early = (cfg.papers_per_author - n_late) * cfg.authors_per_unit
    p_all = cfg.papers_per_author * cfg.authors_per_unit

    a_c = load["citation_count"]
    cit = dict(
        name="citation_count",
        base=CIT_BASE * (1.0 - f + f * m2) / math.exp(var_l / 2.0),
        pool=p_early,
        alpha=CIT_SCALE * a_c,
        u=CIT_SCALE ** 2 * (a_c ** 2 + n_eff ** 2),
        w=sigma ** 2 + var_l,
        poisson=True,
        extra_var=0.0,
    )

    # downloads: the mix of the citation propensity with an independent
    # channel, standardized, through its own log link
    a_d = load["download_count"]
    rho = _coupling_mix(cfg)
    rest = math.sqrt(1.0 - rho ** 2)
    var_w, var_v, _ = _mix_moments(cfg)
    cov_gq = 0.0
    g_unit = 0.0
    g_paper = 0.0
    if var_w > 0:
        cov_gq += rho * CIT_SCALE * a_c / math.sqrt(var_w)
        g_unit += rho ** 2 * CIT_SCALE ** 2 * (a_c ** 2 + n_eff ** 2) / var_w
        g_paper += rho ** 2 * (sigma ** 2 + var_l) / var_w
    if var_v > 0:
        cov_gq += rest * a_d / math.sqrt(var_v)
        g_unit += rest ** 2 * (a_d ** 2 + n_eff ** 2) / var_v
        g_paper += rest ** 2 * sigma ** 2 / var_v
        if var_w > 0:
            # the unit parts of both mix ingredients share quality
            g_unit += 2.0 * rho * rest * CIT_SCALE * a_c * a_d \
                / math.sqrt(var_w * var_v)
    var_g = g_unit + g_paper
    # cross-exponent covariances with the citation channel: the mix
    # carries the citation latent's unit noise and its paper noise
    cross_u = 0.0
    cross_w = 0.0
    if var_g > 0 and var_w > 0:
        cross_u = CIT_SCALE * DL_SCALE * rho * CIT_SCALE * n_eff ** 2 \
            / math.sqrt(var_w * var_g)
        cross_w = DL_SCALE * rho * (sigma ** 2 + var_l) \
            / math.sqrt(var_w * var_g)
    scale_g = 1.0 / math.sqrt(var_g) if var_g > 0 else 0.0
    dl = dict(
        name="download_count",
        base=DL_BASE,
        pool=p_all,
        alpha=DL_SCALE * cov_gq * scale_g,
        u=DL_SCALE ** 2 * g_unit * scale_g ** 2,
        w=DL_SCALE ** 2 * g_paper * scale_g ** 2,
        poisson=True,
        extra_var=0.0,
        cross_u_cit=cross_u,
        cross_w_cit=cross_w,
        shared_pool_cit=p_early,
    )

    a_f = load["prior_funding"]
    fund = dict(
        name="prior_funding",
        base=FUND_BASE,
        pool=1,
        alpha=FUND_SCALE * a_f,
        u=FUND_SCALE ** 2 * (a_f ** 2 + n_eff ** 2),
        w=0.0,
        poisson=False,
        extra_var=0.0,
    )

    a_s = load["student_count"]
    stu = dict(
        name="student_count",
        base=STU_BASE,
        pool=1,
        alpha=STU_SCALE * a_s,
        u=STU_SCALE ** 2 * (a_s ** 2 + n_eff ** 2),
        w=0.0,
        poisson=False,
        extra_var=1.0 / 12.0,  # rounding to whole students
    )
    return [cit, dl, fund, stu]


def _population_structure(cfg: GeneratorConfig):
    """Population correlation matrix of the planted channels and their
    correlations with the rank criterion.

    All entries come from exact lognormal and Poisson moments. The
    cross terms matter: two exp-transformed channels sharing quality
    correlate beyond the product of their quality correlations.
    """
    table = _channel_moment_table(cfg)
    k = len(table)
    mean = np.empty(k)
    var = np.empty(k)
    for i, ch in enumerate(table):
        p, b, u, w = ch["pool"], ch["base"], ch["u"], ch["w"]
        mean[i] = p * b * math.exp((u + w) / 2.0)
        var[i] = (
            p * b ** 2 * math.exp(2 * u + 2 * w)
            + (p ** 2 - p) * b ** 2 * math.exp(2 * u + w)
            - p ** 2 * b ** 2 * math.exp(u + w)
            + ch["extra_var"]
        )
        if ch["poisson"]:
            var[i] += mean[i]

    sigma = np.eye(k)
    for i in range(k):
        for j in range(i + 1, k):
            ci, cj = table[i], table[j]
            cu = ci["alpha"] * cj["alpha"]
            xw = 0.0
            shared = 0
            if {ci["name"], cj["name"]} == {"citation_count", "download_count"}:
                dl_ch = ci if ci["name"] == "download_count" else cj
                cu += dl_ch.get("cross_u_cit", 0.0)
                xw = dl_ch.get("cross_w_cit", 0.0)
                shared = dl_ch.get("shared_pool_cit", 0)
            pi, pj = ci["pool"], cj["pool"]
            pairs = pi * pj
            cov = ci["base"] * cj["base"] \
                * math.exp((ci["u"] + cj["u"] + ci["w"] + cj["w"]) / 2.0) \
                * (math.exp(cu) * (pairs - shared + shared * math.exp(xw))
                   - pairs)
            sigma[i, j] = sigma[j, i] = cov / math.sqrt(var[i] * var[j])

    # criterion side: the rank transform of quality maps q to uniform
    # scores, so Cov(channel, criterion) picks up erf(alpha/2)/2 from
    # E[exp(alpha q) * Phi(q)] instead of the linear attenuation
    b_vec = np.array([
        math.sqrt(3.0) * ch["pool"] * ch["base"]
        * math.exp((ch["u"] + ch["w"]) / 2.0) * math.erf(ch["alpha"] / 2.0)
        / math.sqrt(var[i])
        for i, ch in enumerate(table)
    ])
    names = tuple(ch["name"] for ch in table)
    return names, sigma, b_vec


def _population_betas(cfg: GeneratorConfig) -> dict[str, float]:
    """Standardized betas an infinite-sample regression would recover.

    Solves the population normal equations built from the exact channel
    moments. At sigma = 0 the channels are collinear and the betas are
    not identified, so the L1-normalized loadings stand in (any split
    is rank-equivalent).
    """
    if cfg.noise_sigma == 0:
        names = tuple(PLANTED_CHANNELS)
        load = {m: float(cfg.latent_loadings.get(m, 0.0)) for m in names}
        total = sum(abs(v) for v in load.values())
        if total == 0:
            return {m: 0.0 for m in names}
        return {m: v / total for m, v in load.items()}
    names, sigma, b_vec = _population_structure(cfg)
    beta = np.linalg.solve(sigma, b_vec)
    return {m: float(v) for m, v in zip(names, beta)}


def _apportion(total: int, weights: np.ndarray) -> np.ndarray:
    """Split an integer total over weights by largest remainder."""
    if total <= 0 or weights.sum() <= 0:
        return np.zeros(len(weights), dtype=int)
    quota = total * weights / weights.sum()
    counts = np.floor(quota).astype(int)
    short = total - counts.sum()
    if short > 0:
        # ties go to the lower index; argsort is stable on the negation
        order = np.argsort(-(quota - counts), kind="stable")
        counts[order[:short]] += 1
    return counts


def _deterministic_citation_totals(lam, unit_of, quality, disc_of_unit,
                                   cit_loading):
    """Per-paper counts at sigma = 0: unit totals rounded then repaired
    so means stay strictly ordered by quality, apportioned over papers."""
    n_units = len(quality)
    totals = np.zeros(n_units, dtype=int)
    for u in range(n_units):
        totals[u] = int(round(lam[unit_of == u].sum()))
    if cit_loading > 0:
        for disc in sorted(set(disc_of_unit)):
            members = [u for u in range(n_units) if disc_of_unit[u] == disc
                       and np.any(unit_of == u)]
            members.sort(key=lambda u: quality[u])
            floor = -1
            for u in members:
                totals[u] = max(totals[u], floor + 1)
                floor = totals[u]
    counts = np.zeros(len(lam), dtype=int)
    for u in range(n_units):
        mask = unit_of == u
        counts[mask] = _apportion(int(totals[u]), lam[mask])
    return counts


def generate(cfg: GeneratorConfig) -> GenerationResult:
    """Build a corpus plus the ground truth that produced it."""
    rng = np.random.default_rng(cfg.seed)
    sigma = cfg.noise_sigma
    load = {m: float(cfg.latent_loadings.get(m, 0.0)) for m in PLANTED_CHANNELS}

    disciplines = [f"disc{k:02d}" for k in range(cfg.n_disciplines)]
    unit_ids = [f"u{i:04d}" for i in range(cfg.n_units)]
    disc_of_unit = [disciplines[i % cfg.n_disciplines] for i in range(cfg.n_units)]
    quality = rng.normal(size=cfg.n_units)

    # unit-level disturbances, one per planted channel
    unit_latent = {}
    for channel in PLANTED_CHANNELS:
        eta = rng.normal(size=cfg.n_units)
        unit_latent[channel] = load[channel] * quality + sigma * NOISE_GAIN * eta

    unit_author_ids = [
        tuple(f"a{i * cfg.authors_per_unit + j:05d}"
              for j in range(cfg.authors_per_unit))
        for i in range(cfg.n_units)
    ]
    authors = [
        Author(id=aid, name=f"Author {aid}", unit_id=unit_ids[i])
        for i in range(cfg.n_units) for aid in unit_author_ids[i]
    ]

    # paper skeleton: every author writes papers_per_author papers, the
    # last floor(papers/years) of them (at least one) in the final year
    n_late = max(1, cfg.papers_per_author // cfg.years)
    n_early = cfg.papers_per_author - n_late
    span_start = date(START_YEAR, 1, 1)
    late_start = date(START_YEAR + cfg.years - 1, 1, 1)
    span_end = date(START_YEAR + cfg.years, 1, 1)
    early_days = (late_start - span_start).days
    late_days = (span_end - late_start).days

    owner_author = []
    owner_unit = []
    is_late = []
    day_number = []
    for i in range(cfg.n_units):
        for aid in unit_author_ids[i]:
            for k in range(cfg.papers_per_author):
                late = k >= n_early
                owner_author.append(aid)
                owner_unit.append(i)
                is_late.append(late)
                if late:
                    day_number.append(
                        early_days + int(rng.integers(0, late_days)))
                else:
                    day_number.append(int(rng.integers(0, early_days)))

    n_papers = len(owner_author)
    order = sorted(range(n_papers), key=lambda j: (day_number[j], j))
    owner_author = [owner_author[j] for j in order]
    owner_unit = np.array([owner_unit[j] for j in order])
    is_late = np.array([is_late[j] for j in order])
    days = np.array([day_number[j] for j in order])
    paper_ids = [f"p{j:06d}" for j in range(n_papers)]
    disc_code = np.array(
        [disciplines.index(disc_of_unit[u]) for u in owner_unit])

    journal_of = [
        f"j_{disc_of_unit[u]}_{int(rng.integers(0, JOURNALS_PER_DISCIPLINE))}"
        for u in owner_unit
    ]
    is_oa = rng.random(n_papers) < cfg.oa_fraction

    shared_vocab = [f"core_w{t}" for t in range(20)]
    disc_vocab = {d: [f"{d}_w{t}" for t in range(40)] for d in disciplines}
    tokens = [
        tuple(rng.choice(disc_vocab[disciplines[disc_code[j]]], size=6))
        + tuple(rng.choice(shared_vocab, size=2))
        for j in range(n_papers)
    ]

    # citation propensity and realized in-degree targets
    paper_noise = rng.normal(size=n_papers)
    log_mult = math.log(cfg.oa_citation_multiplier)
    cit_prop = (CIT_SCALE * unit_latent["citation_count"][owner_unit]
                + sigma * paper_noise + log_mult * is_oa)
    lam = np.where(is_late, 0.0, CIT_BASE * np.exp(cit_prop))
    if sigma > 0:
        k_target = rng.poisson(lam)
    else:
        k_target = _deterministic_citation_totals(
            lam, owner_unit, quality, disc_of_unit, load["citation_count"])

    # edge assignment: citers are strictly later papers, same-discipline
    # with probability 1 - CROSS_DISCIPLINE_RATE, and mostly >= 1 year out
    refs_of = [[] for _ in range(n_papers)]
    for j in range(n_papers):
        k = int(k_target[j])
        if k == 0:
            continue
        pool_start = int(np.searchsorted(days, days[j], side="right"))
        pool = np.arange(pool_start, n_papers)
        if len(pool) < k:
            if sigma == 0:
                raise DegenerateInputError(
                    f"paper {paper_ids[j]} needs {k} citing papers but only "
                    f"{len(pool)} are published later; extend the span or "
                    "add papers")
            k = len(pool)
            if k == 0:
                continue
        lag_w = np.where(days[pool] - days[j] >= 365, 1.0, RECENT_LAG_WEIGHT)
        same = disc_code[pool] == disc_code[j]
        w = lag_w.copy()
        same_mass = lag_w[same].sum()
        other_mass = lag_w[~same].sum()
        if same_mass > 0 and other_mass > 0:
            w[same] *= (1.0 - CROSS_DISCIPLINE_RATE) / same_mass
            w[~same] *= CROSS_DISCIPLINE_RATE / other_mass
        else:
            w /= w.sum()
        citers = rng.choice(pool, size=k, replace=False, p=w / w.sum())
        for c in sorted(int(x) for x in citers):
            refs_of[c].append(paper_ids[j])

    # downloads: mix the citation propensity with an independent channel,
    # weighted so the realized count-level correlation lands on the knob
    prop_sd = cit_prop[~is_late].std()
    w_hat = (cit_prop - cit_prop[~is_late].mean()) / prop_sd if prop_sd > 0 \
        else np.zeros(n_papers)
    indep = unit_latent["download_count"][owner_unit] + sigma * rng.normal(size=n_papers)
    ind_sd = indep.std()
    v_hat = (indep - indep.mean()) / ind_sd if ind_sd > 0 else np.zeros(n_papers)
    rho = _coupling_mix(cfg)
    g = rho * w_hat + math.sqrt(1.0 - rho ** 2) * v_hat
    g_sd = g.std()
    if g_sd > 0:
        g = (g - g.mean()) / g_sd
    mu = DL_BASE * np.exp(DL_SCALE * g)
    dl_counts = rng.poisson(mu) if sigma > 0 else np.round(mu).astype(int)

    downloads = []
    for j in range(n_papers):
        if dl_counts[j] == 0:
            continue
        pub = span_start + timedelta(days=int(days[j]))
        for off in rng.integers(0, 180, size=int(dl_counts[j])):
            downloads.append(
                DownloadEvent(paper_ids[j], pub + timedelta(days=int(off))))

    papers = [
        Paper(
            id=paper_ids[j],
            title=f"Paper {paper_ids[j]}",
            journal_id=journal_of[j],
            discipline_id=disciplines[disc_code[j]],
            pub_date=span_start + timedelta(days=int(days[j])),
            author_ids=(owner_author[j],),
            is_oa=bool(is_oa[j]),
            references=tuple(refs_of[j]),
            tokens=tokens[j],
        )
        for j in range(n_papers)
    ]

    # each unit submits everything its members wrote
    submitted = [[] for _ in range(cfg.n_units)]
    for j in range(n_papers):
        submitted[owner_unit[j]].append(paper_ids[j])
    units = [
        Unit(
            id=unit_ids[i],
            discipline_id=disc_of_unit[i],
            author_ids=unit_author_ids[i],
            prior_funding=FUND_BASE * math.exp(
                FUND_SCALE * unit_latent["prior_funding"][i]),
            student_count=max(0, int(round(STU_BASE * math.exp(
                STU_SCALE * unit_latent["student_count"][i])))),
            submitted_paper_ids=tuple(submitted[i]),
        )
        for i in range(cfg.n_units)
    ]

    quality_map = {uid: float(quality[i]) for i, uid in enumerate(unit_ids)}
    unit_disc = {uid: disc_of_unit[i] for i, uid in enumerate(unit_ids)}
    truth = GroundTruth(
        quality=quality_map,
        unit_discipline=unit_disc,
        true_betas=_population_betas(cfg),
        criteria=tuple(
            ground_truth_criterion(
                GroundTruth(quality_map, unit_disc, {}, ()), d)
            for d in disciplines
        ),
    )
    corpus = Corpus(
        papers, authors, units,
        downloads=downloads,
        criteria=list(truth.criteria),
        snapshot_date=span_end,
    )
    return GenerationResult(corpus=corpus, truth=truth)


def truth_payload(cfg: GeneratorConfig, truth: GroundTruth) -> dict:
    """JSON-ready ground truth; the seed rides along in every report."""
    return {
        "seed": cfg.seed,
        "config": dataclasses.asdict(cfg),
        "quality": dict(truth.quality),
        "unit_discipline": dict(truth.unit_discipline),
        "true_betas": dict(truth.true_betas),
        "criteria": {c.discipline_id: dict(c.ranks) for c in truth.criteria},
    }


def generate_to_dir(cfg: GeneratorConfig, out_dir) -> GenerationResult:
    """Generate and write the standard corpus files plus truth.json."""
    result = generate(cfg)
    out = Path(out_dir)
    write_corpus(result.corpus, out)
    (out / "truth.json").write_text(
        json_dumps(truth_payload(cfg, result.truth)) + "\n")
    return result
