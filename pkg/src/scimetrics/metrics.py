"""Univariate metric battery: counts, journal indices, chronometrics, similarity.

Every operation here is a pure function of an immutable Corpus, so all of
them are safe to evaluate in parallel across entities.

Conventions shared by the whole battery:
  - Date windows are half-open [start, end); None means unbounded.
  - Missing values are NaN (serialized as null/empty downstream).
  - months since publication = days / 30.4375, years = days / 365.25.
  - Self-citations between an entity's own papers are excluded at author
    and unit level; paper-level in-degree keeps all citers.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from datetime import date

from .corpus import Corpus
from .errors import DegenerateInputError, UnknownIdError

DAYS_PER_YEAR = 365.25
DAYS_PER_MONTH = 30.4375

MISSING = float("nan")

DateWindow = "tuple[date | None, date | None] | None"


def _in_window(d: date, window) -> bool:
    if window is None:
        return True
    start, end = window
    if start is not None and d < start:
        return False
    if end is not None and d >= end:
        return False
    return True


def entity_papers(corpus: Corpus, entity_id: str, level: str) -> tuple[str, ...]:
    """Paper pool an entity is scored on.

    Units pool every member author's papers together with the resolved
    submitted list (normally a subset of the former).
    """
    if level == "paper":
        if entity_id not in corpus.papers:
            raise UnknownIdError(f"unknown paper {entity_id!r}")
        return (entity_id,)
    if level == "author":
        if entity_id not in corpus.authors:
            raise UnknownIdError(f"unknown author {entity_id!r}")
        return tuple(sorted(corpus.author_papers[entity_id]))
    if level == "unit":
        unit = corpus.units.get(entity_id)
        if unit is None:
            raise UnknownIdError(f"unknown unit {entity_id!r}")
        pool = set(corpus.unit_papers(entity_id))
        for aid in unit.author_ids:
            pool.update(corpus.author_papers.get(aid, ()))
        return tuple(sorted(pool))
    raise ValueError(f"unknown level {level!r}")


def _entity_discipline(corpus: Corpus, entity_id: str, level: str) -> str | None:
    if level == "paper":
        return corpus.papers[entity_id].discipline_id
    if level == "author":
        unit = corpus.units.get(corpus.authors[entity_id].unit_id)
        return None if unit is None else unit.discipline_id
    return corpus.units[entity_id].discipline_id


# ---------------------------------------------------------------------------
# Counting metrics
# ---------------------------------------------------------------------------


def citation_count(corpus: Corpus, entity_id: str, level: str = "paper",
                   window=None) -> int:
    """In-edges to the entity's papers, citing pub_date within window.

    At author/unit level, edges whose citing paper is also in the entity's
    own pool are self-citations and do not count.
    """
    pool = entity_papers(corpus, entity_id, level)
    own = set(pool) if level != "paper" else frozenset()
    n = 0
    for pid in pool:
        for citer in corpus.cited_by[pid]:
            if citer in own:
                continue
            if _in_window(corpus.papers[citer].pub_date, window):
                n += 1
    return n


def publication_count(corpus: Corpus, entity_id: str, level: str = "author",
                      window=None) -> int:
    if level == "paper":
        raise ValueError("publication_count is an author/unit metric")
    pool = entity_papers(corpus, entity_id, level)
    return sum(1 for pid in pool if _in_window(corpus.papers[pid].pub_date, window))


def h_from_counts(counts) -> int:
    """Largest h such that at least h of the counts are >= h."""
    ordered = sorted(counts, reverse=True)
    h = 0
    for i, c in enumerate(ordered, start=1):
        if c >= i:
            h = i
    return h


def h_index(corpus: Corpus, entity_id: str, level: str = "author",
            window=None) -> int:
    """Largest h with >= h papers of >= h (self-excluded, windowed) citations."""
    pool = entity_papers(corpus, entity_id, level)
    own = set(pool)
    counts = []
    for pid in pool:
        c = 0
        for citer in corpus.cited_by[pid]:
            if citer in own:
                continue
            if _in_window(corpus.papers[citer].pub_date, window):
                c += 1
        counts.append(c)
    return h_from_counts(counts)


# ---------------------------------------------------------------------------
# Journal indices
# ---------------------------------------------------------------------------


def _journal_year_index(corpus: Corpus):
    """journal -> pub year -> paper ids, plus per-paper citing-year counts."""
    cached = corpus._cache.get("journal_year_index")
    if cached is not None:
        return cached
    articles: dict[str, dict[int, list[str]]] = {}
    for pid, p in corpus.papers.items():
        articles.setdefault(p.journal_id, {}).setdefault(p.pub_date.year, []).append(pid)
    citer_years: dict[str, Counter] = {}
    for pid in corpus.papers:
        citer_years[pid] = Counter(
            corpus.papers[c].pub_date.year for c in corpus.cited_by[pid]
        )
    corpus._cache["journal_year_index"] = (articles, citer_years)
    return articles, citer_years


def _journal_ratio(corpus: Corpus, journal_id: str, cite_year: int,
                   pub_years: tuple[int, ...]) -> float:
    if journal_id not in corpus.journals:
        raise UnknownIdError(f"unknown journal {journal_id!r}")
    articles, citer_years = _journal_year_index(corpus)
    pool = []
    for y in pub_years:
        pool.extend(articles.get(journal_id, {}).get(y, []))
    if not pool:
        return 0.0
    cites = sum(citer_years[pid].get(cite_year, 0) for pid in pool)
    return cites / len(pool)


def journal_impact_factor(corpus: Corpus, journal_id: str, year: int) -> float:
    """Citations in `year` to the journal's previous-2-year articles, per article."""
    return _journal_ratio(corpus, journal_id, year, (year - 1, year - 2))


def immediacy_index(corpus: Corpus, journal_id: str, year: int) -> float:
    """Same-year citations per same-year article."""
    return _journal_ratio(corpus, journal_id, year, (year,))


# ---------------------------------------------------------------------------
# Co-citation
# ---------------------------------------------------------------------------


def cocitation(corpus: Corpus, p: str, q: str) -> int:
    """Distinct papers citing both p and q."""
    if p == q:
        raise DegenerateInputError("cocitation of a paper with itself")
    for pid in (p, q):
        if pid not in corpus.papers:
            raise UnknownIdError(f"unknown paper {pid!r}")
    return len(set(corpus.cited_by[p]) & set(corpus.cited_by[q]))


def cocitation_total(corpus: Corpus, p: str) -> int:
    """Sum of cocitation(p, q) over all other papers q."""
    if p not in corpus.papers:
        raise UnknownIdError(f"unknown paper {p!r}")
    return sum(len(corpus.references_of[c]) - 1 for c in corpus.cited_by[p])


def co_citedness_score(corpus: Corpus, p: str) -> float:
    """Cocitation-weighted mean citation count of p's co-cited partners.

    A paper co-cited only with heavily cited work scores high; a paper never
    co-cited scores 0.
    """
    if p not in corpus.papers:
        raise UnknownIdError(f"unknown paper {p!r}")
    num = 0.0
    den = 0
    for citer in corpus.cited_by[p]:
        for q in corpus.references_of[citer]:
            if q == p:
                continue
            num += len(corpus.cited_by[q])
            den += 1
    return num / den if den else 0.0


# ---------------------------------------------------------------------------
# Chronometrics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Chronometrics:
    age_years: float
    growth_slope: float
    latency_to_peak_years: int
    decay_rate: float


def _ls_slope(xs, ys) -> float:
    n = len(xs)
    if n < 2:
        return 0.0
    mx = sum(xs) / n
    my = sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    if sxx == 0:
        return 0.0
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    return sxy / sxx


def _chronometrics_from_events(pub: date, snapshot: date, events) -> Chronometrics:
    age = max(0.0, (snapshot - pub).days / DAYS_PER_YEAR)
    first, last = pub.year, max(snapshot.year, pub.year)
    counts = [0] * (last - first + 1)
    for d in events:
        if first <= d.year <= last:
            counts[d.year - first] += 1
    if sum(counts) == 0:
        return Chronometrics(age, 0.0, 0, 0.0)
    k = min(5, int(age) + 1, len(counts))
    growth = _ls_slope(list(range(k)), counts[:k])
    peak = counts.index(max(counts))
    latency = min(peak, int(age))
    post = [(i - peak, -math.log(counts[i]))
            for i in range(peak + 1, len(counts)) if counts[i] > 0]
    decay = 0.0
    if len(post) >= 2:
        decay = max(0.0, _ls_slope([x for x, _ in post], [y for _, y in post]))
    return Chronometrics(age, growth, latency, decay)


def chronometrics(corpus: Corpus, entity_id: str, level: str = "paper",
                  source: str = "citations") -> Chronometrics:
    """Age, growth slope, latency to peak, and decay of an annual event series.

    Series is the entity's incoming citations (paper or author level, author
    pool self-excluded) or a paper's downloads. Counts are calendar-year
    bins from the publication year; growth fits the first min(5, floor(age)+1)
    bins; latency is years to the earliest peak year; decay is the slope of
    -ln(count) over post-peak years with counts, clamped at 0.
    """
    if level not in ("paper", "author"):
        raise ValueError("chronometrics supports paper and author level")
    if source not in ("citations", "downloads"):
        raise ValueError(f"unknown source {source!r}")
    if source == "downloads" and level != "paper":
        raise ValueError("download chronometrics is paper-level")
    pool = entity_papers(corpus, entity_id, level)
    if not pool:
        return Chronometrics(0.0, 0.0, 0, 0.0)
    pub = min(corpus.papers[pid].pub_date for pid in pool)
    if source == "downloads":
        events = list(corpus.downloads_of[entity_id])
    else:
        own = set(pool) if level == "author" else frozenset()
        events = [
            corpus.papers[c].pub_date
            for pid in pool
            for c in corpus.cited_by[pid]
            if c not in own
        ]
    return _chronometrics_from_events(pub, corpus.snapshot_date, events)


# ---------------------------------------------------------------------------
# Downloads
# ---------------------------------------------------------------------------


def months_since(pub: date, at: date) -> float:
    return (at - pub).days / DAYS_PER_MONTH


def download_count(corpus: Corpus, paper_id: str,
                   window: tuple[float, float | None] = (0.0, None)) -> int:
    """Downloads with months-since-publication in [start, end); pre-publication
    events never count."""
    paper = corpus.papers.get(paper_id)
    if paper is None:
        raise UnknownIdError(f"unknown paper {paper_id!r}")
    start, end = window
    n = 0
    for at in corpus.downloads_of[paper_id]:
        m = months_since(paper.pub_date, at)
        if m < 0 or m < start:
            continue
        if end is not None and m >= end:
            continue
        n += 1
    return n


# ---------------------------------------------------------------------------
# Interconnectivity and text
# ---------------------------------------------------------------------------


def endogamy(corpus: Corpus, entity_id: str, level: str = "paper") -> float:
    """Fraction of incident citation edges staying inside the entity's
    discipline; NaN when the entity has no incident edges (or no discipline)."""
    pool = entity_papers(corpus, entity_id, level)
    home = _entity_discipline(corpus, entity_id, level)
    if home is None:
        return MISSING
    same = total = 0
    for pid in pool:
        for other in corpus.cited_by[pid] + corpus.references_of[pid]:
            total += 1
            if corpus.papers[other].discipline_id == home:
                same += 1
    return same / total if total else MISSING


def exogamy(corpus: Corpus, entity_id: str, level: str = "paper") -> float:
    e = endogamy(corpus, entity_id, level)
    return MISSING if math.isnan(e) else 1.0 - e


def coauthorship_score(corpus: Corpus, entity_id: str, level: str = "author") -> float:
    """Author: distinct co-authors over all papers. Unit: mean over members."""
    if level == "author":
        if entity_id not in corpus.authors:
            raise UnknownIdError(f"unknown author {entity_id!r}")
        others = set()
        for pid in corpus.author_papers[entity_id]:
            others.update(corpus.papers[pid].author_ids)
        others.discard(entity_id)
        return float(len(others))
    if level == "unit":
        unit = corpus.units.get(entity_id)
        if unit is None:
            raise UnknownIdError(f"unknown unit {entity_id!r}")
        members = [a for a in unit.author_ids if a in corpus.authors]
        if not members:
            return 0.0
        return sum(coauthorship_score(corpus, a, "author") for a in members) / len(members)
    raise ValueError("coauthorship_score is an author/unit metric")


def textual_proximity(corpus: Corpus, p: str, q: str) -> float:
    """Cosine similarity of term-frequency vectors; NaN if either paper
    lacks tokens."""
    for pid in (p, q):
        if pid not in corpus.papers:
            raise UnknownIdError(f"unknown paper {pid!r}")
    tp, tq = corpus.papers[p].tokens, corpus.papers[q].tokens
    if tp is None or tq is None:
        return MISSING
    u, v = Counter(tp), Counter(tq)
    dot = sum(u[t] * v[t] for t in u.keys() & v.keys())
    nu = math.sqrt(sum(c * c for c in u.values()))
    nv = math.sqrt(sum(c * c for c in v.values()))
    if nu == 0 or nv == 0:
        return 0.0
    return dot / (nu * nv)
