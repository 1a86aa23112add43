"""Link-analysis scores over the citation graph: HITS and PageRank.

Both run power iteration over the citing -> cited edge list, L1-normalize,
and stop when the largest component change drops below 1e-9 (200 iterations
cap). Results are cached on the corpus, keyed by parameters, so repeated
battery builds reuse them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .corpus import Corpus
from .errors import DegenerateInputError

TOL = 1e-9
MAX_ITER = 200


@dataclass(frozen=True)
class GraphScores:
    """Per-paper link scores; each populated vector is L1-normalized unless
    the degenerate flag is set (edgeless graph -> all-zero HITS vectors)."""

    hub: dict[str, float] = field(default_factory=dict)
    authority: dict[str, float] = field(default_factory=dict)
    pagerank: dict[str, float] = field(default_factory=dict)
    degenerate: bool = False


def _edge_arrays(corpus: Corpus):
    ids = list(corpus.papers)
    index = {pid: i for i, pid in enumerate(ids)}
    src, dst = [], []
    for pid in ids:
        i = index[pid]
        for ref in corpus.references_of[pid]:
            src.append(i)
            dst.append(index[ref])
    return ids, np.asarray(src, dtype=np.intp), np.asarray(dst, dtype=np.intp)


def _l1(v: np.ndarray) -> np.ndarray:
    s = v.sum()
    return v / s if s > 0 else v


def hits_scores(corpus: Corpus) -> GraphScores:
    """Mutual-reinforcement hub/authority scores.

    authority <- sum of citers' hubs; hub <- sum of cited papers' (new)
    authorities; both L1-normalized every round. Isolated papers score 0;
    an edgeless graph yields all zeros with the degenerate flag set.
    """
    cached = corpus._cache.get("hits")
    if cached is not None:
        return cached
    ids, src, dst = _edge_arrays(corpus)
    n = len(ids)
    if n == 0 or len(src) == 0:
        zeros = {pid: 0.0 for pid in ids}
        scores = GraphScores(hub=zeros, authority=dict(zeros), degenerate=True)
        corpus._cache["hits"] = scores
        return scores
    hub = np.full(n, 1.0 / n)
    auth = np.full(n, 1.0 / n)
    for _ in range(MAX_ITER):
        new_auth = _l1(np.bincount(dst, weights=hub[src], minlength=n))
        new_hub = _l1(np.bincount(src, weights=new_auth[dst], minlength=n))
        delta = max(np.abs(new_auth - auth).max(), np.abs(new_hub - hub).max())
        auth, hub = new_auth, new_hub
        if delta < TOL:
            break
    scores = GraphScores(
        hub={pid: float(hub[i]) for i, pid in enumerate(ids)},
        authority={pid: float(auth[i]) for i, pid in enumerate(ids)},
    )
    corpus._cache["hits"] = scores
    return scores


def pagerank(corpus: Corpus, damping: float = 0.85) -> dict[str, float]:
    """Damped random-surfer fixed point; dangling mass spread uniformly."""
    if not 0 < damping < 1:
        raise ValueError("damping must lie in (0, 1)")
    key = ("pagerank", damping)
    cached = corpus._cache.get(key)
    if cached is not None:
        return cached
    ids, src, dst = _edge_arrays(corpus)
    n = len(ids)
    if n == 0:
        raise DegenerateInputError("pagerank: no nodes")
    outdeg = np.bincount(src, minlength=n).astype(float)
    dangling = outdeg == 0
    safe_out = np.where(dangling, 1.0, outdeg)
    x = np.full(n, 1.0 / n)
    for _ in range(MAX_ITER):
        share = x / safe_out
        flow = np.bincount(dst, weights=share[src], minlength=n) if len(src) else np.zeros(n)
        mass = x[dangling].sum()
        new_x = (1.0 - damping) / n + damping * (flow + mass / n)
        if np.abs(new_x - x).sum() < TOL:
            x = new_x
            break
        x = new_x
    result = {pid: float(x[i]) for i, pid in enumerate(ids)}
    corpus._cache[key] = result
    return result
