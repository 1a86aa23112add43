"""Corpus data model: records, ingestion, integrity checks, time snapshots.

A Corpus is an immutable snapshot of papers, authors, units, journals,
download events, and per-discipline criterion rankings, plus the citation
graph derived from paper reference lists. Construction resolves and indexes
everything once; downstream modules only read.

Dates are day-resolution. Citation edges run citing -> cited. An edge whose
citing paper predates the cited paper is kept but flagged anachronistic
(preprint/postprint date skew is normal in self-archiving corpora). A
reference to an id that never resolves is dropped from the graph but kept in
the paper's raw record.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path

from .errors import CorpusFormatError
from .serialize import json_dumps


@dataclass(frozen=True)
class Paper:
    id: str
    title: str
    journal_id: str
    discipline_id: str
    pub_date: date
    author_ids: tuple[str, ...]
    is_oa: bool
    references: tuple[str, ...]
    tokens: tuple[str, ...] | None = None


@dataclass(frozen=True)
class Author:
    id: str
    name: str
    unit_id: str


@dataclass(frozen=True)
class Unit:
    id: str
    discipline_id: str
    author_ids: tuple[str, ...]
    prior_funding: float
    student_count: int
    submitted_paper_ids: tuple[str, ...]


@dataclass(frozen=True)
class Journal:
    id: str
    name: str


@dataclass(frozen=True)
class DownloadEvent:
    paper_id: str
    at: date


@dataclass(frozen=True)
class CriterionRanking:
    """Panel ranking of a discipline's units. Rank 1 is best; ties allowed."""

    discipline_id: str
    ranks: dict[str, int]

    def validate(self, units: dict[str, Unit]) -> None:
        if not self.ranks:
            raise CorpusFormatError(f"criterion for {self.discipline_id} is empty")
        n = len(self.ranks)
        for unit_id, rank in self.ranks.items():
            unit = units.get(unit_id)
            if unit is None:
                raise CorpusFormatError(
                    f"criterion ranks unknown unit {unit_id!r} in {self.discipline_id}"
                )
            if unit.discipline_id != self.discipline_id:
                raise CorpusFormatError(
                    f"criterion unit {unit_id!r} belongs to {unit.discipline_id}, "
                    f"not {self.discipline_id}"
                )
            if rank < 1 or rank > n:
                raise CorpusFormatError(
                    f"criterion rank {rank} for {unit_id!r} outside 1..{n}"
                )
        if min(self.ranks.values()) != 1:
            raise CorpusFormatError(
                f"criterion for {self.discipline_id} has no rank-1 unit"
            )


@dataclass
class LoadReport:
    """Non-fatal findings collected while linking a corpus."""

    dangling_references: list[tuple[str, str]] = field(default_factory=list)
    unknown_paper_authors: list[tuple[str, str]] = field(default_factory=list)
    orphan_authors: list[str] = field(default_factory=list)
    unknown_unit_members: list[tuple[str, str]] = field(default_factory=list)
    unknown_submitted_papers: list[tuple[str, str]] = field(default_factory=list)
    unsubmittable_papers: list[tuple[str, str]] = field(default_factory=list)
    unknown_download_papers: list[str] = field(default_factory=list)
    early_downloads: list[tuple[str, str]] = field(default_factory=list)
    anachronistic_edges: list[tuple[str, str]] = field(default_factory=list)

    def counts(self) -> dict[str, int]:
        return {
            "dangling_references": len(self.dangling_references),
            "unknown_paper_authors": len(self.unknown_paper_authors),
            "orphan_authors": len(self.orphan_authors),
            "unknown_unit_members": len(self.unknown_unit_members),
            "unknown_submitted_papers": len(self.unknown_submitted_papers),
            "unsubmittable_papers": len(self.unsubmittable_papers),
            "unknown_download_papers": len(self.unknown_download_papers),
            "early_downloads": len(self.early_downloads),
            "anachronistic_edges": len(self.anachronistic_edges),
        }

    def is_clean(self) -> bool:
        return all(v == 0 for v in self.counts().values())

    def to_text(self) -> str:
        lines = ["load report:"]
        for name, count in self.counts().items():
            lines.append(f"  {name}: {count}")
        if self.dangling_references:
            lines.append("  dangling reference details:")
            for citing, missing in self.dangling_references[:50]:
                lines.append(f"    {citing} -> {missing}")
        return "\n".join(lines)

    def to_json(self) -> str:
        payload = {
            "counts": self.counts(),
            "dangling_references": [list(t) for t in self.dangling_references],
            "orphan_authors": list(self.orphan_authors),
            "anachronistic_edges": [list(t) for t in self.anachronistic_edges],
        }
        return json_dumps(payload, indent=2)


@dataclass
class ValidationReport:
    anachronistic_edges: int
    orphan_authors: int
    units_with_zero_papers: int

    def to_text(self) -> str:
        return (
            "validation report:\n"
            f"  anachronistic_edges: {self.anachronistic_edges}\n"
            f"  orphan_authors: {self.orphan_authors}\n"
            f"  units_with_zero_papers: {self.units_with_zero_papers}"
        )


class Corpus:
    """Immutable research corpus with a resolved citation graph.

    All collections are keyed and iterated in sorted-id order, so every
    derived computation is deterministic. Instances are safe to share
    across threads; nothing mutates after __init__.
    """

    def __init__(
        self,
        papers: list[Paper],
        authors: list[Author],
        units: list[Unit],
        journals: list[Journal] | None = None,
        downloads: list[DownloadEvent] | None = None,
        criteria: list[CriterionRanking] | None = None,
        snapshot_date: date | None = None,
        report: LoadReport | None = None,
    ):
        report = report if report is not None else LoadReport()
        self.papers: dict[str, Paper] = {}
        for p in sorted(papers, key=lambda p: p.id):
            if p.id in self.papers:
                raise CorpusFormatError(f"duplicate paper id {p.id!r}")
            if len(set(p.references)) != len(p.references):
                raise CorpusFormatError(f"paper {p.id!r} has duplicate references")
            if p.id in p.references:
                raise CorpusFormatError(f"paper {p.id!r} cites itself")
            self.papers[p.id] = p

        self.authors: dict[str, Author] = {}
        for a in sorted(authors, key=lambda a: a.id):
            if a.id in self.authors:
                raise CorpusFormatError(f"duplicate author id {a.id!r}")
            self.authors[a.id] = a

        self.units: dict[str, Unit] = {}
        for u in sorted(units, key=lambda u: u.id):
            if u.id in self.units:
                raise CorpusFormatError(f"duplicate unit id {u.id!r}")
            self.units[u.id] = u

        journal_ids = {p.journal_id for p in self.papers.values() if p.journal_id}
        given = {j.id: j for j in (journals or [])}
        if len(given) != len(journals or []):
            raise CorpusFormatError("duplicate journal id")
        self.journals: dict[str, Journal] = {
            jid: given.get(jid, Journal(jid, jid))
            for jid in sorted(journal_ids | set(given))
        }

        self.downloads: tuple[DownloadEvent, ...] = tuple(
            sorted(downloads or [], key=lambda d: (d.paper_id, d.at))
        )
        for d in self.downloads:
            paper = self.papers.get(d.paper_id)
            if paper is None:
                report.unknown_download_papers.append(d.paper_id)
            elif d.at < paper.pub_date:
                report.early_downloads.append((d.paper_id, d.at.isoformat()))

        self.criteria: dict[str, CriterionRanking] = {}
        for c in criteria or []:
            if c.discipline_id in self.criteria:
                raise CorpusFormatError(
                    f"duplicate criterion for discipline {c.discipline_id!r}"
                )
            c.validate(self.units)
            self.criteria[c.discipline_id] = c
        self.criteria = dict(sorted(self.criteria.items()))

        # Resolve the citation graph: citing -> cited.
        citers: dict[str, list[str]] = {pid: [] for pid in self.papers}
        resolved: dict[str, list[str]] = {}
        anachronistic: set[tuple[str, str]] = set()
        for pid, p in self.papers.items():
            out = []
            for ref in p.references:
                q = self.papers.get(ref)
                if q is None:
                    report.dangling_references.append((pid, ref))
                    continue
                out.append(ref)
                citers[ref].append(pid)
                if p.pub_date < q.pub_date:
                    anachronistic.add((pid, ref))
                    report.anachronistic_edges.append((pid, ref))
            resolved[pid] = out
        self.cited_by: dict[str, tuple[str, ...]] = {
            pid: tuple(sorted(lst)) for pid, lst in citers.items()
        }
        self.references_of: dict[str, tuple[str, ...]] = {
            pid: tuple(lst) for pid, lst in resolved.items()
        }
        self.anachronistic_edges: frozenset[tuple[str, str]] = frozenset(anachronistic)

        # Cross-reference checks on the people side (non-fatal, reported).
        for pid, p in self.papers.items():
            for aid in p.author_ids:
                if aid not in self.authors:
                    report.unknown_paper_authors.append((pid, aid))
        for aid, a in self.authors.items():
            if a.unit_id not in self.units:
                report.orphan_authors.append(aid)
        for uid, u in self.units.items():
            members = set(u.author_ids)
            for aid in u.author_ids:
                if aid not in self.authors:
                    report.unknown_unit_members.append((uid, aid))
            for spid in u.submitted_paper_ids:
                p = self.papers.get(spid)
                if p is None:
                    report.unknown_submitted_papers.append((uid, spid))
                elif not members.intersection(p.author_ids):
                    report.unsubmittable_papers.append((uid, spid))

        self.author_papers: dict[str, tuple[str, ...]] = {
            aid: () for aid in self.authors
        }
        by_author: dict[str, list[str]] = {aid: [] for aid in self.authors}
        for pid, p in self.papers.items():
            for aid in p.author_ids:
                if aid in by_author:
                    by_author[aid].append(pid)
        self.author_papers = {aid: tuple(lst) for aid, lst in by_author.items()}

        self.downloads_of: dict[str, tuple[date, ...]] = {pid: () for pid in self.papers}
        by_paper: dict[str, list[date]] = {pid: [] for pid in self.papers}
        for d in self.downloads:
            if d.paper_id in by_paper:
                by_paper[d.paper_id].append(d.at)
        self.downloads_of = {pid: tuple(lst) for pid, lst in by_paper.items()}

        observed = [p.pub_date for p in self.papers.values()]
        observed += [d.at for d in self.downloads]
        if snapshot_date is not None:
            self.snapshot_date = snapshot_date
        elif observed:
            self.snapshot_date = max(observed)
        else:
            self.snapshot_date = date(1970, 1, 1)

        self.report = report
        self._cache: dict = {}

    @property
    def disciplines(self) -> list[str]:
        ids = {u.discipline_id for u in self.units.values()}
        ids.update(p.discipline_id for p in self.papers.values())
        return sorted(ids)

    def unit_papers(self, unit_id: str) -> tuple[str, ...]:
        """Submitted papers of a unit that resolve to real papers."""
        u = self.units[unit_id]
        return tuple(pid for pid in u.submitted_paper_ids if pid in self.papers)

    def discipline_units(self, discipline_id: str) -> list[str]:
        return sorted(
            uid for uid, u in self.units.items() if u.discipline_id == discipline_id
        )

    def discipline_papers(self, discipline_id: str) -> list[str]:
        return sorted(
            pid for pid, p in self.papers.items() if p.discipline_id == discipline_id
        )

    def discipline_authors(self, discipline_id: str) -> list[str]:
        out = []
        for aid, a in sorted(self.authors.items()):
            unit = self.units.get(a.unit_id)
            if unit is not None and unit.discipline_id == discipline_id:
                out.append(aid)
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, Corpus):
            return NotImplemented
        return (
            self.papers == other.papers
            and self.authors == other.authors
            and self.units == other.units
            and self.journals == other.journals
            and self.downloads == other.downloads
            and self.criteria == other.criteria
            and self.snapshot_date == other.snapshot_date
        )

    def __repr__(self) -> str:
        return (
            f"Corpus(papers={len(self.papers)}, authors={len(self.authors)}, "
            f"units={len(self.units)}, downloads={len(self.downloads)}, "
            f"snapshot={self.snapshot_date.isoformat()})"
        )


def validate_corpus(corpus: Corpus) -> ValidationReport:
    """Report-only integrity summary; never touches the corpus."""
    zero_paper_units = sum(
        1 for uid in corpus.units if len(corpus.unit_papers(uid)) == 0
    )
    orphans = sum(
        1 for a in corpus.authors.values() if a.unit_id not in corpus.units
    )
    return ValidationReport(
        anachronistic_edges=len(corpus.anachronistic_edges),
        orphan_authors=orphans,
        units_with_zero_papers=zero_paper_units,
    )


def snapshot_at(corpus: Corpus, cutoff: date) -> Corpus:
    """New corpus restricted to papers, edges, and downloads dated <= cutoff.

    Resolved references to out-of-window papers are dropped; references that
    never resolved stay in the raw record, mirroring load behaviour. A cutoff
    before all data yields an empty but valid corpus.
    """
    keep = {pid for pid, p in corpus.papers.items() if p.pub_date <= cutoff}
    papers = []
    for pid in sorted(keep):
        p = corpus.papers[pid]
        refs = tuple(
            r for r in p.references if r in keep or r not in corpus.papers
        )
        papers.append(
            Paper(
                id=p.id,
                title=p.title,
                journal_id=p.journal_id,
                discipline_id=p.discipline_id,
                pub_date=p.pub_date,
                author_ids=p.author_ids,
                is_oa=p.is_oa,
                references=refs,
                tokens=p.tokens,
            )
        )
    units = []
    for u in corpus.units.values():
        submitted = tuple(
            pid
            for pid in u.submitted_paper_ids
            if pid in keep or pid not in corpus.papers
        )
        units.append(
            Unit(
                id=u.id,
                discipline_id=u.discipline_id,
                author_ids=u.author_ids,
                prior_funding=u.prior_funding,
                student_count=u.student_count,
                submitted_paper_ids=submitted,
            )
        )
    downloads = [d for d in corpus.downloads if d.at <= cutoff and d.paper_id in keep]
    return Corpus(
        papers=papers,
        authors=list(corpus.authors.values()),
        units=units,
        journals=list(corpus.journals.values()),
        downloads=downloads,
        criteria=list(corpus.criteria.values()),
        snapshot_date=cutoff,
    )


# ---------------------------------------------------------------------------
# Ingestion
# ---------------------------------------------------------------------------

PAPERS_FILE = "papers.jsonl"
AUTHORS_FILE = "authors.jsonl"
UNITS_FILE = "units.jsonl"
JOURNALS_FILE = "journals.jsonl"
DOWNLOADS_FILE = "downloads.csv"
CRITERION_FILE = "criterion.csv"
MANIFEST_FILE = "manifest.json"


@dataclass(frozen=True)
class CorpusPaths:
    papers: Path
    authors: Path
    units: Path
    downloads: Path
    criterion: Path
    journals: Path | None = None
    manifest: Path | None = None

    @classmethod
    def from_dir(cls, directory: str | Path) -> "CorpusPaths":
        d = Path(directory)
        journals = d / JOURNALS_FILE
        manifest = d / MANIFEST_FILE
        return cls(
            papers=d / PAPERS_FILE,
            authors=d / AUTHORS_FILE,
            units=d / UNITS_FILE,
            downloads=d / DOWNLOADS_FILE,
            criterion=d / CRITERION_FILE,
            journals=journals if journals.exists() else None,
            manifest=manifest if manifest.exists() else None,
        )


def _parse_date(raw: str, path: Path, line: int) -> date:
    try:
        return date.fromisoformat(raw)
    except (TypeError, ValueError):
        raise CorpusFormatError(f"bad date {raw!r}", path, line) from None


def _jsonl_records(path: Path):
    with open(path, encoding="utf-8") as fh:
        for i, raw in enumerate(fh, start=1):
            raw = raw.strip()
            if not raw:
                continue
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise CorpusFormatError(f"bad JSON ({exc.msg})", path, i) from None
            if not isinstance(obj, dict):
                raise CorpusFormatError("record is not an object", path, i)
            yield i, obj


def _require(obj: dict, key: str, path: Path, line: int):
    if key not in obj:
        raise CorpusFormatError(f"missing field {key!r}", path, line)
    return obj[key]


def _str_list(value, key: str, path: Path, line: int) -> tuple[str, ...]:
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise CorpusFormatError(f"field {key!r} must be a list of strings", path, line)
    return tuple(value)


def parse_corpus(paths: CorpusPaths | str | Path) -> Corpus:
    """Load, link, and index a corpus from its ingestion files.

    Duplicate ids, malformed lines/values, and criterion inconsistencies are
    fatal. Unresolved cross-references are collected into corpus.report.
    """
    if not isinstance(paths, CorpusPaths):
        paths = CorpusPaths.from_dir(paths)

    papers = []
    for line, obj in _jsonl_records(paths.papers):
        pub = _parse_date(_require(obj, "pub_date", paths.papers, line), paths.papers, line)
        tokens = obj.get("tokens")
        papers.append(
            Paper(
                id=str(_require(obj, "id", paths.papers, line)),
                title=str(_require(obj, "title", paths.papers, line)),
                journal_id=str(_require(obj, "journal_id", paths.papers, line)),
                discipline_id=str(_require(obj, "discipline_id", paths.papers, line)),
                pub_date=pub,
                author_ids=_str_list(
                    _require(obj, "author_ids", paths.papers, line),
                    "author_ids", paths.papers, line,
                ),
                is_oa=bool(_require(obj, "is_oa", paths.papers, line)),
                references=_str_list(
                    _require(obj, "references", paths.papers, line),
                    "references", paths.papers, line,
                ),
                tokens=None if tokens is None else _str_list(
                    tokens, "tokens", paths.papers, line
                ),
            )
        )

    authors = []
    for line, obj in _jsonl_records(paths.authors):
        authors.append(
            Author(
                id=str(_require(obj, "id", paths.authors, line)),
                name=str(_require(obj, "name", paths.authors, line)),
                unit_id=str(_require(obj, "unit_id", paths.authors, line)),
            )
        )

    units = []
    for line, obj in _jsonl_records(paths.units):
        funding = _require(obj, "prior_funding", paths.units, line)
        students = _require(obj, "student_count", paths.units, line)
        if not isinstance(funding, (int, float)) or funding < 0:
            raise CorpusFormatError("prior_funding must be nonnegative", paths.units, line)
        if not isinstance(students, int) or students < 0:
            raise CorpusFormatError(
                "student_count must be a nonnegative integer", paths.units, line
            )
        units.append(
            Unit(
                id=str(_require(obj, "id", paths.units, line)),
                discipline_id=str(_require(obj, "discipline_id", paths.units, line)),
                author_ids=_str_list(
                    _require(obj, "author_ids", paths.units, line),
                    "author_ids", paths.units, line,
                ),
                prior_funding=float(funding),
                student_count=students,
                submitted_paper_ids=_str_list(
                    _require(obj, "submitted_paper_ids", paths.units, line),
                    "submitted_paper_ids", paths.units, line,
                ),
            )
        )

    journals = []
    if paths.journals is not None:
        for line, obj in _jsonl_records(paths.journals):
            journals.append(
                Journal(
                    id=str(_require(obj, "id", paths.journals, line)),
                    name=str(_require(obj, "name", paths.journals, line)),
                )
            )

    downloads = []
    with open(paths.downloads, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is not None and header != ["paper_id", "date"]:
            raise CorpusFormatError(
                f"expected header paper_id,date, got {','.join(header)}",
                paths.downloads, 1,
            )
        for i, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise CorpusFormatError("expected 2 columns", paths.downloads, i)
            downloads.append(
                DownloadEvent(
                    paper_id=row[0],
                    at=_parse_date(row[1], paths.downloads, i),
                )
            )

    by_disc: dict[str, dict[str, int]] = {}
    with open(paths.criterion, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is not None and header != ["discipline_id", "unit_id", "rank"]:
            raise CorpusFormatError(
                f"expected header discipline_id,unit_id,rank, got {','.join(header)}",
                paths.criterion, 1,
            )
        for i, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise CorpusFormatError("expected 3 columns", paths.criterion, i)
            disc, unit_id, raw_rank = row
            try:
                rank = int(raw_rank)
            except ValueError:
                raise CorpusFormatError(
                    f"bad rank {raw_rank!r}", paths.criterion, i
                ) from None
            ranks = by_disc.setdefault(disc, {})
            if unit_id in ranks:
                raise CorpusFormatError(
                    f"unit {unit_id!r} ranked twice", paths.criterion, i
                )
            ranks[unit_id] = rank
    criteria = [CriterionRanking(disc, ranks) for disc, ranks in sorted(by_disc.items())]

    snapshot = None
    if paths.manifest is not None:
        with open(paths.manifest, encoding="utf-8") as fh:
            manifest = json.load(fh)
        if "snapshot_date" in manifest:
            snapshot = date.fromisoformat(manifest["snapshot_date"])

    return Corpus(
        papers=papers,
        authors=authors,
        units=units,
        journals=journals,
        downloads=downloads,
        criteria=criteria,
        snapshot_date=snapshot,
    )


# ---------------------------------------------------------------------------
# Serialization (inverse of parse_corpus)
# ---------------------------------------------------------------------------


def _paper_obj(p: Paper) -> dict:
    obj = {
        "id": p.id,
        "title": p.title,
        "journal_id": p.journal_id,
        "discipline_id": p.discipline_id,
        "pub_date": p.pub_date.isoformat(),
        "author_ids": list(p.author_ids),
        "is_oa": p.is_oa,
        "references": list(p.references),
    }
    if p.tokens is not None:
        obj["tokens"] = list(p.tokens)
    return obj


def write_corpus(corpus: Corpus, directory: str | Path) -> None:
    """Write the exact ingestion formats back out, sorted for determinism."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    with open(d / PAPERS_FILE, "w", encoding="utf-8") as fh:
        for pid in sorted(corpus.papers):
            fh.write(json.dumps(_paper_obj(corpus.papers[pid])) + "\n")
    with open(d / AUTHORS_FILE, "w", encoding="utf-8") as fh:
        for aid in sorted(corpus.authors):
            a = corpus.authors[aid]
            fh.write(json.dumps({"id": a.id, "name": a.name, "unit_id": a.unit_id}) + "\n")
    with open(d / UNITS_FILE, "w", encoding="utf-8") as fh:
        for uid in sorted(corpus.units):
            u = corpus.units[uid]
            fh.write(
                json.dumps(
                    {
                        "id": u.id,
                        "discipline_id": u.discipline_id,
                        "author_ids": list(u.author_ids),
                        "prior_funding": u.prior_funding,
                        "student_count": u.student_count,
                        "submitted_paper_ids": list(u.submitted_paper_ids),
                    }
                )
                + "\n"
            )
    with open(d / JOURNALS_FILE, "w", encoding="utf-8") as fh:
        for jid in sorted(corpus.journals):
            j = corpus.journals[jid]
            fh.write(json.dumps({"id": j.id, "name": j.name}) + "\n")
    with open(d / DOWNLOADS_FILE, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["paper_id", "date"])
        for ev in corpus.downloads:
            writer.writerow([ev.paper_id, ev.at.isoformat()])
    with open(d / CRITERION_FILE, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["discipline_id", "unit_id", "rank"])
        for disc in sorted(corpus.criteria):
            ranking = corpus.criteria[disc]
            for unit_id in sorted(ranking.ranks):
                writer.writerow([disc, unit_id, ranking.ranks[unit_id]])
    with open(d / MANIFEST_FILE, "w", encoding="utf-8") as fh:
        fh.write(
            json.dumps(
                {
                    "snapshot_date": corpus.snapshot_date.isoformat(),
                    "papers": len(corpus.papers),
                    "authors": len(corpus.authors),
                    "units": len(corpus.units),
                    "downloads": len(corpus.downloads),
                },
                indent=2,
            )
            + "\n"
        )


def corpus_fingerprint(corpus: Corpus) -> str:
    """Stable content hash over the canonical serialized form."""
    buf = io.StringIO()
    for pid in sorted(corpus.papers):
        buf.write(json.dumps(_paper_obj(corpus.papers[pid])))
    for aid in sorted(corpus.authors):
        a = corpus.authors[aid]
        buf.write(json.dumps([a.id, a.name, a.unit_id]))
    for uid in sorted(corpus.units):
        u = corpus.units[uid]
        buf.write(
            json.dumps(
                [u.id, u.discipline_id, list(u.author_ids), u.prior_funding,
                 u.student_count, list(u.submitted_paper_ids)]
            )
        )
    for ev in corpus.downloads:
        buf.write(f"{ev.paper_id}@{ev.at.isoformat()}")
    for disc in sorted(corpus.criteria):
        buf.write(json.dumps([disc, sorted(corpus.criteria[disc].ranks.items())]))
    buf.write(corpus.snapshot_date.isoformat())
    return hashlib.sha256(buf.getvalue().encode("utf-8")).hexdigest()
