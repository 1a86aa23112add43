"""Shared fixture builders for corpus tests."""

from datetime import date

import pytest

from scimetrics.corpus import (
    Author,
    Corpus,
    CriterionRanking,
    DownloadEvent,
    Paper,
    Unit,
)


def make_paper(pid, pub, refs=(), authors=("a1",), journal="j1", disc="phys",
               is_oa=False, tokens=None, title=None):
    return Paper(
        id=pid,
        title=title if title is not None else f"Paper {pid}",
        journal_id=journal,
        discipline_id=disc,
        pub_date=pub,
        author_ids=tuple(authors),
        is_oa=is_oa,
        references=tuple(refs),
        tokens=None if tokens is None else tuple(tokens),
    )


def make_unit(uid, disc="phys", authors=("a1",), submitted=(), funding=0.0,
              students=0):
    return Unit(
        id=uid,
        discipline_id=disc,
        author_ids=tuple(authors),
        prior_funding=funding,
        student_count=students,
        submitted_paper_ids=tuple(submitted),
    )


@pytest.fixture
def chain_corpus():
    """Three papers A -> B -> C across 2001..2003, one author, one unit."""
    papers = [
        make_paper("pC", date(2001, 1, 1)),
        make_paper("pB", date(2002, 6, 1), refs=("pC",)),
        make_paper("pA", date(2003, 3, 1), refs=("pB",)),
    ]
    authors = [Author("a1", "Ada One", "u1")]
    units = [make_unit("u1", submitted=("pA", "pB", "pC"))]
    criteria = [CriterionRanking("phys", {"u1": 1})]
    downloads = [
        DownloadEvent("pC", date(2001, 2, 1)),
        DownloadEvent("pC", date(2001, 2, 1)),
        DownloadEvent("pA", date(2003, 4, 1)),
    ]
    return Corpus(papers, authors, units, downloads=downloads, criteria=criteria)
