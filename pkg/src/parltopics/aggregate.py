"""Summary tables derived from the trained model and the filtered records.

Produces the per-(speaker, year) proportion table, yearly topic time series
(overall or sliced by party), and word-count roll-ups by party/term and by
speaker. All functions are pure and invariant under input permutation where
the contract says so.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .corpus import SpeechRecord, TokenizedDocument
from .errors import JoinError
from .lda import TopicModel, renormalize_kept

WEIGHTINGS = ("words", "uniform")


@dataclass
class SpeakerYearRow:
    """Topic proportions of one speaker in one year.

    ``proportions`` ranges over the model's kept topics (ascending topic id)
    and sums to one; ``words_spoken`` is the raw word count behind the row's
    document.
    """

    speaker_id: str
    party: str
    year: int
    term: int
    proportions: np.ndarray
    words_spoken: int


@dataclass
class TopicTimeSeries:
    """Yearly proportion of one topic, optionally restricted to a party."""

    topic_id: int
    series: dict[int, float]
    party: str | None = None


def speaker_year_table(
    model: TopicModel, docs: Sequence[TokenizedDocument]
) -> list[SpeakerYearRow]:
    """One row per document: kept-topic proportions plus metadata.

    ``docs`` must align 1:1 with the model's theta rows (the order they were
    trained in); a length mismatch raises :class:`JoinError`.
    """
    if model.theta.shape[0] != len(docs):
        raise JoinError(
            f"model covers {model.theta.shape[0]} documents but metadata covers "
            f"{len(docs)} (first doc: {docs[0].doc_id if docs else 'none'})"
        )
    rows = []
    for i, doc in enumerate(docs):
        rows.append(
            SpeakerYearRow(
                speaker_id=doc.speaker_id,
                party=doc.party,
                year=doc.year,
                term=doc.term,
                proportions=renormalize_kept(model.theta[i], model.keep_mask),
                words_spoken=doc.word_count_raw,
            )
        )
    return rows


def yearly_topic_series(
    rows: Sequence[SpeakerYearRow],
    topic_ids: Sequence[int],
    party: str | None = None,
    weighting: str = "words",
) -> list[TopicTimeSeries]:
    """Per-topic series of yearly proportions.

    For each year the speaker proportion vectors are averaged, weighted by
    words spoken (default) or uniformly, then renormalized over the kept
    topics so the values across topics sum to one for every year. Years with
    no matching speakers are omitted, not zero-filled.
    """
    if weighting not in WEIGHTINGS:
        raise ValueError(f"weighting must be one of {WEIGHTINGS}, got {weighting!r}")
    matching = [r for r in rows if party is None or r.party == party]
    by_year: dict[int, list[SpeakerYearRow]] = {}
    for row in matching:
        by_year.setdefault(row.year, []).append(row)

    yearly: dict[int, np.ndarray] = {}
    for year in sorted(by_year):
        members = by_year[year]
        if weighting == "words":
            weights = np.array([r.words_spoken for r in members], dtype=float)
            if weights.sum() == 0:
                weights = np.ones(len(members))
        else:
            weights = np.ones(len(members))
        stacked = np.vstack([r.proportions for r in members])
        mean = weights @ stacked / weights.sum()
        yearly[year] = mean / mean.sum()

    return [
        TopicTimeSeries(
            topic_id=int(topic),
            series={year: float(values[k]) for year, values in yearly.items()},
            party=party,
        )
        for k, topic in enumerate(topic_ids)
    ]


def words_per_party_per_term(
    records: Sequence[SpeechRecord],
) -> dict[tuple[int, str], int]:
    """Exact whitespace word counts summed by (term, party)."""
    totals: Counter = Counter()
    for record in records:
        totals[(record.term, record.party)] += record.word_count()
    return dict(totals)


def words_per_speaker(records: Sequence[SpeechRecord]) -> dict[str, int]:
    """Exact whitespace word counts summed by speaker over all terms."""
    totals: Counter = Counter()
    for record in records:
        totals[record.speaker_id] += record.word_count()
    return dict(totals)
