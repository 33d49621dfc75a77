"""Speech corpus ingestion.

Parses line-delimited speech records, removes short speeches by raw word
count, tokenizes, and builds integer-encoded documents grouped by
(speaker, year) together with the vocabulary.
"""

from __future__ import annotations

import hashlib
import json
import re
from collections import Counter
from dataclasses import dataclass
from datetime import date
from typing import Iterable, Sequence

from .errors import CorpusValidationError, EmptyCorpusError

REQUIRED_FIELDS = (
    "speech_id",
    "speaker_id",
    "speaker_name",
    "party",
    "date",
    "term",
    "text",
)

# Speeches of at most min_words - 1 whitespace words are dropped.
DEFAULT_MIN_WORDS = 151

# Tokens shorter than this are dropped after splitting.
MIN_TOKEN_LENGTH = 3

_TOKEN_RE = re.compile(r"[a-z]+")


@dataclass(frozen=True)
class SpeechRecord:
    """One attributed speech."""

    speech_id: str
    speaker_id: str
    speaker_name: str
    party: str
    date: date
    term: int
    text: str

    @property
    def year(self) -> int:
        return self.date.year

    def word_count(self) -> int:
        """Number of maximal whitespace-separated substrings in the raw text."""
        return len(self.text.split())


class Vocabulary:
    """Bijective token <-> integer id map with ids dense in [0, V)."""

    def __init__(self) -> None:
        self.token_to_id: dict[str, int] = {}
        self.id_to_token: list[str] = []

    def add(self, token: str) -> int:
        """Return the id of ``token``, assigning the next free id if new."""
        token_id = self.token_to_id.get(token)
        if token_id is None:
            token_id = len(self.id_to_token)
            self.token_to_id[token] = token_id
            self.id_to_token.append(token)
        return token_id

    def __len__(self) -> int:
        return len(self.id_to_token)

    def __contains__(self, token: str) -> bool:
        return token in self.token_to_id

    def content_hash(self) -> str:
        """SHA-256 over the id-ordered token list; identifies this vocabulary."""
        joined = "\n".join(self.id_to_token).encode("utf-8")
        return hashlib.sha256(joined).hexdigest()


@dataclass
class TokenizedDocument:
    """Integer-encoded tokens of all kept speeches of one speaker in one year.

    ``party`` and ``term`` follow the majority of the grouped speeches, ties
    broken by earliest appearance. ``word_count_raw`` is the summed raw
    whitespace word count of the source speeches, before tokenization.
    """

    doc_id: str
    speaker_id: str
    year: int
    party: str
    term: int
    tokens: list[int]
    word_count_raw: int

    @property
    def group_key(self) -> tuple[str, int]:
        return (self.speaker_id, self.year)


@dataclass
class CorpusStats:
    """Per-speech word-count histogram plus kept/removed bookkeeping."""

    word_count_histogram: Counter
    removed_count: int
    kept_count: int

    @property
    def total(self) -> int:
        return self.removed_count + self.kept_count


def parse_corpus(path, fmt: str = "jsonl") -> list[SpeechRecord]:
    """Read attributed speeches from a line-delimited file.

    Each non-blank line must be a JSON object with the fields speech_id,
    speaker_id, speaker_name, party, date (ISO-8601), term and text. Input
    order is preserved. Every malformed line is collected and reported in a
    single :class:`CorpusValidationError` carrying line numbers and field
    names; unreadable files raise the underlying ``OSError``.
    """
    if fmt != "jsonl":
        raise ValueError(f"unsupported corpus format: {fmt!r}")

    records: list[SpeechRecord] = []
    problems: list[tuple[int, str, str]] = []
    first_line_of_id: dict[str, int] = {}

    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                problems.append((line_no, "<record>", f"invalid JSON: {exc.msg}"))
                continue
            if not isinstance(raw, dict):
                problems.append((line_no, "<record>", "record is not an object"))
                continue
            missing = [
                name for name in REQUIRED_FIELDS
                if raw.get(name) in (None, "")
            ]
            if missing:
                problems.extend(
                    (line_no, name, "missing required field") for name in missing
                )
                continue
            try:
                when = date.fromisoformat(str(raw["date"]))
            except ValueError:
                problems.append(
                    (line_no, "date", f"not an ISO-8601 date: {raw['date']!r}")
                )
                continue
            try:
                term = int(raw["term"])
            except (TypeError, ValueError):
                problems.append((line_no, "term", f"not an integer: {raw['term']!r}"))
                continue
            if term < 1:
                problems.append((line_no, "term", f"must be >= 1, got {term}"))
                continue
            speech_id = str(raw["speech_id"])
            if speech_id in first_line_of_id:
                problems.append(
                    (
                        line_no,
                        "speech_id",
                        f"duplicate of line {first_line_of_id[speech_id]}: {speech_id!r}",
                    )
                )
                continue
            first_line_of_id[speech_id] = line_no
            records.append(
                SpeechRecord(
                    speech_id=speech_id,
                    speaker_id=str(raw["speaker_id"]),
                    speaker_name=str(raw["speaker_name"]),
                    party=str(raw["party"]),
                    date=when,
                    term=term,
                    text=str(raw["text"]),
                )
            )

    if problems:
        raise CorpusValidationError(problems)
    return records


def filter_short(
    records: Sequence[SpeechRecord], min_words: int = DEFAULT_MIN_WORDS
) -> tuple[list[SpeechRecord], CorpusStats]:
    """Split records into (kept, stats) by raw whitespace word count.

    A record is kept iff its word count is at least ``min_words``; the
    histogram covers every input record, kept or removed.
    """
    if min_words < 1:
        raise ValueError(f"min_words must be >= 1, got {min_words}")
    histogram: Counter = Counter()
    kept: list[SpeechRecord] = []
    total = 0
    for record in records:
        count = record.word_count()
        histogram[count] += 1
        total += 1
        if count >= min_words:
            kept.append(record)
    stats = CorpusStats(
        word_count_histogram=histogram,
        removed_count=total - len(kept),
        kept_count=len(kept),
    )
    return kept, stats


def tokenize(text: str, stopwords: frozenset[str] | set[str] = frozenset()) -> list[str]:
    """Lowercase and split into tokens, dropping short tokens and stopwords.

    Tokens are maximal runs of ASCII letters after lowercasing; anything
    else, including digits and accented characters, acts as a separator.
    Tokens shorter than three characters and stopword tokens are removed.
    """
    return [
        token
        for token in _TOKEN_RE.findall(text.lower())
        if len(token) >= MIN_TOKEN_LENGTH and token not in stopwords
    ]


def load_stopwords(paths: Iterable[str]) -> frozenset[str]:
    """Union of stopword files: one token per line, UTF-8, blank lines ignored."""
    words: set[str] = set()
    for path in paths:
        with open(path, encoding="utf-8") as handle:
            for line in handle:
                word = line.strip()
                if word:
                    words.add(word)
    return frozenset(words)


def _majority(values: Iterable) -> object:
    """Most frequent value; ties broken by earliest appearance."""
    counts: Counter = Counter()
    first_seen: dict = {}
    for position, value in enumerate(values):
        counts[value] += 1
        first_seen.setdefault(value, position)
    return max(counts, key=lambda value: (counts[value], -first_seen[value]))


def build_corpus(
    records: Sequence[SpeechRecord],
    stopwords: frozenset[str] | set[str] = frozenset(),
) -> tuple[list[TokenizedDocument], Vocabulary]:
    """Group records by (speaker, year), tokenize, and integer-encode.

    Documents appear in first-appearance order of their group key and carry
    the concatenated token streams of their speeches in input order. Token
    ids are assigned in first-appearance order over that document stream, so
    the vocabulary covers exactly the surviving tokens. Documents left with
    no tokens are dropped; if none survive, :class:`EmptyCorpusError` is
    raised.
    """
    groups: dict[tuple[str, int], list[SpeechRecord]] = {}
    for record in records:
        groups.setdefault((record.speaker_id, record.year), []).append(record)

    vocabulary = Vocabulary()
    documents: list[TokenizedDocument] = []
    for (speaker_id, year), members in groups.items():
        tokens: list[int] = []
        for record in members:
            tokens.extend(
                vocabulary.add(token) for token in tokenize(record.text, stopwords)
            )
        if not tokens:
            continue
        documents.append(
            TokenizedDocument(
                doc_id=f"{speaker_id}:{year}",
                speaker_id=speaker_id,
                year=year,
                party=_majority(record.party for record in members),
                term=_majority(record.term for record in members),
                tokens=tokens,
                word_count_raw=sum(record.word_count() for record in members),
            )
        )

    if not documents:
        raise EmptyCorpusError("no documents with surviving tokens")
    return documents, vocabulary
