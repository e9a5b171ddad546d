"""Verse-ID alignment of source records with reference versions, plus cleaning.

Alignment is an exact key join on :class:`~copticforge.verses.VerseId`; there
is no fuzzy matching. Every pair dropped anywhere in the process becomes a
:class:`RemovalRecord` so the whole run is reconstructible from the logs.

Cleaning removes pairs whose source is only ellipses/brackets (damaged or
absent verses) or whose reference is blank, and strips leading inline
annotations like "(1.2)" from reference texts. Removal predicates are
exposed (:func:`removal_reason_holds`) so logged records can be re-verified
against their stored originals.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path

from sklearn.base import BaseEstimator, TransformerMixin

from .errors import DuplicateVerseIdError, InvalidTableEntryError
from .validation import check_pairs
from .verses import BookNameTable, VerseId, canonicalize_verse_id, verse_sort_key


@dataclass(frozen=True)
class ReferenceVersion:
    """One modern-language Bible version keyed by verse id."""

    label: str
    verses: dict[VerseId, str]

    def __post_init__(self):
        if not self.label:
            raise ValueError("version label must be non-empty")


@dataclass(frozen=True)
class AlignedPair:
    """One (source verse, reference verse) training/evaluation unit."""

    id: VerseId
    source_text: str
    reference_text: str
    version: str


class RemovalReason(str, Enum):
    MISSING_SOURCE = "MissingSource"
    MISSING_REFERENCE = "MissingReference"
    ELLIPSIS_ONLY_SOURCE = "EllipsisOnlySource"
    BLANK_REFERENCE = "BlankReference"


@dataclass(frozen=True)
class RemovalRecord:
    """Why one (verse, version) slot was dropped, with the original texts."""

    id: VerseId
    version: str
    reason: RemovalReason
    original_source: str
    original_reference: str


_ELLIPSIS_BODY = set(".[]…")
_ELLIPSIS_DOTS = set(".…")
_ANNOTATION = re.compile(r"^\(\d+(?:\.\d+)*\)\s*")


def is_ellipsis_only(text: str) -> bool:
    """True when the text is only dots/brackets/ellipsis/whitespace with at
    least one dot or ellipsis character ("[...]", "...", "…")."""
    has_dot = False
    for char in text:
        if char in _ELLIPSIS_DOTS:
            has_dot = True
        elif char not in _ELLIPSIS_BODY and not char.isspace():
            return False
    return has_dot


def strip_annotations(text: str) -> str:
    """Remove leading "(1)", "(1.2)", "(1.2.3)" markers and trailing space.

    Applied to a fixpoint so stacked markers cannot survive one cleaning
    pass; non-matching prefixes are never touched.
    """
    while True:
        match = _ANNOTATION.match(text)
        if match is None or match.end() == 0:
            return text
        text = text[match.end():]


def _blank_reference(text: str) -> bool:
    # Blank after annotation stripping: "(1.2)" alone is as empty as "   ".
    return not strip_annotations(text).strip()


def removal_reason_holds(record: RemovalRecord) -> bool:
    """Re-evaluate a removal record's predicate on its stored originals."""
    if record.reason is RemovalReason.MISSING_SOURCE:
        return record.original_source == ""
    if record.reason is RemovalReason.MISSING_REFERENCE:
        return record.original_reference == ""
    if record.reason is RemovalReason.ELLIPSIS_ONLY_SOURCE:
        return is_ellipsis_only(record.original_source)
    if record.reason is RemovalReason.BLANK_REFERENCE:
        return _blank_reference(record.original_reference)
    return False


def load_reference_version(
    label: str, path: str | Path, book_table: BookNameTable
) -> ReferenceVersion:
    """Load one reference version from "Book C:V<TAB>text" TSV.

    Empty verse texts are loaded as-is (they are removed later by
    :func:`clean`, with a log entry). Duplicate verse ids are an error.
    """
    verses: dict[VerseId, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            if "\t" not in line:
                raise InvalidTableEntryError(
                    f"{path}:{lineno}: expected 'Book C:V<TAB>text'"
                )
            ref, text = line.split("\t", 1)
            verse_id = canonicalize_verse_id(ref, book_table)
            if verse_id in verses:
                raise DuplicateVerseIdError(
                    f"{path}:{lineno}: duplicate verse {verse_id}"
                )
            verses[verse_id] = text
    return ReferenceVersion(label=label, verses=verses)


def align(
    source, versions
) -> tuple[list[AlignedPair], list[RemovalRecord]]:
    """Join source verse records with every reference version by verse id.

    Returns the pre-cleaning pairs plus removal records for the slots where
    one side is absent: a source verse missing from a version yields
    MissingReference, a version verse with no source yields MissingSource.
    """
    labels = [v.label for v in versions]
    if len(set(labels)) != len(labels):
        raise ValueError(f"version labels must be distinct, got {labels}")

    pairs: list[AlignedPair] = []
    removals: list[RemovalRecord] = []
    source_ids = {record.id for record in source}

    for record in source:
        for version in versions:
            reference = version.verses.get(record.id)
            if reference is None:
                removals.append(
                    RemovalRecord(
                        id=record.id,
                        version=version.label,
                        reason=RemovalReason.MISSING_REFERENCE,
                        original_source=record.text,
                        original_reference="",
                    )
                )
            else:
                pairs.append(
                    AlignedPair(
                        id=record.id,
                        source_text=record.text,
                        reference_text=reference,
                        version=version.label,
                    )
                )

    for version in versions:
        for verse_id in sorted(version.verses, key=verse_sort_key):
            if verse_id not in source_ids:
                removals.append(
                    RemovalRecord(
                        id=verse_id,
                        version=version.label,
                        reason=RemovalReason.MISSING_SOURCE,
                        original_source="",
                        original_reference=version.verses[verse_id],
                    )
                )

    return pairs, removals


def clean(pairs) -> tuple[list[AlignedPair], list[RemovalRecord]]:
    """Apply the cleaning rules; kept + removed partition the input.

    Order of checks per pair: ellipsis-only source, then blank reference
    (evaluated after annotation stripping), then annotation stripping on the
    kept reference text. Idempotent: cleaning the kept list again removes
    nothing and changes no text.
    """
    kept: list[AlignedPair] = []
    removed: list[RemovalRecord] = []
    for pair in pairs:
        if is_ellipsis_only(pair.source_text):
            removed.append(
                RemovalRecord(
                    id=pair.id,
                    version=pair.version,
                    reason=RemovalReason.ELLIPSIS_ONLY_SOURCE,
                    original_source=pair.source_text,
                    original_reference=pair.reference_text,
                )
            )
            continue
        if _blank_reference(pair.reference_text):
            removed.append(
                RemovalRecord(
                    id=pair.id,
                    version=pair.version,
                    reason=RemovalReason.BLANK_REFERENCE,
                    original_source=pair.source_text,
                    original_reference=pair.reference_text,
                )
            )
            continue
        stripped = strip_annotations(pair.reference_text)
        if stripped != pair.reference_text:
            pair = replace(pair, reference_text=stripped)
        kept.append(pair)
    return kept, removed


@dataclass(frozen=True)
class StatReport:
    """Per-version and global counts for one corpus."""

    per_version: dict[str, int]
    total_pairs: int
    distinct_books: int
    distinct_verses: int

    def to_dict(self) -> dict:
        return {
            "per_version": {k: self.per_version[k] for k in sorted(self.per_version)},
            "total_pairs": self.total_pairs,
            "distinct_books": self.distinct_books,
            "distinct_verses": self.distinct_verses,
        }


def corpus_stats(pairs) -> StatReport:
    """Count pairs per version, total pairs, distinct books and verse ids."""
    per_version: dict[str, int] = {}
    books = set()
    verse_ids = set()
    total = 0
    for pair in pairs:
        total += 1
        per_version[pair.version] = per_version.get(pair.version, 0) + 1
        books.add(pair.id.book)
        verse_ids.add(pair.id)
    return StatReport(
        per_version=per_version,
        total_pairs=total,
        distinct_books=len(books),
        distinct_verses=len(verse_ids),
    )


class PairCleaner(BaseEstimator, TransformerMixin):
    """Transformer form of :func:`clean` for pipeline composition.

    ``transform`` returns the kept pairs; the removal records from the last
    call are available as ``removed_``.
    """

    def fit(self, X, y=None):
        return self

    def transform(self, X) -> list[AlignedPair]:
        pairs = check_pairs(X)
        kept, removed = clean(pairs)
        self.removed_ = removed
        return kept
