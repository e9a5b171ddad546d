"""Verse identity: canonical (book, chapter, verse) keys and the book-name table.

Alignment between the source text and every reference version is keyed on
:class:`VerseId`, so canonicalization is strict: a label that is not in the
book table is an error, never a guess, and verse ranges ("1-2") are rejected
rather than silently merged.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import (
    InvalidTableEntryError,
    UnknownBookError,
    UnparseableReferenceError,
)

_LABEL_JUNK = re.compile(r"[\s._\-]+")

# "Book C:V" (book may contain internal spaces) and "Book_C_V".
_REF_COLON = re.compile(r"^\s*(?P<book>.+?)[\s_]+(?P<chapter>\d+)\s*:\s*(?P<verse>\d+)\s*$")
_REF_UNDERSCORE = re.compile(r"^\s*(?P<book>.+?)_(?P<chapter>\d+)_(?P<verse>\d+)\s*$")


def normalize_label(label: str) -> str:
    """Collapse a raw book label to its lookup key (case, spacing, dots, dashes)."""
    return _LABEL_JUNK.sub("", label).lower()


@dataclass(frozen=True, order=True)
class VerseId:
    """Canonical (book, chapter, verse) alignment key.

    Ordering is lexicographic on (book, chapter, verse); canonical corpus
    order (book-table order) comes from :meth:`BookNameTable.sort_key`.
    """

    book: str
    chapter: int
    verse: int

    def __post_init__(self):
        if not self.book:
            raise ValueError("book must be non-empty")
        if self.chapter < 1 or self.verse < 1:
            raise ValueError(
                f"chapter and verse must be >= 1, got {self.chapter}:{self.verse}"
            )

    def __str__(self) -> str:
        return f"{self.book} {self.chapter}:{self.verse}"


def verse_sort_key(verse_id: VerseId) -> tuple:
    """Lexicographic key used where no book table is in scope (logs, removals)."""
    return (verse_id.book, verse_id.chapter, verse_id.verse)


class BookNameTable:
    """Ordered canonical book names plus normalized alias lookup.

    Rows are (canonical_name, aliases, sort_order). Canonical names double as
    their own aliases. Lookup is case-, space- and punctuation-insensitive
    via :func:`normalize_label`.
    """

    def __init__(self, rows):
        self._order: dict[str, int] = {}
        self._aliases: dict[str, str] = {}
        seen_orders = set()
        for canonical, aliases, sort_order in rows:
            if not canonical:
                raise InvalidTableEntryError("book table: empty canonical name")
            if canonical in self._order:
                raise InvalidTableEntryError(
                    f"book table: duplicate canonical name {canonical!r}"
                )
            if sort_order in seen_orders:
                raise InvalidTableEntryError(
                    f"book table: duplicate sort order {sort_order} ({canonical!r})"
                )
            seen_orders.add(sort_order)
            self._order[canonical] = sort_order
            for alias in (canonical, *aliases):
                key = normalize_label(alias)
                if not key:
                    raise InvalidTableEntryError(
                        f"book table: blank alias for {canonical!r}"
                    )
                existing = self._aliases.get(key)
                if existing is not None and existing != canonical:
                    raise InvalidTableEntryError(
                        f"book table: alias {alias!r} maps to both "
                        f"{existing!r} and {canonical!r}"
                    )
                self._aliases[key] = canonical

    @property
    def canonical_names(self) -> list[str]:
        return sorted(self._order, key=self._order.__getitem__)

    def __len__(self) -> int:
        return len(self._order)

    def __contains__(self, label: str) -> bool:
        return normalize_label(label) in self._aliases

    def canonical(self, label: str) -> str:
        """Resolve a raw label to its canonical book name."""
        try:
            return self._aliases[normalize_label(label)]
        except KeyError:
            raise UnknownBookError(f"unknown book label {label!r}") from None

    def order(self, book: str) -> int:
        """Sort position of a canonical book name."""
        try:
            return self._order[book]
        except KeyError:
            raise UnknownBookError(f"unknown canonical book {book!r}") from None

    def sort_key(self, verse_id: VerseId) -> tuple[int, int, int]:
        return (self.order(verse_id.book), verse_id.chapter, verse_id.verse)


def _default_table_path() -> Path:
    return Path(str(resources.files("copticforge").joinpath("data/books.tsv")))


def load_book_table(path: str | Path | None = None) -> BookNameTable:
    """Load a book-name table from TSV.

    Row format: canonical_name, zero or more aliases, sort_order; the final
    column must be the integer sort order. Lines starting with ``#`` and
    blank lines are ignored. ``path=None`` loads the shipped 66-book table.
    """
    table_path = Path(path) if path is not None else _default_table_path()
    rows = []
    with open(table_path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) < 2:
                raise InvalidTableEntryError(
                    f"{table_path}:{lineno}: expected at least 2 tab-separated "
                    f"columns, got {len(fields)}"
                )
            try:
                sort_order = int(fields[-1])
            except ValueError:
                raise InvalidTableEntryError(
                    f"{table_path}:{lineno}: last column must be an integer "
                    f"sort order, got {fields[-1]!r}"
                ) from None
            canonical = fields[0].strip()
            aliases = [a.strip() for a in fields[1:-1] if a.strip()]
            rows.append((canonical, aliases, sort_order))
    return BookNameTable(rows)


def canonicalize_verse_id(raw: str, book_table: BookNameTable) -> VerseId:
    """Parse a "Book C:V" or "Book_C_V" reference into a canonical VerseId.

    Leading zeros and surplus whitespace are normalized away; the operation
    is idempotent on its own string form. Verse ranges ("Mark 1:1-2") and
    anything else outside the two formats raise UnparseableReferenceError.
    """
    match = _REF_COLON.match(raw) or _REF_UNDERSCORE.match(raw)
    if match is None:
        raise UnparseableReferenceError(f"cannot parse verse reference {raw!r}")
    chapter = int(match.group("chapter"))
    verse = int(match.group("verse"))
    if chapter < 1 or verse < 1:
        raise UnparseableReferenceError(
            f"chapter and verse must be positive in {raw!r}"
        )
    book = book_table.canonical(match.group("book"))
    return VerseId(book=book, chapter=chapter, verse=verse)
