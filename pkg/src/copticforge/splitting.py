"""Leakage-free train/test splits at book granularity.

Whole books go to one side or the other, so near-duplicate verses from the
same book can never straddle the split. Verse-level random splits are
deliberately not offered.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

from .errors import EmptyTestSplitWarning
from .verses import BookNameTable

DEFAULT_TEST_BOOKS = ("1Cor", "Mark", "Gal", "Heb")


@dataclass(frozen=True)
class SplitConfig:
    """Which canonical books form the held-out test side."""

    test_books: frozenset[str] = field(
        default_factory=lambda: frozenset(DEFAULT_TEST_BOOKS)
    )

    def __post_init__(self):
        object.__setattr__(self, "test_books", frozenset(self.test_books))
        if not self.test_books:
            raise ValueError("test_books must be non-empty")

    def validate_books(self, table: BookNameTable) -> None:
        unknown = sorted(b for b in self.test_books if b not in table)
        if unknown:
            raise ValueError(f"test_books not in the book table: {unknown}")


def split(pairs, cfg: SplitConfig | None = None):
    """Partition pairs into (train, test) by book membership.

    Stable: each side preserves the input order. Emits
    :class:`EmptyTestSplitWarning` when nothing lands in the test side.
    """
    if cfg is None:
        cfg = SplitConfig()
    train = []
    test = []
    for pair in pairs:
        if pair.id.book in cfg.test_books:
            test.append(pair)
        else:
            train.append(pair)
    if not test:
        warnings.warn(
            f"no pair matched any test book {sorted(cfg.test_books)}",
            EmptyTestSplitWarning,
            stacklevel=2,
        )
    return train, test


def verify_no_leakage(train, test) -> bool:
    """True iff no verse id and no book occurs on both sides."""
    train_ids = {p.id for p in train}
    test_ids = {p.id for p in test}
    if train_ids & test_ids:
        return False
    train_books = {p.id.book for p in train}
    test_books = {p.id.book for p in test}
    return not (train_books & test_books)
