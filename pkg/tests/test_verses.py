import pytest

from copticforge import (
    BookNameTable,
    InvalidTableEntryError,
    UnknownBookError,
    UnparseableReferenceError,
    VerseId,
    canonicalize_verse_id,
    normalize_label,
)


def test_default_table_has_66_books(book_table):
    assert len(book_table) == 66
    assert book_table.canonical_names[0] == "Gen"
    assert book_table.canonical_names[-1] == "Rev"


@pytest.mark.parametrize(
    "label,expected",
    [
        ("1Cor", "1Cor"),
        ("1 Corinthians", "1Cor"),
        ("I Corinthians", "1Cor"),
        ("MARK", "Mark"),
        ("song of songs", "Song"),
        ("Apocalypse", "Rev"),
    ],
)
def test_alias_resolution(book_table, label, expected):
    assert book_table.canonical(label) == expected


def test_unknown_label(book_table):
    with pytest.raises(UnknownBookError):
        book_table.canonical("Nonexistent")


def test_normalize_label_strips_junk():
    assert normalize_label("1 Cor.") == "1cor"
    assert normalize_label("Song-of_Songs") == "songofsongs"


def test_book_order_is_canonical(book_table):
    assert book_table.order("Gen") < book_table.order("Mark") < book_table.order("Rev")


def test_canonicalize_plain(book_table):
    assert canonicalize_verse_id("1Cor 1:3", book_table) == VerseId("1Cor", 1, 3)


def test_canonicalize_normalizes_zeros_and_spaces(book_table):
    assert canonicalize_verse_id("1Cor  01:03", book_table) == VerseId("1Cor", 1, 3)


def test_canonicalize_underscore_form(book_table):
    assert canonicalize_verse_id("Mark_2_10", book_table) == VerseId("Mark", 2, 10)


def test_canonicalize_unknown_book(book_table):
    with pytest.raises(UnknownBookError):
        canonicalize_verse_id("Nonexistent 1:1", book_table)


@pytest.mark.parametrize("raw", ["Mark 1:1-2", "Mark 1", "Mark 0:3", "", "1:1"])
def test_canonicalize_rejects_ranges_and_garbage(book_table, raw):
    with pytest.raises(UnparseableReferenceError):
        canonicalize_verse_id(raw, book_table)


def test_canonicalize_idempotent(book_table):
    vid = canonicalize_verse_id("1 Corinthians 12:31", book_table)
    assert canonicalize_verse_id(str(vid), book_table) == vid


def test_verse_id_invariants():
    with pytest.raises(ValueError):
        VerseId("", 1, 1)
    with pytest.raises(ValueError):
        VerseId("Gen", 0, 1)
    with pytest.raises(ValueError):
        VerseId("Gen", 1, 0)


def test_table_rejects_alias_collision():
    with pytest.raises(InvalidTableEntryError):
        BookNameTable([("Gen", ["Alpha"], 1), ("Exod", ["alpha"], 2)])


def test_table_rejects_duplicate_sort_order():
    with pytest.raises(InvalidTableEntryError):
        BookNameTable([("Gen", [], 1), ("Exod", [], 1)])
