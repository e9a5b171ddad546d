import pytest

from copticforge import (
    DanglingReferenceError,
    DuplicateVerseIdError,
    MalformedXmlError,
    UnknownBookError,
    VerseId,
    parse_document_set,
)

from conftest import feat_xml, mark_xml, range_href, token_xml

PAUL = "ⲡⲁⲩⲗⲟⲥ"
APOSTLE = "ⲡⲁⲡⲟⲥⲧⲟⲗⲟⲥ"


def test_single_span_verse(book_table):
    records = parse_document_set(
        token_xml([("t1", PAUL), ("t2", APOSTLE)]),
        mark_xml([("m1", range_href("t1", "t2"))]),
        feat_xml([("m1", "1Cor 1:1")]),
        book_table,
    )
    assert len(records) == 1
    record = records[0]
    assert record.id == VerseId("1Cor", 1, 1)
    assert record.text == f"{PAUL} {APOSTLE}"
    assert record.token_count == 2
    assert record.source_doc == "doc1"


def test_empty_feat_file_yields_no_records(book_table):
    records = parse_document_set(
        token_xml([("t1", PAUL)]),
        mark_xml([("m1", "#t1")]),
        feat_xml([]),
        book_table,
    )
    assert records == []


def test_records_sorted_by_book_chapter_verse(book_table):
    # shuffled input; oracle: manual sort of the fixture's verse ids
    tokens = token_xml([("t1", "a"), ("t2", "b"), ("t3", "c")])
    marks = mark_xml([("m1", "#t1"), ("m2", "#t2"), ("m3", "#t3")])
    feats = feat_xml([("m1", "Mark 1:2"), ("m2", "Gen 2:1"), ("m3", "Mark 1:1")])
    records = parse_document_set(tokens, marks, feats, book_table)
    assert [r.id for r in records] == [
        VerseId("Gen", 2, 1),
        VerseId("Mark", 1, 1),
        VerseId("Mark", 1, 2),
    ]


def test_single_token_href(book_table):
    records = parse_document_set(
        token_xml([("t1", PAUL)]),
        mark_xml([("m1", "#t1")]),
        feat_xml([("m1", "Gen 1:1")]),
        book_table,
    )
    assert records[0].text == PAUL
    assert records[0].token_count == 1


def test_doc_id_override(book_table):
    records = parse_document_set(
        token_xml([("t1", "x")], docid="ignored"),
        mark_xml([("m1", "#t1")]),
        feat_xml([("m1", "Gen 1:1")]),
        book_table,
        doc_id="custom.xml",
    )
    assert records[0].source_doc == "custom.xml"


def test_malformed_xml(book_table):
    with pytest.raises(MalformedXmlError):
        parse_document_set(b"<broken", mark_xml([]), feat_xml([]), book_table)


def test_outside_subset_rejected(book_table):
    no_token_list = b'<?xml version="1.0"?><paula><stuff/></paula>'
    with pytest.raises(MalformedXmlError):
        parse_document_set(no_token_list, mark_xml([]), feat_xml([]), book_table)


def test_unexpected_children_rejected(book_table):
    bad = b'<paula><tokenList><other id="t1">x</other></tokenList></paula>'
    with pytest.raises(MalformedXmlError):
        parse_document_set(bad, mark_xml([]), feat_xml([]), book_table)


def test_dangling_mark_to_token(book_table):
    with pytest.raises(DanglingReferenceError):
        parse_document_set(
            token_xml([("t1", "x")]),
            mark_xml([("m1", "#t9")]),
            feat_xml([("m1", "Gen 1:1")]),
            book_table,
        )


def test_dangling_feat_to_mark(book_table):
    with pytest.raises(DanglingReferenceError):
        parse_document_set(
            token_xml([("t1", "x")]),
            mark_xml([("m1", "#t1")]),
            feat_xml([("m9", "Gen 1:1")]),
            book_table,
        )


def test_inverted_range_rejected(book_table):
    with pytest.raises(MalformedXmlError):
        parse_document_set(
            token_xml([("t1", "x"), ("t2", "y")]),
            mark_xml([("m1", range_href("t2", "t1"))]),
            feat_xml([("m1", "Gen 1:1")]),
            book_table,
        )


def test_unknown_book_aborts(book_table):
    with pytest.raises(UnknownBookError):
        parse_document_set(
            token_xml([("t1", "x")]),
            mark_xml([("m1", "#t1")]),
            feat_xml([("m1", "Nowhere 1:1")]),
            book_table,
        )


def test_duplicate_verse_id(book_table):
    with pytest.raises(DuplicateVerseIdError):
        parse_document_set(
            token_xml([("t1", "x"), ("t2", "y")]),
            mark_xml([("m1", "#t1"), ("m2", "#t2")]),
            feat_xml([("m1", "Gen 1:1"), ("m2", "Gen 1:1")]),
            book_table,
        )


def test_verse_range_annotation_skipped_and_logged(book_table, caplog):
    # merged verses like "1-2" are rejected per-annotation, not per-document
    with caplog.at_level("WARNING"):
        records = parse_document_set(
            token_xml([("t1", "x"), ("t2", "y")]),
            mark_xml([("m1", "#t1"), ("m2", "#t2")]),
            feat_xml([("m1", "Gen 1:1-2"), ("m2", "Gen 1:3")]),
            book_table,
        )
    assert [r.id for r in records] == [VerseId("Gen", 1, 3)]
    assert any("1:1-2" in message for message in caplog.messages)


def test_parse_is_deterministic(book_table):
    tokens = token_xml([("t1", PAUL), ("t2", APOSTLE), ("t3", "x")])
    marks = mark_xml([("m1", range_href("t1", "t2")), ("m2", "#t3")])
    feats = feat_xml([("m1", "Mark 3:4"), ("m2", "Gen 1:1")])
    first = parse_document_set(tokens, marks, feats, book_table)
    second = parse_document_set(tokens, marks, feats, book_table)
    assert first == second


def test_completeness_matches_feat_count(book_table):
    # every resolving verse annotation yields exactly one record
    tokens = token_xml([(f"t{i}", f"w{i}") for i in range(1, 8)])
    marks = mark_xml([(f"m{i}", f"#t{i}") for i in range(1, 8)])
    feats = feat_xml([(f"m{i}", f"Gen 1:{i}") for i in range(1, 8)])
    records = parse_document_set(tokens, marks, feats, book_table)
    assert len(records) == 7
