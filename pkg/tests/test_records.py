import json

import pytest

from copticforge import AlignedPair, InvalidRecordError, RemovalReason, VerseId
from copticforge.align import RemovalRecord
from copticforge.paula import VerseRecord
from copticforge.records import (
    CorpusRecord,
    corpus_record_line,
    read_corpus,
    read_removals,
    read_verse_records,
    write_corpus,
    write_pairs_tsv,
    write_removals,
    write_verse_records,
)


def _verse_record(verse, text="ⲁ ⲃ"):
    return VerseRecord(
        id=VerseId("Gen", 1, verse), text=text, source_doc="doc.xml", token_count=2
    )


def test_verse_records_roundtrip(tmp_path):
    records = [_verse_record(v) for v in range(1, 6)]
    path = tmp_path / "records.jsonl"
    write_verse_records(path, records)
    assert read_verse_records(path) == records


def test_verse_records_bytes_are_deterministic(tmp_path):
    records = [_verse_record(1)]
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    write_verse_records(a, records)
    write_verse_records(b, records)
    assert a.read_bytes() == b.read_bytes()


def test_corpus_roundtrip_with_optional_fields(tmp_path):
    records = [
        CorpusRecord(
            id=VerseId("Mark", 2, 3),
            version="segond",
            source_raw="ⲁⲃ",
            reference="texte",
            source_romanized="ab",
            noise_applied=True,
        ),
        CorpusRecord(
            id=VerseId("Mark", 2, 4),
            version="segond",
            source_raw="ⲅ",
            reference="autre",
        ),
    ]
    path = tmp_path / "corpus.jsonl"
    write_corpus(path, records)
    assert read_corpus(path) == records


def test_corpus_line_field_order():
    record = CorpusRecord(
        id=VerseId("Gen", 1, 1),
        version="v",
        source_raw="s",
        reference="r",
        source_romanized="sr",
        noise_applied=False,
    )
    line = corpus_record_line(record)
    keys = list(json.loads(line))
    assert keys == [
        "id",
        "version",
        "source_raw",
        "source_romanized",
        "reference",
        "noise_applied",
    ]
    # optional fields disappear entirely when unset
    bare = CorpusRecord(id=VerseId("Gen", 1, 1), version="v", source_raw="s", reference="r")
    assert list(json.loads(corpus_record_line(bare))) == [
        "id",
        "version",
        "source_raw",
        "reference",
    ]


def test_corpus_record_pair_conversion():
    pair = AlignedPair(
        id=VerseId("Gen", 1, 1), source_text="s", reference_text="r", version="v"
    )
    record = CorpusRecord.from_pair(pair, source_romanized="x", noise_applied=True)
    assert record.to_pair() == pair


def test_read_corpus_rejects_bad_schema(tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_text('{"id": {"book": "Gen", "chapter": 1, "verse": 1}}\n')
    with pytest.raises(InvalidRecordError):
        read_corpus(path)
    path.write_text("not json\n")
    with pytest.raises(InvalidRecordError):
        read_corpus(path)
    path.write_text('{"id": {"book": "Gen", "chapter": 0, "verse": 1}, "version": "v", "source_raw": "s", "reference": "r"}\n')
    with pytest.raises(InvalidRecordError):
        read_corpus(path)


def test_removals_roundtrip_and_sorted(tmp_path):
    removals = [
        RemovalRecord(
            id=VerseId("Mark", 1, 2),
            version="segond",
            reason=RemovalReason.BLANK_REFERENCE,
            original_source="ⲁ",
            original_reference=" ",
        ),
        RemovalRecord(
            id=VerseId("Gen", 1, 1),
            version="darby",
            reason=RemovalReason.MISSING_SOURCE,
            original_source="",
            original_reference="texte",
        ),
        RemovalRecord(
            id=VerseId("Gen", 1, 1),
            version="crampon",
            reason=RemovalReason.ELLIPSIS_ONLY_SOURCE,
            original_source="[...]",
            original_reference="x",
        ),
    ]
    path = tmp_path / "removals.jsonl"
    write_removals(path, removals)
    loaded = read_removals(path)
    keys = [(r.id, r.version) for r in loaded]
    assert keys == sorted(keys)
    assert set(loaded) == set(removals)
    # reason strings use the canonical enum spelling
    first_line = path.read_text().splitlines()[0]
    assert '"reason":"EllipsisOnlySource"' in first_line


def test_removal_log_bytes_independent_of_input_order(tmp_path):
    removals = [
        RemovalRecord(
            id=VerseId("Gen", 1, v),
            version=version,
            reason=RemovalReason.BLANK_REFERENCE,
            original_source="ⲁ",
            original_reference="",
        )
        for v in (3, 1, 2)
        for version in ("segond", "crampon")
    ]
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    write_removals(a, removals)
    write_removals(b, list(reversed(removals)))
    assert a.read_bytes() == b.read_bytes()


def test_pairs_tsv_export(tmp_path):
    records = [
        CorpusRecord(
            id=VerseId("Gen", 1, 1),
            version="v",
            source_raw="ⲁ",
            reference="r1",
            source_romanized="a",
        ),
        CorpusRecord(
            id=VerseId("Gen", 1, 2), version="v", source_raw="ⲃ", reference="r2"
        ),
    ]
    path = tmp_path / "pairs.tsv"
    write_pairs_tsv(path, records)
    assert path.read_text(encoding="utf-8") == "a\tr1\nⲃ\tr2\n"


def test_unicode_is_not_escaped(tmp_path):
    path = tmp_path / "c.jsonl"
    write_corpus(
        path,
        [
            CorpusRecord(
                id=VerseId("Gen", 1, 1),
                version="v",
                source_raw="ⲁ",
                reference="réf",
            )
        ],
    )
    text = path.read_text(encoding="utf-8")
    assert "ⲁ" in text and "é" in text and "\\u" not in text
