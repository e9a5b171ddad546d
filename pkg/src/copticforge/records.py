"""JSONL corpus serialization: verse records, aligned pairs, removal logs.

One JSON object per line, UTF-8, fixed field order, ``\\n`` line endings.
These files are the interchange format between pipeline stages and external
consumers (training harnesses), so writes are fully deterministic and reads
validate the schema instead of trusting it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .align import AlignedPair, RemovalReason, RemovalRecord
from .errors import InvalidRecordError
from .paula import VerseRecord
from .verses import VerseId, verse_sort_key


@dataclass(frozen=True)
class CorpusRecord:
    """One serialized corpus line: an aligned pair plus optional extras."""

    id: VerseId
    version: str
    source_raw: str
    reference: str
    source_romanized: str | None = None
    noise_applied: bool | None = None

    def to_pair(self) -> AlignedPair:
        return AlignedPair(
            id=self.id,
            source_text=self.source_raw,
            reference_text=self.reference,
            version=self.version,
        )

    @classmethod
    def from_pair(
        cls,
        pair: AlignedPair,
        source_romanized: str | None = None,
        noise_applied: bool | None = None,
    ) -> "CorpusRecord":
        return cls(
            id=pair.id,
            version=pair.version,
            source_raw=pair.source_text,
            reference=pair.reference_text,
            source_romanized=source_romanized,
            noise_applied=noise_applied,
        )


def _dump(obj: dict) -> str:
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


def _id_dict(verse_id: VerseId) -> dict:
    return {"book": verse_id.book, "chapter": verse_id.chapter, "verse": verse_id.verse}


def _parse_id(obj, where: str) -> VerseId:
    if not isinstance(obj, dict):
        raise InvalidRecordError(f"{where}: 'id' must be an object")
    try:
        book, chapter, verse = obj["book"], obj["chapter"], obj["verse"]
    except KeyError as exc:
        raise InvalidRecordError(f"{where}: id is missing {exc}") from None
    if (
        not isinstance(book, str)
        or not isinstance(chapter, int)
        or not isinstance(verse, int)
        or isinstance(chapter, bool)
        or isinstance(verse, bool)
    ):
        raise InvalidRecordError(f"{where}: malformed id {obj!r}")
    try:
        return VerseId(book=book, chapter=chapter, verse=verse)
    except ValueError as exc:
        raise InvalidRecordError(f"{where}: {exc}") from None


def _require(obj: dict, key: str, kind, where: str):
    if key not in obj:
        raise InvalidRecordError(f"{where}: missing field {key!r}")
    value = obj[key]
    if not isinstance(value, kind) or isinstance(value, bool) and kind is int:
        raise InvalidRecordError(f"{where}: field {key!r} has wrong type")
    return value


def _iter_lines(path: Path):
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            where = f"{path}:{lineno}"
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise InvalidRecordError(f"{where}: invalid JSON: {exc}") from None
            if not isinstance(obj, dict):
                raise InvalidRecordError(f"{where}: expected a JSON object")
            yield where, obj


def corpus_record_line(record: CorpusRecord) -> str:
    obj: dict = {"id": _id_dict(record.id), "version": record.version}
    obj["source_raw"] = record.source_raw
    if record.source_romanized is not None:
        obj["source_romanized"] = record.source_romanized
    obj["reference"] = record.reference
    if record.noise_applied is not None:
        obj["noise_applied"] = record.noise_applied
    return _dump(obj)


def write_corpus(path: str | Path, records) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for record in records:
            fh.write(corpus_record_line(record) + "\n")


def read_corpus(path: str | Path) -> list[CorpusRecord]:
    records = []
    for where, obj in _iter_lines(Path(path)):
        verse_id = _parse_id(obj.get("id"), where)
        version = _require(obj, "version", str, where)
        source_raw = _require(obj, "source_raw", str, where)
        reference = _require(obj, "reference", str, where)
        romanized = obj.get("source_romanized")
        if romanized is not None and not isinstance(romanized, str):
            raise InvalidRecordError(f"{where}: source_romanized must be a string")
        noise_applied = obj.get("noise_applied")
        if noise_applied is not None and not isinstance(noise_applied, bool):
            raise InvalidRecordError(f"{where}: noise_applied must be a boolean")
        records.append(
            CorpusRecord(
                id=verse_id,
                version=version,
                source_raw=source_raw,
                reference=reference,
                source_romanized=romanized,
                noise_applied=noise_applied,
            )
        )
    return records


def write_verse_records(path: str | Path, records) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for record in records:
            fh.write(
                _dump(
                    {
                        "id": _id_dict(record.id),
                        "text": record.text,
                        "source_doc": record.source_doc,
                        "token_count": record.token_count,
                    }
                )
                + "\n"
            )


def read_verse_records(path: str | Path) -> list[VerseRecord]:
    records = []
    for where, obj in _iter_lines(Path(path)):
        verse_id = _parse_id(obj.get("id"), where)
        text = _require(obj, "text", str, where)
        source_doc = _require(obj, "source_doc", str, where)
        token_count = _require(obj, "token_count", int, where)
        if token_count < 0:
            raise InvalidRecordError(f"{where}: token_count must be >= 0")
        records.append(
            VerseRecord(
                id=verse_id, text=text, source_doc=source_doc, token_count=token_count
            )
        )
    return records


def write_removals(path: str | Path, removals) -> None:
    """Removal log, order-normalized by (verse id, version) before writing."""
    ordered = sorted(removals, key=lambda r: (*verse_sort_key(r.id), r.version))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for record in ordered:
            fh.write(
                _dump(
                    {
                        "id": _id_dict(record.id),
                        "version": record.version,
                        "reason": record.reason.value,
                        "original_source": record.original_source,
                        "original_reference": record.original_reference,
                    }
                )
                + "\n"
            )


def read_removals(path: str | Path) -> list[RemovalRecord]:
    removals = []
    for where, obj in _iter_lines(Path(path)):
        verse_id = _parse_id(obj.get("id"), where)
        version = _require(obj, "version", str, where)
        reason_text = _require(obj, "reason", str, where)
        try:
            reason = RemovalReason(reason_text)
        except ValueError:
            raise InvalidRecordError(
                f"{where}: unknown removal reason {reason_text!r}"
            ) from None
        removals.append(
            RemovalRecord(
                id=verse_id,
                version=version,
                reason=reason,
                original_source=_require(obj, "original_source", str, where),
                original_reference=_require(obj, "original_reference", str, where),
            )
        )
    return removals


def write_json(path: str | Path, obj: dict) -> None:
    """Pretty, deterministic JSON for reports and manifests."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, ensure_ascii=False, indent=2)
        fh.write("\n")


def write_pairs_tsv(path: str | Path, records) -> None:
    """Training-tool export: romanized-or-raw source TAB reference."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for record in records:
            source = (
                record.source_romanized
                if record.source_romanized is not None
                else record.source_raw
            )
            fh.write(f"{source}\t{record.reference}\n")
