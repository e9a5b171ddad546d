"""Reading forge-emitted corpora.

The interchange format is CorpusRecordLine JSONL: one object per line with
``id`` (book/chapter/verse), ``version``, ``source_raw``, optional
``source_romanized``, ``reference``, optional ``noise_applied``. Schema
violations abort with :class:`CorpusSchemaError`; training silently on a
malformed corpus is worse than failing."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path


class CorpusSchemaError(Exception):
    """A corpus file does not conform to the CorpusRecordLine schema."""


@dataclass(frozen=True)
class TranslationExample:
    """One (source, reference) training/evaluation pair."""

    book: str
    chapter: int
    verse: int
    version: str
    source: str
    reference: str

    @property
    def key(self) -> tuple:
        return (self.book, self.chapter, self.verse, self.version)


def _field(obj: dict, name: str, kind, where: str):
    if name not in obj:
        raise CorpusSchemaError(f"{where}: missing field {name!r}")
    value = obj[name]
    if not isinstance(value, kind) or (kind is int and isinstance(value, bool)):
        raise CorpusSchemaError(f"{where}: field {name!r} has wrong type")
    return value


def load_corpus(path: str | Path) -> list[TranslationExample]:
    """Load one corpus file; the model input is the romanized source when
    present, the raw source otherwise."""
    path = Path(path)
    examples: list[TranslationExample] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            where = f"{path}:{lineno}"
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusSchemaError(f"{where}: invalid JSON: {exc}") from None
            if not isinstance(obj, dict):
                raise CorpusSchemaError(f"{where}: expected a JSON object")
            id_obj = _field(obj, "id", dict, where)
            book = _field(id_obj, "book", str, f"{where}.id")
            chapter = _field(id_obj, "chapter", int, f"{where}.id")
            verse = _field(id_obj, "verse", int, f"{where}.id")
            version = _field(obj, "version", str, where)
            source_raw = _field(obj, "source_raw", str, where)
            reference = _field(obj, "reference", str, where)
            romanized = obj.get("source_romanized")
            if romanized is not None and not isinstance(romanized, str):
                raise CorpusSchemaError(f"{where}: source_romanized must be a string")
            examples.append(
                TranslationExample(
                    book=book,
                    chapter=chapter,
                    verse=verse,
                    version=version,
                    source=romanized if romanized is not None else source_raw,
                    reference=reference,
                )
            )
    if not examples:
        raise CorpusSchemaError(f"{path}: corpus is empty")
    return examples


def load_corpora(paths) -> list[TranslationExample]:
    examples: list[TranslationExample] = []
    for path in paths:
        examples.extend(load_corpus(path))
    return examples


def load_tsv_pairs(path: str | Path) -> list[tuple[str, str]]:
    """The toolkit's source<TAB>reference export; good for training only
    (it carries no verse ids, so scored evaluation needs the JSONL form)."""
    path = Path(path)
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            if "\t" not in line:
                raise CorpusSchemaError(f"{path}:{lineno}: expected source<TAB>reference")
            source, reference = line.split("\t", 1)
            pairs.append((source, reference))
    if not pairs:
        raise CorpusSchemaError(f"{path}: corpus is empty")
    return pairs


def write_hypotheses(path: str | Path, hypotheses) -> None:
    """Hypotheses JSONL as consumed by the toolkit's meteor command:
    ``{"id": {...}, "version": ..., "text": ...}`` per line."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for example, text in hypotheses:
            fh.write(
                json.dumps(
                    {
                        "id": {
                            "book": example.book,
                            "chapter": example.chapter,
                            "verse": example.verse,
                        },
                        "version": example.version,
                        "text": text,
                    },
                    ensure_ascii=False,
                    separators=(",", ":"),
                )
                + "\n"
            )
