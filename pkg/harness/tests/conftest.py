"""Synthetic toy corpora in the toolkit's CorpusRecordLine JSONL format."""

from __future__ import annotations

import json
import random
from pathlib import Path

import pytest

# word-for-word toy language: source token i translates to target token i
SRC_WORDS = ["ka", "re", "mi", "to", "lu", "se", "pa", "no"]
TGT_WORDS = ["dieu", "pain", "ciel", "terre", "eau", "vie", "roi", "mer"]


def toy_record(book, chapter, verse, version, rng, min_len=4, max_len=7):
    indices = [rng.randrange(len(SRC_WORDS)) for _ in range(rng.randint(min_len, max_len))]
    return {
        "id": {"book": book, "chapter": chapter, "verse": verse},
        "version": version,
        "source_raw": " ".join(SRC_WORDS[i] for i in indices),
        "reference": " ".join(TGT_WORDS[i] for i in indices),
    }


def write_toy_corpus(path: Path, n_pairs: int, book="Gen", versions=("segond",), seed=0):
    rng = random.Random(seed)
    records = []
    verse = 0
    while len(records) < n_pairs:
        verse += 1
        base = toy_record(book, 1 + verse // 150, 1 + verse % 150, versions[0], rng)
        for version in versions:
            if len(records) == n_pairs:
                break
            record = dict(base)
            record["version"] = version
            records.append(record)
    path.write_text(
        "\n".join(json.dumps(r, ensure_ascii=False, separators=(",", ":")) for r in records)
        + "\n",
        encoding="utf-8",
    )
    return records


@pytest.fixture()
def toy_train(tmp_path):
    path = tmp_path / "train.jsonl"
    write_toy_corpus(path, 200, book="Gen", seed=1)
    return path


@pytest.fixture()
def toy_test(tmp_path):
    path = tmp_path / "test.jsonl"
    write_toy_corpus(path, 40, book="Mark", seed=2)
    return path
