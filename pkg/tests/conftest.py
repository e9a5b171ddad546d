"""Shared fixtures: book table, standoff-XML builders, random corpora."""

from __future__ import annotations

import random

import pytest

from copticforge import AlignedPair, VerseId, load_book_table

COPTIC_LOWER = [chr(cp) for cp in range(0x2C81, 0x2CB2, 2)]  # alfa..oou
CONFUSABLE = [  # keys of the shipped confusion map
    "ⲟ", "ⲑ", "ⲉ", "ⲅ", "ⲧ", "ⲓ", "ⲣ",
    "ⲡ", "ϯ", "ⲏ", "ⲭ", "ϫ", "ⲩ", "ⲍ",
    "ⲝ", "ⲥ",
]


@pytest.fixture(scope="session")
def book_table():
    return load_book_table()


def token_xml(tokens, docid="doc1") -> bytes:
    body = "".join(f'<token id="{tid}">{text}</token>' for tid, text in tokens)
    return (
        f'<?xml version="1.0" encoding="UTF-8"?>'
        f'<paula><tokenList docid="{docid}">{body}</tokenList></paula>'
    ).encode("utf-8")


def mark_xml(marks) -> bytes:
    body = "".join(f'<mark id="{mid}" href="{href}"/>' for mid, href in marks)
    return (
        f'<?xml version="1.0" encoding="UTF-8"?>'
        f'<paula><markList xmlns:xlink="http://www.w3.org/1999/xlink">'
        f"{body}</markList></paula>"
    ).encode("utf-8")


def feat_xml(feats) -> bytes:
    body = "".join(
        f'<feat href="#{mark_id}" value="{value}"/>' for mark_id, value in feats
    )
    return (
        f'<?xml version="1.0" encoding="UTF-8"?>'
        f'<paula><featList type="verse">{body}</featList></paula>'
    ).encode("utf-8")


def range_href(first: str, last: str) -> str:
    return f"#xpointer(id('{first}')/range-to(id('{last}')))"


def coptic_text(rng: random.Random, length: int, alphabet=None) -> str:
    chars = alphabet or COPTIC_LOWER
    return "".join(rng.choice(chars) for _ in range(length))


def random_corpus(
    rng: random.Random,
    books=("Gen", "Mark", "1Cor", "Ps", "Rev"),
    versions=("segond", "crampon"),
    n_pairs=40,
) -> list[AlignedPair]:
    pairs = []
    seen = set()
    while len(pairs) < n_pairs:
        vid = VerseId(
            book=rng.choice(books),
            chapter=rng.randint(1, 20),
            verse=rng.randint(1, 40),
        )
        version = rng.choice(versions)
        if (vid, version) in seen:
            continue
        seen.add((vid, version))
        pairs.append(
            AlignedPair(
                id=vid,
                source_text=coptic_text(rng, rng.randint(3, 30)),
                reference_text=" ".join(
                    rng.choice(["dieu", "le", "pain", "ciel", "terre", "eau"])
                    for _ in range(rng.randint(1, 8))
                ),
                version=version,
            )
        )
    return pairs
