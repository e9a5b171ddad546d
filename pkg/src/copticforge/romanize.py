"""Deterministic transliteration of Coptic-script text to ASCII.

Downstream tokenizers carry Latin vocabularies, so every corpus variant is
optionally romanized through a replaceable mapping table. The shipped table
follows the common scholarly transliteration (see ``data/romanization.tsv``)
and covers the whole Coptic block U+2C80-U+2CFF plus the Coptic letters in
the Greek block U+03E2-U+03EF; rare epigraphic signs map to "?" and
combining marks are deleted. The lacuna placeholder "#" is ASCII and passes
through untouched, so injected noise survives romanization.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

from sklearn.base import BaseEstimator, TransformerMixin

from .errors import InvalidTableEntryError
from .validation import check_text_list

COPTIC_BLOCK = range(0x2C80, 0x2D00)
GREEK_COPTIC_LETTERS = range(0x03E2, 0x03F0)

#: Policies for code points with no table entry. Only "drop" and "replace"
#: preserve the ASCII-output guarantee; "keep" passes the character through.
PASSTHROUGH_POLICIES = ("keep", "drop", "replace")

_DELETE_TOKEN = "<DEL>"


@dataclass(frozen=True)
class RomanizationTable:
    """Code point -> ASCII mapping plus the policy for unmapped non-ASCII."""

    entries: dict[int, str]
    passthrough: str = "replace"
    replacement: str = "?"

    def __post_init__(self):
        if self.passthrough not in PASSTHROUGH_POLICIES:
            raise InvalidTableEntryError(
                f"unknown passthrough policy {self.passthrough!r}"
            )
        if self.passthrough == "replace":
            if len(self.replacement) != 1 or not self.replacement.isascii():
                raise InvalidTableEntryError(
                    f"replacement must be one ASCII character, "
                    f"got {self.replacement!r}"
                )
        for code_point, output in self.entries.items():
            if output and not output.isascii():
                raise InvalidTableEntryError(
                    f"entry U+{code_point:04X} maps to non-ASCII {output!r}"
                )
        missing = [
            cp
            for block in (COPTIC_BLOCK, GREEK_COPTIC_LETTERS)
            for cp in block
            if cp not in self.entries
        ]
        if missing:
            raise InvalidTableEntryError(
                f"table must cover U+2C80-U+2CFF and U+03E2-U+03EF; "
                f"{len(missing)} code points missing (first: U+{missing[0]:04X})"
            )

    @property
    def max_output_len(self) -> int:
        """Longest possible expansion of one input character."""
        lengths = [len(v) for v in self.entries.values()]
        lengths.append(1)  # ASCII passthrough / replacement char
        return max(lengths)


def load_romanization_table(
    path: str | Path | None = None,
    passthrough: str = "replace",
    replacement: str = "?",
) -> RomanizationTable:
    """Load and validate a romanization table from TSV.

    Column 1 is a hex code point (optionally ``U+``-prefixed), column 2 the
    ASCII output or the literal ``<DEL>`` for deletion. ``#``-prefixed lines
    are comments. ``path=None`` loads the shipped default table.
    """
    if path is None:
        table_path = Path(str(resources.files("copticforge").joinpath("data/romanization.tsv")))
    else:
        table_path = Path(path)
    entries: dict[int, str] = {}
    with open(table_path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) != 2:
                raise InvalidTableEntryError(
                    f"{table_path}:{lineno}: expected 2 tab-separated columns"
                )
            raw_cp, output = fields
            raw_cp = raw_cp.strip()
            if raw_cp.upper().startswith("U+"):
                raw_cp = raw_cp[2:]
            try:
                code_point = int(raw_cp, 16)
            except ValueError:
                raise InvalidTableEntryError(
                    f"{table_path}:{lineno}: malformed code point {fields[0]!r}"
                ) from None
            if code_point in entries:
                raise InvalidTableEntryError(
                    f"{table_path}:{lineno}: duplicate entry for U+{code_point:04X}"
                )
            if output == _DELETE_TOKEN:
                entries[code_point] = ""
            elif not output:
                raise InvalidTableEntryError(
                    f"{table_path}:{lineno}: empty output; use {_DELETE_TOKEN} "
                    f"for explicit deletion"
                )
            elif not output.isascii():
                raise InvalidTableEntryError(
                    f"{table_path}:{lineno}: non-ASCII output {output!r}"
                )
            else:
                entries[code_point] = output
    return RomanizationTable(
        entries=entries, passthrough=passthrough, replacement=replacement
    )


@lru_cache(maxsize=8)
def _cached_table(path: str | None, passthrough: str, replacement: str) -> RomanizationTable:
    return load_romanization_table(path, passthrough, replacement)


def default_table() -> RomanizationTable:
    """The shipped table with the default replace-with-'?' policy."""
    return _cached_table(None, "replace", "?")


def romanize(text: str, table: RomanizationTable | None = None) -> str:
    """Transliterate ``text`` using ``table`` (shipped default when omitted).

    Total function: mapped code points are replaced by their entries in
    order, ASCII passes through unchanged, and unmapped non-ASCII follows
    the table's passthrough policy. Under the default policy the output is
    pure ASCII for arbitrary input.
    """
    if table is None:
        table = default_table()
    entries = table.entries
    out: list[str] = []
    for char in text:
        code_point = ord(char)
        mapped = entries.get(code_point)
        if mapped is not None:
            out.append(mapped)
        elif code_point < 128:
            out.append(char)
        elif table.passthrough == "keep":
            out.append(char)
        elif table.passthrough == "replace":
            out.append(table.replacement)
        # "drop": emit nothing
    return "".join(out)


class Romanizer(BaseEstimator, TransformerMixin):
    """Stateless transformer mapping source-script strings to ASCII.

    Composes with scikit-learn pipelines: ``fit`` is a no-op, ``transform``
    maps a list of strings element-wise through :func:`romanize`.

    Parameters
    ----------
    table_path : str or None
        TSV mapping table; ``None`` uses the shipped default.
    passthrough : {"replace", "drop", "keep"}
        Policy for unmapped non-ASCII code points.
    replacement : str
        Single ASCII character used by the "replace" policy.
    """

    def __init__(self, table_path=None, passthrough="replace", replacement="?"):
        self.table_path = table_path
        self.passthrough = passthrough
        self.replacement = replacement

    def _table(self) -> RomanizationTable:
        path = None if self.table_path is None else str(self.table_path)
        return _cached_table(path, self.passthrough, self.replacement)

    def fit(self, X, y=None):
        self._table()  # validate eagerly
        return self

    def transform(self, X) -> list[str]:
        texts = check_text_list(X)
        table = self._table()
        return [romanize(text, table) for text in texts]
