"""Standoff-XML document-set parsing: token spans, span marks, verse annotations.

Supported subset (anything else is rejected as malformed):

* token file — exactly one ``<tokenList>`` element whose ``<token id="...">``
  children carry the primary text spans in document order;
* mark file — exactly one ``<markList>`` element whose ``<mark id="...">``
  children reference token ids with xlink-style hrefs, either ``#t1`` for a
  single token or ``#xpointer(id('t1')/range-to(id('t2')))`` for an
  inclusive, forward range;
* feat file — exactly one ``<featList>`` element whose ``<feat>`` children
  attach a verse reference ("Book C:V" or "Book_C_V") to a mark via
  ``href="#m1"`` and ``value="..."``.

The list elements may be wrapped in any root element (PAULA exports use
``<paula>``), and hrefs are accepted with or without the xlink namespace.
Verse annotations that do not parse as a single verse (ranges such as
"Mark 1:1-2", sub-verse letters) are skipped with a warning; unknown books,
dangling references and duplicate verse ids abort the parse.
"""

from __future__ import annotations

import logging
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass

from .errors import (
    DanglingReferenceError,
    DuplicateVerseIdError,
    MalformedXmlError,
    UnparseableReferenceError,
)
from .verses import BookNameTable, VerseId, canonicalize_verse_id

logger = logging.getLogger(__name__)

_XLINK_HREF = "{http://www.w3.org/1999/xlink}href"
_RANGE_HREF = re.compile(
    r"^#xpointer\(id\('([^']+)'\)/range-to\(id\('([^']+)'\)\)\)$"
)
_SINGLE_HREF = re.compile(r"^#([^#()\s]+)$")


@dataclass(frozen=True)
class VerseRecord:
    """One verse of source-language text with provenance."""

    id: VerseId
    text: str
    source_doc: str
    token_count: int


def _localname(tag) -> str:
    if not isinstance(tag, str):
        return ""
    return tag.rsplit("}", 1)[-1]


def _parse_xml(data: bytes, what: str) -> ET.Element:
    try:
        return ET.fromstring(data)
    except ET.ParseError as exc:
        raise MalformedXmlError(f"{what} file is not well-formed XML: {exc}") from exc


def _find_list(root: ET.Element, name: str, what: str) -> ET.Element:
    hits = [el for el in root.iter() if _localname(el.tag) == name]
    if len(hits) != 1:
        raise MalformedXmlError(
            f"{what} file must contain exactly one <{name}> element, "
            f"found {len(hits)}"
        )
    return hits[0]

def _children(element: ET.Element, expected: str, what: str) -> list[ET.Element]:
    out = []
    for child in element:
        name = _localname(child.tag)
        if name != expected:
            raise MalformedXmlError(
                f"{what} file: unexpected <{name}> inside <{_localname(element.tag)}>"
            )
        out.append(child)
    return out


def _href(element: ET.Element, what: str) -> str:
    value = element.get(_XLINK_HREF) or element.get("href")
    if not value:
        raise MalformedXmlError(f"{what} file: element without an href")
    return value


def _resolve_tokens(token_file: bytes) -> tuple[dict[str, int], list[str], str]:
    root = _parse_xml(token_file, "token")
    token_list = _find_list(root, "tokenList", "token")
    index: dict[str, int] = {}
    texts: list[str] = []
    for el in _children(token_list, "token", "token"):
        token_id = el.get("id")
        if not token_id:
            raise MalformedXmlError("token file: <token> without an id")
        if token_id in index:
            raise MalformedXmlError(f"token file: duplicate token id {token_id!r}")
        index[token_id] = len(texts)
        texts.append(el.text or "")
    doc_id = token_list.get("docid") or root.get("paula_id") or ""
    return index, texts, doc_id


def _resolve_marks(
    mark_file: bytes, token_index: dict[str, int]
) -> dict[str, tuple[int, int]]:
    """Map mark id -> inclusive (first, last) token index span."""
    root = _parse_xml(mark_file, "mark")
    mark_list = _find_list(root, "markList", "mark")
    spans: dict[str, tuple[int, int]] = {}
    for el in _children(mark_list, "mark", "mark"):
        mark_id = el.get("id")
        if not mark_id:
            raise MalformedXmlError("mark file: <mark> without an id")
        if mark_id in spans:
            raise MalformedXmlError(f"mark file: duplicate mark id {mark_id!r}")
        href = _href(el, "mark")
        range_match = _RANGE_HREF.match(href)
        if range_match:
            first_id, last_id = range_match.group(1), range_match.group(2)
        else:
            single = _SINGLE_HREF.match(href)
            if single is None:
                raise MalformedXmlError(
                    f"mark file: unsupported href {href!r} on mark {mark_id!r}"
                )
            first_id = last_id = single.group(1)
        try:
            first = token_index[first_id]
        except KeyError:
            raise DanglingReferenceError(
                f"mark {mark_id!r} references missing token id {first_id!r}"
            ) from None
        try:
            last = token_index[last_id]
        except KeyError:
            raise DanglingReferenceError(
                f"mark {mark_id!r} references missing token id {last_id!r}"
            ) from None
        if first > last:
            raise MalformedXmlError(
                f"mark {mark_id!r} has an inverted range "
                f"({first_id!r} after {last_id!r})"
            )
        spans[mark_id] = (first, last)
    return spans


def parse_document_set(
    token_file: bytes,
    mark_file: bytes,
    feat_file: bytes,
    book_table: BookNameTable,
    doc_id: str | None = None,
) -> list[VerseRecord]:
    """Parse one (token, mark, feat) standoff document set into verse records.

    Records come back sorted by (book order in ``book_table``, chapter,
    verse). ``doc_id`` overrides the document identifier recorded in
    ``source_doc``; by default it is taken from the token file's
    ``tokenList@docid`` or root ``paula_id`` attribute.
    """
    token_index, token_texts, derived_doc_id = _resolve_tokens(token_file)
    spans = _resolve_marks(mark_file, token_index)
    source_doc = doc_id if doc_id is not None else derived_doc_id

    root = _parse_xml(feat_file, "feat")
    feat_list = _find_list(root, "featList", "feat")
    records: dict[VerseId, VerseRecord] = {}
    for el in _children(feat_list, "feat", "feat"):
        href = _href(el, "feat")
        single = _SINGLE_HREF.match(href)
        if single is None:
            raise MalformedXmlError(f"feat file: unsupported href {href!r}")
        mark_id = single.group(1)
        if mark_id not in spans:
            raise DanglingReferenceError(
                f"feat references missing mark id {mark_id!r}"
            )
        value = el.get("value")
        if value is None:
            raise MalformedXmlError(f"feat for mark {mark_id!r} has no value")
        try:
            verse_id = canonicalize_verse_id(value, book_table)
        except UnparseableReferenceError:
            logger.warning(
                "skipping unparseable verse annotation %r on mark %r",
                value,
                mark_id,
            )
            continue
        if verse_id in records:
            raise DuplicateVerseIdError(f"duplicate verse id {verse_id}")
        first, last = spans[mark_id]
        span_texts = token_texts[first : last + 1]
        records[verse_id] = VerseRecord(
            id=verse_id,
            text=" ".join(span_texts),
            source_doc=source_doc,
            token_count=len(span_texts),
        )

    return sorted(records.values(), key=lambda r: book_table.sort_key(r.id))
