"""Unigram-overlap translation scoring and noise-robustness drop analysis.

The score is the classic recall-weighted harmonic mean of unigram precision
and recall, discounted by a fragmentation penalty computed from the number
of contiguous matched chunks under the chunk-minimizing alignment. Matching
stages are limited to exact and lowercased unigrams (no stemming or synonym
resources), which keeps the metric dependency-free; scores are in [0, 1].

Chunk minimization is exact: a memoized search over maximum matchings,
used whenever at most 32 unigrams match and the deterministic node budget
is not exhausted; beyond either bound a documented greedy fallback takes a
maximum matching and locally repairs it toward contiguity. Both paths are
deterministic.

The drop analysis reads score tables keyed by (test_noise, train_noise,
metric) and reports, for each (train_noise, metric), the relative score
drop from the 0% to the 100% test-noise row, rounded half-up to one
decimal.
"""

from __future__ import annotations

import csv
import unicodedata
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path

from .errors import (
    IncompleteTableError,
    InvalidTableEntryError,
    MissingReferenceError,
)
from .verses import VerseId

_EXACT_SEARCH_MAX_MATCHES = 32
_EXACT_SEARCH_NODE_BUDGET = 200_000


@dataclass(frozen=True)
class MeteorParams:
    """Scoring knobs: recall weight, penalty weight and exponent, stages."""

    alpha: float = 0.9
    gamma: float = 0.5
    beta: float = 3.0
    stages: tuple[str, ...] = ("exact", "lowercase")

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must be in (0, 1), got {self.alpha!r}")
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError(f"gamma must be in [0, 1], got {self.gamma!r}")
        if self.beta <= 0:
            raise ValueError(f"beta must be positive, got {self.beta!r}")
        if not self.stages:
            raise ValueError("stages must be non-empty")
        unknown = [s for s in self.stages if s not in _STAGE_KEYS]
        if unknown:
            raise ValueError(f"unknown stages {unknown}; choose from exact, lowercase")


def _is_punct(char: str) -> bool:
    return unicodedata.category(char).startswith("P")


def tokenize(text: str) -> list[str]:
    """Whitespace-split, strip edge punctuation, lowercase, drop empties."""
    tokens = []
    for raw in text.split():
        start, end = 0, len(raw)
        while start < end and _is_punct(raw[start]):
            start += 1
        while end > start and _is_punct(raw[end - 1]):
            end -= 1
        core = raw[start:end].lower()
        if core:
            tokens.append(core)
    return tokens


_STAGE_KEYS = {
    "exact": lambda token: token,
    "lowercase": lambda token: token.lower(),
}


def _candidates(
    hyp: list[str], ref: list[str], stages: tuple[str, ...]
) -> list[list[int]]:
    """Allowed ref positions per hyp position: equal under any stage key."""
    keys = [_STAGE_KEYS[s] for s in stages]
    ref_index: dict[str, list[int]] = {}
    for stage_key in keys:
        for j, token in enumerate(ref):
            ref_index.setdefault(stage_key(token), []).append(j)
    cands: list[list[int]] = []
    for token in hyp:
        seen: set[int] = set()
        for stage_key in keys:
            seen.update(ref_index.get(stage_key(token), ()))
        cands.append(sorted(seen))
    return cands


def _max_matching(cands: list[list[int]], n_ref: int) -> tuple[int, list[int]]:
    """Kuhn's augmenting paths; returns (size, ref->hyp assignment)."""
    match_ref = [-1] * n_ref
    def try_augment(i: int, seen: list[bool]) -> bool:
        for j in cands[i]:
            if not seen[j]:
                seen[j] = True
                if match_ref[j] == -1 or try_augment(match_ref[j], seen):
                    match_ref[j] = i
                    return True
        return False

    size = 0
    for i in range(len(cands)):
        if cands[i] and try_augment(i, [False] * n_ref):
            size += 1
    return size, match_ref


def _count_chunks(assignment: dict[int, int]) -> int:
    chunks = 0
    prev_i = prev_j = None
    for i in sorted(assignment):
        j = assignment[i]
        if prev_i != i - 1 or prev_j != j - 1:
            chunks += 1
        prev_i, prev_j = i, j
    return chunks


class _BudgetExceeded(Exception):
    pass


def _min_chunks_exact(cands: list[list[int]], m: int) -> int:
    """Minimum chunk count over all maximum matchings (memoized search)."""
    n_hyp = len(cands)
    suffix_matchable = [0] * (n_hyp + 1)
    for i in range(n_hyp - 1, -1, -1):
        suffix_matchable[i] = suffix_matchable[i + 1] + (1 if cands[i] else 0)

    memo: dict[tuple[int, int, int | None], float] = {}
    nodes = 0

    def rec(i: int, mask: int, prev_j: int | None, matched: int) -> float:
        nonlocal nodes
        if matched == m:
            return 0.0
        if i == n_hyp or matched + suffix_matchable[i] < m:
            return float("inf")
        key = (i, mask, prev_j)
        cached = memo.get(key)
        if cached is not None:
            return cached
        nodes += 1
        if nodes > _EXACT_SEARCH_NODE_BUDGET:
            raise _BudgetExceeded
        best = rec(i + 1, mask, None, matched)
        for j in cands[i]:
            bit = 1 << j
            if mask & bit:
                continue
            starts_new = 0.0 if (prev_j is not None and j == prev_j + 1) else 1.0
            sub = rec(i + 1, mask | bit, j, matched + 1)
            total = sub + starts_new
            if total < best:
                best = total
        memo[key] = best
        return best

    result = rec(0, 0, None, 0)
    return int(result)


def _min_chunks_greedy(
    hyp: list[str], cands: list[list[int]], match_ref: list[int]
) -> int:
    """Deterministic fallback for matchings too large for the exact search.

    Candidate sets depend only on the token string, so a maximum matching
    stays maximum under two repairs: (1) within each hyp-token class,
    reassign matched hyp and ref positions monotonically (kills crossings
    between equal tokens); (2) one left-to-right pass that moves a match to
    ``prev_j + 1`` to continue the previous chunk whenever that ref position
    is free and allowed."""
    assignment = {i: j for j, i in enumerate(match_ref) if i != -1}

    by_token: dict[str, list[int]] = {}
    for i in assignment:
        by_token.setdefault(hyp[i], []).append(i)
    for positions in by_token.values():
        positions.sort()
        refs = sorted(assignment[i] for i in positions)
        for i, j in zip(positions, refs):
            assignment[i] = j

    used = set(assignment.values())
    for i in sorted(assignment):
        j = assignment[i]
        prev_j = assignment.get(i - 1)
        if prev_j is None or j == prev_j + 1:
            continue
        want = prev_j + 1
        if want not in used and want in cands[i]:
            used.discard(j)
            used.add(want)
            assignment[i] = want
    return _count_chunks(assignment)


def _match_and_chunks(
    hyp: list[str], ref: list[str], stages: tuple[str, ...]
) -> tuple[int, int]:
    cands = _candidates(hyp, ref, stages)
    m, match_ref = _max_matching(cands, len(ref))
    if m == 0:
        return 0, 0
    if m <= _EXACT_SEARCH_MAX_MATCHES:
        try:
            return m, _min_chunks_exact(cands, m)
        except _BudgetExceeded:
            pass
    return m, _min_chunks_greedy(hyp, cands, match_ref)


def meteor(
    hypothesis: str,
    reference: str,
    params: MeteorParams | None = None,
) -> float:
    """Score one hypothesis against one reference; 0 when nothing matches.

    With ``m`` matched unigrams, ``P = m/|hyp|``, ``R = m/|ref|``::

        Fmean   = P*R / (alpha*P + (1-alpha)*R)
        penalty = gamma * (chunks/m) ** beta
        score   = Fmean * (1 - penalty)
    """
    if params is None:
        params = MeteorParams()
    hyp_tokens = tokenize(hypothesis)
    ref_tokens = tokenize(reference)
    if not hyp_tokens or not ref_tokens:
        return 0.0
    m, chunks = _match_and_chunks(hyp_tokens, ref_tokens, params.stages)
    if m == 0:
        return 0.0
    precision = m / len(hyp_tokens)
    recall = m / len(ref_tokens)
    fmean = (precision * recall) / (
        params.alpha * precision + (1.0 - params.alpha) * recall
    )
    penalty = params.gamma * (chunks / m) ** params.beta
    return fmean * (1.0 - penalty)


def _pairwise_sum(values: list[float], lo: int, hi: int) -> float:
    if hi - lo <= 8:
        total = 0.0
        for k in range(lo, hi):
            total += values[k]
        return total
    mid = (lo + hi) // 2
    return _pairwise_sum(values, lo, mid) + _pairwise_sum(values, mid, hi)


@dataclass(frozen=True)
class MetricReport:
    """Per-verse scores plus their arithmetic mean."""

    per_verse: list[tuple[VerseId, str, float]]
    corpus_mean: float

    def to_dict(self) -> dict:
        return {
            "per_verse": [
                {
                    "id": {"book": v.book, "chapter": v.chapter, "verse": v.verse},
                    "version": version,
                    "score": score,
                }
                for v, version, score in self.per_verse
            ],
            "corpus_mean": self.corpus_mean,
        }


def evaluate_corpus(
    hypotheses,
    references,
    params: MeteorParams | None = None,
) -> MetricReport:
    """Score (verse id, version, text) hypotheses against reference pairs.

    Every hypothesis key must resolve to a reference. The mean is a
    pairwise summation in index order, so parallel per-verse scoring cannot
    change the reported value.
    """
    ref_texts: dict[tuple[VerseId, str], str] = {}
    for pair in references:
        key = (pair.id, pair.version)
        if key in ref_texts:
            raise ValueError(f"duplicate reference for {pair.id} [{pair.version}]")
        ref_texts[key] = pair.reference_text

    per_verse: list[tuple[VerseId, str, float]] = []
    for verse_id, version, text in hypotheses:
        key = (verse_id, version)
        if key not in ref_texts:
            raise MissingReferenceError(
                f"no reference for {verse_id} [{version}]"
            )
        per_verse.append((verse_id, version, meteor(text, ref_texts[key], params)))

    scores = [score for _, _, score in per_verse]
    mean = _pairwise_sum(scores, 0, len(scores)) / len(scores) if scores else 0.0
    return MetricReport(per_verse=per_verse, corpus_mean=mean)


def relative_drop(clean_score: float, noisy_score: float) -> float:
    """Percentage drop 100*(clean-noisy)/clean, rounded half-up to 1 decimal."""
    if clean_score == 0:
        raise ZeroDivisionError("relative drop undefined for a zero clean score")
    value = 100.0 * (clean_score - noisy_score) / clean_score
    return float(Decimal(repr(value)).quantize(Decimal("0.1"), rounding=ROUND_HALF_UP))


_SCORE_HEADER = ["test_noise", "train_noise", "metric", "score"]


@dataclass(frozen=True)
class ScoreTable:
    """Scores keyed by (test_noise rate, train_noise rate, metric name)."""

    rows: dict[tuple[float, float, str], float]

    def __post_init__(self):
        for (test_noise, train_noise, metric), score in self.rows.items():
            for rate, name in ((test_noise, "test_noise"), (train_noise, "train_noise")):
                if not 0.0 <= rate <= 1.0:
                    raise InvalidTableEntryError(
                        f"{name} must be in [0, 1], got {rate!r} for {metric!r}"
                    )
            if not 0.0 <= score <= 1.0:
                raise InvalidTableEntryError(
                    f"score must be in [0, 1], got {score!r} for {metric!r}"
                )


def load_score_table(path: str | Path) -> ScoreTable:
    """Read a score table from CSV with the fixed four-column header."""
    rows: dict[tuple[float, float, str], float] = {}
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise InvalidTableEntryError(f"{path}: empty score table") from None
        if [h.strip() for h in header] != _SCORE_HEADER:
            raise InvalidTableEntryError(
                f"{path}: header must be {','.join(_SCORE_HEADER)}"
            )
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != 4:
                raise InvalidTableEntryError(f"{path}:{lineno}: expected 4 columns")
            try:
                key = (float(row[0]), float(row[1]), row[2].strip())
                score = float(row[3])
            except ValueError:
                raise InvalidTableEntryError(
                    f"{path}:{lineno}: malformed row {row!r}"
                ) from None
            if key in rows:
                raise InvalidTableEntryError(
                    f"{path}:{lineno}: duplicate row for {key!r}"
                )
            rows[key] = score
    return ScoreTable(rows=rows)


@dataclass(frozen=True)
class DropMatrix:
    """Relative drops per (train_noise, metric), 0% vs 100% test noise."""

    train_rates: tuple[float, ...]
    metrics: tuple[str, ...]
    cells: dict[tuple[float, str], float]

    def to_csv(self) -> str:
        lines = ["train_noise," + ",".join(self.metrics)]
        for rate in self.train_rates:
            cells = []
            for metric in self.metrics:
                value = self.cells.get((rate, metric))
                cells.append("" if value is None else f"{value}")
            lines.append(f"{rate:g}," + ",".join(cells))
        return "\n".join(lines) + "\n"


def drop_table(table: ScoreTable) -> DropMatrix:
    """Compute the drop matrix from a score table.

    Requires a 0%- and a 100%-test-noise row for every (train_noise,
    metric) combination referenced anywhere in the table.
    """
    train_rates: list[float] = []
    metrics: list[str] = []
    combos: list[tuple[float, str]] = []
    for (_, train_noise, metric) in table.rows:
        if train_noise not in train_rates:
            train_rates.append(train_noise)
        if metric not in metrics:
            metrics.append(metric)
        if (train_noise, metric) not in combos:
            combos.append((train_noise, metric))

    missing = [
        (train_noise, metric, test_noise)
        for (train_noise, metric) in combos
        for test_noise in (0.0, 1.0)
        if (test_noise, train_noise, metric) not in table.rows
    ]
    if missing:
        first = missing[0]
        raise IncompleteTableError(
            f"missing {len(missing)} row(s) for drop analysis; first: "
            f"test_noise={first[2]:g}, train_noise={first[0]:g}, metric={first[1]}"
        )

    cells = {
        (train_noise, metric): relative_drop(
            table.rows[(0.0, train_noise, metric)],
            table.rows[(1.0, train_noise, metric)],
        )
        for (train_noise, metric) in combos
    }
    return DropMatrix(
        train_rates=tuple(sorted(train_rates)),
        metrics=tuple(metrics),
        cells=cells,
    )
