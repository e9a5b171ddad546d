"""Manuscript-degradation noise: substitution, transposition, lacunae.

Three sequential per-character passes model the three damage processes, in
this fixed order:

1. substitution — a character listed in the confusion map is replaced, with
   probability ``p_substitute``, by a weighted-random visually-similar
   alternative (handwriting ambiguity / OCR misrecognition);
2. transposition — in one left-to-right scan, position ``i`` is swapped
   with ``i+1`` with probability ``p_swap``; a position just swapped into
   is not re-drawn (spelling errors);
3. lacuna — each character is replaced by the lacuna symbol with
   probability ``p_delete`` (physical gaps). Replacement, not removal, so
   length is always preserved.

Running the passes sequentially makes each probability the exact marginal
of its own pass. All randomness comes from per-verse streams derived from
``(seed, verse identity)`` (see :mod:`copticforge.rng`), so output does not
depend on processing order and corpus-level parallelism cannot change a
byte. A verse that appears under several reference versions is corrupted
identically in all of them.

Draw-consumption contract (what an independent replay must reproduce), per
verse, on the stream labelled ``"corrupt"``:

* pass 1 consumes one uniform per character, in order, whether or not the
  character is substitutable and whether or not the test fires; when a
  substitution fires it consumes one extra uniform to pick the alternative
  (first cumulative normalized weight exceeding the draw, entries in map
  file order);
* pass 2 consumes one uniform per considered position ``i`` (left to
  right; after a swap, ``i+1`` is skipped); the final position is never a
  swap initiator;
* pass 3 consumes one uniform per character, in order.

The per-verse corruption decision of :func:`corrupt_corpus` is a single
uniform on the separate ``"select"`` stream, compared against ``p_verse``.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path

from sklearn.base import BaseEstimator, TransformerMixin

from .align import AlignedPair
from .errors import InvalidTableEntryError
from .rng import rate_subseed, verse_stream
from .validation import check_pairs, check_probability, check_seed
from .verses import VerseId


@dataclass(frozen=True)
class ConfusionMap:
    """Visually-confusable alternatives per code point, with weights.

    Weights are normalized at construction; alternatives keep their file
    order, which fixes the cumulative-weight selection order.
    """

    entries: dict[int, tuple[tuple[int, float], ...]]

    def __post_init__(self):
        normalized: dict[int, tuple[tuple[int, float], ...]] = {}
        for code_point, alternatives in self.entries.items():
            if not alternatives:
                raise InvalidTableEntryError(
                    f"confusion map: U+{code_point:04X} has no alternatives"
                )
            total = 0.0
            for alt, weight in alternatives:
                if alt == code_point:
                    raise InvalidTableEntryError(
                        f"confusion map: U+{code_point:04X} lists itself"
                    )
                if weight <= 0:
                    raise InvalidTableEntryError(
                        f"confusion map: non-positive weight on U+{code_point:04X}"
                    )
                total += weight
            normalized[code_point] = tuple(
                (alt, weight / total) for alt, weight in alternatives
            )
        object.__setattr__(self, "entries", normalized)

    def __contains__(self, code_point: int) -> bool:
        return code_point in self.entries

    def pick(self, code_point: int, u: float) -> int:
        """Alternative selected by uniform draw ``u`` for ``code_point``."""
        cumulative = 0.0
        alternatives = self.entries[code_point]
        for alt, weight in alternatives:
            cumulative += weight
            if u < cumulative:
                return alt
        return alternatives[-1][0]  # float round-off guard


def load_confusion_map(path: str | Path | None = None) -> ConfusionMap:
    """Load a confusion map from TSV.

    Column 1 is a hex code point, column 2 a comma-separated
    ``hexcodepoint:weight`` list. ``#``-prefixed lines are comments.
    ``path=None`` loads the shipped default map.
    """
    if path is None:
        map_path = Path(str(resources.files("copticforge").joinpath("data/confusion.tsv")))
    else:
        map_path = Path(path)
    entries: dict[int, tuple[tuple[int, float], ...]] = {}
    with open(map_path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) != 2:
                raise InvalidTableEntryError(
                    f"{map_path}:{lineno}: expected 2 tab-separated columns"
                )
            try:
                code_point = int(fields[0].strip(), 16)
            except ValueError:
                raise InvalidTableEntryError(
                    f"{map_path}:{lineno}: malformed code point {fields[0]!r}"
                ) from None
            if code_point in entries:
                raise InvalidTableEntryError(
                    f"{map_path}:{lineno}: duplicate entry for U+{code_point:04X}"
                )
            alternatives = []
            for item in fields[1].split(","):
                item = item.strip()
                if not item:
                    continue
                alt_hex, _, weight_text = item.partition(":")
                try:
                    alt = int(alt_hex, 16)
                    weight = float(weight_text) if weight_text else 1.0
                except ValueError:
                    raise InvalidTableEntryError(
                        f"{map_path}:{lineno}: malformed alternative {item!r}"
                    ) from None
                alternatives.append((alt, weight))
            entries[code_point] = tuple(alternatives)
    return ConfusionMap(entries=entries)


@dataclass(frozen=True)
class NoiseConfig:
    """Full parameterization of the degradation model."""

    p_delete: float = 0.02
    p_swap: float = 0.02
    p_substitute: float = 0.10
    p_verse: float = 1.0
    lacuna_symbol: str = "#"
    seed: int = 0

    def __post_init__(self):
        check_probability(self.p_delete, "p_delete")
        check_probability(self.p_swap, "p_swap")
        check_probability(self.p_substitute, "p_substitute")
        check_probability(self.p_verse, "p_verse")
        check_seed(self.seed)
        if len(self.lacuna_symbol) != 1:
            raise ValueError(
                f"lacuna_symbol must be a single character, "
                f"got {self.lacuna_symbol!r}"
            )

    def validate_against(self, confusion: ConfusionMap) -> None:
        """The lacuna symbol must be disjoint from the confusion map."""
        lacuna_cp = ord(self.lacuna_symbol)
        if lacuna_cp in confusion:
            raise ValueError(
                f"lacuna symbol {self.lacuna_symbol!r} is a confusion-map key"
            )
        for code_point, alternatives in confusion.entries.items():
            for alt, _ in alternatives:
                if alt == lacuna_cp:
                    raise ValueError(
                        f"lacuna symbol {self.lacuna_symbol!r} is an "
                        f"alternative of U+{code_point:04X}"
                    )


@dataclass
class NoiseReport:
    """Counters aggregated over a corruption run; merges as a sum."""

    verses_total: int = 0
    verses_corrupted: int = 0
    chars_seen: int = 0
    chars_deleted: int = 0
    chars_swapped: int = 0
    chars_substituted: int = 0
    chars_substitutable: int = 0
    swap_eligible: int = 0

    def __add__(self, other: "NoiseReport") -> "NoiseReport":
        return NoiseReport(
            verses_total=self.verses_total + other.verses_total,
            verses_corrupted=self.verses_corrupted + other.verses_corrupted,
            chars_seen=self.chars_seen + other.chars_seen,
            chars_deleted=self.chars_deleted + other.chars_deleted,
            chars_swapped=self.chars_swapped + other.chars_swapped,
            chars_substituted=self.chars_substituted + other.chars_substituted,
            chars_substitutable=self.chars_substitutable + other.chars_substitutable,
            swap_eligible=self.swap_eligible + other.swap_eligible,
        )

    def to_dict(self) -> dict:
        return {
            "verses_total": self.verses_total,
            "verses_corrupted": self.verses_corrupted,
            "chars_seen": self.chars_seen,
            "chars_deleted": self.chars_deleted,
            "chars_swapped": self.chars_swapped,
            "chars_substituted": self.chars_substituted,
            "chars_substitutable": self.chars_substitutable,
            "swap_eligible": self.swap_eligible,
        }


def corrupt_verse(
    text: str,
    cfg: NoiseConfig,
    confusion: ConfusionMap,
    verse_key: VerseId,
) -> tuple[str, NoiseReport]:
    """Apply the three passes to one verse; returns (text, report delta).

    Randomness comes entirely from ``(cfg.seed, verse_key)``; see the module
    docstring for the exact draw-consumption order.
    """
    if not text:
        raise ValueError("corrupt_verse requires non-empty text")
    rng = verse_stream(cfg.seed, "corrupt", verse_key)
    chars = list(text)
    n = len(chars)
    report = NoiseReport(verses_total=1, verses_corrupted=1, chars_seen=n)

    # pass 1: substitution
    for i in range(n):
        u = rng.uniform()
        code_point = ord(chars[i])
        if code_point in confusion:
            report.chars_substitutable += 1
            if u < cfg.p_substitute:
                chars[i] = chr(confusion.pick(code_point, rng.uniform()))
                report.chars_substituted += 1

    # pass 2: transposition
    i = 0
    while i < n - 1:
        report.swap_eligible += 1
        if rng.uniform() < cfg.p_swap:
            chars[i], chars[i + 1] = chars[i + 1], chars[i]
            report.chars_swapped += 1
            i += 2
        else:
            i += 1

    # pass 3: lacuna
    for i in range(n):
        if rng.uniform() < cfg.p_delete:
            chars[i] = cfg.lacuna_symbol
            report.chars_deleted += 1

    return "".join(chars), report


def selected_mask(pairs, cfg: NoiseConfig) -> list[bool]:
    """The per-verse corruption decisions, recomputable from (cfg, verse id).

    This is exactly the Bernoulli draw :func:`corrupt_corpus` makes, so the
    mask can be regenerated at any time without re-running corruption.
    """
    return [
        verse_stream(cfg.seed, "select", pair.id).uniform() < cfg.p_verse
        for pair in pairs
    ]


def _corrupt_pair(pair: AlignedPair, cfg: NoiseConfig, confusion: ConfusionMap):
    selected = verse_stream(cfg.seed, "select", pair.id).uniform() < cfg.p_verse
    if not selected:
        return pair, NoiseReport(verses_total=1)
    if not pair.source_text:
        return pair, NoiseReport(verses_total=1, verses_corrupted=1)
    corrupted, delta = corrupt_verse(pair.source_text, cfg, confusion, pair.id)
    return replace(pair, source_text=corrupted), delta


def corrupt_corpus(
    pairs,
    cfg: NoiseConfig,
    confusion: ConfusionMap | None = None,
    workers: int = 1,
) -> tuple[list[AlignedPair], NoiseReport]:
    """Corrupt each pair's source text iff its per-verse draw succeeds.

    Reference texts are never modified. ``workers > 1`` corrupts verses in
    a thread pool; per-verse streams make the result identical either way.
    """
    if confusion is None:
        confusion = load_confusion_map()
    cfg.validate_against(confusion)
    pair_list = list(pairs)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(
                pool.map(lambda p: _corrupt_pair(p, cfg, confusion), pair_list)
            )
    else:
        results = [_corrupt_pair(p, cfg, confusion) for p in pair_list]
    out_pairs = [pair for pair, _ in results]
    report = NoiseReport()
    for _, delta in results:
        report = report + delta
    return out_pairs, report


@dataclass(frozen=True)
class CorpusVariant:
    """One noise-swept corpus: the rate, its derived config, data, report."""

    rate: float
    config: NoiseConfig
    pairs: list[AlignedPair]
    report: NoiseReport


def sweep(
    pairs,
    base_cfg: NoiseConfig,
    confusion: ConfusionMap | None = None,
    rates=(0.0, 0.1, 0.3, 0.5, 1.0),
    workers: int = 1,
) -> list[CorpusVariant]:
    """Generate one corpus variant per verse-corruption rate.

    Each variant runs under a rate-derived sub-seed
    (:func:`copticforge.rng.rate_subseed`), so the variants are mutually
    deterministic: re-running any subset reproduces the same bytes.
    """
    rate_list = [check_probability(r, "rate") for r in rates]
    if not rate_list:
        raise ValueError("rates must be non-empty")
    if confusion is None:
        confusion = load_confusion_map()
    variants = []
    pair_list = list(pairs)
    for rate in rate_list:
        cfg = replace(
            base_cfg, p_verse=rate, seed=rate_subseed(base_cfg.seed, rate)
        )
        corrupted, report = corrupt_corpus(pair_list, cfg, confusion, workers)
        variants.append(
            CorpusVariant(rate=rate, config=cfg, pairs=corrupted, report=report)
        )
    return variants


class NoiseInjector(BaseEstimator, TransformerMixin):
    """Transformer form of :func:`corrupt_corpus`.

    Parameters mirror :class:`NoiseConfig`; ``confusion_path=None`` uses the
    shipped map. After ``transform``, ``report_`` holds the aggregated
    counters and ``selected_`` the per-pair corruption mask.
    """

    def __init__(
        self,
        p_delete=0.02,
        p_swap=0.02,
        p_substitute=0.10,
        p_verse=1.0,
        lacuna_symbol="#",
        seed=0,
        confusion_path=None,
        workers=1,
    ):
        self.p_delete = p_delete
        self.p_swap = p_swap
        self.p_substitute = p_substitute
        self.p_verse = p_verse
        self.lacuna_symbol = lacuna_symbol
        self.seed = seed
        self.confusion_path = confusion_path
        self.workers = workers

    def _config(self) -> NoiseConfig:
        return NoiseConfig(
            p_delete=self.p_delete,
            p_swap=self.p_swap,
            p_substitute=self.p_substitute,
            p_verse=self.p_verse,
            lacuna_symbol=self.lacuna_symbol,
            seed=self.seed,
        )

    def fit(self, X, y=None):
        self._config()  # validate eagerly
        return self

    def transform(self, X) -> list[AlignedPair]:
        pairs = check_pairs(X)
        cfg = self._config()
        confusion = load_confusion_map(self.confusion_path)
        corrupted, report = corrupt_corpus(pairs, cfg, confusion, self.workers)
        self.report_ = report
        self.selected_ = selected_mask(pairs, cfg)
        return corrupted
