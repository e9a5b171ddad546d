"""Pipeline configuration: flat key=value files, env overrides, validation.

Precedence (highest wins): command-line flag > ``COPTICFORGE_*`` environment
variable > config file > built-in default. Validation accumulates every
violation before failing so a bad config surfaces all its problems at once.

Recognized keys (see README for full semantics)::

    tokens, marks, feats        comma-separated PAULA file lists (zipped)
    reference.<label>           one reference TSV per version label
    book_table, romanization_table, confusion_map
    test_books                  comma-separated canonical book names
    noise_rates                 comma-separated verse-corruption rates
    p_delete, p_swap, p_substitute, lacuna_symbol, seed
    output_dir, romanize, emit_stats, workers

Environment overrides exist for every scalar key (``COPTICFORGE_SEED``,
``COPTICFORGE_OUTPUT_DIR``, ...); ``reference.<label>`` keys are file- or
flag-only.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigError

ENV_PREFIX = "COPTICFORGE_"

_SCALAR_KEYS = (
    "tokens",
    "marks",
    "feats",
    "book_table",
    "romanization_table",
    "confusion_map",
    "test_books",
    "noise_rates",
    "p_delete",
    "p_swap",
    "p_substitute",
    "lacuna_symbol",
    "seed",
    "output_dir",
    "romanize",
    "emit_stats",
    "workers",
)

_DEFAULTS = {
    "test_books": "1Cor,Mark,Gal,Heb",
    "noise_rates": "",
    "p_delete": "0.02",
    "p_swap": "0.02",
    "p_substitute": "0.10",
    "lacuna_symbol": "#",
    "seed": "0",
    "romanize": "true",
    "emit_stats": "true",
    "workers": "1",
}

_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


@dataclass(frozen=True)
class PipelineConfig:
    """Fully validated configuration for one end-to-end run."""

    token_files: tuple[Path, ...]
    mark_files: tuple[Path, ...]
    feat_files: tuple[Path, ...]
    reference_files: dict[str, Path]
    output_dir: Path
    book_table: Path | None = None
    romanization_table: Path | None = None
    confusion_map: Path | None = None
    test_books: tuple[str, ...] = ("1Cor", "Mark", "Gal", "Heb")
    noise_rates: tuple[float, ...] = ()
    p_delete: float = 0.02
    p_swap: float = 0.02
    p_substitute: float = 0.10
    lacuna_symbol: str = "#"
    seed: int = 0
    romanize: bool = True
    emit_stats: bool = True
    workers: int = 1

    def effective_params(self) -> dict:
        """Canonical key=value view, used for the manifest config hash.

        ``workers`` is deliberately absent: parallelism cannot change any
        output byte, so it is not provenance.
        """
        return {
            "tokens": ",".join(str(p) for p in self.token_files),
            "marks": ",".join(str(p) for p in self.mark_files),
            "feats": ",".join(str(p) for p in self.feat_files),
            "references": ",".join(
                f"{label}={self.reference_files[label]}"
                for label in sorted(self.reference_files)
            ),
            "book_table": str(self.book_table or ""),
            "romanization_table": str(self.romanization_table or ""),
            "confusion_map": str(self.confusion_map or ""),
            "test_books": ",".join(sorted(self.test_books)),
            "noise_rates": ",".join(f"{r:g}" for r in self.noise_rates),
            "p_delete": f"{self.p_delete:g}",
            "p_swap": f"{self.p_swap:g}",
            "p_substitute": f"{self.p_substitute:g}",
            "lacuna_symbol": self.lacuna_symbol,
            "seed": str(self.seed),
            "output_dir": str(self.output_dir),
            "romanize": str(self.romanize).lower(),
            "emit_stats": str(self.emit_stats).lower(),
        }


def parse_config_text(text: str, source: str = "<config>") -> tuple[dict, list[str]]:
    """Parse flat key=value lines; returns (values, violations)."""
    values: dict[str, str] = {}
    violations: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            violations.append(f"{source}:{lineno}: expected key = value")
            continue
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not (key in _SCALAR_KEYS or key.startswith("reference.")):
            violations.append(f"{source}:{lineno}: unknown key {key!r}")
            continue
        if key in values:
            violations.append(f"{source}:{lineno}: duplicate key {key!r}")
            continue
        values[key] = value
    return values, violations


def _split_list(value: str) -> list[str]:
    return [item.strip() for item in value.split(",") if item.strip()]


def _parse_bool(value: str, key: str, violations: list[str]) -> bool:
    lowered = value.strip().lower()
    if lowered in _TRUE:
        return True
    if lowered in _FALSE:
        return False
    violations.append(f"{key}: expected a boolean, got {value!r}")
    return False


def validate_config(
    path: str | Path,
    env: dict | None = None,
    overrides: dict | None = None,
) -> PipelineConfig:
    """Load, override, and fully validate a pipeline config.

    Raises :class:`ConfigError` carrying *all* violations found, never just
    the first.
    """
    config_path = Path(path)
    violations: list[str] = []
    if not config_path.is_file():
        raise ConfigError([f"config file not found: {config_path}"])
    text = config_path.read_text(encoding="utf-8")
    values, violations_from_parse = parse_config_text(text, str(config_path))
    violations.extend(violations_from_parse)

    environment = os.environ if env is None else env
    for key in _SCALAR_KEYS:
        env_value = environment.get(ENV_PREFIX + key.upper())
        if env_value is not None:
            values[key] = env_value
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        values[key] = str(value)

    def get(key: str) -> str | None:
        return values.get(key, _DEFAULTS.get(key))

    # file triples
    tokens = [Path(p) for p in _split_list(get("tokens") or "")]
    marks = [Path(p) for p in _split_list(get("marks") or "")]
    feats = [Path(p) for p in _split_list(get("feats") or "")]
    if not tokens:
        violations.append("tokens: at least one token file is required")
    if not (len(tokens) == len(marks) == len(feats)):
        violations.append(
            f"tokens/marks/feats must have equal counts, got "
            f"{len(tokens)}/{len(marks)}/{len(feats)}"
        )
    for kind, paths in (("tokens", tokens), ("marks", marks), ("feats", feats)):
        for p in paths:
            if not p.is_file():
                violations.append(f"{kind}: file not found: {p}")

    # references
    reference_files: dict[str, Path] = {}
    for key, value in sorted(values.items()):
        if not key.startswith("reference."):
            continue
        label = key[len("reference."):]
        if not label:
            violations.append("reference.: empty version label")
            continue
        ref_path = Path(value)
        if not ref_path.is_file():
            violations.append(f"{key}: file not found: {ref_path}")
        reference_files[label] = ref_path
    if not reference_files:
        violations.append("at least one reference.<label> entry is required")

    # optional tables
    optional_tables: dict[str, Path | None] = {}
    for key in ("book_table", "romanization_table", "confusion_map"):
        raw = get(key)
        if raw:
            table_path = Path(raw)
            if not table_path.is_file():
                violations.append(f"{key}: file not found: {table_path}")
            optional_tables[key] = table_path
        else:
            optional_tables[key] = None

    test_books = tuple(_split_list(get("test_books") or ""))
    if not test_books:
        violations.append("test_books must be non-empty")

    noise_rates: list[float] = []
    for item in _split_list(get("noise_rates") or ""):
        try:
            rate = float(item)
        except ValueError:
            violations.append(f"noise_rates: not a number: {item!r}")
            continue
        if not 0.0 <= rate <= 1.0:
            violations.append(f"noise_rates: rate out of [0, 1]: {item}")
            continue
        noise_rates.append(rate)

    probabilities = {}
    for key in ("p_delete", "p_swap", "p_substitute"):
        raw = get(key) or "0"
        try:
            prob = float(raw)
        except ValueError:
            violations.append(f"{key}: not a number: {raw!r}")
            prob = 0.0
        if not 0.0 <= prob <= 1.0:
            violations.append(f"{key}: out of [0, 1]: {raw}")
            prob = min(max(prob, 0.0), 1.0)
        probabilities[key] = prob

    lacuna = get("lacuna_symbol") or "#"
    if len(lacuna) != 1:
        violations.append(f"lacuna_symbol must be one character, got {lacuna!r}")
        lacuna = "#"

    try:
        seed = int(get("seed") or "0")
        if not 0 <= seed < 2**64:
            violations.append("seed must fit in an unsigned 64-bit integer")
            seed = 0
    except ValueError:
        violations.append(f"seed: not an integer: {get('seed')!r}")
        seed = 0

    output_raw = get("output_dir")
    if not output_raw:
        violations.append("output_dir is required")
        output_dir = Path(".")
    else:
        output_dir = Path(output_raw)
        if output_dir.exists():
            if not output_dir.is_dir():
                violations.append(f"output_dir is not a directory: {output_dir}")
            elif not os.access(output_dir, os.W_OK):
                violations.append(f"output_dir is not writable: {output_dir}")
        else:
            parent = output_dir.parent if str(output_dir.parent) else Path(".")
            if not parent.is_dir():
                violations.append(
                    f"output_dir parent does not exist: {parent}"
                )

    romanize_flag = _parse_bool(get("romanize") or "true", "romanize", violations)
    emit_stats = _parse_bool(get("emit_stats") or "true", "emit_stats", violations)

    try:
        workers = int(get("workers") or "1")
        if workers < 1:
            violations.append("workers must be >= 1")
            workers = 1
    except ValueError:
        violations.append(f"workers: not an integer: {get('workers')!r}")
        workers = 1

    if violations:
        raise ConfigError(violations)

    return PipelineConfig(
        token_files=tuple(tokens),
        mark_files=tuple(marks),
        feat_files=tuple(feats),
        reference_files=reference_files,
        output_dir=output_dir,
        book_table=optional_tables["book_table"],
        romanization_table=optional_tables["romanization_table"],
        confusion_map=optional_tables["confusion_map"],
        test_books=test_books,
        noise_rates=tuple(noise_rates),
        p_delete=probabilities["p_delete"],
        p_swap=probabilities["p_swap"],
        p_substitute=probabilities["p_substitute"],
        lacuna_symbol=lacuna,
        seed=seed,
        romanize=romanize_flag,
        emit_stats=emit_stats,
        workers=workers,
    )
