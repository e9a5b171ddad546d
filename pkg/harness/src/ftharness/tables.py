"""Score-table CSV (the toolkit's drop-table input schema) and Markdown
per-condition Markdown result grids."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

HEADER = ["test_noise", "train_noise", "metric", "score"]


@dataclass(frozen=True)
class ScoreRow:
    test_noise: float
    train_noise: float
    metric: str
    score: float


def write_score_csv(path: str | Path, rows, append: bool = False) -> None:
    path = Path(path)
    new_file = not (append and path.exists())
    mode = "w" if new_file else "a"
    with open(path, mode, encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        if new_file:
            writer.writerow(HEADER)
        for row in rows:
            writer.writerow(
                [f"{row.test_noise:g}", f"{row.train_noise:g}", row.metric, f"{row.score:g}"]
            )


def read_score_csv(path: str | Path) -> list[ScoreRow]:
    rows = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != HEADER:
            raise ValueError(f"{path}: expected header {','.join(HEADER)}")
        for raw in reader:
            if not raw or all(not cell.strip() for cell in raw):
                continue
            rows.append(
                ScoreRow(
                    test_noise=float(raw[0]),
                    train_noise=float(raw[1]),
                    metric=raw[2].strip(),
                    score=float(raw[3]),
                )
            )
    return rows


def write_markdown_table(path: str | Path, rows) -> None:
    """Pivot rows into one Markdown grid: a line per (test, train) pair."""
    metrics: list[str] = []
    for row in rows:
        if row.metric not in metrics:
            metrics.append(row.metric)
    by_condition: dict[tuple[float, float], dict[str, float]] = {}
    for row in rows:
        by_condition.setdefault((row.test_noise, row.train_noise), {})[row.metric] = row.score

    lines = [
        "| Test noise | Train noise | " + " | ".join(metrics) + " |",
        "|---|---|" + "|".join(["---"] * len(metrics)) + "|",
    ]
    for (test_noise, train_noise) in sorted(by_condition):
        scores = by_condition[(test_noise, train_noise)]
        cells = [
            f"{scores[m]:.3f}" if m in scores else "-" for m in metrics
        ]
        lines.append(
            f"| {test_noise * 100:g}% | {train_noise * 100:g}% | " + " | ".join(cells) + " |"
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
