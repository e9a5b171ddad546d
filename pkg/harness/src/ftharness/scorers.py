"""Metric adapters.

``meteor`` goes through the corpus toolkit's command line (its documented
external interface); the neural metrics are invoked through their existing
scorer packages when installed, and fail with a clear
:class:`ScorerUnavailableError` otherwise (they need pretrained weights, so
they are paper-scale only)."""

from __future__ import annotations

import json
import os
import shlex
import subprocess
import tempfile
from pathlib import Path

from .data import TranslationExample, write_hypotheses

FORGE_CLI_ENV = "FTHARNESS_FORGE_CLI"


class ScorerUnavailableError(Exception):
    """The requested scorer cannot run in this environment."""


class MisalignedHypothesesError(Exception):
    """Hypotheses do not line up 1:1 with the test references."""


def _forge_command() -> list[str]:
    return shlex.split(os.environ.get(FORGE_CLI_ENV, "copticforge"))


def check_alignment(hypotheses, references) -> None:
    hyp_keys = [example.key for example, _ in hypotheses]
    ref_keys = {example.key for example in references}
    if len(set(hyp_keys)) != len(hyp_keys):
        raise MisalignedHypothesesError("duplicate hypothesis keys")
    missing = [key for key in hyp_keys if key not in ref_keys]
    if missing:
        raise MisalignedHypothesesError(
            f"{len(missing)} hypothesis key(s) have no reference; first: {missing[0]}"
        )
    if len(hyp_keys) != len(ref_keys):
        raise MisalignedHypothesesError(
            f"{len(ref_keys) - len(hyp_keys)} reference(s) have no hypothesis"
        )


def _meteor_score(hypotheses, references_path: Path) -> float:
    with tempfile.TemporaryDirectory(prefix="ftharness-") as tmp:
        hyp_path = Path(tmp) / "hypotheses.jsonl"
        out_path = Path(tmp) / "meteor.json"
        write_hypotheses(hyp_path, hypotheses)
        command = [
            *_forge_command(),
            "meteor",
            "--hypotheses",
            str(hyp_path),
            "--references",
            str(references_path),
            "-o",
            str(out_path),
        ]
        try:
            completed = subprocess.run(
                command, capture_output=True, text=True, timeout=600
            )
        except FileNotFoundError as exc:
            raise ScorerUnavailableError(
                f"corpus-toolkit CLI not found ({command[0]!r}); "
                f"set {FORGE_CLI_ENV} to override"
            ) from exc
        if completed.returncode != 0:
            raise ScorerUnavailableError(
                f"meteor scoring failed (exit {completed.returncode}): "
                f"{completed.stderr.strip()}"
            )
        with open(out_path, encoding="utf-8") as fh:
            return float(json.load(fh)["corpus_mean"])


def _bertscore_score(hypotheses, references) -> float:
    try:
        from bert_score import BERTScorer
    except ImportError as exc:
        raise ScorerUnavailableError(f"bert-score is not installed: {exc}") from exc
    ref_by_key = {example.key: example.reference for example in references}
    candidate = [text for _, text in hypotheses]
    gold = [ref_by_key[example.key] for example, _ in hypotheses]
    scorer = BERTScorer(lang="fr", rescale_with_baseline=False)
    _, _, f1 = scorer.score(candidate, gold)
    return float(f1.mean())


def _bleurt_score(hypotheses, references) -> float:
    try:
        from bleurt import score as bleurt_score
    except ImportError as exc:
        raise ScorerUnavailableError(f"bleurt is not installed: {exc}") from exc
    checkpoint = os.environ.get("FTHARNESS_BLEURT_CHECKPOINT")
    if not checkpoint:
        raise ScorerUnavailableError("set FTHARNESS_BLEURT_CHECKPOINT to a checkpoint")
    ref_by_key = {example.key: example.reference for example in references}
    scorer = bleurt_score.BleurtScorer(checkpoint)
    scores = scorer.score(
        references=[ref_by_key[e.key] for e, _ in hypotheses],
        candidates=[text for _, text in hypotheses],
    )
    return float(sum(scores) / len(scores))


def _comet_score(hypotheses, references) -> float:
    try:
        from comet import download_model, load_from_checkpoint
    except ImportError as exc:
        raise ScorerUnavailableError(f"unbabel-comet is not installed: {exc}") from exc
    ref_by_key = {
        example.key: (example.source, example.reference) for example in references
    }
    data = [
        {
            "src": ref_by_key[example.key][0],
            "mt": text,
            "ref": ref_by_key[example.key][1],
        }
        for example, text in hypotheses
    ]
    model = load_from_checkpoint(download_model("Unbabel/wmt22-comet-da"))
    output = model.predict(data, batch_size=8, gpus=0)
    return float(output.system_score)


def score_with_metric(
    metric: str,
    hypotheses: list[tuple[TranslationExample, str]],
    references: list[TranslationExample],
    references_path: Path,
) -> float:
    """Corpus-level score for one metric over aligned hypotheses."""
    check_alignment(hypotheses, references)
    if metric == "meteor":
        return _meteor_score(hypotheses, references_path)
    if metric == "bertscore":
        return _bertscore_score(hypotheses, references)
    if metric == "bleurt":
        return _bleurt_score(hypotheses, references)
    if metric == "comet":
        return _comet_score(hypotheses, references)
    raise ValueError(f"unknown metric {metric!r}")
