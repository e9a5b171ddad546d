"""Fine-tuning loop plus checkpoint/log/manifest emission."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import torch
from torch import nn

from .data import load_corpora
from .experiment import ExperimentSpec
from .model import (
    PAD,
    BOS,
    TinySeq2Seq,
    Vocab,
    save_checkpoint,
)

TINY_MODEL_ID = "tiny-gru"


class ModelResolutionError(Exception):
    """The model identifier cannot be resolved in this environment."""


@dataclass
class TrainingLog:
    """Per-epoch mean training loss."""

    epochs: list[dict] = field(default_factory=list)

    def add(self, epoch: int, loss: float) -> None:
        self.epochs.append({"epoch": epoch, "loss": loss})

    @property
    def first_loss(self) -> float:
        return self.epochs[0]["loss"]

    @property
    def final_loss(self) -> float:
        return self.epochs[-1]["loss"]

    def write(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump({"epochs": self.epochs}, fh, indent=2)
            fh.write("\n")


def _batches(examples, vocab_src, vocab_tgt, batch_size, generator):
    order = torch.randperm(len(examples), generator=generator).tolist()
    for start in range(0, len(order), batch_size):
        chunk = [examples[i] for i in order[start : start + batch_size]]
        src_ids = [vocab_src.encode(e.source) for e in chunk]
        tgt_ids = [vocab_tgt.encode(e.reference) for e in chunk]
        src_len = max(len(ids) for ids in src_ids)
        tgt_len = max(len(ids) for ids in tgt_ids)
        src = torch.full((len(chunk), src_len), PAD, dtype=torch.long)
        tgt_in = torch.full((len(chunk), tgt_len), PAD, dtype=torch.long)
        tgt_out = torch.full((len(chunk), tgt_len), PAD, dtype=torch.long)
        for row, (s_ids, t_ids) in enumerate(zip(src_ids, tgt_ids)):
            src[row, : len(s_ids)] = torch.tensor(s_ids)
            tgt_in[row, 0] = BOS
            tgt_in[row, 1 : len(t_ids)] = torch.tensor(t_ids[:-1])
            tgt_out[row, : len(t_ids)] = torch.tensor(t_ids)
        yield src, tgt_in, tgt_out


def _train_tiny(spec: ExperimentSpec, examples) -> tuple[TinySeq2Seq, TrainingLog]:
    torch.manual_seed(spec.seed)
    source_vocab = Vocab.build(e.source for e in examples)
    target_vocab = Vocab.build(e.reference for e in examples)
    model = TinySeq2Seq(source_vocab, target_vocab)
    optimizer = torch.optim.Adam(model.parameters(), lr=spec.learning_rate)
    criterion = nn.CrossEntropyLoss(ignore_index=PAD)
    generator = torch.Generator().manual_seed(spec.seed)

    log = TrainingLog()
    model.train()
    for epoch in range(1, spec.epochs + 1):
        total, batches = 0.0, 0
        for src, tgt_in, tgt_out in _batches(
            examples, source_vocab, target_vocab, spec.batch_size, generator
        ):
            optimizer.zero_grad()
            logits = model(src, tgt_in)
            loss = criterion(logits.reshape(-1, logits.size(-1)), tgt_out.reshape(-1))
            loss.backward()
            optimizer.step()
            total += loss.item()
            batches += 1
        log.add(epoch, total / batches)
    return model, log


def _train_huggingface(spec: ExperimentSpec, examples):
    try:
        from transformers import AutoModelForSeq2SeqLM, AutoTokenizer
    except ImportError as exc:
        raise ModelResolutionError(
            f"model {spec.model!r} needs the transformers package: {exc}"
        ) from exc
    try:
        tokenizer = AutoTokenizer.from_pretrained(spec.model)
        model = AutoModelForSeq2SeqLM.from_pretrained(spec.model)
    except Exception as exc:  # offline, unknown id, gated weights, ...
        raise ModelResolutionError(
            f"could not resolve model {spec.model!r}: {exc}"
        ) from exc

    torch.manual_seed(spec.seed)
    optimizer = torch.optim.AdamW(model.parameters(), lr=spec.learning_rate)
    log = TrainingLog()
    model.train()
    for epoch in range(1, spec.epochs + 1):
        total, batches = 0.0, 0
        for start in range(0, len(examples), spec.batch_size):
            chunk = examples[start : start + spec.batch_size]
            encoded = tokenizer(
                [e.source for e in chunk],
                text_target=[e.reference for e in chunk],
                padding=True,
                truncation=True,
                max_length=256,
                return_tensors="pt",
            )
            optimizer.zero_grad()
            loss = model(**encoded).loss
            loss.backward()
            optimizer.step()
            total += loss.item()
            batches += 1
        log.add(epoch, total / batches)
    return (model, tokenizer), log


def _write_manifest(artifacts_dir: Path, spec: ExperimentSpec) -> None:
    from . import __version__

    versions = {"ftharness": __version__, "torch": torch.__version__}
    for module_name in ("bert_score", "bleurt", "comet", "transformers"):
        try:
            module = __import__(module_name)
            versions[module_name] = getattr(module, "__version__", "unknown")
        except ImportError:
            pass
    manifest = {
        "model": spec.model,
        "epochs": spec.epochs,
        "seed": spec.seed,
        "train_corpora": [str(p) for p in spec.train_corpora],
        "metrics": list(spec.metrics),
        "versions": versions,
    }
    with open(artifacts_dir / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")


def finetune(spec: ExperimentSpec, artifacts_dir: str | Path):
    """Fine-tune one experiment; returns (model, TrainingLog).

    Writes ``checkpoint.pt`` (builtin model), ``train_log.json`` and
    ``manifest.json`` into ``artifacts_dir``. Corpus schema violations and
    unresolvable model identifiers raise.
    """
    artifacts_dir = Path(artifacts_dir)
    artifacts_dir.mkdir(parents=True, exist_ok=True)
    examples = load_corpora(spec.train_corpora)

    if spec.model == TINY_MODEL_ID:
        model, log = _train_tiny(spec, examples)
        save_checkpoint(model, artifacts_dir / "checkpoint.pt")
    else:
        (model, tokenizer), log = _train_huggingface(spec, examples)
        model.save_pretrained(artifacts_dir / "checkpoint")
        tokenizer.save_pretrained(artifacts_dir / "checkpoint")

    log.write(artifacts_dir / "train_log.json")
    _write_manifest(artifacts_dir, spec)
    return model, log
