"""End-to-end smoke: 200-pair toy corpus, tiny model, 2 epochs, CPU.

Checks the whole loop: fine-tune (loss must fall), translate two noise
conditions of the test corpus, emit ScoreTable rows, and hand the CSV to
the corpus toolkit's drop-table command, which must accept it. The toolkit
is reached only through its command line and file formats."""

import json
import subprocess
import time

import pytest
import torch

from ftharness import ExperimentSpec, ScoreRow, TinySeq2Seq, Vocab, finetune, load_corpus
from ftharness.model import load_checkpoint
from ftharness.scorers import MisalignedHypothesesError, score_with_metric
from ftharness.tables import write_score_csv

FORGE = "copticforge"


def _forge(*args):
    return subprocess.run(
        [FORGE, *args], capture_output=True, text=True, timeout=300
    )


def test_smoke_end_to_end(toy_train, toy_test, tmp_path):
    started = time.perf_counter()

    spec = ExperimentSpec(
        model="tiny-gru",
        train_corpora=(toy_train,),
        test_corpora=(toy_test,),
        output_table=tmp_path / "scores.csv",
        epochs=2,
        metrics=("meteor",),
        seed=7,
        learning_rate=1e-2,
        batch_size=8,
    )
    artifacts = tmp_path / "artifacts"
    model, log = finetune(spec, artifacts)

    # per-epoch loss log exists and training made progress
    assert (artifacts / "checkpoint.pt").exists()
    log_payload = json.loads((artifacts / "train_log.json").read_text())
    assert len(log_payload["epochs"]) == 2
    assert log.final_loss < log.first_loss

    manifest = json.loads((artifacts / "manifest.json").read_text())
    assert manifest["model"] == "tiny-gru"
    assert "torch" in manifest["versions"]

    # two test conditions: the clean corpus and a fully-corrupted variant
    # produced by the toolkit's own sweep command
    noise_dir = tmp_path / "noise"
    completed = _forge(
        "sweep",
        "--pairs", str(toy_test),
        "--rates", "0,1.0",
        "--seed", "11",
        "--out-dir", str(noise_dir),
        "--prefix", "test",
    )
    assert completed.returncode == 0, completed.stderr
    conditions = [
        (0.0, noise_dir / "test_noise_p0.jsonl"),
        (1.0, noise_dir / "test_noise_p100.jsonl"),
    ]

    restored = load_checkpoint(artifacts / "checkpoint.pt")
    rows = []
    for rate, corpus_path in conditions:
        examples = load_corpus(corpus_path)
        hypotheses = [(e, restored.translate(e.source)) for e in examples]
        score = score_with_metric("meteor", hypotheses, examples, corpus_path)
        rows.append(ScoreRow(test_noise=rate, train_noise=0.0, metric="meteor", score=score))
    write_score_csv(spec.output_table, rows)

    clean_score = rows[0].score
    assert clean_score > 0, "2-epoch model produced zero unigram overlap"

    # the toolkit's drop-table command must accept the emitted CSV
    completed = _forge("drop-table", "--scores", str(spec.output_table))
    assert completed.returncode == 0, completed.stderr
    lines = completed.stdout.strip().splitlines()
    assert lines[0] == "train_noise,meteor"
    assert lines[1].startswith("0,")

    elapsed = time.perf_counter() - started
    assert elapsed < 600, f"smoke run took {elapsed:.0f}s"
    print(
        f"ACCEPTANCE PASS: harness smoke in {elapsed:.1f}s "
        f"(loss {log.first_loss:.3f}->{log.final_loss:.3f}, clean meteor {clean_score:.3f})"
    )


def test_trained_beats_untrained_on_meteor(toy_train, toy_test, tmp_path):
    # directional, single fixed seed; stochastic by nature and deliberately
    # not part of the toolkit's acceptance gate
    spec = ExperimentSpec(
        model="tiny-gru",
        train_corpora=(toy_train,),
        test_corpora=(toy_test,),
        output_table=tmp_path / "scores.csv",
        epochs=6,
        metrics=("meteor",),
        seed=7,
        learning_rate=1e-2,
        batch_size=8,
    )
    trained, _ = finetune(spec, tmp_path / "artifacts")

    train_examples = load_corpus(toy_train)
    torch.manual_seed(spec.seed)
    untrained = TinySeq2Seq(
        Vocab.build(e.source for e in train_examples),
        Vocab.build(e.reference for e in train_examples),
    )

    examples = load_corpus(toy_test)
    scores = {}
    for name, model in (("trained", trained), ("untrained", untrained)):
        hypotheses = [(e, model.translate(e.source)) for e in examples]
        scores[name] = score_with_metric("meteor", hypotheses, examples, toy_test)
    assert scores["trained"] >= scores["untrained"]


def test_perfect_hypotheses_score_near_one(toy_test):
    examples = load_corpus(toy_test)
    hypotheses = [(e, e.reference) for e in examples]
    score = score_with_metric("meteor", hypotheses, examples, toy_test)
    assert score >= 0.99


def test_misaligned_hypotheses_rejected(toy_test):
    examples = load_corpus(toy_test)
    hypotheses = [(e, e.reference) for e in examples[:-1]]  # one reference short
    with pytest.raises(MisalignedHypothesesError):
        score_with_metric("meteor", hypotheses, examples, toy_test)


def test_cli_roundtrip(toy_train, toy_test, tmp_path):
    from ftharness.cli import main

    artifacts = tmp_path / "artifacts"
    table = tmp_path / "scores.csv"
    assert main([
        "finetune",
        "--train", str(toy_train),
        "--test", str(toy_test),
        "--epochs", "1",
        "--seed", "3",
        "--artifacts", str(artifacts),
        "--output-table", str(table),
    ]) == 0
    hyp = tmp_path / "hyp.jsonl"
    assert main([
        "translate", "--artifacts", str(artifacts),
        "--corpus", str(toy_test), "-o", str(hyp),
    ]) == 0
    assert main([
        "score",
        "--hypotheses", str(hyp),
        "--references", str(toy_test),
        "--metrics", "meteor",
        "--test-noise", "0",
        "--train-noise", "0",
        "--table", str(table),
    ]) == 0
    report = tmp_path / "results.md"
    assert main(["report", "--table", str(table), "-o", str(report)]) == 0
    assert report.read_text().startswith("| Test noise |")


def test_unresolvable_model_identifier(toy_train, toy_test, tmp_path, monkeypatch):
    from ftharness.train import ModelResolutionError

    monkeypatch.setenv("HF_HUB_OFFLINE", "1")
    spec = ExperimentSpec(
        model="no-such-org/no-such-model",
        train_corpora=(toy_train,),
        test_corpora=(toy_test,),
        output_table=tmp_path / "t.csv",
        epochs=1,
    )
    with pytest.raises(ModelResolutionError):
        finetune(spec, tmp_path / "artifacts")
