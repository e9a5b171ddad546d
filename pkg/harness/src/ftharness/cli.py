"""ftharness command line: finetune, translate, score, report."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .data import CorpusSchemaError, load_corpus, write_hypotheses
from .experiment import ExperimentSpec, default_epochs
from .model import load_checkpoint
from .scorers import (
    MisalignedHypothesesError,
    ScorerUnavailableError,
    score_with_metric,
)
from .tables import ScoreRow, read_score_csv, write_markdown_table, write_score_csv
from .train import ModelResolutionError, finetune


def cmd_finetune(args) -> int:
    epochs = args.epochs
    if epochs is None:
        epochs = default_epochs(n_versions=args.versions)
    spec = ExperimentSpec(
        model=args.model,
        train_corpora=tuple(args.train),
        test_corpora=tuple(args.test),
        output_table=Path(args.output_table),
        epochs=epochs,
        metrics=tuple(args.metrics.split(",")),
        seed=args.seed,
        learning_rate=args.learning_rate,
        batch_size=args.batch_size,
    )
    _, log = finetune(spec, args.artifacts)
    print(
        f"trained {spec.model} for {spec.epochs} epochs: "
        f"loss {log.first_loss:.4f} -> {log.final_loss:.4f}",
        file=sys.stderr,
    )
    return 0


def cmd_translate(args) -> int:
    model = load_checkpoint(Path(args.artifacts) / "checkpoint.pt")
    examples = load_corpus(args.corpus)
    hypotheses = [(example, model.translate(example.source)) for example in examples]
    write_hypotheses(args.output, hypotheses)
    print(f"wrote {len(hypotheses)} hypotheses to {args.output}", file=sys.stderr)
    return 0


def cmd_score(args) -> int:
    references = load_corpus(args.references)
    ref_by_key = {example.key: example for example in references}
    import json

    hypotheses = []
    with open(args.hypotheses, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            key = (
                obj["id"]["book"],
                obj["id"]["chapter"],
                obj["id"]["verse"],
                obj["version"],
            )
            example = ref_by_key.get(key)
            if example is None:
                raise MisalignedHypothesesError(f"no reference for {key}")
            hypotheses.append((example, obj["text"]))

    rows = []
    for metric in args.metrics.split(","):
        metric = metric.strip()
        score = score_with_metric(metric, hypotheses, references, Path(args.references))
        rows.append(
            ScoreRow(
                test_noise=args.test_noise,
                train_noise=args.train_noise,
                metric=metric,
                score=score,
            )
        )
    write_score_csv(args.table, rows, append=args.append)
    for row in rows:
        print(f"{row.metric}: {row.score:.4f}", file=sys.stderr)
    return 0


def cmd_report(args) -> int:
    rows = read_score_csv(args.table)
    write_markdown_table(args.output, rows)
    print(f"wrote {args.output}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ftharness", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("finetune", help="fine-tune a model on forge corpora")
    p.add_argument("--model", default="tiny-gru")
    p.add_argument("--train", action="append", required=True)
    p.add_argument("--test", action="append", required=True)
    p.add_argument("--epochs", type=int, default=None,
                   help="default: 15, or 45 when --versions 1")
    p.add_argument("--versions", type=int, default=3,
                   help="reference versions in the training corpus")
    p.add_argument("--metrics", default="meteor")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--learning-rate", dest="learning_rate", type=float, default=5e-3)
    p.add_argument("--batch-size", dest="batch_size", type=int, default=16)
    p.add_argument("--artifacts", required=True)
    p.add_argument("--output-table", dest="output_table", required=True)
    p.set_defaults(func=cmd_finetune)

    p = sub.add_parser("translate", help="greedy-decode a test corpus")
    p.add_argument("--artifacts", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("score", help="score hypotheses, append ScoreTable rows")
    p.add_argument("--hypotheses", required=True)
    p.add_argument("--references", required=True)
    p.add_argument("--metrics", default="meteor")
    p.add_argument("--test-noise", dest="test_noise", type=float, required=True)
    p.add_argument("--train-noise", dest="train_noise", type=float, required=True)
    p.add_argument("--table", required=True)
    p.add_argument("--append", action="store_true")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("report", help="render a score CSV as a Markdown table")
    p.add_argument("--table", required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CorpusSchemaError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (
        ModelResolutionError,
        ScorerUnavailableError,
        MisalignedHypothesesError,
        OSError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
