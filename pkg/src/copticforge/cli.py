"""Command-line front end composing the toolkit into reproducible runs.

Exit codes: 0 success, 1 validation error, 2 processing error, 64 usage
error. Diagnostics go to stderr; data goes to files or stdout only.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import __version__
from .align import align, clean, corpus_stats, load_reference_version
from .config import validate_config
from .errors import ConfigError, CopticForgeError, InvalidTableEntryError
from .manifest import write_manifest
from .metrics import (
    MeteorParams,
    drop_table,
    evaluate_corpus,
    load_score_table,
)
from .noise import (
    NoiseConfig,
    corrupt_corpus,
    load_confusion_map,
    selected_mask,
    sweep,
)
from .paula import parse_document_set
from .pipeline import run_pipeline, variant_filename
from .records import (
    CorpusRecord,
    read_corpus,
    read_verse_records,
    write_corpus,
    write_json,
    write_pairs_tsv,
    write_removals,
    write_verse_records,
    _iter_lines,
    _parse_id,
    _require,
)
from .romanize import load_romanization_table, romanize
from .splitting import SplitConfig, split
from .verses import load_book_table

logger = logging.getLogger(__name__)

USAGE_EXIT = 64


class _Parser(argparse.ArgumentParser):
    """argparse with 64-style usage failures."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_EXIT, f"{self.prog}: error: {message}\n")


def _rates(text: str) -> list[float]:
    rates = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        rate = float(item)
        if not 0.0 <= rate <= 1.0:
            raise ValueError(f"rate out of [0, 1]: {item}")
        rates.append(rate)
    if not rates:
        raise ValueError("no rates given")
    return rates


def _noise_config(args) -> NoiseConfig:
    return NoiseConfig(
        p_delete=args.p_delete,
        p_swap=args.p_swap,
        p_substitute=args.p_substitute,
        p_verse=getattr(args, "p_verse", 1.0),
        lacuna_symbol=args.lacuna_symbol,
        seed=args.seed,
    )


def _add_noise_options(parser, with_p_verse: bool) -> None:
    parser.add_argument("--seed", type=int, default=0, help="64-bit unsigned seed")
    if with_p_verse:
        parser.add_argument(
            "--p-verse", dest="p_verse", type=float, default=1.0,
            help="per-verse corruption probability",
        )
    parser.add_argument("--p-delete", dest="p_delete", type=float, default=0.02)
    parser.add_argument("--p-swap", dest="p_swap", type=float, default=0.02)
    parser.add_argument(
        "--p-substitute", dest="p_substitute", type=float, default=0.10
    )
    parser.add_argument("--lacuna-symbol", dest="lacuna_symbol", default="#")
    parser.add_argument("--confusion-map", dest="confusion_map", default=None)
    parser.add_argument(
        "--romanization-table", dest="romanization_table", default=None,
        help="re-romanize corrupted sources with this table",
    )
    parser.add_argument("--workers", type=int, default=1)


def _pairs_from_file(path: str):
    records = read_corpus(path)
    return records, [record.to_pair() for record in records]


def _records_out(pairs, flags, romanization_table):
    table = (
        load_romanization_table(romanization_table)
        if romanization_table is not None
        else None
    )
    out = []
    for index, pair in enumerate(pairs):
        out.append(
            CorpusRecord.from_pair(
                pair,
                source_romanized=(
                    romanize(pair.source_text, table) if table else None
                ),
                noise_applied=None if flags is None else flags[index],
            )
        )
    return out


def cmd_ingest(args) -> int:
    if not (len(args.tokens) == len(args.marks) == len(args.feats)):
        raise ValueError("--tokens/--marks/--feats must be given equally often")
    book_table = load_book_table(args.book_table)
    records = []
    seen = set()
    for token_path, mark_path, feat_path in zip(args.tokens, args.marks, args.feats):
        doc_records = parse_document_set(
            Path(token_path).read_bytes(),
            Path(mark_path).read_bytes(),
            Path(feat_path).read_bytes(),
            book_table,
            doc_id=Path(token_path).name,
        )
        for record in doc_records:
            if record.id in seen:
                raise CopticForgeError(
                    f"verse {record.id} appears in more than one document set"
                )
            seen.add(record.id)
        records.extend(doc_records)
    records.sort(key=lambda r: book_table.sort_key(r.id))
    write_verse_records(args.output, records)
    inputs = [*args.tokens, *args.marks, *args.feats]
    if args.book_table:
        inputs.append(args.book_table)
    write_manifest(
        args.output,
        {"command": "ingest", "book_table": args.book_table or ""},
        inputs,
    )
    logger.info("wrote %d verse records to %s", len(records), args.output)
    return 0


def cmd_romanize(args) -> int:
    table = load_romanization_table(args.table)
    if args.raw:
        for line in sys.stdin:
            sys.stdout.write(romanize(line.rstrip("\n"), table) + "\n")
        return 0
    records = read_corpus(args.input)
    out = [
        CorpusRecord(
            id=record.id,
            version=record.version,
            source_raw=record.source_raw,
            reference=record.reference,
            source_romanized=romanize(record.source_raw, table),
            noise_applied=record.noise_applied,
        )
        for record in records
    ]
    write_corpus(args.output, out)
    inputs = [args.input] + ([args.table] if args.table else [])
    write_manifest(
        args.output, {"command": "romanize", "table": args.table or ""}, inputs
    )
    return 0


def cmd_align(args) -> int:
    book_table = load_book_table(args.book_table)
    records = read_verse_records(args.records)
    versions = []
    for spec in args.reference:
        label, _, path = spec.partition("=")
        if not label or not path:
            raise ValueError(f"--reference expects label=path, got {spec!r}")
        versions.append(load_reference_version(label, path, book_table))
    pairs, removals = align(records, versions)
    write_corpus(args.output, [CorpusRecord.from_pair(p) for p in pairs])
    write_removals(args.removals, removals)
    inputs = [args.records] + [s.partition("=")[2] for s in args.reference]
    if args.book_table:
        inputs.append(args.book_table)
    params = {"command": "align", "references": ",".join(sorted(args.reference))}
    write_manifest(args.output, params, inputs)
    write_manifest(args.removals, params, inputs)
    logger.info("aligned %d pairs (%d removals)", len(pairs), len(removals))
    return 0


def cmd_clean(args) -> int:
    _, pairs = _pairs_from_file(args.pairs)
    kept, removed = clean(pairs)
    write_corpus(args.output, [CorpusRecord.from_pair(p) for p in kept])
    write_removals(args.removals, removed)
    params = {"command": "clean"}
    write_manifest(args.output, params, [args.pairs])
    write_manifest(args.removals, params, [args.pairs])
    logger.info("kept %d pairs, removed %d", len(kept), len(removed))
    return 0


def cmd_split(args) -> int:
    records, pairs = _pairs_from_file(args.pairs)
    cfg = SplitConfig(frozenset(b.strip() for b in args.test_books.split(",") if b.strip()))
    if args.book_table is not None or args.validate_books:
        cfg.validate_books(load_book_table(args.book_table))
    train_idx, test_idx = [], []
    for index, pair in enumerate(pairs):
        (test_idx if pair.id.book in cfg.test_books else train_idx).append(index)
    train, test = split(pairs, cfg)
    params = {"command": "split", "test_books": ",".join(sorted(cfg.test_books))}
    for side_path, tsv_path, indices, side_pairs in (
        (args.train_out, args.train_tsv, train_idx, train),
        (args.test_out, args.test_tsv, test_idx, test),
    ):
        side_records = [records[i] for i in indices]
        write_corpus(side_path, side_records)
        write_manifest(side_path, params, [args.pairs])
        if tsv_path:
            write_pairs_tsv(tsv_path, side_records)
            write_manifest(tsv_path, params, [args.pairs])
    logger.info("split: %d train pairs, %d test pairs", len(train), len(test))
    return 0


def cmd_stats(args) -> int:
    _, pairs = _pairs_from_file(args.pairs)
    report = corpus_stats(pairs).to_dict()
    if args.output:
        write_json(args.output, report)
        write_manifest(args.output, {"command": "stats"}, [args.pairs])
    else:
        import json

        sys.stdout.write(json.dumps(report, ensure_ascii=False, indent=2) + "\n")
    return 0


def cmd_noise(args) -> int:
    _, pairs = _pairs_from_file(args.pairs)
    cfg = _noise_config(args)
    confusion = load_confusion_map(args.confusion_map)
    corrupted, report = corrupt_corpus(pairs, cfg, confusion, args.workers)
    flags = selected_mask(pairs, cfg)
    write_corpus(args.output, _records_out(corrupted, flags, args.romanization_table))
    inputs = [args.pairs] + [
        p for p in (args.confusion_map, args.romanization_table) if p
    ]
    params = {
        "command": "noise",
        "p_delete": f"{cfg.p_delete:g}",
        "p_swap": f"{cfg.p_swap:g}",
        "p_substitute": f"{cfg.p_substitute:g}",
        "p_verse": f"{cfg.p_verse:g}",
        "lacuna_symbol": cfg.lacuna_symbol,
    }
    write_manifest(args.output, params, inputs, seed=cfg.seed)
    report_path = args.report or (args.output + ".noise_report.json")
    write_json(report_path, report.to_dict())
    write_manifest(report_path, params, inputs, seed=cfg.seed)
    return 0


def cmd_sweep(args) -> int:
    _, pairs = _pairs_from_file(args.pairs)
    base_cfg = _noise_config(args)
    confusion = load_confusion_map(args.confusion_map)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    inputs = [args.pairs] + [
        p for p in (args.confusion_map, args.romanization_table) if p
    ]
    params = {
        "command": "sweep",
        "rates": ",".join(f"{r:g}" for r in args.rates),
        "p_delete": f"{base_cfg.p_delete:g}",
        "p_swap": f"{base_cfg.p_swap:g}",
        "p_substitute": f"{base_cfg.p_substitute:g}",
        "lacuna_symbol": base_cfg.lacuna_symbol,
    }
    for variant in sweep(pairs, base_cfg, confusion, args.rates, args.workers):
        flags = selected_mask(pairs, variant.config)
        variant_path = out_dir / variant_filename(args.prefix, variant.rate)
        write_corpus(
            variant_path,
            _records_out(variant.pairs, flags, args.romanization_table),
        )
        write_manifest(variant_path, params, inputs, seed=base_cfg.seed)
        report_path = out_dir / (variant_path.name + ".noise_report.json")
        write_json(report_path, variant.report.to_dict())
        write_manifest(report_path, params, inputs, seed=base_cfg.seed)
    logger.info("wrote %d corpus variants to %s", len(args.rates), out_dir)
    return 0


def _read_hypotheses(path: str):
    hypotheses = []
    for where, obj in _iter_lines(Path(path)):
        verse_id = _parse_id(obj.get("id"), where)
        version = _require(obj, "version", str, where)
        text = _require(obj, "text", str, where)
        hypotheses.append((verse_id, version, text))
    return hypotheses


def cmd_meteor(args) -> int:
    params = MeteorParams(alpha=args.alpha, gamma=args.gamma, beta=args.beta)
    hypotheses = _read_hypotheses(args.hypotheses)
    _, references = _pairs_from_file(args.references)
    report = evaluate_corpus(hypotheses, references, params)
    payload = report.to_dict()
    if args.output:
        write_json(args.output, payload)
        write_manifest(
            args.output,
            {
                "command": "meteor",
                "alpha": f"{args.alpha:g}",
                "gamma": f"{args.gamma:g}",
                "beta": f"{args.beta:g}",
            },
            [args.hypotheses, args.references],
        )
    else:
        import json

        sys.stdout.write(json.dumps(payload, ensure_ascii=False, indent=2) + "\n")
    return 0


def cmd_drop_table(args) -> int:
    table = load_score_table(args.scores)
    matrix = drop_table(table)
    text = matrix.to_csv()
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        write_manifest(args.output, {"command": "drop-table"}, [args.scores])
    else:
        sys.stdout.write(text)
    return 0


def cmd_pipeline(args) -> int:
    overrides = {
        "seed": args.seed,
        "output_dir": args.output_dir,
        "test_books": args.test_books,
        "noise_rates": args.noise_rates,
        "workers": args.workers,
        "romanize": args.romanize,
    }
    cfg = validate_config(args.config, overrides=overrides)
    run_pipeline(cfg)
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="copticforge", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument(
        "-v", "--verbose", action="store_true", help="info-level diagnostics"
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ingest", help="parse standoff XML document sets")
    p.add_argument("--tokens", action="append", required=True, default=None)
    p.add_argument("--marks", action="append", required=True, default=None)
    p.add_argument("--feats", action="append", required=True, default=None)
    p.add_argument("--book-table", dest="book_table", default=None)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("romanize", help="transliterate source text to ASCII")
    p.add_argument("--input", default=None)
    p.add_argument("-o", "--output", default=None)
    p.add_argument("--table", default=None)
    p.add_argument(
        "--raw", action="store_true", help="romanize stdin lines to stdout"
    )
    p.set_defaults(func=cmd_romanize)

    p = sub.add_parser("align", help="join verse records with reference versions")
    p.add_argument("--records", required=True)
    p.add_argument(
        "--reference", action="append", required=True, metavar="LABEL=PATH"
    )
    p.add_argument("--book-table", dest="book_table", default=None)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--removals", required=True)
    p.set_defaults(func=cmd_align)

    p = sub.add_parser("clean", help="apply the cleaning rules")
    p.add_argument("--pairs", required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--removals", required=True)
    p.set_defaults(func=cmd_clean)

    p = sub.add_parser("split", help="book-level train/test split")
    p.add_argument("--pairs", required=True)
    p.add_argument(
        "--test-books", dest="test_books", default="1Cor,Mark,Gal,Heb"
    )
    p.add_argument("--book-table", dest="book_table", default=None)
    p.add_argument(
        "--validate-books", dest="validate_books", action="store_true",
        help="check test books against the book table",
    )
    p.add_argument("--train-out", dest="train_out", required=True)
    p.add_argument("--test-out", dest="test_out", required=True)
    p.add_argument("--train-tsv", dest="train_tsv", default=None,
                   help="also export the train side as source<TAB>reference")
    p.add_argument("--test-tsv", dest="test_tsv", default=None)
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("stats", help="per-version and corpus counts")
    p.add_argument("--pairs", required=True)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("noise", help="corrupt a corpus at one rate")
    p.add_argument("--pairs", required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--report", default=None)
    _add_noise_options(p, with_p_verse=True)
    p.set_defaults(func=cmd_noise)

    p = sub.add_parser("sweep", help="generate corpus variants at several rates")
    p.add_argument("--pairs", required=True)
    p.add_argument("--rates", type=_rates, required=True)
    p.add_argument("--out-dir", dest="out_dir", required=True)
    p.add_argument("--prefix", default="corpus")
    _add_noise_options(p, with_p_verse=False)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("meteor", help="score hypotheses against references")
    p.add_argument("--hypotheses", required=True)
    p.add_argument("--references", required=True)
    p.add_argument("-o", "--output", default=None)
    p.add_argument("--alpha", type=float, default=0.9)
    p.add_argument("--gamma", type=float, default=0.5)
    p.add_argument("--beta", type=float, default=3.0)
    p.set_defaults(func=cmd_meteor)

    p = sub.add_parser("drop-table", help="relative drop matrix from a score table")
    p.add_argument("--scores", required=True)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_drop_table)

    p = sub.add_parser("pipeline", help="run the full pipeline from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--output-dir", dest="output_dir", default=None)
    p.add_argument("--test-books", dest="test_books", default=None)
    p.add_argument("--noise-rates", dest="noise_rates", default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--romanize", default=None, choices=("true", "false"))
    p.set_defaults(func=cmd_pipeline)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    if args.command == "romanize" and not args.raw:
        if not args.input or not args.output:
            parser.error("romanize requires --input and --output (or --raw)")
    try:
        return args.func(args)
    except ConfigError as exc:
        for violation in exc.violations:
            print(f"error: {violation}", file=sys.stderr)
        return 1
    except (InvalidTableEntryError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (CopticForgeError, OSError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
