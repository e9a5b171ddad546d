"""End-to-end orchestration: ingest, align, clean, split, sweep, report.

The pipeline writes a deterministic output tree: identical inputs, config
and seed reproduce identical bytes regardless of worker count. Every output
file is accompanied by a provenance manifest (see
:mod:`copticforge.manifest`); manifests themselves are not manifested.
"""

from __future__ import annotations

import logging
from pathlib import Path

from .align import align, clean, corpus_stats, load_reference_version
from .config import PipelineConfig
from .errors import DuplicateVerseIdError
from .manifest import write_manifest
from .noise import NoiseConfig, load_confusion_map, selected_mask, sweep
from .paula import parse_document_set
from .records import (
    CorpusRecord,
    write_corpus,
    write_json,
    write_removals,
    write_verse_records,
)
from .romanize import load_romanization_table, romanize
from .splitting import SplitConfig, split
from .verses import load_book_table

logger = logging.getLogger(__name__)


def variant_filename(side: str, rate: float) -> str:
    return f"{side}_noise_p{rate * 100:g}.jsonl"


def run_pipeline(cfg: PipelineConfig) -> None:
    out = cfg.output_dir
    out.mkdir(parents=True, exist_ok=True)

    book_table = load_book_table(cfg.book_table)
    split_cfg = SplitConfig(frozenset(cfg.test_books))
    split_cfg.validate_books(book_table)
    roman_table = (
        load_romanization_table(cfg.romanization_table) if cfg.romanize else None
    )
    confusion = load_confusion_map(cfg.confusion_map)
    base_noise = NoiseConfig(
        p_delete=cfg.p_delete,
        p_swap=cfg.p_swap,
        p_substitute=cfg.p_substitute,
        lacuna_symbol=cfg.lacuna_symbol,
        seed=cfg.seed,
    )
    base_noise.validate_against(confusion)

    params = cfg.effective_params()
    run_inputs = [
        *cfg.token_files,
        *cfg.mark_files,
        *cfg.feat_files,
        *cfg.reference_files.values(),
        *(p for p in (cfg.book_table, cfg.romanization_table, cfg.confusion_map) if p),
    ]

    def emit_manifest(path: Path) -> None:
        write_manifest(path, params, run_inputs, seed=cfg.seed)

    # ingest
    records = []
    seen_ids = set()
    for token_path, mark_path, feat_path in zip(
        cfg.token_files, cfg.mark_files, cfg.feat_files
    ):
        doc_records = parse_document_set(
            token_path.read_bytes(),
            mark_path.read_bytes(),
            feat_path.read_bytes(),
            book_table,
            doc_id=token_path.name,
        )
        for record in doc_records:
            if record.id in seen_ids:
                raise DuplicateVerseIdError(
                    f"verse {record.id} appears in more than one document set"
                )
            seen_ids.add(record.id)
        records.extend(doc_records)
    records.sort(key=lambda r: book_table.sort_key(r.id))
    records_path = out / "records.jsonl"
    write_verse_records(records_path, records)
    emit_manifest(records_path)
    logger.info("ingested %d verse records", len(records))

    # align + clean
    versions = [
        load_reference_version(label, cfg.reference_files[label], book_table)
        for label in sorted(cfg.reference_files)
    ]
    pairs, removals = align(records, versions)
    kept, removed_by_clean = clean(pairs)
    removals_path = out / "removals.jsonl"
    write_removals(removals_path, removals + removed_by_clean)
    emit_manifest(removals_path)
    logger.info(
        "aligned %d pairs, kept %d after cleaning (%d removals logged)",
        len(pairs),
        len(kept),
        len(removals) + len(removed_by_clean),
    )

    def to_records(pair_list, flags=None):
        out_records = []
        for index, pair in enumerate(pair_list):
            romanized = (
                romanize(pair.source_text, roman_table) if roman_table else None
            )
            out_records.append(
                CorpusRecord.from_pair(
                    pair,
                    source_romanized=romanized,
                    noise_applied=None if flags is None else flags[index],
                )
            )
        return out_records

    corpus_path = out / "corpus.jsonl"
    write_corpus(corpus_path, to_records(kept))
    emit_manifest(corpus_path)

    if cfg.emit_stats:
        stats_path = out / "stats.json"
        write_json(stats_path, corpus_stats(kept).to_dict())
        emit_manifest(stats_path)

    # split
    train, test = split(kept, split_cfg)
    for name, side in (("train", train), ("test", test)):
        side_path = out / f"{name}.jsonl"
        write_corpus(side_path, to_records(side))
        emit_manifest(side_path)
    logger.info("split: %d train pairs, %d test pairs", len(train), len(test))

    # noise sweep
    if cfg.noise_rates:
        noise_dir = out / "noise"
        noise_dir.mkdir(parents=True, exist_ok=True)
        for name, side in (("train", train), ("test", test)):
            variants = sweep(
                side, base_noise, confusion, cfg.noise_rates, cfg.workers
            )
            for variant in variants:
                flags = selected_mask(side, variant.config)
                variant_path = noise_dir / variant_filename(name, variant.rate)
                write_corpus(variant_path, to_records(variant.pairs, flags))
                emit_manifest(variant_path)
                report_path = noise_dir / (variant_path.name + ".noise_report.json")
                write_json(report_path, variant.report.to_dict())
                emit_manifest(report_path)
