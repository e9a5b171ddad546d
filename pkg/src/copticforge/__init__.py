"""copticforge: aligned ancient-modern parallel corpora, noise, and metrics.

Builds verse-aligned Coptic-French corpora from standoff-XML sources,
romanizes them, applies seeded manuscript-degradation noise, produces
leakage-free book-level splits, and computes/analyzes translation metrics.
"""

__version__ = "0.1.0"

from .align import (
    AlignedPair,
    PairCleaner,
    ReferenceVersion,
    RemovalReason,
    RemovalRecord,
    StatReport,
    align,
    clean,
    corpus_stats,
    is_ellipsis_only,
    load_reference_version,
    removal_reason_holds,
    strip_annotations,
)
from .errors import (
    ConfigError,
    CopticForgeError,
    DanglingReferenceError,
    DuplicateVerseIdError,
    EmptyTestSplitWarning,
    IncompleteTableError,
    InvalidRecordError,
    InvalidTableEntryError,
    MalformedXmlError,
    MissingReferenceError,
    UnknownBookError,
    UnparseableReferenceError,
)
from .metrics import (
    DropMatrix,
    MeteorParams,
    MetricReport,
    ScoreTable,
    drop_table,
    evaluate_corpus,
    load_score_table,
    meteor,
    relative_drop,
    tokenize,
)
from .noise import (
    ConfusionMap,
    CorpusVariant,
    NoiseConfig,
    NoiseInjector,
    NoiseReport,
    corrupt_corpus,
    corrupt_verse,
    load_confusion_map,
    selected_mask,
    sweep,
)
from .paula import VerseRecord, parse_document_set
from .romanize import (
    RomanizationTable,
    Romanizer,
    load_romanization_table,
    romanize,
)
from .splitting import (
    DEFAULT_TEST_BOOKS,
    SplitConfig,
    split,
    verify_no_leakage,
)
from .verses import (
    BookNameTable,
    VerseId,
    canonicalize_verse_id,
    load_book_table,
    normalize_label,
)

__all__ = [
    "__version__",
    "AlignedPair",
    "BookNameTable",
    "ConfigError",
    "ConfusionMap",
    "CopticForgeError",
    "CorpusVariant",
    "DEFAULT_TEST_BOOKS",
    "DanglingReferenceError",
    "DropMatrix",
    "DuplicateVerseIdError",
    "EmptyTestSplitWarning",
    "IncompleteTableError",
    "InvalidRecordError",
    "InvalidTableEntryError",
    "MalformedXmlError",
    "MeteorParams",
    "MetricReport",
    "MissingReferenceError",
    "NoiseConfig",
    "NoiseInjector",
    "NoiseReport",
    "PairCleaner",
    "ReferenceVersion",
    "RemovalReason",
    "RemovalRecord",
    "RomanizationTable",
    "Romanizer",
    "ScoreTable",
    "SplitConfig",
    "StatReport",
    "UnknownBookError",
    "UnparseableReferenceError",
    "VerseId",
    "VerseRecord",
    "align",
    "canonicalize_verse_id",
    "clean",
    "corpus_stats",
    "corrupt_corpus",
    "corrupt_verse",
    "drop_table",
    "evaluate_corpus",
    "is_ellipsis_only",
    "load_book_table",
    "load_confusion_map",
    "load_reference_version",
    "load_romanization_table",
    "load_score_table",
    "meteor",
    "normalize_label",
    "parse_document_set",
    "relative_drop",
    "removal_reason_holds",
    "romanize",
    "selected_mask",
    "split",
    "strip_annotations",
    "sweep",
    "tokenize",
    "verify_no_leakage",
]
