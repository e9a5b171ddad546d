"""ftharness: fine-tune small seq2seq translators on forge-emitted corpora
and score the output with pluggable translation metrics.

Talks to the corpus toolkit exclusively through its documented file formats
(CorpusRecordLine JSONL, ScoreTable CSV) and its command-line interface; it
never imports the toolkit.
"""

__version__ = "0.1.0"

from .data import CorpusSchemaError, TranslationExample, load_corpus
from .experiment import ExperimentSpec, default_epochs
from .model import TinySeq2Seq, Vocab
from .scorers import ScorerUnavailableError, score_with_metric
from .tables import ScoreRow, write_markdown_table, write_score_csv
from .train import TrainingLog, finetune

__all__ = [
    "__version__",
    "CorpusSchemaError",
    "ExperimentSpec",
    "ScoreRow",
    "ScorerUnavailableError",
    "TinySeq2Seq",
    "TrainingLog",
    "TranslationExample",
    "Vocab",
    "default_epochs",
    "finetune",
    "load_corpus",
    "score_with_metric",
    "write_markdown_table",
    "write_score_csv",
]
