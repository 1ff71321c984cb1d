from .agreement import cohen_kappa
from .dataset import Dataset, DatasetItem, dataset_stats, filter_for_training
from .io import import_labeled_csv, load_corpus, save_corpus
from .types import (
    EXCLUDED_FROM_TRAINING,
    TRAINING_TYPES,
    Association,
    InfoType,
    IssueComment,
    IssueThread,
    Sentence,
)

__all__ = [
    "EXCLUDED_FROM_TRAINING",
    "TRAINING_TYPES",
    "Association",
    "Dataset",
    "DatasetItem",
    "InfoType",
    "IssueComment",
    "IssueThread",
    "Sentence",
    "cohen_kappa",
    "dataset_stats",
    "filter_for_training",
    "import_labeled_csv",
    "load_corpus",
    "save_corpus",
]
