"""Training datasets derived from annotated threads."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from ..errors import EmptyDatasetError
from .types import EXCLUDED_FROM_TRAINING, InfoType, IssueThread, Sentence


@dataclass(frozen=True)
class DatasetItem:
    thread_index: int
    comment_index: int
    sentence: Sentence
    label: InfoType


@dataclass(frozen=True)
class Dataset:
    threads: tuple[IssueThread, ...]
    items: tuple[DatasetItem, ...]

    def __len__(self) -> int:
        return len(self.items)

    @property
    def labels(self) -> list[InfoType]:
        return [item.label for item in self.items]

    @property
    def class_counts(self) -> dict[InfoType, int]:
        counts = Counter(self.labels)
        return {label: counts[label] for label in sorted(counts)}

    def thread_of(self, item: DatasetItem) -> IssueThread:
        return self.threads[item.thread_index]


def filter_for_training(threads, excluded=EXCLUDED_FROM_TRAINING) -> Dataset:
    """Keep sentences carrying exactly one label that is not in ``excluded``."""
    threads = tuple(threads)
    excluded = frozenset(excluded)
    items = [
        DatasetItem(ti, ci, sentence, sentence.labels[0])
        for ti, thread in enumerate(threads)
        for ci, sentence in thread.sentences()
        if len(sentence.labels) == 1 and sentence.labels[0] not in excluded
    ]
    if not items:
        raise EmptyDatasetError("no single-labeled, non-excluded sentences to train on")
    return Dataset(threads, tuple(items))


def dataset_stats(ds: Dataset) -> dict[InfoType, tuple[int, float]]:
    if not ds.items:
        raise EmptyDatasetError("dataset is empty")
    total = len(ds.items)
    return {label: (n, n / total) for label, n in ds.class_counts.items()}
