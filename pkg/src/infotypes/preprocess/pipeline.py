"""Thread-level preprocessing: fill in sentences for every comment."""

from __future__ import annotations

from dataclasses import replace

from ..corpus.types import IssueThread, make_sentence
from .segment import segment_text
from .tokenize import tokenize


def segment_thread(thread: IssueThread, force: bool = False) -> IssueThread:
    """Return ``thread`` with every comment split into sentences.

    The title is segmented and prepended to comment 0. Threads that already
    carry sentences are returned unchanged unless ``force`` is set (labels are
    then lost).
    """
    if thread.is_segmented and not force:
        return thread
    comments = []
    position = 0
    for ci, comment in enumerate(thread.comments):
        pairs, _ = segment_text(comment.body_raw)
        if ci == 0 and thread.title.strip():
            title_pairs, _ = segment_text(thread.title)
            pairs = title_pairs + pairs
        sentences = []
        for si, (raw, masked) in enumerate(pairs, start=1):
            position += 1
            masked = " ".join(masked.split())
            sentences.append(
                make_sentence(ci, si, position, raw, masked, tokenize(masked))
            )
        comments.append(replace(comment, sentences=tuple(sentences)))
    return replace(thread, comments=tuple(comments))
