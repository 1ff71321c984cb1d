"""Conversational context features of a sentence within its thread."""

from __future__ import annotations

from dataclasses import astuple, dataclass

import numpy as np

from ..corpus.types import Association, IssueThread, Sentence

ASSOCIATION_ORDER = (Association.OWNER, Association.CL, Association.MBR, Association.OTHER)

COLUMNS = (
    "AA_OWNER", "AA_CL", "AA_MBR", "AA_OTHER",
    "BEGAUTH", "LEN", "TLEN", "CLEN", "TLOC", "CLOC",
    "FIRST_TURN", "LAST_TURN", "TPOS1", "TPOS2", "PPAU", "NPAU", "HAS_CODE",
)
N_COLUMNS = len(COLUMNS)
BINARY_COLUMNS = tuple(
    i for i, name in enumerate(COLUMNS)
    if name.startswith("AA_") or name in ("BEGAUTH", "FIRST_TURN", "LAST_TURN", "HAS_CODE")
)


@dataclass(frozen=True)
class ConversationalFeatures:
    AA: Association
    BEGAUTH: bool
    LEN: int
    TLEN: float
    CLEN: float
    TLOC: float
    CLOC: float
    FIRST_TURN: bool
    LAST_TURN: bool
    TPOS1: float
    TPOS2: float
    PPAU: float
    NPAU: float
    HAS_CODE: bool

    def encode(self) -> np.ndarray:
        """Dense 17-column encoding: one-hot AA followed by the other features."""
        onehot = [1.0 if self.AA == a else 0.0 for a in ASSOCIATION_ORDER]
        rest = [float(v) for v in astuple(self)[1:]]
        return np.array(onehot + rest, dtype=np.float64)


def _word_count(sentence: Sentence) -> int:
    return max(len(sentence.text_masked.split()), 1)


def thread_features(thread: IssueThread) -> dict[str, ConversationalFeatures]:
    """Features of every sentence of a segmented thread, keyed by sentence id."""
    comments = thread.comments
    n_comments = len(comments)
    times = np.array([c.created_at.timestamp() for c in comments])
    duration = times[-1] - times[0]
    origin_author = comments[0].author_login
    thread_max = max((_word_count(s) for _, s in thread.sentences()), default=1)
    n_thread = thread.n_sentences

    out = {}
    for ci, comment in enumerate(comments):
        if n_comments > 1 and duration > 0:
            tpos1 = (times[ci] - times[0]) / duration
            tpos2 = (times[-1] - times[ci]) / duration
            ppau = (times[ci] - times[ci - 1]) / duration if ci > 0 else 0.0
            npau = (times[ci + 1] - times[ci]) / duration if ci < n_comments - 1 else 0.0
        else:
            # no elapsed time: every comment sits at the start, so TPOS1 + TPOS2 still sums to 1
            tpos1, tpos2, ppau, npau = 0.0, 1.0, 0.0, 0.0
        begauth = ci == 0 or (bool(comment.author_login) and comment.author_login == origin_author)
        comment_max = max((_word_count(s) for s in comment.sentences), default=1)
        n_comment = len(comment.sentences)
        for s in comment.sentences:
            words = _word_count(s)
            out[s.id] = ConversationalFeatures(
                AA=comment.author_association,
                BEGAUTH=begauth,
                LEN=len(s.text_masked),
                TLEN=words / thread_max,
                CLEN=words / comment_max,
                TLOC=s.sentence_index_in_comment / n_comment,
                CLOC=s.sentence_index_in_thread / n_thread,
                FIRST_TURN=ci == 0,
                LAST_TURN=ci == n_comments - 1,
                TPOS1=float(tpos1),
                TPOS2=float(tpos2),
                PPAU=float(ppau),
                NPAU=float(npau),
                HAS_CODE=comment.has_code,
            )
    return out


def extract_conversational(thread: IssueThread, comment_index: int, sentence: Sentence) -> ConversationalFeatures:
    """Features of a single sentence; see :func:`thread_features` for bulk use."""
    if sentence.comment_index != comment_index:
        raise ValueError(f"sentence {sentence.id} is not in comment {comment_index}")
    return thread_features(thread)[sentence.id]
