"""Builders for synthetic threads used across the tests."""

from __future__ import annotations

from datetime import datetime, timedelta, timezone

import numpy as np

from infotypes.corpus.types import (
    TRAINING_TYPES,
    Association,
    InfoType,
    IssueComment,
    IssueThread,
    make_sentence,
)
from infotypes.preprocess.sentence import prepare_sentence

START = datetime(2021, 3, 1, tzinfo=timezone.utc)
FILLER = ("the", "it", "we", "this", "that", "is", "on", "for", "a", "with", "and", "to")
ASSOCIATIONS = list(Association)


def build_thread(comments, project="acme/widget", issue_number=1, title="", synthetic=False):
    """``comments`` is a list of ``(login, association, created_at, [(text, labels), ...])``."""
    built = []
    pos = 0
    for ci, (login, assoc, ts, sentences) in enumerate(comments):
        out = []
        for si, (text, labels) in enumerate(sentences):
            masked, tokens = prepare_sentence(text)
            out.append(make_sentence(ci, si + 1, pos + 1, text, masked, tokens, tuple(labels)))
            pos += 1
        body = "\n".join(text for text, _ in sentences)
        built.append(IssueComment(login, assoc, ts, body, "`" in body, tuple(out)))
    return IssueThread(project, issue_number, title, tuple(built), comments[0][2], synthetic)


def signature_words(label: InfoType) -> list[str]:
    return [f"sig{label.name.lower()}{j}" for j in range(5)]


def planted_corpus(n_threads=10, n_sentences=1500, seed=0, labels=TRAINING_TYPES):
    """Threads whose sentences each carry words exclusive to their single label."""
    rng = np.random.default_rng(seed)
    labels = list(labels)
    per_thread = n_sentences // n_threads
    threads = []
    for t in range(n_threads):
        n_comments = min(int(rng.integers(5, 15)), per_thread)
        cuts = np.sort(rng.choice(np.arange(1, per_thread), size=n_comments - 1, replace=False))
        sizes = np.diff(np.concatenate([[0], cuts, [per_thread]]))
        comments = []
        ts = START + timedelta(days=t)
        for ci, size in enumerate(sizes):
            ts = ts + timedelta(minutes=int(rng.integers(1, 600)))
            sentences = []
            for _ in range(size):
                label = labels[int(rng.integers(len(labels)))]
                words = list(rng.choice(signature_words(label), size=2, replace=False))
                words += list(rng.choice(FILLER, size=int(rng.integers(2, 6))))
                rng.shuffle(words)
                sentences.append((" ".join(words).capitalize() + ".", (label,)))
            login = f"user{int(rng.integers(6))}"
            comments.append((login, ASSOCIATIONS[int(rng.integers(4))], ts, sentences))
        threads.append(build_thread(comments, issue_number=t + 1))
    return threads


def random_thread(rng, max_comments=12, max_sentences=6, same_time_prob=0.1):
    """A random annotated thread with irregular timing and authors."""
    n_comments = int(rng.integers(1, max_comments + 1))
    ts = START
    comments = []
    for ci in range(n_comments):
        if ci and rng.random() > same_time_prob:
            ts = ts + timedelta(seconds=int(rng.integers(1, 10**6)))
        sentences = []
        for _ in range(int(rng.integers(1, max_sentences + 1))):
            n_words = int(rng.integers(1, 25))
            words = " ".join(rng.choice(FILLER, size=n_words))
            if rng.random() < 0.2:
                words += " `x = 1`"
            label = TRAINING_TYPES[int(rng.integers(len(TRAINING_TYPES)))]
            sentences.append((words.capitalize() + ".", (label,)))
        comments.append((f"user{int(rng.integers(4))}", ASSOCIATIONS[int(rng.integers(4))], ts, sentences))
    return build_thread(comments)
