"""Inter-annotator agreement."""

from __future__ import annotations

from collections import Counter


def cohen_kappa(labels_a, labels_b) -> float:
    """Cohen's kappa between two annotators' label sequences.

    Returns exactly 1.0 under perfect agreement, including the degenerate case
    where both annotators used a single identical label throughout.
    """
    n = len(labels_a)
    if n != len(labels_b):
        raise ValueError(f"label sequences differ in length ({n} vs {len(labels_b)})")
    if n == 0:
        raise ValueError("label sequences are empty")
    observed = sum(a == b for a, b in zip(labels_a, labels_b)) / n
    if observed == 1.0:
        return 1.0
    count_a, count_b = Counter(labels_a), Counter(labels_b)
    expected = sum(count_a[c] * count_b[c] for c in count_a) / (n * n)
    if expected == 1.0:
        raise ValueError("kappa is undefined: chance agreement is 1 but observed agreement is not")
    return (observed - expected) / (1.0 - expected)
