"""Per-label and support-weighted precision, recall and F1."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..corpus.types import InfoType


@dataclass(frozen=True)
class LabelMetrics:
    precision: float
    recall: float
    f1: float
    support: int


@dataclass
class MetricsReport:
    per_label: dict
    precision: float
    recall: float
    f1: float
    support: int
    fold_id: int | None = None
    config_id: str | None = None
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "config": self.config_id,
            "fold": self.fold_id,
            "labels": {
                label_name(label): {
                    "precision": m.precision,
                    "recall": m.recall,
                    "f1": m.f1,
                    "support": m.support,
                }
                for label, m in self.per_label.items()
            },
            "weighted": {"precision": self.precision, "recall": self.recall, "f1": self.f1},
            "support": self.support,
        }


def label_name(label) -> str:
    return label.display_name if isinstance(label, InfoType) else str(label)


def _ratio(num: int, den: int) -> float:
    return num / den if den else 0.0


def score_predictions(gold, predicted, fold_id=None, config_id=None) -> MetricsReport:
    gold, predicted = list(gold), list(predicted)
    if len(gold) != len(predicted):
        raise ValueError(f"gold has {len(gold)} labels but predictions have {len(predicted)}")
    if not gold:
        raise ValueError("cannot score an empty prediction set")
    labels = sorted(set(gold) | set(predicted))
    index = {label: i for i, label in enumerate(labels)}
    g = np.array([index[v] for v in gold])
    p = np.array([index[v] for v in predicted])
    K = len(labels)
    hit = np.bincount(g[g == p], minlength=K)
    n_gold = np.bincount(g, minlength=K)
    n_pred = np.bincount(p, minlength=K)
    per_label = {}
    for i, label in enumerate(labels):
        prec = _ratio(int(hit[i]), int(n_pred[i]))
        rec = _ratio(int(hit[i]), int(n_gold[i]))
        f1 = 2 * prec * rec / (prec + rec) if prec + rec > 0 else 0.0
        per_label[label] = LabelMetrics(prec, rec, f1, int(n_gold[i]))
    total = len(gold)

    def weighted(attr):
        return sum(getattr(m, attr) * m.support for m in per_label.values()) / total

    return MetricsReport(
        per_label, weighted("precision"), weighted("recall"), weighted("f1"), total, fold_id, config_id
    )


def format_table(report: MetricsReport, title: str | None = None) -> str:
    """Aligned text table with one row per label and a weighted-average row."""
    rows = [
        (label_name(label), f"{m.precision:.2f}", f"{m.recall:.2f}", f"{m.f1:.2f}", str(m.support))
        for label, m in report.per_label.items()
    ]
    rows.append(
        ("Weighted average/Total", f"{report.precision:.2f}", f"{report.recall:.2f}", f"{report.f1:.2f}",
         str(report.support))
    )
    header = ("Label", "Precision", "Recall", "F1-Score", "Support")
    widths = [max(len(r[i]) for r in rows + [header]) for i in range(5)]

    def line(r):
        return "  ".join([r[0].ljust(widths[0])] + [r[i].rjust(widths[i]) for i in range(1, 5)])

    out = [title] if title else []
    out += [line(header), "-" * len(line(header))]
    out += [line(r) for r in rows[:-1]]
    out += ["-" * len(line(header)), line(rows[-1])]
    return "\n".join(out)
