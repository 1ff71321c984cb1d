"""Static HTML overview of a thread's information types."""

from __future__ import annotations

import html
import os
from collections import Counter

from ..corpus.types import InfoType, IssueThread
from ..errors import ValidationError

PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf", "#393b79", "#ad494a", "#637939", "#e7ba52", "#7b4173", "#3182bd",
)
ROW_HEIGHT = 12  # pixels per sentence

_STYLE = """
body { font-family: sans-serif; margin: 1.5em; }
.thread { display: flex; flex-direction: column; gap: 4px; max-width: 60em; }
.comment { display: flex; align-items: stretch; gap: 0.5em; }
.author { width: 12em; font-size: 0.8em; overflow: hidden; text-overflow: ellipsis; white-space: nowrap; }
.bar { flex: 1; display: flex; border: 1px solid #999; min-height: 4px; }
.seg { display: block; }
.legend { list-style: none; padding: 0; display: flex; flex-wrap: wrap; gap: 0.5em 1.5em; }
.legend-entry.inactive { opacity: 0.35; }
.swatch { display: inline-block; width: 1em; height: 1em; margin-right: 0.3em; vertical-align: middle; }
table.summary { border-collapse: collapse; margin-top: 1em; }
table.summary td, table.summary th { border: 1px solid #ccc; padding: 2px 8px; text-align: left; }
"""


def color_of(label: InfoType) -> str:
    return PALETTE[int(label)]


def _label_map(thread: IssueThread, labels) -> dict:
    ids = [s.id for _, s in thread.sentences()]
    if labels is None:
        raise ValidationError("no labels given")
    if isinstance(labels, dict):
        mapping = {k: InfoType(v) if not isinstance(v, InfoType) else v for k, v in labels.items()}
    else:
        labels = list(labels)
        if len(labels) != len(ids):
            raise ValidationError(f"{len(labels)} labels for {len(ids)} sentences")
        mapping = dict(zip(ids, labels))
    if not mapping:
        raise ValidationError("no labels given")
    absent = [i for i in ids if i not in mapping]
    if absent:
        raise ValidationError(f"sentences without a label: {', '.join(absent[:5])}")
    return mapping


def gold_labels(thread: IssueThread) -> dict:
    """First annotated label of every sentence."""
    out = {}
    for _, s in thread.sentences():
        if not s.labels:
            raise ValidationError(f"sentence {s.id} has no gold label")
        out[s.id] = s.labels[0]
    return out


def _segments(sentences, mapping):
    runs = []
    for s in sentences:
        label = mapping[s.id]
        if runs and runs[-1][0] == label:
            runs[-1][1] += 1
        else:
            runs.append([label, 1])
    return runs


def render_html(thread: IssueThread, labels) -> str:
    mapping = _label_map(thread, labels)
    counts = Counter(mapping.values())
    esc = html.escape
    title = f"{thread.key} {thread.title}".strip()
    parts = [
        "<!DOCTYPE html>",
        '<html lang="en">',
        "<head>",
        '<meta charset="utf-8">',
        f"<title>{esc(title)}</title>",
        f"<style>{_STYLE}</style>",
        "</head>",
        "<body>",
        f"<h1>{esc(title)}</h1>",
        f"<p>{len(thread.comments)} comments, {len(mapping)} sentences</p>",
        '<div class="thread">',
    ]
    for ci, comment in enumerate(thread.comments):
        n = len(comment.sentences)
        author = f"{comment.author_login or 'unknown'} ({comment.author_association.value})"
        parts.append(f'<div class="comment" data-comment="{ci}">')
        parts.append(f'<div class="author">{esc(author)}</div>')
        parts.append(f'<div class="bar" style="height:{max(n, 1) * ROW_HEIGHT}px">')
        for label, k in _segments(comment.sentences, mapping):
            parts.append(
                f'<span class="seg" style="flex:{k};background:{color_of(label)}" '
                f'title="{esc(label.display_name)}: {k}"></span>'
            )
        parts.append("</div>")
        parts.append("</div>")
    parts.append("</div>")
    parts.append('<ul class="legend">')
    for label in InfoType:
        state = "active" if counts.get(label) else "inactive"
        parts.append(
            f'<li class="legend-entry {state}"><span class="swatch" style="background:{color_of(label)}"></span>'
            f"{esc(label.display_name)}</li>"
        )
    parts.append("</ul>")
    parts.append('<table class="summary">')
    parts.append("<tr><th>Information type</th><th>Sentences</th></tr>")
    for label in sorted(counts):
        parts.append(f"<tr><td>{esc(label.display_name)}</td><td>{counts[label]}</td></tr>")
    parts.append("</table>")
    parts.append("</body>")
    parts.append("</html>")
    return "\n".join(parts) + "\n"


def render_report(thread: IssueThread, labels, out_path) -> str:
    """Write the report to ``out_path``; labels are a sentence-id map or a thread-ordered list."""
    document = render_html(thread, labels)
    tmp = f"{out_path}.tmp"
    try:
        with open(tmp, "w", encoding="utf-8") as fh:
            fh.write(document)
        os.replace(tmp, out_path)
    except OSError:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise
    return str(out_path)
