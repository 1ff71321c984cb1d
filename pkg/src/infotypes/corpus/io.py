"""Reading and writing corpora (JSONL threads, labeled CSV)."""

from __future__ import annotations

import csv
import json
from collections import OrderedDict
from dataclasses import replace
from datetime import datetime, timedelta, timezone

from ..errors import CorpusFormatError, ValidationError
from ..preprocess.masking import has_code
from ..preprocess.sentence import prepare_sentence
from .types import (
    Association,
    InfoType,
    IssueComment,
    IssueThread,
    format_timestamp,
    make_sentence,
    parse_timestamp,
)

CSV_REQUIRED = ("project", "issue_number", "comment_index", "sentence_index_in_comment", "text", "labels")
_SYNTHETIC_EPOCH = datetime(2000, 1, 1, tzinfo=timezone.utc)
_SYNTHETIC_STEP = timedelta(hours=1)


def _require(obj: dict, key: str, where: str):
    if key not in obj:
        raise ValidationError(f"{where}: missing field {key!r}")
    return obj[key]


def thread_from_dict(obj: dict) -> IssueThread:
    if not isinstance(obj, dict):
        raise ValidationError("thread record must be a JSON object")
    where = f"thread {obj.get('project', '?')}#{obj.get('issue_number', '?')}"
    comments = []
    position = 0
    for ci, c in enumerate(_require(obj, "comments", where)):
        sentences = []
        for si, s in enumerate(c.get("sentences") or [], start=1):
            position += 1
            text = _require(s, "text", where)
            labels = []
            for name in s.get("labels") or []:
                try:
                    labels.append(InfoType.parse(name))
                except ValidationError as exc:
                    raise ValidationError(f"{where}: {exc}") from None
            masked, tokens = prepare_sentence(text)
            try:
                sentences.append(make_sentence(ci, si, position, text, masked, tokens, labels))
            except ValidationError as exc:
                raise ValidationError(f"{where}: {exc}") from None
        body = c.get("body_raw") or ""
        comments.append(
            IssueComment(
                author_login=c.get("author_login") or "",
                author_association=Association.parse(c.get("author_association") or "OTHER"),
                created_at=parse_timestamp(_require(c, "created_at", where)),
                body_raw=body,
                has_code=has_code(body),
                sentences=tuple(sentences),
            )
        )
    try:
        number = int(_require(obj, "issue_number", where))
    except (TypeError, ValueError):
        raise ValidationError(f"{where}: issue_number must be an integer") from None
    opened = obj.get("opened_at")
    return IssueThread(
        project=str(_require(obj, "project", where)),
        issue_number=number,
        title=obj.get("title") or "",
        comments=tuple(comments),
        opened_at=parse_timestamp(opened) if opened else _first_time(comments),
        synthetic_timestamps=bool(obj.get("synthetic_timestamps", False)),
    )


def _first_time(comments) -> datetime:
    return comments[0].created_at if comments else _SYNTHETIC_EPOCH


def thread_to_dict(thread: IssueThread) -> dict:
    comments = []
    for c in thread.comments:
        record = {
            "author_login": c.author_login,
            "author_association": c.author_association.value,
            "created_at": format_timestamp(c.created_at),
            "body_raw": c.body_raw,
        }
        if c.sentences:
            record["sentences"] = [
                {"text": s.text_raw, "labels": [label.name for label in s.labels]}
                for s in c.sentences
            ]
        comments.append(record)
    obj = {
        "project": thread.project,
        "issue_number": thread.issue_number,
        "title": thread.title,
        "opened_at": format_timestamp(thread.opened_at),
        "comments": comments,
    }
    if thread.synthetic_timestamps:
        obj["synthetic_timestamps"] = True
    return obj


def dumps_thread(thread: IssueThread) -> str:
    """Canonical one-line JSON for a thread (sorted keys, no extra spaces)."""
    return json.dumps(thread_to_dict(thread), sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def loads_thread(text: str) -> IssueThread:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CorpusFormatError(f"invalid JSON: {exc}") from None
    return thread_from_dict(obj)


def load_corpus(path) -> list[IssueThread]:
    """Load a JSONL corpus, one thread per non-blank line, in file order."""
    threads = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusFormatError(f"{path}:{lineno}: invalid JSON ({exc.msg})") from None
            try:
                threads.append(thread_from_dict(obj))
            except ValidationError as exc:
                raise ValidationError(f"{path}:{lineno}: {exc}") from None
    return threads


def save_corpus(threads, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for thread in threads:
            fh.write(dumps_thread(thread))
            fh.write("\n")


def _association(value: str) -> Association:
    value = (value or "").strip().upper()
    if value in Association.__members__:
        return Association[value]
    return Association.from_github(value)


def import_labeled_csv(path) -> list[IssueThread]:
    """Rebuild threads from a sentence-per-row CSV of annotations.

    Rows are grouped by (project, issue_number); comments and sentences are
    ordered by their index columns and renumbered densely. When any comment
    lacks ``created_at`` the whole thread gets hourly synthetic timestamps and
    ``synthetic_timestamps`` is set.
    """
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in CSV_REQUIRED if c not in header]
        if missing:
            raise CorpusFormatError(f"{path}: missing required column(s) {', '.join(missing)}")
        groups: OrderedDict = OrderedDict()
        for lineno, row in enumerate(reader, start=2):
            try:
                key = (row["project"].strip(), int(row["issue_number"]))
                ci = int(row["comment_index"])
                si = int(row["sentence_index_in_comment"])
            except (TypeError, ValueError):
                raise CorpusFormatError(f"{path}:{lineno}: non-integer index column") from None
            labels = []
            for name in (row["labels"] or "").split(";"):
                if name.strip():
                    try:
                        labels.append(InfoType.parse(name))
                    except ValidationError as exc:
                        raise ValidationError(f"{path}:{lineno}: {exc}") from None
            groups.setdefault(key, {}).setdefault(ci, []).append((si, row, tuple(dict.fromkeys(labels))))
    return [_thread_from_rows(project, number, by_comment) for (project, number), by_comment in groups.items()]


def _thread_from_rows(project: str, number: int, by_comment: dict) -> IssueThread:
    ordered = [sorted(by_comment[ci], key=lambda r: r[0]) for ci in sorted(by_comment)]
    stamps = [(rows[0][1].get("created_at") or "").strip() for rows in ordered]
    synthetic = not all(stamps)
    comments = []
    position = 0
    for new_ci, rows in enumerate(ordered):
        first = rows[0][1]
        sentences = []
        for si, (_, row, labels) in enumerate(rows, start=1):
            position += 1
            masked, tokens = prepare_sentence(row["text"])
            sentences.append(make_sentence(new_ci, si, position, row["text"], masked, tokens, labels))
        body = "\n".join(row["text"] for _, row, _ in rows)
        created = (
            _SYNTHETIC_EPOCH + new_ci * _SYNTHETIC_STEP if synthetic else parse_timestamp(stamps[new_ci])
        )
        comments.append(
            IssueComment(
                author_login=(first.get("author_login") or "").strip(),
                author_association=_association(first.get("author_association") or ""),
                created_at=created,
                body_raw=body,
                has_code=has_code(body),
                sentences=tuple(sentences),
            )
        )
    if not synthetic:
        comments.sort(key=lambda c: c.created_at)
        comments = _renumber(comments)
    return IssueThread(
        project=project,
        issue_number=number,
        title="",
        comments=tuple(comments),
        opened_at=comments[0].created_at,
        synthetic_timestamps=synthetic,
    )


def _renumber(comments):
    out, position = [], 0
    for ci, c in enumerate(comments):
        sentences = []
        for si, s in enumerate(c.sentences, start=1):
            position += 1
            sentences.append(
                replace(
                    s,
                    id=f"c{ci}s{si}",
                    comment_index=ci,
                    sentence_index_in_comment=si,
                    sentence_index_in_thread=position,
                )
            )
        out.append(replace(c, sentences=tuple(sentences)))
    return out
