"""Rule-based sentence segmentation of masked comment text."""

from __future__ import annotations

import re

from . import resources
from .masking import _OPEN, mask_with_spans, render_masked, render_raw

# Terminal punctuation (plus closing quotes/brackets) followed by space or end.
_TERMINAL = re.compile(r"[.!?]+[\"')\]]*(?=\s|$)")
_OPENERS = "\"'(["


def _starts_sentence(rest: str) -> bool:
    rest = rest.lstrip()
    if not rest:
        return True
    if rest[0] in _OPENERS and len(rest) > 1:
        rest = rest[1:]
    ch = rest[0]
    return ch.isupper() or ch == _OPEN


def _ends_with_abbreviation(line: str, end: int, abbreviations) -> bool:
    start = line.rfind(" ", 0, end) + 1
    word = line[start:end].lstrip(_OPENERS).lower()
    return word in abbreviations


def _split_line(line: str, abbreviations) -> list[str]:
    pieces = []
    start = 0
    for m in _TERMINAL.finditer(line):
        end = m.end()
        if end < len(line.rstrip()):
            if not _starts_sentence(line[end:]):
                continue
            if m.group(0) == "." and _ends_with_abbreviation(line, end, abbreviations):
                continue
        piece = line[start:end].strip()
        if piece:
            pieces.append(piece)
        start = end
    tail = line[start:].strip()
    if tail:
        pieces.append(tail)
    return pieces


def split_sentences(masked: str, abbreviations=None) -> list[str]:
    """Split masked text into sentences.

    Every newline is a boundary. Within a line, ``.``, ``!`` or ``?`` ends a
    sentence when followed by whitespace and a capital letter (or the end of
    the line), unless the word it closes is a known abbreviation.
    """
    if abbreviations is None:
        abbreviations = resources.abbreviations()
    out: list[str] = []
    for line in masked.split("\n"):
        out.extend(_split_line(line, abbreviations))
    return out


def segment_text(body_raw: str, abbreviations=None) -> tuple[list[tuple[str, str]], bool]:
    """Segment raw markdown into ``(raw_sentence, masked_sentence)`` pairs.

    Masked spans are segmented as opaque words so each sentence's raw text can
    be restored. The boolean is the comment's had-code flag.
    """
    text, spans, had_code = mask_with_spans(body_raw)
    pairs = [
        (render_raw(piece, spans).strip(), render_masked(piece, spans))
        for piece in split_sentences(text, abbreviations)
    ]
    return pairs, had_code
