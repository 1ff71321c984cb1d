"""Regex masking of GitHub markdown constructs."""

from __future__ import annotations

import logging
import re

logger = logging.getLogger(__name__)

CODE = "CODE"
QUOTE = "QUOTE"
URL = "URL"
SCREEN_NAME = "SCREEN_NAME"
MASK_TOKENS = frozenset({CODE, QUOTE, URL, SCREEN_NAME})

# Placeholder delimiters (Unicode private use area) used while masking so the
# original text of every replaced span can be recovered after segmentation.
_OPEN = "\ue000"
_CLOSE = "\ue001"
_PLACEHOLDER = re.compile(f"{_OPEN}(\\d+){_CLOSE}")

_FENCE = re.compile(r"(`{3,}|~{3,})[^\n]*\n?[\s\S]*?\1")
_FENCE_OPEN = re.compile(r"`{3,}|~{3,}")
_INLINE = re.compile(r"``[^\n]+?``|`[^`\n]+`")
_QUOTE_LINE = re.compile(r"^[ \t]{0,3}>.*$", re.MULTILINE)
_URL = re.compile(rf"https?://[^\s<>\"'`{_OPEN}{_CLOSE}]+", re.IGNORECASE)
_URL_TRAILING = ".,;:!?)]}'\""
_MENTION = re.compile(
    r"(?<![\w@.\-/])@([A-Za-z0-9](?:[A-Za-z0-9]|-(?=[A-Za-z0-9])){0,38})(?![A-Za-z0-9\-])"
)


class _Masker:
    def __init__(self):
        self.spans: list[tuple[str, str]] = []
        self.had_code = False

    def hold(self, token: str, original: str) -> str:
        self.spans.append((token, original))
        return f"{_OPEN}{len(self.spans) - 1}{_CLOSE}"

    def run(self, text: str) -> str:
        text = text.replace("\r\n", "\n").replace("\r", "\n")
        text = _FENCE.sub(self._code, text)
        fence = _FENCE_OPEN.search(text)
        if fence is not None:
            logger.warning("unterminated code fence; masking the rest of the comment as code")
            text = text[: fence.start()] + self._code_text(text[fence.start():])
        text = _INLINE.sub(self._code, text)
        text = self._quotes(text)
        text = _URL.sub(self._url, text)
        text = _MENTION.sub(lambda m: self.hold(SCREEN_NAME, m.group(0)), text)
        return text

    def _code(self, m: re.Match) -> str:
        return self._code_text(m.group(0))

    def _code_text(self, original: str) -> str:
        self.had_code = True
        return self.hold(CODE, original)

    def _url(self, m: re.Match) -> str:
        url = m.group(0)
        stripped = url.rstrip(_URL_TRAILING)
        # keep a closing paren that balances one inside the URL
        while stripped != url and url[len(stripped)] == ")" and stripped.count("(") > stripped.count(")"):
            stripped += ")"
        return self.hold(URL, stripped) + url[len(stripped):]

    def _quotes(self, text: str) -> str:
        lines = text.split("\n")
        out: list[str] = []
        block: list[str] = []
        for line in lines:
            if _QUOTE_LINE.match(line):
                block.append(line)
                continue
            if block:
                out.append(self.hold(QUOTE, "\n".join(block)))
                block = []
            out.append(line)
        if block:
            out.append(self.hold(QUOTE, "\n".join(block)))
        return "\n".join(out)


def _render(text: str, spans, original: bool) -> str:
    if original:
        # a quote may enclose code spans masked before it
        return _PLACEHOLDER.sub(lambda m: _render(spans[int(m.group(1))][1], spans, True), text)
    # keep every mask token a word of its own so re-masking and tokenizing see it intact
    out, last = [], 0
    for m in _PLACEHOLDER.finditer(text):
        out.append(text[last : m.start()])
        before = out[-1][-1:] if out[-1] else (out[-2][-1:] if len(out) > 1 else "")
        after = text[m.end() : m.end() + 1]
        token = spans[int(m.group(1))][0]
        if before and (before.isalnum() or before in "_-@"):
            token = " " + token
        if after and (after.isalnum() or after in ("_", _OPEN)):
            token += " "
        out.append(token)
        last = m.end()
    out.append(text[last:])
    return "".join(out)


def mask_with_spans(body_raw: str) -> tuple[str, list[tuple[str, str]], bool]:
    """Mask ``body_raw`` leaving placeholders; returns (text, spans, had_code).

    Each placeholder indexes ``spans``, a list of ``(mask_token, original_text)``.
    """
    masker = _Masker()
    text = masker.run(body_raw)
    return text, masker.spans, masker.had_code


def render_masked(text: str, spans) -> str:
    return _render(text, spans, original=False)


def render_raw(text: str, spans) -> str:
    return _render(text, spans, original=True)


def mask_markdown(body_raw: str) -> tuple[str, bool]:
    """Replace code, quotes, URLs and @-mentions with reserved tokens.

    Fenced and inline code become ``CODE``, each run of contiguous ``>`` lines
    becomes one ``QUOTE``, http(s) links become ``URL`` and GitHub mentions
    become ``SCREEN_NAME``. Returns the masked text and whether any code was
    found.

    >>> mask_markdown("see ```py\\nx=1\\n``` here")
    ('see CODE here', True)
    """
    text, spans, had_code = mask_with_spans(body_raw)
    return render_masked(text, spans), had_code


def has_code(body_raw: str) -> bool:
    return mask_with_spans(body_raw)[2]
