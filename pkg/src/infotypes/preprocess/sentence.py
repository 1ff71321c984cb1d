"""Per-sentence normalization shared by corpus loading and thread segmentation."""

from __future__ import annotations

from .masking import mask_markdown
from .tokenize import tokenize


def prepare_sentence(text_raw: str) -> tuple[str, tuple[str, ...]]:
    """Masked text and tokens for one already-segmented raw sentence."""
    masked, _ = mask_markdown(text_raw)
    masked = " ".join(masked.split())
    return masked, tuple(tokenize(masked))
