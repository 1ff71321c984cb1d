from .masking import CODE, MASK_TOKENS, QUOTE, SCREEN_NAME, URL, mask_markdown
from .pipeline import segment_thread
from .segment import segment_text, split_sentences
from .sentence import prepare_sentence
from .tokenize import lemmatize, tokenize

__all__ = [
    "CODE",
    "MASK_TOKENS",
    "QUOTE",
    "SCREEN_NAME",
    "URL",
    "lemmatize",
    "mask_markdown",
    "prepare_sentence",
    "segment_text",
    "segment_thread",
    "split_sentences",
    "tokenize",
]
