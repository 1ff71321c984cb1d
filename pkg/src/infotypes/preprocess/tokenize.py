"""Word tokenization with contraction expansion and suffix-rule lemmatization."""

from __future__ import annotations

import re

from . import resources
from .masking import MASK_TOKENS

LEMMA_RULES_VERSION = 1

_TOKEN = re.compile(
    r"\b(?:CODE|QUOTE|URL|SCREEN_NAME)\b"
    r"|\b[vV]?\d+(?:\.\d+)+"
    r"|\w+(?:['’]\w+)*"
)

IRREGULAR = {
    "am": "be", "is": "be", "are": "be", "was": "be", "were": "be", "been": "be", "being": "be",
    "has": "have", "had": "have", "having": "have",
    "does": "do", "did": "do", "done": "do", "doing": "do",
    "went": "go", "gone": "go", "goes": "go",
    "made": "make", "making": "make",
    "got": "get", "gotten": "get",
    "ran": "run",
    "found": "find", "thought": "think", "took": "take", "taken": "take",
    "gave": "give", "given": "give", "saw": "see", "seen": "see",
    "knew": "know", "known": "know", "wrote": "write", "written": "write",
    "broke": "break", "broken": "break", "built": "build", "sent": "send",
    "said": "say", "told": "tell", "came": "come", "began": "begin", "begun": "begin",
    "left": "leave", "kept": "keep", "meant": "mean", "felt": "feel", "ate": "eat",
    "using": "use", "used": "use", "uses": "use",
    "children": "child", "men": "man", "women": "woman", "people": "person",
    "data": "data", "indices": "index", "matrices": "matrix", "vertices": "vertex",
    "analyses": "analysis", "bases": "basis", "during": "during", "nothing": "nothing",
    "something": "something", "anything": "anything", "everything": "everything",
}

# Words whose endings look inflectional but are not.
_KEEP = frozenset(
    "always perhaps various series news thus this his its yes us bus gas plus "
    "status process access class less unless across whereas previous obvious "
    "numerous analysis basis axis bias alias canvas atlas lens mess pass "
    "bed red need feed seed speed indeed embed shed hundred succeed proceed "
    "thing things bring string spring morning evening ceiling".split()
)

_VOWELS = set("aeiou")


def _is_consonant(word: str, i: int) -> bool:
    ch = word[i]
    if ch in _VOWELS:
        return False
    if ch == "y":
        return i == 0 or not _is_consonant(word, i - 1)
    return True


def _measure(stem: str) -> int:
    """Number of vowel-consonant sequences in ``stem``."""
    m, prev_vowel = 0, False
    for i in range(len(stem)):
        vowel = not _is_consonant(stem, i)
        if prev_vowel and not vowel:
            m += 1
        prev_vowel = vowel
    return m


def _has_vowel(stem: str) -> bool:
    return any(not _is_consonant(stem, i) for i in range(len(stem)))


def _cvc(stem: str) -> bool:
    if len(stem) < 3:
        return False
    return (
        _is_consonant(stem, len(stem) - 3)
        and not _is_consonant(stem, len(stem) - 2)
        and _is_consonant(stem, len(stem) - 1)
        and stem[-1] not in "wxy"
    )


def _restore(stem: str) -> str:
    if stem.endswith(("at", "bl", "iz")):
        return stem + "e"
    if len(stem) > 2 and stem[-1] == stem[-2] and stem[-1] not in "lsz" and _is_consonant(stem, len(stem) - 1):
        return stem[:-1]
    if _measure(stem) == 1 and _cvc(stem):
        return stem + "e"
    return stem


def lemmatize(word: str) -> str:
    """Coarse lemma of a lowercase word via irregular lookup and suffix rules."""
    if word in IRREGULAR:
        return IRREGULAR[word]
    if word in _KEEP or len(word) <= 3 or not word.isalpha():
        return word
    if word.endswith("ies") and len(word) > 4:
        return word[:-3] + "y"
    if word.endswith("ied") and len(word) > 4:
        return word[:-3] + "y"
    if word.endswith("sses"):
        return word[:-2]
    if word.endswith(("ches", "shes", "xes", "zes")):
        return word[:-2]
    if word.endswith("ing"):
        stem = word[:-3]
        if _has_vowel(stem) and len(stem) >= 2:
            return _restore(stem)
        return word
    if word.endswith("eed"):
        return word
    if word.endswith("ed"):
        stem = word[:-2]
        if _has_vowel(stem) and len(stem) >= 2:
            return _restore(stem)
        return word
    if word.endswith("s") and not word.endswith(("ss", "us", "is")):
        return word[:-1]
    return word


def tokenize(sentence: str, contractions=None) -> list[str]:
    """Tokenize a masked sentence into normalized words.

    Mask tokens pass through unchanged; other words are lowercased, expanded
    if they are a known contraction, and lemmatized. Punctuation is dropped and
    stop words are kept.

    >>> tokenize("Please don't close this!")
    ['please', 'do', 'not', 'close', 'this']
    """
    if contractions is None:
        contractions = resources.contractions()
    out: list[str] = []
    for match in _TOKEN.finditer(sentence):
        token = match.group(0)
        if token in MASK_TOKENS:
            out.append(token)
            continue
        token = token.lower().replace("’", "'")
        if token in contractions:
            words = contractions[token]
        elif "'" in token:
            head, _, tail = token.partition("'")
            words = (head,) if tail in ("s", "") else (token.replace("'", ""),)
        else:
            words = (token,)
        out.extend(lemmatize(w) for w in words if w)
    return out
