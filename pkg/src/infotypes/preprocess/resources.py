"""Abbreviation and contraction tables shipped as UTF-8 data files."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources
from pathlib import Path

_overrides: dict[str, Path] = {}


def _read_lines(name: str) -> list[str]:
    path = _overrides.get(name)
    if path is not None:
        text = Path(path).read_text(encoding="utf-8")
    else:
        text = resources.files("infotypes.preprocess").joinpath("data").joinpath(name).read_text("utf-8")
    return [line.strip() for line in text.splitlines() if line.strip() and not line.startswith("#")]


@lru_cache(maxsize=None)
def abbreviations() -> frozenset[str]:
    return frozenset(line.lower() for line in _read_lines("abbreviations.txt"))


@lru_cache(maxsize=None)
def contractions() -> dict[str, tuple[str, ...]]:
    table = {}
    for line in _read_lines("contractions.txt"):
        key, _, expansion = line.partition("\t")
        if not expansion:
            key, _, expansion = line.partition(" ")
        table[key.strip().lower()] = tuple(expansion.split())
    return table


def configure(abbreviations_path=None, contractions_path=None) -> None:
    """Point the tables at user-supplied files (one entry per line)."""
    if abbreviations_path is not None:
        _overrides["abbreviations.txt"] = Path(abbreviations_path)
    if contractions_path is not None:
        _overrides["contractions.txt"] = Path(contractions_path)
    abbreviations.cache_clear()
    contractions.cache_clear()


def reset() -> None:
    _overrides.clear()
    abbreviations.cache_clear()
    contractions.cache_clear()
