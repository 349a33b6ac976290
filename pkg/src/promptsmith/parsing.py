"""Turn raw model completions into clean suggestion values.

Completions continue a few-shot pattern, so they inherit its artifacts:
duplicate list entries, stray trailing commas, and sometimes an echoed
label or the start of the next example block. Parsing removes all of
that while preserving the model's own casing.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import NoSuggestions

_SCENE_BREAKS = ("\nwords:", "\n\n")
_LABEL_PREFIXES = ("suggestion:", "name:")


@dataclass(frozen=True)
class ParsedSuggestions:
    items: tuple[str, ...]
    truncated: bool
    raw: str


@dataclass(frozen=True)
class ParsedScene:
    text: str
    raw: str


def normalize_for_comparison(value: str) -> str:
    """Key used for dedup and exclusion: trimmed, case-folded."""
    return value.strip().casefold()


def parse_comma_list(raw: str, max_items: int) -> ParsedSuggestions:
    """Split the first line of a completion into unique suggestions.

    Later lines are the model continuing the few-shot pattern and are
    ignored. Duplicates are removed case-insensitively, keeping the first
    occurrence with its original casing.
    """
    if max_items < 1:
        raise ValueError("max_items must be at least 1")
    first_line = raw.split("\n", 1)[0]
    items: list[str] = []
    seen: set[str] = set()
    truncated = False
    for piece in first_line.split(","):
        piece = piece.strip()
        if not piece:
            continue
        key = normalize_for_comparison(piece)
        if key in seen:
            continue
        if len(items) == max_items:
            truncated = True
            break
        seen.add(key)
        items.append(piece)
    if not items:
        raise NoSuggestions("The model reply contained no suggestions.")
    return ParsedSuggestions(tuple(items), truncated, raw)


def parse_single_value(raw: str) -> str:
    """Return the first line of a completion as one suggestion.

    If the model echoed a label ("Suggestion: beach"), the label is
    stripped first.
    """
    first_line = raw.split("\n", 1)[0].strip()
    lowered = first_line.lower()
    for prefix in _LABEL_PREFIXES:
        if lowered.startswith(prefix):
            first_line = first_line.split(":", 1)[1].strip()
            break
    if not first_line:
        raise NoSuggestions("The model reply contained no suggestion.")
    return first_line


def parse_scene(raw: str) -> ParsedScene:
    """Extract one scene description from a completion.

    Cuts at the first stop artifact in case the backend did not already
    stop there, folds the scene into a single paragraph, and removes the
    trailing comma some few-shot examples carry.
    """
    text = raw
    cut = len(text)
    for marker in _SCENE_BREAKS:
        pos = text.find(marker)
        if pos != -1:
            cut = min(cut, pos)
    text = text[:cut].strip()
    text = re.sub(r"\s*\n\s*", " ", text)
    text = text.rstrip(" \t,").rstrip()
    if not text:
        raise NoSuggestions("The model reply contained no scene.")
    return ParsedScene(text, raw)
