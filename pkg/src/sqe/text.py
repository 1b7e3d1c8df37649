"""Tokenization and title normalization.

Every component that compares text to text goes through these two
functions, so entity phrases found in a request stay searchable in the
document index.
"""

from __future__ import annotations

import re

_NON_ALNUM = re.compile(r"[^0-9a-z]+")
_WHITESPACE = re.compile(r"\s+")


def tokenize(text: str) -> list[str]:
    """Lowercase, split on any non-alphanumeric run, drop empty tokens."""
    return [t for t in _NON_ALNUM.split(text.lower()) if t]


def normalize_title(title: str) -> str:
    """Canonical form of a knowledge-base title.

    Lowercased, underscores become spaces, surrounding whitespace is
    trimmed and internal whitespace collapsed.  "Above_(artist)" and
    "above  (artist) " normalize to the same string.
    """
    return _WHITESPACE.sub(" ", title.replace("_", " ").strip()).lower()
