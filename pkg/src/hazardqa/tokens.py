"""Tokenization primitives shared across the engine.

Two distinct views of text are used:

* whitespace tokens (``tokenize`` / ``count_tokens``) -- the unit in which
  all context budgets are measured;
* search terms (``analyze``) -- casefolded alphanumeric terms used by the
  lexical index and the overlap-based rerank scorer.

Both are deterministic and language-agnostic. The whitespace tokenizer is a
deliberate seam: swapping in a subword tokenizer only requires replacing
these functions.
"""

from __future__ import annotations

import re
import unicodedata

_TERM_RE = re.compile(r"\w+")


def tokenize(text: str) -> list[str]:
    """Whitespace tokens of ``text`` after NFKC normalization."""
    return unicodedata.normalize("NFKC", text).split()


def count_tokens(text: str) -> int:
    """Number of whitespace tokens; 0 iff ``text`` is empty or whitespace."""
    return len(tokenize(text))


def truncate_to_tokens(text: str, budget: int) -> str:
    """Keep at most ``budget`` whitespace tokens of ``text``.

    Returns ``text`` unchanged when it already fits; otherwise the first
    ``budget`` tokens rejoined with single spaces.
    """
    if budget <= 0:
        return ""
    parts = tokenize(text)
    if len(parts) <= budget:
        return text
    return " ".join(parts[:budget])


def analyze(text: str) -> list[str]:
    """Casefolded alphanumeric search terms, in order of appearance."""
    return _TERM_RE.findall(unicodedata.normalize("NFKC", text).casefold())
