"""Task metrics: multiple-choice accuracy and keypoint coverage.

The offline judge is a deterministic oracle: a keypoint counts as supported
when its normalized form (casefolded, punctuation stripped, whitespace
collapsed) appears as a substring of the normalized response. A generative
judge can be dropped in behind the same protocol.
"""

from __future__ import annotations

import math
import re
import unicodedata
from typing import Protocol, Sequence, runtime_checkable

from .tasks import OeItem

MCQ_LABELS = ("A", "B", "C", "D")

_LETTER_RE = re.compile(r"\b([ABCD])\b")
_PUNCT_RE = re.compile(r"[^\w\s]")


class LengthMismatchError(Exception):
    pass


class EmptyInputError(Exception):
    pass


class EmptyKeypointsError(Exception):
    pass


def mcq_accuracy(predictions: Sequence[str | None], golds: Sequence[str]) -> float:
    """Fraction of items where the predicted label equals the gold label."""
    if len(predictions) != len(golds):
        raise LengthMismatchError(f"{len(predictions)} predictions vs {len(golds)} golds")
    if not golds:
        raise EmptyInputError("no items to score")
    correct = sum(1 for predicted, gold in zip(predictions, golds) if predicted == gold)
    return correct / len(golds)


@runtime_checkable
class KeypointJudge(Protocol):
    def supported(self, keypoint: str, response: str) -> int: ...


def normalize_for_match(text: str) -> str:
    text = unicodedata.normalize("NFKC", text).casefold()
    text = _PUNCT_RE.sub(" ", text)
    return " ".join(text.split())


class ContainmentJudge:
    """Normalized-substring oracle judge."""

    def supported(self, keypoint: str, response: str) -> int:
        key = normalize_for_match(keypoint)
        if not key:
            return 0
        return int(key in normalize_for_match(response))


def keypoint_coverage(item: OeItem, response: str, judge: KeypointJudge) -> float:
    """Proportion of the item's gold keypoints supported by the response."""
    if not item.gold_keypoints:
        raise EmptyKeypointsError(f"item {item.id} has no gold keypoints")
    supported = sum(judge.supported(k, response) for k in item.gold_keypoints)
    return supported / len(item.gold_keypoints)


def mean_coverage(per_item: Sequence[float]) -> float:
    """Arithmetic mean of per-item coverage values.

    Uses exactly-rounded summation, so the mean is permutation invariant.
    """
    if not per_item:
        raise EmptyInputError("no coverage values")
    return math.fsum(per_item) / len(per_item)


def extract_mcq_answer(text: str) -> str | None:
    """First standalone A/B/C/D in the model output; None counts as incorrect."""
    match = _LETTER_RE.search(text)
    return match.group(1) if match else None
