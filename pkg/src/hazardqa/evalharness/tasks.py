"""Task item types and their JSON file format.

Task files are JSON arrays of item objects. MCQ items carry four options
keyed A-D and a gold label; open-ended items carry gold keypoints and a
difficulty grade that selects the generation budget.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping

from ..generation import Difficulty

OPTION_KEYS = ("A", "B", "C", "D")


class TaskFormatError(Exception):
    pass


@dataclass(frozen=True)
class McqItem:
    id: str
    question: str
    options: tuple[tuple[str, str], ...]  # ((label, text), ...) in A-D order
    gold: str

    def option_map(self) -> dict[str, str]:
        return dict(self.options)


@dataclass(frozen=True)
class OeItem:
    id: str
    question: str
    gold_keypoints: tuple[str, ...]
    difficulty: Difficulty


def mcq_item_from_dict(data: Mapping[str, Any]) -> McqItem:
    options = data.get("options", {})
    if set(options) != set(OPTION_KEYS):
        raise TaskFormatError(f"item {data.get('id')!r} must have options A-D")
    gold = str(data.get("gold", ""))
    if gold not in OPTION_KEYS:
        raise TaskFormatError(f"item {data.get('id')!r} gold must be one of A-D")
    return McqItem(
        id=str(data["id"]),
        question=str(data["question"]),
        options=tuple((key, str(options[key])) for key in OPTION_KEYS),
        gold=gold,
    )


def oe_item_from_dict(data: Mapping[str, Any]) -> OeItem:
    keypoints = tuple(str(k) for k in data.get("gold_keypoints", ()))
    if not keypoints:
        raise TaskFormatError(f"item {data.get('id')!r} must have gold keypoints")
    return OeItem(
        id=str(data["id"]),
        question=str(data["question"]),
        gold_keypoints=keypoints,
        difficulty=Difficulty(str(data.get("difficulty", "medium"))),
    )


def load_mcq_items(path: str | Path) -> list[McqItem]:
    with open(path, encoding="utf-8") as fh:
        return [mcq_item_from_dict(entry) for entry in json.load(fh)]


def load_oe_items(path: str | Path) -> list[OeItem]:
    with open(path, encoding="utf-8") as fh:
        return [oe_item_from_dict(entry) for entry in json.load(fh)]
