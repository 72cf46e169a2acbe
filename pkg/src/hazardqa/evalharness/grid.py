"""Retrieval-configuration sweep: strategies x pool sizes x rerank depths.

Each sweep evaluates a no-retrieval baseline plus one cell per (strategy,
IR, k) combination. MCQ cells use greedy decoding under the 6,000-token
context cap; open-ended cells use temperature 0.7 with difficulty budgets
and 512-token unit truncation. Per-cell failures are recorded and the sweep
continues. Reports are deterministic: identical inputs yield byte-identical
JSON.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence, Union

from ..clients import GenerativeModelClient
from ..generation import generate_answer
from ..grounding import GroundingContext, TaskKind
from ..retrieval import DocumentRetriever, RetrievalConfig, RetrievalStrategy
from .metrics import (
    EmptyInputError,
    KeypointJudge,
    extract_mcq_answer,
    keypoint_coverage,
    mcq_accuracy,
    mean_coverage,
)
from .tasks import McqItem, OeItem

DEFAULT_IRS = (100, 150, 200)
DEFAULT_KS = (5, 10, 15)

BASELINE_KEY = "baseline"


def cell_key(strategy: RetrievalStrategy, ir: int, k: int) -> str:
    return f"{strategy.value}-IR{ir}-R{k}"


def mcq_prompt(item: McqItem, ctx: GroundingContext | None) -> str:
    lines = []
    if ctx is not None and ctx.units:
        lines.append("Evidence passages:")
        lines.extend(f"[{source_id}] {text}" for source_id, text in ctx.units)
        lines.append("")
    lines.append(f"Question: {item.question}")
    for label, text in item.options:
        lines.append(f"{label}. {text}")
    lines.append("Answer with the letter of the correct option.")
    return "\n".join(lines)


def oe_prompt(item: OeItem, ctx: GroundingContext | None) -> str:
    lines = []
    if ctx is not None and ctx.units:
        lines.append("Evidence passages:")
        lines.extend(f"[{source_id}] {text}" for source_id, text in ctx.units)
        lines.append("")
    lines.append(f"Question: {item.question}")
    lines.append("Answer:")
    return "\n".join(lines)


@dataclass(frozen=True)
class GridCell:
    key: str
    metric: float | None
    per_item: tuple[dict, ...] = ()
    error: str | None = None


@dataclass
class GridResult:
    model_label: str
    task_format: str  # "mcq" | "oe"
    baseline: GridCell
    cells: dict[str, GridCell] = field(default_factory=dict)

    def best(self) -> GridCell | None:
        scored = [c for c in self.cells.values() if c.metric is not None]
        if not scored:
            return None
        return max(scored, key=lambda c: (c.metric, c.key))

    def to_dict(self) -> dict:
        def cell_dict(cell: GridCell) -> dict:
            return {
                "key": cell.key,
                "metric": cell.metric,
                "error": cell.error,
                "per_item": list(cell.per_item),
            }

        return {
            "model": self.model_label,
            "task_format": self.task_format,
            "baseline": cell_dict(self.baseline),
            "cells": {key: cell_dict(cell) for key, cell in sorted(self.cells.items())},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def summary_table(self) -> str:
        """Aligned text summary: base, best, best configuration, absolute gain."""
        best = self.best()
        base = self.baseline.metric
        header = ("Model", "Base", "Best", "Best Configuration", "Absolute Gain")
        if best is None or base is None:
            row = (self.model_label, _pct(base), "-", "-", "-")
        else:
            row = (
                self.model_label,
                _pct(base),
                _pct(best.metric),
                best.key,
                f"+{(best.metric - base) * 100:.1f} pp",
            )
        widths = [max(len(h), len(r)) for h, r in zip(header, row)]
        fmt = "  ".join(f"{{:<{w}}}" for w in widths)
        return fmt.format(*header) + "\n" + fmt.format(*row)


def _pct(value: float | None) -> str:
    return "-" if value is None else f"{value * 100:.1f}%"


def _evaluate_mcq(
    items: Sequence[McqItem],
    retriever: DocumentRetriever | None,
    config: RetrievalConfig | None,
    client: GenerativeModelClient,
) -> tuple[float, tuple[dict, ...]]:
    predictions: list[str | None] = []
    detail: list[dict] = []
    for item in items:
        ctx = (
            retriever.retrieve(item.question, config, TaskKind.MCQ)
            if retriever is not None and config is not None
            else None
        )
        answer = generate_answer(mcq_prompt(item, ctx), client, TaskKind.MCQ)
        predicted = extract_mcq_answer(answer)
        predictions.append(predicted)
        detail.append({"id": item.id, "predicted": predicted, "gold": item.gold})
    return mcq_accuracy(predictions, [item.gold for item in items]), tuple(detail)


def _evaluate_oe(
    items: Sequence[OeItem],
    retriever: DocumentRetriever | None,
    config: RetrievalConfig | None,
    client: GenerativeModelClient,
    judge: KeypointJudge,
) -> tuple[float, tuple[dict, ...]]:
    coverages: list[float] = []
    detail: list[dict] = []
    for item in items:
        ctx = (
            retriever.retrieve(item.question, config, TaskKind.OPEN_ENDED)
            if retriever is not None and config is not None
            else None
        )
        answer = generate_answer(
            oe_prompt(item, ctx), client, TaskKind.OPEN_ENDED, item.difficulty
        )
        coverage = keypoint_coverage(item, answer, judge)
        coverages.append(coverage)
        detail.append({"id": item.id, "coverage": coverage})
    return mean_coverage(coverages), tuple(detail)


def run_grid(
    items: Sequence[Union[McqItem, OeItem]],
    retriever: DocumentRetriever,
    client: GenerativeModelClient,
    judge: KeypointJudge | None = None,
    strategies: Sequence[RetrievalStrategy] = tuple(RetrievalStrategy),
    irs: Sequence[int] = DEFAULT_IRS,
    ks: Sequence[int] = DEFAULT_KS,
    model_label: str = "model",
) -> GridResult:
    """Evaluate the baseline plus every (strategy, IR, k) cell.

    ``judge`` is required for open-ended items. Cell failures are recorded
    on the cell, never aborting the sweep.
    """
    if not items:
        raise EmptyInputError("no task items")
    is_mcq = isinstance(items[0], McqItem)
    if not is_mcq and judge is None:
        raise ValueError("open-ended evaluation requires a judge")

    def evaluate(config: RetrievalConfig | None, use_retriever: bool):
        active = retriever if use_retriever else None
        if is_mcq:
            return _evaluate_mcq(items, active, config, client)
        return _evaluate_oe(items, active, config, client, judge)

    base_metric, base_detail = evaluate(None, use_retriever=False)
    result = GridResult(
        model_label=model_label,
        task_format="mcq" if is_mcq else "oe",
        baseline=GridCell(key=BASELINE_KEY, metric=base_metric, per_item=base_detail),
    )
    for strategy in strategies:
        for ir in irs:
            for k in ks:
                key = cell_key(strategy, ir, k)
                try:
                    config = RetrievalConfig(strategy, pool_size=ir, rerank_k=k)
                    metric, detail = evaluate(config, use_retriever=True)
                    result.cells[key] = GridCell(key=key, metric=metric, per_item=detail)
                except Exception as exc:  # noqa: BLE001 - sweep must continue
                    result.cells[key] = GridCell(key=key, metric=None, error=str(exc))
    return result
