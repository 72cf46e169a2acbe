"""Evaluation harness: MCQ accuracy, keypoint coverage, configuration sweeps."""

from .grid import GridCell, GridResult, run_grid
from .metrics import (
    ContainmentJudge,
    EmptyInputError,
    EmptyKeypointsError,
    KeypointJudge,
    LengthMismatchError,
    extract_mcq_answer,
    keypoint_coverage,
    mcq_accuracy,
    mean_coverage,
)
from .tasks import McqItem, OeItem, load_mcq_items, load_oe_items

__all__ = [
    "ContainmentJudge",
    "EmptyInputError",
    "EmptyKeypointsError",
    "GridCell",
    "GridResult",
    "KeypointJudge",
    "LengthMismatchError",
    "McqItem",
    "OeItem",
    "extract_mcq_answer",
    "keypoint_coverage",
    "load_mcq_items",
    "load_oe_items",
    "mcq_accuracy",
    "mean_coverage",
    "run_grid",
]
