"""Multi-path retrieval-augmented question answering over disaster information.

Requests are interpreted into a structured representation, routed to
document retrieval, guarded SQL access or web fallback, and answered with
branch-grounded evidence and provenance. Session memory keeps multi-turn
conversations coherent, and an evaluation harness sweeps retrieval
configurations.
"""

__version__ = "0.1.0"
