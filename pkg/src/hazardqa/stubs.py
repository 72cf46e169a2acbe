"""Deterministic offline generative client for demos and hermetic runs.

Combines fixture replay with two safe behaviors for prompts that have no
recording: rewrite prompts get an identity rewrite (the conversation's
latest question, verbatim), and generation prompts get an answer that
echoes the evidence lines visible in the prompt. Everything is a pure
function of the prompt text.
"""

from __future__ import annotations

import re

from .clients import ClientError, FixtureReplayClient

# marker emitted by the rewrite prompt template
_REWRITE_MARKER = "Latest question: "

_EVIDENCE_LINE = re.compile(r"^\[[^\]]+\] |^\w+=.+")


class EvidenceEchoClient:
    """Fixture replay first; identity rewrite and evidence echo otherwise."""

    def __init__(self, replay: FixtureReplayClient | None = None):
        self.replay = replay or FixtureReplayClient()

    def generate(self, prompt: str, temperature: float, max_output_tokens: int) -> str:
        try:
            return self.replay.generate(prompt, temperature, max_output_tokens)
        except ClientError:
            pass
        if _REWRITE_MARKER in prompt:
            return prompt.rsplit(_REWRITE_MARKER, 1)[-1]
        evidence = [
            line for line in prompt.splitlines() if _EVIDENCE_LINE.match(line)
        ]
        if evidence:
            return "Based on the retrieved evidence: " + " | ".join(evidence)
        return "I could not find grounded evidence for this request."
