"""Identify decision-carrying sentences with a deterministic lexicon scorer.

The default scorer is additive and clamped to [0, 1]:

* +0.6 when a summary sentence (after an optional ``subsys:`` prefix) opens
  with an action verb,
* +0.4 when a cue phrase occurs anywhere,
* +0.3 when a non-summary sentence opens with an action verb in base form,
* -0.5 when a negative cue occurs.

Any ``(sentence, artifact) -> [0, 1]`` callable can replace it through the
``scorer`` argument of :func:`extract_decisions`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import datetime
from typing import Callable

from .corpus import Artifact, Sentence

SUBSYSTEM_PREFIX_RE = re.compile(r"^[a-z0-9_, \-]+:\s*")
_FIRST_WORD_RE = re.compile(r"[a-z0-9_]+")

Scorer = Callable[[Sentence, Artifact], float]


@dataclass(frozen=True)
class DecisionLexicon:
    """Lowercase verb/phrase sets driving the default scorer."""

    action_verbs: frozenset[str]
    cue_phrases: frozenset[str]
    negative_cues: frozenset[str]

    def __post_init__(self) -> None:
        for name in ("action_verbs", "cue_phrases", "negative_cues"):
            values = getattr(self, name)
            if not values:
                raise ValueError(f"lexicon {name} must not be empty")
            if any(v != v.lower() for v in values):
                raise ValueError(f"lexicon {name} entries must be lowercase")


@dataclass(frozen=True)
class Decision:
    """An extracted decision sentence with provenance and score."""

    id: str
    text: str
    artifact_id: str
    source_uri: str
    timestamp: datetime
    score: float
    author: str
    files_touched: tuple[str, ...] = ()


def decision_id(artifact_id: str, sentence_index: int) -> str:
    return f"{artifact_id}#{sentence_index}"


def decision_sentence_index(decision_id_: str) -> int:
    """Recover the sentence index a decision id encodes."""
    _, _, index = decision_id_.rpartition("#")
    try:
        return int(index)
    except ValueError as exc:
        raise ValueError(f"malformed decision id {decision_id_!r}") from exc


def strip_subsystem_prefix(text: str) -> str:
    """Drop a leading ``mm, oom:``-style subsystem prefix, if any."""
    return SUBSYSTEM_PREFIX_RE.sub("", text, count=1)


def _opens_with_verb(text: str, verbs: frozenset[str]) -> bool:
    match = _FIRST_WORD_RE.search(text.lower())
    return bool(match) and match.group(0) in verbs and match.start() == 0


def score_decision(
    sentence: Sentence, lexicon: DecisionLexicon, is_summary: bool
) -> float:
    """Deterministic decision score for one sentence, clamped to [0, 1]."""
    lower = sentence.text.lower()
    score = 0.0
    if is_summary and _opens_with_verb(strip_subsystem_prefix(lower), lexicon.action_verbs):
        score += 0.6
    if any(phrase in lower for phrase in lexicon.cue_phrases):
        score += 0.4
    if not is_summary and _opens_with_verb(lower, lexicon.action_verbs):
        score += 0.3
    if any(cue in lower for cue in lexicon.negative_cues):
        score -= 0.5
    return min(1.0, max(0.0, score))


def is_summary_sentence(artifact: Artifact, sentence: Sentence) -> bool:
    return sentence.index == 0 and bool(artifact.summary) and sentence.start == 0


def extract_decisions(
    artifact: Artifact,
    sentences: list[Sentence],
    lexicon: DecisionLexicon,
    threshold: float,
    scorer: Scorer | None = None,
) -> list[Decision]:
    """One decision per sentence whose score reaches the threshold."""
    if any(s.artifact_id != artifact.id for s in sentences):
        raise ValueError("sentences do not belong to the given artifact")

    def default_scorer(sentence: Sentence, art: Artifact) -> float:
        return score_decision(sentence, lexicon, is_summary_sentence(art, sentence))

    score_fn = scorer if scorer is not None else default_scorer
    decisions = []
    for sentence in sentences:
        score = score_fn(sentence, artifact)
        if score >= threshold:
            decisions.append(
                Decision(
                    id=decision_id(artifact.id, sentence.index),
                    text=sentence.text,
                    artifact_id=artifact.id,
                    source_uri=artifact.uri,
                    timestamp=artifact.timestamp,
                    score=score,
                    author=artifact.author,
                )
            )
    return decisions
