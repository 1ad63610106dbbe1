"""Graph validation: rationale consistency, new-decision conflicts, structure.

All checks are pure read-only queries; findings are reported, never
auto-repaired.  Findings sort by severity (errors first), then subject ids,
and serialize to JSON lines for CI consumption.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .graph import GraphError, RdGraph, _check_history_acyclic, rationales_of
from .relations import (
    CONTRADICTS,
    EDGE_KINDS,
    HISTORY,
    SIMILAR,
    RelationEdge,
    contradiction_score,
    decision_document,
)
from .textsim import SimilarityProvider

INCONSISTENT_REASONING = "inconsistent-reasoning"
DUPLICATE_RATIONALE = "duplicate-rationale"
CONSISTENT_PAIR = "consistent-pair"
CONFLICT_WARNING = "conflict-warning"
STRUCTURAL_VIOLATION = "structural-violation"
LOW_SIMILARITY = "low-similarity"
MISSING_RATIONALE = "missing-rationale"

_SEVERITY_RANK = {"error": 0, "warning": 1, "info": 2}


@dataclass(frozen=True)
class ValidationFinding:
    """One report entry with an explanation path of graph edges."""

    kind: str
    severity: str
    subject_ids: tuple[str, ...]
    path: tuple[RelationEdge, ...]
    message: str

    def __post_init__(self) -> None:
        if not self.message:
            raise ValueError("finding message must be non-empty")
        if self.severity not in _SEVERITY_RANK:
            raise ValueError(f"unknown severity {self.severity!r}")


def _sorted_findings(findings: list[ValidationFinding]) -> list[ValidationFinding]:
    return sorted(
        findings,
        key=lambda f: (_SEVERITY_RANK[f.severity], f.subject_ids, f.kind, f.message),
    )


def _joined_rationale(graph: RdGraph, decision_id: str) -> str:
    return " ".join(span.text for span in rationales_of(graph, decision_id))


def check_rationale_consistency(
    graph: RdGraph,
    provider: SimilarityProvider,
    consistency_threshold: float = 0.2,
    duplicate_threshold: float = 0.9,
    keywords: frozenset[str] = frozenset({"revert", "remove", "disable"}),
    negation_cues: frozenset[str] = frozenset({"no", "not", "never", "n't"}),
    stopwords: frozenset[str] = frozenset(),
) -> list[ValidationFinding]:
    """Compare the rationales of every similar decision pair.

    Contradicting rationales signal inconsistent reasoning; near-identical
    ones signal the same rationale reused for different decisions.  The
    provider must be built over the graph's rationale texts.
    """
    findings: list[ValidationFinding] = []
    for edge in graph.relation_edges:
        if edge.kind != SIMILAR:
            continue
        subjects = tuple(sorted((edge.from_id, edge.to_id)))
        text_a = _joined_rationale(graph, edge.from_id)
        text_b = _joined_rationale(graph, edge.to_id)
        if not text_a or not text_b:
            missing = [
                d for d, t in ((edge.from_id, text_a), (edge.to_id, text_b)) if not t
            ]
            findings.append(
                ValidationFinding(
                    kind=MISSING_RATIONALE,
                    severity="info",
                    subject_ids=subjects,
                    path=(edge,),
                    message=(
                        "similar pair skipped, no rationale recorded for "
                        + ", ".join(missing)
                    ),
                )
            )
            continue
        contra, _ = contradiction_score(
            text_a, text_b, keywords, negation_cues, stopwords
        )
        contra_rev, _ = contradiction_score(
            text_b, text_a, keywords, negation_cues, stopwords
        )
        if max(contra, contra_rev) > 0.0:
            findings.append(
                ValidationFinding(
                    kind=INCONSISTENT_REASONING,
                    severity="warning",
                    subject_ids=subjects,
                    path=(edge,),
                    message=(
                        f"rationales of similar decisions {subjects[0]} and "
                        f"{subjects[1]} contradict each other"
                    ),
                )
            )
            continue
        score = provider.score(text_a, text_b)
        if score >= duplicate_threshold:
            kind, message = DUPLICATE_RATIONALE, (
                f"decisions {subjects[0]} and {subjects[1]} share the same "
                f"rationale (similarity {score:.2f})"
            )
        elif score >= consistency_threshold:
            kind, message = CONSISTENT_PAIR, (
                f"rationales of {subjects[0]} and {subjects[1]} are consistent "
                f"(similarity {score:.2f})"
            )
        else:
            kind, message = LOW_SIMILARITY, (
                f"rationales of {subjects[0]} and {subjects[1]} share little "
                f"vocabulary (similarity {score:.2f})"
            )
        findings.append(
            ValidationFinding(
                kind=kind,
                severity="info",
                subject_ids=subjects,
                path=(edge,),
                message=message,
            )
        )
    return _sorted_findings(findings)


def graph_documents(graph: RdGraph) -> dict[str, str]:
    """The per-decision comparison documents reconstructible from the graph."""
    return {
        decision_id: decision_document(
            graph.decisions[decision_id], rationales_of(graph, decision_id)
        )
        for decision_id in sorted(graph.decisions)
    }


def check_new_decision(
    graph: RdGraph,
    candidate_text: str,
    provider: SimilarityProvider,
    similar_threshold: float = 0.25,
    k: int = 2,
) -> list[ValidationFinding]:
    """Warn when a proposed decision resembles one entangled in contradictions.

    The provider must be built over the graph decision documents plus the
    candidate.  One hop is spent linking the candidate to a similar decision;
    the remaining k-1 hops walk similar neighbors and contradicts edges.
    """
    findings: list[ValidationFinding] = []
    documents = graph_documents(graph)
    for decision_id in sorted(graph.decisions):
        decision = graph.decisions[decision_id]
        score = provider.score(candidate_text, documents[decision_id])
        if score >= 0.999:
            findings.append(
                ValidationFinding(
                    kind=DUPLICATE_RATIONALE,
                    severity="warning",
                    subject_ids=(decision_id,),
                    path=(),
                    message=(
                        f"candidate duplicates decision {decision_id} "
                        f"({decision.text!r}, {decision.timestamp.date()})"
                    ),
                )
            )
            continue
        if score < similar_threshold:
            continue
        targets: list[tuple[str, tuple[RelationEdge, ...]]] = [(decision_id, ())]
        for edge in graph.relation_edges:
            if edge.kind != SIMILAR:
                continue
            if edge.from_id == decision_id:
                targets.append((edge.to_id, (edge,)))
            elif edge.to_id == decision_id:
                targets.append((edge.from_id, (edge,)))
        for target_id, prefix in targets:
            for edge in graph.relation_edges:
                if edge.kind != CONTRADICTS:
                    continue
                if target_id not in (edge.from_id, edge.to_id):
                    continue
                path = prefix + (edge,)
                if 1 + len(path) > k:
                    continue
                target = graph.decisions[target_id]
                findings.append(
                    ValidationFinding(
                        kind=CONFLICT_WARNING,
                        severity="warning",
                        subject_ids=tuple(
                            sorted({decision_id, edge.from_id, edge.to_id})
                        ),
                        path=path,
                        message=(
                            f"candidate resembles {decision_id} "
                            f"({decision.text!r}, similarity {score:.2f}); "
                            f"decision {edge.from_id} "
                            f"({graph.decisions[edge.from_id].text!r}, "
                            f"{graph.decisions[edge.from_id].timestamp.date()}) "
                            f"contradicts {edge.to_id} of "
                            f"{graph.decisions[edge.to_id].timestamp.date()}"
                            + (
                                f" via similar decision {target_id} "
                                f"({target.text!r})"
                                if prefix
                                else ""
                            )
                        ),
                    )
                )
    return _sorted_findings(findings)


def validate_structure(graph: RdGraph) -> list[ValidationFinding]:
    """Report every broken graph invariant as a structural violation."""

    def violation(subjects: tuple[str, ...], message: str) -> ValidationFinding:
        return ValidationFinding(
            kind=STRUCTURAL_VIOLATION,
            severity="error",
            subject_ids=subjects,
            path=(),
            message=message,
        )

    findings: list[ValidationFinding] = []

    membership: dict[str, int] = {}
    for topic in graph.topics.values():
        if not topic.member_decision_ids:
            findings.append(violation((topic.id,), f"topic {topic.id} has no members"))
        for member in topic.member_decision_ids:
            membership[member] = membership.get(member, 0) + 1
            if member not in graph.decisions:
                findings.append(
                    violation(
                        (topic.id, member),
                        f"topic {topic.id} references missing decision {member}",
                    )
                )
    for decision_id in sorted(graph.decisions):
        count = membership.get(decision_id, 0)
        if count != 1:
            findings.append(
                violation(
                    (decision_id,),
                    f"decision {decision_id} belongs to {count} topics, expected 1",
                )
            )

    for span_id in sorted(graph.rationales):
        span = graph.rationales[span_id]
        if span.decision_id not in graph.decisions:
            findings.append(
                violation(
                    (span_id,),
                    f"rationale {span_id} references missing decision {span.decision_id}",
                )
            )

    for decision_id in sorted(graph.decisions):
        decision = graph.decisions[decision_id]
        source = graph.sources.get(graph.source_edges.get(decision_id, ""))
        if source is None:
            source = graph.sources.get(decision.artifact_id)
        if source is None:
            findings.append(
                violation((decision_id,), f"decision {decision_id} has no source")
            )
        elif source.uri != decision.source_uri:
            findings.append(
                violation(
                    (decision_id, source.id),
                    f"decision {decision_id} source uri {decision.source_uri!r} "
                    f"does not match source {source.uri!r}",
                )
            )

    seen: set[tuple[str, str, str]] = set()
    for edge in graph.relation_edges:
        key = (edge.kind, edge.from_id, edge.to_id)
        subjects = (edge.from_id, edge.to_id)
        if edge.kind not in EDGE_KINDS:
            findings.append(violation(subjects, f"unknown edge kind {edge.kind!r}"))
            continue
        if key in seen:
            findings.append(violation(subjects, f"duplicate edge {key}"))
        seen.add(key)
        if edge.from_id == edge.to_id:
            findings.append(violation(subjects, f"self edge on {edge.from_id}"))
            continue
        dangling = [d for d in (edge.from_id, edge.to_id) if d not in graph.decisions]
        if dangling:
            findings.append(
                violation(
                    subjects,
                    f"{edge.kind} edge references missing decisions {dangling}",
                )
            )
            continue
        if not 0.0 <= edge.score <= 1.0:
            findings.append(
                violation(subjects, f"edge score {edge.score} outside [0, 1]")
            )
        if edge.kind == SIMILAR and edge.from_id > edge.to_id:
            findings.append(
                violation(subjects, "similar edge is not in canonical order")
            )
        if edge.kind in (HISTORY, CONTRADICTS):
            from_ts = graph.decisions[edge.from_id].timestamp
            to_ts = graph.decisions[edge.to_id].timestamp
            if from_ts <= to_ts:
                findings.append(
                    violation(
                        subjects,
                        f"{edge.kind} edge does not run later -> earlier",
                    )
                )

    try:
        _check_history_acyclic(
            e
            for e in graph.relation_edges
            if e.from_id in graph.decisions and e.to_id in graph.decisions
        )
    except GraphError as exc:
        findings.append(violation((), str(exc)))

    return _sorted_findings(findings)


def finding_to_dict(finding: ValidationFinding) -> dict:
    return {
        "kind": finding.kind,
        "severity": finding.severity,
        "subjects": list(finding.subject_ids),
        "path": [
            {"kind": e.kind, "from": e.from_id, "to": e.to_id, "score": e.score}
            for e in finding.path
        ],
        "message": finding.message,
    }


def findings_to_jsonl(findings: list[ValidationFinding]) -> str:
    lines = [
        json.dumps(finding_to_dict(f), sort_keys=True, ensure_ascii=False)
        for f in findings
    ]
    return "\n".join(lines) + ("\n" if lines else "")


def render_findings(findings: list[ValidationFinding]) -> str:
    if not findings:
        return "no findings\n"
    lines = []
    for finding in findings:
        subjects = ", ".join(finding.subject_ids)
        lines.append(
            f"{finding.severity.upper():7s} {finding.kind} [{subjects}] {finding.message}"
        )
    return "\n".join(lines) + "\n"
