"""The decision/rationale graph store: typed nodes, queries, persistence.

Persistence is a single JSON document (schema version ``rdg_version: 1``)
with top-level arrays ``decisions, rationales, topics, sources, edges``.
Keys are emitted in alphabetical order and every array is sorted, so equal
graphs serialize to identical bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .corpus import format_timestamp, parse_timestamp
from .decisions import Decision
from .rationale import RationaleSpan
from .relations import (
    CONTRADICTS,
    EDGE_KINDS,
    HISTORY,
    SIMILAR,
    Evidence,
    RelationEdge,
    Topic,
)

RDG_VERSION = 1

RATIONALE_KIND = "rationale"
TOPIC_KIND = "topic"
ALL_KINDS = frozenset(EDGE_KINDS) | {RATIONALE_KIND, TOPIC_KIND}

_NODE_SHAPES = {
    "decision": "box",
    "rationale": "ellipse",
    "topic": "folder",
    "source": "note",
}


class GraphError(ValueError):
    """Raised for inconsistent graph inputs or malformed graph files."""


@dataclass(frozen=True)
class SourceRef:
    """Traceability anchor: where a decision's artifact came from."""

    id: str
    uri: str
    artifact_kind: str

    def __post_init__(self) -> None:
        if not self.uri:
            raise ValueError("source uri must be non-empty")


@dataclass(frozen=True)
class Subgraph:
    decision_ids: frozenset[str]
    rationale_ids: frozenset[str]
    topic_ids: frozenset[str]
    edges: tuple[RelationEdge, ...]


@dataclass(frozen=True)
class RdGraph:
    decisions: dict[str, Decision]
    rationales: dict[str, RationaleSpan]
    topics: dict[str, Topic]
    sources: dict[str, SourceRef]
    relation_edges: tuple[RelationEdge, ...]
    rationale_edges: dict[str, tuple[str, ...]] = field(default_factory=dict)
    topic_edges: dict[str, str] = field(default_factory=dict)
    source_edges: dict[str, str] = field(default_factory=dict)


def _edge_sort_key(edge: RelationEdge) -> tuple[str, str, str]:
    return (edge.kind, edge.from_id, edge.to_id)


def _check_history_acyclic(edges: Iterable[RelationEdge]) -> None:
    adjacency: dict[str, list[str]] = {}
    for edge in edges:
        if edge.kind == HISTORY:
            adjacency.setdefault(edge.from_id, []).append(edge.to_id)
    WHITE, GRAY, BLACK = 0, 1, 2
    color: dict[str, int] = {}
    for start in sorted(adjacency):
        if color.get(start, WHITE) != WHITE:
            continue
        stack: list[tuple[str, int]] = [(start, 0)]
        trail = [start]
        color[start] = GRAY
        while stack:
            node, child_index = stack[-1]
            children = sorted(adjacency.get(node, []))
            if child_index < len(children):
                stack[-1] = (node, child_index + 1)
                child = children[child_index]
                state = color.get(child, WHITE)
                if state == GRAY:
                    cycle = trail[trail.index(child) :] + [child]
                    raise GraphError(
                        "history edges form a cycle: " + " -> ".join(cycle)
                    )
                if state == WHITE:
                    color[child] = GRAY
                    stack.append((child, 0))
                    trail.append(child)
            else:
                color[node] = BLACK
                stack.pop()
                trail.pop()


def build_graph(
    decisions: Iterable[Decision],
    rationales: Iterable[RationaleSpan],
    topics: Iterable[Topic],
    relation_edges: Iterable[RelationEdge],
    sources: Iterable[SourceRef] | None = None,
) -> RdGraph:
    """Assemble and fully check a graph; raises GraphError on any violation."""
    decision_map: dict[str, Decision] = {}
    for decision in sorted(decisions, key=lambda d: d.id):
        if decision.id in decision_map:
            raise GraphError(f"duplicate decision id {decision.id!r}")
        decision_map[decision.id] = decision

    rationale_map: dict[str, RationaleSpan] = {}
    rationale_edges: dict[str, list[str]] = {}
    for span in sorted(rationales, key=lambda s: s.id):
        if span.id in rationale_map:
            raise GraphError(f"duplicate rationale id {span.id!r}")
        if span.decision_id not in decision_map:
            raise GraphError(
                f"rationale {span.id!r} references missing decision {span.decision_id!r}"
            )
        rationale_map[span.id] = span
        rationale_edges.setdefault(span.decision_id, []).append(span.id)

    topic_map: dict[str, Topic] = {}
    topic_edges: dict[str, str] = {}
    for topic in sorted(topics, key=lambda t: t.id):
        if topic.id in topic_map:
            raise GraphError(f"duplicate topic id {topic.id!r}")
        if not topic.member_decision_ids:
            raise GraphError(f"topic {topic.id!r} has no members")
        topic_map[topic.id] = topic
        for member in topic.member_decision_ids:
            if member not in decision_map:
                raise GraphError(
                    f"topic {topic.id!r} references missing decision {member!r}"
                )
            if member in topic_edges:
                raise GraphError(f"decision {member!r} belongs to more than one topic")
            topic_edges[member] = topic.id
    missing_topic = sorted(set(decision_map) - set(topic_edges))
    if missing_topic:
        raise GraphError(f"decisions without a topic: {missing_topic}")

    if sources is None:
        derived: dict[str, SourceRef] = {}
        for decision in decision_map.values():
            existing = derived.get(decision.artifact_id)
            if existing is not None and existing.uri != decision.source_uri:
                raise GraphError(
                    f"conflicting source uris for artifact {decision.artifact_id!r}"
                )
            derived[decision.artifact_id] = SourceRef(
                id=decision.artifact_id, uri=decision.source_uri, artifact_kind="other"
            )
        source_map = {k: derived[k] for k in sorted(derived)}
    else:
        source_map = {}
        for source in sorted(sources, key=lambda s: s.id):
            if source.id in source_map:
                raise GraphError(f"duplicate source id {source.id!r}")
            source_map[source.id] = source

    source_edges: dict[str, str] = {}
    for decision in decision_map.values():
        source = source_map.get(decision.artifact_id)
        if source is None:
            raise GraphError(
                f"decision {decision.id!r} has no source for artifact {decision.artifact_id!r}"
            )
        if source.uri != decision.source_uri:
            raise GraphError(
                f"decision {decision.id!r} source uri {decision.source_uri!r} "
                f"does not match source {source.uri!r}"
            )
        source_edges[decision.id] = source.id

    canonical: list[RelationEdge] = []
    seen_edges: set[tuple[str, str, str]] = set()
    for edge in relation_edges:
        if edge.kind not in EDGE_KINDS:
            raise GraphError(f"unknown edge kind {edge.kind!r}")
        if edge.from_id not in decision_map or edge.to_id not in decision_map:
            raise GraphError(
                f"{edge.kind} edge references missing decision "
                f"{edge.from_id!r} or {edge.to_id!r}"
            )
        if edge.from_id == edge.to_id:
            raise GraphError(f"self edge on {edge.from_id!r}")
        if not 0.0 <= edge.score <= 1.0:
            raise GraphError(f"edge score {edge.score} outside [0, 1]")
        if edge.kind == SIMILAR and edge.from_id > edge.to_id:
            edge = RelationEdge(
                kind=edge.kind,
                from_id=edge.to_id,
                to_id=edge.from_id,
                score=edge.score,
                evidence=edge.evidence,
            )
        if edge.kind in (HISTORY, CONTRADICTS):
            from_ts = decision_map[edge.from_id].timestamp
            to_ts = decision_map[edge.to_id].timestamp
            if from_ts <= to_ts:
                raise GraphError(
                    f"{edge.kind} edge {edge.from_id!r} -> {edge.to_id!r} "
                    "must run from the later decision to the earlier one"
                )
        key = (edge.kind, edge.from_id, edge.to_id)
        if key in seen_edges:
            raise GraphError(f"duplicate edge {key}")
        seen_edges.add(key)
        canonical.append(edge)
    canonical.sort(key=_edge_sort_key)
    _check_history_acyclic(canonical)

    return RdGraph(
        decisions=decision_map,
        rationales=rationale_map,
        topics=topic_map,
        sources=source_map,
        relation_edges=tuple(canonical),
        rationale_edges={
            k: tuple(sorted(v)) for k, v in sorted(rationale_edges.items())
        },
        topic_edges={k: topic_edges[k] for k in sorted(topic_edges)},
        source_edges={k: source_edges[k] for k in sorted(source_edges)},
    )


def rationales_of(graph: RdGraph, decision_id: str) -> list[RationaleSpan]:
    return [graph.rationales[rid] for rid in graph.rationale_edges.get(decision_id, ())]


def neighbors(
    graph: RdGraph, decision_id: str, kinds: frozenset[str] | set[str]
) -> list[tuple[RelationEdge, Decision]]:
    """Edges of the requested kinds incident to a decision, with the peer.

    Similar edges are treated as bidirectional; history and contradicts
    edges count in both directions.
    """
    if decision_id not in graph.decisions:
        raise GraphError(f"unknown decision id {decision_id!r}")
    found = []
    for edge in graph.relation_edges:
        if edge.kind not in kinds:
            continue
        if edge.from_id == decision_id:
            found.append((edge, graph.decisions[edge.to_id]))
        elif edge.to_id == decision_id:
            found.append((edge, graph.decisions[edge.from_id]))
    found.sort(key=lambda pair: (pair[0].kind, pair[1].id))
    return found


def k_hop(
    graph: RdGraph,
    decision_id: str,
    k: int,
    kinds: frozenset[str] | set[str] = ALL_KINDS,
) -> Subgraph:
    """Nodes and edges reachable within k hops over the given edge kinds.

    Decisions connect through relation edges; ``rationale`` and ``topic``
    kinds hop to the owned rationale nodes and the owning topic.  k = 0
    yields the start node alone.
    """
    if decision_id not in graph.decisions:
        raise GraphError(f"unknown decision id {decision_id!r}")
    if k < 0:
        raise ValueError("k must be >= 0")

    start = ("decision", decision_id)
    frontier = {start}
    visited = {start}
    for _ in range(k):
        next_frontier: set[tuple[str, str]] = set()
        for node_kind, node_id in frontier:
            for peer in _adjacent(graph, node_kind, node_id, kinds):
                if peer not in visited:
                    visited.add(peer)
                    next_frontier.add(peer)
        if not next_frontier:
            break
        frontier = next_frontier

    decision_ids = frozenset(i for kind, i in visited if kind == "decision")
    edges = tuple(
        sorted(
            (
                e
                for e in graph.relation_edges
                if e.kind in kinds
                and e.from_id in decision_ids
                and e.to_id in decision_ids
            ),
            key=_edge_sort_key,
        )
    )
    return Subgraph(
        decision_ids=decision_ids,
        rationale_ids=frozenset(i for kind, i in visited if kind == "rationale"),
        topic_ids=frozenset(i for kind, i in visited if kind == "topic"),
        edges=edges,
    )


def _adjacent(
    graph: RdGraph, node_kind: str, node_id: str, kinds: frozenset[str] | set[str]
) -> list[tuple[str, str]]:
    peers: list[tuple[str, str]] = []
    if node_kind == "decision":
        for edge in graph.relation_edges:
            if edge.kind not in kinds:
                continue
            if edge.from_id == node_id:
                peers.append(("decision", edge.to_id))
            elif edge.to_id == node_id:
                peers.append(("decision", edge.from_id))
        if RATIONALE_KIND in kinds:
            peers.extend(
                ("rationale", rid) for rid in graph.rationale_edges.get(node_id, ())
            )
        if TOPIC_KIND in kinds and node_id in graph.topic_edges:
            peers.append(("topic", graph.topic_edges[node_id]))
    elif node_kind == "rationale" and RATIONALE_KIND in kinds:
        peers.append(("decision", graph.rationales[node_id].decision_id))
    elif node_kind == "topic" and TOPIC_KIND in kinds:
        peers.extend(
            ("decision", member)
            for member in graph.topics[node_id].member_decision_ids
        )
    return peers


def _decision_to_dict(decision: Decision) -> dict:
    return {
        "artifact_id": decision.artifact_id,
        "author": decision.author,
        "files_touched": list(decision.files_touched),
        "id": decision.id,
        "score": decision.score,
        "source_uri": decision.source_uri,
        "text": decision.text,
        "timestamp": format_timestamp(decision.timestamp),
    }


def _rationale_to_dict(span: RationaleSpan) -> dict:
    return {
        "artifact_id": span.artifact_id,
        "decision_id": span.decision_id,
        "end": span.end,
        "id": span.id,
        "marker": span.marker,
        "role": span.role,
        "same_sentence": span.same_sentence,
        "start": span.start,
        "text": span.text,
    }


def save(graph: RdGraph) -> str:
    """Serialize to the canonical JSON graph document."""
    doc = {
        "rdg_version": RDG_VERSION,
        "decisions": [
            _decision_to_dict(graph.decisions[i]) for i in sorted(graph.decisions)
        ],
        "rationales": [
            _rationale_to_dict(graph.rationales[i]) for i in sorted(graph.rationales)
        ],
        "topics": [
            {
                "id": t.id,
                "members": list(t.member_decision_ids),
                "title": t.title,
            }
            for t in (graph.topics[i] for i in sorted(graph.topics))
        ],
        "sources": [
            {"artifact_kind": s.artifact_kind, "id": s.id, "uri": s.uri}
            for s in (graph.sources[i] for i in sorted(graph.sources))
        ],
        "edges": [
            {
                "evidence": [
                    {"detail": e.detail, "feature": e.feature, "weight": e.weight}
                    for e in edge.evidence
                ],
                "from": edge.from_id,
                "kind": edge.kind,
                "score": edge.score,
                "to": edge.to_id,
            }
            for edge in sorted(graph.relation_edges, key=_edge_sort_key)
        ],
    }
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _expect(obj: Mapping, key: str, types: type | tuple, path: str):
    if key not in obj:
        raise GraphError(f"{path}: missing key {key!r}")
    value = obj[key]
    if not isinstance(value, types):
        raise GraphError(f"{path}.{key}: unexpected type {type(value).__name__}")
    return value


def load(text: str) -> RdGraph:
    """Parse and validate a graph document; structural checks all apply."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphError(f"graph file is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise GraphError("graph file: top level must be an object")
    version = _expect(doc, "rdg_version", int, "graph")
    if version != RDG_VERSION:
        raise GraphError(f"unsupported rdg_version {version}")

    decisions = []
    for n, obj in enumerate(_expect(doc, "decisions", list, "graph")):
        path = f"decisions[{n}]"
        if not isinstance(obj, dict):
            raise GraphError(f"{path}: expected object")
        files = _expect(obj, "files_touched", list, path)
        if not all(isinstance(f, str) for f in files):
            raise GraphError(f"{path}.files_touched: expected strings")
        try:
            timestamp = parse_timestamp(_expect(obj, "timestamp", str, path))
        except ValueError as exc:
            raise GraphError(f"{path}.timestamp: {exc}") from exc
        decisions.append(
            Decision(
                id=_expect(obj, "id", str, path),
                text=_expect(obj, "text", str, path),
                artifact_id=_expect(obj, "artifact_id", str, path),
                source_uri=_expect(obj, "source_uri", str, path),
                timestamp=timestamp,
                score=float(_expect(obj, "score", (int, float), path)),
                author=_expect(obj, "author", str, path),
                files_touched=tuple(files),
            )
        )

    rationales = []
    for n, obj in enumerate(_expect(doc, "rationales", list, "graph")):
        path = f"rationales[{n}]"
        if not isinstance(obj, dict):
            raise GraphError(f"{path}: expected object")
        rationales.append(
            RationaleSpan(
                id=_expect(obj, "id", str, path),
                decision_id=_expect(obj, "decision_id", str, path),
                artifact_id=_expect(obj, "artifact_id", str, path),
                role=_expect(obj, "role", str, path),
                marker=_expect(obj, "marker", str, path),
                text=_expect(obj, "text", str, path),
                start=_expect(obj, "start", int, path),
                end=_expect(obj, "end", int, path),
                same_sentence=_expect(obj, "same_sentence", bool, path),
            )
        )

    topics = []
    for n, obj in enumerate(_expect(doc, "topics", list, "graph")):
        path = f"topics[{n}]"
        if not isinstance(obj, dict):
            raise GraphError(f"{path}: expected object")
        members = _expect(obj, "members", list, path)
        if not all(isinstance(m, str) for m in members):
            raise GraphError(f"{path}.members: expected strings")
        topics.append(
            Topic(
                id=_expect(obj, "id", str, path),
                title=_expect(obj, "title", str, path),
                member_decision_ids=tuple(members),
            )
        )

    sources = []
    for n, obj in enumerate(_expect(doc, "sources", list, "graph")):
        path = f"sources[{n}]"
        if not isinstance(obj, dict):
            raise GraphError(f"{path}: expected object")
        try:
            sources.append(
                SourceRef(
                    id=_expect(obj, "id", str, path),
                    uri=_expect(obj, "uri", str, path),
                    artifact_kind=_expect(obj, "artifact_kind", str, path),
                )
            )
        except ValueError as exc:
            raise GraphError(f"{path}: {exc}") from exc

    edges = []
    for n, obj in enumerate(_expect(doc, "edges", list, "graph")):
        path = f"edges[{n}]"
        if not isinstance(obj, dict):
            raise GraphError(f"{path}: expected object")
        evidence = []
        for m, ev in enumerate(_expect(obj, "evidence", list, path)):
            ev_path = f"{path}.evidence[{m}]"
            if not isinstance(ev, dict):
                raise GraphError(f"{ev_path}: expected object")
            try:
                evidence.append(
                    Evidence(
                        feature=_expect(ev, "feature", str, ev_path),
                        detail=_expect(ev, "detail", str, ev_path),
                        weight=float(_expect(ev, "weight", (int, float), ev_path)),
                    )
                )
            except ValueError as exc:
                raise GraphError(f"{ev_path}: {exc}") from exc
        edges.append(
            RelationEdge(
                kind=_expect(obj, "kind", str, path),
                from_id=_expect(obj, "from", str, path),
                to_id=_expect(obj, "to", str, path),
                score=float(_expect(obj, "score", (int, float), path)),
                evidence=tuple(evidence),
            )
        )

    return build_graph(decisions, rationales, topics, edges, sources)


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")


def export_dot(graph: RdGraph) -> str:
    """Render the graph in plain DOT, deterministic and layout-free."""
    lines = ["digraph rdg {"]
    for decision_id in sorted(graph.decisions):
        decision = graph.decisions[decision_id]
        lines.append(
            f'  "{_dot_escape(decision_id)}" '
            f'[label="{_dot_escape(decision.text)}" shape={_NODE_SHAPES["decision"]}];'
        )
    for span_id in sorted(graph.rationales):
        span = graph.rationales[span_id]
        lines.append(
            f'  "{_dot_escape(span_id)}" '
            f'[label="{_dot_escape(span.text)}" shape={_NODE_SHAPES["rationale"]}];'
        )
    for topic_id in sorted(graph.topics):
        topic = graph.topics[topic_id]
        label = topic.title or topic.id
        lines.append(
            f'  "{_dot_escape(topic_id)}" '
            f'[label="{_dot_escape(label)}" shape={_NODE_SHAPES["topic"]}];'
        )
    for source_id in sorted(graph.sources):
        source = graph.sources[source_id]
        lines.append(
            f'  "{_dot_escape(source_id)}" '
            f'[label="{_dot_escape(source.uri)}" shape={_NODE_SHAPES["source"]}];'
        )
    for decision_id in sorted(graph.rationale_edges):
        for span_id in graph.rationale_edges[decision_id]:
            lines.append(
                f'  "{_dot_escape(decision_id)}" -> "{_dot_escape(span_id)}" '
                f'[label="rationale"];'
            )
    for decision_id in sorted(graph.topic_edges):
        lines.append(
            f'  "{_dot_escape(decision_id)}" -> '
            f'"{_dot_escape(graph.topic_edges[decision_id])}" [label="topic"];'
        )
    for decision_id in sorted(graph.source_edges):
        lines.append(
            f'  "{_dot_escape(decision_id)}" -> '
            f'"{_dot_escape(graph.source_edges[decision_id])}" [label="source"];'
        )
    for edge in sorted(graph.relation_edges, key=_edge_sort_key):
        attrs = f'label="{edge.kind}"'
        if edge.kind == SIMILAR:
            attrs += " dir=none"
        lines.append(
            f'  "{_dot_escape(edge.from_id)}" -> "{_dot_escape(edge.to_id)}" [{attrs}];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"
