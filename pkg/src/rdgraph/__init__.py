"""rdgraph: decision and rationale reconstruction from commit history.

Parses commit dumps into artifacts, extracts decision sentences and their
rationale spans, links decisions by topic/similar/history/contradicts, and
validates the resulting graph for inconsistent reasoning and conflicts with
newly proposed decisions.
"""

from .config import Config, ConfigError, default_config, load_config
from .corpus import (
    Artifact,
    CorpusError,
    Sentence,
    dumps_artifacts,
    normalized_text,
    parse_git_log,
    parse_jsonl,
    segment_sentences,
)
from .decisions import Decision, DecisionLexicon, extract_decisions, score_decision
from .graph import (
    GraphError,
    RdGraph,
    SourceRef,
    Subgraph,
    build_graph,
    export_dot,
    k_hop,
    load,
    neighbors,
    save,
)
from .pipeline import build_pipeline, lexicon_from_config
from .rationale import RationaleSpan, attach_rationale, extract_rationale
from .relations import (
    Evidence,
    RelationEdge,
    Topic,
    cluster_topics,
    contradiction_score,
    detect_contradicts,
    detect_history,
    detect_similar,
    title_topic,
)
from .textsim import (
    SimilarityProvider,
    TfIdfModel,
    TfIdfProvider,
    build_model,
    similarity,
    tokenize,
)
from .validate import (
    ValidationFinding,
    check_new_decision,
    check_rationale_consistency,
    validate_structure,
)

__version__ = "0.1.0"

__all__ = [
    "Artifact",
    "Config",
    "ConfigError",
    "CorpusError",
    "Decision",
    "DecisionLexicon",
    "Evidence",
    "GraphError",
    "RationaleSpan",
    "RdGraph",
    "RelationEdge",
    "Sentence",
    "SimilarityProvider",
    "SourceRef",
    "Subgraph",
    "TfIdfModel",
    "TfIdfProvider",
    "Topic",
    "ValidationFinding",
    "attach_rationale",
    "build_graph",
    "build_model",
    "build_pipeline",
    "check_new_decision",
    "check_rationale_consistency",
    "cluster_topics",
    "contradiction_score",
    "default_config",
    "detect_contradicts",
    "detect_history",
    "detect_similar",
    "dumps_artifacts",
    "extract_decisions",
    "extract_rationale",
    "export_dot",
    "k_hop",
    "lexicon_from_config",
    "load",
    "load_config",
    "neighbors",
    "normalized_text",
    "parse_git_log",
    "parse_jsonl",
    "save",
    "score_decision",
    "segment_sentences",
    "similarity",
    "title_topic",
    "tokenize",
    "validate_structure",
]
