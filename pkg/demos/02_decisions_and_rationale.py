#!/usr/bin/env python3
"""Watch the decision scorer and the rationale markers at work.

Run from the repository root:  python demos/02_decisions_and_rationale.py
"""

from pathlib import Path

from rdgraph import default_config, extract_decisions, parse_git_log, segment_sentences
from rdgraph.decisions import is_summary_sentence, score_decision
from rdgraph.pipeline import lexicon_from_config
from rdgraph.rationale import attach_rationale

config = default_config()
lexicon = lexicon_from_config(config)
dump = Path("fixtures/oom/oom-commits.dump").read_text(encoding="utf-8")

for artifact in parse_git_log(dump):
    sentences = segment_sentences(artifact, config.abbreviations)
    print(artifact.summary)
    for sentence in sentences:
        score = score_decision(sentence, lexicon, is_summary_sentence(artifact, sentence))
        tag = "decision" if score >= config.thresholds.decision else "        "
        preview = sentence.text.replace("\n", " ")[:64]
        print(f"  {score:.2f} {tag} {preview}")

    decisions = extract_decisions(artifact, sentences, lexicon, config.thresholds.decision)
    for decision in decisions:
        # The decision's own sentence is searched first; without a marker
        # there, up to `window` neighboring sentences are scanned.
        for span in attach_rationale(decision, sentences, config.window, config.markers):
            where = "same sentence" if span.same_sentence else "nearby sentence"
            print(f"       -> {span.role} ({where}, marker {span.marker!r}):")
            print(f"          {span.text!r}")
    print()

print("note: the third commit records no extractable rationale, and that is")
print("expected; its reasoning lives in sentences no marker pattern covers.")
