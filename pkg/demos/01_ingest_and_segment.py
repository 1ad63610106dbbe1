#!/usr/bin/env python3
"""Walk through ingestion: raw git dump -> artifacts -> sentences.

Run from the repository root:  python demos/01_ingest_and_segment.py
"""

from pathlib import Path

from rdgraph import normalized_text, parse_git_log, segment_sentences

dump = Path("fixtures/oom/oom-commits.dump").read_text(encoding="utf-8")
artifacts = parse_git_log(dump)

print(f"parsed {len(artifacts)} commits\n")
for artifact in artifacts:
    print(f"{artifact.id[:12]}  {artifact.timestamp.date()}  {artifact.author}")
    print(f"  summary : {artifact.summary}")
    for key, values in artifact.trailers.items():
        for value in values:
            print(f"  trailer : {key}: {value}")
    print()

# Sentences carry offsets into the artifact's normalized text, so every
# downstream span can be traced back to the exact characters it came from.
third = artifacts[2]
text = normalized_text(third)
print(f"sentences of {third.summary!r}:")
for sentence in segment_sentences(third):
    assert text[sentence.start : sentence.end] == sentence.text
    preview = sentence.text.replace("\n", " ")
    print(f"  [{sentence.index}] ({sentence.start:4d}-{sentence.end:4d}) {preview}")
