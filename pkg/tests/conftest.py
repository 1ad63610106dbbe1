from __future__ import annotations

import pathlib

import pytest

from rdgraph import build_pipeline, default_config, parse_git_log

FIXTURE_DIR = pathlib.Path(__file__).resolve().parent.parent / "fixtures" / "oom"

# Fixture decision labels; ids are "<artifact sha1>#<sentence index>".
D1 = "74c1c924af837bc07a446bda67fda0161a4e1d65#0"
D2 = "120aa1cdaa6fc73e8b5d2cfed27738b376133ce7#0"
D3 = "b1203d42f776b472b810c73e5ec9325c2e106c67#0"
D4 = "8195b21df1fcc66dcc8ed04408463c8cf3781805#0"
D5 = "06b21c318b907df8d345f02c6a58a7b7d534634c#0"


@pytest.fixture(scope="session")
def config():
    return default_config()


@pytest.fixture(scope="session")
def fixture_dump() -> str:
    return (FIXTURE_DIR / "oom-commits.dump").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def fixture_artifacts(fixture_dump):
    return parse_git_log(fixture_dump)


@pytest.fixture(scope="session")
def fixture_graph(fixture_artifacts, config):
    return build_pipeline(fixture_artifacts, config)


@pytest.fixture(scope="session")
def fixture_graph_d1_d4(fixture_artifacts, config):
    return build_pipeline(fixture_artifacts[:4], config)
