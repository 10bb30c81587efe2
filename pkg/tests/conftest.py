from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from helpers import FIG1_I, FIG1_J, contradictory, fig1  # noqa: E402


@pytest.fixture
def fig1_sample():
    return fig1()


@pytest.fixture
def contra_sample():
    return contradictory()


@pytest.fixture
def fig1_manifest(tmp_path) -> Path:
    (tmp_path / "fig1_I.facts").write_text(FIG1_I, encoding="utf-8")
    (tmp_path / "fig1_J.facts").write_text(FIG1_J, encoding="utf-8")
    manifest = tmp_path / "fig1.manifest"
    manifest.write_text(
        "facts = fig1_I.facts\npositive = a1 a2\n\n"
        "facts = fig1_J.facts\nnegative = b\n", encoding="utf-8")
    return manifest
