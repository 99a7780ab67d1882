"""Tests for FactsFile loading."""

import json
from pathlib import Path

import pytest

from twistsha.domain.errors import FactsFileError
from twistsha.domain.models import FactsFile
from twistsha.infrastructure.facts_file import JsonFactsSource

ELEVEN_FACTS = Path(__file__).resolve().parent.parent / "facts" / "delta_p11.json"
KEY = "tamagawa_equal_at_p:delta:11:33:517"


def _write(tmp_path, payload) -> Path:
    path = tmp_path / "facts.json"
    path.write_text(json.dumps(payload), encoding="utf-8")
    return path


def test_load_bundled_facts():
    """Tests the facts shipped for the p = 11 certificate."""
    facts = JsonFactsSource(ELEVEN_FACTS).load()

    assert len(facts) == 1
    assert facts.get(KEY).value is True
    assert facts.get(KEY).provenance


def test_load_valid_file(tmp_path):
    """Tests a file with several recognized facts."""
    path = _write(
        tmp_path,
        {
            "m_splits_at_p:k14N1:7": {"value": False, "provenance": "computed elsewhere"},
            "image_contains_sl2:x0_11:7": {"value": True, "provenance": "known image"},
        },
    )

    facts = JsonFactsSource(path).load()

    assert facts.get("m_splits_at_p:k14N1:7").value is False
    assert facts.get("missing") is None


@pytest.mark.parametrize(
    "payload",
    [
        {KEY: {"value": True, "provenance": ""}},
        {KEY: {"value": True, "provenance": "   "}},
        {KEY: {"value": True}},
        {KEY: {"value": "yes", "provenance": "source"}},
        {KEY: {"value": 1, "provenance": "source"}},
        {"unknown_fact:delta:11": {"value": True, "provenance": "source"}},
        {"m_splits_at_p:delta": {"value": True, "provenance": "source"}},
        {"tamagawa_equal_at_p:delta:11::517": {"value": True, "provenance": "source"}},
        [KEY],
    ],
)
def test_rejects_invalid_facts(tmp_path, payload):
    """Tests rejection of malformed entries."""
    with pytest.raises(FactsFileError):
        JsonFactsSource(_write(tmp_path, payload)).load()


def test_rejects_unreadable_files(tmp_path):
    """Tests missing and non-JSON files."""
    with pytest.raises(FactsFileError):
        JsonFactsSource(tmp_path / "absent.json").load()
    broken = tmp_path / "broken.json"
    broken.write_text("{", encoding="utf-8")
    with pytest.raises(FactsFileError):
        JsonFactsSource(broken).load()


def test_with_fact_is_persistent():
    """Tests that adding a fact returns a new FactsFile."""
    empty = FactsFile()
    extended = empty.with_fact(KEY, True, "source")

    assert len(empty) == 0
    assert len(extended) == 1
