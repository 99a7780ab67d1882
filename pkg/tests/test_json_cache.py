"""Tests for the JSON coefficient store."""

import json

import pytest
from pydantic import ValidationError

from twistsha.domain.forms import FORMULA_VERSION, kohnen_lift
from twistsha.domain.models import FormId
from twistsha.domain.qseries import QSeries
from twistsha.infrastructure.json_cache import CacheFile, JsonCoefficientStore


@pytest.fixture
def store(tmp_path):
    """Creates a store in a temporary directory."""
    return JsonCoefficientStore(tmp_path / "cache")


def test_save_and_load(store, tmp_path):
    """Tests that a stored expansion comes back at any lower precision."""
    series = kohnen_lift(40)
    store.save(FormId.KOHNEN_LIFT, series)

    assert store.load(FormId.KOHNEN_LIFT, 40) == series
    assert store.load(FormId.KOHNEN_LIFT, 9) == series.truncate(9)
    assert store.load(FormId.KOHNEN_LIFT, 41) is None
    assert store.load(FormId.DELTA, 5) is None

    document = json.loads((tmp_path / "cache" / "kohnen_lift.json").read_text())
    assert document["version"] == FORMULA_VERSION
    assert document["prec"] == 40
    assert document["coefficients"][4] == "-56"


def test_no_temporary_files_left(store, tmp_path):
    """Tests that writes go through a renamed temporary file."""
    store.save(FormId.DELTA, QSeries([0, 1, -24], 2))

    assert [p.name for p in (tmp_path / "cache").iterdir()] == ["delta.json"]


def test_longer_expansion_is_kept(store):
    """Tests that a shorter expansion never replaces a longer one."""
    store.save(FormId.DELTA, QSeries([0, 1, -24, 252], 3))
    store.save(FormId.DELTA, QSeries([0, 1], 1))

    assert store.load(FormId.DELTA, 3).to_integers() == [0, 1, -24, 252]


def test_version_mismatch_is_ignored(tmp_path):
    """Tests that a cache made under another lift formula is regenerated."""
    old = JsonCoefficientStore(tmp_path, version="kz-dilate-then-deriv-v0")
    old.save(FormId.KOHNEN_LIFT, QSeries([0, 1, 0, 0, 999], 4))
    current = JsonCoefficientStore(tmp_path)

    assert current.load(FormId.KOHNEN_LIFT, 4) is None

    current.save(FormId.KOHNEN_LIFT, kohnen_lift(4))
    assert current.load(FormId.KOHNEN_LIFT, 4).coeff(4) == -56


def test_corrupt_file_is_ignored(tmp_path):
    """Tests that an unreadable cache is treated as a miss."""
    (tmp_path / "delta.json").write_text("{not json", encoding="utf-8")

    assert JsonCoefficientStore(tmp_path).load(FormId.DELTA, 1) is None


def test_cache_file_validation():
    """Tests the coefficient count and integrality checks."""
    with pytest.raises(ValidationError):
        CacheFile(version=FORMULA_VERSION, form=FormId.DELTA, prec=2, coefficients=["0", "1"])
    with pytest.raises(ValidationError):
        CacheFile(version=FORMULA_VERSION, form=FormId.DELTA, prec=1, coefficients=["0", "x"])
