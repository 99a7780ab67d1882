"""Versioned JSON store for integral q-expansions."""

import json
import os
import tempfile
from pathlib import Path

import structlog
from pydantic import BaseModel, Field, ValidationError, model_validator

from twistsha.domain.forms import FORMULA_VERSION
from twistsha.domain.interfaces import CoefficientStore
from twistsha.domain.models import FormId
from twistsha.domain.qseries import QSeries

logger = structlog.get_logger()


class CacheFile(BaseModel):
    """On-disk expansion of one form."""

    version: str = Field(..., description="Lift formula reading the data was made with")
    form: FormId = Field(..., description="Form tag")
    prec: int = Field(..., ge=0, description="Known through q^prec")
    coefficients: list[str] = Field(..., description="Decimal coefficients 0..prec")

    @model_validator(mode="after")
    def _complete(self) -> "CacheFile":
        if len(self.coefficients) != self.prec + 1:
            raise ValueError(
                f"{len(self.coefficients)} coefficients for precision {self.prec}"
            )
        for value in self.coefficients:
            int(value)
        return self

    def to_series(self, prec: int) -> QSeries:
        return QSeries([int(c) for c in self.coefficients], self.prec).truncate(prec)


class JsonCoefficientStore(CoefficientStore):
    """One `<form>.json` per form in a directory; the longest expansion wins."""

    def __init__(self, directory: Path, version: str = FORMULA_VERSION) -> None:
        self._directory = directory
        self._version = version

    def _path(self, form: FormId) -> Path:
        return self._directory / f"{form.value}.json"

    def _read(self, form: FormId) -> CacheFile | None:
        path = self._path(form)
        if not path.exists():
            return None
        try:
            cache = CacheFile.model_validate_json(path.read_text(encoding="utf-8"))
        except (OSError, ValidationError) as e:
            logger.warning("Unreadable cache file ignored", path=str(path), error=str(e))
            return None
        if cache.version != self._version or cache.form is not form:
            logger.info(
                "Stale cache file ignored",
                path=str(path),
                version=cache.version,
                expected=self._version,
            )
            return None
        return cache

    def load(self, form: FormId, prec: int) -> QSeries | None:
        cache = self._read(form)
        if cache is None or cache.prec < prec:
            logger.info("Cache miss", form=form.value, prec=prec)
            return None
        logger.info("Cache hit", form=form.value, prec=prec, stored=cache.prec)
        return cache.to_series(prec)

    def save(self, form: FormId, series: QSeries) -> None:
        existing = self._read(form)
        if existing is not None and existing.prec >= series.prec:
            return

        cache = CacheFile(
            version=self._version,
            form=form,
            prec=series.prec,
            coefficients=[str(c) for c in series.to_integers()],
        )
        self._directory.mkdir(parents=True, exist_ok=True)
        path = self._path(form)
        fd, tmp_name = tempfile.mkstemp(
            dir=self._directory, prefix=f".{form.value}.", suffix=".tmp"
        )
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as f:
                json.dump(cache.model_dump(mode="json"), f)
                f.write("\n")
            Path(tmp_name).replace(path)
        except BaseException:
            Path(tmp_name).unlink(missing_ok=True)
            raise
        logger.info("Cache written", form=form.value, prec=series.prec, path=str(path))
