"""FactsFile loading from JSON."""

import json
from pathlib import Path

import structlog
from pydantic import ValidationError

from twistsha.domain.errors import FactsFileError
from twistsha.domain.interfaces import FactsSource
from twistsha.domain.models import FactsFile

logger = structlog.get_logger()


class JsonFactsSource(FactsSource):
    """Reads `{key: {"value": bool, "provenance": str}}` documents."""

    def __init__(self, path: Path) -> None:
        self._path = path

    def load(self) -> FactsFile:
        try:
            raw = json.loads(self._path.read_text(encoding="utf-8"))
        except OSError as e:
            raise FactsFileError(f"cannot read facts file {self._path}: {e}") from e
        except json.JSONDecodeError as e:
            raise FactsFileError(f"facts file {self._path} is not JSON: {e}") from e

        if not isinstance(raw, dict):
            raise FactsFileError(f"facts file {self._path} must hold a JSON object")

        try:
            facts = FactsFile(entries=raw)
        except ValidationError as e:
            raise FactsFileError(f"invalid facts file {self._path}: {e}") from e

        logger.info("Facts file loaded", path=str(self._path), count=len(facts))
        return facts
