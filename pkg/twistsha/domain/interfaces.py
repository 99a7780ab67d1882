"""Domain interfaces - contracts for persistence and external facts."""

from abc import ABC, abstractmethod

from twistsha.domain.models import FactsFile, FormId
from twistsha.domain.qseries import QSeries


class CoefficientStore(ABC):
    """Interface for persisted integral q-expansions."""

    @abstractmethod
    def load(self, form: FormId, prec: int) -> QSeries | None:
        """Returns the expansion through q^prec, or None when not stored."""
        pass

    @abstractmethod
    def save(self, form: FormId, series: QSeries) -> None:
        """Stores an integral expansion."""
        pass


class FactsSource(ABC):
    """Interface for externally asserted facts."""

    @abstractmethod
    def load(self) -> FactsFile:
        """Loads and validates the facts."""
        pass
