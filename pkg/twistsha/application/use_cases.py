"""Use cases - application layer orchestration."""

from twistsha.domain.interfaces import CoefficientStore, FactsSource
from twistsha.domain.models import (
    ConditionReport,
    FormId,
    PlusCoefficient,
    RatioCertificate,
    ScanRow,
    TableRow,
    Verdict,
)
from twistsha.domain.qseries import QSeries
from twistsha.domain.services import CertificationService, CoefficientService


class UseCases:
    """Main application use cases - orchestrates domain services."""

    def __init__(
        self,
        store: CoefficientStore | None = None,
        facts_source: FactsSource | None = None,
    ) -> None:
        self._store = store
        self._facts_source = facts_source

        # Initialize domain services
        self._coefficients = CoefficientService(store)
        self._certification = CertificationService(self._coefficients, facts_source)

    def expand(self, form: FormId, terms: int) -> QSeries:
        """Expansion of a named form through q^terms."""
        return self._coefficients.series(form, terms)

    def coefficient(self, n: int) -> PlusCoefficient:
        """Coefficient c_n of the plus-space lift of Delta."""
        return self._coefficients.plus_coeff(n)

    def table(self, p: int, i_from: int, i_to: int) -> list[TableRow]:
        """Factored coefficients c_{p*i}."""
        return self._coefficients.table(p, i_from, i_to)

    def check(
        self,
        p: int,
        d: int,
        form: FormId | None = FormId.DELTA,
        k: int | None = None,
        level: int | None = None,
        a_p: int | None = None,
    ) -> ConditionReport:
        """Evaluates conditions (A)-(D) for one twist."""
        ctx = self._coefficients.context(p, d, form, k, level, a_p)
        return self._certification.check(ctx)

    def ratio(self, p: int, d: int, d_prime: int) -> RatioCertificate:
        """Sha ratio valuation for two twists of Delta."""
        return self._certification.ratio(p, d, d_prime)

    def verdict(self, p: int, d: int, d_prime: int) -> Verdict:
        """Full class-group surjection certificate."""
        return self._certification.verdict(p, d, d_prime)

    def scan(self, p: int, max_d: int) -> list[ScanRow]:
        """Searches discriminants divisible by p for a positive ratio."""
        return self._certification.scan(p, max_d)
