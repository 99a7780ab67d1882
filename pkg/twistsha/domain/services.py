"""Domain services for coefficient access and certification."""

from typing import TYPE_CHECKING

import structlog

from twistsha.domain import bkratio, forms
from twistsha.domain.arith import render_factored, require_discriminant
from twistsha.domain.errors import InvalidInputError, SignConditionError
from twistsha.domain.hypotheses import check_conditions, tamagawa_triviality
from twistsha.domain.models import (
    ConditionReport,
    FactsFile,
    FormId,
    PlusCoefficient,
    RatioCertificate,
    ScanRow,
    TableRow,
    TwistContext,
    Verdict,
)

if TYPE_CHECKING:
    from twistsha.domain.interfaces import CoefficientStore, FactsSource
    from twistsha.domain.qseries import QSeries

logger = structlog.get_logger()


class CoefficientService:
    """Expansions of the named forms, served from a store when one is configured."""

    def __init__(self, store: "CoefficientStore | None" = None) -> None:
        self._store = store

    def series(self, form: FormId, prec: int) -> "QSeries":
        """Expansion of a named form through q^prec."""
        # g4 has a rational constant term and is never stored
        store = self._store if form.is_integral else None
        if store is not None:
            cached = store.load(form, prec)
            if cached is not None:
                return cached

        series = forms.generate(form, prec)

        if store is not None:
            store.save(form, series)
        return series

    def lift(self, prec: int) -> "QSeries":
        return self.series(FormId.KOHNEN_LIFT, prec)

    def plus_coeff(self, n: int) -> PlusCoefficient:
        if n < 1:
            raise InvalidInputError(f"coefficient index must be positive, got {n}")
        return forms.plus_coeff(n, self.lift(n))

    def table(self, p: int, i_from: int, i_to: int) -> list[TableRow]:
        """Factored coefficients c_{p*i} for i_from <= i <= i_to."""
        if p < 2:
            raise InvalidInputError(f"p must be at least 2, got {p}")
        if not 1 <= i_from <= i_to:
            raise InvalidInputError(f"need 1 <= i_from <= i_to, got {i_from}, {i_to}")
        lift = self.lift(p * i_to)
        rows = []
        for i in range(i_from, i_to + 1):
            value = forms.plus_coeff(p * i, lift).value
            rows.append(TableRow(i=i, n=p * i, value=value, factored=render_factored(value)))
        return rows

    def context(
        self,
        p: int,
        d: int,
        form: FormId | None = FormId.DELTA,
        k: int | None = None,
        level: int | None = None,
        a_p: int | None = None,
    ) -> TwistContext:
        """Builds a TwistContext, reading a_p from the expansion of a named form."""
        discriminant = require_discriminant(d)
        if form is None:
            if k is None or level is None or a_p is None:
                raise InvalidInputError("a custom form needs its weight, level and a_p")
            return TwistContext(
                form=None, k=k, level=level, p=p, discriminant=discriminant, a_p=a_p
            )

        if form not in (FormId.DELTA, FormId.X0_11):
            raise InvalidInputError(f"{form} is not a twistable newform")
        weight = int(form.weight)
        if a_p is None:
            a_p = forms.integer_coeff(self.series(form, p), p)
        return TwistContext(
            form=form,
            k=weight,
            level=form.level,
            p=p,
            discriminant=discriminant,
            a_p=a_p,
        )


class CertificationService:
    """Hypothesis checks, ratio certificates and verdicts for twists of Delta."""

    def __init__(
        self, coefficients: CoefficientService, facts_source: "FactsSource | None"
    ) -> None:
        self._coefficients = coefficients
        self._facts_source = facts_source
        self._facts: FactsFile | None = None

    @property
    def facts(self) -> FactsFile:
        if self._facts is None:
            self._facts = (
                self._facts_source.load() if self._facts_source else FactsFile()
            )
            logger.debug("Facts loaded", count=len(self._facts))
        return self._facts

    def check(self, ctx: TwistContext) -> ConditionReport:
        return check_conditions(ctx, None, self.facts)

    def ratio(self, p: int, d: int, d_prime: int) -> RatioCertificate:
        ctx = self._coefficients.context(p, d)
        ctx_prime = self._coefficients.context(p, d_prime)
        for value in (d, d_prime):
            if value <= 0:
                raise SignConditionError(
                    f"(-1)^(k/2) * D > 0 fails for D={value}, k={ctx.k}"
                )
        lift = self._coefficients.lift(max(d, d_prime))
        here = tamagawa_triviality(ctx, p, self.facts)
        there = tamagawa_triviality(ctx_prime, p, self.facts)
        return bkratio.ratio_certificate(
            p,
            ctx.k,
            forms.plus_coeff(d, lift).value,
            forms.plus_coeff(d_prime, lift).value,
            d,
            d_prime,
            tamagawa_terms=(
                1 if here.is_holds else None,
                1 if there.is_holds else None,
            ),
            assumptions=[
                bkratio.bloch_kato_assumption(ctx.label, d),
                bkratio.bloch_kato_assumption(ctx.label, d_prime),
            ],
        )

    def verdict(self, p: int, d: int, d_prime: int) -> Verdict:
        ctx = self._coefficients.context(p, d)
        ctx_prime = self._coefficients.context(p, d_prime)
        lift = None
        if d > 0 and d_prime > 0:
            lift = self._coefficients.lift(max(d, d_prime))
        return bkratio.verdict(ctx, ctx_prime, self.facts, lift)

    def scan(self, p: int, max_d: int) -> list[ScanRow]:
        if max_d < 1:
            raise InvalidInputError(f"max_d must be positive, got {max_d}")
        return bkratio.scan_discriminants(p, max_d, self._coefficients.lift(max_d))
