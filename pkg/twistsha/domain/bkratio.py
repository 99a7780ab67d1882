"""Central L-value ratios through plus-space coefficients, and verdict certificates.

Under the Bloch-Kato conjecture for both twists, and with equal Tamagawa
factors at p, the p-adic valuation of #Sha(D) / #Sha(D') equals

    v_p( c_D^2 / c_D'^2 * (D'/D)^(k/2 - 1) ),

where c_D is the D-th coefficient of the plus-space form attached to f. No
L-value is ever evaluated; every step is exact integer arithmetic.
"""

from __future__ import annotations

import structlog
from sympy import isprime

from twistsha.domain.arith import (
    factorize,
    fundamental_discriminants,
    padic_valuation,
    require_discriminant,
)
from twistsha.domain.errors import (
    InvalidInputError,
    SignConditionError,
    VanishingCoefficientError,
)
from twistsha.domain.forms import kohnen_lift, plus_coeff
from twistsha.domain.hypotheses import check_conditions, tamagawa_triviality
from twistsha.domain.models import (
    FactsFile,
    FormId,
    RatioCertificate,
    ScanRow,
    ShaConclusion,
    TwistContext,
    Verdict,
    VerdictConclusion,
    conclusion_for,
)
from twistsha.domain.qseries import QSeries

logger = structlog.get_logger()

EVENNESS_ASSUMPTION = (
    "dim_F_p Sha(Q, A_{f,D})[p] is even (self-duality of A_{f,D} and the "
    "generalized Cassels-Tate pairing)"
)


def bloch_kato_assumption(label: str, d: int) -> str:
    return f"Bloch-Kato conjecture for {label}⊗χ_{d}"


def kz_ratio_exponent(k: int) -> int:
    """Exponent of D'/D once sqrt(D) and |D|^((k-1)/2) cancel."""
    if k < 2 or k % 2:
        raise InvalidInputError(f"weight must be even and at least 2, got {k}")
    return k // 2 - 1


def _validated_valuations(
    p: int, k: int, c_d: int, c_d_prime: int, d: int, d_prime: int
) -> dict[str, int]:
    if p % 2 == 0 or not isprime(p):
        raise InvalidInputError(f"{p} is not an odd prime")
    if d == d_prime:
        raise InvalidInputError("the two discriminants must differ")
    for disc in (require_discriminant(d), require_discriminant(d_prime)):
        if (-1) ** (k // 2) * disc.value <= 0:
            raise SignConditionError(
                f"(-1)^(k/2) * D > 0 fails for D={disc.value}, k={k}"
            )
    for value, name in ((c_d, d), (c_d_prime, d_prime)):
        if value == 0:
            raise VanishingCoefficientError(
                f"c_{name} = 0: the central value at D={name} may vanish"
            )
    return {
        "c_D": padic_valuation(p, c_d),
        "c_D'": padic_valuation(p, c_d_prime),
        "D": padic_valuation(p, d),
        "D'": padic_valuation(p, d_prime),
    }


def ratio_valuation(p: int, k: int, c_d: int, c_d_prime: int, d: int, d_prime: int) -> int:
    """v_p(c_D^2 D'^e) - v_p(c_D'^2 D^e) with e = k/2 - 1."""
    v = _validated_valuations(p, k, c_d, c_d_prime, d, d_prime)
    e = kz_ratio_exponent(k)
    return 2 * v["c_D"] + e * v["D'"] - 2 * v["c_D'"] - e * v["D"]


def sha_nontriviality(valuation: int) -> ShaConclusion:
    """Which Tate-Shafarevich group the valuation shows to be nontrivial."""
    return conclusion_for(valuation)


def sha_rank_lower_bound(conclusion: ShaConclusion) -> int:
    """A nontrivial Sha[p] of even dimension has dimension at least 2."""
    return 0 if conclusion is ShaConclusion.INCONCLUSIVE else 2


def ratio_certificate(
    p: int,
    k: int,
    c_d: int,
    c_d_prime: int,
    d: int,
    d_prime: int,
    *,
    tamagawa_terms: tuple[int | None, int | None] = (None, None),
    assumptions: list[str] | None = None,
) -> RatioCertificate:
    valuations = _validated_valuations(p, k, c_d, c_d_prime, d, d_prime)
    valuation = ratio_valuation(p, k, c_d, c_d_prime, d, d_prime)
    conclusion = sha_nontriviality(valuation)
    return RatioCertificate(
        p=p,
        k=k,
        discriminant=require_discriminant(d),
        discriminant_prime=require_discriminant(d_prime),
        c_d=c_d,
        c_d_prime=c_d_prime,
        c_d_factorization=factorize(c_d),
        c_d_prime_factorization=factorize(c_d_prime),
        exponent=kz_ratio_exponent(k),
        factor_valuations=valuations,
        valuation=valuation,
        conclusion=conclusion,
        sha_p_rank_lower_bound=sha_rank_lower_bound(conclusion),
        tamagawa_term_d=tamagawa_terms[0],
        tamagawa_term_d_prime=tamagawa_terms[1],
        assumptions=assumptions or [],
    )


def _same_form(ctx: TwistContext, ctx_prime: TwistContext) -> bool:
    fields = ("form", "k", "level", "p", "a_p")
    return all(getattr(ctx, name) == getattr(ctx_prime, name) for name in fields)


def verdict(
    ctx: TwistContext,
    ctx_prime: TwistContext,
    facts: FactsFile,
    lift: QSeries | None = None,
) -> Verdict:
    """Chains the hypotheses, the coefficient ratio and the Sha deduction."""
    if not _same_form(ctx, ctx_prime):
        raise InvalidInputError("both contexts must share form, k, N and p")
    if ctx.form is not FormId.DELTA:
        raise InvalidInputError("the plus-space lift is only available for delta")
    d, d_prime = ctx.d, ctx_prime.d
    for value in (d, d_prime):
        if (-1) ** (ctx.k // 2) * value <= 0:
            raise SignConditionError(f"(-1)^(k/2) * D > 0 fails for D={value}")

    report = check_conditions(ctx, ctx_prime, facts)

    prec = max(d, d_prime)
    if lift is None or lift.prec < prec:
        lift = kohnen_lift(prec)
    c_d = plus_coeff(d, lift).value
    c_d_prime = plus_coeff(d_prime, lift).value

    assumptions = [
        bloch_kato_assumption(ctx.label, d),
        bloch_kato_assumption(ctx.label, d_prime),
        EVENNESS_ASSUMPTION,
    ]
    for key in report.facts_consumed():
        entry = facts.get(key)
        if entry is not None:
            assumptions.append(f"{key}: {entry.provenance}")

    here = tamagawa_triviality(ctx, ctx.p, facts)
    there = tamagawa_triviality(ctx_prime, ctx.p, facts)
    tamagawa_terms = (
        1 if here.is_holds else None,
        1 if there.is_holds else None,
    )

    reasons: list[str] = []
    ratio = None
    try:
        ratio = ratio_certificate(
            ctx.p,
            ctx.k,
            c_d,
            c_d_prime,
            d,
            d_prime,
            tamagawa_terms=tamagawa_terms,
            assumptions=assumptions[:2],
        )
    except VanishingCoefficientError as e:
        reasons.append(str(e))

    for name, tri in (("A", report.a), ("B", report.b), ("C", report.c), ("D", report.d)):
        if not tri.is_holds:
            reasons.append(f"condition ({name}) is {tri.state.value}: {tri.reason}")
    if not report.tamdif.is_holds:
        reasons.append(f"Tamagawa comparison is {report.tamdif.state.value}: {report.tamdif.reason}")
    if ratio is not None and ratio.valuation <= 0:
        reasons.append(
            f"valuation {ratio.valuation} does not show Sha(Q, A_{{{ctx.label},{d}}}) ≠ 0"
        )

    conclusion = (
        VerdictConclusion.INCONCLUSIVE if reasons else VerdictConclusion.EXISTS_SURJECTION
    )
    exists = conclusion is VerdictConclusion.EXISTS_SURJECTION
    p = ctx.p
    result = Verdict(
        context=ctx,
        context_prime=ctx_prime,
        conditions=report,
        ratio=ratio,
        assumptions=assumptions,
        facts_consumed=report.facts_consumed(),
        conclusion=conclusion,
        target=f"M_{{{ctx.label},{d}}}",
        reasons=reasons,
        class_group_p_valuation_lower_bound=2 if exists else 0,
        extension_degree_lower_bound=(p - 1) * p * (p + 1) if report.c.is_holds else None,
        warnings=report.warnings,
    )
    logger.info(
        "Verdict reached",
        p=p,
        d=d,
        d_prime=d_prime,
        conclusion=conclusion.value,
        valuation=ratio.valuation if ratio else None,
    )
    return result


def scan_discriminants(
    p: int, max_d: int, lift: QSeries | None = None, k: int = 12
) -> list[ScanRow]:
    """Positive fundamental D <= max_d with p | D, measured against the best reference.

    The reference D' is the admissible discriminant with the smallest v_p(c_D'),
    ties broken by size; every other admissible D gets its ratio valuation
    against it.
    """
    if p % 2 == 0 or not isprime(p):
        raise InvalidInputError(f"{p} is not an odd prime")
    candidates = list(fundamental_discriminants(max_d, divisible_by=p))
    if not candidates:
        return []
    if lift is None or lift.prec < candidates[-1]:
        lift = kohnen_lift(candidates[-1])

    coefficients = {d: plus_coeff(d, lift).value for d in candidates}
    admissible = [d for d in candidates if coefficients[d] != 0]
    reference = min(
        admissible,
        key=lambda d: (padic_valuation(p, coefficients[d]), d),
        default=None,
    )

    rows = []
    for d in candidates:
        c_d = coefficients[d]
        row = ScanRow(discriminant=d, c_d=c_d, admissible=c_d != 0)
        if c_d != 0:
            valuation = None
            if reference is not None and d != reference:
                valuation = ratio_valuation(p, k, c_d, coefficients[reference], d, reference)
            row = row.model_copy(
                update={
                    "coefficient_valuation": padic_valuation(p, c_d),
                    "reference": reference,
                    "valuation": valuation,
                }
            )
        rows.append(row)
    logger.info("Discriminants scanned", p=p, max_d=max_d, candidates=len(candidates))
    return rows
