"""Decision engine for the hypotheses (A)-(D) of the class-group surjection theorem.

Nothing here touches Galois cohomology. Every condition is reduced to integer
tests on (k, N, p, D, a_p); what cannot be decided that way (splitting of the
local representation, images of Galois, Tamagawa comparisons) comes from a
FactsFile and propagates as a three-valued result.
"""

from __future__ import annotations

from dataclasses import dataclass

import structlog
from sympy import isprime, primefactors

from twistsha.domain.errors import BadReductionError, FactsFileError, InvalidInputError
from twistsha.domain.models import (
    ConditionReport,
    DiscriminantClass,
    FactName,
    FactsFile,
    FormId,
    ReductionType,
    SelmerLedger,
    Tri,
    TwistContext,
    all_of,
    fact_key,
    tamagawa_pair_key,
)

logger = structlog.get_logger()

EXCEPTIONAL_DELTA_PRIMES = frozenset({2, 3, 5, 7, 23, 691})

DELTA_IMAGE_PROVENANCE = (
    "the image of the mod-p representation of Delta contains SL_2(F_p) "
    "except for p = 2, 3, 5, 7, 23 and 691 (Serre, Swinnerton-Dyer)"
)

VIOLATIONS = ("i1", "i2", "ii", "iii", "iv")

VIOLATION_TEXT: dict[str, str] = {
    "i1": "p∤D, k>2, M split, p-1 | k/2 or k/2-1, a_p ≡ 1 (mod p)",
    "i2": "p∤D, k=2, M split, some T/p^nT non-split, a_p ≡ 1 (mod p)",
    "ii": "p∤D, M non-split, p-1 | k/2, a_p ≡ 1 (mod p)",
    "iii": "D=p*, M split, p-1 | (k-p+1)/2 or (k+p-3)/2, a_p ≡ 1 (mod p)",
    "iv": "D=p*, M non-split, p-1 | (k-p+1)/2, a_p ≡ 1 (mod p)",
}

VIOLATION_CLASS: dict[str, DiscriminantClass] = {
    "i1": DiscriminantClass.P_COPRIME,
    "i2": DiscriminantClass.P_COPRIME,
    "ii": DiscriminantClass.P_COPRIME,
    "iii": DiscriminantClass.P_STAR,
    "iv": DiscriminantClass.P_STAR,
}


def reduction_type(ctx: TwistContext) -> ReductionType:
    """Ordinary iff a_p is a unit mod p."""
    if ctx.level % ctx.p == 0:
        raise BadReductionError(f"p={ctx.p} divides the level N={ctx.level}")
    return ReductionType.ORDINARY if ctx.a_p % ctx.p else ReductionType.SUPERSINGULAR


def _half(n: int) -> int:
    if n % 2:
        raise InvalidInputError(f"{n} is odd; weight and prime parities are inconsistent")
    return n // 2


def _divides(m: int, n: int) -> bool:
    return n % m == 0


@dataclass(frozen=True)
class _World:
    """One assignment of the local splitting facts."""

    m_split: bool
    t_split_all_n: bool


def _splitting_keys(ctx: TwistContext) -> tuple[str, str]:
    return (
        fact_key(FactName.M_SPLITS_AT_P, ctx.label, ctx.p),
        fact_key(FactName.T_MOD_PN_SPLITS_ALL_N, ctx.label, ctx.p),
    )


def _worlds(ctx: TwistContext, facts: FactsFile) -> tuple[list[_World], list[str]]:
    """Worlds consistent with the facts; T/p^nT split for all n forces M split."""
    m_key, t_key = _splitting_keys(ctx)
    m_entry, t_entry = facts.get(m_key), facts.get(t_key)
    m_values = [m_entry.value] if m_entry else [True, False]
    t_values = [t_entry.value] if t_entry else [True, False]
    worlds = [_World(m, t) for m in m_values for t in t_values if m or not t]
    if not worlds:
        raise FactsFileError(f"{t_key} is asserted but {m_key} is denied")
    deps = [key for key, entry in ((m_key, m_entry), (t_key, t_entry)) if entry]
    return worlds, deps


def _violations_in(ctx: TwistContext, world: _World) -> dict[str, bool]:
    p, k = ctx.p, ctx.k
    a_one = ctx.a_p_is_one
    found = dict.fromkeys(VIOLATIONS, False)
    match ctx.discriminant_class:
        case DiscriminantClass.P_COPRIME:
            half = _half(k)
            found["i1"] = (
                k > 2
                and world.m_split
                and (_divides(p - 1, half) or _divides(p - 1, half - 1))
                and a_one
            )
            found["i2"] = k == 2 and world.m_split and not world.t_split_all_n and a_one
            found["ii"] = not world.m_split and _divides(p - 1, half) and a_one
        case DiscriminantClass.P_STAR:
            low, high = _half(k - p + 1), _half(k + p - 3)
            found["iii"] = (
                world.m_split and (_divides(p - 1, low) or _divides(p - 1, high)) and a_one
            )
            found["iv"] = not world.m_split and _divides(p - 1, low) and a_one
        case DiscriminantClass.P_DIVIDES_OTHER:
            pass
    return found


def _missing_splitting_reason(ctx: TwistContext, facts: FactsFile) -> str:
    missing = [key for key in _splitting_keys(ctx) if facts.get(key) is None]
    return "outcome depends on local splitting; assert " + " or ".join(missing)


def _fails_reason(ctx: TwistContext, name: str) -> str:
    if ctx.discriminant_class is DiscriminantClass.P_DIVIDES_OTHER:
        return "p | D and D ≠ p*: M^{G_Qp} ⊂ M^{G_Qp^ur(ζ_p)} = 0"
    if ctx.discriminant_class is not VIOLATION_CLASS[name]:
        return f"not applicable to D-class {ctx.discriminant_class.value}"
    if not ctx.a_p_is_one:
        return f"a_p ≡ {ctx.a_p % ctx.p} ≢ 1 (mod {ctx.p})"
    return f"does not occur: {VIOLATION_TEXT[name]}"


def st3_violations(ctx: TwistContext, facts: FactsFile) -> dict[str, Tri]:
    """Evaluates each excluded local configuration at an ordinary prime."""
    worlds, deps = _worlds(ctx, facts)
    outcomes = [_violations_in(ctx, world) for world in worlds]
    result: dict[str, Tri] = {}
    for name in VIOLATIONS:
        values = {outcome[name] for outcome in outcomes}
        if len(values) > 1:
            result[name] = Tri.unknown(
                f"{name}: {_missing_splitting_reason(ctx, facts)}", deps
            )
        elif values.pop():
            result[name] = Tri.holds(f"{name} occurs: {VIOLATION_TEXT[name]}", deps)
        else:
            result[name] = Tri.fails(f"{name}: {_fails_reason(ctx, name)}", deps)
    return result


def _ordinary_condition_b(ctx: TwistContext, facts: FactsFile) -> Tri:
    p, k = ctx.p, ctx.k
    if _divides(p - 1, k - 1):
        return Tri.fails(f"ordinary and p-1={p - 1} divides k-1={k - 1}")
    worlds, deps = _worlds(ctx, facts)
    clean = {not any(_violations_in(ctx, world).values()) for world in worlds}
    if len(clean) > 1:
        return Tri.unknown(_missing_splitting_reason(ctx, facts), deps)
    if clean.pop():
        return Tri.holds(
            f"ordinary, p-1 ∤ k-1 and no excluded configuration occurs "
            f"(D-class {ctx.discriminant_class.value})",
            deps,
        )
    return Tri.fails("ordinary and an excluded local configuration occurs", deps)


def condition_c(ctx: TwistContext, facts: FactsFile) -> Tri:
    """Large image: built in for Delta, asserted for every other form."""
    if ctx.form is FormId.DELTA:
        return Tri.of(ctx.p not in EXCEPTIONAL_DELTA_PRIMES, DELTA_IMAGE_PROVENANCE)
    key = fact_key(FactName.IMAGE_CONTAINS_SL2, ctx.label, ctx.p)
    entry = facts.get(key)
    if entry is None:
        return Tri.unknown(f"image of Galois not computable; assert {key}")
    return Tri.of(entry.value, entry.provenance, [key])


def tamagawa_triviality(ctx: TwistContext, ell: int, facts: FactsFile) -> Tri:
    """Whether c(Q_ell, A_{f,D}) = 1."""
    if not isprime(ell):
        raise InvalidInputError(f"{ell} is not prime")
    if (ctx.level * ctx.p) % ell:
        return Tri.holds(
            f"ℓ={ell} ∤ Np: inertia acts trivially, so c(Q_{ell}, A)=1"
        )
    if ell == ctx.p and ctx.p > ctx.k:
        return Tri.holds(f"p={ctx.p} > k={ctx.k}: c(Q_{ell}, A)=1")
    key = fact_key(FactName.M_INVARIANTS_VANISH_AT_ELL, ctx.label, ctx.p, ctx.d, ell)
    entry = facts.get(key)
    if entry is not None and entry.value:
        return Tri.holds(
            f"M^(G_Q{ell}) = 0, so H^1_f = H^1_ur and c(Q_{ell}, A)=1", [key]
        )
    if entry is not None:
        return Tri.unknown(
            f"M^(G_Q{ell}) ≠ 0 asserted; no rule decides c(Q_{ell}, A)", [key]
        )
    return Tri.unknown(f"no rule decides c(Q_{ell}, A); assert {key}")


def condition_d(ctx: TwistContext, facts: FactsFile) -> Tri:
    primes = primefactors(ctx.level)
    parts = [tamagawa_triviality(ctx, int(ell), facts) for ell in primes]
    if not parts:
        return Tri.holds("N=1: no Tamagawa factors away from p")
    return all_of(parts, f"c(Q_ℓ, A)=1 for every ℓ | N={ctx.level}")


def tamagawa_comparison(
    ctx: TwistContext, ctx_prime: TwistContext | None, facts: FactsFile
) -> Tri:
    """c(Q_p, A_{f,D}) = c(Q_p, A_{f,D'})."""
    if ctx_prime is None:
        return Tri.unknown("no second discriminant to compare with")
    here = tamagawa_triviality(ctx, ctx.p, facts)
    there = tamagawa_triviality(ctx_prime, ctx.p, facts)
    key = tamagawa_pair_key(ctx, ctx_prime.d)
    entry = facts.get(key)
    deps = sorted({*here.fact_dependencies, *there.fact_dependencies})
    if here.is_holds and there.is_holds:
        if entry is not None and not entry.value:
            raise FactsFileError(f"{key} contradicts c(Q_p, A)=1 for both twists")
        return Tri.holds(f"c(Q_{ctx.p}, A_D) = c(Q_{ctx.p}, A_D') = 1", deps)
    if entry is not None:
        return Tri.of(entry.value, entry.provenance, sorted({*deps, key}))
    return Tri.unknown(f"Tamagawa factors at p not both known; assert {key}", deps)


def _splitting_tri(key: str, facts: FactsFile) -> Tri:
    entry = facts.get(key)
    if entry is None:
        return Tri.unknown(f"not asserted: {key}")
    return Tri.of(entry.value, entry.provenance, [key])


def check_conditions(
    ctx: TwistContext, ctx_prime: TwistContext | None, facts: FactsFile
) -> ConditionReport:
    """Evaluates (A)-(D), the Tamagawa comparison and the local dimension bound."""
    p, k = ctx.p, ctx.k
    a = Tri.of(
        ctx.level % p != 0,
        f"p={p} {'does not divide' if ctx.level % p else 'divides'} N={ctx.level}",
    )

    reduction: ReductionType | None = None
    violations: dict[str, Tri] = {}
    if a.is_fails:
        b = Tri.unknown("reduction type undefined: p divides the level")
        st3_case = "bad_reduction"
    else:
        reduction = reduction_type(ctx)
        if reduction is ReductionType.SUPERSINGULAR:
            b = Tri.of(
                k <= p + 1,
                f"supersingular: k={k} {'≤' if k <= p + 1 else '>'} p+1={p + 1}",
            )
            st3_case = "supersingular"
        else:
            violations = st3_violations(ctx, facts)
            b = _ordinary_condition_b(ctx, facts)
            st3_case = f"ordinary/{ctx.discriminant_class.value}"

    m_key, t_key = _splitting_keys(ctx)
    warnings = [
        warning
        for warning in (
            ctx.discriminant.warning,
            ctx_prime.discriminant.warning if ctx_prime else None,
        )
        if warning
    ]
    report = ConditionReport(
        a=a,
        b=b,
        c=condition_c(ctx, facts),
        d=condition_d(ctx, facts),
        tamdif=tamagawa_comparison(ctx, ctx_prime, facts),
        reduction_type=reduction,
        st3_case=st3_case,
        st3_violations=violations,
        splitting=_splitting_tri(m_key, facts),
        splitting_all_n=_splitting_tri(t_key, facts),
        warnings=warnings,
    )
    report = report.model_copy(update={"selmer_ledger": selmer_bound(ctx, report)})
    logger.info(
        "Conditions evaluated",
        form=ctx.label,
        p=p,
        d=ctx.d,
        all_hold=report.all_hold(),
        st3_case=st3_case,
    )
    return report


def _cm_configuration(ctx: TwistContext, report: ConditionReport) -> bool:
    return (
        ctx.k == 2
        and report.reduction_type is ReductionType.ORDINARY
        and ctx.discriminant_class is DiscriminantClass.P_COPRIME
        and report.splitting_all_n.is_holds
        and ctx.a_p_is_one
    )


def selmer_bound(ctx: TwistContext, report: ConditionReport) -> SelmerLedger:
    """Bound for dim Im(Res^ur_p) as invariants + tangent + H^0(V) - kernel."""
    p, k = ctx.p, ctx.k
    if _cm_configuration(ctx, report):
        return SelmerLedger(
            invariants_term=1,
            unramified_kernel_term=1,
            bound=1,
            rule="k=2, p∤D, T/p^nT split for all n, a_p ≡ 1: restriction to Q_p^ur kills A^(G_Qp) ⊗ F_p",
        )
    if report.b.is_holds:
        return SelmerLedger(
            invariants_term=0,
            bound=1,
            rule="(B) holds: M^(G_Qp) = 0, so A^(G_Qp) ⊗ F_p = 0",
        )
    if report.reduction_type is not ReductionType.ORDINARY or _divides(p - 1, k - 1):
        return SelmerLedger(rule="no bound: M^(G_Qp) may be two-dimensional")
    return SelmerLedger(
        invariants_term=1,
        bound=2,
        rule="ordinary with p-1 ∤ k-1: dim M^(G_Qp) ≤ 1",
    )
