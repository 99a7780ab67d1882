"""Domain models."""

from __future__ import annotations

from enum import StrEnum
from fractions import Fraction
from typing import Annotated, Literal

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    PlainSerializer,
    StrictBool,
    StringConstraints,
    computed_field,
    field_validator,
    model_validator,
)
from sympy import isprime

# Big integers travel as decimal strings in JSON.
BigInt = Annotated[int, PlainSerializer(str, return_type=str, when_used="json")]

NonEmptyText = Annotated[str, StringConstraints(strip_whitespace=True, min_length=1)]


class FormId(StrEnum):
    """Named q-expansions the library can generate."""

    DELTA = "delta"
    G4 = "g4"
    THETA = "theta"
    X0_11 = "x0_11"
    KOHNEN_LIFT = "kohnen_lift"

    @classmethod
    def parse(cls, tag: str) -> FormId:
        """Accepts both `kohnen_lift` and `kohnen-lift` spellings."""
        return cls(tag.strip().lower().replace("-", "_"))

    @property
    def weight(self) -> Fraction:
        return FORM_WEIGHTS[self]

    @property
    def level(self) -> int:
        return FORM_LEVELS[self]

    @property
    def is_integral(self) -> bool:
        """Whether every coefficient of the expansion is an integer."""
        return self is not FormId.G4


FORM_WEIGHTS: dict[FormId, Fraction] = {
    FormId.DELTA: Fraction(12),
    FormId.G4: Fraction(4),
    FormId.THETA: Fraction(1, 2),
    FormId.X0_11: Fraction(2),
    FormId.KOHNEN_LIFT: Fraction(13, 2),
}

FORM_LEVELS: dict[FormId, int] = {
    FormId.DELTA: 1,
    FormId.G4: 1,
    FormId.THETA: 4,
    FormId.X0_11: 11,
    FormId.KOHNEN_LIFT: 4,
}

# Forms with an attached Galois representation that a twist can be built on.
NEWFORMS: frozenset[FormId] = frozenset({FormId.DELTA, FormId.X0_11})


class PlusCoefficient(BaseModel):
    """Fourier coefficient c_n of the plus-space form."""

    model_config = ConfigDict(frozen=True)

    index: int = Field(..., ge=1, description="Exponent n")
    value: BigInt = Field(..., description="Coefficient c_n")

    @model_validator(mode="after")
    def _plus_space_support(self) -> PlusCoefficient:
        if self.index % 4 in (2, 3) and self.value != 0:
            raise ValueError(
                f"c_{self.index} = {self.value} lies outside the plus space"
            )
        return self


class DiscriminantKind(StrEnum):
    FUNDAMENTAL = "fundamental"
    NON_FUNDAMENTAL = "non-fundamental"
    INVALID = "invalid"


class Discriminant(BaseModel):
    """Quadratic discriminant with its classification."""

    model_config = ConfigDict(frozen=True)

    value: BigInt = Field(..., description="Discriminant D")
    kind: DiscriminantKind = Field(..., description="Classification")

    @model_validator(mode="after")
    def _congruence(self) -> Discriminant:
        if self.value == 0:
            raise ValueError("discriminant must be nonzero")
        if self.kind is not DiscriminantKind.INVALID and self.value % 4 not in (0, 1):
            raise ValueError(f"{self.value} is not 0 or 1 mod 4")
        return self

    @property
    def is_valid(self) -> bool:
        return self.kind is not DiscriminantKind.INVALID

    @property
    def is_fundamental(self) -> bool:
        return self.kind is DiscriminantKind.FUNDAMENTAL

    @property
    def warning(self) -> str | None:
        if self.kind is DiscriminantKind.NON_FUNDAMENTAL:
            return (
                f"discriminant {self.value} is not fundamental; "
                "Shimura-lift oracle checks assume fundamental discriminants"
            )
        return None


class Factorization(BaseModel):
    """Signed prime factorization of a nonzero integer."""

    model_config = ConfigDict(frozen=True)

    sign: Literal[1, -1] = Field(..., description="Sign of the integer")
    factors: dict[int, int] = Field(default_factory=dict, description="Prime -> exponent")

    @field_validator("factors")
    @classmethod
    def _prime_powers(cls, factors: dict[int, int]) -> dict[int, int]:
        for prime, exponent in factors.items():
            if exponent <= 0 or not isprime(prime):
                raise ValueError(f"invalid prime power {prime}^{exponent}")
        return dict(sorted(factors.items()))

    @property
    def value(self) -> int:
        result = self.sign
        for prime, exponent in self.factors.items():
            result *= prime**exponent
        return result

    def exponent(self, prime: int) -> int:
        return self.factors.get(prime, 0)

    def render(self) -> str:
        """Renders as `-2^4·3^4·5`."""
        body = "·".join(
            str(prime) if exponent == 1 else f"{prime}^{exponent}"
            for prime, exponent in self.factors.items()
        )
        body = body or "1"
        return f"-{body}" if self.sign < 0 else body


class TriState(StrEnum):
    HOLDS = "holds"
    FAILS = "fails"
    UNKNOWN = "unknown"


class Tri(BaseModel):
    """Three-valued result with its citation and the facts it consumed."""

    model_config = ConfigDict(frozen=True)

    state: TriState = Field(..., description="Holds, fails or unknown")
    reason: str = Field(default="", description="Citation or missing fact")
    fact_dependencies: list[str] = Field(
        default_factory=list, description="Fact keys consumed"
    )

    @model_validator(mode="after")
    def _unknown_needs_reason(self) -> Tri:
        if self.state is TriState.UNKNOWN and not self.reason.strip():
            raise ValueError("an unknown result must name what is missing")
        return self

    @classmethod
    def holds(cls, reason: str, deps: list[str] | None = None) -> Tri:
        return cls(state=TriState.HOLDS, reason=reason, fact_dependencies=deps or [])

    @classmethod
    def fails(cls, reason: str, deps: list[str] | None = None) -> Tri:
        return cls(state=TriState.FAILS, reason=reason, fact_dependencies=deps or [])

    @classmethod
    def unknown(cls, reason: str, deps: list[str] | None = None) -> Tri:
        return cls(state=TriState.UNKNOWN, reason=reason, fact_dependencies=deps or [])

    @classmethod
    def of(cls, value: bool, reason: str, deps: list[str] | None = None) -> Tri:
        return cls.holds(reason, deps) if value else cls.fails(reason, deps)

    @property
    def is_holds(self) -> bool:
        return self.state is TriState.HOLDS

    @property
    def is_fails(self) -> bool:
        return self.state is TriState.FAILS

    @property
    def is_unknown(self) -> bool:
        return self.state is TriState.UNKNOWN


def all_of(parts: list[Tri], reason: str) -> Tri:
    """Kleene conjunction; the empty conjunction holds."""
    deps = sorted({dep for part in parts for dep in part.fact_dependencies})
    failed = [part for part in parts if part.is_fails]
    if failed:
        return Tri.fails(failed[0].reason, deps)
    unknown = [part for part in parts if part.is_unknown]
    if unknown:
        return Tri.unknown(unknown[0].reason, deps)
    return Tri.holds(reason, deps)


class ReductionType(StrEnum):
    ORDINARY = "ordinary"
    SUPERSINGULAR = "supersingular"


class DiscriminantClass(StrEnum):
    """Position of D relative to p."""

    P_COPRIME = "p_coprime"
    P_STAR = "p_star"
    P_DIVIDES_OTHER = "p_divides_other"


def named_a_p(form: FormId, p: int) -> int:
    """p-th coefficient of a named newform, read from its q-expansion."""
    from twistsha.domain import forms  # forms builds on these models

    if form is FormId.DELTA:
        return forms.tau(p)
    return forms.x0_11_coefficient(p)


class TwistContext(BaseModel):
    """A newform of weight k and level N twisted by chi_D, viewed at p."""

    model_config = ConfigDict(frozen=True)

    form: FormId | None = Field(None, description="Named form; None for a custom one")
    k: int = Field(..., ge=2, description="Weight")
    level: int = Field(..., ge=1, description="Level N")
    p: int = Field(..., description="Odd prime")
    discriminant: Discriminant = Field(..., description="Twisting discriminant D")
    a_p: BigInt = Field(..., description="p-th Fourier coefficient of the form")

    @model_validator(mode="after")
    def _consistent(self) -> TwistContext:
        if self.k % 2:
            raise ValueError(f"weight {self.k} is not even")
        if self.p % 2 == 0 or not isprime(self.p):
            raise ValueError(f"{self.p} is not an odd prime")
        if not self.discriminant.is_valid:
            raise ValueError(f"{self.discriminant.value} is not a discriminant")
        if self.form is not None:
            if self.form not in NEWFORMS:
                raise ValueError(f"{self.form} is not a twistable newform")
            if self.k != self.form.weight or self.level != self.form.level:
                raise ValueError(
                    f"{self.form} has weight {self.form.weight} and level {self.form.level}"
                )
            expected = named_a_p(self.form, self.p)
            if self.a_p != expected:
                raise ValueError(f"a_{self.p} of {self.form} is {expected}, got {self.a_p}")
        return self

    @property
    def label(self) -> str:
        return self.form.value if self.form else f"k{self.k}N{self.level}"

    @property
    def d(self) -> int:
        return self.discriminant.value

    @property
    def p_star(self) -> int:
        return self.p if self.p % 4 == 1 else -self.p

    @property
    def discriminant_class(self) -> DiscriminantClass:
        if self.d % self.p:
            return DiscriminantClass.P_COPRIME
        if self.d == self.p_star:
            return DiscriminantClass.P_STAR
        return DiscriminantClass.P_DIVIDES_OTHER

    @property
    def a_p_is_one(self) -> bool:
        return self.a_p % self.p == 1

    def with_discriminant(self, discriminant: Discriminant) -> TwistContext:
        return self.model_copy(update={"discriminant": discriminant})


class FactName(StrEnum):
    """Recognized externally asserted facts."""

    IMAGE_CONTAINS_SL2 = "image_contains_sl2"
    M_SPLITS_AT_P = "m_splits_at_p"
    T_MOD_PN_SPLITS_ALL_N = "t_mod_pn_splits_all_n"
    TAMAGAWA_EQUAL_AT_P = "tamagawa_equal_at_p"
    M_INVARIANTS_VANISH_AT_ELL = "m_invariants_vanish_at_ell"


# Number of colon-separated qualifiers after the fact name.
FACT_ARITY: dict[FactName, int] = {
    FactName.IMAGE_CONTAINS_SL2: 2,
    FactName.M_SPLITS_AT_P: 2,
    FactName.T_MOD_PN_SPLITS_ALL_N: 2,
    FactName.TAMAGAWA_EQUAL_AT_P: 4,
    FactName.M_INVARIANTS_VANISH_AT_ELL: 4,
}


def fact_key(name: FactName, *parts: object) -> str:
    return ":".join([name.value, *(str(part) for part in parts)])


def tamagawa_pair_key(ctx: TwistContext, d_prime: int) -> str:
    low, high = sorted((ctx.d, d_prime))
    return fact_key(FactName.TAMAGAWA_EQUAL_AT_P, ctx.label, ctx.p, low, high)


class FactEntry(BaseModel):
    """One asserted fact and where it comes from."""

    model_config = ConfigDict(frozen=True)

    value: StrictBool = Field(..., description="Asserted truth value")
    provenance: NonEmptyText = Field(..., description="Source of the assertion")


class FactsFile(BaseModel):
    """Externally asserted, non-computable facts."""

    model_config = ConfigDict(frozen=True)

    entries: dict[str, FactEntry] = Field(default_factory=dict)

    @field_validator("entries")
    @classmethod
    def _known_keys(cls, entries: dict[str, FactEntry]) -> dict[str, FactEntry]:
        for key in entries:
            name, *parts = key.split(":")
            try:
                fact = FactName(name)
            except ValueError:
                raise ValueError(f"unknown fact name in key {key!r}") from None
            if len(parts) != FACT_ARITY[fact] or not all(parts):
                raise ValueError(
                    f"fact {key!r} needs {FACT_ARITY[fact]} qualifiers after {name}"
                )
        return entries

    def __len__(self) -> int:
        return len(self.entries)

    def get(self, key: str) -> FactEntry | None:
        return self.entries.get(key)

    def with_fact(self, key: str, value: bool, provenance: str) -> FactsFile:
        entries = dict(self.entries)
        entries[key] = FactEntry(value=value, provenance=provenance)
        return FactsFile(entries=entries)


class SelmerLedger(BaseModel):
    """Terms of the local dimension bound for the unramified restriction image."""

    model_config = ConfigDict(frozen=True)

    invariants_term: int | None = Field(
        None, description="Upper bound for dim A^{G_Qp} (x) F_p"
    )
    tangent_term: int = Field(1, description="dim D_dR/D_dR^+, always 1")
    h0_term: int = Field(0, description="dim H^0(Q_p, V), always 0")
    unramified_kernel_term: int = Field(
        0, description="Lower bound for the kernel of restriction to Q_p^ur"
    )
    bound: Literal[1, 2] | None = Field(None, description="Resulting bound")
    rule: str = Field(..., description="Which case produced the bound")


class ConditionReport(BaseModel):
    """Conditions (A)-(D) plus the Tamagawa comparison at p."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    a: Tri = Field(..., alias="A", description="p does not divide N")
    b: Tri = Field(..., alias="B", description="Local condition at p")
    c: Tri = Field(..., alias="C", description="Image contains SL_2(F_p)")
    d: Tri = Field(..., alias="D", description="Tamagawa factors away from p")
    tamdif: Tri = Field(..., description="c(Q_p, A_D) = c(Q_p, A_D')")
    reduction_type: ReductionType | None = Field(None, description="At p")
    st3_case: str = Field(..., description="Branch of the exclusion table")
    st3_violations: dict[str, Tri] = Field(default_factory=dict)
    splitting: Tri = Field(..., description="M splits as a G_Qp-module")
    splitting_all_n: Tri = Field(..., description="T/p^nT splits for all n")
    selmer_ledger: SelmerLedger | None = Field(None)
    warnings: list[str] = Field(default_factory=list)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def selmer_bound(self) -> int | None:
        return self.selmer_ledger.bound if self.selmer_ledger else None

    def all_hold(self) -> bool:
        return all(tri.is_holds for tri in (self.a, self.b, self.c, self.d))

    def facts_consumed(self) -> list[str]:
        tris = [self.a, self.b, self.c, self.d, self.tamdif]
        return sorted({dep for tri in tris for dep in tri.fact_dependencies})


class ShaConclusion(StrEnum):
    SHA_D_NONTRIVIAL = "sha_D_nontrivial"
    SHA_DPRIME_NONTRIVIAL = "sha_Dprime_nontrivial"
    INCONCLUSIVE = "inconclusive"


class RatioCertificate(BaseModel):
    """p-adic valuation of the Sha ratio from plus-space coefficients."""

    model_config = ConfigDict(frozen=True)

    p: int
    k: int
    discriminant: Discriminant
    discriminant_prime: Discriminant
    c_d: BigInt
    c_d_prime: BigInt
    c_d_factorization: Factorization
    c_d_prime_factorization: Factorization
    exponent: int = Field(..., description="k/2 - 1")
    factor_valuations: dict[str, int] = Field(
        ..., description="v_p of c_D, c_D', D and D'"
    )
    valuation: int = Field(..., description="v_p(#Sha(D) / #Sha(D'))")
    conclusion: ShaConclusion
    sha_p_rank_lower_bound: int = Field(
        0, description="Lower bound for dim Sha[p] of the nontrivial side"
    )
    tamagawa_term_d: int | None = Field(None, description="c(Q_p, A_D) when known")
    tamagawa_term_d_prime: int | None = Field(None, description="c(Q_p, A_D')")
    gamma_term: int = Field(1, description="#Gamma_Q(A), trivial under (C)")
    assumptions: list[str] = Field(default_factory=list)

    @model_validator(mode="after")
    def _valuation_identity(self) -> RatioCertificate:
        v = self.factor_valuations
        expected = (
            2 * v["c_D"]
            + self.exponent * v["D'"]
            - 2 * v["c_D'"]
            - self.exponent * v["D"]
        )
        if expected != self.valuation:
            raise ValueError(f"valuation {self.valuation} != {expected}")
        if self.conclusion is not conclusion_for(self.valuation):
            raise ValueError("conclusion does not match the valuation sign")
        return self


def conclusion_for(valuation: int) -> ShaConclusion:
    if valuation > 0:
        return ShaConclusion.SHA_D_NONTRIVIAL
    if valuation < 0:
        return ShaConclusion.SHA_DPRIME_NONTRIVIAL
    return ShaConclusion.INCONCLUSIVE


class VerdictConclusion(StrEnum):
    EXISTS_SURJECTION = "exists_surjection"
    INCONCLUSIVE = "inconclusive"


class Verdict(BaseModel):
    """Certificate for a surjection cl(K_{f,D}) (x) F_p -> M_{f,D}."""

    model_config = ConfigDict(frozen=True)

    context: TwistContext
    context_prime: TwistContext
    conditions: ConditionReport
    ratio: RatioCertificate | None = None
    assumptions: list[str] = Field(default_factory=list)
    facts_consumed: list[str] = Field(default_factory=list)
    conclusion: VerdictConclusion
    target: str = Field(..., description="Representation space M_{f,D}")
    reasons: list[str] = Field(default_factory=list)
    class_group_p_valuation_lower_bound: int = 0
    extension_degree_lower_bound: BigInt | None = None
    warnings: list[str] = Field(default_factory=list)

    @model_validator(mode="after")
    def _sound(self) -> Verdict:
        if self.conclusion is not VerdictConclusion.EXISTS_SURJECTION:
            return self
        ratio = self.ratio
        if not (
            self.conditions.all_hold()
            and self.conditions.tamdif.is_holds
            and ratio is not None
            and ratio.c_d != 0
            and ratio.c_d_prime != 0
            and ratio.valuation > 0
        ):
            raise ValueError("exists_surjection without its hypotheses")
        if not self.assumptions:
            raise ValueError("exists_surjection must list its assumptions")
        return self


class TableRow(BaseModel):
    """One row of a factored coefficient table."""

    model_config = ConfigDict(frozen=True)

    i: int
    n: int
    value: BigInt
    factored: str


class ScanRow(BaseModel):
    """One discriminant examined while searching for a positive ratio."""

    model_config = ConfigDict(frozen=True)

    discriminant: int
    c_d: BigInt
    admissible: bool = Field(..., description="c_D is nonzero")
    coefficient_valuation: int | None = None
    reference: int | None = Field(None, description="Reference discriminant D'")
    valuation: int | None = Field(None, description="Ratio valuation against D'")
