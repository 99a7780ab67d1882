"""Deterministic JSON documents and plain-text reports."""

import json
from collections.abc import Sequence
from datetime import UTC, datetime
from typing import Any

from pydantic import BaseModel

from twistsha import __version__
from twistsha.domain.arith import render_factored
from twistsha.domain.forms import FORMULA_VERSION
from twistsha.domain.models import (
    ConditionReport,
    PlusCoefficient,
    RatioCertificate,
    ScanRow,
    TableRow,
    Tri,
    Verdict,
)
from twistsha.domain.qseries import QSeries


def expansion_body(form: str, series: QSeries) -> dict[str, Any]:
    return {
        "form": form,
        "prec": series.prec,
        "coefficients": [str(c) for c in series.coeffs],
    }


def document(
    result: BaseModel | Sequence[BaseModel] | dict[str, Any],
    command: str,
    stamp: bool = False,
) -> dict[str, Any]:
    """Wraps a result with its provenance block; lists become `rows`."""
    if isinstance(result, BaseModel):
        body = result.model_dump(mode="json", by_alias=True)
    elif isinstance(result, dict):
        body = dict(result)
    else:
        body = {"rows": [row.model_dump(mode="json", by_alias=True) for row in result]}

    provenance: dict[str, Any] = {
        "command": command,
        "formula_version": FORMULA_VERSION,
        "tool": "twistsha",
        "version": __version__,
    }
    if stamp:
        provenance["timestamp"] = datetime.now(UTC).isoformat(timespec="seconds")
    body["provenance"] = provenance
    return body


def to_json(doc: dict[str, Any]) -> str:
    """UTF-8 friendly, key-sorted and newline-terminated."""
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def expansion_text(series: QSeries) -> str:
    return ", ".join(str(c) for c in series.coeffs)


def coefficient_text(coefficient: PlusCoefficient) -> str:
    return f"c_{coefficient.index} = {render_factored(coefficient.value)}"


def table_text(rows: Sequence[TableRow]) -> str:
    return "\n".join(f"{row.i} | {row.n} | {row.factored}" for row in rows)


def _tri_line(name: str, tri: Tri) -> str:
    line = f"{name}: {tri.state.value}"
    if tri.reason:
        line += f" ({tri.reason})"
    if tri.fact_dependencies:
        line += f" [facts: {', '.join(tri.fact_dependencies)}]"
    return line


def report_text(report: ConditionReport) -> str:
    lines = [
        _tri_line("A", report.a),
        _tri_line("B", report.b),
        _tri_line("C", report.c),
        _tri_line("D", report.d),
        _tri_line("Tamagawa at p", report.tamdif),
        f"case: {report.st3_case}",
    ]
    lines += [_tri_line(f"  {name}", tri) for name, tri in report.st3_violations.items()]
    if report.selmer_ledger is not None:
        lines.append(
            f"local bound: {report.selmer_bound} ({report.selmer_ledger.rule})"
        )
    lines += [f"warning: {warning}" for warning in report.warnings]
    return "\n".join(lines)


def ratio_text(cert: RatioCertificate) -> str:
    d, d_prime = cert.discriminant.value, cert.discriminant_prime.value
    return "\n".join(
        [
            f"c_{d} = {cert.c_d}={cert.c_d_factorization.render()}",
            f"c_{d_prime} = {cert.c_d_prime}={cert.c_d_prime_factorization.render()}",
            f"v_{cert.p}(c_D^2/c_D'^2 * (D'/D)^{cert.exponent}) = {cert.valuation}",
            f"conclusion: {cert.conclusion.value}",
        ]
    )


def verdict_text(verdict: Verdict) -> str:
    lines = [f"conclusion: {verdict.conclusion.value} onto {verdict.target}"]
    if verdict.ratio is not None:
        lines.append(ratio_text(verdict.ratio))
    lines.append(report_text(verdict.conditions))
    lines += [f"assumption: {item}" for item in verdict.assumptions]
    lines += [f"reason: {item}" for item in verdict.reasons]
    if verdict.extension_degree_lower_bound is not None:
        lines.append(
            f"[K_(f,D) : Q] >= #SL_2(F_p) = {verdict.extension_degree_lower_bound}"
        )
    return "\n".join(lines)


def scan_text(rows: Sequence[ScanRow]) -> str:
    lines = []
    for row in rows:
        if not row.admissible:
            lines.append(f"{row.discriminant} | 0 | inadmissible")
            continue
        against = "reference" if row.valuation is None else f"{row.valuation} vs {row.reference}"
        lines.append(
            f"{row.discriminant} | {row.c_d} | v={row.coefficient_valuation} | {against}"
        )
    return "\n".join(lines)
