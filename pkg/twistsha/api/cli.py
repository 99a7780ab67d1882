"""Typer command-line application."""

from collections.abc import Callable, Iterator
from contextlib import contextmanager
from pathlib import Path
from typing import Annotated, Any, NoReturn, Optional

import structlog
import typer
from pydantic import BaseModel

from twistsha.api import render
from twistsha.application.config import ServiceConfig
from twistsha.application.use_cases import UseCases
from twistsha.domain.errors import InvalidInputError
from twistsha.domain.models import FormId, ShaConclusion, VerdictConclusion
from twistsha.infrastructure.facts_file import JsonFactsSource
from twistsha.infrastructure.json_cache import JsonCoefficientStore
from twistsha.infrastructure.logging import init_logger

logger = structlog.get_logger()

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_INVALID = 2
EXIT_INCONCLUSIVE = 3

app = typer.Typer(
    name="twistsha",
    help="Plus-space coefficients, Sha ratios and class-group surjection certificates.",
    no_args_is_help=True,
    add_completion=False,
    pretty_exceptions_enable=False,
)

FactsOption = Annotated[
    Optional[Path],  # noqa: UP007
    typer.Option("--facts", help="FactsFile with externally asserted facts"),
]
CacheOption = Annotated[
    Optional[Path],  # noqa: UP007
    typer.Option("--cache", help="Cache directory (default: TWISTSHA_CACHE)"),
]
JsonOption = Annotated[
    bool, typer.Option("--json/--text", help="Machine-readable JSON or plain text")
]
StampOption = Annotated[
    bool, typer.Option("--stamp", help="Add a timestamp to the provenance block")
]


def _fail(code: int, message: str) -> NoReturn:
    typer.echo(f"error: {message}", err=True)
    raise typer.Exit(code)


@contextmanager
def _guard(command: str) -> Iterator[None]:
    """Maps domain errors onto the exit-code contract."""
    try:
        yield
    except (InvalidInputError, ValueError) as e:
        logger.error("Invalid input", command=command, error=str(e))
        _fail(EXIT_INVALID, str(e))
    except Exception as e:
        logger.error("Command failed", command=command, error=str(e))
        _fail(EXIT_INTERNAL, str(e))


def _config(ctx: typer.Context) -> ServiceConfig:
    config: ServiceConfig = ctx.obj
    return config


def _use_cases(
    ctx: typer.Context, facts: Path | None = None, cache: Path | None = None
) -> UseCases:
    config = _config(ctx)
    cache = cache or config.cache
    facts = facts or config.facts
    store = JsonCoefficientStore(cache) if cache else None
    facts_source = JsonFactsSource(facts) if facts else None
    return UseCases(store, facts_source)


def _emit(
    result: BaseModel | list[Any] | dict[str, Any],
    command: str,
    json_output: bool,
    stamp: bool,
    text: Callable[[], str],
) -> None:
    if json_output:
        typer.echo(render.to_json(render.document(result, command, stamp)), nl=False)
    else:
        typer.echo(text())


@app.callback()
def configure(ctx: typer.Context) -> None:
    """Loads configuration and initializes logging to stderr."""
    try:
        config = ServiceConfig()
    except Exception as e:
        _fail(EXIT_INTERNAL, f"failed to load configuration: {e}")
    init_logger(config.logger.format, config.logger.level)
    ctx.obj = config


@app.command()
def expand(
    ctx: typer.Context,
    form: Annotated[str, typer.Argument(help="delta, g4, theta, x0_11 or kohnen-lift")],
    terms: Annotated[int, typer.Argument(help="Highest exponent", min=1)],
    cache: CacheOption = None,
    json_output: JsonOption = True,
    stamp: StampOption = False,
) -> None:
    """Prints the coefficients of q^0 through q^terms."""
    with _guard("expand"):
        form_id = FormId.parse(form)
        series = _use_cases(ctx, cache=cache).expand(form_id, terms)
    _emit(
        render.expansion_body(form_id.value, series),
        "expand",
        json_output,
        stamp,
        lambda: render.expansion_text(series),
    )


@app.command()
def coeff(
    ctx: typer.Context,
    n: Annotated[int, typer.Argument(help="Index of the plus-space coefficient")],
    cache: CacheOption = None,
    json_output: JsonOption = True,
    stamp: StampOption = False,
) -> None:
    """Prints c_n of the weight-13/2 plus-space form attached to Delta."""
    with _guard("coeff"):
        coefficient = _use_cases(ctx, cache=cache).coefficient(n)
    _emit(
        coefficient, "coeff", json_output, stamp, lambda: render.coefficient_text(coefficient)
    )


@app.command()
def table(
    ctx: typer.Context,
    p: Annotated[int, typer.Argument(help="Step of the table")],
    i_from: Annotated[int, typer.Argument(help="First multiplier")],
    i_to: Annotated[int, typer.Argument(help="Last multiplier")],
    cache: CacheOption = None,
    json_output: JsonOption = True,
    stamp: StampOption = False,
) -> None:
    """Prints i | p*i | c_(p*i) with signed factorizations."""
    with _guard("table"):
        rows = _use_cases(ctx, cache=cache).table(p, i_from, i_to)
    _emit(rows, "table", json_output, stamp, lambda: render.table_text(rows))


@app.command()
def check(
    ctx: typer.Context,
    p: Annotated[int, typer.Argument(help="Odd prime")],
    d: Annotated[int, typer.Argument(help="Twisting discriminant")],
    form: Annotated[str, typer.Option("--form", help="delta or x0_11")] = "delta",
    weight: Annotated[
        Optional[int],  # noqa: UP007
        typer.Option("--weight", help="Weight of a custom form"),
    ] = None,
    level: Annotated[
        Optional[int],  # noqa: UP007
        typer.Option("--level", help="Level of a custom form"),
    ] = None,
    a_p: Annotated[
        Optional[int],  # noqa: UP007
        typer.Option("--ap", help="a_p of a custom form"),
    ] = None,
    facts: FactsOption = None,
    cache: CacheOption = None,
    json_output: JsonOption = True,
    stamp: StampOption = False,
) -> None:
    """Evaluates conditions (A)-(D) for one twist; exit 3 unless all hold."""
    with _guard("check"):
        custom = weight is not None or level is not None or a_p is not None
        form_id = None if custom else FormId.parse(form)
        report = _use_cases(ctx, facts, cache).check(p, d, form_id, weight, level, a_p)
    _emit(report, "check", json_output, stamp, lambda: render.report_text(report))
    if not report.all_hold():
        raise typer.Exit(EXIT_INCONCLUSIVE)


@app.command()
def ratio(
    ctx: typer.Context,
    p: Annotated[int, typer.Argument(help="Odd prime")],
    d: Annotated[int, typer.Argument(help="Discriminant D")],
    d_prime: Annotated[int, typer.Argument(help="Reference discriminant D'")],
    facts: FactsOption = None,
    cache: CacheOption = None,
    json_output: JsonOption = True,
    stamp: StampOption = False,
) -> None:
    """Computes v_p(#Sha(D)/#Sha(D')) for twists of Delta."""
    with _guard("ratio"):
        cert = _use_cases(ctx, facts, cache).ratio(p, d, d_prime)
    _emit(cert, "ratio", json_output, stamp, lambda: render.ratio_text(cert))
    if cert.conclusion is ShaConclusion.INCONCLUSIVE:
        raise typer.Exit(EXIT_INCONCLUSIVE)


@app.command()
def verdict(
    ctx: typer.Context,
    p: Annotated[int, typer.Argument(help="Odd prime")],
    d: Annotated[int, typer.Argument(help="Discriminant D of the target twist")],
    d_prime: Annotated[int, typer.Argument(help="Reference discriminant D'")],
    facts: FactsOption = None,
    cache: CacheOption = None,
    json_output: JsonOption = True,
    stamp: StampOption = False,
) -> None:
    """Certifies a surjection cl(K_(f,D)) (x) F_p -> M_(f,D); exit 3 if inconclusive."""
    with _guard("verdict"):
        result = _use_cases(ctx, facts, cache).verdict(p, d, d_prime)
    _emit(result, "verdict", json_output, stamp, lambda: render.verdict_text(result))
    if result.conclusion is VerdictConclusion.INCONCLUSIVE:
        raise typer.Exit(EXIT_INCONCLUSIVE)


@app.command()
def scan(
    ctx: typer.Context,
    p: Annotated[int, typer.Argument(help="Odd prime")],
    max_d: Annotated[int, typer.Argument(help="Largest discriminant examined")],
    cache: CacheOption = None,
    json_output: JsonOption = True,
    stamp: StampOption = False,
) -> None:
    """Lists fundamental D <= max_d with p | D and their ratio valuations."""
    with _guard("scan"):
        rows = _use_cases(ctx, cache=cache).scan(p, max_d)
    _emit(rows, "scan", json_output, stamp, lambda: render.scan_text(rows))
