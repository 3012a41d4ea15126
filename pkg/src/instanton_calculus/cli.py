"""
Command-line interface for instanton-calculus.

Provides commands for surgery dimensions, slope bounds, concordance sums,
inference over knot records, the parity and identity verifiers, the graded
triangle chase, and knot database import/export.
"""

from __future__ import annotations

import functools
import logging
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import Any

import click

from . import __version__
from .config import Settings, load_settings
from .domain.graded import GradedDim
from .domain.models import Bundle, KnotRecord
from .domain.slopes import Slope
from .repository.base import KnotRepository
from .repository.json_repo import (
    JsonKnotRepository,
    load_database,
    load_record,
    load_seed_database,
    merge_records,
    save_database,
)
from .services.concordance_service import (
    SumExpr,
    Summand,
    compare,
    epsilon_or_unknown,
    mirror,
    sum_invariants,
)
from .services.graded_toolkit import section9_contradiction, solve_section9
from .services.inference_service import apply_rules
from .services.parity_verifier import VerificationFailure, sweep, verify_identities
from .services.surgery_service import (
    FeasibleSurgery,
    classify_small,
    dim_surgery,
    slope_bound,
)
from .utils.formatting import FORMATS, format_cell, render_report

logger = logging.getLogger(__name__)

MIRROR_PREFIX = "mirror:"
# Arguments such as -1/4 or -3 are values, not options.
NEGATIVE_ARGS = {"ignore_unknown_options": True}


# Custom command class to show full help text
class CustomGroup(click.Group):
    """Custom Click group that shows full command help without truncation."""

    def format_commands(self, ctx, formatter):
        """Format commands with full descriptions."""
        commands = []
        for subcommand in self.list_commands(ctx):
            cmd = self.get_command(ctx, subcommand)
            if cmd is None:
                continue
            help_text = cmd.get_short_help_str(limit=999)
            commands.append((subcommand, help_text))

        if commands:
            with formatter.section("Commands"):
                formatter.write_dl(commands)


def configure_logging(verbose: bool = False) -> None:
    """Configure logging with appropriate level.

    Args:
        verbose: Enable debug logging
    """
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )


# ── Shared plumbing ──────────────────────────────────────────────────────


def common_options(func: Callable[..., Any]) -> Callable[..., Any]:
    """--config, --db, --format and --verbose/--quiet for every command."""
    func = click.option(
        "--verbose/--quiet", default=None, help="Enable verbose output"
    )(func)
    func = click.option(
        "--format",
        "output_format",
        type=click.Choice(FORMATS),
        default=None,
        help="Output format (default from config: human)",
    )(func)
    func = click.option(
        "--db",
        "db_path",
        type=click.Path(dir_okay=False, path_type=Path),
        default=None,
        help="Knot database JSON file (overrides INSTANTON_CALCULUS_DATABASE_PATH)",
    )(func)
    func = click.option(
        "--config",
        type=click.Path(exists=True, dir_okay=False, path_type=Path),
        default=None,
        help="Path to configuration YAML file",
    )(func)
    return func


def reported(func: Callable[..., Any]) -> Callable[..., Any]:
    """Log domain errors and abort with exit code 1."""

    @functools.wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return func(*args, **kwargs)
        except (ValueError, FileNotFoundError) as e:
            logger.error(f"❌ {e}")
            raise click.Abort() from e

    return wrapper


def setup(
    config: Path | None,
    db_path: Path | None,
    output_format: str | None,
    verbose: bool | None,
) -> Settings:
    settings = load_settings(config)
    updates: dict[str, Any] = {}
    if db_path is not None:
        updates["database_path"] = db_path.expanduser()
    if output_format is not None:
        updates["output_format"] = output_format
    if verbose is not None:
        updates["verbose"] = verbose
    if updates:
        settings = settings.model_copy(update=updates)
    configure_logging(settings.verbose)
    logger.debug("Settings: %s", settings.model_dump())
    return settings


def resolve_knot(repo: KnotRepository, ref: str) -> KnotRecord:
    """``NAME`` or ``mirror:NAME``."""
    if ref.startswith(MIRROR_PREFIX):
        return mirror(repo.get_record(ref[len(MIRROR_PREFIX) :]))
    return repo.get_record(ref)


def _summand(repo: KnotRepository, ref: str) -> Summand:
    if ref.startswith(MIRROR_PREFIX):
        return Summand(record=repo.get_record(ref[len(MIRROR_PREFIX) :]), mirrored=True)
    return Summand(record=repo.get_record(ref))


def _compact(values: Sequence[Any]) -> str:
    if len(values) > 8:
        return f"{{{values[0]}..{values[-1]}}} ({len(values)} values)"
    return format_cell(list(values))


def _signed_slopes(cases: Sequence[FeasibleSurgery]) -> str:
    slopes = {(c.p, c.q) for c in cases}
    parts = []
    for a, q in sorted({(abs(p), q) for p, q in slopes}, key=lambda t: (t[1], t[0])):
        text = str(a) if q == 1 else f"{a}/{q}"
        if (a, q) in slopes and (-a, q) in slopes:
            parts.append(f"±{text}")
        else:
            parts.append(text if (a, q) in slopes else f"-{text}")
    return "{" + ", ".join(parts) + "}"


def _parse_fact(raw: str) -> tuple[str, Any]:
    if "=" not in raw:
        raise ValueError(f"fact {raw!r} must look like field=value")
    key, text = (s.strip() for s in raw.split("=", 1))
    lowered = text.lower()
    value: Any
    if lowered in ("true", "yes"):
        value = True
    elif lowered in ("false", "no"):
        value = False
    elif lowered in ("none", "unknown", ""):
        value = None
    else:
        try:
            value = int(text)
        except ValueError:
            value = text
    return key, value


def _with_facts(base: KnotRecord, facts: Sequence[str]) -> KnotRecord:
    data = base.model_dump()
    for raw in facts:
        key, value = _parse_fact(raw)
        group, _, flag = key.partition(".")
        if flag and group in ("flags", "mirror_flags"):
            data[group][flag] = value
        elif key == "name" or key in KnotRecord.model_fields:
            data[key] = value
        else:
            raise ValueError(f"unknown record field {key!r}")
    if data.get("froyshov_plus1") is None:
        data["froyshov_plus1"] = "unknown"
    if data.get("froyshov_minus1") is None:
        data["froyshov_minus1"] = "unknown"
    return KnotRecord.model_validate(data)


# ═══════════════════════════════════════════════════════════════════════════
# COMMANDS
# ═══════════════════════════════════════════════════════════════════════════


@click.group(cls=CustomGroup, context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(__version__, prog_name="instanton-calculus")
def cli() -> None:
    """instanton-calculus - exact calculus for the framed instanton knot invariants.

    Quick start:

        instanton-calculus dim fig8 0/1 --bundle meridional

        instanton-calculus bound 3

        instanton-calculus verify-parity --h-max 8 --k-max 4
    """


@cli.command(context_settings=NEGATIVE_ARGS)
@click.argument("knot")
@click.argument("slope")
@click.option(
    "--bundle",
    type=click.Choice([b.value for b in Bundle]),
    default=Bundle.TRIVIAL.value,
    help="Bundle for zero surgery",
)
@common_options
@reported
def dim(
    knot: str,
    slope: str,
    bundle: str,
    config: Path | None,
    db_path: Path | None,
    output_format: str | None,
    verbose: bool | None,
) -> None:
    """Dimension of I# of a rational surgery on a knot (KNOT may be mirror:NAME)."""
    settings = setup(config, db_path, output_format, verbose)
    repo = JsonKnotRepository(settings.database_path)
    rec = resolve_knot(repo, knot)
    s = Slope.parse(slope)
    dims = dim_surgery(rec, s, Bundle(bundle))
    payload = {"knot": rec.name, "slope": str(s), "bundle": bundle, "dimension": sorted(dims)}
    line = f"dim I#(S^3_{s}({rec.name})) = {format_cell(sorted(dims))}"
    click.echo(render_report(payload, settings.output_format, [line]))


@cli.command(context_settings=NEGATIVE_ARGS)
@click.argument("knot")
@click.argument("slopes", nargs=-1)
@click.option("--min", "n_min", type=int, default=-3, help="Smallest integer slope")
@click.option("--max", "n_max", type=int, default=3, help="Largest integer slope")
@click.option(
    "--bundle",
    type=click.Choice([b.value for b in Bundle]),
    default=Bundle.TRIVIAL.value,
    help="Bundle for zero surgery",
)
@common_options
@reported
def table(
    knot: str,
    slopes: tuple[str, ...],
    n_min: int,
    n_max: int,
    bundle: str,
    config: Path | None,
    db_path: Path | None,
    output_format: str | None,
    verbose: bool | None,
) -> None:
    """Dimension table over SLOPES, or over the integers --min..--max."""
    settings = setup(config, db_path, output_format, verbose)
    repo = JsonKnotRepository(settings.database_path)
    rec = resolve_knot(repo, knot)
    if n_min > n_max:
        raise ValueError(f"--min {n_min} exceeds --max {n_max}")
    chosen = [Slope.parse(s) for s in slopes] or [Slope(p=n, q=1) for n in range(n_min, n_max + 1)]
    rows = [
        {"slope": str(s), "dimension": sorted(dim_surgery(rec, s, Bundle(bundle)))}
        for s in chosen
    ]
    payload = {"knot": rec.name, "bundle": bundle, "rows": rows}
    header = f"{rec.name} (nu# = {rec.nu_sharp}, r0 = {rec.r0}), {bundle} bundle"
    click.echo(
        render_report(payload, settings.output_format, [header], rows, ("slope", "dimension"))
    )


@cli.command()
@click.argument("dimension", type=int, required=False)
@click.option(
    "--khovanov",
    type=int,
    default=None,
    help="Bound the branched double cover of a link L with dim Khodd(L) = D",
)
@click.option(
    "--include-exceptional",
    is_flag=True,
    help="Also allow the unknot, the trefoils and the figure eight",
)
@common_options
@reported
def bound(
    dimension: int | None,
    khovanov: int | None,
    include_exceptional: bool,
    config: Path | None,
    db_path: Path | None,
    output_format: str | None,
    verbose: bool | None,
) -> None:
    """Denominator bound for surgeries with dim I# = DIMENSION."""
    settings = setup(config, db_path, output_format, verbose)
    if (dimension is None) == (khovanov is None):
        raise click.UsageError("give exactly one of DIMENSION or --khovanov D")
    d = dimension if dimension is not None else khovanov
    result = slope_bound(d, exclude_exceptional=not include_exceptional)  # type: ignore[arg-type]
    lines = []
    if khovanov is not None:
        lines.append(
            f"Sigma(L) = S^3_p/q(K) with dim Khodd(L) = {khovanov} >= dim I#(Sigma(L))"
        )
    summary = f"q ≤ {result.q_max}"
    if result.equality_cases:
        summary += f"; equality: p/q ∈ {_signed_slopes(result.equality_cases)}"
    lines.append(summary)
    if khovanov is not None and khovanov == 3 and not include_exceptional:
        lines.append("det(L) is odd, so equality forces L to be a knot with dim Khodd(L) = 3")
    lines.append(f"{len(result.feasible)} feasible (p/q, nu#, r0) combinations")
    rows = [f.model_dump() | {"slope": f.slope} for f in result.feasible]
    payload = result.model_dump() | {"khovanov": khovanov is not None}
    click.echo(
        render_report(
            payload, settings.output_format, lines, rows if settings.output_format == "tsv" else None,
            ("slope", "p", "q", "nu_sharp", "r0"),
        )
    )


@cli.command(context_settings=NEGATIVE_ARGS)
@click.argument("nu", type=int)
@click.argument("r0", type=int)
@common_options
@reported
def classify(
    nu: int,
    r0: int,
    config: Path | None,
    db_path: Path | None,
    output_format: str | None,
    verbose: bool | None,
) -> None:
    """Identify or constrain a knot from (nu#, r0)."""
    settings = setup(config, db_path, output_format, verbose)
    result = classify_small(nu, r0)
    lines = [f"(nu#, r0) = ({nu}, {r0}): {result.summary}"]
    lines += [f"  - {c}" for c in result.constraints if c != result.summary]
    if result.conjecture:
        lines.append(f"  conjecture: {result.conjecture}")
    click.echo(render_report(result.model_dump(), settings.output_format, lines))


@cli.command(name="sum")
@click.argument("terms", nargs=-1, required=True)
@common_options
@reported
def sum_cmd(
    terms: tuple[str, ...],
    config: Path | None,
    db_path: Path | None,
    output_format: str | None,
    verbose: bool | None,
) -> None:
    """Invariants of a connected sum of TERMS (each NAME or mirror:NAME)."""
    settings = setup(config, db_path, output_format, verbose)
    repo = JsonKnotRepository(settings.database_path)
    expr = SumExpr(summands=tuple(_summand(repo, t) for t in terms))
    report = sum_invariants(expr)
    lines = [
        report.expression,
        f"  nu#  ∈ {format_cell(report.nu_sharp) if report.nu_sharp else 'unknown'}",
        f"  tau# = {report.tau_sharp if report.tau_sharp is not None else 'unknown'}",
        f"  eps# = {report.epsilon if report.epsilon is not None else 'unknown'}",
        f"  shape = {report.shape.value if report.shape else 'unknown'}",
    ]
    lines += [f"  note: {n}" for n in report.notes]
    click.echo(render_report(report.model_dump(mode="json"), settings.output_format, lines))


@cli.command(name="compare")
@click.argument("first")
@click.argument("second")
@common_options
@reported
def compare_cmd(
    first: str,
    second: str,
    config: Path | None,
    db_path: Path | None,
    output_format: str | None,
    verbose: bool | None,
) -> None:
    """Order two knots by eps# of FIRST # mirror(SECOND)."""
    settings = setup(config, db_path, output_format, verbose)
    repo = JsonKnotRepository(settings.database_path)
    a, b = resolve_knot(repo, first), resolve_knot(repo, second)
    verdict = compare(a, b)
    payload = {
        "first": a.name,
        "second": b.name,
        "comparison": verdict.value,
        "epsilon_first": epsilon_or_unknown(a).value,
        "epsilon_second": epsilon_or_unknown(b).value,
    }
    click.echo(render_report(payload, settings.output_format, [f"{a.name} vs {b.name}: {verdict.value}"]))


@cli.command()
@click.argument("knot", required=False)
@click.option(
    "--fact",
    "facts",
    multiple=True,
    help="Assert field=value (e.g. slice_genus=2, flags.slice=false); repeatable",
)
@click.option("--bound", "nu_bound", type=int, default=None, help="Bound on |nu#|")
@common_options
@reported
def infer(
    knot: str | None,
    facts: tuple[str, ...],
    nu_bound: int | None,
    config: Path | None,
    db_path: Path | None,
    output_format: str | None,
    verbose: bool | None,
) -> None:
    """Derive everything the inference rules force for KNOT and/or --fact values.

    KNOT is a database name, mirror:NAME, or a JSON file holding one record.
    """
    settings = setup(config, db_path, output_format, verbose)
    if knot is None and not facts:
        raise click.UsageError("give a KNOT, some --fact values, or both")
    if knot is None:
        base = KnotRecord(name="query")
    elif Path(knot).is_file():
        base = load_record(Path(knot))
    else:
        base = resolve_knot(JsonKnotRepository(settings.database_path), knot)
    record = _with_facts(base, facts)
    result = apply_rules(record, nu_bound or settings.nu_bound)

    rows = [
        {
            "field": d.field,
            "from": _compact(d.before),
            "to": _compact(d.after),
            "rule": d.rule_id,
            "source_anchor": d.source_anchor,
        }
        for d in result.derivations
    ]
    lines = [f"Inference for {record.name}: {len(result.derivations)} derivation(s)"]
    lines += [f"  [{s.rule_id}] {s.text}" for s in result.statements]
    lines += [f"  contradiction: {c.message}" for c in result.contradictions]
    payload = {
        "record": result.record.to_json_dict(),
        "consistent": result.consistent,
        "derivations": [d.model_dump() for d in result.derivations],
        "statements": [s.model_dump() for s in result.statements],
        "contradictions": [c.model_dump() for c in result.contradictions],
    }
    click.echo(
        render_report(
            payload,
            settings.output_format,
            lines,
            rows,
            ("field", "from", "to", "rule", "source_anchor"),
        )
    )
    if not result.consistent:
        logger.error(f"❌ {record.name} is inconsistent")
        raise click.Abort()


@cli.command(name="verify-parity")
@click.option("--h-max", type=int, default=None, help="Largest h (default from config: 12)")
@click.option("--k-max", type=int, default=None, help="Largest index-set size (default 5)")
@click.option("--jobs", type=int, default=None, help="Worker processes (default 1)")
@common_options
@reported
def verify_parity(
    h_max: int | None,
    k_max: int | None,
    jobs: int | None,
    config: Path | None,
    db_path: Path | None,
    output_format: str | None,
    verbose: bool | None,
) -> None:
    """Exhaustive kernel/singularity check of the binomial matrices N and M."""
    settings = setup(config, db_path, output_format, verbose)
    report = sweep(h_max or settings.h_max, k_max or settings.k_max, jobs or settings.jobs)
    rows = [r.model_dump() for r in report.rows]
    status = "all passed" if report.passed else f"{len(report.failed)} FAILED"
    lines = [
        f"Checked {report.total_cases} index sets (h ≤ {report.h_max}, k ≤ {report.k_max}): {status}"
    ]
    lines += [f"  {f.h} {f.indices}: {'; '.join(f.problems)}" for f in report.failed]
    payload = report.model_dump() | {"passed": report.passed, "total_cases": report.total_cases}
    click.echo(render_report(payload, settings.output_format, lines, rows, ("h", "k", "cases", "failures")))
    if not report.passed:
        raise VerificationFailure(f"{len(report.failed)} index sets failed")


@cli.command(name="verify-identities")
@common_options
@reported
def verify_identities_cmd(
    config: Path | None,
    db_path: Path | None,
    output_format: str | None,
    verbose: bool | None,
) -> None:
    """Run the binomial identity suite behind the coefficient formulas."""
    settings = setup(config, db_path, output_format, verbose)
    checks = verify_identities()
    rows = [c.model_dump() | {"passed": c.passed} for c in checks]
    failed = [c for c in checks if not c.passed]
    lines = [f"{len(checks) - len(failed)}/{len(checks)} identity checks passed"]
    payload = {"checks": rows, "passed": not failed}
    click.echo(
        render_report(payload, settings.output_format, lines, rows, ("name", "cases", "failures", "passed"))
    )
    if failed:
        raise VerificationFailure(", ".join(c.name for c in failed))


def _parse_gradings(text: str | None) -> GradedDim | None:
    if text is None:
        return None
    try:
        return GradedDim.of(*(int(g) for g in text.split(",") if g.strip()))
    except ValueError as e:
        raise ValueError(f"invalid gradings {text!r}; expected e.g. 2,3") from e


@cli.command(name="graded-solve")
@click.option("--dim-zero", type=int, default=2, help="Total dimension of I#(S^3_0(K))")
@click.option("--zero", "zero_gradings", default=None, help="Force I#(S^3_0(K)), e.g. 2,3")
@common_options
@reported
def graded_solve(
    dim_zero: int,
    zero_gradings: str | None,
    config: Path | None,
    db_path: Path | None,
    output_format: str | None,
    verbose: bool | None,
) -> None:
    """Solve both surgery triangles for a knot with (nu#, r0) = (0, 2)."""
    settings = setup(config, db_path, output_format, verbose)
    solutions = solve_section9(dim_zero, _parse_gradings(zero_gradings))
    rows = [s.as_dict() for s in solutions]
    lines = [f"{len(solutions)} solution(s) with dim I#(S^3_0(K)) = {dim_zero}"]
    payload = {"dim_zero_total": dim_zero, "solutions": rows}
    click.echo(
        render_report(
            payload, settings.output_format, lines, rows,
            ("k", "m", "minus_one", "plus_one", "zero", "map_ranks"),
        )
    )


@cli.command()
@click.option("--alexander-a", type=int, default=None, help="Override the Alexander coefficient a")
@click.option("--dim-zero", type=int, default=2, help="Total dimension of I#(S^3_0(K))")
@click.option("--froyshov", type=int, default=1, help="h(S^3_{-1}(K))")
@common_options
@reported
def section9(
    alexander_a: int | None,
    dim_zero: int,
    froyshov: int,
    config: Path | None,
    db_path: Path | None,
    output_format: str | None,
    verbose: bool | None,
) -> None:
    """Rule out (nu#, r0) = (0, 2) with small zero surgery beyond the figure eight."""
    settings = setup(config, db_path, output_format, verbose)
    report = section9_contradiction(alexander_a, dim_zero, froyshov)
    lines = [f"{i}. {step}" for i, step in enumerate(report.steps, start=1)]
    lines.append("contradiction" if report.contradiction else "no contradiction")
    click.echo(render_report(report.model_dump(), settings.output_format, lines))
    defaults = alexander_a is None and dim_zero == 2 and froyshov == 1
    if defaults and not report.contradiction:
        raise VerificationFailure("the triangle chase did not reach its contradiction")


# ── Database ─────────────────────────────────────────────────────────────


@cli.group(cls=CustomGroup)
def db() -> None:
    """Import into and export the knot database."""


@db.command(name="import")
@click.argument("file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--derive", is_flag=True, help="Store facts derived by the inference rules")
@click.option("--force", is_flag=True, help="Accept records the rules refute")
@common_options
@reported
def db_import(
    file: Path,
    derive: bool,
    force: bool,
    config: Path | None,
    db_path: Path | None,
    output_format: str | None,
    verbose: bool | None,
) -> None:
    """Merge the records of FILE into the active database file."""
    settings = setup(config, db_path, output_format, verbose)
    target_path = settings.database_path
    if target_path is None:
        raise click.UsageError(
            "no database file: pass --db or set INSTANTON_CALCULUS_DATABASE_PATH"
        )
    target = load_database(target_path, force) if target_path.exists() else load_seed_database()
    incoming = load_database(file, force, settings.nu_bound)
    merged = merge_records(target, incoming, derive=derive, bound=settings.nu_bound)
    save_database(target, target_path)
    payload = {"database": str(target_path), "imported": merged}
    click.echo(
        render_report(
            payload, settings.output_format,
            [f"Imported {len(merged)} record(s) into {target_path}: {', '.join(merged)}"],
        )
    )


@db.command(name="export")
@click.argument("file", type=click.Path(dir_okay=False, path_type=Path))
@common_options
@reported
def db_export(
    file: Path,
    config: Path | None,
    db_path: Path | None,
    output_format: str | None,
    verbose: bool | None,
) -> None:
    """Write the active database to FILE in canonical form."""
    settings = setup(config, db_path, output_format, verbose)
    database = JsonKnotRepository(settings.database_path).database
    save_database(database, file)
    payload = {"file": str(file), "records": sorted(database.records)}
    click.echo(
        render_report(
            payload, settings.output_format, [f"Exported {len(database.records)} record(s) to {file}"]
        )
    )


def main(argv: Sequence[str] | None = None) -> int:
    """Run the CLI and return its exit code.

    0 on success, 1 on domain or usage errors, 2 on verification failures.
    """
    try:
        rv = cli.main(
            args=list(argv) if argv is not None else None,
            prog_name="instanton-calculus",
            standalone_mode=False,
        )
    except VerificationFailure as e:
        logger.error(f"❌ Verification failed: {e}")
        return 2
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.ClickException as e:
        e.show()
        return 1
    except click.Abort:
        return 1
    return rv if isinstance(rv, int) else 0
