"""Command-line front door.

Thin client over the library pipeline: every subcommand parses flags,
loads the referenced files, calls the same functions the HTTP service
wraps, and renders the report in the requested format.

Exit codes: 0 success, 1 validation/pipeline error, 2 usage error.
"""

from __future__ import annotations

import json
import os
import sys

import click

from .datastore import (
    generate_synthetic,
    ingest_csv,
    load_database,
    serialize_csv,
    validate_csv,
)
from .errors import MatselError
from .knowledgebase import default_rules, load_rules
from .metrics import ALL_METRICS, AxiomReport, MetricKind, check_metric_axioms
from .schema import (
    default_schema,
    load_schema,
    parse_requirement,
    parse_requirement_inline,
)
from .selector import ComparisonReport, SelectionMode, compare_metrics

METRIC_NAMES = tuple(k.value for k in ALL_METRICS)
MODE_NAMES = tuple(m.value for m in SelectionMode)
FORMATS = ("table", "json", "csv", "plotdata")


def _load_schema(path: str | None):
    return load_schema(path) if path else default_schema()


def _load_rules(path: str | None, schema):
    return load_rules(path, schema) if path else default_rules(schema)


def _load_requirement(spec_text: str, schema):
    """--req accepts a file path or an inline 'prop=value,prop=value' list."""
    if os.path.exists(spec_text):
        with open(spec_text, "r", encoding="utf-8") as fh:
            return parse_requirement(fh.read(), schema)
    if "=" in spec_text:
        return parse_requirement_inline(spec_text, schema)
    raise click.UsageError(
        f"--req {spec_text!r} is neither an existing file nor a 'prop=value,...' list"
    )


def _fail(exc: Exception) -> None:
    click.echo(f"error: {exc}", err=True)
    sys.exit(1)


schema_option = click.option(
    "--schema",
    "schema_path",
    envvar="MATSEL_SCHEMA",
    type=click.Path(),
    default=None,
    help="Schema file (default: bundled schema23; env MATSEL_SCHEMA).",
)
rules_option = click.option(
    "--rules",
    "rules_path",
    type=click.Path(),
    default=None,
    help="Rules file (default: bundled rules23).",
)
db_option = click.option("--db", "db_path", type=click.Path(), required=True, help="Materials CSV.")
format_option = click.option(
    "--format", "fmt", type=click.Choice(FORMATS), default="table", help="Output format."
)


@click.group()
@click.version_option(package_name="matsel")
def main():
    """Materials selection engine: classify, fragment, score, select."""


@main.command()
@db_option
@schema_option
def ingest(db_path, schema_path):
    """Load a materials CSV and report its size."""
    try:
        schema = _load_schema(schema_path)
        with open(db_path, "r", encoding="utf-8") as fh:
            db = ingest_csv(fh.read(), schema)
    except (MatselError, OSError) as exc:
        _fail(exc)
    counts = ", ".join(f"{c.value}: {n}" for c, n in db.class_counts().items())
    click.echo(f"N={len(db)} materials ({counts})")


@main.command()
@db_option
@schema_option
def validate(db_path, schema_path):
    """Validate a materials CSV, reporting every malformed row."""
    try:
        schema = _load_schema(schema_path)
        with open(db_path, "r", encoding="utf-8") as fh:
            content = fh.read()
    except (MatselError, OSError) as exc:
        _fail(exc)
    errors = validate_csv(content, schema)
    if errors:
        for err in errors:
            click.echo(f"error: {err}", err=True)
        sys.exit(1)
    db = ingest_csv(content, schema)
    click.echo(f"OK: N={len(db)} materials")


@main.command()
@click.option("--seed", type=int, default=0, show_default=True, help="RNG seed.")
@click.option("--count", type=click.IntRange(min=1), required=True, help="Materials to generate.")
@click.option("--out", "out_path", type=click.Path(), required=True, help="Output CSV path.")
@schema_option
def generate(seed, count, out_path, schema_path):
    """Generate a deterministic synthetic materials CSV."""
    try:
        schema = _load_schema(schema_path)
        db = generate_synthetic(seed, count, schema)
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(serialize_csv(db))
    except (MatselError, OSError) as exc:
        _fail(exc)
    click.echo(f"wrote {len(db)} materials to {out_path}")


def _run_pipeline(db_path, schema_path, rules_path, req_spec, metrics, mode, top_k, normalize):
    schema = _load_schema(schema_path)
    kb = _load_rules(rules_path, schema)
    db = load_database(db_path, schema)
    req = _load_requirement(req_spec, schema)
    return compare_metrics(
        db,
        req,
        kb,
        metrics,
        mode=SelectionMode(mode),
        normalize=normalize,
        top_k=top_k,
    )


@main.command()
@db_option
@schema_option
@rules_option
@click.option("--req", "req_spec", required=True, help="Requirement file or 'prop=value,...'.")
@click.option("--metric", type=click.Choice(METRIC_NAMES), default="euclidean", show_default=True)
@click.option("--mode", type=click.Choice(MODE_NAMES), default="oriented", show_default=True)
@click.option("--top-k", type=click.IntRange(min=1), default=10, show_default=True)
@click.option("--normalize", is_flag=True, default=False, help="Min-max normalize jointly.")
@format_option
def select(db_path, schema_path, rules_path, req_spec, metric, mode, top_k, normalize, fmt):
    """Classify a requirement and rank candidates under one metric."""
    try:
        comparison = _run_pipeline(
            db_path, schema_path, rules_path, req_spec,
            [MetricKind(metric)], mode, top_k, normalize,
        )
    except (MatselError, OSError) as exc:
        _fail(exc)
    click.echo(render_selection(comparison, fmt))


@main.command()
@db_option
@schema_option
@rules_option
@click.option("--req", "req_spec", required=True, help="Requirement file or 'prop=value,...'.")
@click.option(
    "--metric",
    type=click.Choice(METRIC_NAMES + ("all",)),
    multiple=True,
    default=("all",),
    show_default=True,
    help="Metric name; repeatable, or 'all'.",
)
@click.option("--mode", type=click.Choice(MODE_NAMES), default="oriented", show_default=True)
@click.option("--top-k", type=click.IntRange(min=1), default=None, help="Truncate rankings.")
@click.option("--normalize", is_flag=True, default=False, help="Min-max normalize jointly.")
@format_option
def compare(db_path, schema_path, rules_path, req_spec, metric, mode, top_k, normalize, fmt):
    """Classify a requirement and compare selections across metrics."""
    if "all" in metric:
        kinds = list(ALL_METRICS)
    else:
        kinds = [MetricKind(m) for m in metric]
    try:
        comparison = _run_pipeline(
            db_path, schema_path, rules_path, req_spec, kinds, mode, top_k, normalize
        )
    except (MatselError, OSError) as exc:
        _fail(exc)
    click.echo(render_comparison(comparison, fmt))


@main.command()
@click.option("--metric", type=click.Choice(METRIC_NAMES), required=True)
@click.option("--samples", type=click.IntRange(min=1), default=1000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--format", "fmt", type=click.Choice(("table", "json")), default="table")
def axioms(metric, samples, seed, fmt):
    """Check the four metric conditions on seeded random vectors."""
    report = check_metric_axioms(MetricKind(metric), samples, seed)
    click.echo(render_axioms(report, fmt))


@main.command()
@db_option
@schema_option
@rules_option
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--mode", type=click.Choice(MODE_NAMES), default="oriented", show_default=True)
@click.option("--cors-origin", multiple=True, default=("*",), help="Allowed CORS origin; repeatable.")
def serve(db_path, schema_path, rules_path, host, port, mode, cors_origin):
    """Run the HTTP/JSON query service."""
    from .service import ServiceConfig, run

    config = ServiceConfig(
        db_path=db_path,
        schema_path=schema_path,
        rules_path=rules_path,
        default_mode=SelectionMode(mode),
        cors_origins=tuple(cors_origin),
        host=host,
        port=port,
    )
    try:
        run(config)
    except (MatselError, OSError) as exc:
        _fail(exc)


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------

def render_selection(comparison: ComparisonReport, fmt: str) -> str:
    """Render a single-metric selection (full ranking detail)."""
    report = comparison.reports[0]
    if fmt == "json":
        return json.dumps(comparison.to_dict(), indent=2)
    if fmt == "csv":
        lines = ["rank,material_id,score"]
        lines += [f"{i},{mid},{s!r}" for i, (mid, s) in enumerate(report.ranking, start=1)]
        return "\n".join(lines)
    if fmt == "plotdata":
        return _plotdata(comparison)
    lines = [
        f"class: {comparison.material_class.value}"
        f" (rules fired: {', '.join(map(str, comparison.classification.index_pattern))})",
        f"metric: {report.metric.value} ({report.metric.orientation.value}), mode: {report.mode.value}"
        + (", normalized" if report.normalized else ""),
        f"winner: {report.winner_id}, degree of similarity: {report.degree_of_similarity:.6g}",
        "",
        _table(
            ("rank", "material_id", "score"),
            [(str(i), mid, f"{s:.6g}") for i, (mid, s) in enumerate(report.ranking, start=1)],
        ),
    ]
    if report.excluded:
        lines.append("")
        lines.append("excluded rows:")
        lines += [f"  {mid}: {reason}" for mid, reason in report.excluded]
    return "\n".join(lines)


def render_comparison(comparison: ComparisonReport, fmt: str) -> str:
    """Render a cross-metric comparison (one row per metric)."""
    if fmt == "json":
        return json.dumps(comparison.to_dict(), indent=2)
    if fmt == "csv":
        lines = ["metric,mode,winner_id,degree_of_similarity,normalized"]
        lines += [
            f"{r.metric.value},{r.mode.value},{r.winner_id},{r.degree_of_similarity!r},"
            f"{str(r.normalized).lower()}"
            for r in comparison.reports
        ]
        return "\n".join(lines)
    if fmt == "plotdata":
        return _plotdata(comparison)
    lines = [
        f"class: {comparison.material_class.value}"
        f" (rules fired: {', '.join(map(str, comparison.classification.index_pattern))})",
        f"mode: {comparison.mode.value}" + (", normalized" if comparison.normalized else ""),
        "",
        _table(
            ("metric", "orientation", "degree of similarity", "winner"),
            [
                (
                    r.metric.value,
                    r.metric.orientation.value,
                    f"{r.degree_of_similarity:.6g}",
                    r.winner_id,
                )
                for r in comparison.reports
            ],
        ),
    ]
    winners = {w.material_id: w for w in comparison.winners}
    if winners:
        lines.append("")
        lines.append("selected materials:")
        for w in winners.values():
            values = ", ".join(f"{name}={_cell(v)}" for name, v in w.values)
            lines.append(f"  {w.material_id} ({w.material_name}): {values}")
    return "\n".join(lines)


def render_axioms(report: AxiomReport, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report.to_dict(), indent=2)
    lines = [
        f"metric: {report.metric.value} ({report.metric.orientation.value}), "
        f"samples: {report.samples}, seed: {report.seed}"
    ]
    for check in (report.checks[name] for name in report.checks):
        verdict = "PASS" if check.ok else "FAIL"
        lines.append(f"  {check.name:<22} {verdict}  ({check.passed}/{check.passed + check.failed})")
    lines.append(f"metric axioms (strict distance reading): {'PASS' if report.is_metric else 'FAIL'}")
    return "\n".join(lines)


def _plotdata(comparison: ComparisonReport) -> str:
    """(metric, degree_of_similarity) pairs, one tab-separated pair per line."""
    return "\n".join(
        f"{r.metric.value}\t{r.degree_of_similarity!r}" for r in comparison.reports
    )


def _cell(value) -> str:
    from .schema import format_value_cell

    return format_value_cell(value)


def _table(header: tuple[str, ...], rows: list[tuple[str, ...]]) -> str:
    widths = [len(h) for h in header]
    for row in rows:
        widths = [max(w, len(c)) for w, c in zip(widths, row)]
    fmt_row = lambda cells: "  ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip()
    out = [fmt_row(header), fmt_row(tuple("-" * w for w in widths))]
    out += [fmt_row(row) for row in rows]
    return "\n".join(out)


if __name__ == "__main__":
    main()
