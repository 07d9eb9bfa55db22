"""Stateless HTTP/JSON query service over an immutable dataset.

Schema, rules and the materials database are loaded once at startup
(startup fails if any file does not load); every request is answered
from that shared immutable state, so any number of concurrent requests
yield the same answers as serial execution.

Endpoints::

    GET  /api/schema     property list in schema order
    POST /api/classify   requirement -> material class + index pattern
    POST /api/compare    requirement -> per-metric selection reports
    GET  /healthz        liveness + dataset row count

Requirement entries arrive as ordered (property, value) pairs; values
are JSON numbers (numeric), {"lo", "hi"} objects (interval), or strings
(ordinal labels, or any CSV cell form such as "0.23..0.56").

Malformed bodies answer 400; domain failures (unclassifiable
requirement, empty candidate set) answer 422.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import __version__
from .datastore import MaterialDatabase, load_database
from .errors import (
    MatselError,
    NoCandidatesError,
    RequirementError,
    UnclassifiableError,
)
from .knowledgebase import Knowledgebase, classify, default_rules, load_rules
from .metrics import ALL_METRICS, MetricKind
from .schema import (
    DesignRequirement,
    Interval,
    PropertySchema,
    PropertyValue,
    ValueKind,
    default_schema,
    load_schema,
    parse_value_cell,
    validate_value,
)
from .selector import DEFAULT_MODE, SelectionMode, compare_metrics


@dataclass(frozen=True)
class ServiceConfig:
    """Startup configuration; unset schema/rules paths use the bundled files."""

    db_path: str
    schema_path: str | None = None
    rules_path: str | None = None
    default_mode: SelectionMode = DEFAULT_MODE
    cors_origins: tuple[str, ...] = ("*",)
    host: str = "127.0.0.1"
    port: int = 8000


# ---------------------------------------------------------------------------
# Request / response models
# ---------------------------------------------------------------------------

class IntervalValue(BaseModel):
    lo: float
    hi: float


RequirementValue = Union[float, str, IntervalValue]


class RequirementEntry(BaseModel):
    property: str
    value: RequirementValue


class ClassifyRequest(BaseModel):
    requirement: list[RequirementEntry]


class CompareRequest(BaseModel):
    requirement: list[RequirementEntry]
    metrics: list[str] | None = Field(
        default=None, description="Metric names; defaults to all six."
    )
    mode: str | None = Field(default=None, description="paper-min or oriented.")
    normalize: bool = False
    top_k: int | None = Field(default=None, ge=1)


class SchemaProperty(BaseModel):
    name: str
    kind: str
    unit: str
    position: int
    ordinal_labels: list[str] | None = None


class SchemaResponse(BaseModel):
    properties: list[SchemaProperty]


class NodeEntry(BaseModel):
    property: str
    position: int


class ClassifyResponse(BaseModel):
    material_class: str
    index_pattern: list[int]
    node_list: list[NodeEntry]
    class_scores: dict[str, int]


class RankingEntry(BaseModel):
    material_id: str
    score: float


class ExclusionEntry(BaseModel):
    material_id: str
    reason: str


class SelectionReportModel(BaseModel):
    metric: str
    mode: str
    winner_id: str
    degree_of_similarity: float
    ranking: list[RankingEntry]
    normalized: bool
    excluded: list[ExclusionEntry]


class RequirementEcho(BaseModel):
    property: str
    value: RequirementValue


class WinnerModel(BaseModel):
    material_id: str
    material_name: str
    values: dict[str, RequirementValue]


class CompareResponse(BaseModel):
    requirement: list[RequirementEcho]
    material_class: str
    index_pattern: list[int]
    node_list: list[NodeEntry]
    mode: str
    normalized: bool
    reports: list[SelectionReportModel]
    winners: list[WinnerModel]


class HealthResponse(BaseModel):
    materials: int


# ---------------------------------------------------------------------------
# Request decoding
# ---------------------------------------------------------------------------

def _decode_requirement(
    entries: list[RequirementEntry], schema: PropertySchema
) -> DesignRequirement:
    if not entries:
        raise RequirementError("requirement must be non-empty")
    decoded: list[tuple[str, PropertyValue]] = []
    for entry in entries:
        if entry.property not in schema:
            raise RequirementError(f"unknown property {entry.property!r}")
        prop = schema[entry.property]
        value: PropertyValue
        if isinstance(entry.value, IntervalValue):
            value = Interval(entry.value.lo, entry.value.hi)
        elif isinstance(entry.value, str) and prop.kind is not ValueKind.ORDINAL:
            value = parse_value_cell(prop, entry.value)  # "20" or "0.23..0.56"
        else:
            value = entry.value
        decoded.append((entry.property, validate_value(prop, value)))
    return DesignRequirement(tuple(decoded))


def _parse_metrics(names: list[str] | None) -> tuple[MetricKind, ...]:
    if names is None:
        return ALL_METRICS
    if not names:
        raise RequirementError("metric list must be non-empty")
    return tuple(MetricKind.parse(name) for name in names)


# ---------------------------------------------------------------------------
# Application factory
# ---------------------------------------------------------------------------

@dataclass
class _Engine:
    """The immutable state shared by all requests."""

    schema: PropertySchema
    kb: Knowledgebase
    db: MaterialDatabase
    default_mode: SelectionMode


def load_engine(config: ServiceConfig) -> _Engine:
    schema = load_schema(config.schema_path) if config.schema_path else default_schema()
    kb = load_rules(config.rules_path, schema) if config.rules_path else default_rules(schema)
    db = load_database(config.db_path, schema)
    return _Engine(schema, kb, db, config.default_mode)


def create_app(config: ServiceConfig) -> FastAPI:
    """Build the service; all referenced files must load here or this raises."""
    engine = load_engine(config)

    app = FastAPI(title="matsel", version=__version__)
    app.state.engine = engine
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(config.cors_origins),
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(RequestValidationError)
    async def _malformed_body(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"detail": exc.errors()})

    @app.exception_handler(MatselError)
    async def _domain_error(request: Request, exc: MatselError):
        status = 422 if isinstance(exc, (UnclassifiableError, NoCandidatesError)) else 400
        return JSONResponse(status_code=status, content={"detail": str(exc)})

    @app.get("/api/schema", response_model=SchemaResponse)
    def get_schema() -> SchemaResponse:
        return SchemaResponse(
            properties=[
                SchemaProperty(
                    name=p.name,
                    kind=p.kind.value,
                    unit=p.unit,
                    position=p.position,
                    ordinal_labels=list(p.labels) if p.ordinal_scale else None,
                )
                for p in engine.schema.properties
            ]
        )

    @app.post("/api/classify", response_model=ClassifyResponse)
    def post_classify(body: ClassifyRequest) -> ClassifyResponse:
        req = _decode_requirement(body.requirement, engine.schema)
        result = classify(req, engine.kb, engine.schema)
        return ClassifyResponse(
            material_class=result.material_class.value,
            index_pattern=list(result.index_pattern),
            node_list=[NodeEntry(property=n, position=p) for n, p in result.node_list],
            class_scores={c.value: s for c, s in result.class_scores.items()},
        )

    @app.post("/api/compare", response_model=CompareResponse)
    def post_compare(body: CompareRequest) -> CompareResponse:
        req = _decode_requirement(body.requirement, engine.schema)
        metrics = _parse_metrics(body.metrics)
        if body.mode is None:
            mode = engine.default_mode
        else:
            try:
                mode = SelectionMode(body.mode)
            except ValueError:
                valid = ", ".join(m.value for m in SelectionMode)
                raise RequirementError(
                    f"unknown mode {body.mode!r} (expected one of: {valid})"
                ) from None
        report = compare_metrics(
            engine.db,
            req,
            engine.kb,
            metrics,
            mode=mode,
            normalize=body.normalize,
            top_k=body.top_k,
        )
        return CompareResponse(**report.to_dict())

    @app.get("/healthz", response_model=HealthResponse)
    def healthz() -> HealthResponse:
        return HealthResponse(materials=len(engine.db))

    return app


def run(config: ServiceConfig) -> None:
    """Serve blocking (used by the CLI's ``serve`` command)."""
    import uvicorn

    uvicorn.run(create_app(config), host=config.host, port=config.port)
