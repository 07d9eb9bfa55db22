"""Best-match selection and cross-metric comparison reports.

Two selection modes:

* ``paper-min`` — rank ascending by raw score for every metric and take
  the minimum. This is the original uniform-minimum rule; applied to a
  similarity-oriented metric it deliberately picks the LEAST similar
  candidate (a known anomaly of that rule, kept reproducible here).
* ``oriented`` — the corrected default: rank ascending for
  distance-oriented metrics, descending for similarity-oriented ones.

Ties always break toward the lexicographically smaller material id, so
results are independent of row evaluation order.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Iterable, Mapping

import enum

import numpy as np

from .datastore import DataMatrix, FragmentDatabase, MaterialDatabase, fragment, to_matrix
from .errors import (
    MetricDomainError,
    NoCandidatesError,
    NoScorableCandidatesError,
)
from .knowledgebase import ClassificationResult, Knowledgebase, classify
from .metrics import MetricKind, Orientation, SCORERS, min_max_normalize
from .schema import (
    DesignRequirement,
    Interval,
    MaterialClass,
    PropertySchema,
    PropertyValue,
)


class SelectionMode(str, enum.Enum):
    PAPER_MIN = "paper-min"
    ORIENTED = "oriented"

    @classmethod
    def parse(cls, text: str) -> "SelectionMode":
        try:
            return cls(text)
        except ValueError:
            valid = ", ".join(m.value for m in cls)
            raise ValueError(f"unknown selection mode {text!r} (expected one of: {valid})")


DEFAULT_MODE = SelectionMode.ORIENTED


def value_to_json(value: PropertyValue):
    """Map a property value onto its JSON shape (number | {lo,hi} | label)."""
    if isinstance(value, Interval):
        return {"lo": value.lo, "hi": value.hi}
    if isinstance(value, str):
        return value
    return float(value)


@dataclass(frozen=True)
class SelectionReport:
    """Ranked outcome of one metric over one candidate matrix."""

    metric: MetricKind
    mode: SelectionMode
    winner_id: str
    degree_of_similarity: float
    ranking: tuple[tuple[str, float], ...]  # best-to-worst (material id, score)
    normalized: bool
    excluded: tuple[tuple[str, str], ...] = ()  # (material id, reason)

    def to_dict(self) -> dict:
        return {
            "metric": self.metric.value,
            "mode": self.mode.value,
            "winner_id": self.winner_id,
            "degree_of_similarity": self.degree_of_similarity,
            "ranking": [
                {"material_id": mid, "score": s} for mid, s in self.ranking
            ],
            "normalized": self.normalized,
            "excluded": [
                {"material_id": mid, "reason": reason} for mid, reason in self.excluded
            ],
        }


@dataclass(frozen=True)
class WinnerDetail:
    """Projected attribute values of a selected material (report echo)."""

    material_id: str
    material_name: str
    values: tuple[tuple[str, PropertyValue], ...]

    def to_dict(self) -> dict:
        return {
            "material_id": self.material_id,
            "material_name": self.material_name,
            "values": {name: value_to_json(v) for name, v in self.values},
        }


@dataclass(frozen=True)
class ComparisonReport:
    """Per-metric selections over one identical fragment/matrix."""

    requirement: DesignRequirement
    classification: ClassificationResult
    mode: SelectionMode
    normalized: bool
    reports: tuple[SelectionReport, ...]
    winners: tuple[WinnerDetail, ...] = ()

    @property
    def material_class(self) -> MaterialClass:
        return self.classification.material_class

    def to_dict(self) -> dict:
        return {
            "requirement": [
                {"property": name, "value": value_to_json(v)}
                for name, v in self.requirement.entries
            ],
            "material_class": self.material_class.value,
            "index_pattern": list(self.classification.index_pattern),
            "node_list": [
                {"property": name, "position": pos}
                for name, pos in self.classification.node_list
            ],
            "mode": self.mode.value,
            "normalized": self.normalized,
            "reports": [r.to_dict() for r in self.reports],
            "winners": [w.to_dict() for w in self.winners],
        }


def score_rows(
    matrix: DataMatrix, query, metric: MetricKind
) -> tuple[list[tuple[str, float]], list[tuple[str, str]]]:
    """Score every matrix row against the query.

    Rows that violate the metric's preconditions (non-positive
    components for geomavg, zero variance for corrcoef) are excluded
    with a reason instead of failing the whole query. Query-level
    problems (length mismatch, non-finite entries) raise immediately.
    """
    qv = np.asarray(query, dtype=np.float64)
    if qv.ndim != 1 or qv.shape[0] != matrix.n_columns:
        raise MetricDomainError(
            f"query length does not match matrix columns ({matrix.n_columns})"
        )
    if not np.isfinite(qv).all():
        raise MetricDomainError("query must be finite")
    scorer = SCORERS[metric]
    scored: list[tuple[str, float]] = []
    excluded: list[tuple[str, str]] = []
    for material_id, row in zip(matrix.row_ids, matrix.cells):
        try:
            scored.append((material_id, scorer(qv, row)))
        except MetricDomainError as exc:
            excluded.append((material_id, str(exc)))
    return scored, excluded


def _ordered(
    scored: Iterable[tuple[str, float]], metric: MetricKind, mode: SelectionMode
) -> list[tuple[str, float]]:
    descending = (
        mode is SelectionMode.ORIENTED and metric.orientation is Orientation.SIMILARITY
    )
    if descending:
        return sorted(scored, key=lambda e: (-e[1], e[0]))
    return sorted(scored, key=lambda e: (e[1], e[0]))


def select_best(
    matrix: DataMatrix,
    query,
    metric: MetricKind,
    mode: SelectionMode = DEFAULT_MODE,
    *,
    normalized: bool = False,
) -> SelectionReport:
    """Pick the best-matching row and rank all candidates.

    ``paper-min`` takes the row with the least score for every metric;
    ``oriented`` takes the least score for distance-oriented metrics and
    the greatest for similarity-oriented ones. Ties break toward the
    smaller material id.
    """
    if matrix.n_rows == 0:
        raise NoCandidatesError("no candidates: fragment is empty")
    scored, excluded = score_rows(matrix, query, metric)
    if not scored:
        raise NoScorableCandidatesError(
            f"no scorable candidates for metric {metric.value}", excluded
        )
    ranking = tuple(_ordered(scored, metric, mode))
    winner_id, degree = ranking[0]
    return SelectionReport(
        metric=metric,
        mode=mode,
        winner_id=winner_id,
        degree_of_similarity=degree,
        ranking=ranking,
        normalized=normalized,
        excluded=tuple(excluded),
    )


def rank_top_k(
    matrix: DataMatrix,
    query,
    metric: MetricKind,
    mode: SelectionMode = DEFAULT_MODE,
    k: int = 1,
    *,
    normalized: bool = False,
) -> SelectionReport:
    """Like :func:`select_best` but with the ranking truncated to k entries."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    report = select_best(matrix, query, metric, mode, normalized=normalized)
    return dataclasses.replace(report, ranking=report.ranking[:k])


def compare_metrics(
    db: MaterialDatabase,
    requirement: DesignRequirement,
    kb: Knowledgebase,
    metrics: Iterable[MetricKind],
    mode: SelectionMode = DEFAULT_MODE,
    normalize: bool = False,
    top_k: int | None = None,
    schema: PropertySchema | None = None,
) -> ComparisonReport:
    """Run the full pipeline and select per metric over one shared matrix.

    classify -> fragment -> scalarize -> (optional min-max normalize)
    -> select_best for each requested metric. Every per-metric report is
    computed over the identical matrix, so the comparison isolates the
    metrics themselves.
    """
    metrics = tuple(metrics)
    if not metrics:
        raise ValueError("metric list must be non-empty")
    if top_k is not None and top_k < 1:
        raise ValueError(f"top_k must be >= 1, got {top_k}")
    schema = schema if schema is not None else db.schema
    requirement.validate(schema)

    classification = classify(requirement, kb, schema)
    frag = fragment(db, classification.material_class, requirement)
    matrix = to_matrix(frag, schema)
    if matrix.n_rows == 0:
        raise NoCandidatesError(
            f"no candidates: class {classification.material_class.value} has no materials"
        )
    query = np.asarray(requirement.scalarized(schema), dtype=np.float64)
    if normalize:
        matrix, query, _ = min_max_normalize(matrix, query)

    reports = []
    for metric in metrics:
        report = select_best(matrix, query, metric, mode, normalized=normalize)
        if top_k is not None:
            report = dataclasses.replace(report, ranking=report.ranking[:top_k])
        reports.append(report)

    winners = _winner_details(frag, db, {r.winner_id for r in reports})
    return ComparisonReport(
        requirement=requirement,
        classification=classification,
        mode=mode,
        normalized=normalize,
        reports=tuple(reports),
        winners=winners,
    )


def _winner_details(
    frag: FragmentDatabase, db: MaterialDatabase, winner_ids: set[str]
) -> tuple[WinnerDetail, ...]:
    names: Mapping[str, str] = {m.id: m.name for m in db.materials}
    details = []
    for material_id, values in frag.rows:
        if material_id in winner_ids:
            details.append(
                WinnerDetail(
                    material_id,
                    names.get(material_id, material_id),
                    tuple(zip(frag.attributes, values)),
                )
            )
    return tuple(sorted(details, key=lambda d: d.material_id))
