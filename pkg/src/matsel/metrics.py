"""Similarity and distance kernels, normalization, axiom verification.

Six scoring functions, each mapping two equal-length real vectors to a
scalar "degree of similarity":

================  ===========  ==========================================
name              orientation  formula
================  ===========  ==========================================
euclidean         distance     sqrt(sum (y_k - x_k)^2)
cityblock         distance     sum |y_k - x_k|
absexp            similarity   exp(-sum |y_k - x_k|)
geomavg           similarity   sum min(x_k, y_k) / sum sqrt(x_k * y_k)
corrcoef          similarity   sum |x_k - xbar| |y_k - ybar| /
                               (sqrt(sum (x_k - xbar)^2) * sqrt(sum (y_k - ybar)^2))
expsim            distance     sum |y_k - x_k| / (1 + exp(-|y_k - x_k|))
================  ===========  ==========================================

Distance-oriented kinds score 0 at equality and grow with difference;
similarity-oriented kinds score 1 at equality and shrink toward 0.
``corrcoef`` uses absolute deviations in the numerator, so its range is
[0, 1], not the signed [-1, 1] of Pearson correlation.

``absexp`` may underflow to 0.0 for distant vectors; that is a legal
result (candidate ordering is what selection consumes), never an error.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .datastore import DataMatrix
from .errors import MetricDomainError


class Orientation(str, enum.Enum):
    DISTANCE = "distance"      # smaller = closer
    SIMILARITY = "similarity"  # larger = closer


class MetricKind(str, enum.Enum):
    EUCLIDEAN = "euclidean"
    CITY_BLOCK = "cityblock"
    ABSOLUTE_EXPONENTIAL = "absexp"
    GEOMETRIC_AVERAGE_MIN = "geomavg"
    CORRELATION_COEFFICIENT = "corrcoef"
    EXPONENTIAL_SIMILARITY = "expsim"

    @property
    def orientation(self) -> Orientation:
        return _ORIENTATION[self]

    @property
    def identity_value(self) -> float:
        """Score of a vector against itself: 0 for distances, 1 for similarities."""
        return 0.0 if self.orientation is Orientation.DISTANCE else 1.0

    @classmethod
    def parse(cls, text: str) -> "MetricKind":
        try:
            return cls(text)
        except ValueError:
            valid = ", ".join(k.value for k in cls)
            raise MetricDomainError(f"unknown metric {text!r} (expected one of: {valid})")


_ORIENTATION = {
    MetricKind.EUCLIDEAN: Orientation.DISTANCE,
    MetricKind.CITY_BLOCK: Orientation.DISTANCE,
    MetricKind.ABSOLUTE_EXPONENTIAL: Orientation.SIMILARITY,
    MetricKind.GEOMETRIC_AVERAGE_MIN: Orientation.SIMILARITY,
    MetricKind.CORRELATION_COEFFICIENT: Orientation.SIMILARITY,
    MetricKind.EXPONENTIAL_SIMILARITY: Orientation.DISTANCE,
}

#: All metric kinds, in canonical listing order.
ALL_METRICS: tuple[MetricKind, ...] = tuple(MetricKind)


def _as_pair(y, x) -> tuple[np.ndarray, np.ndarray]:
    yv = np.asarray(y, dtype=np.float64)
    xv = np.asarray(x, dtype=np.float64)
    if yv.ndim != 1 or xv.ndim != 1:
        raise MetricDomainError("metric inputs must be 1-D vectors")
    if yv.shape != xv.shape:
        raise MetricDomainError(f"vector length mismatch: {yv.shape[0]} vs {xv.shape[0]}")
    if yv.shape[0] < 1:
        raise MetricDomainError("metric inputs must have length >= 1")
    if not (np.isfinite(yv).all() and np.isfinite(xv).all()):
        raise MetricDomainError("metric inputs must be finite")
    return yv, xv


def euclidean(y, x) -> float:
    """Root of summed squared differences."""
    yv, xv = _as_pair(y, x)
    return float(np.sqrt(np.sum((yv - xv) ** 2)))


def city_block(y, x) -> float:
    """Sum of absolute differences (L1)."""
    yv, xv = _as_pair(y, x)
    return float(np.sum(np.abs(yv - xv)))


def absolute_exponential(y, x) -> float:
    """exp(-L1); lives in (0, 1], underflows to 0.0 for distant inputs."""
    total = city_block(y, x)
    try:
        return math.exp(-total)
    except OverflowError:  # cannot happen for total >= 0; defensive
        return 0.0


def geometric_average_min(y, x) -> float:
    """Sum of componentwise minima over sum of geometric means.

    Requires strictly positive components in both vectors; lives in
    (0, 1] by the AM-GM inequality and equals 1 iff the vectors are
    componentwise equal.
    """
    yv, xv = _as_pair(y, x)
    if (yv <= 0).any() or (xv <= 0).any():
        raise MetricDomainError(
            "geomavg requires strictly positive components in both vectors"
        )
    if np.array_equal(yv, xv):
        return 1.0  # exact: min(a,a) = sqrt(a*a) termwise
    num = float(np.sum(np.minimum(xv, yv)))
    den = float(np.sum(np.sqrt(xv * yv)))
    return min(num / den, 1.0)


def correlation_coefficient(y, x) -> float:
    """Absolute-deviation correlation; lives in [0, 1] by Cauchy-Schwarz.

    Requires length >= 2 and nonzero variance in both vectors.
    """
    yv, xv = _as_pair(y, x)
    if yv.shape[0] < 2:
        raise MetricDomainError("corrcoef requires vectors of length >= 2")
    dx = xv - xv.mean()
    dy = yv - yv.mean()
    sx = float(np.sqrt(np.sum(dx**2)))
    sy = float(np.sqrt(np.sum(dy**2)))
    if sx == 0.0 or sy == 0.0:
        raise MetricDomainError("corrcoef requires nonzero variance in both vectors")
    if np.array_equal(yv, xv):
        return 1.0  # exact: perfect self-correlation
    num = float(np.sum(np.abs(dx) * np.abs(dy)))
    return min(num / (sx * sy), 1.0)


def exponential_similarity(y, x) -> float:
    """Sum of logistic-damped absolute differences.

    Each term is u / (1 + exp(-u)) with u = |y_k - x_k|, so the total is
    nonnegative, zero iff the vectors are equal, and bounded above by
    the city-block distance.
    """
    yv, xv = _as_pair(y, x)
    u = np.abs(yv - xv)
    with np.errstate(under="ignore"):
        return float(np.sum(u / (1.0 + np.exp(-u))))


SCORERS = {
    MetricKind.EUCLIDEAN: euclidean,
    MetricKind.CITY_BLOCK: city_block,
    MetricKind.ABSOLUTE_EXPONENTIAL: absolute_exponential,
    MetricKind.GEOMETRIC_AVERAGE_MIN: geometric_average_min,
    MetricKind.CORRELATION_COEFFICIENT: correlation_coefficient,
    MetricKind.EXPONENTIAL_SIMILARITY: exponential_similarity,
}


def score(kind: MetricKind, y, x) -> float:
    """Evaluate one metric kind on a vector pair."""
    return SCORERS[kind](y, x)


# ---------------------------------------------------------------------------
# Min-max normalization
# ---------------------------------------------------------------------------

def min_max_normalize(
    matrix: DataMatrix, query
) -> tuple[DataMatrix, np.ndarray, tuple[tuple[float, float], ...]]:
    """Rescale matrix and query jointly to [0, 1] per column.

    The normalization range of a column is the min/max over the matrix
    column AND the query entry together, so the query itself never
    escapes [0, 1]. Degenerate columns (max = min) map every value,
    query included, to 0.

    Returns (normalized matrix, normalized query, per-column (min, max)).
    """
    qv = np.asarray(query, dtype=np.float64)
    if qv.ndim != 1 or qv.shape[0] != matrix.n_columns:
        raise MetricDomainError(
            f"query length {qv.shape[0] if qv.ndim == 1 else qv.shape} "
            f"does not match {matrix.n_columns} matrix columns"
        )
    if not np.isfinite(qv).all():
        raise MetricDomainError("query must be finite")

    if matrix.n_rows:
        joint = np.vstack([matrix.cells, qv])
    else:
        joint = qv.reshape(1, -1)
    mins = joint.min(axis=0)
    maxs = joint.max(axis=0)
    span = maxs - mins
    degenerate = span == 0
    safe_span = np.where(degenerate, 1.0, span)

    norm_cells = np.where(degenerate, 0.0, (matrix.cells - mins) / safe_span)
    norm_query = np.where(degenerate, 0.0, (qv - mins) / safe_span)
    normalized = DataMatrix(matrix.row_ids, matrix.columns, norm_cells)
    ranges = tuple((float(lo), float(hi)) for lo, hi in zip(mins, maxs))
    return normalized, norm_query, ranges


# ---------------------------------------------------------------------------
# Metric-axiom verification
# ---------------------------------------------------------------------------

AXIOM_NAMES = ("non_negativity", "identity", "identity_as_distance", "symmetry", "triangle")


@dataclass
class AxiomCheck:
    """Pass/fail tally for one axiom, with re-verifiable counterexamples."""

    name: str
    passed: int = 0
    failed: int = 0
    counterexamples: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def record(self, ok: bool, counterexample: dict | None = None):
        if ok:
            self.passed += 1
        else:
            self.failed += 1
            if counterexample is not None and len(self.counterexamples) < 3:
                self.counterexamples.append(counterexample)

    def to_dict(self) -> dict:
        return {
            "axiom": self.name,
            "passed": self.passed,
            "failed": self.failed,
            "ok": self.ok,
            "counterexamples": self.counterexamples,
        }


@dataclass
class AxiomReport:
    """Result of sampling the four metric conditions for one kind.

    ``identity`` is checked in orientation-appropriate form: a
    similarity-oriented kind passes when d(x, x) reaches 1 (its maximum),
    a distance-oriented kind when d(x, x) is 0. ``identity_as_distance``
    additionally reports the strict d(x, x) = 0 reading, which
    similarity kinds fail by construction.
    """

    metric: MetricKind
    samples: int
    seed: int
    checks: dict[str, AxiomCheck]

    @property
    def is_metric(self) -> bool:
        """True when all four conditions hold in the strict distance reading."""
        return all(
            self.checks[name].ok
            for name in ("non_negativity", "identity_as_distance", "symmetry", "triangle")
        )

    def to_dict(self) -> dict:
        return {
            "metric": self.metric.value,
            "orientation": self.metric.orientation.value,
            "samples": self.samples,
            "seed": self.seed,
            "checks": [self.checks[name].to_dict() for name in AXIOM_NAMES],
            "is_metric": self.is_metric,
        }


#: Relative tolerance for axiom comparisons.
AXIOM_RTOL = 1e-9


def check_metric_axioms(
    kind: MetricKind, samples: int, seed: int, dim_range: tuple[int, int] = (2, 23)
) -> AxiomReport:
    """Check the four metric conditions on seeded random vector triples.

    Per sample, draws x, y, z of a common random dimension and tallies:
    non-negativity d(x,y) >= 0; identity at the orientation-appropriate
    value; strict identity-as-distance d(x,x) = 0; symmetry
    d(x,y) = d(y,x); triangle d(x,y) <= d(x,z) + d(z,y). Components are
    strictly positive when the kind demands it (geomavg), signed
    otherwise. Comparisons use relative tolerance ``AXIOM_RTOL``.
    """
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    rng = np.random.default_rng(seed)
    scorer = SCORERS[kind]
    positive_only = kind is MetricKind.GEOMETRIC_AVERAGE_MIN
    checks = {name: AxiomCheck(name) for name in AXIOM_NAMES}
    lo_dim, hi_dim = dim_range

    for _ in range(samples):
        n = int(rng.integers(lo_dim, hi_dim + 1))
        if positive_only:
            x, y, z = (rng.uniform(0.5, 100.0, size=n) for _ in range(3))
        else:
            x, y, z = (rng.uniform(-100.0, 100.0, size=n) for _ in range(3))

        d_xy = scorer(x, y)
        d_yx = scorer(y, x)
        d_xz = scorer(x, z)
        d_zy = scorer(z, y)
        d_xx = scorer(x, x)
        tol = AXIOM_RTOL * max(1.0, abs(d_xy), abs(d_yx), abs(d_xz), abs(d_zy))

        vectors = {"x": x.tolist(), "y": y.tolist(), "z": z.tolist()}
        checks["non_negativity"].record(
            d_xy >= -tol, {"d_xy": d_xy, **vectors}
        )
        checks["identity"].record(
            abs(d_xx - kind.identity_value) <= tol,
            {"d_xx": d_xx, "expected": kind.identity_value, "x": vectors["x"]},
        )
        checks["identity_as_distance"].record(
            abs(d_xx) <= tol, {"d_xx": d_xx, "expected": 0.0, "x": vectors["x"]}
        )
        checks["symmetry"].record(
            abs(d_xy - d_yx) <= tol, {"d_xy": d_xy, "d_yx": d_yx, **vectors}
        )
        checks["triangle"].record(
            d_xy <= d_xz + d_zy + tol,
            {"d_xy": d_xy, "d_xz": d_xz, "d_zy": d_zy, **vectors},
        )

    return AxiomReport(kind, samples, seed, checks)
