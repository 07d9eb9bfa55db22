"""Independent brute-force references used to check the library.

Deliberately written without numpy: plain loops, ``math`` functions and
``math.fsum`` accumulation, so these share no code path with the
implementations they verify.
"""

from __future__ import annotations

import math


def ref_euclidean(y, x) -> float:
    return math.sqrt(math.fsum((a - b) ** 2 for a, b in zip(y, x)))


def ref_city_block(y, x) -> float:
    return math.fsum(abs(a - b) for a, b in zip(y, x))


def ref_absolute_exponential(y, x) -> float:
    return math.exp(-ref_city_block(y, x))


def ref_geometric_average_min(y, x) -> float:
    num = math.fsum(min(a, b) for a, b in zip(y, x))
    den = math.fsum(math.sqrt(a * b) for a, b in zip(y, x))
    return num / den


def ref_correlation_coefficient(y, x) -> float:
    n = len(y)
    ybar = math.fsum(y) / n
    xbar = math.fsum(x) / n
    num = math.fsum(abs(a - xbar) * abs(b - ybar) for a, b in zip(x, y))
    sx = math.sqrt(math.fsum((a - xbar) ** 2 for a in x))
    sy = math.sqrt(math.fsum((b - ybar) ** 2 for b in y))
    return num / (sx * sy)


def ref_exponential_similarity(y, x) -> float:
    terms = []
    for a, b in zip(y, x):
        u = abs(a - b)
        terms.append(u / (1.0 + math.exp(-u)))
    return math.fsum(terms)


REF_SCORERS = {
    "euclidean": ref_euclidean,
    "cityblock": ref_city_block,
    "absexp": ref_absolute_exponential,
    "geomavg": ref_geometric_average_min,
    "corrcoef": ref_correlation_coefficient,
    "expsim": ref_exponential_similarity,
}


def ref_fragment(materials, material_class, attribute_names):
    """Naive filter-then-project reference for database fragmentation."""
    out = []
    for m in materials:
        if m.material_class is material_class:
            out.append((m.id, tuple(m.values[name] for name in attribute_names)))
    return out


def ref_min_max_normalize(columns, query):
    """Naive per-column joint min-max rescale; columns is a list of lists."""
    norm_cols, norm_query, ranges = [], [], []
    for col, q in zip(columns, query):
        joint = list(col) + [q]
        lo, hi = min(joint), max(joint)
        ranges.append((lo, hi))
        if hi == lo:
            norm_cols.append([0.0] * len(col))
            norm_query.append(0.0)
        else:
            norm_cols.append([(v - lo) / (hi - lo) for v in col])
            norm_query.append((q - lo) / (hi - lo))
    return norm_cols, norm_query, ranges


# Reference degrees of similarity for the workbench's canonical example:
# query y (the five-attribute requirement) against candidate records X
# and G. Frozen from a 60-digit evaluation of the formulas above;
# test_oracle_constants re-derives them from the float64 references.
VEC_Y = (20.0, 23.9, 4.0, 56.67, 2000.0)
VEC_X = (27.456, 12.21, 4.0, 67.32, 2399.47)
VEC_G = (2.34, 22.456, 4.0, 3.0, 1.0e6)

EXPECTED_YX = {
    "euclidean": 399.8524120672526,
    "cityblock": 429.266,
    "absexp": 3.7337473839055197e-187,
    "geomavg": 0.9111639487504813,
    "corrcoef": 0.9999742659008382,
    "expsim": 429.26134285769167,
}

EXPECTED_YG = {
    "euclidean": 998000.0016004156,
    "cityblock": 998072.774,
    "absexp": 0.0,  # exp(-998072.774) underflows; a legal result
    "geomavg": 0.045384595411233055,
    "corrcoef": 0.9997650372968902,
    "expsim": 998072.4983014821,
}
