"""Materials database: CSV ingest, class fragmentation, data matrix.

CSV layout (UTF-8, comma separator, no quoted commas)::

    id,name,class,<prop1>,...,<propM>      # header, schema order
    P0001,Nylon 6,Polymer,78.5,...         # one material per row

Numeric cells are decimal literals, interval cells are ``lo..hi``,
ordinal cells are scale labels.

Fragmentation slices the database down to one material class and
projects columns onto the requirement's properties, in requirement
order, in a single pass over the rows. The fragment scalarizes into an
N'-by-n float matrix for the metric kernels.
"""

from __future__ import annotations

import csv
import io
import random
from dataclasses import dataclass

import numpy as np

from .errors import DataLoadError, InvalidValueError, RequirementError
from .schema import (
    DEFAULT_ORDINAL_SCALE,
    DesignRequirement,
    Interval,
    Material,
    MaterialClass,
    PropertySchema,
    PropertyValue,
    ValueKind,
    format_value_cell,
    parse_value_cell,
    scalarize,
)


@dataclass(frozen=True)
class MaterialDatabase:
    schema: PropertySchema
    materials: tuple[Material, ...]

    def __len__(self) -> int:
        return len(self.materials)

    def by_class(self, material_class: MaterialClass) -> tuple[Material, ...]:
        return tuple(m for m in self.materials if m.material_class is material_class)

    def class_counts(self) -> dict[MaterialClass, int]:
        counts = {c: 0 for c in MaterialClass}
        for m in self.materials:
            counts[m.material_class] += 1
        return counts


@dataclass(frozen=True)
class FragmentDatabase:
    """Class-filtered, attribute-projected slice of the database.

    ``attributes`` preserves the requirement's entry order; every row
    belongs to ``material_class`` and carries values for exactly those
    attributes, in that order.
    """

    material_class: MaterialClass
    attributes: tuple[str, ...]
    rows: tuple[tuple[str, tuple[PropertyValue, ...]], ...]

    def __len__(self) -> int:
        return len(self.rows)


@dataclass(frozen=True)
class DataMatrix:
    """Scalarized fragment: N' row ids x n attribute columns of reals.

    The cell array is marked read-only at construction, so matrices can
    be shared between concurrent queries without copying.
    """

    row_ids: tuple[str, ...]
    columns: tuple[str, ...]
    cells: np.ndarray  # shape (N', n), float64

    def __post_init__(self):
        if self.cells.shape != (len(self.row_ids), len(self.columns)):
            raise ValueError(
                f"cells shape {self.cells.shape} does not match "
                f"{len(self.row_ids)} rows x {len(self.columns)} columns"
            )
        self.cells.setflags(write=False)

    @property
    def n_rows(self) -> int:
        return len(self.row_ids)

    @property
    def n_columns(self) -> int:
        return len(self.columns)


# ---------------------------------------------------------------------------
# CSV ingest / serialize
# ---------------------------------------------------------------------------

_FIXED_COLUMNS = ("id", "name", "class")


def ingest_csv(content: str, schema: PropertySchema) -> MaterialDatabase:
    """Parse and fully validate a materials CSV; row order is preserved.

    Raises :class:`DataLoadError` (with the 1-based row number) on the
    first malformed row; use :func:`validate_csv` to collect all errors.
    """
    materials: list[Material] = []
    seen_ids: set[str] = set()
    for row_number, material in _parse_rows(content, schema):
        if material.id in seen_ids:
            raise DataLoadError(f"duplicate material id {material.id!r}", row=row_number)
        seen_ids.add(material.id)
        materials.append(material)
    return MaterialDatabase(schema, tuple(materials))


def validate_csv(content: str, schema: PropertySchema) -> list[DataLoadError]:
    """Collect every row-level error in a materials CSV (empty = clean)."""
    errors: list[DataLoadError] = []
    seen_ids: set[str] = set()
    try:
        rows = _parse_rows(content, schema, on_error=errors.append)
        for row_number, material in rows:
            if material.id in seen_ids:
                errors.append(DataLoadError(f"duplicate material id {material.id!r}", row=row_number))
            else:
                seen_ids.add(material.id)
    except DataLoadError as exc:  # header errors abort the scan
        errors.append(exc)
    return errors


def _parse_rows(content: str, schema: PropertySchema, on_error=None):
    """Yield (row_number, Material) pairs; header is row 1.

    With ``on_error`` set, row-level failures are reported to it and the
    scan continues; otherwise the first failure raises.
    """
    reader = csv.reader(io.StringIO(content))
    try:
        header = next(reader)
    except StopIteration:
        raise DataLoadError("empty CSV: missing header") from None
    expected = list(_FIXED_COLUMNS) + list(schema.names)
    if [h.strip() for h in header] != expected:
        raise DataLoadError(
            f"header does not match schema: expected {','.join(expected)!r}", row=1
        )

    results = []
    for row_number, row in enumerate(reader, start=2):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue  # blank line
        try:
            results.append((row_number, _parse_material_row(row, schema, row_number)))
        except DataLoadError as exc:
            if on_error is None:
                raise
            on_error(exc)
    return results


def _parse_material_row(row: list[str], schema: PropertySchema, row_number: int) -> Material:
    expected_len = len(_FIXED_COLUMNS) + len(schema)
    if len(row) != expected_len:
        raise DataLoadError(
            f"expected {expected_len} cells, got {len(row)}", row=row_number
        )
    material_id, name = row[0].strip(), row[1].strip()
    if not material_id:
        raise DataLoadError("empty material id", row=row_number)
    try:
        material_class = MaterialClass.parse(row[2].strip())
        values = {
            prop.name: parse_value_cell(prop, cell)
            for prop, cell in zip(schema.properties, row[3:])
        }
    except InvalidValueError as exc:
        raise DataLoadError(str(exc), row=row_number) from None
    return Material(material_id, name, material_class, values)


def serialize_csv(db: MaterialDatabase) -> str:
    """Render a database back to CSV text (inverse of :func:`ingest_csv`)."""
    out = io.StringIO()
    out.write(",".join(list(_FIXED_COLUMNS) + list(db.schema.names)) + "\n")
    for m in db.materials:
        cells = [m.id, m.name, m.material_class.value]
        cells += [format_value_cell(m.values[name]) for name in db.schema.names]
        out.write(",".join(cells) + "\n")
    return out.getvalue()


def load_database(path, schema: PropertySchema) -> MaterialDatabase:
    with open(path, "r", encoding="utf-8") as fh:
        return ingest_csv(fh.read(), schema)


# ---------------------------------------------------------------------------
# Fragmentation (single pass) and scalarization
# ---------------------------------------------------------------------------

def fragment(
    db: MaterialDatabase, material_class: MaterialClass, req: DesignRequirement
) -> FragmentDatabase:
    """Slice the database to one class and project onto the requirement.

    Single pass over the rows: keeps exactly the materials of
    ``material_class`` and restricts each to the requirement's
    properties, preserving requirement order. An empty result (class
    with no materials) is legal, not an error.
    """
    for name in req.names:
        if name not in db.schema:
            raise RequirementError(f"requirement references property {name!r} outside the schema")
    attributes = req.names
    rows = tuple(
        (m.id, tuple(m.values[name] for name in attributes))
        for m in db.materials
        if m.material_class is material_class
    )
    return FragmentDatabase(material_class, attributes, rows)


def to_matrix(frag: FragmentDatabase, schema: PropertySchema) -> DataMatrix:
    """Scalarize a fragment into a float matrix, preserving row/column order."""
    defs = [schema[name] for name in frag.attributes]
    cells = np.empty((len(frag.rows), len(defs)), dtype=np.float64)
    for i, (_, values) in enumerate(frag.rows):
        for j, (prop, value) in enumerate(zip(defs, values)):
            cells[i, j] = scalarize(prop, value)
    return DataMatrix(
        tuple(material_id for material_id, _ in frag.rows),
        frag.attributes,
        cells,
    )


# ---------------------------------------------------------------------------
# Synthetic database generation
# ---------------------------------------------------------------------------

#: Per-class generator ranges for the stock schema. Numeric and interval
#: properties draw uniformly from (lo, hi); ordinal properties draw a
#: label whose weight lies in the inclusive (lo, hi) weight window.
#: These distributions are tool-defined: they separate the classes the
#: same way the default rules file does.
CLASS_RANGES: dict[str, dict[MaterialClass, tuple[float, float]]] = {
    "Tensile Strength": {
        MaterialClass.POLYMER: (10, 120),
        MaterialClass.CERAMIC: (30, 195),
        MaterialClass.METAL: (250, 2200),
    },
    "Yield Strength": {
        MaterialClass.POLYMER: (8, 100),
        MaterialClass.CERAMIC: (60, 140),
        MaterialClass.METAL: (180, 1800),
    },
    "Impact Strength": {
        MaterialClass.POLYMER: (1, 12),
        MaterialClass.CERAMIC: (0.1, 1.8),
        MaterialClass.METAL: (10, 150),
    },
    "Hardness": {
        MaterialClass.POLYMER: (5, 90),
        MaterialClass.CERAMIC: (900, 2500),
        MaterialClass.METAL: (110, 650),
    },
    "Tensile Modulus": {
        MaterialClass.POLYMER: (500, 9000),
        MaterialClass.CERAMIC: (260000, 450000),
        MaterialClass.METAL: (60000, 230000),
    },
    "Density": {
        MaterialClass.POLYMER: (0.85, 2.2),
        MaterialClass.CERAMIC: (2.6, 5.9),
        MaterialClass.METAL: (6.2, 16.0),
    },
    "Compressive Strength": {
        MaterialClass.POLYMER: (20, 250),
        MaterialClass.CERAMIC: (1200, 5000),
        MaterialClass.METAL: (250, 2000),
    },
    "Flexural Strength": {
        MaterialClass.POLYMER: (15, 200),
        MaterialClass.CERAMIC: (100, 1000),
        MaterialClass.METAL: (200, 1800),
    },
    "Shear Modulus": {
        MaterialClass.POLYMER: (0.1, 3),
        MaterialClass.CERAMIC: (80, 200),
        MaterialClass.METAL: (25, 90),
    },
    "Poisson Ratio": {
        MaterialClass.POLYMER: (0.33, 0.48),
        MaterialClass.CERAMIC: (0.18, 0.31),
        MaterialClass.METAL: (0.25, 0.35),
    },
    "Elongation at Break": {
        MaterialClass.POLYMER: (2, 400),
        MaterialClass.CERAMIC: (0.01, 0.5),
        MaterialClass.METAL: (12, 60),
    },
    "Fracture Toughness": {
        MaterialClass.POLYMER: (0.5, 6),
        MaterialClass.CERAMIC: (2, 12),
        MaterialClass.METAL: (20, 150),
    },
    "Fatigue Strength": {
        MaterialClass.POLYMER: (5, 60),
        MaterialClass.CERAMIC: (50, 400),
        MaterialClass.METAL: (100, 800),
    },
    "Melting Point": {
        MaterialClass.POLYMER: (80, 350),
        MaterialClass.CERAMIC: (1600, 2800),
        MaterialClass.METAL: (450, 1700),
    },
    "Max Service Temperature": {
        MaterialClass.POLYMER: (50, 250),
        MaterialClass.CERAMIC: (1000, 2200),
        MaterialClass.METAL: (250, 950),
    },
    "Thermal Conductivity": {
        MaterialClass.POLYMER: (0.1, 1.0),
        MaterialClass.CERAMIC: (2.5, 12),
        MaterialClass.METAL: (20, 400),
    },
    "Thermal Expansion": {
        MaterialClass.POLYMER: (40, 200),
        MaterialClass.CERAMIC: (3, 10),
        MaterialClass.METAL: (8, 25),
    },
    "Specific Heat": {
        MaterialClass.POLYMER: (1000, 2500),
        MaterialClass.CERAMIC: (500, 1100),
        MaterialClass.METAL: (380, 900),
    },
    "Water Absorption": {
        MaterialClass.POLYMER: (0.01, 3),
        MaterialClass.CERAMIC: (0.001, 0.5),
        MaterialClass.METAL: (0.001, 0.01),
    },
    "Corrosion Resistance": {
        MaterialClass.POLYMER: (3, 5),
        MaterialClass.CERAMIC: (4, 5),
        MaterialClass.METAL: (1, 3),
    },
    "Wear Resistance": {
        MaterialClass.POLYMER: (1, 3),
        MaterialClass.CERAMIC: (4, 5),
        MaterialClass.METAL: (2, 4),
    },
    "Machinability": {
        MaterialClass.POLYMER: (3, 5),
        MaterialClass.CERAMIC: (1, 2),
        MaterialClass.METAL: (2, 4),
    },
    "Flame Resistance": {
        MaterialClass.POLYMER: (1, 2),
        MaterialClass.CERAMIC: (4, 5),
        MaterialClass.METAL: (3, 5),
    },
}

_FALLBACK_RANGE = (1.0, 100.0)


def generate_synthetic(
    seed: int, n_materials: int, schema: PropertySchema | None = None
) -> MaterialDatabase:
    """Generate a deterministic synthetic database.

    Classes are assigned round-robin (Polymer, Ceramic, Metal, ...);
    values draw from :data:`CLASS_RANGES` (or a generic positive range
    for properties outside the stock schema). The same seed always
    yields the same database, byte-identical under CSV serialization.
    """
    if n_materials < 1:
        raise ValueError(f"n_materials must be >= 1, got {n_materials}")
    if schema is None:
        from .schema import default_schema

        schema = default_schema()
    rng = random.Random(seed)
    classes = list(MaterialClass)
    materials = []
    for i in range(n_materials):
        material_class = classes[i % len(classes)]
        values: dict[str, PropertyValue] = {}
        for prop in schema.properties:
            lo, hi = CLASS_RANGES.get(prop.name, {}).get(material_class, _FALLBACK_RANGE)
            if prop.kind is ValueKind.NUMERIC:
                values[prop.name] = round(rng.uniform(lo, hi), 3)
            elif prop.kind is ValueKind.INTERVAL:
                a, b = sorted((round(rng.uniform(lo, hi), 3), round(rng.uniform(lo, hi), 3)))
                values[prop.name] = Interval(a, b)
            else:
                labels = [l for l, w in (prop.ordinal_scale or DEFAULT_ORDINAL_SCALE) if lo <= w <= hi]
                values[prop.name] = rng.choice(labels or list(prop.labels))
        materials.append(
            Material(
                id=f"M{i + 1:05d}",
                name=f"{material_class.value} specimen {i + 1}",
                material_class=material_class,
                values=values,
            )
        )
    return MaterialDatabase(schema, tuple(materials))
