"""Core value model: property schema, materials, and design requirements.

Property values come in three kinds:

* ``numeric``  — a single real number,
* ``interval`` — a ``lo..hi`` range (lo <= hi),
* ``ordinal``  — a linguistic label drawn from an ordered, per-property
  scale where each label carries a strictly increasing numeric weight.

All downstream computation happens on plain reals, so every value kind
scalarizes: numerics are taken as-is, intervals collapse to their
midpoint, ordinal labels map to their scale weight.

Schema file grammar (one property per line, ``#`` starts a comment)::

    <name> | <kind> | <unit>
    <name> | ordinal | <unit> | <label>=<weight>; <label>=<weight>; ...

Fields are pipe-separated and whitespace-trimmed; names and labels may
contain spaces. Ordinal lines must carry a scale, other kinds must not.
The bundled default schema ``schema23`` defines the 23 stock properties.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Mapping, Union

from .errors import InvalidValueError, RequirementError, SchemaLoadError


class ValueKind(str, enum.Enum):
    NUMERIC = "numeric"
    INTERVAL = "interval"
    ORDINAL = "ordinal"


class MaterialClass(str, enum.Enum):
    """Closed set of material classes.

    Definition order is the canonical order used for deterministic
    tie-breaking: Polymer < Ceramic < Metal.
    """

    POLYMER = "Polymer"
    CERAMIC = "Ceramic"
    METAL = "Metal"

    @property
    def rank(self) -> int:
        return _CLASS_RANK[self]

    @classmethod
    def parse(cls, text: str) -> "MaterialClass":
        try:
            return cls(text)
        except ValueError:
            valid = ", ".join(c.value for c in cls)
            raise InvalidValueError(f"unknown material class {text!r} (expected one of: {valid})")


_CLASS_RANK = {c: i for i, c in enumerate(MaterialClass)}


@dataclass(frozen=True)
class Interval:
    """Closed numeric range; ``lo <= hi`` is enforced at construction."""

    lo: float
    hi: float

    def __post_init__(self):
        if not (_is_finite(self.lo) and _is_finite(self.hi)):
            raise InvalidValueError(f"interval bounds must be finite, got {self.lo}..{self.hi}")
        if self.lo > self.hi:
            raise InvalidValueError(f"interval lo > hi ({self.lo} > {self.hi})")

    @property
    def midpoint(self) -> float:
        mid = (self.lo + self.hi) / 2.0
        if not math.isfinite(mid):  # lo + hi overflowed; halve first
            mid = self.lo / 2.0 + self.hi / 2.0
        return mid


#: A property value is exactly one of: real (numeric), Interval, label (ordinal).
PropertyValue = Union[float, int, Interval, str]

#: Default 5-level linguistic scale used by the stock ordinal properties.
DEFAULT_ORDINAL_SCALE: tuple[tuple[str, float], ...] = (
    ("Poor", 1.0),
    ("Fair", 2.0),
    ("Good", 3.0),
    ("Very Good", 4.0),
    ("Excellent", 5.0),
)


@dataclass(frozen=True)
class PropertyDef:
    """One schema entry: a named, typed material property.

    ``position`` is the 0-based index of the property in schema order;
    ``ordinal_scale`` is present iff ``kind`` is ordinal and maps labels
    to strictly increasing weights, in label order.
    """

    name: str
    kind: ValueKind
    unit: str = ""
    ordinal_scale: tuple[tuple[str, float], ...] | None = None
    position: int = 0

    def __post_init__(self):
        if not self.name:
            raise SchemaLoadError("property name must be non-empty")
        if self.kind is ValueKind.ORDINAL:
            if not self.ordinal_scale:
                raise SchemaLoadError(f"ordinal property {self.name!r} needs a scale")
            weights = [w for _, w in self.ordinal_scale]
            if any(b <= a for a, b in zip(weights, weights[1:])):
                raise SchemaLoadError(
                    f"ordinal scale weights for {self.name!r} must be strictly increasing"
                )
            labels = [l for l, _ in self.ordinal_scale]
            if len(set(labels)) != len(labels):
                raise SchemaLoadError(f"duplicate ordinal label in scale for {self.name!r}")
        elif self.ordinal_scale is not None:
            raise SchemaLoadError(f"non-ordinal property {self.name!r} must not carry a scale")

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(l for l, _ in self.ordinal_scale) if self.ordinal_scale else ()


@dataclass(frozen=True)
class PropertySchema:
    """Ordered collection of property definitions."""

    properties: tuple[PropertyDef, ...]
    _by_name: Mapping[str, PropertyDef] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        by_name: dict[str, PropertyDef] = {}
        for i, prop in enumerate(self.properties):
            if prop.name in by_name:
                raise SchemaLoadError(f"duplicate property name {prop.name!r}")
            if prop.position != i:
                raise SchemaLoadError(
                    f"property {prop.name!r} has position {prop.position}, expected {i}"
                )
            by_name[prop.name] = prop
        object.__setattr__(self, "_by_name", by_name)

    @classmethod
    def from_defs(cls, defs: Iterable[PropertyDef]) -> "PropertySchema":
        """Build a schema, renumbering positions to list order."""
        from dataclasses import replace

        return cls(tuple(replace(d, position=i) for i, d in enumerate(defs)))

    def __len__(self) -> int:
        return len(self.properties)

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    def __getitem__(self, name: str) -> PropertyDef:
        try:
            return self._by_name[name]
        except KeyError:
            raise KeyError(f"unknown property {name!r}") from None

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(p.name for p in self.properties)

    def position(self, name: str) -> int:
        return self[name].position


def encode_ordinal(prop: PropertyDef, label: str) -> float:
    """Return the numeric weight of an ordinal label.

    Weights are strictly monotone in label rank by schema invariant.
    """
    if prop.kind is not ValueKind.ORDINAL:
        raise InvalidValueError(f"property {prop.name!r} is {prop.kind.value}, not ordinal")
    for scale_label, weight in prop.ordinal_scale or ():
        if scale_label == label:
            return weight
    raise InvalidValueError(
        f"unknown ordinal label {label!r} for property {prop.name!r} "
        f"(expected one of: {', '.join(prop.labels)})"
    )


def validate_value(prop: PropertyDef, value: PropertyValue) -> PropertyValue:
    """Type-check ``value`` against ``prop``; returns the canonical value."""
    if prop.kind is ValueKind.NUMERIC:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise InvalidValueError(
                f"property {prop.name!r} expects a numeric value, got {value!r}"
            )
        value = float(value)
        if not _is_finite(value):
            raise InvalidValueError(f"property {prop.name!r} value must be finite, got {value!r}")
        return value
    if prop.kind is ValueKind.INTERVAL:
        if not isinstance(value, Interval):
            raise InvalidValueError(
                f"property {prop.name!r} expects an interval value, got {value!r}"
            )
        return value
    # ordinal
    if not isinstance(value, str):
        raise InvalidValueError(f"property {prop.name!r} expects an ordinal label, got {value!r}")
    encode_ordinal(prop, value)  # raises on unknown label
    return value


def scalarize(prop: PropertyDef, value: PropertyValue) -> float:
    """Collapse any property value to a real number.

    Numerics pass through, intervals become their arithmetic midpoint,
    ordinal labels become their scale weight. Total and deterministic
    over type-correct inputs.
    """
    value = validate_value(prop, value)
    if prop.kind is ValueKind.NUMERIC:
        return float(value)  # type: ignore[arg-type]
    if prop.kind is ValueKind.INTERVAL:
        return value.midpoint  # type: ignore[union-attr]
    return encode_ordinal(prop, value)  # type: ignore[arg-type]


@dataclass(frozen=True)
class Material:
    """One database tuple: id, display name, class, and a full value map."""

    id: str
    name: str
    material_class: MaterialClass
    values: Mapping[str, PropertyValue]

    def validate(self, schema: PropertySchema) -> None:
        """Check that values cover every schema property exactly once and
        each value type-checks against its definition."""
        missing = [n for n in schema.names if n not in self.values]
        if missing:
            raise InvalidValueError(f"material {self.id!r} missing properties: {missing}")
        extra = [n for n in self.values if n not in schema]
        if extra:
            raise InvalidValueError(f"material {self.id!r} has unknown properties: {extra}")
        for name, value in self.values.items():
            validate_value(schema[name], value)


@dataclass(frozen=True)
class DesignRequirement:
    """The engineer's ordered, partial set of required property values.

    Entry order is significant: it fixes the column order of the
    fragment database and the data matrix downstream.
    """

    entries: tuple[tuple[str, PropertyValue], ...]

    def __post_init__(self):
        if not self.entries:
            raise RequirementError("design requirement must be non-empty")
        seen: set[str] = set()
        for name, _ in self.entries:
            if name in seen:
                raise RequirementError(f"duplicate property {name!r} in requirement")
            seen.add(name)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.entries)

    def validate(self, schema: PropertySchema) -> None:
        for name, value in self.entries:
            if name not in schema:
                raise RequirementError(f"requirement references unknown property {name!r}")
            validate_value(schema[name], value)

    def scalarized(self, schema: PropertySchema) -> tuple[float, ...]:
        """Requirement values as reals, in entry order."""
        return tuple(scalarize(schema[name], value) for name, value in self.entries)


# ---------------------------------------------------------------------------
# Text syntax shared by CSV cells, requirement files and the CLI
# ---------------------------------------------------------------------------

def parse_value_cell(prop: PropertyDef, text: str) -> PropertyValue:
    """Parse one text cell according to the property kind.

    Numeric cells are decimal literals, interval cells are ``lo..hi``,
    ordinal cells are scale labels (verbatim, case-sensitive).
    """
    text = text.strip()
    if prop.kind is ValueKind.NUMERIC:
        try:
            return float(text)
        except ValueError:
            raise InvalidValueError(
                f"property {prop.name!r}: unparsable numeric value {text!r}"
            ) from None
    if prop.kind is ValueKind.INTERVAL:
        parts = text.split("..")
        if len(parts) != 2:
            raise InvalidValueError(
                f"property {prop.name!r}: interval cell must be 'lo..hi', got {text!r}"
            )
        try:
            lo, hi = float(parts[0]), float(parts[1])
        except ValueError:
            raise InvalidValueError(
                f"property {prop.name!r}: unparsable interval bounds {text!r}"
            ) from None
        return Interval(lo, hi)
    return validate_value(prop, text)  # ordinal label


def format_value_cell(value: PropertyValue) -> str:
    """Inverse of :func:`parse_value_cell`; floats use shortest round-trip form."""
    if isinstance(value, Interval):
        return f"{_fmt_float(value.lo)}..{_fmt_float(value.hi)}"
    if isinstance(value, str):
        return value
    return _fmt_float(float(value))


def parse_requirement(text: str, schema: PropertySchema) -> DesignRequirement:
    """Parse a requirement file: one ``<property> = <value>`` per line.

    Order of lines is preserved as requirement entry order; ``#`` starts
    a comment; blank lines are skipped. Value syntax matches CSV cells.
    """
    entries: list[tuple[str, PropertyValue]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise RequirementError(f"line {lineno}: expected '<property> = <value>', got {raw!r}")
        name, _, cell = line.partition("=")
        name = name.strip()
        if name not in schema:
            raise RequirementError(f"line {lineno}: unknown property {name!r}")
        entries.append((name, parse_value_cell(schema[name], cell)))
    if not entries:
        raise RequirementError("requirement file contains no entries")
    return DesignRequirement(tuple(entries))


def parse_requirement_inline(text: str, schema: PropertySchema) -> DesignRequirement:
    """Parse the CLI inline form ``prop=value,prop=value,...``."""
    entries: list[tuple[str, PropertyValue]] = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if "=" not in chunk:
            raise RequirementError(f"expected '<property>=<value>', got {chunk!r}")
        name, _, cell = chunk.partition("=")
        name = name.strip()
        if name not in schema:
            raise RequirementError(f"unknown property {name!r}")
        entries.append((name, parse_value_cell(schema[name], cell)))
    if not entries:
        raise RequirementError("empty requirement")
    return DesignRequirement(tuple(entries))


# ---------------------------------------------------------------------------
# Schema file parsing
# ---------------------------------------------------------------------------

def parse_schema(text: str) -> PropertySchema:
    """Parse a schema file (grammar in the module docstring)."""
    defs: list[PropertyDef] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = [f.strip() for f in line.split("|")]
        if len(fields) < 2:
            raise SchemaLoadError("expected '<name> | <kind> | <unit>'", line=lineno)
        name, kind_text = fields[0], fields[1]
        try:
            kind = ValueKind(kind_text)
        except ValueError:
            raise SchemaLoadError(
                f"unknown kind {kind_text!r} (expected numeric, interval or ordinal)",
                line=lineno,
            ) from None
        unit = fields[2] if len(fields) > 2 else ""
        scale: tuple[tuple[str, float], ...] | None = None
        if kind is ValueKind.ORDINAL:
            if len(fields) < 4 or not fields[3]:
                raise SchemaLoadError(
                    f"ordinal property {name!r} needs '<label>=<weight>; ...'", line=lineno
                )
            scale = _parse_scale(fields[3], lineno)
        elif len(fields) > 3 and fields[3]:
            raise SchemaLoadError(
                f"{kind.value} property {name!r} must not carry a scale", line=lineno
            )
        try:
            defs.append(PropertyDef(name, kind, unit, scale, position=len(defs)))
        except SchemaLoadError as exc:
            raise SchemaLoadError(str(exc), line=lineno) from None
    if not defs:
        raise SchemaLoadError("schema file defines no properties")
    return PropertySchema(tuple(defs))


def _parse_scale(text: str, lineno: int) -> tuple[tuple[str, float], ...]:
    pairs: list[tuple[str, float]] = []
    for item in text.split(";"):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise SchemaLoadError(f"scale entry {item!r} must be '<label>=<weight>'", line=lineno)
        label, _, weight_text = item.partition("=")
        try:
            weight = float(weight_text)
        except ValueError:
            raise SchemaLoadError(
                f"unparsable scale weight {weight_text!r} for label {label.strip()!r}",
                line=lineno,
            ) from None
        pairs.append((label.strip(), weight))
    return tuple(pairs)


def format_schema(schema: PropertySchema) -> str:
    """Render a schema back to file form (inverse of :func:`parse_schema`)."""
    lines = []
    for prop in schema.properties:
        parts = [prop.name, prop.kind.value, prop.unit]
        if prop.ordinal_scale:
            parts.append("; ".join(f"{l}={_fmt_float(w)}" for l, w in prop.ordinal_scale))
        lines.append(" | ".join(parts))
    return "\n".join(lines) + "\n"


def load_schema(path) -> PropertySchema:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_schema(fh.read())


def default_schema() -> PropertySchema:
    """The bundled 23-property schema (``data/schema23``)."""
    text = resources.files("matsel").joinpath("data/schema23").read_text(encoding="utf-8")
    return parse_schema(text)


def _fmt_float(x: float) -> str:
    # repr() gives the shortest string that round-trips; trim trailing '.0'
    # for integral values so cells read naturally.
    if x == int(x) and abs(x) < 1e16:
        return str(int(x))
    return repr(x)


def _is_finite(x) -> bool:
    try:
        return math.isfinite(x)
    except TypeError:
        return False
