from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from matsel import (
    DataMatrix,
    DesignRequirement,
    Interval,
    Material,
    MaterialClass,
    MaterialDatabase,
    default_rules,
    default_schema,
    ingest_csv,
)

from oracles import VEC_G, VEC_X, VEC_Y

DATA_DIR = Path(__file__).parent / "data"

REFERENCE_ENTRIES = (
    ("Tensile Strength", 20.0),
    ("Yield Strength", 23.9),
    ("Impact Strength", 4.0),
    ("Hardness", 56.67),
    ("Tensile Modulus", 2000.0),
)


@pytest.fixture(scope="session")
def schema():
    return default_schema()


@pytest.fixture(scope="session")
def kb(schema):
    return default_rules(schema)


@pytest.fixture
def reference_requirement():
    return DesignRequirement(REFERENCE_ENTRIES)


@pytest.fixture(scope="session")
def fixture6_text():
    return (DATA_DIR / "fixture6.csv").read_text(encoding="utf-8")


@pytest.fixture
def fixture6_db(fixture6_text, schema):
    return ingest_csv(fixture6_text, schema)


#: Per-class filler values for the 18 properties outside the mechanical five,
#: so handcrafted test materials validate against the full schema.
_FILLERS = {
    MaterialClass.POLYMER: {
        "Density": Interval(1.1, 1.2),
        "Compressive Strength": 90.0,
        "Flexural Strength": 100.0,
        "Shear Modulus": 1.0,
        "Poisson Ratio": 0.4,
        "Elongation at Break": 50.0,
        "Fracture Toughness": 3.0,
        "Fatigue Strength": 25.0,
        "Melting Point": 200.0,
        "Max Service Temperature": 120.0,
        "Thermal Conductivity": 0.3,
        "Thermal Expansion": 80.0,
        "Specific Heat": 1500.0,
        "Water Absorption": Interval(0.1, 0.5),
        "Corrosion Resistance": "Very Good",
        "Wear Resistance": "Fair",
        "Machinability": "Excellent",
        "Flame Resistance": "Poor",
    },
    MaterialClass.CERAMIC: {
        "Density": Interval(3.5, 3.9),
        "Compressive Strength": 2600.0,
        "Flexural Strength": 350.0,
        "Shear Modulus": 150.0,
        "Poisson Ratio": 0.22,
        "Elongation at Break": 0.1,
        "Fracture Toughness": 4.0,
        "Fatigue Strength": 180.0,
        "Melting Point": 2050.0,
        "Max Service Temperature": 1700.0,
        "Thermal Conductivity": 9.0,
        "Thermal Expansion": 7.2,
        "Specific Heat": 880.0,
        "Water Absorption": Interval(0.001, 0.05),
        "Corrosion Resistance": "Excellent",
        "Wear Resistance": "Excellent",
        "Machinability": "Poor",
        "Flame Resistance": "Excellent",
    },
    MaterialClass.METAL: {
        "Density": Interval(7.8, 7.9),
        "Compressive Strength": 760.0,
        "Flexural Strength": 800.0,
        "Shear Modulus": 80.0,
        "Poisson Ratio": 0.29,
        "Elongation at Break": 22.0,
        "Fracture Toughness": 50.0,
        "Fatigue Strength": 380.0,
        "Melting Point": 1425.0,
        "Max Service Temperature": 450.0,
        "Thermal Conductivity": 44.0,
        "Thermal Expansion": 12.3,
        "Specific Heat": 475.0,
        "Water Absorption": Interval(0.001, 0.005),
        "Corrosion Resistance": "Fair",
        "Wear Resistance": "Good",
        "Machinability": "Good",
        "Flame Resistance": "Very Good",
    },
}


def make_material(
    material_id: str,
    material_class: MaterialClass,
    name: str | None = None,
    **overrides,
) -> Material:
    """Material with class-typical filler values plus explicit overrides."""
    values = dict(_FILLERS[material_class])
    mechanical = dict(REFERENCE_ENTRIES)  # sane defaults for the five
    values.update(mechanical)
    values.update(overrides)
    return Material(
        id=material_id,
        name=name or material_id,
        material_class=material_class,
        values=values,
    )


def _record(vec) -> dict:
    names = [n for n, _ in REFERENCE_ENTRIES]
    return dict(zip(names, (float(v) for v in vec)))


@pytest.fixture(scope="session")
def xg_database(schema):
    """Two Polymer candidates carrying the canonical X and G records,
    plus one filler material of each other class."""
    materials = (
        make_material("PX", MaterialClass.POLYMER, name="candidate X", **_record(VEC_X)),
        make_material("PG", MaterialClass.POLYMER, name="candidate G", **_record(VEC_G)),
        make_material("CF", MaterialClass.CERAMIC, name="ceramic filler"),
        make_material("MF", MaterialClass.METAL, name="metal filler"),
    )
    for m in materials:
        m.validate(schema)
    return MaterialDatabase(schema, materials)


@pytest.fixture
def xg_matrix():
    """The canonical two-candidate matrix over the five attributes."""
    return DataMatrix(
        row_ids=("PX", "PG"),
        columns=tuple(n for n, _ in REFERENCE_ENTRIES),
        cells=np.array([VEC_X, VEC_G], dtype=np.float64),
    )


@pytest.fixture
def query_y():
    return np.array(VEC_Y, dtype=np.float64)
