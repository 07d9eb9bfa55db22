import pytest
from fastapi.testclient import TestClient

from matsel import ALL_METRICS, SelectionMode, compare_metrics, serialize_csv
from matsel.service import ServiceConfig, create_app, load_engine

from conftest import REFERENCE_ENTRIES

REFERENCE_BODY = [{"property": name, "value": value} for name, value in REFERENCE_ENTRIES]


@pytest.fixture(scope="module")
def xg_client(tmp_path_factory):
    # Build the X/G fixture database on disk and serve it.
    from conftest import make_material, _record
    from oracles import VEC_G, VEC_X
    from matsel import MaterialClass, MaterialDatabase, default_schema

    schema = default_schema()
    db = MaterialDatabase(
        schema,
        (
            make_material("PX", MaterialClass.POLYMER, name="candidate X", **_record(VEC_X)),
            make_material("PG", MaterialClass.POLYMER, name="candidate G", **_record(VEC_G)),
            make_material("MF", MaterialClass.METAL, name="metal filler"),
        ),
    )
    path = tmp_path_factory.mktemp("svc") / "xg.csv"
    path.write_text(serialize_csv(db), encoding="utf-8")
    config = ServiceConfig(db_path=str(path))
    app = create_app(config)
    with TestClient(app) as client:
        client.config = config
        yield client


class TestSchemaEndpoint:
    def test_returns_23_properties_in_schema_order(self, xg_client, schema):
        response = xg_client.get("/api/schema")
        assert response.status_code == 200
        properties = response.json()["properties"]
        assert [p["name"] for p in properties] == list(schema.names)
        assert [p["position"] for p in properties] == list(range(23))

    def test_first_five_names(self, xg_client):
        properties = xg_client.get("/api/schema").json()["properties"]
        assert [p["name"] for p in properties[:5]] == [
            "Tensile Strength", "Yield Strength", "Impact Strength",
            "Hardness", "Tensile Modulus",
        ]

    def test_ordinal_properties_carry_labels(self, xg_client):
        properties = xg_client.get("/api/schema").json()["properties"]
        ordinals = [p for p in properties if p["kind"] == "ordinal"]
        assert len(ordinals) == 4
        assert all(
            p["ordinal_labels"] == ["Poor", "Fair", "Good", "Very Good", "Excellent"]
            for p in ordinals
        )
        numerics = [p for p in properties if p["kind"] == "numeric"]
        assert all(p["ordinal_labels"] is None for p in numerics)

    def test_repeated_calls_identical(self, xg_client):
        first = xg_client.get("/api/schema").content
        assert all(xg_client.get("/api/schema").content == first for _ in range(3))


class TestClassifyEndpoint:
    def test_reference_requirement_is_polymer(self, xg_client):
        response = xg_client.post("/api/classify", json={"requirement": REFERENCE_BODY})
        assert response.status_code == 200
        body = response.json()
        assert body["material_class"] == "Polymer"
        assert body["index_pattern"] == [1, 2, 3, 6, 7]
        assert body["node_list"][0] == {"property": "Tensile Strength", "position": 0}

    def test_empty_requirement_is_400(self, xg_client):
        response = xg_client.post("/api/classify", json={"requirement": []})
        assert response.status_code == 400

    def test_unknown_property_is_400_naming_it(self, xg_client):
        response = xg_client.post(
            "/api/classify",
            json={"requirement": [{"property": "Flavor", "value": 1.0}]},
        )
        assert response.status_code == 400
        assert "Flavor" in response.json()["detail"]

    def test_malformed_body_is_400(self, xg_client):
        response = xg_client.post("/api/classify", json={"nope": 1})
        assert response.status_code == 400

    def test_unclassifiable_is_422(self, xg_client):
        response = xg_client.post(
            "/api/classify",
            json={"requirement": [{"property": "Hardness", "value": 750.0}]},
        )
        assert response.status_code == 422
        assert "no decision rule fired" in response.json()["detail"]

    def test_interval_value_forms(self, xg_client):
        for value in ({"lo": 0.9, "hi": 1.1}, "0.9..1.1"):
            response = xg_client.post(
                "/api/classify",
                json={"requirement": [{"property": "Density", "value": value}]},
            )
            assert response.status_code == 200
            assert response.json()["material_class"] == "Polymer"

    def test_reversed_interval_is_400(self, xg_client):
        response = xg_client.post(
            "/api/classify",
            json={"requirement": [{"property": "Density", "value": {"lo": 2.0, "hi": 1.0}}]},
        )
        assert response.status_code == 400


class TestCompareEndpoint:
    def test_paper_min_splits_winners(self, xg_client):
        response = xg_client.post(
            "/api/compare", json={"requirement": REFERENCE_BODY, "mode": "paper-min"}
        )
        assert response.status_code == 200
        winners = {r["metric"]: r["winner_id"] for r in response.json()["reports"]}
        assert winners["euclidean"] == "PX"
        assert winners["geomavg"] == "PG"
        assert winners["geomavg"] != winners["euclidean"]

    def test_oriented_selects_x_everywhere(self, xg_client):
        response = xg_client.post(
            "/api/compare", json={"requirement": REFERENCE_BODY, "mode": "oriented"}
        )
        reports = response.json()["reports"]
        assert len(reports) == 6
        assert all(r["winner_id"] == "PX" for r in reports)

    def test_empty_metric_list_is_400(self, xg_client):
        response = xg_client.post(
            "/api/compare", json={"requirement": REFERENCE_BODY, "metrics": []}
        )
        assert response.status_code == 400

    def test_unknown_metric_is_400(self, xg_client):
        response = xg_client.post(
            "/api/compare", json={"requirement": REFERENCE_BODY, "metrics": ["nosuch"]}
        )
        assert response.status_code == 400

    def test_unknown_mode_is_400(self, xg_client):
        response = xg_client.post(
            "/api/compare", json={"requirement": REFERENCE_BODY, "mode": "upside-down"}
        )
        assert response.status_code == 400

    def test_no_candidates_is_422(self, xg_client):
        # Classifies as Ceramic; the fixture database has no ceramics.
        body = [
            {"property": "Hardness", "value": 1200.0},
            {"property": "Melting Point", "value": 2000.0},
            {"property": "Max Service Temperature", "value": 1500.0},
        ]
        response = xg_client.post("/api/compare", json={"requirement": body})
        assert response.status_code == 422
        assert "no candidates" in response.json()["detail"]

    def test_top_k_truncates(self, xg_client):
        response = xg_client.post(
            "/api/compare", json={"requirement": REFERENCE_BODY, "top_k": 1}
        )
        assert all(len(r["ranking"]) == 1 for r in response.json()["reports"])

    def test_payload_matches_direct_library_call(self, xg_client):
        from matsel import default_rules, default_schema, load_database, DesignRequirement

        response = xg_client.post(
            "/api/compare", json={"requirement": REFERENCE_BODY, "mode": "paper-min"}
        )
        schema = default_schema()
        db = load_database(xg_client.config.db_path, schema)
        report = compare_metrics(
            db,
            DesignRequirement(REFERENCE_ENTRIES),
            default_rules(schema),
            ALL_METRICS,
            SelectionMode.PAPER_MIN,
        )
        assert response.json() == report.to_dict()

    def test_winners_carry_projected_values(self, xg_client):
        response = xg_client.post("/api/compare", json={"requirement": REFERENCE_BODY})
        winners = response.json()["winners"]
        assert winners and winners[0]["material_id"] == "PX"
        assert winners[0]["values"]["Tensile Strength"] == pytest.approx(27.456)


class TestHealth:
    def test_reports_material_count(self, xg_client):
        response = xg_client.get("/healthz")
        assert response.status_code == 200
        assert response.json() == {"materials": 3}

    def test_stable_across_calls(self, xg_client):
        assert all(
            xg_client.get("/healthz").json() == {"materials": 3} for _ in range(3)
        )


class TestStartup:
    def test_missing_database_fails_startup(self, tmp_path):
        with pytest.raises(OSError):
            create_app(ServiceConfig(db_path=str(tmp_path / "missing.csv")))

    def test_broken_rules_fail_startup(self, tmp_path, fixture6_text):
        db = tmp_path / "db.csv"
        db.write_text(fixture6_text, encoding="utf-8")
        rules = tmp_path / "rules"
        rules.write_text("rule 1 => Polymer when Flavor < 3\n", encoding="utf-8")
        from matsel import RulesLoadError

        with pytest.raises(RulesLoadError):
            create_app(ServiceConfig(db_path=str(db), rules_path=str(rules)))

    def test_engine_loads_defaults(self, tmp_path, fixture6_text):
        db = tmp_path / "db.csv"
        db.write_text(fixture6_text, encoding="utf-8")
        engine = load_engine(ServiceConfig(db_path=str(db)))
        assert len(engine.schema) == 23
        assert len(engine.kb) == 23
        assert len(engine.db) == 6
