"""File format: positioned parse errors and canonical, round-trip-stable output."""

import json
import random

import pytest

from helpers import make_camera_model, random_model
from riskforge import ParseFailure, parse_model, serialize_model

MINIMAL = """\
{
  "meta": {"product": "widget", "version": "1"},
  "requirements": [{"id": "r1", "text": "do the thing"}],
  "functions": [{"id": "f1", "verb": "do", "noun": "thing"}],
  "components": [{"id": "c1", "name": "doer"}],
  "rf": [["r1", "f1"]],
  "fc": [["f1", "c1"]],
  "failure_modes": []
}
"""


def errors_of(text):
    with pytest.raises(ParseFailure) as excinfo:
        parse_model(text)
    return excinfo.value.errors


class TestParseSuccess:
    def test_minimal_connected_model(self):
        model = parse_model(MINIMAL)
        assert len(model.requirements) == len(model.functions) == len(model.components) == 1
        assert model.rf[0].source == "r1"
        assert model.failure_modes == ()

    def test_defaults_applied(self):
        model = parse_model(MINIMAL)
        assert model.functions[0].inputs == ()
        assert model.components[0].concept is None

    def test_full_document(self, camera_model):
        parsed = parse_model(serialize_model(camera_model))
        assert parsed == camera_model
        fm = parsed.failure_modes_by_id["fm_damage"]
        assert fm.control.detection_rank == 8
        assert fm.causes[0].occurrence_rank == 7


class TestSyntaxErrors:
    def test_malformed_document(self):
        errors = errors_of('{"meta": ')
        assert errors[0].code == "Syntax"

    def test_trailing_garbage(self):
        errors = errors_of(MINIMAL + "x")
        assert errors[0].code == "Syntax"
        assert errors[0].line == 10

    def test_position_of_bad_token(self):
        errors = errors_of('{\n  "meta": nope\n}')
        assert (errors[0].line, errors[0].column) == (2, 11)

    def test_duplicate_key(self):
        text = '{"meta": {"product": "a", "version": "1", "product": "b"}}'
        codes = [e.code for e in errors_of(text)]
        assert "DuplicateKey" in codes

    def test_empty_document(self):
        assert errors_of("")[0].code == "Syntax"


class TestSchemaErrors:
    def test_unknown_top_level_key(self):
        data = json.loads(MINIMAL)
        data["notes"] = []
        codes = [e.code for e in errors_of(json.dumps(data))]
        assert "UnknownKey" in codes

    def test_unknown_record_key(self):
        data = json.loads(MINIMAL)
        data["requirements"][0]["priority"] = 1
        codes = [e.code for e in errors_of(json.dumps(data))]
        assert "UnknownKey" in codes

    def test_missing_required_key(self):
        data = json.loads(MINIMAL)
        del data["requirements"][0]["text"]
        codes = [e.code for e in errors_of(json.dumps(data))]
        assert "MissingKey" in codes

    def test_wrong_type(self):
        data = json.loads(MINIMAL)
        data["requirements"][0]["text"] = 5
        codes = [e.code for e in errors_of(json.dumps(data))]
        assert "Type" in codes

    def test_float_rank_rejected(self):
        data = json.loads(MINIMAL)
        data["failure_modes"] = [
            {
                "id": "fm1",
                "element": "c1",
                "category": "Damaged",
                "description": "broken",
                "effects": [{"text": "bad", "severity_rank": 7.5}],
            }
        ]
        codes = [e.code for e in errors_of(json.dumps(data))]
        assert "Type" in codes

    def test_bad_id_charset(self):
        data = json.loads(MINIMAL)
        data["requirements"][0]["id"] = "r 1"
        codes = [e.code for e in errors_of(json.dumps(data))]
        assert "InvalidId" in codes

    def test_bad_flow_kind(self):
        data = json.loads(MINIMAL)
        data["functions"][0]["inputs"] = [{"description": "x", "kind": "data"}]
        codes = [e.code for e in errors_of(json.dumps(data))]
        assert "InvalidValue" in codes

    def test_bad_frequency_shape(self):
        data = json.loads(MINIMAL)
        data["failure_modes"] = [
            {
                "id": "fm1",
                "element": "c1",
                "category": "Damaged",
                "description": "broken",
                "causes": [{"text": "why", "frequency": [1, 0]}],
            }
        ]
        codes = [e.code for e in errors_of(json.dumps(data))]
        assert "InvalidValue" in codes

    def test_bad_control_class(self):
        data = json.loads(MINIMAL)
        data["failure_modes"] = [
            {
                "id": "fm1",
                "element": "c1",
                "category": "Damaged",
                "description": "broken",
                "control": {"method_class": "Inspection"},
            }
        ]
        codes = [e.code for e in errors_of(json.dumps(data))]
        assert "InvalidValue" in codes

    def test_multiple_errors_reported_together(self):
        data = json.loads(MINIMAL)
        data["requirements"][0]["id"] = "r 1"
        data["components"][0]["name"] = ""
        errors = errors_of(json.dumps(data))
        assert len(errors) >= 2

    def test_non_object_root(self):
        assert errors_of("[1, 2]")[0].code == "Type"


class TestReferenceErrors:
    def test_reversed_rf_edge(self):
        data = json.loads(MINIMAL)
        data["rf"] = [["f1", "r1"]]
        errors = errors_of(json.dumps(data))
        assert [e.code for e in errors] == ["EdgeDirection"]

    def test_dangling_edge(self):
        data = json.loads(MINIMAL)
        data["fc"] = [["f1", "c9"]]
        errors = errors_of(json.dumps(data))
        assert [e.code for e in errors] == ["DanglingReference"]

    def test_component_failure_mode_with_requirement_category(self):
        data = json.loads(MINIMAL)
        data["failure_modes"] = [
            {
                "id": "fm1",
                "element": "c1",
                "category": "Intermittence",
                "description": "cuts out",
            }
        ]
        text = json.dumps(data, indent=2)
        errors = errors_of(text)
        assert [e.code for e in errors] == ["CategoryDomainMismatch"]
        # The error points at the category value inside the failure mode.
        lines = text.split("\n")
        assert '"category"' in lines[errors[0].line - 1]

    def test_positions_lie_within_the_document(self):
        samples = [
            '{"meta": {"product": 1, "version": "1"}}',
            MINIMAL.replace('["r1", "f1"]', '["f1", "r1"]'),
            MINIMAL.replace('"rf": [["r1", "f1"]]', '"rf": [["r1", "f9"]]'),
        ]
        for text in samples:
            total_lines = text.count("\n") + 1
            for error in errors_of(text):
                assert 1 <= error.line <= total_lines
                line_text = text.split("\n")[error.line - 1]
                assert 1 <= error.column <= len(line_text) + 1


class TestSerialization:
    def test_round_trip_identity(self, camera_model, smartphone_model):
        for model in (camera_model, smartphone_model):
            assert parse_model(serialize_model(model)) == model

    def test_byte_determinism(self, camera_model):
        assert serialize_model(camera_model) == serialize_model(camera_model)

    def test_shape(self, camera_model):
        text = serialize_model(camera_model)
        assert text.endswith("\n")
        assert "\r" not in text
        data = json.loads(text)
        assert list(data) == [
            "meta",
            "requirements",
            "functions",
            "components",
            "rf",
            "fc",
            "failure_modes",
        ]
        assert list(data["failure_modes"][2]) == [
            "id",
            "element",
            "category",
            "description",
            "effects",
            "causes",
            "control",
        ]

    def test_unicode_round_trip(self):
        import dataclasses

        from riskforge import Component

        model = make_camera_model()
        model = dataclasses.replace(
            model,
            components=(Component("c_cam", "Kamera-Modul beschädigt", concept="Schutzschaltung"),),
        )
        text = serialize_model(model)
        assert "Kamera-Modul beschädigt" in text
        again = parse_model(text)
        assert again == model
        assert serialize_model(again) == text

    def test_random_model_round_trips(self):
        rng = random.Random(20260808)
        for _ in range(50):
            model = random_model(rng)
            text = serialize_model(model)
            assert parse_model(text) == model
            assert serialize_model(parse_model(text)) == text
