import json
import pathlib

import jsonschema
import numpy as np
import pytest

import arrayaudit

ROOT = pathlib.Path(__file__).resolve().parents[2]
CORPUS = ROOT / "corpus"


def schema(name):
    return json.loads((ROOT / "schema" / name).read_text())


def test_codes_and_explain():
    codes = arrayaudit.codes()
    assert len(codes) == 17
    for code in codes:
        assert arrayaudit.explain(code)
    with pytest.raises(arrayaudit.AuditError):
        arrayaudit.explain("NOT_A_CODE")


def test_corrupted_corpus_report_matches_schema():
    code, report = arrayaudit.audit(str(CORPUS / "corrupted" / "manifest.json"))
    assert code == 2
    jsonschema.validate(report, schema("report.schema.json"))
    found = {f["code"] for f in report["findings"]}
    assert {"DUP_COLUMNS", "OFFSET_DETECTED", "SENTINEL_VIOLATION", "LABEL_REVERSAL"} <= found


def test_clean_corpus_exits_zero():
    code, report = arrayaudit.audit(str(CORPUS / "clean" / "manifest.json"))
    assert code == 0
    jsonschema.validate(report, schema("report.schema.json"))


def test_report_is_deterministic():
    manifest = str(CORPUS / "corrupted" / "manifest.json")
    assert arrayaudit.run_audit(manifest)["report"] == arrayaudit.run_audit(manifest)["report"]


def test_manifests_match_schema_and_validator():
    for which in ("clean", "corrupted"):
        text = (CORPUS / which / "manifest.json").read_text()
        jsonschema.validate(json.loads(text), schema("manifest.schema.json"))
        assert arrayaudit.validate_manifest(text) == []
    assert arrayaudit.validate_manifest("{}")


def test_duplicate_columns_on_numpy():
    rng = np.random.default_rng(3)
    x = rng.normal(6.0, 1.0, size=(100, 8))
    x[:, 5] = x[:, 2]
    x[:, 7] = x[:, 2] * 2 + 1
    out = arrayaudit.duplicate_columns(x, [f"c{i}" for i in range(8)])
    assert out["components"] == [["c2", "c5", "c7"]]
    assert out["n_distinct"] == 6


def test_auc():
    assert arrayaudit.auc([0.9, 0.35, 0.4, 0.3], [1, 1, 0, 0]) == 0.75
