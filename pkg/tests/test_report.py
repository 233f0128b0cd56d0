"""Report rendering, JSON serialization, exit-code policy."""

import json
from pathlib import Path

import jsonschema
import pytest

from smartgraph import __version__
from smartgraph.access import resolve_unit
from smartgraph.config import KeywordConfig
from smartgraph.detectors import Severity, Warning, run_all
from smartgraph.parser import parse_source
from smartgraph.report import (
    build_report,
    exit_code,
    render_dot,
    render_text,
    serialize_json,
)

FIXTURES = Path(__file__).parent / "fixtures"
SCHEMA = json.loads((Path(__file__).parent.parent / "schema" / "report.schema.json").read_text())


def report_for(name, **kwargs):
    unit = resolve_unit(parse_source((FIXTURES / name).read_text(), path=name))
    return build_report(unit, run_all(unit, KeywordConfig()), **kwargs)


def synthetic_warning(contract="C", line=1, detector="D2_missing_exit_validation", sev=Severity.HIGH):
    return Warning(
        detector=detector,
        severity=sev,
        contract=contract,
        function="f",
        line=line,
        message="High Risk: Missing Validation Logic in function f",
        related_symbols=["x.call"],
        related_nodes=[],
    )


def test_render_text_empty_report():
    text = render_text(report_for("simple_auction.sol"))
    assert text == "No logical security issues detected.\n"


def test_render_text_contains_alert_phrase():
    report = report_for("corpus/d02_vuln.sol")
    text = render_text(report)
    assert "Missing Validation Logic" in text
    assert "[HIGH] D2_missing_exit_validation Treasury.withdraw:6" in text
    assert text.count("Missing Validation Logic") == 1


def test_render_text_orders_blocks_by_contract_then_line():
    report = report_for("corpus/syfi_rebase.sol")
    text = render_text(report)
    assert text.index("D5_external_dependency") < text.index("D4_price_lag")
    assert text.rstrip().endswith("2 warnings: 1 high, 1 medium, 0 info")


def test_render_text_every_message_exactly_once():
    report = report_for("corpus/syfi_rebase.sol")
    text = render_text(report)
    for w in report.warnings:
        assert text.count(w.message) == 1


def test_render_text_color_toggle():
    report = report_for("corpus/d02_vuln.sol")
    plain = render_text(report, color=False)
    colored = render_text(report, color=True)
    assert "\x1b[31m" not in plain
    assert "\x1b[31m[HIGH]\x1b[0m" in colored


def test_serialize_json_empty_report_valid():
    unit = resolve_unit(parse_source("", path="empty.sol"))
    payload = json.loads(serialize_json(build_report(unit, [])))
    assert payload["contracts"] == []
    assert payload["warnings"] == []
    jsonschema.validate(payload, SCHEMA)


def test_serialize_json_round_trip_structure():
    report = report_for("simple_auction.sol")
    text = serialize_json(report)
    payload = json.loads(text)
    jsonschema.validate(payload, SCHEMA)
    assert list(payload) == ["version", "source", "contracts", "graphs", "warnings", "diagnostics"]
    assert payload["version"] == __version__
    assert payload["graphs"][0]["contract"] == "SimpleAuction"
    assert json.loads(serialize_json(report)) == payload


def test_serialize_json_detector_id_is_stable_string():
    report = report_for("corpus/d02_vuln.sol")
    payload = json.loads(serialize_json(report))
    assert payload["warnings"][0]["detector"] == "D2_missing_exit_validation"


def test_serialize_json_timestamp_only_when_requested():
    without = json.loads(serialize_json(report_for("simple_auction.sol")))
    assert "generated_at" not in without
    with_ts = json.loads(serialize_json(report_for("simple_auction.sol", timestamps=True)))
    assert "generated_at" in with_ts


def test_all_corpus_reports_validate_and_round_trip():
    for sol in sorted((FIXTURES / "corpus").glob("*.sol")):
        unit = resolve_unit(parse_source(sol.read_text(), path=sol.name))
        report = build_report(unit, run_all(unit, KeywordConfig()))
        payload = json.loads(serialize_json(report))
        jsonschema.validate(payload, SCHEMA)
        assert json.loads(serialize_json(report)) == payload


def test_byte_stability_across_runs():
    for fmt in (render_text, serialize_json, render_dot):
        assert fmt(report_for("corpus/syfi_rebase.sol")) == fmt(report_for("corpus/syfi_rebase.sol"))


def test_warning_related_nodes_resolve_in_graph():
    report = report_for("corpus/syfi_rebase.sol")
    by_contract = {g.contract_name: g.node_ids() for g in report.graphs}
    for w in report.warnings:
        for nid in w.related_nodes:
            assert nid in by_contract[w.contract]


def test_exit_code_policy_table():
    unit = resolve_unit(parse_source("contract C {}", path="c.sol"))
    clean = build_report(unit, [])
    medium = build_report(unit, [synthetic_warning(sev=Severity.MEDIUM)])
    high = build_report(unit, [synthetic_warning(sev=Severity.HIGH)])
    assert exit_code(clean, "warning") == 0
    assert exit_code(medium, "high") == 0
    assert exit_code(high, "high") == 1
    assert exit_code(medium, "warning") == 1
    assert exit_code(high, "none") == 0
    with pytest.raises(ValueError):
        exit_code(clean, "never")
