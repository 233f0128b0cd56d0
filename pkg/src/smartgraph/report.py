"""Audit report assembly and serialization (terminal text, JSON, DOT).

Output is byte-stable for equal inputs: timestamps are excluded unless
explicitly requested and every collection is emitted in a fixed order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone

from . import __version__
from .detectors import Warning, Severity
from .graph import DependencyGraph, build_graph, export_dot
from .model import ParseDiagnostic, SourceUnit

_COLORS = {
    Severity.HIGH: "\x1b[31m",
    Severity.MEDIUM: "\x1b[33m",
    Severity.INFO: "\x1b[36m",
}
_RESET = "\x1b[0m"


@dataclass
class ContractSummary:
    name: str
    kind: str
    functions: int
    state_vars: int
    events: int


@dataclass
class AuditReport:
    tool_version: str
    source_path: str
    contracts: list[ContractSummary] = field(default_factory=list)
    graphs: list[DependencyGraph] = field(default_factory=list)
    warnings: list[Warning] = field(default_factory=list)
    diagnostics: list[ParseDiagnostic] = field(default_factory=list)
    generated_at: str | None = None


def build_report(
    unit: SourceUnit, warnings: list[Warning], timestamps: bool = False
) -> AuditReport:
    """Assemble the report bundle for one analyzed unit."""
    report = AuditReport(tool_version=__version__, source_path=unit.path)
    for contract in unit.contracts:
        report.contracts.append(
            ContractSummary(
                name=contract.name,
                kind=contract.kind.value,
                functions=len(contract.functions),
                state_vars=len(contract.state_vars),
                events=len(contract.events),
            )
        )
        report.graphs.append(build_graph(contract))
    report.warnings = sorted(warnings, key=lambda w: (w.contract, w.line, w.detector))
    report.diagnostics = list(unit.diagnostics)
    if timestamps:
        report.generated_at = datetime.now(timezone.utc).isoformat()
    return report


def render_text(report: AuditReport, color: bool = False) -> str:
    """Terminal rendering: one block per warning plus a severity footer."""
    lines: list[str] = []
    for w in report.warnings:
        severity = w.severity.value.upper()
        tag = f"[{severity}]"
        if color:
            tag = f"{_COLORS[w.severity]}{tag}{_RESET}"
        location = f"{w.contract}.{w.function}" if w.function else w.contract
        lines.append(f"{tag} {w.detector} {location}:{w.line} — {w.message}")
        if w.related_symbols:
            lines.append(f"    related: {', '.join(w.related_symbols)}")
        lines.append("")
    if not report.warnings:
        return "No logical security issues detected.\n"
    high = sum(1 for w in report.warnings if w.severity is Severity.HIGH)
    medium = sum(1 for w in report.warnings if w.severity is Severity.MEDIUM)
    info = sum(1 for w in report.warnings if w.severity is Severity.INFO)
    total = len(report.warnings)
    noun = "warning" if total == 1 else "warnings"
    lines.append(f"{total} {noun}: {high} high, {medium} medium, {info} info")
    return "\n".join(lines) + "\n"


def _graph_payload(graph: DependencyGraph) -> dict:
    return {
        "contract": graph.contract_name,
        "nodes": [
            {"id": n.id, "kind": n.kind.value, "label": n.label, "line": n.line}
            for n in sorted(graph.nodes, key=lambda n: n.id)
        ],
        "edges": [
            {"from": e.src, "to": e.dst, "kind": e.kind.value, "line": e.line}
            for e in graph.edges
        ],
    }


def serialize_json(report: AuditReport) -> str:
    """Fixed-key-order JSON document; the transport contract for the triage UI."""
    payload: dict = {
        "version": report.tool_version,
        "source": report.source_path,
        "contracts": [
            {
                "name": c.name,
                "kind": c.kind,
                "functions": c.functions,
                "state_vars": c.state_vars,
                "events": c.events,
            }
            for c in report.contracts
        ],
        "graphs": [_graph_payload(g) for g in report.graphs],
        "warnings": [w.to_dict() for w in report.warnings],
        "diagnostics": [
            {"line": d.line, "severity": d.severity.value, "message": d.message}
            for d in report.diagnostics
        ],
    }
    if report.generated_at is not None:
        payload["generated_at"] = report.generated_at
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def render_dot(report: AuditReport) -> str:
    """All contract graphs of the unit, concatenated in contract order."""
    return "\n".join(export_dot(g) for g in report.graphs)


def exit_code(report: AuditReport, fail_on: str = "none") -> int:
    """CI policy: 0 clean, 1 findings per policy (2 is reserved for the CLI)."""
    if fail_on == "none":
        return 0
    if fail_on == "warning":
        return 1 if report.warnings else 0
    if fail_on == "high":
        return 1 if any(w.severity is Severity.HIGH for w in report.warnings) else 0
    raise ValueError(f"unknown fail_on policy: {fail_on}")
