"""Static analysis of Solidity contracts for business-logic audit triage.

Pipeline: parse_source -> resolve_unit -> build_graph / run_all -> report.
"""

__version__ = "0.1.0"

from .access import resolve_access_sets, resolve_unit
from .config import ConfigError, KeywordConfig, load_config
from .detectors import Severity, Warning, run_all
from .graph import DependencyGraph, build_graph, export_dot, subgraph_for_warning
from .lexer import strip_noise
from .model import ContractDef, FunctionDef, SourceUnit
from .parser import parse_source
from .report import AuditReport, build_report, exit_code, render_dot, render_text, serialize_json

__all__ = [
    "__version__",
    "AuditReport",
    "ConfigError",
    "ContractDef",
    "DependencyGraph",
    "FunctionDef",
    "KeywordConfig",
    "Severity",
    "SourceUnit",
    "Warning",
    "build_graph",
    "build_report",
    "exit_code",
    "export_dot",
    "load_config",
    "parse_source",
    "render_dot",
    "render_text",
    "resolve_access_sets",
    "resolve_unit",
    "run_all",
    "serialize_json",
    "strip_noise",
    "subgraph_for_warning",
]
