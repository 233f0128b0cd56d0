/**
 * Triage session logic, kept free of DOM concerns so it can be tested headless.
 *
 * The loaded report is frozen on entry and never mutated; every derived
 * number (metrics) is recomputed from the verdict map on demand.
 */

import type {
  AuditReport,
  FocusSelection,
  Metrics,
  ReportWarning,
  SessionExport,
  TriageSession,
  Verdict,
  VerdictRecord,
} from "./types.js";

export class ReportFormatError extends Error {}

const VERDICTS: Verdict[] = ["confirmed", "false_positive", "needs_info"];

function deepFreeze<T>(value: T): T {
  if (value && typeof value === "object" && !Object.isFrozen(value)) {
    Object.freeze(value);
    for (const key of Object.keys(value as object)) {
      deepFreeze((value as Record<string, unknown>)[key]);
    }
  }
  return value;
}

/** Parse and validate report JSON text; reject anything without a version. */
export function loadReport(text: string): AuditReport {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch {
    throw new ReportFormatError("not valid JSON");
  }
  if (typeof raw !== "object" || raw === null || Array.isArray(raw)) {
    throw new ReportFormatError("report must be a JSON object");
  }
  const obj = raw as Record<string, unknown>;
  if (typeof obj.version !== "string") {
    throw new ReportFormatError("missing report version key");
  }
  for (const key of ["source", "contracts", "graphs", "warnings", "diagnostics"]) {
    if (!(key in obj)) {
      throw new ReportFormatError(`missing report key '${key}'`);
    }
  }
  if (!Array.isArray(obj.warnings) || !Array.isArray(obj.graphs)) {
    throw new ReportFormatError("warnings and graphs must be arrays");
  }
  return deepFreeze(obj as unknown as AuditReport);
}

export function createSession(report: AuditReport): TriageSession {
  return { report, verdicts: new Map() };
}

/** Store or replace the verdict for one warning; latest entry wins. */
export function recordVerdict(
  session: TriageSession,
  warningIndex: number,
  verdict: Verdict,
  note = "",
  reviewer = ""
): TriageSession {
  if (!Number.isInteger(warningIndex) || warningIndex < 0 || warningIndex >= session.report.warnings.length) {
    throw new RangeError(`warning index ${warningIndex} out of range`);
  }
  if (!VERDICTS.includes(verdict)) {
    throw new RangeError(`unknown verdict '${verdict}'`);
  }
  session.verdicts.set(warningIndex, { warning_index: warningIndex, verdict, note, reviewer });
  return session;
}

/** Recomputed on every call; never cached or stored. */
export function metrics(session: TriageSession): Metrics {
  const m: Metrics = {
    confirmed: 0,
    false_positive: 0,
    needs_info: 0,
    unreviewed: 0,
  };
  for (const record of session.verdicts.values()) {
    m[record.verdict] += 1;
  }
  m.unreviewed = session.report.warnings.length - session.verdicts.size;
  return m;
}

/**
 * Nodes and edges to highlight for a warning: its related nodes plus their
 * one-hop neighborhood, mirroring the analyzer's warning subgraph.
 */
export function focusSelection(report: AuditReport, warning: ReportWarning): FocusSelection {
  const graph = report.graphs.find((g) => g.contract === warning.contract);
  const selected = new Set(warning.related_nodes);
  if (!graph || selected.size === 0) {
    return { nodeIds: selected, edges: [] };
  }
  const expanded = new Set(selected);
  for (const edge of graph.edges) {
    if (selected.has(edge.from)) {
      expanded.add(edge.to);
    }
    if (selected.has(edge.to)) {
      expanded.add(edge.from);
    }
  }
  const edges = graph.edges.filter((e) => expanded.has(e.from) && expanded.has(e.to));
  return { nodeIds: expanded, edges };
}

/** Serialize the session for hand-off or later resumption. */
export function exportSession(session: TriageSession): SessionExport {
  const verdicts = [...session.verdicts.values()].sort(
    (a, b) => a.warning_index - b.warning_index
  );
  return {
    report_source: session.report.source,
    report_version: session.report.version,
    verdicts: verdicts.map((v) => ({ ...v })),
    metrics: metrics(session),
  };
}

/** Rebuild a session from exported JSON against a freshly loaded report. */
export function importSession(report: AuditReport, text: string): TriageSession {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch {
    throw new ReportFormatError("session file is not valid JSON");
  }
  const obj = raw as Partial<SessionExport>;
  if (!obj || !Array.isArray(obj.verdicts)) {
    throw new ReportFormatError("session file lacks a verdicts list");
  }
  if (obj.report_version !== report.version || obj.report_source !== report.source) {
    throw new ReportFormatError("session does not match the loaded report");
  }
  const session = createSession(report);
  for (const entry of obj.verdicts) {
    const rec = entry as VerdictRecord;
    recordVerdict(session, rec.warning_index, rec.verdict, rec.note ?? "", rec.reviewer ?? "");
  }
  return session;
}
