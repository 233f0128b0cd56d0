/**
 * Types mirroring the analyzer's JSON report schema (schema/report.schema.json)
 * plus the triage session model layered on top of it.
 */

export type NodeKind =
  | "contract"
  | "function"
  | "constructor"
  | "modifier"
  | "state_var"
  | "event"
  | "struct"
  | "loop"
  | "conditional"
  | "external_boundary";

export type EdgeKind =
  | "data_write"
  | "data_read"
  | "input_dependency"
  | "initialization"
  | "systemic_call"
  | "emits"
  | "guarded_by"
  | "contains";

export type Severity = "info" | "medium" | "high";

export interface GraphNode {
  id: string;
  kind: NodeKind;
  label: string;
  line: number;
}

export interface GraphEdge {
  from: string;
  to: string;
  kind: EdgeKind;
  line: number;
}

export interface ContractGraph {
  contract: string;
  nodes: GraphNode[];
  edges: GraphEdge[];
}

export interface ContractSummary {
  name: string;
  kind: "contract" | "interface" | "library";
  functions: number;
  state_vars: number;
  events: number;
}

export interface ReportWarning {
  detector: string;
  category: string;
  severity: Severity;
  contract: string;
  function: string | null;
  line: number;
  message: string;
  related_symbols: string[];
  related_nodes: string[];
}

export interface Diagnostic {
  line: number;
  severity: "warning" | "error";
  message: string;
}

export interface AuditReport {
  version: string;
  source: string;
  contracts: ContractSummary[];
  graphs: ContractGraph[];
  warnings: ReportWarning[];
  diagnostics: Diagnostic[];
  generated_at?: string;
}

export type Verdict = "confirmed" | "false_positive" | "needs_info";

export interface VerdictRecord {
  warning_index: number;
  verdict: Verdict;
  note: string;
  reviewer: string;
}

export interface Metrics {
  confirmed: number;
  false_positive: number;
  needs_info: number;
  unreviewed: number;
}

export interface TriageSession {
  report: AuditReport;
  /** At most one record per warning index; latest verdict wins. */
  verdicts: Map<number, VerdictRecord>;
}

export interface SessionExport {
  report_source: string;
  report_version: string;
  verdicts: VerdictRecord[];
  metrics: Metrics;
}

/** Node/edge subset highlighted when a warning is focused. */
export interface FocusSelection {
  nodeIds: Set<string>;
  edges: GraphEdge[];
}
