import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import {
  ReportFormatError,
  createSession,
  exportSession,
  focusSelection,
  importSession,
  loadReport,
  metrics,
  recordVerdict,
} from "../src/session.js";
import type { Metrics, TriageSession } from "../src/types.js";

const SYFI_TEXT = readFileSync(new URL("./fixtures/syfi_report.json", import.meta.url), "utf-8");

function syfiSession(): TriageSession {
  return createSession(loadReport(SYFI_TEXT));
}

function identityHolds(session: TriageSession): boolean {
  const m: Metrics = metrics(session);
  return (
    m.confirmed + m.false_positive + m.needs_info + m.unreviewed ===
    session.report.warnings.length
  );
}

describe("loadReport", () => {
  it("accepts an analyzer report", () => {
    const report = loadReport(SYFI_TEXT);
    expect(report.version).toBe("0.1.0");
    expect(report.warnings).toHaveLength(2);
    expect(report.graphs[0]!.contract).toBe("SoftToken");
  });

  it("rejects JSON without a version key", () => {
    expect(() => loadReport('{"source": "x.sol"}')).toThrow(ReportFormatError);
  });

  it("rejects malformed JSON", () => {
    expect(() => loadReport("{nope")).toThrow(ReportFormatError);
  });

  it("rejects non-object documents", () => {
    expect(() => loadReport("[1, 2]")).toThrow(ReportFormatError);
  });

  it("freezes the loaded report against mutation", () => {
    const report = loadReport(SYFI_TEXT);
    expect(() => {
      (report.warnings as unknown[]).push({});
    }).toThrow();
    expect(() => {
      (report.warnings[0] as { message: string }).message = "tampered";
    }).toThrow();
  });
});

describe("recordVerdict and metrics", () => {
  it("first verdict decrements unreviewed", () => {
    const session = syfiSession();
    expect(metrics(session)).toEqual({
      confirmed: 0,
      false_positive: 0,
      needs_info: 0,
      unreviewed: 2,
    });
    recordVerdict(session, 0, "confirmed");
    expect(metrics(session)).toEqual({
      confirmed: 1,
      false_positive: 0,
      needs_info: 0,
      unreviewed: 1,
    });
  });

  it("latest verdict wins on re-entry", () => {
    const session = syfiSession();
    recordVerdict(session, 0, "confirmed");
    recordVerdict(session, 0, "false_positive", "looked fine on chain");
    const m = metrics(session);
    expect(m.confirmed).toBe(0);
    expect(m.false_positive).toBe(1);
    expect(session.verdicts.size).toBe(1);
  });

  it("verdicts over all warnings empty the unreviewed pool", () => {
    const session = syfiSession();
    session.report.warnings.forEach((_, i) => recordVerdict(session, i, "needs_info"));
    expect(metrics(session).unreviewed).toBe(0);
  });

  it("identity invariant holds through arbitrary sequences", () => {
    const session = syfiSession();
    const verdicts = ["confirmed", "false_positive", "needs_info"] as const;
    for (let step = 0; step < 30; step++) {
      recordVerdict(session, step % 2, verdicts[step % 3]!);
      expect(identityHolds(session)).toBe(true);
    }
  });

  it("rejects out-of-range indexes", () => {
    const session = syfiSession();
    expect(() => recordVerdict(session, 2, "confirmed")).toThrow(RangeError);
    expect(() => recordVerdict(session, -1, "confirmed")).toThrow(RangeError);
  });
});

describe("focusSelection", () => {
  it("expands related nodes by one hop", () => {
    const report = loadReport(SYFI_TEXT);
    const d5 = report.warnings.find((w) => w.detector === "D5_external_dependency")!;
    const focus = focusSelection(report, d5);
    for (const nid of d5.related_nodes) {
      expect(focus.nodeIds.has(nid)).toBe(true);
    }
    // rebase writes scalingFactor too; the var joins through the write edge.
    expect(focus.nodeIds.has("SoftToken.state_var.scalingFactor")).toBe(true);
    for (const e of focus.edges) {
      expect(focus.nodeIds.has(e.from)).toBe(true);
      expect(focus.nodeIds.has(e.to)).toBe(true);
    }
  });

  it("empty related nodes produce an empty selection", () => {
    const report = loadReport(SYFI_TEXT);
    const fake = { ...report.warnings[0]!, related_nodes: [] };
    const focus = focusSelection(report, fake);
    expect(focus.nodeIds.size).toBe(0);
    expect(focus.edges).toHaveLength(0);
  });
});

describe("export and import round-trip", () => {
  it("round-trips verdicts and metrics on the SYFI report", () => {
    const session = syfiSession();
    recordVerdict(session, 0, "confirmed", "order of calls is exploitable", "alice");
    recordVerdict(session, 1, "confirmed", "unguarded external factor", "alice");
    const exported = exportSession(session);
    expect(exported.metrics).toEqual({
      confirmed: 2,
      false_positive: 0,
      needs_info: 0,
      unreviewed: 0,
    });

    const resumed = importSession(loadReport(SYFI_TEXT), JSON.stringify(exported));
    expect(exportSession(resumed)).toEqual(exported);
    expect(metrics(resumed)).toEqual(exported.metrics);
  });

  it("zero verdicts export as all-unreviewed", () => {
    const exported = exportSession(syfiSession());
    expect(exported.verdicts).toHaveLength(0);
    expect(exported.metrics.unreviewed).toBe(2);
    expect(exported.report_source).toContain("syfi_rebase.sol");
  });

  it("rejects sessions for a different report", () => {
    const session = syfiSession();
    const exported = exportSession(session);
    const other = { ...exported, report_source: "another.sol" };
    expect(() => importSession(session.report, JSON.stringify(other))).toThrow(
      ReportFormatError
    );
  });

  it("rejects session files without verdicts", () => {
    const session = syfiSession();
    expect(() => importSession(session.report, "{}")).toThrow(ReportFormatError);
  });
});
