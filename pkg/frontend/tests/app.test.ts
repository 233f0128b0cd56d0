// @vitest-environment jsdom
/**
 * Scripted UI test: drives the real DOM wiring (table rows, verdict
 * buttons, banner, toast) and checks the metrics identity after every
 * interaction.
 */

import { readFileSync } from "node:fs";
import { join } from "node:path";
import { beforeEach, describe, expect, it } from "vitest";

import { createApp, type AppHandle } from "../src/main.js";
import { metrics } from "../src/session.js";

// jsdom rewrites import.meta.url to an http scheme; resolve from the cwd.
const SYFI_TEXT = readFileSync(join(process.cwd(), "tests/fixtures/syfi_report.json"), "utf-8");
const INDEX_HTML = readFileSync(join(process.cwd(), "index.html"), "utf-8");


function mountApp(): AppHandle {
  const bodyMatch = INDEX_HTML.match(/<body>([\s\S]*)<\/body>/);
  const body = bodyMatch![1]!.replace(/<script[\s\S]*?<\/script>/g, "");
  document.body.innerHTML = body;
  return createApp(document);
}

function expectIdentity(app: AppHandle): void {
  const session = app.getSession();
  expect(session).not.toBeNull();
  const m = metrics(session!);
  expect(m.confirmed + m.false_positive + m.needs_info + m.unreviewed).toBe(
    session!.report.warnings.length
  );
}

describe("triage app", () => {
  let app: AppHandle;

  beforeEach(() => {
    app = mountApp();
  });

  it("loads a report and renders contracts and warnings", () => {
    app.loadReportText(SYFI_TEXT);
    expectIdentity(app);
    expect(document.querySelectorAll("#contract-list li")).toHaveLength(1);
    expect(document.querySelectorAll("#warning-rows tr")).toHaveLength(2);
    expect(document.getElementById("warning-count")!.textContent).toBe("2 findings");
    expect(document.getElementById("source-label")!.textContent).toContain("syfi_rebase.sol");
  });

  it("shows an empty table for a report without warnings", () => {
    const empty = JSON.parse(SYFI_TEXT);
    empty.warnings = [];
    app.loadReportText(JSON.stringify(empty));
    expect(document.getElementById("warning-count")!.textContent).toBe("0 findings");
    expect(app.getSession()!.report.graphs).toHaveLength(1);
  });

  it("rejects malformed JSON with a banner and no session", () => {
    app.loadReportText("{broken");
    expect(app.getSession()).toBeNull();
    const banner = document.getElementById("banner")!;
    expect(banner.classList.contains("show")).toBe(true);
    expect(banner.textContent).toContain("Cannot load report");
  });

  it("rejects a report missing the version key", () => {
    app.loadReportText('{"source": "x.sol", "warnings": []}');
    expect(app.getSession()).toBeNull();
    expect(document.getElementById("banner")!.textContent).toContain("version");
  });

  it("focuses a warning from a table row click", () => {
    app.loadReportText(SYFI_TEXT);
    const row = document.querySelectorAll<HTMLTableRowElement>("#warning-rows tr")[1]!;
    row.click();
    expectIdentity(app);
    const detail = document.getElementById("detail-body")!;
    expect(detail.textContent).toContain("D4_price_lag");
    expect(detail.textContent).toContain("token.transfer");
  });

  it("out-of-range focus is a no-op with a toast", () => {
    app.loadReportText(SYFI_TEXT);
    app.focusWarning(0);
    const before = document.getElementById("detail-body")!.textContent;
    app.focusWarning(99);
    expect(app.lastToast()).toContain("out of range");
    expect(document.getElementById("detail-body")!.textContent).toBe(before);
    expectIdentity(app);
  });

  it("empty related nodes still render the detail pane", () => {
    const doc = JSON.parse(SYFI_TEXT);
    doc.warnings[0].related_nodes = [];
    app.loadReportText(JSON.stringify(doc));
    app.focusWarning(0);
    expect(document.getElementById("detail-body")!.textContent).toContain(
      doc.warnings[0].detector
    );
    expectIdentity(app);
  });

  it("records verdicts through the buttons and updates metrics live", () => {
    app.loadReportText(SYFI_TEXT);
    const reviewer = document.getElementById("reviewer") as HTMLInputElement;
    reviewer.value = "alice";
    const metricsBar = document.getElementById("metrics")!;

    app.focusWarning(0);
    expectIdentity(app);
    const confirmBtn = document.querySelector<HTMLButtonElement>('[data-verdict="confirmed"]')!;
    confirmBtn.click();
    expectIdentity(app);
    expect(metricsBar.textContent).toContain("confirmed 1");
    expect(metricsBar.textContent).toContain("unreviewed 1");

    // Re-marking the same warning flips the counters, never double-counts.
    const fpBtn = document.querySelector<HTMLButtonElement>('[data-verdict="false_positive"]')!;
    fpBtn.click();
    expectIdentity(app);
    expect(metricsBar.textContent).toContain("confirmed 0");
    expect(metricsBar.textContent).toContain("false positive 1");

    app.focusWarning(1);
    confirmBtn.click();
    expectIdentity(app);
    expect(metricsBar.textContent).toContain("unreviewed 0");
    const verdict = app.getSession()!.verdicts.get(1)!;
    expect(verdict.reviewer).toBe("alice");
  });

  it("verdict button without a selected warning only toasts", () => {
    app.loadReportText(SYFI_TEXT);
    document.querySelector<HTMLButtonElement>('[data-verdict="confirmed"]')!.click();
    expect(app.lastToast()).toContain("select a warning");
    expectIdentity(app);
  });

  it("exports and re-imports a session with identical verdicts and metrics", () => {
    app.loadReportText(SYFI_TEXT);
    app.focusWarning(0);
    app.applyVerdict(0, "confirmed");
    app.applyVerdict(1, "confirmed");
    expectIdentity(app);
    const exported = app.exportText()!;
    const parsed = JSON.parse(exported);
    expect(parsed.metrics).toEqual({
      confirmed: 2,
      false_positive: 0,
      needs_info: 0,
      unreviewed: 0,
    });

    const fresh = mountApp();
    fresh.loadReportText(SYFI_TEXT);
    fresh.loadSessionText(exported);
    expectIdentity(fresh);
    expect(fresh.exportText()).toBe(exported);
    expect(document.getElementById("metrics")!.textContent).toContain("unreviewed 0");
  });

  it("session import before a report only toasts", () => {
    app.loadSessionText("{}");
    expect(app.lastToast()).toContain("load a report");
  });

  it("never mutates the loaded report", () => {
    app.loadReportText(SYFI_TEXT);
    app.focusWarning(0);
    app.applyVerdict(0, "needs_info");
    expect(JSON.stringify(app.getSession()!.report)).toBe(
      JSON.stringify(JSON.parse(SYFI_TEXT))
    );
  });

  it("switches layout mode without losing state", () => {
    app.loadReportText(SYFI_TEXT);
    app.applyVerdict(0, "confirmed");
    const select = document.getElementById("layout-mode") as HTMLSelectElement;
    select.value = "layered";
    select.dispatchEvent(new Event("change"));
    expectIdentity(app);
    expect(app.getSession()!.verdicts.size).toBe(1);
  });
});
