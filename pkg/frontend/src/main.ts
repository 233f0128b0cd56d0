/**
 * Application controller: wires the static page to the session logic.
 *
 * createApp returns a handle used both by index.html (real browser) and by
 * the scripted UI tests (jsdom), so every interaction path below is
 * exercised headless.
 */

import { forceLayout, layeredLayout, type Positions } from "./layout.js";
import { drawGraph } from "./render.js";
import {
  ReportFormatError,
  createSession,
  exportSession,
  focusSelection,
  importSession,
  loadReport,
  metrics,
  recordVerdict,
} from "./session.js";
import type {
  AuditReport,
  ContractGraph,
  FocusSelection,
  TriageSession,
  Verdict,
} from "./types.js";

export interface AppHandle {
  loadReportText(text: string): void;
  loadSessionText(text: string): void;
  focusWarning(index: number): void;
  applyVerdict(index: number, verdict: Verdict): void;
  exportText(): string | null;
  setLayoutMode(mode: "force" | "layered"): void;
  selectContract(name: string): void;
  getSession(): TriageSession | null;
  lastToast(): string;
}

const SEVERITY_ICONS: Record<string, string> = {
  high: "HIGH",
  medium: "MED",
  info: "INFO",
};

export function createApp(doc: Document): AppHandle {
  const byId = <T extends HTMLElement>(id: string): T => {
    const el = doc.getElementById(id);
    if (!el) {
      throw new Error(`missing element #${id}`);
    }
    return el as T;
  };

  const reportInput = byId<HTMLInputElement>("report-file");
  const sessionInput = byId<HTMLInputElement>("session-file");
  const exportBtn = byId<HTMLButtonElement>("export-btn");
  const reviewerInput = byId<HTMLInputElement>("reviewer");
  const layoutSelect = byId<HTMLSelectElement>("layout-mode");
  const contractList = byId<HTMLUListElement>("contract-list");
  const warningRows = byId<HTMLTableSectionElement>("warning-rows");
  const canvas = byId<HTMLCanvasElement>("graph-canvas");
  const detailBody = byId<HTMLElement>("detail-body");
  const noteInput = byId<HTMLTextAreaElement>("note");
  const metricsBar = byId<HTMLElement>("metrics");
  const banner = byId<HTMLElement>("banner");
  const toastBox = byId<HTMLElement>("toast");
  const sourceLabel = byId<HTMLElement>("source-label");

  let session: TriageSession | null = null;
  let selectedContract = "";
  let selectedWarning: number | null = null;
  let layoutMode: "force" | "layered" = "force";
  let highlight: FocusSelection | null = null;
  let lastToastMessage = "";
  const layoutCache = new Map<string, Positions>();

  function toast(message: string): void {
    lastToastMessage = message;
    toastBox.textContent = message;
    toastBox.classList.add("show");
    setTimeout(() => toastBox.classList.remove("show"), 2500);
  }

  function showBanner(message: string): void {
    banner.textContent = message;
    banner.classList.add("show");
  }

  function clearBanner(): void {
    banner.textContent = "";
    banner.classList.remove("show");
  }

  function currentGraph(): ContractGraph | null {
    if (!session) {
      return null;
    }
    return session.report.graphs.find((g) => g.contract === selectedContract) ?? null;
  }

  function positionsFor(graph: ContractGraph): Positions {
    const key = `${layoutMode}:${graph.contract}`;
    let cached = layoutCache.get(key);
    if (!cached) {
      cached =
        layoutMode === "layered"
          ? layeredLayout(graph, canvas.width, canvas.height)
          : forceLayout(graph, canvas.width, canvas.height);
      layoutCache.set(key, cached);
    }
    return cached;
  }

  function draw(): void {
    const graph = currentGraph();
    if (!graph) {
      return;
    }
    drawGraph(canvas, graph, positionsFor(graph), highlight);
  }

  function renderContracts(report: AuditReport): void {
    contractList.textContent = "";
    for (const c of report.contracts) {
      const li = doc.createElement("li");
      li.textContent = `${c.name} (${c.kind}) - ${c.functions} fn / ${c.state_vars} var / ${c.events} ev`;
      li.dataset.contract = c.name;
      if (c.name === selectedContract) {
        li.classList.add("active");
      }
      li.addEventListener("click", () => api.selectContract(c.name));
      contractList.appendChild(li);
    }
  }

  function renderWarnings(): void {
    warningRows.textContent = "";
    if (!session) {
      return;
    }
    const report = session.report;
    report.warnings.forEach((w, i) => {
      const tr = doc.createElement("tr");
      tr.dataset.index = String(i);
      if (i === selectedWarning) {
        tr.classList.add("focused");
      }
      const verdict = session!.verdicts.get(i);
      const state = verdict ? verdict.verdict.replace("_", " ") : "unreviewed";
      const location = w.function ? `${w.contract}.${w.function}` : w.contract;
      tr.innerHTML = `
        <td><span class="sev sev-${w.severity}">${SEVERITY_ICONS[w.severity] ?? w.severity}</span></td>
        <td>${w.detector}</td>
        <td>${location}:${w.line}</td>
        <td class="msg">${escapeHtml(w.message)}</td>
        <td class="state state-${verdict ? verdict.verdict : "none"}">${state}</td>`;
      tr.addEventListener("click", () => api.focusWarning(i));
      warningRows.appendChild(tr);
    });
    const count = report.warnings.length;
    byId<HTMLElement>("warning-count").textContent =
      count === 0 ? "0 findings" : `${count} finding${count === 1 ? "" : "s"}`;
  }

  function renderMetrics(): void {
    if (!session) {
      metricsBar.textContent = "";
      return;
    }
    const m = metrics(session);
    metricsBar.textContent =
      `confirmed ${m.confirmed} | false positive ${m.false_positive} | ` +
      `needs info ${m.needs_info} | unreviewed ${m.unreviewed}`;
  }

  function renderDetail(): void {
    if (!session || selectedWarning === null) {
      detailBody.innerHTML = '<p class="hint">Select a warning to inspect it.</p>';
      return;
    }
    const w = session.report.warnings[selectedWarning]!;
    const verdict = session.verdicts.get(selectedWarning);
    const symbols = w.related_symbols.length
      ? w.related_symbols.map((s) => `<code>${escapeHtml(s)}</code>`).join(", ")
      : "none";
    detailBody.innerHTML = `
      <h3>${w.detector} <span class="sev sev-${w.severity}">${w.severity}</span></h3>
      <p class="location">${escapeHtml(w.contract)}${w.function ? "." + escapeHtml(w.function) : ""}:${w.line}</p>
      <p class="message">${escapeHtml(w.message)}</p>
      <p class="symbols">related symbols: ${symbols}</p>
      <p class="current-verdict">current verdict: ${verdict ? verdict.verdict.replace("_", " ") : "unreviewed"}</p>`;
    if (typeof detailBody.scrollIntoView === "function") {
      detailBody.scrollIntoView({ block: "nearest" });
    }
  }

  function renderAll(): void {
    if (session) {
      sourceLabel.textContent = `${session.report.source} (analyzer ${session.report.version})`;
      renderContracts(session.report);
    } else {
      sourceLabel.textContent = "no report loaded";
      contractList.textContent = "";
      warningRows.textContent = "";
    }
    renderWarnings();
    renderMetrics();
    renderDetail();
    draw();
  }

  const api: AppHandle = {
    loadReportText(text: string): void {
      try {
        const report = loadReport(text);
        session = createSession(report);
      } catch (err) {
        session = null;
        selectedWarning = null;
        showBanner(err instanceof ReportFormatError ? `Cannot load report: ${err.message}` : String(err));
        renderAll();
        return;
      }
      clearBanner();
      selectedWarning = null;
      highlight = null;
      layoutCache.clear();
      selectedContract = session.report.contracts[0]?.name ?? "";
      renderAll();
    },

    loadSessionText(text: string): void {
      if (!session) {
        toast("load a report before importing a session");
        return;
      }
      try {
        session = importSession(session.report, text);
      } catch (err) {
        toast(err instanceof Error ? err.message : String(err));
        return;
      }
      renderAll();
      toast("session restored");
    },

    focusWarning(index: number): void {
      if (!session) {
        toast("no report loaded");
        return;
      }
      if (!Number.isInteger(index) || index < 0 || index >= session.report.warnings.length) {
        toast(`warning index ${index} out of range`);
        return;
      }
      selectedWarning = index;
      const w = session.report.warnings[index]!;
      if (w.contract !== selectedContract && session.report.graphs.some((g) => g.contract === w.contract)) {
        selectedContract = w.contract;
      }
      highlight = focusSelection(session.report, w);
      renderAll();
    },

    applyVerdict(index: number, verdict: Verdict): void {
      if (!session) {
        toast("no report loaded");
        return;
      }
      try {
        recordVerdict(session, index, verdict, noteInput.value, reviewerInput.value);
      } catch (err) {
        toast(err instanceof Error ? err.message : String(err));
        return;
      }
      renderWarnings();
      renderMetrics();
      renderDetail();
      toast(`warning ${index} marked ${verdict.replace("_", " ")}`);
    },

    exportText(): string | null {
      if (!session) {
        toast("no report loaded");
        return null;
      }
      return JSON.stringify(exportSession(session), null, 2) + "\n";
    },

    setLayoutMode(mode: "force" | "layered"): void {
      layoutMode = mode;
      draw();
    },

    selectContract(name: string): void {
      selectedContract = name;
      highlight = null;
      renderAll();
    },

    getSession(): TriageSession | null {
      return session;
    },

    lastToast(): string {
      return lastToastMessage;
    },
  };

  reportInput.addEventListener("change", () => {
    const file = reportInput.files?.[0];
    if (file) {
      void file.text().then((text) => api.loadReportText(text));
    }
  });
  sessionInput.addEventListener("change", () => {
    const file = sessionInput.files?.[0];
    if (file) {
      void file.text().then((text) => api.loadSessionText(text));
    }
  });
  exportBtn.addEventListener("click", () => {
    const text = api.exportText();
    if (text === null) {
      return;
    }
    if (typeof URL.createObjectURL !== "function") {
      toast("download not supported here");
      return;
    }
    const blob = new Blob([text], { type: "application/json" });
    const a = doc.createElement("a");
    a.href = URL.createObjectURL(blob);
    a.download = "triage-session.json";
    a.click();
    URL.revokeObjectURL(a.href);
  });
  layoutSelect.addEventListener("change", () => {
    api.setLayoutMode(layoutSelect.value === "layered" ? "layered" : "force");
  });
  doc.querySelectorAll<HTMLButtonElement>("[data-verdict]").forEach((btn) => {
    btn.addEventListener("click", () => {
      if (selectedWarning === null) {
        toast("select a warning first");
        return;
      }
      api.applyVerdict(selectedWarning, btn.dataset.verdict as Verdict);
    });
  });

  renderAll();
  return api;
}

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}
