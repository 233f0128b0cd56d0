"""Warning-summary figures rendered next to the report files.

One horizontal bar per detector that fired, colored by its severity.
Graph rasterization is deliberately not done here; dependency graphs are
exported as DOT for external renderers.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .detectors import Severity
from .report import AuditReport

_SEVERITY_COLORS = {
    Severity.HIGH: "#c0392b",
    Severity.MEDIUM: "#e67e22",
    Severity.INFO: "#2980b9",
}


def save_warning_figure(report: AuditReport, path: str) -> None:
    """Write a per-detector warning count chart for one report."""
    counts: dict[str, int] = {}
    colors: dict[str, str] = {}
    for w in report.warnings:
        counts[w.detector] = counts.get(w.detector, 0) + 1
        colors.setdefault(w.detector, _SEVERITY_COLORS[w.severity])

    fig, ax = plt.subplots(figsize=(7, max(2.0, 0.5 * max(len(counts), 1) + 1)))
    if counts:
        detectors = sorted(counts)
        values = [counts[d] for d in detectors]
        bar_colors = [colors[d] for d in detectors]
        ax.barh(detectors, values, color=bar_colors)
        ax.set_xlabel("warnings")
        ax.set_xlim(0, max(values) + 0.5)
        ax.invert_yaxis()
    else:
        ax.text(0.5, 0.5, "no warnings", ha="center", va="center", transform=ax.transAxes)
        ax.set_axis_off()
    ax.set_title(report.source_path)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
