"""Report persistence: JSON lines, text summaries, and figures.

Serialized output is byte-identical across runs on identical input: field
order is fixed, no timestamps or timings are emitted, and report order is the
caller's (the suite already sorts by variety id).
"""

from __future__ import annotations

import json
import os
from collections import Counter

from .verify import VerificationReport

__all__ = ["emit_report", "render_figures", "report_to_dict"]


def report_to_dict(report: VerificationReport) -> dict:
    return {
        "id": report.variety_id,
        "rho": report.rho,
        "c_x": report.c_x,
        "checks": [
            {"claim": c.claim, "status": c.status, "detail": c.detail}
            for c in report.checks
        ],
        "witnesses": [
            {"claim": c.claim, "data": c.witness}
            for c in report.checks
            if c.witness is not None
        ],
    }


def _summary_lines(reports: list[VerificationReport]) -> list[str]:
    counts: dict[str, Counter] = {}
    for r in reports:
        for c in r.checks:
            counts.setdefault(c.claim, Counter())[c.status] += 1
    lines = []
    for claim in sorted(counts):
        c = counts[claim]
        lines.append(
            f"{claim}: {c.get('pass', 0)} pass / {c.get('fail', 0)} fail / "
            f"{c.get('na', 0)} n.a."
        )
    total = sum(sum(c.values()) for c in counts.values())
    fails = sum(c.get("fail", 0) for c in counts.values())
    lines.append(f"total: {total} checks over {len(reports)} varieties, {fails} fail")
    return lines


def emit_report(
    reports: list[VerificationReport],
    format: str = "json-lines",
    out: str | None = None,
) -> str:
    """Render reports; write to ``out`` when given, and return the text."""
    if format == "json-lines":
        text = "".join(json.dumps(report_to_dict(r)) + "\n" for r in reports)
    elif format == "text-summary":
        text = "".join(line + "\n" for line in _summary_lines(reports))
    else:
        raise ValueError(f"unknown format {format!r}")
    if out is not None:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


def render_figures(reports: list[VerificationReport], outdir: str) -> list[str]:
    """Write summary figures next to the delimited output.

    Two PNGs: the (rho, c_X) distribution of the verified varieties, and the
    per-claim outcome bars.  Returns the written paths.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    os.makedirs(outdir, exist_ok=True)
    paths = []

    fig, ax = plt.subplots(figsize=(6, 4))
    pts = Counter((r.rho, r.c_x) for r in reports)
    if pts:
        xs, ys, sizes = zip(*((x, y, 25 + 40 * n) for (x, y), n in sorted(pts.items())))
        ax.scatter(xs, ys, s=sizes, alpha=0.75, edgecolor="k", linewidth=0.5)
    ax.set_xlabel("Picard number")
    ax.set_ylabel("defect")
    ax.set_title("defect against Picard number")
    ax.grid(True, linestyle=":", linewidth=0.5)
    path = os.path.join(outdir, "defect_vs_picard.png")
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    paths.append(path)

    fig, ax = plt.subplots(figsize=(7, 4))
    counts: dict[str, Counter] = {}
    for r in reports:
        for c in r.checks:
            counts.setdefault(c.claim, Counter())[c.status] += 1
    claims = sorted(counts)
    xs = range(len(claims))
    for offset, (status, color) in enumerate(
        [("pass", "#2a9d38"), ("fail", "#c43333"), ("na", "#9a9a9a")]
    ):
        ax.bar(
            [x + 0.28 * offset for x in xs],
            [counts[c].get(status, 0) for c in claims],
            width=0.26,
            label={"na": "n.a."}.get(status, status),
            color=color,
        )
    ax.set_xticks([x + 0.28 for x in xs])
    ax.set_xticklabels(claims, rotation=20, ha="right", fontsize=8)
    ax.set_ylabel("varieties")
    ax.set_title("claim outcomes")
    ax.legend()
    path = os.path.join(outdir, "claim_outcomes.png")
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    paths.append(path)
    return paths
