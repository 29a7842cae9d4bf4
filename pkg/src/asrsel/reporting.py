"""Report documents: run manifests, text tables, and the SVG scatter plot.

Machine-readable reports are JSON documents that embed a RunManifest (what
ran, on which inputs, with which seed) so every number can be traced back
to its inputs. Human-readable tables render the same values, with undefined
metrics shown as a dash. Plots are emitted as self-contained SVG documents
so no plotting runtime is required to view results.
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .evaluation import CvResult, FoldResult, SweepResult
from .lexical import CorrelationRow, ScatterData
from .records import file_sha256

TOOL_VERSION = "0.1.0"
DASH = "—"


def _timestamp() -> str:
    """UTC timestamp; honors SOURCE_DATE_EPOCH for reproducible outputs."""
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    t = int(epoch) if epoch is not None else int(time.time())
    return time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime(t))


@dataclass(frozen=True)
class RunManifest:
    command: str
    config: dict
    inputs: dict[str, str]
    tool_version: str
    seed: int | None
    timestamp: str

    @staticmethod
    def create(command: str, config: dict, input_paths: Sequence[str | Path],
               seed: int | None = None) -> "RunManifest":
        # keyed by basename so identical runs from different directories
        # produce identical reports; the checksums carry the identity
        inputs = {Path(p).name: file_sha256(p)
                  for p in sorted(str(p) for p in input_paths)}
        return RunManifest(command=command, config=config, inputs=inputs,
                           tool_version=TOOL_VERSION, seed=seed,
                           timestamp=_timestamp())

    def as_dict(self) -> dict:
        return {"command": self.command, "config": self.config,
                "inputs": self.inputs, "tool_version": self.tool_version,
                "seed": self.seed, "timestamp": self.timestamp}


def fmt(value: float | None, digits: int = 2) -> str:
    if value is None:
        return DASH
    return f"{value:.{digits}f}"


def render_table(headers: list[str], rows: list[list[str]]) -> str:
    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    lines = ["  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for row in rows:
        lines.append("  ".join(cell.ljust(widths[i])
                               for i, cell in enumerate(row)).rstrip())
    return "\n".join(lines) + "\n"


def fold_result_dict(f: FoldResult) -> dict:
    return {
        "test_corpus": f.test_corpus,
        "train_corpora": list(f.train_corpora),
        "tp": f.tp, "fp": f.fp, "tn": f.tn, "fn": f.fn,
        "precision": f.precision,
        "recall_count": f.recall,
        "recall_duration": f.recall_duration,
        "wer_median_selected": f.wer_median_selected,
        "wer_mean_selected": f.wer_mean_selected,
        "wer_median_all": f.wer_median_all,
        "wer_mean_all": f.wer_mean_all,
        "pct_duration_selected": f.pct_duration_selected,
        "pct_count_selected": f.pct_count_selected,
    }


_CV_HEADERS = ["test corpus", "training corpora", "precision", "recall",
               "recall (dur)", "WER med sel", "WER mean sel",
               "WER med all", "WER mean all", "% dur selected"]


def _cv_row(f: FoldResult) -> list[str]:
    return [
        f.test_corpus,
        ", ".join(f.train_corpora),
        fmt(f.precision), fmt(f.recall), fmt(f.recall_duration),
        fmt(f.wer_median_selected), fmt(f.wer_mean_selected),
        fmt(f.wer_median_all), fmt(f.wer_mean_all),
        fmt(f.pct_duration_selected, 1),
    ]


def cv_report(cv: CvResult, manifest: RunManifest) -> tuple[dict, str]:
    """Cross-validation report as (machine JSON document, text table)."""
    doc = {
        "schema": "cv-report", "version": 1,
        "manifest": manifest.as_dict(),
        "fp_cost": cv.fp_cost,
        "n_labeled": cv.n_labeled,
        "skipped": cv.skipped,
        "folds": [fold_result_dict(f) for f in cv.folds],
        "mean": fold_result_dict(cv.mean),
        "pooled": {
            "wer_median_selected": cv.pooled.wer_median_selected,
            "wer_mean_selected": cv.pooled.wer_mean_selected,
            "wer_median_all": cv.pooled.wer_median_all,
            "wer_mean_all": cv.pooled.wer_mean_all,
            "pct_duration_selected": cv.pooled.pct_duration_selected,
        },
    }
    rows = [_cv_row(f) for f in cv.folds] + [_cv_row(cv.mean)]
    text = (f"Leave-one-corpus-out cross-validation (fp_cost={cv.fp_cost:g}, "
            f"{cv.n_labeled} labeled utterances)\n\n"
            + render_table(_CV_HEADERS, rows)
            + ("\npooled over utterances: "
               f"WER med sel {fmt(cv.pooled.wer_median_selected)}, "
               f"WER mean sel {fmt(cv.pooled.wer_mean_selected)}, "
               f"WER med all {fmt(cv.pooled.wer_median_all)}, "
               f"WER mean all {fmt(cv.pooled.wer_mean_all)}, "
               f"% dur selected {fmt(cv.pooled.pct_duration_selected, 1)}\n"))
    return doc, text


_SWEEP_HEADERS = ["FP cost", "precision", "recall", "WER median", "WER mean",
                  "% transcribed (dur)", "% transcribed (count)"]


def _sweep_row(label: str, f: FoldResult) -> list[str]:
    return [label, fmt(f.precision), fmt(f.recall),
            fmt(f.wer_median_selected), fmt(f.wer_mean_selected),
            fmt(f.pct_duration_selected, 1), fmt(f.pct_count_selected, 1)]


def sweep_report(sweep: SweepResult, manifest: RunManifest) -> tuple[dict, str]:
    """False-positive-cost sweep as (machine JSON document, text table)."""
    doc = {
        "schema": "sweep-report", "version": 1,
        "manifest": manifest.as_dict(),
        "grid": list(sweep.grid),
        "baseline": fold_result_dict(sweep.baseline),
        "runs": [{"fp_cost": run.fp_cost,
                  "mean": fold_result_dict(run.mean),
                  "folds": [fold_result_dict(f) for f in run.folds]}
                 for run in sweep.runs],
    }
    rows = [_sweep_row("no selection", sweep.baseline)]
    rows += [_sweep_row(f"{run.fp_cost:g}", run.mean) for run in sweep.runs]
    text = ("Effect of the false-positive cost on selection quality "
            "(fold means)\n\n" + render_table(_SWEEP_HEADERS, rows))
    return doc, text


_POS_ROW_LABELS = {"all": "all words", "NOUN": "nouns", "VERB": "verbs",
                   "ADJ": "adjectives", "ADV": "adverbs", "PRON": "pronouns"}


def correlation_report_doc(rows_by_floor: dict[int, list[CorrelationRow]],
                           scope: str, policy: dict, manifest: RunManifest,
                           mean_counts: dict[str, float] | None = None,
                           ) -> tuple[dict, str]:
    """Lexical correlation report; one column block per frequency floor.

    The "all words" row correlates per-lemma counts aggregated across POS
    tags; POS rows correlate (lemma, pos) entries within the tag. Mean
    automatic counts per POS are descriptive context for reading the rows
    (categories with few tokens per type correlate worse).
    """
    doc = {
        "schema": "lexstats-report", "version": 1,
        "manifest": manifest.as_dict(),
        "scope": scope,
        "normalization": policy,
        "pairing": {"all": "lemma", "pos_rows": "lemma within pos"},
        "mean_auto_count_per_pos": mean_counts or {},
        "tables": {str(floor): [{"category": r.category, "r": r.r,
                                 "n_entries": r.n_entries} for r in rows]
                   for floor, rows in rows_by_floor.items()},
    }
    blocks = []
    for floor, rows in rows_by_floor.items():
        headers = ["part of speech", "r", "n"]
        table_rows = [[_POS_ROW_LABELS.get(r.category, r.category),
                       fmt(r.r), str(r.n_entries)] for r in rows]
        title = ("Word-count correlation, automatic vs. manual "
                 f"(scope: {scope}, min automatic count: {floor})")
        blocks.append(title + "\n\n" + render_table(headers, table_rows))
    if mean_counts:
        line = ", ".join(f"{_POS_ROW_LABELS.get(pos, pos)} {v:.2f}"
                         for pos, v in mean_counts.items())
        blocks.append(f"mean automatic count per entry: {line}\n")
    return doc, "\n".join(blocks)


def _svg_escape(s: str) -> str:
    return (s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
            .replace('"', "&quot;"))


def render_scatter_svg(sd: ScatterData, title: str) -> str:
    """Self-contained SVG scatter of log counts with fitted lines.

    The full-vocabulary regression line is drawn in red, the
    frequency-floored one in blue, matching the report tables.
    """
    width, height = 680, 520
    ml, mr, mt, mb = 70, 30, 50, 60
    plot_w, plot_h = width - ml - mr, height - mt - mb

    max_val = 1.0
    for p in sd.points:
        max_val = max(max_val, p.log_manual, p.log_automatic)
    max_val = max_val * 1.05 + 0.05

    def x_px(v: float) -> float:
        return ml + (v / max_val) * plot_w

    def y_px(v: float) -> float:
        return mt + plot_h - (v / max_val) * plot_h

    out: list[str] = []
    out.append(f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
               f'height="{height}" viewBox="0 0 {width} {height}">')
    out.append(f'<rect width="{width}" height="{height}" fill="white"/>')
    out.append(f'<text x="{width / 2:.1f}" y="24" text-anchor="middle" '
               f'font-family="sans-serif" font-size="14">{_svg_escape(title)}</text>')

    # axes
    out.append(f'<line x1="{ml}" y1="{mt + plot_h}" x2="{ml + plot_w}" '
               f'y2="{mt + plot_h}" stroke="black"/>')
    out.append(f'<line x1="{ml}" y1="{mt}" x2="{ml}" y2="{mt + plot_h}" '
               f'stroke="black"/>')
    tick = 0.0
    while tick <= max_val:
        xp, yp = x_px(tick), y_px(tick)
        out.append(f'<line x1="{xp:.2f}" y1="{mt + plot_h}" x2="{xp:.2f}" '
                   f'y2="{mt + plot_h + 5}" stroke="black"/>')
        out.append(f'<text x="{xp:.2f}" y="{mt + plot_h + 20}" text-anchor="middle" '
                   f'font-family="sans-serif" font-size="11">{tick:.1f}</text>')
        out.append(f'<line x1="{ml - 5}" y1="{yp:.2f}" x2="{ml}" y2="{yp:.2f}" '
                   f'stroke="black"/>')
        out.append(f'<text x="{ml - 8}" y="{yp + 4:.2f}" text-anchor="end" '
                   f'font-family="sans-serif" font-size="11">{tick:.1f}</text>')
        tick += 0.5
    out.append(f'<text x="{ml + plot_w / 2:.1f}" y="{height - 15}" '
               f'text-anchor="middle" font-family="sans-serif" font-size="12">'
               f'log10(manual count + 1)</text>')
    out.append(f'<text x="18" y="{mt + plot_h / 2:.1f}" text-anchor="middle" '
               f'font-family="sans-serif" font-size="12" '
               f'transform="rotate(-90 18 {mt + plot_h / 2:.1f})">'
               f'log10(automatic count + 1)</text>')

    # fitted lines clipped to the plot range
    for line, color in ((sd.line_all, "#d62728"), (sd.line_filtered, "#1f77b4")):
        if line is None:
            continue
        y0 = line.intercept
        y1 = line.intercept + line.slope * max_val
        out.append(f'<line x1="{x_px(0.0):.2f}" y1="{y_px(y0):.2f}" '
                   f'x2="{x_px(max_val):.2f}" y2="{y_px(y1):.2f}" '
                   f'stroke="{color}" stroke-width="1.5"/>')

    for p in sd.points:
        out.append(f'<circle cx="{x_px(p.log_manual):.2f}" '
                   f'cy="{y_px(p.log_automatic):.2f}" r="3" fill="#555555" '
                   f'fill-opacity="0.55"/>')
    for p in sd.points:
        if p.labeled:
            out.append(f'<text x="{x_px(p.log_manual) + 4:.2f}" '
                       f'y="{y_px(p.log_automatic) - 4:.2f}" '
                       f'font-family="sans-serif" font-size="9" fill="#333333">'
                       f'{_svg_escape(p.lemma)}</text>')

    legend_y = mt + 14
    if sd.line_all is not None:
        out.append(f'<text x="{ml + 10}" y="{legend_y}" font-family="sans-serif" '
                   f'font-size="11" fill="#d62728">all words: r = '
                   f'{fmt(sd.line_all.r, 3)} (n = {sd.line_all.n_points})</text>')
        legend_y += 16
    if sd.line_filtered is not None:
        out.append(f'<text x="{ml + 10}" y="{legend_y}" font-family="sans-serif" '
                   f'font-size="11" fill="#1f77b4">auto count &#8805; '
                   f'{sd.min_auto_count}: r = {fmt(sd.line_filtered.r, 3)} '
                   f'(n = {sd.line_filtered.n_points})</text>')

    out.append("</svg>")
    return "\n".join(out) + "\n"


def dump_json(doc: dict) -> str:
    return json.dumps(doc, ensure_ascii=False, indent=2) + "\n"
