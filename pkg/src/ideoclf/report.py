"""Markdown tables and an SVG bar chart for a comparison grid.

Both renderers are pure functions of their inputs (no timestamps), so equal
grids render to equal bytes.
"""

from __future__ import annotations

from xml.sax.saxutils import escape

from .evaluate import REFERENCE_RESULTS, GridResult
from .pipeline import FEATURES, MODELS

FEATURE_TITLES = {"stylometric": "Stylometric", "tfidf": "TF-IDF", "embedding": "Word Embedding"}
MODEL_TITLES = {"svm": "SVM", "nb": "NB", "lstm": "LSTM", "gru": "GRU"}


def _pct(x: float) -> str:
    return f"{100.0 * x:.2f}%"


def _reference_note(feature: str) -> list[str]:
    notes = []
    for (ref_feature, model), values in REFERENCE_RESULTS.items():
        if ref_feature != feature:
            continue
        parts = [f"accuracy {_pct(values['accuracy'])}"]
        if "f1" in values:
            parts.append(f"F1 {_pct(values['f1'])}")
        notes.append(
            f"> Reference (published result on the original 1980-post Bangla dataset, not reproduced here): "
            f"{MODEL_TITLES[model]} {', '.join(parts)}."
        )
    return notes


def markdown_tables(grid: GridResult, config_lines: list[str] | None = None) -> str:
    """One ``Model | Accuracy | F1`` table per feature; F1 is macro-averaged."""
    out = ["# Performance comparison", ""]
    for feature in FEATURES:
        out += [f"## Performance of {FEATURE_TITLES[feature]} feature", ""]
        out += ["| Model | Accuracy | F1 |", "|---|---|---|"]
        for model in MODELS:
            cell = grid.cells.get((feature, model))
            if cell is None:
                continue
            if cell.ok:
                out.append(f"| {MODEL_TITLES[model]} | {_pct(cell.report.accuracy)} | {_pct(cell.report.macro_f1)} |")
            else:
                out.append(f"| {MODEL_TITLES[model]} | failed | failed |")
        out.append("")
        notes = _reference_note(feature)
        if notes:
            out += notes + [""]
    best = grid.best()
    if best is not None:
        out += [
            f"Best cell: {FEATURE_TITLES[best.feature]} + {MODEL_TITLES[best.model]} "
            f"(accuracy {_pct(best.report.accuracy)}, F1 {_pct(best.report.macro_f1)}).",
            "",
        ]
    if config_lines:
        out += ["## Run configuration", "", "```"] + config_lines + ["```", ""]
    return "\n".join(out)


def svg_chart(grid: GridResult, config_lines: list[str] | None = None) -> str:
    """Grouped bars: one group per feature, accuracy and macro-F1 bars per model."""
    bar_w, gap, group_gap = 14, 4, 40
    plot_h, top, left = 240, 50, 60
    group_w = len(MODELS) * (2 * bar_w + gap) + gap
    width = left + len(FEATURES) * (group_w + group_gap) + 140
    height = top + plot_h + 70
    base = top + plot_h
    colors = {"accuracy": "#4878a8", "f1": "#e0904a"}
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
    ]
    if config_lines:
        parts.append("<desc>" + escape("\n".join(config_lines)) + "</desc>")
    parts.append(f'<text x="{width // 2}" y="24" text-anchor="middle" font-family="sans-serif" font-size="15">'
                 "Performance compare among different models</text>")
    for tick in range(0, 101, 20):
        y = base - plot_h * tick / 100
        parts.append(f'<line x1="{left}" y1="{y:.1f}" x2="{width - 130}" y2="{y:.1f}" stroke="#dddddd"/>')
        parts.append(f'<text x="{left - 6}" y="{y + 4:.1f}" text-anchor="end" font-family="sans-serif" font-size="10">{tick}%</text>')
    for g, feature in enumerate(FEATURES):
        gx = left + group_gap // 2 + g * (group_w + group_gap)
        parts.append(f'<g class="feature-group" id="group-{feature}">')
        for m, model in enumerate(MODELS):
            cell = grid.cells.get((feature, model))
            x = gx + gap + m * (2 * bar_w + gap)
            values = (cell.report.accuracy, cell.report.macro_f1) if cell is not None and cell.ok else (0.0, 0.0)
            for k, (metric, value) in enumerate(zip(("accuracy", "f1"), values)):
                h = plot_h * value
                parts.append(
                    f'<rect x="{x + k * bar_w}" y="{base - h:.2f}" width="{bar_w}" height="{h:.2f}" fill="{colors[metric]}">'
                    f"<title>{feature}/{model} {metric} {_pct(value)}</title></rect>"
                )
            parts.append(f'<text x="{x + bar_w}" y="{base + 14}" text-anchor="middle" font-family="sans-serif" font-size="10">{MODEL_TITLES[model]}</text>')
        parts.append(f'<text x="{gx + group_w // 2}" y="{base + 34}" text-anchor="middle" font-family="sans-serif" font-size="12">{FEATURE_TITLES[feature]}</text>')
        parts.append("</g>")
    lx = width - 120
    for k, (metric, label) in enumerate((("accuracy", "Accuracy"), ("f1", "Macro F1"))):
        y = top + 10 + 18 * k
        parts.append(f'<rect x="{lx}" y="{y}" width="12" height="12" fill="{colors[metric]}"/>')
        parts.append(f'<text x="{lx + 18}" y="{y + 10}" font-family="sans-serif" font-size="11">{label}</text>')
    parts.append(f'<line x1="{left}" y1="{base}" x2="{width - 130}" y2="{base}" stroke="black"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
