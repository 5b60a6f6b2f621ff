"""Hand-written SVG of the fused memberships over time.

One panel per linguistic variable, ``abnormal`` on top.  Each tick is a
stacked bar: membership (red), non-membership (green) and hesitation (blue).
When labels are known a ribbon above the panels marks abnormal ticks.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence
from xml.sax.saxutils import escape

from ifsad.pipeline import Classification

COLORS = {"mu": "#d62728", "gamma": "#2ca02c", "pi": "#1f77b4"}
RIBBON = "#17becf"


def render_membership_panels(
    variables: Sequence[str],
    results: Sequence[Classification],
    labels: Sequence[bool] | None = None,
    title: str = "Fused intuitionistic fuzzy evaluation per tick",
) -> str:
    width = 960
    left, right, top = 90, 20, 50
    panel_h, gap = 110, 18
    ribbon_h = 12 if labels is not None else 0
    n = max(len(results), 1)
    plot_w = width - left - right
    bar_w = plot_w / n
    panels_top = top + (ribbon_h + 8 if ribbon_h else 0)
    height = panels_top + len(variables) * (panel_h + gap) + 50

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>',
        f'<text x="{width / 2:.1f}" y="24" text-anchor="middle" font-size="16" '
        f'font-family="Arial">{escape(title)}</text>',
    ]

    if labels is not None:
        for k, lab in enumerate(labels):
            if lab:
                out.append(
                    f'<rect x="{left + k * bar_w:.2f}" y="{top}" width="{bar_w:.2f}" '
                    f'height="{ribbon_h}" fill="{RIBBON}"/>'
                )
        out.append(
            f'<rect x="{left}" y="{top}" width="{plot_w}" height="{ribbon_h}" '
            f'fill="none" stroke="#888888" stroke-width="0.5"/>'
        )

    # abnormal on top, normal at the bottom
    for row, v_index in enumerate(reversed(range(len(variables)))):
        y0 = panels_top + row * (panel_h + gap)
        out.append(
            f'<text x="{left - 10}" y="{y0 + panel_h / 2:.1f}" text-anchor="end" '
            f'font-size="13" font-family="Arial">{escape(variables[v_index])}</text>'
        )
        for k, c in enumerate(results):
            t = c.fused[v_index]
            y = y0 + panel_h
            for key, value in (("mu", t.mu), ("gamma", t.gamma), ("pi", max(t.pi, 0.0))):
                h = value * panel_h
                if h <= 0:
                    continue
                y -= h
                out.append(
                    f'<rect x="{left + k * bar_w:.2f}" y="{y:.2f}" width="{bar_w:.2f}" '
                    f'height="{h:.2f}" fill="{COLORS[key]}"/>'
                )
        out.append(
            f'<rect x="{left}" y="{y0}" width="{plot_w}" height="{panel_h}" '
            f'fill="none" stroke="#000000" stroke-width="1"/>'
        )

    axis_y = panels_top + len(variables) * (panel_h + gap) - gap + 16
    if results:
        step = max(1, len(results) // 10)
        for k in range(0, len(results), step):
            out.append(
                f'<text x="{left + (k + 0.5) * bar_w:.2f}" y="{axis_y}" text-anchor="middle" '
                f'font-size="11" font-family="Arial">{results[k].tick}</text>'
            )
    legend_y = axis_y + 22
    for i, (key, name) in enumerate((("mu", "membership"), ("gamma", "non-membership"), ("pi", "hesitation"))):
        x = left + i * 170
        out.append(f'<rect x="{x}" y="{legend_y - 10}" width="12" height="12" fill="{COLORS[key]}"/>')
        out.append(
            f'<text x="{x + 18}" y="{legend_y}" font-size="12" font-family="Arial">{name}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_membership_svg(path, variables, results, labels=None) -> Path:
    path = Path(path)
    path.write_text(render_membership_panels(variables, results, labels))
    return path
