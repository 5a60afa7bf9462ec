"""Hand-rolled deterministic SVG output (no plotting dependency, no timestamps).

Colors are keyed to a hash of the asset label so every view of the same
universe uses the same palette.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Sequence

WIDTH = 720
HEIGHT = 520
MARGIN = 60


def color_for(label: str) -> str:
    digest = hashlib.md5(label.encode("utf-8")).hexdigest()
    hue = int(digest[:8], 16) % 360
    return f"hsl({hue},62%,48%)"


def _fmt(value: float) -> str:
    return f"{value:.2f}"


@dataclass
class ScatterGroup:
    label: str
    points: list[tuple[float, float]]
    color: str
    hollow: bool = False
    line: bool = False
    marker_size: float = 5.0


def scatter_svg(
    groups: Sequence[ScatterGroup],
    x_label: str = "Risk (normalized)",
    y_label: str = "ROI (normalized)",
    title: str = "",
) -> str:
    """Scatter/line chart over normalized [0, 1] axes."""
    inner_w = WIDTH - 2 * MARGIN
    inner_h = HEIGHT - 2 * MARGIN

    def px(u: float) -> float:
        return MARGIN + u * inner_w

    def py(v: float) -> float:
        return HEIGHT - MARGIN - v * inner_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]
    if title:
        parts.append(
            f'<text x="{WIDTH // 2}" y="26" text-anchor="middle" '
            f'font-family="sans-serif" font-size="16">{title}</text>'
        )
    # axes and ticks
    parts.append(
        f'<line x1="{MARGIN}" y1="{HEIGHT - MARGIN}" x2="{WIDTH - MARGIN}" '
        f'y2="{HEIGHT - MARGIN}" stroke="black"/>'
    )
    parts.append(
        f'<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{HEIGHT - MARGIN}" stroke="black"/>'
    )
    for k in range(6):
        u = k / 5
        parts.append(
            f'<text x="{_fmt(px(u))}" y="{HEIGHT - MARGIN + 18}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{u:.1f}</text>'
        )
        parts.append(
            f'<text x="{MARGIN - 8}" y="{_fmt(py(u) + 4)}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{u:.1f}</text>'
        )
    parts.append(
        f'<text x="{WIDTH // 2}" y="{HEIGHT - 12}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13">{x_label}</text>'
    )
    parts.append(
        f'<text x="18" y="{HEIGHT // 2}" text-anchor="middle" font-family="sans-serif" '
        f'font-size="13" transform="rotate(-90 18 {HEIGHT // 2})">{y_label}</text>'
    )

    for group in groups:
        if group.line and len(group.points) > 1:
            path = " ".join(
                f"{_fmt(px(u))},{_fmt(py(v))}" for u, v in group.points
            )
            parts.append(
                f'<polyline points="{path}" fill="none" stroke="{group.color}" '
                f'stroke-width="1.5"/>'
            )
        for u, v in group.points:
            if group.hollow:
                parts.append(
                    f'<circle cx="{_fmt(px(u))}" cy="{_fmt(py(v))}" r="{group.marker_size}" '
                    f'fill="none" stroke="{group.color}" stroke-width="1.8"/>'
                )
            else:
                parts.append(
                    f'<circle cx="{_fmt(px(u))}" cy="{_fmt(py(v))}" r="{group.marker_size}" '
                    f'fill="{group.color}"/>'
                )

    # legend
    y = MARGIN
    for group in groups:
        parts.append(
            f'<circle cx="{WIDTH - MARGIN - 130}" cy="{y}" r="5" '
            + (
                f'fill="none" stroke="{group.color}" stroke-width="1.8"/>'
                if group.hollow
                else f'fill="{group.color}"/>'
            )
        )
        parts.append(
            f'<text x="{WIDTH - MARGIN - 118}" y="{y + 4}" font-family="sans-serif" '
            f'font-size="11">{group.label}</text>'
        )
        y += 18
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


@dataclass
class BarColumn:
    label: str
    shares: list[tuple[str, float]]
    outlined: bool = False


def stacked_bars_svg(columns: Sequence[BarColumn], title: str = "") -> str:
    """Stacked share bars, one column per solution, colors keyed by label."""
    legend_w = 150
    inner_w = WIDTH - MARGIN - legend_w - 20
    inner_h = HEIGHT - 2 * MARGIN
    n = max(len(columns), 1)
    slot = inner_w / n
    bar_w = slot * 0.7

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]
    if title:
        parts.append(
            f'<text x="{WIDTH // 2}" y="26" text-anchor="middle" '
            f'font-family="sans-serif" font-size="16">{title}</text>'
        )
    seen_labels: list[str] = []
    for idx, column in enumerate(columns):
        x0 = MARGIN + idx * slot + (slot - bar_w) / 2
        y = HEIGHT - MARGIN
        for asset_label, share in column.shares:
            if asset_label not in seen_labels:
                seen_labels.append(asset_label)
            h = share * inner_h
            y -= h
            parts.append(
                f'<rect x="{_fmt(x0)}" y="{_fmt(y)}" width="{_fmt(bar_w)}" '
                f'height="{_fmt(h)}" fill="{color_for(asset_label)}"/>'
            )
        if column.outlined:
            parts.append(
                f'<rect x="{_fmt(x0 - 2)}" y="{_fmt(MARGIN - 2)}" width="{_fmt(bar_w + 4)}" '
                f'height="{_fmt(inner_h + 4)}" fill="none" stroke="black" '
                f'stroke-width="2" stroke-dasharray="5,3"/>'
            )
        parts.append(
            f'<text x="{_fmt(x0 + bar_w / 2)}" y="{HEIGHT - MARGIN + 16}" '
            f'text-anchor="middle" font-family="sans-serif" font-size="10">{column.label}</text>'
        )
    y = MARGIN
    legend_x = WIDTH - legend_w - 10
    for asset_label in seen_labels:
        parts.append(
            f'<rect x="{legend_x}" y="{y - 8}" width="10" height="10" '
            f'fill="{color_for(asset_label)}"/>'
        )
        parts.append(
            f'<text x="{legend_x + 14}" y="{y + 1}" font-family="sans-serif" '
            f'font-size="9">{asset_label}</text>'
        )
        y += 14
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
