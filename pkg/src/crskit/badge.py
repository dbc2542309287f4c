"""SVG badge: the A-G scale with one letter highlighted."""

from __future__ import annotations

from . import vocab
from .errors import ContractError

WIDTH, HEIGHT = 240, 48  # logical units

# green (A) to red (G)
_RAMP = ("#1a9850", "#66bd63", "#a6d96a", "#fee08b", "#fdae61", "#f46d43", "#d73027")


def render_badge(letter: str) -> str:
    """Seven scale segments, the given grade outlined and bold."""
    if letter not in vocab.LETTERS:
        raise ContractError(f"not a CRS letter: {letter!r}")
    margin, gap = 4.0, 2.0
    seg_w = (WIDTH - 2 * margin - gap * 6) / 7
    seg_h = HEIGHT - 2 * margin
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" '
        f'width="{WIDTH}" height="{HEIGHT}" role="img" aria-label="CRS score {letter}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" rx="6" fill="#ffffff"/>',
    ]
    for i, grade in enumerate(vocab.LETTERS):
        x = margin + i * (seg_w + gap)
        active = grade == letter
        parts.append(
            f'<rect class="seg" x="{x:.2f}" y="{margin}" width="{seg_w:.2f}" '
            f'height="{seg_h}" rx="4" fill="{_RAMP[i]}"'
            + (' stroke="#1f1f1f" stroke-width="2.5"' if active else ' opacity="0.45"')
            + "/>"
        )
        parts.append(
            f'<text x="{x + seg_w / 2:.2f}" y="{HEIGHT / 2 + (7 if active else 5)}" '
            f'text-anchor="middle" font-family="Helvetica,Arial,sans-serif" '
            f'font-size="{22 if active else 14}" '
            f'font-weight="{700 if active else 400}" fill="#1f1f1f">{grade}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
