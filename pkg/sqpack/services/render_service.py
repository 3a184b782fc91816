"""
Render service - draws a packing as SVG (svgwrite) or PNG (Pillow).

Bins are laid out left to right; the y axis is flipped so y=0 is the bin
bottom, as in the packing coordinates.
"""
from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import svgwrite
from PIL import Image, ImageDraw

from sqpack.core.config import settings
from sqpack.core.logger import logger
from sqpack.models.packing import Instance, Packing
from sqpack.services.bounds_service import size_class
from sqpack.services.packing_service import ensure_feasible

FILLS = {
    "small": "#9ecae1",
    "medium": "#fdd49e",
    "large": "#a1d99b",
}
LABEL_HEIGHT = 40


def _scaled(value: Fraction, side: int) -> float:
    return round(float(value * side), 3)


def render_svg(p: Packing, inst: Instance) -> str:
    """
    SVG text of a packing: one group per bin (id "bin-j") with an outline, a
    label and one rectangle per item.

    Raises:
        InfeasiblePackingError: If the packing does not validate against inst
    """
    ensure_feasible(p, inst, "render")
    side, gap = settings.SVG_BIN_SIDE, settings.SVG_BIN_GAP
    bins = p.bins_list()
    width = max(len(bins), 1) * (side + gap) + gap
    height = side + LABEL_HEIGHT + 2 * gap

    dwg = svgwrite.Drawing(size=(width, height), profile="full")
    dwg.viewbox(0, 0, width, height)
    dwg.add(dwg.rect((0, 0), (width, height), fill="white"))

    for index, content in enumerate(bins, start=1):
        left = gap + (index - 1) * (side + gap)
        top = gap + LABEL_HEIGHT
        group = dwg.g(id=f"bin-{index}")
        group.add(dwg.text(f"bin {index}", insert=(left, gap + LABEL_HEIGHT / 2), font_size=24, font_family="Arial"))
        for pl in sorted(content, key=lambda pl: pl.item_id):
            group.add(dwg.rect(
                insert=(left + _scaled(pl.x, side), top + _scaled(1 - pl.y - pl.size, side)),
                size=(_scaled(pl.size, side), _scaled(pl.size, side)),
                id=f"item-{pl.item_id}",
                fill=FILLS[size_class(pl.size)],
                stroke="black",
                stroke_width=1,
            ))
        group.add(dwg.rect((left, top), (side, side), fill="none", stroke="black", stroke_width=3))
        dwg.add(group)

    logger.debug(f"Rendered {len(bins)} bins to SVG")
    return dwg.tostring()


def render_png(p: Packing, inst: Instance, path: str | Path) -> None:
    """
    Same layout as render_svg, rasterized with Pillow.

    Raises:
        InfeasiblePackingError: If the packing does not validate against inst
    """
    ensure_feasible(p, inst, "render")
    side = settings.PNG_BIN_SIDE
    gap = max(side // 10, 1)
    bins = p.bins_list()
    width = max(len(bins), 1) * (side + gap) + gap
    height = side + 2 * gap

    image = Image.new("RGB", (width, height), "white")
    draw = ImageDraw.Draw(image)
    for index, content in enumerate(bins, start=1):
        left = gap + (index - 1) * (side + gap)
        for pl in sorted(content, key=lambda pl: pl.item_id):
            x0 = left + _scaled(pl.x, side)
            y0 = gap + _scaled(1 - pl.y - pl.size, side)
            extent = _scaled(pl.size, side)
            draw.rectangle([x0, y0, x0 + extent, y0 + extent], fill=FILLS[size_class(pl.size)], outline="black")
        draw.rectangle([left, gap, left + side, gap + side], outline="black", width=2)

    image.save(path, format="PNG")
    logger.debug(f"Rendered {len(bins)} bins to {path}")
