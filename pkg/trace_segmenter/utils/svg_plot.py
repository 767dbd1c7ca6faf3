"""
Static SVG rendering of signals with their segmentation lines.
"""

import logging
from typing import List, Optional

import numpy as np
from lxml import etree

from ..core import Segmentation, SignalMatrix

logger = logging.getLogger("trace_segmenter.svg_plot")

SVG_NS = "http://www.w3.org/2000/svg"

# matplotlib's tab10 cycle
PALETTE = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
]

MARGIN_LEFT = 70
MARGIN_RIGHT = 20
MARGIN_TOP = 30
MARGIN_BOTTOM = 50
TICKS = 5


def _fmt(value: float) -> str:
    return f"{value:.2f}"


def _tick_values(lo: float, hi: float, count: int) -> List[float]:
    return list(np.linspace(lo, hi, count))


def render_svg(M: SignalMatrix, seg: Segmentation, width: int = 960, height: int = 480,
               title: Optional[str] = None) -> bytes:
    """
    Build the SVG document for a matrix and its segmentation.

    One polyline per row, one vertical line (class ``boundary``) per interior
    boundary, and axes labelled with sample index and value. Output depends
    only on the inputs.
    """
    seg.check(M.n_samples)
    n = M.n_samples
    plot_w = width - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = height - MARGIN_TOP - MARGIN_BOTTOM

    y_min = float(M.values.min())
    y_max = float(M.values.max())
    if y_max == y_min:
        y_min, y_max = y_min - 0.5, y_max + 0.5
    x_span = max(n - 1, 1)

    def x_pos(index: float) -> float:
        return MARGIN_LEFT + plot_w * index / x_span

    def y_pos(value: float) -> float:
        return MARGIN_TOP + plot_h * (y_max - value) / (y_max - y_min)

    svg = etree.Element(
        f"{{{SVG_NS}}}svg",
        nsmap={None: SVG_NS},
        width=str(width),
        height=str(height),
        viewBox=f"0 0 {width} {height}",
    )
    etree.SubElement(svg, f"{{{SVG_NS}}}rect", x="0", y="0",
                     width=str(width), height=str(height), fill="white")
    if title:
        heading = etree.SubElement(svg, f"{{{SVG_NS}}}text", x=_fmt(width / 2), y="20",
                                   attrib={"text-anchor": "middle", "font-size": "14"})
        heading.text = title

    axes = etree.SubElement(svg, f"{{{SVG_NS}}}g", attrib={"class": "axes", "stroke": "black"})
    bottom = MARGIN_TOP + plot_h
    etree.SubElement(axes, f"{{{SVG_NS}}}line", x1=str(MARGIN_LEFT), y1=str(bottom),
                     x2=str(MARGIN_LEFT + plot_w), y2=str(bottom))
    etree.SubElement(axes, f"{{{SVG_NS}}}line", x1=str(MARGIN_LEFT), y1=str(MARGIN_TOP),
                     x2=str(MARGIN_LEFT), y2=str(bottom))

    labels = etree.SubElement(svg, f"{{{SVG_NS}}}g", attrib={"class": "tick-labels", "font-size": "11"})
    for index in _tick_values(0, n - 1, min(TICKS, n)):
        tick = etree.SubElement(labels, f"{{{SVG_NS}}}text", x=_fmt(x_pos(index)), y=_fmt(bottom + 16),
                                attrib={"text-anchor": "middle"})
        tick.text = str(int(round(index)))
    for value in _tick_values(y_min, y_max, TICKS):
        tick = etree.SubElement(labels, f"{{{SVG_NS}}}text", x=_fmt(MARGIN_LEFT - 6), y=_fmt(y_pos(value) + 4),
                                attrib={"text-anchor": "end"})
        tick.text = f"{value:.4g}"

    x_label = etree.SubElement(svg, f"{{{SVG_NS}}}text", x=_fmt(MARGIN_LEFT + plot_w / 2),
                               y=_fmt(height - 10), attrib={"text-anchor": "middle", "font-size": "12"})
    x_label.text = "sample index"
    y_label = etree.SubElement(svg, f"{{{SVG_NS}}}text", x="15", y=_fmt(MARGIN_TOP + plot_h / 2),
                               transform=f"rotate(-90 15 {_fmt(MARGIN_TOP + plot_h / 2)})",
                               attrib={"text-anchor": "middle", "font-size": "12"})
    y_label.text = "value"

    signals = etree.SubElement(svg, f"{{{SVG_NS}}}g", attrib={"class": "signals", "fill": "none"})
    for i in range(M.n_rows):
        points = " ".join(f"{_fmt(x_pos(j))},{_fmt(y_pos(v))}" for j, v in enumerate(M.values[i]))
        line = etree.SubElement(signals, f"{{{SVG_NS}}}polyline", points=points,
                                stroke=PALETTE[i % len(PALETTE)], attrib={"stroke-width": "1"})
        if M.row_labels is not None:
            etree.SubElement(line, f"{{{SVG_NS}}}title").text = M.row_labels[i]

    # A boundary x sits between samples x - 1 and x
    marks = etree.SubElement(svg, f"{{{SVG_NS}}}g", attrib={"stroke": "black", "stroke-dasharray": "4 3"})
    for boundary in seg.boundaries:
        x = _fmt(x_pos(boundary - 0.5))
        etree.SubElement(marks, f"{{{SVG_NS}}}line", x1=x, y1=str(MARGIN_TOP), x2=x, y2=str(bottom),
                         attrib={"class": "boundary"})

    return etree.tostring(svg, xml_declaration=True, encoding="UTF-8", pretty_print=True)


def emit_plot(M: SignalMatrix, seg: Segmentation, path: str, width: int = 960, height: int = 480,
              title: Optional[str] = None) -> None:
    """
    Write the SVG plot of a matrix and segmentation to ``path``.

    Raises:
        OSError: If the path cannot be written
    """
    document = render_svg(M, seg, width, height, title)
    try:
        with open(path, "wb") as f:
            f.write(document)
    except OSError as e:
        logger.error(f"Error writing plot to {path}: {e}")
        raise
    logger.info(f"Wrote plot with {M.n_rows} signals and {len(seg.boundaries)} boundaries to {path}")
