"""
Tests for SVG plot emission.
"""

import numpy as np
import pytest
from lxml import etree

from trace_segmenter.core import Segmentation, SegmentationError, SignalMatrix
from trace_segmenter.synth import paper_like_test_signal
from trace_segmenter.utils.svg_plot import SVG_NS, emit_plot, render_svg

NS = {"svg": SVG_NS}


def parse(document):
    return etree.fromstring(document)


def test_boundary_line_count():
    M = paper_like_test_signal()
    root = parse(render_svg(M, Segmentation((20, 40, 60, 80), 100)))
    assert len(root.xpath("//svg:line[@class='boundary']", namespaces=NS)) == 4
    assert len(root.xpath("//svg:polyline", namespaces=NS)) == 1
    assert root.xpath("//svg:polyline/svg:title/text()", namespaces=NS) == ["test_signal"]


def test_one_polyline_per_row():
    rng = np.random.default_rng(0)
    M = SignalMatrix(rng.normal(size=(23, 50)))
    root = parse(render_svg(M, Segmentation((10, 30), 50)))
    polylines = root.xpath("//svg:polyline", namespaces=NS)
    assert len(polylines) == 23
    assert all(len(p.get("points").split()) == 50 for p in polylines)


def test_axis_labels_and_size():
    M = SignalMatrix([[1, 2, 3, 4]])
    root = parse(render_svg(M, Segmentation((2,), 4), width=400, height=300, title="demo"))
    assert root.get("width") == "400"
    assert root.get("height") == "300"
    texts = root.xpath("//svg:text/text()", namespaces=NS)
    assert "sample index" in texts
    assert "value" in texts
    assert "demo" in texts


def test_constant_signal_renders():
    root = parse(render_svg(SignalMatrix(np.full((1, 5), 2.0)), Segmentation((), 5)))
    assert not root.xpath("//svg:line[@class='boundary']", namespaces=NS)


def test_render_rejects_invalid_segmentation():
    with pytest.raises(SegmentationError):
        render_svg(SignalMatrix([[1, 2, 3]]), Segmentation((3,), 3))


def test_emit_plot_is_deterministic(tmp_path):
    M = paper_like_test_signal()
    seg = Segmentation((17, 38, 61, 83), 100)
    first, second = tmp_path / "a.svg", tmp_path / "b.svg"
    emit_plot(M, seg, str(first))
    emit_plot(M, seg, str(second))
    assert first.read_bytes() == second.read_bytes()
    assert first.read_bytes().startswith(b"<?xml")


def test_emit_plot_unwritable_path(tmp_path):
    with pytest.raises(OSError):
        emit_plot(SignalMatrix([[1, 2]]), Segmentation((), 2), str(tmp_path / "missing" / "plot.svg"))
