# This file is part of nlcm
# See file LICENSE.txt for license information.

# A small SVG 1.1 writer for pictures of the half-plane.
#
# Coordinates in the document are data coordinates with q2 negated (SVG's y
# axis points down), so the viewBox is simply the data window. Output is a
# pure function of the input: identical curves give identical bytes.

__all__ = ["Curve", "plot_bounds", "render_svg", "write_svg"]

import io
from xml.sax.saxutils import escape, quoteattr

import numpy as np

from nlcm import NumericError
from nlcm.util import repr_pretty_delegate, repr_pretty_impl

_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd",
           "#ff7f0e", "#8c564b", "#e377c2", "#17becf"]
# In units of the stroke width; cycled once the colors run out.
_DASHES = [None, (4, 2), (1, 2)]
_EMPHASIS_COLOR = "#000000"

class Curve(object):
    """A polyline through `points` (shape ``(N, 2)``, in ``(q1, q2)``
    coordinates), optionally drawn with emphasis."""
    def __init__(self, points, label=None, emphasis=False):
        points = np.array(points, dtype=float)
        if points.ndim != 2 or points.shape[1] != 2 or points.shape[0] < 1:
            raise ValueError("curve points must have shape (N, 2), not %s"
                             % (points.shape,))
        if not np.all(np.isfinite(points)):
            raise NumericError("curve %r has non-finite points" % (label,))
        points.flags.writeable = False
        self.points = points
        self.label = label
        self.emphasis = bool(emphasis)

    __repr__ = repr_pretty_delegate
    def _repr_pretty_(self, p, cycle):
        assert not cycle
        return repr_pretty_impl(p, self, [],
                                [("label", self.label),
                                 ("n_points", self.points.shape[0]),
                                 ("emphasis", self.emphasis)])

def plot_bounds(curves, margin=0.1):
    """plot_bounds(curves, margin=0.1)

    The data window ``(xmin, xmax, ymin, ymax)`` holding every point of
    every curve and the axis ``q2 = 0``, widened on each side by `margin`
    times its extent. A degenerate extent counts as 1.
    """
    if not curves:
        raise ValueError("nothing to plot")
    points = np.concatenate([curve.points for curve in curves])
    xmin, xmax = np.min(points[:, 0]), np.max(points[:, 0])
    ymin = min(0.0, np.min(points[:, 1]))
    ymax = max(0.0, np.max(points[:, 1]))
    width = (xmax - xmin) or 1.0
    height = (ymax - ymin) or 1.0
    return (float(xmin - margin * width), float(xmax + margin * width),
            float(ymin - margin * height), float(ymax + margin * height))

def test_plot_bounds():
    import pytest
    curve = Curve([[0, 1], [2, 3]])
    xmin, xmax, ymin, ymax = plot_bounds([curve])
    assert np.allclose([xmin, xmax, ymin, ymax], [-0.2, 2.2, -0.3, 3.3])
    # a single point still gets a window, and the axis is always included
    xmin, xmax, ymin, ymax = plot_bounds([Curve([[5, 2]])])
    assert np.allclose([xmin, xmax, ymin, ymax], [4.9, 5.1, -0.2, 2.2])
    pytest.raises(ValueError, plot_bounds, [])

def _num(x):
    # rounding first keeps "-0.000000" out of the output
    return "%.6f" % (round(float(x), 6) + 0.0,)

def _style(index, emphasis, stroke_width):
    if emphasis:
        return _EMPHASIS_COLOR, 3 * stroke_width, None
    color = _COLORS[index % len(_COLORS)]
    dash = _DASHES[(index // len(_COLORS)) % len(_DASHES)]
    if dash is not None:
        dash = " ".join(_num(d * stroke_width) for d in dash)
    return color, stroke_width, dash

def render_svg(curves, width=800, height=600, margin=0.1, title=None):
    """render_svg(curves, width=800, height=600, margin=0.1, title=None)

    Renders `curves` (a list of :class:`Curve`) as a standalone SVG 1.1
    document and returns it as text.

    The document holds the ``q2 = 0`` axis as a ``line`` and one
    ``polyline`` per curve, in order. Plain curves take distinct strokes
    (color, then dash pattern); emphasized curves are black and three times
    as thick. Point coordinates are written with 6 decimals.
    """
    xmin, xmax, ymin, ymax = plot_bounds(curves, margin)
    extent = max(xmax - xmin, ymax - ymin)
    stroke_width = 0.003 * extent
    lines = ['<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
             '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
             'width="%d" height="%d" viewBox="%s %s %s %s" '
             'preserveAspectRatio="xMidYMid meet">'
             % (width, height, _num(xmin), _num(-ymax),
                _num(xmax - xmin), _num(ymax - ymin))]
    if title is not None:
        lines.append("<title>%s</title>" % (escape(title),))
    lines.append('<line x1="%s" y1="0.000000" x2="%s" y2="0.000000" '
                 'stroke="#000000" stroke-width="%s"/>'
                 % (_num(xmin), _num(xmax), _num(stroke_width)))
    plain = 0
    for curve in curves:
        color, stroke, dash = _style(plain, curve.emphasis, stroke_width)
        if not curve.emphasis:
            plain += 1
        attrs = ['fill="none"', 'stroke="%s"' % (color,),
                 'stroke-width="%s"' % (_num(stroke),)]
        if dash is not None:
            attrs.append('stroke-dasharray="%s"' % (dash,))
        points = " ".join("%s,%s" % (_num(x), _num(-y))
                          for x, y in curve.points)
        attrs.append("points=%s" % (quoteattr(points),))
        if curve.label is None:
            lines.append("<polyline %s/>" % (" ".join(attrs),))
        else:
            lines.append("<polyline %s><title>%s</title></polyline>"
                         % (" ".join(attrs), escape(curve.label)))
    lines.append("</svg>")
    return "\n".join(lines) + "\n"

def write_svg(path, curves, **kwargs):
    """Renders `curves` with :func:`render_svg` and writes the document to
    `path` as UTF-8 with LF line endings."""
    text = render_svg(curves, **kwargs)
    with io.open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)

def _parse(text):
    import xml.etree.ElementTree as ET
    return ET.fromstring(text.encode("utf-8"))

_SVG = "{http://www.w3.org/2000/svg}"

def test_render_svg():
    t = np.linspace(-3, 3, 201)
    circle = Curve(np.column_stack((np.tanh(t), 1 / np.cosh(t))),
                   label="unit <circle>", emphasis=True)
    line = Curve([[2, 0.5], [2, 4]], label="vertical")
    text = render_svg([circle, line], title="two geodesics")
    root = _parse(text)
    assert root.tag == _SVG + "svg"
    assert root.get("version") == "1.1"
    polylines = root.findall(_SVG + "polyline")
    assert len(polylines) == 2
    assert polylines[0].find(_SVG + "title").text == "unit <circle>"
    assert len(root.findall(_SVG + "line")) == 1
    # emphasized curves are thicker than plain ones
    widths = [float(p.get("stroke-width")) for p in polylines]
    assert abs(widths[0] - 3 * widths[1]) < 1e-5
    assert polylines[0].get("stroke") == "#000000"
    assert polylines[1].get("stroke") == _COLORS[0]
    points = [tuple(map(float, pair.split(",")))
              for pair in polylines[0].get("points").split()]
    assert len(points) == 201
    for x, y in points:
        assert abs(x ** 2 + y ** 2 - 1) <= 1e-5
        assert y <= 0
    # viewBox covers the data with q2 flipped
    vx, vy, vw, vh = map(float, root.get("viewBox").split())
    assert vy < -1 and vy + vh > 0
    assert vx < -1 and vx + vw > 2
    assert "-0.000000" not in text

def test_render_svg_is_deterministic():
    curves = [Curve([[0, 1], [1, 2]], label="a"), Curve([[3, 1], [3, 2]])]
    assert render_svg(curves) == render_svg(list(curves))

def test_render_svg_strokes_are_distinct():
    curves = [Curve([[k, 1], [k, 2]]) for k in range(2 * len(_COLORS) + 1)]
    root = _parse(render_svg(curves))
    strokes = [(p.get("stroke"), p.get("stroke-dasharray"))
               for p in root.findall(_SVG + "polyline")]
    assert len(set(strokes)) == len(strokes)

def test_Curve():
    import pytest
    pytest.raises(ValueError, Curve, [1, 2])
    pytest.raises(ValueError, Curve, np.zeros((0, 2)))
    pytest.raises(NumericError, Curve, [[0, np.inf]])
    assert repr(Curve([[0, 1]], label="x")) == (
        "Curve(label='x', n_points=1, emphasis=False)")

def test_write_svg(tmpdir):
    path = str(tmpdir.join("out.svg"))
    write_svg(path, [Curve([[0, 1], [1, 1]])])
    with open(path, "rb") as f:
        data = f.read()
    assert b"\r\n" not in data
    assert data.decode("utf-8") == render_svg([Curve([[0, 1], [1, 1]])])
