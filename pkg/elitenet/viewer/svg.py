import logging
import math
from typing import *
from xml.sax.saxutils import escape, quoteattr

import numpy as np

from elitenet.analysis.domain import ConfusionMatrix
from elitenet.exceptions import DomainError
from elitenet.network.domain import DirectedGraph
from elitenet.solver.domain import PosteriorSummary
from elitenet.viewer.domain import LayoutResult, RenderConfig, Slice

logger = logging.getLogger(__name__)

FULL_SLICE = 1 - 1e-9
CALLOUT_GAP = 8.0


class SVG:
    """Builds an SVG 1.1 document as text. Every number goes through `num` so output is byte-stable."""

    def __init__(self, width: int, height: int, precision: int = 2):
        self.precision = precision
        self.svg = '<?xml version="1.0" standalone="no"?>\n' \
                   '<!DOCTYPE svg PUBLIC "-//W3C//DTD SVG 1.1//EN" "http://www.w3.org/Graphics/SVG/1.1/DTD/svg11.dtd">\n' \
                   '<svg version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}" ' \
                   'xmlns="http://www.w3.org/2000/svg">\n'.format(w=width, h=height)

    def num(self, x: float) -> str:
        text = '{:.{}f}'.format(x, self.precision)
        return text[1:] if text.startswith('-') and float(text) == 0 else text

    def group_start(self, attr: Dict[str, str] = None, title: str = None):
        attrs = ''.join(' {}={}'.format(k, quoteattr(str(v))) for k, v in sorted((attr or {}).items()))
        self.svg += '<g{}>\n'.format(attrs)
        if title is not None:
            self.svg += '<title>{}</title>\n'.format(escape(title))

    def group_end(self):
        self.svg += '</g>\n'

    def line(self, x1, y1, x2, y2, stroke: str, extra: str = ''):
        self.svg += '<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}"{}/>\n'.format(
            self.num(x1), self.num(y1), self.num(x2), self.num(y2), stroke, _extra(extra))

    def circle(self, cx, cy, r, fill: str, extra: str = ''):
        self.svg += '<circle cx="{}" cy="{}" r="{}" fill="{}"{}/>\n'.format(
            self.num(cx), self.num(cy), self.num(r), fill, _extra(extra))

    def wedge(self, cx, cy, r, start: float, end: float, fill: str, extra: str = ''):
        """Pie wedge between two angles in degrees clockwise from 12 o'clock."""
        x1, y1 = _polar(cx, cy, r, start)
        x2, y2 = _polar(cx, cy, r, end)
        large = 1 if end - start > 180 else 0
        d = 'M{} {} L{} {} A{} {} 0 {} 1 {} {} Z'.format(
            self.num(cx), self.num(cy), self.num(x1), self.num(y1), self.num(r), self.num(r), large,
            self.num(x2), self.num(y2))
        self.svg += '<path d="{}" fill="{}"{}/>\n'.format(d, fill, _extra(extra))

    def filled_rectangle(self, x1, y1, x2, y2, fill: str, extra: str = ''):
        self.svg += '<rect x="{}" y="{}" width="{}" height="{}" fill="{}"{}/>\n'.format(
            self.num(x1), self.num(y1), self.num(x2 - x1), self.num(y2 - y1), fill, _extra(extra))

    def text(self, x, y, string: str, extra: str = ''):
        self.svg += '<text x="{}" y="{}"{}>{}</text>\n'.format(self.num(x), self.num(y), _extra(extra), escape(string))

    def get_svg(self) -> str:
        return self.svg + '</svg>\n'


def _extra(extra: str) -> str:
    return ' ' + extra if extra else ''


def _polar(cx: float, cy: float, r: float, angle: float) -> Tuple[float, float]:
    rad = math.radians(angle)
    return cx + r * math.sin(rad), cy - r * math.cos(rad)


def pie_slices(probabilities: Sequence[float]) -> List[Slice]:
    """
    Slices of a membership pie, components in index order starting at 12 o'clock and going clockwise.
    Components with zero probability get no slice.

    :param probabilities: membership probabilities summing to 1
    :return: slices with 0-based component indices
    """
    p = np.asarray(probabilities, dtype=float)
    if (p < 0).any() or abs(p.sum() - 1) > 1e-6:
        raise DomainError('membership probabilities must be nonnegative and sum to 1, got {}'.format(p.tolist()))
    slices = []
    start = 0.0
    cumulative = 0.0
    for g, q in enumerate(p):
        if q <= 0:
            continue
        cumulative += q
        end = 360.0 * cumulative / p.sum()
        slices.append(Slice(component=g, start=start, end=end))
        start = end
    return slices


def degree_radius(degree: int, config: RenderConfig) -> float:
    """Node area proportional to degree."""
    return config.radius_unit * math.sqrt(degree)


class _Frame:
    """Maps data coordinates into the drawing area, same scale on both axes, y pointing up."""

    def __init__(self, points: np.ndarray, config: RenderConfig):
        self.lo = points.min(axis=0)
        span = float((points.max(axis=0) - self.lo).max())
        self.span = span if span > 0 else 1.0
        self.config = config
        self.inner = min(config.width, config.height) - 2 * config.margin

    def __call__(self, p) -> Tuple[float, float]:
        x = self.config.margin + (p[0] - self.lo[0]) / self.span * self.inner
        y = self.config.height - self.config.margin - (p[1] - self.lo[1]) / self.span * self.inner
        return float(x), float(y)


def _draw_pie(svg: SVG, cx: float, cy: float, r: float, probabilities: Sequence[float], config: RenderConfig):
    slices = pie_slices(probabilities)
    if len(slices) == 1 or slices[0].fraction >= FULL_SLICE:
        svg.circle(cx, cy, r, config.color(slices[0].component), 'stroke="#ffffff" stroke-width="0.5"')
        return
    for s in slices:
        svg.wedge(cx, cy, r, s.start, s.end, config.color(s.component), 'stroke="#ffffff" stroke-width="0.5"')


def _legend(svg: SVG, K: int, config: RenderConfig):
    for g in range(K):
        y = config.margin / 2 + g * (config.font_size + 4)
        svg.filled_rectangle(config.margin, y - config.font_size + 2, config.margin + config.font_size,
                             y + 2, config.color(g))
        svg.text(config.margin + config.font_size + 4, y, 'Component {}'.format(g + 1),
                 'font-size="{}"'.format(config.font_size))


def latent_map_svg(summary: PosteriorSummary, g: DirectedGraph, highlights: Sequence[str] = (),
                   config: RenderConfig = None) -> str:
    """
    Latent positions map: one pie per node showing its membership probabilities, node area scaled by degree.

    :param summary: posterior summary over the nodes of g
    :param g: fitted graph, gives degrees
    :param highlights: labels written next to their node
    :param config: geometry and palette
    :return: SVG document
    """
    config = config or RenderConfig.default()
    if set(summary.labels) != set(g.nodes):
        raise DomainError('summary and graph have different node sets')
    for label in highlights:
        g.index(label)

    points = summary.point_positions[:, :2] if summary.point_positions.shape[1] >= 2 \
        else np.hstack([summary.point_positions, np.zeros((len(summary.labels), 1))])
    frame = _Frame(points, config)
    degrees = g.total_degrees()
    radius = {label: degree_radius(int(degrees[g.index(label)]), config) for label in summary.labels}

    svg = SVG(config.width, config.height, config.precision)
    _axes(svg, frame, points, config)
    _legend(svg, summary.K, config)
    order = sorted(range(len(summary.labels)), key=lambda i: (-radius[summary.labels[i]], summary.labels[i]))
    svg.group_start({'class': 'nodes'})
    for i in order:
        label = summary.labels[i]
        cx, cy = frame(points[i])
        svg.group_start({'class': 'node'}, title=label)
        _draw_pie(svg, cx, cy, radius[label], summary.membership_probs[i], config)
        svg.group_end()
    svg.group_end()

    if highlights:
        svg.group_start({'class': 'callouts'})
        cx0, cy0 = config.width / 2, config.height / 2
        for label in highlights:
            i = summary.labels.index(label)
            x, y = frame(points[i])
            dx, dy = x - cx0, y - cy0
            norm = math.hypot(dx, dy)
            ux, uy = (dx / norm, dy / norm) if norm else (0.0, -1.0)
            r = radius[label]
            tx, ty = x + ux * (r + 2 * CALLOUT_GAP), y + uy * (r + 2 * CALLOUT_GAP)
            svg.line(x + ux * r, y + uy * r, tx, ty, '#333333', 'stroke-width="0.8"')
            anchor = 'start' if ux >= 0 else 'end'
            svg.text(tx + (2 if ux >= 0 else -2), ty, label,
                     'font-size="{}" text-anchor="{}"'.format(config.font_size, anchor))
        svg.group_end()
    return svg.get_svg()


def _axes(svg: SVG, frame: _Frame, points: np.ndarray, config: RenderConfig):
    x0, y0 = config.margin, config.height - config.margin
    x1, y1 = config.margin + frame.inner, config.height - config.margin - frame.inner
    svg.group_start({'class': 'axes'})
    svg.line(x0, y0, x1, y0, '#000000')
    svg.line(x0, y0, x0, y1, '#000000')
    font = 'font-size="{}"'.format(config.font_size)
    svg.text((x0 + x1) / 2, y0 + config.margin / 2, 'Z1', font + ' text-anchor="middle"')
    svg.text(x0 - config.margin / 2, (y0 + y1) / 2, 'Z2', font + ' text-anchor="middle"')
    lo = frame.lo
    hi = frame.lo + frame.span
    svg.text(x0, y0 + config.font_size + 2, svg.num(lo[0]), font + ' text-anchor="start"')
    svg.text(x1, y0 + config.font_size + 2, svg.num(hi[0]), font + ' text-anchor="end"')
    svg.text(x0 - 4, y0, svg.num(lo[1]), font + ' text-anchor="end"')
    svg.text(x0 - 4, y1 + config.font_size, svg.num(hi[1]), font + ' text-anchor="end"')
    svg.group_end()


def network_svg(g: DirectedGraph, layout: LayoutResult, config: RenderConfig = None,
                summary: PosteriorSummary = None) -> str:
    """
    Raw follow network drawn at its force layout, nodes colored by most probable component when a summary is given.
    """
    config = config or RenderConfig.default()
    points = layout.array(g.nodes)
    frame = _Frame(points, config)
    degrees = g.total_degrees()
    if summary is not None:
        component = dict(zip(summary.labels, summary.map_memberships().tolist()))
    else:
        component = {}

    svg = SVG(config.width, config.height, config.precision)
    svg.group_start({'class': 'edges', 'stroke-opacity': str(config.edge_opacity)})
    for i, j in g.sorted_edges():
        (x1, y1), (x2, y2) = frame(points[i]), frame(points[j])
        svg.line(x1, y1, x2, y2, config.edge_color, 'stroke-width="0.5"')
    svg.group_end()
    svg.group_start({'class': 'nodes'})
    for i, label in enumerate(g.nodes):
        cx, cy = frame(points[i])
        svg.group_start({'class': 'node'}, title=label)
        svg.circle(cx, cy, max(1.0, degree_radius(int(degrees[i]), config) / 2),
                   config.color(component.get(label, 0)), 'stroke="#ffffff" stroke-width="0.5"')
        svg.group_end()
    svg.group_end()
    return svg.get_svg()


def _shade(color: str, fraction: float) -> str:
    """Blend white towards color."""
    r, g, b = (int(color[k:k + 2], 16) for k in (1, 3, 5))
    mix = [round(255 + (c - 255) * fraction) for c in (r, g, b)]
    return '#{:02x}{:02x}{:02x}'.format(*mix)


def confusion_svg(matrix: ConfusionMatrix, title: str = '', config: RenderConfig = None,
                  row_name: str = 'baseline', column_name: str = 'criterion') -> str:
    """Heatmap of a confusion matrix, cells labelled with percentages of common nodes."""
    config = config or RenderConfig.default()
    K = matrix.counts.shape[0]
    size = min(config.width, config.height) - 2 * config.margin
    cell = size / K
    font = 'font-size="{}"'.format(config.font_size)

    svg = SVG(config.width, config.height, config.precision)
    if title:
        svg.text(config.width / 2, config.margin / 2, title, font + ' text-anchor="middle"')
    fractions = matrix.fractions
    for r in range(K):
        for c in range(K):
            x, y = config.margin + c * cell, config.margin + r * cell
            svg.filled_rectangle(x, y, x + cell, y + cell, _shade(config.palette[0], float(fractions[r, c])),
                                 'stroke="#ffffff"')
            svg.text(x + cell / 2, y + cell / 2, '{:.1f}%'.format(100 * fractions[r, c]),
                     font + ' text-anchor="middle" dominant-baseline="middle"')
        svg.text(config.margin - 6, config.margin + (r + 0.5) * cell, str(r + 1), font + ' text-anchor="end"')
        svg.text(config.margin + (r + 0.5) * cell, config.margin + size + config.font_size + 4, str(r + 1),
                 font + ' text-anchor="middle"')
    svg.text(config.margin + size / 2, config.height - config.margin / 3, column_name, font + ' text-anchor="middle"')
    svg.text(config.margin / 3, config.margin + size / 2, row_name, font + ' text-anchor="middle"')
    return svg.get_svg()


def bar_chart_svg(pairs: Sequence[Tuple[str, int]], title: str = '', config: RenderConfig = None) -> str:
    """Horizontal bars, one per (label, value) pair, in the given order."""
    config = config or RenderConfig.default()
    font = 'font-size="{}"'.format(config.font_size)
    svg = SVG(config.width, config.height, config.precision)
    if title:
        svg.text(config.width / 2, config.margin / 2, title, font + ' text-anchor="middle"')
    if not pairs:
        return svg.get_svg()
    label_width = 10 * config.font_size
    left = config.margin + label_width
    width = config.width - left - config.margin - 4 * config.font_size
    band = (config.height - 2 * config.margin) / len(pairs)
    top = max(value for _, value in pairs) or 1
    for k, (label, value) in enumerate(pairs):
        y = config.margin + k * band
        svg.text(left - 6, y + band / 2, label, font + ' text-anchor="end" dominant-baseline="middle"')
        svg.filled_rectangle(left, y + 0.1 * band, left + width * value / top, y + 0.9 * band, config.palette[0])
        svg.text(left + width * value / top + 4, y + band / 2, str(value), font + ' dominant-baseline="middle"')
    return svg.get_svg()
