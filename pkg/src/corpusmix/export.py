"""File writers: CSV tables, GraphML/DOT networks and small SVG plots.

SVG networks scale linearly: node radius = 4 + 12 * weight / max weight
(4..16 px), edge width = 0.5 + 4.5 * value / max value (0.5..5 px), edge
opacity 0.3..1 on the same scale.
"""

from __future__ import annotations

import csv
import io
import math
from pathlib import Path
from typing import Iterable, Sequence
from xml.sax.saxutils import escape

import networkx as nx

NODE_R_MIN, NODE_R_MAX = 4.0, 16.0
EDGE_W_MIN, EDGE_W_MAX = 0.5, 5.0


def fmt(x: float) -> str:
    """Shortest round-tripping float text, stable across runs."""
    return repr(float(x))


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) if isinstance(v, float) else v for v in row])
    Path(path).write_text(buf.getvalue(), encoding="utf-8")


# -- networks -----------------------------------------------------------------

def to_networkx(nodes, edges, node_attr: str, edge_attr: str, focal=None) -> nx.Graph:
    g = nx.Graph()
    for term, weight in nodes:
        attrs = {node_attr: weight}
        if focal is not None:
            attrs["focal"] = term == focal
        g.add_node(term, **attrs)
    for a, b, value in edges:
        g.add_edge(a, b, **{edge_attr: value})
    return g


def write_graphml(path, nodes, edges, node_attr="degree", edge_attr="llr", focal=None) -> None:
    nx.write_graphml(to_networkx(nodes, edges, node_attr, edge_attr, focal), str(path))


def _dot_id(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def write_dot(path, nodes, edges, node_attr="degree", edge_attr="llr", name="G") -> None:
    lines = [f"graph {_dot_id(name)} {{"]
    for term, weight in nodes:
        lines.append(f"  {_dot_id(term)} [{node_attr}={_dot_value(weight)}];")
    for a, b, value in edges:
        lines.append(f"  {_dot_id(a)} -- {_dot_id(b)} [{edge_attr}={_dot_value(value)}];")
    lines.append("}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _dot_value(v) -> str:
    return fmt(v) if isinstance(v, float) else str(v)


def _scale(v, vmax, lo, hi):
    return lo if vmax <= 0 else lo + (hi - lo) * v / vmax


def network_svg(nodes, edges, focal=None, size=600) -> str:
    """Circular layout; the focal term (if any) sits in the centre."""
    cx = cy = size / 2
    radius = size / 2 - 60
    ring = [t for t, _ in nodes if t != focal]
    pos = {}
    for i, term in enumerate(ring):
        ang = 2 * math.pi * i / max(len(ring), 1) - math.pi / 2
        pos[term] = (cx + radius * math.cos(ang), cy + radius * math.sin(ang))
    if focal is not None:
        pos[focal] = (cx, cy)
    wmax = max((w for _, w in nodes), default=0)
    emax = max((v for _, _, v in edges), default=0)
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
           f'viewBox="0 0 {size} {size}" font-family="sans-serif" font-size="11">']
    for a, b, v in edges:
        (x1, y1), (x2, y2) = pos[a], pos[b]
        width = _scale(v, emax, EDGE_W_MIN, EDGE_W_MAX)
        opacity = _scale(v, emax, 0.3, 1.0)
        out.append(f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" '
                   f'stroke="#555" stroke-width="{width:.2f}" stroke-opacity="{opacity:.2f}"/>')
    for term, w in nodes:
        x, y = pos[term]
        r = _scale(w, wmax, NODE_R_MIN, NODE_R_MAX)
        fill = "#d62728" if term == focal else "#1f77b4"
        out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="{r:.2f}" fill="{fill}"/>')
        out.append(f'<text x="{x:.2f}" y="{y - r - 3:.2f}" text-anchor="middle">{escape(term)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_network(stem, nodes, edges, node_attr, edge_attr, focal=None) -> list[Path]:
    """Write ``<stem>.graphml``, ``<stem>.dot`` and ``<stem>.svg``."""
    stem = Path(stem)
    paths = [stem.with_suffix(s) for s in (".graphml", ".dot", ".svg")]
    write_graphml(paths[0], nodes, edges, node_attr, edge_attr, focal)
    write_dot(paths[1], nodes, edges, node_attr, edge_attr, name=stem.name)
    paths[2].write_text(network_svg(nodes, edges, focal), encoding="utf-8")
    return paths


# -- charts -------------------------------------------------------------------

def line_svg(xs, ys, xlabel="", ylabel="", width=560, height=360) -> str:
    left, right, top, bottom = 80, 20, 20, 50
    pw, ph = width - left - right, height - top - bottom
    xmin, xmax = min(xs), max(xs)
    ymin, ymax = min(ys), max(ys)
    if xmax == xmin:
        xmin, xmax = xmin - 1, xmax + 1
    if ymax == ymin:
        ymin, ymax = ymin - 1, ymax + 1

    def px(x):
        return left + pw * (x - xmin) / (xmax - xmin)

    def py(y):
        return top + ph * (1 - (y - ymin) / (ymax - ymin))

    pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys))
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'font-family="sans-serif" font-size="11">',
           f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="#999"/>',
           f'<polyline points="{pts}" fill="none" stroke="#1f77b4" stroke-width="2"/>']
    for x, y in zip(xs, ys):
        out.append(f'<circle cx="{px(x):.2f}" cy="{py(y):.2f}" r="3" fill="#1f77b4"/>')
        out.append(f'<text x="{px(x):.2f}" y="{top + ph + 15}" text-anchor="middle">{x}</text>')
    out.append(f'<text x="{left - 5}" y="{top + 10}" text-anchor="end">{ymax:.6g}</text>')
    out.append(f'<text x="{left - 5}" y="{top + ph}" text-anchor="end">{ymin:.6g}</text>')
    out.append(f'<text x="{left + pw / 2}" y="{height - 10}" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(f'<text x="15" y="{top + ph / 2}" transform="rotate(-90 15 {top + ph / 2})" '
               f'text-anchor="middle">{escape(ylabel)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def bar_svg(labels, values, width=560, bar_h=16) -> str:
    left = 140
    height = 20 + bar_h * len(labels) + 10
    vmax = max(values, default=0) or 1
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'font-family="sans-serif" font-size="11">']
    for i, (lab, v) in enumerate(zip(labels, values)):
        y = 10 + i * bar_h
        w = (width - left - 60) * v / vmax
        out.append(f'<text x="{left - 5}" y="{y + bar_h - 4}" text-anchor="end">{escape(str(lab))}</text>')
        out.append(f'<rect x="{left}" y="{y + 2}" width="{w:.2f}" height="{bar_h - 4}" fill="#1f77b4"/>')
        out.append(f'<text x="{left + w + 4:.2f}" y="{y + bar_h - 4}">{v}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
