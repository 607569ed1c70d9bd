"""Klein-disk SVG pictures of a polygon's mirrors.

The disk is centred on the Weyl vector, so rho sits at the origin. Mirrors
are straight chords in this model. This is the only floating-point code in
the package.
"""

from __future__ import annotations

import math
from typing import Sequence
from xml.sax.saxutils import escape

from gcm3.lattice import TRIANGLE_GRAM, cross_point, format_vec, hyperbolic_distance, inner, norm

SIZE = 600
RADIUS = 270
DISK_STEPS = 360


class DegenerateChamber(ValueError):
    """Too few sides, or no timelike Weyl vector to centre the picture on."""


def _finner(x, y) -> float:
    return float(sum(x[i] * TRIANGLE_GRAM[i][j] * y[j] for i in range(3) for j in range(3)))


def _frame(rho) -> tuple[list[float], list[float], list[float]]:
    """Orthonormal frame e0 (timelike, along rho), e1, e2 for the form."""
    r = [float(x) for x in rho]
    e0 = [x / math.sqrt(-_finner(r, r)) for x in r]
    basis = []
    for cand in ([1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]):
        v = list(cand)
        # project away from e0 and previous spacelike vectors
        c = _finner(v, e0)
        v = [v[i] + c * e0[i] for i in range(3)]
        for e in basis:
            c = _finner(v, e)
            v = [v[i] - c * e[i] for i in range(3)]
        n2 = _finner(v, v)
        if n2 > 1e-9:
            basis.append([x / math.sqrt(n2) for x in v])
        if len(basis) == 2:
            break
    return e0, basis[0], basis[1]


def _chord(delta, frame) -> tuple[float, float, float]:
    """Line u*p + v*q = s in disk coordinates for the mirror of delta."""
    e0, e1, e2 = frame
    return _finner(delta, e1), _finner(delta, e2), -_finner(delta, e0)


def _clip(poly, line):
    """Keep the part of a convex polygon with p*u + q*v <= s."""
    p, q, s = line
    out = []
    for k in range(len(poly)):
        a, b = poly[k], poly[(k + 1) % len(poly)]
        fa = p * a[0] + q * a[1] - s
        fb = p * b[0] + q * b[1] - s
        if fa <= 0:
            out.append(a)
        if fa * fb < 0:
            t = fa / (fa - fb)
            out.append((a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])))
    return out


def _to_svg(pt) -> tuple[float, float]:
    return SIZE / 2 + RADIUS * pt[0], SIZE / 2 - RADIUS * pt[1]


def _klein(x, frame) -> tuple[float, float]:
    e0, e1, e2 = frame
    x0 = -_finner(x, e0)
    return _finner(x, e1) / x0, _finner(x, e2) / x0


def render_svg(deltas: Sequence[Sequence[int]], rho: Sequence, title: str = "") -> str:
    """SVG 1.1 document for the chamber {x : (x, d) <= 0 for all d}."""
    if len(deltas) < 3:
        raise DegenerateChamber("a chamber needs at least 3 sides")
    if rho is None or norm(rho) >= 0:
        raise DegenerateChamber("the Weyl vector must have negative square")
    if any(inner(rho, d) >= 0 for d in deltas):
        raise DegenerateChamber("rho must lie strictly inside every side")
    frame = _frame(rho)
    lines = [_chord(d, frame) for d in deltas]

    region = [(math.cos(2 * math.pi * k / DISK_STEPS), math.sin(2 * math.pi * k / DISK_STEPS)) for k in range(DISK_STEPS)]
    for ln in lines:
        region = _clip(region, ln)
    if len(region) < 3:
        raise DegenerateChamber("the sides bound no region")

    parts = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">',
        f"<title>{escape(title or 'fundamental polygon')}</title>",
        f'<circle cx="{SIZE / 2}" cy="{SIZE / 2}" r="{RADIUS}" fill="none" stroke="black" stroke-width="1.5"/>',
    ]
    pts = " ".join("%.3f,%.3f" % _to_svg(p) for p in region)
    parts.append(f'<polygon class="chamber" points="{pts}" fill="#9ecae1" fill-opacity="0.6" stroke="none"/>')

    for d, (p, q, s) in zip(deltas, lines):
        h = math.hypot(p, q)
        foot = (p * s / h**2, q * s / h**2)
        half = math.sqrt(max(0.0, 1 - (s / h) ** 2))
        ux, uy = -q / h, p / h
        x1, y1 = _to_svg((foot[0] + half * ux, foot[1] + half * uy))
        x2, y2 = _to_svg((foot[0] - half * ux, foot[1] - half * uy))
        parts.append(
            f'<line class="mirror" x1="{x1:.3f}" y1="{y1:.3f}" x2="{x2:.3f}" y2="{y2:.3f}" stroke="#08519c" stroke-width="1.2">'
            f"<title>{escape(format_vec(d))}</title></line>"
        )

    n = len(deltas)
    for i in range(n):
        d, e = deltas[i], deltas[(i + 1) % n]
        if i == n - 1 and n > 3 and -inner(d, e) > 2:
            continue  # open chain: first and last side do not meet
        v = cross_point(d, e)
        if inner(v, rho) > 0:
            v = tuple(-x for x in v)
        vv = norm(v)
        if vv > 0:
            continue
        x, y = _to_svg(_klein(v, frame))
        label = "inf" if vv == 0 else "%.3f" % hyperbolic_distance(rho, v)
        parts.append(f'<circle class="vertex" cx="{x:.3f}" cy="{y:.3f}" r="3" fill="#de2d26"/>')
        parts.append(f'<text x="{x + 5:.3f}" y="{y - 5:.3f}" font-size="11" font-family="sans-serif">{label}</text>')

    cx, cy = _to_svg((0.0, 0.0))
    parts.append(f'<circle class="rho" cx="{cx}" cy="{cy}" r="4" fill="black"/>')
    parts.append(f'<text x="{cx + 6}" y="{cy + 14}" font-size="12" font-family="sans-serif">rho</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
