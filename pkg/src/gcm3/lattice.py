"""The even hyperbolic lattice of the (pi/2, pi/3, 0) triangle group.

Vectors are coordinate triples in the ordered basis (a, b, c) of simple roots.
The Gram matrix is forced by the dihedral angles: square-2 mirror normals at
angle theta have inner product -2 cos(theta).
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Sequence

from gcm3.algebra import Matrix, signature

Vec = tuple  # (x, y, z) of int or Fraction

TRIANGLE_GRAM: tuple[tuple[int, int, int], ...] = (
    (2, 0, -1),
    (0, 2, -2),
    (-1, -2, 2),
)

A: Vec = (1, 0, 0)
B: Vec = (0, 1, 0)
C: Vec = (0, 0, 1)
SIMPLE = {"a": A, "b": B, "c": C}


class NonPositiveMirror(ValueError):
    pass


class NotTimelike(ValueError):
    pass


class OppositeCones(ValueError):
    pass


def inner(u: Sequence, v: Sequence, gram: Matrix = TRIANGLE_GRAM):
    """u^T G v. Integers in, integer out; Fractions propagate exactly."""
    return sum(u[i] * gram[i][j] * v[j] for i in range(3) for j in range(3) if gram[i][j])


def norm(u: Sequence, gram: Matrix = TRIANGLE_GRAM):
    return inner(u, u, gram)


def add(u: Sequence, v: Sequence) -> Vec:
    return tuple(x + y for x, y in zip(u, v))


def sub(u: Sequence, v: Sequence) -> Vec:
    return tuple(x - y for x, y in zip(u, v))


def scale(t, u: Sequence) -> Vec:
    return tuple(t * x for x in u)


def neg(u: Sequence) -> Vec:
    return tuple(-x for x in u)


def reflect(mirror: Sequence, x: Sequence, gram: Matrix = TRIANGLE_GRAM) -> Vec:
    """s_mirror(x) = x - 2 (x, mirror) / (mirror, mirror) * mirror."""
    mm = norm(mirror, gram)
    if mm <= 0:
        raise NonPositiveMirror(f"mirror {format_vec(mirror)} has square {mm}")
    k = Fraction(2 * inner(x, mirror, gram), mm)
    out = tuple(xi - k * mi for xi, mi in zip(x, mirror))
    if all(isinstance(v, int) for v in x) and k.denominator == 1:
        return tuple(int(v) for v in out)
    return out


def is_primitive(v: Sequence[int]) -> bool:
    return gcd(*v) == 1


def is_root(v: Sequence[int], gram: Matrix = TRIANGLE_GRAM) -> bool:
    """Primitive, positive square, and (v, v) | 2 (v, e) for every basis e."""
    if not is_primitive(v):
        return False
    vv = norm(v, gram)
    if vv <= 0:
        return False
    basis = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    return all((2 * inner(v, e, gram)) % vv == 0 for e in basis)


@lru_cache(maxsize=16)
def generate_roots(coeff_bound: int) -> tuple[Vec, ...]:
    """All square-2 vectors with every |coordinate| <= coeff_bound, sorted.

    For fixed (x, y) the condition (v, v) = 2 reads
    z^2 - (x + 2y) z + (x^2 + y^2 - 1) = 0, so z is read off the discriminant.
    """
    if coeff_bound < 1:
        raise ValueError("coeff_bound must be >= 1")
    out = []
    r = range(-coeff_bound, coeff_bound + 1)
    for x in r:
        for y in r:
            s = x + 2 * y
            disc = s * s - 4 * (x * x + y * y - 1)
            if disc < 0:
                continue
            q = isqrt(disc)
            if q * q != disc:
                continue
            for num in {s - q, s + q}:
                if num % 2 == 0 and abs(num // 2) <= coeff_bound:
                    out.append((x, y, num // 2))
    return tuple(sorted(out))


def hyperbolic_distance(x: Sequence, y: Sequence, gram: Matrix = TRIANGLE_GRAM) -> float:
    """cosh d = -(x, y) / sqrt((x, x)(y, y)); exact up to the final sqrt/acosh."""
    xx, yy, xy = norm(x, gram), norm(y, gram), inner(x, y, gram)
    if xx >= 0 or yy >= 0:
        raise NotTimelike("both points need a negative square")
    if xy > 0:
        raise OppositeCones("points lie in opposite half-cones")
    cosh_sq = Fraction(xy) ** 2 / (Fraction(xx) * yy)
    if cosh_sq <= 1:
        return 0.0
    return math.acosh(math.sqrt(cosh_sq))


def is_hyperbolic_form(gram: Matrix = TRIANGLE_GRAM) -> bool:
    return signature(gram) == (len(gram) - 1, 1, 0)


def cross_point(u: Sequence, v: Sequence, gram: Matrix = TRIANGLE_GRAM) -> Vec:
    """A vector orthogonal (under the form) to both u and v.

    G p must be Euclidean-orthogonal to u and v, so p = adj(G) (u x v).
    The sign is arbitrary; callers orient it.
    """
    w = (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )
    adj = _adjugate(gram)
    p = tuple(sum(adj[i][j] * w[j] for j in range(3)) for i in range(3))
    if all(isinstance(t, int) for t in p):
        g = gcd(*p)
        if g > 1:
            p = tuple(t // g for t in p)
    return p


def _adjugate(m: Matrix) -> list[list]:
    def minor(i, j):
        rows = [r for k, r in enumerate(m) if k != i]
        sub_ = [[x for l, x in enumerate(r) if l != j] for r in rows]
        return sub_[0][0] * sub_[1][1] - sub_[0][1] * sub_[1][0]

    return [[(-1) ** (i + j) * minor(j, i) for j in range(3)] for i in range(3)]


_TERM = re.compile(r"([+-]?)\s*(\d*)\s*\*?\s*([abc])")


def parse_vec(text: str) -> Vec:
    """Parse '5a+6b+12c', '-a', 'b + 2*c' or '[x, y, z]' into integer coordinates."""
    s = text.strip()
    if s.startswith("[") or re.fullmatch(r"-?\d+\s+-?\d+\s+-?\d+", s):
        parts = [p for p in re.split(r"[\s,\[\]]+", s) if p]
        if len(parts) != 3:
            raise ValueError(f"cannot parse vector {text!r}")
        return tuple(int(p) for p in parts)
    compact = s.replace(" ", "")
    if compact == "0":
        return (0, 0, 0)
    coords = {"a": 0, "b": 0, "c": 0}
    pos = 0
    for m in _TERM.finditer(compact):
        if m.start() != pos or not m.group(0):
            raise ValueError(f"cannot parse vector {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        k = int(m.group(2)) if m.group(2) else 1
        coords[m.group(3)] += sign * k
        pos = m.end()
    if pos != len(compact) or pos == 0:
        raise ValueError(f"cannot parse vector {text!r}")
    return (coords["a"], coords["b"], coords["c"])


def format_vec(v: Sequence, sep: str = "", spaced: bool = False) -> str:
    """Format as e.g. '5a+6b+12c'; sep='*', spaced=True gives '5*a + 6*b + 12*c'."""
    plus, minus = (" + ", " - ") if spaced else ("+", "-")
    terms = []
    for coef, name in zip(v, "abc"):
        if coef == 0:
            continue
        f = Fraction(coef)
        mag = abs(f)
        body = name if mag == 1 else f"{_frac(mag)}{sep}{name}"
        if not terms:
            terms.append(body if f > 0 else "-" + body)
        else:
            terms.append((plus if f > 0 else minus) + body)
    return "".join(terms) if terms else "0"


def _frac(f: Fraction) -> str:
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"
