"""The four-step search: chamber triples, twist coefficients, Weyl vector,
polygon extension.

All decisions are exact. The only geometric input is the triangle lattice;
every root is a square-2 vector of it and every polygon side is a mirror of
the triangle tessellation.
"""

from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import gcd, lcm
from typing import Iterator, Sequence

from sympy import factorint

from gcm3.algebra import det, solve_linear, solve_linear3, format_fraction
from gcm3.gcm import RealizationMatrix, emit_realization, gram_of
from gcm3.lattice import (
    SIMPLE,
    TRIANGLE_GRAM,
    Vec,
    add,
    cross_point,
    format_vec,
    generate_roots,
    inner,
    neg,
    norm,
    reflect,
    scale,
)

log = logging.getLogger(__name__)

# interior point of the fundamental triangle: twice its own Weyl vector
TRIANGLE_CENTER: Vec = (4, 9, 10)
# vertices of the fundamental triangle: a^b, a^c, and the cusp b^c
TRIANGLE_VERTICES: tuple[Vec, ...] = ((1, 2, 2), (2, 3, 4), (0, 1, 1))
# for each middle root: (simple root bounding its edge at the delta1 end, at the delta3 end)
EDGE_ENDS = {"a": ("c", "b"), "b": ("c", "a"), "c": ("b", "a")}
ADJACENT = (0, 1, 2)  # admissible -(d_i, d_j) for neighbouring sides


class UnboundedSearch(ValueError):
    """A twist coefficient is unconstrained by (**) and no cap was given."""


class BoundExhausted(RuntimeError):
    pass


class NoAdmissibleRoot(RuntimeError):
    pass


@dataclass(frozen=True)
class ChamberTriple:
    delta1: Vec
    delta2: Vec
    delta3: Vec

    @property
    def deltas(self) -> tuple[Vec, Vec, Vec]:
        return (self.delta1, self.delta2, self.delta3)

    @property
    def gram(self) -> list[list[int]]:
        return gram_of(self.deltas)

    @property
    def g(self) -> tuple[int, int, int]:
        """(g12, g13, g23) = -(d1, d2), -(d1, d3), -(d2, d3)."""
        d1, d2, d3 = self.deltas
        return (-inner(d1, d2), -inner(d1, d3), -inner(d2, d3))

    @property
    def label(self) -> str:
        return label_of(self.delta2)

    def __str__(self):
        return ", ".join(format_vec(d) for d in self.deltas)


@dataclass(frozen=True)
class WeylVector:
    coords: tuple[Fraction, Fraction, Fraction]
    norm: Fraction

    @property
    def timelike(self) -> bool:
        return self.norm < 0

    def to_dict(self) -> dict:
        return {
            "coords": [format_fraction(x) for x in self.coords],
            "norm": format_fraction(self.norm),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "WeylVector":
        coords = tuple(Fraction(x) for x in d["coords"])
        return cls(coords, Fraction(d["norm"]))

    def __str__(self):
        return f"rho = {format_vec(self.coords, sep='*', spaced=True)}; (rho,rho) = {format_fraction(self.norm)}"


@dataclass
class PolygonCandidate:
    deltas: tuple[Vec, ...]
    lambdas: tuple[int, ...]
    weyl: WeylVector | None
    status: str = "open"  # closed | open | failed
    reason: str = ""
    delta2: str = ""

    @property
    def n(self) -> int:
        return len(self.deltas)

    @property
    def realization(self) -> RealizationMatrix | None:
        if self.n < 3 or len(self.lambdas) != self.n:
            return None
        return emit_realization(self.deltas, self.lambdas)

    @property
    def compact(self) -> bool:
        """No side meets its neighbour at infinity."""
        n = self.n
        return all(-inner(self.deltas[i], self.deltas[(i + 1) % n]) < 2 for i in range(n))

    def dihedral_key(self) -> tuple:
        return dihedral_key(self.deltas, self.lambdas)

    def to_dict(self) -> dict:
        r = self.realization
        return {
            "delta2": self.delta2,
            "deltas": [list(d) for d in self.deltas],
            "lambdas": list(self.lambdas),
            "weyl": self.weyl.to_dict() if self.weyl else None,
            "status": self.status,
            "reason": self.reason,
            "realization": r.to_dict() if r else None,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PolygonCandidate":
        return cls(
            deltas=tuple(tuple(int(x) for x in v) for v in d["deltas"]),
            lambdas=tuple(int(x) for x in d["lambdas"]),
            weyl=WeylVector.from_dict(d["weyl"]) if d.get("weyl") else None,
            status=d.get("status", "open"),
            reason=d.get("reason", ""),
            delta2=d.get("delta2", ""),
        )


def label_of(v: Sequence[int]) -> str:
    for name, root in SIMPLE.items():
        if tuple(v) == root:
            return name
    return format_vec(v)


def dihedral_key(deltas: Sequence[Vec], lambdas: Sequence[int]) -> tuple:
    """Smallest rotation/reversal of the cyclic (root, lambda) sequence."""
    seq = list(zip(deltas, lambdas))
    n = len(seq)
    images = []
    for s in (seq, seq[::-1]):
        images.extend(tuple(s[(i + k) % n] for k in range(n)) for i in range(n))
    return min(images)


# -- Step 1: chamber triples ------------------------------------------------


def _orient(p: Vec, ref: Vec = TRIANGLE_CENTER) -> Vec:
    """Put a timelike or isotropic vector into the half-cone containing ref."""
    return p if inner(p, ref) < 0 else neg(p)


@lru_cache(maxsize=None)
def end_walk(delta2: str, end: str, max_steps: int = 64) -> tuple[tuple[Vec, ...], Vec, Vec]:
    """Walk along the mirror of `delta2` from the fundamental edge towards `end`.

    Returns (finite, cusp_root, isotropic): the roots whose mirrors cross the
    delta2 mirror at an acute angle at the finite vertices passed on the way,
    then the first root through the ideal endpoint and the isotropic vector of
    that endpoint. The full parallel family there is cusp_root + k*isotropic.

    Each step moves to the next chamber along the mirror on the same side:
    through a right-angle vertex by reflecting in the crossing wall, through a
    pi/3 vertex by the rotation s_sigma s_delta2.
    """
    walls = dict(SIMPLE)
    d2 = SIMPLE[delta2]
    here, far = delta2, end
    finite: list[Vec] = []
    for _ in range(max_steps):
        sigma = walls[far]
        t = -inner(d2, sigma)
        if t == 2:
            return tuple(finite), sigma, add(sigma, d2)
        if t not in (0, 1):
            raise AssertionError(f"wall {format_vec(sigma)} meets the mirror obtusely")
        finite.append(sigma)
        vertex = cross_point(d2, sigma)
        if t == 0:
            walls = {k: reflect(sigma, w) for k, w in walls.items()}
        else:
            walls = {k: reflect(sigma, reflect(d2, w)) for k, w in walls.items()}
        here = next(k for k, w in walls.items() if w == d2)
        far = next(k for k, w in walls.items() if k != here and inner(w, vertex) != 0)
    raise AssertionError("walk along the mirror did not reach an ideal endpoint")


def _end_candidates(delta2: str, end: str) -> Iterator[Vec]:
    finite, sigma, iso = end_walk(delta2, end)
    yield from finite
    k = 0
    while True:
        yield add(sigma, scale(k, iso))
        k += 1


def enumerate_triples(delta2: Vec | str, cross_bound: int = 14) -> list[ChamberTriple]:
    """All chamber triples with middle root delta2 in {a, b, c}.

    delta1 runs over the roots crossing the delta2 mirror beyond one end of the
    fundamental edge, delta3 beyond the other; kept when
    0 <= -(delta1, delta3) < cross_bound. Ordered by walk position of delta1,
    then of delta3.
    """
    name = delta2 if isinstance(delta2, str) else label_of(delta2)
    if name not in SIMPLE:
        raise ValueError(f"delta2 must be one of a, b, c (got {name})")
    end1, end3 = EDGE_ENDS[name]
    d2 = SIMPLE[name]
    fin1, _, iso1 = end_walk(name, end1)
    fin3, _, iso3 = end_walk(name, end3)
    if cross_bound <= 0:
        return []

    out = []
    for i, d1 in enumerate(_end_candidates(name, end1)):
        row = []
        for j, d3 in enumerate(_end_candidates(name, end3)):
            value = -inner(d1, d3)
            if j >= len(fin3) and value >= cross_bound:
                break  # -(d1, d3) grows with the parallel family index
            if 0 <= value < cross_bound:
                row.append(ChamberTriple(d1, d2, d3))
        if i >= len(fin1) and not row:
            # the smallest value over the delta3 side already exceeds the bound
            m0 = min(-inner(d1, d3) for d3 in list(fin3) + [end_walk(name, end3)[1]])
            if m0 >= cross_bound:
                break
        out.extend(row)
    return out


def enumerate_triples_bruteforce(delta2: Vec | str, cross_bound: int = 14, coeff_bound: int = 40) -> list[ChamberTriple]:
    """Independent check of enumerate_triples by filtering a box of roots.

    A root is a delta1 (delta3) candidate when the fundamental triangle lies on
    its negative side, it meets the delta2 mirror at angle pi/2, pi/3 or 0,
    and the meeting point lies beyond the edge's delta1 (delta3) endpoint.
    """
    name = delta2 if isinstance(delta2, str) else label_of(delta2)
    d2 = SIMPLE[name]
    s1, s3 = (SIMPLE[e] for e in EDGE_ENDS[name])
    ones, threes = [], []
    for r in generate_roots(coeff_bound):
        if r == d2 or r == neg(d2):
            continue
        if any(inner(v, r) > 0 for v in TRIANGLE_VERTICES):
            continue
        if -inner(r, d2) not in ADJACENT:
            continue
        q = _orient(cross_point(r, d2))
        if inner(q, s1) >= 0:
            ones.append(r)
        elif inner(q, s3) >= 0:
            threes.append(r)
    out = [
        ChamberTriple(d1, d2, d3)
        for d1 in ones
        for d3 in threes
        if 0 <= -inner(d1, d3) < cross_bound
    ]
    return sorted(out, key=lambda t: (t.delta1, t.delta3))


# -- Step 2: twist coefficients ---------------------------------------------


def _valuation(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def _box_bound(i: int, g: dict) -> int:
    """Largest value lambda_i can take among coprime solutions.

    With every incident g nonzero this is lcm of the two incident g's (the
    gcd-1 condition puts a zero valuation somewhere, and each valuation gap is
    bounded by the shared edge). A zero g removes its edge; the bound is then
    the longest shortest path in valuation weights, prime by prime.
    """
    others = [j for j in range(3) if j != i]
    incident = [g[frozenset((i, j))] for j in others]
    if all(incident):
        return lcm(*incident)
    primes = set()
    for v in g.values():
        if v:
            primes.update(factorint(v))
    bound = 1
    for p in sorted(primes):
        w = {e: (_valuation(v, p) if v else None) for e, v in g.items()}
        worst = 0
        for j in others:
            k = next(x for x in others if x != j)
            paths = []
            if w[frozenset((i, j))] is not None:
                paths.append(w[frozenset((i, j))])
            if w[frozenset((i, k))] is not None and w[frozenset((k, j))] is not None:
                paths.append(w[frozenset((i, k))] + w[frozenset((k, j))])
            worst = max(worst, min(paths))
        bound *= p**worst
    return bound


def solve_twists(g12: int, g13: int, g23: int, cap: int | None = None) -> list[tuple[int, int, int]]:
    """Coprime (l1, l2, l3) with l_i | g_ij * l_j for every ordered pair.

    Each l_i ranges over the divisors of the lcm of its two incident g's, as in
    the original divisor program. When both g's at some l_i vanish, that l_i
    is free and so is the common scale of the other two (gcd 1 is then met by
    l_i = 1 alone): UnboundedSearch unless `cap` bounds every coordinate.
    """
    if min(g12, g13, g23) < 0:
        raise ValueError("g values are -(d_i, d_j) and must be nonnegative")
    g = {frozenset((0, 1)): g12, frozenset((0, 2)): g13, frozenset((1, 2)): g23}
    isolated = [
        i for i in range(3) if not any(g[frozenset((i, j))] for j in range(3) if j != i)
    ]
    if isolated:
        if cap is None:
            raise UnboundedSearch(
                f"lambda{isolated[0] + 1} is unconstrained: both of its Gram entries are 0"
            )
        ranges = [range(1, cap + 1)] * 3
    else:
        ranges = []
        for i in range(3):
            bound = _box_bound(i, g)
            divs = [d for d in range(1, bound + 1) if bound % d == 0]
            if cap is not None:
                divs = [d for d in divs if d <= cap]
            ranges.append(divs)
    out = []
    for lam in product(*ranges):
        if gcd(*lam) != 1:
            continue
        if all(
            (g[frozenset((i, j))] * lam[j]) % lam[i] == 0
            for i in range(3)
            for j in range(3)
            if i != j
        ):
            out.append(tuple(lam))
    return sorted(out)


def check_valuations(lam: Sequence[int], g: Sequence[int]) -> bool:
    """|v_p(l_i) - v_p(l_j)| <= v_p(g_ij) for all primes p; v_p(0) is infinite.

    `g` is (g12, g13, g23).
    """
    pairs = {(0, 1): g[0], (0, 2): g[1], (1, 2): g[2]}
    primes: set[int] = set()
    for x in list(lam) + [v for v in g if v]:
        primes.update(factorint(x))
    for p in primes:
        for (i, j), gij in pairs.items():
            if gij == 0:
                continue
            if abs(_valuation(lam[i], p) - _valuation(lam[j], p)) > _valuation(gij, p):
                return False
    return True


def twist_divisible(lam_i: int, lam_j: int, g_ij: int) -> bool:
    """Both directions of 2 l_i | 2 l_j (d_i, d_j)."""
    return (lam_j * g_ij) % lam_i == 0 and (lam_i * g_ij) % lam_j == 0


# -- Step 3: Weyl vector ----------------------------------------------------


def solve_weyl(triple: ChamberTriple | Sequence[Vec], lam: Sequence[int]) -> WeylVector:
    """The rational rho with (rho, d_i) = -l_i; SingularMatrix if the d_i are dependent."""
    deltas = triple.deltas if isinstance(triple, ChamberTriple) else tuple(triple)
    rows = [[sum(d[i] * TRIANGLE_GRAM[i][j] for i in range(3)) for j in range(3)] for d in deltas]
    rho = solve_linear3(rows, [-x for x in lam])
    return WeylVector(rho, norm(rho))


# -- Step 4: polygon extension ----------------------------------------------


def _ext_gcd(x: int, y: int) -> tuple[int, int, int]:
    """(g, p, q) with p x + q y = g = gcd(x, y) >= 0."""
    p0, q0, p1, q1 = 1, 0, 0, 1
    while y:
        k = x // y
        x, y = y, x - k * y
        p0, p1 = p1, p0 - k * p1
        q0, q1 = q1, q0 - k * q1
    if x < 0:
        x, p0, q0 = -x, -p0, -q0
    return x, p0, q0


def _hyperplane_lattice(w: Sequence[int]) -> tuple[int, Vec, Vec, Vec]:
    """For integer w != 0: (g, x0, u, v) with w.x0 = g, and u, v a basis of
    the integer kernel of w, so {x : w.x = m} = (m/g) x0 + Z u + Z v when g | m."""
    perm = sorted(range(3), key=lambda i: w[i] == 0)  # nonzero entries first
    w0, w1, w2 = (w[i] for i in perm)
    g1, p, q = _ext_gcd(w0, w1)
    if g1 == 0:
        raise ValueError("zero functional")
    g, r, s = _ext_gcd(g1, w2)
    x0 = (r * p, r * q, s)
    u = (w1 // g1, -w0 // g1, 0)
    v = ((w2 // g) * p, (w2 // g) * q, -g1 // g)

    def unperm(t):
        out = [0, 0, 0]
        for k, i in enumerate(perm):
            out[i] = t[k]
        return tuple(out)

    return g, unperm(x0), unperm(u), unperm(v)


def roots_at_level(rho: Sequence[Fraction], level: int) -> list[Vec]:
    """Every square-2 integer vector r with -(rho, r) = level, exactly.

    The level set is a 2-dimensional affine lattice inside a translate of
    rho-perp, on which the form is positive definite; the roots form the
    lattice points of an ellipse, found row by row.
    """
    den = lcm(*(Fraction(x).denominator for x in rho))
    rho_int = [int(x * den) for x in rho]
    w = [sum(TRIANGLE_GRAM[i][j] * rho_int[j] for j in range(3)) for i in range(3)]
    m = -level * den
    g, x0, u, v = _hyperplane_lattice(w)
    if m % g:
        return []
    base = scale(m // g, x0)
    qa, qb, qc = norm(u), inner(u, v), norm(v)
    qd, qe, qf = inner(base, u), inner(base, v), norm(base) - 2
    # q(s, t) = qa s^2 + 2 qb s t + qc t^2 + 2 qd s + 2 qe t + qf = 0
    # as a quadratic in t: disc(s) = (qb s + qe)^2 - qc (qa s^2 + 2 qd s + qf)
    da = qb * qb - qa * qc  # < 0 (positive definite)
    db = qb * qe - qc * qd
    dc = qe * qe - qc * qf
    # disc(s) = da s^2 + 2 db s + dc >= 0 with da < 0: s lies between
    # (db - sqrt(D)) / -da and (db + sqrt(D)) / -da, D = db^2 - da dc
    big_d = db * db - da * dc
    if big_d < 0:
        return []
    r = math.isqrt(big_d) + 1
    lo, hi = (db - r) // (-da) - 1, (db + r) // (-da) + 1
    out = []
    for s in range(lo, hi + 1):
        disc = da * s * s + 2 * db * s + dc
        if disc < 0:
            continue
        sq = math.isqrt(disc)
        if sq * sq != disc:
            continue
        for num in {-(qb * s + qe) + sq, -(qb * s + qe) - sq}:
            if num % qc == 0:
                t = num // qc
                r = add(add(base, scale(s, u)), scale(t, v))
                out.append(r)
    return sorted(set(out))


@dataclass
class _RootPool:
    roots: list[tuple[Vec, int]]
    truncated: bool
    widest: int


def coordinate_bound(rho: Sequence[Fraction], lambda_cap: int) -> int:
    """Max |coordinate| of any square-2 root with 0 < -(rho, root) <= lambda_cap.

    Uses the positive definite majorant Q(x) = (x, x) - 2 (x, rho)^2 / (rho, rho):
    such roots have Q <= 2 + 2 cap^2 / |(rho, rho)|, and |x_i| <= sqrt(R Q^-1_ii).
    """
    rr = norm(rho)
    w = [sum(TRIANGLE_GRAM[i][j] * rho[j] for j in range(3)) for i in range(3)]
    q = [[TRIANGLE_GRAM[i][j] - 2 * w[i] * w[j] / rr for j in range(3)] for i in range(3)]
    radius = 2 + Fraction(2 * lambda_cap**2) / (-rr)
    bound = 0
    for i in range(3):
        e = [0, 0, 0]
        e[i] = 1
        qinv_ii = solve_linear(q, e)[i]
        bound = max(bound, math.isqrt(math.ceil(radius * qinv_ii)) + 1)
    return bound


def root_pool(rho: Sequence[Fraction], lambda_cap: int, coeff_bound: int | None = None) -> _RootPool:
    """Every root r with -(rho, r) a natural number <= lambda_cap, with its level.

    The set is finite for timelike rho and is enumerated exactly. A
    `coeff_bound` drops roots with a larger coordinate and marks the pool
    truncated when that removed anything.
    """
    pool = []
    dropped = False
    for level in range(1, lambda_cap + 1):
        for r in roots_at_level(rho, level):
            if coeff_bound is not None and max(abs(x) for x in r) > coeff_bound:
                dropped = True
                continue
            pool.append((r, level))
    widest = max((max(abs(x) for x in r) for r, _ in pool), default=0)
    return _RootPool(pool, dropped, widest)


@dataclass
class _SearchStats:
    closed: int = 0
    hit_max_sides: bool = False
    nodes: int = 0


def _polygons(
    deltas: list[Vec],
    lambdas: list[int],
    rho: Sequence[Fraction],
    pool: list[tuple[Vec, int]],
    max_sides: int,
    stats: _SearchStats,
    max_nodes: int,
) -> Iterator[tuple[tuple[Vec, ...], tuple[int, ...]]]:
    """Depth-first extension of a convex chain of sides into closed polygons.

    Invariant: every vertex found so far lies strictly inside the negative
    half-plane of every side not through it.
    """
    verts = [_orient(cross_point(deltas[i], deltas[i + 1]), rho) for i in range(len(deltas) - 1)]

    def step():
        stats.nodes += 1
        if stats.nodes > max_nodes:
            raise BoundExhausted(f"search exceeded {max_nodes} nodes")
        last, prev = deltas[-1], deltas[-2]
        options = []
        for r, lam in pool:
            if r == last or -inner(r, last) not in ADJACENT:
                continue
            closing = r == deltas[0]
            if not closing and r in deltas:
                continue
            q = _orient(cross_point(last, r), rho)
            ahead = inner(q, prev)
            if ahead >= 0:
                continue
            if not _compatible(r, lam, closing):
                continue
            if any(inner(q, d) >= 0 for d in deltas[1 if closing else 0:-1]):
                continue
            if any(inner(v, r) >= 0 for v in verts[1 if closing else 0:]):
                continue
            key = Fraction(ahead) / inner(q, rho)
            options.append((not closing, key, lam, r, q))
        options.sort()
        for _, _, lam, r, q in options:
            if r == deltas[0]:
                stats.closed += 1
                yield tuple(deltas), tuple(lambdas)
                continue
            if len(deltas) >= max_sides:
                stats.hit_max_sides = True
                continue
            deltas.append(r)
            lambdas.append(lam)
            verts.append(q)
            yield from step()
            deltas.pop()
            lambdas.pop()
            verts.pop()

    def _compatible(r, lam, closing):
        for d, l in zip(deltas, lambdas):
            if closing and d == r:
                continue
            g = -inner(r, d)
            if g < 0 or not twist_divisible(lam, l, g):
                return False
        return True

    yield from step()


def check_seed(deltas: Sequence[Vec], lambdas: Sequence[int], weyl: WeylVector, lambda_cap: int) -> str:
    """Reason a seed cannot start a search, or '' when it can."""
    if len(deltas) < 3 or len(lambdas) != len(deltas):
        return "rejected: need at least 3 roots with one twist coefficient each"
    if any(norm(d) != 2 for d in deltas):
        return "rejected: every root must have square 2"
    if any(x < 1 for x in lambdas):
        return "rejected: twist coefficients must be natural numbers"
    if max(lambdas) > lambda_cap:
        return f"rejected: twist coefficient exceeds lambda_cap={lambda_cap}"
    if weyl.norm >= 0:
        return "rejected: (rho,rho) >= 0"
    rho = weyl.coords
    if any(inner(rho, d) != -l for d, l in zip(deltas, lambdas)):
        return "rejected: Weyl vector does not satisfy (rho, d_i) = -lambda_i"
    if inner(rho, TRIANGLE_CENTER) > 0:
        return "rejected: rho lies in the opposite half-cone"
    n = len(deltas)
    for i in range(n):
        for j in range(i + 1, n):
            g = -inner(deltas[i], deltas[j])
            if g < 0:
                return f"rejected: ({i + 1},{j + 1}) has positive inner product"
            if not twist_divisible(lambdas[i], lambdas[j], g):
                return f"rejected: twist divisibility fails on ({i + 1},{j + 1})"
    for i in range(n - 1):
        if -inner(deltas[i], deltas[i + 1]) not in ADJACENT:
            return f"rejected: sides {i + 1},{i + 2} are not adjacent"
    verts = [_orient(cross_point(deltas[i], deltas[i + 1]), rho) for i in range(n - 1)]
    for k, v in enumerate(verts):
        for j, d in enumerate(deltas):
            if j not in (k, k + 1) and inner(v, d) >= 0:
                return "rejected: chain of sides is not convex"
    return ""


def enumerate_polygons(
    seed: PolygonCandidate,
    max_sides: int = 20,
    coeff_bound: int | None = None,
    lambda_cap: int = 12,
    max_nodes: int = 200_000,
) -> tuple[list[PolygonCandidate], PolygonCandidate | None]:
    """Every closed polygon extending the seed chain, plus a status record
    when none closes."""
    reason = check_seed(seed.deltas, seed.lambdas, seed.weyl, lambda_cap) if seed.weyl else "rejected: no Weyl vector"
    if reason:
        return [], _replace(seed, status="failed", reason=reason)
    rho = seed.weyl.coords
    pool = root_pool(rho, lambda_cap, coeff_bound)
    stats = _SearchStats()
    found = []
    try:
        for deltas, lambdas in _polygons(
            list(seed.deltas), list(seed.lambdas), rho, pool.roots, max_sides, stats, max_nodes
        ):
            found.append(
                PolygonCandidate(deltas, lambdas, seed.weyl, status="closed", delta2=seed.delta2)
            )
    except BoundExhausted as exc:
        if not found:
            return [], _replace(seed, status="failed", reason=f"bound_exhausted: {exc}")
        log.warning("seed %s: %s; keeping %d closed polygons", seed.deltas, exc, len(found))
    if found:
        return found, None
    if stats.hit_max_sides:
        return [], _replace(seed, status="open", reason=f"bound_exhausted: max_sides={max_sides}")
    if pool.truncated:
        return [], _replace(
            seed,
            status="failed",
            reason=f"bound_exhausted: coeff_bound={coeff_bound}",
        )
    return [], _replace(seed, status="failed", reason="no_admissible_root")


def _replace(c: PolygonCandidate, **kw) -> PolygonCandidate:
    d = dict(deltas=c.deltas, lambdas=c.lambdas, weyl=c.weyl, status=c.status, reason=c.reason, delta2=c.delta2)
    d.update(kw)
    return PolygonCandidate(**d)


def extend_polygon(
    seed: PolygonCandidate,
    max_sides: int = 20,
    coeff_bound: int | None = None,
    lambda_cap: int = 12,
) -> PolygonCandidate:
    """First closed polygon extending the seed (fewest-sides-first within the
    depth-first order), or the seed with status open/failed and a reason."""
    found, failure = enumerate_polygons(seed, max_sides, coeff_bound, lambda_cap)
    if failure is not None:
        return failure
    return found[0]


def seed_from_triple(triple: ChamberTriple | Sequence[Vec], lam: Sequence[int]) -> PolygonCandidate:
    deltas = triple.deltas if isinstance(triple, ChamberTriple) else tuple(tuple(d) for d in triple)
    weyl = solve_weyl(deltas, lam)
    return PolygonCandidate(tuple(deltas), tuple(lam), weyl, delta2=label_of(deltas[1]))


def express_in_triple(triple: Sequence[Vec], v: Sequence[int]) -> tuple[Fraction, Fraction, Fraction]:
    """Rational x with v = x1 d1 + x2 d2 + x3 d3."""
    cols = [[triple[j][i] for j in range(3)] for i in range(3)]
    return solve_linear3(cols, list(v))


def gram_det(vectors: Sequence[Sequence[int]]) -> Fraction:
    return det(gram_of(vectors))


# -- Pipeline ---------------------------------------------------------------


@dataclass(frozen=True)
class PipelineConfig:
    cross_bound: int = 14
    lambda_cap: int = 12
    # Step 4 roots are enumerated exactly; a value here caps their coordinates
    coeff_bound: int | None = None
    max_sides: int = 20
    workers: int = 1
    max_nodes: int = 200_000


@dataclass
class PipelineResult:
    candidates: list[PolygonCandidate]
    summary: dict = field(default_factory=dict)

    @property
    def closed(self) -> list[PolygonCandidate]:
        return [c for c in self.candidates if c.status == "closed"]


def _twists_for(triple: ChamberTriple, cfg: PipelineConfig) -> list[tuple[int, int, int]]:
    try:
        return solve_twists(*triple.g)
    except UnboundedSearch:
        return solve_twists(*triple.g, cap=cfg.lambda_cap)


def _run_triple(args) -> list[PolygonCandidate]:
    triple, cfg = args
    out = []
    twists = _twists_for(triple, cfg)
    if not twists:
        out.append(PolygonCandidate(triple.deltas, (), None, "failed", "no twist vectors", triple.label))
    for lam in twists:
        try:
            seed = seed_from_triple(triple, lam)
        except ArithmeticError as exc:
            out.append(PolygonCandidate(triple.deltas, lam, None, "failed", f"singular: {exc}", triple.label))
            continue
        found, failure = enumerate_polygons(
            seed, cfg.max_sides, cfg.coeff_bound, cfg.lambda_cap, cfg.max_nodes
        )
        out.extend(found)
        if failure is not None:
            out.append(failure)
    return out


def default_workers() -> int:
    env = os.environ.get("GCM3_THREADS")
    if env:
        return max(1, int(env))
    return 1


def run_pipeline(config: PipelineConfig | None = None) -> PipelineResult:
    cfg = config or PipelineConfig()
    triples = [t for name in "abc" for t in enumerate_triples(name, cfg.cross_bound)]
    jobs = [(t, cfg) for t in triples]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as ex:
            batches = list(ex.map(_run_triple, jobs, chunksize=4))
    else:
        batches = [_run_triple(j) for j in jobs]

    seen = set()
    candidates = []
    for batch in batches:
        for c in batch:
            if c.status == "closed":
                key = c.dihedral_key()
                if key in seen:
                    continue
                seen.add(key)
            candidates.append(c)
    closed = [c for c in candidates if c.status == "closed"]
    closed_sorted = sorted(closed, key=lambda c: (c.n, c.dihedral_key()))
    others = [c for c in candidates if c.status != "closed"]
    result = PipelineResult(closed_sorted + others)
    result.summary = summarize(result, triples, cfg)
    return result


def summarize(result: PipelineResult, triples: list[ChamberTriple], cfg: PipelineConfig) -> dict:
    closed = result.closed
    lambdas = [l for c in closed for l in c.lambdas]
    max_lam = max(lambdas) if lambdas else None
    gcms = {c.realization.canonical() for c in closed}
    by_sides: dict[int, int] = {}
    for c in closed:
        by_sides[c.n] = by_sides.get(c.n, 0) + 1
    reasons: dict[str, int] = {}
    for c in result.candidates:
        if c.status != "closed":
            key = c.reason.split(":")[0] if c.reason else c.status
            reasons[key] = reasons.get(key, 0) + 1
    per = {name: sum(1 for t in triples if t.label == name) for name in "abc"}
    return {
        "config": {
            "cross_bound": cfg.cross_bound,
            "lambda_cap": cfg.lambda_cap,
            "coeff_bound": cfg.coeff_bound,
            "max_sides": cfg.max_sides,
        },
        "triples": {**per, "total": len(triples)},
        "seeds": sum(len(_twists_for(t, cfg)) for t in triples),
        "closed_polygons": len(closed),
        "distinct_realizations": len(gcms),
        "compact_polygons": sum(1 for c in closed if c.compact),
        "closed_by_sides": {str(k): by_sides[k] for k in sorted(by_sides)},
        "max_lambda": max_lam,
        "all_lambda_le_12": all(l <= 12 for l in lambdas),
        "all_lambda_le_6": all(l <= 6 for l in lambdas),
        "untwisted_polygons": sum(1 for c in closed if set(c.lambdas) == {1}),
        "non_closed_by_reason": dict(sorted(reasons.items())),
    }


# -- Comparison with the printed lists --------------------------------------


def load_printed_lists(path: str | os.PathLike | None = None) -> dict:
    """The transcribed Step 1 lists; the bundled copy when path is None."""
    import json
    from importlib import resources

    if path is None or (not os.path.exists(path) and os.path.basename(path) == "paper_lists.json"):
        text = resources.files("gcm3").joinpath("data/paper_lists.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    return json.loads(text)


def diff_triples(fixture: dict, cross_bound: int = 14, names: Sequence[str] = "abc") -> dict:
    """Per middle root: computed count, printed count, and the pairs each side lacks."""
    from gcm3.lattice import parse_vec

    report = {}
    for name in names:
        printed = [(parse_vec(x), parse_vec(y)) for x, y in fixture["lists"].get(name, [])]
        computed = [(t.delta1, t.delta3) for t in enumerate_triples(name, cross_bound)]
        pset, cset = set(printed), set(computed)
        report[name] = {
            "computed": len(computed),
            "printed": len(printed),
            "missing_from_printed": [[format_vec(x), format_vec(y)] for x, y in computed if (x, y) not in pset],
            "extra_in_printed": [[format_vec(x), format_vec(y)] for x, y in printed if (x, y) not in cset],
        }
    return report
