"""Generalized Cartan matrices: axioms, symmetrization, twisting, G(A) tables."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from gcm3.algebra import Matrix, signature
from gcm3.lattice import TRIANGLE_GRAM, inner


class GCMError(ValueError):
    pass


class BadDiagonal(GCMError):
    pass


class PositiveOffDiagonal(GCMError):
    pass


class AsymmetricZero(GCMError):
    pass


class Decomposable(GCMError):
    def __init__(self, partition):
        self.partition = partition
        super().__init__(f"matrix splits into blocks {partition[0]} | {partition[1]}")


class NotSymmetrizable(GCMError):
    pass


class DivisibilityViolation(GCMError):
    def __init__(self, pair):
        self.pair = pair
        i, j = pair
        super().__init__(f"twist divisibility fails on pair ({i + 1},{j + 1})")


class LengthMismatch(GCMError):
    pass


@dataclass(frozen=True)
class CartanMatrix:
    entries: tuple[tuple[int, ...], ...]
    indecomposable: bool = True
    components: tuple[tuple[int, ...], ...] = ()

    @property
    def n(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class RealizationMatrix:
    """G(A): first row the twist coefficients, row 1+i holds -(d_j, d_{j+i})."""

    n: int
    lambdas: tuple[int, ...]
    gram_rows: tuple[tuple[int, ...], ...]

    @property
    def rows(self) -> list[list[int]]:
        return [list(self.lambdas)] + [list(r) for r in self.gram_rows]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "lambdas": list(self.lambdas),
            "gram_rows": [list(r) for r in self.gram_rows],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RealizationMatrix":
        return cls(
            n=int(d["n"]),
            lambdas=tuple(int(x) for x in d["lambdas"]),
            gram_rows=tuple(tuple(int(x) for x in r) for r in d["gram_rows"]),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def to_text(self) -> str:
        rows = self.rows
        width = max(len(str(x)) for r in rows for x in r)
        return "\n".join(" ".join(str(x).rjust(width) for x in r) for r in rows)

    def canonical(self) -> tuple:
        """Smallest column-rotation/reflection image; identifies the same GCM."""
        n = self.n
        cols = [
            tuple([self.lambdas[j]] + [r[j] for r in self.gram_rows]) for j in range(n)
        ]
        best = None
        for start in range(n):
            fwd = tuple(cols[(start + j) % n] for j in range(n))
            best = fwd if best is None or fwd < best else best
        # reversal: -(d_j, d_{j+i}) in reversed order sits in column j - i
        rev = realization_from_gram(
            _gram_from_rows(self, reverse=True), tuple(reversed(self.lambdas))
        )
        rcols = [
            tuple([rev.lambdas[j]] + [r[j] for r in rev.gram_rows]) for j in range(n)
        ]
        for start in range(n):
            cand = tuple(rcols[(start + j) % n] for j in range(n))
            best = cand if cand < best else best
        return best


def _gram_from_rows(g: RealizationMatrix, reverse: bool = False) -> list[list[int]]:
    n = g.n
    m = [[2 if i == j else None for j in range(n)] for i in range(n)]
    for i, row in enumerate(g.gram_rows, start=1):
        for j in range(n):
            k = (j + i) % n
            m[j][k] = m[k][j] = -row[j]
    if any(x is None for r in m for x in r):
        raise ValueError("realization rows do not cover every pair")
    if reverse:
        m = [list(reversed(r)) for r in reversed(m)]
    return m


def validate_gcm(m: Matrix, allow_decomposable: bool = False) -> CartanMatrix:
    n = len(m)
    if any(len(row) != n for row in m):
        raise GCMError("a generalized Cartan matrix must be square")
    for i in range(n):
        if m[i][i] != 2:
            raise BadDiagonal(f"a_{i + 1}{i + 1} = {m[i][i]} (must be 2)")
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            if Fraction(m[i][j]).denominator != 1:
                raise GCMError(f"a_{i + 1}{j + 1} = {m[i][j]} is not an integer")
            if m[i][j] > 0:
                raise PositiveOffDiagonal(f"a_{i + 1}{j + 1} = {m[i][j]} > 0")
            if (m[i][j] == 0) != (m[j][i] == 0):
                raise AsymmetricZero(f"a_{i + 1}{j + 1} and a_{j + 1}{i + 1} disagree on zero")
    comps = _components(m)
    if len(comps) > 1 and not allow_decomposable:
        rest = tuple(sorted(i for c in comps[1:] for i in c))
        raise Decomposable((comps[0], rest))
    entries = tuple(tuple(int(x) for x in row) for row in m)
    return CartanMatrix(entries, indecomposable=len(comps) == 1, components=tuple(comps))


def _components(m: Matrix) -> list[tuple[int, ...]]:
    n = len(m)
    seen: set[int] = set()
    comps = []
    for s in range(n):
        if s in seen:
            continue
        stack, comp = [s], []
        seen.add(s)
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in range(n):
                if j not in seen and m[i][j] != 0:
                    seen.add(j)
                    stack.append(j)
        comps.append(tuple(sorted(comp)))
    return comps


def symmetrize(a: CartanMatrix | Matrix) -> tuple[tuple[Fraction, ...], tuple[tuple[int, ...], ...]]:
    """Return (eps, B) with A = diag(eps) B, B symmetric.

    B is the smallest integral multiple with even positive diagonal, so it is
    determined per connected component.
    """
    m = a.entries if isinstance(a, CartanMatrix) else a
    n = len(m)
    eps: list[Fraction | None] = [None] * n
    for comp in _components(m):
        root = comp[0]
        eps[root] = Fraction(1)
        stack = [root]
        while stack:
            i = stack.pop()
            for j in range(n):
                if i == j or m[i][j] == 0:
                    continue
                # a_ij / a_ji = eps_i / eps_j
                want = eps[i] * Fraction(m[j][i], m[i][j])
                if eps[j] is None:
                    eps[j] = want
                    stack.append(j)
                elif eps[j] != want:
                    raise NotSymmetrizable(
                        f"inconsistent scaling around the cycle through {i + 1},{j + 1}"
                    )
        # smallest integral B for this component with even diagonal
        b_rat = {(i, j): Fraction(m[i][j]) / eps[i] for i in comp for j in comp}
        den = lcm(*(x.denominator for x in b_rat.values()))
        num = [int(x * den) for x in b_rat.values()]
        g = gcd(*num)
        factor = Fraction(den, g)
        if any((b_rat[(i, i)] * factor) % 2 for i in comp):
            factor *= 2
        for i in comp:
            eps[i] = eps[i] / factor
    b = tuple(
        tuple(int(Fraction(m[i][j]) / eps[i]) if m[i][j] else 0 for j in range(n))
        for i in range(n)
    )
    return tuple(eps), b


def is_hyperbolic(b: Matrix) -> bool:
    """Exactly one negative square and no zero squares."""
    pos, neg, zero = signature(b)
    return neg == 1 and zero == 0


def twist(b: Matrix, lam: Sequence[int]) -> CartanMatrix:
    """Twisted matrix with entries 2 lam_j b_ij / (lam_i b_ii)."""
    n = len(b)
    if len(lam) != n:
        raise LengthMismatch("need one twist coefficient per row")
    if any(x < 1 for x in lam):
        raise GCMError("twist coefficients must be natural numbers")
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            if i == j:
                row.append(2)
                continue
            num, den = 2 * lam[j] * b[i][j], lam[i] * b[i][i]
            if num % den:
                raise DivisibilityViolation((i, j))
            row.append(num // den)
        out.append(row)
    return validate_gcm(out, allow_decomposable=True)


def realization_from_gram(gram: Matrix, lam: Sequence[int]) -> RealizationMatrix:
    n = len(gram)
    if len(lam) != n:
        raise LengthMismatch(f"{n} roots but {len(lam)} twist coefficients")
    if n < 3:
        raise LengthMismatch("a polygon needs at least 3 sides")
    rows = tuple(
        tuple(-int(gram[j][(j + i) % n]) for j in range(n)) for i in range(1, n // 2 + 1)
    )
    return RealizationMatrix(n=n, lambdas=tuple(int(x) for x in lam), gram_rows=rows)


def emit_realization(deltas: Sequence, lam: Sequence[int], gram: Matrix = TRIANGLE_GRAM) -> RealizationMatrix:
    if len(deltas) != len(lam):
        raise LengthMismatch(f"{len(deltas)} roots but {len(lam)} twist coefficients")
    g = [[inner(u, v, gram) for v in deltas] for u in deltas]
    return realization_from_gram(g, lam)


def gram_of(deltas: Sequence, gram: Matrix = TRIANGLE_GRAM) -> list[list[int]]:
    return [[inner(u, v, gram) for v in deltas] for u in deltas]
