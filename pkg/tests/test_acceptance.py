"""Acceptance criteria 1-8. Each test records one PASS/FAIL line; the lines are
printed in the terminal summary, or directly when run as a script:

    python tests/test_acceptance.py
"""

import json
import random
import time
from fractions import Fraction
from itertools import islice, product
from math import gcd, lcm

from gcm3.gcm import gram_of, is_hyperbolic, symmetrize, twist
from gcm3.lattice import A, B, C, inner, parse_vec, reflect
from gcm3.search import (
    PipelineConfig,
    _end_candidates,
    check_valuations,
    diff_triples,
    enumerate_polygons,
    enumerate_triples,
    enumerate_triples_bruteforce,
    extend_polygon,
    gram_det,
    load_printed_lists,
    run_pipeline,
    seed_from_triple,
    solve_twists,
    solve_weyl,
)

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # pragma: no cover - script mode outside pytest
    ACCEPTANCE_LINES = []

# Printed-list entries that disagree with the computed lists, each checked
# against the constraints: see the notes beside each group.
DOCUMENTED = {
    "a": {"missing_from_printed": [], "extra_in_printed": []},
    "b": {
        "missing_from_printed": [],
        "extra_in_printed": [
            ["c", "a+c"],  # -(c, a+c) = -1 < 0
            ["7b+8c", "2a+b+2c"],  # -(d1, d3) = 14, not < 14
        ],
    },
    "c": {
        # both satisfy every constraint: -(b, d3) = 2, -(c, d3) = 1 and 2
        "missing_from_printed": [["b", "3a+2b+3c"], ["b", "4a+3b+4c"]],
        "extra_in_printed": [
            ["b", "16a+12b+19c"],  # -(d1, d3) = 14
            ["2b+c", "5a+4b+5c"],  # these meet the c mirror ultraparallel: -(c, d3) > 2
            ["2b+c", "6a+5b+6c"],
            ["2b+c", "7a+6b+7c"],
            ["2b+c", "8a+7b+8c"],
            ["2b+c", "9a+8b+9c"],
            ["2b+c", "10a+9b+10c"],
            ["2b+c", "11a+10b+11c"],
            ["3b+2c", "5a+4b+5c"],
            ["5b+4c", "3a+2b+3c"],  # -(d1, d3) = 14
        ],
    },
}


def record(num, ok, what, elapsed, limit):
    status = "PASS" if ok and elapsed < limit else "FAIL"
    line = f"[{status}] criterion {num}: {what} ({elapsed:.2f}s, limit {limit:g}s)"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return status == "PASS"


def info(text):
    line = f"       info: {text}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def test_criterion_1_reflections():
    t0 = time.perf_counter()
    checks = [
        reflect(C, B) == (0, 1, 2),  # b + 2c
        reflect((0, 1, 2), A) == (1, 2, 4),  # a + 2b + 4c
        reflect(B, C) == (0, 2, 1),  # 2b + c
        reflect((0, 2, 1), (0, -1, 0)) == (0, 3, 2),  # family continues: 3b + 2c
        reflect((0, 3, 2), (0, -2, -1)) == (0, 4, 3),  # 4b + 3c
        reflect((0, 3, 2), A) == (1, 6, 4),  # a + 6b + 4c
        reflect((1, 6, 4), (0, -3, -2)) == (2, 9, 6),  # 2a + 9b + 6c
    ]
    ok = all(checks)
    assert record(1, ok, f"worked reflections {sum(checks)}/{len(checks)} exact", time.perf_counter() - t0, 1)


def test_criterion_2_step1_lists():
    t0 = time.perf_counter()
    fixture = load_printed_lists()
    report = diff_triples(fixture)
    a_exact = not report["a"]["missing_from_printed"] and not report["a"]["extra_in_printed"]

    d1 = list(islice(_end_candidates("a", "c"), 7))
    d3 = list(islice(_end_candidates("a", "b"), 9))
    forms = all(
        d1[n + 1] == (n, n + 1, 2 * (n + 1)) and d3[n + 3] == (n + 1, 3 * n + 6, 2 * n + 4)
        for n in range(6)
    )
    documented = all(
        report[k]["missing_from_printed"] == DOCUMENTED[k]["missing_from_printed"]
        and report[k]["extra_in_printed"] == DOCUMENTED[k]["extra_in_printed"]
        for k in "abc"
    )
    # every documented exception is backed by the constraint it breaks
    grounds = True
    for x, y in DOCUMENTED["b"]["extra_in_printed"] + DOCUMENTED["c"]["extra_in_printed"]:
        u, v = parse_vec(x), parse_vec(y)
        mid = B if [x, y] in DOCUMENTED["b"]["extra_in_printed"] else C
        g = -inner(u, v)
        grounds &= g < 0 or g >= 14 or -inner(v, mid) > 2 or -inner(u, mid) > 2
    computed = sum(r["computed"] for r in report.values())
    printed = sum(r["printed"] for r in report.values())
    ok = a_exact and forms and documented and grounds
    assert record(
        2,
        ok,
        f"delta2=a list exact={a_exact}, closed forms n=0..5={forms}, other lists within documented exceptions={documented and grounds}",
        time.perf_counter() - t0,
        10,
    )
    info(f"triples computed {computed} (a={report['a']['computed']}, b={report['b']['computed']}, c={report['c']['computed']}); printed lists hold {printed}; stated total 115")


def test_criterion_3_twists():
    t0 = time.perf_counter()
    sols = solve_twists(2, 4, 2)
    printed = [(1, 1, 1), (1, 1, 2), (1, 2, 1), (1, 2, 2), (1, 2, 4), (2, 1, 1), (2, 1, 2), (2, 2, 1), (4, 2, 1)]
    footer = f"Number of solutions {len(sols)}"
    ok = sols == printed and footer == "Number of solutions 9"
    assert record(3, ok, f"solve_twists(2,4,2) equals the 9 printed triples; '{footer}'", time.perf_counter() - t0, 1)


def test_criterion_4_oracles():
    t0 = time.perf_counter()
    step1 = all(
        sorted((t.delta1, t.delta3) for t in enumerate_triples(n))
        == sorted((t.delta1, t.delta3) for t in enumerate_triples_bruteforce(n, coeff_bound=40))
        for n in "abc"
    )
    step2 = True
    for g in product(range(1, 7), repeat=3):
        boxes = [lcm(g[0], g[1]), lcm(g[0], g[2]), lcm(g[1], g[2])]
        divs = [[d for d in range(1, b + 1) if b % d == 0] for b in boxes]
        ref = sorted(l for l in product(*divs) if gcd(*l) == 1 and check_valuations(l, g))
        step2 &= solve_twists(*g) == ref
    assert record(4, step1 and step2, f"walk == box oracle for a,b,c: {step1}; divisibility == valuations on 216 g: {step2}", time.perf_counter() - t0, 60)


def test_criterion_5_weyl():
    t0 = time.perf_counter()
    w = solve_weyl((C, A, B), (1, 1, 1))
    exact = (
        w.coords == (2, Fraction(9, 2), 5)
        and w.norm == Fraction(-23, 2)
        and all(inner(w.coords, d) == -1 for d in (C, A, B))
    )
    rng = random.Random(2024)
    triples = [t for n in "abc" for t in enumerate_triples(n)]
    linear = True
    for _ in range(100):
        t = rng.choice(triples)
        lam = tuple(rng.randint(1, 12) for _ in range(3))
        k = rng.randint(2, 12)
        base = solve_weyl(t, lam)
        scaled = solve_weyl(t, tuple(k * x for x in lam))
        linear &= scaled.coords == tuple(k * x for x in base.coords)
        linear &= all(inner(base.coords, d) == -l for d, l in zip(t.deltas, lam))
    assert record(5, exact and linear, f"rho = 2a + 9/2 b + 5c, (rho,rho) = -23/2 by back-substitution: {exact}; linearity on 100 inputs: {linear}", time.perf_counter() - t0, 5)


def test_criterion_6_extension():
    t0 = time.perf_counter()
    c = extend_polygon(seed_from_triple((A, B, C), (1, 1, 1)))
    closed = c.status == "closed" and c.n == 3 and c.realization.rows == [[1, 1, 1], [0, 2, 1]]
    _, b = symmetrize(twist(gram_of(c.deltas), c.lambdas))
    hyper = is_hyperbolic(b)
    # 4x4 Gram determinants of extension quadruples from a batch of seeds
    zero = True
    quads = 0
    for t in enumerate_triples("a")[:6]:
        for lam in solve_twists(*t.g):
            found, _ = enumerate_polygons(seed_from_triple(t, lam))
            for p in found:
                for d in p.deltas[3:]:
                    zero &= gram_det(p.deltas[:3] + (d,)) == 0
                    quads += 1
    assert record(6, closed and hyper and zero and quads > 0, f"triangle closes, n=3, G(A)=[[1,1,1],[0,2,1]]: {closed}; hyperbolic: {hyper}; {quads} quadruple determinants all 0: {zero}", time.perf_counter() - t0, 5)


def test_criterion_7_lambda_bound():
    t0 = time.perf_counter()
    r = run_pipeline(PipelineConfig())
    s = r.summary
    lams = [l for c in r.closed for l in c.lambdas]
    ok = bool(r.closed) and all(l <= 12 for l in lams) and s["all_lambda_le_12"] is True and "all_lambda_le_6" in s
    assert record(7, ok, f"{s['closed_polygons']} closed polygons, all lambda <= 12: {s['all_lambda_le_12']}; reported all lambda <= 6: {s['all_lambda_le_6']}", time.perf_counter() - t0, 600)
    info(f"max lambda {s['max_lambda']}; distinct G(A) up to rotation/reflection {s['distinct_realizations']}; compact {s['compact_polygons']}; untwisted polygons {s['untwisted_polygons']}; by sides {s['closed_by_sides']}")


def _dump(result):
    return json.dumps([c.to_dict() for c in result.candidates]) + json.dumps(result.summary)


def test_criterion_8_determinism():
    t0 = time.perf_counter()
    one = _dump(run_pipeline(PipelineConfig(workers=1)))
    many = _dump(run_pipeline(PipelineConfig(workers=3)))
    assert record(8, one == many, f"workers=1 and workers=3 outputs byte-identical ({len(one)} bytes)", time.perf_counter() - t0, 1200)


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_criterion"):
            try:
                fn()
            except AssertionError:
                pass
