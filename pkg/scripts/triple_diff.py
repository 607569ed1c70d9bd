"""Compare the computed Step 1 triples with the printed lists, entry by entry,
with the constraint values that explain each disagreement."""

from gcm3.lattice import SIMPLE, inner, parse_vec
from gcm3.search import diff_triples, load_printed_lists


def main():
    fixture = load_printed_lists()
    report = diff_triples(fixture)
    for name, r in report.items():
        d2 = SIMPLE[name]
        print(f"delta2 = {name}: computed {r['computed']}, printed {r['printed']}")
        for tag, rows in (("computed only", r["missing_from_printed"]), ("printed only", r["extra_in_printed"])):
            for x, y in rows:
                u, v = parse_vec(x), parse_vec(y)
                print(
                    f"  {tag:14s} ({x}, {y}):  -(d1,d2)={-inner(u, d2)}  -(d2,d3)={-inner(d2, v)}  -(d1,d3)={-inner(u, v)}"
                )
    total = sum(r["computed"] for r in report.values())
    printed = sum(r["printed"] for r in report.values())
    print(f"total computed {total}, printed {printed}, stated {fixture['claimed_total']}")


if __name__ == "__main__":
    main()
