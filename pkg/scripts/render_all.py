"""Render every closed polygon of a candidates.json to SVG files."""

import argparse
import json
import os

from gcm3.render import render_svg
from gcm3.search import PolygonCandidate, label_of


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("candidates", nargs="?", default="results/candidates.json")
    ap.add_argument("--out", default="results/svg")
    args = ap.parse_args()
    with open(args.candidates) as fh:
        data = json.load(fh)["candidates"]
    os.makedirs(args.out, exist_ok=True)
    k = 0
    for d in data:
        c = PolygonCandidate.from_dict(d)
        if c.status != "closed":
            continue
        svg = render_svg(c.deltas, c.weyl.coords, title=", ".join(label_of(x) for x in c.deltas))
        with open(os.path.join(args.out, f"polygon_{k:03d}_n{c.n}.svg"), "w") as fh:
            fh.write(svg)
        k += 1
    print(f"wrote {k} files to {args.out}")


if __name__ == "__main__":
    main()
