"""Run the full four-step sweep and write candidates + summary.

    python scripts/run_pipeline.py --out results/ --lambda-cap 12 --workers 4
"""

import argparse
import json
import os
import time

from gcm3.cli import candidates_csv
from gcm3.search import PipelineConfig, default_workers, run_pipeline


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results")
    ap.add_argument("--cross-bound", type=int, default=14)
    ap.add_argument("--lambda-cap", type=int, default=12)
    ap.add_argument("--coeff-bound", type=int, default=None)
    ap.add_argument("--max-sides", type=int, default=20)
    ap.add_argument("--workers", type=int, default=default_workers())
    args = ap.parse_args()

    cfg = PipelineConfig(args.cross_bound, args.lambda_cap, args.coeff_bound, args.max_sides, args.workers)
    t0 = time.perf_counter()
    res = run_pipeline(cfg)
    dt = time.perf_counter() - t0
    os.makedirs(args.out, exist_ok=True)
    with open(os.path.join(args.out, "candidates.json"), "w") as fh:
        json.dump({"candidates": [c.to_dict() for c in res.candidates]}, fh, indent=1)
    with open(os.path.join(args.out, "candidates.csv"), "w") as fh:
        fh.write(candidates_csv(res.candidates))
    with open(os.path.join(args.out, "summary.json"), "w") as fh:
        json.dump(res.summary, fh, indent=1)
    print(json.dumps(res.summary, indent=1))
    print(f"{dt:.1f}s")


if __name__ == "__main__":
    main()
