"""How the closed set responds to the lambda cap and the side limit.

Raising either bound past the defaults is the check that the default run is
not truncated; the closed-polygon set should stop changing.
"""

import time

from gcm3.search import PipelineConfig, default_workers, run_pipeline


def main():
    base = None
    print("lambda_cap max_sides  closed distinct max_lambda  same_as_default  secs")
    for cap, sides in ((2, 20), (4, 20), (6, 20), (12, 20), (12, 30), (24, 30)):
        t0 = time.perf_counter()
        r = run_pipeline(PipelineConfig(lambda_cap=cap, max_sides=sides, workers=default_workers()))
        keys = {c.dihedral_key() for c in r.closed}
        if (cap, sides) == (12, 20):
            base = keys
        s = r.summary
        same = "-" if base is None else str(keys == base)
        print(f"{cap:10d} {sides:9d} {s['closed_polygons']:7d} {s['distinct_realizations']:8d} {str(s['max_lambda']):>10s}  {same:>15s}  {time.perf_counter() - t0:5.1f}")


if __name__ == "__main__":
    main()
