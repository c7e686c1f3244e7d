"""Perfect and stable Grothendieck groups of the catalog algebras."""
import argparse
import time

from katohull import catalog
from katohull.grothendieck import PERFECT, STABLE, build_pool, g0

NAMES = ["a2", "dual", "cyclic", "a3r2", "a3"]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--dim-cap", type=int, default=12)
    args = ap.parse_args()
    print(f"{'algebra':<18}{'pool':>5}  {'perfect':<10}{'stable':<10}stamps   seconds")
    for name in NAMES:
        t0 = time.perf_counter()
        alg = catalog.by_name(name)
        pool = build_pool(alg, dim_cap=args.dim_cap, seed=args.seed)
        gp = g0(alg, PERFECT, seed=args.seed, pool=pool)
        gs = g0(alg, STABLE, seed=args.seed, pool=pool)
        dt = time.perf_counter() - t0
        print(f"{alg.name:<18}{len(pool):>5}  {gp.describe():<10}{gs.describe():<10}"
              f"{gp.stamp[0]}/{gs.stamp[0]}      {dt:.1f}")


if __name__ == "__main__":
    main()
