"""Sweep the fixed-point and trace laws and print a summary table.

With --mutant, the sweep is repeated with a deliberately wrong fixed-point
operator (it returns the last fixed point in scan order rather than
iterating from bottom) to show which laws notice.
"""

import argparse
import time

from causalcirc.domain import MonotoneFn
from causalcirc.laws import LawConfig, run_laws


def greatest_style_mu(f: MonotoneFn, split: int) -> MonotoneFn:
    ctx, loop = f.dom[:split], f.dom[split:]

    def solve(a):
        for x in reversed(list(loop.tuples())):
            if f.fn(a + x) == x:
                return x
        raise AssertionError("a monotone loop must have a fixed point")

    return MonotoneFn(ctx, f.cod, solve)


def sweep(cfg: LawConfig, label: str) -> None:
    t0 = time.perf_counter()
    results = run_laws(cfg)
    elapsed = time.perf_counter() - t0
    print(f"-- {label} ({elapsed:.1f}s) --")
    for res in results:
        modes = sorted({cr.mode for cr in res.combos})
        mark = "ok" if res.passed else "FAIL"
        print(f"  {res.law:<18} {len(res.combos):>3} combos "
              f"{res.cases:>9} cases  [{', '.join(modes)}]  {mark}")
        cx = res.first_counterexample()
        if cx is not None:
            print(f"    first counterexample: {cx}")
    print()


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--cap", type=int, default=60_000,
                    help="exhaustive pair cap; larger combos are sampled")
    ap.add_argument("--budget", type=int, default=10**6)
    ap.add_argument("--samples", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--mutant", action="store_true",
                    help="also sweep with a wrong fixed-point operator")
    args = ap.parse_args()

    base = LawConfig(budget=args.budget, pair_budget=args.cap,
                     samples=args.samples, seed=args.seed)
    sweep(base, "least fixed point")
    if args.mutant:
        bad = LawConfig(budget=args.budget, pair_budget=min(args.cap, 2000),
                        samples=min(args.samples, 40), seed=args.seed,
                        mu=greatest_style_mu)
        sweep(bad, "mutant: last fixed point in scan order")


if __name__ == "__main__":
    main()
