#!/usr/bin/env python3
"""Empirical complexity of a norm-one linear class as the sample grows.

Shows the 1/sqrt(n) decay against the closed-form l2 bound: for each n it
samples inputs on the unit sphere, evaluates the induced class exactly (or by
Monte Carlo above the enumeration cap), and emits the (n, value) curve.
"""

import argparse

from genbound.cli import emit_curve
from genbound.complexity import empirical_rademacher, empirical_rademacher_mc
from genbound.core import DEFAULT_SIGN_CAP, derive_seed
from genbound.linear import L2Ball, l2_bound, random_linear_instance


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=3)
    parser.add_argument("--d", type=int, default=4)
    parser.add_argument("--m", type=int, default=16)
    parser.add_argument("--max-n", type=int, default=24)
    parser.add_argument("--draws", type=int, default=50_000)
    parser.add_argument("--out", default="complexity_vs_n.csv")
    args = parser.parse_args()

    rows = []
    for n in range(1, args.max_n + 1):
        instance = random_linear_instance(
            derive_seed(args.seed, f"n:{n}"), L2Ball(1.0, 1.0), args.d, n, args.m
        )
        cls = instance.evaluated_class()
        if n <= DEFAULT_SIGN_CAP:
            result = empirical_rademacher(cls)
        else:
            result = empirical_rademacher_mc(cls, args.draws, derive_seed(args.seed, f"mc:{n}"))
        bound = l2_bound(1.0, 1.0, n)
        rows.append(
            {
                "kind": "rademacher",
                "x": n,
                "value": result.value,
                "method": result.method.value,
                "seed": result.seed,
                "bound": bound,
                "std_error": result.std_error,
            }
        )
        print(f"n={n:3d} value={result.value:.6f} l2_bound={bound:.6f} ({result.method.value})")
    emit_curve(rows, args.out)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
