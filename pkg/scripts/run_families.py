#!/usr/bin/env python3
"""Sweep the polygon / anti-prism families and tabulate minimum guesswork.

For each M and height fraction the table shows the QAP objective from the
benevolent fast path, the exhaustive check, and the resulting guesswork under
the identity cost.

Usage:
    python scripts/run_families.py [--m-max 8]
"""

import argparse
import math

from guesswork import (
    QapInstance,
    antiprism_h_bound,
    benevolent_solve,
    bloch_gram,
    brute_force_solve,
    cost_gram,
    generate_polygon_antiprism,
    identity_cost,
    min_guesswork_qubit,
)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--m-max", type=int, default=8)
    args = parser.parse_args()

    header = f"{'M':>2} {'h':>10} {'objective':>12} {'brute':>12} {'guesswork':>12} {'method':>11}"
    print(header)
    print("-" * len(header))
    for m in range(3, args.m_max + 1):
        bound = antiprism_h_bound(m)
        heights = sorted({0.0, bound / 2, bound})
        for h in heights:
            e = generate_polygon_antiprism(m, h=h)
            c = identity_cost(m)
            fast = benevolent_solve(c, bloch_gram(e))
            objective = fast[1] if fast else math.nan
            _, brute = brute_force_solve(QapInstance(cost_gram(c), bloch_gram(e)))
            report = min_guesswork_qubit(e, c)
            print(
                f"{m:>2} {h:>10.6f} {objective:>12.8f} {brute:>12.8f} "
                f"{report.value:>12.8f} {report.method:>11}"
            )


if __name__ == "__main__":
    main()
