#!/usr/bin/env python3
"""Generate reference cases for the exact accumulator.

Each output line is:  expected_sum<TAB>addend addend ...
with every double rendered via float.hex() so the C++ side can reproduce the
bit patterns exactly. The expected sum is the true rational sum of the
addends (computed with fractions.Fraction, which is exact) rounded once to
the nearest double; float(Fraction) performs that rounding correctly.
"""

import random
from fractions import Fraction
from pathlib import Path

OUT = Path(__file__).resolve().parents[2] / "tests" / "fixtures" / "exactsum_cases.tsv"
SEED = 902140

def exact_sum(xs):
    return float(sum((Fraction(x) for x in xs), Fraction(0)))

def main():
    rng = random.Random(SEED)
    cases = []

    # Crafted rounding boundaries: ties to even, sticky-bit tie breaks,
    # exact cancellation, subnormal-scale operands.
    cases.append([1.0, 2.0 ** -53])                    # tie -> stays 1.0
    cases.append([1.0, 2.0 ** -53, 2.0 ** -105])       # sticky breaks tie up
    cases.append([1.0, 2.0 ** -52, 2.0 ** -53])        # tie at odd mantissa
    cases.append([1.0, -(2.0 ** -54)])
    cases.append([1.0, 2.0 ** -60, -1.0])              # cancellation leaves 2^-60
    cases.append([0.1] * 10)
    cases.append([5e-324, 5e-324, 5e-324])
    cases.append([2.0 ** -1050, -(2.0 ** -1074)])
    cases.append([1e80, 1.0, -1e80])                   # absorbed then recovered
    cases.append([3.5, -3.5, 1e-300, -1e-300])         # sums to exactly zero

    # Realistic regime: normalized scores in [-1, 1].
    for _ in range(20):
        n = rng.randint(1, 200)
        cases.append([rng.uniform(-1.0, 1.0) for _ in range(n)])

    # Mixed magnitudes.
    for _ in range(15):
        n = rng.randint(2, 60)
        cases.append([rng.uniform(-1.0, 1.0) * 2.0 ** rng.randint(-40, 40)
                      for _ in range(n)])

    # Heavy cancellation: pairs (x, -x) shuffled together with small noise.
    for _ in range(10):
        xs = []
        for _ in range(rng.randint(1, 20)):
            x = rng.uniform(-1.0, 1.0) * 2.0 ** rng.randint(0, 30)
            xs += [x, -x]
        xs += [rng.uniform(-1.0, 1.0) * 2.0 ** rng.randint(-60, -30)
               for _ in range(rng.randint(0, 5))]
        rng.shuffle(xs)
        cases.append(xs)

    # Wide dynamic range within one sum.
    for _ in range(10):
        xs = [rng.uniform(-1.0, 1.0) * 2.0 ** e
              for e in rng.sample(range(-1000, 80), rng.randint(2, 12))]
        cases.append(xs)

    lines = []
    for xs in cases:
        lines.append(exact_sum(xs).hex() + "\t" + " ".join(x.hex() for x in xs))
    OUT.write_text("\n".join(lines) + "\n")
    print(f"wrote {len(cases)} cases to {OUT}")

if __name__ == "__main__":
    main()
