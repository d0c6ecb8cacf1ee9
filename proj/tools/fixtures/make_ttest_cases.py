#!/usr/bin/env python3
"""Generate reference fixtures for the t-test and Student-t CDF.

Outputs (all doubles rendered with float.hex() for exact round-trips):
  tests/fixtures/ttest_samples.tsv
      n  mu0  t  p_two_sided  p_one_sided  mean  sd  <samples...>
  tests/fixtures/student_p.tsv
      t  df  p_two_sided

References are computed with mpmath at 60 significant digits from the exact
double-precision inputs, then rounded once to double.
"""

import random
from pathlib import Path

import mpmath as mp

mp.mp.dps = 60

FIXTURES = Path(__file__).resolve().parents[2] / "tests" / "fixtures"
SEED = 771203


def two_sided_p(t, df):
    t = mp.mpf(t)
    df = mp.mpf(df)
    x = df / (df + t * t)
    return mp.betainc(df / 2, mp.mpf(1) / 2, 0, x, regularized=True)


def reference(samples, mu0):
    xs = [mp.mpf(x) for x in samples]  # mpf(float) is exact
    n = len(xs)
    mean = mp.fsum(xs) / n
    m2 = mp.fsum((x - mean) ** 2 for x in xs)
    sd = mp.sqrt(m2 / (n - 1))
    t = (mean - mp.mpf(mu0)) / (sd / mp.sqrt(n))
    p = two_sided_p(t, n - 1)
    one_sided = p / 2 if t < 0 else 1 - p / 2
    return t, p, one_sided, mean, sd


def main():
    rng = random.Random(SEED)

    cases = [
        ([1.0, 2.0, 3.0, 4.0, 5.0], 0.0),
        ([-1.0, 0.0, 1.0], 0.0),
        # Strongly negative sample: the directional (left-tailed) regime.
        ([rng.gauss(-0.3, 0.4) for _ in range(120)], 0.0),
    ]
    # 100 random Gaussian samples, n in [5, 500].
    for _ in range(100):
        n = rng.randint(5, 500)
        mu = rng.uniform(-0.6, 0.6)
        sigma = rng.uniform(0.05, 1.5)
        mu0 = 0.0 if rng.random() < 0.7 else rng.uniform(-0.2, 0.2)
        cases.append(([rng.gauss(mu, sigma) for _ in range(n)], mu0))

    lines = []
    for samples, mu0 in cases:
        t, p, one_sided, mean, sd = reference(samples, mu0)
        lines.append("\t".join([
            str(len(samples)),
            float(mu0).hex(),
            float(t).hex(),
            float(p).hex(),
            float(one_sided).hex(),
            float(mean).hex(),
            float(sd).hex(),
            " ".join(x.hex() for x in samples),
        ]))
    (FIXTURES / "ttest_samples.tsv").write_text("\n".join(lines) + "\n")

    t_values = [0.0, 1e-8, 0.5, -0.5, 1.0, -2.1, 4.242640687119285, 10.0, -25.4, 100.0]
    df_values = [1, 2, 4, 7, 30, 100, 299, 2785, 7905]
    rows = []
    for t in t_values:
        for df in df_values:
            p = two_sided_p(t, df)
            rows.append(f"{t.hex()}\t{df}\t{float(p).hex()}")
    (FIXTURES / "student_p.tsv").write_text("\n".join(rows) + "\n")

    print(f"wrote {len(cases)} sample cases and {len(rows)} CDF points")


if __name__ == "__main__":
    main()
