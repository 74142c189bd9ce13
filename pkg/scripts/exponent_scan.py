"""Fitted tail exponents of S and P against the predicted -(2m+1), -(2 m_bar+1).

Scans the family order m and width a0, plus a few random superpositions whose
order is set by their lowest component.  Output is a CSV on stdout.
"""
import argparse
import csv
import sys

import numpy as np

from freedecay import Interval, compare, make_family_packet, make_superposition


def random_packet(rng, m_min):
    comps = [make_family_packet(int(rng.integers(m_min, m_min + 3)), float(rng.uniform(0.7, 1.5)), 0.0,
                                float(rng.uniform(-1, 1))) for _ in range(3)]
    comps[0] = make_family_packet(m_min, 1.0, 0.0, float(rng.uniform(-1, 1)))
    weights = rng.normal(size=3) + 1j * rng.normal(size=3)
    return make_superposition(comps, list(weights))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m-max", type=int, default=4)
    ap.add_argument("--a0", default="0.5,1,2")
    ap.add_argument("--t-max", type=float, default=1e4, help="largest reduced time")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    times = np.logspace(-1, np.log10(args.t_max), 100)
    w = csv.writer(sys.stdout)
    w.writerow(["packet", "m", "m_bar", "pred_S", "fit_S", "pred_P", "fit_P", "ratio_S", "ratio_P"])
    packets = [make_family_packet(m, float(a0), 0.0, 0.0)
               for m in range(args.m_max + 1) for a0 in args.a0.split(",")]
    rng = np.random.default_rng(args.seed)
    packets += [random_packet(rng, m) for m in range(min(args.m_max, 3) + 1)]
    for p in packets:
        interval = Interval(-2 * p.a0_ref, 2 * p.a0_ref)
        r = compare(p, interval, times)
        w.writerow([p.describe(), r.profile.m, r.profile.m_bar,
                    r.predicted_exponent_S, f"{r.fitted_S.exponent:.5f}",
                    r.predicted_exponent_P, f"{r.fitted_P.exponent:.5f}",
                    f"{r.coefficient_ratios[0]:.5f}", f"{r.coefficient_ratios[1]:.5f}"])


if __name__ == "__main__":
    main()
