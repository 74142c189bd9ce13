"""Regenerate the three figure datasets (phi0, phi1, phi2 on [-2, 2]) and print the fits.

    python3 scripts/reproduce_figures.py --outdir out/figures
"""
import argparse
import sys

from freedecay import cli


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--outdir", default="out/figures")
    args = ap.parse_args()
    worst = 0
    for fig in ("fig1a", "fig1b", "fig2"):
        print(f"== {fig}")
        code = cli.main(["reproduce", fig, "--outdir", args.outdir])
        worst = max(worst, code)
        print()
    return worst


if __name__ == "__main__":
    sys.exit(main())
