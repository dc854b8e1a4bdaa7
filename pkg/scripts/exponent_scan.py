#!/usr/bin/env python3
"""Growth-law experiment: support-function estimates vs N for several p.

Writes one output directory per p with scan.csv / fit.json / plotdata.csv,
then prints a summary table of fitted exponents against 1/p.

Usage: python scripts/exponent_scan.py [--n 30] [--trials 200] [--out runs/exponents]
"""

import argparse
import json
from pathlib import Path

from orlicz_polytope.cli import main as cli_main


def run(n: int, trials: int, out: Path, seed: int, threads: int) -> None:
    grid = []
    for N in (100, 1000, 10**4, 10**5, 10**6):
        grid += ["--N", str(N)]
    summary = []
    for p in ("1", "2", "4"):
        dest = out / f"p{p}"
        code = cli_main(
            ["scan", "--p", p, "--n", str(n), *grid,
             "--trials", str(trials), "--seed", str(seed),
             "--threads", str(threads), "--out", str(dest)]
        )
        if code != 0:
            raise SystemExit(code)
        fit = json.loads((dest / "fit.json").read_text())
        summary.append((p, fit["exponent"], fit["r2"]))
    print(f"{'p':>4} {'exponent':>10} {'1/p':>6} {'r2':>8}")
    for p, exponent, r2 in summary:
        print(f"{p:>4} {exponent:>10.4f} {1 / float(p):>6.3f} {r2:>8.5f}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=30)
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=2)
    ap.add_argument("--out", type=Path, default=Path("runs/exponents"))
    args = ap.parse_args()
    run(args.n, args.trials, args.out, args.seed, args.threads)
