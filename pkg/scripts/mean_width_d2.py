#!/usr/bin/env python3
"""Mean-width experiment for the volume-1 Euclidean ball.

Fits estimate^2 against log N (the square-log law) and reports how the
Monte Carlo oracle tracks the Orlicz curve.

Usage: python scripts/mean_width_d2.py [--n 30] [--trials 30] [--out runs/meanwidth]
"""

import argparse
import json
from pathlib import Path

from orlicz_polytope.cli import main as cli_main


def run(n: int, trials: int, dirs: int, out: Path, seed: int, threads: int) -> None:
    grid = []
    for N in (100, 1000, 10**4, 10**5, 10**6):
        grid += ["--N", str(N)]
    code = cli_main(
        ["meanwidth", "--p", "2", "--n", str(n), *grid,
         "--trials", str(trials), "--dirs", str(dirs),
         "--seed", str(seed), "--threads", str(threads), "--out", str(out)]
    )
    if code != 0:
        raise SystemExit(code)
    fit = json.loads((out / "fit.json").read_text())
    print(f"slope {fit['exponent']:.5f}  r2 {fit['r2']:.5f}  (see {out}/scan.csv)")


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=30)
    ap.add_argument("--trials", type=int, default=30)
    ap.add_argument("--dirs", type=int, default=32)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=2)
    ap.add_argument("--out", type=Path, default=Path("runs/meanwidth"))
    args = ap.parse_args()
    run(args.n, args.trials, args.dirs, args.out, args.seed, args.threads)
