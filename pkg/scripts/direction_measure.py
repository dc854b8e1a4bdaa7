#!/usr/bin/env python3
"""Direction-measure experiment: how many directions satisfy the calibrated
two-sided bounds on the expected support function.

Usage: python scripts/direction_measure.py [--p 1] [--n 15] [--N 1000] [--r 1.0]
"""

import argparse
import json
from pathlib import Path

from orlicz_polytope.cli import main as cli_main


def run(p: str, n: int, N: int, r: float, dirs: int, out: Path, seed: int) -> None:
    code = cli_main(
        ["directions", "--p", p, "--n", str(n), "--N", str(N),
         "--r", str(r), "--dirs", str(dirs), "--seed", str(seed), "--out", str(out)]
    )
    if code != 0:
        raise SystemExit(code)
    summary = json.loads((out / "summary.json").read_text())
    print(
        f"upper-bound measure {summary['fraction_upper']:.4f} "
        f"(predicted order {summary['predicted_upper_measure']:.4f}); "
        f"lower-bound measure {summary['fraction_lower']:.4f} "
        f"(predicted order {summary['predicted_lower_measure']:.4f})"
    )


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--p", default="1")
    ap.add_argument("--n", type=int, default=15)
    ap.add_argument("--N", type=int, default=1000)
    ap.add_argument("--r", type=float, default=1.0)
    ap.add_argument("--dirs", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", type=Path, default=Path("runs/directions"))
    args = ap.parse_args()
    run(args.p, args.n, args.N, args.r, args.dirs, args.out, args.seed)
