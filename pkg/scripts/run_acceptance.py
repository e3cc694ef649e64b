#!/usr/bin/env python3
"""Run every verification suite through the CLI and summarize exit codes.

    python3 scripts/run_acceptance.py [--outdir DIR] [--seed N]
"""

import argparse
import contextlib
import io
import sys
import time
from pathlib import Path

from schoberlab.cli import run

SUITES = [
    ("ic", ["verify", "ic", "--n", "2", "3", "4", "5"]),
    ("ic-n1", ["verify", "ic", "--n", "1"]),
    ("elliptic", ["verify", "elliptic"]),
    ("hrr", ["verify", "hrr", "--nmax", "6", "--kmax", "3"]),
    ("pairing", ["verify", "pairing", "--nmax", "6"]),
    ("window", ["verify", "window", "--n", "1", "2", "3", "--kmax", "3"]),
    ("braid", ["verify", "braid", "--n", "3", "--trials", "100"]),
    ("mf", ["verify", "mf"]),
]


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--outdir", type=Path, default=None, help="save each JSON report here")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if args.outdir:
        args.outdir.mkdir(parents=True, exist_ok=True)

    worst = 0
    for name, argv in SUITES:
        argv = argv + ["--seed", str(args.seed)]
        if args.outdir:
            argv += ["--output", str(args.outdir / f"{name}.json")]
        start = time.perf_counter()
        with contextlib.redirect_stdout(io.StringIO()):
            code = run(argv)
        print(f"{name:10s} exit={code} {time.perf_counter() - start:6.2f}s")
        worst = max(worst, code)
    return worst


if __name__ == "__main__":
    sys.exit(main())
