"""Analyse every fixture and print a one-line summary with wall time."""

import sys
import time
from pathlib import Path

from diracgb.dirac import analyze
from diracgb.frontend import parse_problem

ROOT = Path(__file__).resolve().parent.parent


def main(paths):
    paths = [Path(p) for p in paths] or sorted((ROOT / "fixtures").glob("*.dg"))
    for path in paths:
        _, system = parse_problem(path.read_text())
        t0 = time.perf_counter()
        r = analyze(system)
        dt = time.perf_counter() - t0
        print(
            f"{path.name:28s} {r.status:12s} primary={len(r.primary):2d} complete={len(r.complete):2d} "
            f"rank={r.rank if r.matrix else 0:2d} first={len(r.first_class):2d} second={len(r.second_class):2d} "
            f"{dt:7.3f}s"
        )


if __name__ == "__main__":
    main(sys.argv[1:])
