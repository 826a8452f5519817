"""Write generated gauge-mechanics problem files into fixtures/.

    python scripts/generate_benchmark.py [--seed N] [--matter K] [--gauge-mass]
"""

import argparse
from pathlib import Path

from diracgb.benchmark import gauge_mechanics_problem

ROOT = Path(__file__).resolve().parent.parent


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--matter", type=int, default=1, help="number of isovector matter fields")
    ap.add_argument("--gauge-mass", action="store_true")
    ap.add_argument("--out", type=Path, default=None)
    args = ap.parse_args()
    text = gauge_mechanics_problem(args.seed, args.matter, args.gauge_mass)
    suffix = "m" if args.gauge_mass else ""
    out = args.out or ROOT / "fixtures" / f"gauge_s{args.seed}_n{args.matter}{suffix}.dg"
    out.write_text(text)
    print(out)


if __name__ == "__main__":
    main()
