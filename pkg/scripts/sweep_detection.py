"""Sweep the detection point and report |det X| and gate accuracy at each value.

    python3 scripts/sweep_detection.py --range 30:70:5 --out sweep.csv
"""

import argparse

from kdv_reservoir.config import load_config
from kdv_reservoir.experiment import parse_range, sweep, write_sweep_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--config", default=None)
    ap.add_argument("--range", default="30:70:5")
    ap.add_argument("--out", default="sweep_xd.csv")
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    rows = sweep(load_config(args.config), "x_D", parse_range(args.range), threads=args.threads)
    write_sweep_csv(rows, args.out)
    for r in rows:
        print(f"x_D={r['value']:6.2f}  |det|={r['abs_det']:.4g}  accuracy={r['accuracy']:.2f}  {r['status']}")


if __name__ == "__main__":
    main()
