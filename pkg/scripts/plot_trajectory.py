"""Space-time heat map of a trajectory CSV written by ``kdv-reservoir simulate``.

    python3 scripts/plot_trajectory.py traj.csv --out traj.png [--x-d 50]
"""

import argparse

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from kdv_reservoir.solver import read_trajectory_csv  # noqa: E402


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("csv")
    ap.add_argument("--out", required=True)
    ap.add_argument("--x-d", type=float, default=None, help="mark the detection point")
    args = ap.parse_args()

    x, t, u = read_trajectory_csv(args.csv)
    fig, ax = plt.subplots(figsize=(8, 5))
    mesh = ax.pcolormesh(x, t, u, shading="auto", cmap="viridis")
    fig.colorbar(mesh, ax=ax, label="u")
    if args.x_d is not None:
        ax.axvline(args.x_d, color="w", ls="--", lw=0.8)
    ax.set_xlabel("x")
    ax.set_ylabel("t")
    fig.tight_layout()
    fig.savefig(args.out, dpi=150)


if __name__ == "__main__":
    main()
