"""
Plot a benchmark sweep CSV: one panel per instance family, welfare
columns against whichever of the cost level or the prior the grid sweeps.

Usage:
    persuasion-toolkit benchmark --grid fig1 --out fig1.csv
    python docs/plot_sweep.py fig1.csv --out fig1.png

Needs the `plot` extra (matplotlib).
"""

import argparse
import sys
from pathlib import Path
from typing import List

import pandas as pd

from app.core.bench import CSV_COLUMNS
from monitoring.logging.config import get_logger, setup_logging

logger = get_logger("persuasion_toolkit.plot_sweep")

SERIES = {
    "w_noinfo": "no information",
    "w_fullinfo": "full information",
    "w_public": "optimal public",
    "w_private": "optimal private",
    "w_socialopt": "social optimum",
}
GROUP_KEYS = ["cost_family", "alpha", "r", "mu1", "n_agents"]
AXIS_LABELS = {"r": "cost level r", "mu1": "prior of the good state"}


def load_sweep(path: Path) -> pd.DataFrame:
    frame = pd.read_csv(path)
    missing = [c for c in CSV_COLUMNS if c not in frame.columns]
    if missing:
        raise ValueError(f"{path} is not a sweep CSV, missing columns {missing}")
    return frame


def sweep_axis(frame: pd.DataFrame) -> str:
    """The swept column: the prior when it varies, else the cost level"""
    if frame["mu1"].nunique() > 1:
        return "mu1"
    if frame["r"].nunique() > 1:
        return "r"
    return "mu1"


def panel_keys(axis: str) -> List[str]:
    return [key for key in GROUP_KEYS if key != axis]


def y_label(panel: pd.DataFrame) -> str:
    if (panel["ratio_flag"] == "absolute").any():
        return "welfare"
    return "welfare / no-information welfare"


def plot_sweep(frame: pd.DataFrame, out: Path, columns: int = 3) -> int:
    """Draw the panels to `out` and return how many there are"""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    axis = sweep_axis(frame)
    keys = panel_keys(axis)
    panels = list(frame.sort_values(keys + [axis]).groupby(keys, sort=False))
    rows = -(-len(panels) // columns)
    fig, axes = plt.subplots(
        rows, columns, figsize=(4.0 * columns, 3.2 * rows), squeeze=False
    )

    for ax, (values, panel) in zip(axes.flat, panels):
        fixed = dict(zip(keys, values))
        for column, label in SERIES.items():
            ax.plot(panel[axis], panel[column], marker=".", label=label)
        title = ", ".join(f"{key}={fixed[key]}" for key in keys)
        ax.set_title(title, fontsize=8)
        ax.set_xlabel(AXIS_LABELS[axis])
        ax.set_ylabel(y_label(panel))
    for ax in list(axes.flat)[len(panels):]:
        ax.set_visible(False)

    axes.flat[0].legend(fontsize=8)
    fig.tight_layout()
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, dpi=150, bbox_inches="tight")
    plt.close(fig)
    logger.info(f"wrote {len(panels)} panels against {axis} to {out}")
    return len(panels)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description="Plot a benchmark sweep CSV")
    parser.add_argument(
        "csv", type=Path, help="Output of `persuasion-toolkit benchmark`"
    )
    parser.add_argument(
        "--out",
        type=Path,
        default=Path("sweep.png"),
        help="Image path (default: %(default)s)",
    )
    parser.add_argument(
        "--columns", type=int, default=3, help="Panels per row (default: %(default)s)"
    )
    args = parser.parse_args(argv)

    setup_logging()
    try:
        plot_sweep(load_sweep(args.csv), args.out, args.columns)
    except (OSError, ValueError) as e:
        logger.error(str(e))
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
