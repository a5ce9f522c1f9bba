"""
Unit Tests for the sweep plotting script
"""

import pandas as pd
import pytest

from app.core.bench import GridConfig, run_sweep, write_csv
from docs.plot_sweep import load_sweep, panel_keys, plot_sweep, sweep_axis, y_label


def _sweep_csv(tmp_path, coeffs, priors):
    config = GridConfig(
        alphas=[0.5, 0.9],
        cost_families=["constant"],
        coeffs=coeffs,
        priors=priors,
        n_agents=[4],
    )
    path = tmp_path / "sweep.csv"
    write_csv(run_sweep(config).frame(), path)
    return load_sweep(path)


def test_cost_sweep_plots_against_r(tmp_path):
    frame = _sweep_csv(tmp_path, coeffs=[0.3, 0.6, 0.9], priors=[0.8])
    assert sweep_axis(frame) == "r"
    assert "r" not in panel_keys("r")
    assert "mu1" in panel_keys("r")


def test_prior_sweep_plots_against_mu1(tmp_path):
    frame = _sweep_csv(tmp_path, coeffs=[0.5], priors=[0.3, 0.6, 0.9])
    assert sweep_axis(frame) == "mu1"
    assert panel_keys("mu1") == ["cost_family", "alpha", "r", "n_agents"]


def test_y_label_names_the_ratio():
    ratio = pd.DataFrame({"ratio_flag": ["ratio", "ratio"]})
    assert y_label(ratio) == "welfare / no-information welfare"
    assert y_label(pd.DataFrame({"ratio_flag": ["ratio", "absolute"]})) == "welfare"


def test_load_sweep_rejects_other_csv(tmp_path):
    path = tmp_path / "other.csv"
    path.write_text("a,b\n1,2\n")
    with pytest.raises(ValueError, match="not a sweep CSV"):
        load_sweep(path)


def test_cost_sweep_renders_one_panel_per_family(tmp_path):
    pytest.importorskip("matplotlib")
    frame = _sweep_csv(tmp_path, coeffs=[0.3, 0.6, 0.9], priors=[0.8])
    out = tmp_path / "fig1.png"
    assert plot_sweep(frame, out) == 2
    assert out.stat().st_size > 0
