"""
Unit Tests for benchmarks and sweeps
"""

import math

import pandas as pd
import pytest

from app.core.bench import (
    CSV_COLUMNS,
    BenchmarkRow,
    GridConfig,
    GridPoint,
    Table1Config,
    evaluate_point,
    full_info_welfare,
    no_info_welfare,
    ordering_gaps,
    run_sweep,
    table1,
    table1_grid,
    write_csv,
)
from app.core.errors import DomainViolation
from app.core.utils import load_grid_config, load_table1_config

# alpha 0.5, constant costs 0.25, prior 0.8, five agents:
# everybody moves without information, W~ peaks at n = 4
POINT = GridPoint(alpha=0.5, cost_family="constant", r=0.5, mu1=0.8, n_agents=5)


def test_benchmarks_two_agents(two_agent_game):
    assert no_info_welfare(two_agent_game) == pytest.approx(0.3)
    assert full_info_welfare(two_agent_game) == pytest.approx(0.4)


def test_evaluate_point():
    row = evaluate_point(POINT)
    assert row.w_noinfo == pytest.approx(0.8 * math.sqrt(5.0) - 1.25)
    assert row.w_fullinfo == pytest.approx(0.8 * (math.sqrt(5.0) - 1.25))
    assert row.w_socialopt == pytest.approx(0.8)
    assert row.bound == pytest.approx(0.25 * math.sqrt(5.0))
    assert row.w_noinfo <= row.w_public + 1e-9
    assert row.w_public <= row.w_private + 1e-9
    # above the fast-path bound, but spreading the stay recommendation
    # over all five agents still reaches the optimum
    assert POINT.mu1 > row.bound
    assert row.w_private == pytest.approx(row.w_socialopt, abs=1e-7)


def test_record_ratios():
    record = evaluate_point(POINT).record()
    assert list(record) == CSV_COLUMNS
    assert record["w_noinfo"] == pytest.approx(1.0)
    assert record["ratio_flag"] == "ratio"
    assert record["cost_family"] == "constant"


def test_record_falls_back_to_absolute():
    # r(1) = 0.5 exceeds the prior, so nobody moves without information
    row = evaluate_point(
        GridPoint(alpha=0.5, cost_family="constant", r=1.0, mu1=0.3, n_agents=5)
    )
    assert row.w_noinfo == 0.0
    record = row.record()
    assert record["ratio_flag"] == "absolute"
    assert record["w_private"] == pytest.approx(row.w_private)


def test_check_ordering_raises():
    row = BenchmarkRow(
        alpha=0.5,
        cost_family="constant",
        r=0.5,
        mu1=0.8,
        n_agents=5,
        w_noinfo=0.1,
        w_fullinfo=0.2,
        w_public=0.3,
        w_private=0.25,
        w_socialopt=0.4,
    )
    with pytest.raises(DomainViolation, match="private"):
        row.check_ordering()


def test_sweep_skips_invalid_points():
    config = GridConfig(
        alphas=[1.5, 0.5],
        cost_families=["constant"],
        coeffs=[0.5],
        priors=[0.8],
        n_agents=[4],
    )
    assert config.size == 2
    result = run_sweep(config)
    assert len(result.rows) == 1
    assert len(result.skipped) == 1
    assert "alpha" in result.skipped[0]
    assert result.ok


def test_csv_output(tmp_path):
    config = GridConfig(
        alphas=[0.5],
        cost_families=["linear"],
        coeffs=[0.5, 1.0],
        priors=[0.6],
        n_agents=[4],
    )
    result = run_sweep(config)
    text = write_csv(result.frame())
    lines = text.strip().splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 3

    path = tmp_path / "sweep.csv"
    assert write_csv(result.frame(absolute=True), path) is None
    frame = pd.read_csv(path)
    assert list(frame.columns) == CSV_COLUMNS
    assert set(frame["ratio_flag"]) == {"absolute"}


def test_bundled_grids():
    assert load_grid_config("fig1").size == 90
    assert load_grid_config("fig2").size == 81
    assert load_table1_config("table1").n_agents == 20


def test_table1_cells():
    config = Table1Config(
        n_agents=3, alphas=[0.5], coeffs=[0.1, 1.0], cost_families=["constant"]
    )
    frame = table1(config)
    assert list(frame["i_star"]) == [3, 1]
    assert math.isinf(frame["bound"].iloc[0])
    assert frame["display"].iloc[0] == 1.0
    assert frame["bound"].iloc[1] == pytest.approx(0.5 * math.sqrt(2.0))

    grid = table1_grid(frame, "constant")
    assert grid.loc[0.5, 1.0] == pytest.approx(0.5 * math.sqrt(2.0))


def test_ordering_gaps_vanish_below_bound():
    config = GridConfig(
        alphas=[0.5],
        cost_families=["quadratic"],
        coeffs=[1.0],
        priors=[0.1, 0.9],
        n_agents=[6],
    )
    result = run_sweep(config)
    gaps = ordering_gaps(result.rows)
    assert gaps.size >= 1
    assert gaps.max() <= 1e-7


@pytest.mark.slow
def test_parallel_sweep_keeps_grid_order():
    config = GridConfig(
        alphas=[0.2, 0.9], coeffs=[0.3, 0.9], priors=[0.4, 0.8], n_agents=[6]
    )
    serial = run_sweep(config, jobs=1)
    parallel = run_sweep(config, jobs=2)
    assert [r.label() for r in parallel.rows] == [r.label() for r in serial.rows]
    assert parallel.frame().equals(serial.frame())


@pytest.mark.slow
def test_fig1_sweep_respects_ordering():
    result = run_sweep(load_grid_config("fig1"))
    assert not result.skipped
    assert result.ok, result.violations


# reference bound table, N = 20, rows alpha 0.2..0.8, columns r 0.1..1.0
REFERENCE_TABLE1 = {
    "constant": [
        [1, 1, 1, 1, 1, 1, 1, 1, 0.811, 0.808],
        [1, 1, 1, 0.621, 0.628, 0.653, 0.666, 0.696, 0.698, 0.776],
        [1, 0.422, 0.44, 0.459, 0.483, 0.58, 0.531, 0.606, 0.682, 0.758],
        [0.237, 0.241, 0.261, 0.348, 0.435, 0.522, 0.609, 0.696, 0.783, 0.871],
    ],
    "linear": [
        [1, 1, 0.836, 0.869, 0.888, 0.838, 0.849, 0.826, 0.93, 0.859],
        [0.617, 0.648, 0.65, 0.735, 0.762, 0.737, 0.666, 0.761, 0.857, 0.696],
        [0.464, 0.45, 0.527, 0.525, 0.459, 0.551, 0.643, 0.464, 0.521, 0.58],
        [0.252, 0.243, 0.364, 0.289, 0.361, 0.433, 0.506, 0.279, 0.313, 0.348],
    ],
    "quadratic": [
        [0.891, 0.947, 0.951, 1, 0.97, 0.868, 1, 0.824, 0.927, 1],
        [0.631, 0.78, 0.64, 0.854, 0.737, 0.885, 0.666, 0.761, 0.857, 0.952],
        [0.446, 0.63, 0.633, 0.525, 0.657, 0.441, 0.515, 0.588, 0.662, 0.735],
        [0.302, 0.362, 0.291, 0.388, 0.485, 0.26, 0.303, 0.347, 0.39, 0.433],
    ],
}

# listed truncated: i* = 2, bound 0.27 * 3^0.6 = 0.52196
TRUNCATED_CELLS = {("linear", 0.6, 0.9): 0.52196}


@pytest.fixture(scope="module")
def bundled_table1():
    return table1(load_table1_config("table1"))


@pytest.mark.parametrize("family", ["constant", "linear", "quadratic"])
def test_table1_matches_reference_cells(bundled_table1, family):
    grid = table1_grid(bundled_table1, family)
    assert grid.shape == (4, 10)
    for row, alpha in enumerate(grid.index):
        for col, coeff in enumerate(grid.columns):
            computed = grid.loc[alpha, coeff]
            key = (family, round(alpha, 1), round(coeff, 1))
            if key in TRUNCATED_CELLS:
                assert computed == pytest.approx(TRUNCATED_CELLS[key], abs=5e-5)
                continue
            expected = REFERENCE_TABLE1[family][row][col]
            assert computed == pytest.approx(expected, abs=5e-4), key


def test_table1_has_every_cell(bundled_table1):
    assert len(bundled_table1) == 120
    assert (bundled_table1["display"] <= 1.0).all()
