"""
Benchmarks and parameter sweeps.

For each grid point (sharing exponent, cost family, cost coefficient,
prior, number of agents) the sweep computes the welfare of
    - no information: the lower threshold equilibrium at the prior,
    - full information: the same at posterior 1, weighted by the prior,
    - the optimal public and private mechanisms,
    - the social optimum prior1 * max_n W~(n),
and emits them as CSV with the columns in `CSV_COLUMNS`.
"""

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Iterator, List, Optional, Tuple, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field

from monitoring.logging.config import get_logger

from .config import CostFamily
from .equilibrium import sender_preferred_welfare, underline_i
from .errors import DomainViolation, ToolkitError
from .model import (
    Instance,
    power_instance,
    social_optimum,
    threshold_welfare,
    validate_instance,
)
from .private_design import persuasion_bound, solve_private
from .public_design import solve_public

logger = get_logger("persuasion_toolkit.bench")

CSV_COLUMNS = [
    "alpha",
    "cost_family",
    "r",
    "mu1",
    "n_agents",
    "w_noinfo",
    "w_fullinfo",
    "w_public",
    "w_private",
    "w_socialopt",
    "ratio_flag",
]
_WELFARE_COLUMNS = ["w_noinfo", "w_fullinfo", "w_public", "w_private", "w_socialopt"]

ORDERING_TOL = 1e-7


def _all_cost_families() -> List[CostFamily]:
    return [CostFamily.CONSTANT, CostFamily.LINEAR, CostFamily.QUADRATIC]


def no_info_welfare(inst: Instance) -> float:
    """Sender-preferred equilibrium welfare with the prior as common belief"""
    return sender_preferred_welfare(inst, inst.prior1)


def full_info_welfare(inst: Instance) -> float:
    """The state is revealed: nobody moves in the bad state, the lower
    threshold at belief 1 moves in the good one"""
    return inst.prior1 * threshold_welfare(inst, 1.0, underline_i(inst, 1.0))


class GridPoint(BaseModel):
    alpha: float
    cost_family: CostFamily
    r: float = Field(description="Cost coefficient")
    mu1: float = Field(ge=0.0, le=1.0)
    n_agents: int = Field(ge=1)

    def instance(self) -> Instance:
        return power_instance(
            self.n_agents, self.mu1, self.alpha, self.cost_family, self.r
        )


class GridConfig(BaseModel):
    """Cartesian sweep; points are enumerated in the field order below"""

    name: str = "sweep"
    alphas: List[float]
    cost_families: List[CostFamily] = Field(default_factory=_all_cost_families)
    coeffs: List[float]
    priors: List[float]
    n_agents: List[int] = Field(default_factory=lambda: [20])

    def points(self) -> Iterator[GridPoint]:
        for alpha, family, coeff, mu1, n in itertools.product(
            self.alphas, self.cost_families, self.coeffs, self.priors, self.n_agents
        ):
            yield GridPoint(
                alpha=alpha, cost_family=family, r=coeff, mu1=mu1, n_agents=n
            )

    @property
    def size(self) -> int:
        axes = (
            self.alphas,
            self.cost_families,
            self.coeffs,
            self.priors,
            self.n_agents,
        )
        return math.prod(len(axis) for axis in axes)


class BenchmarkRow(BaseModel):
    """Welfares of one grid point (absolute values)"""

    alpha: float
    cost_family: CostFamily
    r: float
    mu1: float
    n_agents: int
    w_noinfo: float
    w_fullinfo: float
    w_public: float
    w_private: float
    w_socialopt: float
    bound: Optional[float] = Field(
        default=None, description="Fast-path prior bound; None when unbounded"
    )

    def check_ordering(self, tol: float = ORDERING_TOL) -> None:
        """Raise DomainViolation unless
        social >= private >= public >= max(no info, full info) >= 0"""
        chain = [
            ("social optimum", self.w_socialopt),
            ("private", self.w_private),
            ("public", self.w_public),
            ("best benchmark", max(self.w_noinfo, self.w_fullinfo)),
            ("zero", 0.0),
        ]
        for (hi_name, hi), (lo_name, lo) in zip(chain, chain[1:]):
            if hi < lo - tol:
                raise DomainViolation(
                    f"{self.label()}: {hi_name} {hi:.12g} below {lo_name} {lo:.12g}"
                )

    def label(self) -> str:
        return (
            f"alpha={self.alpha} {self.cost_family.value} r={self.r} "
            f"mu1={self.mu1} N={self.n_agents}"
        )

    def record(self, absolute: bool = False) -> dict:
        """CSV record: welfares over no-information welfare, or absolute
        welfares when that is zero or `absolute` is set"""
        use_absolute = absolute or self.w_noinfo == 0
        scale = 1.0 if use_absolute else self.w_noinfo
        out = {
            "alpha": self.alpha,
            "cost_family": self.cost_family.value,
            "r": self.r,
            "mu1": self.mu1,
            "n_agents": self.n_agents,
        }
        for column in _WELFARE_COLUMNS:
            out[column] = getattr(self, column) / scale
        out["ratio_flag"] = "absolute" if use_absolute else "ratio"
        return out


def evaluate_point(point: GridPoint, check: bool = True) -> BenchmarkRow:
    """Welfares of one grid point.

    Raises:
        DomainViolation: the instance breaks a model assumption, or (with
            `check`) the welfare ordering fails.
    """
    inst = point.instance()
    report = validate_instance(inst)
    if not report.ok:
        raise DomainViolation("invalid instance: " + "; ".join(report.messages()))
    bound = persuasion_bound(inst)
    row = BenchmarkRow(
        alpha=point.alpha,
        cost_family=point.cost_family,
        r=point.r,
        mu1=point.mu1,
        n_agents=point.n_agents,
        w_noinfo=no_info_welfare(inst),
        w_fullinfo=full_info_welfare(inst),
        w_public=solve_public(inst).objective,
        w_private=solve_private(inst).objective,
        w_socialopt=social_optimum(inst)[1],
        bound=bound if math.isfinite(bound) else None,
    )
    if check:
        row.check_ordering()
    return row


def _evaluate_or_report(
    point: GridPoint,
) -> Tuple[Optional[BenchmarkRow], Optional[str]]:
    try:
        return evaluate_point(point, check=False), None
    except ToolkitError as e:
        return None, f"{point.model_dump(mode='json')}: {e}"


class SweepResult(BaseModel):
    rows: List[BenchmarkRow] = Field(default_factory=list)
    skipped: List[str] = Field(
        default_factory=list, description="Grid points not evaluated, with the reason"
    )
    violations: List[str] = Field(
        default_factory=list, description="Rows breaking the welfare ordering"
    )

    @property
    def ok(self) -> bool:
        return not self.violations

    def frame(self, absolute: bool = False) -> pd.DataFrame:
        return rows_to_frame(self.rows, absolute=absolute)


def run_sweep(config: GridConfig, jobs: int = 1) -> SweepResult:
    """Evaluate every grid point; rows keep grid order whatever `jobs` is.

    Points whose instance is invalid are logged and listed in `skipped`;
    rows breaking the welfare ordering are kept and listed in `violations`.
    """
    points = list(config.points())
    logger.info(f"sweep '{config.name}': {len(points)} points, {jobs} worker(s)")
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_evaluate_or_report, points))
    else:
        outcomes = [_evaluate_or_report(p) for p in points]

    result = SweepResult()
    for row, problem in outcomes:
        if row is not None:
            result.rows.append(row)
            try:
                row.check_ordering()
            except DomainViolation as e:
                logger.error(str(e))
                result.violations.append(str(e))
        else:
            logger.warning(f"skipped grid point {problem}")
            result.skipped.append(problem)
    return result


def rows_to_frame(rows: List[BenchmarkRow], absolute: bool = False) -> pd.DataFrame:
    records = [row.record(absolute=absolute) for row in rows]
    return pd.DataFrame(records, columns=CSV_COLUMNS)


def write_csv(
    frame: pd.DataFrame, path: Optional[Union[str, Path]] = None
) -> Optional[str]:
    """Write to `path`, or return the CSV text when no path is given"""
    if path is None:
        return frame.to_csv(index=False, float_format="%.12g")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format="%.12g")
    return None


class Table1Config(BaseModel):
    """Grid of the fast-path bound table"""

    n_agents: int = 20
    alphas: List[float] = Field(default_factory=lambda: [0.2, 0.4, 0.6, 0.8])
    coeffs: List[float] = Field(
        default_factory=lambda: [round(0.1 * k, 1) for k in range(1, 11)]
    )
    cost_families: List[CostFamily] = Field(default_factory=_all_cost_families)
    prior1: float = Field(
        default=0.5,
        ge=0.0,
        le=1.0,
        description="Irrelevant to the bound; any valid prior",
    )


def table1(config: Optional[Table1Config] = None) -> pd.DataFrame:
    """Fast-path bound r(i*+1)/F(i*+1) over the configured grid.

    One row per cell with the raw bound (inf when i* = N) and the
    displayed value min(bound, 1).
    """
    config = config or Table1Config()
    records = []
    for family in config.cost_families:
        for alpha in config.alphas:
            for coeff in config.coeffs:
                inst = power_instance(
                    config.n_agents, config.prior1, alpha, family, coeff
                )
                i_star, _ = social_optimum(inst)
                bound = persuasion_bound(inst)
                records.append(
                    {
                        "cost_family": family.value,
                        "alpha": alpha,
                        "r": coeff,
                        "i_star": i_star,
                        "bound": bound,
                        "display": min(bound, 1.0),
                    }
                )
    return pd.DataFrame.from_records(records)


def table1_grid(
    frame: pd.DataFrame, family: Union[str, CostFamily], column: str = "display"
) -> pd.DataFrame:
    """One cost family as an alpha x r grid"""
    family = CostFamily(family).value
    sub = frame[frame["cost_family"] == family]
    return sub.pivot(index="alpha", columns="r", values=column)


def ordering_gaps(rows: List[BenchmarkRow]) -> np.ndarray:
    """Private minus social optimum on rows whose prior is within the fast-path bound"""
    gaps = [
        abs(row.w_private - row.w_socialopt)
        for row in rows
        if row.bound is None or row.mu1 <= row.bound
    ]
    return np.asarray(gaps, dtype=float)
