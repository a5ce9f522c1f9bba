"""
Linear program representation and solve contract.

Problems are stated as maximizations with rows in any of the three
relations; `solve_lp` turns them into the minimization form expected by
scipy's HiGHS interface. The default method is the dual simplex, so the
returned optimum is a basic (vertex) solution.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence, Union

import numpy as np
from scipy.optimize import linprog
from scipy.sparse import csr_matrix, vstack

from config.settings import settings
from monitoring.logging.config import get_logger

from .config import DEFAULT_TOLERANCES, Relation
from .errors import InfeasibleError, InputError, SolverError, UnboundedError

logger = get_logger("persuasion_toolkit.lp_core")

# every HiGHS method ends on a basis (the interior point runs crossover)
_VERTEX_METHODS = {"highs-ds", "highs-ipm", "highs"}


@dataclass
class Constraint:
    """One row: sum(values * x[indices]) <relation> bound"""

    indices: np.ndarray
    values: np.ndarray
    relation: Relation
    bound: float
    name: str = ""

    @classmethod
    def dense(
        cls,
        coeffs: Sequence[float],
        relation: Union[Relation, str],
        bound: float,
        name: str = "",
    ) -> "Constraint":
        coeffs = np.asarray(coeffs, dtype=float)
        idx = np.flatnonzero(coeffs)
        return cls(
            indices=idx,
            values=coeffs[idx],
            relation=Relation(relation),
            bound=float(bound),
            name=name,
        )


@dataclass
class LinearProgram:
    """maximize objective @ x subject to the rows and x >= lower_bounds"""

    objective: np.ndarray
    constraints: List[Constraint] = field(default_factory=list)
    lower_bounds: Optional[np.ndarray] = None
    variable_names: Optional[List[str]] = None

    @property
    def n_variables(self) -> int:
        return int(self.objective.shape[0])

    @property
    def n_constraints(self) -> int:
        return len(self.constraints)

    def add(self, constraint: Constraint) -> None:
        self.constraints.append(constraint)

    def lower(self) -> np.ndarray:
        if self.lower_bounds is None:
            return np.zeros(self.n_variables)
        return np.asarray(self.lower_bounds, dtype=float)

    def check(self) -> None:
        """Raise InputError unless every row indexes into the variable vector"""
        n = self.n_variables
        for row in self.constraints:
            if row.indices.size and (row.indices.min() < 0 or row.indices.max() >= n):
                raise InputError(
                    f"constraint '{row.name}' indexes outside {n} variables"
                )
        if not np.all(np.isfinite(self.lower())):
            raise InputError("every variable needs a finite lower bound")

    def matrix(self, relation: Relation) -> csr_matrix:
        rows = [c for c in self.constraints if c.relation == relation]
        data, cols, ptr = [], [], [0]
        for c in rows:
            data.append(c.values)
            cols.append(c.indices)
            ptr.append(ptr[-1] + c.indices.size)
        if not rows:
            return csr_matrix((0, self.n_variables))
        return csr_matrix(
            (np.concatenate(data), np.concatenate(cols), np.asarray(ptr)),
            shape=(len(rows), self.n_variables),
        )

    def bounds_of(self, relation: Relation) -> np.ndarray:
        bounds = [c.bound for c in self.constraints if c.relation == relation]
        return np.array(bounds, dtype=float)

    def residuals(self, x: np.ndarray) -> np.ndarray:
        """Per-row violation amount (0 when satisfied)"""
        out = np.empty(self.n_constraints)
        for k, c in enumerate(self.constraints):
            lhs = float(np.dot(c.values, x[c.indices]))
            if c.relation == Relation.LE:
                out[k] = max(0.0, lhs - c.bound)
            elif c.relation == Relation.GE:
                out[k] = max(0.0, c.bound - lhs)
            else:
                out[k] = abs(lhs - c.bound)
        return out

    def to_lp_format(self) -> str:
        """CPLEX LP text form, for cross-checking with external solvers"""
        names = self.variable_names or [f"x{j}" for j in range(self.n_variables)]

        def expr(indices: np.ndarray, values: np.ndarray) -> str:
            terms = [
                f"{'+' if v >= 0 else '-'} {abs(v):.17g} {names[j]}"
                for j, v in zip(indices, values)
            ]
            return " ".join(terms) if terms else "0 " + names[0]

        obj_idx = np.flatnonzero(self.objective)
        lines = [
            "\\ persuasion-toolkit",
            "Maximize",
            " obj: " + expr(obj_idx, self.objective[obj_idx]),
            "Subject To",
        ]
        for k, c in enumerate(self.constraints):
            label = c.name or f"c{k}"
            row = expr(c.indices, c.values)
            lines.append(f" {label}: {row} {c.relation.value} {c.bound:.17g}")
        lines.append("Bounds")
        for j, lb in enumerate(self.lower()):
            lines.append(f" {names[j]} >= {lb:.17g}")
        lines.append("End")
        return "\n".join(lines) + "\n"

    def dump(self, path: Union[str, Path]) -> None:
        Path(path).write_text(self.to_lp_format(), encoding="utf-8")


@dataclass
class LpSolution:
    values: np.ndarray
    objective_value: float
    is_vertex: bool
    max_violation: float = 0.0


def solve_lp(lp: LinearProgram, method: Optional[str] = None) -> LpSolution:
    """Solve a maximization LP to optimality.

    Raises:
        InfeasibleError: no feasible point.
        UnboundedError: objective unbounded above.
        SolverError: any other solver failure, or a returned point that
            violates a row by more than the feasibility tolerance.
    """
    lp.check()
    method = method or settings.LP_METHOD
    if method not in _VERTEX_METHODS:
        raise InputError(
            f"unsupported LP method '{method}', "
            f"expected one of {sorted(_VERTEX_METHODS)}"
        )
    A_ub = vstack([lp.matrix(Relation.LE), -lp.matrix(Relation.GE)]).tocsr()
    A_eq = lp.matrix(Relation.EQ)
    b_ub = np.concatenate([lp.bounds_of(Relation.LE), -lp.bounds_of(Relation.GE)])
    b_eq = lp.bounds_of(Relation.EQ)
    logger.debug(
        f"solving LP with {lp.n_variables} variables, "
        f"{lp.n_constraints} rows via {method}"
    )

    # linprog minimizes, so flip the objective
    result = linprog(
        -lp.objective,
        A_ub=A_ub if A_ub.shape[0] else None,
        b_ub=b_ub if A_ub.shape[0] else None,
        A_eq=A_eq if A_eq.shape[0] else None,
        b_eq=b_eq if A_eq.shape[0] else None,
        bounds=[(lb, None) for lb in lp.lower()],
        method=method,
        options={
            "primal_feasibility_tolerance": 1e-10,
            "dual_feasibility_tolerance": 1e-10,
        },
    )
    if result.status == 2:
        raise InfeasibleError(f"linear program is infeasible: {result.message}")
    if result.status == 3:
        raise UnboundedError(f"linear program is unbounded: {result.message}")
    if result.status != 0:
        raise SolverError(
            f"solver failed with status {result.status}: {result.message}"
        )

    x = np.asarray(result.x, dtype=float)
    violation = float(lp.residuals(x).max(initial=0.0))
    rhs = np.concatenate([lp.bounds_of(Relation.LE), lp.bounds_of(Relation.GE)])
    scale = 1.0 + float(np.max(np.abs(rhs), initial=0.0))
    if violation > DEFAULT_TOLERANCES.feasibility * scale:
        raise SolverError(
            f"solver returned a point violating a row by {violation:.3e}"
        )
    logger.debug(f"LP solved, objective {-result.fun:.12g}")
    return LpSolution(
        values=x,
        objective_value=float(lp.objective @ x),
        is_vertex=True,
        max_violation=violation,
    )
