"""
Health Check System
Host resources, sweep jobs and a solver smoke test
"""

import functools
import os
from datetime import datetime, timezone
from typing import Any, Callable, Dict

import psutil

from app import __version__
from app.core.model import CostTable, Instance, SharingTable
from app.core.private_design import solve_private
from app.core.utils import bundled_grids, load_grid_config
from app.services.job_service import JobState, get_active_jobs_count, list_jobs
from config.settings import settings

GB = 1024**3

# two agents, F = (1, 1, 0.6), r = (0, 0.5, 0.6):
# the optimum tells agent 1 alone to move
_SMOKE_GAME = Instance(
    n_agents=2,
    prior1=0.8,
    sharing=SharingTable(values=(1.0, 1.0, 0.6)),
    costs=CostTable(values=(0.0, 0.5, 0.6)),
)
_SMOKE_OBJECTIVE = 0.4


def _guarded(check: Callable[[], Dict[str, Any]]) -> Callable[[], Dict[str, Any]]:
    """Report an exception raised by a check as an unhealthy result"""

    @functools.wraps(check)
    def wrapper() -> Dict[str, Any]:
        try:
            return {"status": "healthy", **check()}
        except Exception as e:
            return {"status": "unhealthy", "error": f"{type(e).__name__}: {e}"}

    return wrapper


class HealthChecker:
    """Health check system for monitoring service status"""

    @staticmethod
    @_guarded
    def check_disk_space() -> Dict[str, Any]:
        """Free space and write access where sweep CSVs go"""
        usage = psutil.disk_usage(str(settings.OUTPUT_DIR))
        if not os.access(settings.OUTPUT_DIR, os.W_OK):
            raise PermissionError(f"{settings.OUTPUT_DIR} is not writable")
        return {
            "output_dir": str(settings.OUTPUT_DIR),
            "free_gb": round(usage.free / GB, 2),
            "used_percent": round(usage.used / usage.total * 100, 2),
        }

    @staticmethod
    @_guarded
    def check_memory() -> Dict[str, Any]:
        memory = psutil.virtual_memory()
        return {
            "available_gb": round(memory.available / GB, 2),
            "used_percent": memory.percent,
        }

    @staticmethod
    @_guarded
    def check_cpu() -> Dict[str, Any]:
        return {
            "usage_percent": psutil.cpu_percent(interval=0.1),
            "core_count": psutil.cpu_count(),
            "sweep_workers": settings.MAX_WORKERS,
        }

    @staticmethod
    @_guarded
    def check_jobs() -> Dict[str, Any]:
        """Sweep jobs per state"""
        jobs = list_jobs()
        by_state = {
            state.value: sum(1 for j in jobs if j["status"] == state.value)
            for state in JobState
        }
        return {"active_jobs": get_active_jobs_count(), "by_state": by_state}

    @staticmethod
    @_guarded
    def check_solver() -> Dict[str, Any]:
        """Solve a two-agent private mechanism with the configured LP method"""
        objective = solve_private(_SMOKE_GAME, method=settings.LP_METHOD).objective
        if abs(objective - _SMOKE_OBJECTIVE) > 1e-9:
            raise ArithmeticError(
                f"smoke objective {objective}, expected {_SMOKE_OBJECTIVE}"
            )
        return {"method": settings.LP_METHOD}

    @staticmethod
    @_guarded
    def check_grids() -> Dict[str, Any]:
        """Every bundled sweep grid parses"""
        names = bundled_grids()
        sizes = {
            name: load_grid_config(name).size for name in names if name != "table1"
        }
        return {"grid_dir": str(settings.GRID_DIR), "points": sizes}

    @classmethod
    def comprehensive_check(cls) -> Dict[str, Any]:
        checks = {
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "service": "Persuasion Toolkit",
            "version": __version__,
            "environment": settings.ENVIRONMENT,
            "disk": cls.check_disk_space(),
            "memory": cls.check_memory(),
            "cpu": cls.check_cpu(),
            "jobs": cls.check_jobs(),
            "solver": cls.check_solver(),
            "grids": cls.check_grids(),
        }

        unhealthy = [
            k
            for k, v in checks.items()
            if isinstance(v, dict) and v.get("status") == "unhealthy"
        ]
        checks["overall_status"] = "unhealthy" if unhealthy else "healthy"
        checks["unhealthy_checks"] = unhealthy
        return checks
