"""
Benchmark Sweep Service
Runs welfare sweeps as background jobs
"""

from typing import Any, Dict

from app.core.bench import GridConfig, run_sweep, write_csv
from app.services.job_service import get_result_file_path, update_job_status
from config.settings import settings
from monitoring.logging.config import get_logger

logger = get_logger("persuasion_toolkit.benchmark_service")


class BenchmarkService:
    """Service for running parameter sweeps"""

    @staticmethod
    def run_benchmark(
        job_id: str, grid: Dict[str, Any], absolute: bool = False
    ) -> None:
        """Evaluate a grid and store the CSV under the job's result path"""
        try:
            update_job_status(job_id, "processing")
            logger.info(f"Starting benchmark job {job_id}")

            config = GridConfig(**grid)
            result = run_sweep(config, jobs=settings.MAX_WORKERS)
            write_csv(result.frame(absolute=absolute), get_result_file_path(job_id))

            update_job_status(
                job_id,
                "completed",
                rows_count=len(result.rows),
                skipped=result.skipped,
                violations=result.violations,
            )
            logger.info(
                f"Benchmark job {job_id} completed with {len(result.rows)} rows"
            )

        except Exception as e:
            logger.error(f"Benchmark job {job_id} failed: {e}")
            update_job_status(job_id, "failed", error=str(e))
