"""
Toolkit Settings
Environment-based configuration shared by the CLI and the API
"""

import os
from pathlib import Path

PROJECT_ROOT = Path(__file__).resolve().parents[1]


class Settings:
    """Toolkit settings with environment variable support"""

    # API server
    HOST: str = os.getenv("HOST", "0.0.0.0")
    PORT: int = int(os.getenv("PORT", 8000))
    ENVIRONMENT: str = os.getenv("ENVIRONMENT", "development")

    # Sweep jobs
    OUTPUT_DIR: Path = Path(os.getenv("OUTPUT_DIR", "/tmp/persuasion_outputs"))
    GRID_DIR: Path = Path(os.getenv("GRID_DIR", str(PROJECT_ROOT / "config" / "grids")))
    MAX_WORKERS: int = int(os.getenv("MAX_WORKERS", "1"))

    # Solvers and sampling
    # simplex variants return vertices
    LP_METHOD: str = os.getenv("LP_METHOD", "highs-ds")
    DEFAULT_SEED: int = int(os.getenv("DEFAULT_SEED", "0"))
    MAX_SAMPLE_DRAWS: int = int(os.getenv("MAX_SAMPLE_DRAWS", "10000"))

    # Monitoring
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO")
    LOG_FILE: str = os.getenv("LOG_FILE", "")

    @classmethod
    def ensure_directories(cls):
        cls.OUTPUT_DIR.mkdir(parents=True, exist_ok=True)


settings = Settings()
settings.ensure_directories()
