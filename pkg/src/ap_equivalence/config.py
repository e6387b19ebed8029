import os
from functools import lru_cache
from pathlib import Path
from typing import Optional

from pydantic import BaseModel


class Settings(BaseModel):
    """Runtime settings, read once from APEQ_* environment variables."""

    log_level: str = "WARNING"
    num_threads: int = 4
    symbol_digits: int = 60
    saturation_check_limit: int = 16
    tol: float = 1e-6
    t_cap: float = 1e4
    samples: int = 10
    seed: int = 0
    csv_dir: Optional[Path] = None
    modulus_rtol: float = 1e-12

    @classmethod
    def from_env(cls) -> "Settings":
        csv_dir = os.getenv("APEQ_CSV_DIR")
        return cls(
            log_level=os.getenv("APEQ_LOG_LEVEL", "WARNING").upper(),
            num_threads=int(os.getenv("APEQ_NUM_THREADS", "4")),
            symbol_digits=int(os.getenv("APEQ_SYMBOL_DIGITS", "60")),
            saturation_check_limit=int(os.getenv("APEQ_SATURATION_CHECK_LIMIT", "16")),
            tol=float(os.getenv("APEQ_TOL", "1e-6")),
            t_cap=float(os.getenv("APEQ_T_CAP", "1e4")),
            samples=int(os.getenv("APEQ_SAMPLES", "10")),
            seed=int(os.getenv("APEQ_SEED", "0")),
            csv_dir=Path(csv_dir) if csv_dir else None,
            modulus_rtol=float(os.getenv("APEQ_MODULUS_RTOL", "1e-12")),
        )


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return Settings.from_env()
