from pathlib import Path
from tempfile import gettempdir

from pydantic import BaseSettings

TEMP_DIR = Path(gettempdir())


class Settings(BaseSettings):
    """Library and command-line settings."""

    # dominant eigendata
    eig_tol: float = 1e-12
    eig_max_iter: int = 100_000
    dense_eig_limit: int = 2000
    # Bowen root and other scalar solves
    bisection_tol: float = 1e-10
    # longest symbolic or numeric orbit ever materialized
    horizon_cap: int = 10_000_000
    # letters of the coding word used to place a point numerically
    decode_depth: int = 60
    float_digits: int = 12
    log_level: str = "INFO"
    threads: int = 1
    output_dir: Path = TEMP_DIR / "recspec"

    class Config:
        env_file = ".env"
        env_prefix = "RECSPEC_"
        env_file_encoding = "utf-8"


settings = Settings()
