"""
Configuration module for the rate-compatible code workbench
"""

import os
from typing import Dict, Any
from pydantic import BaseModel


class WorkbenchConfig(BaseModel):
    """Configuration for the code workbench"""

    # Logging settings
    log_dir: str = "logs"
    log_level: str = "INFO"

    # Parallelism
    workers: int = 1

    # Exhaustive enumeration limits (log2 of the number of info words)
    enumeration_cap_log2: int = 24
    codebook_cap_log2: int = 20

    # Reproducibility
    default_seed: int = 20190101

    # Monte Carlo stopping rule
    max_trials: int = 10_000_000
    max_frame_errors: int = 100
    frame_block: int = 4096

    # Artifacts
    output_dir: str = "results"

    @property
    def enumeration_cap(self) -> int:
        return 1 << self.enumeration_cap_log2

    @property
    def codebook_cap(self) -> int:
        return 1 << self.codebook_cap_log2

    @classmethod
    def from_env(cls) -> "WorkbenchConfig":
        """Create configuration from environment variables"""
        return cls(
            log_dir=os.getenv("RC_CODES_LOG_DIR", "logs"),
            log_level=os.getenv("RC_CODES_LOG_LEVEL", "INFO"),
            workers=int(os.getenv("RC_CODES_WORKERS", "1")),
            enumeration_cap_log2=int(os.getenv("RC_CODES_ENUM_CAP_LOG2", "24")),
            codebook_cap_log2=int(os.getenv("RC_CODES_CODEBOOK_CAP_LOG2", "20")),
            default_seed=int(os.getenv("RC_CODES_SEED", "20190101")),
            max_trials=int(os.getenv("RC_CODES_MAX_TRIALS", "10000000")),
            max_frame_errors=int(os.getenv("RC_CODES_MAX_ERRORS", "100")),
            frame_block=int(os.getenv("RC_CODES_FRAME_BLOCK", "4096")),
            output_dir=os.getenv("RC_CODES_OUTPUT_DIR", "results"),
        )

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary"""
        return self.model_dump()


# Default configuration
DEFAULT_CONFIG = WorkbenchConfig()
