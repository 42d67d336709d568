import threading
from pathlib import Path
from typing import Optional

import environ
from pydantic import BaseModel, Field


def get_project_root() -> Path:
    """Get the project root directory"""
    return Path(__file__).resolve().parent.parent


PROJECT_ROOT = get_project_root()

DEFAULT_OUT_DIR = "runs"

env = environ.Env()


class RuntimeSettings(BaseModel):
    """Process-wide defaults read from the environment"""

    log_level: str = Field("INFO", description="Console log level")
    workers: int = Field(1, ge=1, description="Default replication worker count")
    out_dir: str = Field(DEFAULT_OUT_DIR, description="Root directory for run outputs")
    seed_override: Optional[int] = Field(
        None, description="POWSIM_SEED; replaces experiment base seeds when set"
    )


class Config:
    _instance = None
    _lock = threading.Lock()
    _initialized = False

    def __new__(cls):
        if cls._instance is None:
            with cls._lock:
                if cls._instance is None:
                    cls._instance = super().__new__(cls)
        return cls._instance

    def __init__(self):
        if not self._initialized:
            with self._lock:
                if not self._initialized:
                    self._settings = None
                    self._load_initial_config()
                    self._initialized = True

    def _load_initial_config(self):
        env.read_env(str(PROJECT_ROOT / ".env"))
        raw_seed = env.str("POWSIM_SEED", default="")
        self._settings = RuntimeSettings(
            log_level=env.str("POWSIM_LOG_LEVEL", default="INFO"),
            workers=env.int("POWSIM_WORKERS", default=1),
            out_dir=env.str("POWSIM_OUT_DIR", default=DEFAULT_OUT_DIR),
            seed_override=int(raw_seed) if raw_seed.strip() else None,
        )

    def reload(self) -> None:
        """Re-read the environment (used by the CLI and tests)"""
        with self._lock:
            self._load_initial_config()

    @property
    def settings(self) -> RuntimeSettings:
        return self._settings

    @property
    def log_level(self) -> str:
        return self._settings.log_level

    @property
    def workers(self) -> int:
        return self._settings.workers

    @property
    def out_dir(self) -> str:
        return self._settings.out_dir

    @property
    def seed_override(self) -> Optional[int]:
        return self._settings.seed_override

    @property
    def root_path(self) -> Path:
        """Get the root path of the application"""
        return PROJECT_ROOT


config = Config()
