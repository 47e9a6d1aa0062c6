"""Load YAML run defaults and build validated run configurations.

The loader reads ``config/config.yaml``, normalises the debug level and merges
explicit command line overrides on top of the ``defaults`` section.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Optional

import yaml
from dotenv import load_dotenv

from utils.logger import debug_log
from utils.system_resources import get_optimal_worker_count

load_dotenv()

COMMANDS = ("verify", "character", "moments", "spectrum", "fusion", "report")
CONSTRUCTIONS = ("clifford", "permutation", "two-by-two", "block-4x4")
FORMATS = ("json", "csv")


def normalize_debug(raw_debug) -> str | bool:
    """Map the YAML ``debug`` value onto ``low``/``medium``/``high`` or ``False``."""
    if raw_debug is None or raw_debug is False:
        return False
    if raw_debug is True:
        return "high"
    debug = str(raw_debug).lower()
    return debug if debug in {"low", "medium", "high"} else "low"


def validate_config(config: dict) -> None:
    """Perform a light sanity check on *config*."""
    if not isinstance(config, dict):
        raise KeyError("Config file must contain a mapping")
    for key in ("defaults",):
        if key not in config:
            raise KeyError(f"Missing required config section '{key}'")


def load_config(path: str = "config/config.yaml") -> dict:
    """Load configuration from *path*."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            raw_config = yaml.safe_load(f)
    except FileNotFoundError as exc:
        raise FileNotFoundError(f"Config file not found: {path}") from exc

    validate_config(raw_config)
    raw_config["debug"] = normalize_debug(raw_config.get("debug", "low"))
    debug_log(f"Loaded config from {path}", raw_config, level="medium")
    return raw_config


@dataclass(frozen=True)
class RunConfig:
    command: str
    s: int
    n: int
    construction: str
    samples: int
    k_max: int
    seed: int
    tolerance: float
    bins: int
    glue: int
    workers: int
    output: Optional[str]
    format: str
    progress: bool

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise ValueError(f"Unknown command '{self.command}'")
        if self.construction not in CONSTRUCTIONS:
            raise ValueError(f"Unknown construction '{self.construction}'")
        if self.format not in FORMATS:
            raise ValueError(f"Unknown output format '{self.format}'")
        if self.samples < 1:
            raise ValueError(f"samples must be at least 1, got {self.samples}")
        if self.k_max < 0:
            raise ValueError(f"k_max must be nonnegative, got {self.k_max}")
        if not self.tolerance > 0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance}")
        if self.bins < 1:
            raise ValueError(f"bins must be at least 1, got {self.bins}")
        if not 1 <= self.s <= 16:
            raise ValueError(f"s must lie in [1, 16], got {self.s}")
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")
        if self.glue < 0:
            raise ValueError(f"glue must be nonnegative, got {self.glue}")
        if not 0 <= self.seed < 1 << 64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")

    def as_dict(self) -> dict:
        """Parameters that determine the artifact (no output path, no threads)."""
        params = asdict(self)
        for key in ("output", "workers", "progress"):
            params.pop(key)
        return params


def build_run_config(command: str, overrides: dict, config: dict) -> RunConfig:
    """Merge explicit *overrides* (``None`` means unset) over YAML defaults."""
    defaults = dict(config.get("defaults", {}))
    merged = {**defaults, **{k: v for k, v in overrides.items() if v is not None}}

    workers = merged.get("workers", "auto")
    if not workers or workers == "auto":
        workers = get_optimal_worker_count()
        debug_log(f"Auto-detected worker count: {workers}", config, level="medium")

    try:
        return RunConfig(
            command=command,
            s=int(merged.get("s", 2)),
            n=int(merged.get("n", 4)),
            construction=str(merged.get("construction", "clifford")),
            samples=int(merged.get("samples", 100000)),
            k_max=int(merged.get("k_max", 5)),
            seed=int(merged.get("seed", 0)),
            tolerance=float(merged.get("tolerance", 1e-12)),
            bins=int(merged.get("bins", 40)),
            glue=int(merged.get("glue", 0)),
            workers=int(workers),
            output=merged.get("output"),
            format=str(merged.get("format", "json")),
            progress=bool(merged.get("progress", False)),
        )
    except (TypeError, ValueError) as exc:
        raise ValueError(f"Invalid run configuration: {exc}") from exc
