from .config import ConfigError, ScenarioConfig, apply_overrides, load_config
from .sweep import SweepSpec, run_scenario, run_sweep
from .validate import validate

__all__ = [
    "ConfigError",
    "ScenarioConfig",
    "SweepSpec",
    "apply_overrides",
    "load_config",
    "run_scenario",
    "run_sweep",
    "validate",
]
