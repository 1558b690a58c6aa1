"""
This file contains the parsing of experiment config files. A config is a JSON object of flat top-level keys plus the
`pattern`, `arms` and `strategies` sections; every key is optional and unknown keys are rejected. An empty file (or {})
is the full default experiment: A/B/C arm bank, horizon 70, window 7 and the strategy preset of the simulator.

    {
      "simulator": "pattern",            # stationary | pattern
      "feedback": "adjusted",            # adjusted | baseline, pattern simulator only
      "horizon": 70,
      "runs": 100000,
      "master_seed": 42,
      "threads": 4,
      "paired_noise": false,
      "preset": "published",             # published | ucb_comparison, used when "strategies" is absent
      "forced_pulls_per_arm": 4,         # regime applied to strategies not setting their own
      "pattern": {"constant": -3000.0},  # partial override of src/configs/pattern_simulator.json
      "arms": [{"name": "A", "oracle_value": -0.2, "adjust_low": -0.2, "adjust_high": 0.0}, ...],
      "strategies": [{"label": "UCB1", "policy": "ucb1", "ucb_c": 1600.0}, ...]
    }
"""
import json
from pathlib import Path

from src.config import DEFAULT_FORCED_PULLS, STRATEGIES_CONFIG
from src.harness.experiment import ExperimentConfig
from src.simulators.arms import ArmSpec, DEFAULT_ARM_BANK
from src.simulators.environment import SimulatorKind
from src.simulators.steps import DEFAULT_PATTERN, PatternParams
from src.strategies.policies import StrategyConfig
from src.utils.errors import ConfigurationError

TOP_LEVEL_KEYS = {
    "horizon", "runs", "master_seed", "simulator", "feedback", "paired_noise", "threads", "preset",
    "forced_pulls_per_arm", "pattern", "arms", "strategies",
}


def load_presets(path: str | Path = STRATEGIES_CONFIG) -> dict:
    with open(path, 'r') as file:
        return json.load(file).get("presets", {})


def preset_strategies(preset: str, simulator: SimulatorKind,
                      forced_pulls_per_arm: int = DEFAULT_FORCED_PULLS) -> tuple[StrategyConfig, ...]:
    sections = load_presets().get(preset, {}).get(SimulatorKind(simulator).value)
    if sections is None:
        raise ConfigurationError(f"Unknown strategy preset {preset!r}")
    return tuple(StrategyConfig.from_dict(section, forced_pulls_per_arm) for section in sections)


def _integer(data: dict, key: str, default: int) -> int:
    value = data.get(key, default)
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigurationError(f"{key} must be an integer, got {value!r}")
    return value


def config_from_dict(data: dict) -> ExperimentConfig:
    if not isinstance(data, dict):
        raise ConfigurationError("Experiment config must be a JSON object")
    unknown = set(data) - TOP_LEVEL_KEYS
    if unknown:
        raise ConfigurationError(f"Unknown config keys: {sorted(unknown)}")
    defaults = ExperimentConfig()
    try:
        simulator = SimulatorKind(data.get("simulator", defaults.simulator.value))
    except ValueError as e:
        raise ConfigurationError(str(e)) from e
    forced = _integer(data, "forced_pulls_per_arm", DEFAULT_FORCED_PULLS)

    if not isinstance(data.get("pattern", {}), dict):
        raise ConfigurationError("pattern must be an object")
    pattern = PatternParams.from_dict(data.get("pattern", {}), DEFAULT_PATTERN)

    if "arms" in data:
        if not isinstance(data["arms"], list):
            raise ConfigurationError("arms must be a list")
        arms = tuple(ArmSpec.from_dict(arm) for arm in data["arms"])
    else:
        arms = DEFAULT_ARM_BANK

    if "strategies" in data:
        if not isinstance(data["strategies"], list):
            raise ConfigurationError("strategies must be a list")
        strategies = tuple(StrategyConfig.from_dict(section, forced) for section in data["strategies"])
    else:
        strategies = preset_strategies(data.get("preset", "published"), simulator, forced)

    paired_noise = data.get("paired_noise", defaults.paired_noise)
    if not isinstance(paired_noise, bool):
        raise ConfigurationError(f"paired_noise must be true or false, got {paired_noise!r}")

    return ExperimentConfig(
        horizon=_integer(data, "horizon", defaults.horizon),
        runs=_integer(data, "runs", defaults.runs),
        master_seed=_integer(data, "master_seed", defaults.master_seed),
        simulator=simulator,
        pattern=pattern,
        feedback=data.get("feedback", defaults.feedback.value),
        arms=arms,
        strategies=strategies,
        paired_noise=paired_noise,
        threads=_integer(data, "threads", defaults.threads),
    )


def parse_config(path: str | Path | None) -> ExperimentConfig:
    """
    Reads and validates the experiment config at @path, None meaning the default experiment.
    """
    if path is None:
        return config_from_dict({})
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"Config file {path} does not exist")
    text = path.read_text()
    if not text.strip():
        return config_from_dict({})
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"Malformed config {path}: line {e.lineno} column {e.colno}: {e.msg}") from e
    return config_from_dict(data)


def config_to_dict(config: ExperimentConfig) -> dict:
    return {
        "horizon": config.horizon,
        "runs": config.runs,
        "master_seed": config.master_seed,
        "simulator": config.simulator.value,
        "feedback": config.feedback.value,
        "paired_noise": config.paired_noise,
        "threads": config.threads,
        "pattern": config.pattern.to_dict(),
        "arms": [arm.to_dict() for arm in config.arms],
        "strategies": [strategy.to_dict() for strategy in config.strategies],
    }


def write_config(config: ExperimentConfig, path: str | Path):
    with open(path, 'w') as file:
        json.dump(config_to_dict(config), file, indent=2)
        file.write("\n")
