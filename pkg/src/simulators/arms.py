"""
This file contains the arms of the bandit and the adjustment mechanism: each arm holds an adjustment range [l, h], a
value r is drawn uniformly in it when the arm is pulled and the player walks baseline * (1 + r) steps.
"""
import json
from dataclasses import dataclass
from pathlib import Path

from src.config import ARMS_CONFIG
from src.utils.errors import ConfigurationError, ParameterDomainError
from src.utils.rngdist import RngStream, sample_uniform


@dataclass(frozen=True)
class ArmSpec:
    name: str
    oracle_value: float    # O_a, the arm code fed to the regression oracle
    adjust_low: float
    adjust_high: float

    def __post_init__(self):
        if self.adjust_low > self.adjust_high:
            raise ConfigurationError(f"Arm {self.name}: adjust_low {self.adjust_low} > adjust_high {self.adjust_high}")

    @property
    def expected_multiplier(self) -> float:
        return 1.0 + (self.adjust_low + self.adjust_high) / 2.0

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "oracle_value": self.oracle_value,
            "adjust_low": self.adjust_low,
            "adjust_high": self.adjust_high,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ArmSpec":
        unknown = set(data) - {"name", "oracle_value", "adjust_low", "adjust_high"}
        if unknown:
            raise ConfigurationError(f"Unknown arm keys: {sorted(unknown)}")
        try:
            return cls(
                name=str(data["name"]),
                oracle_value=float(data["oracle_value"]),
                adjust_low=float(data["adjust_low"]),
                adjust_high=float(data["adjust_high"]),
            )
        except KeyError as e:
            raise ConfigurationError(f"Arm is missing key {e}") from e
        except (TypeError, ValueError) as e:
            raise ConfigurationError(f"Invalid arm {data}: {e}") from e


def load_arm_bank(path: str | Path = ARMS_CONFIG) -> tuple[ArmSpec, ...]:
    with open(path, 'r') as file:
        data = json.load(file)
    arms = tuple(ArmSpec.from_dict(arm) for arm in data.get("arms", []))
    if not arms:
        raise ConfigurationError(f"No arm defined in {path}")
    return arms


DEFAULT_ARM_BANK = load_arm_bank()


def apply_arm(baseline: float, arm: ArmSpec, stream: RngStream) -> tuple[float, float]:
    """
    Applies the intervention @arm to the @baseline steps of the day.
    returns (reward, adjustment) with reward = baseline * (1 + adjustment)
    """
    if baseline < 0:
        raise ParameterDomainError(f"Baseline steps must be non-negative, got {baseline}")
    adjustment = sample_uniform(stream, arm.adjust_low, arm.adjust_high)
    return baseline * (1.0 + adjustment), adjustment
