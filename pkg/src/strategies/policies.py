"""
This file contains the bandit policies and how a strategy picks an arm at each step:
    - forced exploration: the strategy first plays a shuffled schedule pulling every arm the same number of times
    - epsilon-greedy: explores uniformly with probability epsilon, otherwise exploits the oracle's best arm
    - epsilon-decreasing: same with an exploration probability min(1, 1 / t^epsilon)
    - UCB1 / UCBT: argmax of their confidence scores
Every argmax breaks ties uniformly at random.
"""
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from src.config import DEFAULT_FORCED_PULLS, DEFAULT_WINDOW
from src.simulators.arms import ArmSpec
from src.simulators.environment import EpisodeState
from src.strategies.confidence import ucb1_score, ucbt_score
from src.strategies.oracles import (ArmStats, RegressionOracleState, mean_estimate, regression_estimate,
                                    retrain_regression)
from src.utils.errors import ConfigurationError, ParameterDomainError
from src.utils.rngdist import RngStream


class Policy(str, Enum):
    EPSILON_GREEDY = "epsilon_greedy"
    EPSILON_DECREASING = "epsilon_decreasing"
    UCB1 = "ucb1"
    UCBT = "ucbt"


class OracleKind(str, Enum):
    MEAN = "mean"
    REGRESSION = "regression"


MIN_FORCED_PULLS = {
    Policy.EPSILON_GREEDY: 1,
    Policy.EPSILON_DECREASING: 1,
    Policy.UCB1: 1,
    Policy.UCBT: 2,
}

STRATEGY_KEYS = {"label", "policy", "oracle", "epsilon", "ucb_c", "forced_pulls_per_arm", "regression_window"}


@dataclass(frozen=True)
class StrategyConfig:
    label: str
    policy: Policy
    oracle: OracleKind = OracleKind.MEAN
    epsilon: float = 0.0    # probability for epsilon-greedy, exponent for epsilon-decreasing
    ucb_c: float = 1.0
    forced_pulls_per_arm: int = DEFAULT_FORCED_PULLS
    regression_window: int = DEFAULT_WINDOW

    def __post_init__(self):
        try:
            object.__setattr__(self, "policy", Policy(self.policy))
            object.__setattr__(self, "oracle", OracleKind(self.oracle))
        except ValueError as e:
            raise ConfigurationError(f"Strategy {self.label}: {e}") from e
        if not self.label:
            raise ConfigurationError("Strategy label must not be empty")
        if self.forced_pulls_per_arm < MIN_FORCED_PULLS[self.policy]:
            raise ConfigurationError(
                f"Strategy {self.label}: {self.policy.value} needs at least {MIN_FORCED_PULLS[self.policy]} forced "
                f"pulls per arm, got {self.forced_pulls_per_arm}"
            )
        if self.regression_window < 1:
            raise ConfigurationError(f"Strategy {self.label}: regression_window must be >= 1")
        if self.policy is Policy.EPSILON_GREEDY and not 0.0 <= self.epsilon <= 1.0:
            raise ConfigurationError(f"Strategy {self.label}: epsilon must be in [0, 1], got {self.epsilon}")
        if self.policy is Policy.EPSILON_DECREASING and self.epsilon < 0.0:
            raise ConfigurationError(f"Strategy {self.label}: epsilon exponent must be >= 0, got {self.epsilon}")
        if self.policy is Policy.UCB1 and self.ucb_c < 0.0:
            raise ConfigurationError(f"Strategy {self.label}: ucb_c must be >= 0, got {self.ucb_c}")
        if self.oracle is OracleKind.REGRESSION and self.policy in (Policy.UCB1, Policy.UCBT):
            raise ConfigurationError(f"Strategy {self.label}: the regression oracle only drives epsilon policies")

    @property
    def uses_regression(self) -> bool:
        return self.oracle is OracleKind.REGRESSION

    def with_parameter(self, name: str, value: float) -> "StrategyConfig":
        if name not in ("epsilon", "ucb_c"):
            raise ConfigurationError(f"Parameter {name} cannot be swept")
        return replace(self, **{name: value})

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "policy": self.policy.value,
            "oracle": self.oracle.value,
            "epsilon": self.epsilon,
            "ucb_c": self.ucb_c,
            "forced_pulls_per_arm": self.forced_pulls_per_arm,
            "regression_window": self.regression_window,
        }

    @classmethod
    def from_dict(cls, data: dict, forced_pulls_per_arm: int = DEFAULT_FORCED_PULLS) -> "StrategyConfig":
        """
        Builds a strategy from a config section. When the section does not set forced_pulls_per_arm, the regime
        default @forced_pulls_per_arm is used, raised to the policy's minimum.
        """
        unknown = set(data) - STRATEGY_KEYS
        if unknown:
            raise ConfigurationError(f"Unknown strategy keys: {sorted(unknown)}")
        if "label" not in data or "policy" not in data:
            raise ConfigurationError(f"Strategy section needs a label and a policy: {data}")
        try:
            policy = Policy(data["policy"])
            forced = data.get("forced_pulls_per_arm", max(forced_pulls_per_arm, MIN_FORCED_PULLS[policy]))
            return cls(
                label=str(data["label"]),
                policy=policy,
                oracle=OracleKind(data.get("oracle", OracleKind.MEAN.value)),
                epsilon=float(data.get("epsilon", 0.0)),
                ucb_c=float(data.get("ucb_c", 1.0)),
                forced_pulls_per_arm=int(forced),
                regression_window=int(data.get("regression_window", DEFAULT_WINDOW)),
            )
        except (TypeError, ValueError) as e:
            if isinstance(e, ConfigurationError):
                raise
            raise ConfigurationError(f"Invalid strategy {data.get('label')}: {e}") from e


@dataclass
class StrategyState:
    """
    Per-episode memory of a strategy.
    """
    schedule: list[int]
    arm_stats: list[ArmStats]
    oracle_state: RegressionOracleState = field(default_factory=RegressionOracleState)

    @classmethod
    def start(cls, config: StrategyConfig, num_arms: int, stream: RngStream) -> "StrategyState":
        return cls(
            schedule=forced_schedule(num_arms, config.forced_pulls_per_arm, stream),
            arm_stats=[ArmStats() for _ in range(num_arms)],
            oracle_state=RegressionOracleState(None, config.regression_window),
        )

    def record(self, config: StrategyConfig, episode: EpisodeState, arm_index: int, reward: float,
               arms: tuple[ArmSpec, ...]):
        self.arm_stats[arm_index].update(reward)
        if config.uses_regression:
            self.oracle_state = retrain_regression(episode, config.regression_window, arms)


def forced_schedule(num_arms: int, pulls_per_arm: int, stream: RngStream) -> list[int]:
    if num_arms < 1 or pulls_per_arm < 1:
        raise ParameterDomainError(f"Forced schedule needs num_arms >= 1 and pulls_per_arm >= 1, got {num_arms}, {pulls_per_arm}")
    schedule = np.repeat(np.arange(num_arms), pulls_per_arm)
    stream.generator.shuffle(schedule)
    return [int(arm) for arm in schedule]


def exploration_probability(config: StrategyConfig, t: int) -> float:
    if config.policy is Policy.EPSILON_GREEDY:
        return config.epsilon
    if config.policy is Policy.EPSILON_DECREASING:
        return min(1.0, 1.0 / t ** config.epsilon)
    return 0.0


def argmax_random(values, stream: RngStream) -> int:
    values = np.asarray(values, dtype=float)
    best = np.flatnonzero(values == values.max())
    if best.shape[0] == 1:
        return int(best[0])
    return int(best[stream.generator.integers(best.shape[0])])


def oracle_estimates(config: StrategyConfig, episode: EpisodeState, state: StrategyState,
                     arms: tuple[ArmSpec, ...]) -> list[float]:
    if config.uses_regression:
        estimates = [regression_estimate(state.oracle_state, episode.rewards, arm) for arm in arms]
        if all(estimate is not None for estimate in estimates):
            return estimates
    return [mean_estimate(stats) for stats in state.arm_stats]


def select_arm(config: StrategyConfig, episode: EpisodeState, state: StrategyState, t: int, stream: RngStream,
               arms: tuple[ArmSpec, ...]) -> int:
    """
    Arm to pull at step @t (1-based).
        @pre t: t >= 1, the forced schedule is played during the first len(schedule) steps
    """
    if t < 1:
        raise ParameterDomainError(f"Steps are 1-based, got t={t}")
    if t <= len(state.schedule):
        return state.schedule[t - 1]

    if config.policy is Policy.UCB1:
        return argmax_random([ucb1_score(stats, t, config.ucb_c) for stats in state.arm_stats], stream)
    if config.policy is Policy.UCBT:
        return argmax_random([ucbt_score(stats) for stats in state.arm_stats], stream)

    if stream.generator.random() < exploration_probability(config, t):
        return int(stream.generator.integers(len(arms)))
    return argmax_random(oracle_estimates(config, episode, state, arms), stream)
