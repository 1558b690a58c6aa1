"""
This file contains the oracles, i.e. the estimators of the expected reward of an arm:
    - the mean oracle averages the rewards observed for the arm
    - the regression oracle fits an OLS model on the whole episode, predicting rho_t from the m previous rewards and
      the code O_a of the arm pulled at t. The fit has an intercept: without it O_a = 0 (arm C) would carry no signal.
Until the regression model can be fitted (or when the design is singular) the regression oracle falls back to the mean.
"""
from dataclasses import dataclass

import numpy as np

from src.config import DEFAULT_WINDOW
from src.simulators.arms import ArmSpec
from src.simulators.environment import EpisodeState
from src.utils.errors import InsufficientDataError, NoDataError, SingularDesignError
from src.utils.linreg import DesignMatrix, RegressionFit, fit_ols, predict

ZERO_VARIANCE_RTOL = 1e-12


@dataclass
class ArmStats:
    pull_count: int = 0
    reward_sum: float = 0.0
    reward_sum_squares: float = 0.0

    def update(self, reward: float):
        self.pull_count += 1
        self.reward_sum += reward
        self.reward_sum_squares += reward * reward

    @classmethod
    def from_rewards(cls, rewards) -> "ArmStats":
        stats = cls()
        for reward in rewards:
            stats.update(float(reward))
        return stats

    @property
    def mean(self) -> float:
        if self.pull_count < 1:
            raise NoDataError("Arm has never been pulled")
        return self.reward_sum / self.pull_count

    @property
    def std(self) -> float:
        """
        Sample standard deviation s_a.
        """
        if self.pull_count < 2:
            raise InsufficientDataError(f"Sample standard deviation needs 2 pulls, arm has {self.pull_count}")
        mean = self.mean
        variance = (self.reward_sum_squares - self.pull_count * mean * mean) / (self.pull_count - 1)
        # Cancellation noise on identical rewards
        if variance <= ZERO_VARIANCE_RTOL * mean * mean:
            return 0.0
        return float(np.sqrt(variance))


@dataclass
class RegressionOracleState:
    fit: RegressionFit | None = None
    window: int = DEFAULT_WINDOW
    n_rows: int = 0


def mean_estimate(stats: ArmStats) -> float:
    return stats.mean


def regression_feature_names(window: int) -> tuple[str, ...]:
    return tuple(f"reward_lag{i}" for i in range(1, window + 1)) + ("oracle_value",)


def build_training_design(history: EpisodeState, window: int, arms: tuple[ArmSpec, ...]) -> DesignMatrix:
    """
    One row per t' > window: (rho_{t'-1}, ..., rho_{t'-m}, O_{a_t'}) -> rho_t'.
    """
    rewards = np.asarray(history.rewards, dtype=float)
    n = rewards.shape[0]
    n_rows = max(n - window, 0)
    if n_rows == 0:
        return DesignMatrix(np.empty((0, window + 1)), np.empty(0), regression_feature_names(window))
    codes = np.asarray([arms[a].oracle_value for a in history.arm_choices[window:]], dtype=float)
    lags = [rewards[window - i: n - i] for i in range(1, window + 1)]
    rows = np.column_stack(lags + [codes])
    return DesignMatrix(rows, rewards[window:], regression_feature_names(window))


def first_fit_pull(window: int) -> int:
    """
    First pull whose choice can use a fitted model: window + 3 training rows need 2 * window + 3 rewards.
    """
    return 2 * window + 4


def retrain_regression(history: EpisodeState, window: int, arms: tuple[ArmSpec, ...]) -> RegressionOracleState:
    design = build_training_design(history, window, arms)
    # features + intercept + at least one residual degree of freedom
    if design.n_rows < len(design.feature_names) + 2:
        return RegressionOracleState(None, window, design.n_rows)
    try:
        fit = fit_ols(design, inference=False)
    except SingularDesignError:
        fit = None
    return RegressionOracleState(fit, window, design.n_rows)


def regression_estimate(state: RegressionOracleState, recent_rewards, arm: ArmSpec) -> float | None:
    """
    Prediction of the reward of @arm given the last m rewards (chronological order, the most recent last).
    returns None when the oracle has no model yet: the caller then uses mean_estimate
    """
    if state.fit is None or len(recent_rewards) < state.window:
        return None
    lags = list(recent_rewards[-state.window:])[::-1]
    return predict(state.fit, lags + [arm.oracle_value])
