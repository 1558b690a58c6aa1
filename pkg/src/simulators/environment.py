"""
This file glues the step simulators and the arms together into one environment step of an episode:
    - produce the baseline S_t (stationary draw or pattern recursion)
    - apply the selected arm, observe the reward rho_t = S_t * (1 + r)
    - record everything in the EpisodeState and advance t
In the pattern simulator the recursion runs over the priming week followed either by the adjusted rewards (the steps the
player actually walked, default) or by the baselines, see FeedbackMode.
"""
from dataclasses import dataclass, field
from enum import Enum

from src.simulators.arms import ArmSpec, DEFAULT_ARM_BANK, apply_arm
from src.simulators.steps import DEFAULT_PATTERN, N_LAGS, PatternParams, pattern_step, prime_history, stationary_step
from src.utils.errors import ConfigurationError
from src.utils.rngdist import RngStream


class SimulatorKind(str, Enum):
    STATIONARY = "stationary"
    PATTERN = "pattern"


class FeedbackMode(str, Enum):
    ADJUSTED = "adjusted"
    BASELINE = "baseline"


@dataclass
class EpisodeState:
    t: int = 1    # index of the next step, 1-based
    baseline_steps: list[float] = field(default_factory=list)
    rewards: list[float] = field(default_factory=list)
    arm_choices: list[int] = field(default_factory=list)
    adjustments: list[float] = field(default_factory=list)
    prior_steps: list[float] = field(default_factory=list)    # priming week, before t = 1

    def feedback_history(self, feedback: FeedbackMode) -> list[float]:
        """
        The last N_LAGS values of the series the pattern recursion runs over.
        """
        observed = self.rewards if feedback is FeedbackMode.ADJUSTED else self.baseline_steps
        series = self.prior_steps[-N_LAGS:] + observed[-N_LAGS:]
        return series[-N_LAGS:]


def start_episode(kind: SimulatorKind, stream: RngStream, params: PatternParams = DEFAULT_PATTERN) -> EpisodeState:
    """
    New episode, primed with seven baseline days when @kind is the pattern simulator.
    """
    state = EpisodeState()
    if kind is SimulatorKind.PATTERN:
        state.prior_steps = prime_history(stream, params.priming)
    return state


def environment_step(state: EpisodeState, arm_index: int, kind: SimulatorKind, stream: RngStream,
                     arms: tuple[ArmSpec, ...] = DEFAULT_ARM_BANK, params: PatternParams = DEFAULT_PATTERN,
                     feedback: FeedbackMode = FeedbackMode.ADJUSTED) -> float:
    """
    Plays @arm_index for day state.t.
    returns the observed reward
    """
    if not 0 <= arm_index < len(arms):
        raise ConfigurationError(f"Unknown arm index {arm_index} for a bank of {len(arms)} arms")
    if kind is SimulatorKind.STATIONARY:
        baseline = stationary_step(stream)
    elif kind is SimulatorKind.PATTERN:
        history = state.feedback_history(feedback)
        if len(history) < N_LAGS:
            raise ConfigurationError(f"Pattern simulator needs {N_LAGS} prior values, episode carries {len(history)}")
        baseline = pattern_step(history, params, stream)
    else:
        raise ConfigurationError(f"Unknown simulator kind {kind}")

    reward, adjustment = apply_arm(baseline, arms[arm_index], stream)
    state.baseline_steps.append(baseline)
    state.rewards.append(reward)
    state.arm_choices.append(arm_index)
    state.adjustments.append(adjustment)
    state.t += 1
    return reward
