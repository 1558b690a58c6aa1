import json
from collections import deque

import numpy as np
import pytest

from src.simulators.arms import ArmSpec, DEFAULT_ARM_BANK, apply_arm, load_arm_bank
from src.simulators.environment import EpisodeState, FeedbackMode, SimulatorKind, environment_step, start_episode
from src.simulators.steps import (DEFAULT_PATTERN, N_LAGS, PatternParams, generate_pattern_series, pattern_mean,
                                  pattern_step, prime_history, stationary_step)
from src.utils.errors import ConfigurationError, DimensionError, ParameterDomainError
from src.utils.rngdist import derive_stream

ARM_A, ARM_B, ARM_C = DEFAULT_ARM_BANK


class QueuedGenerator:
    """
    Generator returning preset Gamma draws in order.
    """

    def __init__(self, gamma_draws):
        self.gamma_draws = deque(gamma_draws)
        self.gamma_calls = 0

    def gamma(self, shape, scale, size=None):
        self.gamma_calls += 1
        return self.gamma_draws.popleft()


class QueuedStream:

    def __init__(self, gamma_draws):
        self.generator = QueuedGenerator(gamma_draws)


def test_default_arm_bank():
    assert [arm.name for arm in DEFAULT_ARM_BANK] == ["A", "B", "C"]
    assert [arm.oracle_value for arm in DEFAULT_ARM_BANK] == [-0.2, -0.1, 0.0]
    assert [arm.expected_multiplier for arm in DEFAULT_ARM_BANK] == pytest.approx([0.9, 1.0, 1.1])


def test_arm_range_must_not_be_empty():
    with pytest.raises(ConfigurationError):
        ArmSpec("X", 0.0, 0.2, 0.1)


def test_arm_bank_file_rejects_unknown_keys(tmp_path):
    path = tmp_path / "arms.json"
    path.write_text(json.dumps({"arms": [{"name": "A", "oracle_value": 0, "adjust_low": 0, "adjust_high": 0,
                                          "colour": "red"}]}))
    with pytest.raises(ConfigurationError):
        load_arm_bank(path)


def test_default_pattern_coefficients():
    assert sum(DEFAULT_PATTERN.lag_coefficients) == pytest.approx(0.8904)
    assert DEFAULT_PATTERN.lag_coefficients[4] == 0.0
    assert DEFAULT_PATTERN.constant == -3000.0


def test_pattern_params_need_seven_lags():
    with pytest.raises(ConfigurationError):
        PatternParams((0.1,) * 6, 0.0, DEFAULT_PATTERN.noise, DEFAULT_PATTERN.priming)


def test_partial_pattern_override_keeps_defaults():
    params = PatternParams.from_dict({"constant": -2000.0}, DEFAULT_PATTERN)
    assert params.constant == -2000.0
    assert params.lag_coefficients == DEFAULT_PATTERN.lag_coefficients
    with pytest.raises(ConfigurationError):
        PatternParams.from_dict({"seasonality": 1.0}, DEFAULT_PATTERN)


def test_stationary_step_mean(stream):
    steps = np.array([stationary_step(stream) for _ in range(200_000)])
    assert steps.mean() == pytest.approx(8680.0, abs=60.0)


def test_prime_history():
    first = prime_history(derive_stream(5, 0))
    second = prime_history(derive_stream(5, 1))
    assert len(first) == N_LAGS
    assert all(value > 0 for value in first)
    assert first != second


def test_pattern_step_hand_evaluation():
    stream = QueuedStream([4000.0])
    assert pattern_step([8000.0] * N_LAGS, DEFAULT_PATTERN, stream) == pytest.approx(8123.2)


def test_pattern_step_resamples_noise_on_negative_value():
    stream = QueuedStream([2000.0, 3500.0])
    assert pattern_step([0.0] * N_LAGS, DEFAULT_PATTERN, stream) == pytest.approx(500.0)
    assert stream.generator.gamma_calls == 2


def test_pattern_mean_uses_most_recent_value_for_lag1():
    params = PatternParams((1.0, 0, 0, 0, 0, 0, 0), 0.0, DEFAULT_PATTERN.noise, DEFAULT_PATTERN.priming)
    assert pattern_mean([1, 2, 3, 4, 5, 6, 7], params) == 7.0
    with pytest.raises(DimensionError):
        pattern_mean([1, 2, 3], params)


def test_pattern_series_is_non_negative_and_above_its_untruncated_mean():
    series = generate_pattern_series(200_000, derive_stream(21, 0))
    assert series.shape == (200_000,)
    assert series.min() >= 0
    # rejecting negative steps lifts the mean above the untruncated one, by a few percent
    assert DEFAULT_PATTERN.untruncated_mean < series.mean() < 1.15 * DEFAULT_PATTERN.untruncated_mean


def test_apply_arm_ranges(stream):
    for _ in range(1000):
        reward, adjustment = apply_arm(10_000.0, ARM_C, stream)
        assert 10_000.0 <= reward <= 12_000.0
        assert reward == pytest.approx(10_000.0 * (1 + adjustment))


def test_apply_arm_identity_adjustment(stream):
    assert apply_arm(7321.5, ArmSpec("N", 0.0, 0.0, 0.0), stream) == (7321.5, 0.0)


def test_apply_arm_a_mean(stream):
    rewards = np.array([apply_arm(10_000.0, ARM_A, stream)[0] for _ in range(100_000)])
    assert rewards.min() >= 8000.0
    assert rewards.max() <= 10_000.0
    assert rewards.mean() == pytest.approx(9000.0, abs=20.0)


def test_apply_arm_rejects_negative_baseline(stream):
    with pytest.raises(ParameterDomainError):
        apply_arm(-1.0, ARM_B, stream)


def test_environment_step_advances_one_day(stream):
    state = start_episode(SimulatorKind.STATIONARY, stream)
    for day in range(1, 6):
        environment_step(state, day % 3, SimulatorKind.STATIONARY, stream)
        assert state.t == day + 1
    assert state.arm_choices == [1, 2, 0, 1, 2]
    assert len(state.rewards) == len(state.baseline_steps) == len(state.adjustments) == 5


def test_stationary_baseline_ignores_arm_choices():
    def baselines(choice):
        stream = derive_stream(99, 0)
        state = start_episode(SimulatorKind.STATIONARY, stream)
        for t in range(30):
            environment_step(state, choice(t), SimulatorKind.STATIONARY, stream)
        return state.baseline_steps

    assert baselines(lambda t: 0) == baselines(lambda t: t % 3)


def test_unknown_arm_index(stream):
    state = start_episode(SimulatorKind.STATIONARY, stream)
    with pytest.raises(ConfigurationError):
        environment_step(state, 3, SimulatorKind.STATIONARY, stream)


def test_pattern_kind_needs_primed_history(stream):
    with pytest.raises(ConfigurationError):
        environment_step(EpisodeState(), 0, SimulatorKind.PATTERN, stream)


def test_feedback_history_switches_series():
    state = EpisodeState(prior_steps=[1.0] * N_LAGS, baseline_steps=[10.0, 20.0], rewards=[11.0, 22.0])
    assert state.feedback_history(FeedbackMode.ADJUSTED) == [1.0] * 5 + [11.0, 22.0]
    assert state.feedback_history(FeedbackMode.BASELINE) == [1.0] * 5 + [10.0, 20.0]


def test_adjusted_feedback_carries_the_arm_into_later_baselines():
    def mean_late_baseline(arm_index, runs=2000):
        late = list()
        for run_index in range(runs):
            stream = derive_stream(8, run_index)
            state = start_episode(SimulatorKind.PATTERN, stream)
            for _ in range(30):
                environment_step(state, arm_index, SimulatorKind.PATTERN, stream, feedback=FeedbackMode.ADJUSTED)
            late.extend(state.baseline_steps[-10:])
        return np.mean(late)

    assert mean_late_baseline(0) < mean_late_baseline(2)


def test_baseline_feedback_matches_across_arms():
    def baselines(arm_index):
        stream = QueuedStream([3000.0] * 40)
        stream.generator.uniform = lambda low, high: (low + high) / 2.0
        state = EpisodeState(prior_steps=[8000.0] * N_LAGS)
        for _ in range(10):
            environment_step(state, arm_index, SimulatorKind.PATTERN, stream, feedback=FeedbackMode.BASELINE)
        return state.baseline_steps

    assert baselines(0) == baselines(2)
