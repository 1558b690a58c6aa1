import pytest

from src.harness.experiment import ExperimentConfig
from src.strategies.policies import OracleKind, Policy, StrategyConfig
from src.utils.rngdist import derive_stream


@pytest.fixture
def stream():
    return derive_stream(1234, 0)


@pytest.fixture
def mean_strategies():
    return (
        StrategyConfig("UCB1", Policy.UCB1, ucb_c=2500.0),
        StrategyConfig("UCBT", Policy.UCBT, forced_pulls_per_arm=2),
        StrategyConfig("e-greedy", Policy.EPSILON_GREEDY, epsilon=0.11),
        StrategyConfig("e-decr", Policy.EPSILON_DECREASING, epsilon=0.7),
    )


@pytest.fixture
def regression_strategy():
    return StrategyConfig("e-greedy reg", Policy.EPSILON_GREEDY, OracleKind.REGRESSION, epsilon=0.11)


@pytest.fixture
def small_config(mean_strategies):
    return ExperimentConfig(horizon=20, runs=30, master_seed=7, strategies=mean_strategies)
