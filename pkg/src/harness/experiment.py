"""
This file contains the Monte-Carlo harness: one episode plays a strategy against a simulator for `horizon` steps, an
experiment averages many independent episodes per strategy.

Streams: an episode of strategy s in run i draws from derive_stream(seed, i, key(s)), key(s) being a hash of the
strategy label, so adding or reordering strategies never changes the others' results. With paired_noise the
environment draws come from a stream shared by all strategies of the run (key ENVIRONMENT_KEY) and only the policy
draws stay per strategy.

Episodes may be spread over worker processes; the per-run reward vectors are stored by run index and reduced in that
order, so a summary does not depend on the number of workers.
"""
import hashlib
from dataclasses import dataclass, field
from multiprocessing import Pool

import numpy as np
from tqdm import tqdm

import src.log as log
from src.config import DEFAULT_HORIZON, DEFAULT_RUNS, DEFAULT_SEED, DEFAULT_THREADS, LAST_DAYS
from src.simulators.arms import ArmSpec, DEFAULT_ARM_BANK
from src.simulators.environment import EpisodeState, FeedbackMode, SimulatorKind, environment_step, start_episode
from src.simulators.steps import DEFAULT_PATTERN, PatternParams
from src.strategies.policies import StrategyConfig, StrategyState, select_arm
from src.utils.errors import ConfigurationError
from src.utils.rngdist import RngStream, derive_stream

ENVIRONMENT_KEY = 0x656E7669726F6E    # "environ"
RUNS_PER_TASK = 500

experiment_logger = log.ExperimentLogHandler()


@dataclass(frozen=True)
class ExperimentConfig:
    horizon: int = DEFAULT_HORIZON
    runs: int = DEFAULT_RUNS
    master_seed: int = DEFAULT_SEED
    simulator: SimulatorKind = SimulatorKind.STATIONARY
    pattern: PatternParams = DEFAULT_PATTERN
    feedback: FeedbackMode = FeedbackMode.ADJUSTED
    arms: tuple[ArmSpec, ...] = DEFAULT_ARM_BANK
    strategies: tuple[StrategyConfig, ...] = ()
    paired_noise: bool = False
    threads: int = DEFAULT_THREADS

    def __post_init__(self):
        try:
            object.__setattr__(self, "simulator", SimulatorKind(self.simulator))
            object.__setattr__(self, "feedback", FeedbackMode(self.feedback))
        except ValueError as e:
            raise ConfigurationError(str(e)) from e
        object.__setattr__(self, "arms", tuple(self.arms))
        object.__setattr__(self, "strategies", tuple(self.strategies))
        if self.horizon < 1:
            raise ConfigurationError(f"horizon must be >= 1, got {self.horizon}")
        if self.runs < 1:
            raise ConfigurationError(f"runs must be >= 1, got {self.runs}")
        if self.threads < 1:
            raise ConfigurationError(f"threads must be >= 1, got {self.threads}")
        if not self.arms:
            raise ConfigurationError("The arm bank is empty")
        labels = [strategy.label for strategy in self.strategies]
        if len(set(labels)) != len(labels):
            raise ConfigurationError(f"Strategy labels must be unique, got {labels}")
        for strategy in self.strategies:
            forced = len(self.arms) * strategy.forced_pulls_per_arm
            if self.horizon < forced:
                raise ConfigurationError(
                    f"horizon {self.horizon} is shorter than the {forced} forced pulls of strategy {strategy.label}"
                )

    def strategy(self, label: str) -> StrategyConfig:
        for strategy in self.strategies:
            if strategy.label == label:
                return strategy
        raise ConfigurationError(f"No strategy labelled {label!r}, known: {[s.label for s in self.strategies]}")


@dataclass(frozen=True)
class MetricsSummary:
    strategy: str
    per_t_mean: np.ndarray = field(repr=False, compare=False)
    overall_mean: float
    last7_mean: float
    runs: int

    @classmethod
    def from_rewards(cls, strategy: str, rewards: np.ndarray) -> "MetricsSummary":
        """
        Summary of a (runs, horizon) reward matrix, the rows in run order.
        """
        rewards = np.atleast_2d(rewards)
        per_t_mean = rewards.mean(axis=0)
        return cls(
            strategy=strategy,
            per_t_mean=per_t_mean,
            overall_mean=float(per_t_mean.mean()),
            last7_mean=float(per_t_mean[-LAST_DAYS:].mean()),
            runs=rewards.shape[0],
        )


def strategy_key(strategy: StrategyConfig) -> int:
    return int.from_bytes(hashlib.sha256(strategy.label.encode("utf-8")).digest()[:8], "big")


def episode_streams(config: ExperimentConfig, strategy: StrategyConfig, run_index: int) -> tuple[RngStream, RngStream]:
    """
    returns (policy stream, environment stream) of one episode
    """
    stream = derive_stream(config.master_seed, run_index, strategy_key(strategy))
    if config.paired_noise:
        return stream, derive_stream(config.master_seed, run_index, ENVIRONMENT_KEY)
    return stream, stream


def play_episode(config: ExperimentConfig, strategy: StrategyConfig, stream: RngStream,
                 env_stream: RngStream | None = None) -> EpisodeState:
    """
    Plays one episode of config.horizon steps: prime (pattern simulator), then select, step, record at every t.
        @param stream: draws of the strategy (schedule, exploration, ties)
        @param env_stream: draws of the simulator, @stream when omitted
    """
    if env_stream is None:
        env_stream = stream
    episode = start_episode(config.simulator, env_stream, config.pattern)
    state = StrategyState.start(strategy, len(config.arms), stream)
    for t in range(1, config.horizon + 1):
        arm_index = select_arm(strategy, episode, state, t, stream, config.arms)
        reward = environment_step(episode, arm_index, config.simulator, env_stream, config.arms, config.pattern,
                                  config.feedback)
        state.record(strategy, episode, arm_index, reward, config.arms)
    return episode


def run_episode(config: ExperimentConfig, strategy: StrategyConfig, stream: RngStream,
                env_stream: RngStream | None = None) -> np.ndarray:
    """
    returns the horizon-length vector of the rewards observed in one episode
    """
    return np.asarray(play_episode(config, strategy, stream, env_stream).rewards)


def _run_task(task: tuple[ExperimentConfig, StrategyConfig, int, int]) -> tuple[int, np.ndarray]:
    config, strategy, start, stop = task
    rewards = np.empty((stop - start, config.horizon))
    for row, run_index in enumerate(range(start, stop)):
        rewards[row] = run_episode(config, strategy, *episode_streams(config, strategy, run_index))
    return start, rewards


def _tasks(config: ExperimentConfig, strategy: StrategyConfig) -> list[tuple]:
    return [(config, strategy, start, min(start + RUNS_PER_TASK, config.runs))
            for start in range(0, config.runs, RUNS_PER_TASK)]


def run_strategy(config: ExperimentConfig, strategy: StrategyConfig, pool=None, progress: bool = False) -> MetricsSummary:
    rewards = np.empty((config.runs, config.horizon))
    tasks = _tasks(config, strategy)
    results = pool.imap_unordered(_run_task, tasks) if pool is not None else map(_run_task, tasks)
    if progress:
        results = tqdm(results, total=len(tasks), desc=strategy.label, unit="task")
    for start, block in results:
        rewards[start:start + block.shape[0]] = block
    return MetricsSummary.from_rewards(strategy.label, rewards)


def run_experiment(config: ExperimentConfig, progress: bool = False) -> list[MetricsSummary]:
    """
    Runs every strategy of @config over config.runs episodes, on config.threads worker processes.
    returns one MetricsSummary per strategy, in config order
    """
    if not config.strategies:
        raise ConfigurationError("The experiment has no strategy")
    experiment_logger.add_log(
        "START", f"{config.simulator.value} simulator, {len(config.strategies)} strategies, {config.runs} runs, "
                 f"horizon {config.horizon}, seed {config.master_seed}, {config.threads} worker(s)"
    )
    summaries = list()
    if config.threads > 1:
        with Pool(processes=config.threads) as pool:
            for strategy in config.strategies:
                summaries.append(run_strategy(config, strategy, pool, progress))
    else:
        for strategy in config.strategies:
            summaries.append(run_strategy(config, strategy, None, progress))
    for summary in summaries:
        experiment_logger.add_log("DONE", f"{summary.strategy}: overall {summary.overall_mean:.1f}, "
                                          f"last {LAST_DAYS} days {summary.last7_mean:.1f}")
    return summaries
