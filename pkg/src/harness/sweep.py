"""
Parameter sweeps: the experiment is rerun for every value of a grid on one strategy's parameter (epsilon or C).
The strategy keeps its label, hence its streams, across the grid; with the default seed offset of 0 every grid point
sees the same random numbers and the comparison between points is not blurred by independent noise.
"""
from dataclasses import dataclass, replace

import numpy as np

from src.harness.experiment import ExperimentConfig, MetricsSummary, experiment_logger, run_experiment
from src.strategies.policies import Policy, StrategyConfig
from src.utils.errors import ConfigurationError, ParameterDomainError


@dataclass(frozen=True)
class SweepResult:
    strategy: str
    parameter: str
    rows: tuple[tuple[float, MetricsSummary], ...]

    @property
    def table(self) -> list[tuple[float, float]]:
        return [(value, summary.overall_mean) for value, summary in self.rows]

    @property
    def best_value(self) -> float:
        # First maximum in grid order
        overall = [summary.overall_mean for _, summary in self.rows]
        return self.rows[int(np.argmax(overall))][0]


def default_parameter(strategy: StrategyConfig) -> str:
    if strategy.policy is Policy.UCB1:
        return "ucb_c"
    if strategy.policy in (Policy.EPSILON_GREEDY, Policy.EPSILON_DECREASING):
        return "epsilon"
    raise ConfigurationError(f"Strategy {strategy.label} ({strategy.policy.value}) has no parameter to sweep")


def parse_grid(text: str) -> list[float]:
    """
    Grid from "start:stop:step" (stop included) or a comma separated list of values.
    """
    text = text.strip()
    try:
        if ":" in text:
            start, stop, step = (float(part) for part in text.split(":"))
            if step <= 0 or stop < start:
                raise ParameterDomainError(f"Invalid grid range {text!r}")
            count = int(np.floor((stop - start) / step + 1e-9)) + 1
            return [round(start + i * step, 12) for i in range(count)]
        values = [float(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        if isinstance(e, ParameterDomainError):
            raise
        raise ParameterDomainError(f"Invalid grid {text!r}: {e}") from e
    if not values:
        raise ParameterDomainError("Empty grid")
    return values


def sweep_parameter(config: ExperimentConfig, strategy: StrategyConfig, grid, parameter: str | None = None,
                    seed_offset: int = 0, progress: bool = False) -> SweepResult:
    """
    Runs @strategy alone for every value of @grid.
        @param parameter: "epsilon" or "ucb_c", inferred from the policy when omitted
        @param seed_offset: grid point i runs with master seed + i * seed_offset
    """
    grid = list(grid)
    if not grid:
        raise ParameterDomainError("Sweep grid must not be empty")
    parameter = parameter or default_parameter(strategy)
    rows = list()
    for index, value in enumerate(grid):
        candidate = strategy.with_parameter(parameter, float(value))
        point = replace(config, strategies=(candidate,), master_seed=config.master_seed + index * seed_offset)
        summary = run_experiment(point, progress=progress)[0]
        experiment_logger.add_log("SWEEP", f"{strategy.label} {parameter}={value}: overall {summary.overall_mean:.1f}")
        rows.append((float(value), summary))
    return SweepResult(strategy.label, parameter, tuple(rows))
