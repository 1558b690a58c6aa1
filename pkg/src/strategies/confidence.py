"""
Upper confidence scores.
    UCB1_a = mean_a + C * sqrt(2 ln t / n_a)
    UCBT_a = mean_a + t* * s_a / sqrt(n_a), t* the one-sided 99% Student-t critical value with n_a - 1 degrees of freedom
UCBT needs no exploration constant: the confidence width is on the scale of the rewards.
"""
import math

from scipy import stats

from src.strategies.oracles import ArmStats
from src.utils.errors import InsufficientDataError, NoDataError, ParameterDomainError

CONFIDENCE = 0.99
MAX_TABLE_DF = 200
NORMAL_CRITICAL_VALUE = 2.326

# Lookup table, df 1..200, three decimals
T_TABLE = tuple(round(float(stats.t.ppf(CONFIDENCE, df)), 3) for df in range(1, MAX_TABLE_DF + 1))


def critical_value(df: int) -> float:
    if df < 1:
        raise ParameterDomainError(f"Degrees of freedom must be >= 1, got {df}")
    if df > MAX_TABLE_DF:
        return NORMAL_CRITICAL_VALUE
    return T_TABLE[df - 1]


def ucb1_score(stats: ArmStats, total_pulls: int, c: float) -> float:
    if stats.pull_count < 1:
        raise NoDataError("UCB1 score of an arm never pulled")
    if total_pulls < 1:
        raise ParameterDomainError(f"total_pulls must be >= 1, got {total_pulls}")
    return stats.mean + c * math.sqrt(2.0 * math.log(total_pulls) / stats.pull_count)


def ucbt_score(stats: ArmStats, df: int | None = None) -> float:
    """
    UCBT score of an arm pulled at least twice. A zero sample deviation gives a zero bonus.
        @param df: degrees of freedom, pull_count - 1 when omitted
    """
    if stats.pull_count < 2:
        raise InsufficientDataError(f"UCBT needs 2 pulls per arm, arm has {stats.pull_count}")
    if df is None:
        df = stats.pull_count - 1
    std = stats.std
    if std == 0.0:
        return stats.mean
    return stats.mean + critical_value(df) * std / math.sqrt(stats.pull_count)
