"""
This file contains the two virtual players, i.e. the generators of the baseline daily steps S_t:
    - the stationary simulator draws every day independently from Gamma(2.8, 3100)
    - the pattern simulator follows a 7-lag linear recursion S_t = C + sum_i beta_i * S_{t-i} + g with
      g ~ Gamma(1.1, 3500), primed by seven stationary draws. A negative S_t is rejected and g alone is redrawn.
Histories are chronological: history[-1] is S_{t-1} and history[-7] is S_{t-7}.
"""
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from src.config import PATTERN_CONFIG, STATIONARY_SHAPE, STATIONARY_SCALE
from src.utils.errors import ConfigurationError, DimensionError
from src.utils.rngdist import GammaParams, RngStream, sample_gamma

N_LAGS = 7
STATIONARY_GAMMA = GammaParams(STATIONARY_SHAPE, STATIONARY_SCALE)


@dataclass(frozen=True)
class PatternParams:
    lag_coefficients: tuple[float, ...]    # beta_1 .. beta_7
    constant: float
    noise: GammaParams
    priming: GammaParams

    def __post_init__(self):
        if len(self.lag_coefficients) != N_LAGS:
            raise ConfigurationError(f"Pattern simulator needs {N_LAGS} lag coefficients, got {len(self.lag_coefficients)}")
        object.__setattr__(self, "lag_coefficients", tuple(float(c) for c in self.lag_coefficients))

    def to_dict(self) -> dict:
        return {
            "lag_coefficients": list(self.lag_coefficients),
            "constant": self.constant,
            "noise": self.noise.to_dict(),
            "priming": self.priming.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict, defaults: "PatternParams | None" = None) -> "PatternParams":
        """
        Builds parameters from a (possibly partial) dictionary, missing keys are taken from @defaults.
        """
        unknown = set(data) - {"lag_coefficients", "constant", "noise", "priming"}
        if unknown:
            raise ConfigurationError(f"Unknown pattern keys: {sorted(unknown)}")
        base = defaults.to_dict() if defaults is not None else {}
        merged = {**base, **data}
        try:
            return cls(
                lag_coefficients=tuple(merged["lag_coefficients"]),
                constant=float(merged["constant"]),
                noise=_gamma_from_dict(merged["noise"]),
                priming=_gamma_from_dict(merged["priming"]),
            )
        except KeyError as e:
            raise ConfigurationError(f"Pattern parameters are missing key {e}") from e

    @property
    def untruncated_mean(self) -> float:
        """
        Long-run mean of the un-adjusted recursion without the rejection of negative values. The rejection only ever
        raises a draw, so this is a lower bound of the mean of generate_pattern_series.
        """
        return (self.constant + self.noise.mean) / (1.0 - sum(self.lag_coefficients))


def _gamma_from_dict(data: dict) -> GammaParams:
    unknown = set(data) - {"shape", "scale"}
    if unknown:
        raise ConfigurationError(f"Unknown Gamma keys: {sorted(unknown)}")
    try:
        return GammaParams(float(data["shape"]), float(data["scale"]))
    except KeyError as e:
        raise ConfigurationError(f"Gamma parameters are missing key {e}") from e


def load_pattern_params(path: str | Path = PATTERN_CONFIG) -> PatternParams:
    with open(path, 'r') as file:
        data = json.load(file)
    return PatternParams.from_dict(data.get("pattern", {}))


DEFAULT_PATTERN = load_pattern_params()


def stationary_step(stream: RngStream, params: GammaParams = STATIONARY_GAMMA) -> float:
    return sample_gamma(stream, params)


def prime_history(stream: RngStream, params: GammaParams = DEFAULT_PATTERN.priming) -> list[float]:
    return [sample_gamma(stream, params) for _ in range(N_LAGS)]


def pattern_mean(history, params: PatternParams) -> float:
    """
    Deterministic part C + sum_i beta_i * S_{t-i} of the recursion.
    """
    if len(history) != N_LAGS:
        raise DimensionError(f"Pattern step needs the last {N_LAGS} values, got {len(history)}")
    total = params.constant
    for i, beta in enumerate(params.lag_coefficients, start=1):
        total += beta * history[-i]
    return total


def pattern_step(history, params: PatternParams, stream: RngStream) -> float:
    deterministic = pattern_mean(history, params)
    while True:
        steps = deterministic + sample_gamma(stream, params.noise)
        if steps >= 0:
            return steps


def generate_pattern_series(n_steps: int, stream: RngStream, params: PatternParams = DEFAULT_PATTERN) -> np.ndarray:
    """
    Un-adjusted run of the pattern simulator (no arm involved), priming days excluded.
    """
    series = prime_history(stream, params.priming)
    for _ in range(n_steps):
        series.append(pattern_step(series[-N_LAGS:], params, stream))
    return np.asarray(series[N_LAGS:])
