"""
Verification of the pattern step simulator: a long un-adjusted run is regressed on its own seven lags with backward
elimination, the surviving features and coefficients should match the generating model (lag 5 dropped) and the
reference column held in config.VERIFY_REFERENCE.
"""
from dataclasses import dataclass, field

import numpy as np

from src.config import DEFAULT_ALPHA, DEFAULT_BIN_WIDTH, MIN_VERIFY_STEPS, VERIFY_REFERENCE
from src.harness.experiment import experiment_logger
from src.simulators.steps import DEFAULT_PATTERN, N_LAGS, PatternParams, generate_pattern_series
from src.utils.errors import NoDataError, ParameterDomainError
from src.utils.linreg import DesignMatrix, RegressionFit, backward_eliminate
from src.utils.rngdist import derive_stream


@dataclass(frozen=True)
class Histogram:
    bin_starts: np.ndarray
    counts: np.ndarray
    bin_width: float

    @property
    def density(self) -> np.ndarray:
        return self.counts / (self.counts.sum() * self.bin_width)


@dataclass(frozen=True)
class VerificationReport:
    n_steps: int
    seed: int
    alpha: float
    fit: RegressionFit
    survivors: tuple[str, ...]
    histogram: Histogram
    samples: np.ndarray = field(repr=False)

    def deviations(self, reference: dict[str, float] = VERIFY_REFERENCE) -> dict[str, float]:
        return {name: self.fit.coefficient(name) - value for name, value in reference.items() if name in self.survivors}

    def as_dict(self) -> dict:
        return {
            "n_steps": self.n_steps,
            "seed": self.seed,
            "alpha": self.alpha,
            "survivors": list(self.survivors),
            "fit": self.fit.as_dict(),
            "reference": dict(VERIFY_REFERENCE),
            "deviations": self.deviations(),
            "mean_steps": float(self.samples.mean()),
        }


def lag_design(series, lags: int = N_LAGS) -> DesignMatrix:
    """
    Design regressing S_t on S_{t-1} .. S_{t-lags}, features named lag1 .. lag<lags>.
    """
    series = np.asarray(series, dtype=float)
    n = series.shape[0]
    rows = np.column_stack([series[lags - i: n - i] for i in range(1, lags + 1)])
    return DesignMatrix(rows, series[lags:], tuple(f"lag{i}" for i in range(1, lags + 1)))


def histogram(samples, bin_width: float) -> Histogram:
    """
    Bins [start + k * width, start + (k + 1) * width) with start the multiple of @bin_width just below the minimum.
    """
    if bin_width <= 0:
        raise ParameterDomainError(f"bin_width must be positive, got {bin_width}")
    samples = np.asarray(samples, dtype=float).reshape(-1)
    if samples.shape[0] == 0:
        raise NoDataError("Cannot bin an empty sample")
    start = np.floor(samples.min() / bin_width) * bin_width
    indices = np.floor((samples - start) / bin_width).astype(np.int64)
    counts = np.bincount(indices)
    return Histogram(start + bin_width * np.arange(counts.shape[0]), counts, float(bin_width))


def verify_pattern_simulator(n_steps: int, seed: int, params: PatternParams = DEFAULT_PATTERN,
                             alpha: float = DEFAULT_ALPHA, bin_width: float = DEFAULT_BIN_WIDTH) -> VerificationReport:
    if n_steps < MIN_VERIFY_STEPS:
        raise ParameterDomainError(f"Verification needs at least {MIN_VERIFY_STEPS} steps, got {n_steps}")
    series = generate_pattern_series(n_steps, derive_stream(seed, 0), params)
    fit, survivors = backward_eliminate(lag_design(series), alpha)
    experiment_logger.add_log("VERIFY", f"{n_steps} steps, seed {seed}: survivors {', '.join(survivors)}")
    return VerificationReport(n_steps, seed, alpha, fit, survivors, histogram(series, bin_width), series)
