"""
This file contains the random number plumbing of the simulators. Every episode owns one RngStream derived from
(master seed, run index[, keys...]) through numpy's SeedSequence, so a run can be reproduced bit-for-bit whatever
the order or the process it is executed in. The Gamma sampler is numpy's, a Marsaglia-Tsang rejection sampler for
shape >= 1 (both shapes used here, 2.8 and 1.1, are above 1).
"""
from dataclasses import dataclass

import numpy as np
from scipy import stats

from src.utils.errors import ParameterDomainError

_MASK_64 = (1 << 64) - 1


class RngStream:

    def __init__(self, master_seed: int, run_index: int, *keys: int):
        """
        A reproducible random stream.
            @param master_seed: 64-bit experiment seed
            @param run_index: index of the run (episode) the stream belongs to
            @param keys: optional extra 64-bit keys (strategy key, environment key...)
        """
        entropy = [master_seed & _MASK_64, run_index & _MASK_64] + [key & _MASK_64 for key in keys]
        seed_sequence = np.random.SeedSequence(entropy)
        self.stream_id = int(seed_sequence.generate_state(1, dtype=np.uint64)[0])
        self.generator = np.random.Generator(np.random.PCG64(seed_sequence))

    def __repr__(self):
        return f"RngStream(stream_id={self.stream_id:#018x})"


@dataclass(frozen=True)
class GammaParams:
    shape: float    # k
    scale: float    # theta, multiplies the unit-scale draw

    def __post_init__(self):
        if not (self.shape > 0 and self.scale > 0):
            raise ParameterDomainError(f"Gamma parameters must be positive, got shape={self.shape} scale={self.scale}")

    @property
    def mean(self) -> float:
        return self.shape * self.scale

    @property
    def variance(self) -> float:
        return self.shape * self.scale ** 2

    @property
    def mode(self) -> float:
        return max(self.shape - 1.0, 0.0) * self.scale

    def to_dict(self) -> dict:
        return {"shape": self.shape, "scale": self.scale}


def derive_stream(master_seed: int, run_index: int, *keys: int) -> RngStream:
    """
    Returns the stream for (master_seed, run_index[, keys]). The sequence only depends on these integers.
    """
    return RngStream(master_seed, run_index, *keys)


def sample_gamma(stream: RngStream, params: GammaParams, size: int | None = None):
    """
    One draw from Gamma(shape, scale), or an array of @size draws.
    """
    if not isinstance(params, GammaParams):
        raise ParameterDomainError(f"Expected GammaParams, got {type(params).__name__}")
    if size is None:
        return float(stream.generator.gamma(params.shape, params.scale))
    return stream.generator.gamma(params.shape, params.scale, size=size)


def sample_uniform(stream: RngStream, low: float, high: float) -> float:
    if low > high:
        raise ParameterDomainError(f"Uniform interval is empty: low={low} > high={high}")
    if low == high:
        return float(low)
    return float(stream.generator.uniform(low, high))


def gamma_pdf(x, params: GammaParams):
    return stats.gamma.pdf(x, a=params.shape, scale=params.scale)


def gamma_cdf(x, params: GammaParams):
    return stats.gamma.cdf(x, a=params.shape, scale=params.scale)
