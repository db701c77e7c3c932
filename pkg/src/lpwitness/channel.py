"""Binary-input output-symmetric channels and their LLR statistics.

All LLRs are natural-log likelihood ratios log(P(y|0)/P(y|1)) under the
all-zeros transmission convention, so positive values favor bit 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

BSC = "bsc"
BIAWGN = "biawgn"


@dataclass(frozen=True)
class Channel:
    """A memoryless channel: BSC with crossover p in (0, 1/2), or binary-input
    AWGN with noise std sigma > 0 and unit-energy BPSK (bit 0 -> +1)."""

    kind: str
    param: float

    def __post_init__(self):
        if self.kind == BSC:
            if not 0.0 < self.param < 0.5:
                raise ValueError("BSC crossover must lie in (0, 1/2)")
        elif self.kind == BIAWGN:
            if not self.param > 0.0:
                raise ValueError("AWGN noise std must be positive")
        else:
            raise ValueError(f"unknown channel kind {self.kind!r}")


def bsc(p: float) -> Channel:
    return Channel(BSC, p)


def biawgn(sigma: float) -> Channel:
    return Channel(BIAWGN, sigma)


def sample_llrs(ch: Channel, n: int, seed) -> np.ndarray:
    """I.i.d. LLRs of n channel outputs given that bit 0 was sent.

    `seed` may be anything numpy.random.default_rng accepts, including an
    existing Generator; same seed gives the identical vector.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    rng = np.random.default_rng(seed)
    if ch.kind == BSC:
        mag = math.log((1.0 - ch.param) / ch.param)
        flips = rng.random(n) < ch.param
        return np.where(flips, -mag, mag)
    y = 1.0 + ch.param * rng.standard_normal(n)
    return 2.0 * y / ch.param**2


def bhattacharyya(ch: Channel) -> float:
    """Bhattacharyya parameter sum_y sqrt(P(y|0)P(y|1)), in (0,1).

    BSC: 2*sqrt(p(1-p)).  BiAWGN: exp(-1/(2 sigma^2)).
    """
    if ch.kind == BSC:
        return 2.0 * math.sqrt(ch.param * (1.0 - ch.param))
    return math.exp(-1.0 / (2.0 * ch.param**2))


def param_for_gamma(kind: str, gamma: float) -> float:
    """Channel parameter whose Bhattacharyya value equals gamma."""
    if not 0.0 < gamma < 1.0:
        raise ValueError("gamma must lie in (0,1)")
    if kind == BSC:
        return (1.0 - math.sqrt(1.0 - gamma * gamma)) / 2.0
    if kind == BIAWGN:
        return math.sqrt(-1.0 / (2.0 * math.log(gamma)))
    raise ValueError(f"unknown channel kind {kind!r}")


def threshold_param(kind: str, k_weight: int) -> float:
    """Channel parameter at which the Bhattacharyya value hits 1/(K-1),
    the decay threshold of the union bounds."""
    if k_weight <= 2:
        raise ValueError("threshold defined for K > 2")
    return param_for_gamma(kind, 1.0 / (k_weight - 1))
