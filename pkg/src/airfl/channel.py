"""Fading channel and receiver-noise generation.

All randomness flows through explicit ``numpy.random.Generator`` instances so
that every realization is reproducible from a seed.  Channel coefficients are
modelled as circularly-symmetric complex Gaussians with unit variance
(real/imag each N(0, 1/2)), so the power gain |h|^2 is unit-mean exponential
(Rayleigh fading).  Phase correction at the transmitter is assumed perfect,
hence only magnitudes appear downstream.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.random import Generator


def db_to_linear(db: float) -> float:
    """Convert a dB power quantity to linear scale: 10^(db/10)."""
    return float(10.0 ** (np.asarray(db) / 10.0))


@dataclass(frozen=True)
class ChannelConfig:
    """Static channel parameters shared by all realizations of a run.

    delta_h is the linear gain gap between the server link and the
    eavesdropper link: |h_ev|^2 = max(|h|^2 - delta_h, 0).  delta_h = 0 models
    an eavesdropper as capable as the aggregation server.
    """

    fading_mode: str = "rayleigh"  # "rayleigh" or "fixed"
    sigma_z2: float = 1.0
    delta_h: float = 0.0
    fixed_gains: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        if self.fading_mode not in ("rayleigh", "fixed"):
            raise ValueError(f"unknown fading_mode {self.fading_mode!r}")
        if self.sigma_z2 < 0:
            raise ValueError("sigma_z2 must be nonnegative")
        if self.delta_h < 0:
            raise ValueError("delta_h must be nonnegative")
        if self.fading_mode == "fixed":
            if self.fixed_gains is None:
                raise ValueError("fixed fading mode requires fixed_gains")
            if any(g < 0 for g in self.fixed_gains):
                raise ValueError("fixed_gains must be nonnegative")


@dataclass(frozen=True)
class ChannelRealization:
    """Per-user linear power gains for the server and eavesdropper links."""

    h2: np.ndarray
    h2_ev: np.ndarray


def sample_channel(config: ChannelConfig, K: int, rng: Generator) -> ChannelRealization:
    """Draw one channel realization for K users.

    In rayleigh mode |h_k|^2 is exponential with unit mean; in fixed mode the
    configured gains are used verbatim.  Eavesdropper gains follow the
    delta_h rule.
    """
    if K < 1:
        raise ValueError("empty system: need at least one user")
    if config.fading_mode == "rayleigh":
        re = rng.normal(0.0, np.sqrt(0.5), size=K)
        im = rng.normal(0.0, np.sqrt(0.5), size=K)
        h2 = re**2 + im**2
    else:
        if len(config.fixed_gains) != K:
            raise ValueError(
                f"fixed_gains has length {len(config.fixed_gains)}, expected K={K}"
            )
        h2 = np.asarray(config.fixed_gains, dtype=float)
    h2_ev = np.maximum(h2 - config.delta_h, 0.0)
    return ChannelRealization(h2=h2, h2_ev=h2_ev)


def sample_gains(config: ChannelConfig, n: int, rng: Generator) -> np.ndarray:
    """Draw n i.i.d. server-link power gains (Monte Carlo helper).

    Same marginal as one user in :func:`sample_channel`; a fixed-mode config
    with a single gain yields a constant vector.
    """
    if n < 1:
        raise ValueError("need at least one sample")
    if config.fading_mode == "rayleigh":
        re = rng.normal(0.0, np.sqrt(0.5), size=n)
        im = rng.normal(0.0, np.sqrt(0.5), size=n)
        return re**2 + im**2
    if len(config.fixed_gains) != 1:
        raise ValueError("fixed-mode Monte Carlo sampling expects a single gain")
    return np.full(n, config.fixed_gains[0], dtype=float)


def awgn(dim: int, sigma2: float, rng: Generator) -> np.ndarray:
    """Zero-mean i.i.d. Gaussian receiver noise with variance sigma2."""
    if sigma2 < 0:
        raise ValueError("noise variance must be nonnegative")
    if dim < 1:
        raise ValueError("dim must be at least 1")
    if sigma2 == 0:
        return np.zeros(dim)
    return rng.normal(0.0, np.sqrt(sigma2), size=dim)
