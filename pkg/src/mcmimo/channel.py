"""Small-scale fading draws and uplink training synthesis.

Randomness is organized as one substream per logical purpose (channel taps,
training noise, downlink noise, data symbols), each derived deterministically
from the master seed, so Monte Carlo trials are reproducible and independent
of how work is chunked across purposes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ShapeMismatch
from .model import GainTensor, PilotBook, SystemConfig

__all__ = [
    "ChannelSet",
    "TrainingObservation",
    "substream",
    "complex_gaussian",
    "draw_channels",
    "draw_channel_batch",
    "training_mixing_matrix",
    "synth_training",
    "synth_training_batch",
    "STREAM_CHANNELS",
    "STREAM_TRAIN_NOISE",
    "STREAM_DOWNLINK_NOISE",
    "STREAM_SYMBOLS",
]

STREAM_CHANNELS = 0
STREAM_TRAIN_NOISE = 1
STREAM_DOWNLINK_NOISE = 2
STREAM_SYMBOLS = 3


def substream(seed: int, purpose: int, index: int = 0) -> np.random.Generator:
    """Generator for (purpose, index) derived from the master seed.

    Distinct (purpose, index) pairs give statistically independent streams;
    the same pair always reproduces the same stream.
    """
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(purpose, index))
    return np.random.Generator(np.random.PCG64(ss))


def complex_gaussian(rng: np.random.Generator, shape: tuple[int, ...]) -> np.ndarray:
    """i.i.d. circularly-symmetric CN(0, 1) samples (real/imag parts N(0, 1/2))."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


@dataclass(frozen=True)
class ChannelSet:
    """Fading matrices h[j, l] of shape (K, M) between cell-j users and BS l."""

    h: np.ndarray  # (L, L, K, M) complex

    def __post_init__(self):
        if self.h.ndim != 4 or self.h.shape[0] != self.h.shape[1]:
            raise ShapeMismatch(f"channel tensor must be (L, L, K, M), got {self.h.shape}")


@dataclass(frozen=True)
class TrainingObservation:
    """Received training blocks y[l] of shape (tau, M), noise included."""

    y: np.ndarray  # (L, tau, M) complex


def draw_channel_batch(config: SystemConfig, rng: np.random.Generator, n: int) -> np.ndarray:
    """n independent channel tensors, shape (n, L, L, K, M)."""
    return complex_gaussian(rng, (n, config.L, config.L, config.K, config.M))


def draw_channels(config: SystemConfig, rng: np.random.Generator) -> ChannelSet:
    """One realization of all L*L fading matrices."""
    return ChannelSet(draw_channel_batch(config, rng, 1)[0])


def training_mixing_matrix(pilots: PilotBook, betas: GainTensor, l: int) -> np.ndarray:
    """T_l = [Psi_1 D_1l^(1/2) ... Psi_L D_Ll^(1/2)], shape (tau, L*K).

    Stacking users of all cells, the noiseless training block at BS l is
    sqrt(p_r tau) T_l H_l with H_l the (L*K, M) stack of fading rows.
    """
    L, K = betas.L, betas.K
    cols = [pilots.psi[j] * np.sqrt(betas.beta[j, l])[None, :] for j in range(L)]
    return np.concatenate(cols, axis=1).reshape(pilots.tau, L * K)


def synth_training_batch(
    h_batch: np.ndarray,
    pilots: PilotBook,
    betas: GainTensor,
    config: SystemConfig,
    rng: np.random.Generator,
    noise: bool = True,
) -> np.ndarray:
    """Training observations for a batch of channels, shape (n, L, tau, M)."""
    n, L, _, K, M = h_batch.shape
    if (L, K, M) != (config.L, config.K, config.M):
        raise ShapeMismatch(f"channel batch {h_batch.shape} inconsistent with config")
    if pilots.psi.shape != (L, config.tau, K):
        raise ShapeMismatch(f"pilot book {pilots.psi.shape} inconsistent with config")
    scale = np.sqrt(config.p_r * config.tau)
    y = np.empty((n, L, config.tau, M), dtype=complex)
    for l in range(L):
        t_l = training_mixing_matrix(pilots, betas, l)
        y[:, l] = scale * (t_l @ h_batch[:, :, l].reshape(n, L * K, M))
    if noise:
        y += complex_gaussian(rng, y.shape)
    return y


def synth_training(
    channels: ChannelSet,
    pilots: PilotBook,
    betas: GainTensor,
    config: SystemConfig,
    rng: np.random.Generator,
    noise: bool = True,
) -> TrainingObservation:
    """Received uplink training Y_l = sqrt(p_r tau) sum_j Psi_j D_jl^(1/2) H_jl + W_l.

    ``noise=False`` is a test hook that drops W_l so algebraic identities can
    be checked exactly.
    """
    y = synth_training_batch(channels.h[None], pilots, betas, config, rng, noise=noise)
    return TrainingObservation(y[0])
