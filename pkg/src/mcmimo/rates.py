"""Achievable-rate evaluation.

Two routes to the same worst-case-Gaussian rate bound
R = log2(1 + |E[g]|^2 / (1 + var{g} + sum E|g'|^2)):

* Monte Carlo over channel and training randomness for any precoder.  The
  expectations over data symbols and receiver noise are taken analytically
  inside the moment definitions, so only effective-gain moments are
  estimated, never per-trial rates.
* Closed form for the single-user, fully-shared-pilot, matched-filter
  setting, including its large-antenna limit, built on moments of the
  (1/sqrt(2)-scaled) chi distribution with 2M degrees of freedom.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .channel import STREAM_CHANNELS, STREAM_TRAIN_NOISE, draw_channel_batch, substream
from .errors import PreconditionViolated
from .estimation import error_cov_scalars, estimation_operators
from .model import GainTensor, PilotBook, SystemConfig
from .precoding import (
    METHOD_MCMMSE,
    METHOD_ZF,
    METHODS,
    fhat_scales,
    regularized_solve,
    zf_solve,
)
from .channel import training_mixing_matrix

__all__ = [
    "ThetaMoments",
    "theta_moments",
    "RateReport",
    "rates_from_moments",
    "monte_carlo_rates",
    "closed_form_rate",
    "asymptotic_rate",
    "shared_pilot_gain_moments",
]


@dataclass(frozen=True)
class ThetaMoments:
    """Moments of theta = ||u||, u an M-vector of i.i.d. CN(0, 1) entries."""

    m1: float
    m2: float

    @property
    def var(self) -> float:
        return self.m2 - self.m1**2


def theta_moments(M: int) -> ThetaMoments:
    """E[theta] = Gamma(M + 1/2) / Gamma(M) and E[theta^2] = M.

    Evaluated through log-gamma differences, stable up to M ~ 1e6.
    """
    if M < 1:
        raise ValueError("M must be a positive integer")
    m1 = float(np.exp(gammaln(M + 0.5) - gammaln(M)))
    return ThetaMoments(m1=m1, m2=float(M))


# -- Monte Carlo --------------------------------------------------------------


def rates_from_moments(signal_mean: np.ndarray, gain_second: np.ndarray) -> np.ndarray:
    """Assemble per-user rates from effective-gain moments.

    signal_mean: (L, K) complex, E[g^{jk}_{jk}].
    gain_second: (L, K, L, K), E[|g^{jk}_{li}|^2] for every transmitter (l, i).
    """
    L, K = signal_mean.shape
    jj = np.arange(L)[:, None]
    kk = np.arange(K)[None, :]
    own_second = gain_second[jj, kk, jj, kk]
    sig_pow = np.abs(signal_mean) ** 2
    sig_var = own_second - sig_pow
    interference = gain_second.sum(axis=(2, 3)) - own_second
    return np.log2(1.0 + sig_pow / (1.0 + sig_var + interference))


@dataclass(frozen=True)
class RateReport:
    """Estimated gain moments, assembled rates, and their standard errors."""

    method: str
    n_trials: int
    signal_mean: np.ndarray  # (L, K) complex
    gain_second_moment: np.ndarray  # (L, K, L, K)
    signal_mean_stderr: np.ndarray  # (L, K)
    gain_second_stderr: np.ndarray  # (L, K, L, K)
    rates: np.ndarray  # (L, K), bits/symbol
    rate_stderr: np.ndarray  # (L, K), delete-a-chunk jackknife

    @property
    def signal_var(self) -> np.ndarray:
        L, K = self.signal_mean.shape
        jj, kk = np.arange(L)[:, None], np.arange(K)[None, :]
        return self.gain_second_moment[jj, kk, jj, kk] - np.abs(self.signal_mean) ** 2

    @property
    def interference_power(self) -> np.ndarray:
        """Second-moment table with the own-signal entry zeroed."""
        out = self.gain_second_moment.copy()
        L, K = self.signal_mean.shape
        jj, kk = np.arange(L)[:, None], np.arange(K)[None, :]
        out[jj, kk, jj, kk] = 0.0
        return out

    @property
    def min_rate(self) -> float:
        return float(self.rates.min())

    @property
    def min_rate_stderr(self) -> float:
        j, k = np.unravel_index(np.argmin(self.rates), self.rates.shape)
        return float(self.rate_stderr[j, k])

    def recompute_rates(self) -> np.ndarray:
        """Re-assemble rates from the stored moments (must equal ``rates``)."""
        return rates_from_moments(self.signal_mean, self.gain_second_moment)


def _chunk_plan(n_trials: int, chunk_size: int) -> list[int]:
    # at least 8 chunks (2 for tiny runs) so the jackknife has groups to delete
    min_chunks = 8 if n_trials >= 16 else 2
    size = min(chunk_size, max(1, -(-n_trials // min_chunks)))
    sizes = [size] * (n_trials // size)
    if n_trials % size:
        sizes.append(n_trials % size)
    return sizes


def monte_carlo_rates(
    config: SystemConfig,
    betas: GainTensor,
    pilots: PilotBook,
    method: str,
    n_trials: int,
    seed: int | None = None,
    perfect_csi: bool = False,
    chunk_size: int = 4096,
) -> RateReport:
    """Monte Carlo estimate of every user's achievable rate under a precoder.

    Per trial: draw channels, synthesize training, estimate, precode every
    cell, and record every effective gain g^{jk}_{li}.  Moments accumulate
    across trials in associative per-chunk sums; the result is deterministic
    for a fixed (seed, chunk_size) partitioning.

    ``perfect_csi=True`` bypasses training and feeds the true channels to the
    precoder (test hook).
    """
    if method not in METHODS:
        raise ValueError(f"unknown precoding method {method!r}; expected one of {METHODS}")
    if n_trials < 2:
        raise ValueError("n_trials must be at least 2")
    seed = config.seed if seed is None else seed
    L, K, M, tau = config.L, config.K, config.M, config.tau
    LK = L * K

    t_mats = np.stack([training_mixing_matrix(pilots, betas, l) for l in range(L)])
    ops = None if perfect_csi else estimation_operators(pilots, betas, config)
    scales = np.stack([fhat_scales(betas, config, l) for l in range(L)])  # (L, LK)
    user_scale = np.sqrt(config.p_f * betas.beta)  # (L, L, K)

    if method == METHOD_ZF:
        weights = eta = None
    else:
        g = config.gamma if method == METHOD_MCMMSE else 0.0
        deltas = error_cov_scalars(pilots, betas, config)
        weights = np.full((L, LK), g**2)
        eta = np.empty(L)
        for l in range(L):
            weights[l, l * K:(l + 1) * K] = 1.0
            eta[l] = deltas.regularizer(l, g, K)

    jj = np.arange(L)[:, None]
    kk = np.arange(K)[None, :]
    sum_g = np.zeros((L, K), dtype=complex)
    sum_abs2 = np.zeros((L, K, L, K))
    sum_abs4 = np.zeros((L, K, L, K))
    chunk_sums: list[tuple[int, np.ndarray, np.ndarray]] = []

    for ci, n in enumerate(_chunk_plan(n_trials, chunk_size)):
        rng_ch = substream(seed, STREAM_CHANNELS, ci)
        rng_no = substream(seed, STREAM_TRAIN_NOISE, ci)
        h = draw_channel_batch(config, rng_ch, n)  # (n, L, L, K, M)
        a = np.empty((L, n, M, K), dtype=complex)
        for l in range(L):
            h_l = h[:, :, l].reshape(n, LK, M)
            if perfect_csi:
                fh = scales[l][None, :, None] * h_l
            else:
                y = np.sqrt(config.p_r * tau) * (t_mats[l] @ h_l)
                y += (rng_no.standard_normal((n, tau, M)) + 1j * rng_no.standard_normal((n, tau, M))) / np.sqrt(2.0)
                fh = scales[l][None, :, None] * (ops[l] @ y)
            if method == METHOD_ZF:
                a[l] = zf_solve(fh[:, l * K:(l + 1) * K, :])
            else:
                a[l], _ = regularized_solve(fh, l, K, weights[l], eta[l])
        gains = np.empty((n, L, K, L, K), dtype=complex)
        for l in range(L):
            cross = np.einsum("njkm,nmi->njki", h[:, :, l], a[l])
            gains[:, :, :, l, :] = user_scale[:, l][None, :, :, None] * cross
        abs2 = np.abs(gains) ** 2
        c_g = gains[:, jj, kk, jj, kk].sum(axis=0)
        c_a2 = abs2.sum(axis=0)
        sum_g += c_g
        sum_abs2 += c_a2
        sum_abs4 += (abs2**2).sum(axis=0)
        chunk_sums.append((n, c_g, c_a2))

    mean = sum_g / n_trials
    second = sum_abs2 / n_trials
    fourth = sum_abs4 / n_trials
    rates = rates_from_moments(mean, second)

    mean_var = second[jj, kk, jj, kk] - np.abs(mean) ** 2
    mean_stderr = np.sqrt(np.maximum(mean_var, 0.0) / n_trials)
    second_stderr = np.sqrt(np.maximum(fourth - second**2, 0.0) / n_trials)

    # delete-a-chunk jackknife for the nonlinearly assembled rates
    n_chunks = len(chunk_sums)
    loo = np.empty((n_chunks, L, K))
    for c, (n_c, c_g, c_a2) in enumerate(chunk_sums):
        loo[c] = rates_from_moments((sum_g - c_g) / (n_trials - n_c), (sum_abs2 - c_a2) / (n_trials - n_c))
    rate_stderr = np.sqrt((n_chunks - 1) / n_chunks * ((loo - loo.mean(axis=0)) ** 2).sum(axis=0))

    return RateReport(
        method=method,
        n_trials=n_trials,
        signal_mean=mean,
        gain_second_moment=second,
        signal_mean_stderr=mean_stderr,
        gain_second_stderr=second_stderr,
        rates=rates,
        rate_stderr=rate_stderr,
    )


# -- closed forms (single user per cell, one shared pilot, matched filter) ----


def _kappas(beta2d: np.ndarray, config: SystemConfig) -> np.ndarray:
    """kappa_l = 1 + p_r tau sum_i beta_il."""
    return 1.0 + config.p_r * config.tau * beta2d.sum(axis=0)


def _require_single_user(betas: GainTensor):
    if betas.K != 1:
        raise PreconditionViolated(f"closed form requires K=1, got K={betas.K}")


def shared_pilot_gain_moments(
    betas: GainTensor, config: SystemConfig, user_cell: int, bs_cell: int
) -> tuple[float, float]:
    """Closed-form (mean, second moment) of the effective gain g at one user.

    Valid for K = 1 with every cell reusing one pilot and in-cell
    matched-filter (ZF) precoding.  The mean is nonzero only for the user's
    own base station.
    """
    _require_single_user(betas)
    j, l = user_cell, bs_cell
    beta2d = betas.beta[:, :, 0]
    kappa = _kappas(beta2d, config)
    tm = theta_moments(config.M)
    prt = config.p_r * config.tau
    est_share = prt * beta2d[j, l] / kappa[l]
    err_share = (1.0 + prt * (beta2d[:, l].sum() - beta2d[j, l])) / kappa[l]
    second = config.p_f * beta2d[j, l] * (est_share * tm.m2 + err_share)
    mean = math.sqrt(config.p_f * beta2d[j, l] * est_share) * tm.m1 if l == j else 0.0
    return mean, second


def closed_form_rate(betas: GainTensor, config: SystemConfig, j: int) -> float:
    """Exact achievable rate of the cell-j user (K = 1, one shared pilot, ZF).

    R_j = log2(1 + S / D) with
    S = p_f b_jj (p_r tau b_jj / kappa_j) E^2[theta],
    D = 1 + p_f b_jj (p_r tau b_jj / kappa_j) var{theta}
        + sum_{l != j} p_f b_jl (p_r tau b_jl / kappa_l) E[theta^2]
        + sum_l p_f b_jl (1 + p_r tau sum_{i != j} b_il) / kappa_l.
    """
    _require_single_user(betas)
    beta2d = betas.beta[:, :, 0]
    L = betas.L
    kappa = _kappas(beta2d, config)
    tm = theta_moments(config.M)
    prt = config.p_r * config.tau
    p_f = config.p_f

    signal = p_f * beta2d[j, j] * (prt * beta2d[j, j] / kappa[j]) * tm.m1**2
    denom = 1.0 + p_f * beta2d[j, j] * (prt * beta2d[j, j] / kappa[j]) * tm.var
    for l in range(L):
        if l != j:
            denom += p_f * beta2d[j, l] * (prt * beta2d[j, l] / kappa[l]) * tm.m2
        denom += p_f * beta2d[j, l] * (1.0 + prt * (beta2d[:, l].sum() - beta2d[j, l])) / kappa[l]
    return float(np.log2(1.0 + signal / denom))


def asymptotic_rate(betas: GainTensor, config: SystemConfig, j: int) -> float:
    """M -> infinity limit of :func:`closed_form_rate`.

    R = log2(1 + (b_jj^2 / kappa_j) / sum_{l != j} (b_jl^2 / kappa_l)).
    Returns ``math.inf`` when no interfering cross gain exists (the rate then
    grows without bound in M).
    """
    _require_single_user(betas)
    beta2d = betas.beta[:, :, 0]
    kappa = _kappas(beta2d, config)
    cross = sum(
        beta2d[j, l] ** 2 / kappa[l] for l in range(betas.L) if l != j
    )
    if cross == 0.0:
        return math.inf
    return float(np.log2(1.0 + (beta2d[j, j] ** 2 / kappa[j]) / cross))
