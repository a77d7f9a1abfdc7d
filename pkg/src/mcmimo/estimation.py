"""MMSE channel estimation from contaminated uplink training.

The per-BS estimate is a fixed linear map of the received training block:
Hhat_jl = sqrt(p_r tau) D_jl^(1/2) Psi_j^H C_l^(-1) Y_l with
C_l = I + p_r tau * sum_i Psi_i D_il Psi_i^H.  C_l is the identity plus a
Gram matrix, hence Hermitian positive definite; all solves use a Cholesky
factorization rather than explicit inversion.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .channel import TrainingObservation, training_mixing_matrix
from .errors import ShapeMismatch
from .model import GainTensor, PilotBook, SystemConfig

__all__ = [
    "ChannelEstimateSet",
    "ErrorCovScalars",
    "estimation_operators",
    "mmse_estimate",
    "error_cov_matrices",
    "error_cov_scalars",
]


@dataclass(frozen=True)
class ChannelEstimateSet:
    """MMSE estimates h_hat[j, l] of shape (K, M)."""

    h_hat: np.ndarray  # (L, L, K, M) complex

    def concatenated(self, l: int) -> np.ndarray:
        """Stack [Hhat_1l ; ... ; Hhat_Ll] into an (L*K, M) matrix."""
        L, _, K, M = self.h_hat.shape
        return self.h_hat[:, l].reshape(L * K, M)


@dataclass(frozen=True)
class ErrorCovScalars:
    """Per-antenna-column error energies delta[j, l] of the scaled errors.

    delta_jl is the expected squared norm of one column of
    Ftilde_jl = sqrt(p_f) D_jl^(1/2) (H_jl - Hhat_jl).
    """

    delta: np.ndarray  # (L, L) float

    def regularizer(self, l: int, gamma: float, K: int) -> float:
        """eta = delta_ll + gamma^2 sum_{j != l} delta_jl + K."""
        cross = self.delta[:, l].sum() - self.delta[l, l]
        return float(self.delta[l, l] + gamma**2 * cross + K)


def estimation_operators(
    pilots: PilotBook, betas: GainTensor, config: SystemConfig
) -> np.ndarray:
    """Linear MMSE estimators E[l] of shape (L*K, tau) per base station.

    Row block j of E[l] maps Y_l to Hhat_jl; the stacked estimate at BS l is
    E[l] @ Y_l.
    """
    L, K, tau = config.L, config.K, config.tau
    ops = np.empty((L, L * K, tau), dtype=complex)
    for l in range(L):
        t_l = training_mixing_matrix(pilots, betas, l)
        c_l = np.eye(tau, dtype=complex) + config.p_r * tau * (t_l @ t_l.conj().T)
        factor = cho_factor(c_l, lower=True)
        ops[l] = np.sqrt(config.p_r * tau) * cho_solve(factor, t_l).conj().T
    return ops


def mmse_estimate(
    obs: TrainingObservation,
    pilots: PilotBook,
    betas: GainTensor,
    config: SystemConfig,
) -> ChannelEstimateSet:
    """MMSE estimates of every H_jl from the training observations."""
    L, K, M, tau = config.L, config.K, config.M, config.tau
    if obs.y.shape != (L, tau, M):
        raise ShapeMismatch(f"observation shape {obs.y.shape}, expected {(L, tau, M)}")
    ops = estimation_operators(pilots, betas, config)
    h_hat = np.empty((L, L, K, M), dtype=complex)
    for l in range(L):
        h_hat[:, l] = (ops[l] @ obs.y[l]).reshape(L, K, M)
    return ChannelEstimateSet(h_hat)


def error_cov_matrices(
    pilots: PilotBook, betas: GainTensor, config: SystemConfig
) -> np.ndarray:
    """Covariance of one column of the scaled estimation error, per (j, l).

    Returns sigma of shape (L, L, K, K) with
    sigma[j, l] = p_f D^(1/2) (I_K - p_r tau D^(1/2) Psi_j^H C_l^(-1) Psi_j D^(1/2)) D^(1/2),
    D = D_jl.  Its trace equals delta_jl.
    """
    L, K, tau = config.L, config.K, config.tau
    sigma = np.empty((L, L, K, K), dtype=complex)
    for l in range(L):
        t_l = training_mixing_matrix(pilots, betas, l)
        c_l = np.eye(tau, dtype=complex) + config.p_r * tau * (t_l @ t_l.conj().T)
        factor = cho_factor(c_l, lower=True)
        for j in range(L):
            pd = pilots.psi[j] * np.sqrt(betas.beta[j, l])[None, :]  # Psi_j D^(1/2)
            gram = pd.conj().T @ cho_solve(factor, pd)
            prior = np.diag(betas.beta[j, l]).astype(complex)
            sigma[j, l] = config.p_f * (prior - config.p_r * tau * np.sqrt(betas.beta[j, l])[:, None] * gram * np.sqrt(betas.beta[j, l])[None, :])
    return sigma


def error_cov_scalars(
    pilots: PilotBook, betas: GainTensor, config: SystemConfig
) -> ErrorCovScalars:
    """Analytic per-column error energies delta_jl.

    delta_jl = p_f tr{ D_jl (I_K + p_r tau D^(1/2) Psi_j^H Lambda_jl Psi_j D^(1/2))^(-1) }
    with Lambda_jl = (I + p_r tau sum_{i != j} Psi_i D_il Psi_i^H)^(-1).
    """
    L, K, tau = config.L, config.K, config.tau
    delta = np.empty((L, L), dtype=float)
    for l in range(L):
        # Gram of the full mixing matrix; remove cell j's own contribution per j
        contribs = np.empty((L, tau, tau), dtype=complex)
        for i in range(L):
            pd = pilots.psi[i] * np.sqrt(betas.beta[i, l])[None, :]
            contribs[i] = pd @ pd.conj().T
        total = contribs.sum(axis=0)
        for j in range(L):
            lam_inv = np.eye(tau, dtype=complex) + config.p_r * tau * (total - contribs[j])
            pd = pilots.psi[j] * np.sqrt(betas.beta[j, l])[None, :]
            gram = pd.conj().T @ cho_solve(cho_factor(lam_inv, lower=True), pd)
            inner = np.eye(K, dtype=complex) + config.p_r * tau * gram
            d_diag = betas.beta[j, l]
            delta[j, l] = config.p_f * np.trace(
                d_diag[:, None] * np.linalg.inv(inner)
            ).real
    return ErrorCovScalars(delta)
