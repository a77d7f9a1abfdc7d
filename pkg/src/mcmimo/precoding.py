"""Linear downlink precoders, all normalized to unit trace power.

Three methods share this module: zero-forcing on the in-cell estimate, the
regularized multi-cell MMSE precoder, and GPS as its gamma = 0 special case
(literally the same code path).  The batched kernels operate on stacked
trial axes so the Monte Carlo engine and the single-shot API share one
implementation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import RankDeficient
from .estimation import ChannelEstimateSet, ErrorCovScalars
from .model import GainTensor, SystemConfig

__all__ = [
    "Precoder",
    "PrecoderParams",
    "zf_precoder",
    "mcmmse_precoder",
    "gps_precoder",
    "objective_value",
    "zf_solve",
    "regularized_solve",
    "fhat_scales",
    "METHOD_ZF",
    "METHOD_GPS",
    "METHOD_MCMMSE",
    "METHODS",
    "RCOND_THRESHOLD",
]

METHOD_ZF = "ZF"
METHOD_GPS = "GPS"
METHOD_MCMMSE = "MCMMSE"
METHODS = (METHOD_ZF, METHOD_GPS, METHOD_MCMMSE)

# reciprocal condition number below which the ZF Gram matrix is treated as
# rank deficient (shared in-cell pilots provably collapse its rank)
RCOND_THRESHOLD = 1e-12


@dataclass(frozen=True)
class PrecoderParams:
    """Derived scalars of the regularized precoder."""

    gamma: float
    eta: float
    alpha: float


@dataclass(frozen=True)
class Precoder:
    """M x K precoding matrix with tr{A^H A} = 1."""

    a: np.ndarray
    method: str
    params: PrecoderParams | None = None

    def __post_init__(self):
        power = float(np.sum(np.abs(self.a) ** 2))
        if abs(power - 1.0) > 1e-10:
            raise ValueError(f"precoder trace power {power} deviates from 1")


def fhat_scales(betas: GainTensor, config: SystemConfig, l: int) -> np.ndarray:
    """Row scales sqrt(p_f * beta_jlk) turning stacked Hhat into Fhat, shape (L*K,)."""
    return np.sqrt(config.p_f * betas.beta[:, l, :]).reshape(betas.L * betas.K)


def zf_solve(gll: np.ndarray) -> np.ndarray:
    """Trace-normalized pseudo-inverse A = G^H (G G^H)^(-1) / sqrt(tr{(G G^H)^(-1)}).

    ``gll`` has shape (..., K, M); leading axes are batch trials.

    Raises:
        RankDeficient: reciprocal condition number of G G^H below threshold.
    """
    gram = gll @ np.conj(np.swapaxes(gll, -1, -2))
    eig = np.linalg.eigvalsh(gram)
    rcond = eig[..., 0] / eig[..., -1]
    if np.any(eig[..., -1] <= 0) or np.any(rcond < RCOND_THRESHOLD):
        raise RankDeficient(
            "estimated in-cell channel is rank deficient "
            f"(rcond={float(np.min(rcond)):.3e} < {RCOND_THRESHOLD:g})"
        )
    ginv = np.linalg.inv(gram)
    a = np.conj(np.swapaxes(gll, -1, -2)) @ ginv
    norm = np.sqrt(np.trace(ginv, axis1=-2, axis2=-1).real)
    return a / norm[..., None, None]


def regularized_solve(
    fhat: np.ndarray, l: int, K: int, weights: np.ndarray, eta: float
) -> tuple[np.ndarray, np.ndarray]:
    """Solve (Fhat^H W Fhat + eta I) X = Fhat_ll^H and normalize to unit trace.

    ``fhat`` has shape (..., L*K, M): the stacked scaled estimates at one BS.
    Returns (A, alpha) with A = X / alpha and alpha = ||X||_F, so
    tr{A^H A} = 1.  eta >= K > 0 keeps the system positive definite.
    """
    m = fhat.shape[-1]
    b = np.einsum("...km,k,...kp->...mp", np.conj(fhat), weights, fhat)
    b += eta * np.eye(m)
    rhs = np.conj(np.swapaxes(fhat[..., l * K:(l + 1) * K, :], -1, -2))
    x = np.linalg.solve(b, rhs)
    alpha = np.sqrt(np.sum(np.abs(x) ** 2, axis=(-2, -1)))
    return x / alpha[..., None, None], alpha


def zf_precoder(
    est: ChannelEstimateSet, betas: GainTensor, config: SystemConfig, l: int
) -> Precoder:
    """Zero-forcing precoder for cell l from the in-cell estimate.

    A_l = Ghat^H (Ghat Ghat^H)^(-1), trace-normalized, with
    Ghat = sqrt(p_f) D_ll^(1/2) Hhat_ll.
    """
    gll = np.sqrt(config.p_f * betas.beta[l, l])[:, None] * est.h_hat[l, l]
    return Precoder(zf_solve(gll), METHOD_ZF)


def mcmmse_precoder(
    est: ChannelEstimateSet,
    deltas: ErrorCovScalars,
    betas: GainTensor,
    config: SystemConfig,
    l: int,
    gamma: float | None = None,
) -> Precoder:
    """Multi-cell MMSE precoder for cell l.

    A_l = (1/alpha) (Fhat_ll^H Fhat_ll + gamma^2 sum_{j != l} Fhat_jl^H Fhat_jl
    + eta I)^(-1) Fhat_ll^H with eta = delta_ll + gamma^2 sum_{j != l} delta_jl + K
    and alpha fixed by the unit-trace constraint.
    """
    g = config.gamma if gamma is None else gamma
    K = config.K
    fhat = fhat_scales(betas, config, l)[:, None] * est.concatenated(l)
    weights = np.full(betas.L * K, g**2)
    weights[l * K:(l + 1) * K] = 1.0
    eta = deltas.regularizer(l, g, K)
    a, alpha = regularized_solve(fhat, l, K, weights, eta)
    method = METHOD_GPS if g == 0.0 else METHOD_MCMMSE
    return Precoder(a, method, PrecoderParams(gamma=g, eta=eta, alpha=float(alpha)))


def gps_precoder(
    est: ChannelEstimateSet,
    deltas: ErrorCovScalars,
    betas: GainTensor,
    config: SystemConfig,
    l: int,
) -> Precoder:
    """Single-cell MMSE baseline: the gamma = 0 special case."""
    return mcmmse_precoder(est, deltas, betas, config, l, gamma=0.0)


def objective_value(
    a: np.ndarray | Precoder,
    alpha: float,
    est: ChannelEstimateSet,
    deltas: ErrorCovScalars,
    betas: GainTensor,
    config: SystemConfig,
    l: int,
    gamma: float | None = None,
) -> float:
    """Mean-square error-plus-interference objective of the precoder design.

    The expectations over data symbols, receiver noise, and estimation error
    are taken analytically:

        J = alpha^2 tr{A^H (Fhat_ll^H Fhat_ll + gamma^2 sum_{j!=l} Fhat_jl^H Fhat_jl
            + (delta_ll + gamma^2 sum_{j!=l} delta_jl) I) A}
            - 2 alpha Re tr{Fhat_ll A} + (alpha^2 + 1) K
    """
    g = config.gamma if gamma is None else gamma
    K = config.K
    amat = a.a if isinstance(a, Precoder) else np.asarray(a)
    fhat = fhat_scales(betas, config, l)[:, None] * est.concatenated(l)
    weights = np.full(betas.L * K, g**2)
    weights[l * K:(l + 1) * K] = 1.0
    dsum = deltas.regularizer(l, g, K) - K
    quad = np.einsum("km,k,kp->mp", np.conj(fhat), weights, fhat) + dsum * np.eye(config.M)
    fll = fhat[l * K:(l + 1) * K]
    j = alpha**2 * np.trace(amat.conj().T @ quad @ amat).real
    j -= 2.0 * alpha * np.trace(fll @ amat).real
    return float(j + (alpha**2 + 1.0) * K)
