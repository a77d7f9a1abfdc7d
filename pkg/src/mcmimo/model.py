"""System configuration and scenario construction.

All quantities are stored in linear units; dB values are converted once at
ingestion.  Every type here is immutable after construction and safe to share
across concurrent workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import InvalidScenario

__all__ = [
    "SystemConfig",
    "GainTensor",
    "ScenarioSpec",
    "PilotBook",
    "build_scenario",
    "db_to_linear",
    "linear_to_db",
    "paired_reuse_map",
    "shared_reuse_map",
    "load_config_file",
    "CONFIG_KEYS",
]


def db_to_linear(x_db: float) -> float:
    """Convert a dB quantity to linear scale: 10^(x/10)."""
    return float(10.0 ** (x_db / 10.0))


def linear_to_db(x: float) -> float:
    """Inverse of :func:`db_to_linear`."""
    return float(10.0 * np.log10(x))


@dataclass(frozen=True)
class SystemConfig:
    """Scalar system parameters.

    L cells, each with one M-antenna base station and K single-antenna users
    (K <= M).  Training sequences are tau symbols long.  p_f and p_r are the
    linear (SNR-normalized) forward and reverse transmit powers; gamma weighs
    out-of-cell interference in the regularized precoder.
    """

    L: int
    K: int
    M: int
    tau: int
    p_f: float
    p_r: float
    gamma: float = 1.0
    seed: int = 12345

    def __post_init__(self):
        if min(self.L, self.K, self.M, self.tau) < 1:
            raise ValueError("L, K, M, tau must be positive integers")
        if self.K > self.M:
            raise ValueError(f"K={self.K} users exceed M={self.M} antennas")
        if self.p_f <= 0:
            raise ValueError("forward power p_f must be > 0")
        # p_r = 0 is allowed as the degenerate no-training limit
        if self.p_r < 0:
            raise ValueError("reverse power p_r must be >= 0")
        if self.gamma < 0:
            raise ValueError("gamma must be >= 0")


@dataclass(frozen=True)
class GainTensor:
    """Large-scale power gains beta[j, l, k].

    Index j is the user's cell, l the base-station cell, k the user within
    cell j.  Entries are unitless non-negative linear power gains.
    """

    beta: np.ndarray

    def __post_init__(self):
        beta = np.asarray(self.beta, dtype=float)
        if beta.ndim != 3 or beta.shape[0] != beta.shape[1]:
            raise ValueError(f"beta must have shape (L, L, K), got {beta.shape}")
        if np.any(beta < 0):
            raise ValueError("gain entries must be non-negative")
        beta.setflags(write=False)
        object.__setattr__(self, "beta", beta)

    @property
    def L(self) -> int:
        return self.beta.shape[0]

    @property
    def K(self) -> int:
        return self.beta.shape[2]


@dataclass(frozen=True)
class PilotBook:
    """Per-cell training matrices psi[j] of shape (tau, K), unit-norm columns."""

    psi: np.ndarray

    def __post_init__(self):
        psi = np.asarray(self.psi, dtype=complex)
        if psi.ndim != 3:
            raise ValueError(f"psi must have shape (L, tau, K), got {psi.shape}")
        norms = np.linalg.norm(psi, axis=1)
        if not np.allclose(norms, 1.0, atol=1e-10):
            raise ValueError("pilot columns must have unit norm")
        psi.setflags(write=False)
        object.__setattr__(self, "psi", psi)

    @property
    def L(self) -> int:
        return self.psi.shape[0]

    @property
    def tau(self) -> int:
        return self.psi.shape[1]

    @property
    def K(self) -> int:
        return self.psi.shape[2]


def paired_reuse_map(L: int) -> tuple[int, ...]:
    """Two pilot pools alternating across cells: odd cells share pool 0,
    even cells pool 1 (the benchmark reuse layout)."""
    return tuple(j % 2 for j in range(L))


def shared_reuse_map(L: int) -> tuple[int, ...]:
    """All cells reuse one pilot pool (fully contaminated training)."""
    return (0,) * L


@dataclass(frozen=True)
class ScenarioSpec:
    """Cross-gain pattern plus the per-cell pilot pool assignment.

    Direct gains are 1; the cross gain towards a cell's partner (cells are
    paired (1,2), (3,4), ...) is ``cross_gain_a`` and every other cross gain
    is ``cross_gain_b``.
    """

    cross_gain_a: float
    cross_gain_b: float
    pilot_reuse_map: tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        for name, v in (("cross_gain_a", self.cross_gain_a), ("cross_gain_b", self.cross_gain_b)):
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")
        object.__setattr__(self, "pilot_reuse_map", tuple(self.pilot_reuse_map))

    @classmethod
    def benchmark(cls, a: float, b: float, L: int = 4) -> "ScenarioSpec":
        """Paired cross gains with two alternating pilot pools."""
        return cls(a, b, paired_reuse_map(L))

    @classmethod
    def shared_pilot(cls, a: float, b: float, L: int = 2) -> "ScenarioSpec":
        """Paired cross gains with one pilot pool reused by every cell."""
        return cls(a, b, shared_reuse_map(L))


def _partner(j: int, L: int) -> int:
    """Partner cell under the pairing (0,1), (2,3), ... (0-based)."""
    p = j + 1 if j % 2 == 0 else j - 1
    return p if p < L else j


def build_scenario(spec: ScenarioSpec, config: SystemConfig) -> tuple[GainTensor, PilotBook]:
    """Construct the gain tensor and pilot book for a paired-cell scenario.

    Gains: beta[j, l, :] = 1 for j = l, ``a`` for partner cells, ``b``
    otherwise.  Pilots: pool p holds columns [p*K, (p+1)*K) of a tau x tau
    DFT unitary, so pilots are orthonormal within a cell and across pools,
    and cells mapped to the same pool reuse identical training matrices.

    Raises:
        InvalidScenario: tau < K, odd L, or a pool index beyond tau/K pools.
    """
    L, K, tau = config.L, config.K, config.tau
    if tau < K:
        raise InvalidScenario(f"tau={tau} < K={K}: within-cell orthogonal pilots impossible")
    if L % 2 != 0:
        raise InvalidScenario(f"paired cross-gain pattern needs an even cell count, got L={L}")
    reuse = spec.pilot_reuse_map if spec.pilot_reuse_map else paired_reuse_map(L)
    if len(reuse) != L:
        raise InvalidScenario(f"pilot_reuse_map has {len(reuse)} entries for L={L} cells")
    n_pools = max(reuse) + 1
    if n_pools * K > tau:
        raise InvalidScenario(
            f"reuse map needs {n_pools} pools of {K} pilots but tau={tau} supports only {tau // K}"
        )

    beta = np.full((L, L, K), spec.cross_gain_b, dtype=float)
    for j in range(L):
        beta[j, j, :] = 1.0
        p = _partner(j, L)
        if p != j:
            beta[j, p, :] = spec.cross_gain_a

    t = np.arange(tau)
    unitary = np.exp(-2j * np.pi * np.outer(t, t) / tau) / np.sqrt(tau)
    psi = np.stack([unitary[:, reuse[j] * K:(reuse[j] + 1) * K] for j in range(L)])
    return GainTensor(beta), PilotBook(psi)


# -- config-file ingestion ---------------------------------------------------

CONFIG_KEYS = {
    "L": int,
    "K": int,
    "M": int,
    "tau": int,
    "p_f_db": float,
    "p_r_db": float,
    "gamma": float,
    "a": float,
    "b": float,
    "seed": int,
    "trials": int,
}


def load_config_file(path: str | Path) -> dict:
    """Parse a plain-text ``key = value`` scenario file.

    Recognized keys: L, K, M, tau, p_f_db, p_r_db, gamma, a, b, seed, trials.
    Blank lines and ``#`` comments are ignored; unknown keys are an error.
    """
    values: dict = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, val = line.partition("=")
        key = key.strip()
        if key not in CONFIG_KEYS:
            raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = CONFIG_KEYS[key](val.strip())
    return values
