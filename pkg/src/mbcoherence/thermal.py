"""Cold atoms with Boltzmann-populated equidistant levels.

Temperatures are the dimensionless ``kbT_over_dE = k_B T / ΔE``; level j
(0-based) has energy ``j * ΔE`` so the ground state sits at zero.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .engine import coherence_spectral_series
from .errors import DomainError, OrderError, RegimeError
from .states import Spectrum

LN2 = math.log(2.0)


@dataclass(frozen=True)
class ThermalConfig:
    kbT_over_dE: float
    m: int = 4

    def __post_init__(self):
        if self.m < 2:
            raise DomainError(f"need at least two levels, got m = {self.m}")
        if not self.kbT_over_dE > 0:
            raise DomainError(f"temperature k_B T/ΔE must be positive, got {self.kbT_over_dE!r}")

    @property
    def beta_dE(self) -> float:
        return 1.0 / self.kbT_over_dE

    def partition_function(self) -> float:
        q = math.exp(-self.beta_dE)
        return float(np.sum(q ** np.arange(self.m)))


def thermal_spectrum(cfg: ThermalConfig) -> Spectrum:
    """Boltzmann weights exp(-j/kbT) / Z for j = 0..m-1."""
    if math.isinf(cfg.kbT_over_dE):
        return Spectrum(np.full(cfg.m, 1.0 / cfg.m))
    # q <= 1, so the weights are non-increasing and cannot overflow
    q = math.exp(-cfg.beta_dE)
    weights = q ** np.arange(cfg.m, dtype=float)
    return Spectrum(weights / weights.sum())


def log_temperature_grid(lo: float = 1e-2, hi: float = 1e2, points: int = 81) -> np.ndarray:
    if not (0 < lo < hi):
        raise DomainError("temperature grid needs 0 < lo < hi")
    return np.logspace(math.log10(lo), math.log10(hi), points)


def coherence_vs_temperature(temperatures: Iterable[float], ns: Sequence[int], m: int = 4) -> list:
    """Rows ``(kbT_over_dE, N, W_C)`` in input order: temperature outer, N inner.

    Each temperature needs a single recurrence pass for all requested N.
    """
    ns = [int(n) for n in ns]
    rows = []
    for t in temperatures:
        spec = thermal_spectrum(ThermalConfig(float(t), m))
        for n, res in zip(ns, coherence_spectral_series(spec, ns)):
            rows.append((float(t), n, res))
    return rows


def _check_regime(kbT_over_dE: float) -> None:
    if not kbT_over_dE > 0:
        raise DomainError(f"temperature k_B T/ΔE must be positive, got {kbT_over_dE!r}")
    if kbT_over_dE >= 1.0 / LN2:
        raise RegimeError(
            "low-temperature approximation requires exp(-ΔE/k_B T) < 1/2, "
            f"i.e. k_B T/ΔE << 1/ln 2 ≈ 1.4427; got {kbT_over_dE!r}"
        )


def low_T_approx(kbT_over_dE: float, n: int) -> float:
    """(1 - exp(-ΔE/k_B T))^N."""
    if n < 2:
        raise OrderError(f"need N >= 2, got {n}")
    _check_regime(kbT_over_dE)
    return (-math.expm1(-1.0 / kbT_over_dE)) ** n


def low_T_linear(kbT_over_dE: float, n: int) -> float:
    """1 - N exp(-ΔE/k_B T), valid once k_B T/ΔE << 1/ln N."""
    if n < 2:
        raise OrderError(f"need N >= 2, got {n}")
    _check_regime(kbT_over_dE)
    return 1.0 - n * math.exp(-1.0 / kbT_over_dE)


def _check_target(w_target: float, n: int) -> None:
    if not (0.0 < w_target < 1.0):
        raise DomainError(f"target coherence must lie in (0, 1), got {w_target!r}")
    if n < 2:
        raise OrderError(f"need N >= 2, got {n}")


def admissible_temperature(w_target: float, n: int) -> float:
    """Largest k_B T/ΔE keeping (1 - e^{-ΔE/k_B T})^N at ``w_target``."""
    _check_target(w_target, n)
    root = math.exp(math.log(w_target) / n)
    return -1.0 / math.log1p(-root)


def admissible_temperature_simple(w_target: float, n: int) -> float:
    """1 / ln[N / (1 - W)], the linearized form of admissible_temperature."""
    _check_target(w_target, n)
    return 1.0 / math.log(n / (1.0 - w_target))
