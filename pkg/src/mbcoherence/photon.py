"""Photons with random arrival times.

The internal state ``∫ dt P(t) |t><t|`` has the same nonzero spectrum as
the integral operator with kernel ``sqrt(P(t) P(t')) <t|t'>``.  Only the
modulus ``exp(-Δ²(t-t')²/2)`` of the overlap matters: the central-frequency
phase is removed by a diagonal unitary and never enters.  The kernel is
discretized on Gauss-Legendre nodes (Nyström method).  Times are measured
in units of the arrival-time spread σ, so the only physical parameter is
the product σΔ.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Optional

import numpy as np
from scipy.integrate import trapezoid
from scipy.linalg import eigh

from .engine import CoherenceResult, coherence_spectral, coherence_spectral_series
from .errors import DiscretizationError, DomainError, OrderError, RegimeError, ValidationError
from .states import Spectrum

TRACE_TOL = 1e-6
EIGEN_CUTOFF = 1e-14
#: Nodes per unit of (window half-width x σΔ) needed to resolve the kernel width.
NODES_PER_KERNEL_WIDTH = 6.0
MAX_QUADRATURE_POINTS = 4000
FAINT_LIMIT = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class TabulatedDensity:
    """Arrival-time density given as (t, P(t)) samples, linearly interpolated.

    Renormalized on construction; ``mean`` and ``std`` are those of the
    interpolated density.
    """

    t: tuple
    p: tuple

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        p = np.asarray(self.p, dtype=float)
        if t.ndim != 1 or t.shape != p.shape or t.size < 2:
            raise ValidationError("density table needs at least two (t, P) rows")
        if np.any(np.diff(t) <= 0):
            raise ValidationError("density table times must be strictly increasing")
        if np.any(p < 0):
            raise ValidationError("density values must be non-negative")
        area = trapezoid(p, t)
        if area <= 0:
            raise ValidationError("density has zero area")
        object.__setattr__(self, "t", tuple(t))
        object.__setattr__(self, "p", tuple(p / area))

    @classmethod
    def from_file(cls, path) -> "TabulatedDensity":
        rows = []
        for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.replace(",", " ").split()
            if len(parts) != 2:
                raise ValidationError(f"{path}:{lineno}: expected two columns")
            rows.append((float(parts[0]), float(parts[1])))
        t, p = zip(*rows) if rows else ((), ())
        return cls(t, p)

    def __call__(self, x) -> np.ndarray:
        return np.interp(x, self.t, self.p, left=0.0, right=0.0)

    def _moment(self, k: int) -> float:
        # exact moments of the piecewise-linear density via a fine trapezoid grid
        t = np.asarray(self.t)
        fine = np.linspace(t[0], t[-1], 20 * t.size + 1)
        return float(trapezoid(fine ** k * self(fine), fine))

    @property
    def mean(self) -> float:
        return self._moment(1)

    @property
    def std(self) -> float:
        return math.sqrt(max(self._moment(2) - self.mean ** 2, 0.0))

    @property
    def support(self) -> tuple:
        return self.t[0], self.t[-1]


@dataclass(frozen=True)
class PhotonConfig:
    sigma_delta: float
    quadrature_points: int = 200
    window_halfwidth: float = 8.0
    density: Optional[TabulatedDensity] = None

    def __post_init__(self):
        if not (self.sigma_delta >= 0 and math.isfinite(self.sigma_delta)):
            raise DomainError(f"σΔ must be a finite non-negative number, got {self.sigma_delta!r}")
        if self.quadrature_points < 16:
            raise DomainError("need at least 16 quadrature points")
        if self.window_halfwidth < 5:
            raise DomainError("quadrature window must extend at least 5σ on each side")


def effective_points(cfg: PhotonConfig) -> int:
    """Node count actually used: the configured count, raised if needed.

    The kernel has width 1/(σΔ) in units of σ, so the node spacing must
    shrink as σΔ grows; ``quadrature_points`` acts as a floor.
    """
    need = math.ceil(NODES_PER_KERNEL_WIDTH * cfg.window_halfwidth * cfg.sigma_delta)
    n = max(cfg.quadrature_points, need)
    if n > MAX_QUADRATURE_POINTS:
        raise DiscretizationError(
            f"σΔ = {cfg.sigma_delta:g} needs {n} quadrature points, above the limit "
            f"{MAX_QUADRATURE_POINTS}; the kernel is too narrow to resolve"
        )
    return n


def _nodes(cfg: PhotonConfig):
    """Quadrature nodes (in units of σ), weights and density values."""
    x, w = np.polynomial.legendre.leggauss(effective_points(cfg))
    if cfg.density is None:
        a = -cfg.window_halfwidth
        b = cfg.window_halfwidth
        u = 0.5 * (b - a) * x + 0.5 * (b + a)
        wu = 0.5 * (b - a) * w
        p = np.exp(-0.5 * u * u) / math.sqrt(2.0 * math.pi)
        return u, wu, p
    dens = cfg.density
    sigma = dens.std
    if sigma <= 0:
        raise ValidationError("tabulated density has zero spread")
    mu = dens.mean
    lo = max(mu - cfg.window_halfwidth * sigma, dens.support[0])
    hi = min(mu + cfg.window_halfwidth * sigma, dens.support[1])
    t, wt = _composite_nodes(np.asarray(dens.t), lo, hi, x.size)
    # rescale to units of σ: P_u(u) = σ P_t(μ + σ u)
    return (t - mu) / sigma, wt / sigma, dens(t) * sigma


def _composite_nodes(breaks: np.ndarray, lo: float, hi: float, total: int):
    """Gauss-Legendre panels between table breakpoints.

    The interpolated density is linear on each panel, so the trace integral
    is exact; nodes are shared out in proportion to panel length.
    """
    edges = np.concatenate([[lo], breaks[(breaks > lo) & (breaks < hi)], [hi]])
    lengths = np.diff(edges)
    counts = np.maximum(2, np.ceil(total * lengths / (hi - lo)).astype(int))
    nodes, weights = [], []
    for a, b, k in zip(edges[:-1], edges[1:], counts):
        x, w = np.polynomial.legendre.leggauss(int(k))
        nodes.append(0.5 * (b - a) * x + 0.5 * (b + a))
        weights.append(0.5 * (b - a) * w)
    return np.concatenate(nodes), np.concatenate(weights)


def kernel_matrix(cfg: PhotonConfig) -> np.ndarray:
    """Symmetric Nyström matrix sqrt(w_a P_a) exp(-(σΔ)²(u_a-u_b)²/2) sqrt(w_b P_b)."""
    u, w, p = _nodes(cfg)
    s = np.sqrt(w * p)
    diff = u[:, None] - u[None, :]
    k = np.exp(-0.5 * (cfg.sigma_delta ** 2) * diff * diff)
    return s[:, None] * k * s[None, :]


@lru_cache(maxsize=512)
def photon_spectrum(cfg: PhotonConfig) -> Spectrum:
    """Nonzero spectrum of the single-photon arrival-time state."""
    mat = kernel_matrix(cfg)
    tr = float(np.trace(mat))
    if abs(tr - 1.0) > TRACE_TOL:
        raise DiscretizationError(
            f"discretized trace is {tr:.9f}, off by more than {TRACE_TOL:g}; "
            "widen the window or add quadrature points (--quad-points)"
        )
    if cfg.sigma_delta == 0.0:
        return Spectrum([1.0])
    w = eigh(mat, eigvals_only=True)
    if w[0] < -1e-10:
        raise DiscretizationError(
            f"kernel matrix has eigenvalue {w[0]:.3e}; add quadrature points (--quad-points)"
        )
    return Spectrum(w[w > EIGEN_CUTOFF])


def photon_coherence(cfg: PhotonConfig, n: int) -> CoherenceResult:
    return coherence_spectral(photon_spectrum(cfg), n)


def photon_coherence_series(cfg: PhotonConfig, ns) -> list:
    return coherence_spectral_series(photon_spectrum(cfg), ns)


def faint_jitter_approx(sigma_delta: float, n: int) -> float:
    """(1 - (σΔ)²)^N."""
    if n < 2:
        raise OrderError(f"need N >= 2, got {n}")
    if not (0.0 <= sigma_delta < FAINT_LIMIT):
        raise RegimeError(
            f"faint approximation requires σΔ << 1/√2 ≈ 0.7071; got σΔ = {sigma_delta!r}"
        )
    return (1.0 - sigma_delta ** 2) ** n


def _check_target(w_target: float, n: int) -> None:
    if not (0.0 < w_target < 1.0):
        raise DomainError(f"target coherence must lie in (0, 1), got {w_target!r}")
    if n < 2:
        raise OrderError(f"need N >= 2, got {n}")


def admissible_jitter(w_target: float, n: int) -> float:
    """σΔ that brings (1 - (σΔ)²)^N down to ``w_target``."""
    _check_target(w_target, n)
    return math.sqrt(-math.expm1(math.log(w_target) / n))


def admissible_jitter_simple(w_target: float, n: int) -> float:
    """sqrt((1 - W)/N), valid for σΔ << 1/√N."""
    _check_target(w_target, n)
    return math.sqrt((1.0 - w_target) / n)
