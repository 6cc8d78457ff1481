"""Normalized many-body coherence W_C by several independent routes.

* ``coherence_oracle``: sum over S_N of |tr(P(p) rho)| for an arbitrary
  N-particle internal state (small N only).
* ``coherence_exact_product``: tr of the symmetrizer from power sums over
  the cycle types of S_N, plugged into the exact finite-N formula.
* ``coherence_spectral``: complete homogeneous symmetric polynomial of the
  single-particle spectrum, for any N.
* closed forms: maximally mixed, thermodynamic-limit asymptote, faint
  distinguishability.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from . import _kernels
from .errors import OrderError, RegimeError, SizeLimitError
from .external import ExternalState, permutation_traces
from .scaled import ScaledReal
from .states import DensityMatrix, Spectrum
from .symgroup import MAX_ENUMERATION_N

#: Up to this N the exact finite-N correction 1/(N!-1) is applied.
EXACT_FORM_MAX_N = 20

#: Values below this are reported as underflow (value 0, log10 kept).
UNDERFLOW = 1e-300

METHODS = ("oracle", "exact-product", "spectral", "asymptote", "faint")

SpectrumLike = Union[Spectrum, Sequence[float], np.ndarray]


@dataclass(frozen=True)
class CoherenceResult:
    value: float
    method: str
    n: int
    k: int
    log10_value: float

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if self.k < 2:
            raise OrderError("coherence order k must be at least 2")

    @property
    def underflow(self) -> bool:
        return self.value < UNDERFLOW and math.isfinite(self.log10_value)

    def __float__(self) -> float:
        return self.value


def _as_spectrum(spec: SpectrumLike) -> Spectrum:
    return spec if isinstance(spec, Spectrum) else Spectrum(spec)


def _check_order(n: int, name: str = "N") -> None:
    if n < 2:
        raise OrderError(f"many-body coherence is undefined for {name} = {n}; need {name} >= 2")


def _log10(x: float) -> float:
    return math.log10(x) if x > 0.0 else -math.inf


def _result(value: float, method: str, n: int, k: Optional[int] = None,
            log10_value: Optional[float] = None) -> CoherenceResult:
    if log10_value is None:
        log10_value = _log10(value)
    if value < UNDERFLOW:
        value = 0.0
    return CoherenceResult(float(value), method, n, n if k is None else k, float(log10_value))


def _exact_from_symmetric(tr_sym: float, n: int) -> float:
    # N!/(N!-1) * tr - 1/(N!-1), rearranged to avoid forming N! * tr
    return tr_sym - (1.0 - tr_sym) / (math.factorial(n) - 1)


# -- oracle routes -----------------------------------------------------------

def coherence_oracle(rho: DensityMatrix, n: int) -> CoherenceResult:
    """(sum_p |tr(P(p) rho)| - 1) / (N! - 1) for any normalized rho."""
    _check_order(n)
    traces = permutation_traces(rho, n)
    total = math.fsum(abs(t) for t in traces.values())
    value = (total - 1.0) / (math.factorial(n) - 1)
    return _result(value, "oracle", n)


def coherence_from_external(ext: ExternalState) -> float:
    """Mean modulus of the off-diagonal coefficients, normalized by N! - 1."""
    c = np.abs(ext.coeff)
    off = c.sum() - np.trace(c)
    return float(off / (math.factorial(ext.n) - 1))


def oracle_power_sum(spec: SpectrumLike, n: int) -> float:
    """(1/N!) sum over S_N of the product of power sums over cycles.

    Equals tr(P_sym rho1p^{⊗N}) and hence h_N, computed by a route that
    shares no code with the recurrence.
    """
    if n < 1 or n > MAX_ENUMERATION_N:
        raise SizeLimitError(f"power-sum oracle enumerates S_N and needs 1 <= N <= {MAX_ENUMERATION_N}")
    lam = _as_spectrum(spec).values
    return float(_kernels.power_sum_average(lam, n))


def coherence_exact_product(spec: SpectrumLike, n: int) -> CoherenceResult:
    """Exact finite-N coherence of rho1p^{⊗N} via the power-sum oracle."""
    _check_order(n)
    tr_sym = oracle_power_sum(spec, n)
    return _result(_exact_from_symmetric(tr_sym, n), "exact-product", n)


# -- spectral route ----------------------------------------------------------

def h_complete_series(spec: SpectrumLike, n_max: int) -> list:
    """[h_0, ..., h_{n_max}] of the spectrum as ScaledReal values."""
    if n_max < 0:
        raise OrderError("degree must be non-negative")
    lam = spec.values if isinstance(spec, Spectrum) else np.asarray(spec, dtype=float)
    mant, expo = _kernels.h_complete_series(np.ascontiguousarray(lam, dtype=float), int(n_max))
    return [ScaledReal(float(mv), int(ev)) if mv != 0.0 else ScaledReal.zero()
            for mv, ev in zip(mant, expo)]


def h_complete(spec: SpectrumLike, n: int) -> ScaledReal:
    """Complete homogeneous symmetric polynomial h_n of the eigenvalues."""
    return h_complete_series(spec, n)[n]


def _spectral_from_h(h: ScaledReal, n: int, k: Optional[int] = None) -> CoherenceResult:
    order = n if k is None else k
    if order <= EXACT_FORM_MAX_N:
        value = _exact_from_symmetric(float(h), order)
        return _result(value, "spectral", n, k)
    return _result(float(h), "spectral", n, k, log10_value=h.log10())


def coherence_spectral(spec: SpectrumLike, n: int) -> CoherenceResult:
    """W_C of rho1p^{⊗N} from the single-particle spectrum alone.

    For N <= 20 the exact ``h_N - (1 - h_N)/(N! - 1)`` is returned; beyond
    that the correction is below double precision and ``h_N`` itself is used.
    """
    _check_order(n)
    return _spectral_from_h(h_complete(_as_spectrum(spec), n), n)


def coherence_spectral_series(spec: SpectrumLike, ns: Iterable[int]) -> list:
    """coherence_spectral for several N from one recurrence pass."""
    ns = [int(n) for n in ns]
    for n in ns:
        _check_order(n)
    if not ns:
        return []
    hs = h_complete_series(_as_spectrum(spec), max(ns))
    return [_spectral_from_h(hs[n], n) for n in ns]


def coherence_reduced(spec: SpectrumLike, n: int, k: int) -> CoherenceResult:
    """Coherence of the reduced k-particle external state.

    For product internal states this is the N = k coherence, whatever N is.
    """
    if k < 2:
        raise OrderError(f"reduced coherence is undefined for k = {k}; need k >= 2")
    if k > n:
        raise OrderError(f"reduced order k = {k} exceeds particle number N = {n}")
    return _spectral_from_h(h_complete(_as_spectrum(spec), k), n, k)


# -- closed forms ------------------------------------------------------------

def log_coherence_maximally_mixed(m: int, n: int) -> float:
    """Natural log of C(N+m-1, m-1) / m^N."""
    if m < 1:
        raise OrderError("internal dimension m must be at least 1")
    _check_order(n)
    return (math.lgamma(n + m) - math.lgamma(m) - math.lgamma(n + 1)) - n * math.log(m)


def coherence_maximally_mixed(m: int, n: int) -> float:
    """Large-N! coherence for a maximally mixed m-level internal state."""
    return math.exp(log_coherence_maximally_mixed(m, n))


def log_coherence_asymptote(spec: SpectrumLike, n: int) -> float:
    """Natural log of the thermodynamic-limit asymptote.

    ``(N+1)^(d-1) lam_max^N prod_{lam_j < lam_max} (1 - lam_j/lam_max)^-1``
    with d the degeneracy of the largest eigenvalue.
    """
    spec = _as_spectrum(spec)
    _check_order(n)
    if spec.is_pure():
        raise RegimeError(
            "asymptote undefined for a pure internal state (lam_max = 1); the exact coherence is 1"
        )
    d = spec.degeneracy
    lam_max = spec.lam_max
    rest = spec.values[d:]
    rest = rest[rest > 0.0]
    correction = -float(np.sum(np.log1p(-rest / lam_max)))
    return (d - 1) * math.log(n + 1) + n * math.log(lam_max) + correction


def coherence_asymptote(spec: SpectrumLike, n: int) -> float:
    return math.exp(log_coherence_asymptote(spec, n))


def coherence_closed_form(spec: SpectrumLike, n: int) -> CoherenceResult:
    """Best closed-form estimate for a spectrum, in log space.

    A pure state gives 1; a spectrum whose nonzero eigenvalues are all equal
    is maximally mixed on its support and uses the binomial form; anything
    else uses the thermodynamic-limit asymptote.
    """
    spec = _as_spectrum(spec)
    _check_order(n)
    if spec.is_pure():
        return _result(1.0, "asymptote", n)
    support = spec.nonzero()
    if spec.degeneracy == support.size:
        ln = log_coherence_maximally_mixed(int(support.size), n)
    else:
        ln = log_coherence_asymptote(spec, n)
    return _result(math.exp(ln), "asymptote", n, log10_value=ln / math.log(10.0))


def coherence_faint(epsilon: float, n: int) -> float:
    """(1 - epsilon)^N for a faintly mixed internal state."""
    _check_order(n)
    if not (0.0 <= epsilon < 0.5):
        raise RegimeError(
            f"faint approximation requires 0 <= epsilon << 1/2; got epsilon = {epsilon!r}"
        )
    return (1.0 - epsilon) ** n
