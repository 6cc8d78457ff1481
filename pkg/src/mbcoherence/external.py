"""Reduced external state of N particles in distinct external modes.

Convention for the permutation operators acting on the internal tensor
factors::

    P(pi) |I_1 ... I_N> = |I_pi(1) ... I_pi(N)>

With it ``P(s) P(p) = P(p∘s)`` and ``P(p)^† = P(p^-1)``, so the trace
``tr(P(p) rho P(q)^†)`` equals ``tr(P(p∘q^-1) rho)``.  The external state is
kept in the N!-dimensional basis of permuted mode assignments, indexed by
the permutations in lexicographic order.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import SizeLimitError, ValidationError
from .states import MAX_PRODUCT_DIM, PSD_ATOL, TRACE_ATOL, DensityMatrix
from .symgroup import Permutation, compose, enumerate_permutations

#: Largest particle number for which the N! x N! external state is built.
MAX_EXTERNAL_N = 6


class Statistics(enum.Enum):
    BOSON = "boson"
    FERMION = "fermion"

    def sign(self, p: Permutation) -> int:
        return 1 if self is Statistics.BOSON else p.sign()

    @classmethod
    def parse(cls, value) -> "Statistics":
        if isinstance(value, cls):
            return value
        return cls(str(value).lower())


def internal_dimension(rho: DensityMatrix, n: int) -> int:
    """Single-particle dimension m with m**n == rho.dim."""
    m = round(rho.dim ** (1.0 / n))
    for cand in (m - 1, m, m + 1):
        if cand >= 1 and cand ** n == rho.dim:
            return cand
    raise ValidationError(f"dimension {rho.dim} is not a perfect {n}-th power")


@lru_cache(maxsize=256)
def _basis_map(images: tuple, m: int) -> np.ndarray:
    n = len(images)
    idx = np.arange(m ** n).reshape((m,) * n)
    return np.ascontiguousarray(idx.transpose(images).ravel())


def permuted_basis_index(p: Permutation, m: int) -> np.ndarray:
    """Index map ``src`` with ``(P(p) psi)[J] == psi[src[J]]``."""
    return _basis_map(p.images, m)


def permutation_operator(p: Permutation, m: int) -> np.ndarray:
    """Dense matrix of P(p) on the m**n dimensional product space."""
    src = permuted_basis_index(p, m)
    out = np.zeros((src.size, src.size))
    out[np.arange(src.size), src] = 1.0
    return out


def permutation_trace(rho: DensityMatrix, p: Permutation, m: int) -> complex:
    """tr(P(p) rho) without forming P(p)."""
    src = permuted_basis_index(p, m)
    return complex(rho.data[src, np.arange(src.size)].sum())


@dataclass(frozen=True)
class ExternalState:
    n: int
    statistics: Statistics
    coeff: np.ndarray
    permutations: tuple

    def __post_init__(self):
        size = math.factorial(self.n)
        if self.coeff.shape != (size, size):
            raise ValidationError(f"coefficient matrix must be {size}x{size}, got {self.coeff.shape}")

    def check(self) -> None:
        """Raise ValidationError unless the state is a valid density matrix."""
        c = self.coeff
        if not np.allclose(c, c.conj().T, rtol=0.0, atol=1e-12):
            raise ValidationError("external state is not Hermitian")
        tr = np.trace(c).real
        if abs(tr - 1.0) > TRACE_ATOL:
            raise ValidationError(f"external state has trace {tr}")
        w = np.linalg.eigvalsh(c)
        if w[0] < -PSD_ATOL:
            raise ValidationError(f"external state has negative eigenvalue {w[0]:.3e}")

    def index(self, p: Permutation) -> int:
        return self.permutations.index(p)


def _guard(n: int, dim: int) -> None:
    if n > MAX_EXTERNAL_N:
        raise SizeLimitError(f"external state construction is limited to N <= {MAX_EXTERNAL_N} (got {n})")
    if dim > MAX_PRODUCT_DIM:
        raise SizeLimitError(f"internal dimension {dim} exceeds the limit {MAX_PRODUCT_DIM}")


def permutation_traces(rho: DensityMatrix, n: int) -> dict:
    """Map every permutation of S_n to tr(P(p) rho)."""
    _guard(n, rho.dim)
    m = internal_dimension(rho, n)
    return {p: permutation_trace(rho, p, m) for p in enumerate_permutations(n)}


def build_external(rho: DensityMatrix, n: int, statistics="boson") -> ExternalState:
    """Coefficients ``sign(p q) / N! * tr(P(p) rho P(q)^†)`` for all pairs (p, q)."""
    stats = Statistics.parse(statistics)
    if n < 1:
        raise ValidationError("particle number must be at least 1")
    traces = permutation_traces(rho, n)
    perms = tuple(traces)
    size = len(perms)
    signs = np.array([stats.sign(p) for p in perms], dtype=float)
    coeff = np.empty((size, size), dtype=complex)
    for j, q in enumerate(perms):
        qinv = q.inverse()
        for i, p in enumerate(perms):
            coeff[i, j] = traces[compose(p, qinv)]
    coeff *= np.outer(signs, signs) / size
    state = ExternalState(n, stats, coeff, perms)
    state.check()
    return state


def symmetric_projection(ext: ExternalState) -> float:
    """Expectation of the (anti)symmetrizer on the external state.

    In the permuted-mode basis the external permutation with index t sends
    basis state p to p∘t, so the expectation is
    ``(1/N!) sum_{p,t} sign(t) coeff[p, p∘t]``.
    """
    perms = ext.permutations
    pos = {p: i for i, p in enumerate(perms)}
    total = 0.0 + 0.0j
    for t in perms:
        s = ext.statistics.sign(t)
        cols = [pos[compose(p, t)] for p in perms]
        total += s * ext.coeff[np.arange(len(perms)), cols].sum()
    value = (total / len(perms)).real
    return float(value)
