"""Single- and many-particle internal states."""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

import numpy as np

from .errors import RegimeError, SizeLimitError, ValidationError

#: Product-space dimension guard for explicit N-particle matrices.
MAX_PRODUCT_DIM = 4096

#: Relative gap below which an eigenvalue counts as degenerate with the largest.
DEGENERACY_RTOL = 1e-9

HERMITIAN_ATOL = 1e-12
TRACE_ATOL = 1e-9
PSD_ATOL = 1e-10


class Spectrum:
    """Normalized, non-increasing eigenvalues of a single-particle state.

    Negative entries down to ``-PSD_ATOL`` are clamped to zero; anything more
    negative is rejected.  Values are renormalized to sum to one.
    """

    __slots__ = ("_values", "degeneracy_rtol")

    def __init__(self, eigenvalues: Iterable[float], degeneracy_rtol: float = DEGENERACY_RTOL):
        lam = np.asarray(list(eigenvalues) if not isinstance(eigenvalues, np.ndarray) else eigenvalues,
                         dtype=float).ravel()
        if lam.size == 0:
            raise ValidationError("spectrum must contain at least one eigenvalue")
        if not np.all(np.isfinite(lam)):
            raise ValidationError("spectrum contains non-finite values")
        if lam.min() < -PSD_ATOL:
            raise ValidationError(f"negative eigenvalue {lam.min():.3e} below tolerance {-PSD_ATOL}")
        lam = np.clip(lam, 0.0, None)
        total = lam.sum()
        if total <= 0.0:
            raise ValidationError("spectrum has zero total weight")
        lam = np.sort(lam / total)[::-1]
        lam.setflags(write=False)
        self._values = lam
        self.degeneracy_rtol = float(degeneracy_rtol)

    @classmethod
    def from_file(cls, path, **kwargs) -> "Spectrum":
        """Read one eigenvalue per line; ``#`` starts a comment."""
        values = []
        for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                values.append(float(line))
            except ValueError:
                raise ValidationError(f"{path}:{lineno}: cannot parse {line!r} as a number") from None
        return cls(values, **kwargs)

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def m(self) -> int:
        return self._values.size

    @property
    def lam_max(self) -> float:
        return float(self._values[0])

    @property
    def degeneracy(self) -> int:
        """Number of eigenvalues within ``degeneracy_rtol`` of the largest."""
        top = self._values[0]
        return int(np.count_nonzero((top - self._values) <= self.degeneracy_rtol * top))

    def purity(self) -> float:
        return float(np.sum(self._values ** 2))

    def nonzero(self, cutoff: float = 0.0) -> np.ndarray:
        return self._values[self._values > cutoff]

    def is_pure(self, atol: float = 1e-15) -> bool:
        return self.lam_max >= 1.0 - atol

    def to_density_matrix(self) -> "DensityMatrix":
        return DensityMatrix(np.diag(self._values))

    def __len__(self) -> int:
        return self.m

    def __iter__(self):
        return iter(self._values.tolist())

    def __eq__(self, other) -> bool:
        return isinstance(other, Spectrum) and np.array_equal(self._values, other._values)

    def __repr__(self) -> str:
        return f"Spectrum({np.array2string(self._values, precision=6, separator=', ')})"


class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite matrix."""

    __slots__ = ("_data",)

    def __init__(self, data, validate: bool = True):
        arr = np.array(data, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValidationError(f"density matrix must be square, got shape {arr.shape}")
        if validate:
            _check_density(arr)
        arr.setflags(write=False)
        self._data = arr

    @classmethod
    def pure(cls, vector) -> "DensityMatrix":
        v = np.asarray(vector, dtype=complex).ravel()
        norm = np.linalg.norm(v)
        if abs(norm - 1.0) > 1e-12:
            raise ValidationError(f"state vector has norm {norm}, expected 1")
        return cls(np.outer(v, v.conj()))

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def dim(self) -> int:
        return self._data.shape[0]

    def trace(self) -> float:
        return float(np.trace(self._data).real)

    def purity(self) -> float:
        return float(np.einsum("ij,ji->", self._data, self._data).real)

    def __repr__(self) -> str:
        return f"DensityMatrix(dim={self.dim})"


def _check_density(arr: np.ndarray) -> None:
    if not np.allclose(arr, arr.conj().T, rtol=0.0, atol=HERMITIAN_ATOL):
        dev = np.max(np.abs(arr - arr.conj().T))
        raise ValidationError(f"matrix is not Hermitian (max deviation {dev:.3e})")
    tr = np.trace(arr).real
    if abs(tr - 1.0) > TRACE_ATOL:
        raise ValidationError(f"trace is {tr!r}, expected 1")
    w = np.linalg.eigvalsh(arr)
    if w[0] < -PSD_ATOL:
        raise ValidationError(f"matrix has negative eigenvalue {w[0]:.3e}")


@dataclass(frozen=True)
class PureProductSpec:
    """N single-particle unit vectors in a common internal space."""

    vectors: tuple

    def __post_init__(self):
        vecs = tuple(np.asarray(v, dtype=complex).ravel() for v in self.vectors)
        if not vecs:
            raise ValidationError("need at least one vector")
        dims = {v.size for v in vecs}
        if len(dims) != 1:
            raise ValidationError(f"vectors live in different dimensions {sorted(dims)}")
        for v in vecs:
            if abs(np.linalg.norm(v) - 1.0) > HERMITIAN_ATOL:
                raise ValidationError(f"vector {v} is not normalized")
        object.__setattr__(self, "vectors", vecs)

    @property
    def n(self) -> int:
        return len(self.vectors)

    def density_matrix(self) -> DensityMatrix:
        _guard_dim(self.vectors[0].size, self.n)
        psi = self.vectors[0]
        for v in self.vectors[1:]:
            psi = np.kron(psi, v)
        return DensityMatrix(np.outer(psi, psi.conj()))


def _guard_dim(dim: int, n: int) -> None:
    if dim ** n > MAX_PRODUCT_DIM:
        raise SizeLimitError(
            f"product space dimension {dim}^{n} = {dim ** n} exceeds the limit {MAX_PRODUCT_DIM}"
        )


def product_state(rho1p: DensityMatrix, n: int) -> DensityMatrix:
    """N-fold tensor power of a single-particle state."""
    if n < 1:
        raise ValidationError("particle number must be at least 1")
    _guard_dim(rho1p.dim, n)
    out = rho1p.data
    for _ in range(n - 1):
        out = np.kron(out, rho1p.data)
    return DensityMatrix(out, validate=False)


def eigen_spectrum(rho1p: DensityMatrix, degeneracy_rtol: float = DEGENERACY_RTOL) -> Spectrum:
    """Eigenvalues of a single-particle state as a :class:`Spectrum`."""
    data = rho1p.data
    if not np.allclose(data, data.conj().T, rtol=0.0, atol=HERMITIAN_ATOL):
        raise ValidationError("matrix is not Hermitian")
    if np.iscomplexobj(data) and np.all(data.imag == 0):
        data = data.real
    w = np.linalg.eigvalsh(data)
    return Spectrum(w, degeneracy_rtol=degeneracy_rtol)


@dataclass(frozen=True)
class FaintDecomposition:
    """rho1p = (1 - epsilon) |phi><phi| + epsilon * remainder."""

    epsilon: float
    remainder: Optional[np.ndarray]
    remainder_positive: bool

    def recompose(self, phi) -> np.ndarray:
        v = np.asarray(phi, dtype=complex).ravel()
        out = (1.0 - self.epsilon) * np.outer(v, v.conj())
        if self.remainder is not None:
            out = out + self.epsilon * self.remainder
        return out


def faint_decomposition(rho1p: DensityMatrix, phi) -> FaintDecomposition:
    """Split off the dominant pure component along ``phi``.

    The remainder is Hermitian with unit trace but need not be positive;
    ``remainder_positive`` reports whether it is (within 1e-10).  It is
    ``None`` when ``rho1p`` is exactly ``|phi><phi|``.
    """
    v = np.asarray(phi, dtype=complex).ravel()
    if v.size != rho1p.dim:
        raise ValidationError(f"vector of length {v.size} does not match dimension {rho1p.dim}")
    if abs(np.linalg.norm(v) - 1.0) > HERMITIAN_ATOL:
        raise ValidationError("phi must be a unit vector")
    overlap = float(np.real(v.conj() @ rho1p.data @ v))
    eps = 1.0 - overlap
    if eps >= 0.5:
        raise RegimeError(
            f"faint decomposition needs <phi|rho|phi> > 1/2 (epsilon << 1/2); got epsilon = {eps:.6g}"
        )
    if eps <= 1e-15:
        return FaintDecomposition(max(eps, 0.0), None, True)
    rem = (rho1p.data - overlap * np.outer(v, v.conj())) / eps
    positive = bool(np.linalg.eigvalsh(rem)[0] >= -PSD_ATOL)
    return FaintDecomposition(eps, rem, positive)
