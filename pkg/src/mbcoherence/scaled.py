"""Floating-point numbers with an unbounded binary exponent.

A :class:`ScaledReal` is ``mantissa * 2**exponent`` with the mantissa kept in
``[1, 2)`` (or exactly 0).  Products of a hundred eigenvalues of size 1e-3
would underflow a double; here they only move the integer exponent.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

_LOG10_2 = math.log10(2.0)
_LN_2 = math.log(2.0)


@dataclass(frozen=True)
class ScaledReal:
    mantissa: float
    exponent: int = 0

    def __post_init__(self):
        m = self.mantissa
        if m != 0.0 and not (1.0 <= abs(m) < 2.0):
            raise ValueError(f"mantissa {m} not normalized to [1, 2)")
        if m == 0.0 and self.exponent != 0:
            object.__setattr__(self, "exponent", 0)

    @classmethod
    def zero(cls) -> "ScaledReal":
        return cls(0.0, 0)

    @classmethod
    def one(cls) -> "ScaledReal":
        return cls(1.0, 0)

    @classmethod
    def from_float(cls, x: float) -> "ScaledReal":
        if not math.isfinite(x):
            raise ValueError(f"cannot scale non-finite value {x}")
        return cls.normalize(x, 0)

    @classmethod
    def normalize(cls, mantissa: float, exponent: int) -> "ScaledReal":
        """Renormalize an arbitrary ``mantissa * 2**exponent`` pair."""
        if mantissa == 0.0:
            return cls(0.0, 0)
        # frexp gives [0.5, 1); shift by one bit to land in [1, 2)
        f, e = math.frexp(mantissa)
        return cls(2.0 * f, int(exponent) + e - 1)

    @classmethod
    def from_log(cls, ln_value: float) -> "ScaledReal":
        """Build from a natural logarithm; ``-inf`` gives zero."""
        if ln_value == -math.inf:
            return cls.zero()
        log2 = ln_value / _LN_2
        e = math.floor(log2)
        return cls.normalize(2.0 ** (log2 - e), e)

    def is_zero(self) -> bool:
        return self.mantissa == 0.0

    def __float__(self) -> float:
        # ldexp underflows gracefully to 0.0 and raises OverflowError on overflow
        return math.ldexp(self.mantissa, self.exponent)

    def log(self) -> float:
        if self.mantissa <= 0.0:
            return -math.inf if self.mantissa == 0.0 else math.nan
        return math.log(self.mantissa) + self.exponent * _LN_2

    def log10(self) -> float:
        if self.mantissa <= 0.0:
            return -math.inf if self.mantissa == 0.0 else math.nan
        return math.log10(self.mantissa) + self.exponent * _LOG10_2

    def __mul__(self, other) -> "ScaledReal":
        if not isinstance(other, ScaledReal):
            other = ScaledReal.from_float(float(other))
        return ScaledReal.normalize(self.mantissa * other.mantissa, self.exponent + other.exponent)

    __rmul__ = __mul__

    def __add__(self, other) -> "ScaledReal":
        if not isinstance(other, ScaledReal):
            other = ScaledReal.from_float(float(other))
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        big, small = (self, other) if self.exponent >= other.exponent else (other, self)
        shift = small.exponent - big.exponent
        return ScaledReal.normalize(big.mantissa + math.ldexp(small.mantissa, shift), big.exponent)

    __radd__ = __add__

    def __neg__(self) -> "ScaledReal":
        return ScaledReal(-self.mantissa, self.exponent)

    def __sub__(self, other) -> "ScaledReal":
        if not isinstance(other, ScaledReal):
            other = ScaledReal.from_float(float(other))
        return self + (-other)

    def _key(self):
        # comparable only for non-negative values, which is all this package needs
        return (0, 0.0) if self.is_zero() else (1, self.exponent, self.mantissa)

    def __lt__(self, other: "ScaledReal") -> bool:
        return self._key() < other._key()

    def __le__(self, other: "ScaledReal") -> bool:
        return self._key() <= other._key()

    def isclose(self, other, rel_tol: float = 1e-12) -> bool:
        if not isinstance(other, ScaledReal):
            other = ScaledReal.from_float(float(other))
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        return abs(self.log() - other.log()) <= rel_tol
