"""Permutations of {1..N} and enumeration of the symmetric group.

Permutations are stored 0-based internally (``images[a]`` is the image of
``a``); :meth:`Permutation.one_line` gives the conventional 1-based form.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from functools import lru_cache
from typing import Iterator, Sequence

from .errors import DimensionError, SizeLimitError, ValidationError

#: Largest N for which full enumeration of S_N is allowed (8! = 40320).
MAX_ENUMERATION_N = 8


class Permutation:
    """An immutable permutation of ``range(n)``.

    Composition follows function composition: ``(a * b)(x) == a(b(x))``.
    """

    __slots__ = ("_images",)

    def __init__(self, images: Sequence[int]):
        images = tuple(int(i) for i in images)
        if sorted(images) != list(range(len(images))):
            raise ValidationError(f"{images} is not a permutation of 0..{len(images) - 1}")
        self._images = images

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(n))

    @classmethod
    def from_one_line(cls, images: Sequence[int]) -> "Permutation":
        """Build from 1-based one-line notation, e.g. ``(2, 3, 1)``."""
        return cls([i - 1 for i in images])

    @classmethod
    def transposition(cls, n: int, a: int, b: int) -> "Permutation":
        """Swap of the 0-based points ``a`` and ``b``."""
        images = list(range(n))
        images[a], images[b] = b, a
        return cls(images)

    @property
    def images(self) -> tuple[int, ...]:
        return self._images

    @property
    def n(self) -> int:
        return len(self._images)

    def one_line(self) -> tuple[int, ...]:
        return tuple(i + 1 for i in self._images)

    def __call__(self, x: int) -> int:
        return self._images[x]

    def __len__(self) -> int:
        return len(self._images)

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self._images == other._images

    def __hash__(self) -> int:
        return hash(self._images)

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def __repr__(self) -> str:
        return f"Permutation{self.one_line()}"

    def is_identity(self) -> bool:
        return all(i == a for a, i in enumerate(self._images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for a, i in enumerate(self._images):
            inv[i] = a
        return Permutation(inv)

    def cycles(self) -> list[tuple[int, ...]]:
        """Disjoint cycles (0-based), fixed points included."""
        seen = [False] * self.n
        out = []
        for start in range(self.n):
            if seen[start]:
                continue
            cyc = []
            x = start
            while not seen[x]:
                seen[x] = True
                cyc.append(x)
                x = self._images[x]
            out.append(tuple(cyc))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        return cycle_type(self)

    def sign(self) -> int:
        return (-1) ** (self.n - len(self.cycles()))


def compose(a: Permutation, b: Permutation) -> Permutation:
    """Return ``a∘b``, i.e. ``x -> a(b(x))``."""
    if a.n != b.n:
        raise DimensionError(f"cannot compose permutations of sizes {a.n} and {b.n}")
    ai = a.images
    return Permutation([ai[j] for j in b.images])


def inverse(p: Permutation) -> Permutation:
    return p.inverse()


def sign(p: Permutation) -> int:
    return p.sign()


def cycle_type(p: Permutation) -> tuple[int, ...]:
    """Cycle lengths in non-increasing order; they sum to ``p.n``."""
    return tuple(sorted((len(c) for c in p.cycles()), reverse=True))


def _check_n(n: int) -> None:
    if n < 1 or n > MAX_ENUMERATION_N:
        raise SizeLimitError(
            f"full enumeration of S_N is limited to 1 <= N <= {MAX_ENUMERATION_N} (got N={n}); "
            "use the spectral path for larger N"
        )


def enumerate_permutations(n: int) -> Iterator[Permutation]:
    """Yield all ``n!`` permutations in lexicographic order, identity first."""
    _check_n(n)
    for images in itertools.permutations(range(n)):
        yield Permutation(images)


@lru_cache(maxsize=None)
def cycle_type_classes(n: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    """Number of elements of S_n per cycle type, by brute-force enumeration."""
    counts = Counter(cycle_type(p) for p in enumerate_permutations(n))
    assert sum(counts.values()) == math.factorial(n)
    return tuple(sorted(counts.items(), reverse=True))
