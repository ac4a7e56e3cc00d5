"""
Spectral Domain Types
TermPositions (a term's occurrences in one document) and SpectralVector
(its truncated Fourier coefficients)
"""

import math
from dataclasses import dataclass, field
from typing import Sequence, Tuple

import numpy as np

from errors import InvalidArgumentError


@dataclass(frozen=True)
class TermPositions:
    """
    Sorted 1-based occurrence positions of one term in a document of `length` tokens.
    """
    positions: Tuple[int, ...]
    length: int

    def __post_init__(self):
        positions = tuple(int(p) for p in self.positions)
        object.__setattr__(self, 'positions', positions)

        # Edge case: Validate document length
        if not isinstance(self.length, (int, np.integer)) or self.length <= 0:
            raise InvalidArgumentError(f"Document length must be a positive integer, got {self.length!r}.")

        previous = 0
        for p in positions:
            if p < 1 or p > self.length:
                raise InvalidArgumentError(f"Position {p} lies outside 1..{self.length}.")
            if p <= previous:
                raise InvalidArgumentError("Positions must be strictly increasing (no duplicates).")
            previous = p

    @classmethod
    def of(cls, positions: Sequence[int], length: int) -> "TermPositions":
        return cls(tuple(positions), length)

    def __len__(self):
        return len(self.positions)


@dataclass(frozen=True, eq=False)
class SpectralVector:
    """
    Order-n Fourier coefficients stored flat as (a0, a1, b1, ..., an, bn),
    defined over the interval [0, length].

    The coefficient array is read-only; arithmetic returns new vectors.
    """
    order: int
    coeffs: np.ndarray = field(repr=False)
    length: float

    def __post_init__(self):
        if self.order < 0:
            raise InvalidArgumentError(f"Fourier order must be non-negative, got {self.order}.")
        if not self.length > 0 or not math.isfinite(self.length):
            raise InvalidArgumentError(f"Interval length must be positive, got {self.length!r}.")

        coeffs = np.array(self.coeffs, dtype=np.float64)
        if coeffs.shape != (2 * self.order + 1,):
            raise InvalidArgumentError(
                f"Order {self.order} needs {2 * self.order + 1} coefficients, got shape {coeffs.shape}."
            )
        if not np.all(np.isfinite(coeffs)):
            raise InvalidArgumentError("Spectral coefficients must be finite.")
        coeffs.flags.writeable = False
        object.__setattr__(self, 'coeffs', coeffs)

    @classmethod
    def zeros(cls, order: int, length: float) -> "SpectralVector":
        return cls(order, np.zeros(2 * order + 1), length)

    @property
    def a0(self) -> float:
        return float(self.coeffs[0])

    def a(self, k: int) -> float:
        return float(self.coeffs[0]) if k == 0 else float(self.coeffs[2 * k - 1])

    def b(self, k: int) -> float:
        return float(self.coeffs[2 * k])

    @property
    def cosines(self) -> np.ndarray:
        return self.coeffs[1::2]

    @property
    def sines(self) -> np.ndarray:
        return self.coeffs[2::2]

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def isclose(self, other: "SpectralVector", atol: float = 1e-12) -> bool:
        return (
            self.order == other.order
            and self.length == other.length
            and bool(np.allclose(self.coeffs, other.coeffs, rtol=0.0, atol=atol))
        )

    def __repr__(self):
        shown = ', '.join(f"{c:.4f}" for c in self.coeffs[:5])
        more = ', ...' if len(self.coeffs) > 5 else ''
        return f"<SpectralVector(order={self.order}, length={self.length}, coeffs=[{shown}{more}])>"
