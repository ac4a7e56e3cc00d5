"""
Spectral Functions Implementation
Build spectral vectors from position sets, reconstruct the approximations,
and compare them by overlap and cosine.

A term at position p is the unit pulse on [p-1, p]. Projected onto the
orthonormal basis 1/sqrt(L), sqrt(2/L)cos(2pi k x/L), sqrt(2/L)sin(2pi k x/L)
it has closed-form coefficients, so no numeric transform is needed and the
scalar product of two vectors equals the overlap integral of the functions.
"""

import math
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from config import SPECTRAL_CONFIG
from errors import InvalidArgumentError
from models import SpectralVector, TermPositions

TWO_PI = 2.0 * math.pi


def _validate_order(order: int, minimum: int = 0):
    if not isinstance(order, (int, np.integer)) or order < minimum:
        raise InvalidArgumentError(f"Fourier order must be an integer >= {minimum}, got {order!r}.")
    if order > SPECTRAL_CONFIG['max_order']:
        raise InvalidArgumentError(
            f"Fourier order {order} exceeds the configured maximum {SPECTRAL_CONFIG['max_order']}."
        )


def _interval_coefficients(
    starts: np.ndarray,
    ends: np.ndarray,
    length: float,
    order: int
) -> Tuple[np.ndarray, np.ndarray]:
    """a_k, b_k (k = 1..order) of the sum of unit rectangles [starts_i, ends_i]."""
    k = np.arange(1, order + 1, dtype=np.float64)
    hi = TWO_PI * np.outer(k, ends) / length
    lo = TWO_PI * np.outer(k, starts) / length
    scale = math.sqrt(length / 2.0) / (k * math.pi)
    a = scale * (np.sin(hi) - np.sin(lo)).sum(axis=1)
    b = -scale * (np.cos(hi) - np.cos(lo)).sum(axis=1)
    return a, b


def _interleave(a0: float, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    coeffs = np.empty(2 * len(a) + 1, dtype=np.float64)
    coeffs[0] = a0
    coeffs[1::2] = a
    coeffs[2::2] = b
    return coeffs


def compute_spectral(positions: TermPositions, order: int) -> SpectralVector:
    """
    Spectral vector of a term's position set.
    a0 = |P| / sqrt(L); a_k and b_k sum the closed-form pulse integrals.
    Cost is linear in |P| * order. An empty position set gives the zero vector.
    """
    _validate_order(order)
    length = positions.length
    if not positions.positions:
        return SpectralVector.zeros(order, length)

    p = np.asarray(positions.positions, dtype=np.float64)
    a, b = _interval_coefficients(p - 1.0, p, length, order)
    return SpectralVector(order, _interleave(len(p) / math.sqrt(length), a, b), length)


def rect_spectral(u: float, v: float, length: float, order: int) -> SpectralVector:
    """Spectral vector of the unit-height rectangle on [u, v] inside [0, length]."""
    _validate_order(order)

    # Edge case: Validate interval bounds
    if not length > 0:
        raise InvalidArgumentError(f"Interval length must be positive, got {length}.")
    if not 0 <= u < v <= length:
        raise InvalidArgumentError(f"Rectangle [{u}, {v}] must satisfy 0 <= u < v <= {length}.")

    a, b = _interval_coefficients(np.array([u], float), np.array([v], float), length, order)
    return SpectralVector(order, _interleave((v - u) / math.sqrt(length), a, b), length)


def spectral_table(length: int, order: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Per-position pulse integrals of one document: row p-1 holds the
    (a_k, b_k) contribution of a pulse at position p, k = 1..order.
    Lets an indexer derive every term vector of a document from one
    trigonometric evaluation.
    """
    _validate_order(order)
    if length <= 0:
        raise InvalidArgumentError(f"Document length must be positive, got {length}.")
    grid = np.arange(length + 1, dtype=np.float64)
    k = np.arange(1, order + 1, dtype=np.float64)
    angles = TWO_PI * np.outer(grid, k) / length
    scale = math.sqrt(length / 2.0) / (k * math.pi)
    sines = np.sin(angles)
    cosines = np.cos(angles)
    return scale * np.diff(sines, axis=0), -scale * np.diff(cosines, axis=0)


def spectral_from_table(
    table: Tuple[np.ndarray, np.ndarray],
    positions: Sequence[int],
    length: int
) -> np.ndarray:
    """Flat coefficients of a position set using a table from spectral_table."""
    rows = np.asarray(positions, dtype=np.intp) - 1
    a_table, b_table = table
    return _interleave(len(rows) / math.sqrt(length), a_table[rows].sum(axis=0), b_table[rows].sum(axis=0))


def _evaluate(sv: SpectralVector, xs: np.ndarray) -> np.ndarray:
    length = sv.length
    values = np.full(xs.shape, sv.a0 / math.sqrt(length))
    if sv.order:
        k = np.arange(1, sv.order + 1, dtype=np.float64)
        angles = TWO_PI * np.outer(xs, k) / length
        values = values + math.sqrt(2.0 / length) * (np.cos(angles) @ sv.cosines + np.sin(angles) @ sv.sines)
    return values


def reconstruct(sv: SpectralVector, x: float) -> float:
    """Value of the n-th order approximation f_n at x."""
    # Edge case: Validate x
    if not 0 <= x <= sv.length:
        raise InvalidArgumentError(f"x = {x} lies outside [0, {sv.length}].")
    return float(_evaluate(sv, np.array([x], dtype=np.float64))[0])


def sample_distribution(sv: SpectralVector, points: int = 512) -> Tuple[np.ndarray, np.ndarray]:
    """f_n sampled on `points` evenly spaced x values covering [0, L]."""
    if points < 2:
        raise InvalidArgumentError("Sampling needs at least 2 points.")
    xs = np.linspace(0.0, sv.length, points)
    return xs, _evaluate(sv, xs)


def truncate(sv: SpectralVector, order: int) -> SpectralVector:
    """Lower-order approximation obtained by dropping the higher harmonics."""
    if order > sv.order or order < 0:
        raise InvalidArgumentError(f"Cannot truncate order {sv.order} to {order}.")
    if order == sv.order:
        return sv
    return SpectralVector(order, sv.coeffs[:2 * order + 1], sv.length)


def _aligned(a: SpectralVector, b: SpectralVector, allow_truncation: Optional[bool]):
    if a.order == b.order:
        return a.coeffs, b.coeffs
    if allow_truncation is None:
        allow_truncation = SPECTRAL_CONFIG['truncate_mismatched_orders']
    if not allow_truncation:
        raise InvalidArgumentError(f"Spectral orders differ ({a.order} vs {b.order}).")
    width = 2 * min(a.order, b.order) + 1
    return a.coeffs[:width], b.coeffs[:width]


def dot(a: SpectralVector, b: SpectralVector, allow_truncation: Optional[bool] = None) -> float:
    """
    Scalar product of two spectral vectors. For equal lengths this is the
    overlap integral of the two approximations over [0, L].
    """
    x, y = _aligned(a, b, allow_truncation)
    return float(np.dot(x, y))


def cosine_sim(a: SpectralVector, b: SpectralVector, allow_truncation: Optional[bool] = None) -> float:
    """Cosine of the angle between two spectral vectors; 0 when either is zero."""
    x, y = _aligned(a, b, allow_truncation)
    nx = np.linalg.norm(x)
    ny = np.linalg.norm(y)
    if nx == 0.0 or ny == 0.0:
        return 0.0
    return float(np.clip(np.dot(x, y) / (nx * ny), -1.0, 1.0))


def cosine_many(matrix: np.ndarray, vector: Union[SpectralVector, np.ndarray]) -> np.ndarray:
    """Cosine of every row of a coefficient matrix against one vector (same order)."""
    v = vector.coeffs if isinstance(vector, SpectralVector) else np.asarray(vector, dtype=np.float64)
    matrix = np.atleast_2d(matrix)
    if matrix.shape[1] != v.shape[0]:
        raise InvalidArgumentError("Coefficient matrix and vector orders differ.")
    nv = np.linalg.norm(v)
    norms = np.linalg.norm(matrix, axis=1)
    result = np.zeros(matrix.shape[0])
    if nv == 0.0:
        return result
    nonzero = norms > 0.0
    result[nonzero] = (matrix[nonzero] @ v) / (norms[nonzero] * nv)
    return np.clip(result, -1.0, 1.0)


def add(a: SpectralVector, b: SpectralVector) -> SpectralVector:
    """Component-wise sum; represents f_a + f_b."""
    # Edge case: Validate matching metadata
    if a.order != b.order or a.length != b.length:
        raise InvalidArgumentError(
            f"Cannot add vectors of order/length {a.order}/{a.length} and {b.order}/{b.length}."
        )
    return SpectralVector(a.order, a.coeffs + b.coeffs, a.length)


def scale(a: SpectralVector, w: float) -> SpectralVector:
    """Component-wise multiplication by w."""
    if not math.isfinite(w):
        raise InvalidArgumentError(f"Scale factor must be finite, got {w}.")
    return SpectralVector(a.order, a.coeffs * w, a.length)
