"""
Objective Functions Implementation
Parse "X|Y" objective expressions and evaluate them as spectral vectors
and as position-membership predicates.
"""

import re
from functools import reduce
from typing import List, Tuple

from app.spectral_functions import add, rect_spectral
from errors import InvalidArgumentError, ObjectiveParseError
from models import ObjectiveSpec, SpectralVector

TERM_PATTERN = re.compile(r'^\s*([+-]?\d+)\s*\|\s*([+-]?\d+)\s*$')


def parse_objective(text: str) -> ObjectiveSpec:
    """
    Parse `term ("+" term)*` with `term := INT "|" INT`, whitespace tolerated.
    Sections are returned in input order.
    """
    # Edge case: Validate input
    if text is None or not text.strip():
        raise ObjectiveParseError("Objective expression is empty.")

    sections = []
    for raw in text.split('+'):
        match = TERM_PATTERN.match(raw)
        if not match:
            raise ObjectiveParseError(f"Malformed objective term '{raw.strip()}' (expected X|Y).")
        x, y = int(match.group(1)), int(match.group(2))
        if x < 1 or y < 1:
            raise ObjectiveParseError(f"Objective term '{raw.strip()}' needs positive integers.")
        if x > y:
            raise ObjectiveParseError(f"Objective term '{raw.strip()}': X exceeds Y.")
        if (x, y) in sections:
            raise ObjectiveParseError(f"Objective term '{raw.strip()}' appears twice.")
        sections.append((x, y))

    return ObjectiveSpec(tuple(sections))


def format_objective(spec: ObjectiveSpec) -> str:
    return str(spec)


def region_bounds(spec: ObjectiveSpec, length: float) -> List[Tuple[float, float]]:
    """Real-valued [u, v] interval of every section; no rounding to the token grid."""
    return [((x - 1) * length / y, x * length / y) for x, y in spec.sections]


def objective_spectral(spec: ObjectiveSpec, length: float, order: int) -> SpectralVector:
    """Sum of the section rectangles as one spectral vector."""
    if not length > 0:
        raise InvalidArgumentError(f"Document length must be positive, got {length}.")
    vectors = [
        rect_spectral(u, min(v, length), length, order)
        for u, v in region_bounds(spec, length)
    ]
    return reduce(add, vectors)


def in_region(p: int, spec: ObjectiveSpec, length: int) -> bool:
    """True iff the pulse midpoint p - 0.5 lies in some section [u, v]."""
    # Edge case: Validate position
    if not 1 <= p <= length:
        raise InvalidArgumentError(f"Position {p} lies outside 1..{length}.")
    midpoint = p - 0.5
    return any(u <= midpoint <= v for u, v in region_bounds(spec, length))
