"""Deterministic probe sequence for generic specializations.

Wherever a construction needs a point avoiding a proper closed condition,
we walk 0, 1, -1, 2, -2, ... and fail loudly once the retry budget runs out;
reproducibility is preferred over randomness.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator

from .errors import SpecializationExhausted


def probe_values(budget: int) -> Iterator[Fraction]:
    """Yield 0, 1, -1, 2, -2, ... up to `budget` values."""
    count = 0
    k = 0
    while count < budget:
        if k == 0:
            yield Fraction(0)
            count += 1
        else:
            yield Fraction(k)
            count += 1
            if count < budget:
                yield Fraction(-k)
                count += 1
        k += 1


def exhausted(what: str) -> SpecializationExhausted:
    return SpecializationExhausted(
        f"deterministic specialization budget exhausted while {what}"
    )
