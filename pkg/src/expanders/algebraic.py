"""Real algebraic numbers as (square-free polynomial, isolating location).

Just enough machinery to make intersection counting exact: sign of a
rational polynomial at an algebraic point, root-membership tests, and
identification of derived values against a shared defining polynomial.
Everything terminates because a nonzero value eventually separates from 0
under interval refinement, and exact zeroes are certified through gcds.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Optional

from .errors import DomainError, InternalCheckError
from .realroots import (
    IsolatingIntervals,
    RootLocation,
    SturmChain,
    refine_root,
    sturm_count,
)
from .unipoly import Q, UniPoly, squarefree_part, unipoly_gcd

Interval = tuple[Fraction, Fraction]


def _interval_add(a: Interval, b: Interval) -> Interval:
    return (a[0] + b[0], a[1] + b[1])


def _interval_mul(a: Interval, b: Interval) -> Interval:
    vs = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return (min(vs), max(vs))


def interval_eval(p: UniPoly, box: Interval) -> Interval:
    """Exact rational interval enclosure of p over [lo, hi]."""
    out: Interval = (Q(0), Q(0))
    for c in reversed(p.coeffs):
        out = _interval_add(_interval_mul(out, box), (c, c))
    return out


class AlgebraicReal:
    """A single real root of a square-free rational polynomial."""

    __slots__ = ("poly", "loc", "_chain")

    def __init__(self, poly: UniPoly, loc: RootLocation):
        self.poly = poly
        self.loc = loc
        self._chain: Optional[SturmChain] = None

    @staticmethod
    def from_rational(r) -> "AlgebraicReal":
        r = Fraction(r)
        return AlgebraicReal(UniPoly((-r, 1)), RootLocation(r, r))

    @staticmethod
    def roots_of(p: UniPoly) -> list["AlgebraicReal"]:
        from .realroots import isolate_real_roots

        iso = isolate_real_roots(p)
        return [AlgebraicReal(iso.polynomial, loc) for loc in iso.roots]

    @property
    def is_rational(self) -> bool:
        return self.loc.exact

    def interval(self) -> Interval:
        return (self.loc.lo, self.loc.hi)

    def refine(self):
        if not self.loc.exact:
            self.loc = refine_root(self.poly, self.loc, self.loc.width() / 2)

    def refine_below(self, width: Fraction):
        if not self.loc.exact:
            self.loc = refine_root(self.poly, self.loc, width)

    def is_root_of(self, h: UniPoly) -> bool:
        """Exact test h(self) == 0."""
        if h.is_zero:
            return True
        if self.loc.exact:
            return h(self.loc.value) == 0
        g = unipoly_gcd(self.poly, h)
        if g.degree == 0:
            return False
        # self is a root of g iff g has a root in self's isolating interval
        return sturm_count(g, self.loc.lo, self.loc.hi) >= 1

    def sign_of(self, h: UniPoly) -> int:
        """Exact sign of h(self)."""
        if h.is_zero:
            return 0
        if self.loc.exact:
            v = h(self.loc.value)
            return (v > 0) - (v < 0)
        if self.is_root_of(h):
            return 0
        while True:
            lo, hi = interval_eval(h, self.interval())
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            self.refine()

    def compare(self, other: "AlgebraicReal") -> int:
        """Exact three-way comparison."""
        if self.loc.exact and other.loc.exact:
            a, b = self.loc.value, other.loc.value
            return (a > b) - (a < b)
        if self.equals(other):
            return 0
        while True:
            a0, a1 = self.interval()
            b0, b1 = other.interval()
            if a1 < b0:
                return -1
            if b1 < a0:
                return 1
            self.refine()
            other.refine()

    def equals(self, other: "AlgebraicReal") -> bool:
        if self.loc.exact:
            return other.is_root_of(UniPoly((-self.loc.value, 1)))
        if other.loc.exact:
            return self.is_root_of(UniPoly((-other.loc.value, 1)))
        g = unipoly_gcd(self.poly, other.poly)
        if g.degree == 0:
            return False
        if not (self.is_root_of(g) and other.is_root_of(g)):
            return False
        # both are roots of the square-free g; equal iff they are the same one
        while True:
            a0, a1 = self.interval()
            b0, b1 = other.interval()
            if a1 < b0 or b1 < a0:
                return False
            lo, hi = min(a0, b0), max(a1, b1)
            if sturm_count(g, lo, hi) == 1:
                return True
            self.refine()
            other.refine()


def identify_root(
    targets: IsolatingIntervals, enclosure: Callable[[], Interval]
) -> int:
    """Index of the root of `targets` equal to the enclosed value.

    `enclosure()` must yield successively tighter exact intervals around a
    fixed real number that is guaranteed to be a root of the target
    polynomial.  The value's own isolating location can never be excluded,
    and every other location eventually is, so this terminates.
    """
    sf = targets.polynomial
    locs = list(targets.roots)
    guard = 0
    while True:
        lo, hi = enclosure()
        if lo > hi:
            raise InternalCheckError("empty enclosure")
        alive = []
        for idx, loc in enumerate(locs):
            if loc.exact:
                overlap = lo <= loc.value <= hi
            else:
                overlap = not (loc.hi <= lo or hi <= loc.lo)
            if overlap:
                alive.append(idx)
        if not alive:
            raise InternalCheckError("value is not a root of the target polynomial")
        if len(alive) == 1:
            return alive[0]
        locs = [
            loc if loc.exact else refine_root(sf, loc, loc.width() / 2)
            for loc in locs
        ]
        guard += 1
        if guard > 10_000:
            raise InternalCheckError("identification failed to converge")
