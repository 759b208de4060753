"""Exact real-root counting and isolation for univariate rational polynomials.

Sturm sequences are kept integer-primitive (each remainder rescaled by a
positive rational), and signs at rational points are taken with homogeneous
integer evaluation, so the hot paths run on Python ints.  Multiplicities are
always collapsed: every query starts from the square-free part.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .errors import DomainError, InternalCheckError
from .unipoly import Q, UniPoly, squarefree_part, unipoly_gcd

NEG_INF = "-inf"
POS_INF = "+inf"
Endpoint = Union[Fraction, str]


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _int_coeffs(p: UniPoly) -> list[int]:
    prim = p.primitive_same_sign()
    return [int(c) for c in prim.coeffs]


def _sign_at(ints: list[int], x: Endpoint) -> int:
    """Sign of the (primitive) polynomial at a rational point or +-infinity."""
    n = len(ints) - 1
    if x == POS_INF:
        return _sign(ints[-1])
    if x == NEG_INF:
        return _sign(ints[-1]) * (1 if n % 2 == 0 else -1)
    a, b = x.numerator, x.denominator
    # homogeneous evaluation: sum c_k a^k b^(n-k), exact integer arithmetic
    acc = 0
    bp = 1
    apows = [1] * (n + 1)
    for k in range(1, n + 1):
        apows[k] = apows[k - 1] * a
    for k in range(n, -1, -1):
        acc += ints[k] * apows[k] * bp
        bp *= b
    return _sign(acc)


class SturmChain:
    """Sturm chain of a square-free integer-primitive polynomial."""

    def __init__(self, squarefree: UniPoly):
        if squarefree.is_zero:
            raise DomainError("zero polynomial")
        chain = [squarefree.primitive_same_sign()]
        if squarefree.degree >= 1:
            chain.append(squarefree.derivative().primitive_same_sign())
            while not chain[-1].is_zero and chain[-1].degree >= 1:
                _, r = chain[-2].divmod(chain[-1])
                if r.is_zero:
                    break
                chain.append((-r).primitive_same_sign())
        self.polys = chain
        self.ints = [_int_coeffs(p) for p in chain]

    def variations(self, x: Endpoint) -> int:
        signs = [s for s in (_sign_at(c, x) for c in self.ints) if s != 0]
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)

    def count_open(self, lo: Endpoint, hi: Endpoint) -> int:
        """Distinct roots in the open interval, endpoints must not be roots."""
        return self.variations(lo) - self.variations(hi)


def _count_leq(p_sf: UniPoly, x: Endpoint) -> int:
    """Distinct real roots <= x of the square-free polynomial p_sf."""
    if x == POS_INF:
        chain = SturmChain(p_sf)
        return chain.count_open(NEG_INF, POS_INF)
    if x == NEG_INF:
        return 0
    extra = 0
    q = p_sf
    if q(x) == 0:
        extra = 1
        q = q.exact_div(UniPoly((-x, 1)))
        if q.is_zero or q.degree == 0:
            return extra
    chain = SturmChain(q)
    return chain.count_open(NEG_INF, x) + extra


def sturm_count(p: UniPoly, lo: Endpoint, hi: Endpoint) -> int:
    """Number of distinct real roots of p in (lo, hi]."""
    if p.is_zero:
        raise DomainError("zero polynomial")
    if lo != NEG_INF and hi != POS_INF and not lo < hi:
        raise DomainError("need lo < hi")
    if p.degree == 0:
        return 0
    sf = squarefree_part(p)
    return _count_leq(sf, hi) - _count_leq(sf, lo)


@dataclass(frozen=True)
class RootLocation:
    """One real root: either exact, or an open sign-change interval."""

    lo: Fraction
    hi: Fraction

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    @property
    def value(self) -> Fraction:
        if not self.exact:
            raise DomainError("root is not known exactly")
        return self.lo

    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x: Fraction) -> bool:
        return self.lo < x < self.hi if not self.exact else x == self.lo


@dataclass(frozen=True)
class IsolatingIntervals:
    """Disjoint isolating locations for every real root of a polynomial."""

    polynomial: UniPoly  # square-free primitive part
    roots: tuple[RootLocation, ...]

    def __len__(self):
        return len(self.roots)

    def refined(self, width: Fraction) -> "IsolatingIntervals":
        out = []
        for loc in self.roots:
            out.append(refine_root(self.polynomial, loc, width))
        return IsolatingIntervals(self.polynomial, tuple(out))


def refine_root(sf: UniPoly, loc: RootLocation, width: Fraction) -> RootLocation:
    """Bisect a sign-change interval until it is narrower than width."""
    if loc.exact:
        return loc
    lo, hi = loc.lo, loc.hi
    slo = _sign(sf(lo))
    if slo == 0:
        raise InternalCheckError("interval endpoint is a root")
    while hi - lo >= width:
        mid = (lo + hi) / 2
        sm = _sign(sf(mid))
        if sm == 0:
            return RootLocation(mid, mid)
        if sm == slo:
            lo = mid
        else:
            hi = mid
    return RootLocation(lo, hi)


def cauchy_bound(p: UniPoly) -> Fraction:
    """B with every real root strictly inside (-B, B)."""
    lc = abs(p.lc())
    mx = max((abs(c) for c in p.coeffs[:-1]), default=Q(0))
    return Q(2) + mx / lc


def isolate_real_roots(p: UniPoly) -> IsolatingIntervals:
    """One location per distinct real root, multiplicities collapsed."""
    if p.is_zero:
        raise DomainError("zero polynomial")
    sf = squarefree_part(p)
    if sf.degree == 0:
        return IsolatingIntervals(sf, ())
    if sf.degree == 1:
        r = -sf.coef(0) / sf.coef(1)
        return IsolatingIntervals(sf, (RootLocation(r, r),))
    chain = SturmChain(sf)
    ints = chain.ints[0]
    bound = cauchy_bound(sf)
    roots: list[RootLocation] = []

    def split_point(lo: Fraction, hi: Fraction) -> Fraction:
        # any interior non-root rational; midpoint first, then dyadic nudges
        mid = (lo + hi) / 2
        if _sign_at(ints, mid) != 0:
            return mid
        j = 2
        while True:
            step = (hi - lo) / 2**j
            for cand in (mid + step, mid - step):
                if lo < cand < hi and _sign_at(ints, cand) != 0:
                    return cand
            j += 1

    def recurse(lo: Fraction, hi: Fraction, n: int):
        # invariant: endpoints are not roots, n = #roots in (lo, hi)
        if n == 0:
            return
        if n == 1:
            roots.append(RootLocation(lo, hi))
            return
        m = split_point(lo, hi)
        nl = chain.count_open(lo, m)
        recurse(lo, m, nl)
        recurse(m, hi, n - nl)

    total = chain.count_open(NEG_INF, POS_INF)
    recurse(-bound, bound, total)
    roots.sort(key=lambda r: (r.lo, r.hi))
    if len(roots) != total:
        raise InternalCheckError(f"isolated {len(roots)} roots, Sturm says {total}")
    return IsolatingIntervals(sf, tuple(roots))
