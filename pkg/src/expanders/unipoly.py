"""Exact univariate polynomials over the rationals.

Coefficients are `fractions.Fraction`; every operation is exact.  The zero
polynomial has an empty coefficient tuple and its degree is the explicit
sentinel ``None`` (never an integer), so accidental arithmetic on the
sentinel raises instead of silently producing nonsense.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import DomainError

Q = Fraction


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


class UniPoly:
    """Immutable dense univariate polynomial with Fraction coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *a):  # immutability guard
        raise AttributeError("UniPoly is immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero() -> "UniPoly":
        return UniPoly(())

    @staticmethod
    def constant(c) -> "UniPoly":
        return UniPoly((c,))

    @staticmethod
    def x() -> "UniPoly":
        return UniPoly((0, 1))

    @staticmethod
    def monomial(k: int, c=1) -> "UniPoly":
        return UniPoly((0,) * k + (c,))

    # -- basic queries -----------------------------------------------------

    @property
    def degree(self) -> Optional[int]:
        """Degree, or None for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else None

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def lc(self) -> Fraction:
        if not self.coeffs:
            raise DomainError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coef(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Q(0)

    def __eq__(self, other) -> bool:
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "UniPoly") -> "UniPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return UniPoly(out)

    def __neg__(self) -> "UniPoly":
        return UniPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        return self + (-other)

    def __mul__(self, other: "UniPoly") -> "UniPoly":
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UniPoly(())
        out = [Q(0)] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca == 0:
                continue
            for j, cb in enumerate(b):
                out[i + j] += ca * cb
        return UniPoly(out)

    def scale(self, c) -> "UniPoly":
        c = _as_fraction(c)
        return UniPoly(tuple(c * a for a in self.coeffs))

    def __pow__(self, n: int) -> "UniPoly":
        if n < 0:
            raise DomainError("negative power")
        out = UniPoly.constant(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def __call__(self, x) -> Fraction:
        x = _as_fraction(x)
        acc = Q(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose(self, inner: "UniPoly") -> "UniPoly":
        """self(inner(x)), exact Horner composition."""
        acc = UniPoly(())
        for c in reversed(self.coeffs):
            acc = acc * inner + UniPoly.constant(c)
        return acc

    def derivative(self) -> "UniPoly":
        return UniPoly(tuple(k * c for k, c in enumerate(self.coeffs) if k))

    def integral(self) -> "UniPoly":
        """Antiderivative with zero constant term."""
        return UniPoly((Q(0),) + tuple(c / (k + 1) for k, c in enumerate(self.coeffs)))

    def divmod(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        if other.is_zero:
            raise DomainError("division by zero polynomial")
        rem = list(self.coeffs)
        dlen = len(other.coeffs)
        quot = [Q(0)] * max(0, len(rem) - dlen + 1)
        inv_lc = 1 / other.lc()
        for i in range(len(rem) - dlen, -1, -1):
            c = rem[i + dlen - 1] * inv_lc
            if c == 0:
                continue
            quot[i] = c
            for j, oc in enumerate(other.coeffs):
                rem[i + j] -= c * oc
        return UniPoly(quot), UniPoly(rem)

    def exact_div(self, other: "UniPoly") -> "UniPoly":
        q, r = self.divmod(other)
        if not r.is_zero:
            raise DomainError("division is not exact")
        return q

    # -- normal forms ------------------------------------------------------

    def monic(self) -> "UniPoly":
        if self.is_zero:
            return self
        return self.scale(1 / self.lc())

    def primitive(self) -> "UniPoly":
        """Integer-primitive form with positive leading coefficient."""
        if self.is_zero:
            return self
        den = math.lcm(*(c.denominator for c in self.coeffs))
        ints = [int(c * den) for c in self.coeffs]
        g = math.gcd(*ints)
        if ints[-1] < 0:
            g = -g
        return UniPoly(tuple(Q(i, g) for i in ints))

    def primitive_same_sign(self) -> "UniPoly":
        """Integer-primitive form scaled only by a positive rational."""
        if self.is_zero:
            return self
        den = math.lcm(*(c.denominator for c in self.coeffs))
        ints = [int(c * den) for c in self.coeffs]
        g = math.gcd(*ints)
        return UniPoly(tuple(Q(i, g) for i in ints))

    def shift_arg(self, c) -> "UniPoly":
        """self(x + c)."""
        return self.compose(UniPoly((c, 1)))

    def scale_arg(self, c) -> "UniPoly":
        """self(c*x)."""
        c = _as_fraction(c)
        return UniPoly(tuple(a * c**k for k, a in enumerate(self.coeffs)))

    # -- display -----------------------------------------------------------

    def __repr__(self):
        return f"UniPoly({self.to_text()})"

    def to_text(self, var: str = "x") -> str:
        if self.is_zero:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            if k == 0:
                term = str(abs(c))
            else:
                mag = abs(c)
                head = "" if mag == 1 else f"{mag}*"
                term = f"{head}{var}" + (f"^{k}" if k > 1 else "")
            if not parts:
                parts.append(term if c > 0 else f"-{term}")
            else:
                parts.append(f"+ {term}" if c > 0 else f"- {term}")
        return " ".join(parts)


def unipoly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic greatest common divisor; divides both inputs exactly."""
    if a.is_zero and b.is_zero:
        raise DomainError("gcd of two zero polynomials")
    # Primitive normalization after each remainder keeps coefficients small.
    a, b = a.primitive(), b.primitive()
    while not b.is_zero:
        _, r = a.divmod(b)
        a, b = b, (r.primitive() if not r.is_zero else r)
    return a.monic()


def squarefree_part(p: UniPoly) -> UniPoly:
    """The radical of p (each root once), integer-primitive and positive."""
    if p.is_zero:
        raise DomainError("zero polynomial")
    if p.degree == 0:
        return UniPoly.constant(1)
    g = unipoly_gcd(p, p.derivative())
    if g.degree == 0:
        return p.primitive()
    return p.exact_div(g).primitive()


def uni_content_gcd(polys: Sequence[UniPoly]) -> UniPoly:
    """gcd of a nonempty sequence, monic; ignores zero entries."""
    acc = UniPoly.zero()
    for p in polys:
        if p.is_zero:
            continue
        acc = p.monic() if acc.is_zero else unipoly_gcd(acc, p)
        if acc.degree == 0:
            return UniPoly.constant(1)
    if acc.is_zero:
        raise DomainError("all-zero coefficient sequence")
    return acc


def rational_roots(p: UniPoly) -> list[Fraction]:
    """All rational roots of p (each once, sorted), by divisor trial."""
    if p.is_zero:
        raise DomainError("zero polynomial")
    prim = p.primitive()
    roots = []
    # strip powers of x
    k = 0
    while prim.coef(k) == 0:
        k += 1
    if k:
        roots.append(Q(0))
        prim = UniPoly(prim.coeffs[k:])
    if prim.degree == 0:
        return sorted(roots)
    c0 = abs(int(prim.coeffs[0]))
    cl = abs(int(prim.lc()))
    for num in _divisors(c0):
        for den in _divisors(cl):
            for cand in (Q(num, den), Q(-num, den)):
                if cand not in roots and prim(cand) == 0:
                    roots.append(cand)
    return sorted(roots)


def _divisors(n: int) -> list[int]:
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            out.append(n // d)
        d += 1
    return sorted(set(out))


def interpolate(points: Sequence[tuple[Fraction, Fraction]]) -> UniPoly:
    """Newton interpolation through distinct rational nodes."""
    xs = [_as_fraction(x) for x, _ in points]
    ys = [_as_fraction(y) for _, y in points]
    n = len(xs)
    # divided differences
    dd = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j])
    poly = UniPoly.constant(dd[-1])
    for i in range(n - 2, -1, -1):
        poly = poly * UniPoly((-xs[i], 1)) + UniPoly.constant(dd[i])
    return poly
