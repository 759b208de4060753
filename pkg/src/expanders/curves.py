"""Algebraic plane curves: resultants, implicitization, invariance tests,
line containment, and exact intersection counting.

Log-abs coordinates are handled through squared polynomials so every
comparison stays rational, and translations along a log-abs coordinate are
given as positive rational scale factors (the additive shift is the log of
the factor).  All counts are certified: candidate roots come from
resultant elimination, their validity from specialized subresultants, and
point identities from shared defining polynomials.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .algebraic import AlgebraicReal, identify_root, interval_eval
from .errors import DomainError, InternalCheckError
from .linalg import det_fraction, nullspace
from .multipoly import MultiPoly, bivariate_gcd
from .probes import exhausted, probe_values
from .realroots import (
    NEG_INF,
    POS_INF,
    IsolatingIntervals,
    isolate_real_roots,
    sturm_count,
)
from .unipoly import (
    Q,
    UniPoly,
    interpolate,
    rational_roots,
    squarefree_part,
    unipoly_gcd,
)


# ---------------------------------------------------------------------------
# curve and map types
# ---------------------------------------------------------------------------


class Transform(enum.Enum):
    IDENTITY = "id"
    LOG_ABS = "log"


@dataclass(frozen=True)
class ParamCurve:
    """The planar curve t -> (fx(p(t)), fy(q(t))).

    A log-abs coordinate excludes the finitely many parameters where its
    argument vanishes, so the argument polynomial must not be identically
    zero there.
    """

    p: UniPoly
    q: UniPoly
    fx: Transform = Transform.IDENTITY
    fy: Transform = Transform.IDENTITY

    def __post_init__(self):
        if self.p.is_constant and self.q.is_constant:
            raise DomainError("at least one coordinate polynomial must be nonconstant")
        if self.fx is Transform.LOG_ABS and self.p.is_zero:
            raise DomainError("log-abs of the zero polynomial has empty domain")
        if self.fy is Transform.LOG_ABS and self.q.is_zero:
            raise DomainError("log-abs of the zero polynomial has empty domain")

    @property
    def delta(self) -> int:
        return max(self.p.degree or 0, self.q.degree or 0)


@dataclass(frozen=True)
class ImplicitCurve:
    F: MultiPoly  # arity 2, nonzero
    degree_bound: int

    def __post_init__(self):
        if self.F.is_zero:
            raise DomainError("implicit curve polynomial must be nonzero")
        if (self.F.total_degree or 0) > self.degree_bound:
            raise InternalCheckError("degree bound violated")


@dataclass(frozen=True)
class Translation:
    ax: Fraction
    ay: Fraction

    def __post_init__(self):
        if self.ax == 0 and self.ay == 0:
            raise DomainError("translation must be nonzero")


@dataclass(frozen=True)
class DiagonalScaling:
    alpha: Fraction
    beta: Fraction

    def __post_init__(self):
        if self.alpha == 0 or self.beta == 0:
            raise DomainError("scaling factors must be nonzero")


@dataclass(frozen=True)
class Skew:
    l: Fraction
    lam: Fraction

    def __post_init__(self):
        if self.l == 0 or self.lam == 0:
            raise DomainError("skew parameters must be nonzero")


AffineMapKind = Union[Translation, DiagonalScaling, Skew]


@dataclass(frozen=True)
class MonomialInvariance:
    """Certificate that the curve's torus part satisfies x^m y^n = r."""

    m: int
    n: int
    r: Fraction

    def __post_init__(self):
        if (self.m, self.n) == (0, 0) or self.r == 0:
            raise DomainError("degenerate monomial invariance")


@dataclass(frozen=True)
class Line:
    """alpha*X + beta*Y = gamma + (1/2)*log(gamma_log_arg) in curve coordinates."""

    alpha: Fraction
    beta: Fraction
    gamma: Fraction
    gamma_log_arg: Fraction = Fraction(1)


class NotLine:
    def __repr__(self):
        return "NotLine()"

    def __eq__(self, other):
        return isinstance(other, NotLine)

    def __hash__(self):
        return hash("NotLine")


# ---------------------------------------------------------------------------
# Sylvester resultants
# ---------------------------------------------------------------------------


def sylvester_matrix(
    f: MultiPoly, g: MultiPoly, elim: int
) -> list[list[MultiPoly]]:
    m = f.degree_in(elim)
    n = g.degree_in(elim)
    if not m or not n:
        raise DomainError("both inputs need positive degree in the eliminated variable")

    def coefs(p: MultiPoly, deg: int) -> list[MultiPoly]:
        out = [dict() for _ in range(deg + 1)]
        for e, c in p.terms.items():
            k = e[elim - 1]
            base = e[: elim - 1] + (0,) + e[elim:]
            out[k][base] = out[k].get(base, Q(0)) + c
        return [MultiPoly(p.arity, tm) for tm in out]

    fc = coefs(f, m)
    gc = coefs(g, n)
    size = m + n
    zero = MultiPoly.zero(f.arity)
    rows = []
    for i in range(n):  # rows t^(n-1-i) * f
        row = [zero] * size
        for k in range(m + 1):
            row[size - 1 - (k + n - 1 - i)] = fc[k]
        rows.append(row)
    for i in range(m):  # rows t^(m-1-i) * g
        row = [zero] * size
        for k in range(n + 1):
            row[size - 1 - (k + m - 1 - i)] = gc[k]
        rows.append(row)
    return rows


def _det_poly_bareiss(M: Sequence[Sequence[MultiPoly]]) -> MultiPoly:
    n = len(M)
    arity = M[0][0].arity
    if n == 0:
        return MultiPoly.constant(arity, 1)
    a = [list(row) for row in M]
    sign = 1
    prev = MultiPoly.constant(arity, 1)
    for k in range(n - 1):
        if a[k][k].is_zero:
            pivot = next((i for i in range(k + 1, n) if not a[i][k].is_zero), None)
            if pivot is None:
                return MultiPoly.zero(arity)
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = num.exact_div(prev) if not num.is_zero else num
            a[i][k] = MultiPoly.zero(arity)
        prev = a[k][k]
    det = a[n - 1][n - 1]
    return det if sign == 1 else -det


def _active_vars(M: Sequence[Sequence[MultiPoly]]) -> list[int]:
    arity = M[0][0].arity
    active = []
    for v in range(1, arity + 1):
        if any((e[v - 1] > 0) for row in M for p in row for e in p.terms):
            active.append(v)
    return active


def _det_degree_bound(M, var: int) -> int:
    total = 0
    for row in M:
        total += max((p.degree_in(var) or 0) for p in row)
    return total


def _det_interpolated(M: Sequence[Sequence[MultiPoly]]) -> MultiPoly:
    """Exact determinant via evaluation at integer nodes and interpolation.

    Valid because specialization commutes with the determinant.  Used when
    at most two variables are active; Bareiss handles the rest.
    """
    arity = M[0][0].arity
    active = _active_vars(M)
    if not active:
        val = det_fraction([[p.constant_term() for p in row] for row in M])
        return MultiPoly.constant(arity, val)
    if len(active) == 1:
        v = active[0]
        bound = _det_degree_bound(M, v)
        nodes = [Q(k) for k in range(bound + 1)]
        vals = []
        for x0 in nodes:
            spec = [[p.specialize(v, x0).constant_term() for p in row] for row in M]
            vals.append(det_fraction(spec))
        poly = interpolate(list(zip(nodes, vals)))
        return MultiPoly.from_unipoly(poly, arity, v)
    if len(active) == 2:
        v1, v2 = active
        b1 = _det_degree_bound(M, v1)
        b2 = _det_degree_bound(M, v2)
        nodes1 = [Q(k) for k in range(b1 + 1)]
        nodes2 = [Q(k) for k in range(b2 + 1)]
        per_node_polys = []
        for x0 in nodes1:
            M1 = [[p.specialize(v1, x0) for p in row] for row in M]
            vals = []
            for y0 in nodes2:
                spec = [[p.specialize(v2, y0).constant_term() for p in row] for row in M1]
                vals.append(det_fraction(spec))
            per_node_polys.append(interpolate(list(zip(nodes2, vals))))
        out = MultiPoly.zero(arity)
        max2 = max((p.degree or 0) for p in per_node_polys)
        for k in range(max2 + 1):
            coefs = [(x0, poly.coef(k)) for x0, poly in zip(nodes1, per_node_polys)]
            ck = interpolate(coefs)
            out = out + MultiPoly.from_unipoly(ck, arity, v1) * MultiPoly.from_unipoly(
                UniPoly.monomial(k), arity, v2
            )
        return out
    return _det_poly_bareiss(M)


def sylvester_resultant(f: MultiPoly, g: MultiPoly, elim: int) -> MultiPoly:
    """Determinant of the Sylvester matrix with respect to x_elim.

    Vanishes at a specialization of the remaining variables exactly when
    the specialized pair has a common root (or both leading coefficients
    vanish).  The eliminated variable no longer occurs in the result.
    """
    M = sylvester_matrix(f, g, elim)
    return _det_interpolated(M)


def _resultant_to_unipoly(f: MultiPoly, g: MultiPoly, elim: int, keep: int) -> UniPoly:
    return sylvester_resultant(f, g, elim).to_unipoly_in(keep)


# ---------------------------------------------------------------------------
# implicitization
# ---------------------------------------------------------------------------


def _squarefree_bivariate(F: MultiPoly) -> MultiPoly:
    parts = [P for P in (F.partial(1), F.partial(2)) if not P.is_zero]
    h = F
    for pp in parts:
        h = bivariate_gcd(h, pp)
    if h.is_constant:
        return F.primitive()
    return F.exact_div(h).primitive()


def implicitize(p: UniPoly, q: UniPoly) -> ImplicitCurve:
    """Implicit equation F(x,y)=0 of the curve t -> (p(t), q(t)).

    Returns the square-free primitive part of res_u(x - p(u), y - q(u)),
    verified to vanish identically on the parametrization; total degree is
    at most deg p + deg q.
    """
    if p.is_constant and q.is_constant:
        raise DomainError("cannot implicitize a constant parametrization")
    delta = max(p.degree or 0, q.degree or 0)
    if p.is_constant:
        F = MultiPoly(2, {(1, 0): 1, (0, 0): -p.coef(0)})
        return ImplicitCurve(F.primitive(), 2 * delta)
    if q.is_constant:
        F = MultiPoly(2, {(0, 1): 1, (0, 0): -q.coef(0)})
        return ImplicitCurve(F.primitive(), 2 * delta)

    # variables: x1 = u, x2 = x, x3 = y
    fu = MultiPoly.variable(3, 2) - MultiPoly.from_unipoly(p, 3, 1)
    gu = MultiPoly.variable(3, 3) - MultiPoly.from_unipoly(q, 3, 1)
    res3 = sylvester_resultant(fu, gu, 1)
    F = MultiPoly(2, {(e[1], e[2]): c for e, c in res3.terms.items()})
    if F.is_zero:
        raise InternalCheckError("resultant of a parametrization vanished")
    F = _squarefree_bivariate(F)

    # exact vanishing check F(p(t), q(t)) == 0
    if not _vanishes_on(F, p, q):
        raise InternalCheckError("implicitization failed its vanishing check")
    bound = (p.degree or 0) + (q.degree or 0)
    if (F.total_degree or 0) > bound:
        raise InternalCheckError("implicitization exceeded its degree bound")
    return ImplicitCurve(F, 2 * delta)


def _vanishes_on(F: MultiPoly, p: UniPoly, q: UniPoly) -> bool:
    px: dict[int, UniPoly] = {0: UniPoly.constant(1)}
    qy: dict[int, UniPoly] = {0: UniPoly.constant(1)}

    def power(cache, base, k):
        while k not in cache:
            top = max(cache)
            cache[top + 1] = cache[top] * base
        return cache[k]

    acc = UniPoly.zero()
    for (ex, ey), c in F.terms.items():
        acc = acc + (power(px, p, ex) * power(qy, q, ey)).scale(c)
    return acc.is_zero


# ---------------------------------------------------------------------------
# affine invariance
# ---------------------------------------------------------------------------


def _apply_affine(F: MultiPoly, T: AffineMapKind) -> MultiPoly:
    if isinstance(T, Translation):
        gx = UniPoly((T.ax, 1))
        gy = UniPoly((T.ay, 1))
    elif isinstance(T, DiagonalScaling):
        gx = UniPoly((0, T.alpha))
        gy = UniPoly((0, T.beta))
    elif isinstance(T, Skew):
        gx = UniPoly((T.l, 1))
        gy = UniPoly((0, T.lam))
    else:
        raise DomainError(f"unknown affine map {T!r}")
    return F.substitute_univariate(1, gx).substitute_univariate(2, gy)


def affine_associate(F: MultiPoly, T: AffineMapKind) -> Optional[Fraction]:
    """The constant c with F∘T = c·F as an exact identity, if one exists."""
    if F.is_zero:
        raise DomainError("zero polynomial")
    G = _apply_affine(F, T)
    if set(G.terms) != set(F.terms):
        return None
    c = None
    for e, v in F.terms.items():
        ratio = G.terms[e] / v
        if c is None:
            c = ratio
        elif ratio != c:
            return None
    return c


def _prime_exponents(x: Fraction) -> dict[int, int]:
    """Prime -> exponent map of |x| (negative exponents for denominators)."""
    out: dict[int, int] = {}
    for value, sgn in ((abs(x.numerator), 1), (x.denominator, -1)):
        n = value
        d = 2
        while d * d <= n:
            while n % d == 0:
                out[d] = out.get(d, 0) + sgn
                n //= d
            d += 1
        if n > 1:
            out[n] = out.get(n, 0) + sgn
    return {p: e for p, e in out.items() if e}


def _rational_pow(x: Fraction, k: int) -> Fraction:
    return x**k if k >= 0 else (1 / x) ** (-k)


def monomial_invariance(
    F: MultiPoly, alpha: Fraction, beta: Fraction
) -> Optional[MonomialInvariance]:
    """Monomial level-set certificate for a diagonal-scaling-invariant curve.

    Requires F nonconstant and not divisible by x or y, and (alpha, beta)
    of infinite multiplicative order (rational pairs have finite order
    exactly when both entries are +-1).
    """
    alpha, beta = Fraction(alpha), Fraction(beta)
    if F.is_zero or F.is_constant:
        raise DomainError("need a nonconstant polynomial")
    if F.arity != 2:
        raise DomainError("need a bivariate polynomial")
    if alpha == 0 or beta == 0:
        raise DomainError("scaling factors must be nonzero")
    if abs(alpha) == 1 and abs(beta) == 1:
        raise DomainError("(alpha, beta) has finite multiplicative order")
    if min(e[0] for e in F.terms) > 0 or min(e[1] for e in F.terms) > 0:
        raise DomainError("polynomial is divisible by a coordinate variable")

    c = affine_associate(F, DiagonalScaling(alpha, beta))
    if c is None:
        return None

    # lattice {(u,v): alpha^u beta^v = 1} via prime-exponent vectors + signs
    ea, eb = _prime_exponents(alpha), _prime_exponents(beta)
    primes = sorted(set(ea) | set(eb))
    a = [ea.get(p, 0) for p in primes]
    b = [eb.get(p, 0) for p in primes]
    if not any(a) and not any(b):
        raise InternalCheckError("finite order slipped through")
    if not any(a):
        gen = (1, 0)
    elif not any(b):
        gen = (0, 1)
    else:
        for i in range(len(primes)):
            for j in range(len(primes)):
                if a[i] * b[j] != a[j] * b[i]:
                    # exponent vectors independent: lattice is trivial, so an
                    # associate-invariant support would have to be a single
                    # monomial, which the preconditions exclude
                    raise InternalCheckError("rank-0 invariance lattice")
        i = next(k for k in range(len(primes)) if a[k] or b[k])
        g = math.gcd(a[i], b[i])
        gen = (b[i] // g, -a[i] // g)
    # sign condition may force the index-2 sublattice
    sa = -1 if alpha < 0 else 1
    sb = -1 if beta < 0 else 1
    if sa ** gen[0] * sb ** gen[1] != 1:
        gen = (2 * gen[0], 2 * gen[1])
    if gen[0] < 0 or (gen[0] == 0 and gen[1] < 0):
        gen = (-gen[0], -gen[1])
    m, n = gen
    if _rational_pow(alpha, m) * _rational_pow(beta, n) != 1:
        raise InternalCheckError("lattice generator fails its defining identity")

    # every support pair must sit on a single coset of the lattice
    support = sorted(F.terms)
    e0 = support[0]
    shifts = []
    for e in support:
        du, dv = e[0] - e0[0], e[1] - e0[1]
        if m != 0:
            if du % m or dv * m != du * n:
                return None
            shifts.append(du // m)
        else:
            if du != 0 or dv % n:
                return None
            shifts.append(dv // n)
    tmin = min(shifts)
    collapsed = UniPoly(
        [
            sum(
                (F.terms[e] for e, t in zip(support, shifts) if t - tmin == k),
                Q(0),
            )
            for k in range(max(shifts) - tmin + 1)
        ]
    )
    # the level constant: the collapsed support polynomial must pin a single
    # nonzero real level, and it must be rational to be reportable exactly
    stripped = collapsed
    k = 0
    while stripped.coef(0) == 0:
        k += 1
        stripped = UniPoly(stripped.coeffs[1:])
    if stripped.degree == 0:
        raise DomainError("support polynomial has no nonzero level")
    distinct = sturm_count(stripped, NEG_INF, POS_INF)
    rroots = [r for r in rational_roots(stripped) if r != 0]
    if distinct != 1 or len(rroots) != 1:
        raise DomainError(
            "zero set spreads over several monomial level sets; no single "
            "rational level exists"
        )
    return MonomialInvariance(m, n, rroots[0])


# ---------------------------------------------------------------------------
# line containment
# ---------------------------------------------------------------------------


def line_containment(curve: ParamCurve) -> Union[Line, NotLine]:
    """Decide whether the transform-adjusted curve lies in an affine line."""
    p, q = curve.p, curve.q
    fx, fy = curve.fx, curve.fy
    ID, LOG = Transform.IDENTITY, Transform.LOG_ABS

    if fx is ID and fy is ID:
        deg = max(p.degree or 0, q.degree or 0)
        rows = [[p.coef(k), q.coef(k), Q(1) if k == 0 else Q(0)] for k in range(deg + 1)]
        basis = nullspace(rows)
        for vec in basis:
            a, b, negg = vec
            if a == 0 and b == 0:
                continue
            return _normalized_line(a, b, negg * -1)
        return NotLine()

    if fx is LOG and fy is LOG:
        if p.is_constant:
            return Line(Q(1), Q(0), Q(0), p.coef(0) ** 2)
        if q.is_constant:
            return Line(Q(0), Q(1), Q(0), q.coef(0) ** 2)
        dp, dq = p.degree, q.degree
        g = math.gcd(dp, dq)
        m, n = dq // g, dp // g
        c2 = p.lc() ** (2 * m) / q.lc() ** (2 * n)
        if p ** (2 * m) == (q ** (2 * n)).scale(c2):
            return Line(Q(m), Q(-n), Q(0), c2)
        return NotLine()

    # mixed cases: a line forces the identity coordinate or the log
    # coordinate to be constant
    if fx is ID:
        if p.is_constant:
            return Line(Q(1), Q(0), p.coef(0), Q(1))
        if q.is_constant:
            return Line(Q(0), Q(1), Q(0), q.coef(0) ** 2)
        return NotLine()
    if p.is_constant:
        return Line(Q(1), Q(0), Q(0), p.coef(0) ** 2)
    if q.is_constant:
        return Line(Q(0), Q(1), q.coef(0), Q(1))
    return NotLine()


def _normalized_line(a: Fraction, b: Fraction, g: Fraction) -> Line:
    den = math.lcm(a.denominator, b.denominator, g.denominator)
    ia, ib, ig = a * den, b * den, g * den
    gc = math.gcd(int(ia), int(ib), int(ig))
    ia, ib, ig = ia / gc, ib / gc, ig / gc
    lead = ia if ia != 0 else ib
    if lead < 0:
        ia, ib, ig = -ia, -ib, -ig
    return Line(ia, ib, ig, Q(1))


# ---------------------------------------------------------------------------
# translate intersection counting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Shift:
    """Additive translation component for an identity coordinate."""

    value: Fraction

    @property
    def trivial(self) -> bool:
        return self.value == 0


@dataclass(frozen=True)
class Scale:
    """Multiplicative translation component for a log-abs coordinate.

    Translating log|v| by log(factor) multiplies |v| by factor > 0.
    """

    factor: Fraction

    def __post_init__(self):
        if self.factor <= 0:
            raise DomainError("scale factor must be positive")

    @property
    def trivial(self) -> bool:
        return self.factor == 1


CoordShift = Union[Shift, Scale]


def coord_shift(transform: Transform, raw: Fraction) -> CoordShift:
    """Interpret a CLI translation component for the given transform."""
    if transform is Transform.IDENTITY:
        return Shift(Fraction(raw))
    return Scale(Fraction(raw))


def _check_shift(transform: Transform, s: CoordShift):
    if transform is Transform.IDENTITY and not isinstance(s, Shift):
        raise DomainError("identity coordinate takes an additive Shift")
    if transform is Transform.LOG_ABS and not isinstance(s, Scale):
        raise DomainError("log-abs coordinate takes a multiplicative Scale")


class _System:
    """One polynomial matching system F1(t) = F2(s), G1(t) = G2(s)."""

    def __init__(self, F1: UniPoly, F2: UniPoly, G1: UniPoly, G2: UniPoly):
        self.F1, self.F2, self.G1, self.G2 = F1, F2, G1, G2
        # arity-2 polynomials, x1 = t, x2 = s
        self.f = MultiPoly.from_unipoly(F1, 2, 1) - MultiPoly.from_unipoly(F2, 2, 2)
        self.g = MultiPoly.from_unipoly(G1, 2, 1) - MultiPoly.from_unipoly(G2, 2, 2)


def translate_intersection_count(
    curve: ParamCurve, sx: CoordShift, sy: CoordShift
) -> int:
    """|(C + a) ∩ C| for the nonzero translation a described by (sx, sy)."""
    _check_shift(curve.fx, sx)
    _check_shift(curve.fy, sy)
    if sx.trivial and sy.trivial:
        raise DomainError("translation must be nonzero")
    if isinstance(line_containment(curve), Line):
        raise DomainError("curve is contained in an affine line")

    p, q = curve.p, curve.q
    ID = Transform.IDENTITY
    systems: list[_System] = []
    filters: list[UniPoly] = []

    if curve.fx is ID and curve.fy is ID:
        F2 = p + UniPoly.constant(sx.value)
        G2 = q + UniPoly.constant(sy.value)
        systems.append(_System(p, F2, q, G2))
        key_x, key_y = F2, G2
    elif curve.fx is not ID and curve.fy is not ID:
        P2, Q2 = p * p, q * q
        F2 = P2.scale(sx.factor**2)
        G2 = Q2.scale(sy.factor**2)
        systems.append(_System(P2, F2, Q2, G2))
        filters = [p, q]
        key_x, key_y = F2, G2
    elif curve.fx is ID:
        F2 = p + UniPoly.constant(sx.value)
        for eps in (1, -1):
            systems.append(_System(p, F2, q, q.scale(eps * sy.factor)))
        filters = [q]
        key_x, key_y = F2, (q * q).scale(sy.factor**2)
    else:
        G2 = q + UniPoly.constant(sy.value)
        for eps in (1, -1):
            systems.append(_System(p, p.scale(eps * sx.factor), q, G2))
        filters = [p]
        key_x, key_y = (p * p).scale(sx.factor**2), G2

    valid: list[AlgebraicReal] = []
    b_product = UniPoly.constant(1)
    for sys in systems:
        R = _resultant_to_unipoly(sys.f, sys.g, elim=1, keep=2)
        if R.is_zero:
            raise InternalCheckError(
                "vanishing eliminant for a curve not contained in a line"
            )
        if R.is_constant:
            continue
        B = squarefree_part(R)
        b_product = b_product * B
        for sigma in AlgebraicReal.roots_of(B):
            if any(sigma.is_root_of(h) for h in filters):
                continue
            if _extends_to_real_partner(sys, sigma, B):
                valid.append(sigma)

    count = _count_distinct_images(valid, key_x, key_y, b_product)

    delta = curve.delta
    limit = 4 * delta**2 if (curve.fx is ID and curve.fy is ID) else 16 * delta**2
    if count > limit:
        raise InternalCheckError(
            f"intersection count {count} exceeds the {limit} bound"
        )
    return count


def _count_distinct_images(
    valid: Sequence[AlgebraicReal], key_x: UniPoly, key_y: UniPoly, b_product: UniPoly
) -> int:
    if not valid:
        return 0
    Bu = squarefree_part(b_product)
    iso_x = _image_roots(Bu, key_x)
    iso_y = _image_roots(Bu, key_y)
    seen = set()
    for sigma in valid:
        ix = identify_root(iso_x, _image_enclosure(sigma, key_x))
        iy = identify_root(iso_y, _image_enclosure(sigma, key_y))
        seen.add((ix, iy))
    return len(seen)


def _image_roots(Bu: UniPoly, key: UniPoly) -> IsolatingIntervals:
    # X-values of key(s) over roots s of Bu: eliminate s from {Bu, X - key}
    fB = MultiPoly.from_unipoly(Bu, 2, 1)
    fK = MultiPoly.variable(2, 2) - MultiPoly.from_unipoly(key, 2, 1)
    M = _resultant_to_unipoly(fB, fK, elim=1, keep=2)
    if M.is_zero:
        raise InternalCheckError("image polynomial vanished")
    return isolate_real_roots(M)


def _image_enclosure(sigma: AlgebraicReal, key: UniPoly):
    def enclosure():
        sigma.refine()
        return interval_eval(key, sigma.interval())

    return enclosure


def _extends_to_real_partner(sys: _System, sigma: AlgebraicReal, B: UniPoly) -> bool:
    """Does some real t satisfy F1(t)=F2(sigma) and G1(t)=G2(sigma)?"""
    k = _specialized_gcd_degree(sys.f, sys.g, sigma, elim=1)
    if k % 2 == 1:
        return True
    # even gcd degree: pair sigma against the finitely many real t-candidates
    Rt = _resultant_to_unipoly(sys.f, sys.g, elim=2, keep=1)
    if Rt.is_zero:
        raise InternalCheckError("vanishing eliminant in partner search")
    if Rt.is_constant:
        return False
    A = squarefree_part(Rt)
    for tau in AlgebraicReal.roots_of(A):
        if _values_equal(tau, sys.F1, A, sigma, sys.F2, B) and _values_equal(
            tau, sys.G1, A, sigma, sys.G2, B
        ):
            return True
    return False


def _values_equal(
    tau: AlgebraicReal,
    h1: UniPoly,
    A: UniPoly,
    sigma: AlgebraicReal,
    h2: UniPoly,
    B: UniPoly,
) -> bool:
    """Exact test h1(tau) == h2(sigma)."""
    # cheap interval separation first
    for _ in range(8):
        a = interval_eval(h1, tau.interval())
        b = interval_eval(h2, sigma.interval())
        if a[1] < b[0] or b[1] < a[0]:
            return False
        tau.refine()
        sigma.refine()
    u = _value_as_algebraic(tau, h1, A)
    v = _value_as_algebraic(sigma, h2, B)
    return u.equals(v)


def _value_as_algebraic(base: AlgebraicReal, h: UniPoly, defining: UniPoly) -> AlgebraicReal:
    if base.is_rational:
        return AlgebraicReal.from_rational(h(base.loc.value))
    iso = _image_roots(defining, h) if h.degree >= 1 else None
    if iso is None:
        return AlgebraicReal.from_rational(h.coef(0))
    idx = identify_root(iso, _image_enclosure(base, h))
    return AlgebraicReal(iso.polynomial, iso.roots[idx])


# ---------------------------------------------------------------------------
# specialized gcd degree via principal subresultants
# ---------------------------------------------------------------------------


def _principal_subresultant(f: MultiPoly, g: MultiPoly, elim: int, j: int) -> UniPoly:
    """The j-th principal subresultant coefficient, a polynomial in the
    remaining variable (inputs are arity-2, constant leading coefficients)."""
    keep = 2 if elim == 1 else 1
    m = f.degree_in(elim)
    n = g.degree_in(elim)
    if m < n:
        f, g, m, n = g, f, n, m
    if j >= n:
        raise InternalCheckError("subresultant index out of range")

    def coef(p: MultiPoly, k: int) -> MultiPoly:
        tm = {}
        for e, c in p.terms.items():
            if e[elim - 1] == k:
                tm[e[: elim - 1] + (0,) + e[elim:]] = c
        return MultiPoly(p.arity, tm)

    size = m + n - 2 * j
    cols = list(range(m + n - j - 1, j, -1))  # coefficient columns, then t^j
    rows = []
    for i in range(n - j - 1, -1, -1):  # t^i * f
        row = [coef(f, c - i) if 0 <= c - i <= m else MultiPoly.zero(2) for c in cols]
        row.append(coef(f, j - i) if 0 <= j - i <= m else MultiPoly.zero(2))
        rows.append(row)
    for i in range(m - j - 1, -1, -1):  # t^i * g
        row = [coef(g, c - i) if 0 <= c - i <= n else MultiPoly.zero(2) for c in cols]
        row.append(coef(g, j - i) if 0 <= j - i <= n else MultiPoly.zero(2))
        rows.append(row)
    assert len(rows) == size and all(len(r) == size for r in rows)
    det = _det_interpolated(rows)
    return det.to_unipoly_in(keep)


def _specialized_gcd_degree(
    f: MultiPoly, g: MultiPoly, point: AlgebraicReal, elim: int = 1
) -> int:
    """deg gcd(f(., point), g(., point)) in the eliminated variable.

    Relies on the leading coefficients in the eliminated variable being
    nonzero constants, which holds for every system built here.
    """
    m = f.degree_in(elim)
    n = g.degree_in(elim)
    if m < n:
        m, n = n, m
    for j in range(1, n):
        sres = _principal_subresultant(f, g, elim, j)
        if sres.is_zero:
            continue
        if not point.is_root_of(sres):
            return j
    return n


# ---------------------------------------------------------------------------
# implicit curve intersection (certified shear counting)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Finite:
    count: int


@dataclass(frozen=True)
class CommonFactor:
    factor: MultiPoly


def _shear_x(F: MultiPoly, c: Fraction) -> MultiPoly:
    """F(u - c*y, y) in coordinates (u, y)."""
    if c == 0:
        return F
    out = MultiPoly.zero(2)
    sub = MultiPoly(2, {(1, 0): 1, (0, 1): -c})  # u - c*y
    powers = {0: MultiPoly.constant(2, 1)}
    maxdeg = F.degree_in(1) or 0
    for k in range(1, maxdeg + 1):
        powers[k] = powers[k - 1] * sub
    for (ex, ey), v in F.terms.items():
        out = out + powers[ex] * MultiPoly(2, {(0, ey): v})
    return out


def implicit_intersection(F: MultiPoly, G: MultiPoly) -> Union[Finite, CommonFactor]:
    """Count common real zeros of two bivariate polynomials exactly.

    A nonconstant common factor is reported instead of a count; otherwise
    the count is certified via a separating shear and obeys the product of
    the total degrees.
    """
    if F.is_zero or G.is_zero:
        raise DomainError("zero polynomial")
    if F.arity != 2 or G.arity != 2:
        raise DomainError("need bivariate polynomials")
    h = bivariate_gcd(F, G)
    if not h.is_constant:
        return CommonFactor(h)
    dF, dG = F.total_degree, G.total_degree
    if dF == 0 or dG == 0:
        return Finite(0)
    # the zero sets only see square-free parts, and the shear certificate
    # needs simple specialized gcds, so reduce first (coprimality survives)
    F, G = _squarefree_bivariate(F), _squarefree_bivariate(G)
    delta = max(dF, dG)
    budget = 8 * delta
    for c in probe_values(budget):
        count = _try_shear_count(F, G, c)
        if count is not None:
            if count > dF * dG:
                raise InternalCheckError("count exceeds the degree product bound")
            return Finite(count)
    raise exhausted("searching for a separating shear")


def _try_shear_count(F: MultiPoly, G: MultiPoly, c: Fraction) -> Optional[int]:
    Fc, Gc = _shear_x(F, c), _shear_x(G, c)
    for H in (Fc, Gc):
        dy = H.degree_in(2)
        if dy == 0:
            return None
        lead = MultiPoly(
            2, {(e[0], 0): v for e, v in H.terms.items() if e[1] == dy}
        )
        if not lead.is_constant:
            return None
    R = _resultant_to_unipoly(Fc, Gc, elim=2, keep=1)
    if R.is_zero:
        raise InternalCheckError("coprime polynomials with vanishing resultant")
    if R.is_constant:
        return 0
    B = squarefree_part(R)
    roots = AlgebraicReal.roots_of(B)
    for u in roots:
        k = _specialized_gcd_degree(Fc, Gc, u, elim=2)
        if k != 1:
            return None  # not a separating shear; try the next one
    return len(roots)
