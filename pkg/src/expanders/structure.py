"""Structure detection for multivariate polynomials.

Decides the additive form f(u_1(x_1)+...+u_d(x_d)) and the multiplicative
form f(u_1(x_1)*...*u_d(x_d)), together with the scalar equivalence
(p = lambda*q) and power equivalence (|p| = |q|^kappa) of univariate
polynomials, and the verdict logic built on them.

Detection is candidate generation plus a mandatory exact recomposition
check, so a returned decomposition is always sound; a detector may only be
incomplete by raising SpecializationExhausted, never by lying.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .errors import DomainError, InternalCheckError
from .linalg import solve_linear
from .multipoly import MultiPoly
from .probes import exhausted, probe_values
from .unipoly import Q, UniPoly, unipoly_gcd

RETRY_FACTOR = 8  # deterministic probe budget is RETRY_FACTOR * degree


# ---------------------------------------------------------------------------
# univariate equivalences
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EquivWitnessA:
    """p = lam * q as an exact identity."""

    lam: Fraction


@dataclass(frozen=True)
class EquivWitnessM:
    """|p| = |q|^kappa pointwise; kappa = r/s > 0 with p^(2s) = q^(2r)."""

    kappa: Fraction


def equiv_a(p: UniPoly, q: UniPoly) -> Optional[EquivWitnessA]:
    if p.is_zero or q.is_zero:
        raise DomainError("scalar equivalence needs nonzero polynomials")
    if p.degree != q.degree:
        return None
    lam = p.lc() / q.lc()
    return EquivWitnessA(lam) if p == q.scale(lam) else None


def equiv_m(p: UniPoly, q: UniPoly) -> Optional[EquivWitnessM]:
    if p.is_constant or q.is_constant:
        raise DomainError("power equivalence needs nonconstant polynomials")
    kappa = Fraction(p.degree, q.degree)
    r, s = kappa.numerator, kappa.denominator
    return EquivWitnessM(kappa) if p ** (2 * s) == q ** (2 * r) else None


# ---------------------------------------------------------------------------
# decompositions
# ---------------------------------------------------------------------------

ADDITIVE = "additive"
MULTIPLICATIVE = "multiplicative"


@dataclass(frozen=True)
class Decomposition:
    kind: str
    outer: UniPoly
    inner: tuple[UniPoly, ...]
    normalized: bool = False

    def __post_init__(self):
        if self.kind not in (ADDITIVE, MULTIPLICATIVE):
            raise DomainError(f"unknown decomposition kind {self.kind!r}")
        if self.outer.is_constant or any(u.is_constant for u in self.inner):
            raise DomainError("outer and inner parts must be nonconstant")

    def combine(self) -> MultiPoly:
        """Exact expansion of the composed polynomial."""
        d = len(self.inner)
        if self.kind == ADDITIVE:
            arg = MultiPoly.zero(d)
            for i, u in enumerate(self.inner, start=1):
                arg = arg + MultiPoly.from_unipoly(u, d, i)
        else:
            arg = MultiPoly.constant(d, 1)
            for i, u in enumerate(self.inner, start=1):
                arg = arg * MultiPoly.from_unipoly(u, d, i)
        out = MultiPoly.zero(d)
        for c in reversed(self.outer.coeffs):
            out = out * arg + MultiPoly.constant(d, c)
        return out

    def verify(self, P: MultiPoly) -> bool:
        return self.combine() == P


def normalize(dec: Decomposition) -> Decomposition:
    """Canonical form with the outer polynomial absorbing all constants.

    Additive: inner parts vanish at 0 and the first one is integer-primitive
    with positive leading coefficient.  Multiplicative: inner parts monic.
    Idempotent; re-verifies the recomposition exactly.
    """
    target = dec.combine()
    if dec.kind == ADDITIVE:
        shift = sum((u(0) for u in dec.inner), Q(0))
        inner = [u - UniPoly.constant(u(0)) for u in dec.inner]
        outer = dec.outer.compose(UniPoly((shift, 1)))
        u1p = inner[0].primitive()
        gamma = inner[0].lc() / u1p.lc()
        inner = [u.scale(1 / gamma) for u in inner]
        outer = outer.compose(UniPoly((0, gamma)))
    else:
        gamma = Q(1)
        inner = []
        for u in dec.inner:
            gamma *= u.lc()
            inner.append(u.monic())
        outer = dec.outer.compose(UniPoly((0, gamma)))
    out = Decomposition(dec.kind, outer, tuple(inner), normalized=True)
    if not out.verify(target):
        raise InternalCheckError("normalization broke the decomposition")
    return out


# ---------------------------------------------------------------------------
# univariate functional decomposition (cross-check oracle)
# ---------------------------------------------------------------------------


def uni_decompose(h: UniPoly, k: int) -> Optional[tuple[UniPoly, UniPoly]]:
    """f, g with f(g) = h, deg g = k, g monic with g(0) = 0, if they exist.

    Solves for g from the top coefficients (approximate-root method), then
    for f by a linear system, and verifies.
    """
    if h.is_zero or h.is_constant:
        raise DomainError("nothing to decompose")
    n = h.degree
    if k < 2 or n % k != 0:
        raise DomainError("inner degree must be >= 2 and divide deg h")
    r = n // k
    hm = h.monic()
    # monic g = x^k + c_{k-1} x^{k-1} + ... + c_1 x (constant term pinned to 0):
    # match coefficients of x^(n-1) ... x^(n-k+1) in g^r, which лower terms
    # of f cannot reach
    g_coeffs = [Q(0)] * (k + 1)
    g_coeffs[k] = Q(1)
    for j in range(1, k):
        g = UniPoly(g_coeffs)
        cur = (g**r).coef(n - j)
        want = hm.coef(n - j)
        g_coeffs[k - j] = (want - cur) / r
    g = UniPoly(g_coeffs)
    if g.degree != k:
        return None
    # solve h = sum b_j g^j exactly
    powers = [UniPoly.constant(1)]
    for _ in range(r):
        powers.append(powers[-1] * g)
    rows = [[powers[j].coef(i) for j in range(r + 1)] for i in range(n + 1)]
    sol = solve_linear(rows, [h.coef(i) for i in range(n + 1)])
    if sol is None:
        return None
    f = UniPoly(sol)
    if f.compose(g) != h:
        return None
    return f, g


# ---------------------------------------------------------------------------
# detection helpers
# ---------------------------------------------------------------------------


def _check_depends_on_all(P: MultiPoly):
    if P.arity < 2:
        raise DomainError("need at least two variables")
    for i in range(1, P.arity + 1):
        if (P.degree_in(i) or 0) < 1:
            raise DomainError(f"polynomial does not depend on x{i}")


def _greedy_values(
    polys: Sequence[MultiPoly], free: Optional[int], arity: int, budget: int
) -> dict[int, Fraction]:
    """Values for every variable except `free`, keeping every poly nonzero.

    Greedy one variable at a time over the deterministic probe sequence;
    such values exist after at most deg+1 probes per variable, so the
    budget only runs out on inputs far past desk scale.
    """
    values: dict[int, Fraction] = {}
    cur = [p for p in polys if not p.is_constant or p.is_zero]
    if any(p.is_zero for p in polys):
        raise DomainError("cannot avoid the zero set of the zero polynomial")
    for j in range(1, arity + 1):
        if j == free:
            continue
        for v in probe_values(budget):
            cand = [p.specialize(j, v) for p in cur]
            if all(not c.is_zero for c in cand):
                values[j] = v
                cur = cand
                break
        else:
            raise exhausted(f"specializing x{j}")
    return values


def _leading_coef_in(P: MultiPoly, i: int) -> MultiPoly:
    deg = P.degree_in(i) or 0
    tm = {}
    for e, c in P.terms.items():
        if e[i - 1] == deg:
            tm[e[: i - 1] + (0,) + e[i:]] = c
    return MultiPoly(P.arity, tm)


def _solve_outer(P_slice: UniPoly, arg: UniPoly, deg_f: int) -> Optional[UniPoly]:
    """f with f(arg) = P_slice, deg f <= deg_f, by exact linear solve."""
    n = P_slice.degree or 0
    powers = [UniPoly.constant(1)]
    for _ in range(deg_f):
        powers.append(powers[-1] * arg)
    rows = [[powers[j].coef(i) for j in range(deg_f + 1)] for i in range(n + 1)]
    sol = solve_linear(rows, [P_slice.coef(i) for i in range(n + 1)])
    if sol is None:
        return None
    f = UniPoly(sol)
    return f if f.compose(arg) == P_slice else None


# ---------------------------------------------------------------------------
# additive detection
# ---------------------------------------------------------------------------


def detect_additive(P: MultiPoly) -> Optional[Decomposition]:
    """Detect P = f(u_1(x_1) + ... + u_d(x_d)), normalized, or None.

    Candidate inner derivatives come from specialized ratios of the partial
    derivatives D_i; each candidate is pinned by the exact identity
    D_i * u_1'(x_1) = u_i'(x_i) * D_1 and the final recomposition check.
    """
    _check_depends_on_all(P)
    d = P.arity
    budget = RETRY_FACTOR * max(2, P.total_degree or 2)
    D = [P.partial(i) for i in range(1, d + 1)]

    derivs: list[UniPoly] = []
    for i in range(1, d + 1):
        ref = 2 if i == 1 else 1
        values = _greedy_values([D[i - 1], D[ref - 1]], i, d, budget)
        N = D[i - 1].restrict_to_var(i, values)
        M = D[ref - 1].restrict_to_var(i, values)
        if M.is_zero or N.is_zero:
            return None
        try:
            derivs.append(N.exact_div(M))
        except DomainError:
            return None

    u1p = derivs[0]
    if u1p.is_zero:
        return None
    inner = [u1p.integral()]
    for i in range(2, d + 1):
        # rescale so that D_i * u_1' == u_i' * D_1 holds identically
        lhs = D[i - 1] * MultiPoly.from_unipoly(u1p, d, 1)
        cand = derivs[i - 1]
        rhs0 = MultiPoly.from_unipoly(cand, d, i) * D[0]
        if rhs0.is_zero:
            return None
        vals = _greedy_values([rhs0], None, d, budget)
        point = [vals[j] for j in range(1, d + 1)]
        rho = lhs.eval(point) / rhs0.eval(point)
        if rho == 0 or rhs0.scale(rho) != lhs:
            return None
        inner.append(cand.scale(rho).integral())

    if any(u.is_constant for u in inner):
        return None

    # recover the outer polynomial from a univariate slice of full degree
    values = _greedy_values([_leading_coef_in(P, 1)], 1, d, budget)
    kappa = sum((inner[j - 1](values[j]) for j in values), Q(0))
    slice1 = P.restrict_to_var(1, values)
    deg_u1 = inner[0].degree
    if deg_u1 is None or (slice1.degree or 0) % deg_u1:
        return None
    f = _solve_outer(slice1, inner[0] + UniPoly.constant(kappa), (slice1.degree or 0) // deg_u1)
    if f is None or f.is_constant:
        return None

    dec = Decomposition(ADDITIVE, f, tuple(inner))
    if not dec.verify(P):
        return None
    return normalize(dec)


# ---------------------------------------------------------------------------
# multiplicative detection
# ---------------------------------------------------------------------------


def _log_derivative_shape(N: UniPoly, M: UniPoly) -> Optional[tuple[UniPoly, UniPoly]]:
    """Lowest-terms N/M when it is proportional to a logarithmic derivative
    u'/u, i.e. denominator degree exceeds numerator degree by exactly 1."""
    g = unipoly_gcd(N, M)
    n, m = N.exact_div(g), M.exact_div(g)
    if m.degree != (n.degree or 0) + 1:
        return None
    return n, m


def _solve_monic_inner(num: UniPoly, den: UniPoly, m_i: int) -> Optional[UniPoly]:
    """Monic u of degree m_i with u' * den = k * num * u, k = m_i*lc(den)/lc(num)."""
    k = Fraction(m_i) * den.lc() / num.lc()
    # unknowns: coefficients c_0..c_{m_i-1}; c_{m_i} = 1
    nrows = m_i + (den.degree or 0)  # degree of both sides
    cols = m_i
    rows = [[Q(0)] * cols for _ in range(nrows + 1)]
    rhs = [Q(0)] * (nrows + 1)
    kn = num.scale(k)
    # contribution of monomial x^j (coefficient c_j) to u'*den - k*num*u
    for j in range(m_i + 1):
        mono_d = UniPoly.monomial(j - 1, j) if j else UniPoly.zero()
        contrib = mono_d * den - kn * UniPoly.monomial(j)
        for i, c in enumerate(contrib.coeffs):
            if j == m_i:
                rhs[i] -= c
            else:
                rows[i][j] += c
    sol = solve_linear(rows, rhs)
    if sol is None:
        return None
    u = UniPoly(list(sol) + [Q(1)])
    if u.derivative() * den != kn * u:
        return None
    return u


def detect_multiplicative(P: MultiPoly) -> Optional[Decomposition]:
    """Detect P = f(u_1(x_1) * ... * u_d(x_d)), normalized, or None.

    The specialized ratio D_i/D_1 reduces to a multiple of the logarithmic
    derivative u_i'/u_i; candidate inner degrees enumerate the common
    divisors of the per-variable degrees (smallest outer degree first) and
    the verified candidate with the smallest outer degree is returned.
    """
    _check_depends_on_all(P)
    d = P.arity
    budget = RETRY_FACTOR * max(2, P.total_degree or 2)
    D = [P.partial(i) for i in range(1, d + 1)]

    ratios: list[tuple[UniPoly, UniPoly]] = []
    for i in range(1, d + 1):
        ref = 2 if i == 1 else 1
        values = _greedy_values([D[i - 1], D[ref - 1]], i, d, budget)
        N = D[i - 1].restrict_to_var(i, values)
        M = D[ref - 1].restrict_to_var(i, values)
        if N.is_zero or M.is_zero:
            return None
        shape = _log_derivative_shape(N, M)
        if shape is None:
            return None
        ratios.append(shape)

    degs = [P.degree_in(i) for i in range(1, d + 1)]
    g = math.gcd(*degs)
    for deg_f in sorted(k for k in range(1, g + 1) if g % k == 0):
        inner = []
        for i in range(1, d + 1):
            m_i = degs[i - 1] // deg_f
            num, den = ratios[i - 1]
            if (den.degree or 0) > m_i:
                break
            u = _solve_monic_inner(num, den, m_i)
            if u is None or u.is_constant:
                break
            inner.append(u)
        if len(inner) != d:
            continue
        dec = _finish_multiplicative(P, inner, deg_f, budget)
        if dec is not None:
            return dec
    return None


def _finish_multiplicative(
    P: MultiPoly, inner: list[UniPoly], deg_f: int, budget: int
) -> Optional[Decomposition]:
    d = P.arity
    avoid = [MultiPoly.from_unipoly(u, d, i) for i, u in enumerate(inner, 1) if i > 1]
    avoid.append(_leading_coef_in(P, 1))
    values = _greedy_values(avoid, 1, d, budget)
    gamma = Q(1)
    for j in range(2, d + 1):
        gamma *= inner[j - 1](values[j])
    slice1 = P.restrict_to_var(1, values)
    # the slice equals f(gamma * u_1(x_1)), so solving against gamma*u_1
    # recovers f itself
    f = _solve_outer(slice1, inner[0].scale(gamma), deg_f)
    if f is None or f.is_constant:
        return None
    dec = Decomposition(MULTIPLICATIVE, f, tuple(inner))
    if not dec.verify(P):
        return None
    return normalize(dec)


# ---------------------------------------------------------------------------
# classifiers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Expander:
    exponent: Fraction
    structure: Optional[Decomposition] = None  # structured but below threshold


@dataclass(frozen=True)
class Exceptional:
    kind: str
    decomposition: Decomposition
    classes: tuple[tuple[int, ...], ...]
    index_set: tuple[int, ...]
    witnesses: tuple[tuple[int, int, Fraction], ...]


ClassifierVerdict = Union[Expander, Exceptional]


@dataclass(frozen=True)
class PairExpander:
    exponent: Fraction


@dataclass(frozen=True)
class ExceptionalPair:
    kind: str
    p_decomposition: Decomposition
    q_decomposition: Decomposition
    mismatch: tuple[int, ...]
    witnesses: tuple[tuple[int, Fraction], ...]  # matched index -> constant


PairVerdict = Union[PairExpander, ExceptionalPair]


def growth_exponent(t: int) -> Fraction:
    return Fraction(3, 2) - Fraction(1, 2 ** (t + 1))


def _equivalence_classes(inner: Sequence[UniPoly], kind: str):
    d = len(inner)
    classes: list[list[int]] = []
    for i in range(1, d + 1):
        placed = False
        for cls in classes:
            j = cls[0]
            if _equiv_for(kind, inner[i - 1], inner[j - 1]) is not None:
                cls.append(i)
                placed = True
                break
        if not placed:
            classes.append([i])
    classes.sort(key=lambda cls: (-len(cls), cls[0]))
    return tuple(tuple(cls) for cls in classes)


def _equiv_for(kind: str, p: UniPoly, q: UniPoly):
    if kind == ADDITIVE:
        w = equiv_a(p, q)
        return w.lam if w else None
    w = equiv_m(p, q)
    return w.kappa if w else None


def _check_t(d: int, t: int):
    if not 1 <= t <= d - 1:
        raise DomainError("need 1 <= t <= d-1")


def classify_single(P: MultiPoly, t: int) -> ClassifierVerdict:
    """Growth-versus-structure verdict for a single polynomial.

    Exceptional exactly when a decomposition exists and some equivalence
    class of the inner parts reaches size d - floor((t-1)/2); otherwise the
    expander exponent 3/2 - 1/2^(t+1) applies.
    """
    _check_depends_on_all(P)
    _check_t(P.arity, t)
    d = P.arity
    dec = detect_additive(P)
    if dec is None:
        dec = detect_multiplicative(P)
    if dec is None:
        return Expander(growth_exponent(t))
    classes = _equivalence_classes(dec.inner, dec.kind)
    threshold = d - (t - 1) // 2
    top = classes[0]
    if len(top) < threshold:
        return Expander(growth_exponent(t), structure=dec)
    witnesses = tuple(
        (i, j, _equiv_for(dec.kind, dec.inner[i - 1], dec.inner[j - 1]))
        for i in top
        for j in top
        if i < j
    )
    return Exceptional(dec.kind, dec, classes, top, witnesses)


def classify_pair(P: MultiPoly, Q_: MultiPoly, t: int) -> PairVerdict:
    """Pair verdict: exceptional only for matching forms with mismatch < t."""
    _check_depends_on_all(P)
    _check_depends_on_all(Q_)
    if P.arity != Q_.arity:
        raise DomainError("polynomials must share their variables")
    _check_t(P.arity, t)
    dp = detect_additive(P) or detect_multiplicative(P)
    dq = detect_additive(Q_) or detect_multiplicative(Q_)
    if dp is None or dq is None or dp.kind != dq.kind:
        return PairExpander(growth_exponent(t))
    mismatch = []
    witnesses = []
    for i in range(1, P.arity + 1):
        # constants relate Q's inner part to P's: v_i = lam*u_i resp. |v_i| = |u_i|^kappa
        w = _equiv_for(dp.kind, dq.inner[i - 1], dp.inner[i - 1])
        if w is None:
            mismatch.append(i)
        else:
            witnesses.append((i, w))
    if len(mismatch) >= t:
        return PairExpander(growth_exponent(t))
    return ExceptionalPair(
        dp.kind, dp, dq, tuple(mismatch), tuple(witnesses)
    )
