"""Finite-set arithmetic and desk-scale growth experiments.

Image sets P(A_1,...,A_d) are enumerated over the full Cartesian product
under a loud budget; log-abs sumset cardinalities are realized exactly as
absolute-value product sets (log(xy) = log x + log y), so no transcendental
arithmetic ever happens.  Exponent fitting is the single place where
binary64 floats appear, and only as a diagnostic.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .curves import Line, ParamCurve, Transform, line_containment
from .errors import BudgetExceeded, DomainError
from .multipoly import MultiPoly
from .realroots import POS_INF, NEG_INF, sturm_count
from .structure import equiv_a, equiv_m
from .unipoly import Q, UniPoly, unipoly_gcd

DEFAULT_TUPLE_BUDGET = 10_000_000
TUPLE_BUDGET_ENV = "EXPANDERS_TUPLE_BUDGET"


def tuple_budget() -> int:
    raw = os.environ.get(TUPLE_BUDGET_ENV)
    return int(raw) if raw else DEFAULT_TUPLE_BUDGET


# ---------------------------------------------------------------------------
# set types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FiniteSet:
    """Sorted duplicate-free finite set of rationals."""

    elements: tuple[Fraction, ...]

    def __post_init__(self):
        if any(
            self.elements[i] >= self.elements[i + 1]
            for i in range(len(self.elements) - 1)
        ):
            raise DomainError("elements must be strictly increasing")

    @staticmethod
    def of(values: Iterable) -> "FiniteSet":
        return FiniteSet(tuple(sorted({Fraction(v) for v in values})))

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def map(self, p: UniPoly) -> "FiniteSet":
        return FiniteSet.of(p(a) for a in self.elements)

    def abs(self) -> "FiniteSet":
        return FiniteSet.of(abs(a) for a in self.elements)

    def without_zero(self) -> "FiniteSet":
        return FiniteSet(tuple(a for a in self.elements if a != 0))


@dataclass(frozen=True)
class PlanarSet:
    """Duplicate-free set of rational points, kept sorted for determinism."""

    points: tuple[tuple[Fraction, Fraction], ...]

    @staticmethod
    def of(points: Iterable) -> "PlanarSet":
        return PlanarSet(
            tuple(sorted({(Fraction(x), Fraction(y)) for x, y in points}))
        )

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)


# ---------------------------------------------------------------------------
# image sets and set algebra
# ---------------------------------------------------------------------------


def image_set(P: MultiPoly, sets: Sequence[FiniteSet], budget: Optional[int] = None) -> FiniteSet:
    """Exact {P(a_1..a_d)} over the full Cartesian product of the sets."""
    if P.arity != len(sets):
        raise DomainError("need one set per variable")
    if any(len(s) == 0 for s in sets):
        raise DomainError("sets must be nonempty")
    total = math.prod(len(s) for s in sets)
    cap = tuple_budget() if budget is None else budget
    if total > cap:
        raise BudgetExceeded(f"{total} tuples exceed the budget {cap}")

    values: set[Fraction] = set()

    def rec(p: MultiPoly, i: int):
        if i > len(sets):
            values.add(p.constant_term())
            return
        for a in sets[i - 1]:
            rec(p.specialize(i, a), i + 1)

    rec(P, 1)
    return FiniteSet.of(values)


SUM = "sum"
PRODUCT = "product"
LOGABS_SUM = "logabs_sum"


def set_algebra(A: FiniteSet, B: FiniteSet, mode: str) -> FiniteSet:
    """A+B, A*B, or the log-abs sumset realized as |A| * |B|."""
    if len(A) == 0 or len(B) == 0:
        raise DomainError("sets must be nonempty")
    if mode == SUM:
        return FiniteSet.of(a + b for a in A for b in B)
    if mode == PRODUCT:
        return FiniteSet.of(a * b for a in A for b in B)
    if mode == LOGABS_SUM:
        A0, B0 = A.without_zero(), B.without_zero()
        if len(A0) == 0 or len(B0) == 0:
            raise DomainError("empty set after removing zeros")
        # log|a| + log|b| = log(|a||b|): cardinality equals that of |A|*|B|
        return FiniteSet.of(abs(a) * abs(b) for a in A0 for b in B0)
    raise DomainError(f"unknown mode {mode!r}")


def sumset_many(parts: Sequence[FiniteSet]) -> FiniteSet:
    out = parts[0]
    for nxt in parts[1:]:
        out = set_algebra(out, nxt, SUM)
    return out


def logabs_sumset_many(parts: Sequence[FiniteSet]) -> FiniteSet:
    """Iterated log-abs sumset, carried as a product of absolute-value sets."""
    out = parts[0].without_zero().abs()
    if len(out) == 0:
        raise DomainError("empty set after removing zeros")
    for nxt in parts[1:]:
        n0 = nxt.without_zero()
        if len(n0) == 0:
            raise DomainError("empty set after removing zeros")
        out = FiniteSet.of(a * abs(b) for a in out for b in n0)
    return out


# ---------------------------------------------------------------------------
# deterministic set generation
# ---------------------------------------------------------------------------

_MASK = (1 << 64) - 1


def _splitmix64(state: int) -> tuple[int, int]:
    state = (state + 0x9E3779B97F4A7C15) & _MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    z = z ^ (z >> 31)
    return state, z


def gen_set(kind: str, n: int, params: Optional[dict] = None, seed: int = 0) -> FiniteSet:
    """Deterministic test sets: arithmetic/geometric progressions or seeded
    random rationals; identical on replay for the same (kind, params, seed)."""
    if n < 1:
        raise DomainError("n must be positive")
    params = dict(params or {})
    if kind == "ap":
        start = Fraction(params.get("start", 1))
        step = Fraction(params.get("step", 1))
        if step == 0:
            raise DomainError("ap step must be nonzero")
        return FiniteSet.of(start + k * step for k in range(n))
    if kind == "gp":
        start = Fraction(params.get("start", 1))
        ratio = Fraction(params.get("ratio", 2))
        if start == 0 or ratio == 0 or abs(ratio) == 1:
            raise DomainError("gp needs start != 0 and ratio not in {0, 1, -1}")
        return FiniteSet.of(start * ratio**k for k in range(n))
    if kind == "random":
        num_range = int(params.get("num_range", max(64, 8 * n * n)))
        den_range = int(params.get("den_range", 16))
        state = (seed * 0x9E3779B97F4A7C15 + 1) & _MASK
        out: set[Fraction] = set()
        attempts = 0
        while len(out) < n:
            attempts += 1
            if attempts > 1000 * n:
                raise BudgetExceeded("random set range too small for n")
            state, z1 = _splitmix64(state)
            state, z2 = _splitmix64(state)
            num = (z1 % (2 * num_range + 1)) - num_range
            den = 1 + (z2 % den_range)
            out.add(Fraction(num, den))
        return FiniteSet.of(out)
    raise DomainError(f"unknown set kind {kind!r}")


# ---------------------------------------------------------------------------
# exponent fitting
# ---------------------------------------------------------------------------


def fit_exponent(samples: Sequence[tuple[int, int]]) -> tuple[Fraction, Fraction]:
    """Least-squares slope and constant through (log n, log size).

    The one deliberate float boundary; results are quantized, the slope to
    1/1000 and the constant to a dyadic with 20 fractional bits.
    """
    if len(samples) < 3:
        raise DomainError("need at least three samples")
    ns = [n for n, _ in samples]
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise DomainError("sample sizes must strictly increase")
    if any(size <= 0 for _, size in samples):
        raise DomainError("sizes must be positive")
    xs = [math.log(n) for n, _ in samples]
    ys = [math.log(size) for _, size in samples]
    xbar = sum(xs) / len(xs)
    ybar = sum(ys) / len(ys)
    sxx = sum((x - xbar) ** 2 for x in xs)
    sxy = sum((x - xbar) * (y - ybar) for x, y in zip(xs, ys))
    slope = sxy / sxx
    intercept = ybar - slope * xbar
    constant = math.exp(intercept)
    return (
        Fraction(round(slope * 1000), 1000),
        Fraction(round(constant * (1 << 20)), 1 << 20),
    )


@dataclass(frozen=True)
class ExpansionReport:
    """Measured growth against a target exponent."""

    name: str
    samples: tuple[tuple[int, int], ...]  # (n, measured size)
    target_exponent: Fraction
    fitted_exponent: Fraction
    fitted_constant: Fraction
    notes: tuple[str, ...] = ()

    def rows(self) -> list[tuple[int, int, float, float]]:
        """(n, size, bound, ratio) rows; bound = n^target."""
        out = []
        for n, size in self.samples:
            bound = float(n) ** float(self.target_exponent)
            out.append((n, size, bound, size / bound))
        return out


def _make_report(name, samples, target, notes=()) -> ExpansionReport:
    notes = tuple(notes)
    try:
        slope, const = fit_exponent(samples)
    except DomainError as err:
        slope, const = Fraction(0), Fraction(0)
        notes = notes + (f"no fit: {err}",)
    return ExpansionReport(name, tuple(samples), target, slope, const, notes)


# ---------------------------------------------------------------------------
# the sum-plus-translates experiment
# ---------------------------------------------------------------------------


def _coordinate_key(transform: Transform, value: Fraction) -> Fraction:
    # identity coordinates compare as-is; log-abs coordinates compare by
    # absolute value (the multiplicative realization of the log)
    return value if transform is Transform.IDENTITY else abs(value)


def enr_experiment(
    curve: ParamCurve, A: FiniteSet, T: PlanarSet
) -> tuple[int, float, float]:
    """|S + T| for S the curve image of A, with the theorem's lower-bound
    expression min(|A||T|, |A|^1.5 |T|^0.5) and the measured ratio.

    In a log-abs coordinate both the curve value log|p(a)| and the
    T-component log|t| are carried multiplicatively, so sums become exact
    rational products.
    """
    if isinstance(line_containment(curve), Line):
        raise DomainError("curve is contained in an affine line")
    if len(A) == 0 or len(T) == 0:
        raise DomainError("sets must be nonempty")
    fx, fy = curve.fx, curve.fy
    for tx, ty in T:
        if fx is Transform.LOG_ABS and tx == 0:
            raise DomainError("log-abs coordinate of T contains 0")
        if fy is Transform.LOG_ABS and ty == 0:
            raise DomainError("log-abs coordinate of T contains 0")

    S = []
    for a in A:
        px, qy = curve.p(a), curve.q(a)
        if fx is Transform.LOG_ABS and px == 0:
            continue
        if fy is Transform.LOG_ABS and qy == 0:
            continue
        S.append((_coordinate_key(fx, px), _coordinate_key(fy, qy)))
    if not S:
        raise DomainError("curve image of A is empty")

    def combine(transform: Transform, s: Fraction, t: Fraction) -> Fraction:
        if transform is Transform.IDENTITY:
            return s + t
        return s * abs(t)

    points = {
        (combine(fx, sx, tx), combine(fy, sy, ty))
        for sx, sy in S
        for tx, ty in T
    }
    size = len(points)
    na, nt = len(A), len(T)
    bound = min(na * nt, na**1.5 * nt**0.5)
    return size, bound, size / bound


# ---------------------------------------------------------------------------
# product-of-cardinalities experiments
# ---------------------------------------------------------------------------


def _require(cond: bool, message: str):
    if not cond:
        raise DomainError(message)


def _nonconstant(*polys: UniPoly):
    _require(all(not p.is_constant for p in polys), "polynomials must be nonconstant")


def lemma_sum_experiment(
    variant: str,
    p1: UniPoly,
    p2: UniPoly,
    q1: UniPoly,
    q2: UniPoly,
    ns: Sequence[int],
    set_factory=None,
) -> ExpansionReport:
    """The three two-variable product bounds against the n^(5/2) target.

    variant 'i': sums/sums, constant-term-free with p1 inequivalent to q1;
    'ii': products/products, monic with p1 power-inequivalent to q1;
    'iii': mixed sums/products, no hypotheses.
    """
    _nonconstant(p1, p2, q1, q2)
    if variant == "i":
        _require(
            all(p.coef(0) == 0 for p in (p1, p2, q1, q2)),
            "variant i needs constant-term-free polynomials",
        )
        w = equiv_a(q1, p1)
        if w is not None:
            raise DomainError(
                f"variant i hypothesis fails: q1 = {w.lam} * p1"
            )
    elif variant == "ii":
        _require(
            all(p.lc() == 1 for p in (p1, p2, q1, q2)),
            "variant ii needs monic polynomials",
        )
        w = equiv_m(q1, p1)
        if w is not None:
            raise DomainError(
                f"variant ii hypothesis fails: |q1| = |p1|^{w.kappa}"
            )
    elif variant != "iii":
        raise DomainError(f"unknown variant {variant!r}")

    if set_factory is None:
        set_factory = lambda n: gen_set("ap", n)
    samples = []
    for n in ns:
        A = set_factory(n)
        B = set_factory(n)
        if variant == "i":
            left = len(set_algebra(A.map(p1), B.map(p2), SUM))
            right = len(set_algebra(A.map(q1), B.map(q2), SUM))
        elif variant == "ii":
            left = len(set_algebra(A.map(p1), B.map(p2), PRODUCT))
            right = len(set_algebra(A.map(q1), B.map(q2), PRODUCT))
        else:
            left = len(set_algebra(A.map(p1), B.map(p2), SUM))
            right = len(set_algebra(A.map(q1), B.map(q2), PRODUCT))
        samples.append((n, left * right))
    return _make_report(f"two-variable product bound ({variant})", samples, Fraction(5, 2))


def statement_experiment(
    us: Sequence[UniPoly],
    vs: Sequence[UniPoly],
    t: int,
    ns: Sequence[int],
    multiplicative: bool = False,
    set_factory=None,
) -> ExpansionReport:
    """|U_d| * |V_d| against n^(3 - 1/2^t) for sumset towers (or their
    log-abs realizations in the multiplicative variant)."""
    d = len(us)
    _require(d >= 2 and len(vs) == d, "need matching inner families, d >= 2")
    _require(1 <= t <= d - 1, "need 1 <= t <= d-1")
    _nonconstant(*us, *vs)
    if multiplicative:
        _require(
            all(p.lc() == 1 for p in (*us, *vs)),
            "multiplicative variant needs monic polynomials",
        )
        mismatches = [
            i for i in range(1, d + 1) if equiv_m(us[i - 1], vs[i - 1]) is None
        ]
    else:
        _require(
            all(p.coef(0) == 0 for p in (*us, *vs)),
            "additive variant needs constant-term-free polynomials",
        )
        mismatches = [
            i for i in range(1, d + 1) if equiv_a(us[i - 1], vs[i - 1]) is None
        ]
    if len(mismatches) < t:
        raise DomainError(
            f"hypothesis fails: only {len(mismatches)} mismatched indices, need {t}"
        )

    if set_factory is None:
        set_factory = lambda n, i: gen_set("ap", n)
    samples = []
    notes = []
    for n in ns:
        sets = [set_factory(n, i) for i in range(1, d + 1)]
        if multiplicative:
            zs = [
                FiniteSet.of(a for a in sets[i] if us[i](a) != 0 and vs[i](a) != 0)
                for i in range(d)
            ]
            n_eff = min(len(z) for z in zs)
            U = logabs_sumset_many([z.map(us[i]) for i, z in enumerate(zs)])
            V = logabs_sumset_many([z.map(vs[i]) for i, z in enumerate(zs)])
            samples.append((n_eff, len(U) * len(V)))
        else:
            U = sumset_many([sets[i].map(us[i]) for i in range(d)])
            V = sumset_many([sets[i].map(vs[i]) for i in range(d)])
            samples.append((n, len(U) * len(V)))
    kind = "multiplicative" if multiplicative else "additive"
    return _make_report(
        f"{kind} tower product bound (d={d}, t={t})",
        samples,
        Fraction(3) - Fraction(1, 2**t),
        notes,
    )


def mixed_experiment(
    us: Sequence[UniPoly],
    vs: Sequence[UniPoly],
    ns: Sequence[int],
    set_factory=None,
) -> ExpansionReport:
    """|U_d| * |V~_d| against n^(3 - 1/2^(d-1)); no structural hypothesis."""
    d = len(us)
    _require(d >= 2 and len(vs) == d, "need matching inner families, d >= 2")
    _nonconstant(*us, *vs)
    if set_factory is None:
        set_factory = lambda n, i: gen_set("ap", n)
    samples = []
    for n in ns:
        sets = [set_factory(n, i) for i in range(1, d + 1)]
        zs = [
            FiniteSet.of(a for a in sets[i] if vs[i](a) != 0) for i in range(d)
        ]
        n_eff = min(min(len(z) for z in zs), n)
        U = sumset_many([zs[i].map(us[i]) for i in range(d)])
        V = logabs_sumset_many([zs[i].map(vs[i]) for i in range(d)])
        samples.append((n_eff, len(U) * len(V)))
    return _make_report(
        f"mixed tower product bound (d={d})",
        samples,
        Fraction(3) - Fraction(1, 2 ** (d - 1)),
    )


# ---------------------------------------------------------------------------
# incidence counting
# ---------------------------------------------------------------------------


def incidence_count(
    points: PlanarSet,
    curves: Sequence[tuple[ParamCurve, tuple[Fraction, Fraction]]],
) -> tuple[int, float]:
    """Exact point/translated-curve incidences plus the crossing-bound
    expression |P|^(2/3)|C|^(2/3) + |P| + |C| for comparison.

    Identity transforms only: membership of a rational point in a log-abs
    coordinate is a transcendence question, so such curves are rejected.
    """
    for curve, _ in curves:
        if curve.fx is not Transform.IDENTITY or curve.fy is not Transform.IDENTITY:
            raise DomainError("incidence counting supports identity transforms only")
        if isinstance(line_containment(curve), Line):
            raise DomainError("curve is contained in an affine line")
    total = 0
    for x, y in points:
        for curve, (tx, ty) in curves:
            if _on_curve(curve, x - tx, y - ty):
                total += 1
    npts, ncrv = len(points), len(curves)
    bound = npts ** (2 / 3) * ncrv ** (2 / 3) + npts + ncrv
    return total, bound


def _on_curve(curve: ParamCurve, x: Fraction, y: Fraction) -> bool:
    """Is (x, y) = (p(s), q(s)) for some real s?  gcd + real-root count."""
    # p, q are both nonconstant here (line curves were rejected earlier)
    f = curve.p - UniPoly.constant(x)
    g = curve.q - UniPoly.constant(y)
    h = unipoly_gcd(f, g)
    if h.is_constant:
        return False
    return sturm_count(h, NEG_INF, POS_INF) >= 1
