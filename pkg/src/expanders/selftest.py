"""The acceptance criterion suites, runnable at reduced or full scale.

Each criterion is a function returning (passed, detail).  The CLI selftest
runs them at reduced scale; the test suite runs them at full scale.  The
`inject_fault` hook deliberately corrupts one criterion's expected constant
and exists purely as a negative control for the harness itself.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .counting import (
    Partition,
    all_partitions,
    cyclic_shift_witness,
    equivalent_fixed_count,
    hypothesis_holds,
    max_class_bound_check,
)
from .curves import (
    CommonFactor,
    Finite,
    ParamCurve,
    Scale,
    Shift,
    Transform,
    implicit_intersection,
    implicitize,
    translate_intersection_count,
)
from .expansion import FiniteSet, fit_exponent, gen_set, image_set
from .multipoly import MultiPoly, bivariate_gcd, parse_poly
from .structure import (
    ADDITIVE,
    MULTIPLICATIVE,
    Decomposition,
    Exceptional,
    Expander,
    ExceptionalPair,
    classify_pair,
    classify_single,
    detect_additive,
    detect_multiplicative,
    equiv_a,
    equiv_m,
)
from .unipoly import Q, UniPoly

ID, LOG = Transform.IDENTITY, Transform.LOG_ABS


@dataclass(frozen=True)
class CriterionResult:
    key: str
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.key}: {self.name} -- {self.detail}"


# ---------------------------------------------------------------------------
# seeded corpora
# ---------------------------------------------------------------------------


def _rand_unipoly(rng: random.Random, deg: int) -> UniPoly:
    coeffs = [Q(rng.randint(-4, 4)) for _ in range(deg)]
    coeffs.append(Q(rng.choice([1, 2, 3, -1, -2, -3])))
    return UniPoly(coeffs)  # leading entry nonzero, so the degree is exact


def seeded_compositions(seed: int, count: int, kind: str) -> list[Decomposition]:
    """Random compositions with d <= 4, deg f <= 3, deg u_i <= 4.

    A joint degree budget (total degree <= 12) keeps exact expansion at
    desk scale; each individual bound is still attained across the corpus.
    """
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        d = rng.randint(2, 4)
        deg_f = rng.randint(1, 3)
        degs = [rng.randint(1, 4) for _ in range(d)]
        if deg_f * sum(degs) > 12:
            continue
        dec = Decomposition(
            kind,
            _rand_unipoly(rng, deg_f),
            tuple(_rand_unipoly(rng, du) for du in degs),
        )
        P = dec.combine()
        if any((P.degree_in(i) or 0) < 1 for i in range(1, d + 1)):
            continue
        out.append(dec)
    return out


def seeded_unstructured(seed: int, count: int) -> list[MultiPoly]:
    """Random sparse polynomials depending on every variable."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        d = rng.randint(2, 4)
        terms = {}
        for _ in range(rng.randint(3, 8)):
            e = tuple(rng.randint(0, 3) for _ in range(d))
            terms[e] = Q(rng.randint(-5, 5))
        P = MultiPoly(d, terms)
        if P.is_zero or any((P.degree_in(i) or 0) < 1 for i in range(1, d + 1)):
            continue
        out.append(P)
    return out


def seeded_parametrization(rng: random.Random, max_deg: int) -> tuple[UniPoly, UniPoly]:
    while True:
        p = _rand_unipoly(rng, rng.randint(0, max_deg))
        q = _rand_unipoly(rng, rng.randint(0, max_deg))
        if not (p.is_constant and q.is_constant):
            return p, q


def curve_corpus() -> list[ParamCurve]:
    """Fixed non-line curves covering all three transform cases."""
    t = UniPoly.x()
    one = UniPoly.constant(1)
    two = UniPoly.constant(2)
    ii = [
        ParamCurve(t, t * t),
        ParamCurve(t, t * t * t),
        ParamCurve(t * t, t * t * t),
        ParamCurve(t * t - one, t * t * t + t),
        ParamCurve(t * t + t, t * t * t - two),
        ParamCurve(UniPoly([0, 1, 0, 0, 1]), UniPoly([1, 0, 1])),
        ParamCurve(UniPoly([0, 2, 1]), UniPoly([0, -1, 0, 1])),
        ParamCurve(UniPoly([1, 1, 1]), UniPoly([0, 0, 0, 2])),
        ParamCurve(UniPoly([0, 1, 1]), UniPoly([3, 1, 0, 1])),
        ParamCurve(UniPoly([0, 3]), UniPoly([0, 0, 1, 1])),
    ]
    ll = [
        ParamCurve(t, t + one, LOG, LOG),
        ParamCurve(t * t + one, t, LOG, LOG),
        ParamCurve(t + two, t * t - one, LOG, LOG),
        ParamCurve(t * t * t - t, t + one, LOG, LOG),
    ]
    mixed = [
        ParamCurve(t, t * t + one, ID, LOG),
        ParamCurve(t, t, ID, LOG),
        ParamCurve(t * t + t, t + two, ID, LOG),
        ParamCurve(t * t * t - t, t * t + two, LOG, ID),
        ParamCurve(t + one, t, LOG, ID),
        ParamCurve(t * t + two, t * t + t, LOG, ID),
    ]
    return ii + ll + mixed


def seeded_translations(curve: ParamCurve, seed: int, count: int):
    """Deterministic nonzero translations matched to the transforms."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        def component(transform):
            if transform is ID:
                return Shift(Q(rng.randint(-6, 6), rng.randint(1, 3)))
            return Scale(Q(rng.randint(1, 9), rng.randint(1, 9)))

        sx, sy = component(curve.fx), component(curve.fy)
        if sx.trivial and sy.trivial:
            continue
        out.append((sx, sy))
    return out


def _rand_bivariate(rng: random.Random, max_deg: int) -> MultiPoly:
    while True:
        terms = {}
        for _ in range(rng.randint(2, 6)):
            ex = rng.randint(0, max_deg)
            ey = rng.randint(0, max_deg - ex if max_deg >= ex else 0)
            terms[(ex, ey)] = Q(rng.randint(-4, 4))
        P = MultiPoly(2, terms)
        if not P.is_zero and not P.is_constant:
            return P


# ---------------------------------------------------------------------------
# criteria
# ---------------------------------------------------------------------------


def crit_roundtrip(scale: dict, seed: int, fault: bool) -> tuple[bool, str]:
    count = scale["compositions"]
    failures = 0
    for kind in (ADDITIVE, MULTIPLICATIVE):
        detector = detect_additive if kind == ADDITIVE else detect_multiplicative
        for dec in seeded_compositions(seed + (kind == MULTIPLICATIVE), count, kind):
            P = dec.combine()
            got = detector(P)
            if got is None or not got.verify(P):
                failures += 1
                continue
            for u, v in zip(got.inner, dec.inner):
                if kind == ADDITIVE:
                    ok = equiv_a(u, v - UniPoly.constant(v(0))) is not None
                else:
                    ok = equiv_m(u, v.monic()) is not None
                if not ok:
                    failures += 1
                    break
    if fault:
        failures += 1
    return failures == 0, f"{2 * count} compositions, {failures} failures"


def crit_exclusivity(scale: dict, seed: int, fault: bool) -> tuple[bool, str]:
    count = scale["compositions"]
    both = 0
    polys: list[MultiPoly] = []
    for kind in (ADDITIVE, MULTIPLICATIVE):
        for dec in seeded_compositions(seed + (kind == MULTIPLICATIVE), count, kind):
            polys.append(dec.combine())
    polys.extend(seeded_unstructured(seed + 7, count))
    for P in polys:
        a = detect_additive(P)
        m = detect_multiplicative(P)
        if (a is not None) and (m is not None):
            both += 1
    if fault:
        both += 1
    return both == 0, f"{len(polys)} polynomials, {both} double detections"


def crit_implicitize(scale: dict, seed: int, fault: bool) -> tuple[bool, str]:
    rng = random.Random(seed + 2)
    bad = 0
    count = scale["implicitize"]
    for _ in range(count):
        p, q = seeded_parametrization(rng, 5)
        delta = max(p.degree or 0, q.degree or 0)
        curve = implicitize(p, q)  # raises on a failed vanishing check
        if (curve.F.total_degree or 0) > 2 * delta:
            bad += 1
    t = UniPoly.x()
    cusp = implicitize(t * t, t * t * t).F
    want = MultiPoly(2, {(3, 0): 1, (0, 2): -1})
    if cusp not in (want, -want):
        bad += 1
    if fault:
        bad += 1
    return bad == 0, f"{count} parametrizations + cusp, {bad} violations"


def crit_translate_bound(scale: dict, seed: int, fault: bool) -> tuple[bool, str]:
    violations = 0
    max_ratio = Fraction(0)
    observed = {}
    per_curve = scale["translations"]
    for ci, curve in enumerate(curve_corpus()):
        delta = curve.delta
        identity_case = curve.fx is ID and curve.fy is ID
        limit = (4 if identity_case else 16) * delta * delta
        if fault:
            limit = 0
        best = 0
        for sx, sy in seeded_translations(curve, seed + 11 + ci, per_curve):
            n = translate_intersection_count(curve, sx, sy)
            if n > limit:
                violations += 1
            else:
                best = max(best, n)
        observed[ci] = best
        if limit > 0:
            max_ratio = max(max_ratio, Fraction(best, limit))
    top = max(observed.values())
    return (
        violations == 0,
        f"{len(observed)} curves x {per_curve} translations, {violations} violations, "
        f"max count {top}, max count/bound {float(max_ratio):.3f}",
    )


def crit_bezout(scale: dict, seed: int, fault: bool) -> tuple[bool, str]:
    rng = random.Random(seed + 3)
    bad = 0
    coprime = scale["bezout_coprime"]
    planted = scale["bezout_planted"]
    done = 0
    while done < coprime:
        F = _rand_bivariate(rng, 4)
        G = _rand_bivariate(rng, 4)
        if not bivariate_gcd(F, G).is_constant:
            continue
        done += 1
        verdict = implicit_intersection(F, G)
        limit = F.total_degree * G.total_degree
        if fault:
            limit = -1
        if not isinstance(verdict, Finite) or verdict.count > limit:
            bad += 1
    for _ in range(planted):
        H = _rand_bivariate(rng, 2)
        F = H * _rand_bivariate(rng, 2)
        G = H * _rand_bivariate(rng, 2)
        verdict = implicit_intersection(F, G)
        if not isinstance(verdict, CommonFactor):
            bad += 1
    return bad == 0, f"{coprime} coprime + {planted} planted pairs, {bad} violations"


def crit_counting(scale: dict, seed: int, fault: bool) -> tuple[bool, str]:
    dmax = scale["counting_dmax"]
    shift = 1 if fault else 0
    cases = 0
    bad = 0
    for d in range(1, dmax + 1):
        for part in all_partitions(d):
            for t in range(1, d + 1):
                cases += 1
                hyp = hypothesis_holds(part, t)
                bound = part.max_block_size() >= -((d + t) // -2) + shift
                if hyp and not bound:
                    bad += 1
                    continue
                if not max_class_bound_check(part, t):
                    w = cyclic_shift_witness(part, t)
                    if w is None or equivalent_fixed_count(part, w) >= t or hyp:
                        bad += 1
                elif cyclic_shift_witness(part, t) is not None:
                    bad += 1
    return bad == 0, f"d <= {dmax}, {cases} (partition, t) cases, {bad} violations"


def crit_fiber_chains(scale: dict, seed: int, fault: bool) -> tuple[bool, str]:
    rng = random.Random(seed + 4)
    bad = 0
    count = scale["fiber_cases"]
    for _ in range(count):
        deg = rng.randint(1, 5)
        p = _rand_unipoly(rng, deg)
        while p.is_constant:
            p = _rand_unipoly(rng, deg)
        n = rng.randint(2, scale["fiber_setsize"])
        A = gen_set("random", n, {"num_range": 12 * n, "den_range": 6}, seed=rng.randint(0, 10**9))
        img = A.map(p)
        delta = p.degree
        if fault:
            # wrong constant for the negative control: a strict upper chain
            ok_fiber = len(img) < len(A)
        else:
            ok_fiber = delta * len(img) >= len(A) and len(img) <= len(A)
        logabs = len({abs(v) for v in img if v != 0})
        ok_log = 2 * logabs >= len(img) - 1 and logabs <= len(img)
        if not (ok_fiber and ok_log):
            bad += 1
    return bad == 0, f"{count} (p, A) pairs, {bad} violations"


def crit_flagship_growth(scale: dict, seed: int, fault: bool) -> tuple[bool, str]:
    ns = scale["growth_ns"]
    P = parse_poly("x+y^2")
    samples = []
    for n in ns:
        A = gen_set("ap", n)
        samples.append((n, len(image_set(P, [A, A]))))
    slope, _ = fit_exponent(samples)
    want = Fraction(5, 4) + (2 if fault else 0)
    ok1 = slope >= want
    sq = parse_poly("(x+y)^2")
    ok2 = True
    for n in ns:
        A = gen_set("ap", n)
        if len(image_set(sq, [A, A])) != 2 * n - 1:
            ok2 = False
    return ok1 and ok2, (
        f"slope {float(slope):.3f} (need >= {float(Fraction(5,4))}), "
        f"square-form sizes {'exact 2n-1' if ok2 else 'WRONG'} over n={list(ns)}"
    )


def crit_two_sided_product(scale: dict, seed: int, fault: bool) -> tuple[bool, str]:
    ns = scale["product_ns"]
    bad = 0
    sizes = []
    for n in ns:
        A = gen_set("ap", n)
        s1 = len({a + b for a in A for b in A})
        s2 = len({a * a + b for a in A for b in A})
        size = s1 * s2
        sizes.append(size)
        # exact integer comparison: size >= n^(5/2) iff size^2 >= n^5
        need = n**5
        if fault:
            need = n**6
        if size * size < need:
            bad += 1
    return bad == 0, f"products {sizes} over n={list(ns)}, {bad} below the bound"


def crit_classifier_verdicts(scale: dict, seed: int, fault: bool) -> tuple[bool, str]:
    checks = []
    v = classify_single(parse_poly("x+y^2"), 1)
    want_expo = Fraction(5, 4) + (1 if fault else 0)
    checks.append(isinstance(v, Expander) and v.exponent == want_expo)
    v = classify_single(parse_poly("(x+y)^3"), 1)
    checks.append(
        isinstance(v, Exceptional)
        and v.kind == ADDITIVE
        and v.index_set == (1, 2)
        and all(w == 1 for _, _, w in v.witnesses)
    )
    v = classify_pair(parse_poly("x+y"), parse_poly("x+y^2"), 1)
    checks.append(getattr(v, "exponent", None) == Fraction(5, 4))
    v = classify_pair(parse_poly("x*y"), parse_poly("x^2*y^2"), 1)
    checks.append(
        isinstance(v, ExceptionalPair)
        and v.kind == MULTIPLICATIVE
        and v.mismatch == ()
        and all(w == 2 for _, w in v.witnesses)
    )
    bad = checks.count(False)
    return bad == 0, f"4 verdict checks, {bad} mismatches"


def crit_determinism(scale: dict, seed: int, fault: bool) -> tuple[bool, str]:
    def canonical_report() -> str:
        lines = []
        part = Partition.from_blocks(4, [[1, 2], [3, 4]])
        w = cyclic_shift_witness(part, 2)
        lines.append(f"witness={w}")
        A = gen_set("random", 12, seed=seed)
        lines.append("set=" + ",".join(str(v) for v in A))
        P = parse_poly("x+y^2")
        sizes = [len(image_set(P, [gen_set("ap", n), gen_set("ap", n)])) for n in (4, 8, 16)]
        lines.append(f"sizes={sizes}")
        v = classify_single(P, 1)
        lines.append(f"verdict={type(v).__name__}:{v.exponent}")
        return "\n".join(lines)

    first = canonical_report()
    second = canonical_report()
    if fault:
        second += "?"
    return first == second, f"{len(first)} report bytes, identical={first == second}"


# ---------------------------------------------------------------------------
# runner
# ---------------------------------------------------------------------------

SCALES = {
    "small": {
        "compositions": 20,
        "implicitize": 15,
        "translations": 6,
        "bezout_coprime": 15,
        "bezout_planted": 8,
        "counting_dmax": 4,
        "fiber_cases": 40,
        "fiber_setsize": 24,
        "growth_ns": (8, 16, 32),
        "product_ns": (8, 16),
    },
    "full": {
        "compositions": 200,
        "implicitize": 100,
        "translations": 100,
        "bezout_coprime": 100,
        "bezout_planted": 50,
        "counting_dmax": 6,
        "fiber_cases": 200,
        "fiber_setsize": 64,
        "growth_ns": (8, 16, 32, 64, 128),
        "product_ns": (8, 16, 32, 64),
    },
}

CRITERIA: list[tuple[str, str, Callable]] = [
    ("roundtrip", "decomposition round-trip over seeded compositions", crit_roundtrip),
    ("exclusivity", "additive and multiplicative detection never both succeed", crit_exclusivity),
    ("implicitize", "implicit equations vanish exactly within the degree bound", crit_implicitize),
    ("translate-bound", "translate intersection counts within 4d^2 / 16d^2", crit_translate_bound),
    ("bezout", "coprime pairs stay within the degree product; planted factors found", crit_bezout),
    ("counting", "class-size bound and cyclic-shift witness, exhaustively", crit_counting),
    ("fiber-chains", "image and log-abs cardinality chains hold exactly", crit_fiber_chains),
    ("flagship-growth", "x+y^2 grows super-linearly; (x+y)^2 stays at 2n-1", crit_flagship_growth),
    ("two-sided-product", "sumset product beats n^(5/2) at every sampled n", crit_two_sided_product),
    ("classifier-verdicts", "exact expander/exceptional verdicts", crit_classifier_verdicts),
    ("determinism", "seeded replays produce identical reports", crit_determinism),
]


def run_criteria(
    scale: str = "small",
    seed: int = 0,
    only: Optional[str] = None,
    inject_fault: Optional[str] = None,
) -> list[CriterionResult]:
    if scale not in SCALES:
        raise ValueError(f"unknown scale {scale!r}")
    params = SCALES[scale]
    results = []
    for key, name, fn in CRITERIA:
        if only is not None and key != only:
            continue
        passed, detail = fn(params, seed, inject_fault == key)
        results.append(CriterionResult(key, name, passed, detail))
    if only is not None and not results:
        raise ValueError(f"unknown criterion {only!r}")
    return results
