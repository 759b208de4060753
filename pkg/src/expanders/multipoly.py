"""Sparse multivariate polynomials over the rationals.

Terms live in a map from exponent tuples to nonzero Fractions; canonical
order everywhere is graded lexicographic, highest first.  The repo-wide text
grammar (variables x1..xd with x,y,z aliases for d <= 3, operators + - * ^,
rational literals a/b) and the JSON term-list serialization live here too.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .errors import DomainError
from .unipoly import Q, UniPoly, _as_fraction, unipoly_gcd

Exponent = tuple[int, ...]


def _grlex_key(e: Exponent):
    return (sum(e), e)


class MultiPoly:
    """Immutable sparse polynomial in variables x1..xd (d = arity)."""

    __slots__ = ("arity", "terms")

    def __init__(self, arity: int, terms: Mapping[Exponent, object] = ()):
        if arity < 1:
            raise DomainError("arity must be positive")
        tm: dict[Exponent, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for e, c in items:
            e = tuple(int(k) for k in e)
            if len(e) != arity or any(k < 0 for k in e):
                raise DomainError(f"bad exponent {e} for arity {arity}")
            c = _as_fraction(c)
            if c == 0:
                continue
            acc = tm.get(e)
            c = c if acc is None else acc + c
            if c == 0:
                tm.pop(e, None)
            else:
                tm[e] = c
        object.__setattr__(self, "arity", arity)
        object.__setattr__(self, "terms", tm)

    def __setattr__(self, *a):
        raise AttributeError("MultiPoly is immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(arity: int) -> "MultiPoly":
        return MultiPoly(arity, {})

    @staticmethod
    def constant(arity: int, c) -> "MultiPoly":
        return MultiPoly(arity, {(0,) * arity: c})

    @staticmethod
    def variable(arity: int, i: int) -> "MultiPoly":
        """The variable x_i (1-based)."""
        if not 1 <= i <= arity:
            raise DomainError(f"variable index {i} out of range 1..{arity}")
        e = [0] * arity
        e[i - 1] = 1
        return MultiPoly(arity, {tuple(e): 1})

    @staticmethod
    def from_unipoly(p: UniPoly, arity: int, i: int) -> "MultiPoly":
        """Embed a univariate polynomial as a polynomial in x_i."""
        if not 1 <= i <= arity:
            raise DomainError("variable index out of range")
        tm = {}
        for k, c in enumerate(p.coeffs):
            if c:
                e = [0] * arity
                e[i - 1] = k
                tm[tuple(e)] = c
        return MultiPoly(arity, tm)

    # -- queries -----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    @property
    def total_degree(self) -> Optional[int]:
        if not self.terms:
            return None
        return max(sum(e) for e in self.terms)

    def degree_in(self, i: int) -> Optional[int]:
        """Degree in x_i (1-based); None for the zero polynomial."""
        if not self.terms:
            return None
        return max(e[i - 1] for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.arity, Q(0))

    def sorted_terms(self) -> list[tuple[Exponent, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def leading(self) -> tuple[Exponent, Fraction]:
        if not self.terms:
            raise DomainError("zero polynomial has no leading term")
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MultiPoly)
            and self.arity == other.arity
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.arity, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # -- arithmetic --------------------------------------------------------

    def _check_arity(self, other: "MultiPoly"):
        if self.arity != other.arity:
            raise DomainError("arity mismatch")

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        self._check_arity(other)
        tm = dict(self.terms)
        for e, c in other.terms.items():
            acc = tm.get(e)
            s = c if acc is None else acc + c
            if s == 0:
                tm.pop(e, None)
            else:
                tm[e] = s
        return MultiPoly(self.arity, tm)

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.arity, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (-other)

    def __mul__(self, other: "MultiPoly") -> "MultiPoly":
        self._check_arity(other)
        out: dict[Exponent, Fraction] = {}
        bi = list(other.terms.items())
        for ea, ca in self.terms.items():
            for eb, cb in bi:
                e = tuple(x + y for x, y in zip(ea, eb))
                c = ca * cb
                acc = out.get(e)
                s = c if acc is None else acc + c
                if s == 0:
                    out.pop(e, None)
                else:
                    out[e] = s
        return MultiPoly(self.arity, out)

    def scale(self, c) -> "MultiPoly":
        c = _as_fraction(c)
        if c == 0:
            return MultiPoly.zero(self.arity)
        return MultiPoly(self.arity, {e: c * v for e, v in self.terms.items()})

    def __pow__(self, n: int) -> "MultiPoly":
        if n < 0:
            raise DomainError("negative power")
        out = MultiPoly.constant(self.arity, 1)
        for _ in range(n):
            out = out * self
        return out

    def eval(self, point: Sequence) -> Fraction:
        if len(point) != self.arity:
            raise DomainError("point arity mismatch")
        pt = [_as_fraction(v) for v in point]
        total = Q(0)
        for e, c in self.terms.items():
            v = c
            for x, k in zip(pt, e):
                if k:
                    v *= x**k
            total += v
        return total

    def specialize(self, i: int, value) -> "MultiPoly":
        """Substitute x_i = value (arity preserved, x_i degree drops to 0)."""
        value = _as_fraction(value)
        out: dict[Exponent, Fraction] = {}
        for e, c in self.terms.items():
            k = e[i - 1]
            if k:
                c = c * value**k
                if c == 0:
                    continue
                e = e[: i - 1] + (0,) + e[i:]
            acc = out.get(e)
            s = c if acc is None else acc + c
            if s == 0:
                out.pop(e, None)
            else:
                out[e] = s
        return MultiPoly(self.arity, out)

    def restrict_to_var(self, i: int, values: Mapping[int, object]) -> UniPoly:
        """Specialize every variable except x_i and collapse to a UniPoly."""
        p = self
        for j, v in values.items():
            if j != i:
                p = p.specialize(j, v)
        return p.to_unipoly_in(i)

    def to_unipoly_in(self, i: int) -> UniPoly:
        deg = self.degree_in(i)
        if deg is None:
            return UniPoly.zero()
        coeffs = [Q(0)] * (deg + 1)
        for e, c in self.terms.items():
            if any(k and j != i - 1 for j, k in enumerate(e)):
                raise DomainError("polynomial is not univariate in the target variable")
            coeffs[e[i - 1]] += c
        return UniPoly(coeffs)

    def substitute_univariate(self, i: int, g: UniPoly) -> "MultiPoly":
        """Substitute x_i -> g(x_i); used for per-coordinate affine maps."""
        out = MultiPoly.zero(self.arity)
        gm = MultiPoly.from_unipoly(g, self.arity, i)
        powers: dict[int, MultiPoly] = {0: MultiPoly.constant(self.arity, 1)}
        deg = self.degree_in(i) or 0
        for k in range(1, deg + 1):
            powers[k] = powers[k - 1] * gm
        for e, c in self.terms.items():
            k = e[i - 1]
            rest = MultiPoly(self.arity, {e[: i - 1] + (0,) + e[i:]: c})
            out = out + rest * powers[k]
        return out

    def compose_many(self, inners: Sequence[UniPoly]) -> "MultiPoly":
        """Substitute x_i -> inners[i-1](x_i) for every variable."""
        if len(inners) != self.arity:
            raise DomainError("need one inner polynomial per variable")
        p = self
        for i, g in enumerate(inners, start=1):
            p = p.substitute_univariate(i, g)
        return p

    def partial(self, i: int) -> "MultiPoly":
        if not 1 <= i <= self.arity:
            raise DomainError(f"variable index {i} out of range 1..{self.arity}")
        out = {}
        for e, c in self.terms.items():
            k = e[i - 1]
            if k:
                out[e[: i - 1] + (k - 1,) + e[i:]] = c * k
        return MultiPoly(self.arity, out)

    # -- division / normal forms -------------------------------------------

    def exact_div(self, other: "MultiPoly") -> "MultiPoly":
        """Exact quotient self/other; DomainError when not divisible."""
        self._check_arity(other)
        if other.is_zero:
            raise DomainError("division by zero polynomial")
        rem = dict(self.terms)
        le, lcv = other.leading()
        quot: dict[Exponent, Fraction] = {}
        while rem:
            re = max(rem, key=_grlex_key)
            qe = tuple(a - b for a, b in zip(re, le))
            if any(k < 0 for k in qe):
                raise DomainError("division is not exact")
            qc = rem[re] / lcv
            quot[qe] = qc
            for oe, oc in other.terms.items():
                te = tuple(a + b for a, b in zip(qe, oe))
                s = rem.get(te, Q(0)) - qc * oc
                if s == 0:
                    rem.pop(te, None)
                else:
                    rem[te] = s
        return MultiPoly(self.arity, quot)

    def primitive(self) -> "MultiPoly":
        """Integer coefficients with content 1, graded-lex leading coef > 0."""
        if self.is_zero:
            return self
        den = math.lcm(*(c.denominator for c in self.terms.values()))
        ints = {e: int(c * den) for e, c in self.terms.items()}
        g = math.gcd(*ints.values())
        _, lead = max(ints.items(), key=lambda t: _grlex_key(t[0]))
        if lead < 0:
            g = -g
        return MultiPoly(self.arity, {e: Q(v, g) for e, v in ints.items()})

    # -- display / serialization -------------------------------------------

    def __repr__(self):
        return f"MultiPoly({self.to_text()})"

    def var_name(self, i: int) -> str:
        if self.arity <= 3:
            return "xyz"[i - 1]
        return f"x{i}"

    def to_text(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            factors = []
            for j, k in enumerate(e):
                if k == 0:
                    continue
                v = self.var_name(j + 1)
                factors.append(v if k == 1 else f"{v}^{k}")
            mag = abs(c)
            if factors and mag == 1:
                body = "*".join(factors)
            elif factors:
                body = f"{mag}*" + "*".join(factors)
            else:
                body = str(mag)
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)

    def to_json(self) -> dict:
        return {
            "arity": self.arity,
            "terms": [
                {"exp": list(e), "coef": str(c)} for e, c in self.sorted_terms()
            ],
        }

    @staticmethod
    def from_json(obj: Mapping) -> "MultiPoly":
        return MultiPoly(
            int(obj["arity"]),
            [(tuple(t["exp"]), Fraction(t["coef"])) for t in obj["terms"]],
        )


# -- text grammar ------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<var>x\d+|[xyz])|(?P<op>[-+*^()/]))"
)
_ALIAS = {"x": 1, "y": 2, "z": 3}


class _Parser:
    def __init__(self, text: str):
        self.tokens = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                if text[pos:].strip():
                    raise DomainError(f"bad character in polynomial: {text[pos:][:10]!r}")
                break
            pos = m.end()
            if m.group("int"):
                self.tokens.append(("int", int(m.group("int"))))
            elif m.group("var"):
                v = m.group("var")
                idx = _ALIAS[v] if v in _ALIAS else int(v[1:])
                if idx < 1:
                    raise DomainError(f"bad variable {v!r}")
                self.tokens.append(("var", idx))
            else:
                self.tokens.append(("op", m.group("op")))
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def next(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect_op(self, op: str):
        kind, val = self.next()
        if kind != "op" or val != op:
            raise DomainError(f"expected {op!r} in polynomial expression")


def parse_poly(text: str, arity: Optional[int] = None) -> MultiPoly:
    """Parse the repo-wide polynomial grammar into a MultiPoly.

    Arity defaults to the highest variable index used (at least 1).
    """
    parser = _Parser(text)
    max_idx = max((v for k, v in parser.tokens if k == "var"), default=1)
    d = arity if arity is not None else max_idx
    if max_idx > d:
        raise DomainError(f"variable x{max_idx} exceeds arity {d}")

    def parse_expr() -> MultiPoly:
        node = parse_term()
        while True:
            kind, val = parser.peek()
            if kind == "op" and val in "+-":
                parser.next()
                rhs = parse_term()
                node = node + rhs if val == "+" else node - rhs
            else:
                return node

    def parse_term() -> MultiPoly:
        node = parse_factor()
        while True:
            kind, val = parser.peek()
            if kind == "op" and val == "*":
                parser.next()
                node = node * parse_factor()
            else:
                return node

    def parse_factor() -> MultiPoly:
        kind, val = parser.peek()
        if kind == "op" and val in "+-":
            parser.next()
            node = parse_factor()
            return node if val == "+" else -node
        node = parse_atom()
        while True:
            kind, val = parser.peek()
            if kind == "op" and val == "^":
                parser.next()
                ekind, ev = parser.next()
                if ekind != "int":
                    raise DomainError("exponent must be a nonnegative integer")
                node = node**ev
            else:
                return node

    def parse_atom() -> MultiPoly:
        kind, val = parser.next()
        if kind == "int":
            # a '/' may only join two integer literals into a rational
            nkind, nval = parser.peek()
            if nkind == "op" and nval == "/":
                parser.next()
                dkind, dval = parser.next()
                if dkind != "int" or dval == 0:
                    raise DomainError("bad rational literal")
                return MultiPoly.constant(d, Fraction(val, dval))
            return MultiPoly.constant(d, val)
        if kind == "var":
            return MultiPoly.variable(d, val)
        if kind == "op" and val == "(":
            node = parse_expr()
            parser.expect_op(")")
            return node
        raise DomainError("malformed polynomial expression")

    result = parse_expr()
    if parser.pos != len(parser.tokens):
        raise DomainError("trailing input in polynomial expression")
    return result


# -- bivariate gcd ------------------------------------------------------------


def _as_y_coeffs(F: MultiPoly) -> list[UniPoly]:
    """View a 2-variable polynomial as coefficients in y over Q[x]."""
    deg = F.degree_in(2)
    out: list[list] = [[] for _ in range(deg + 1)]
    for (ex, ey), c in F.terms.items():
        row = out[ey]
        while len(row) <= ex:
            row.append(Q(0))
        row[ex] += c
    return [UniPoly(row) for row in out]


def _from_y_coeffs(coeffs: Sequence[UniPoly]) -> MultiPoly:
    tm = {}
    for ey, p in enumerate(coeffs):
        for ex, c in enumerate(p.coeffs):
            if c:
                tm[(ex, ey)] = c
    return MultiPoly(2, tm)


def _y_content(coeffs: Sequence[UniPoly]) -> UniPoly:
    from .unipoly import uni_content_gcd

    return uni_content_gcd(coeffs)


def _y_primitive(coeffs: Sequence[UniPoly]) -> list[UniPoly]:
    cont = _y_content(coeffs)
    if cont.degree == 0:
        return list(coeffs)
    return [p.exact_div(cont) if not p.is_zero else p for p in coeffs]


def _y_prem(A: list[UniPoly], B: list[UniPoly]) -> list[UniPoly]:
    """Pseudo-remainder of A by B in y with UniPoly coefficients."""
    A = list(A)
    db = len(B) - 1
    lb = B[-1]
    while len(A) - 1 >= db and any(not p.is_zero for p in A):
        while A and A[-1].is_zero:
            A.pop()
        if len(A) - 1 < db:
            break
        da = len(A) - 1
        la = A[-1]
        # multiply A by lb then subtract la * y^(da-db) * B
        A = [p * lb for p in A]
        for k in range(db + 1):
            A[da - db + k] = A[da - db + k] - la * B[k]
        while A and A[-1].is_zero:
            A.pop()
    return A


def bivariate_gcd(F: MultiPoly, G: MultiPoly) -> MultiPoly:
    """Primitive positive-leading gcd in Q[x,y].

    Content/primitive-part recursion over Q[x], with a primitive
    pseudo-remainder sequence doing the rational-function-field Euclid.
    """
    if F.arity != 2 or G.arity != 2:
        raise DomainError("bivariate gcd needs arity-2 polynomials")
    if F.is_zero and G.is_zero:
        raise DomainError("gcd of two zero polynomials")
    if F.is_zero:
        return G.primitive()
    if G.is_zero:
        return F.primitive()

    fy, gy = F.degree_in(2), G.degree_in(2)
    if fy == 0 and gy == 0:
        g = unipoly_gcd(F.to_unipoly_in(1), G.to_unipoly_in(1))
        return MultiPoly.from_unipoly(g, 2, 1).primitive()
    if fy == 0:
        cont = _y_content(_as_y_coeffs(G))
        g = unipoly_gcd(F.to_unipoly_in(1), cont)
        return MultiPoly.from_unipoly(g, 2, 1).primitive()
    if gy == 0:
        return bivariate_gcd(G, F)

    A, B = _as_y_coeffs(F), _as_y_coeffs(G)
    contA, contB = _y_content(A), _y_content(B)
    cont = unipoly_gcd(contA, contB)
    A, B = _y_primitive(A), _y_primitive(B)
    if len(A) < len(B):
        A, B = B, A
    while True:
        R = _y_prem(A, B)
        if not R or all(p.is_zero for p in R):
            g = B
            break
        if len(R) - 1 == 0:
            # common divisor of primitive parts has y-degree 0 => trivial
            g = [UniPoly.constant(1)]
            break
        A, B = B, _y_primitive(R)
    gcd_pp = _from_y_coeffs(_y_primitive(g))
    result = gcd_pp * MultiPoly.from_unipoly(cont, 2, 1)
    return result.primitive()
