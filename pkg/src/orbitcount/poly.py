"""Sparse multivariate polynomials with exact rational coefficients.

Variables are positional.  Printing uses ``x`` (one variable), ``x, y`` (two
variables, the affine plane) or ``x0, x1, x2`` (three, homogeneous
coordinates on the projective plane).  The monomial order is graded
lexicographic with ``x0 > x1 > x2`` (``x > y``), and it is fixed: leading
terms, canonical text and gcd normalization all depend on it.

Exact gcds go through :mod:`orbitcount._zpoly`: a heuristic gcd with a
recursive subresultant PRS fallback, both over the integers after clearing
denominators.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import reduce
from math import lcm
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence, Union

from . import _zpoly as Z

Scalar = Union[int, Fraction]
NEG_INF = float("-inf")

VAR_NAMES = {1: ("x",), 2: ("x", "y"), 3: ("x0", "x1", "x2")}


class NotDivisible(ArithmeticError):
    """Raised by :func:`divide_exact` when the division leaves a remainder."""


class VariableMismatch(ValueError):
    pass


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot use {value!r} as an exact scalar")


def _grlex(exp):
    return (sum(exp), exp)


class MultiPoly:
    """Immutable sparse polynomial in ``nvars`` variables over Q."""

    __slots__ = ("nvars", "_terms", "_degree", "_hash")

    def __init__(self, terms: Mapping | None = None, nvars: int = 3):
        if not 0 <= nvars <= 3:
            raise ValueError("between 0 and 3 variables supported")
        clean = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != nvars or any(e < 0 for e in exp):
                raise ValueError(f"bad exponent {exp} for {nvars} variables")
            c = as_fraction(c)
            if c:
                clean[exp] = clean.get(exp, Fraction(0)) + c
                if not clean[exp]:
                    del clean[exp]
        self.nvars = nvars
        self._terms = clean
        self._degree = max((sum(e) for e in clean), default=NEG_INF)
        self._hash = None

    # construction ----------------------------------------------------------
    @classmethod
    def _raw(cls, terms: dict, nvars: int) -> "MultiPoly":
        p = object.__new__(cls)
        p.nvars = nvars
        p._terms = terms
        p._degree = max((sum(e) for e in terms), default=NEG_INF)
        p._hash = None
        return p

    @classmethod
    def constant(cls, c: Scalar, nvars: int = 3) -> "MultiPoly":
        c = as_fraction(c)
        return cls._raw({(0,) * nvars: c} if c else {}, nvars)

    @classmethod
    def var(cls, i: int, nvars: int = 3) -> "MultiPoly":
        exp = [0] * nvars
        exp[i] = 1
        return cls._raw({tuple(exp): Fraction(1)}, nvars)

    @classmethod
    def linear(cls, coeffs: Sequence[Scalar], constant: Scalar = 0) -> "MultiPoly":
        """sum coeffs[i] * x_i + constant."""
        n = len(coeffs)
        terms = {(0,) * n: constant}
        for i, c in enumerate(coeffs):
            e = [0] * n
            e[i] = 1
            terms[tuple(e)] = c
        return cls(terms, n)

    # basic properties --------------------------------------------------------
    @property
    def terms(self) -> Mapping:
        return MappingProxyType(self._terms)

    @property
    def degree(self):
        """Total degree; ``-inf`` for the zero polynomial."""
        return self._degree

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return self._degree == NEG_INF or self._degree == 0

    def constant_value(self) -> Fraction:
        return self._terms.get((0,) * self.nvars, Fraction(0))

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self._terms}) <= 1

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self._terms), default=-1)

    def variables(self) -> set:
        return {i for e in self._terms for i, k in enumerate(e) if k}

    def leading_term(self):
        """(exponent, coefficient) of the grlex-largest monomial."""
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        exp = max(self._terms, key=_grlex)
        return exp, self._terms[exp]

    def __len__(self):
        return len(self._terms)

    # arithmetic ---------------------------------------------------------------
    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.nvars != self.nvars:
                raise VariableMismatch(f"{self.nvars} vs {other.nvars} variables")
            return other
        if isinstance(other, (int, Fraction)):
            return MultiPoly.constant(other, self.nvars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return MultiPoly._raw(out, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw({e: -c for e, c in self._terms.items()}, self.nvars)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return MultiPoly._raw({}, self.nvars)
            return MultiPoly._raw({e: c * other for e, c in self._terms.items()}, self.nvars)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._terms, other._terms
        if len(a) > len(b):
            a, b = b, a
        out: dict = {}
        get = out.get
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = get(e, 0) + c1 * c2
        return MultiPoly._raw({e: c for e, c in out.items() if c}, self.nvars)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / as_fraction(other))
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = MultiPoly.constant(1, self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.constant(other, self.nvars)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    # calculus and substitution ------------------------------------------------
    def diff(self, i: int) -> "MultiPoly":
        out = {}
        for e, c in self._terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = c * e[i]
        return MultiPoly._raw(out, self.nvars)

    def substitute(self, args: Sequence["MultiPoly"]) -> "MultiPoly":
        """Compose: replace variable i by args[i] (all args share one ring)."""
        if len(args) != self.nvars:
            raise VariableMismatch("wrong number of substitution arguments")
        if not self._terms:
            return MultiPoly._raw({}, args[0].nvars if args else 0)
        m = args[0].nvars
        powers: list = [dict() for _ in args]

        def power(i, k):
            cache = powers[i]
            if k not in cache:
                if k == 0:
                    cache[k] = MultiPoly.constant(1, m)
                elif k == 1:
                    cache[k] = args[i]
                else:
                    half = power(i, k // 2)
                    sq = half * half
                    cache[k] = sq * args[i] if k % 2 else sq
            return cache[k]

        acc: dict = {}
        for e, c in self._terms.items():
            term = MultiPoly.constant(c, m)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            for te, tc in term._terms.items():
                v = acc.get(te, 0) + tc
                if v:
                    acc[te] = v
                else:
                    acc.pop(te, None)
        return MultiPoly._raw(acc, m)

    def partial_evaluate(self, i: int, value: Scalar) -> "MultiPoly":
        """Set variable i to an exact value, keeping the variable count."""
        value = as_fraction(value)
        out: dict = {}
        for e, c in self._terms.items():
            ne = e[:i] + (0,) + e[i + 1:]
            v = out.get(ne, 0) + c * value ** e[i]
            if v:
                out[ne] = v
            else:
                out.pop(ne, None)
        return MultiPoly._raw(out, self.nvars)

    def drop_variable(self, i: int) -> "MultiPoly":
        """Reinterpret a polynomial not involving variable i in one fewer variable."""
        if any(e[i] for e in self._terms):
            raise ValueError(f"polynomial involves variable {i}")
        return MultiPoly._raw({e[:i] + e[i + 1:]: c for e, c in self._terms.items()},
                              self.nvars - 1)

    def coefficients_in(self, i: int) -> list:
        """Coefficient list by powers of variable i (index = power)."""
        out: list = [dict() for _ in range(self.degree_in(i) + 1)]
        for e, c in self._terms.items():
            out[e[i]][e[:i] + (0,) + e[i + 1:]] = c
        return [MultiPoly._raw(d, self.nvars) for d in out]

    def univariate_coeffs(self) -> list:
        """Ascending coefficient list of a polynomial in at most one live variable."""
        live = self.variables()
        if len(live) > 1:
            raise ValueError("polynomial is not univariate")
        i = live.pop() if live else 0
        return [c.constant_value() for c in self.coefficients_in(i)] if self._terms else [Fraction(0)]

    def evaluate(self, point: Sequence):
        return evaluate(self, point)

    __call__ = evaluate

    # integer views -----------------------------------------------------------
    def denominator_lcm(self) -> int:
        return reduce(lcm, (c.denominator for c in self._terms.values()), 1)

    def to_zpoly(self) -> tuple[dict, int]:
        """(integer dict, scale) with self = int_dict / scale."""
        s = self.denominator_lcm()
        return {e: int(c * s) for e, c in self._terms.items()}, s

    @classmethod
    def from_zpoly(cls, f: dict, nvars: int, scale: int = 1) -> "MultiPoly":
        return cls._raw({e: Fraction(c, scale) for e, c in f.items()}, nvars)

    def primitive(self) -> "MultiPoly":
        """Integer-coefficient primitive associate with positive leading coefficient."""
        f, _ = self.to_zpoly()
        return MultiPoly.from_zpoly(Z.zprimitive(f), self.nvars)

    def monic(self) -> "MultiPoly":
        return self * (1 / self.leading_term()[1])

    # text -----------------------------------------------------------------------
    def to_text(self) -> str:
        if not self._terms:
            return "0"
        names = VAR_NAMES.get(self.nvars, ())
        parts = []
        for exp in sorted(self._terms, key=_grlex, reverse=True):
            c = self._terms[exp]
            mons = [f"{names[i]}^{k}" for i, k in enumerate(exp) if k]
            body = "*".join([_fmt_frac(abs(c))] + mons)
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"MultiPoly({self.to_text()!r}, nvars={self.nvars})"


def _fmt_frac(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def parse(text: str, nvars: int | None = None) -> MultiPoly:
    """Parse the canonical text form (and looser hand-written variants).

    Accepts terms like ``3/2*x0^2*x1``, ``-x``, ``y^2``, ``5``.  When nvars is
    omitted it is inferred from the variable names used.
    """
    src = text.strip()
    if nvars is None:
        if re.search(r"x[012]", src):
            nvars = 3
        elif "y" in src:
            nvars = 2
        elif "x" in src:
            nvars = 1
        else:
            nvars = 0
    names = VAR_NAMES.get(nvars, ())
    index = {name: i for i, name in enumerate(names)}
    terms: dict = {}
    if src in ("", "0"):
        return MultiPoly({}, nvars)
    tokens = re.split(r"(?<![\^/*])\s*([+-])\s*", src)
    if tokens and tokens[0] == "":
        tokens = tokens[1:]
    else:
        tokens = ["+"] + tokens
    for j in range(0, len(tokens), 2):
        sgn, body = tokens[j], tokens[j + 1].strip()
        if not body:
            raise ValueError(f"empty term in {text!r}")
        sign = -1 if sgn == "-" else 1
        coeff = Fraction(sign)
        exp = [0] * nvars
        for factor in body.split("*"):
            factor = factor.strip()
            if not factor:
                raise ValueError(f"bad term {body!r}")
            if factor[0].isdigit():
                coeff *= Fraction(factor)
                continue
            name, _, power = factor.partition("^")
            if name not in index:
                raise ValueError(f"unknown variable {name!r} for {nvars} variables")
            exp[index[name]] += int(power) if power else 1
        key = tuple(exp)
        terms[key] = terms.get(key, Fraction(0)) + coeff
    return MultiPoly(terms, nvars)


# --- module-level operations -----------------------------------------------------

def _check_same(p: MultiPoly, q: MultiPoly):
    if p.nvars != q.nvars:
        raise VariableMismatch(f"{p.nvars} vs {q.nvars} variables")


def _x0_split(p: MultiPoly) -> tuple[int, MultiPoly]:
    k = min(e[0] for e in p._terms)
    if not k:
        return 0, p
    return k, MultiPoly._raw({(e[0] - k,) + e[1:]: c for e, c in p._terms.items()}, p.nvars)


def gcd(p: MultiPoly, q: MultiPoly, method: str = "auto") -> MultiPoly:
    """Greatest common divisor, primitive over Z with positive grlex-leading coefficient.

    Homogeneous inputs in two or more variables are dehomogenized with respect
    to the first variable (after splitting off its powers), which keeps the
    integer sizes in the heuristic gcd manageable.  ``method`` is "auto"
    (heuristic, PRS fallback), "heu" or "prs".
    """
    _check_same(p, q)
    n = p.nvars
    if p.is_zero() and q.is_zero():
        return MultiPoly({}, n)
    if p.is_zero():
        return q.primitive()
    if q.is_zero():
        return p.primitive()
    if p.is_constant() or q.is_constant():
        return MultiPoly.constant(1, n)
    if n >= 2 and p.is_homogeneous() and q.is_homogeneous():
        kp, p1 = _x0_split(p)
        kq, q1 = _x0_split(q)
        fp, _ = p1.to_zpoly()
        fq, _ = q1.to_zpoly()
        dp = {e[1:]: c for e, c in fp.items()}
        dq = {e[1:]: c for e, c in fq.items()}
        h = Z.zgcd(Z.zprimitive(dp), Z.zprimitive(dq), n - 1, method)
        deg = max(sum(e) for e in h)
        hom = {(deg - sum(e),) + e: c for e, c in h.items()}
        k = min(kp, kq)
        hom = {(e[0] + k,) + e[1:]: c for e, c in hom.items()}
        return MultiPoly.from_zpoly(Z.zprimitive(hom), n)
    fp, _ = p.to_zpoly()
    fq, _ = q.to_zpoly()
    h = Z.zgcd(Z.zprimitive(fp), Z.zprimitive(fq), n, method)
    return MultiPoly.from_zpoly(Z.zprimitive(h), n)


def gcd_many(polys: Iterable[MultiPoly]) -> MultiPoly:
    polys = [p for p in polys]
    g = polys[0]
    for p in polys[1:]:
        g = gcd(g, p)
        if g.is_constant() and not g.is_zero():
            return MultiPoly.constant(1, g.nvars)
    return g if g.is_zero() else g.primitive()


def divide_exact(p: MultiPoly, g: MultiPoly) -> MultiPoly:
    """Exact quotient p/g; NotDivisible if g does not divide p."""
    _check_same(p, g)
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    fp, sp = p.to_zpoly()
    fg, sg = g.to_zpoly()
    cg = Z.zcontent(fg)
    fg = {e: c // cg for e, c in fg.items()}
    # Gauss: a primitive integer divisor leaves an integral quotient
    try:
        quot = Z.zdivexact(fp, fg)
    except Z.InexactDivision:
        raise NotDivisible(f"{g} does not divide {p}") from None
    return MultiPoly.from_zpoly(quot, p.nvars) * Fraction(sg, sp * cg)


def divides(g: MultiPoly, p: MultiPoly) -> bool:
    try:
        divide_exact(p, g)
    except NotDivisible:
        return False
    return True


def _var_index(p: MultiPoly, eliminate) -> int:
    if isinstance(eliminate, int):
        return eliminate
    names = VAR_NAMES[p.nvars]
    return names.index(eliminate)


def sylvester_matrix(p: MultiPoly, q: MultiPoly, i: int) -> list:
    """Sylvester matrix (entries MultiPoly free of variable i)."""
    pc = p.coefficients_in(i)[::-1]
    qc = q.coefficients_in(i)[::-1]
    m, k = len(pc) - 1, len(qc) - 1
    size = m + k
    zero = MultiPoly({}, p.nvars)
    rows = []
    for r in range(k):
        rows.append([zero] * r + pc + [zero] * (size - m - 1 - r))
    for r in range(m):
        rows.append([zero] * r + qc + [zero] * (size - k - 1 - r))
    return rows


def resultant(p: MultiPoly, q: MultiPoly, eliminate=-1) -> MultiPoly:
    """Sylvester resultant eliminating a variable (index or name).

    Result keeps the variable count, with the eliminated variable absent.  The
    sign is that of the standard Sylvester determinant (rows of p first).
    """
    _check_same(p, q)
    if p.is_zero() or q.is_zero():
        raise ValueError("resultant of the zero polynomial")
    i = _var_index(p, eliminate) % p.nvars
    fp, sp = p.to_zpoly()
    fq, sq = q.to_zpoly()
    pi, qi = MultiPoly.from_zpoly(fp, p.nvars), MultiPoly.from_zpoly(fq, q.nvars)
    m, k = p.degree_in(i), q.degree_in(i)
    rows = sylvester_matrix(pi, qi, i)
    zrows = [[{e: int(c) for e, c in entry._terms.items()} for entry in row] for row in rows]
    det = Z.bareiss_det(zrows, p.nvars)
    return MultiPoly.from_zpoly(det, p.nvars) * Fraction(1, sp ** k * sq ** m)


def determinant(matrix: Sequence[Sequence[MultiPoly]]) -> MultiPoly:
    """Fraction-free determinant of a square matrix of polynomials over one ring."""
    size = len(matrix)
    if size == 0:
        raise ValueError("empty matrix")
    n = matrix[0][0].nvars
    scale = 1
    zrows = []
    for row in matrix:
        s = reduce(lcm, (e.denominator_lcm() for e in row), 1)
        scale *= s
        zrows.append([{e: int(c * s) for e, c in entry._terms.items()} for entry in row])
    return MultiPoly.from_zpoly(Z.bareiss_det(zrows, n), n) * Fraction(1, scale)


def evaluate(p: MultiPoly, point: Sequence):
    """Evaluate at a point.  Exact for Fraction/int inputs; float and complex
    (or mpmath) inputs are summed with compensated accumulation."""
    if len(point) != p.nvars:
        raise VariableMismatch(f"point of arity {len(point)} for {p.nvars} variables")
    if all(isinstance(v, (int, Fraction)) for v in point):
        total = Fraction(0)
        for e, c in p._terms.items():
            t = c
            for v, k in zip(point, e):
                if k:
                    t *= Fraction(v) ** k
            total += t
        return total
    if any(type(v).__module__.startswith("mpmath") for v in point):
        import mpmath

        vals = []
        for e, c in p._terms.items():
            t = mpmath.mpf(c.numerator) / c.denominator
            for v, k in zip(point, e):
                if k:
                    t *= v ** k
            vals.append(t)
        return mpmath.fsum(vals) if vals else mpmath.mpf(0)
    re_parts, im_parts = [], []
    pts = [complex(v) for v in point]
    for e, c in p._terms.items():
        t = complex(float(c))
        for v, k in zip(pts, e):
            if k:
                t *= v ** k
        re_parts.append(t.real)
        im_parts.append(t.imag)
    val = complex(math.fsum(re_parts), math.fsum(im_parts))
    if all(isinstance(v, float) for v in point):
        return val.real
    return val


# --- affine/projective conversions -------------------------------------------------

def homogenize(p: MultiPoly, degree: int | None = None) -> MultiPoly:
    """Bivariate (x, y) -> ternary form in (x0, x1, x2) via (x, y) = (x1/x0, x2/x0)."""
    if p.nvars != 2:
        raise VariableMismatch("homogenize expects a polynomial in (x, y)")
    d = p.degree if degree is None else degree
    if p.is_zero():
        return MultiPoly({}, 3)
    if d < p.degree:
        raise ValueError("target degree below polynomial degree")
    return MultiPoly._raw({(d - e[0] - e[1], e[0], e[1]): c for e, c in p._terms.items()}, 3)


def dehomogenize(p: MultiPoly) -> MultiPoly:
    """Ternary form -> bivariate polynomial on the chart x0 = 1."""
    if p.nvars != 3:
        raise VariableMismatch("dehomogenize expects a polynomial in (x0, x1, x2)")
    out: dict = {}
    for e, c in p._terms.items():
        key = e[1:]
        v = out.get(key, 0) + c
        if v:
            out[key] = v
        else:
            out.pop(key, None)
    return MultiPoly._raw(out, 2)


def X(i: int = 0, nvars: int = 3) -> MultiPoly:
    return MultiPoly.var(i, nvars)


def const(c: Scalar, nvars: int = 3) -> MultiPoly:
    return MultiPoly.constant(c, nvars)
