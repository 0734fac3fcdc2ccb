"""Univariate root finding: Aberth-Ehrlich iteration, clustering, exact rational roots."""
from __future__ import annotations

import cmath
import math
from fractions import Fraction
from typing import Sequence

import mpmath

from .poly import MultiPoly, divide_exact, gcd


class RootFindingError(RuntimeError):
    pass


def _horner(coeffs, z):
    """Value and derivative of sum coeffs[k] z^k (ascending)."""
    p = coeffs[-1]
    dp = 0 * p
    for c in reversed(coeffs[:-1]):
        dp = dp * z + p
        p = p * z + c
    return p, dp


def aberth(coeffs: Sequence, tol: float = 1e-15, maxiter: int = 2000, prec: int = 53) -> list:
    """All complex roots of sum coeffs[k] z^k (ascending order).

    Zero roots are split off exactly.  ``prec`` > 53 switches to mpmath
    arithmetic at that many mantissa bits.
    """
    cs = list(coeffs)
    while cs and cs[-1] == 0:
        cs.pop()
    if not cs:
        raise RootFindingError("zero polynomial has no isolated roots")
    nzero = 0
    while cs[nzero] == 0:
        nzero += 1
    cs = cs[nzero:]
    deg = len(cs) - 1
    use_mp = prec > 53
    if use_mp:
        ctx = mpmath.mp.clone()
        ctx.prec = prec

        def conv(c):
            if isinstance(c, (int, Fraction)):
                c = Fraction(c)
                return ctx.mpc(ctx.mpf(c.numerator) / c.denominator)
            return ctx.mpc(c)
    else:
        def conv(c):
            return complex(float(Fraction(c))) if isinstance(c, (int, Fraction)) else complex(c)
    zero_roots = [conv(0)] * nzero
    if deg == 0:
        return zero_roots
    a = [conv(c) for c in cs]
    lc = a[-1]
    a = [c / lc for c in a]
    if deg == 1:
        return zero_roots + [-a[0]]
    # Fujiwara bound for the root radius
    radius = 2 * max(float(abs(a[k])) ** (1.0 / (deg - k)) for k in range(deg))
    lower = min(float(abs(a[0])) ** (1.0 / deg), radius)
    r0 = max(math.sqrt(radius * max(lower, 1e-300)), 1e-12)
    z = [conv(r0 * cmath.exp(2j * math.pi * (k + 0.25) / deg + 0.4j)) for k in range(deg)]
    tol_eff = tol if not use_mp else 2.0 ** (-prec + 4)
    for _ in range(maxiter):
        biggest = 0.0
        for k in range(deg):
            zk = z[k]
            p, dp = _horner(a, zk)
            if p == 0:
                continue
            s = 0
            for j in range(deg):
                if j != k:
                    diff = zk - z[j]
                    if diff != 0:
                        s += 1 / diff
            w = p / dp if dp != 0 else conv(1e-3)
            denom = 1 - w * s
            corr = w / denom if denom != 0 else w
            z[k] = zk - corr
            rel = float(abs(corr)) / (1.0 + float(abs(z[k])))
            biggest = max(biggest, rel)
        if biggest < tol_eff:
            break
    return zero_roots + z


def cluster(points: Sequence[complex], radius: float) -> list[list[int]]:
    """Group indices of points whose chained distance stays below radius."""
    n = len(points)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(complex(points[i]) - complex(points[j])) <= radius * (1 + abs(complex(points[i]))):
                parent[find(i)] = find(j)
    groups: dict = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda g: g[0])


def squarefree_part(p: MultiPoly) -> MultiPoly:
    """p / gcd(p, p') for a univariate polynomial (any variable count)."""
    live = p.variables()
    if not live:
        return p
    i = live.pop()
    g = gcd(p, p.diff(i))
    return divide_exact(p, g).primitive() if not g.is_constant() else p.primitive()


def _mpf_to_fraction(x) -> Fraction:
    sign, man, exp, _ = mpmath.mpf(x)._mpf_
    man, exp = (-1) ** sign * int(man), int(exp)  # gmpy backends return mpz
    return Fraction(man) * Fraction(2) ** exp if exp >= 0 else Fraction(man, 2 ** (-exp))


def rational_roots(p: MultiPoly) -> list[tuple[Fraction, int]]:
    """Exact rational roots with multiplicity of a univariate polynomial.

    Roots of the squarefree part are located at high precision, snapped to the
    nearest rational with denominator dividing the leading coefficient, and
    kept only if they are exact zeros.
    """
    live = p.variables()
    if p.is_zero():
        raise ValueError("zero polynomial")
    if not live:
        return []
    var = live.pop()
    sq = squarefree_part(p)
    coeffs = [c.constant_value() for c in sq.coefficients_in(var)]
    lc = abs(coeffs[-1].numerator)
    digits = max(len(str(abs(c.numerator))) for c in coeffs if c) + len(str(lc))
    found = []
    with mpmath.workdps(max(30, 3 * digits)):
        try:
            approx = mpmath.polyroots([mpmath.mpf(c.numerator) / c.denominator for c in reversed(coeffs)],
                                      maxsteps=400, extraprec=4 * digits + 60)
        except mpmath.libmp.NoConvergence:
            approx = aberth(coeffs, prec=int(3.4 * max(30, 3 * digits)))
        for r in approx:
            r = mpmath.mpc(r)
            if abs(r.imag) > mpmath.mpf(10) ** (-digits) * (1 + abs(r.real)):
                continue
            cand = _mpf_to_fraction(r.real).limit_denominator(max(lc, 1))
            if sq.evaluate(_point(sq.nvars, var, cand)) == 0 and cand not in [f for f, _ in found]:
                found.append((cand, 0))
    out = []
    for root, _ in found:
        lin = _linear_factor(p.nvars, var, root)
        m, q = 0, p
        while True:
            try:
                q = divide_exact(q, lin)
            except ArithmeticError:
                break
            m += 1
        out.append((root, m))
    return sorted(out)


def _point(nvars, var, value):
    pt = [Fraction(0)] * nvars
    pt[var] = value
    return pt


def _linear_factor(nvars, var, root):
    terms = {tuple(1 if k == var else 0 for k in range(nvars)): root.denominator,
             (0,) * nvars: -root.numerator}
    return MultiPoly(terms, nvars)


def numeric_roots(p: MultiPoly, prec: int = 53) -> list:
    """Numeric roots of a univariate polynomial (ascending-variable agnostic)."""
    coeffs = p.univariate_coeffs()
    return aberth(coeffs, prec=prec)


def squarefree_decomposition(p: MultiPoly) -> list[tuple[MultiPoly, int]]:
    """Yun's algorithm: [(a_k, k)] with p = c * prod a_k^k, each a_k squarefree, pairwise coprime.

    ``p`` must involve a single variable; constant factors are dropped.
    """
    live = p.variables()
    if not live:
        return []
    i = live.pop()
    dp = p.diff(i)
    a0 = gcd(p, dp)
    b = divide_exact(p, a0)
    c = divide_exact(dp, a0)
    d = c - b.diff(i)
    out = []
    k = 1
    while not b.is_constant():
        a = gcd(b, d) if not d.is_zero() else b
        if not a.is_constant():
            out.append((a.primitive(), k))
        b = divide_exact(b, a)
        c = divide_exact(d, a)
        d = c - b.diff(i)
        k += 1
    return out


def scaled_float_coeffs(coeffs: Sequence[Fraction]) -> list[float]:
    """Float images of exact coefficients after a common power-of-two scaling (no overflow)."""
    top = max((abs(Fraction(c)) for c in coeffs if c), default=Fraction(1))
    shift = top.numerator.bit_length() - top.denominator.bit_length()
    scale = Fraction(2) ** -shift if shift >= 0 else Fraction(2 ** -shift)
    return [float(Fraction(c) * scale) for c in coeffs]


def polished_roots(coeffs: Sequence[Fraction], dps: int) -> list:
    """All roots of a squarefree polynomial (ascending exact coefficients) to about dps digits.

    Double-precision Aberth iteration gives the starting points; Newton steps
    in extended precision polish them.  If the polished set collapses (two
    starts converging to one root) the whole set is recomputed with
    extended-precision Aberth iteration.
    """
    ctx = mpmath.mp.clone()
    ctx.dps = dps
    exact = [Fraction(c) for c in coeffs]
    while exact and exact[-1] == 0:
        exact.pop()
    deg = len(exact) - 1
    if deg < 1:
        return []
    mpc = [ctx.mpf(c.numerator) / c.denominator for c in exact]
    starts = aberth(scaled_float_coeffs(exact))
    eps = ctx.mpf(10) ** (-dps + 5)

    def polish(z):
        z = ctx.mpc(z)
        for _ in range(60):
            p, dp = _horner(mpc, z)
            if dp == 0:
                return None
            step = p / dp
            z -= step
            if abs(step) <= eps * (1 + abs(z)):
                return z
        return None

    out = [polish(z) for z in starts]
    ok = all(z is not None for z in out)
    if ok:
        sep = ctx.mpf(10) ** (-dps // 3)
        for i in range(deg):
            for j in range(i + 1, deg):
                if abs(out[i] - out[j]) <= sep * (1 + abs(out[i])):
                    ok = False
                    break
            if not ok:
                break
    if not ok:
        out = aberth(exact, prec=int(dps * 3.33) + 8)
        out = [polish(z) or ctx.mpc(z) for z in out]
    return out
