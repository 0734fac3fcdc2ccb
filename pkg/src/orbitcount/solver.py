"""Numerical census of period-n points.

The pipeline is: reduced n-th iterate -> affine fixed-point system ->
resultant elimination + Aberth roots + Newton refinement -> orbit validation
against the original recurrence -> orbit grouping and comparison with the
predicted count.  Everything is seeded and deterministic.
"""
from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field, asdict
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from . import poly as P
from .poly import MultiPoly, divide_exact, gcd, resultant
from .projmap import (BudgetExceeded, ProjectiveMap, homogenize, iterate_map, random_rational)
from .roots import aberth, cluster, polished_roots, rational_roots, squarefree_decomposition

DEFAULTS = {
    "cluster_radius": 1e-6,
    "newton_tol": 1e-10,
    "pole_guard": 1e-8,
    "overflow_guard": 1e8,
    "closure_tol": 1e-8,
}


class NonIsolatedError(ArithmeticError):
    """The system has a positive-dimensional common zero set."""

    def __init__(self, factor: MultiPoly):
        super().__init__(f"common factor {factor}")
        self.factor = factor


class IllConditioned(RuntimeError):
    pass


@dataclass
class PeriodicPoint:
    x: complex
    y: complex
    residual: float
    simple: bool = True
    multiplicity: int = 1
    orbit_id: int | None = None

    def key(self):
        return (round(self.x.real, 8), round(self.x.imag, 8), round(self.y.real, 8), round(self.y.imag, 8))

    def to_json(self) -> dict:
        return {"x": [repr(self.x.real), repr(self.x.imag)], "y": [repr(self.y.real), repr(self.y.imag)],
                "residual": repr(self.residual), "simple": self.simple,
                "multiplicity": self.multiplicity, "orbit_id": self.orbit_id}

    @classmethod
    def from_json(cls, d) -> "PeriodicPoint":
        return cls(complex(float(d["x"][0]), float(d["x"][1])), complex(float(d["y"][0]), float(d["y"][1])),
                   float(d["residual"]), d["simple"], d["multiplicity"], d["orbit_id"])


# ---------------------------------------------------------------------------
# numeric evaluation helpers


class _Compiled:
    """Fast complex evaluation of a bivariate polynomial and its gradient."""

    def __init__(self, p: MultiPoly):
        self.terms = [(e[0], e[1], complex(float(c))) for e, c in p.terms.items()]
        self.exact = p

    def value_scale(self, x, y):
        vals = [c * x ** a * y ** b for a, b, c in self.terms]
        re = math.fsum(v.real for v in vals)
        im = math.fsum(v.imag for v in vals)
        return complex(re, im), sum(abs(v) for v in vals)

    def abs_scale(self, x, y) -> float:
        """Term magnitudes summed at (1+|x|, 1+|y|); never zero for a nonzero polynomial."""
        ax, ay = 1 + abs(x), 1 + abs(y)
        return sum(abs(c) * ax ** a * ay ** b for a, b, c in self.terms)

    def grad(self, x, y):
        gx = sum(c * a * x ** (a - 1) * y ** b for a, b, c in self.terms if a)
        gy = sum(c * b * x ** a * y ** (b - 1) for a, b, c in self.terms if b)
        return gx, gy


def _mp_eval(p: MultiPoly, x, y, ctx):
    v = ctx.mpc(0)
    gx = ctx.mpc(0)
    gy = ctx.mpc(0)
    scale = ctx.mpf(0)
    for (a, b), c in p.terms.items():
        cc = ctx.mpf(c.numerator) / c.denominator
        v += cc * x ** a * y ** b
        scale += abs(cc) * (1 + abs(x)) ** a * (1 + abs(y)) ** b
        if a:
            gx += cc * a * x ** (a - 1) * y ** b
        if b:
            gy += cc * b * x ** a * y ** (b - 1)
    return v, scale, gx, gy


def _rel_residual(fp: _Compiled, fq: _Compiled, x, y) -> float:
    # normwise backward error; dividing by the sum of the terms instead would
    # blow up near a line where every term of P or Q is small
    vp, _ = fp.value_scale(x, y)
    vq, _ = fq.value_scale(x, y)
    return max(abs(vp) / fp.abs_scale(x, y), abs(vq) / fq.abs_scale(x, y))


def newton(fp: _Compiled, fq: _Compiled, x: complex, y: complex, tol: float, maxiter: int = 60):
    """Damped Newton on (P, Q) = 0; returns (x, y, relative residual)."""
    res = _rel_residual(fp, fq, x, y)
    for _ in range(maxiter):
        if res < tol * 1e-3:
            break
        vp, _ = fp.value_scale(x, y)
        vq, _ = fq.value_scale(x, y)
        px, py = fp.grad(x, y)
        qx, qy = fq.grad(x, y)
        det = px * qy - py * qx
        if det == 0 or not np.isfinite(abs(det)):
            break
        dx = (vp * qy - py * vq) / det
        dy = (px * vq - vp * qx) / det
        lam = 1.0
        for _ in range(12):
            nx, ny = x - lam * dx, y - lam * dy
            if not (np.isfinite(abs(nx)) and np.isfinite(abs(ny))):
                lam /= 2
                continue
            nres = _rel_residual(fp, fq, nx, ny)
            if nres < res or lam < 1e-3:
                break
            lam /= 2
        if not (np.isfinite(abs(nx)) and np.isfinite(abs(ny))):
            break
        step = abs(lam * dx) + abs(lam * dy)
        x, y, res = nx, ny, nres
        if step <= 1e-16 * (1 + abs(x) + abs(y)):
            break
    return x, y, res


def newton_mp(p: MultiPoly, q: MultiPoly, x, y, prec: int, maxiter: int = 80):
    """Newton in extended precision; used when the double-precision pass stalls."""
    ctx = mpmath.mp.clone()
    ctx.prec = prec
    x, y = ctx.mpc(x), ctx.mpc(y)
    res = None
    for _ in range(maxiter):
        vp, sp, px, py = _mp_eval(p, x, y, ctx)
        vq, sq, qx, qy = _mp_eval(q, x, y, ctx)
        res = max(abs(vp) / max(sp, ctx.mpf(2) ** -prec), abs(vq) / max(sq, ctx.mpf(2) ** -prec))
        det = px * qy - py * qx
        if det == 0 or res < ctx.mpf(2) ** (-prec + 8):
            break
        x, y = x - (vp * qy - py * vq) / det, y - (px * vq - vp * qx) / det
    return complex(x), complex(y), float(res)


# ---------------------------------------------------------------------------
# bivariate solving


def _transforms(rng: random.Random):
    """(x, y) = T(u, v) for the elimination passes: identity, swap, random shear."""
    yield ((1, 0), (0, 1))
    yield ((0, 1), (1, 0))
    for _ in range(2):
        a = random_rational(rng, 7)
        b = random_rational(rng, 7)
        if 1 - a * b:
            yield ((1, a), (b, 1))


def _apply(p: MultiPoly, t) -> MultiPoly:
    u, v = P.X(0, 2), P.X(1, 2)
    (a, b), (c, d) = t
    return p.substitute([u * a + v * b, u * c + v * d])


def _mp_horner(coeffs, z):
    acc = 0 * z
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def _trim(vals, ctx, rel):
    """Drop leading (top-degree) coefficients that vanish to working precision."""
    top = max((abs(v) for v in vals), default=ctx.mpf(0))
    vals = list(vals)
    while vals and abs(vals[-1]) <= rel * top:
        vals.pop()
    return vals, top


def _common_y_numeric(pc, qc, xi, ctx, k: int):
    """Common roots in y of P(xi, y) and Q(xi, y), xi known to working precision.

    Returns (list of (y, cluster size), at_infinity flag).
    """
    dps = ctx.dps
    accept = ctx.mpf(10) ** (-dps / (2.0 * k) + 2)
    zero = ctx.mpf(10) ** (-dps + 10)
    pv, ps = _trim([_mp_horner(c, xi) for c in pc], ctx, zero)
    qv, qs = _trim([_mp_horner(c, xi) for c in qc], ctx, zero)
    pscale = [abs(_mp_horner([abs(t) for t in c], abs(xi))) for c in pc]
    qscale = [abs(_mp_horner([abs(t) for t in c], abs(xi))) for c in qc]
    live = [(v, sc) for v, sc in ((pv, pscale), (qv, qscale)) if len(v) >= 1]
    if len(pv) <= 1 and len(qv) <= 1:
        # both slices are (numerically) constants: common zero only if both vanish
        return [], len(pv) == 0 and len(qv) == 0
    live.sort(key=lambda t: len(t[0]) if len(t[0]) > 1 else 10 ** 9)
    primary = live[0][0]
    others = [(v, sc) for v, sc in ((pv, pscale), (qv, qscale)) if v is not primary]
    ys = aberth(primary, prec=int(dps * 3.33)) if len(primary) > 1 else []
    good = []
    for y in ys:
        y = ctx.mpc(y)
        fine = True
        for v, sc in others:
            if not v:
                continue
            val = abs(_mp_horner(v, y))
            mag = sum(s_ * abs(y) ** j for j, s_ in enumerate(sc[:len(v)])) or 1
            if val > accept * mag:
                fine = False
        if fine:
            good.append(y)
    groups = cluster([complex(y) for y in good], float(accept) * 1e2)
    out = [(sum((good[i] for i in g), ctx.mpc(0)) / len(g), len(g)) for g in groups]
    infinite = not out and len(pv) < len(pc) and len(qv) < len(qc)
    return out, infinite


def _common_y_exact(p: MultiPoly, q: MultiPoly, xi: Fraction):
    """Exact treatment of a rational x-root: roots of gcd(P(xi, y), Q(xi, y))."""
    ps, qs = p.partial_evaluate(0, xi), q.partial_evaluate(0, xi)
    if ps.is_zero() and qs.is_zero():
        raise NonIsolatedError(P.X(0, 2) - xi)
    g = qs if ps.is_zero() else ps if qs.is_zero() else gcd(ps, qs)
    if g.is_constant():
        return [], True
    ex = rational_roots(g)
    out = [(complex(float(r)), m) for r, m in ex]
    rest = g
    for r, m in ex:
        lin = MultiPoly({(0, 1): r.denominator, (0, 0): -r.numerator}, 2)
        for _ in range(m):
            rest = divide_exact(rest, lin)
    if rest.degree_in(1) >= 1:
        for a, m in squarefree_decomposition(rest):
            for y in polished_roots([c.constant_value() for c in a.coefficients_in(1)], 30):
                out.append((complex(y), m))
    return out, False


def _eliminate(p: MultiPoly, q: MultiPoly, cluster_radius: float):
    """One elimination pass in the current coordinates.

    Returns (points, expected, accounted): points are (x, y, x_multiplicity,
    y_group_size, exact, group) tuples, where points sharing an x-root share
    the group number; ``expected`` is the resultant degree and
    ``accounted`` the part of it explained by the points found (or by common
    roots at infinity).
    """
    res = resultant(p, q, 1)
    if res.is_zero():
        return None
    if res.is_constant():
        return [], 0, 0
    expected = int(res.degree)
    accounted = 0
    group = 0
    pts = []
    pc = p.coefficients_in(1)
    qc = q.coefficients_in(1)
    for a, k in squarefree_decomposition(res):
        coeffs = [c.constant_value() for c in a.coefficients_in(0)]
        lc = abs(coeffs[-1].numerator) * max(c.denominator for c in coeffs if c)
        dps = min(60 + 12 * k, 600)
        ctx = mpmath.mp.clone()
        ctx.dps = dps
        pcm = [[ctx.mpf(t.numerator) / t.denominator for t in c.univariate_coeffs()] if not c.is_zero() else [ctx.mpf(0)]
               for c in pc]
        qcm = [[ctx.mpf(t.numerator) / t.denominator for t in c.univariate_coeffs()] if not c.is_zero() else [ctx.mpf(0)]
               for c in qc]
        for xi in polished_roots(coeffs, dps):
            group += 1
            exact_x = None
            if abs(xi.imag) <= ctx.mpf(10) ** (-dps // 2) * (1 + abs(xi)):
                cand = Fraction(int(ctx.nint(xi.real * lc)), lc) if lc < 10 ** 12 else None
                close = cand is not None and abs(xi.real - ctx.mpf(cand.numerator) / cand.denominator) \
                    <= ctx.mpf(10) ** (-dps // 2) * (1 + abs(xi))
                if close and a.evaluate([cand, Fraction(0)]) == 0:
                    exact_x = cand
            if exact_x is not None:
                ys, inf = _common_y_exact(p, q, exact_x)
                x_val = complex(float(exact_x))
                if ys or inf:
                    accounted += k
                for y, m in ys:
                    pts.append((x_val, y, k, len(ys), True, group))
            else:
                ys, inf = _common_y_numeric(pcm, qcm, xi, ctx, k)
                if ys or inf:
                    accounted += k
                for y, m in ys:
                    pts.append((complex(xi), complex(y), k, len(ys), False, group))
    return pts, expected, accounted


def solve_system(p: MultiPoly, q: MultiPoly, tol: float = 1e-10, seed: int = 0,
                 cluster_radius: float = 1e-6, prec: int = 53,
                 overflow: float = 1e8) -> list[PeriodicPoint]:
    """All isolated complex solutions of p = q = 0 in the affine plane.

    y is eliminated by an exact resultant, which is split into squarefree
    factors so that every x-root is found as a simple root and carries its
    multiplicity exactly.  For each x-root the y-values are the common roots
    of the two slices (exact gcd for rational roots, extended precision
    otherwise), and simple solutions are refined by Newton's method.  If part
    of the resultant degree stays unexplained the pass is repeated after
    swapping the variables or a random shear, and the results are merged.
    """
    if p.nvars != 2 or q.nvars != 2:
        raise P.VariableMismatch("solve_system expects bivariate polynomials")
    if p.is_zero() or q.is_zero():
        raise NonIsolatedError(p if q.is_zero() else q)
    g = gcd(p, q)
    if not g.is_constant():
        raise NonIsolatedError(g)
    rng = random.Random(seed)
    fp, fq = _Compiled(p), _Compiled(q)
    found: list[PeriodicPoint] = []
    for t in _transforms(rng):
        pt, qt = _apply(p, t), _apply(q, t)
        if pt.degree_in(1) < 1 and qt.degree_in(1) < 1:
            continue
        elim = _eliminate(pt, qt, cluster_radius)
        if elim is None:
            continue
        pts, expected, accounted = elim
        (a, b), (c, d) = t
        groups: dict[int, list] = {}
        for u, v, k, share, exact, gid in pts:
            groups.setdefault(gid, []).append((a * u + b * v, c * u + d * v, k))
        for members in groups.values():
            for pt_ in _resolve_group(fp, fq, p, q, members, tol, prec, overflow):
                _merge(found, pt_, cluster_radius)
        if accounted >= expected:
            break
    return sorted(found, key=PeriodicPoint.key)


def _resolve_group(fp, fq, p, q, members, tol, prec, overflow):
    """Refine the solutions over one x-root and split its multiplicity among them.

    A lone point carries the whole multiplicity k.  When k equals the number
    of points all are simple.  Otherwise the well-conditioned points are
    simple and the rest share what is left of k.
    """
    k = members[0][2]
    members = [(x, y) for x, y, _ in members if max(abs(x), abs(y)) <= overflow]
    if not members:
        return []
    if len(members) == 1 and k > 1:
        simple_flags = [False]
    elif k == len(members):
        simple_flags = [True] * len(members)
    else:
        simple_flags = [_conditioning(fp, fq, x, y) > 1e-8 for x, y in members]
    n_multi = simple_flags.count(False)
    left = k - simple_flags.count(True)
    out = []
    for (x, y), simple in zip(members, simple_flags):
        if simple:
            x, y, r = newton(fp, fq, x, y, tol)
            if r >= tol:
                raise IllConditioned(f"Newton stalled at ({x}, {y}) with residual {r:.3g}")
            out.append(PeriodicPoint(x, y, r, True, 1))
            continue
        r = _rel_residual(fp, fq, x, y)
        if r >= tol:
            x, y, r = newton_mp(p, q, x, y, prec=max(4 * prec, 200), maxiter=8)
        mult = max(2, left // n_multi) if n_multi else 2
        out.append(PeriodicPoint(x, y, r, False, mult))
    return out


def _merge(found, pt, radius):
    for other in found:
        if abs(other.x - pt.x) + abs(other.y - pt.y) <= radius * (1 + abs(pt.x) + abs(pt.y)):
            if pt.residual < other.residual:
                other.x, other.y, other.residual = pt.x, pt.y, pt.residual
            return
    found.append(pt)


def _conditioning(fp, fq, x, y) -> float:
    """Scale-free size of the Jacobian determinant; tiny at singular solutions."""
    px, py = fp.grad(x, y)
    qx, qy = fq.grad(x, y)
    sp, sq = fp.abs_scale(x, y), fq.abs_scale(x, y)
    return abs(px * qy - py * qx) * (1 + abs(x) + abs(y)) ** 2 / (sp * sq)


# ---------------------------------------------------------------------------
# period-n systems


@dataclass
class FixedPointSystem:
    p: MultiPoly
    q: MultiPoly
    iterate: ProjectiveMap
    non_isolated: bool = False
    note: str = ""


def _reduced_fraction(num: MultiPoly, den: MultiPoly):
    g = gcd(num, den) if not num.is_zero() else den
    if g.is_constant():
        return num, den
    return divide_exact(num, g), divide_exact(den, g)


def fixed_point_system(f: ProjectiveMap, n: int, max_degree: int = 64) -> FixedPointSystem:
    """Affine numerators of g1 - x and g2 - y for the reduced n-th iterate (g1, g2)."""
    fn = iterate_map(f, n, max_degree)
    g0, g1, g2 = (P.dehomogenize(c) for c in fn.components)
    if g0.is_zero():
        raise ZeroDivisionError("affine chart denominator vanishes identically")
    x, y = P.X(0, 2), P.X(1, 2)
    n1, d1 = _reduced_fraction(g1, g0)
    n2, d2 = _reduced_fraction(g2, g0)
    p = n1 - x * d1
    q = n2 - y * d2
    sys_ = FixedPointSystem(p, q, fn)
    if p.is_zero() or q.is_zero():
        sys_.non_isolated = True
        sys_.note = "a coordinate of the iterate is fixed identically"
    return sys_


def preimage_count(f: ProjectiveMap, target, seed: int = 0, tol: float = 1e-10):
    """Distinct affine preimages of an affine target, or None if the target looks special."""
    c0, c1, c2 = (P.dehomogenize(c) for c in f.components)
    t1, t2 = (Fraction(v) for v in target)
    p = c1 - c0 * t1
    q = c2 - c0 * t2
    try:
        sols = solve_system(p, q, tol=tol, seed=seed)
    except NonIsolatedError:
        return None
    k0, k1, k2 = _Compiled(c0), _Compiled(c1), _Compiled(c2)
    count = 0
    for s in sols:
        d, scale = k0.value_scale(s.x, s.y)
        if abs(d) <= 1e-7 * max(scale, 1.0):
            continue
        if not s.simple:
            return None
        v1 = k1.value_scale(s.x, s.y)[0] / d
        v2 = k2.value_scale(s.x, s.y)[0] / d
        if abs(v1 - complex(t1)) + abs(v2 - complex(t2)) <= 1e-6 * (1 + abs(complex(t1)) + abs(complex(t2))):
            count += 1
    return count


# ---------------------------------------------------------------------------
# orbit validation


@dataclass
class Validation:
    valid: bool
    reason: str | None
    step: int | None
    trace: list = field(default_factory=list)
    closure: float | None = None


def planar_step(spec, x: complex, y: complex, pole_guard: float):
    """One step of the family's planar map; returns (point, reason)."""
    out = []
    for num, den in spec.planar_compiled():
        d, _ = den.value_scale(x, y)
        if abs(d) < pole_guard:
            nv, _ = num.value_scale(x, y)
            return None, "indeterminacy" if abs(nv) < pole_guard else "pole"
        out.append(num.value_scale(x, y)[0] / d)
    return tuple(out), None


def validate_orbit(spec, pt: PeriodicPoint, n: int, tol: float = 1e-8, pole_guard: float = 1e-8,
                   overflow: float = 1e8) -> Validation:
    """Iterate the original map n steps; reject through poles, escape or non-closure."""
    x, y = pt.x, pt.y
    trace = [(x, y)]
    for step in range(1, n + 1):
        nxt, why = planar_step(spec, x, y, pole_guard)
        if nxt is None:
            return Validation(False, why, step, trace)
        x, y = nxt
        if not (np.isfinite(abs(x)) and np.isfinite(abs(y))) or max(abs(x), abs(y)) > overflow:
            return Validation(False, "infinity", step, trace)
        trace.append((x, y))
    err = abs(x - pt.x) + abs(y - pt.y)
    closure = err / (1 + abs(pt.x) + abs(pt.y))
    if closure > tol:
        return Validation(False, "closure", n, trace, closure)
    return Validation(True, None, None, trace, closure)


def group_orbits(spec, points: list[PeriodicPoint], n: int, radius: float, pole_guard: float):
    """Assign orbit ids by following the map through the reported point set."""
    next_id = 0
    notes = []
    for pt in points:
        if pt.orbit_id is not None:
            continue
        pt.orbit_id = next_id
        cur = pt
        for _ in range(n):
            nxt, _ = planar_step(spec, cur.x, cur.y, pole_guard)
            if nxt is None:
                break
            match = min(points, key=lambda o: abs(o.x - nxt[0]) + abs(o.y - nxt[1]))
            if abs(match.x - nxt[0]) + abs(match.y - nxt[1]) > 1e3 * radius * (1 + abs(match.x) + abs(match.y)):
                notes.append(f"orbit {next_id}: image not among reported points")
                break
            if match is pt:
                break
            match.orbit_id = next_id
            cur = match
        next_id += 1
    sizes = {}
    for pt in points:
        sizes[pt.orbit_id] = sizes.get(pt.orbit_id, 0) + 1
    for oid, size in sizes.items():
        if n % size:
            notes.append(f"orbit {oid} has {size} points, which does not divide {n}")
    return notes


# ---------------------------------------------------------------------------
# reports


@dataclass
class Rejection:
    x: complex
    y: complex
    reason: str
    step: int | None
    simple: bool = True

    def to_json(self):
        return {"x": [repr(self.x.real), repr(self.x.imag)], "y": [repr(self.y.real), repr(self.y.imag)],
                "reason": self.reason, "step": self.step, "simple": self.simple}

    @classmethod
    def from_json(cls, d):
        return cls(complex(float(d["x"][0]), float(d["x"][1])), complex(float(d["y"][0]), float(d["y"][1])),
                   d["reason"], d["step"], d["simple"])


@dataclass
class PeriodicReport:
    family: str
    params: dict
    n: int
    prediction: object | None
    points: list
    found_distinct: int
    found_with_multiplicity: int
    rejected: list
    non_isolated: bool
    non_isolated_factor: str | None
    residual_max: float | None
    seed: int
    tolerances: dict
    verdict: str
    compared_against: str | None
    notes: list
    genericity_flags: list = field(default_factory=list)
    timings: dict = field(default_factory=dict, compare=False)

    def to_json(self, include_timings: bool = True) -> dict:
        d = {
            "family": self.family,
            "params": dict(self.params),
            "n": self.n,
            "prediction": self.prediction.to_json() if self.prediction is not None else None,
            "points": [p.to_json() for p in self.points],
            "found_distinct": self.found_distinct,
            "found_with_multiplicity": self.found_with_multiplicity,
            "rejected": [r.to_json() for r in self.rejected],
            "non_isolated": self.non_isolated,
            "non_isolated_factor": self.non_isolated_factor,
            "residual_max": repr(self.residual_max) if self.residual_max is not None else None,
            "seed": self.seed,
            "tolerances": {k: repr(v) for k, v in self.tolerances.items()},
            "verdict": self.verdict,
            "compared_against": self.compared_against,
            "notes": list(self.notes),
            "genericity_flags": list(self.genericity_flags),
        }
        if include_timings:
            d["timings"] = {k: repr(v) for k, v in self.timings.items()}
        return d

    @classmethod
    def from_json(cls, d) -> "PeriodicReport":
        from .cohomology import CountPrediction

        return cls(
            family=d["family"], params=dict(d["params"]), n=d["n"],
            prediction=CountPrediction.from_json(d["prediction"]) if d["prediction"] is not None else None,
            points=[PeriodicPoint.from_json(p) for p in d["points"]],
            found_distinct=d["found_distinct"], found_with_multiplicity=d["found_with_multiplicity"],
            rejected=[Rejection.from_json(r) for r in d["rejected"]],
            non_isolated=d["non_isolated"], non_isolated_factor=d["non_isolated_factor"],
            residual_max=float(d["residual_max"]) if d["residual_max"] is not None else None,
            seed=d["seed"], tolerances={k: float(v) for k, v in d["tolerances"].items()},
            verdict=d["verdict"], compared_against=d["compared_against"], notes=list(d["notes"]),
            genericity_flags=list(d["genericity_flags"]),
            timings={k: float(v) for k, v in d.get("timings", {}).items()},
        )

    def csv_rows(self):
        rows = []
        for p in self.points:
            rows.append([repr(p.x.real), repr(p.x.imag), repr(p.y.real), repr(p.y.imag),
                         p.orbit_id, repr(p.residual), "valid"])
        for r in self.rejected:
            rows.append([repr(r.x.real), repr(r.x.imag), repr(r.y.real), repr(r.y.imag),
                         "", "", f"rejected:{r.reason}"])
        return rows


def genericity_flags(valid, rejected) -> list[str]:
    """Degeneracies visible from a single run.

    Rejections alone are not a signal: the indeterminacy points solve every
    reduced fixed-point system, and orbits through poles at later steps show
    up for generic parameters as well.  Degeneracies that only show against
    other draws are caught by :func:`reference_flags`.
    """
    flags = []
    if any(not p.simple for p in valid):
        flags.append("double root: a valid periodic point is not simple")
    if any(r.reason == "closure" for r in rejected):
        flags.append("a solution of the reduced system fails to close up (orbit grazes the indeterminacy locus)")
    return flags


CSV_COLUMNS = ["re_x", "im_x", "re_y", "im_y", "orbit_id", "residual", "status"]


def _solve_period(spec, n, tols, seed, max_degree, prec):
    """Reduced period-n system and its isolated solutions.

    Returns (system, candidates, non_isolated, factor, notes, resultant degree).
    """
    f = homogenize(spec)
    system = fixed_point_system(f, n, max_degree)
    notes = []
    non_isolated = system.non_isolated
    factor = None
    p, q = system.p, system.q
    cands, degree = [], None
    if non_isolated:
        notes.append(system.note)
        factor = (p if q.is_zero() else q).to_text() if not (p.is_zero() and q.is_zero()) else "0"
        return system, cands, non_isolated, factor, notes, degree
    g = gcd(p, q)
    if not g.is_constant():
        non_isolated = True
        factor = g.to_text()
        notes.append("fixed-point equations share a curve of solutions")
        p, q = divide_exact(p, g), divide_exact(q, g)
        if p.is_constant() or q.is_constant():
            return system, cands, non_isolated, factor, notes, degree
    degree = int(resultant(p, q, 1).degree)
    cands = solve_system(p, q, tols["newton_tol"], seed, tols["cluster_radius"], prec,
                         tols["overflow_guard"])
    return system, cands, non_isolated, factor, notes, degree


def reference_flags(spec, n: int, profile: tuple, tols: dict, references: int = 2, seed: int = 0,
                    max_degree: int = 64, prec: int = 53) -> list[str]:
    """Compare a solution profile with seeded random draws of the same family.

    ``profile`` is (resultant degree, distinct affine solutions).  Both are
    maximal for generic parameters, so falling short of a random draw means a
    solution went to infinity or two solutions merged.
    """
    from .families import random_params, build

    if spec.tag == "HOMOGENEOUS_D" or references <= 0:
        return []
    rng = random.Random(f"reference-{spec.tag}-{n}-{seed}")
    best = None
    for k in range(references):
        ref = build(spec.tag, random_params(spec.tag, rng))
        try:
            _, cands, non_iso, _, _, degree = _solve_period(ref, n, tols, seed + k, max_degree, prec)
        except IllConditioned:
            continue
        if non_iso:
            continue
        prof = (degree, len(cands))
        best = prof if best is None else tuple(max(a, b) for a, b in zip(best, prof))
    if best is None:
        return []
    flags = []
    if profile[0] < best[0]:
        flags.append(f"resultant degree {profile[0]} below the generic {best[0]}: a solution escaped to infinity")
    if profile[1] < best[1]:
        flags.append(f"{profile[1]} distinct solutions against {best[1]} for generic parameters: solutions merged or escaped")
    return flags


def census(spec, n: int, tol: dict | None = None, seed: int = 0, max_degree: int = 64,
           prec: int = 53, references: int = 0) -> PeriodicReport:
    """Find, validate and count the period-n points of a family, next to its prediction.

    With ``references > 0`` the solution profile is also compared against that
    many random draws of the same family (see :func:`reference_flags`).
    """
    from .cohomology import predicted_count, UnregisteredFamily

    tols = dict(DEFAULTS)
    tols.update(tol or {})
    t0 = time.perf_counter()
    _, cands, non_isolated, factor, notes, degree = _solve_period(spec, n, tols, seed, max_degree, prec)
    t2 = time.perf_counter()
    valid, rejected = [], []
    for c in cands:
        v = validate_orbit(spec, c, n, tols["closure_tol"], tols["pole_guard"], tols["overflow_guard"])
        if v.valid:
            valid.append(c)
        else:
            rejected.append(Rejection(c.x, c.y, v.reason, v.step, c.simple))
    valid.sort(key=PeriodicPoint.key)
    notes.extend(group_orbits(spec, valid, n, tols["cluster_radius"], tols["pole_guard"]))
    try:
        prediction = predicted_count(spec, n)
    except UnregisteredFamily:
        prediction = None
    found = len(valid)
    found_mult = sum(pt.multiplicity for pt in valid)
    compared = None
    if non_isolated:
        verdict = "NON-ISOLATED"
    elif prediction is None:
        verdict = "UNPREDICTED"
    elif found == prediction.predicted:
        verdict, compared = "MATCH", "predicted"
    elif prediction.direct_p2 is not None and found == prediction.direct_p2:
        verdict, compared = "MATCH", "direct_p2"
        notes.append("count agrees with the direct P^2 trace, not with the closed form")
    else:
        verdict, compared = "MISMATCH", "predicted"
    flags = genericity_flags(valid, rejected)
    if references and not non_isolated:
        flags += reference_flags(spec, n, (degree, len(cands)), tols, references, seed, max_degree, prec)
    t3 = time.perf_counter()
    return PeriodicReport(
        family=spec.tag, params=spec.param_strings(), n=n, prediction=prediction, points=valid,
        found_distinct=found, found_with_multiplicity=found_mult, rejected=rejected,
        non_isolated=non_isolated, non_isolated_factor=factor,
        residual_max=max((pt.residual for pt in valid), default=None), seed=seed, tolerances=tols,
        verdict=verdict, compared_against=compared, notes=notes, genericity_flags=flags,
        timings={"solve": t2 - t0, "validate": t3 - t2},
    )
