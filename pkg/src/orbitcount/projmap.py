"""Rational self-maps of the projective plane.

A :class:`ProjectiveMap` holds three coprime ternary forms of one degree.
This module builds them from planar rational maps, composes them (removing
the common factor that appears when an exceptional curve is sent into the
indeterminacy locus), and extracts the structure the counting engine needs:
indeterminacy points, critical curves and where they go, topological degree,
and a finite-horizon stability check.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import poly as P
from .poly import MultiPoly, divide_exact, divides, gcd, gcd_many, resultant
from .roots import aberth, rational_roots, squarefree_part


class BudgetExceeded(RuntimeError):
    """Raised when a computation would exceed its documented size budget."""


class IndeterminacyError(RuntimeError):
    """The common zero set of the components is not finite."""


class GenericityError(RuntimeError):
    """Random genericity draws kept landing on degenerate configurations."""


def random_rational(rng: random.Random, height: int = 9, nonzero: bool = False) -> Fraction:
    while True:
        v = Fraction(rng.randint(-height, height), rng.randint(1, height))
        if v or not nonzero:
            return v


# ---------------------------------------------------------------------------
# points


def _is_exact(v) -> bool:
    return isinstance(v, (int, Fraction))


@dataclass(frozen=True)
class ProjPoint:
    """A point of P^2, normalized at construction.

    Exact points have first nonzero coordinate 1; numeric points have their
    largest-magnitude coordinate equal to 1.
    """

    coords: tuple

    def __post_init__(self):
        c = tuple(self.coords)
        if len(c) != 3:
            raise ValueError("projective plane points have three coordinates")
        if all(_is_exact(v) for v in c):
            c = tuple(Fraction(v) for v in c)
            k = next((v for v in c if v), None)
            if k is None:
                raise ValueError("[0:0:0] is not a point")
            c = tuple(v / k for v in c)
        else:
            c = tuple(complex(v) for v in c)
            mags = [abs(v) for v in c]
            top = max(mags)
            if top == 0 or not np.isfinite(top):
                raise ValueError("degenerate numeric point")
            k = c[mags.index(top)]
            c = tuple(v / k for v in c)
        object.__setattr__(self, "coords", c)

    @property
    def exact(self) -> bool:
        return all(isinstance(v, Fraction) for v in self.coords)

    def as_complex(self) -> np.ndarray:
        return np.array([complex(v) for v in self.coords])

    def same_as(self, other: "ProjPoint", tol: float = 1e-8) -> bool:
        if self.exact and other.exact:
            return self.coords == other.coords
        a, b = self.as_complex(), other.as_complex()
        cross = np.cross(a, b)
        return float(np.linalg.norm(cross)) <= tol * float(np.linalg.norm(a) * np.linalg.norm(b))

    def is_at_infinity(self, tol: float = 1e-10) -> bool:
        x0 = self.coords[0]
        return x0 == 0 if self.exact else abs(x0) <= tol

    def to_json(self) -> list:
        if self.exact:
            return [str(v) for v in self.coords]
        return [[repr(v.real), repr(v.imag)] for v in self.coords]

    @classmethod
    def from_json(cls, data) -> "ProjPoint":
        if all(isinstance(v, str) for v in data):
            return cls(tuple(Fraction(v) for v in data))
        return cls(tuple(complex(float(re), float(im)) for re, im in data))

    def __str__(self):
        if self.exact:
            return "[" + ":".join(str(v) for v in self.coords) + "]"
        return "[" + ":".join(f"{v.real:.6g}{v.imag:+.6g}j" for v in self.coords) + "]"


def point(*coords) -> ProjPoint:
    return ProjPoint(tuple(coords))


E0 = point(1, 0, 0)
E1 = point(0, 1, 0)
E2 = point(0, 0, 1)


# ---------------------------------------------------------------------------
# maps


class ProjectiveMap:
    """Three coprime ternary forms of a common degree; immutable."""

    __slots__ = ("components", "degree")

    def __init__(self, components: Sequence[MultiPoly], reduce: bool = True):
        comps = list(components)
        if len(comps) != 3 or any(c.nvars != 3 for c in comps):
            raise ValueError("a plane map needs three forms in (x0, x1, x2)")
        if all(c.is_zero() for c in comps):
            raise ValueError("all components vanish identically")
        degs = {c.degree for c in comps if not c.is_zero()}
        if len(degs) != 1 or not all(c.is_homogeneous() for c in comps):
            raise ValueError("components must be homogeneous of one degree")
        if reduce:
            g = gcd_many([c for c in comps if not c.is_zero()])
            if not g.is_constant():
                comps = [divide_exact(c, g) if not c.is_zero() else c for c in comps]
            comps = _normalize_scale(comps)
        self.components = tuple(comps)
        self.degree = int(next(c.degree for c in comps if not c.is_zero()))

    @classmethod
    def identity(cls) -> "ProjectiveMap":
        return cls([P.X(0), P.X(1), P.X(2)])

    def __eq__(self, other):
        if not isinstance(other, ProjectiveMap):
            return NotImplemented
        return self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def raw(self, pt: Sequence) -> tuple:
        return tuple(c.evaluate(list(pt)) for c in self.components)

    def __call__(self, p: ProjPoint, tol: float = 1e-12):
        """Image point, or None when p is an indeterminacy point."""
        vals = self.raw(p.coords)
        if p.exact:
            if not any(vals):
                return None
            return ProjPoint(vals)
        v = np.array([complex(x) for x in vals])
        scale = sum(abs(complex(c)) for comp in self.components for c in comp.terms.values())
        if np.linalg.norm(v) <= tol * max(scale, 1.0):
            return None
        return ProjPoint(tuple(v))

    def to_text(self) -> str:
        return "\n".join(f"{self.degree}: {c.to_text()}" for c in self.components)

    @classmethod
    def from_text(cls, text: str) -> "ProjectiveMap":
        comps = []
        for line in text.strip().splitlines():
            deg, _, body = line.partition(":")
            p = P.parse(body, 3)
            if not p.is_zero() and p.degree != int(deg):
                raise ValueError(f"declared degree {deg} but component has degree {p.degree}")
            comps.append(p)
        return cls(comps, reduce=False)

    def __repr__(self):
        return f"ProjectiveMap(degree={self.degree}, components={[str(c) for c in self.components]})"


def _normalize_scale(comps):
    """Scale to integer coefficients with content 1 and a positive first leading coefficient."""
    from math import gcd as igcd, lcm

    den = 1
    for c in comps:
        den = lcm(den, c.denominator_lcm())
    ints = [c * den for c in comps]
    g = 0
    for c in ints:
        for v in c.terms.values():
            g = igcd(g, int(v))
    first = next(c for c in ints if not c.is_zero())
    if first.leading_term()[1] < 0:
        g = -g
    return [c * Fraction(1, g) for c in ints]


def planar_to_projective(planar) -> ProjectiveMap:
    """((n1, d1), (n2, d2)) in (x, y) -> reduced homogeneous map via (x, y) = [1:x:y]."""
    (n1, d1), (n2, d2) = planar
    if d1.is_zero() or d2.is_zero():
        raise ZeroDivisionError("identically zero denominator")
    g = gcd(d1, d2)
    den = d1 * divide_exact(d2, g)
    c1 = n1 * divide_exact(den, d1)
    c2 = n2 * divide_exact(den, d2)
    d = int(max(p.degree for p in (den, c1, c2) if not p.is_zero()))
    return ProjectiveMap([P.homogenize(den, d), P.homogenize(c1, d), P.homogenize(c2, d)])


def homogenize(spec) -> ProjectiveMap:
    """Reduced homogeneous form of a family's planar map."""
    return planar_to_projective(spec.planar)


def compose(f: ProjectiveMap, g: ProjectiveMap) -> ProjectiveMap:
    """f o g with the full common factor removed."""
    comps = [c.substitute(list(g.components)) for c in f.components]
    return ProjectiveMap(comps)


def degree_sequence(f: ProjectiveMap, n: int, max_degree: int = 64, return_maps: bool = False):
    """Algebraic degrees of f, f^2, ..., f^n.

    Each step needs a gcd of three ternary forms of degree deg(f)*deg(f^(k-1)),
    so growth is capped at ``max_degree`` for that raw degree (about n <= 8 for
    Fibonacci-type growth of a quadratic map).
    """
    if n < 1:
        raise ValueError("need at least one iterate")
    degs = [f.degree]
    maps = [f]
    g = f
    for _ in range(n - 1):
        if f.degree * g.degree > max_degree:
            raise BudgetExceeded(f"raw composition degree {f.degree * g.degree} > {max_degree}")
        g = compose(f, g)
        maps.append(g)
        degs.append(g.degree)
    return (degs, maps) if return_maps else degs


def iterate_map(f: ProjectiveMap, n: int, max_degree: int = 64) -> ProjectiveMap:
    return degree_sequence(f, n, max_degree, return_maps=True)[1][-1]


# ---------------------------------------------------------------------------
# indeterminacy


def _binary_form_roots(h: MultiPoly, i: int, j: int):
    """Points of P^1 (as (u_i, u_j) pairs) where a form in variables i, j vanishes.

    Returns (exact_roots, numeric_roots) with exact roots as (Fraction, Fraction)
    pairs and numeric ones as complex pairs; multiplicities dropped.
    """
    exact, numeric = [], []
    if h.is_constant():
        return exact, numeric
    deg = int(h.degree)
    # chart u_i = 1
    slice_ = h.partial_evaluate(i, 1)
    if slice_.degree_in(j) < deg:
        exact.append((Fraction(0), Fraction(1)))  # the point u_i = 0
    if slice_.degree_in(j) >= 1:
        rr = rational_roots(slice_)
        exact.extend((Fraction(1), r) for r, _ in rr)
        rest = slice_
        for r, m in rr:
            lin = MultiPoly({_unit(j): r.denominator, (0, 0, 0): -r.numerator}, 3)
            for _ in range(m):
                rest = divide_exact(rest, lin)
        if rest.degree_in(j) >= 1:
            sq = squarefree_part(rest)
            for z in aberth([c.constant_value() for c in sq.coefficients_in(j)]):
                numeric.append((1.0 + 0j, complex(z)))
    return exact, numeric


def _unit(j):
    e = [0, 0, 0]
    e[j] = 1
    return tuple(e)


def indeterminacy_locus(f: ProjectiveMap, seed: int = 0, tol: float = 1e-10) -> list[ProjPoint]:
    """Common zeros of the three components.

    Points on the line at infinity come from the gcd of the restricted binary
    forms; affine ones from a resultant of two random combinations of the
    dehomogenized components, with exact rational roots where they exist and
    residual-certified numeric roots otherwise.
    """
    rng = random.Random(seed)
    comps = f.components
    pts: list[ProjPoint] = []
    # line at infinity
    restricted = [c.partial_evaluate(0, 0) for c in comps]
    live = [c for c in restricted if not c.is_zero()]
    if not live:
        raise IndeterminacyError("x0 divides every component")
    h = gcd_many(live)
    ex, nu = _binary_form_roots(h, 1, 2)
    for u1, u2 in ex:
        pts.append(point(0, u1, u2))
    for u1, u2 in nu:
        pts.append(ProjPoint((0j, u1, u2)))
    # affine chart
    aff = [P.dehomogenize(c) for c in comps]
    for _ in range(12):
        r = [random_rational(rng, 7, nonzero=True) for _ in range(4)]
        u = aff[0] + aff[1] * r[0] + aff[2] * r[1]
        v = aff[0] * r[2] + aff[1] + aff[2] * r[3]
        if u.is_zero() or v.is_zero():
            continue
        if u.degree_in(1) >= 1 or v.degree_in(1) >= 1:
            res = resultant(u, v, 1)
        else:
            res = gcd(u, v)
        if not res.is_zero():
            break
    else:
        raise IndeterminacyError("components share a curve of common zeros")
    if not res.is_constant():
        for x, _ in rational_roots(res):
            slices = [a.partial_evaluate(0, x) for a in aff]
            live = [s for s in slices if not s.is_zero()]
            if not live:
                raise IndeterminacyError("a vertical line lies in the common zero set")
            g = gcd_many(live)
            for y, _ in rational_roots(g) if not g.is_constant() else []:
                pts.append(point(1, x, y))
            # irrational y over a rational x
            rest = g
            for y, m in (rational_roots(g) if not g.is_constant() else []):
                lin = MultiPoly({(0, 1): y.denominator, (0, 0): -y.numerator}, 2)
                for _ in range(m):
                    rest = divide_exact(rest, lin)
            if rest.degree_in(1) >= 1:
                for yz in aberth([c.constant_value() for c in squarefree_part(rest).coefficients_in(1)]):
                    pts.append(ProjPoint((1, complex(x), complex(yz))))
        # irrational x: numeric with residual certification
        rest = res
        for x, m in rational_roots(res):
            lin = MultiPoly({(1, 0): x.denominator, (0, 0): -x.numerator}, 2)
            for _ in range(m):
                rest = divide_exact(rest, lin)
        if rest.degree_in(0) >= 1:
            from .solver import solve_system

            for cand in solve_system(u, v, tol=tol, seed=seed):
                pt = ProjPoint((1, cand.x, cand.y))
                vals = np.array([complex(a.evaluate([cand.x, cand.y])) for a in aff])
                if np.max(np.abs(vals)) < 1e-8 and not any(pt.same_as(q) for q in pts):
                    pts.append(pt)
    out: list[ProjPoint] = []
    for p in pts:
        if not any(p.same_as(q) for q in out):
            out.append(p)
    for p in out:
        vals = f.raw(p.coords)
        if p.exact:
            if any(vals):
                raise IndeterminacyError(f"internal: {p} is not a common zero")
        elif max(abs(complex(v)) for v in vals) > 1e-8:
            raise IndeterminacyError(f"internal: residual too large at {p}")
    return out


# ---------------------------------------------------------------------------
# Jacobian and critical curves


@dataclass(frozen=True)
class CriticalCurve:
    """A factor of the Jacobian determinant, with its classification once known."""

    poly: MultiPoly
    multiplicity: int = 1
    kind: str = "factor"  # "factor" (from the candidate set) or "residual"
    classification: str | None = None  # "exceptional" | "branch"
    image: ProjPoint | None = None

    @property
    def is_line(self) -> bool:
        return self.poly.degree == 1

    def to_json(self) -> dict:
        return {
            "poly": self.poly.to_text(),
            "degree": int(self.poly.degree),
            "multiplicity": self.multiplicity,
            "kind": self.kind,
            "classification": self.classification,
            "image": self.image.to_json() if self.image is not None else None,
        }

    @classmethod
    def from_json(cls, d) -> "CriticalCurve":
        return cls(P.parse(d["poly"], 3), d["multiplicity"], d["kind"], d["classification"],
                   ProjPoint.from_json(d["image"]) if d["image"] is not None else None)


def jacobian(f: ProjectiveMap) -> MultiPoly:
    rows = [[c.diff(j) for j in range(3)] for c in f.components]
    return P.determinant(rows)


def linear_factors(form: MultiPoly) -> list[MultiPoly]:
    """Rational linear forms dividing a ternary form, without general factoring.

    Candidates are assembled from the linear factors of the restrictions to
    the coordinate lines and confirmed by trial division.
    """
    found: list[MultiPoly] = []

    def add(lin):
        lin = lin.primitive()
        if lin not in found:
            found.append(lin)

    rest = form
    for i in range(3):
        xi = P.X(i)
        while divides(xi, rest):
            rest = divide_exact(rest, xi)
            add(xi)
    if rest.is_constant():
        return found
    ratios = {}
    for i in range(3):
        j, k = [t for t in range(3) if t != i]
        ex, _ = _binary_form_roots(rest.partial_evaluate(i, 0), j, k)
        # a linear factor u.x restricted to x_i = 0 is u_j x_j + u_k x_k, vanishing at (u_k, -u_j)
        ratios[i] = [(-b, a) for a, b in ex]  # (u_j, u_k) up to scale
    cands = []
    for (u1, u2) in ratios[0]:
        if u2 == 0:
            continue
        for (u0, w2) in ratios[1]:
            if w2 == 0:
                continue
            cands.append((u0 / w2, u1 / u2, Fraction(1)))
    for (u0, u1) in ratios[2]:
        if u1 != 0:
            cands.append((u0 / u1, Fraction(1), Fraction(0)))
    for u in cands:
        lin = MultiPoly({(1, 0, 0): u[0], (0, 1, 0): u[1], (0, 0, 1): u[2]}, 3)
        if not lin.is_zero() and divides(lin, rest):
            add(lin)
    return found


def jacobian_factorization(f: ProjectiveMap) -> list[CriticalCurve]:
    """Split the Jacobian determinant by trial division against structural linear forms.

    Candidates: the coordinate lines, x1 - x2, and every rational linear
    factor of a component.  Whatever is left over is returned as one residual
    curve.
    """
    if f.degree < 2:
        raise ValueError("critical curves need degree >= 2")
    jac = jacobian(f)
    if jac.is_zero():
        raise ValueError("identically zero Jacobian: degenerate map")
    cands = [P.X(0), P.X(1), P.X(2), (P.X(1) - P.X(2))]
    for c in f.components:
        if not c.is_zero():
            for lin in linear_factors(c):
                if lin not in cands:
                    cands.append(lin)
    curves = []
    rest = jac
    for lin in cands:
        m = 0
        while not rest.is_constant() and divides(lin, rest):
            rest = divide_exact(rest, lin)
            m += 1
        if m:
            curves.append(CriticalCurve(lin, m, "factor"))
    if not rest.is_constant():
        curves.append(CriticalCurve(rest.primitive(), 1, "residual"))
    return curves


def _line_points(lin: MultiPoly):
    u = [lin.terms.get(_unit(i), Fraction(0)) for i in range(3)]
    if u[2]:
        return (Fraction(1), Fraction(0), -u[0] / u[2]), (Fraction(0), Fraction(1), -u[1] / u[2])
    if u[1]:
        return (Fraction(1), -u[0] / u[1], Fraction(0)), (Fraction(0), Fraction(0), Fraction(1))
    return (Fraction(0), Fraction(1), Fraction(0)), (Fraction(0), Fraction(0), Fraction(1))


def _sample_curve_numeric(curve: MultiPoly, rng: random.Random):
    """A numeric point on a ternary curve: random rational x1 on x0 = 1, solve for x2."""
    for var, other in ((2, 1), (1, 2)):
        if curve.degree_in(var) >= 1:
            t = random_rational(rng, 9)
            sl = curve.partial_evaluate(0, 1).partial_evaluate(other, t)
            coeffs = [c.constant_value() for c in sl.coefficients_in(var)]
            if len(coeffs) < 2 or coeffs[-1] == 0:
                continue
            z = aberth(coeffs)[rng.randrange(len(coeffs) - 1)]
            c = [1 + 0j, 0j, 0j]
            c[other], c[var] = complex(t), complex(z)
            return ProjPoint(tuple(c))
    raise GenericityError("cannot sample points on the curve")


def classify_critical_curve(f: ProjectiveMap, c: CriticalCurve, seed: int = 0,
                            samples: int = 4, tol: float = 1e-7, retries: int = 20) -> CriticalCurve:
    """Exceptional (collapsed to a point) or branch, by mapping sample points.

    Lines are sampled exactly on a rational parameterization; other curves
    numerically.  Samples landing in the indeterminacy locus are redrawn.
    """
    rng = random.Random(seed)
    images: list[ProjPoint] = []
    attempts = 0
    while len(images) < samples:
        attempts += 1
        if attempts > samples + retries:
            raise GenericityError("sample points keep landing in the indeterminacy locus")
        if c.is_line:
            a, b = _line_points(c.poly)
            s, t = random_rational(rng, 20, nonzero=True), random_rational(rng, 20, nonzero=True)
            p = ProjPoint(tuple(s * x + t * y for x, y in zip(a, b)))
        else:
            p = _sample_curve_numeric(c.poly, rng)
        img = f(p, tol=1e-9)
        if img is not None:
            images.append(img)
    first = images[0]
    if all(first.same_as(q, tol) for q in images[1:]):
        return replace(c, classification="exceptional", image=first)
    return replace(c, classification="branch", image=None)


def critical_curves(f: ProjectiveMap, seed: int = 0) -> list[CriticalCurve]:
    return [classify_critical_curve(f, c, seed=seed + k) for k, c in enumerate(jacobian_factorization(f))]


# ---------------------------------------------------------------------------
# topological degree


def topological_degree(f: ProjectiveMap, seed: int = 0, targets: int = 3, retries: int = 6) -> int:
    """Preimage count of random rational targets in the affine chart (majority vote)."""
    from .solver import preimage_count

    rng = random.Random(seed)
    counts = []
    tries = 0
    while len(counts) < targets:
        tries += 1
        if tries > targets + retries:
            raise GenericityError("could not find generic target points")
        t = (random_rational(rng, 9), random_rational(rng, 9))
        n = preimage_count(f, t, seed=rng.randrange(2 ** 31))
        if n is not None:
            counts.append(n)
    values = sorted(set(counts), key=lambda v: (-counts.count(v), v))
    best = values[0]
    if counts.count(best) * 2 <= len(counts):
        raise GenericityError(f"inconsistent preimage counts {counts}")
    return best


# ---------------------------------------------------------------------------
# stability along exceptional orbits


@dataclass
class OrbitTrace:
    curve: str
    image: ProjPoint
    orbit: list = field(default_factory=list)
    hit_step: int | None = None
    fixed_point: bool = False
    cycle_length: int | None = None

    def to_json(self):
        return {
            "curve": self.curve,
            "image": self.image.to_json(),
            "orbit": [p.to_json() for p in self.orbit],
            "hit_step": self.hit_step,
            "fixed_point": self.fixed_point,
            "cycle_length": self.cycle_length,
        }


@dataclass
class StabilityReport:
    status: str  # "STABLE" | "UNSTABLE"
    horizon: int
    traces: list
    note: str

    @property
    def hit_step(self):
        hits = [t.hit_step for t in self.traces if t.hit_step is not None]
        return min(hits) if hits else None

    def to_json(self):
        return {"status": self.status, "horizon": self.horizon, "hit_step": self.hit_step,
                "note": self.note, "traces": [t.to_json() for t in self.traces]}


def exceptional_orbit_check(f: ProjectiveMap, n: int = 20, curves=None, ind=None,
                            seed: int = 0) -> StabilityReport:
    """Follow each exceptional curve's image forward for n steps.

    Step 1 is the image point itself.  UNSTABLE when some orbit meets the
    indeterminacy locus within the horizon; otherwise STABLE for that horizon
    only.
    """
    if ind is None:
        ind = indeterminacy_locus(f, seed=seed)
    if curves is None:
        curves = critical_curves(f, seed=seed)
    traces = []
    for c in curves:
        if c.classification != "exceptional":
            continue
        tr = OrbitTrace(c.poly.to_text(), c.image)
        p = c.image
        for step in range(1, n + 1):
            tr.orbit.append(p)
            if any(p.same_as(q) for q in ind):
                tr.hit_step = step
                break
            q = f(p)
            if q is None:
                tr.hit_step = step
                break
            for k, prev in enumerate(tr.orbit):
                if q.same_as(prev):
                    tr.cycle_length = len(tr.orbit) - k
                    tr.fixed_point = tr.cycle_length == 1 and k == len(tr.orbit) - 1
                    break
            if tr.cycle_length is not None:
                break
            p = q
        traces.append(tr)
    unstable = any(t.hit_step is not None for t in traces)
    if unstable:
        note = "an exceptional curve is mapped into the indeterminacy locus"
    else:
        note = (f"no exceptional orbit meets the indeterminacy locus within {n} steps; "
                "this is finite-horizon evidence")
        if traces and all(t.cycle_length is not None for t in traces):
            note += " (every exceptional orbit closes up into a cycle before the horizon)"
    return StabilityReport("UNSTABLE" if unstable else "STABLE", n, traces, note)


# ---------------------------------------------------------------------------
# helpers for the spurious-point census


def on_curve(p: ProjPoint, curve: MultiPoly, tol: float = 1e-9) -> bool:
    v = curve.evaluate(list(p.coords))
    if p.exact:
        return v == 0
    return abs(complex(v)) <= tol * max(1.0, sum(abs(float(c)) for c in curve.terms.values()))


def _exact_rank(rows) -> int:
    m = [list(r) for r in rows]
    rank = 0
    ncols = len(m[0])
    for col in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][col] != 0:
                fac = m[i][col] / m[rank][col]
                m[i] = [a - fac * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def blowup_contains_self(f: ProjectiveMap, q: ProjPoint, tol: float = 1e-8):
    """Whether an indeterminacy point lies on the line it blows up to.

    The first-order image of q is the column space of the derivative there;
    returns None when that has rank below 2 (higher-order blow-up).
    """
    rows = [[c.diff(j).evaluate(list(q.coords)) for j in range(3)] for c in f.components]
    if q.exact:
        cols = [list(r) for r in zip(*rows)]
        rank = _exact_rank(cols)
        if rank != 2:
            return None
        return _exact_rank(cols + [list(q.coords)]) == 2
    mat = np.array([[complex(v) for v in r] for r in rows])
    s = np.linalg.svd(mat, compute_uv=False)
    if s[1] <= tol * s[0]:
        return None
    aug = np.column_stack([mat, q.as_complex()])
    s2 = np.linalg.svd(aug, compute_uv=False)
    return bool(s2[2] <= tol * s2[0])


def fixed_points_at_infinity(f: ProjectiveMap, ind: list[ProjPoint]) -> list[ProjPoint]:
    """Regular points of the line at infinity fixed by f."""
    b = [c.partial_evaluate(0, 0) for c in f.components]
    x1, x2 = P.X(1), P.X(2)
    cross = x2 * b[1] - x1 * b[2]
    if b[0].is_zero() and cross.is_zero():
        raise IndeterminacyError("the line at infinity is pointwise fixed")
    if b[0].is_zero():
        h = cross
    elif cross.is_zero():
        h = b[0]
    else:
        h = gcd(b[0], cross)
    ex, nu = _binary_form_roots(h, 1, 2)
    pts = [point(0, u1, u2) for u1, u2 in ex] + [ProjPoint((0j, u1, u2)) for u1, u2 in nu]
    out = []
    for p in pts:
        if any(p.same_as(q) for q in ind):
            continue
        img = f(p)
        if img is not None and img.same_as(p):
            out.append(p)
    return out
