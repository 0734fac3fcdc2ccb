"""Registry of the concrete recurrence families.

Each builder returns a :class:`FamilySpec` holding exact parameters, the
planar map as a pair of rational functions in (x, y), and the registered
cohomology model.  Second-order recurrences z' = p/q are written as
F(x, y) = (y, p(x, y)/q(x, y)) with x the older value.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from . import poly as P
from .cohomology import CohomologyModel, model_for, p2_model_for
from .poly import MultiPoly, gcd, resultant

TAGS = (
    "LINFRAC_GENERAL",
    "LINFRAC_SPECIAL",
    "HOST_PARASITE",
    "SI_MODEL",
    "SI_MODEL_LAMBDA",
    "COMPETITIVE",
    "RATIONAL_PLANAR",
    "HOMOGENEOUS_D",
)

PARAM_NAMES = {
    "LINFRAC_GENERAL": ("a0", "a1", "a2", "b0", "b1", "b2"),
    "LINFRAC_SPECIAL": ("a", "b"),
    "HOST_PARASITE": ("alpha", "beta", "gamma"),
    "SI_MODEL": ("alpha",),
    "SI_MODEL_LAMBDA": ("alpha", "lam"),
    "COMPETITIVE": ("alpha", "beta", "a0", "a1", "a2", "b0", "b1", "b2"),
    "RATIONAL_PLANAR": ("a", "b", "c", "d"),
    "HOMOGENEOUS_D": ("f", "g"),
}


class DegenerateParameters(ValueError):
    """Parameters violate a family's nondegeneracy condition."""


class UnknownFamily(ValueError):
    pass


_X, _Y = P.X(0, 2), P.X(1, 2)
_ONE = P.const(1, 2)


@dataclass(frozen=True)
class FamilySpec:
    tag: str
    params: Mapping
    planar: tuple  # ((num1, den1), (num2, den2)) bivariate
    model: CohomologyModel | None
    p2_model: CohomologyModel | None = None
    _compiled: list = field(default_factory=list, repr=False, compare=False)

    def param_strings(self) -> dict:
        return {k: (v.to_text() if isinstance(v, MultiPoly) else str(v)) for k, v in self.params.items()}

    def planar_compiled(self):
        if not self._compiled:
            from .solver import _Compiled

            self._compiled.extend((_Compiled(n), _Compiled(d)) for n, d in self.planar)
        return self._compiled

    def step(self, x, y):
        """One step of the planar map; exact for Fraction input, complex otherwise."""
        out = []
        for num, den in self.planar:
            dv = den.evaluate([x, y])
            if dv == 0:
                raise ZeroDivisionError("orbit hits a pole")
            out.append(num.evaluate([x, y]) / dv)
        return tuple(out)

    def orbit(self, x, y, steps: int) -> list:
        pts = [(x, y)]
        for _ in range(steps):
            x, y = self.step(x, y)
            pts.append((x, y))
        return pts

    def spurious_registry(self):
        """Registered spurious points with multiplicities (None: count fixed points at infinity)."""
        from .projmap import E1, E2, point

        p = self.params
        if self.tag in ("SI_MODEL", "SI_MODEL_LAMBDA"):
            return [(E1, 1), (E2, 1), (point(0, 1, -1), 1)]
        if self.tag == "LINFRAC_GENERAL":
            return [(E1, 2)]
        if self.tag == "COMPETITIVE":
            pa = point(1, 0, -p["a0"] / p["a2"])
            pb = point(1, -p["b0"] / p["b1"], 0)
            return [(E1, 1), (E2, 1), (pa, 1), (pb, 1)]
        if self.tag == "RATIONAL_PLANAR":
            return [(point(0, p["a"], p["c"]), 1), (point(0, 1, -1), 1)]
        if self.tag == "HOMOGENEOUS_D":
            return None
        return []

    def to_json(self) -> dict:
        return {"tag": self.tag, "params": self.param_strings()}


def _frac(v) -> Fraction:
    if isinstance(v, str):
        return Fraction(v.strip())
    return Fraction(v)


def _need(params: Mapping, tag: str) -> dict:
    names = PARAM_NAMES[tag]
    optional = {"lam"} if tag == "SI_MODEL_LAMBDA" else set()
    unknown = set(params) - set(names)
    if unknown:
        raise DegenerateParameters(f"{tag}: unknown parameter(s) {sorted(unknown)}")
    missing = [k for k in names if k not in params and k not in optional]
    if missing:
        raise DegenerateParameters(f"{tag}: missing parameter(s) {missing}")
    if tag == "HOMOGENEOUS_D":
        return {k: params[k] if isinstance(params[k], MultiPoly) else P.parse(str(params[k]), 2) for k in names}
    out = {k: _frac(params[k]) for k in names if k in params}
    if tag == "SI_MODEL_LAMBDA":
        out.setdefault("lam", Fraction(0))
    return out


def _lin(c0, c1, c2) -> MultiPoly:
    return _ONE * c0 + _X * c1 + _Y * c2


def _coprime(p: MultiPoly, q: MultiPoly) -> bool:
    return gcd(p, q).is_constant()


def _linfrac_planar(a, b):
    num, den = _lin(*a), _lin(*b)
    if den.is_zero():
        raise DegenerateParameters("beta = 0: the denominator vanishes identically")
    if num.is_zero() or not _coprime(num, den):
        raise DegenerateParameters("alpha and beta are proportional: the recurrence is constant")
    return ((_Y, _ONE), (num, den))


def _top_part(p: MultiPoly) -> MultiPoly:
    d = p.degree
    return MultiPoly({e: c for e, c in p.terms.items() if sum(e) == d}, 2)


def build(tag: str, params: Mapping) -> FamilySpec:
    """Validated family spec with its registered cohomology model."""
    if tag not in TAGS:
        raise UnknownFamily(f"unknown family {tag!r}; expected one of {', '.join(TAGS)}")
    p = _need(params, tag)
    degree = None
    if tag == "LINFRAC_GENERAL":
        planar = _linfrac_planar((p["a0"], p["a1"], p["a2"]), (p["b0"], p["b1"], p["b2"]))
    elif tag == "LINFRAC_SPECIAL":
        planar = _linfrac_planar((p["a"], 0, 1), (p["b"], 1, 0))
    elif tag == "HOST_PARASITE":
        al, be, ga = p["alpha"], p["beta"], p["gamma"]
        for name in ("alpha", "beta", "gamma"):
            if p[name] == 0:
                raise DegenerateParameters(f"HOST_PARASITE: {name} must be nonzero")
        den = _ONE + _Y * be
        planar = ((_X * al, den), (_X * _Y * ga, den))
    elif tag in ("SI_MODEL", "SI_MODEL_LAMBDA"):
        al, lam = p["alpha"], p.get("lam", Fraction(0))
        if al == 0:
            raise DegenerateParameters(f"{tag}: alpha must be nonzero")
        planar = ((_X + _X * _Y * al + _Y * lam, _ONE), (_Y * (1 - lam) - _X * _Y * al, _ONE))
    elif tag == "COMPETITIVE":
        la = _lin(p["a0"], p["a1"], p["a2"])
        lb = _lin(p["b0"], p["b1"], p["b2"])
        if p["a2"] == 0 or p["b1"] == 0:
            raise DegenerateParameters("COMPETITIVE: need a2 != 0 and b1 != 0")
        planar = ((_X * (la * p["alpha"] + 1), la), (_Y * (lb * p["beta"] + 1), lb))
    elif tag == "RATIONAL_PLANAR":
        n1 = _X * _Y * p["a"] + _X + _Y
        n2 = _X * _Y * p["c"] + _X + _Y
        d1, d2 = _ONE * p["b"] + _X + _Y, _ONE * p["d"] + _X + _Y
        if p["a"] == 0 or p["c"] == 0:
            raise DegenerateParameters("RATIONAL_PLANAR: need a != 0 and c != 0")
        if not (_coprime(n1, d1) and _coprime(n2, d2)):
            raise DegenerateParameters("RATIONAL_PLANAR: numerator and denominator share a factor")
        planar = ((n1, d1), (n2, d2))
    else:  # HOMOGENEOUS_D
        f, g = p["f"], p["g"]
        if f.is_zero() or g.is_zero() or f.degree != g.degree or f.degree < 1:
            raise DegenerateParameters("HOMOGENEOUS_D: f and g need the same positive degree")
        degree = int(f.degree)
        fd, gd = _top_part(f), _top_part(g)
        if not _binary_forms_coprime(fd, gd, degree):
            raise DegenerateParameters("HOMOGENEOUS_D: f_d and g_d have a common nontrivial zero")
        planar = ((f, _ONE), (g, _ONE))
    return FamilySpec(tag, p, planar, model_for(tag, degree), p2_model_for(tag))


def _binary_forms_coprime(fd: MultiPoly, gd: MultiPoly, d: int) -> bool:
    """No common zero of two binary forms of degree d, via a resultant in x at y = 1."""
    top = (d, 0)
    if fd.terms.get(top, 0) == 0 and gd.terms.get(top, 0) == 0:
        return False  # both vanish at [1:0]
    fa, ga = fd.partial_evaluate(1, 1), gd.partial_evaluate(1, 1)
    return not resultant(fa, ga, 0).is_zero()


def linfrac_params(a, b) -> dict:
    """LINFRAC_GENERAL parameters for alpha = a, beta = b (3-tuples)."""
    return dict(zip(PARAM_NAMES["LINFRAC_GENERAL"], [*map(_frac, a), *map(_frac, b)]))


def host_parasite_reduce(alpha, beta, gamma):
    """Reduce the host-parasite map to the linear fractional recurrence for x alone.

    Returns ``((a0, a1, a2), (b0, b1, b2), reconstruct)`` where
    ``reconstruct(x_n, x_next)`` gives the y value paired with ``x_next``.
    """
    al, be, ga = _frac(alpha), _frac(beta), _frac(gamma)
    if not (al and be and ga):
        raise DegenerateParameters("host-parasite reduction needs alpha, beta, gamma nonzero")

    def reconstruct(x_n, x_next):
        return ga / be * (x_n - x_next / al)

    return (Fraction(0), Fraction(0), al), (Fraction(1), ga, -ga / al), reconstruct


def iterate_recurrence(a, b, z_prev, z_cur, steps: int) -> list:
    """z_{k+1} = (a0 + a1 z_{k-1} + a2 z_k) / (b0 + b1 z_{k-1} + b2 z_k)."""
    seq = [z_prev, z_cur]
    for _ in range(steps):
        u, v = seq[-2], seq[-1]
        seq.append((a[0] + a[1] * u + a[2] * v) / (b[0] + b[1] * u + b[2] * v))
    return seq


def random_params(tag: str, rng: random.Random, height: int = 9) -> dict:
    """Random nonzero rational parameters (for generic-parameter experiments)."""

    def r():
        while True:
            v = Fraction(rng.randint(-height, height), rng.randint(1, height))
            if v:
                return v

    if tag == "HOMOGENEOUS_D":
        raise ValueError("HOMOGENEOUS_D parameters are polynomials; supply them explicitly")
    names = PARAM_NAMES[tag]
    while True:
        params = {k: r() for k in names}
        if tag == "COMPETITIVE" and {params["alpha"], params["beta"]} & {0, 1}:
            continue  # alpha = 1 or beta = 1 forces fixed points onto an axis
        try:
            build(tag, params)
        except DegenerateParameters:
            continue
        return params


def parse_params(text: str) -> dict:
    """'a=2,b=3/4' -> {'a': '2', 'b': '3/4'} (values converted by :func:`build`)."""
    out = {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        key, sep, val = item.partition("=")
        if not sep or not key.strip() or not val.strip():
            raise ValueError(f"bad parameter item {item!r}; expected name=value")
        out[key.strip()] = val.strip()
    return out
