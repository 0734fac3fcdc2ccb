import json
import random
from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings, strategies as st

from orbitcount import families as Fam
from orbitcount import poly as P
from orbitcount import solver as S
from orbitcount.roots import aberth, polished_roots, rational_roots, squarefree_decomposition

x, y = P.X(0, 2), P.X(1, 2)


def random_conic(rng):
    terms = {(i, j): Fr(rng.randint(-9, 9), rng.randint(1, 5)) for i in range(3) for j in range(3 - i)}
    return P.MultiPoly(terms, 2)


def test_aberth_recovers_known_roots():
    roots = sorted(aberth([-6, 11, -6, 1]), key=lambda z: z.real)
    assert all(abs(r - k) < 1e-12 for r, k in zip(roots, (1, 2, 3)))


def test_rational_roots_with_multiplicity():
    p = (x - Fr(1, 3)) ** 2 * (2 * x + 5) * (x * x + 1)
    assert rational_roots(p) == [(Fr(-5, 2), 1), (Fr(1, 3), 2)]


def test_squarefree_decomposition():
    p = (x - 1) * (x + 2) ** 2 * (x * x - 3) ** 3
    parts = {k: a for a, k in squarefree_decomposition(p)}
    assert parts[1] == (x - 1).primitive()
    assert parts[2] == (x + 2).primitive()
    assert parts[3] == (x * x - 3).primitive()


def test_polished_roots_resolve_close_roots():
    eps = Fr(1, 10 ** 12)
    p = (x - 1) * (x - 1 - eps) * (x + 4)
    coeffs = [c.constant_value() for c in p.coefficients_in(0)]
    roots = sorted(polished_roots(coeffs, 60), key=lambda z: float(z.real))
    assert abs(roots[2] - roots[1]) > 5e-13


def test_bezout_on_random_conics():
    for seed in range(100):
        rng = random.Random(seed)
        p, q = random_conic(rng), random_conic(rng)
        pts = S.solve_system(p, q, seed=seed)
        assert sum(pt.multiplicity for pt in pts) == 4, seed
        assert all(pt.residual < 1e-8 for pt in pts)


def test_double_intersection_is_flagged():
    pts = S.solve_system(y - x * x, y, seed=1)
    assert len(pts) == 1 and pts[0].multiplicity == 2 and not pts[0].simple


def test_common_curve_is_reported():
    with pytest.raises(S.NonIsolatedError):
        S.solve_system((x - y) * (x + 1), (x - y) * y)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.integers(-5, 5), st.integers(-5, 5)), min_size=1, max_size=4, unique_by=lambda t: t[0]))
def test_prescribed_intersections_are_found(pts):
    # two curves through prescribed lattice points, in general position
    p = P.const(1, 2)
    for a, _ in pts:
        p = p * (x - a)
    q = y - _interpolate(pts)
    got = S.solve_system(p, q, seed=0)
    assert {(round(g.x.real), round(g.y.real)) for g in got} == set(pts)


def _interpolate(pts):
    # Lagrange interpolation y = L(x) through the points
    out = P.MultiPoly({}, 2)
    for i, (xi, yi) in enumerate(pts):
        term = P.const(yi, 2)
        for j, (xj, _) in enumerate(pts):
            if j != i:
                term = term * (x - xj) * Fr(1, xi - xj)
        out = out + term
    return out


def test_periodic_point_json_round_trip():
    pt = S.PeriodicPoint(complex(0.1, -2.5), complex(3.0, 0.0), 1e-15, True, 1, 2)
    assert S.PeriodicPoint.from_json(json.loads(json.dumps(pt.to_json()))) == pt


def test_census_special_linfrac():
    spec = Fam.build("LINFRAC_SPECIAL", dict(a=2, b=3))
    got = [S.census(spec, n).found_distinct for n in (1, 2, 3)]
    assert got == [2, 4, 5]


def test_census_rejects_indeterminacy_points():
    spec = Fam.build("LINFRAC_SPECIAL", dict(a=2, b=3))
    rep = S.census(spec, 2)
    assert any(r.reason == "indeterminacy" for r in rep.rejected)
    assert rep.residual_max < 1e-8


def test_census_si_is_non_isolated():
    rep = S.census(Fam.build("SI_MODEL", dict(alpha=2)), 1)
    assert rep.verdict == "NON-ISOLATED" and rep.non_isolated_factor


def test_census_report_round_trip_and_determinism():
    spec = Fam.build("RATIONAL_PLANAR", dict(a=2, b=3, c=-5, d=7))
    r1, r2 = S.census(spec, 1, seed=4), S.census(spec, 1, seed=4)
    t1 = json.dumps(r1.to_json(include_timings=False), sort_keys=True)
    t2 = json.dumps(r2.to_json(include_timings=False), sort_keys=True)
    assert t1 == t2
    assert S.PeriodicReport.from_json(json.loads(t1)) == r1
    assert len(r1.csv_rows()) == len(r1.points) + len(r1.rejected)


def test_validate_orbit_catches_pole():
    spec = Fam.build("LINFRAC_SPECIAL", dict(a=2, b=3))
    # the map's pole line is x = -b
    pt = S.PeriodicPoint(complex(-3, 0), complex(1, 0), 0.0)
    v = S.validate_orbit(spec, pt, 1)
    assert not v.valid and v.reason in ("pole", "indeterminacy")


def test_uneven_multiplicity_over_one_x_root():
    # x = 0 carries resultant multiplicity 3 over a double and a simple point
    pts = S.solve_system(x, y * y * (y - 1), seed=0)
    by_y = {round(p.y.real): p for p in pts}
    assert by_y[0].multiplicity == 2 and not by_y[0].simple
    assert by_y[1].multiplicity == 1 and by_y[1].simple


def test_residual_is_not_fooled_near_an_axis():
    fp, fq = S._Compiled(x - 2), S._Compiled(y * (x + 1))
    assert S._rel_residual(fp, fq, 2 + 0j, 1e-200 + 0j) < 1e-150


def test_reference_flags_catch_a_cycle_through_indeterminacy():
    # the 2-cycle {(-1, -9/5), (-9/5, -1)} passes through the point (-b, -a)
    spec = Fam.build("LINFRAC_SPECIAL", dict(a=1, b=Fr(9, 5)))
    rep = S.census(spec, 2, references=2)
    assert rep.found_distinct == 2
    assert any("distinct solutions" in f for f in rep.genericity_flags)


def test_reference_flags_catch_a_fixed_point_at_infinity():
    spec = Fam.build("LINFRAC_GENERAL", dict(a0=Fr(3, 2), a1=Fr(-5, 8), a2=Fr(-7, 9),
                                             b0=-3, b1=Fr(-1, 2), b2=Fr(1, 2)))
    rep = S.census(spec, 1, references=2)
    assert rep.found_distinct == 1
    assert any("resultant degree" in f for f in rep.genericity_flags)


def test_generic_draw_has_no_reference_flags():
    rep = S.census(Fam.build("LINFRAC_SPECIAL", dict(a=2, b=3)), 2, references=2)
    assert rep.genericity_flags == []
