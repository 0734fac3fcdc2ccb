import random
from fractions import Fraction as Fr

import pytest

from orbitcount import families as Fam
from orbitcount import poly as P
from orbitcount import projmap as PM
from orbitcount.cohomology import F_X, matpow
from orbitcount.projmap import E0, E1, E2, point

x0, x1, x2 = P.X(0), P.X(1), P.X(2)

LG = dict(a0=2, a1=-3, a2=5, b0=7, b1=-2, b2=3)
C1 = dict(alpha=2, beta=3, a0=1, a1=2, a2=-3, b0=5, b1=-1, b2=7)
C2 = dict(a=2, b=3, c=-5, d=7)


def hmap(tag, params):
    return PM.homogenize(Fam.build(tag, params))


def same_curve(p, q):
    return p.monic() == q.monic()


def same_set(got, want):
    return len(got) == len(want) and all(any(g.same_as(w) for g in got) for w in want)


def test_point_normalization_and_json():
    p = point(0, 3, -2)
    assert p.coords == (0, 1, Fr(-2, 3))
    assert PM.ProjPoint.from_json(p.to_json()) == p
    q = point(2.0, 4.0, 1j)
    assert PM.ProjPoint.from_json(q.to_json()).same_as(q)
    with pytest.raises(ValueError):
        point(0, 0, 0)


def test_planar_map_homogenization():
    f = hmap("LINFRAC_GENERAL", LG)
    bx = 7 * x0 - 2 * x1 + 3 * x2
    ax = 2 * x0 - 3 * x1 + 5 * x2
    want = [x0 * bx, x2 * bx, x0 * ax]
    ratio = [c.monic() for c in f.components]
    assert ratio == [w.monic() for w in want]


def test_si_homogenization_signs():
    al = Fr(3, 2)
    f = hmap("SI_MODEL", dict(alpha=al))
    want = PM.ProjectiveMap([x0 * x0, x1 * (x0 + al * x2), x2 * (x0 - al * x1)])
    assert f == want


def test_compose_with_identity_and_degree_drop():
    f = hmap("LINFRAC_GENERAL", LG)
    ident = PM.ProjectiveMap.identity()
    assert PM.compose(f, ident) == f and PM.compose(ident, f) == f
    assert PM.compose(f, f).degree == 3


@pytest.mark.parametrize("tag,params,n,want", [
    ("LINFRAC_GENERAL", LG, 5, [2, 3, 5, 8, 13]),
    ("HOST_PARASITE", dict(alpha=2, beta=3, gamma=5), 5, [2, 3, 5, 8, 13]),
    ("SI_MODEL", dict(alpha=Fr(3, 2)), 4, [2, 4, 8, 16]),
    ("COMPETITIVE", C1, 3, [3, 9, 27]),
    ("RATIONAL_PLANAR", C2, 3, [3, 7, 15]),
])
def test_degree_sequences(tag, params, n, want):
    assert PM.degree_sequence(hmap(tag, params), n) == want


def test_special_linfrac_degrees_follow_the_blown_up_matrix():
    got = PM.degree_sequence(hmap("LINFRAC_SPECIAL", dict(a=2, b=3)), 7, max_degree=128)
    assert got == [matpow(F_X, n)[0][0] for n in range(1, 8)]


def test_degree_budget():
    with pytest.raises(PM.BudgetExceeded):
        PM.degree_sequence(hmap("SI_MODEL", dict(alpha=2)), 6, max_degree=16)


def test_indeterminacy_linfrac_general():
    got = PM.indeterminacy_locus(hmap("LINFRAC_GENERAL", LG))
    a, b = (2, -3, 5), (7, -2, 3)
    p0 = point(0, -b[2], b[1])
    pg = point(b[1] * a[2] - b[2] * a[1], -b[0] * a[2] + a[0] * b[2], a[1] * b[0] - a[0] * b[1])
    assert all(p.exact for p in got)
    assert same_set(got, [E1, p0, pg])


def test_indeterminacy_linfrac_special():
    got = PM.indeterminacy_locus(hmap("LINFRAC_SPECIAL", dict(a=2, b=3)))
    assert same_set(got, [E1, E2, point(1, -3, -2)])


def test_indeterminacy_si():
    assert same_set(PM.indeterminacy_locus(hmap("SI_MODEL", dict(alpha=2))), [E1, E2])


def test_indeterminacy_competitive():
    a, b = (1, 2, -3), (5, -1, 7)
    want = [point(1, 0, Fr(-a[0], a[2])), point(1, Fr(-b[0], b[1]), 0), point(0, -a[2], a[1]),
            point(0, -b[2], b[1]), point(1, -2, -1)]
    assert same_set(PM.indeterminacy_locus(hmap("COMPETITIVE", C1)), want)


def test_indeterminacy_rational_planar():
    f = hmap("RATIONAL_PLANAR", C2)
    got = PM.indeterminacy_locus(f)
    exact = [p for p in got if p.exact]
    assert same_set(exact, [point(0, 1, -1), E1, E2])
    # the remaining points are genuine common zeros away from infinity
    for p in got:
        if not p.exact:
            v = p.as_complex()
            assert not p.is_at_infinity()
            assert all(abs(P.evaluate(c, list(v))) < 1e-8 for c in f.components)


def test_jacobian_factors_competitive():
    f = hmap("COMPETITIVE", C1)
    curves = PM.jacobian_factorization(f)
    la, lb = x0 + 2 * x1 - 3 * x2, 5 * x0 - x1 + 7 * x2
    lines = [c.poly for c in curves if c.poly.degree == 1]
    assert len(lines) == 2 and any(same_curve(l, la) for l in lines) and any(same_curve(l, lb) for l in lines)
    assert sorted(int(c.poly.degree) for c in curves) == [1, 1, 4]


def test_jacobian_factors_rational_planar():
    a, b, c, d = 2, 3, -5, 7
    curves = PM.jacobian_factorization(hmap("RATIONAL_PLANAR", C2))
    want = [x0, x1 - x2, b * x0 + x1 + x2, d * x0 + x1 + x2]
    for w in want:
        assert any(same_curve(cv.poly, w) for cv in curves)
    assert sorted(int(cv.poly.degree) for cv in curves) == [1, 1, 1, 1, 2]
    prod = P.const(1)
    for cv in curves:
        prod = prod * cv.poly ** cv.multiplicity
    assert same_curve(prod, PM.jacobian(hmap("RATIONAL_PLANAR", C2)))


def test_critical_curve_images_rational_planar():
    a, b, c, d = 2, 3, -5, 7
    curves = PM.critical_curves(hmap("RATIONAL_PLANAR", C2))

    def find(poly):
        return next(cv for cv in curves if same_curve(cv.poly, poly))

    assert find(x0).classification == "exceptional" and find(x0).image == point(0, a, c)
    assert find(x1 - x2).classification == "branch"
    assert find(b * x0 + x1 + x2).image == E1
    assert find(d * x0 + x1 + x2).image == E2
    q = next(cv for cv in curves if cv.poly.degree == 2)
    assert q.image.same_as(point(a * c * (b - d), a * (a - c) * d, b * (a - c) * c), 1e-7)


def test_critical_curve_images_competitive():
    curves = PM.critical_curves(hmap("COMPETITIVE", C1))
    la = x0 + 2 * x1 - 3 * x2
    lb = 5 * x0 - x1 + 7 * x2
    assert next(cv for cv in curves if same_curve(cv.poly, la)).image == E1
    assert next(cv for cv in curves if same_curve(cv.poly, lb)).image == E2
    assert next(cv for cv in curves if cv.poly.degree == 4).classification == "branch"


@pytest.mark.parametrize("tag,params,status,step", [
    ("SI_MODEL", dict(alpha=2), "STABLE", None),
    ("COMPETITIVE", C1, "STABLE", None),
    ("LINFRAC_GENERAL", LG, "UNSTABLE", 1),
])
def test_stability(tag, params, status, step):
    rep = PM.exceptional_orbit_check(hmap(tag, params))
    assert rep.status == status and rep.hit_step == step


@pytest.mark.parametrize("tag,params,d", [
    ("LINFRAC_GENERAL", LG, 1),
    ("SI_MODEL", dict(alpha=2), 2),
    ("COMPETITIVE", C1, 4),
    ("RATIONAL_PLANAR", C2, 2),
])
def test_topological_degree(tag, params, d):
    assert PM.topological_degree(hmap(tag, params)) == d


def test_random_draws_keep_structure():
    rng = random.Random(5)
    for _ in range(3):
        f = hmap("LINFRAC_GENERAL", Fam.random_params("LINFRAC_GENERAL", rng))
        assert PM.degree_sequence(f, 4) == [2, 3, 5, 8]
        assert len(PM.indeterminacy_locus(f)) == 3
