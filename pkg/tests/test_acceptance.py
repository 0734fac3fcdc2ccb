"""Acceptance suite: one test per criterion, each recording a PASS/FAIL line."""
import random
import time

from orbitcount import cohomology as C
from orbitcount import families as Fam
from orbitcount import poly as P
from orbitcount import projmap as PM
from orbitcount import solver as S
from orbitcount.poly import MultiPoly, divides, gcd, resultant
from orbitcount.projmap import E1, E2, point

LG = dict(a0=2, a1=-3, a2=5, b0=7, b1=-2, b2=3)
C1 = dict(alpha=2, beta=3, a0=1, a1=2, a2=-3, b0=5, b1=-1, b2=7)
C2 = dict(a=2, b=3, c=-5, d=7)


def _run(checks):
    failed = [name for name, ok in checks if not ok]
    return not failed, failed


def test_matrix_and_trace_regressions(acceptance):
    t0 = time.perf_counter()
    x = P.X(0, 1)
    fib = C.fibonacci
    checks = [
        ("char_poly(F_X)", C.char_poly(C.F_X) == x ** 3 - x - 1),
        ("char_poly(F_Z)", C.char_poly(C.F_Z) == x * (x * x - 3 * x + 2)),
        ("phi_0..phi_8", C.trace_sequence(C.F_X, 8, start=0) == [3, 0, 2, 3, 2, 5, 5, 7, 10]),
        ("tau_n", C.trace_sequence(C.F_Z, 10) == [2 ** n + 1 for n in range(1, 11)]),
        ("F_-1 convention", fib(-1) == 1),
        ("F_Y powers", all(C.matpow(C.F_Y, n) == [[fib(n + 2), fib(n)], [-fib(n), -fib(n - 2)]]
                           for n in range(1, 11))),
    ]
    elapsed = time.perf_counter() - t0
    checks.append(("under 1s", elapsed < 1.0))
    ok, failed = _run(checks)
    acceptance(1, ok, f"matrix/trace regressions ({elapsed:.3f}s) {failed or ''}")
    assert ok, failed


def test_closed_form_counts(acceptance):
    t0 = time.perf_counter()
    cases = [
        ("HOMOGENEOUS_D", dict(f="x^2+y", g="y^2-x"), 6, lambda n: 2 ** (2 * n)),
        ("HOMOGENEOUS_D", dict(f="x^3+y", g="y^3-x^2"), 6, lambda n: 3 ** (2 * n)),
        ("SI_MODEL", dict(alpha=2), 10, lambda n: 2 * 2 ** n - 2),
        ("LINFRAC_GENERAL", LG, 10, lambda n: C.fibonacci(n + 1) + C.fibonacci(n - 1)),
        ("LINFRAC_SPECIAL", dict(a=2, b=3), 10, lambda n: C.phi(n) + 2),
        ("COMPETITIVE", C1, 10, lambda n: 3 ** n + 4 ** n - 3),
        ("RATIONAL_PLANAR", C2, 10, lambda n: 2 ** (n + 1)),
    ]
    checks = []
    for tag, params, nmax, expect in cases:
        spec = Fam.build(tag, params)
        for n in range(1, nmax + 1):
            pred = C.predicted_count(spec, n)
            # Lefschetz number recomputed from the raw matrix, independently of predicted_count
            m = spec.model
            lef = 1 + C.trace(C.matpow(m.matrix, n)) + m.d_top ** n
            checks.append((f"{tag} n={n}", pred.predicted == expect(n) == lef - m.spurious(n)))
    elapsed = time.perf_counter() - t0
    checks.append(("under 1s", elapsed < 1.0))
    ok, failed = _run(checks)
    acceptance(2, ok, f"closed-form counts, {len(checks) - 1} cases ({elapsed:.3f}s) {failed or ''}")
    assert ok, failed


def test_degree_sequences(acceptance):
    t0 = time.perf_counter()
    cases = [
        ("LINFRAC_GENERAL", LG, [2, 3, 5, 8, 13]),
        ("HOST_PARASITE", dict(alpha=2, beta=3, gamma=5), [2, 3, 5, 8, 13]),
        ("SI_MODEL", dict(alpha=2), [2, 4, 8, 16]),
        ("COMPETITIVE", C1, [3, 9, 27]),
        ("RATIONAL_PLANAR", C2, [3, 7, 15]),
    ]
    checks = []
    for tag, params, want in cases:
        got = PM.degree_sequence(PM.homogenize(Fam.build(tag, params)), len(want))
        checks.append((f"{tag} {got}", got == want))
    # the special linear fractional map is governed by its blown-up matrix instead
    got = PM.degree_sequence(PM.homogenize(Fam.build("LINFRAC_SPECIAL", dict(a=2, b=3))), 5)
    checks.append((f"LINFRAC_SPECIAL {got}", got == [C.matpow(C.F_X, n)[0][0] for n in range(1, 6)]))
    elapsed = time.perf_counter() - t0
    checks.append(("under 60s", elapsed < 60))
    ok, failed = _run(checks)
    acceptance(3, ok, f"degree sequences ({elapsed:.1f}s) {failed or ''}")
    assert ok, failed


def _same_set(got, want):
    return len(got) == len(want) and all(any(g.same_as(w) for g in got) for w in want)


def _curve(curves, poly):
    return next((c for c in curves if c.poly.monic() == poly.monic()), None)


def test_structural_analysis(acceptance):
    x0, x1, x2 = P.X(0), P.X(1), P.X(2)
    lg = PM.homogenize(Fam.build("LINFRAC_GENERAL", LG))
    si = PM.homogenize(Fam.build("SI_MODEL", dict(alpha=2)))
    c1 = PM.homogenize(Fam.build("COMPETITIVE", C1))
    c2 = PM.homogenize(Fam.build("RATIONAL_PLANAR", C2))
    checks = []

    ind = PM.indeterminacy_locus(lg)
    checks.append(("Ind LINFRAC_GENERAL", all(p.exact for p in ind)
                   and _same_set(ind, [E1, point(0, 3, 2), point(-1, -29, -17)])))
    ind = PM.indeterminacy_locus(si)
    checks.append(("Ind SI", all(p.exact for p in ind) and _same_set(ind, [E1, E2])))
    ind = PM.indeterminacy_locus(c2)
    exact = [p for p in ind if p.exact]
    extra_ok = all(max(abs(P.evaluate(c, list(p.as_complex()))) for c in c2.components) < 1e-8
                   for p in ind if not p.exact)
    checks.append(("Ind second example (exact part)", _same_set(exact, [point(0, 1, -1), E1, E2]) and extra_ok))

    la, lb = x0 + 2 * x1 - 3 * x2, 5 * x0 - x1 + 7 * x2
    f1 = PM.jacobian_factorization(c1)
    checks.append(("Jacobian first example", _curve(f1, la) is not None and _curve(f1, lb) is not None
                   and sorted(int(c.poly.degree) for c in f1) == [1, 1, 4]))
    f2 = PM.jacobian_factorization(c2)
    want2 = [x0, x1 - x2, 3 * x0 + x1 + x2, 7 * x0 + x1 + x2]
    checks.append(("Jacobian second example", all(_curve(f2, w) is not None for w in want2)
                   and sorted(int(c.poly.degree) for c in f2) == [1, 1, 1, 1, 2]))

    cc1, cc2 = PM.critical_curves(c1), PM.critical_curves(c2)
    s0 = _curve(cc2, x0)
    checks.append(("Sigma_0 -> [0:a:c]", s0.classification == "exceptional" and s0.image == point(0, 2, -5)))
    checks.append(("L_a -> e1", _curve(cc1, la).image == E1))
    checks.append(("{x1 = x2} branch", _curve(cc2, x1 - x2).classification == "branch"))

    st_si, st_c1, st_lg = (PM.exceptional_orbit_check(f) for f in (si, c1, lg))
    checks.append(("SI STABLE", st_si.status == "STABLE"))
    checks.append(("first example STABLE", st_c1.status == "STABLE"))
    checks.append(("LINFRAC_GENERAL UNSTABLE at step 1", st_lg.status == "UNSTABLE" and st_lg.hit_step == 1))

    dtops = [PM.topological_degree(f) for f in (lg, si, c1, c2)]
    checks.append((f"d_top {dtops}", dtops == [1, 2, 4, 2]))
    ok, failed = _run(checks)
    acceptance(4, ok, f"structural analysis, {len(checks)} checks {failed or ''}")
    assert ok, failed


def _census_draws(tag, ns, expected, draws=5, seed=0, max_redraws=10):
    """Census over random generic draws; a mismatch explained by genericity flags is redrawn."""
    rng = random.Random(f"{tag}-{seed}")
    accepted, redrawn, bad = 0, 0, []
    worst = 0.0
    while accepted < draws:
        params = Fam.random_params(tag, rng)
        spec = Fam.build(tag, params)
        results = []
        for n in ns:
            t0 = time.perf_counter()
            rep = S.census(spec, n, seed=accepted, references=2)
            worst = max(worst, time.perf_counter() - t0)
            results.append(rep)
        good = all(r.found_distinct == e and r.verdict != "NON-ISOLATED"
                   and (r.residual_max or 0.0) < 1e-8 for r, e in zip(results, expected))
        if good:
            accepted += 1
        elif any(r.genericity_flags for r in results) and redrawn < max_redraws:
            redrawn += 1
        else:
            bad.append((params, [r.found_distinct for r in results]))
            accepted += 1
    return bad, redrawn, worst


def test_oracle_census(acceptance):
    checks = []
    notes = []
    worst = 0.0
    for tag, ns, expected in [
        ("LINFRAC_SPECIAL", (1, 2, 3), (2, 4, 5)),
        ("LINFRAC_GENERAL", (1,), (2,)),
        ("COMPETITIVE", (1,), (4,)),
        ("RATIONAL_PLANAR", (1,), (4,)),
    ]:
        bad, redrawn, w = _census_draws(tag, ns, expected)
        worst = max(worst, w)
        checks.append((f"{tag} {bad}", not bad))
        if redrawn:
            notes.append(f"{tag}: {redrawn} degenerate draw(s) redrawn")
    rng = random.Random("SI")
    si_ok = True
    for k in range(5):
        rep = S.census(Fam.build("SI_MODEL", Fam.random_params("SI_MODEL", rng)), 1, seed=k)
        si_ok &= rep.verdict == "NON-ISOLATED"
    checks.append(("SI NON-ISOLATED", si_ok))
    checks.append(("each run under 120s", worst < 120))

    # comparison report only: LINFRAC_GENERAL at n >= 2 against the closed form
    spec = Fam.build("LINFRAC_GENERAL", LG)
    for n in (2, 3):
        rep = S.census(spec, n)
        notes.append(f"LINFRAC_GENERAL n={n}: found {rep.found_distinct}, closed form {rep.prediction.predicted}, {rep.verdict}")
    ok, failed = _run(checks)
    acceptance(5, ok, f"oracle census (slowest run {worst:.1f}s) {failed or ''}; " + "; ".join(notes))
    assert ok, failed


def _rand_poly(rng, max_deg=3, terms=4):
    d = {}
    for _ in range(rng.randint(1, terms)):
        i = rng.randint(0, max_deg)
        j = rng.randint(0, max_deg - i)
        d[(i, j)] = P.as_fraction(f"{rng.randint(-9, 9)}/{rng.randint(1, 5)}")
    return MultiPoly(d, 2)


def test_property_suites(acceptance):
    rng = random.Random(2024)
    checks = []
    ring = gcd_ok = res_ok = 0
    instances = 1000
    for _ in range(instances):
        a, b, c = _rand_poly(rng), _rand_poly(rng), _rand_poly(rng)
        ring += (a + b == b + a and a * b == b * a and a * (b + c) == a * b + a * c
                 and (a * b) * c == a * (b * c))
        if a.is_zero() or b.is_zero() or c.is_constant():
            gcd_ok += 1
            res_ok += 1
            continue
        g = gcd(a * c, b * c)
        gcd_ok += divides(g, a * c) and divides(g, b * c) and divides(c.primitive(), g)
        if (a * c).degree_in(1) > 0 and b.degree_in(1) > 0:
            r = resultant(a * c, b, 1)
            res_ok += r.is_zero() == (gcd(a * c, b).degree_in(1) > 0)
        else:
            res_ok += 1
    checks.append((f"ring {ring}/{instances}", ring == instances))
    checks.append((f"gcd {gcd_ok}/{instances}", gcd_ok == instances))
    checks.append((f"resultant {res_ok}/{instances}", res_ok == instances))

    conic_bad = []
    for seed in range(100):
        r = random.Random(seed)
        p = MultiPoly({(i, j): P.as_fraction(f"{r.randint(-9, 9)}/{r.randint(1, 5)}")
                       for i in range(3) for j in range(3 - i)}, 2)
        q = MultiPoly({(i, j): P.as_fraction(f"{r.randint(-9, 9)}/{r.randint(1, 5)}")
                       for i in range(3) for j in range(3 - i)}, 2)
        if sum(pt.multiplicity for pt in S.solve_system(p, q, seed=seed)) != 4:
            conic_bad.append(seed)
    checks.append((f"Bezout conics {conic_bad}", not conic_bad))

    from orbitcount import cli

    cfg = cli.build_config(cli.make_parser().parse_args(
        ["verify", "--family", "LINFRAC_SPECIAL", "--params", "a=2,b=3", "--n-range", "1-3", "--seed", "17"]))
    t1, t2 = cli.run(cfg).dumps(False), cli.run(cfg).dumps(False)
    checks.append(("deterministic report", t1 == t2))

    rng = random.Random(99)
    worst = 0.0
    for _ in range(10):
        p = Fam.random_params("HOST_PARASITE", rng)
        spec = Fam.build("HOST_PARASITE", p)
        a, b, rec = Fam.host_parasite_reduce(p["alpha"], p["beta"], p["gamma"])
        orbit = spec.orbit(rng.uniform(0.1, 1), rng.uniform(0.1, 1), 6)
        for k in range(1, 7):
            worst = max(worst, abs(rec(orbit[k - 1][0], orbit[k][0]) - orbit[k][1]) / max(1, abs(orbit[k][1])))
    checks.append((f"host-parasite round trip {worst:.1e}", worst <= 1e-12))
    ok, failed = _run(checks)
    acceptance(6, ok, f"property suites {failed or ''}")
    assert ok, failed
