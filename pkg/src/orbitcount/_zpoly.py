"""Integer-coefficient sparse polynomial kernels.

Polynomials are plain dicts mapping exponent tuples to nonzero ints.  A
polynomial in zero variables is ``{(): c}``.  These routines back the exact
gcd, exact division and determinant code in :mod:`orbitcount.poly`; they are
kept dict-based because Fraction arithmetic is several times slower than int
arithmetic and the gcd inputs during map composition get large.
"""
from __future__ import annotations

from math import gcd as igcd, isqrt

ZPoly = dict  # dict[tuple[int, ...], int]


class InexactDivision(ArithmeticError):
    pass


def grlex_key(exp):
    return (sum(exp), exp)


def lead(f: ZPoly):
    exp = max(f, key=grlex_key)
    return exp, f[exp]


def zconst(c: int, n: int) -> ZPoly:
    return {(0,) * n: c} if c else {}


def zadd(f: ZPoly, g: ZPoly) -> ZPoly:
    out = dict(f)
    for e, c in g.items():
        v = out.get(e, 0) + c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def zsub(f: ZPoly, g: ZPoly) -> ZPoly:
    out = dict(f)
    for e, c in g.items():
        v = out.get(e, 0) - c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def zscale(f: ZPoly, c: int) -> ZPoly:
    if not c:
        return {}
    return {e: v * c for e, v in f.items()}


def zmul(f: ZPoly, g: ZPoly) -> ZPoly:
    if len(f) > len(g):
        f, g = g, f
    out: dict = {}
    get = out.get
    for e1, c1 in f.items():
        for e2, c2 in g.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def zpow(f: ZPoly, k: int, n: int) -> ZPoly:
    result = zconst(1, n)
    base = f
    while k:
        if k & 1:
            result = zmul(result, base)
        k >>= 1
        if k:
            base = zmul(base, base)
    return result


def zcontent(f: ZPoly) -> int:
    g = 0
    for c in f.values():
        g = igcd(g, c)
        if g == 1:
            break
    return g


def zprimitive(f: ZPoly) -> ZPoly:
    """Divide out the integer content and make the grlex-leading coefficient positive."""
    if not f:
        return {}
    c = zcontent(f)
    if lead(f)[1] < 0:
        c = -c
    if c == 1:
        return dict(f)
    return {e: v // c for e, v in f.items()}


def zdivexact(f: ZPoly, g: ZPoly) -> ZPoly:
    """Exact quotient f/g over Z; raises InexactDivision otherwise.

    Uses grlex leading-term division, which is exact whenever g divides f.
    """
    if not g:
        raise ZeroDivisionError("division by zero polynomial")
    if not f:
        return {}
    ge, gc = lead(g)
    rest = [(e, c) for e, c in g.items() if e != ge]
    rem = dict(f)
    quot: dict = {}
    while rem:
        re_, rc = lead(rem)
        qe = tuple(a - b for a, b in zip(re_, ge))
        if any(x < 0 for x in qe):
            raise InexactDivision("leading monomial not divisible")
        qc, r = divmod(rc, gc)
        if r:
            raise InexactDivision("leading coefficient not divisible")
        quot[qe] = qc
        del rem[re_]
        for e, c in rest:
            m = tuple(a + b for a, b in zip(qe, e))
            v = rem.get(m, 0) - qc * c
            if v:
                rem[m] = v
            else:
                rem.pop(m, None)
    return quot


def zdivides(g: ZPoly, f: ZPoly) -> bool:
    try:
        zdivexact(f, g)
    except InexactDivision:
        return False
    return True


# --- recursive views --------------------------------------------------------

def to_univariate(f: ZPoly, n: int) -> list:
    """Split f by powers of its last variable: list of (n-1)-variable dicts."""
    out: list = []
    for e, c in f.items():
        k = e[-1]
        while len(out) <= k:
            out.append({})
        out[k][e[:-1]] = c
    return out


def from_univariate(coeffs: list) -> ZPoly:
    out = {}
    for k, cf in enumerate(coeffs):
        for e, c in cf.items():
            out[e + (k,)] = c
    return out


def eval_last(f: ZPoly, xi: int) -> ZPoly:
    out: dict = {}
    for e, c in f.items():
        key = e[:-1]
        out[key] = out.get(key, 0) + c * xi ** e[-1]
    return {e: c for e, c in out.items() if c}


def _symmetric_mod(c: int, xi: int) -> int:
    r = c % xi
    if r > xi // 2:
        r -= xi
    return r


def _interpolate(h: ZPoly, xi: int) -> ZPoly:
    """Recover a polynomial from its image at last variable = xi (xi-adic digits)."""
    out = {}
    k = 0
    h = dict(h)
    while h:
        digit = {}
        for e, c in h.items():
            r = _symmetric_mod(c, xi)
            if r:
                digit[e] = r
                out[e + (k,)] = r
        nxt = {}
        for e, c in h.items():
            v = (c - digit.get(e, 0)) // xi
            if v:
                nxt[e] = v
        h = nxt
        k += 1
    return out


def _norm(f: ZPoly) -> int:
    return max(abs(c) for c in f.values())


# --- gcd --------------------------------------------------------------------

def heugcd(f: ZPoly, g: ZPoly, n: int, _depth: int = 0):
    """Heuristic gcd (evaluate at a large integer, recurse, interpolate).

    Returns the primitive gcd times the gcd of the integer contents, or None
    when the heuristic gives up.  Any returned value has been verified to
    divide both inputs.
    """
    if n == 0:
        return {(): igcd(f[()], g[()])}
    cf, cg = zcontent(f), zcontent(g)
    c = igcd(cf, cg)
    f = {e: v // cf for e, v in f.items()}
    g = {e: v // cg for e, v in g.items()}
    fn, gn = _norm(f), _norm(g)
    b = 2 * min(fn, gn) + 29
    xi = max(min(b, 99 * isqrt(b)),
             2 * min(fn // abs(lead(f)[1]), gn // abs(lead(g)[1])) + 2)
    for _ in range(6):
        ff = eval_last(f, xi)
        gg = eval_last(g, xi)
        if ff and gg:
            h = heugcd(ff, gg, n - 1, _depth + 1)
            if h is not None:
                cand = zprimitive(_interpolate(h, xi))
                if cand and zdivides(cand, f) and zdivides(cand, g):
                    return zscale(cand, c)
                # cofactor route: f(xi)/h interpolates to the cofactor of f
                try:
                    cff = zprimitive(_interpolate(zdivexact(ff, h), xi))
                    if cff:
                        cand = zprimitive(zdivexact(f, cff))
                        if zdivides(cand, g):
                            return zscale(cand, c)
                except InexactDivision:
                    pass
        xi = 73794 * xi * isqrt(isqrt(xi)) // 27011
    return None


def _prem(a: list, b: list, ring_n: int) -> list:
    """Pseudo-remainder of univariate polys whose coefficients live in Z[n vars]."""
    r = [dict(c) for c in a]
    db = len(b) - 1
    lcb = b[-1]
    delta = len(a) - len(b) + 1
    while len(r) - 1 >= db and r:
        k = len(r) - 1 - db
        lcr = r[-1]
        r = [zmul(c, lcb) for c in r]
        for i, bc in enumerate(b):
            r[i + k] = zsub(r[i + k], zmul(lcr, bc))
        delta -= 1
        while r and not r[-1]:
            r.pop()
    if delta > 0:
        mult = zpow(lcb, delta, ring_n)
        r = [zmul(c, mult) for c in r]
    return r


def _univ_content(coeffs: list, n: int) -> ZPoly:
    g: ZPoly = {}
    for c in coeffs:
        if c:
            g = c if not g else zgcd(g, c, n)
            if len(g) == 1 and abs(next(iter(g.values()))) == 1 and not any(next(iter(g))):
                break
    return zprimitive(g) if g else {}


def prs_gcd(f: ZPoly, g: ZPoly, n: int) -> ZPoly:
    """gcd by recursive subresultant PRS in the last variable."""
    if n == 0:
        return {(): igcd(f[()], g[()])}
    a, b = to_univariate(f, n), to_univariate(g, n)
    ca, cb = _univ_content(a, n - 1), _univ_content(b, n - 1)
    cont = zgcd(ca, cb, n - 1)
    a = [zdivexact(c, ca) for c in a]
    b = [zdivexact(c, cb) for c in b]
    if len(a) < len(b):
        a, b = b, a
    if len(b) == 1:
        return from_univariate([cont])
    one = zconst(1, n - 1)
    gg, hh = one, one
    while True:
        delta = len(a) - len(b)
        r = _prem(a, b, n - 1)
        if not r:
            break
        if len(r) == 1:
            b = r
            a = None
            break
        divisor = zmul(gg, zpow(hh, delta, n - 1))
        a, b = b, [zdivexact(c, divisor) for c in r]
        gg = a[-1]
        if delta == 0:
            pass
        elif delta == 1:
            hh = gg
        else:
            hh = zdivexact(zpow(gg, delta, n - 1), zpow(hh, delta - 1, n - 1))
    if a is None:
        # remainder of degree zero: primitive part is a unit
        return from_univariate([cont])
    last = b
    cl = _univ_content(last, n - 1)
    last = [zdivexact(c, cl) for c in last]
    return zprimitive(zmul(from_univariate(last), from_univariate([cont])))


def zgcd(f: ZPoly, g: ZPoly, n: int, method: str = "auto") -> ZPoly:
    """gcd over Z[x_1..x_n]; result primitive with positive grlex-leading coefficient
    except that integer contents are gcd'ed in."""
    if not f:
        return zprimitive(g) if g else {}
    if not g:
        return zprimitive(f)
    if n == 0:
        return {(): igcd(f[()], g[()])}
    if method != "prs":
        h = heugcd(f, g, n)
        if h is not None:
            h = dict(h)
            if lead(h)[1] < 0:
                h = zscale(h, -1)
            return h
        if method == "heu":
            raise RuntimeError("heuristic gcd failed")
    cont = igcd(zcontent(f), zcontent(g))
    return zscale(zprimitive(prs_gcd(f, g, n)), cont)


# --- determinants -----------------------------------------------------------

def bareiss_det(m: list, n: int) -> ZPoly:
    """Fraction-free determinant of a square matrix with ZPoly entries."""
    size = len(m)
    if size == 0:
        return zconst(1, n)
    a = [[dict(x) for x in row] for row in m]
    sign = 1
    prev = zconst(1, n)
    for k in range(size - 1):
        if not a[k][k]:
            for i in range(k + 1, size):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return {}
        pivot = a[k][k]
        for i in range(k + 1, size):
            aik = a[i][k]
            for j in range(k + 1, size):
                num = zsub(zmul(a[i][j], pivot), zmul(aik, a[k][j]))
                a[i][j] = zdivexact(num, prev) if num else {}
            a[i][k] = {}
        prev = pivot
    return zscale(a[-1][-1], sign)
