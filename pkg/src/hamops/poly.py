"""Sparse multivariate polynomial arithmetic over exact rationals.

A polynomial is a dict mapping monomials to nonzero ``Fraction`` coefficients.
A monomial is a tuple of ``(atom_index, exponent)`` pairs sorted by atom index
with strictly positive exponents; the empty tuple is the constant monomial.
Atom indices are assigned by the expression layer (see ``hamops.expr.Ring``).

Everything here is exact; no floats enter at any point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as igcd

Mono = tuple
Poly = dict

ONE_M: Mono = ()


def const_poly(value) -> Poly:
    value = Fraction(value)
    if value == 0:
        return {}
    return {ONE_M: value}


def atom_poly(idx: int, exp: int = 1) -> Poly:
    return {((idx, exp),): Fraction(1)}


def mono_mul(a: Mono, b: Mono) -> Mono:
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        ai, ae = a[i]
        bi, be = b[j]
        if ai == bi:
            out.append((ai, ae + be))
            i += 1
            j += 1
        elif ai < bi:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def mono_degree(m: Mono) -> int:
    return sum(e for _, e in m)


def mono_divides(a: Mono, b: Mono) -> bool:
    """True when monomial ``a`` divides ``b``."""
    db = dict(b)
    for idx, exp in a:
        if db.get(idx, 0) < exp:
            return False
    return True


def mono_div(b: Mono, a: Mono) -> Mono:
    """b / a, assuming divisibility."""
    da = dict(a)
    out = []
    for idx, exp in b:
        rest = exp - da.get(idx, 0)
        if rest:
            out.append((idx, rest))
    return tuple(out)


def mono_gcd(a: Mono, b: Mono) -> Mono:
    da, db = dict(a), dict(b)
    out = []
    for idx in sorted(set(da) & set(db)):
        out.append((idx, min(da[idx], db[idx])))
    return tuple(out)


def mono_vec(m: Mono, width: int) -> tuple:
    vec = [0] * width
    for idx, exp in m:
        vec[idx] = exp
    return tuple(vec)


def grlex_key(m: Mono, width: int) -> tuple:
    return (mono_degree(m), mono_vec(m, width))


def padd(a: Poly, b: Poly) -> Poly:
    if not a:
        return dict(b)
    if not b:
        return dict(a)
    out = dict(a)
    for m, c in b.items():
        s = out.get(m)
        if s is None:
            out[m] = c
        else:
            s = s + c
            if s:
                out[m] = s
            else:
                del out[m]
    return out


def pneg(a: Poly) -> Poly:
    return {m: -c for m, c in a.items()}


def psub(a: Poly, b: Poly) -> Poly:
    return padd(a, pneg(b))


def pscale(a: Poly, k: Fraction) -> Poly:
    if k == 0:
        return {}
    return {m: c * k for m, c in a.items()}


def pmul(a: Poly, b: Poly, guard=None) -> Poly:
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    out: Poly = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = mono_mul(ma, mb)
            s = out.get(m)
            if s is None:
                out[m] = ca * cb
            else:
                s = s + ca * cb
                if s:
                    out[m] = s
                else:
                    del out[m]
    if guard is not None:
        guard(out)
    return out


def ppow(a: Poly, k: int, guard=None) -> Poly:
    if k < 0:
        raise ValueError("negative power at polynomial level")
    result = const_poly(1)
    base = a
    while k:
        if k & 1:
            result = pmul(result, base, guard)
        k >>= 1
        if k:
            base = pmul(base, base, guard)
    return result


def pmax_degree(a: Poly) -> int:
    return max((mono_degree(m) for m in a), default=0)


def leading(a: Poly, width: int):
    m = max(a, key=lambda m: grlex_key(m, width))
    return m, a[m]


def pdiv_exact(a: Poly, b: Poly, width: int):
    """Exact division a / b; returns the quotient or None when not divisible."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if not a:
        return {}
    lm, lc = leading(b, width)
    rem = dict(a)
    quo: Poly = {}
    while rem:
        rm, rc = leading(rem, width)
        dm = dict(rm)
        bm = dict(lm)
        ok = all(dm.get(i, 0) >= e for i, e in bm.items())
        if not ok:
            return None
        qm = mono_div(rm, lm)
        qc = rc / lc
        quo[qm] = qc
        rem = psub(rem, pmul({qm: qc}, b))
    return quo


def _rat_content(a: Poly) -> Fraction:
    """Positive rational c such that a/c has coprime integer coefficients."""
    num = 0
    den = 1
    for c in a.values():
        num = igcd(num, abs(c.numerator))
        den = den * c.denominator // igcd(den, c.denominator)
    if num == 0:
        return Fraction(1)
    return Fraction(num, den)


def pmonomial_content(a: Poly) -> Mono:
    it = iter(a)
    try:
        g = next(it)
    except StopIteration:
        return ONE_M
    for m in it:
        g = mono_gcd(g, m)
        if not g:
            return ONE_M
    return g


GCD_SIZE_LIMIT = 6000


def pgcd(a: Poly, b: Poly, width: int) -> Poly:
    """Polynomial gcd, primitive and with positive grlex-leading coefficient.

    Returns 1 when either input exceeds the size guard; callers only use the
    result for cancellation, so a trivial gcd is always safe.
    """
    if not a:
        return _positive_primitive(b, width)
    if not b:
        return _positive_primitive(a, width)
    if len(a) * len(b) > GCD_SIZE_LIMIT:
        return const_poly(1)
    g = _gcd_rec(a, b, width)
    return _positive_primitive(g, width)


def _positive_primitive(a: Poly, width: int) -> Poly:
    if not a:
        return {}
    c = _rat_content(a)
    _, lc = leading(a, width)
    if lc < 0:
        c = -c
    return pscale(a, 1 / c)


def _main_var(a: Poly, b: Poly):
    top = -1
    for p in (a, b):
        for m in p:
            for idx, _ in m:
                if idx > top:
                    top = idx
    return top


def _to_univar(a: Poly, x: int):
    """View a as a univariate polynomial in atom x with Poly coefficients."""
    coeffs: dict[int, Poly] = {}
    for m, c in a.items():
        dm = dict(m)
        d = dm.pop(x, 0)
        rest = tuple(sorted(dm.items()))
        coeffs.setdefault(d, {})[rest] = c
    return coeffs


def _from_univar(coeffs, x: int) -> Poly:
    out: Poly = {}
    for d, poly in coeffs.items():
        for m, c in poly.items():
            if d:
                mm = mono_mul(m, ((x, d),))
            else:
                mm = m
            out[mm] = out.get(mm, Fraction(0)) + c
    return {m: c for m, c in out.items() if c}


def _udeg(coeffs) -> int:
    return max(coeffs, default=0)


def _umul(ca, cb):
    out: dict[int, Poly] = {}
    for da, pa in ca.items():
        for db, pb in cb.items():
            d = da + db
            prod = pmul(pa, pb)
            out[d] = padd(out.get(d, {}), prod)
    return {d: p for d, p in out.items() if p}


def _uscale(ca, poly):
    out = {}
    for d, p in ca.items():
        prod = pmul(p, poly)
        if prod:
            out[d] = prod
    return out


def _usub(ca, cb):
    out = dict(ca)
    for d, p in cb.items():
        out[d] = psub(out.get(d, {}), p)
    return {d: p for d, p in out.items() if p}


def _gcd_list(polys, width):
    g: Poly = {}
    for p in polys:
        g = _gcd_rec(g, p, width) if g else dict(p)
        if g == const_poly(1):
            return g
    return g


def _gcd_rec(a: Poly, b: Poly, width: int) -> Poly:
    if not a:
        return dict(b)
    if not b:
        return dict(a)
    x = _main_var(a, b)
    if x < 0:
        return const_poly(1)
    ua, ub = _to_univar(a, x), _to_univar(b, x)
    if _udeg(ua) == 0 and _udeg(ub) == 0:
        # x does not actually occur with positive degree anywhere
        return _gcd_rec(ua.get(0, {}), ub.get(0, {}), width)
    cont_a = _gcd_list(ua.values(), width)
    cont_b = _gcd_list(ub.values(), width)
    cont = _gcd_rec(cont_a, cont_b, width)
    pa = {d: pdiv_exact(p, cont_a, width) for d, p in ua.items()}
    pb = {d: pdiv_exact(p, cont_b, width) for d, p in ub.items()}
    # primitive PRS
    if _udeg(pa) < _udeg(pb):
        pa, pb = pb, pa
    while True:
        if not pb:
            result = pa
            break
        rem = _uprem(pa, pb, width)
        if not rem:
            result = pb
            break
        c = _gcd_list(rem.values(), width)
        rem = {d: pdiv_exact(p, c, width) for d, p in rem.items()}
        pa, pb = pb, rem
    prim = _from_univar(result, x)
    return pmul(cont, _positive_primitive(prim, width))


def _uprem(ua, ub, width):
    """Pseudo-remainder of primitive univariate views."""
    da, db = _udeg(ua), _udeg(ub)
    lb = ub[db]
    rem = {d: dict(p) for d, p in ua.items()}
    while rem and _udeg(rem) >= db:
        dr = _udeg(rem)
        lr = rem[dr]
        # lb * rem - lr * x^(dr-db) * ub
        rem = _uscale(rem, lb)
        shift = {d + dr - db: pmul(p, lr) for d, p in ub.items()}
        rem = _usub(rem, shift)
    return rem
