"""Compiled inner loops.

Field elements are discrete logarithms to a primitive element (int64 in
``[0, q-1)``); zero is encoded as ``-1``.  Multiplication adds logs, addition
goes through the Zech table ``zech[n] = log(1 + g^n)``.  Polynomial
coefficients arrive already converted to logs.
"""

from __future__ import annotations

import numpy as np
from numba import njit

ZERO = -1
DIRECT_THRESHOLD = 1000  # below this q, fibers are summed directly


@njit(cache=True)
def power_table(g, modulus, p, q):
    k = g.shape[0]
    out = np.empty(q - 1, dtype=np.int64)
    cur = np.zeros(k, dtype=np.int64)
    cur[0] = 1
    prod = np.zeros(2 * k, dtype=np.int64)
    for i in range(q - 1):
        idx = 0
        for j in range(k - 1, -1, -1):
            idx = idx * p + cur[j]
        out[i] = idx
        for j in range(2 * k):
            prod[j] = 0
        for a in range(k):
            if cur[a] != 0:
                for b in range(k):
                    prod[a + b] += cur[a] * g[b]
        for d in range(2 * k - 2, k - 1, -1):
            c = prod[d] % p
            if c != 0:
                for j in range(k + 1):
                    prod[d - k + j] -= c * modulus[j]
        for j in range(k):
            cur[j] = prod[j] % p
    return out


# -- scalar field operations in log form --

@njit(inline="always")
def fmul(a, b, qm1):
    if a < 0 or b < 0:
        return -1
    s = a + b
    if s >= qm1:
        s -= qm1
    return s


@njit(inline="always")
def fadd(a, b, zech, qm1):
    if a < 0:
        return b
    if b < 0:
        return a
    n = b - a
    if n < 0:
        n += qm1
    z = zech[n]
    if z < 0:
        return -1
    s = a + z
    if s >= qm1:
        s -= qm1
    return s


@njit(inline="always")
def fneg(a, qm1):
    if a < 0:
        return -1
    s = a + (qm1 >> 1)
    if s >= qm1:
        s -= qm1
    return s


@njit(inline="always")
def fsub(a, b, zech, qm1):
    return fadd(a, fneg(b, qm1), zech, qm1)


@njit(inline="always")
def finv(a, qm1):
    if a == 0:
        return 0
    return qm1 - a


@njit(inline="always")
def fdiv(a, b, qm1):
    return fmul(a, finv(b, qm1), qm1)


@njit(inline="always")
def fpow(a, e, qm1):
    if e == 0:
        return 0
    if a < 0:
        return -1
    return (a * e) % qm1


@njit(inline="always")
def fchi(a):
    if a < 0:
        return 0
    return 1 - 2 * (a & 1)


@njit(inline="always")
def horner(c, deg, y, zech, qm1):
    acc = c[deg]
    for j in range(deg - 1, -1, -1):
        acc = fadd(fmul(acc, y, qm1), c[j], zech, qm1)
    return acc


@njit(inline="always")
def fiber_count(qv, kv, fv, log4, q, zech, qm1):
    """#{w in F_q : Q w^2 + K w + F = 0}; q when all three vanish."""
    if qv >= 0:
        d = fsub(fmul(kv, kv, qm1), fmul(log4, fmul(qv, fv, qm1), qm1), zech, qm1)
        return 1 + fchi(d)
    if kv >= 0:
        return 1
    if fv >= 0:
        return 0
    return q


@njit(inline="always")
def orbit_info(e, p, k, qm1):
    """(is_canonical, orbit size) of g^e under x -> x^p."""
    if e < 0:
        return True, 1
    size = k
    c = e
    for j in range(1, k):
        c = (c * p) % qm1
        if c < e:
            return False, 0
        if c == e and size == k:
            size = j
    return True, size


@njit(cache=True)
def _slice_coeffs(c2d, deg, xl, out, zech, qm1):
    """out[j] = sum_i c2d[i, j] x^i (coefficients of y^j at z = 1)."""
    for j in range(deg + 1):
        acc = -1
        for i in range(deg - j, -1, -1):
            acc = fadd(fmul(acc, xl, qm1), c2d[i, j], zech, qm1)
        out[j] = acc


@njit(cache=True)
def _line_at_infinity(qc, kc, fc, log4, q, zech, qm1):
    """Sum of fiber counts over the line z = 0: points (x:1:0) and (1:0:0)."""
    total = 0
    for xl in range(-1, qm1):
        # monomials x^i y^(deg-i)
        qv = -1
        for i in range(2, -1, -1):
            qv = fadd(fmul(qv, xl, qm1), qc[i, 2 - i], zech, qm1)
        kv = -1
        for i in range(3, -1, -1):
            kv = fadd(fmul(kv, xl, qm1), kc[i, 3 - i], zech, qm1)
        fv = -1
        for i in range(4, -1, -1):
            fv = fadd(fmul(fv, xl, qm1), fc[i, 4 - i], zech, qm1)
        total += fiber_count(qv, kv, fv, log4, q, zech, qm1)
    total += fiber_count(qc[2, 0], kc[3, 0], fc[4, 0], log4, q, zech, qm1)
    return total


@njit(cache=True)
def degree_two_sum(qc, kc, fc, p, k, log4, zech, use_orbits):
    """Sum over P^2(F_q) of the fiber counts of Q w^2 + K w + F.

    qc/kc/fc hold logs of the coefficient of x^i y^j z^(deg-i-j) at [i, j].
    With use_orbits, only x-coordinates that are least in their Frobenius
    orbit are visited in the chart z = 1 and weighted by the orbit size.
    """
    q = p**k
    qm1 = q - 1
    qy = np.empty(3, dtype=np.int64)
    ky = np.empty(4, dtype=np.int64)
    fy = np.empty(5, dtype=np.int64)
    total = 0
    for xl in range(-1, qm1):
        weight = 1
        if use_orbits:
            canon, weight = orbit_info(xl, p, k, qm1)
            if not canon:
                continue
        _slice_coeffs(qc, 2, xl, qy, zech, qm1)
        _slice_coeffs(kc, 3, xl, ky, zech, qm1)
        _slice_coeffs(fc, 4, xl, fy, zech, qm1)
        s = 0
        for yl in range(-1, qm1):
            qv = horner(qy, 2, yl, zech, qm1)
            kv = horner(ky, 3, yl, zech, qm1)
            fv = horner(fy, 4, yl, zech, qm1)
            s += fiber_count(qv, kv, fv, log4, q, zech, qm1)
        total += weight * s
    return total + _line_at_infinity(qc, kc, fc, log4, q, zech, qm1)


@njit(cache=True)
def projective_points_count(exps, coeffs, p, k, zech):
    """Brute-force #{P in P^3(F_q) : G(P) = 0}; G given by monomial exponents."""
    q = p**k
    qm1 = q - 1
    n = exps.shape[0]
    count = 0
    v = np.empty(4, dtype=np.int64)
    for lead in range(4):
        # coordinates before `lead` are 0, coordinate `lead` is 1
        free = 3 - lead
        total = 1
        for _ in range(free):
            total *= q
        for idx in range(total):
            for j in range(lead):
                v[j] = -1
            v[lead] = 0
            r = idx
            for j in range(lead + 1, 4):
                v[j] = (r % q) - 1  # -1 .. q-2 as logs
                r //= q
            acc = -1
            for m in range(n):
                term = coeffs[m]
                for j in range(4):
                    term = fmul(term, fpow(v[j], exps[m, j], qm1), qm1)
                acc = fadd(acc, term, zech, qm1)
            if acc < 0:
                count += 1
    return count


@njit(cache=True)
def rational_singular_points(exps, coeffs, p):
    """#{P in P^3(F_p) : all partials of G vanish}; plain residues, not logs."""
    n = exps.shape[0]
    count = 0
    v = np.empty(4, dtype=np.int64)
    pw = np.empty((4, 5), dtype=np.int64)
    for lead in range(4):
        total = 1
        for _ in range(3 - lead):
            total *= p
        for idx in range(total):
            for j in range(lead):
                v[j] = 0
            v[lead] = 1
            r = idx
            for j in range(lead + 1, 4):
                v[j] = r % p
                r //= p
            for j in range(4):
                pw[j, 0] = 1
                for e in range(1, 5):
                    pw[j, e] = pw[j, e - 1] * v[j] % p
            singular = True
            for d in range(4):
                acc = 0
                for m in range(n):
                    e = exps[m, d]
                    if e == 0:
                        continue
                    term = coeffs[m] * e % p
                    for j in range(4):
                        ej = exps[m, j] - (1 if j == d else 0)
                        term = term * pw[j, ej] % p
                    acc = (acc + term) % p
                if acc != 0:
                    singular = False
                    break
            if singular:
                count += 1
    return count


# -- univariate polynomials of degree <= 4 in log form (low degree first) --

@njit(cache=True)
def _pdeg(a):
    d = a.shape[0] - 1
    while d >= 0 and a[d] < 0:
        d -= 1
    return d


@njit(cache=True)
def _pmod(a, m, dm, zech, qm1):
    """Reduce a in place modulo m (deg dm, nonzero leading)."""
    inv = finv(m[dm], qm1)
    da = _pdeg(a)
    while da >= dm:
        c = fmul(a[da], inv, qm1)
        shift = da - dm
        for i in range(dm + 1):
            a[shift + i] = fsub(a[shift + i], fmul(c, m[i], qm1), zech, qm1)
        a[da] = -1
        da = _pdeg(a)


@njit(cache=True)
def _pmulmod(a, b, m, dm, zech, qm1, buf):
    for i in range(buf.shape[0]):
        buf[i] = -1
    for i in range(dm):
        if a[i] >= 0:
            for j in range(dm):
                buf[i + j] = fadd(buf[i + j], fmul(a[i], b[j], qm1), zech, qm1)
    _pmod(buf, m, dm, zech, qm1)
    for i in range(dm):
        a[i] = buf[i]


@njit(cache=True)
def distinct_root_count(f, q, zech):
    """deg gcd(f, X^q - X) for f of degree <= 4 (logs, low degree first)."""
    qm1 = q - 1
    d = _pdeg(f)
    if d < 0:
        return q + 1
    if d == 0:
        return 0
    if d == 1:
        return 1
    m = f.copy()
    res = np.full(8, -1, dtype=np.int64)
    base = np.full(8, -1, dtype=np.int64)
    buf = np.full(16, -1, dtype=np.int64)
    res[0] = 0
    base[1] = 0
    e = q
    while e > 0:
        if e & 1:
            _pmulmod(res, base, m, d, zech, qm1, buf)
        _pmulmod(base, base, m, d, zech, qm1, buf)
        e >>= 1
    # h = X^q - X mod f
    h = np.full(8, -1, dtype=np.int64)
    for i in range(d):
        h[i] = res[i]
    h[1] = fsub(h[1], 0, zech, qm1)
    a = np.full(8, -1, dtype=np.int64)
    b = np.full(8, -1, dtype=np.int64)
    for i in range(d + 1):
        a[i] = m[i]
    for i in range(8):
        b[i] = h[i]
    db = _pdeg(b)
    while db >= 0:
        _pmod(a, b, db, zech, qm1)
        tmp = a.copy()
        a[:] = b
        b[:] = tmp
        db = _pdeg(b)
    return _pdeg(a)


@njit(cache=True)
def direct_count(polar_exps, polar_coeffs, polar_deg, origin_axis, p, k, zech):
    """#V(F_q) by intersecting V with all lines through an exterior F_p-point O.

    The lines are indexed by their intersection d with the coordinate
    hyperplane {v[origin_axis] = 0}.  G(O + t d) = sum_r t^r G_r(d), where the
    polar forms G_r are given monomial-wise (exponents, coefficient logs, r).
    """
    q = p**k
    qm1 = q - 1
    n = polar_exps.shape[0]
    axes = np.empty(3, dtype=np.int64)
    j = 0
    for a in range(4):
        if a != origin_axis:
            axes[j] = a
            j += 1
    v = np.empty(4, dtype=np.int64)
    g = np.empty(5, dtype=np.int64)
    count = 0
    for lead in range(3):
        free = 2 - lead
        total = 1
        for _ in range(free):
            total *= q
        for idx in range(total):
            v[origin_axis] = -1
            for jj in range(lead):
                v[axes[jj]] = -1
            v[axes[lead]] = 0
            r = idx
            for jj in range(lead + 1, 3):
                v[axes[jj]] = (r % q) - 1
                r //= q
            for i in range(5):
                g[i] = -1
            for mm in range(n):
                term = polar_coeffs[mm]
                for jj in range(4):
                    term = fmul(term, fpow(v[jj], polar_exps[mm, jj], qm1), qm1)
                g[polar_deg[mm]] = fadd(g[polar_deg[mm]], term, zech, qm1)
            count += distinct_root_count(g, q, zech)
            if g[4] < 0:
                count += 1  # the point d itself lies on V
    return count


# -- elliptic curves y^2 = x^3 + A x + B over F_q, affine, log form --

@njit(inline="always")
def ec_add(x1, y1, i1, x2, y2, i2, A, zech, qm1, l2, l3):
    if i1:
        return x2, y2, i2
    if i2:
        return x1, y1, i1
    if x1 == x2:
        if y1 == fneg(y2, qm1):
            return 0, 0, True
        return ec_dbl(x1, y1, A, zech, qm1, l2, l3)
    lam = fdiv(fsub(y2, y1, zech, qm1), fsub(x2, x1, zech, qm1), qm1)
    x3 = fsub(fsub(fmul(lam, lam, qm1), x1, zech, qm1), x2, zech, qm1)
    y3 = fsub(fmul(lam, fsub(x1, x3, zech, qm1), qm1), y1, zech, qm1)
    return x3, y3, False


@njit(inline="always")
def ec_dbl(x, y, A, zech, qm1, l2, l3):
    if y < 0:
        return 0, 0, True
    num = fadd(fmul(l3, fmul(x, x, qm1), qm1), A, zech, qm1)
    lam = fdiv(num, fmul(l2, y, qm1), qm1)
    x3 = fsub(fmul(lam, lam, qm1), fmul(l2, x, qm1), zech, qm1)
    y3 = fsub(fmul(lam, fsub(x, x3, zech, qm1), qm1), y, zech, qm1)
    return x3, y3, False


@njit(cache=True)
def ec_mul(n, x, y, inf, A, zech, qm1, l2, l3):
    rx, ry, ri = 0, 0, True
    bx, by, bi = x, y, inf
    while n > 0:
        if n & 1:
            rx, ry, ri = ec_add(rx, ry, ri, bx, by, bi, A, zech, qm1, l2, l3)
        bx, by, bi = ec_dbl(bx, by, A, zech, qm1, l2, l3) if not bi else (0, 0, True)
        n >>= 1
    return rx, ry, ri


@njit(cache=True)
def _isqrt(n):
    r = int(np.sqrt(float(n)))
    while r * r > n:
        r -= 1
    while (r + 1) * (r + 1) <= n:
        r += 1
    return r


@njit(cache=True)
def _point_order(x, y, A, B, lo, hi, zech, qm1, l2, l3):
    """Order of the point (x, y); 0 if the search fails."""
    width = hi - lo
    m = _isqrt(width) // 2 + 1
    bx = np.empty(m + 1, dtype=np.int64)
    by = np.empty(m + 1, dtype=np.int64)
    cx, cy, ci = 0, 0, True
    for j in range(1, m + 1):
        cx, cy, ci = ec_add(cx, cy, ci, x, y, False, A, zech, qm1, l2, l3)
        if ci:
            return _refine_order(j, x, y, A, zech, qm1, l2, l3)
        bx[j] = cx
        by[j] = cy
    step = 2 * m + 1
    sx, sy, si = ec_mul(step, x, y, False, A, zech, qm1, l2, l3)
    c = lo + m
    gx, gy, gi = ec_mul(c, x, y, False, A, zech, qm1, l2, l3)
    found = 0
    while c - m <= hi:
        if gi:
            found = c
            break
        for j in range(1, m + 1):
            if bx[j] == gx:
                cand = c - j if by[j] == gy else c + j
                if lo <= cand <= hi:
                    found = cand
                break
        if found:
            break
        gx, gy, gi = ec_add(gx, gy, gi, sx, sy, si, A, zech, qm1, l2, l3)
        c += step
    if found == 0:
        return 0
    return _refine_order(found, x, y, A, zech, qm1, l2, l3)


@njit(cache=True)
def _refine_order(n, x, y, A, zech, qm1, l2, l3):
    rest = n
    ell = 2
    while ell * ell <= rest:
        if rest % ell == 0:
            while rest % ell == 0:
                rest //= ell
            while n % ell == 0:
                _, _, inf = ec_mul(n // ell, x, y, False, A, zech, qm1, l2, l3)
                if not inf:
                    break
                n //= ell
        ell += 1
    if rest > 1:
        _, _, inf = ec_mul(n // rest, x, y, False, A, zech, qm1, l2, l3)
        if inf:
            n //= rest
    return n


@njit(cache=True)
def _random_point(A, B, zech, qm1, l2, l3):
    while True:
        x = np.random.randint(-1, qm1)
        rhs = fadd(fadd(fmul(fmul(x, x, qm1), x, qm1), fmul(A, x, qm1), zech, qm1), B, zech, qm1)
        if rhs < 0:
            return x, -1
        if rhs & 1 == 0:
            y = rhs >> 1
            if np.random.randint(0, 2) == 1:
                y = fneg(y, qm1)
            return x, y


@njit(cache=True)
def _order_lcm(A, B, lo, hi, zech, qm1, l2, l3, tries):
    L = 1
    for _ in range(tries):
        x, y = _random_point(A, B, zech, qm1, l2, l3)
        n = _point_order(x, y, A, B, lo, hi, zech, qm1, l2, l3)
        if n == 0:
            return 0
        a, b = L, n
        while b:
            a, b = b, a % b
        L = L // a * n
        first = ((lo + L - 1) // L) * L
        if first + L > hi:
            return L
    return L


@njit(cache=True)
def ec_group_order(A, B, q, zech, tries):
    """#E(F_q) for E: y^2 = x^3 + A x + B (logs), or 0 when not determined."""
    qm1 = q - 1
    l2 = fadd(0, 0, zech, qm1)
    l3 = fadd(l2, 0, zech, qm1)
    r = _isqrt(4 * q)
    lo = q + 1 - r
    hi = q + 1 + r
    L = _order_lcm(A, B, lo, hi, zech, qm1, l2, l3, tries)
    if L == 0:
        return 0
    first = ((lo + L - 1) // L) * L
    if first <= hi and first + L > hi:
        return first
    # quadratic twist by the nonsquare g: #E + #E' = 2q + 2
    At = fmul(A, 2, qm1)
    Bt = fmul(B, 3, qm1)
    Lt = _order_lcm(At, Bt, lo, hi, zech, qm1, l2, l3, tries)
    if Lt == 0:
        return 0
    found = 0
    n = first
    while n <= hi:
        if (2 * q + 2 - n) % Lt == 0:
            if found:
                return 0
            found = n
        n += L
    return found


@njit(cache=True)
def _fiber_direct(qy, ky, fy, log4, q, zech, qm1):
    s = 0
    for yl in range(-1, qm1):
        qv = horner(qy, 2, yl, zech, qm1)
        kv = horner(ky, 3, yl, zech, qm1)
        fv = horner(fy, 4, yl, zech, qm1)
        s += fiber_count(qv, kv, fv, log4, q, zech, qm1)
    return s


@njit(cache=True)
def _quadratic_roots(c, zech, qm1, out):
    """Roots in F_q of c0 + c1 y + c2 y^2 (not identically zero); returns count."""
    if c[2] < 0:
        if c[1] < 0:
            return 0
        out[0] = fneg(fdiv(c[0], c[1], qm1), qm1)
        return 1
    l2 = fadd(0, 0, zech, qm1)
    l4 = fmul(l2, l2, qm1)
    disc = fsub(fmul(c[1], c[1], qm1), fmul(l4, fmul(c[2], c[0], qm1), qm1), zech, qm1)
    two_a = fmul(l2, c[2], qm1)
    mb = fneg(c[1], qm1)
    if disc < 0:
        out[0] = fdiv(mb, two_a, qm1)
        return 1
    if disc & 1:
        return 0
    r = disc >> 1
    out[0] = fdiv(fadd(mb, r, zech, qm1), two_a, qm1)
    out[1] = fdiv(fsub(mb, r, zech, qm1), two_a, qm1)
    return 2


@njit(cache=True)
def fibration_sum(qc, kc, fc, p, k, log4, zech, tries, seed, stats):
    """Sum over P^2(F_q) of fiber counts, organised by the pencil of lines
    x = lam z through the base point (0:1:0).

    On each line the sum of 1 + chi(K^2 - 4QF) is a character sum of a binary
    quartic; when it is squarefree it equals -a(E) - chi(leading) with E the
    Jacobian y^2 = x^3 - 27 I x - 27 J, and #E is found by baby-step
    giant-step.  The few points with Q = 0 are corrected individually.
    stats[0] counts elliptic fibers, stats[1] direct ones.
    """
    np.random.seed(seed)
    q = p**k
    qm1 = q - 1
    qy = np.empty(3, dtype=np.int64)
    ky = np.empty(4, dtype=np.int64)
    fy = np.empty(5, dtype=np.int64)
    dy = np.empty(7, dtype=np.int64)
    roots = np.empty(2, dtype=np.int64)
    c = np.empty(10, dtype=np.int64)  # c[n] = log(n)
    c[0] = -1
    c[1] = 0
    for i in range(2, 10):
        c[i] = fadd(c[i - 1], 0, zech, qm1)
    l12 = fmul(c[3], c[4], qm1)
    l72 = fmul(c[8], c[9], qm1)
    l27 = fmul(c[3], c[9], qm1)
    total = 0
    for lam in range(-1, qm1):
        canon, weight = orbit_info(lam, p, k, qm1)
        if not canon:
            continue
        _slice_coeffs(qc, 2, lam, qy, zech, qm1)
        _slice_coeffs(kc, 3, lam, ky, zech, qm1)
        _slice_coeffs(fc, 4, lam, fy, zech, qm1)
        s = 0
        elliptic = False
        if q >= DIRECT_THRESHOLD and (qy[0] >= 0 or qy[1] >= 0 or qy[2] >= 0):
            for i in range(7):
                dy[i] = -1
            for i in range(4):
                for j in range(4):
                    dy[i + j] = fadd(dy[i + j], fmul(ky[i], ky[j], qm1), zech, qm1)
            for i in range(3):
                for j in range(5):
                    dy[i + j] = fsub(dy[i + j], fmul(log4, fmul(qy[i], fy[j], qm1), qm1), zech, qm1)
            if dy[5] < 0 and dy[6] < 0 and (dy[4] >= 0 or dy[3] >= 0):
                a, b, cc, d, e = dy[4], dy[3], dy[2], dy[1], dy[0]
                # I = 12ae - 3bd + c^2
                I = fmul(l12, fmul(a, e, qm1), qm1)
                I = fsub(I, fmul(c[3], fmul(b, d, qm1), qm1), zech, qm1)
                I = fadd(I, fmul(cc, cc, qm1), zech, qm1)
                # J = 72ace + 9bcd - 27ad^2 - 27eb^2 - 2c^3
                J = fmul(l72, fmul(a, fmul(cc, e, qm1), qm1), qm1)
                J = fadd(J, fmul(c[9], fmul(b, fmul(cc, d, qm1), qm1), qm1), zech, qm1)
                J = fsub(J, fmul(l27, fmul(a, fmul(d, d, qm1), qm1), qm1), zech, qm1)
                J = fsub(J, fmul(l27, fmul(e, fmul(b, b, qm1), qm1), qm1), zech, qm1)
                J = fsub(J, fmul(c[2], fmul(cc, fmul(cc, cc, qm1), qm1), qm1), zech, qm1)
                disc = fsub(fmul(c[4], fmul(I, fmul(I, I, qm1), qm1), qm1), fmul(J, J, qm1), zech, qm1)
                if disc >= 0:
                    A = fneg(fmul(l27, I, qm1), qm1)
                    B = fneg(fmul(l27, J, qm1), qm1)
                    n = ec_group_order(A, B, q, zech, tries)
                    if n > 0:
                        elliptic = True
                        s = q + (n - q - 1) - fchi(a)
                        nr = _quadratic_roots(qy, zech, qm1, roots)
                        for t in range(nr):
                            y0 = roots[t]
                            qv = horner(qy, 2, y0, zech, qm1)
                            kv = horner(ky, 3, y0, zech, qm1)
                            fv = horner(fy, 4, y0, zech, qm1)
                            dv = horner(dy, 4, y0, zech, qm1)
                            s += fiber_count(qv, kv, fv, log4, q, zech, qm1) - 1 - fchi(dv)
        if elliptic:
            stats[0] += 1
        else:
            stats[1] += 1
            s = _fiber_direct(qy, ky, fy, log4, q, zech, qm1)
        total += weight * s
    return total + _line_at_infinity(qc, kc, fc, log4, q, zech, qm1)
