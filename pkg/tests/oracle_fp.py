"""Independent binary32 reference, integer algorithms only.

Deliberately shares no code with slotsim.softfloat: values are unpacked
to (sign, magnitude, exponent) triples and every operation is computed
with exact integer arithmetic plus a guard/sticky rounding step, the way
a hardware unit or classic soft-float library does it.  Agreement
between this module and the simulator is therefore meaningful.

Also the reference model for the register-only soft-float routines the
kernel builder emits for M/F-less targets.
"""

CANON_NAN = 0x7FC00000
MAX_FINITE = 0x7F7FFFFF
PLUS_INF = 0x7F800000

RNE, RTZ, RDN, RUP, RMM = 0, 1, 2, 3, 4


def _unpack(x):
    """-> (sign, class, mag, lsb_exp); value = mag * 2^lsb_exp for finite."""
    s = x >> 31
    e = (x >> 23) & 0xFF
    f = x & 0x7FFFFF
    if e == 255:
        return s, ("inf" if f == 0 else "nan"), 0, 0
    if e == 0:
        if f == 0:
            return s, "zero", 0, 0
        return s, "fin", f, -149
    return s, "fin", f | 0x800000, e - 150


def _round_q(q, rem, half, s, rm):
    if rem == 0:
        return q
    if rm == RNE:
        if rem > half or (rem == half and q & 1):
            q += 1
    elif rm == RMM:
        if rem >= half:
            q += 1
    elif rm == RDN:
        if s:
            q += 1
    elif rm == RUP:
        if not s:
            q += 1
    return q


def _overflow(s, rm):
    if rm == RTZ:
        bits = MAX_FINITE
    elif rm == RDN:
        bits = PLUS_INF if s else MAX_FINITE
    elif rm == RUP:
        bits = MAX_FINITE if s else PLUS_INF
    else:
        bits = PLUS_INF
    return (s << 31) | bits


def _pack(s, mag, e, rm=RNE):
    """Round mag * 2^e (exact) to binary32 with sign s."""
    if mag == 0:
        return s << 31
    d = mag.bit_length() - 24
    if e + d < -149:
        d = -149 - e
    if d > 0:
        half = 1 << (d - 1)
        q = _round_q(mag >> d, mag & ((1 << d) - 1), half, s, rm)
    else:
        q = mag << -d
    e += d
    if q == 1 << 24:
        q >>= 1
        e += 1
    if q == 0:
        return s << 31
    if q < 1 << 23:
        return (s << 31) | q   # subnormal, e is pinned at -149
    biased = e + 150
    if biased >= 255:
        return _overflow(s, rm)
    return (s << 31) | (biased << 23) | (q & 0x7FFFFF)


def _with_sticky(q, r):
    """Fold a nonzero remainder into one sticky bit below the lsb."""
    return (q << 1) | (1 if r else 0)


def _term(s, m, e, base):
    """m * 2^(e-base) as a signed int; zero mags carry no exponent."""
    if m == 0:
        return 0
    t = m << (e - base)
    return -t if s else t


def fadd(a, b, rm=RNE):
    sa, ca, ma, ea = _unpack(a)
    sb, cb, mb, eb = _unpack(b)
    if ca == "nan" or cb == "nan":
        return CANON_NAN
    if ca == "inf":
        if cb == "inf" and sa != sb:
            return CANON_NAN
        return a
    if cb == "inf":
        return b
    e = min(ea, eb) if (ma and mb) else (ea if ma else eb)
    total = _term(sa, ma, ea, e) + _term(sb, mb, eb, e)
    if total == 0:
        # exact zero sum: same signs keep the sign, opposite signs give
        # +0 in every mode except round-down
        if sa == sb:
            return sa << 31
        return 0x80000000 if rm == RDN else 0
    s = 1 if total < 0 else 0
    return _pack(s, abs(total), e, rm)


def fsub(a, b, rm=RNE):
    return fadd(a, b ^ 0x80000000, rm)


def fmul(a, b, rm=RNE):
    sa, ca, ma, ea = _unpack(a)
    sb, cb, mb, eb = _unpack(b)
    s = sa ^ sb
    if ca == "nan" or cb == "nan":
        return CANON_NAN
    if ca == "inf" or cb == "inf":
        if ca == "zero" or cb == "zero":
            return CANON_NAN
        return (s << 31) | PLUS_INF
    if ca == "zero" or cb == "zero":
        return s << 31
    return _pack(s, ma * mb, ea + eb, rm)


def fdiv(a, b, rm=RNE):
    sa, ca, ma, ea = _unpack(a)
    sb, cb, mb, eb = _unpack(b)
    s = sa ^ sb
    if ca == "nan" or cb == "nan":
        return CANON_NAN
    if ca == "inf":
        if cb == "inf":
            return CANON_NAN
        return (s << 31) | PLUS_INF
    if cb == "inf":
        return s << 31
    if cb == "zero":
        if ca == "zero":
            return CANON_NAN
        return (s << 31) | PLUS_INF
    if ca == "zero":
        return s << 31
    # long division with enough quotient bits that only sticky is lost
    k = mb.bit_length() + 26
    q, r = divmod(ma << k, mb)
    return _pack(s, _with_sticky(q, r), ea - eb - k - 1, rm)


def fsqrt(a, rm=RNE):
    import math
    sa, ca, ma, ea = _unpack(a)
    if ca == "nan":
        return CANON_NAN
    if ca == "zero":
        return a          # sqrt(-0) = -0
    if sa:
        return CANON_NAN
    if ca == "inf":
        return a
    if ea & 1:
        ma <<= 1
        ea -= 1
    # sqrt(ma * 2^ea) = isqrt(ma << 2k) * 2^(ea/2 - k), plus sticky
    k = 28
    arg = ma << (2 * k)
    root = math.isqrt(arg)
    return _pack(0, _with_sticky(root, arg - root * root),
                 ea // 2 - k - 1, rm)


def fma(a, b, c, rm=RNE):
    sa, ca, ma, ea = _unpack(a)
    sb, cb, mb, eb = _unpack(b)
    sc, cc, mc, ec = _unpack(c)
    if "nan" in (ca, cb, cc):
        return CANON_NAN
    sp = sa ^ sb
    if ca == "inf" or cb == "inf":
        if ca == "zero" or cb == "zero":
            return CANON_NAN
        if cc == "inf" and sc != sp:
            return CANON_NAN
        return (sp << 31) | PLUS_INF
    if cc == "inf":
        return c
    p = ma * mb
    ep = ea + eb
    e = min(ep, ec) if (p and mc) else (ep if p else ec)
    total = _term(sp, p, ep, e) + _term(sc, mc, ec, e)
    if total == 0:
        if sp == sc:
            return sp << 31
        return 0x80000000 if rm == RDN else 0
    s = 1 if total < 0 else 0
    return _pack(s, abs(total), e, rm)


def _is_nan(x):
    return (x & 0x7FFFFFFF) > PLUS_INF


def _key(x):
    """Order-preserving integer key for non-NaN floats."""
    return (x ^ 0xFFFFFFFF) if (x >> 31) else (x | 0x80000000)


def feq(a, b):
    if _is_nan(a) or _is_nan(b):
        return 0
    if (a | b) & 0x7FFFFFFF == 0:
        return 1
    return 1 if a == b else 0


def flt(a, b):
    if _is_nan(a) or _is_nan(b):
        return 0
    if (a | b) & 0x7FFFFFFF == 0:
        return 0           # -0 < +0 is false
    return 1 if _key(a) < _key(b) else 0


def fle(a, b):
    if _is_nan(a) or _is_nan(b):
        return 0
    if (a | b) & 0x7FFFFFFF == 0:
        return 1
    return 1 if _key(a) <= _key(b) else 0


def fmin(a, b):
    if _is_nan(a):
        return CANON_NAN if _is_nan(b) else b
    if _is_nan(b):
        return a
    if (a | b) & 0x7FFFFFFF == 0:
        return a | b          # -0 wins for min
    return a if _key(a) <= _key(b) else b


def fmax(a, b):
    if _is_nan(a):
        return CANON_NAN if _is_nan(b) else b
    if _is_nan(b):
        return a
    if (a | b) & 0x7FFFFFFF == 0:
        return a & b          # +0 wins for max
    return a if _key(a) >= _key(b) else b


def fsgnj(a, b):
    return (a & 0x7FFFFFFF) | (b & 0x80000000)


def fsgnjn(a, b):
    return (a & 0x7FFFFFFF) | (~b & 0x80000000)


def fsgnjx(a, b):
    return a ^ (b & 0x80000000)


def fcvt_w_s(a, rm=RTZ):
    s, c, m, e = _unpack(a)
    if c == "nan":
        return 0x7FFFFFFF
    if c == "inf":
        return -(1 << 31) if s else 0x7FFFFFFF
    if c == "zero":
        return 0
    if e >= 0:
        mag = m << e
    else:
        d = -e
        if d >= m.bit_length() + 32:
            q, rem, half = 0, 1, 2    # far below 1: only sticky matters
        else:
            q, rem, half = m >> d, m & ((1 << d) - 1), 1 << (d - 1)
        mag = _round_q(q, rem, half, s, rm)
    v = -mag if s else mag
    if v > 0x7FFFFFFF:
        return 0x7FFFFFFF
    if v < -(1 << 31):
        return -(1 << 31)
    return v


def fcvt_wu_s(a, rm=RTZ):
    s, c, m, e = _unpack(a)
    if c == "nan":
        return 0xFFFFFFFF
    if c == "inf":
        return 0 if s else 0xFFFFFFFF
    if c == "zero":
        return 0
    if e >= 0:
        mag = m << e
    else:
        d = -e
        if d >= m.bit_length() + 34:
            q, rem, half = 0, 1, 2
        else:
            q, rem, half = m >> d, m & ((1 << d) - 1), 1 << (d - 1)
        mag = _round_q(q, rem, half, s, rm)
    if s:
        return 0       # any negative value with magnitude after rounding
    return 0xFFFFFFFF if mag > 0xFFFFFFFF else mag


def fcvt_s_w(v, rm=RNE):
    v &= 0xFFFFFFFF
    sv = v - ((v >> 31) << 32)
    if sv == 0:
        return 0
    return _pack(1 if sv < 0 else 0, abs(sv), 0, rm)


def fcvt_s_wu(v, rm=RNE):
    v &= 0xFFFFFFFF
    if v == 0:
        return 0
    return _pack(0, v, 0, rm)


# ---------- RV32IM integer reference ----------

_M32 = 0xFFFFFFFF


def _neg(v):
    return (-v) & _M32


def mulhu(a, b):
    """High 32 bits of the 64-bit unsigned product, by 16-bit limbs."""
    al, ah = a & 0xFFFF, a >> 16
    bl, bh = b & 0xFFFF, b >> 16
    ll = al * bl
    lh = al * bh
    hl = ah * bl
    hh = ah * bh
    mid = lh + hl + (ll >> 16)
    return (hh + (mid >> 16)) & _M32


def mul(a, b):
    al, ah = a & 0xFFFF, a >> 16
    bl = b & 0xFFFF
    return (al * bl + (((al * (b >> 16) + ah * bl) & 0xFFFF) << 16)) & _M32


def mulh(a, b):
    h = mulhu(a, b)
    if a >> 31:
        h = (h - b) & _M32
    if b >> 31:
        h = (h - a) & _M32
    return h


def mulhsu(a, b):
    h = mulhu(a, b)
    if a >> 31:
        h = (h - b) & _M32
    return h


def divu(a, b):
    if b == 0:
        return _M32
    q = 0
    r = 0
    for i in range(31, -1, -1):
        r = (r << 1) | ((a >> i) & 1)
        if r >= b:
            r -= b
            q |= 1 << i
    return q


def remu(a, b):
    if b == 0:
        return a
    return (a - mul(divu(a, b), b)) & _M32


def div(a, b):
    if b == 0:
        return _M32
    if a == 0x80000000 and b == _M32:
        return a
    na, nb = a >> 31, b >> 31
    q = divu(_neg(a) if na else a, _neg(b) if nb else b)
    return _neg(q) if na != nb else q


def rem(a, b):
    if b == 0:
        return a
    if a == 0x80000000 and b == _M32:
        return 0
    na = a >> 31
    r = remu(_neg(a) if na else a, _neg(b) if b >> 31 else b)
    return _neg(r) if na else r
