"""Bit-exact float32 arithmetic on 32-bit patterns.

Add, subtract, multiply, divide and square root are evaluated in the
host's binary64 and rounded once to binary32.  That is correctly rounded:
binary64 carries 53 significant bits, more than the 2*24+2 = 50 needed for
the double rounding to be harmless.  Fused multiply-add cannot take the
shortcut (its double rounding is observable), so it is computed exactly in
integer arithmetic and rounded once via pack_exact.

Conventions throughout: operands and results are unsigned 32-bit ints
holding IEEE-754 binary32 patterns; every generated NaN is canonicalized
to 0x7FC00000; min/max and compares follow the RISC-V flavor (one NaN
picks the other operand, fmin(-0,+0) = -0, compares with NaN are false).
"""

from __future__ import annotations

import math
import struct

from .isa import RM_RNE, RM_RTZ, RM_RDN, RM_RUP, RM_RMM, RM_DYN

CANON_NAN = 0x7FC00000
PLUS_INF = 0x7F800000
MINUS_INF = 0xFF800000
MAX_FINITE = 0x7F7FFFFF

_pack_f = struct.Struct("<f").pack
_unpack_f = struct.Struct("<f").unpack
_pack_u = struct.Struct("<I").pack
_unpack_u = struct.Struct("<I").unpack


def to_float(bits: int) -> float:
    """The exact value of a float32 pattern, as a host float."""
    return _unpack_f(_pack_u(bits & 0xFFFFFFFF))[0]


def from_double(x: float) -> int:
    """Round a host double to float32 bits (nearest-even).

    Finite values that exceed the float32 range become inf; NaN becomes
    the canonical quiet NaN.
    """
    if math.isnan(x):
        return CANON_NAN
    try:
        return _unpack_u(_pack_f(x))[0]
    except OverflowError:
        return MINUS_INF if x < 0 else PLUS_INF


def is_nan(bits: int) -> bool:
    return (bits & 0x7F800000) == 0x7F800000 and (bits & 0x7FFFFF) != 0


def _unpack_exact(bits: int):
    """(sign, mantissa, exp2) with value = (-1)**sign * mantissa * 2**exp2.

    Zeros come back with mantissa 0.  Infinities and NaNs must be
    filtered by the caller first.
    """
    s = bits >> 31
    e = (bits >> 23) & 0xFF
    f = bits & 0x7FFFFF
    if e == 0:
        return s, f, -149
    return s, f | 0x800000, e - 150


def _round_shift(m: int, d: int, sign: int, rm: int) -> int:
    """Drop the low d bits of m, rounding per rm (sign is of the value)."""
    q = m >> d
    rem = m & ((1 << d) - 1)
    if rem == 0:
        return q
    if rm == RM_RNE or rm == RM_DYN:
        half = 1 << (d - 1)
        if rem > half or (rem == half and (q & 1)):
            q += 1
    elif rm == RM_RTZ:
        pass
    elif rm == RM_RDN:
        q += sign
    elif rm == RM_RUP:
        q += 1 - sign
    elif rm == RM_RMM:
        if rem >= 1 << (d - 1):
            q += 1
    else:
        raise ValueError(f"bad rounding mode {rm}")
    return q


def pack_exact(sign: int, mag: int, exp2: int, rm: int = RM_RNE) -> int:
    """Round the exact value (-1)**sign * mag * 2**exp2 to float32 bits.

    mag is a non-negative integer of any size.  Handles subnormals,
    underflow to zero and overflow per the rounding mode.
    """
    if mag == 0:
        return sign << 31
    # Work in units of 2**-149 (the subnormal step).  For any q in that
    # unit with at most 24 significant bits shifted left by s, the bit
    # pattern of the magnitude is (s << 23) + q: the subnormal range,
    # the implicit leading one, and exponent carries all line up.
    t = exp2 + 149
    if t >= 0:
        m = mag << t
        t = 0
    else:
        m = mag
    d = m.bit_length() - 24
    if -t > d:
        d = -t
    if d <= 0:
        units = m
        s = 0
    else:
        units = _round_shift(m, d, sign, rm)
        s = d + t
    bits = (s << 23) + units
    if bits >= PLUS_INF:
        if rm in (RM_RNE, RM_DYN, RM_RMM):
            bits = PLUS_INF
        elif rm == RM_RTZ:
            bits = MAX_FINITE
        elif rm == RM_RDN:
            bits = MAX_FINITE if sign == 0 else PLUS_INF
        else:  # RM_RUP
            bits = PLUS_INF if sign == 0 else MAX_FINITE
    return (sign << 31) | bits


def fadd(a: int, b: int) -> int:
    if is_nan(a) or is_nan(b):
        return CANON_NAN
    return from_double(to_float(a) + to_float(b))


def fsub(a: int, b: int) -> int:
    if is_nan(a) or is_nan(b):
        return CANON_NAN
    return from_double(to_float(a) - to_float(b))


def fmul(a: int, b: int) -> int:
    if is_nan(a) or is_nan(b):
        return CANON_NAN
    return from_double(to_float(a) * to_float(b))


def fdiv(a: int, b: int) -> int:
    if is_nan(a) or is_nan(b):
        return CANON_NAN
    fa = to_float(a)
    fb = to_float(b)
    if fb == 0.0:
        if fa == 0.0:
            return CANON_NAN
        return MINUS_INF if (a ^ b) & 0x80000000 else PLUS_INF
    return from_double(fa / fb)


def fsqrt(a: int) -> int:
    if is_nan(a):
        return CANON_NAN
    if a == 0x80000000 or a == 0:
        return a
    fa = to_float(a)
    if fa < 0:
        return CANON_NAN
    return from_double(math.sqrt(fa))


def fma(a: int, b: int, c: int) -> int:
    """a*b + c with a single rounding (nearest-even)."""
    if is_nan(a) or is_nan(b) or is_nan(c):
        return CANON_NAN
    a &= 0xFFFFFFFF
    b &= 0xFFFFFFFF
    c &= 0xFFFFFFFF
    a_inf = (a & 0x7FFFFFFF) == PLUS_INF
    b_inf = (b & 0x7FFFFFFF) == PLUS_INF
    c_inf = (c & 0x7FFFFFFF) == PLUS_INF
    ps = (a ^ b) >> 31
    if a_inf or b_inf:
        if (a & 0x7FFFFFFF) == 0 or (b & 0x7FFFFFFF) == 0:
            return CANON_NAN  # inf * 0
        if c_inf and (c >> 31) != ps:
            return CANON_NAN  # inf - inf
        return (ps << 31) | PLUS_INF
    if c_inf:
        return c
    sa, ma, ea = _unpack_exact(a)
    sb, mb, eb = _unpack_exact(b)
    sc, mc, ec = _unpack_exact(c)
    pm = ma * mb
    pe = ea + eb
    e0 = min(pe, ec)
    total = (pm << (pe - e0)) * (1 - 2 * ps) + (mc << (ec - e0)) * (1 - 2 * sc)
    if total == 0:
        # exact zero: keeps the common sign, else +0 under nearest-even
        return (ps & sc) << 31
    sign = 1 if total < 0 else 0
    return pack_exact(sign, abs(total), e0, RM_RNE)


def fmin(a: int, b: int) -> int:
    an, bn = is_nan(a), is_nan(b)
    if an and bn:
        return CANON_NAN
    if an:
        return b
    if bn:
        return a
    fa, fb = to_float(a), to_float(b)
    if fa == 0.0 and fb == 0.0:
        return a | b  # -0 wins if present
    return a if fa < fb else b


def fmax(a: int, b: int) -> int:
    an, bn = is_nan(a), is_nan(b)
    if an and bn:
        return CANON_NAN
    if an:
        return b
    if bn:
        return a
    fa, fb = to_float(a), to_float(b)
    if fa == 0.0 and fb == 0.0:
        return a & b  # +0 wins unless both are -0
    return a if fa > fb else b


def feq(a: int, b: int) -> int:
    if is_nan(a) or is_nan(b):
        return 0
    return int(to_float(a) == to_float(b))


def flt(a: int, b: int) -> int:
    if is_nan(a) or is_nan(b):
        return 0
    return int(to_float(a) < to_float(b))


def fle(a: int, b: int) -> int:
    if is_nan(a) or is_nan(b):
        return 0
    return int(to_float(a) <= to_float(b))


def fsgnj(a: int, b: int) -> int:
    return (a & 0x7FFFFFFF) | (b & 0x80000000)


def fsgnjn(a: int, b: int) -> int:
    return (a & 0x7FFFFFFF) | (~b & 0x80000000)


def fsgnjx(a: int, b: int) -> int:
    return (a ^ (b & 0x80000000)) & 0xFFFFFFFF


def _round_double_to_int(x: float, rm: int) -> int:
    """Round an integer-or-fractional double to an integer exactly."""
    m = math.floor(x)
    frac = x - m  # exact for doubles
    if frac == 0.0:
        return m
    if rm == RM_RNE or rm == RM_DYN:
        if frac > 0.5 or (frac == 0.5 and (m & 1)):
            m += 1
    elif rm == RM_RTZ:
        if x < 0:
            m += 1
    elif rm == RM_RDN:
        pass
    elif rm == RM_RUP:
        m += 1
    elif rm == RM_RMM:
        # ties away from zero; frac is relative to floor, so a negative
        # tie must stay at floor
        if frac > 0.5 or (frac == 0.5 and x > 0):
            m += 1
    else:
        raise ValueError(f"bad rounding mode {rm}")
    return m


def fcvt_w_s(a: int, rm: int = RM_RTZ) -> int:
    """float32 -> int32, saturating; NaN maps to the maximum positive."""
    if is_nan(a):
        return 0x7FFFFFFF
    fa = to_float(a)
    if fa == math.inf:
        return 0x7FFFFFFF
    if fa == -math.inf:
        return -0x80000000
    r = _round_double_to_int(fa, rm)
    if r > 0x7FFFFFFF:
        return 0x7FFFFFFF
    if r < -0x80000000:
        return -0x80000000
    return r


def fcvt_wu_s(a: int, rm: int = RM_RTZ) -> int:
    """float32 -> uint32, saturating; NaN maps to the maximum."""
    if is_nan(a):
        return 0xFFFFFFFF
    fa = to_float(a)
    if fa == math.inf:
        return 0xFFFFFFFF
    if fa == -math.inf:
        return 0
    r = _round_double_to_int(fa, rm)
    if r > 0xFFFFFFFF:
        return 0xFFFFFFFF
    if r < 0:
        return 0
    return r


def fcvt_s_w(v: int, rm: int = RM_RNE) -> int:
    """int32 -> float32 under the given rounding mode."""
    v = ((v & 0xFFFFFFFF) ^ 0x80000000) - 0x80000000
    if v == 0:
        return 0
    sign = 1 if v < 0 else 0
    return pack_exact(sign, abs(v), 0, rm)


def fcvt_s_wu(v: int, rm: int = RM_RNE) -> int:
    """uint32 -> float32 under the given rounding mode."""
    v &= 0xFFFFFFFF
    if v == 0:
        return 0
    return pack_exact(0, v, 0, rm)
