"""Binary32 arithmetic against an independent exact-integer reference.

oracle_fp.py does all rounding in exact integer arithmetic; the module
under test rounds through binary64.  For +, -, *, /, sqrt the double
path is exact (24-bit significands round correctly through 53 bits), so
the two must agree bit for bit on every input, NaNs included.
"""

import struct

import pytest
from hypothesis import given, settings, strategies as st

import oracle_fp as orc
from slotsim import softfloat as sf

SPECIALS = [
    0x00000000, 0x80000000,              # +-0
    0x3F800000, 0xBF800000,              # +-1
    0x7F800000, 0xFF800000,              # +-inf
    0x7FC00000, 0xFFC00000,              # quiet NaNs
    0x7F800001, 0xFF912345,              # signalling payloads
    0x00000001, 0x80000001,              # min subnormals
    0x007FFFFF, 0x00800000,              # subnormal/normal edge
    0x7F7FFFFF, 0xFF7FFFFF,              # +-max finite
    0x3F000000, 0x40490FDB,              # 0.5, pi
    0x34000000, 0x7E967699,              # tiny, huge
]

bits32 = st.integers(min_value=0, max_value=0xFFFFFFFF)
anyf = st.one_of(bits32, st.sampled_from(SPECIALS))


def test_canonical_nan_value():
    assert sf.CANON_NAN == 0x7FC00000
    # quiet bit set, zero payload
    assert sf.is_nan(sf.CANON_NAN)


@pytest.mark.parametrize("a", SPECIALS)
@pytest.mark.parametrize("b", SPECIALS)
def test_binary_ops_on_specials(a, b):
    for name in ("fadd", "fsub", "fmul", "fdiv"):
        got = getattr(sf, name)(a, b)
        want = getattr(orc, name)(a, b)
        assert got == want, f"{name}({a:#x},{b:#x}) {got:#x} != {want:#x}"


@settings(max_examples=400, deadline=None)
@given(anyf, anyf)
def test_binary_ops_random(a, b):
    for name in ("fadd", "fsub", "fmul", "fdiv"):
        assert getattr(sf, name)(a, b) == getattr(orc, name)(a, b)


@settings(max_examples=300, deadline=None)
@given(anyf)
def test_sqrt_random(a):
    assert sf.fsqrt(a) == orc.fsqrt(a)


@settings(max_examples=300, deadline=None)
@given(anyf, anyf, anyf)
def test_fma_random(a, b, c):
    assert sf.fma(a, b, c) == orc.fma(a, b, c)


def test_fma_single_rounding():
    # (1+2^-12)^2 = 1 + 2^-11 + 2^-24; a rounded product loses the tail,
    # so subtracting 1+2^-11 gives 0 in two steps but 2^-24 fused
    a = sf.from_double(1.0 + 2.0 ** -12)
    c = sf.from_double(-(1.0 + 2.0 ** -11))
    fused = sf.fma(a, a, c)
    two_step = sf.fadd(sf.fmul(a, a), c)
    assert fused == sf.from_double(2.0 ** -24)
    assert fused == orc.fma(a, a, c)
    assert two_step == 0


def test_fma_exact_zero_sign():
    # product and addend cancel exactly: sign comes from the product
    one = 0x3F800000
    none = 0xBF800000
    assert sf.fma(one, one, none) == 0x00000000
    assert sf.fma(none, one, one) == 0x00000000
    # -0 only when both the product and c are negative zero
    nzero = 0x80000000
    assert sf.fma(nzero, one, nzero) == 0x80000000
    assert sf.fma(nzero, one, 0) == 0


def test_nan_results_are_canonical():
    nan_in = 0x7F912345
    for got in (sf.fadd(nan_in, 0x3F800000),
                sf.fmul(0x7F800000, 0),
                sf.fdiv(0, 0),
                sf.fsub(0x7F800000, 0x7F800000),
                sf.fsqrt(0xBF800000),
                sf.fma(nan_in, 0, 0)):
        assert got == sf.CANON_NAN


def test_div_zero_cases():
    inf = 0x7F800000
    assert sf.fdiv(0x3F800000, 0) == inf
    assert sf.fdiv(0x3F800000, 0x80000000) == 0xFF800000
    assert sf.fdiv(0, 0x3F800000) == 0
    assert sf.fdiv(0x80000000, 0x3F800000) == 0x80000000
    assert sf.fdiv(0, 0) == sf.CANON_NAN
    assert sf.fdiv(inf, inf) == sf.CANON_NAN


def test_sqrt_signed_zero():
    assert sf.fsqrt(0) == 0
    assert sf.fsqrt(0x80000000) == 0x80000000
    assert sf.fsqrt(0xBF800000) == sf.CANON_NAN


# ---- min/max: one NaN selects the other operand ----

def test_fmin_fmax_nan_rules():
    one = 0x3F800000
    assert sf.fmin(sf.CANON_NAN, one) == one
    assert sf.fmin(one, sf.CANON_NAN) == one
    assert sf.fmin(sf.CANON_NAN, sf.CANON_NAN) == sf.CANON_NAN
    assert sf.fmax(0x7F800001, one) == one
    assert sf.fmax(sf.CANON_NAN, 0xFFC00001) == sf.CANON_NAN


def test_fmin_fmax_signed_zero():
    pz, nz = 0x00000000, 0x80000000
    assert sf.fmin(pz, nz) == nz
    assert sf.fmin(nz, pz) == nz
    assert sf.fmax(pz, nz) == pz
    assert sf.fmax(nz, pz) == pz


@settings(max_examples=300, deadline=None)
@given(anyf, anyf)
def test_fmin_fmax_random(a, b):
    assert sf.fmin(a, b) == orc.fmin(a, b)
    assert sf.fmax(a, b) == orc.fmax(a, b)


# ---- compares ----

def test_compare_nan_gives_zero():
    for fn in (sf.feq, sf.flt, sf.fle):
        assert fn(sf.CANON_NAN, 0) == 0
        assert fn(0, sf.CANON_NAN) == 0
        assert fn(sf.CANON_NAN, sf.CANON_NAN) == 0


def test_compare_zero_equality():
    assert sf.feq(0x00000000, 0x80000000) == 1
    assert sf.fle(0x80000000, 0x00000000) == 1
    assert sf.flt(0x80000000, 0x00000000) == 0


@settings(max_examples=300, deadline=None)
@given(anyf, anyf)
def test_compare_random(a, b):
    assert sf.feq(a, b) == orc.feq(a, b)
    assert sf.flt(a, b) == orc.flt(a, b)
    assert sf.fle(a, b) == orc.fle(a, b)


# ---- conversions ----

RMS = (sf.RM_RNE, sf.RM_RTZ, sf.RM_RDN, sf.RM_RUP, sf.RM_RMM)


def test_fcvt_w_s_saturation():
    assert sf.fcvt_w_s(sf.CANON_NAN) == 0x7FFFFFFF
    assert sf.fcvt_w_s(0x7F800000) == 0x7FFFFFFF
    assert sf.fcvt_w_s(0xFF800000) == -(1 << 31)
    # 2^31 exactly overflows signed; -2^31 fits
    assert sf.fcvt_w_s(0x4F000000) == 0x7FFFFFFF
    assert sf.fcvt_w_s(0xCF000000) == -(1 << 31)


def test_fcvt_wu_s_saturation():
    assert sf.fcvt_wu_s(sf.CANON_NAN) == 0xFFFFFFFF
    assert sf.fcvt_wu_s(0x4F800000) == 0xFFFFFFFF    # 2^32
    assert sf.fcvt_wu_s(0xBF800000) == 0             # -1.0
    assert sf.fcvt_wu_s(0x80000000) == 0             # -0.0


def test_fcvt_rounding_modes():
    half = 0x3F000000      # 0.5
    neg_half = 0xBF000000
    two_five = 0x40200000  # 2.5
    assert sf.fcvt_w_s(half, sf.RM_RNE) == 0
    assert sf.fcvt_w_s(two_five, sf.RM_RNE) == 2
    assert sf.fcvt_w_s(half, sf.RM_RMM) == 1
    assert sf.fcvt_w_s(neg_half, sf.RM_RMM) == -1
    assert sf.fcvt_w_s(half, sf.RM_RUP) == 1
    assert sf.fcvt_w_s(neg_half, sf.RM_RDN) == -1
    assert sf.fcvt_w_s(neg_half, sf.RM_RTZ) == 0


@settings(max_examples=200, deadline=None)
@given(anyf, st.sampled_from(RMS))
def test_fcvt_from_float_random(a, rm):
    assert sf.fcvt_w_s(a, rm) == orc.fcvt_w_s(a, rm)
    assert sf.fcvt_wu_s(a, rm) == orc.fcvt_wu_s(a, rm)


@settings(max_examples=200, deadline=None)
@given(bits32, st.sampled_from(RMS))
def test_fcvt_to_float_random(v, rm):
    assert sf.fcvt_s_w(v, rm) == orc.fcvt_s_w(v, rm)
    assert sf.fcvt_s_wu(v, rm) == orc.fcvt_s_wu(v, rm)


def test_fcvt_s_w_inexact_24bit():
    # 2^24 + 1 is the first integer binary32 cannot hold
    v = (1 << 24) + 1
    assert sf.fcvt_s_w(v, sf.RM_RNE) == sf.from_double(float(1 << 24))
    assert sf.fcvt_s_w(v, sf.RM_RUP) == sf.from_double(float((1 << 24) + 2))


# ---- sign injection is pure bit surgery ----

@settings(max_examples=200, deadline=None)
@given(anyf, anyf)
def test_sign_inject(a, b):
    assert sf.fsgnj(a, b) == (a & 0x7FFFFFFF) | (b & 0x80000000)
    assert sf.fsgnjn(a, b) == (a & 0x7FFFFFFF) | (~b & 0x80000000)
    assert sf.fsgnjx(a, b) == a ^ (b & 0x80000000)


def test_round_trip_via_double():
    for bits in SPECIALS:
        if sf.is_nan(bits):
            continue
        assert sf.from_double(sf.to_float(bits)) == bits


def test_pack_exact_subnormal_rounding():
    # value = 1 ulp below the subnormal/normal boundary, round up crosses it
    got = sf.pack_exact(0, (1 << 24) - 1, -126 - 24, sf.RM_RUP)
    assert got == 0x00800000
