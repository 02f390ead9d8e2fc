"""Register-only support routines for targets missing M or F.

Calling convention: args in a0/a1, results in a0 (pair results in
a0/a1), scratch t0..t6, return via ra.  No stack, no memory, no s-reg
use, so callers keep state in s-regs and a2..a7 across calls.

Two internal cores are linked through t6 instead of ra so routines can
use them without a stack: __umul64_t6 (full 32x32 product, clobbers
t0..t3) and __rp_t6 (round-to-nearest-even and pack: takes sign in a0,
biased exponent in t0, a 27-bit sticky-jammed significand in
[2^26, 2^27) in t2; clobbers t1/t3; flushes exponent <= 0 to signed
zero and >= 255 to infinity).

Float routines assume normal or zero inputs and never see NaN or
infinity; that is the bundled kernels' domain.  Within it they are
bit-exact against IEEE round-to-nearest-even (the test suite drives
them against an independent reference through the simulator).
"""

from .builder import A0, A1, T0, T1, T2, T3, T4, T5, T6

SIG_HIDDEN = 0x00800000   # implicit leading significand bit


def _emit_umul64_core(p):
    """(a0, a1) -> a0 = low, a1 = high word of the unsigned product.

    Shift-and-add over the set bits of a1; clobbers t0..t3; link t6.
    """
    p.label("__umul64_t6")
    p.li(T0, 0)                                  # acc low
    p.li(T1, 0)                                  # acc high
    p.li(T2, 0)                                  # multiplicand high
    p.label("__umul64_loop")
    p.emit("andi", rd=T3, rs1=A1, imm=1)
    p.beqz(T3, "__umul64_skip")
    p.emit("add", rd=T0, rs1=T0, rs2=A0)
    p.emit("sltu", rd=T3, rs1=T0, rs2=A0)        # carry out
    p.emit("add", rd=T1, rs1=T1, rs2=T2)
    p.emit("add", rd=T1, rs1=T1, rs2=T3)
    p.label("__umul64_skip")
    p.emit("srli", rd=T3, rs1=A0, imm=31)
    p.emit("slli", rd=T2, rs1=T2, imm=1)
    p.emit("or", rd=T2, rs1=T2, rs2=T3)
    p.emit("slli", rd=A0, rs1=A0, imm=1)
    p.emit("srli", rd=A1, rs1=A1, imm=1)
    p.bnez(A1, "__umul64_loop")
    p.mv(A0, T0)
    p.mv(A1, T1)
    p.emit("jalr", rd=0, rs1=T6, imm=0)


def emit_umul64(p):
    _emit_umul64_core(p)
    p.label("__umul64")
    p.emit("jal", rd=T6, label="__umul64_t6", rel="j")
    p.ret()


def emit_mul64(p):
    """Signed full product from the unsigned one:
    hi -= (a < 0 ? b : 0) + (b < 0 ? a : 0)."""
    p._need("umul64")
    p.label("__mul64")
    p.emit("srai", rd=T5, rs1=A0, imm=31)
    p.emit("and", rd=T5, rs1=T5, rs2=A1)
    p.emit("srai", rd=T4, rs1=A1, imm=31)
    p.emit("and", rd=T4, rs1=T4, rs2=A0)
    p.emit("add", rd=T5, rs1=T5, rs2=T4)
    p.emit("jal", rd=T6, label="__umul64_t6", rel="j")
    p.emit("sub", rd=A1, rs1=A1, rs2=T5)
    p.ret()


def _emit_udiv_loop(p, pfx):
    """Restoring 32-step divide of a0 by a1 into q = t0, r = t1.

    Caller has already ruled out a1 == 0.  Clobbers t0..t3.
    """
    p.li(T0, 0)
    p.li(T1, 0)
    p.li(T2, 32)
    p.label(f"{pfx}_loop")
    p.emit("slli", rd=T1, rs1=T1, imm=1)
    p.emit("srli", rd=T3, rs1=A0, imm=31)
    p.emit("or", rd=T1, rs1=T1, rs2=T3)
    p.emit("slli", rd=A0, rs1=A0, imm=1)
    p.emit("slli", rd=T0, rs1=T0, imm=1)
    p.branch("bltu", T1, A1, f"{pfx}_small")
    p.emit("sub", rd=T1, rs1=T1, rs2=A1)
    p.emit("ori", rd=T0, rs1=T0, imm=1)
    p.label(f"{pfx}_small")
    p.emit("addi", rd=T2, rs1=T2, imm=-1)
    p.bnez(T2, f"{pfx}_loop")


def emit_udivmod(p):
    """a0 / a1 -> quotient a0, remainder a1 (divide by zero gives
    q = 0xFFFFFFFF, r = dividend)."""
    p.label("__udivmod")
    p.beqz(A1, "__udivmod_zero")
    _emit_udiv_loop(p, "__udivmod")
    p.mv(A0, T0)
    p.mv(A1, T1)
    p.ret()
    p.label("__udivmod_zero")
    p.mv(A1, A0)
    p.li(A0, -1)
    p.ret()


def emit_divmod(p):
    """Signed divide with the usual edge values: x/0 -> q = -1, r = x;
    INT_MIN / -1 -> q = INT_MIN, r = 0."""
    p.label("__divmod")
    p.beqz(A1, "__divmod_zero")
    p.emit("lui", rd=T5, imm=-(1 << 31))
    p.branch("bne", A0, T5, "__divmod_go")
    p.li(T4, -1)
    p.branch("bne", A1, T4, "__divmod_go")
    p.mv(A0, T5)
    p.li(A1, 0)
    p.ret()
    p.label("__divmod_go")
    p.emit("srai", rd=T5, rs1=A0, imm=31)        # dividend sign
    p.emit("srai", rd=T4, rs1=A1, imm=31)
    p.emit("xor", rd=A0, rs1=A0, rs2=T5)
    p.emit("sub", rd=A0, rs1=A0, rs2=T5)
    p.emit("xor", rd=A1, rs1=A1, rs2=T4)
    p.emit("sub", rd=A1, rs1=A1, rs2=T4)
    p.emit("xor", rd=T6, rs1=T5, rs2=T4)         # quotient sign
    _emit_udiv_loop(p, "__divmod")
    p.emit("xor", rd=A0, rs1=T0, rs2=T6)
    p.emit("sub", rd=A0, rs1=A0, rs2=T6)
    p.emit("xor", rd=A1, rs1=T1, rs2=T5)
    p.emit("sub", rd=A1, rs1=A1, rs2=T5)
    p.ret()
    p.label("__divmod_zero")
    p.mv(A1, A0)
    p.li(A0, -1)
    p.ret()


def emit_rp(p):
    """Shared round-and-pack tail; see the module docstring."""
    p.label("__rp_t6")
    p.emit("srli", rd=T1, rs1=T2, imm=3)
    p.emit("andi", rd=T1, rs1=T1, imm=1)         # quotient lsb
    p.emit("addi", rd=T1, rs1=T1, imm=3)
    p.emit("add", rd=T2, rs1=T2, rs2=T1)         # +3 (+1 on an odd lsb)
    p.emit("srli", rd=T2, rs1=T2, imm=3)
    p.emit("lui", rd=T3, imm=0x01000000)
    p.branch("bne", T2, T3, "__rp_range")
    p.emit("srli", rd=T2, rs1=T2, imm=1)         # rounding carried out
    p.emit("addi", rd=T0, rs1=T0, imm=1)
    p.label("__rp_range")
    p.branch("bge", 0, T0, "__rp_tiny")
    p.li(T3, 255)
    p.branch("bge", T0, T3, "__rp_huge")
    p.emit("addi", rd=T0, rs1=T0, imm=-1)
    p.emit("slli", rd=T0, rs1=T0, imm=23)
    p.emit("slli", rd=A0, rs1=A0, imm=31)
    p.emit("add", rd=A0, rs1=A0, rs2=T0)
    p.emit("add", rd=A0, rs1=A0, rs2=T2)         # implicit bit bumps exp back
    p.emit("jalr", rd=0, rs1=T6, imm=0)
    p.label("__rp_tiny")
    p.emit("slli", rd=A0, rs1=A0, imm=31)        # flush to signed zero
    p.emit("jalr", rd=0, rs1=T6, imm=0)
    p.label("__rp_huge")
    p.emit("slli", rd=A0, rs1=A0, imm=31)
    p.emit("lui", rd=T0, imm=0x7F800000)
    p.emit("or", rd=A0, rs1=A0, rs2=T0)
    p.emit("jalr", rd=0, rs1=T6, imm=0)


def emit_addsf3(p):
    """IEEE single add, round to nearest even, 3 guard bits + sticky."""
    p._need("rp")
    p.label("__addsf3")
    p.emit("slli", rd=T0, rs1=A0, imm=1)
    p.beqz(T0, "__addsf3_a0z")
    p.emit("slli", rd=T0, rs1=A1, imm=1)
    p.beqz(T0, "__addsf3_ret")                   # b is ±0: return a
    p.emit("srli", rd=T4, rs1=A0, imm=31)
    p.emit("srli", rd=T5, rs1=A1, imm=31)
    p.emit("srli", rd=T0, rs1=A0, imm=23)
    p.emit("andi", rd=T0, rs1=T0, imm=255)
    p.emit("srli", rd=T1, rs1=A1, imm=23)
    p.emit("andi", rd=T1, rs1=T1, imm=255)
    p.emit("slli", rd=T2, rs1=A0, imm=9)
    p.emit("srli", rd=T2, rs1=T2, imm=6)         # frac << 3
    p.emit("slli", rd=T3, rs1=A1, imm=9)
    p.emit("srli", rd=T3, rs1=T3, imm=6)
    p.emit("lui", rd=T6, imm=SIG_HIDDEN << 3)
    p.emit("or", rd=T2, rs1=T2, rs2=T6)
    p.emit("or", rd=T3, rs1=T3, rs2=T6)
    p.branch("bge", T0, T1, "__addsf3_ord")      # keep the larger exp in t0
    p.mv(A0, T0)
    p.mv(T0, T1)
    p.mv(T1, A0)
    p.mv(A0, T2)
    p.mv(T2, T3)
    p.mv(T3, A0)
    p.mv(A0, T4)
    p.mv(T4, T5)
    p.mv(T5, A0)
    p.label("__addsf3_ord")
    p.emit("sub", rd=T6, rs1=T0, rs2=T1)         # alignment distance
    p.beqz(T6, "__addsf3_aligned")
    p.li(A0, 27)
    p.branch("bge", A0, T6, "__addsf3_shok")
    p.mv(T6, A0)                                 # cap: all bits become sticky
    p.label("__addsf3_shok")
    p.li(A0, 32)
    p.emit("sub", rd=A0, rs1=A0, rs2=T6)
    p.emit("sll", rd=A0, rs1=T3, rs2=A0)         # bits about to fall off
    p.emit("sltu", rd=A0, rs1=0, rs2=A0)
    p.emit("srl", rd=T3, rs1=T3, rs2=T6)
    p.emit("or", rd=T3, rs1=T3, rs2=A0)          # sticky-jammed align
    p.label("__addsf3_aligned")
    p.branch("beq", T4, T5, "__addsf3_mag")
    p.emit("sub", rd=T2, rs1=T2, rs2=T3)
    p.beqz(T2, "__addsf3_czero")                 # exact cancellation: +0
    p.branch("bge", T2, 0, "__addsf3_norm")
    p.emit("sub", rd=T2, rs1=0, rs2=T2)
    p.emit("xori", rd=T4, rs1=T4, imm=1)
    p.label("__addsf3_norm")
    p.emit("lui", rd=T3, imm=0x04000000)
    p.label("__addsf3_nl")
    p.branch("bgeu", T2, T3, "__addsf3_pack")
    p.emit("slli", rd=T2, rs1=T2, imm=1)
    p.emit("addi", rd=T0, rs1=T0, imm=-1)
    p.j("__addsf3_nl")
    p.label("__addsf3_mag")
    p.emit("add", rd=T2, rs1=T2, rs2=T3)
    p.emit("lui", rd=T3, imm=0x08000000)
    p.branch("bltu", T2, T3, "__addsf3_pack")
    p.emit("andi", rd=A0, rs1=T2, imm=1)
    p.emit("srli", rd=T2, rs1=T2, imm=1)
    p.emit("or", rd=T2, rs1=T2, rs2=A0)          # keep sticky on the shift
    p.emit("addi", rd=T0, rs1=T0, imm=1)
    p.label("__addsf3_pack")
    p.mv(A0, T4)
    p.emit("jal", rd=T6, label="__rp_t6", rel="j")
    p.ret()
    p.label("__addsf3_a0z")
    p.emit("slli", rd=T0, rs1=A1, imm=1)
    p.beqz(T0, "__addsf3_bothz")
    p.mv(A0, A1)
    p.label("__addsf3_ret")
    p.ret()
    p.label("__addsf3_bothz")
    p.emit("and", rd=A0, rs1=A0, rs2=A1)         # -0 only when both are -0
    p.ret()
    p.label("__addsf3_czero")
    p.li(A0, 0)
    p.ret()


def emit_mulsf3(p):
    p._need("rp")
    if not p.has_m:
        p._need("umul64")
    p.label("__mulsf3")
    p.emit("xor", rd=T5, rs1=A0, rs2=A1)
    p.emit("srli", rd=T5, rs1=T5, imm=31)        # result sign
    p.emit("slli", rd=T0, rs1=A0, imm=1)
    p.beqz(T0, "__mulsf3_zero")
    p.emit("slli", rd=T0, rs1=A1, imm=1)
    p.beqz(T0, "__mulsf3_zero")
    p.emit("srli", rd=T4, rs1=A0, imm=23)
    p.emit("andi", rd=T4, rs1=T4, imm=255)
    p.emit("srli", rd=T1, rs1=A1, imm=23)
    p.emit("andi", rd=T1, rs1=T1, imm=255)
    p.emit("add", rd=T4, rs1=T4, rs2=T1)         # exponent sum
    p.emit("slli", rd=A0, rs1=A0, imm=9)
    p.emit("srli", rd=A0, rs1=A0, imm=9)
    p.emit("slli", rd=A1, rs1=A1, imm=9)
    p.emit("srli", rd=A1, rs1=A1, imm=9)
    p.emit("lui", rd=T0, imm=SIG_HIDDEN)
    p.emit("or", rd=A0, rs1=A0, rs2=T0)
    p.emit("or", rd=A1, rs1=A1, rs2=T0)
    if p.has_m:
        p.emit("mulhu", rd=T1, rs1=A0, rs2=A1)
        p.emit("mul", rd=A0, rs1=A0, rs2=A1)
        p.mv(A1, T1)
    else:
        p.emit("jal", rd=T6, label="__umul64_t6", rel="j")
    p.emit("slli", rd=T2, rs1=A1, imm=12)        # product bits 47..20
    p.emit("srli", rd=T0, rs1=A0, imm=20)
    p.emit("or", rd=T2, rs1=T2, rs2=T0)
    p.emit("slli", rd=T0, rs1=A0, imm=12)        # low 20 bits -> sticky
    p.emit("sltu", rd=T0, rs1=0, rs2=T0)
    p.emit("or", rd=T2, rs1=T2, rs2=T0)
    p.emit("lui", rd=T0, imm=0x08000000)
    p.branch("bltu", T2, T0, "__mulsf3_lo")
    p.emit("andi", rd=T1, rs1=T2, imm=1)
    p.emit("srli", rd=T2, rs1=T2, imm=1)
    p.emit("or", rd=T2, rs1=T2, rs2=T1)
    p.emit("addi", rd=T4, rs1=T4, imm=1)
    p.label("__mulsf3_lo")
    p.emit("addi", rd=T0, rs1=T4, imm=-127)
    p.mv(A0, T5)
    p.emit("jal", rd=T6, label="__rp_t6", rel="j")
    p.ret()
    p.label("__mulsf3_zero")
    p.emit("slli", rd=A0, rs1=T5, imm=31)
    p.ret()


def emit_divsf3(p):
    p._need("rp")
    p.label("__divsf3")
    p.emit("xor", rd=T5, rs1=A0, rs2=A1)
    p.emit("srli", rd=T5, rs1=T5, imm=31)
    p.emit("slli", rd=T0, rs1=A1, imm=1)
    p.beqz(T0, "__divsf3_inf")                   # x / ±0 (outside domain)
    p.emit("slli", rd=T0, rs1=A0, imm=1)
    p.beqz(T0, "__divsf3_zero")
    p.emit("srli", rd=T4, rs1=A0, imm=23)
    p.emit("andi", rd=T4, rs1=T4, imm=255)
    p.emit("srli", rd=T1, rs1=A1, imm=23)
    p.emit("andi", rd=T1, rs1=T1, imm=255)
    p.emit("sub", rd=T4, rs1=T4, rs2=T1)         # exponent difference
    p.emit("slli", rd=T2, rs1=A0, imm=9)
    p.emit("srli", rd=T2, rs1=T2, imm=9)
    p.emit("slli", rd=T3, rs1=A1, imm=9)
    p.emit("srli", rd=T3, rs1=T3, imm=9)
    p.emit("lui", rd=T0, imm=SIG_HIDDEN)
    p.emit("or", rd=T2, rs1=T2, rs2=T0)
    p.emit("or", rd=T3, rs1=T3, rs2=T0)
    p.branch("bgeu", T2, T3, "__divsf3_ge")      # scale into [1, 2) of b
    p.emit("slli", rd=T2, rs1=T2, imm=1)
    p.emit("addi", rd=T4, rs1=T4, imm=-1)
    p.label("__divsf3_ge")
    p.emit("sub", rd=T2, rs1=T2, rs2=T3)         # first quotient bit is 1
    p.li(T0, 1)
    p.li(T1, 26)
    p.label("__divsf3_loop")
    p.emit("slli", rd=T2, rs1=T2, imm=1)
    p.emit("slli", rd=T0, rs1=T0, imm=1)
    p.branch("bltu", T2, T3, "__divsf3_nosub")
    p.emit("sub", rd=T2, rs1=T2, rs2=T3)
    p.emit("ori", rd=T0, rs1=T0, imm=1)
    p.label("__divsf3_nosub")
    p.emit("addi", rd=T1, rs1=T1, imm=-1)
    p.bnez(T1, "__divsf3_loop")
    p.emit("sltu", rd=T1, rs1=0, rs2=T2)         # remainder -> sticky
    p.emit("or", rd=T2, rs1=T0, rs2=T1)
    p.emit("addi", rd=T0, rs1=T4, imm=127)
    p.mv(A0, T5)
    p.emit("jal", rd=T6, label="__rp_t6", rel="j")
    p.ret()
    p.label("__divsf3_zero")
    p.emit("slli", rd=A0, rs1=T5, imm=31)
    p.ret()
    p.label("__divsf3_inf")
    p.emit("slli", rd=A0, rs1=T5, imm=31)
    p.emit("lui", rd=T0, imm=0x7F800000)
    p.emit("or", rd=A0, rs1=A0, rs2=T0)
    p.ret()


def emit_sqrtsf2(p):
    """Digit-recurrence square root, two radicand bits per step."""
    p._need("rp")
    p.label("__sqrtsf2")
    p.emit("slli", rd=T0, rs1=A0, imm=1)
    p.beqz(T0, "__sqrtsf2_ret")                  # ±0 passes through
    p.emit("srli", rd=T0, rs1=A0, imm=31)
    p.bnez(T0, "__sqrtsf2_nan")
    p.emit("srli", rd=T0, rs1=A0, imm=23)        # exponent (sign is 0)
    p.emit("slli", rd=T2, rs1=A0, imm=9)
    p.emit("srli", rd=T2, rs1=T2, imm=9)
    p.emit("lui", rd=T1, imm=SIG_HIDDEN)
    p.emit("or", rd=T2, rs1=T2, rs2=T1)
    p.emit("andi", rd=T1, rs1=T0, imm=1)
    p.emit("sll", rd=T2, rs1=T2, rs2=T1)         # absorb odd exponents
    p.emit("sub", rd=T0, rs1=T0, rs2=T1)
    p.emit("addi", rd=T0, rs1=T0, imm=-150)
    p.emit("srai", rd=T0, rs1=T0, imm=1)         # halved scale, exact
    p.emit("srli", rd=T1, rs1=T2, imm=4)         # radicand high:low is
    p.emit("slli", rd=T3, rs1=T2, imm=28)        # the significand << 28
    p.li(T4, 0)                                  # partial remainder
    p.li(T5, 0)                                  # root
    p.li(A1, 32)
    p.label("__sqrtsf2_loop")
    p.emit("srli", rd=T2, rs1=T1, imm=30)
    p.emit("slli", rd=T4, rs1=T4, imm=2)
    p.emit("or", rd=T4, rs1=T4, rs2=T2)          # feed two radicand bits
    p.emit("slli", rd=T1, rs1=T1, imm=2)
    p.emit("srli", rd=T2, rs1=T3, imm=30)
    p.emit("or", rd=T1, rs1=T1, rs2=T2)
    p.emit("slli", rd=T3, rs1=T3, imm=2)
    p.emit("slli", rd=T2, rs1=T5, imm=2)
    p.emit("ori", rd=T2, rs1=T2, imm=1)          # trial = 4*root + 1
    p.emit("slli", rd=T5, rs1=T5, imm=1)
    p.branch("bltu", T4, T2, "__sqrtsf2_skip")
    p.emit("sub", rd=T4, rs1=T4, rs2=T2)
    p.emit("ori", rd=T5, rs1=T5, imm=1)
    p.label("__sqrtsf2_skip")
    p.emit("addi", rd=A1, rs1=A1, imm=-1)
    p.bnez(A1, "__sqrtsf2_loop")
    p.emit("sltu", rd=A1, rs1=0, rs2=T4)         # remainder -> sticky
    p.emit("lui", rd=T2, imm=0x04000000)
    p.branch("bgeu", T5, T2, "__sqrtsf2_hi")
    p.emit("slli", rd=T5, rs1=T5, imm=1)
    p.emit("addi", rd=T0, rs1=T0, imm=138)
    p.j("__sqrtsf2_pack")
    p.label("__sqrtsf2_hi")
    p.emit("addi", rd=T0, rs1=T0, imm=139)
    p.label("__sqrtsf2_pack")
    p.emit("or", rd=T2, rs1=T5, rs2=A1)
    p.li(A0, 0)
    p.emit("jal", rd=T6, label="__rp_t6", rel="j")
    p.label("__sqrtsf2_ret")
    p.ret()
    p.label("__sqrtsf2_nan")
    p.emit("lui", rd=A0, imm=0x7FC00000)
    p.ret()


def emit_floatsisf(p):
    p._need("rp")
    p.label("__floatsisf")
    p.beqz(A0, "__floatsisf_ret")
    p.emit("srai", rd=T4, rs1=A0, imm=31)
    p.emit("xor", rd=A0, rs1=A0, rs2=T4)
    p.emit("sub", rd=A0, rs1=A0, rs2=T4)         # magnitude
    p.li(T0, 158)
    for shift, bound in ((16, 1 << 16), (8, 1 << 24), (4, 1 << 28),
                         (2, 1 << 30)):
        p.emit("lui", rd=T1, imm=bound - (1 << 32) if bound >= 1 << 31
               else bound)
        p.branch("bgeu", A0, T1, f"__floatsisf_n{shift}")
        p.emit("slli", rd=A0, rs1=A0, imm=shift)
        p.emit("addi", rd=T0, rs1=T0, imm=-shift)
        p.label(f"__floatsisf_n{shift}")
    p.branch("blt", A0, 0, "__floatsisf_top")    # bit 31 set: done
    p.emit("slli", rd=A0, rs1=A0, imm=1)
    p.emit("addi", rd=T0, rs1=T0, imm=-1)
    p.label("__floatsisf_top")
    p.emit("andi", rd=T1, rs1=A0, imm=31)        # sticky below 27 bits
    p.emit("sltu", rd=T1, rs1=0, rs2=T1)
    p.emit("srli", rd=T2, rs1=A0, imm=5)
    p.emit("or", rd=T2, rs1=T2, rs2=T1)
    p.emit("andi", rd=A0, rs1=T4, imm=1)         # sign flag
    p.emit("jal", rd=T6, label="__rp_t6", rel="j")
    p.label("__floatsisf_ret")
    p.ret()


def emit_floatunsisf(p):
    p._need("rp")
    p.label("__floatunsisf")
    p.beqz(A0, "__floatunsisf_ret")
    p.li(T0, 158)
    for shift, bound in ((16, 1 << 16), (8, 1 << 24), (4, 1 << 28),
                         (2, 1 << 30)):
        p.emit("lui", rd=T1, imm=bound - (1 << 32) if bound >= 1 << 31
               else bound)
        p.branch("bgeu", A0, T1, f"__floatunsisf_n{shift}")
        p.emit("slli", rd=A0, rs1=A0, imm=shift)
        p.emit("addi", rd=T0, rs1=T0, imm=-shift)
        p.label(f"__floatunsisf_n{shift}")
    p.branch("blt", A0, 0, "__floatunsisf_top")
    p.emit("slli", rd=A0, rs1=A0, imm=1)
    p.emit("addi", rd=T0, rs1=T0, imm=-1)
    p.label("__floatunsisf_top")
    p.emit("andi", rd=T1, rs1=A0, imm=31)
    p.emit("sltu", rd=T1, rs1=0, rs2=T1)
    p.emit("srli", rd=T2, rs1=A0, imm=5)
    p.emit("or", rd=T2, rs1=T2, rs2=T1)
    p.li(A0, 0)
    p.emit("jal", rd=T6, label="__rp_t6", rel="j")
    p.label("__floatunsisf_ret")
    p.ret()


def emit_fixsfsi(p):
    """float -> int32, truncating, saturating at the int32 rails."""
    p.label("__fixsfsi")
    p.emit("srli", rd=T0, rs1=A0, imm=23)
    p.emit("andi", rd=T0, rs1=T0, imm=255)
    p.li(T1, 127)
    p.branch("bltu", T0, T1, "__fixsfsi_zero")   # |x| < 1
    p.emit("srli", rd=T4, rs1=A0, imm=31)
    p.emit("slli", rd=T2, rs1=A0, imm=9)
    p.emit("srli", rd=T2, rs1=T2, imm=9)
    p.emit("lui", rd=T3, imm=SIG_HIDDEN)
    p.emit("or", rd=T2, rs1=T2, rs2=T3)
    p.emit("addi", rd=T0, rs1=T0, imm=-150)
    p.branch("bge", T0, 0, "__fixsfsi_left")
    p.emit("sub", rd=T1, rs1=0, rs2=T0)
    p.emit("srl", rd=T2, rs1=T2, rs2=T1)         # exponent >= 127: shift < 24
    p.j("__fixsfsi_sign")
    p.label("__fixsfsi_left")
    p.li(T1, 8)
    p.branch("blt", T1, T0, "__fixsfsi_sat")     # magnitude beyond 2^32
    p.emit("sll", rd=T2, rs1=T2, rs2=T0)
    p.label("__fixsfsi_sign")
    p.emit("lui", rd=T1, imm=-(1 << 31))
    p.bnez(T4, "__fixsfsi_neg")
    p.branch("bltu", T2, T1, "__fixsfsi_pos_ok")
    p.li(A0, 0x7FFFFFFF)
    p.ret()
    p.label("__fixsfsi_pos_ok")
    p.mv(A0, T2)
    p.ret()
    p.label("__fixsfsi_neg")
    p.branch("bltu", T1, T2, "__fixsfsi_nsat")   # magnitude > 2^31
    p.emit("sub", rd=A0, rs1=0, rs2=T2)
    p.ret()
    p.label("__fixsfsi_nsat")
    p.mv(A0, T1)
    p.ret()
    p.label("__fixsfsi_sat")
    p.bnez(T4, "__fixsfsi_nsat2")
    p.li(A0, 0x7FFFFFFF)
    p.ret()
    p.label("__fixsfsi_nsat2")
    p.emit("lui", rd=A0, imm=-(1 << 31))
    p.ret()
    p.label("__fixsfsi_zero")
    p.li(A0, 0)
    p.ret()


def emit_fixunssfsi(p):
    p.label("__fixunssfsi")
    p.emit("srli", rd=T0, rs1=A0, imm=23)
    p.emit("andi", rd=T0, rs1=T0, imm=255)
    p.li(T1, 127)
    p.branch("bltu", T0, T1, "__fixunssfsi_zero")
    p.emit("srli", rd=T4, rs1=A0, imm=31)
    p.bnez(T4, "__fixunssfsi_zero")              # negatives clamp to 0
    p.emit("slli", rd=T2, rs1=A0, imm=9)
    p.emit("srli", rd=T2, rs1=T2, imm=9)
    p.emit("lui", rd=T3, imm=SIG_HIDDEN)
    p.emit("or", rd=T2, rs1=T2, rs2=T3)
    p.emit("addi", rd=T0, rs1=T0, imm=-150)
    p.branch("bge", T0, 0, "__fixunssfsi_left")
    p.emit("sub", rd=T1, rs1=0, rs2=T0)
    p.emit("srl", rd=A0, rs1=T2, rs2=T1)
    p.ret()
    p.label("__fixunssfsi_left")
    p.li(T1, 9)
    p.branch("bge", T0, T1, "__fixunssfsi_sat")
    p.emit("sll", rd=A0, rs1=T2, rs2=T0)
    p.ret()
    p.label("__fixunssfsi_sat")
    p.li(A0, -1)
    p.ret()
    p.label("__fixunssfsi_zero")
    p.li(A0, 0)
    p.ret()


EMITTERS = {
    "umul64": emit_umul64,
    "mul64": emit_mul64,
    "udivmod": emit_udivmod,
    "divmod": emit_divmod,
    "rp": emit_rp,
    "addsf3": emit_addsf3,
    "mulsf3": emit_mulsf3,
    "divsf3": emit_divsf3,
    "sqrtsf2": emit_sqrtsf2,
    "floatsisf": emit_floatsisf,
    "floatunsisf": emit_floatunsisf,
    "fixsfsi": emit_fixsfsi,
    "fixunssfsi": emit_fixunssfsi,
}
