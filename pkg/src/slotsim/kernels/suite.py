"""Bundled benchmark kernels.

Each kernel is an emitter over the Prog assembler and builds for every
target in its `targets` tuple from one source.  A kernel runs `iters`
work units, signals each completed unit through the device iteration
register, dumps its results to the console port, and halts; the console
byte stream is the kernel's architectural output, so two builds agree
exactly when their digests match.

Float kernels stay inside the support library's exact domain: normal
values only, and fused multiply-adds only where the product is exact
(multipliers that are powers of two), so the fused and two-step
lowerings round identically.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import Callable, Tuple

from .builder import (Prog, TARGETS, AsmError,
                      S0, S1, S2, S3, S4, S5, S6, S7, S8, S9, S10, S11,
                      A1, A2, A3, A4, A5, A6, A7)

__all__ = ["Kernel", "KERNELS", "build_kernel", "kernel_names", "f32"]


def f32(x: float) -> int:
    """Bit pattern of a Python float narrowed to binary32."""
    return struct.unpack("<I", struct.pack("<f", x))[0]


@dataclass(frozen=True)
class Kernel:
    """A bundled benchmark: how to emit it and how much work it does.

    flavor drives classification expectations in the tests: "plain"
    kernels emit no multiply/divide/float at all, "int" kernels lean on
    integer multiply/divide, "float" kernels on the float pipeline, and
    "grind" marks the synthetic single-target group exercisers.
    """

    name: str
    flavor: str
    iters: int
    emit: Callable[[Prog, int], None]
    targets: Tuple[str, ...] = TARGETS


KERNELS = {}


def _kernel(name, flavor, iters, targets=TARGETS):
    def deco(fn):
        KERNELS[name] = Kernel(name, flavor, iters, fn, tuple(targets))
        return fn
    return deco


def kernel_names():
    return tuple(KERNELS)


def build_kernel(name: str, target: str, iters: int | None = None,
                 base: int = 0):
    """Assemble one kernel; returns (image_bytes, prog)."""
    k = KERNELS[name]
    if target not in k.targets:
        raise AsmError(f"{name} does not build for {target}")
    p = Prog(target)
    k.emit(p, k.iters if iters is None else iters)
    img = p.assemble(base=base)
    return img, p


# ---------- emission helpers ----------

def _uniq(p, stem):
    seq = getattr(p, "_suite_seq", 0)
    p._suite_seq = seq + 1
    return f".{stem}{seq}"


def _dump_reg(p, reg):
    """Write one register to the console, low byte first."""
    p.mv(A1, reg)
    for _ in range(4):
        p.console(A1)
        p.emit("srli", rd=A1, rs1=A1, imm=8)


def _dump_mem(p, label, nwords):
    loop = _uniq(p, "dm")
    p.la(S0, label)
    p.li(S1, nwords)
    p.label(loop)
    p.emit("lw", rd=A1, rs1=S0, imm=0)
    for _ in range(4):
        p.console(A1)
        p.emit("srli", rd=A1, rs1=A1, imm=8)
    p.emit("addi", rd=S0, rs1=S0, imm=4)
    p.emit("addi", rd=S1, rs1=S1, imm=-1)
    p.bnez(S1, loop)


def _xorshift32(p, state, tmp):
    """state = xorshift32(state), 13/17/5 variant."""
    p.emit("slli", rd=tmp, rs1=state, imm=13)
    p.emit("xor", rd=state, rs1=state, rs2=tmp)
    p.emit("srli", rd=tmp, rs1=state, imm=17)
    p.emit("xor", rd=state, rs1=state, rs2=tmp)
    p.emit("slli", rd=tmp, rs1=state, imm=5)
    p.emit("xor", rd=state, rs1=state, rs2=tmp)


def _iter_loop_end(p, head):
    p.iter_tick()
    p.emit("addi", rd=A7, rs1=A7, imm=-1)
    p.bnez(A7, head)


# ---------- integer kernels ----------

@_kernel("matmul-int", "int", 8)
def _k_matmul(p, iters):
    """6x6 integer matrix multiply; C feeds back as A each unit."""
    n = 6
    p.la(S0, "mmA")
    p.la(S1, "mmB")
    p.la(A2, "mmC")
    p.li(A7, iters)
    p.label(".it")
    p.li(S4, 0)                           # row
    p.label(".iloop")
    p.li(S5, 0)                           # column
    p.label(".jloop")
    p.emit("slli", rd=A3, rs1=S4, imm=4)  # row stride is 24 bytes
    p.emit("slli", rd=A4, rs1=S4, imm=3)
    p.emit("add", rd=S7, rs1=A3, rs2=A4)
    p.emit("add", rd=S7, rs1=S7, rs2=S0)
    p.emit("slli", rd=A3, rs1=S5, imm=2)
    p.emit("add", rd=S8, rs1=A3, rs2=S1)
    p.li(S6, 0)                           # accumulator
    p.li(S9, n)
    p.label(".kloop")
    p.emit("lw", rd=A3, rs1=S7, imm=0)
    p.emit("lw", rd=A4, rs1=S8, imm=0)
    p.mul(A5, A3, A4)
    p.emit("add", rd=S6, rs1=S6, rs2=A5)
    p.emit("addi", rd=S7, rs1=S7, imm=4)
    p.emit("addi", rd=S8, rs1=S8, imm=24)
    p.emit("addi", rd=S9, rs1=S9, imm=-1)
    p.bnez(S9, ".kloop")
    p.emit("slli", rd=A3, rs1=S4, imm=4)
    p.emit("slli", rd=A4, rs1=S4, imm=3)
    p.emit("add", rd=A3, rs1=A3, rs2=A4)
    p.emit("slli", rd=A4, rs1=S5, imm=2)
    p.emit("add", rd=A3, rs1=A3, rs2=A4)
    p.emit("add", rd=A3, rs1=A3, rs2=A2)
    p.emit("sw", rs1=A3, rs2=S6, imm=0)
    p.emit("addi", rd=S5, rs1=S5, imm=1)
    p.emit("addi", rd=A4, rs1=0, imm=n)
    p.branch("blt", S5, A4, ".jloop")
    p.emit("addi", rd=S4, rs1=S4, imm=1)
    p.branch("blt", S4, A4, ".iloop")
    p.mv(S7, A2)                          # feed C back into A
    p.mv(S8, S0)
    p.li(S9, n * n)
    p.label(".copy")
    p.emit("lw", rd=A3, rs1=S7, imm=0)
    p.emit("sw", rs1=S8, rs2=A3, imm=0)
    p.emit("addi", rd=S7, rs1=S7, imm=4)
    p.emit("addi", rd=S8, rs1=S8, imm=4)
    p.emit("addi", rd=S9, rs1=S9, imm=-1)
    p.bnez(S9, ".copy")
    _iter_loop_end(p, ".it")
    _dump_mem(p, "mmC", n * n)
    p.halt()
    p.align(4)
    seed = 0x2545F491
    vals = []
    for _ in range(2 * n * n):
        seed = (seed * 1103515245 + 12345) & 0xFFFFFFFF
        vals.append((seed >> 16) % 201 - 100)
    p.label("mmA")
    for v in vals[:n * n]:
        p.word(v)
    p.label("mmB")
    for v in vals[n * n:]:
        p.word(v)
    p.label("mmC")
    p.space(n * n * 4)


@_kernel("modexp", "int", 24)
def _k_modexp(p, iters):
    """Square-and-multiply modular exponentiation, modulus 60013.

    The modulus keeps every product under 2^32 so only 32-bit multiply
    and remainder are needed.
    """
    p.li(S0, 7)                # base
    p.li(S1, 60013)            # modulus (prime)
    p.li(S7, 0x12D687)         # exponent, evolving
    p.li(S6, 0)                # signature
    p.li(A7, iters)
    p.label(".it")
    p.li(S2, 1)                # result
    p.mv(S3, S0)               # running square
    p.mv(S5, S7)
    p.li(S4, 32)
    p.label(".bits")
    p.emit("andi", rd=A2, rs1=S5, imm=1)
    p.beqz(A2, ".nomul")
    p.mul(A3, S2, S3)
    p.remu(S2, A3, S1)
    p.label(".nomul")
    p.mul(A3, S3, S3)
    p.remu(S3, A3, S1)
    p.emit("srli", rd=S5, rs1=S5, imm=1)
    p.emit("addi", rd=S4, rs1=S4, imm=-1)
    p.bnez(S4, ".bits")
    p.emit("slli", rd=A2, rs1=S6, imm=5)
    p.emit("srli", rd=A3, rs1=S6, imm=27)
    p.emit("or", rd=S6, rs1=A2, rs2=A3)
    p.emit("xor", rd=S6, rs1=S6, rs2=S2)
    p.emit("addi", rd=S0, rs1=S2, imm=17)  # next base, still < 2^16
    p.emit("slli", rd=A2, rs1=S2, imm=16)
    p.emit("xor", rd=S7, rs1=S7, rs2=A2)
    p.emit("ori", rd=S7, rs1=S7, imm=1)
    _iter_loop_end(p, ".it")
    _dump_reg(p, S6)
    _dump_reg(p, S2)
    p.halt()


@_kernel("mandel", "int", 4)
def _k_mandel(p, iters):
    """Q16.16 fixed-point escape counts over an 8x6 grid.

    Each full product needs both halves of a 32x32 multiply, so the
    kernel leans on mul and mulh together.
    """
    step = 24576               # 0.375 in Q16.16
    maxiter = 16

    def q16mul(rd, ra, rb):
        p.mulh(A4, ra, rb)
        p.mul(A5, ra, rb)
        p.emit("slli", rd=A4, rs1=A4, imm=16)
        p.emit("srli", rd=A5, rs1=A5, imm=16)
        p.emit("or", rd=rd, rs1=A4, rs2=A5)

    p.li(S5, 0)                # signature
    p.li(S8, 4 << 16)          # escape bound
    p.li(S9, -(2 << 16))       # frame origin, drifts per unit
    p.li(S11, maxiter)
    p.li(A7, iters)
    p.label(".it")
    p.li(S3, -(1 << 16) - (1 << 13))      # cy = -1.125
    p.li(S7, 0)                # row
    p.label(".row")
    p.mv(S2, S9)               # cx
    p.li(S6, 0)                # column
    p.label(".col")
    p.li(S0, 0)                # zr
    p.li(S1, 0)                # zi
    p.li(S4, 0)                # escape count
    p.label(".z")
    q16mul(A2, S0, S0)
    q16mul(A3, S1, S1)
    p.emit("add", rd=S10, rs1=A2, rs2=A3)
    p.branch("blt", S8, S10, ".esc")
    q16mul(A6, S0, S1)
    p.emit("slli", rd=A6, rs1=A6, imm=1)
    p.emit("add", rd=S1, rs1=A6, rs2=S3)
    p.emit("sub", rd=A6, rs1=A2, rs2=A3)
    p.emit("add", rd=S0, rs1=A6, rs2=S2)
    p.emit("addi", rd=S4, rs1=S4, imm=1)
    p.branch("blt", S4, S11, ".z")
    p.label(".esc")
    p.emit("slli", rd=A4, rs1=S5, imm=5)
    p.emit("srli", rd=A5, rs1=S5, imm=27)
    p.emit("or", rd=S5, rs1=A4, rs2=A5)
    p.emit("xor", rd=S5, rs1=S5, rs2=S4)
    p.li(A4, step)
    p.emit("add", rd=S2, rs1=S2, rs2=A4)
    p.emit("addi", rd=S6, rs1=S6, imm=1)
    p.emit("addi", rd=A4, rs1=0, imm=8)
    p.branch("blt", S6, A4, ".col")
    p.li(A4, step)
    p.emit("add", rd=S3, rs1=S3, rs2=A4)
    p.emit("addi", rd=S7, rs1=S7, imm=1)
    p.emit("addi", rd=A4, rs1=0, imm=6)
    p.branch("blt", S7, A4, ".row")
    p.emit("addi", rd=S9, rs1=S9, imm=256)  # shift frame by 1/256
    _iter_loop_end(p, ".it")
    _dump_reg(p, S5)
    p.halt()


# ---------- plain kernels (no multiply/divide/float) ----------

@_kernel("crc32", "plain", 16)
def _k_crc32(p, iters):
    """Bitwise CRC-32 over 64 generated bytes per unit."""
    p.li(S0, -1)               # crc register
    p.li(S1, 0x1B570A93)       # byte generator state
    p.li(S3, 0xEDB88320)       # reversed polynomial
    p.li(A7, iters)
    p.label(".it")
    p.li(S2, 64)
    p.label(".byte")
    _xorshift32(p, S1, A2)
    p.emit("andi", rd=A2, rs1=S1, imm=255)
    p.emit("xor", rd=S0, rs1=S0, rs2=A2)
    p.li(S4, 8)
    p.label(".bit")
    p.emit("andi", rd=A2, rs1=S0, imm=1)
    p.emit("srli", rd=S0, rs1=S0, imm=1)
    p.beqz(A2, ".noxor")
    p.emit("xor", rd=S0, rs1=S0, rs2=S3)
    p.label(".noxor")
    p.emit("addi", rd=S4, rs1=S4, imm=-1)
    p.bnez(S4, ".bit")
    p.emit("addi", rd=S2, rs1=S2, imm=-1)
    p.bnez(S2, ".byte")
    _iter_loop_end(p, ".it")
    _dump_reg(p, S0)
    _dump_reg(p, S1)
    p.halt()


@_kernel("sort", "plain", 8)
def _k_sort(p, iters):
    """Insertion sort of 48 generated words, unsigned order."""
    n = 48
    p.la(S2, "srtbuf")
    p.li(S10, 0x9E3779B9)      # per-unit seed, evolves
    p.li(A7, iters)
    p.label(".it")
    p.mv(S1, S10)
    p.mv(S4, S2)
    p.li(S3, n)
    p.label(".fill")
    _xorshift32(p, S1, A2)
    p.emit("sw", rs1=S4, rs2=S1, imm=0)
    p.emit("addi", rd=S4, rs1=S4, imm=4)
    p.emit("addi", rd=S3, rs1=S3, imm=-1)
    p.bnez(S3, ".fill")
    # insertion pass: s5 walks &buf[i], a3 holds the key
    p.emit("addi", rd=S5, rs1=S2, imm=4)
    p.li(S3, n - 1)
    p.label(".outer")
    p.emit("lw", rd=A3, rs1=S5, imm=0)
    p.emit("addi", rd=A5, rs1=S5, imm=-4)
    p.label(".inner")
    p.branch("bltu", A5, S2, ".place")
    p.emit("lw", rd=A6, rs1=A5, imm=0)
    p.branch("bgeu", A3, A6, ".place")
    p.emit("sw", rs1=A5, rs2=A6, imm=4)
    p.emit("addi", rd=A5, rs1=A5, imm=-4)
    p.j(".inner")
    p.label(".place")
    p.emit("sw", rs1=A5, rs2=A3, imm=4)
    p.emit("addi", rd=S5, rs1=S5, imm=4)
    p.emit("addi", rd=S3, rs1=S3, imm=-1)
    p.bnez(S3, ".outer")
    p.emit("addi", rd=S10, rs1=S10, imm=0x55)
    _iter_loop_end(p, ".it")
    _dump_mem(p, "srtbuf", n)
    p.halt()
    p.align(4)
    p.label("srtbuf")
    p.space(n * 4)


@_kernel("fsm", "plain", 16)
def _k_fsm(p, iters):
    """Table-driven 8-state machine over 256 generated symbols."""
    p.li(S0, 0)                # state
    p.li(S1, 0x8BADF00D)       # symbol generator
    p.li(S2, 0)                # accepting-state count
    p.la(S3, "fsmtab")
    p.li(S4, 0b10100100)       # accept mask: states 2, 5, 7
    p.li(A7, iters)
    p.label(".it")
    p.li(S5, 256)
    p.label(".sym")
    _xorshift32(p, S1, A2)
    p.emit("andi", rd=A2, rs1=S1, imm=7)
    p.emit("slli", rd=A3, rs1=S0, imm=5)
    p.emit("slli", rd=A4, rs1=A2, imm=2)
    p.emit("add", rd=A3, rs1=A3, rs2=A4)
    p.emit("add", rd=A3, rs1=A3, rs2=S3)
    p.emit("lw", rd=S0, rs1=A3, imm=0)
    p.emit("srl", rd=A4, rs1=S4, rs2=S0)
    p.emit("andi", rd=A4, rs1=A4, imm=1)
    p.emit("add", rd=S2, rs1=S2, rs2=A4)
    p.emit("addi", rd=S5, rs1=S5, imm=-1)
    p.bnez(S5, ".sym")
    _iter_loop_end(p, ".it")
    _dump_reg(p, S2)
    _dump_reg(p, S0)
    _dump_reg(p, S1)
    p.halt()
    p.align(4)
    p.label("fsmtab")
    for s in range(8):
        for c in range(8):
            p.word((5 * s + 3 * c + 1) % 8)


# ---------- float kernels ----------

@_kernel("axpy", "float", 48)
def _k_axpy(p, iters):
    """y[i] = a*x[i] + y[i] with a a power of two, halving per unit.

    Power-of-two multipliers keep every product exact, so the fused
    hardware op and the two-step software lowering agree bit for bit.
    """
    n = 32
    p.la(S0, "axX")
    p.la(S1, "axY")
    p.fli(0, f32(1.0))         # a
    p.fli(1, f32(0.5))
    p.li(A7, iters)
    p.label(".it")
    p.mv(A3, S0)
    p.mv(A4, S1)
    p.li(A2, n)
    p.label(".elem")
    p.fload(2, A3, 0)
    p.fload(3, A4, 0)
    p.fmadd(3, 0, 2, 3)
    p.fstore(3, A4, 0)
    p.emit("addi", rd=A3, rs1=A3, imm=4)
    p.emit("addi", rd=A4, rs1=A4, imm=4)
    p.emit("addi", rd=A2, rs1=A2, imm=-1)
    p.bnez(A2, ".elem")
    p.fmul(0, 0, 1)
    _iter_loop_end(p, ".it")
    p.fload(2, S1, 0)
    p.fcvt_ws(A2, 2)           # truncated y[0] exercises the cvt path
    _dump_reg(p, A2)
    _dump_mem(p, "axY", n)
    p.halt()
    p.align(4)
    p.label("axX")
    for i in range(n):
        p.word(f32((i + 1) / 8.0))
    p.label("axY")
    for i in range(n):
        p.word(f32((n - i) / 16.0))


@_kernel("nbody", "float", 40)
def _k_nbody(p, iters):
    """Four softened gravitating bodies in the plane, one step per unit.

    No fused ops: every operation is individually exact under round to
    nearest even, so all four targets integrate identical trajectories.
    The time step is a power of two, keeping the position update's
    multiply exact as well.
    """
    pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    p.la(S0, "nbody0")
    p.li(S1, 0)                # close-encounter count
    p.fli(7, f32(1.0))
    p.fli(8, f32(0.25))        # softening, added to r^2
    p.fli(9, f32(0.0625))      # dt = 2^-4
    p.li(A7, iters)
    p.label(".it")
    for i, j in pairs:
        oi, oj = i * 16, j * 16
        p.fload(0, S0, oi + 0)
        p.fload(1, S0, oi + 4)
        p.fload(2, S0, oj + 0)
        p.fload(3, S0, oj + 4)
        p.fsub(2, 2, 0)        # dx
        p.fsub(3, 3, 1)        # dy
        p.fmul(0, 2, 2)
        p.fmul(1, 3, 3)
        p.fadd(0, 0, 1)
        p.fadd(0, 0, 8)        # r2, softened
        p.fsqrt(1, 0)
        p.fcmp_lt(A2, 0, 7)    # close encounter: r2 < 1
        p.emit("add", rd=S1, rs1=S1, rs2=A2)
        p.fmul(0, 0, 1)        # r^3
        p.fdiv(1, 9, 0)        # w = dt / r^3
        p.fmul(2, 2, 1)        # impulse x
        p.fmul(3, 3, 1)        # impulse y
        p.fload(0, S0, oi + 8)
        p.fadd(0, 0, 2)
        p.fstore(0, S0, oi + 8)
        p.fload(0, S0, oi + 12)
        p.fadd(0, 0, 3)
        p.fstore(0, S0, oi + 12)
        p.fload(0, S0, oj + 8)
        p.fsub(0, 0, 2)
        p.fstore(0, S0, oj + 8)
        p.fload(0, S0, oj + 12)
        p.fsub(0, 0, 3)
        p.fstore(0, S0, oj + 12)
    for k in range(4):
        ok = k * 16
        p.fload(0, S0, ok + 8)
        p.fmul(0, 0, 9)
        p.fload(1, S0, ok + 0)
        p.fadd(1, 1, 0)
        p.fstore(1, S0, ok + 0)
        p.fload(0, S0, ok + 12)
        p.fmul(0, 0, 9)
        p.fload(1, S0, ok + 4)
        p.fadd(1, 1, 0)
        p.fstore(1, S0, ok + 4)
    _iter_loop_end(p, ".it")
    p.fcvt_sw(0, S1)           # fold the counter through the cvt path
    p.fload(1, S0, 8)
    p.fadd(1, 1, 0)
    p.fstore(1, S0, 8)
    _dump_reg(p, S1)
    _dump_mem(p, "nbody0", 16)
    p.halt()
    p.align(4)
    p.label("nbody0")
    for x, y, vx, vy in [(-1.0, 0.0, 0.0, 0.125),
                         (1.0, 0.0, 0.0, -0.125),
                         (0.0, 0.75, 0.0625, 0.0),
                         (0.25, -0.5, -0.0625, 0.03125)]:
        p.word(f32(x))
        p.word(f32(y))
        p.word(f32(vx))
        p.word(f32(vy))


@_kernel("poly", "float", 32)
def _k_poly(p, iters):
    """Degree-8 Horner evaluation at power-of-two points.

    Power-of-two evaluation points make every fused product exact; the
    coefficients drift each unit so successive evaluations differ.
    """
    degree = 8
    xs = [0.5, 2.0, 0.25, 4.0, 1.0, 0.125]
    p.la(S0, "polyC")
    p.la(S1, "polyX")
    p.fli(3, 0)                # running sum
    p.fli(4, f32(1023.0 / 1024.0))
    p.fli(5, f32(2.0 ** -20))
    p.li(A7, iters)
    p.label(".it")
    p.mv(A2, S1)
    p.li(A3, len(xs))
    p.label(".x")
    p.fload(1, A2, 0)
    p.emit("addi", rd=A4, rs1=S0, imm=4 * degree)
    p.fload(0, A4, 0)
    p.li(A5, degree)
    p.label(".horner")
    p.emit("addi", rd=A4, rs1=A4, imm=-4)
    p.fload(2, A4, 0)
    p.fmadd(0, 0, 1, 2)
    p.emit("addi", rd=A5, rs1=A5, imm=-1)
    p.bnez(A5, ".horner")
    p.fadd(3, 3, 0)
    p.emit("addi", rd=A2, rs1=A2, imm=4)
    p.emit("addi", rd=A3, rs1=A3, imm=-1)
    p.bnez(A3, ".x")
    p.fcvt_sw(6, A7)           # unit counter enters the data stream
    p.fmul(6, 6, 5)
    p.mv(A4, S0)
    p.li(A5, degree + 1)
    p.label(".evolve")
    p.fload(2, A4, 0)
    p.fmul(2, 2, 4)
    p.fstore(2, A4, 0)
    p.emit("addi", rd=A4, rs1=A4, imm=4)
    p.emit("addi", rd=A5, rs1=A5, imm=-1)
    p.bnez(A5, ".evolve")
    p.fload(2, S0, 0)
    p.fadd(2, 2, 6)
    p.fstore(2, S0, 0)
    _iter_loop_end(p, ".it")
    p.la(A2, "polyS")
    p.fstore(3, A2, 0)
    _dump_mem(p, "polyC", degree + 1)
    _dump_mem(p, "polyS", 1)
    p.halt()
    p.align(4)
    p.label("polyC")
    for k in range(degree + 1):
        p.word(f32((-1.0) ** k * (k + 2) / 4.0))
    p.label("polyX")
    for x in xs:
        p.word(f32(x))
    p.label("polyS")
    p.space(4)


@_kernel("qnorm", "mixed", 24)
def _k_qnorm(p, iters):
    """Fixed-point vector renormalization with a sporadic float core.

    Each unit does dozens of integer multiplies but only four float
    operations (convert, square root, divide, convert back), the shape
    where soft-float on an integer-only build loses badly while a float
    pipeline sits idle most of the time.
    """
    n = 16
    p.la(S0, "qvec")
    p.fli(1, f32(2.0 ** 28))   # scale numerator, exact
    p.li(A7, iters)
    p.label(".it")
    p.mv(A2, S0)
    p.li(A3, n)
    p.li(S1, 0)                # dot accumulator
    p.label(".dot")
    p.emit("lw", rd=A4, rs1=A2, imm=0)
    p.mul(A5, A4, A4)
    p.emit("add", rd=S1, rs1=S1, rs2=A5)
    p.emit("addi", rd=A2, rs1=A2, imm=4)
    p.emit("addi", rd=A3, rs1=A3, imm=-1)
    p.bnez(A3, ".dot")
    p.emit("addi", rd=S1, rs1=S1, imm=1)   # keep the dot positive
    p.fcvt_sw(0, S1)
    p.fsqrt(0, 0)              # vector norm
    p.fdiv(2, 1, 0)            # 2^28 / norm
    p.fcvt_ws(A6, 2)           # Q16 rescale factor, ~4096/norm
    p.mv(A2, S0)
    p.la(A3, "qtweak")
    p.li(S1, n)
    p.label(".scale")
    p.emit("lw", rd=A4, rs1=A2, imm=0)
    p.mulh(A5, A4, A6)
    p.mul(A4, A4, A6)
    p.emit("slli", rd=A5, rs1=A5, imm=16)
    p.emit("srli", rd=A4, rs1=A4, imm=16)
    p.emit("or", rd=A4, rs1=A4, rs2=A5)
    p.emit("lw", rd=A5, rs1=A3, imm=0)
    p.emit("add", rd=A4, rs1=A4, rs2=A5)
    p.emit("sw", rs1=A2, rs2=A4, imm=0)
    p.emit("addi", rd=A2, rs1=A2, imm=4)
    p.emit("addi", rd=A3, rs1=A3, imm=4)
    p.emit("addi", rd=S1, rs1=S1, imm=-1)
    p.bnez(S1, ".scale")
    _iter_loop_end(p, ".it")
    _dump_reg(p, A6)
    _dump_mem(p, "qvec", n)
    p.halt()
    p.align(4)
    p.label("qvec")
    for i in range(n):
        p.word((i * 211 + 64) % 1500 + 100)
    p.label("qtweak")
    for i in range(n):
        p.word((i * 7) % 11 - 5)


# ---------- synthetic group exercisers (single-target) ----------

@_kernel("mgrind", "grind", 256, targets=("rv32imf",))
def _k_mgrind(p, iters):
    """Hammers the integer multiply, divide, and remainder groups."""
    p.li(S0, 0x1234567)
    p.li(S1, 0x89ABCDF)
    p.li(S2, 0x2468ACE)
    p.li(A7, iters)
    p.label(".it")
    p.mul(S0, S0, S1)
    p.mulh(S3, S1, S2)
    p.mulhu(S4, S0, S2)
    p.emit("ori", rd=A2, rs1=S1, imm=1)
    p.divu(S5, S0, A2)
    p.div(S6, S3, A2)
    p.rem(S7, S4, A2)
    p.remu(S8, S2, A2)
    p.emit("xor", rd=S1, rs1=S5, rs2=S6)
    p.emit("ori", rd=S1, rs1=S1, imm=5)
    p.emit("add", rd=S2, rs1=S7, rs2=S8)
    p.emit("ori", rd=S2, rs1=S2, imm=3)
    p.emit("xor", rd=S0, rs1=S0, rs2=S7)
    p.emit("ori", rd=S0, rs1=S0, imm=1)
    _iter_loop_end(p, ".it")
    for r in (S0, S1, S2, S5, S6, S7, S8):
        _dump_reg(p, r)
    p.halt()


@_kernel("fgrind", "grind", 512, targets=("rv32imf",))
def _k_fgrind(p, iters):
    """Hammers float add/sub, multiply, and compare groups."""
    p.fli(0, f32(1.5))
    p.fli(1, f32(1.25))
    p.fli(2, f32(0.96875))
    p.fli(3, f32(1.0))
    p.fli(4, f32(0.5))
    p.li(S1, 0)
    p.li(A7, iters)
    p.label(".it")
    p.fadd(0, 0, 1)
    p.fmul(1, 1, 2)
    p.fcmp_lt(A2, 1, 4)
    p.emit("add", rd=S1, rs1=S1, rs2=A2)
    p.beqz(A2, ".keep")
    p.fadd(1, 1, 3)
    p.label(".keep")
    p.fsub(0, 0, 1)
    _iter_loop_end(p, ".it")
    p.fmv_to_x(A2, 0)
    _dump_reg(p, A2)
    _dump_reg(p, S1)
    p.halt()


@_kernel("fgrind2", "grind", 512, targets=("rv32imf",))
def _k_fgrind2(p, iters):
    """Hammers float divide, square root, and fused multiply-add."""
    p.fli(0, f32(2.0))
    p.fli(3, f32(0.5))
    p.fli(4, f32(1.0))
    p.li(A7, iters)
    p.label(".it")
    p.fdiv(1, 4, 0)
    p.fsqrt(2, 0)
    p.fmadd(0, 1, 2, 3)        # x = 1/sqrt(x) + 1/2, bounded attractor
    _iter_loop_end(p, ".it")
    p.fmv_to_x(A2, 0)
    _dump_reg(p, A2)
    p.halt()
