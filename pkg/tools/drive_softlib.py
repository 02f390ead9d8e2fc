"""Mass-check softlib routines in the simulator against tests/oracle_fp.

Scratch driver used while bringing the library up; the durable version
of this check lives in tests/test_softlib.py.
"""

import random
import struct
import sys

sys.path.insert(0, "tests")

import oracle_fp as orc

from slotsim.kernels.builder import Prog, A0, A1, S0, S1, S2
from slotsim.machine import Machine, SimConfig

IN_BASE = 0x10000
OUT_BASE = 0x80000
MEM = 1 << 21


def build_table_prog(target, routine, pair_out):
    p = Prog(target)
    p.li(S0, IN_BASE)
    p.li(S1, OUT_BASE)
    p.li(S2, 0)              # patched: case count via a2? keep in s2 below
    # count loaded from memory so one image serves any n
    p.emit("lw", rd=S2, rs1=S0, imm=0)
    p.emit("addi", rd=S0, rs1=S0, imm=4)
    p.label("loop")
    p.emit("lw", rd=A0, rs1=S0, imm=0)
    p.emit("lw", rd=A1, rs1=S0, imm=4)
    p._need(routine)
    p.call("__" + routine)
    p.emit("sw", rs1=S1, rs2=A0, imm=0)
    if pair_out:
        p.emit("sw", rs1=S1, rs2=A1, imm=4)
    p.emit("addi", rd=S0, rs1=S0, imm=8)
    p.emit("addi", rd=S1, rs1=S1, imm=8)
    p.emit("addi", rd=S2, rs1=S2, imm=-1)
    p.bnez(S2, "loop")
    p.halt()
    return p.assemble(base=0)


def run_cases(target, routine, cases, pair_out):
    img = build_table_prog(target, routine, pair_out)
    m = Machine(SimConfig(mem_size=MEM))
    m.mem[0:len(img)] = img
    blob = struct.pack("<I", len(cases))
    blob += b"".join(struct.pack("<II", a, b) for a, b in cases)
    m.mem[IN_BASE:IN_BASE + len(blob)] = blob
    m.pc = 0
    r = m.run_until(budget_cycle=2_000_000_000)
    assert m.halted, f"{routine}/{target}: did not halt ({r})"
    out = []
    for i in range(len(cases)):
        lo, hi = struct.unpack_from("<II", m.mem, OUT_BASE + 8 * i)
        out.append((lo, hi) if pair_out else lo)
    return out


def rnd_normal(rng, lo_e=30, hi_e=225):
    s = rng.getrandbits(1)
    e = rng.randrange(lo_e, hi_e + 1)
    f = rng.getrandbits(23)
    return (s << 31) | (e << 23) | f


def check(target, routine, cases, ref, pair_out=False):
    got = run_cases(target, routine, cases, pair_out)
    bad = 0
    for (a, b), g in zip(cases, got):
        want = ref(a, b)
        if pair_out:
            want = tuple(w & 0xFFFFFFFF for w in want)
        else:
            want &= 0xFFFFFFFF
        if g != want:
            bad += 1
            if bad <= 5:
                print(f"  MISMATCH {routine}/{target} a={a:#010x} "
                      f"b={b:#010x} got={g} want={want}")
    print(f"{routine:12s} {target:7s} {len(cases)} cases, {bad} bad")
    return bad


def main():
    rng = random.Random(0xB00F)
    n = 400
    total = 0

    ints = [(rng.getrandbits(32), rng.getrandbits(32)) for _ in range(n)]
    ints += [(0, 0), (1, 0), (0, 1), (0xFFFFFFFF, 0xFFFFFFFF),
             (0x80000000, 0xFFFFFFFF), (0x80000000, 0x80000000),
             (7, 3), (0xFFFFFFFF, 1), (1, 0xFFFFFFFF)]
    divs = [(a, b) for a, b in ints] + [(a, 0) for a, _ in ints[:8]]

    floats = [(rnd_normal(rng), rnd_normal(rng)) for _ in range(n)]
    floats += [(0x00000000, rnd_normal(rng)), (rnd_normal(rng), 0x00000000),
               (0x80000000, 0x00000000), (0x80000000, 0x80000000),
               (0x3F800000, 0xBF800000),       # 1 + (-1) exact cancel
               (0x3F800001, 0xBF800000)]
    # add cases with close exponents to hammer cancellation paths
    for _ in range(n):
        a = rnd_normal(rng, 60, 200)
        e = (a >> 23) & 0xFF
        d = rng.randrange(-2, 3)
        b = (rng.getrandbits(1) << 31) | ((e + d) << 23) | rng.getrandbits(23)
        floats.append((a, b))
    # products and quotients must stay normal: the library flushes
    # subnormal results to zero by design
    muls = [(rnd_normal(rng, 70, 185), rnd_normal(rng, 70, 185))
            for _ in range(n)]
    muls += [(0x00000000, rnd_normal(rng)), (rnd_normal(rng), 0x80000000)]
    qdivs = [(rnd_normal(rng, 70, 185), rnd_normal(rng, 70, 185))
             for _ in range(n)]
    qdivs += [(0x00000000, rnd_normal(rng)), (0x80000000, rnd_normal(rng))]

    sqrts = [(rnd_normal(rng) & 0x7FFFFFFF, 0) for _ in range(n)]
    sqrts += [(0, 0), (0x80000000, 0), (0x3F800000, 0), (0x40800000, 0)]

    sints = [(rng.getrandbits(32), 0) for _ in range(n)]
    sints += [(0, 0), (1, 0), (0xFFFFFFFF, 0), (0x80000000, 0),
              (0x7FFFFFFF, 0), (0x00FFFFFF, 0), (0x01000001, 0)]

    fixes = [(rnd_normal(rng, 100, 170), 0) for _ in range(n)]
    fixes += [(0x4EFFFFFF, 0), (0x4F000000, 0), (0xCF000000, 0),
              (0xCF000001, 0), (0x4F7FFFFF, 0), (0x4F800000, 0),
              (0x3F000000, 0), (0xBF000000, 0), (0, 0), (0x80000000, 0)]

    for target in ("rv32i", "rv32im"):
        total += check(target, "umul64", ints,
                       lambda a, b: (orc.mul(a, b), orc.mulhu(a, b)), True)
        total += check(target, "mul64", ints,
                       lambda a, b: (orc.mul(a, b), orc.mulh(a, b)), True)
        total += check(target, "udivmod", divs,
                       lambda a, b: (orc.divu(a, b), orc.remu(a, b)), True)
        total += check(target, "divmod", divs,
                       lambda a, b: (orc.div(a, b), orc.rem(a, b)), True)
        total += check(target, "addsf3", floats, orc.fadd)
        total += check(target, "mulsf3", muls, orc.fmul)
        total += check(target, "divsf3", qdivs, orc.fdiv)
        total += check(target, "sqrtsf2", sqrts, lambda a, b: orc.fsqrt(a))
        total += check(target, "floatsisf", sints,
                       lambda a, b: orc.fcvt_s_w(a))
        total += check(target, "floatunsisf", sints,
                       lambda a, b: orc.fcvt_s_wu(a))
        total += check(target, "fixsfsi", fixes,
                       lambda a, b: orc.fcvt_w_s(a))
        total += check(target, "fixunssfsi", fixes,
                       lambda a, b: orc.fcvt_wu_s(a))
    print("TOTAL BAD:", total)
    return 1 if total else 0


if __name__ == "__main__":
    sys.exit(main())
