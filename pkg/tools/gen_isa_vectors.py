#!/usr/bin/env python3
"""Generate tests/data/isa_vectors.jsonl.

Each line is one single-instruction test case: sparse initial register
and memory state, the instruction word, and the expected architectural
effects.  Expected values come from tests/oracle_fp.py (integer-only
reference) and from plain Python integer expressions written here,
never from the simulator's own execution or softfloat code.

Run from the repo root:  python3 tools/gen_isa_vectors.py
"""

import json
import os
import random
import sys

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, os.path.join(ROOT, "tests"))
sys.path.insert(0, os.path.join(ROOT, "src"))

import oracle_fp as orc               # noqa: E402
from slotsim.isa import Instr, encode  # noqa: E402

random.seed(0x5107F10A)

M32 = 0xFFFFFFFF
PC = 0x100
OUT = os.path.join(ROOT, "tests", "data", "isa_vectors.jsonl")

vectors = []


def emit(name, kind, setup=None, want=None, mem=None, want_mem=None,
         want_pc=None, **enc):
    word = encode(Instr(kind, **enc))
    rec = {"name": name, "word": word, "pc": PC,
           "setup": setup or {}, "want": want or {}}
    if mem:
        rec["mem"] = {str(k): v for k, v in mem.items()}
    if want_mem:
        rec["want_mem"] = {str(k): v for k, v in want_mem.items()}
    rec["want_pc"] = PC + 4 if want_pc is None else want_pc
    vectors.append(rec)


def s32(v):
    return v - ((v >> 31) << 32)


def rnd32():
    return random.getrandbits(32)


def simm(bits):
    return random.getrandbits(bits) - (1 << (bits - 1))


# ---------- RV32I ALU ----------

ALU_R = {
    "add": lambda a, b: (a + b) & M32,
    "sub": lambda a, b: (a - b) & M32,
    "sll": lambda a, b: (a << (b & 31)) & M32,
    "slt": lambda a, b: int(s32(a) < s32(b)),
    "sltu": lambda a, b: int(a < b),
    "xor": lambda a, b: a ^ b,
    "srl": lambda a, b: a >> (b & 31),
    "sra": lambda a, b: (s32(a) >> (b & 31)) & M32,
    "or": lambda a, b: a | b,
    "and": lambda a, b: a & b,
}

edge_ops = [0, 1, M32, 0x80000000, 0x7FFFFFFF, 31, 32, 0xDEADBEEF]
for op, fn in ALU_R.items():
    cases = [(rnd32(), rnd32()) for _ in range(3)]
    cases += [(random.choice(edge_ops), random.choice(edge_ops))
              for _ in range(3)]
    for i, (a, b) in enumerate(cases):
        emit(f"{op}-{i}", op, setup={"x5": a, "x6": b},
             want={"x7": fn(a, b)}, rd=7, rs1=5, rs2=6)

ALU_I = {
    "addi": lambda a, i: (a + i) & M32,
    "slti": lambda a, i: int(s32(a) < i),
    "sltiu": lambda a, i: int(a < (i & M32)),
    "xori": lambda a, i: a ^ (i & M32),
    "ori": lambda a, i: a | (i & M32),
    "andi": lambda a, i: a & (i & M32),
}
for op, fn in ALU_I.items():
    for i in range(4):
        a, imm = rnd32(), simm(12)
        emit(f"{op}-{i}", op, setup={"x5": a}, want={"x7": fn(a, imm)},
             rd=7, rs1=5, imm=imm)

for op, fn in [("slli", lambda a, s: (a << s) & M32),
               ("srli", lambda a, s: a >> s),
               ("srai", lambda a, s: (s32(a) >> s) & M32)]:
    for i, sh in enumerate([0, 1, 31, random.randrange(32)]):
        a = rnd32()
        emit(f"{op}-{i}", op, setup={"x5": a}, want={"x7": fn(a, sh)},
             rd=7, rs1=5, imm=sh)

u = random.getrandbits(20) << 12
u_s = s32(u)   # encode takes the sign-extended form of the constant
emit("lui-0", "lui", want={"x7": u}, rd=7, imm=u_s)
emit("lui-max", "lui", want={"x7": 0xFFFFF000}, rd=7, imm=s32(0xFFFFF000))
emit("auipc-0", "auipc", want={"x7": (PC + u) & M32}, rd=7, imm=u_s)

# writes to x0 are dropped
emit("x0-sink", "addi", setup={"x5": 7}, want={"x0": 0}, rd=0, rs1=5, imm=1)

# ---------- control flow ----------

emit("jal-fwd", "jal", want={"x1": PC + 4}, want_pc=PC + 0x40,
     rd=1, imm=0x40)
emit("jal-back", "jal", want={"x1": PC + 4}, want_pc=PC - 0x40,
     rd=1, imm=-0x40)
emit("jalr-0", "jalr", setup={"x5": 0x2000}, want={"x1": PC + 4},
     want_pc=0x2004, rd=1, rs1=5, imm=4)
emit("jalr-clears-bit0", "jalr", setup={"x5": 0x2001}, want={},
     want_pc=0x2000, rd=0, rs1=5, imm=0)

BR = {"beq": lambda a, b: a == b, "bne": lambda a, b: a != b,
      "blt": lambda a, b: s32(a) < s32(b),
      "bge": lambda a, b: s32(a) >= s32(b),
      "bltu": lambda a, b: a < b, "bgeu": lambda a, b: a >= b}
br_cases = [(5, 5), (5, 6), (0x80000000, 1), (1, 0x80000000),
            (M32, 0), (0, M32)]
for op, fn in BR.items():
    for i, (a, b) in enumerate(br_cases):
        emit(f"{op}-{i}", op, setup={"x5": a, "x6": b},
             want_pc=PC + 0x20 if fn(a, b) else PC + 4,
             rs1=5, rs2=6, imm=0x20)

# ---------- loads and stores ----------

BASE = 0x4000
word = 0x89ABCDEF
mem0 = {BASE: word}
emit("lw-0", "lw", setup={"x5": BASE}, mem=mem0,
     want={"x7": word}, rd=7, rs1=5, imm=0)
emit("lh-signext", "lh", setup={"x5": BASE}, mem=mem0,
     want={"x7": 0xFFFFCDEF}, rd=7, rs1=5, imm=0)
emit("lh-upper", "lh", setup={"x5": BASE}, mem=mem0,
     want={"x7": 0xFFFF89AB}, rd=7, rs1=5, imm=2)
emit("lhu-0", "lhu", setup={"x5": BASE}, mem=mem0,
     want={"x7": 0xCDEF}, rd=7, rs1=5, imm=0)
emit("lb-signext", "lb", setup={"x5": BASE + 4}, mem=mem0,
     want={"x7": 0xFFFFFFEF}, rd=7, rs1=5, imm=-4)
emit("lbu-0", "lbu", setup={"x5": BASE}, mem=mem0,
     want={"x7": 0xEF}, rd=7, rs1=5, imm=0)
emit("flw-0", "flw", setup={"x5": BASE}, mem=mem0,
     want={"f7": word}, rd=7, rs1=5, imm=0)

emit("sw-0", "sw", setup={"x5": BASE, "x6": 0x13572468},
     want_mem={BASE + 8: 0x13572468}, rs1=5, rs2=6, imm=8)
emit("sh-low", "sh", setup={"x5": BASE, "x6": 0xAABBCCDD}, mem=mem0,
     want_mem={BASE: 0x89ABCCDD}, rs1=5, rs2=6, imm=0)
emit("sb-neg-off", "sb", setup={"x5": BASE + 4, "x6": 0x11223344},
     mem=mem0, want_mem={BASE: 0x89ABCD44}, rs1=5, rs2=6, imm=-4)
emit("fsw-0", "fsw", setup={"x5": BASE, "f6": 0x3F800000},
     want_mem={BASE + 4: 0x3F800000}, rs1=5, rs2=6, imm=4)

# ---------- M extension ----------

m_edges = [(0, 0), (1, 0), (0, 1), (M32, M32), (0x80000000, M32),
           (0x80000000, 1), (M32, 2), (7, 3), ((-7) & M32, 3),
           (7, (-3) & M32), ((-7) & M32, (-3) & M32), (0xDEAD, 0)]
for op, fn in [("mul", orc.mul), ("mulh", orc.mulh),
               ("mulhsu", orc.mulhsu), ("mulhu", orc.mulhu),
               ("div", orc.div), ("divu", orc.divu),
               ("rem", orc.rem), ("remu", orc.remu)]:
    cases = m_edges + [(rnd32(), rnd32()) for _ in range(6)]
    for i, (a, b) in enumerate(cases):
        emit(f"{op}-{i}", op, setup={"x5": a, "x6": b},
             want={"x7": fn(a, b)}, rd=7, rs1=5, rs2=6)

# ---------- F extension ----------

F_SPECIALS = [0, 0x80000000, 0x3F800000, 0xBF800000,     # 0, -0, 1, -1
              0x7F800000, 0xFF800000, 0x7FC00000,        # inf, -inf, qNaN
              0x7F800001,                                # sNaN payload
              0x00000001, 0x007FFFFF, 0x00800000,        # subnormals edge
              0x7F7FFFFF, 0xFF7FFFFF,                    # +-max finite
              0x3F000000, 0x40490FDB, 0xC2F6E979]        # 0.5, pi, -123.456


def fop(n):
    r = random.random()
    if r < 0.4:
        return random.choice(F_SPECIALS)
    if r < 0.8:
        e = random.randrange(100, 156)  # moderate exponents
        return (random.getrandbits(1) << 31) | (e << 23) | \
            random.getrandbits(23)
    return rnd32()


for op, fn in [("fadd.s", orc.fadd), ("fsub.s", orc.fsub),
               ("fmul.s", orc.fmul), ("fdiv.s", orc.fdiv)]:
    cases = [(a, b) for a in F_SPECIALS[:8] for b in (0x3F800000, 0)]
    cases += [(fop(0), fop(0)) for _ in range(14)]
    for i, (a, b) in enumerate(cases):
        emit(f"{op}-{i}", op, setup={"f5": a, "f6": b},
             want={"f7": fn(a, b)}, rd=7, rs1=5, rs2=6)

sqrt_cases = F_SPECIALS + [0x40800000, 0x41100000, 0x42C80000] + \
    [fop(0) for _ in range(10)]
for i, a in enumerate(sqrt_cases):
    emit(f"fsqrt-{i}", "fsqrt.s", setup={"f5": a},
         want={"f7": orc.fsqrt(a)}, rd=7, rs1=5)

for op, neg_a, neg_c in [("fmadd.s", 0, 0), ("fmsub.s", 0, 1),
                         ("fnmsub.s", 1, 0), ("fnmadd.s", 1, 1)]:
    for i in range(12):
        if i < 4:
            a, b, c = (random.choice(F_SPECIALS) for _ in range(3))
        else:
            a, b, c = fop(0), fop(0), fop(0)
        r = orc.fma(a ^ (neg_a << 31), b, c ^ (neg_c << 31))
        emit(f"{op}-{i}", op, setup={"f5": a, "f6": b, "f8": c},
             want={"f7": r}, rd=7, rs1=5, rs2=6, rs3=8)

for op, fn in [("fmin.s", orc.fmin), ("fmax.s", orc.fmax)]:
    cases = [(0, 0x80000000), (0x80000000, 0),
             (0x7FC00000, 0x3F800000), (0x3F800000, 0x7FC00000),
             (0x7FC00000, 0x7FC00000)] + \
        [(fop(0), fop(0)) for _ in range(8)]
    for i, (a, b) in enumerate(cases):
        emit(f"{op}-{i}", op, setup={"f5": a, "f6": b},
             want={"f7": fn(a, b)}, rd=7, rs1=5, rs2=6)

for op, fn in [("feq.s", orc.feq), ("flt.s", orc.flt), ("fle.s", orc.fle)]:
    cases = [(0, 0x80000000), (0x7FC00000, 0x7FC00000),
             (0x3F800000, 0x7FC00000), (0xBF800000, 0x3F800000)] + \
        [(fop(0), fop(0)) for _ in range(8)]
    for i, (a, b) in enumerate(cases):
        emit(f"{op}-{i}", op, setup={"f5": a, "f6": b},
             want={"x7": fn(a, b)}, rd=7, rs1=5, rs2=6)

for op, fn in [("fsgnj.s", orc.fsgnj), ("fsgnjn.s", orc.fsgnjn),
               ("fsgnjx.s", orc.fsgnjx)]:
    for i in range(5):
        a, b = fop(0), fop(0)
        emit(f"{op}-{i}", op, setup={"f5": a, "f6": b},
             want={"f7": fn(a, b)}, rd=7, rs1=5, rs2=6)

cvt_edges = [0, 0x80000000, 0x7FC00000, 0x7F800000, 0xFF800000,
             0x3F000000, 0xBF000000,                     # +-0.5
             0x40200000, 0xC0200000,                     # +-2.5
             0x4EFFFFFF, 0x4F000000, 0xCF000000,         # int32 boundary
             0x4F800000, 0x5F800000, 0xBF800000]         # uint32 boundary
for rm in range(5):
    for i, a in enumerate(cvt_edges + [fop(0) for _ in range(4)]):
        emit(f"fcvt.w.s-rm{rm}-{i}", "fcvt.w.s", setup={"f5": a},
             want={"x7": orc.fcvt_w_s(a, rm) & M32}, rd=7, rs1=5, rm=rm)
        emit(f"fcvt.wu.s-rm{rm}-{i}", "fcvt.wu.s", setup={"f5": a},
             want={"x7": orc.fcvt_wu_s(a, rm)}, rd=7, rs1=5, rm=rm)

int_edges = [0, 1, M32, 0x80000000, 0x7FFFFFFF, 0x00FFFFFF, 0x01000001,
             0xFFFFFF80, 16777217, 2147483647]
for rm in range(5):
    for i, v in enumerate(int_edges + [rnd32() for _ in range(3)]):
        emit(f"fcvt.s.w-rm{rm}-{i}", "fcvt.s.w", setup={"x5": v},
             want={"f7": orc.fcvt_s_w(v, rm)}, rd=7, rs1=5, rm=rm)
        emit(f"fcvt.s.wu-rm{rm}-{i}", "fcvt.s.wu", setup={"x5": v},
             want={"f7": orc.fcvt_s_wu(v, rm)}, rd=7, rs1=5, rm=rm)

emit("fmv.x.w-0", "fmv.x.w", setup={"f5": 0xDEADBEEF},
     want={"x7": 0xDEADBEEF}, rd=7, rs1=5)
emit("fmv.w.x-0", "fmv.w.x", setup={"x5": 0xCAFEF00D},
     want={"f7": 0xCAFEF00D}, rd=7, rs1=5)

# ---------- write it out ----------

os.makedirs(os.path.dirname(OUT), exist_ok=True)
names = set()
for v in vectors:
    assert v["name"] not in names, f"duplicate {v['name']}"
    names.add(v["name"])
with open(OUT, "w") as fh:
    for v in vectors:
        fh.write(json.dumps(v, sort_keys=True) + "\n")
print(f"wrote {len(vectors)} vectors to {OUT}")
