"""Small two-pass assembler with per-target lowering.

One kernel source builds for four targets: rv32i, rv32im, rv32if,
rv32imf.  The integer macro-ops (mul, divu, ...) and the float
macro-ops (fadd, fmul, ... over virtual float registers 0..9) emit the
hardware instruction when the target has it and otherwise a call into
the register-only support routines from softlib.

Register discipline for portable kernels:
  - persistent state lives in s0..s11, a2..a7, sp, gp (never touched
    by lowering);
  - t0..t6, a0, a1 and ra are clobbered by any macro-op, including
    halt/console/iter_tick;
  - virtual float registers map to f8..f17 on F targets and to
    x18..x27 (s2..s11) on the others, so a portable kernel that uses
    vf0..vf9 must leave s2..s11 alone.

Soft float compares implement a total order on non-NaN values and
order -0 below +0; portable kernels must not compare opposite zeros
(IEEE calls them equal, the soft path does not).
"""

from __future__ import annotations

from ..isa import Instr, encode

TARGETS = ("rv32i", "rv32im", "rv32if", "rv32imf")

# x-register aliases
ZERO, RA, SP, GP, TP = 0, 1, 2, 3, 4
T0, T1, T2 = 5, 6, 7
S0, S1 = 8, 9
A0, A1, A2, A3, A4, A5, A6, A7 = range(10, 18)
S2, S3, S4, S5, S6, S7, S8, S9, S10, S11 = range(18, 28)
T3, T4, T5, T6 = 28, 29, 30, 31

MMIO_HI = 0x10000000

_SIGN = 0x80000000


class AsmError(Exception):
    pass


def _split_hi_lo(value):
    value &= 0xFFFFFFFF
    lo = ((value & 0xFFF) ^ 0x800) - 0x800
    hi = (value - lo) & 0xFFFFFFFF
    return hi - (1 << 32) if hi >= (1 << 31) else hi, lo


class Prog:
    def __init__(self, target: str = "rv32imf"):
        if target not in TARGETS:
            raise AsmError(f"unknown target {target!r}")
        self.target = target
        self.has_m = "m" in target[4:]
        self.has_f = target.endswith("f")
        self.items = []        # (size_bytes, payload) records
        self.label_at = {}     # name -> item index
        self._needed = []      # softlib routines, in first-use order
        self._lib_done = False

    # ---------- raw emission ----------

    def emit(self, kind, rd=0, rs1=0, rs2=0, rs3=0, imm=0, rm=0,
             label=None, rel=None):
        """One instruction; label/rel defer the immediate to link time.

        rel: 'b' branch offset, 'j' jump offset, 'hi'/'lo' absolute
        address halves.
        """
        self.items.append((4, ("ins", kind,
                               dict(rd=rd, rs1=rs1, rs2=rs2, rs3=rs3,
                                    imm=imm, rm=rm),
                               label, rel)))

    def word(self, value):
        self.items.append((4, ("word", value & 0xFFFFFFFF)))

    def space(self, nbytes):
        self.items.append((nbytes, ("space",)))

    def align(self, boundary=4):
        self.items.append((0, ("align", boundary)))

    def label(self, name):
        if name in self.label_at:
            raise AsmError(f"duplicate label {name!r}")
        self.label_at[name] = len(self.items)
        self.items.append((0, ("label", name)))

    # ---------- pseudo-instructions ----------

    def nop(self):
        self.emit("addi", rd=0, rs1=0, imm=0)

    def mv(self, rd, rs):
        self.emit("addi", rd=rd, rs1=rs, imm=0)

    def li(self, rd, value):
        value &= 0xFFFFFFFF
        sv = value - (1 << 32) if value >= (1 << 31) else value
        if -2048 <= sv <= 2047:
            self.emit("addi", rd=rd, rs1=0, imm=sv)
            return
        hi, lo = _split_hi_lo(value)
        self.emit("lui", rd=rd, imm=hi)
        if lo:
            self.emit("addi", rd=rd, rs1=rd, imm=lo)

    def la(self, rd, name):
        # always two words so sizes are stable before addresses are known
        self.emit("lui", rd=rd, label=name, rel="hi")
        self.emit("addi", rd=rd, rs1=rd, label=name, rel="lo")

    def j(self, name):
        self.emit("jal", rd=0, label=name, rel="j")

    def call(self, name):
        self.emit("jal", rd=RA, label=name, rel="j")

    def ret(self):
        self.emit("jalr", rd=0, rs1=RA, imm=0)

    def branch(self, op, rs1, rs2, name):
        self.emit(op, rs1=rs1, rs2=rs2, label=name, rel="b")

    def beqz(self, rs, name):
        self.branch("beq", rs, 0, name)

    def bnez(self, rs, name):
        self.branch("bne", rs, 0, name)

    # ---------- device page ----------

    def halt(self, reg=None, imm=0):
        self.emit("lui", rd=T0, imm=MMIO_HI)
        if reg is None:
            self.li(T1, imm)
            reg = T1
        self.emit("sw", rs1=T0, rs2=reg, imm=0)

    def console(self, reg):
        self.emit("lui", rd=T0, imm=MMIO_HI)
        self.emit("sw", rs1=T0, rs2=reg, imm=4)

    def iter_tick(self):
        self.emit("lui", rd=T0, imm=MMIO_HI)
        self.emit("sw", rs1=T0, rs2=0, imm=8)

    # ---------- integer macro-ops ----------

    def _need(self, routine):
        if routine not in self._needed:
            self._needed.append(routine)

    def _mul_pair(self, ra, rb, signed):
        self._need("umul64" if not signed else "mul64")
        self.mv(A0, ra)
        self.mv(A1, rb)
        self.call("__mul64" if signed else "__umul64")

    def mul(self, rd, ra, rb):
        if self.has_m:
            self.emit("mul", rd=rd, rs1=ra, rs2=rb)
        else:
            self._mul_pair(ra, rb, signed=False)
            self.mv(rd, A0)

    def mulhu(self, rd, ra, rb):
        if self.has_m:
            self.emit("mulhu", rd=rd, rs1=ra, rs2=rb)
        else:
            self._mul_pair(ra, rb, signed=False)
            self.mv(rd, A1)

    def mulh(self, rd, ra, rb):
        if self.has_m:
            self.emit("mulh", rd=rd, rs1=ra, rs2=rb)
        else:
            self._mul_pair(ra, rb, signed=True)
            self.mv(rd, A1)

    def _div_pair(self, ra, rb, signed):
        self._need("divmod" if signed else "udivmod")
        self.mv(A0, ra)
        self.mv(A1, rb)
        self.call("__divmod" if signed else "__udivmod")

    def divu(self, rd, ra, rb):
        if self.has_m:
            self.emit("divu", rd=rd, rs1=ra, rs2=rb)
        else:
            self._div_pair(ra, rb, signed=False)
            self.mv(rd, A0)

    def remu(self, rd, ra, rb):
        if self.has_m:
            self.emit("remu", rd=rd, rs1=ra, rs2=rb)
        else:
            self._div_pair(ra, rb, signed=False)
            self.mv(rd, A1)

    def div(self, rd, ra, rb):
        if self.has_m:
            self.emit("div", rd=rd, rs1=ra, rs2=rb)
        else:
            self._div_pair(ra, rb, signed=True)
            self.mv(rd, A0)

    def rem(self, rd, ra, rb):
        if self.has_m:
            self.emit("rem", rd=rd, rs1=ra, rs2=rb)
        else:
            self._div_pair(ra, rb, signed=True)
            self.mv(rd, A1)

    # ---------- float macro-ops over virtual registers ----------

    def _vf(self, i):
        if not 0 <= i <= 9:
            raise AsmError(f"virtual float register out of range: {i}")
        return (8 + i) if self.has_f else (S2 + i)

    def _fcall2(self, routine, d, a, b):
        self._need(routine)
        self.mv(A0, self._vf(a))
        self.mv(A1, self._vf(b))
        self.call("__" + routine)
        self.mv(self._vf(d), A0)

    def fadd(self, d, a, b):
        if self.has_f:
            self.emit("fadd.s", rd=self._vf(d), rs1=self._vf(a),
                      rs2=self._vf(b))
        else:
            self._fcall2("addsf3", d, a, b)

    def fsub(self, d, a, b):
        if self.has_f:
            self.emit("fsub.s", rd=self._vf(d), rs1=self._vf(a),
                      rs2=self._vf(b))
        else:
            self._need("addsf3")
            self.mv(A0, self._vf(a))
            self.emit("lui", rd=T0, imm=-(1 << 31))
            self.emit("xor", rd=A1, rs1=self._vf(b), rs2=T0)
            self.call("__addsf3")
            self.mv(self._vf(d), A0)

    def fmul(self, d, a, b):
        if self.has_f:
            self.emit("fmul.s", rd=self._vf(d), rs1=self._vf(a),
                      rs2=self._vf(b))
        else:
            self._fcall2("mulsf3", d, a, b)

    def fdiv(self, d, a, b):
        if self.has_f:
            self.emit("fdiv.s", rd=self._vf(d), rs1=self._vf(a),
                      rs2=self._vf(b))
        else:
            self._fcall2("divsf3", d, a, b)

    def fsqrt(self, d, a):
        if self.has_f:
            self.emit("fsqrt.s", rd=self._vf(d), rs1=self._vf(a))
        else:
            self._need("sqrtsf2")
            self.mv(A0, self._vf(a))
            self.call("__sqrtsf2")
            self.mv(self._vf(d), A0)

    def _fma_soft(self, d, a, b, c, neg_prod, neg_c):
        # unfused: only exact on operands where fused == unfused
        self._need("mulsf3")
        self._need("addsf3")
        self.mv(A0, self._vf(a))
        self.mv(A1, self._vf(b))
        self.call("__mulsf3")
        if neg_prod:
            self.emit("lui", rd=T0, imm=-(1 << 31))
            self.emit("xor", rd=A0, rs1=A0, rs2=T0)
        if neg_c:
            self.emit("lui", rd=T0, imm=-(1 << 31))
            self.emit("xor", rd=A1, rs1=self._vf(c), rs2=T0)
        else:
            self.mv(A1, self._vf(c))
        self.call("__addsf3")
        self.mv(self._vf(d), A0)

    def fmadd(self, d, a, b, c):
        if self.has_f:
            self.emit("fmadd.s", rd=self._vf(d), rs1=self._vf(a),
                      rs2=self._vf(b), rs3=self._vf(c))
        else:
            self._fma_soft(d, a, b, c, neg_prod=False, neg_c=False)

    def fmsub(self, d, a, b, c):
        if self.has_f:
            self.emit("fmsub.s", rd=self._vf(d), rs1=self._vf(a),
                      rs2=self._vf(b), rs3=self._vf(c))
        else:
            self._fma_soft(d, a, b, c, neg_prod=False, neg_c=True)

    def fnmsub(self, d, a, b, c):
        if self.has_f:
            self.emit("fnmsub.s", rd=self._vf(d), rs1=self._vf(a),
                      rs2=self._vf(b), rs3=self._vf(c))
        else:
            self._fma_soft(d, a, b, c, neg_prod=True, neg_c=False)

    def fmov(self, d, a):
        if self.has_f:
            self.emit("fsgnj.s", rd=self._vf(d), rs1=self._vf(a),
                      rs2=self._vf(a))
        else:
            self.mv(self._vf(d), self._vf(a))

    def fabs(self, d, a):
        if self.has_f:
            self.emit("fsgnjx.s", rd=self._vf(d), rs1=self._vf(a),
                      rs2=self._vf(a))
        else:
            self.li(T0, 0x7FFFFFFF)
            self.emit("and", rd=self._vf(d), rs1=self._vf(a), rs2=T0)

    def fneg(self, d, a):
        if self.has_f:
            self.emit("fsgnjn.s", rd=self._vf(d), rs1=self._vf(a),
                      rs2=self._vf(a))
        else:
            self.emit("lui", rd=T0, imm=-(1 << 31))
            self.emit("xor", rd=self._vf(d), rs1=self._vf(a), rs2=T0)

    def fload(self, d, rs1, imm=0):
        if self.has_f:
            self.emit("flw", rd=self._vf(d), rs1=rs1, imm=imm)
        else:
            self.emit("lw", rd=self._vf(d), rs1=rs1, imm=imm)

    def fstore(self, s, rs1, imm=0):
        if self.has_f:
            self.emit("fsw", rs1=rs1, rs2=self._vf(s), imm=imm)
        else:
            self.emit("sw", rs1=rs1, rs2=self._vf(s), imm=imm)

    def fli(self, d, bits):
        if self.has_f:
            self.li(T1, bits)
            self.emit("fmv.w.x", rd=self._vf(d), rs1=T1)
        else:
            self.li(self._vf(d), bits)

    def fmv_to_x(self, rd, a):
        if self.has_f:
            self.emit("fmv.x.w", rd=rd, rs1=self._vf(a))
        else:
            self.mv(rd, self._vf(a))

    def fcmp_lt(self, rd, a, b):
        if self.has_f:
            self.emit("flt.s", rd=rd, rs1=self._vf(a), rs2=self._vf(b))
        else:
            self._soft_key(T1, self._vf(a))
            self._soft_key(T2, self._vf(b))
            self.emit("sltu", rd=rd, rs1=T1, rs2=T2)

    def fcmp_le(self, rd, a, b):
        if self.has_f:
            self.emit("fle.s", rd=rd, rs1=self._vf(a), rs2=self._vf(b))
        else:
            self._soft_key(T1, self._vf(b))
            self._soft_key(T2, self._vf(a))
            self.emit("sltu", rd=rd, rs1=T1, rs2=T2)
            self.emit("xori", rd=rd, rs1=rd, imm=1)     # !(b < a)

    def fcmp_eq(self, rd, a, b):
        if self.has_f:
            self.emit("feq.s", rd=rd, rs1=self._vf(a), rs2=self._vf(b))
        else:
            self.emit("xor", rd=rd, rs1=self._vf(a), rs2=self._vf(b))
            self.emit("sltiu", rd=rd, rs1=rd, imm=1)

    def _soft_key(self, rd, src):
        """rd = monotone integer key of float bits in src (non-NaN)."""
        self.emit("srai", rd=T0, rs1=src, imm=31)       # 0 or -1
        self.emit("srli", rd=T0, rs1=T0, imm=1)         # 0 or 0x7fffffff
        self.emit("xor", rd=rd, rs1=src, rs2=T0)        # flip low bits if neg
        self.emit("lui", rd=T0, imm=-(1 << 31))
        self.emit("xor", rd=rd, rs1=rd, rs2=T0)         # flip the sign bit

    def fcvt_ws(self, rd, a):
        """float -> int32, truncating."""
        if self.has_f:
            self.emit("fcvt.w.s", rd=rd, rs1=self._vf(a), rm=1)
        else:
            self._need("fixsfsi")
            self.mv(A0, self._vf(a))
            self.call("__fixsfsi")
            self.mv(rd, A0)

    def fcvt_sw(self, d, rs):
        """int32 -> float, round to nearest even."""
        if self.has_f:
            self.emit("fcvt.s.w", rd=self._vf(d), rs1=rs, rm=0)
        else:
            self._need("floatsisf")
            self.mv(A0, rs)
            self.call("__floatsisf")
            self.mv(self._vf(d), A0)

    def fcvt_wus(self, rd, a):
        if self.has_f:
            self.emit("fcvt.wu.s", rd=rd, rs1=self._vf(a), rm=1)
        else:
            self._need("fixunssfsi")
            self.mv(A0, self._vf(a))
            self.call("__fixunssfsi")
            self.mv(rd, A0)

    def fcvt_swu(self, d, rs):
        if self.has_f:
            self.emit("fcvt.s.wu", rd=self._vf(d), rs1=rs, rm=0)
        else:
            self._need("floatunsisf")
            self.mv(A0, rs)
            self.call("__floatunsisf")
            self.mv(self._vf(d), A0)

    # ---------- assembly ----------

    def include_library(self):
        """Append the support routines this program referenced."""
        if self._lib_done:
            return
        self._lib_done = True
        from . import softlib
        emitted = set()
        i = 0
        while i < len(self._needed):   # emitters may request more routines
            name = self._needed[i]
            i += 1
            if name in emitted:
                continue
            emitted.add(name)
            softlib.EMITTERS[name](self)

    def assemble(self, base=0):
        self.include_library()
        addrs = []
        pos = base
        for size, payload in self.items:
            if payload[0] == "align":
                pad = (-pos) % payload[1]
                addrs.append(pos)
                pos += pad
            else:
                addrs.append(pos)
                pos += size
        labels = {}
        for name, idx in self.label_at.items():
            labels[name] = addrs[idx]
        self._labels = labels

        out = bytearray()
        for (size, payload), addr in zip(self.items, addrs):
            tag = payload[0]
            if tag == "ins":
                _, kind, fields, label, rel = payload
                f = dict(fields)
                if label is not None:
                    if label not in labels:
                        raise AsmError(f"undefined label {label!r}")
                    tgt = labels[label]
                    if rel in ("b", "j"):
                        off = tgt - addr
                        lim = 4094 if rel == "b" else (1 << 20) - 2
                        if not -lim - 2 <= off <= lim:
                            raise AsmError(
                                f"{kind} to {label!r}: offset {off} "
                                f"out of range")
                        f["imm"] = off
                    elif rel == "hi":
                        f["imm"] = _split_hi_lo(tgt)[0]
                    elif rel == "lo":
                        f["imm"] = _split_hi_lo(tgt)[1]
                    else:
                        raise AsmError(f"bad relocation {rel!r}")
                out += encode(Instr(kind, **f)).to_bytes(4, "little")
            elif tag == "word":
                out += payload[1].to_bytes(4, "little")
            elif tag == "space":
                out += bytes(size)
            elif tag == "align":
                out += bytes((-len(out) - base) % payload[1])
            # labels contribute nothing
        return bytes(out)

    def addr_of(self, name):
        return self._labels[name]
