"""RV32IMF subset: instruction kinds, decode and encode.

The `ext` tag on each kind is its latency and slotting class, not the ISA
chapter that defines the encoding.  flw/fsw/fmv.x.w/fmv.w.x execute on the
fixed datapath at base latency, so they carry ext="I" even though their
encodings live in the floating-point opcode space.  The kinds tagged "M"
and "F" are exactly the reconfigurable ones the group map knows about.
"""

from __future__ import annotations

__all__ = [
    "DecodeError",
    "Instr",
    "KindInfo",
    "KINDS",
    "KIND_BY_NAME",
    "KIND_BY_ID",
    "decode",
    "encode",
    "VALID_RM",
    "RM_RNE",
    "RM_RTZ",
    "RM_RDN",
    "RM_RUP",
    "RM_RMM",
    "RM_DYN",
    "NOP_WORD",
]


class DecodeError(Exception):
    """Raised for a word that is not a valid in-scope encoding.

    Carries the offending word so a machine can inject an
    illegal-instruction trap with the right payload.
    """

    def __init__(self, word: int, why: str = "illegal instruction"):
        super().__init__(f"{why}: 0x{word & 0xFFFFFFFF:08x}")
        self.word = word & 0xFFFFFFFF


# Rounding-mode field values (the 'rm' bits of F-type encodings).
RM_RNE = 0  # to nearest, ties to even
RM_RTZ = 1  # toward zero
RM_RDN = 2  # toward -inf
RM_RUP = 3  # toward +inf
RM_RMM = 4  # to nearest, ties away from zero
RM_DYN = 7  # dynamic (treated as RNE; frm is not modeled)
VALID_RM = frozenset((RM_RNE, RM_RTZ, RM_RDN, RM_RUP, RM_RMM, RM_DYN))

NOP_WORD = 0x00000013  # addi x0, x0, 0


class KindInfo:
    """Static description of one instruction kind."""

    __slots__ = (
        "name", "kid", "fmt", "ext", "opcode", "f3", "f7", "rs2code",
        "frd", "fr1", "fr2", "fr3", "mem",
    )

    def __init__(self, name, fmt, ext, opcode, f3=None, f7=None, rs2code=None,
                 frd=False, fr1=False, fr2=False, fr3=False, mem=None):
        self.name = name
        self.kid = 0  # assigned once the full table is built
        self.fmt = fmt
        self.ext = ext
        self.opcode = opcode
        self.f3 = f3
        self.f7 = f7
        self.rs2code = rs2code
        self.frd = frd      # rd is an f-register
        self.fr1 = fr1      # rs1 is an f-register
        self.fr2 = fr2      # rs2 is an f-register
        self.fr3 = fr3      # rs3 is an f-register
        # mem: None, or ("load", size_bytes, signed) / ("store", size_bytes)
        self.mem = mem

    def __repr__(self):
        return f"<KindInfo {self.name}>"


def _k(*args, **kw):
    return KindInfo(*args, **kw)


# Format codes:
#   R     rd, rs1, rs2              fixed f3/f7
#   I     rd, rs1, imm12            fixed f3 (alu-imm, jalr, loads)
#   SH    rd, rs1, shamt            fixed f3/f7 (slli/srli/srai)
#   S     rs1, rs2, imm12           stores
#   B     rs1, rs2, imm13           branches
#   U     rd, imm32 (low 12 zero)   lui/auipc
#   J     rd, imm21                 jal
#   SYS   no fields                 ecall/ebreak/mret/fence
#   CSR   rd, rs1, imm=csr          csrrw/csrrs/csrrc
#   CSRI  rd, zimm(in rs1), imm=csr csrrwi/csrrsi/csrrci
#   FR    rd, rs1, rs2, rm          fadd/fsub/fmul/fdiv
#   FR3   rd, rs1, rs2              fixed f3 (fsgnj*/fmin/fmax)
#   FCMP  rd(x), rs1(f), rs2(f)     fle/flt/feq
#   FU    rd, rs1, rm               fixed rs2 field (fsqrt/fcvt.*)
#   FMV   rd, rs1                   fixed rs2 and f3 (fmv.x.w/fmv.w.x)
#   R4    rd, rs1, rs2, rs3, rm     fused multiply-add family

KINDS = (
    # RV32I
    _k("lui",    "U", "I", 0x37),
    _k("auipc",  "U", "I", 0x17),
    _k("jal",    "J", "I", 0x6F),
    _k("jalr",   "I", "I", 0x67, f3=0),
    _k("beq",    "B", "I", 0x63, f3=0),
    _k("bne",    "B", "I", 0x63, f3=1),
    _k("blt",    "B", "I", 0x63, f3=4),
    _k("bge",    "B", "I", 0x63, f3=5),
    _k("bltu",   "B", "I", 0x63, f3=6),
    _k("bgeu",   "B", "I", 0x63, f3=7),
    _k("lb",     "I", "I", 0x03, f3=0, mem=("load", 1, True)),
    _k("lh",     "I", "I", 0x03, f3=1, mem=("load", 2, True)),
    _k("lw",     "I", "I", 0x03, f3=2, mem=("load", 4, True)),
    _k("lbu",    "I", "I", 0x03, f3=4, mem=("load", 1, False)),
    _k("lhu",    "I", "I", 0x03, f3=5, mem=("load", 2, False)),
    _k("sb",     "S", "I", 0x23, f3=0, mem=("store", 1)),
    _k("sh",     "S", "I", 0x23, f3=1, mem=("store", 2)),
    _k("sw",     "S", "I", 0x23, f3=2, mem=("store", 4)),
    _k("addi",   "I", "I", 0x13, f3=0),
    _k("slti",   "I", "I", 0x13, f3=2),
    _k("sltiu",  "I", "I", 0x13, f3=3),
    _k("xori",   "I", "I", 0x13, f3=4),
    _k("ori",    "I", "I", 0x13, f3=6),
    _k("andi",   "I", "I", 0x13, f3=7),
    _k("slli",   "SH", "I", 0x13, f3=1, f7=0x00),
    _k("srli",   "SH", "I", 0x13, f3=5, f7=0x00),
    _k("srai",   "SH", "I", 0x13, f3=5, f7=0x20),
    _k("add",    "R", "I", 0x33, f3=0, f7=0x00),
    _k("sub",    "R", "I", 0x33, f3=0, f7=0x20),
    _k("sll",    "R", "I", 0x33, f3=1, f7=0x00),
    _k("slt",    "R", "I", 0x33, f3=2, f7=0x00),
    _k("sltu",   "R", "I", 0x33, f3=3, f7=0x00),
    _k("xor",    "R", "I", 0x33, f3=4, f7=0x00),
    _k("srl",    "R", "I", 0x33, f3=5, f7=0x00),
    _k("sra",    "R", "I", 0x33, f3=5, f7=0x20),
    _k("or",     "R", "I", 0x33, f3=6, f7=0x00),
    _k("and",    "R", "I", 0x33, f3=7, f7=0x00),
    _k("fence",  "SYS", "I", 0x0F),
    _k("ecall",  "SYS", "System", 0x73),
    _k("ebreak", "SYS", "System", 0x73),
    _k("mret",   "SYS", "System", 0x73),
    # Zicsr
    _k("csrrw",  "CSR",  "Zicsr", 0x73, f3=1),
    _k("csrrs",  "CSR",  "Zicsr", 0x73, f3=2),
    _k("csrrc",  "CSR",  "Zicsr", 0x73, f3=3),
    _k("csrrwi", "CSRI", "Zicsr", 0x73, f3=5),
    _k("csrrsi", "CSRI", "Zicsr", 0x73, f3=6),
    _k("csrrci", "CSRI", "Zicsr", 0x73, f3=7),
    # M extension (all slotted)
    _k("mul",    "R", "M", 0x33, f3=0, f7=0x01),
    _k("mulh",   "R", "M", 0x33, f3=1, f7=0x01),
    _k("mulhsu", "R", "M", 0x33, f3=2, f7=0x01),
    _k("mulhu",  "R", "M", 0x33, f3=3, f7=0x01),
    _k("div",    "R", "M", 0x33, f3=4, f7=0x01),
    _k("divu",   "R", "M", 0x33, f3=5, f7=0x01),
    _k("rem",    "R", "M", 0x33, f3=6, f7=0x01),
    _k("remu",   "R", "M", 0x33, f3=7, f7=0x01),
    # F plumbing: fixed-datapath kinds, never slotted
    _k("flw",    "I", "I", 0x07, f3=2, frd=True, mem=("load", 4, False)),
    _k("fsw",    "S", "I", 0x27, f3=2, fr2=True, mem=("store", 4)),
    _k("fmv.x.w", "FMV", "I", 0x53, f3=0, f7=0x70, rs2code=0, fr1=True),
    _k("fmv.w.x", "FMV", "I", 0x53, f3=0, f7=0x78, rs2code=0, frd=True),
    # F extension, slotted
    _k("fadd.s",   "FR",  "F", 0x53, f7=0x00, frd=True, fr1=True, fr2=True),
    _k("fsub.s",   "FR",  "F", 0x53, f7=0x04, frd=True, fr1=True, fr2=True),
    _k("fmul.s",   "FR",  "F", 0x53, f7=0x08, frd=True, fr1=True, fr2=True),
    _k("fdiv.s",   "FR",  "F", 0x53, f7=0x0C, frd=True, fr1=True, fr2=True),
    _k("fsqrt.s",  "FU",  "F", 0x53, f7=0x2C, rs2code=0, frd=True, fr1=True),
    _k("fsgnj.s",  "FR3", "F", 0x53, f3=0, f7=0x10, frd=True, fr1=True, fr2=True),
    _k("fsgnjn.s", "FR3", "F", 0x53, f3=1, f7=0x10, frd=True, fr1=True, fr2=True),
    _k("fsgnjx.s", "FR3", "F", 0x53, f3=2, f7=0x10, frd=True, fr1=True, fr2=True),
    _k("fmin.s",   "FR3", "F", 0x53, f3=0, f7=0x14, frd=True, fr1=True, fr2=True),
    _k("fmax.s",   "FR3", "F", 0x53, f3=1, f7=0x14, frd=True, fr1=True, fr2=True),
    _k("fle.s",    "FCMP", "F", 0x53, f3=0, f7=0x50, fr1=True, fr2=True),
    _k("flt.s",    "FCMP", "F", 0x53, f3=1, f7=0x50, fr1=True, fr2=True),
    _k("feq.s",    "FCMP", "F", 0x53, f3=2, f7=0x50, fr1=True, fr2=True),
    _k("fcvt.w.s",  "FU", "F", 0x53, f7=0x60, rs2code=0, fr1=True),
    _k("fcvt.wu.s", "FU", "F", 0x53, f7=0x60, rs2code=1, fr1=True),
    _k("fcvt.s.w",  "FU", "F", 0x53, f7=0x68, rs2code=0, frd=True),
    _k("fcvt.s.wu", "FU", "F", 0x53, f7=0x68, rs2code=1, frd=True),
    _k("fmadd.s",  "R4", "F", 0x43, frd=True, fr1=True, fr2=True, fr3=True),
    _k("fmsub.s",  "R4", "F", 0x47, frd=True, fr1=True, fr2=True, fr3=True),
    _k("fnmsub.s", "R4", "F", 0x4B, frd=True, fr1=True, fr2=True, fr3=True),
    _k("fnmadd.s", "R4", "F", 0x4F, frd=True, fr1=True, fr2=True, fr3=True),
)

KIND_BY_NAME = {}
KIND_BY_ID = [None]  # kid 0 is the "not decoded" sentinel in cached arrays
for _info in KINDS:
    _info.kid = len(KIND_BY_ID)
    KIND_BY_ID.append(_info)
    assert _info.name not in KIND_BY_NAME
    KIND_BY_NAME[_info.name] = _info
del _info


class Instr:
    """One decoded instruction.

    Register fields are indices into whichever file the kind uses (see
    KindInfo.frd/fr1/fr2/fr3).  `imm` is already sign-extended; for U-format
    kinds it holds the full 32-bit constant (low 12 bits zero).  `rm` is the
    rounding-mode field where the encoding has one, else 0.
    """

    __slots__ = ("kind", "rd", "rs1", "rs2", "rs3", "imm", "rm", "raw_word")

    def __init__(self, kind, rd=0, rs1=0, rs2=0, rs3=0, imm=0, rm=0,
                 raw_word=None):
        self.kind = kind
        self.rd = rd
        self.rs1 = rs1
        self.rs2 = rs2
        self.rs3 = rs3
        self.imm = imm
        self.rm = rm
        self.raw_word = raw_word

    @property
    def info(self) -> KindInfo:
        return KIND_BY_NAME[self.kind]

    @property
    def ext(self) -> str:
        return KIND_BY_NAME[self.kind].ext

    def __eq__(self, other):
        if not isinstance(other, Instr):
            return NotImplemented
        return (self.kind == other.kind and self.rd == other.rd
                and self.rs1 == other.rs1 and self.rs2 == other.rs2
                and self.rs3 == other.rs3 and self.imm == other.imm
                and self.rm == other.rm)

    def __repr__(self):
        return (f"Instr({self.kind!r}, rd={self.rd}, rs1={self.rs1}, "
                f"rs2={self.rs2}, rs3={self.rs3}, imm={self.imm}, rm={self.rm})")


def _sext(value: int, bits: int) -> int:
    sign = 1 << (bits - 1)
    return (value & (sign - 1)) - (value & sign)


def _imm_i(w):
    return _sext(w >> 20, 12)


def _imm_s(w):
    return _sext(((w >> 25) << 5) | ((w >> 7) & 0x1F), 12)


def _imm_b(w):
    v = (((w >> 31) & 1) << 12) | (((w >> 7) & 1) << 11) \
        | (((w >> 25) & 0x3F) << 5) | (((w >> 8) & 0xF) << 1)
    return _sext(v, 13)


def _imm_u(w):
    return _sext(w & 0xFFFFF000, 32)


def _imm_j(w):
    v = (((w >> 31) & 1) << 20) | (((w >> 12) & 0xFF) << 12) \
        | (((w >> 20) & 1) << 11) | (((w >> 21) & 0x3FF) << 1)
    return _sext(v, 21)


# Dispatch tables built from KINDS so decode and encode cannot drift apart.
_R_TABLE = {}      # (f7, f3) -> kind, opcode 0x33
_LOAD_TABLE = {}   # f3 -> kind, opcode 0x03
_STORE_TABLE = {}  # f3 -> kind, opcode 0x23
_BRANCH_TABLE = {}
_ALUI_TABLE = {}   # f3 -> kind (non-shift)
_CSR_TABLE = {}    # f3 -> kind
_OPFP_TABLE = {}   # f7 -> kind or sub-table
_R4_TABLE = {}     # opcode -> kind

for _i in KINDS:
    if _i.fmt == "R":
        _R_TABLE[(_i.f7, _i.f3)] = _i
    elif _i.opcode == 0x03:
        _LOAD_TABLE[_i.f3] = _i
    elif _i.opcode == 0x23:
        _STORE_TABLE[_i.f3] = _i
    elif _i.fmt == "B":
        _BRANCH_TABLE[_i.f3] = _i
    elif _i.opcode == 0x13 and _i.fmt == "I":
        _ALUI_TABLE[_i.f3] = _i
    elif _i.fmt in ("CSR", "CSRI"):
        _CSR_TABLE[_i.f3] = _i
    elif _i.fmt == "R4":
        _R4_TABLE[_i.opcode] = _i
del _i

_FSGNJ_BY_F3 = {0: "fsgnj.s", 1: "fsgnjn.s", 2: "fsgnjx.s"}
_FMINMAX_BY_F3 = {0: "fmin.s", 1: "fmax.s"}
_FCMP_BY_F3 = {0: "fle.s", 1: "flt.s", 2: "feq.s"}


def _check_rm(word, rm):
    if rm not in VALID_RM:
        raise DecodeError(word, "reserved rounding mode")
    return rm


def decode(word: int) -> Instr:
    """Decode one 32-bit little-endian instruction word.

    Raises DecodeError for anything outside the supported RV32IMF+Zicsr
    subset, including reserved rounding modes and malformed fixed fields.
    """
    w = word & 0xFFFFFFFF
    opcode = w & 0x7F
    rd = (w >> 7) & 0x1F
    f3 = (w >> 12) & 0x7
    rs1 = (w >> 15) & 0x1F
    rs2 = (w >> 20) & 0x1F
    f7 = w >> 25

    if opcode == 0x37:
        return Instr("lui", rd=rd, imm=_imm_u(w), raw_word=w)
    if opcode == 0x17:
        return Instr("auipc", rd=rd, imm=_imm_u(w), raw_word=w)
    if opcode == 0x6F:
        return Instr("jal", rd=rd, imm=_imm_j(w), raw_word=w)
    if opcode == 0x67:
        if f3 != 0:
            raise DecodeError(w)
        return Instr("jalr", rd=rd, rs1=rs1, imm=_imm_i(w), raw_word=w)
    if opcode == 0x63:
        info = _BRANCH_TABLE.get(f3)
        if info is None:
            raise DecodeError(w)
        return Instr(info.name, rs1=rs1, rs2=rs2, imm=_imm_b(w), raw_word=w)
    if opcode == 0x03:
        info = _LOAD_TABLE.get(f3)
        if info is None:
            raise DecodeError(w)
        return Instr(info.name, rd=rd, rs1=rs1, imm=_imm_i(w), raw_word=w)
    if opcode == 0x07:
        if f3 != 2:
            raise DecodeError(w)
        return Instr("flw", rd=rd, rs1=rs1, imm=_imm_i(w), raw_word=w)
    if opcode == 0x23:
        info = _STORE_TABLE.get(f3)
        if info is None:
            raise DecodeError(w)
        return Instr(info.name, rs1=rs1, rs2=rs2, imm=_imm_s(w), raw_word=w)
    if opcode == 0x27:
        if f3 != 2:
            raise DecodeError(w)
        return Instr("fsw", rs1=rs1, rs2=rs2, imm=_imm_s(w), raw_word=w)
    if opcode == 0x13:
        if f3 == 1:
            if f7 != 0x00:
                raise DecodeError(w)
            return Instr("slli", rd=rd, rs1=rs1, imm=rs2, raw_word=w)
        if f3 == 5:
            if f7 == 0x00:
                return Instr("srli", rd=rd, rs1=rs1, imm=rs2, raw_word=w)
            if f7 == 0x20:
                return Instr("srai", rd=rd, rs1=rs1, imm=rs2, raw_word=w)
            raise DecodeError(w)
        info = _ALUI_TABLE.get(f3)
        if info is None:
            raise DecodeError(w)
        return Instr(info.name, rd=rd, rs1=rs1, imm=_imm_i(w), raw_word=w)
    if opcode == 0x33:
        info = _R_TABLE.get((f7, f3))
        if info is None:
            raise DecodeError(w)
        return Instr(info.name, rd=rd, rs1=rs1, rs2=rs2, raw_word=w)
    if opcode == 0x0F:
        if f3 != 0:
            raise DecodeError(w)
        return Instr("fence", raw_word=w)
    if opcode == 0x73:
        if f3 == 0:
            if rd != 0 or rs1 != 0:
                raise DecodeError(w)
            top = w >> 20
            if top == 0x000:
                return Instr("ecall", raw_word=w)
            if top == 0x001:
                return Instr("ebreak", raw_word=w)
            if top == 0x302:
                return Instr("mret", raw_word=w)
            raise DecodeError(w)
        info = _CSR_TABLE.get(f3)
        if info is None:
            raise DecodeError(w)
        return Instr(info.name, rd=rd, rs1=rs1, imm=w >> 20, raw_word=w)
    if opcode in _R4_TABLE:
        if (w >> 25) & 0x3 != 0:
            raise DecodeError(w, "unsupported fused format")
        info = _R4_TABLE[opcode]
        return Instr(info.name, rd=rd, rs1=rs1, rs2=rs2, rs3=w >> 27,
                     rm=_check_rm(w, f3), raw_word=w)
    if opcode == 0x53:
        if f7 in (0x00, 0x04, 0x08, 0x0C):
            name = {0x00: "fadd.s", 0x04: "fsub.s",
                    0x08: "fmul.s", 0x0C: "fdiv.s"}[f7]
            return Instr(name, rd=rd, rs1=rs1, rs2=rs2,
                         rm=_check_rm(w, f3), raw_word=w)
        if f7 == 0x2C:
            if rs2 != 0:
                raise DecodeError(w)
            return Instr("fsqrt.s", rd=rd, rs1=rs1,
                         rm=_check_rm(w, f3), raw_word=w)
        if f7 == 0x10:
            name = _FSGNJ_BY_F3.get(f3)
            if name is None:
                raise DecodeError(w)
            return Instr(name, rd=rd, rs1=rs1, rs2=rs2, raw_word=w)
        if f7 == 0x14:
            name = _FMINMAX_BY_F3.get(f3)
            if name is None:
                raise DecodeError(w)
            return Instr(name, rd=rd, rs1=rs1, rs2=rs2, raw_word=w)
        if f7 == 0x50:
            name = _FCMP_BY_F3.get(f3)
            if name is None:
                raise DecodeError(w)
            return Instr(name, rd=rd, rs1=rs1, rs2=rs2, raw_word=w)
        if f7 == 0x60:
            if rs2 == 0:
                name = "fcvt.w.s"
            elif rs2 == 1:
                name = "fcvt.wu.s"
            else:
                raise DecodeError(w)
            return Instr(name, rd=rd, rs1=rs1, rm=_check_rm(w, f3), raw_word=w)
        if f7 == 0x68:
            if rs2 == 0:
                name = "fcvt.s.w"
            elif rs2 == 1:
                name = "fcvt.s.wu"
            else:
                raise DecodeError(w)
            return Instr(name, rd=rd, rs1=rs1, rm=_check_rm(w, f3), raw_word=w)
        if f7 == 0x70:
            if rs2 != 0 or f3 != 0:
                raise DecodeError(w)
            return Instr("fmv.x.w", rd=rd, rs1=rs1, raw_word=w)
        if f7 == 0x78:
            if rs2 != 0 or f3 != 0:
                raise DecodeError(w)
            return Instr("fmv.w.x", rd=rd, rs1=rs1, raw_word=w)
        raise DecodeError(w)
    raise DecodeError(w)


def _check_reg(r, what):
    if not 0 <= r <= 31:
        raise ValueError(f"{what} out of range: {r}")
    return r


def _check_range(v, lo, hi, what):
    if not lo <= v <= hi:
        raise ValueError(f"{what} out of range: {v}")
    return v


def encode(instr: Instr) -> int:
    """Re-encode a decoded (or hand-built) instruction to its 32-bit word.

    Validates field ranges and raises ValueError on anything that does not
    fit the format; decode(encode(i)) == i for every well-formed instr.
    """
    info = KIND_BY_NAME.get(instr.kind)
    if info is None:
        raise ValueError(f"unknown kind: {instr.kind!r}")
    fmt = info.fmt
    op = info.opcode
    rd = _check_reg(instr.rd, "rd")
    rs1 = _check_reg(instr.rs1, "rs1")
    rs2 = _check_reg(instr.rs2, "rs2")
    imm = instr.imm

    if fmt == "R":
        return (info.f7 << 25) | (rs2 << 20) | (rs1 << 15) \
            | (info.f3 << 12) | (rd << 7) | op
    if fmt == "I":
        _check_range(imm, -2048, 2047, "imm")
        return ((imm & 0xFFF) << 20) | (rs1 << 15) | (info.f3 << 12) \
            | (rd << 7) | op
    if fmt == "SH":
        _check_range(imm, 0, 31, "shamt")
        return (info.f7 << 25) | (imm << 20) | (rs1 << 15) \
            | (info.f3 << 12) | (rd << 7) | op
    if fmt == "S":
        _check_range(imm, -2048, 2047, "imm")
        v = imm & 0xFFF
        return ((v >> 5) << 25) | (rs2 << 20) | (rs1 << 15) \
            | (info.f3 << 12) | ((v & 0x1F) << 7) | op
    if fmt == "B":
        _check_range(imm, -4096, 4094, "offset")
        if imm & 1:
            raise ValueError(f"odd branch offset: {imm}")
        v = imm & 0x1FFF
        return (((v >> 12) & 1) << 31) | (((v >> 5) & 0x3F) << 25) \
            | (rs2 << 20) | (rs1 << 15) | (info.f3 << 12) \
            | (((v >> 1) & 0xF) << 8) | (((v >> 11) & 1) << 7) | op
    if fmt == "U":
        _check_range(imm, -(1 << 31), (1 << 31) - 1, "imm")
        if imm & 0xFFF:
            raise ValueError(f"U-format constant has low bits set: {imm}")
        return (imm & 0xFFFFF000) | (rd << 7) | op
    if fmt == "J":
        _check_range(imm, -(1 << 20), (1 << 20) - 2, "offset")
        if imm & 1:
            raise ValueError(f"odd jump offset: {imm}")
        v = imm & 0x1FFFFF
        return (((v >> 20) & 1) << 31) | (((v >> 1) & 0x3FF) << 21) \
            | (((v >> 11) & 1) << 20) | (((v >> 12) & 0xFF) << 12) \
            | (rd << 7) | op
    if fmt == "SYS":
        return {"fence": 0x0FF0000F, "ecall": 0x00000073,
                "ebreak": 0x00100073, "mret": 0x30200073}[info.name]
    if fmt == "CSR":
        _check_range(imm, 0, 0xFFF, "csr")
        return (imm << 20) | (rs1 << 15) | (info.f3 << 12) | (rd << 7) | op
    if fmt == "CSRI":
        _check_range(imm, 0, 0xFFF, "csr")
        _check_range(rs1, 0, 31, "zimm")
        return (imm << 20) | (rs1 << 15) | (info.f3 << 12) | (rd << 7) | op
    if fmt == "FR":
        if instr.rm not in VALID_RM:
            raise ValueError(f"reserved rounding mode: {instr.rm}")
        return (info.f7 << 25) | (rs2 << 20) | (rs1 << 15) \
            | (instr.rm << 12) | (rd << 7) | op
    if fmt in ("FR3", "FCMP"):
        return (info.f7 << 25) | (rs2 << 20) | (rs1 << 15) \
            | (info.f3 << 12) | (rd << 7) | op
    if fmt == "FU":
        if instr.rm not in VALID_RM:
            raise ValueError(f"reserved rounding mode: {instr.rm}")
        return (info.f7 << 25) | (info.rs2code << 20) | (rs1 << 15) \
            | (instr.rm << 12) | (rd << 7) | op
    if fmt == "FMV":
        return (info.f7 << 25) | (rs1 << 15) | (rd << 7) | op
    if fmt == "R4":
        if instr.rm not in VALID_RM:
            raise ValueError(f"reserved rounding mode: {instr.rm}")
        rs3 = _check_reg(instr.rs3, "rs3")
        return (rs3 << 27) | (rs2 << 20) | (rs1 << 15) \
            | (instr.rm << 12) | (rd << 7) | op
    raise AssertionError(f"unhandled format {fmt}")
