# cython: language_level=3, boundscheck=False, wraparound=False
# cython: cdivision=True, initializedcheck=False
"""Compiled step engine.

A transliteration of purestep.run into C integer arithmetic over the
machine's flat decode-cache arrays (dc_kid / dc_regs / dc_imm); the
slot table, bitstream cache, tracing and decode remain Python calls on
their cold paths.  purestep.py holds the reference semantics; the
parity tests pin this module to it bit for bit.

Float instructions use the host's IEEE binary32 arithmetic, which is
correctly rounded for add/sub/mul/div/sqrt/fma, with every NaN result
canonicalized to 0x7FC00000 exactly as softfloat.py does.  Memory is
read through host-endian loads, so this engine assumes a little-endian
host (the wheel targets are all little-endian; the pure engine has no
such restriction).
"""

from libc.math cimport fmaf, floor, isnan, sqrtf, INFINITY
from libc.stdint cimport (int8_t, int16_t, int32_t, int64_t,
                          uint8_t, uint32_t, uint64_t)
from libc.string cimport memcpy

from .isa import DecodeError, KIND_BY_ID, KIND_BY_NAME
from . import machine as _mach
from .slots import Miss
from . import purestep


cdef enum:
    OP_LUI = 1, OP_AUIPC, OP_JAL, OP_JALR,
    OP_BEQ, OP_BNE, OP_BLT, OP_BGE, OP_BLTU, OP_BGEU,
    OP_LB, OP_LH, OP_LW, OP_LBU, OP_LHU, OP_SB, OP_SH, OP_SW,
    OP_ADDI, OP_SLTI, OP_SLTIU, OP_XORI, OP_ORI, OP_ANDI,
    OP_SLLI, OP_SRLI, OP_SRAI,
    OP_ADD, OP_SUB, OP_SLL, OP_SLT, OP_SLTU, OP_XOR, OP_SRL, OP_SRA,
    OP_OR, OP_AND,
    OP_FENCE, OP_ECALL, OP_EBREAK, OP_MRET,
    OP_CSRRW, OP_CSRRS, OP_CSRRC, OP_CSRRWI, OP_CSRRSI, OP_CSRRCI,
    OP_MUL, OP_MULH, OP_MULHSU, OP_MULHU,
    OP_DIV, OP_DIVU, OP_REM, OP_REMU,
    OP_FLW, OP_FSW, OP_FMV_X_W, OP_FMV_W_X,
    OP_FADD, OP_FSUB, OP_FMUL, OP_FDIV, OP_FSQRT,
    OP_FSGNJ, OP_FSGNJN, OP_FSGNJX, OP_FMIN, OP_FMAX,
    OP_FLE, OP_FLT, OP_FEQ,
    OP_FCVT_W_S, OP_FCVT_WU_S, OP_FCVT_S_W, OP_FCVT_S_WU,
    OP_FMADD, OP_FMSUB, OP_FNMSUB, OP_FNMADD

cdef enum:
    R_HALT = 1, R_TIMER, R_ITER, R_INSTRET, R_BUDGET, R_TRAP

cdef enum:
    C_MISALIGNED = 0
    C_FETCH_FAULT = 1
    C_ILLEGAL = 2
    C_BREAKPOINT = 3
    C_LOAD_FAULT = 5
    C_STORE_FAULT = 7
    C_ECALL_M = 11

DEF MMIO_SIZE = 0x1000
DEF NO_ADDR = 0xFFFFFFFFu
DEF CANON_NAN = 0x7FC00000u
cdef uint64_t INF64 = (<uint64_t>1) << 62

cdef int16_t _op_of[256]


def _init_dispatch():
    table = {
        "lui": OP_LUI, "auipc": OP_AUIPC, "jal": OP_JAL, "jalr": OP_JALR,
        "beq": OP_BEQ, "bne": OP_BNE, "blt": OP_BLT, "bge": OP_BGE,
        "bltu": OP_BLTU, "bgeu": OP_BGEU,
        "lb": OP_LB, "lh": OP_LH, "lw": OP_LW, "lbu": OP_LBU, "lhu": OP_LHU,
        "sb": OP_SB, "sh": OP_SH, "sw": OP_SW,
        "addi": OP_ADDI, "slti": OP_SLTI, "sltiu": OP_SLTIU,
        "xori": OP_XORI, "ori": OP_ORI, "andi": OP_ANDI,
        "slli": OP_SLLI, "srli": OP_SRLI, "srai": OP_SRAI,
        "add": OP_ADD, "sub": OP_SUB, "sll": OP_SLL, "slt": OP_SLT,
        "sltu": OP_SLTU, "xor": OP_XOR, "srl": OP_SRL, "sra": OP_SRA,
        "or": OP_OR, "and": OP_AND,
        "fence": OP_FENCE, "ecall": OP_ECALL, "ebreak": OP_EBREAK,
        "mret": OP_MRET,
        "csrrw": OP_CSRRW, "csrrs": OP_CSRRS, "csrrc": OP_CSRRC,
        "csrrwi": OP_CSRRWI, "csrrsi": OP_CSRRSI, "csrrci": OP_CSRRCI,
        "mul": OP_MUL, "mulh": OP_MULH, "mulhsu": OP_MULHSU,
        "mulhu": OP_MULHU,
        "div": OP_DIV, "divu": OP_DIVU, "rem": OP_REM, "remu": OP_REMU,
        "flw": OP_FLW, "fsw": OP_FSW,
        "fmv.x.w": OP_FMV_X_W, "fmv.w.x": OP_FMV_W_X,
        "fadd.s": OP_FADD, "fsub.s": OP_FSUB, "fmul.s": OP_FMUL,
        "fdiv.s": OP_FDIV, "fsqrt.s": OP_FSQRT,
        "fsgnj.s": OP_FSGNJ, "fsgnjn.s": OP_FSGNJN, "fsgnjx.s": OP_FSGNJX,
        "fmin.s": OP_FMIN, "fmax.s": OP_FMAX,
        "fle.s": OP_FLE, "flt.s": OP_FLT, "feq.s": OP_FEQ,
        "fcvt.w.s": OP_FCVT_W_S, "fcvt.wu.s": OP_FCVT_WU_S,
        "fcvt.s.w": OP_FCVT_S_W, "fcvt.s.wu": OP_FCVT_S_WU,
        "fmadd.s": OP_FMADD, "fmsub.s": OP_FMSUB,
        "fnmsub.s": OP_FNMSUB, "fnmadd.s": OP_FNMADD,
    }
    if len(KIND_BY_ID) > 256:
        raise ImportError("kind table outgrew the dispatch array")
    for i in range(256):
        _op_of[i] = 0
    for name, op in table.items():
        _op_of[KIND_BY_NAME[name].kid] = op
    missing = [info.name for info in KIND_BY_ID[1:]
               if _op_of[info.kid] == 0]
    if missing:
        raise ImportError(f"no compiled handler for {missing}")
    # stop codes and trap causes are mirrored as C constants; a drift
    # in machine.py must fail loudly here, not corrupt run results
    if (R_HALT, R_TIMER, R_ITER, R_INSTRET, R_BUDGET, R_TRAP) != (
            _mach.R_HALT, _mach.R_TIMER, _mach.R_ITER, _mach.R_INSTRET,
            _mach.R_BUDGET, _mach.R_TRAP):
        raise ImportError("stop-reason codes diverged from machine.py")
    if (C_MISALIGNED, C_FETCH_FAULT, C_ILLEGAL, C_BREAKPOINT,
            C_LOAD_FAULT, C_STORE_FAULT, C_ECALL_M) != (
            _mach.CAUSE_MISALIGNED_FETCH, _mach.CAUSE_FETCH_FAULT,
            _mach.CAUSE_ILLEGAL, _mach.CAUSE_BREAKPOINT,
            _mach.CAUSE_LOAD_FAULT, _mach.CAUSE_STORE_FAULT,
            _mach.CAUSE_ECALL_M):
        raise ImportError("trap causes diverged from machine.py")


_init_dispatch()


# ---------- float32 helpers (bit-exact with softfloat.py) ----------

cdef union _fbits:
    uint32_t u
    float f


cdef inline float _tf(uint32_t b) noexcept nogil:
    cdef _fbits v
    v.u = b
    return v.f


cdef inline uint32_t _fb(float x) noexcept nogil:
    cdef _fbits v
    v.f = x
    return v.u


cdef inline uint32_t _canon(float x) noexcept nogil:
    if isnan(x):
        return CANON_NAN
    return _fb(x)


cdef inline bint _is_nan(uint32_t b) noexcept nogil:
    return (b & 0x7F800000u) == 0x7F800000u and (b & 0x7FFFFFu) != 0


cdef inline uint32_t _fmin_bits(uint32_t a, uint32_t b) noexcept nogil:
    cdef bint an = _is_nan(a), bn = _is_nan(b)
    if an and bn:
        return CANON_NAN
    if an:
        return b
    if bn:
        return a
    if (a & 0x7FFFFFFFu) == 0 and (b & 0x7FFFFFFFu) == 0:
        return a | b  # -0 wins if present
    return a if _tf(a) < _tf(b) else b


cdef inline uint32_t _fmax_bits(uint32_t a, uint32_t b) noexcept nogil:
    cdef bint an = _is_nan(a), bn = _is_nan(b)
    if an and bn:
        return CANON_NAN
    if an:
        return b
    if bn:
        return a
    if (a & 0x7FFFFFFFu) == 0 and (b & 0x7FFFFFFFu) == 0:
        return a & b  # +0 wins unless both are -0
    return a if _tf(a) > _tf(b) else b


cdef inline uint32_t _fsqrt_bits(uint32_t a) noexcept nogil:
    if a == 0x80000000u or a == 0:
        return a
    return _canon(sqrtf(_tf(a)))  # negative and NaN inputs both canonize


cdef inline int64_t _round_dbl(double x, int rm) noexcept nogil:
    # x is small enough for floor(x) to fit an int64 (callers clamp)
    cdef double fl = floor(x)
    cdef int64_t m = <int64_t>fl
    cdef double frac = x - fl  # exact
    if frac == 0.0:
        return m
    if rm == 0 or rm == 7:  # nearest-even (DYN reads as RNE)
        if frac > 0.5 or (frac == 0.5 and (m & 1)):
            m += 1
    elif rm == 1:  # toward zero
        if x < 0:
            m += 1
    elif rm == 3:  # toward +inf
        m += 1
    elif rm == 4:  # ties away; frac is relative to floor, negative
        if frac > 0.5 or (frac == 0.5 and x > 0):  # ties stay at floor
            m += 1
    # rm == 2 (toward -inf) keeps the floor
    return m


cdef inline uint32_t _fcvt_w(uint32_t a, int rm) noexcept nogil:
    if _is_nan(a):
        return 0x7FFFFFFFu
    cdef float fa = _tf(a)
    if fa == INFINITY:
        return 0x7FFFFFFFu
    if fa == -INFINITY:
        return 0x80000000u
    cdef double x = <double>fa
    if x >= 2147483648.0:
        return 0x7FFFFFFFu
    if x <= -2147483904.0:  # next float32 below -2^31; rounds below range
        return 0x80000000u
    cdef int64_t r = _round_dbl(x, rm)
    if r > 2147483647:
        return 0x7FFFFFFFu
    if r < -2147483648:
        return 0x80000000u
    return <uint32_t>r


cdef inline uint32_t _fcvt_wu(uint32_t a, int rm) noexcept nogil:
    if _is_nan(a):
        return 0xFFFFFFFFu
    cdef float fa = _tf(a)
    if fa == INFINITY:
        return 0xFFFFFFFFu
    if fa == -INFINITY:
        return 0
    cdef double x = <double>fa
    if x >= 4294967296.0:
        return 0xFFFFFFFFu
    if x <= -1.0:  # no rounding mode reaches zero from here
        return 0
    cdef int64_t r = _round_dbl(x, rm)
    if r < 0:
        return 0
    return <uint32_t>r


cdef inline uint64_t _round_shift64(uint64_t m, int d, uint32_t sign,
                                    int rm) noexcept nogil:
    cdef uint64_t q = m >> d
    cdef uint64_t rem = m & (((<uint64_t>1) << d) - 1)
    cdef uint64_t half
    if rem == 0:
        return q
    if rm == 0 or rm == 7:
        half = (<uint64_t>1) << (d - 1)
        if rem > half or (rem == half and (q & 1)):
            q += 1
    elif rm == 2:
        q += sign
    elif rm == 3:
        q += 1 - sign
    elif rm == 4:
        if rem >= (<uint64_t>1) << (d - 1):
            q += 1
    # rm == 1 truncates
    return q


cdef inline uint32_t _pack_int(uint32_t sign, uint64_t mag,
                               int rm) noexcept nogil:
    # mag != 0 and fits 32 bits, so overflow to infinity is impossible
    cdef int bl = 0
    cdef uint64_t t = mag
    while t:
        t >>= 1
        bl += 1
    cdef uint32_t units
    if bl <= 24:
        units = <uint32_t>(mag << (24 - bl))
    else:
        units = <uint32_t>_round_shift64(mag, bl - 24, sign, rm)
    return (sign << 31) | (((<uint32_t>(bl + 125)) << 23) + units)


cdef inline uint32_t _fcvt_s_w(uint32_t v, int rm) noexcept nogil:
    cdef int32_t sv = <int32_t>v
    if sv == 0:
        return 0
    if sv < 0:
        return _pack_int(1, <uint64_t>(-(<int64_t>sv)), rm)
    return _pack_int(0, <uint64_t>sv, rm)


cdef inline uint32_t _fcvt_s_wu(uint32_t v, int rm) noexcept nogil:
    if v == 0:
        return 0
    return _pack_int(0, <uint64_t>v, rm)


# ---------- the step loop ----------

def run(m, stop_cycle=None, iter_target=None, max_instret=None,
        budget_cycle=None, capture=None):
    """Run until a stop condition; returns an R_* reason code.

    Mirrors purestep.run including the order stop conditions are
    checked in.  Single-step capture is delegated to the pure engine.
    """
    if capture is not None:
        return purestep.run(m, stop_cycle, iter_target, max_instret,
                            budget_cycle, capture)

    cdef uint64_t c_stop = INF64 if stop_cycle is None else \
        <uint64_t>stop_cycle
    cdef uint64_t c_iter = INF64 if iter_target is None else \
        <uint64_t>iter_target
    cdef uint64_t c_instret = INF64 if max_instret is None else \
        <uint64_t>max_instret
    cdef uint64_t c_budget = INF64 if budget_cycle is None else \
        <uint64_t>budget_cycle

    cdef uint8_t[::1] mem = m.mem
    cdef uint32_t[::1] x = m.x
    cdef uint32_t[::1] f = m.f
    cdef uint32_t[::1] csr = m.csr
    cdef int16_t[::1] dc_kid = m.dc_kid
    cdef uint32_t[::1] dc_regs = m.dc_regs
    cdef int32_t[::1] dc_imm = m.dc_imm
    cdef int16_t[::1] cost_by_kid = m.cost_by_kid
    cdef int8_t[::1] has_mem = m.has_mem_by_kid
    cdef int8_t[::1] tag_by_kid = m.tag_by_kid

    slot = m.slot
    bs = m.bitstream
    trace = m.trace
    icache = m._icache
    console = m.console
    cdef bint slot_on = m.slots_enabled
    cdef bint bs_on = bs.enabled
    cdef bint has_trace = trace is not None
    cdef bint halt_on_trap = m.halt_on_trap
    cdef uint64_t mem_size = m.mem_size
    cdef uint64_t mmio_base = m.mmio_base
    cdef int trap_entry = m.trap_entry_cycles

    cdef uint64_t cycle = m.cycle
    cdef uint64_t instret = m.instret
    cdef uint32_t pc = m.pc
    cdef uint64_t iter_count = m.iter_count
    cdef uint32_t last_mem = m.last_mem_addr
    cdef bint new_halt = False
    cdef uint32_t exit_value = 0

    if m.halted:
        return R_HALT
    if cycle >= c_budget:
        return R_BUDGET
    if cycle >= c_stop:
        return R_TIMER
    if instret >= c_instret:
        return R_INSTRET
    if iter_count >= c_iter:
        return R_ITER

    cdef int reason = 0
    cdef int stop_flag, trapped, op, kid, lat, extra, sz
    cdef uint32_t tcause, idx, regs, rd, rs1, rs2, aux, nextpc
    cdef uint32_t a, b, v, addr, st, wi, wj
    cdef int32_t imm, sa, sb
    cdef uint64_t end
    cdef int64_t prod

    try:
        while True:
            trapped = 0
            stop_flag = 0
            tcause = 0
            if pc & 3 or <uint64_t>pc + 4 > mem_size:
                tcause = C_MISALIGNED if pc & 3 else C_FETCH_FAULT
                trapped = 1
            else:
                idx = pc >> 2
                kid = dc_kid[idx]
                if kid == 0:
                    try:
                        m.decode_fill(pc)
                    except DecodeError:
                        pass
                    kid = dc_kid[idx]
                if kid == 0:
                    tcause = C_ILLEGAL
                    trapped = 1
                else:
                    if slot_on and tag_by_kid[kid] >= 0:
                        out = slot.access(tag_by_kid[kid], cycle)
                        lat = out.latency
                        if bs_on and type(out) is Miss:
                            extra = bs.fetch(tag_by_kid[kid]).extra_cycles
                            if extra:
                                lat += extra
                                slot.add_stall(tag_by_kid[kid], extra)
                        cycle += lat

                    regs = dc_regs[idx]
                    imm = dc_imm[idx]
                    rd = regs & 0xFF
                    rs1 = (regs >> 8) & 0xFF
                    rs2 = (regs >> 16) & 0xFF
                    aux = regs >> 24
                    op = _op_of[kid]
                    nextpc = pc + 4

                    if op == OP_ADDI:
                        if rd:
                            x[rd] = x[rs1] + <uint32_t>imm
                    elif op == OP_ADD:
                        if rd:
                            x[rd] = x[rs1] + x[rs2]
                    elif op == OP_LW or op == OP_LB or op == OP_LH or \
                            op == OP_LBU or op == OP_LHU:
                        addr = x[rs1] + <uint32_t>imm
                        last_mem = addr
                        sz = 4 if op == OP_LW else \
                            (2 if op == OP_LH or op == OP_LHU else 1)
                        end = <uint64_t>addr + sz
                        if end <= mem_size:
                            v = 0
                            memcpy(&v, &mem[addr], sz)
                        elif mmio_base <= addr and \
                                <uint64_t>addr < mmio_base + MMIO_SIZE:
                            v = 0
                        else:
                            tcause = C_LOAD_FAULT
                            trapped = 1
                        if not trapped and rd:
                            if op == OP_LB:
                                x[rd] = (v ^ 0x80u) - 0x80u
                            elif op == OP_LH:
                                x[rd] = (v ^ 0x8000u) - 0x8000u
                            else:
                                x[rd] = v
                    elif op == OP_SW or op == OP_SB or op == OP_SH:
                        addr = x[rs1] + <uint32_t>imm
                        last_mem = addr
                        sz = 4 if op == OP_SW else (2 if op == OP_SH else 1)
                        v = x[rs2]
                        end = <uint64_t>addr + sz
                        if end <= mem_size:
                            memcpy(&mem[addr], &v, sz)
                            wi = addr >> 2
                            if dc_kid[wi]:
                                dc_kid[wi] = 0
                                icache.pop(wi, None)
                            wj = <uint32_t>(end - 1) >> 2
                            if wj != wi and dc_kid[wj]:
                                dc_kid[wj] = 0
                                icache.pop(wj, None)
                        elif mmio_base <= addr and \
                                <uint64_t>addr < mmio_base + MMIO_SIZE:
                            a = <uint32_t>(addr - mmio_base) & ~<uint32_t>3
                            if a == 0:
                                new_halt = True
                                exit_value = v
                                stop_flag = 1
                            elif a == 4:
                                console.append(v & 0xFF)
                            elif a == 8:
                                iter_count += 1
                                stop_flag = 2
                        else:
                            tcause = C_STORE_FAULT
                            trapped = 1
                    elif op == OP_BEQ:
                        if x[rs1] == x[rs2]:
                            nextpc = pc + <uint32_t>imm
                            if nextpc & 3:
                                tcause = C_MISALIGNED
                                trapped = 1
                    elif op == OP_BNE:
                        if x[rs1] != x[rs2]:
                            nextpc = pc + <uint32_t>imm
                            if nextpc & 3:
                                tcause = C_MISALIGNED
                                trapped = 1
                    elif op == OP_BLT:
                        if <int32_t>x[rs1] < <int32_t>x[rs2]:
                            nextpc = pc + <uint32_t>imm
                            if nextpc & 3:
                                tcause = C_MISALIGNED
                                trapped = 1
                    elif op == OP_BGE:
                        if <int32_t>x[rs1] >= <int32_t>x[rs2]:
                            nextpc = pc + <uint32_t>imm
                            if nextpc & 3:
                                tcause = C_MISALIGNED
                                trapped = 1
                    elif op == OP_BLTU:
                        if x[rs1] < x[rs2]:
                            nextpc = pc + <uint32_t>imm
                            if nextpc & 3:
                                tcause = C_MISALIGNED
                                trapped = 1
                    elif op == OP_BGEU:
                        if x[rs1] >= x[rs2]:
                            nextpc = pc + <uint32_t>imm
                            if nextpc & 3:
                                tcause = C_MISALIGNED
                                trapped = 1
                    elif op == OP_LUI:
                        if rd:
                            x[rd] = <uint32_t>imm
                    elif op == OP_AUIPC:
                        if rd:
                            x[rd] = pc + <uint32_t>imm
                    elif op == OP_JAL:
                        nextpc = pc + <uint32_t>imm
                        if nextpc & 3:
                            tcause = C_MISALIGNED
                            trapped = 1
                        elif rd:
                            x[rd] = pc + 4
                    elif op == OP_JALR:
                        nextpc = (x[rs1] + <uint32_t>imm) & 0xFFFFFFFEu
                        if nextpc & 2:
                            tcause = C_MISALIGNED
                            trapped = 1
                        elif rd:
                            x[rd] = pc + 4
                    elif op == OP_SLTI:
                        if rd:
                            x[rd] = 1 if <int32_t>x[rs1] < imm else 0
                    elif op == OP_SLTIU:
                        if rd:
                            x[rd] = 1 if x[rs1] < <uint32_t>imm else 0
                    elif op == OP_XORI:
                        if rd:
                            x[rd] = x[rs1] ^ <uint32_t>imm
                    elif op == OP_ORI:
                        if rd:
                            x[rd] = x[rs1] | <uint32_t>imm
                    elif op == OP_ANDI:
                        if rd:
                            x[rd] = x[rs1] & <uint32_t>imm
                    elif op == OP_SLLI:
                        if rd:
                            x[rd] = x[rs1] << imm
                    elif op == OP_SRLI:
                        if rd:
                            x[rd] = x[rs1] >> imm
                    elif op == OP_SRAI:
                        if rd:
                            x[rd] = <uint32_t>((<int32_t>x[rs1]) >> imm)
                    elif op == OP_SUB:
                        if rd:
                            x[rd] = x[rs1] - x[rs2]
                    elif op == OP_SLL:
                        if rd:
                            x[rd] = x[rs1] << (x[rs2] & 31)
                    elif op == OP_SLT:
                        if rd:
                            x[rd] = 1 if <int32_t>x[rs1] < <int32_t>x[rs2] \
                                else 0
                    elif op == OP_SLTU:
                        if rd:
                            x[rd] = 1 if x[rs1] < x[rs2] else 0
                    elif op == OP_XOR:
                        if rd:
                            x[rd] = x[rs1] ^ x[rs2]
                    elif op == OP_SRL:
                        if rd:
                            x[rd] = x[rs1] >> (x[rs2] & 31)
                    elif op == OP_SRA:
                        if rd:
                            x[rd] = <uint32_t>(
                                (<int32_t>x[rs1]) >> (x[rs2] & 31))
                    elif op == OP_OR:
                        if rd:
                            x[rd] = x[rs1] | x[rs2]
                    elif op == OP_AND:
                        if rd:
                            x[rd] = x[rs1] & x[rs2]
                    elif op == OP_FENCE:
                        pass
                    elif op == OP_ECALL:
                        tcause = C_ECALL_M
                        trapped = 1
                    elif op == OP_EBREAK:
                        tcause = C_BREAKPOINT
                        trapped = 1
                    elif op == OP_MRET:
                        st = csr[0]
                        csr[0] = (st & ~<uint32_t>0x88) | \
                            (((st >> 7) & 1) << 3) | 0x80u
                        nextpc = csr[3] & 0xFFFFFFFCu
                    elif OP_CSRRW <= op <= OP_CSRRCI:
                        if imm == 0x300:
                            wi = 0
                        elif imm == 0x304:
                            wi = 1
                        elif imm == 0x305:
                            wi = 2
                        elif imm == 0x341:
                            wi = 3
                        elif imm == 0x342:
                            wi = 4
                        else:
                            tcause = C_ILLEGAL
                            trapped = 1
                        if not trapped:
                            st = csr[wi]
                            if op == OP_CSRRW:
                                csr[wi] = x[rs1]
                            elif op == OP_CSRRS:
                                if rs1:
                                    csr[wi] = st | x[rs1]
                            elif op == OP_CSRRC:
                                if rs1:
                                    csr[wi] = st & ~x[rs1]
                            elif op == OP_CSRRWI:
                                csr[wi] = rs1
                            elif op == OP_CSRRSI:
                                if rs1:
                                    csr[wi] = st | rs1
                            else:  # OP_CSRRCI
                                if rs1:
                                    csr[wi] = st & ~rs1
                            if rd:
                                x[rd] = st
                    elif op == OP_MUL:
                        if rd:
                            x[rd] = x[rs1] * x[rs2]
                    elif op == OP_MULH:
                        if rd:
                            prod = (<int64_t><int32_t>x[rs1]) * \
                                (<int64_t><int32_t>x[rs2])
                            x[rd] = <uint32_t>(prod >> 32)
                    elif op == OP_MULHSU:
                        if rd:
                            prod = (<int64_t><int32_t>x[rs1]) * \
                                (<int64_t>x[rs2])
                            x[rd] = <uint32_t>(prod >> 32)
                    elif op == OP_MULHU:
                        if rd:
                            x[rd] = <uint32_t>(
                                ((<uint64_t>x[rs1]) * x[rs2]) >> 32)
                    elif op == OP_DIV:
                        if rd:
                            a = x[rs1]
                            b = x[rs2]
                            if b == 0:
                                x[rd] = 0xFFFFFFFFu
                            elif a == 0x80000000u and b == 0xFFFFFFFFu:
                                x[rd] = a
                            else:
                                x[rd] = <uint32_t>(
                                    (<int64_t><int32_t>a) //
                                    (<int64_t><int32_t>b))
                    elif op == OP_DIVU:
                        if rd:
                            b = x[rs2]
                            x[rd] = 0xFFFFFFFFu if b == 0 else x[rs1] // b
                    elif op == OP_REM:
                        if rd:
                            a = x[rs1]
                            b = x[rs2]
                            if b == 0:
                                x[rd] = a
                            elif a == 0x80000000u and b == 0xFFFFFFFFu:
                                x[rd] = 0
                            else:
                                x[rd] = <uint32_t>(
                                    (<int64_t><int32_t>a) %
                                    (<int64_t><int32_t>b))
                    elif op == OP_FLW:
                        addr = x[rs1] + <uint32_t>imm
                        last_mem = addr
                        end = <uint64_t>addr + 4
                        if end <= mem_size:
                            v = 0
                            memcpy(&v, &mem[addr], 4)
                            f[rd] = v
                        elif mmio_base <= addr and \
                                <uint64_t>addr < mmio_base + MMIO_SIZE:
                            f[rd] = 0
                        else:
                            tcause = C_LOAD_FAULT
                            trapped = 1
                    elif op == OP_FSW:
                        addr = x[rs1] + <uint32_t>imm
                        last_mem = addr
                        v = f[rs2]
                        end = <uint64_t>addr + 4
                        if end <= mem_size:
                            memcpy(&mem[addr], &v, 4)
                            wi = addr >> 2
                            if dc_kid[wi]:
                                dc_kid[wi] = 0
                                icache.pop(wi, None)
                            wj = <uint32_t>(end - 1) >> 2
                            if wj != wi and dc_kid[wj]:
                                dc_kid[wj] = 0
                                icache.pop(wj, None)
                        elif mmio_base <= addr and \
                                <uint64_t>addr < mmio_base + MMIO_SIZE:
                            a = <uint32_t>(addr - mmio_base) & ~<uint32_t>3
                            if a == 0:
                                new_halt = True
                                exit_value = v
                                stop_flag = 1
                            elif a == 4:
                                console.append(v & 0xFF)
                            elif a == 8:
                                iter_count += 1
                                stop_flag = 2
                        else:
                            tcause = C_STORE_FAULT
                            trapped = 1
                    elif op == OP_REMU:
                        if rd:
                            b = x[rs2]
                            x[rd] = x[rs1] if b == 0 else x[rs1] % b
                    elif op == OP_FADD:
                        f[rd] = _canon(_tf(f[rs1]) + _tf(f[rs2]))
                    elif op == OP_FSUB:
                        f[rd] = _canon(_tf(f[rs1]) - _tf(f[rs2]))
                    elif op == OP_FMUL:
                        f[rd] = _canon(_tf(f[rs1]) * _tf(f[rs2]))
                    elif op == OP_FDIV:
                        f[rd] = _canon(_tf(f[rs1]) / _tf(f[rs2]))
                    elif op == OP_FSQRT:
                        f[rd] = _fsqrt_bits(f[rs1])
                    elif op == OP_FSGNJ:
                        f[rd] = (f[rs1] & 0x7FFFFFFFu) | \
                            (f[rs2] & 0x80000000u)
                    elif op == OP_FSGNJN:
                        f[rd] = (f[rs1] & 0x7FFFFFFFu) | \
                            (~f[rs2] & 0x80000000u)
                    elif op == OP_FSGNJX:
                        f[rd] = f[rs1] ^ (f[rs2] & 0x80000000u)
                    elif op == OP_FMIN:
                        f[rd] = _fmin_bits(f[rs1], f[rs2])
                    elif op == OP_FMAX:
                        f[rd] = _fmax_bits(f[rs1], f[rs2])
                    elif op == OP_FLE:
                        if rd:
                            a = f[rs1]
                            b = f[rs2]
                            x[rd] = 0 if _is_nan(a) or _is_nan(b) else \
                                (1 if _tf(a) <= _tf(b) else 0)
                    elif op == OP_FLT:
                        if rd:
                            a = f[rs1]
                            b = f[rs2]
                            x[rd] = 0 if _is_nan(a) or _is_nan(b) else \
                                (1 if _tf(a) < _tf(b) else 0)
                    elif op == OP_FEQ:
                        if rd:
                            a = f[rs1]
                            b = f[rs2]
                            x[rd] = 0 if _is_nan(a) or _is_nan(b) else \
                                (1 if _tf(a) == _tf(b) else 0)
                    elif op == OP_FCVT_W_S:
                        if rd:
                            x[rd] = _fcvt_w(f[rs1], <int>aux)
                    elif op == OP_FCVT_WU_S:
                        if rd:
                            x[rd] = _fcvt_wu(f[rs1], <int>aux)
                    elif op == OP_FCVT_S_W:
                        f[rd] = _fcvt_s_w(x[rs1], <int>aux)
                    elif op == OP_FCVT_S_WU:
                        f[rd] = _fcvt_s_wu(x[rs1], <int>aux)
                    elif op == OP_FMV_X_W:
                        if rd:
                            x[rd] = f[rs1]
                    elif op == OP_FMV_W_X:
                        f[rd] = x[rs1]
                    elif op == OP_FMADD:
                        f[rd] = _canon(fmaf(_tf(f[rs1]), _tf(f[rs2]),
                                            _tf(f[aux])))
                    elif op == OP_FMSUB:
                        f[rd] = _canon(fmaf(_tf(f[rs1]), _tf(f[rs2]),
                                            _tf(f[aux] ^ 0x80000000u)))
                    elif op == OP_FNMSUB:
                        f[rd] = _canon(fmaf(_tf(f[rs1] ^ 0x80000000u),
                                            _tf(f[rs2]), _tf(f[aux])))
                    else:  # OP_FNMADD
                        f[rd] = _canon(fmaf(_tf(f[rs1] ^ 0x80000000u),
                                            _tf(f[rs2]),
                                            _tf(f[aux] ^ 0x80000000u)))

                    if not trapped:
                        cycle += cost_by_kid[kid]
                        instret += 1
                        if has_trace:
                            trace.append(
                                pc, kid,
                                last_mem if has_mem[kid] else NO_ADDR)
                        pc = nextpc

            if trapped:
                csr[3] = pc  # mepc: pc is unchanged on every trap path
                csr[4] = tcause
                st = csr[0]
                csr[0] = (st & ~<uint32_t>0x88) | (((st >> 3) & 1) << 7)
                pc = csr[2] & 0xFFFFFFFCu
                cycle += trap_entry
                m.trap_count = m.trap_count + 1
                m.last_trap = (tcause, csr[3])
                if halt_on_trap:
                    reason = R_TRAP
                    break
            if stop_flag == 1:
                reason = R_HALT
                break
            if stop_flag == 2 and iter_count >= c_iter:
                reason = R_ITER
                break
            if instret >= c_instret:
                reason = R_INSTRET
                break
            if cycle >= c_stop:
                reason = R_TIMER
                break
            if cycle >= c_budget:
                reason = R_BUDGET
                break
    finally:
        m.cycle = cycle
        m.instret = instret
        m.pc = pc
        m.iter_count = iter_count
        m.last_mem_addr = last_mem
        if new_halt:
            m.halted = True
            m.exit_value = exit_value
    return reason


def step_once(m):
    """One-instruction step with reporting; uses the reference engine."""
    return purestep.step_once(m)
