"""Pure-Python step engine: the reference semantics.

The compiled engine (_faststep) reimplements exactly this loop against
the same array state; parity tests hold the two to bit-identical
behavior.  Keep any semantic change here first.
"""

from __future__ import annotations

from . import softfloat as sf
from .isa import KIND_BY_ID, KIND_BY_NAME, DecodeError
from .machine import (
    Trap, StepReport, MMIO_SIZE, NO_ADDR,
    R_HALT, R_TIMER, R_ITER, R_INSTRET, R_BUDGET, R_TRAP,
    CSR_INDEX, CSR_MSTATUS, CSR_MTVEC, CSR_MEPC, CSR_MCAUSE,
    CAUSE_MISALIGNED_FETCH, CAUSE_FETCH_FAULT, CAUSE_ILLEGAL,
    CAUSE_BREAKPOINT, CAUSE_LOAD_FAULT, CAUSE_STORE_FAULT, CAUSE_ECALL_M,
)
from .slots import Miss

MASK = 0xFFFFFFFF
_INF = 1 << 62


def _s32(v):
    return v - ((v >> 31) << 32)


# ---------- data memory ----------

def _load(m, addr, size):
    end = addr + size
    if end <= m.mem_size:
        return int.from_bytes(m.mem[addr:end], "little")
    base = m.mmio_base
    if base <= addr < base + MMIO_SIZE:
        return 0
    raise Trap(CAUSE_LOAD_FAULT, addr)


def _store(m, addr, size, val):
    end = addr + size
    if end <= m.mem_size:
        m.mem[addr:end] = (val & ((1 << (8 * size)) - 1)).to_bytes(size, "little")
        dc = m.dc_kid
        i = addr >> 2
        if dc[i]:
            dc[i] = 0
            m._icache.pop(i, None)
        j = (end - 1) >> 2
        if j != i and dc[j]:
            dc[j] = 0
            m._icache.pop(j, None)
        return
    base = m.mmio_base
    if base <= addr < base + MMIO_SIZE:
        off = (addr - base) & ~3
        if off == 0x0:
            m.halted = True
            m.exit_value = val & MASK
            m._stop_flag = 1
        elif off == 0x4:
            m.console.append(val & 0xFF)
        elif off == 0x8:
            m.iter_count += 1
            m._stop_flag = 2
        return
    raise Trap(CAUSE_STORE_FAULT, addr)


# ---------- handlers, one per kind ----------

_HANDLERS = [None] * len(KIND_BY_ID)


def _reg(name):
    def deco(fn):
        kid = KIND_BY_NAME[name].kid
        assert _HANDLERS[kid] is None
        _HANDLERS[kid] = fn
        return fn
    return deco


@_reg("lui")
def _h_lui(m, ins, pc):
    if ins.rd:
        m.x[ins.rd] = ins.imm & MASK
    return pc + 4


@_reg("auipc")
def _h_auipc(m, ins, pc):
    if ins.rd:
        m.x[ins.rd] = (pc + ins.imm) & MASK
    return pc + 4


@_reg("jal")
def _h_jal(m, ins, pc):
    t = (pc + ins.imm) & MASK
    if t & 3:
        raise Trap(CAUSE_MISALIGNED_FETCH, t)
    if ins.rd:
        m.x[ins.rd] = (pc + 4) & MASK
    return t


@_reg("jalr")
def _h_jalr(m, ins, pc):
    t = (m.x[ins.rs1] + ins.imm) & 0xFFFFFFFE
    if t & 2:
        raise Trap(CAUSE_MISALIGNED_FETCH, t)
    if ins.rd:
        m.x[ins.rd] = (pc + 4) & MASK
    return t


def _branch(cond):
    def h(m, ins, pc, cond=cond):
        if cond(m.x[ins.rs1], m.x[ins.rs2]):
            t = (pc + ins.imm) & MASK
            if t & 3:
                raise Trap(CAUSE_MISALIGNED_FETCH, t)
            return t
        return pc + 4
    return h


_reg("beq")(_branch(lambda a, b: a == b))
_reg("bne")(_branch(lambda a, b: a != b))
_reg("blt")(_branch(lambda a, b: _s32(a) < _s32(b)))
_reg("bge")(_branch(lambda a, b: _s32(a) >= _s32(b)))
_reg("bltu")(_branch(lambda a, b: a < b))
_reg("bgeu")(_branch(lambda a, b: a >= b))


@_reg("lb")
def _h_lb(m, ins, pc):
    a = (m.x[ins.rs1] + ins.imm) & MASK
    m.last_mem_addr = a
    v = _load(m, a, 1)
    if ins.rd:
        m.x[ins.rd] = ((v ^ 0x80) - 0x80) & MASK
    return pc + 4


@_reg("lh")
def _h_lh(m, ins, pc):
    a = (m.x[ins.rs1] + ins.imm) & MASK
    m.last_mem_addr = a
    v = _load(m, a, 2)
    if ins.rd:
        m.x[ins.rd] = ((v ^ 0x8000) - 0x8000) & MASK
    return pc + 4


@_reg("lw")
def _h_lw(m, ins, pc):
    a = (m.x[ins.rs1] + ins.imm) & MASK
    m.last_mem_addr = a
    v = _load(m, a, 4)
    if ins.rd:
        m.x[ins.rd] = v
    return pc + 4


@_reg("lbu")
def _h_lbu(m, ins, pc):
    a = (m.x[ins.rs1] + ins.imm) & MASK
    m.last_mem_addr = a
    v = _load(m, a, 1)
    if ins.rd:
        m.x[ins.rd] = v
    return pc + 4


@_reg("lhu")
def _h_lhu(m, ins, pc):
    a = (m.x[ins.rs1] + ins.imm) & MASK
    m.last_mem_addr = a
    v = _load(m, a, 2)
    if ins.rd:
        m.x[ins.rd] = v
    return pc + 4


@_reg("flw")
def _h_flw(m, ins, pc):
    a = (m.x[ins.rs1] + ins.imm) & MASK
    m.last_mem_addr = a
    m.f[ins.rd] = _load(m, a, 4)
    return pc + 4


@_reg("sb")
def _h_sb(m, ins, pc):
    a = (m.x[ins.rs1] + ins.imm) & MASK
    m.last_mem_addr = a
    _store(m, a, 1, m.x[ins.rs2])
    return pc + 4


@_reg("sh")
def _h_sh(m, ins, pc):
    a = (m.x[ins.rs1] + ins.imm) & MASK
    m.last_mem_addr = a
    _store(m, a, 2, m.x[ins.rs2])
    return pc + 4


@_reg("sw")
def _h_sw(m, ins, pc):
    a = (m.x[ins.rs1] + ins.imm) & MASK
    m.last_mem_addr = a
    _store(m, a, 4, m.x[ins.rs2])
    return pc + 4


@_reg("fsw")
def _h_fsw(m, ins, pc):
    a = (m.x[ins.rs1] + ins.imm) & MASK
    m.last_mem_addr = a
    _store(m, a, 4, m.f[ins.rs2])
    return pc + 4


@_reg("addi")
def _h_addi(m, ins, pc):
    if ins.rd:
        m.x[ins.rd] = (m.x[ins.rs1] + ins.imm) & MASK
    return pc + 4


@_reg("slti")
def _h_slti(m, ins, pc):
    if ins.rd:
        m.x[ins.rd] = 1 if _s32(m.x[ins.rs1]) < ins.imm else 0
    return pc + 4


@_reg("sltiu")
def _h_sltiu(m, ins, pc):
    if ins.rd:
        m.x[ins.rd] = 1 if m.x[ins.rs1] < (ins.imm & MASK) else 0
    return pc + 4


@_reg("xori")
def _h_xori(m, ins, pc):
    if ins.rd:
        m.x[ins.rd] = (m.x[ins.rs1] ^ ins.imm) & MASK
    return pc + 4


@_reg("ori")
def _h_ori(m, ins, pc):
    if ins.rd:
        m.x[ins.rd] = (m.x[ins.rs1] | ins.imm) & MASK
    return pc + 4


@_reg("andi")
def _h_andi(m, ins, pc):
    if ins.rd:
        m.x[ins.rd] = (m.x[ins.rs1] & ins.imm) & MASK
    return pc + 4


@_reg("slli")
def _h_slli(m, ins, pc):
    if ins.rd:
        m.x[ins.rd] = (m.x[ins.rs1] << ins.imm) & MASK
    return pc + 4


@_reg("srli")
def _h_srli(m, ins, pc):
    if ins.rd:
        m.x[ins.rd] = m.x[ins.rs1] >> ins.imm
    return pc + 4


@_reg("srai")
def _h_srai(m, ins, pc):
    if ins.rd:
        m.x[ins.rd] = (_s32(m.x[ins.rs1]) >> ins.imm) & MASK
    return pc + 4


@_reg("add")
def _h_add(m, ins, pc):
    if ins.rd:
        m.x[ins.rd] = (m.x[ins.rs1] + m.x[ins.rs2]) & MASK
    return pc + 4


@_reg("sub")
def _h_sub(m, ins, pc):
    if ins.rd:
        m.x[ins.rd] = (m.x[ins.rs1] - m.x[ins.rs2]) & MASK
    return pc + 4


@_reg("sll")
def _h_sll(m, ins, pc):
    if ins.rd:
        m.x[ins.rd] = (m.x[ins.rs1] << (m.x[ins.rs2] & 31)) & MASK
    return pc + 4


@_reg("slt")
def _h_slt(m, ins, pc):
    if ins.rd:
        m.x[ins.rd] = 1 if _s32(m.x[ins.rs1]) < _s32(m.x[ins.rs2]) else 0
    return pc + 4


@_reg("sltu")
def _h_sltu(m, ins, pc):
    if ins.rd:
        m.x[ins.rd] = 1 if m.x[ins.rs1] < m.x[ins.rs2] else 0
    return pc + 4


@_reg("xor")
def _h_xor(m, ins, pc):
    if ins.rd:
        m.x[ins.rd] = m.x[ins.rs1] ^ m.x[ins.rs2]
    return pc + 4


@_reg("srl")
def _h_srl(m, ins, pc):
    if ins.rd:
        m.x[ins.rd] = m.x[ins.rs1] >> (m.x[ins.rs2] & 31)
    return pc + 4


@_reg("sra")
def _h_sra(m, ins, pc):
    if ins.rd:
        m.x[ins.rd] = (_s32(m.x[ins.rs1]) >> (m.x[ins.rs2] & 31)) & MASK
    return pc + 4


@_reg("or")
def _h_or(m, ins, pc):
    if ins.rd:
        m.x[ins.rd] = m.x[ins.rs1] | m.x[ins.rs2]
    return pc + 4


@_reg("and")
def _h_and(m, ins, pc):
    if ins.rd:
        m.x[ins.rd] = m.x[ins.rs1] & m.x[ins.rs2]
    return pc + 4


@_reg("fence")
def _h_fence(m, ins, pc):
    return pc + 4


@_reg("ecall")
def _h_ecall(m, ins, pc):
    raise Trap(CAUSE_ECALL_M, 0)


@_reg("ebreak")
def _h_ebreak(m, ins, pc):
    raise Trap(CAUSE_BREAKPOINT, 0)


@_reg("mret")
def _h_mret(m, ins, pc):
    csr = m.csr
    st = csr[CSR_MSTATUS]
    mpie = (st >> 7) & 1
    csr[CSR_MSTATUS] = ((st & ~0x88) | (mpie << 3) | 0x80) & MASK
    return csr[CSR_MEPC] & 0xFFFFFFFC


def _csr_idx(ins):
    idx = CSR_INDEX.get(ins.imm)
    if idx is None:
        raise Trap(CAUSE_ILLEGAL, ins.raw_word or 0)
    return idx


@_reg("csrrw")
def _h_csrrw(m, ins, pc):
    idx = _csr_idx(ins)
    old = m.csr[idx]
    m.csr[idx] = m.x[ins.rs1]
    if ins.rd:
        m.x[ins.rd] = old
    return pc + 4


@_reg("csrrs")
def _h_csrrs(m, ins, pc):
    idx = _csr_idx(ins)
    old = m.csr[idx]
    if ins.rs1:
        m.csr[idx] = old | m.x[ins.rs1]
    if ins.rd:
        m.x[ins.rd] = old
    return pc + 4


@_reg("csrrc")
def _h_csrrc(m, ins, pc):
    idx = _csr_idx(ins)
    old = m.csr[idx]
    if ins.rs1:
        m.csr[idx] = old & (~m.x[ins.rs1] & MASK)
    if ins.rd:
        m.x[ins.rd] = old
    return pc + 4


@_reg("csrrwi")
def _h_csrrwi(m, ins, pc):
    idx = _csr_idx(ins)
    old = m.csr[idx]
    m.csr[idx] = ins.rs1
    if ins.rd:
        m.x[ins.rd] = old
    return pc + 4


@_reg("csrrsi")
def _h_csrrsi(m, ins, pc):
    idx = _csr_idx(ins)
    old = m.csr[idx]
    if ins.rs1:
        m.csr[idx] = old | ins.rs1
    if ins.rd:
        m.x[ins.rd] = old
    return pc + 4


@_reg("csrrci")
def _h_csrrci(m, ins, pc):
    idx = _csr_idx(ins)
    old = m.csr[idx]
    if ins.rs1:
        m.csr[idx] = old & (~ins.rs1 & MASK)
    if ins.rd:
        m.x[ins.rd] = old
    return pc + 4


@_reg("mul")
def _h_mul(m, ins, pc):
    if ins.rd:
        m.x[ins.rd] = (m.x[ins.rs1] * m.x[ins.rs2]) & MASK
    return pc + 4


@_reg("mulh")
def _h_mulh(m, ins, pc):
    if ins.rd:
        m.x[ins.rd] = ((_s32(m.x[ins.rs1]) * _s32(m.x[ins.rs2])) >> 32) & MASK
    return pc + 4


@_reg("mulhsu")
def _h_mulhsu(m, ins, pc):
    if ins.rd:
        m.x[ins.rd] = ((_s32(m.x[ins.rs1]) * m.x[ins.rs2]) >> 32) & MASK
    return pc + 4


@_reg("mulhu")
def _h_mulhu(m, ins, pc):
    if ins.rd:
        m.x[ins.rd] = ((m.x[ins.rs1] * m.x[ins.rs2]) >> 32) & MASK
    return pc + 4


@_reg("div")
def _h_div(m, ins, pc):
    if ins.rd:
        a, b = m.x[ins.rs1], m.x[ins.rs2]
        if b == 0:
            q = MASK
        elif a == 0x80000000 and b == MASK:
            q = a  # overflow: MIN / -1 wraps to MIN
        else:
            sa, sb = _s32(a), _s32(b)
            q = abs(sa) // abs(sb)
            if (sa < 0) != (sb < 0):
                q = -q
            q &= MASK
        m.x[ins.rd] = q
    return pc + 4


@_reg("divu")
def _h_divu(m, ins, pc):
    if ins.rd:
        b = m.x[ins.rs2]
        m.x[ins.rd] = MASK if b == 0 else m.x[ins.rs1] // b
    return pc + 4


@_reg("rem")
def _h_rem(m, ins, pc):
    if ins.rd:
        a, b = m.x[ins.rs1], m.x[ins.rs2]
        if b == 0:
            r = a  # remainder by zero: dividend
        elif a == 0x80000000 and b == MASK:
            r = 0
        else:
            sa, sb = _s32(a), _s32(b)
            r = abs(sa) % abs(sb)
            if sa < 0:
                r = -r
            r &= MASK
        m.x[ins.rd] = r
    return pc + 4


@_reg("remu")
def _h_remu(m, ins, pc):
    if ins.rd:
        b = m.x[ins.rs2]
        m.x[ins.rd] = m.x[ins.rs1] if b == 0 else m.x[ins.rs1] % b
    return pc + 4


def _freg2(op, name):
    def h(m, ins, pc, op=op):
        f = m.f
        f[ins.rd] = op(f[ins.rs1], f[ins.rs2])
        return pc + 4
    _reg(name)(h)


_freg2(sf.fadd, "fadd.s")
_freg2(sf.fsub, "fsub.s")
_freg2(sf.fmul, "fmul.s")
_freg2(sf.fdiv, "fdiv.s")
_freg2(sf.fsgnj, "fsgnj.s")
_freg2(sf.fsgnjn, "fsgnjn.s")
_freg2(sf.fsgnjx, "fsgnjx.s")
_freg2(sf.fmin, "fmin.s")
_freg2(sf.fmax, "fmax.s")


@_reg("fsqrt.s")
def _h_fsqrt(m, ins, pc):
    m.f[ins.rd] = sf.fsqrt(m.f[ins.rs1])
    return pc + 4


def _fcmp(op, name):
    def h(m, ins, pc, op=op):
        if ins.rd:
            m.x[ins.rd] = op(m.f[ins.rs1], m.f[ins.rs2])
        return pc + 4
    _reg(name)(h)


_fcmp(sf.fle, "fle.s")
_fcmp(sf.flt, "flt.s")
_fcmp(sf.feq, "feq.s")


@_reg("fcvt.w.s")
def _h_fcvt_w_s(m, ins, pc):
    if ins.rd:
        m.x[ins.rd] = sf.fcvt_w_s(m.f[ins.rs1], ins.rm) & MASK
    return pc + 4


@_reg("fcvt.wu.s")
def _h_fcvt_wu_s(m, ins, pc):
    if ins.rd:
        m.x[ins.rd] = sf.fcvt_wu_s(m.f[ins.rs1], ins.rm) & MASK
    return pc + 4


@_reg("fcvt.s.w")
def _h_fcvt_s_w(m, ins, pc):
    m.f[ins.rd] = sf.fcvt_s_w(m.x[ins.rs1], ins.rm)
    return pc + 4


@_reg("fcvt.s.wu")
def _h_fcvt_s_wu(m, ins, pc):
    m.f[ins.rd] = sf.fcvt_s_wu(m.x[ins.rs1], ins.rm)
    return pc + 4


@_reg("fmv.x.w")
def _h_fmv_x_w(m, ins, pc):
    if ins.rd:
        m.x[ins.rd] = m.f[ins.rs1]
    return pc + 4


@_reg("fmv.w.x")
def _h_fmv_w_x(m, ins, pc):
    m.f[ins.rd] = m.x[ins.rs1]
    return pc + 4


@_reg("fmadd.s")
def _h_fmadd(m, ins, pc):
    f = m.f
    f[ins.rd] = sf.fma(f[ins.rs1], f[ins.rs2], f[ins.rs3])
    return pc + 4


@_reg("fmsub.s")
def _h_fmsub(m, ins, pc):
    f = m.f
    f[ins.rd] = sf.fma(f[ins.rs1], f[ins.rs2], f[ins.rs3] ^ 0x80000000)
    return pc + 4


@_reg("fnmsub.s")
def _h_fnmsub(m, ins, pc):
    f = m.f
    f[ins.rd] = sf.fma(f[ins.rs1] ^ 0x80000000, f[ins.rs2], f[ins.rs3])
    return pc + 4


@_reg("fnmadd.s")
def _h_fnmadd(m, ins, pc):
    f = m.f
    f[ins.rd] = sf.fma(f[ins.rs1] ^ 0x80000000, f[ins.rs2],
                       f[ins.rs3] ^ 0x80000000)
    return pc + 4


assert all(h is not None for h in _HANDLERS[1:]), "kind without handler"


# ---------- the step loop ----------

def run(m, stop_cycle=None, iter_target=None, max_instret=None,
        budget_cycle=None, capture=None):
    """Run until a stop condition; returns an R_* reason code.

    Stop conditions are evaluated on instruction boundaries: an
    instruction that straddles stop_cycle completes first (the timer
    fires between instructions).
    """
    stop_cycle = _INF if stop_cycle is None else stop_cycle
    iter_tgt = _INF if iter_target is None else iter_target
    max_instret = _INF if max_instret is None else max_instret
    budget_cycle = _INF if budget_cycle is None else budget_cycle

    mem = m.mem
    x = m.x
    csr = m.csr
    dc_kid = m.dc_kid
    icache = m._icache
    handlers = _HANDLERS
    cost_by_kid = m.cost_by_kid
    has_mem = m.has_mem_by_kid
    tag_by_kid = m.tag_by_kid
    slot = m.slot
    slot_on = m.slots_enabled
    bs = m.bitstream
    bs_on = bs.enabled
    trace = m.trace
    trap_entry = m.trap_entry_cycles
    halt_on_trap = m.halt_on_trap
    mem_size = m.mem_size

    cycle = m.cycle
    instret = m.instret
    pc = m.pc

    if m.halted:
        return R_HALT
    if cycle >= budget_cycle:
        return R_BUDGET
    if cycle >= stop_cycle:
        return R_TIMER
    if instret >= max_instret:
        return R_INSTRET
    if m.iter_count >= iter_tgt:
        return R_ITER

    reason = 0
    try:
        while True:
            trapped = None
            step_start = cycle
            slot_out = None
            ins = None
            if pc & 3 or pc + 4 > mem_size:
                cause = CAUSE_MISALIGNED_FETCH if pc & 3 else CAUSE_FETCH_FAULT
                csr[CSR_MEPC] = pc
                csr[CSR_MCAUSE] = cause
                st = csr[CSR_MSTATUS]
                csr[CSR_MSTATUS] = (st & ~0x88 & MASK) | (((st >> 3) & 1) << 7)
                pc = csr[CSR_MTVEC] & 0xFFFFFFFC
                cycle += trap_entry
                m.trap_count += 1
                m.last_trap = (cause, csr[CSR_MEPC])
                trapped = cause
            else:
                idx = pc >> 2
                kid = dc_kid[idx]
                if kid == 0:
                    try:
                        ins = m.decode_fill(pc)
                        kid = ins.info.kid
                    except DecodeError:
                        kid = 0
                else:
                    ins = icache.get(idx)
                    if ins is None:
                        ins = m.decode_fill(pc)
                if kid == 0:
                    word = int.from_bytes(mem[pc:pc + 4], "little")
                    csr[CSR_MEPC] = pc
                    csr[CSR_MCAUSE] = CAUSE_ILLEGAL
                    st = csr[CSR_MSTATUS]
                    csr[CSR_MSTATUS] = (st & ~0x88 & MASK) | (((st >> 3) & 1) << 7)
                    pc = csr[CSR_MTVEC] & 0xFFFFFFFC
                    cycle += trap_entry
                    m.trap_count += 1
                    m.last_trap = (CAUSE_ILLEGAL, csr[CSR_MEPC])
                    trapped = CAUSE_ILLEGAL
                else:
                    tag = tag_by_kid[kid]
                    if slot_on and tag >= 0:
                        slot_out = slot.access(tag, cycle)
                        lat = slot_out.latency
                        if bs_on and type(slot_out) is Miss:
                            extra = bs.fetch(tag).extra_cycles
                            if extra:
                                lat += extra
                                slot.add_stall(tag, extra)
                        cycle += lat
                    try:
                        next_pc = handlers[kid](m, ins, pc)
                    except Trap as t:
                        csr[CSR_MEPC] = pc
                        csr[CSR_MCAUSE] = t.cause
                        st = csr[CSR_MSTATUS]
                        csr[CSR_MSTATUS] = (st & ~0x88 & MASK) | (((st >> 3) & 1) << 7)
                        pc = csr[CSR_MTVEC] & 0xFFFFFFFC
                        cycle += trap_entry
                        m.trap_count += 1
                        m.last_trap = (t.cause, csr[CSR_MEPC])
                        trapped = t.cause
                    else:
                        cycle += cost_by_kid[kid]
                        instret += 1
                        if trace is not None:
                            trace.append(pc, kid,
                                         m.last_mem_addr if has_mem[kid]
                                         else NO_ADDR)
                        pc = next_pc

            if capture is not None:
                capture["instr"] = ins
                capture["total_cycles"] = cycle - step_start
                capture["slot_outcome"] = slot_out
                capture["trap_cause"] = trapped
                capture["next_pc"] = pc
                capture["mem_addr"] = (
                    m.last_mem_addr
                    if ins is not None and has_mem[ins.info.kid] else None)

            if trapped is not None and halt_on_trap:
                reason = R_TRAP
                break
            flag = m._stop_flag
            if flag:
                m._stop_flag = 0
                if flag == 1:
                    reason = R_HALT
                    break
                if m.iter_count >= iter_tgt:
                    reason = R_ITER
                    break
            if instret >= max_instret:
                reason = R_INSTRET
                break
            if cycle >= stop_cycle:
                reason = R_TIMER
                break
            if cycle >= budget_cycle:
                reason = R_BUDGET
                break
            if capture is not None:
                break
    finally:
        m.cycle = cycle
        m.instret = instret
        m.pc = pc
    return reason


def step_once(m) -> StepReport:
    """Execute one instruction and report what it did."""
    cap = {}
    pc_before = m.pc
    run(m, capture=cap)
    return StepReport(
        pc=pc_before,
        instr=cap.get("instr"),
        total_cycles=cap.get("total_cycles", 0),
        exec_cycles=(m.cost_by_kid[cap["instr"].info.kid]
                     if cap.get("instr") is not None
                     and cap.get("trap_cause") is None else 0),
        slot_outcome=cap.get("slot_outcome"),
        trap_cause=cap.get("trap_cause"),
        next_pc=cap.get("next_pc", m.pc),
        mem_addr=cap.get("mem_addr"),
    )
