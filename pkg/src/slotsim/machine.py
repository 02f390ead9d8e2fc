"""Machine state and the simulation driver.

A Machine owns flat little-endian memory, the two register files, the
five modeled CSRs, the disambiguator slot table and the optional
bitstream cache.  The actual fetch/decode/execute loop lives in an
engine module: `purestep` (always available) or `_faststep` (compiled,
selected automatically when importable).  Both engines mutate the same
array-backed state, so they can be mixed freely within one run and
compared instruction-for-instruction.

Memory map: code/data from 0 to mem_size; a small device page at
0x10000000 with three word registers: +0 halt (any store stops the run
and records the value), +4 console (low byte appended to the console
buffer), +8 iteration tick (increments the run's iteration counter).
Loads from the device page read 0.
"""

from __future__ import annotations

import os
from array import array
from dataclasses import dataclass, field, replace
from typing import Optional

from . import isa
from .isa import KIND_BY_ID, KIND_BY_NAME, DecodeError
from .groups import GroupTable, default_group_table, load_group_table
from .slots import LatencyConfig, SlotTable
from .bitstream import BitstreamCache

__all__ = [
    "LatencyTable", "SimConfig", "Machine", "RunSummary", "StepReport",
    "BudgetExceeded", "Trap", "MMIO_BASE", "MMIO_HALT", "MMIO_CONSOLE",
    "MMIO_ITER", "NO_ADDR", "R_HALT", "R_TIMER", "R_ITER", "R_INSTRET",
    "R_BUDGET", "R_TRAP", "REASON_NAMES", "CSR_INDEX", "CSR_NAMES",
]

MMIO_BASE = 0x10000000
MMIO_SIZE = 0x1000
MMIO_HALT = MMIO_BASE + 0x0
MMIO_CONSOLE = MMIO_BASE + 0x4
MMIO_ITER = MMIO_BASE + 0x8

NO_ADDR = 0xFFFFFFFF  # trace sentinel: instruction touched no memory

# engine stop reasons
R_HALT = 1
R_TIMER = 2
R_ITER = 3
R_INSTRET = 4
R_BUDGET = 5
R_TRAP = 6
REASON_NAMES = {R_HALT: "halt", R_TIMER: "timer", R_ITER: "iter-target",
                R_INSTRET: "instret", R_BUDGET: "budget", R_TRAP: "trap"}

# CSR address -> index into the csr array
CSR_INDEX = {0x300: 0, 0x304: 1, 0x305: 2, 0x341: 3, 0x342: 4}
CSR_NAMES = {0x300: "mstatus", 0x304: "mie", 0x305: "mtvec",
             0x341: "mepc", 0x342: "mcause"}
CSR_MSTATUS, CSR_MIE, CSR_MTVEC, CSR_MEPC, CSR_MCAUSE = range(5)

CAUSE_MISALIGNED_FETCH = 0
CAUSE_FETCH_FAULT = 1
CAUSE_ILLEGAL = 2
CAUSE_BREAKPOINT = 3
CAUSE_LOAD_FAULT = 5
CAUSE_STORE_FAULT = 7
CAUSE_ECALL_M = 11
CAUSE_TIMER_IRQ = 0x80000007

_FMA_KINDS = ("fmadd.s", "fmsub.s", "fnmsub.s", "fnmadd.s")


class BudgetExceeded(RuntimeError):
    pass


class Trap(Exception):
    """Architectural trap signal used inside the step loop."""

    def __init__(self, cause: int, tval: int = 0):
        super().__init__(f"trap cause={cause} tval=0x{tval:08x}")
        self.cause = cause
        self.tval = tval


@dataclass(frozen=True)
class LatencyTable:
    """Execution cycles per instruction class on the modeled core."""

    base_i: int = 1
    m_ext: int = 4
    f_pipe: int = 6
    f_fma: int = 12
    mem_access: int = 1

    def __post_init__(self):
        for name in ("base_i", "m_ext", "f_pipe", "f_fma"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.mem_access < 0:
            raise ValueError("mem_access must be >= 0")

    def cost_of(self, kind: str) -> int:
        info = KIND_BY_NAME[kind]
        if kind in _FMA_KINDS:
            c = self.f_fma
        elif info.ext == "M":
            c = self.m_ext
        elif info.ext == "F":
            c = self.f_pipe
        else:
            c = self.base_i
        if info.mem is not None:
            c += self.mem_access
        return c


@dataclass(frozen=True)
class SimConfig:
    """Everything needed to build a Machine."""

    mem_size: int = 1 << 20
    lat: LatencyTable = field(default_factory=LatencyTable)
    slot: LatencyConfig = field(default_factory=LatencyConfig)
    slots_enabled: bool = True
    tag_mode: str = "group"
    slot_policy: str = "lru"
    slot_seed: int = 0x9E3779B97F4A7C15
    group_table_text: Optional[str] = None
    bitstream_enabled: bool = False
    bitstream_blocks: int = 64
    bitstream_penalty: int = 0
    bitstream_bytes: int = 12288
    trap_entry_cycles: int = 3
    halt_on_trap: bool = True
    mmio_base: int = MMIO_BASE
    engine: str = "auto"

    def with_(self, **kw) -> "SimConfig":
        return replace(self, **kw)


@dataclass
class StepReport:
    """What one retired (or trapped) instruction did."""

    pc: int
    instr: Optional[isa.Instr]
    total_cycles: int            # stall + execute + any trap entry
    exec_cycles: int
    slot_outcome: Optional[object]   # slots.Hit / slots.Miss / None
    trap_cause: Optional[int]
    next_pc: int
    mem_addr: Optional[int]


@dataclass
class RunSummary:
    cycles: int
    instret: int
    stop_reason: str
    halted: bool
    exit_value: int
    iterations: int
    console: bytes
    per_group_stats: dict
    bitstream: dict
    trap_count: int


def _select_engine(name: str):
    if name == "auto":
        name = os.environ.get("SLOTSIM_ENGINE", "auto")
    if name in ("auto", "fast", "compiled"):
        try:
            from . import _faststep
            return _faststep
        except ImportError:
            if name != "auto":
                raise
    from . import purestep
    return purestep


class Machine:
    """One simulated core instance.  Not thread-shared; a Machine may be
    handed to another thread between runs, and independent Machines run
    in parallel freely (no module-level mutable state)."""

    def __init__(self, cfg: SimConfig = SimConfig()):
        self.cfg = cfg
        self.mem_size = cfg.mem_size
        if cfg.mem_size % 4:
            raise ValueError("mem_size must be word-aligned")
        if cfg.mmio_base % 4 or cfg.mmio_base < cfg.mem_size:
            raise ValueError("mmio_base must be word-aligned, above memory")
        self.mmio_base = cfg.mmio_base
        self.mem = bytearray(cfg.mem_size)
        self.x = array("I", [0] * 32)
        self.f = array("I", [0] * 32)
        self.csr = array("I", [0] * 5)
        self.pc = 0
        self.cycle = 0
        self.instret = 0
        self.trap_count = 0
        self.last_trap = None
        self.halted = False
        self.exit_value = 0
        self.iter_count = 0
        self.console = bytearray()
        self.lat = cfg.lat
        self.trap_entry_cycles = cfg.trap_entry_cycles
        self.halt_on_trap = cfg.halt_on_trap

        if cfg.group_table_text is not None:
            self.groups = load_group_table(cfg.group_table_text,
                                           mode=cfg.tag_mode)
        else:
            self.groups = default_group_table(mode=cfg.tag_mode)
        self.slot = SlotTable(cfg.slot, ntags=self.groups.ntags,
                              labels=[self.groups.label(t)
                                      for t in range(self.groups.ntags)],
                              policy=cfg.slot_policy, seed=cfg.slot_seed)
        self.slots_enabled = cfg.slots_enabled
        self.bitstream = BitstreamCache(blocks=cfg.bitstream_blocks,
                                        penalty=cfg.bitstream_penalty,
                                        bitstream_bytes=cfg.bitstream_bytes,
                                        enabled=cfg.bitstream_enabled)

        nk = len(KIND_BY_ID)
        self.cost_by_kid = array("h", [0] * nk)
        self.has_mem_by_kid = array("b", [0] * nk)
        for info in isa.KINDS:
            self.cost_by_kid[info.kid] = cfg.lat.cost_of(info.name)
            self.has_mem_by_kid[info.kid] = 1 if info.mem else 0
        self.tag_by_kid = self.groups.tag_array()
        if not cfg.slots_enabled:
            # a disabled disambiguator is a machine with nothing slotted
            self.tag_by_kid = array("b", [-1] * nk)

        nwords = cfg.mem_size >> 2
        self.dc_kid = array("h", [0]) * nwords
        self.dc_regs = array("I", [0]) * nwords
        self.dc_imm = array("i", [0]) * nwords
        self._icache = {}

        # transient flags used by the step loop
        self._stop_flag = 0
        self.last_mem_addr = NO_ADDR

        self.trace = None  # optional TraceBuffer, see trace.py
        self.engine = _select_engine(cfg.engine)

    # ---------- memory and image plumbing ----------

    def load_image(self, blob: bytes, base: int) -> None:
        end = base + len(blob)
        if base < 0 or end > self.mem_size:
            raise ValueError(f"image [{base:#x},{end:#x}) outside memory")
        self.mem[base:end] = blob
        self.invalidate_code(base, len(blob))

    def invalidate_code(self, base: int, size: int) -> None:
        lo = base >> 2
        hi = (base + size + 3) >> 2
        for i in range(lo, hi):
            self.dc_kid[i] = 0
        if len(self._icache) > (hi - lo):
            for i in range(lo, hi):
                self._icache.pop(i, None)
        else:
            self._icache = {k: v for k, v in self._icache.items()
                            if not lo <= k < hi}

    def read_word(self, addr: int) -> int:
        return int.from_bytes(self.mem[addr:addr + 4], "little")

    def write_word(self, addr: int, value: int) -> None:
        self.mem[addr:addr + 4] = (value & 0xFFFFFFFF).to_bytes(4, "little")
        self.dc_kid[addr >> 2] = 0
        self._icache.pop(addr >> 2, None)

    def read_bytes(self, addr: int, n: int) -> bytes:
        return bytes(self.mem[addr:addr + n])

    # ---------- decode cache ----------

    def decode_fill(self, pc: int) -> isa.Instr:
        """Decode the word at pc and cache it (raises DecodeError)."""
        word = int.from_bytes(self.mem[pc:pc + 4], "little")
        ins = isa.decode(word)
        info = ins.info
        idx = pc >> 2
        self.dc_kid[idx] = info.kid
        aux = ins.rs3 if info.fmt == "R4" else ins.rm
        self.dc_regs[idx] = (ins.rd | (ins.rs1 << 8) | (ins.rs2 << 16)
                             | (aux << 24))
        self.dc_imm[idx] = ins.imm
        self._icache[idx] = ins
        return ins

    def cached_instr(self, pc: int) -> isa.Instr:
        idx = pc >> 2
        if self.dc_kid[idx] == 0:
            return self.decode_fill(pc)
        ins = self._icache.get(idx)
        if ins is None:
            ins = self.decode_fill(pc)
        return ins

    # ---------- traps ----------

    def take_trap(self, cause: int, at_pc: int) -> None:
        """Trap entry: records mepc/mcause, masks MIE, vectors to mtvec."""
        csr = self.csr
        csr[CSR_MEPC] = at_pc & 0xFFFFFFFF
        csr[CSR_MCAUSE] = cause & 0xFFFFFFFF
        st = csr[CSR_MSTATUS]
        mie = (st >> 3) & 1
        csr[CSR_MSTATUS] = (st & ~0x88 & 0xFFFFFFFF) | (mie << 7)
        self.pc = csr[CSR_MTVEC] & 0xFFFFFFFC
        self.cycle += self.trap_entry_cycles
        self.trap_count += 1
        self.last_trap = (cause, at_pc)

    # ---------- running ----------

    def run(self, max_cycles: Optional[int] = None,
            iter_target: Optional[int] = None,
            max_instret: Optional[int] = None) -> RunSummary:
        """Run until halt (or an optional limit); raises BudgetExceeded
        when max_cycles elapses first."""
        budget = self.cycle + max_cycles if max_cycles is not None else None
        reason = self.run_until(budget_cycle=budget, iter_target=iter_target,
                                max_instret=max_instret)
        if reason == R_BUDGET:
            raise BudgetExceeded(
                f"no halt within {max_cycles} cycles (pc=0x{self.pc:08x})")
        return self.summary(reason)

    def run_until(self, stop_cycle: Optional[int] = None,
                  iter_target: Optional[int] = None,
                  max_instret: Optional[int] = None,
                  budget_cycle: Optional[int] = None) -> int:
        """Low-level quantum runner; returns an R_* reason code."""
        if self.halted:
            return R_HALT
        return self.engine.run(self, stop_cycle, iter_target, max_instret,
                               budget_cycle)

    def step(self) -> StepReport:
        """Execute exactly one instruction via the pure stepper."""
        from . import purestep
        return purestep.step_once(self)

    def summary(self, reason: int) -> RunSummary:
        return RunSummary(
            cycles=self.cycle,
            instret=self.instret,
            stop_reason=REASON_NAMES.get(reason, str(reason)),
            halted=self.halted,
            exit_value=self.exit_value,
            iterations=self.iter_count,
            console=bytes(self.console),
            per_group_stats=self.slot.snapshot().stats,
            bitstream=self.bitstream.stats(),
            trap_count=self.trap_count,
        )

    # ---------- context save/restore (used by the scheduler) ----------

    def save_context(self) -> dict:
        return {"pc": self.pc, "x": self.x[:], "f": self.f[:]}

    def restore_context(self, ctx: dict) -> None:
        self.pc = ctx["pc"]
        self.x[:] = ctx["x"]
        self.f[:] = ctx["f"]
