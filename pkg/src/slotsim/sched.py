"""Preemptive round-robin execution of several tasks on one core.

Models a minimal timesharing kernel: a cycle timer fires every
``timer_period`` cycles, the core traps to a handler that runs a fixed
number of base-ISA instructions (register save/restore plus bookkeeping,
folded into one knob), and the scheduler swaps in the next task's
context.  The reconfigurable decode slots are deliberately not flushed
on a switch, so tasks evict each other's operations exactly as they
would on the shared hardware.

Cycle attribution: everything from the moment a task is dispatched
until its replacement is dispatched is charged to that task, including
the trap entry and the handler that switches it out.

Per-task speedups are reported as per-iteration rates rather than raw
cycle totals.  Two runs of the same pair on different cores end at the
same place only for the task that hits its quota; the other task gets
whatever cycles were left, so comparing its raw totals would compare
different amounts of work.
"""

from __future__ import annotations

import math
from array import array
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Sequence, Tuple

from . import isa
from .machine import (Machine, SimConfig, BudgetExceeded,
                      R_HALT, R_TIMER, R_ITER, R_INSTRET, R_TRAP,
                      CSR_MTVEC)
from .trace import TraceBuffer
from .kernels import build_kernel

__all__ = ["Task", "SchedConfig", "PairSummary", "task_from_kernel",
           "run_tasks", "run_pair", "pair_grid", "run_matrix",
           "MATRIX_COLUMNS"]

# mcause for a machine timer interrupt: interrupt bit plus code 7
TIMER_CAUSE = 0x80000007

TASK_SPACING = 0x20000
HANDLER_RESERVE = 4096

# build-time unit count for tasks driven by an iteration quota; large
# enough that the kernel never runs off the end of its own loop
OPEN_ENDED_ITERS = 1 << 30


@dataclass
class Task:
    """One schedulable program plus its saved register state."""

    name: str
    image: bytes
    base: int
    target_iterations: int
    ctx: Optional[dict] = None
    iterations_done: int = 0
    attributed_cycles: int = 0
    switch_outs: int = 0
    done: bool = False
    halted: bool = False


@dataclass
class SchedConfig:
    timer_period: int = 1000
    switch_overhead_instrs: int = 200
    budget_cycles: int = 1 << 33

    def validate(self):
        if self.timer_period < 1:
            raise ValueError("timer_period must be >= 1")
        if not 0 <= self.switch_overhead_instrs <= 100_000:
            raise ValueError("switch_overhead_instrs out of range")
        if self.timer_period < self.switch_overhead_instrs:
            raise ValueError("timer slice shorter than the switch handler")


@dataclass
class PairSummary:
    task_names: Tuple[str, str]
    cycles: Dict[str, int]            # attributed, includes switch-out cost
    iterations: Dict[str, int]
    speedup: Dict[str, float]         # baseline rate / observed rate
    baseline_kind: str                # "paired" or "solo"
    baseline_cycles: Dict[str, int]
    baseline_iterations: Dict[str, int]
    total_cycles: int
    switches: int
    misses_total: int
    slot_stats: dict


def task_from_kernel(name: str, target: str, base: int,
                     target_iterations: int) -> Task:
    """Build one kernel as an open-ended task image at a load address."""
    img, _ = build_kernel(name, target, iters=OPEN_ENDED_ITERS, base=base)
    if len(img) > TASK_SPACING:
        raise ValueError(f"{name} image too large for task slot")
    return Task(name=name, image=img, base=base,
                target_iterations=target_iterations)


def _emit_handler(m: Machine, base: int, n_instrs: int) -> None:
    """A straight run of base-I instructions ending in a self-loop.

    The scheduler stops the core by retired-instruction count, so the
    sled only needs to be long enough; the trailing jump is a backstop
    that never retires in a correct run.
    """
    nop = isa.encode(isa.Instr("addi", rd=0, rs1=0, imm=0))
    jal_self = isa.encode(isa.Instr("jal", rd=0, imm=0))
    blob = nop.to_bytes(4, "little") * n_instrs \
        + jal_self.to_bytes(4, "little")
    m.load_image(blob, base)


def _fresh_context(task: Task) -> dict:
    return {"pc": task.base,
            "x": array("I", [0] * 32),
            "f": array("I", [0] * 32)}


def run_tasks(tasks: Sequence[Task], cfg: SimConfig, sched: SchedConfig,
              trace: bool = False) -> Machine:
    """Round-robin the tasks on one machine until any finishes.

    Mutates the tasks in place (attributed cycles, iterations) and
    returns the machine for inspection.  A task is finished when it
    reaches its iteration quota or halts on its own.
    """
    sched.validate()
    if not tasks:
        raise ValueError("no tasks")
    handler_base = cfg.mem_size - HANDLER_RESERVE
    for i, t in enumerate(tasks):
        if t.base + len(t.image) > handler_base:
            raise ValueError(f"{t.name} overlaps the handler region")
        t.ctx = _fresh_context(t)
        t.iterations_done = 0
        t.attributed_cycles = 0
        t.switch_outs = 0
        t.done = False
        t.halted = False

    m = Machine(cfg)
    if trace:
        m.trace = TraceBuffer()
    for t in tasks:
        m.load_image(t.image, t.base)
    _emit_handler(m, handler_base, sched.switch_overhead_instrs)
    m.csr[CSR_MTVEC] = handler_base

    budget = sched.budget_cycles
    cur = 0
    m.restore_context(tasks[cur].ctx)
    slice_start = m.cycle
    iter_base = m.iter_count
    switches = 0

    while True:
        t = tasks[cur]
        remaining = t.target_iterations - t.iterations_done
        reason = m.run_until(
            stop_cycle=m.cycle + sched.timer_period,
            iter_target=m.iter_count + remaining,
            budget_cycle=budget,
        )
        t.iterations_done += m.iter_count - iter_base
        iter_base = m.iter_count

        if reason == R_TRAP:
            raise RuntimeError(
                f"task {t.name} trapped at pc={m.pc:#x} "
                f"(cause {m.last_trap})")
        if m.cycle >= budget:
            raise BudgetExceeded(
                f"scheduled run exceeded {budget} cycles")
        if reason == R_HALT:
            t.halted = True
        if t.halted or t.iterations_done >= t.target_iterations:
            t.attributed_cycles += m.cycle - slice_start
            t.done = True
            t.ctx = m.save_context()
            break

        # timer fired: capture the interrupted pc, then charge the
        # switch handler to the outgoing task
        t.ctx = m.save_context()
        if sched.switch_overhead_instrs > 0:
            m.take_trap(TIMER_CAUSE, t.ctx["pc"])
            r2 = m.run_until(
                max_instret=m.instret + sched.switch_overhead_instrs,
                budget_cycle=budget)
            if r2 != R_INSTRET:
                raise RuntimeError(f"switch handler stopped early ({r2})")
        t.attributed_cycles += m.cycle - slice_start
        t.switch_outs += 1
        switches += 1

        cur = (cur + 1) % len(tasks)
        m.restore_context(tasks[cur].ctx)
        slice_start = m.cycle

    m.sched_switches = switches
    return m


def _rate(cycles: int, iters: int) -> float:
    return cycles / iters if iters else math.inf


def run_pair(task_a: Task, task_b: Task, cfg: SimConfig,
             sched: SchedConfig, baseline: str = "paired") -> PairSummary:
    """Timeshare two tasks and compare against fixed-pipeline hardware.

    baseline "paired" reruns the same two-task schedule on a core with
    the reconfigurable slots disabled; "solo" runs each task alone on
    that core to its own quota.  Speedup is the baseline's
    cycles-per-iteration over the observed cycles-per-iteration.
    """
    if baseline not in ("paired", "solo"):
        raise ValueError(f"unknown baseline {baseline!r}")
    if task_a.name == task_b.name:
        raise ValueError("pair tasks need distinct names")

    m = run_tasks([task_a, task_b], cfg, sched)
    obs = {t.name: (t.attributed_cycles, t.iterations_done)
           for t in (task_a, task_b)}
    snap = m.slot.snapshot()
    misses = m.slot.total("misses")
    switches = m.sched_switches

    base_cfg = cfg.with_(slots_enabled=False, bitstream_enabled=False)
    base: Dict[str, Tuple[int, int]] = {}
    if baseline == "paired":
        ta = Task(task_a.name, task_a.image, task_a.base,
                  task_a.target_iterations)
        tb = Task(task_b.name, task_b.image, task_b.base,
                  task_b.target_iterations)
        run_tasks([ta, tb], base_cfg, sched)
        for t in (ta, tb):
            base[t.name] = (t.attributed_cycles, t.iterations_done)
    else:
        for t in (task_a, task_b):
            solo = Task(t.name, t.image, t.base, t.target_iterations)
            run_tasks([solo], base_cfg, sched)
            base[solo.name] = (solo.attributed_cycles,
                               solo.iterations_done)

    speedup = {}
    for name, (cyc, it) in obs.items():
        b_cyc, b_it = base[name]
        speedup[name] = _rate(b_cyc, b_it) / _rate(cyc, it)

    return PairSummary(
        task_names=(task_a.name, task_b.name),
        cycles={n: c for n, (c, _) in obs.items()},
        iterations={n: i for n, (_, i) in obs.items()},
        speedup=speedup,
        baseline_kind=baseline,
        baseline_cycles={n: c for n, (c, _) in base.items()},
        baseline_iterations={n: i for n, (_, i) in base.items()},
        total_cycles=m.cycle,
        switches=switches,
        misses_total=misses,
        slot_stats=snap.stats,
    )


def pair_grid(both_class: Sequence[str],
              m_class: Sequence[str]) -> List[Tuple[str, str]]:
    """All unordered pairs within the float-improved set, plus every
    cross pairing of a float-improved kernel with an integer-improved
    one."""
    pairs = []
    for i in range(len(both_class)):
        for j in range(i + 1, len(both_class)):
            pairs.append((both_class[i], both_class[j]))
    for a in both_class:
        for b in m_class:
            pairs.append((a, b))
    return pairs


MATRIX_COLUMNS = ("pair_id", "taskA", "taskB", "slots", "miss_lat",
                  "hit_lat", "timer_period", "cycles_A", "cycles_B",
                  "speedup_A", "speedup_B", "avg_speedup", "misses_total",
                  "baseline")


def run_matrix(pairs: Sequence[Tuple[str, str]], target: str,
               cfg: SimConfig, iterations: int,
               slots_list: Sequence[int] = (2, 4, 8),
               timer_list: Sequence[int] = (1000, 20000),
               switch_overhead: int = 200,
               baseline: str = "paired") -> List[dict]:
    """Sweep pairs over slot counts and timer periods; returns one row
    dict per (pair, slots, timer) cell, in deterministic order."""
    rows = []
    for pid, (a, b) in enumerate(pairs):
        ta0 = task_from_kernel(a, target, 0, iterations)
        tb0 = task_from_kernel(b, target, TASK_SPACING, iterations)
        for nslots in slots_list:
            for period in timer_list:
                run_cfg = cfg.with_(
                    slot=replace(cfg.slot, num_slots=nslots))
                sched = SchedConfig(timer_period=period,
                                    switch_overhead_instrs=switch_overhead)
                ta = Task(ta0.name, ta0.image, ta0.base,
                          ta0.target_iterations)
                tb = Task(tb0.name, tb0.image, tb0.base,
                          tb0.target_iterations)
                s = run_pair(ta, tb, run_cfg, sched, baseline=baseline)
                sa, sb = s.speedup[a], s.speedup[b]
                rows.append({
                    "pair_id": pid,
                    "taskA": a,
                    "taskB": b,
                    "slots": nslots,
                    "miss_lat": run_cfg.slot.miss_latency,
                    "hit_lat": run_cfg.slot.hit_latency,
                    "timer_period": period,
                    "cycles_A": s.cycles[a],
                    "cycles_B": s.cycles[b],
                    "speedup_A": sa,
                    "speedup_B": sb,
                    "avg_speedup": (sa + sb) / 2.0,
                    "misses_total": s.misses_total,
                    "baseline": s.baseline_kind,
                })
    return rows
