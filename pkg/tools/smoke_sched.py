"""Scheduler smoke checks against the derived pair invariants."""
import sys

sys.path.insert(0, "/root/pkg/src")

from dataclasses import replace

from slotsim.machine import SimConfig
from slotsim.slots import LatencyConfig
from slotsim.sched import (Task, SchedConfig, task_from_kernel, run_tasks,
                           run_pair, TASK_SPACING)

T = "rv32imf"


def mk(name, iters, base):
    return task_from_kernel(name, T, base, iters)


# 1) disjoint-group pair, 8 slots, miss=50: compulsory misses only
cfg8 = SimConfig(slot=LatencyConfig(num_slots=8, miss_latency=50,
                                    hit_latency=0))
ta, tb = mk("mgrind", 40, 0), mk("fgrind", 80, TASK_SPACING)
s = run_pair(ta, tb, cfg8, SchedConfig(timer_period=1000))
groups_a = 3  # mul/div/rem
groups_b = 3  # add, mul, cmp
print(f"disjoint 8-slot: misses={s.misses_total} "
      f"(want {groups_a + groups_b}) switches={s.switches} "
      f"speedups={ {k: round(v, 3) for k, v in s.speedup.items()} }")
assert s.misses_total == groups_a + groups_b, s.misses_total

# 2) same pair, 4 slots: misses grow with switch rate
cfg4 = SimConfig(slot=LatencyConfig(num_slots=4, miss_latency=50,
                                    hit_latency=0))
res = {}
for period in (1000, 20000):
    ta, tb = mk("mgrind", 400, 0), mk("fgrind2", 800, TASK_SPACING)
    s = run_pair(ta, tb, cfg4, SchedConfig(timer_period=period))
    res[period] = s.misses_total
    print(f"4-slot timer={period}: misses={s.misses_total} "
          f"avg_speedup={sum(s.speedup.values())/2:.4f}")
assert res[20000] < res[1000], res

# 3) zero latencies + zero handler: the task that reaches its quota
# costs exactly what it costs solo (the other task ends mid-unit, so
# only the finisher's work is directly comparable)
cfg0 = SimConfig(slot=LatencyConfig(num_slots=4, miss_latency=0,
                                    hit_latency=0))
sched0 = SchedConfig(timer_period=500, switch_overhead_instrs=0)
ta, tb = mk("axpy", 12, 0), mk("qnorm", 400, TASK_SPACING)
run_tasks([ta, tb], cfg0, sched0)
fin = ta if ta.done else tb
solo = Task(fin.name, fin.image, fin.base, fin.target_iterations)
run_tasks([solo], cfg0, sched0)
print(f"zero-overhead {fin.name}: paired={fin.attributed_cycles} "
      f"solo={solo.attributed_cycles} iters={fin.iterations_done}")
assert fin.iterations_done == solo.iterations_done
assert solo.attributed_cycles == fin.attributed_cycles, \
    (fin.attributed_cycles, solo.attributed_cycles)

# 4) pure-I pair: slowdown is exactly the handler overhead fraction
schedI = SchedConfig(timer_period=1000, switch_overhead_instrs=200)
ta, tb = mk("crc32", 30, 0), mk("fsm", 30, TASK_SPACING)
s = run_pair(ta, tb, cfg0, schedI)
print(f"pure-I pair speedups: { {k: round(v, 6) for k, v in s.speedup.items()} } "
      f"switches={s.switches}")

print("OK")
