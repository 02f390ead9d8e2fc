"""Cross-target digest smoke test for the kernel suite."""
import hashlib
import sys

sys.path.insert(0, "/root/pkg/src")

from slotsim.machine import Machine, SimConfig
from slotsim.kernels import KERNELS, build_kernel

BUDGET = 80_000_000


def run(name, target, iters=None):
    img, prog = build_kernel(name, target, iters=iters)
    m = Machine(SimConfig())
    m.mem[:len(img)] = img
    r = m.run_until(budget_cycle=BUDGET)
    if not m.halted:
        raise SystemExit(f"{name}/{target}: did not halt (code {r}, "
                         f"cycle {m.cycle}, pc {m.pc:#x})")
    return hashlib.sha256(bytes(m.console)).hexdigest(), m.cycle, m.instret, m.iter_count


bad = 0
for name, k in KERNELS.items():
    digs = {}
    for tgt in k.targets:
        d, cyc, ins, it = run(name, tgt)
        digs[tgt] = d
        print(f"{name:11s} {tgt:8s} cycles={cyc:>10,} instret={ins:>10,} "
              f"iters={it:>4} {d[:16]}")
    if len(set(digs.values())) != 1:
        bad += 1
        print(f"  !! DIGEST MISMATCH for {name}: {digs}")
print("MISMATCHES:", bad)
