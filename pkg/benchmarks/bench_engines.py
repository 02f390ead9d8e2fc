"""Compare the compiled stepper against the pure-Python fallback.

Runs a few kernels to completion under engine="pure" and engine="fast"
and reports wall time, simulated cycles per host second, and the
speedup ratio.  Both runs must agree on cycles, instret, and the
console digest or the benchmark aborts: a fast engine that drifts from
the reference is worthless.

Usage:
    python3 benchmarks/bench_engines.py [--iters N] [--repeat K]
"""

import argparse
import hashlib
import sys
import time

from slotsim import Machine, SimConfig
from slotsim.kernels import build_kernel

BENCHES = (
    ("matmul-int", "rv32im"),
    ("mandel", "rv32imf"),
    ("nbody", "rv32imf"),
    ("crc32", "rv32i"),
    ("qnorm", "rv32imf"),
)


def run_one(name, target, engine, iters):
    code, _ = build_kernel(name, target, iters=iters)
    m = Machine(SimConfig(engine=engine))
    m.load_image(code, 0)
    t0 = time.perf_counter()
    s = m.run(max_cycles=2_000_000_000)
    dt = time.perf_counter() - t0
    digest = hashlib.sha256(bytes(s.console)).hexdigest()[:12]
    return dt, s.cycles, s.instret, digest


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--iters", type=int, default=40)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    try:
        from slotsim import _faststep  # noqa: F401
    except ImportError:
        print("compiled stepper not built; nothing to compare", file=sys.stderr)
        return 1

    hdr = f"{'kernel':<12} {'target':<8} {'cycles':>10} {'pure s':>8} {'fast s':>8} {'pure c/s':>10} {'fast c/s':>10} {'speedup':>8}"
    print(hdr)
    print("-" * len(hdr))
    total_pure = total_fast = 0.0
    for name, target in BENCHES:
        times = {"pure": [], "fast": []}
        ref = {}
        for engine in ("pure", "fast"):
            for _ in range(args.repeat):
                dt, cyc, ret, dig = run_one(name, target, engine, args.iters)
                times[engine].append(dt)
            if engine == "pure":
                ref = (cyc, ret, dig)
            elif (cyc, ret, dig) != ref:
                print(f"ENGINE MISMATCH on {name}: {(cyc, ret, dig)} != {ref}",
                      file=sys.stderr)
                return 1
        tp = min(times["pure"])
        tf = min(times["fast"])
        total_pure += tp
        total_fast += tf
        print(f"{name:<12} {target:<8} {cyc:>10} {tp:>8.3f} {tf:>8.3f} "
              f"{cyc / tp:>10.0f} {cyc / tf:>10.0f} {tp / tf:>7.1f}x")
    print("-" * len(hdr))
    print(f"{'total':<32} {total_pure:>8.3f} {total_fast:>8.3f} "
          f"{'':>10} {'':>10} {total_pure / total_fast:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
