"""Command-line front end.

    slotsim run matmul-int --target rv32im
    slotsim run image.elf --trace-out run.trace
    slotsim classify
    slotsim sweep-single --out-dir reports
    slotsim sweep-multi --iterations 300 --out-dir reports
    slotsim analyze-trace run.trace --mode group --out-dir reports
    slotsim fabric-calc --luts 1680 --lut-type 4 --latency 50

Report tables land in --out-dir as CSV; everything printed to stdout
is a human-readable view of the same numbers.  Identical inputs give
byte-identical CSV files.
"""

from __future__ import annotations

import argparse
import hashlib
import os
import sys

from . import elf
from .bitstream import BitstreamCache
from .config import ConfigError, read_config
from .fabric import bits_to_bytes, bitstream_bits, port_width, REFERENCE_BITS
from .machine import BudgetExceeded, Machine, SimConfig
from .sched import SchedConfig
from .trace import ParseError, TraceBuffer
from .kernels import AsmError, build_kernel, kernel_names, TARGETS
from . import harness
from .harness import OutputMismatch
from .reuse import STREAM_KINDS, analyze_trace

RUN_STATS_COLUMNS = ("name", "hits", "misses", "evictions", "stall_cycles")
DIST_COLUMNS = ("stream_kind", "window_size", "cardinality", "windows")

_USER_ERRORS = (ConfigError, OutputMismatch, AsmError, ParseError,
                elf.ImageError, OSError)


def _int(s: str) -> int:
    return int(s, 0)


def _int_list(s: str):
    return tuple(int(part, 0) for part in s.split(",") if part.strip())


def _name_list(s):
    if s is None:
        return None
    return [part.strip() for part in s.split(",") if part.strip()]


def _load_setup(args):
    """(SimConfig, SchedConfig) from --config, defaults otherwise."""
    if args.config:
        return read_config(args.config, sched=SchedConfig())
    return SimConfig(), SchedConfig()


def _print_table(columns, rows, floatfmt="{:.4f}"):
    cells = [[floatfmt.format(r[c]) if isinstance(r[c], float) else str(r[c])
              for c in columns] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) if cells else len(c)
              for i, c in enumerate(columns)]
    print("  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip())
    for row in cells:
        print("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip())


# ---------- run ----------

def cmd_run(args) -> int:
    cfg, _ = _load_setup(args)
    m = Machine(cfg)
    if args.program in kernel_names():
        image, _ = build_kernel(args.program, args.target, iters=args.iters)
        m.load_image(image, 0)
        label = f"{args.program} ({args.target})"
    elif os.path.exists(args.program):
        img = elf.load_file(args.program, base=args.base, entry=args.entry)
        img.load_into(m)
        label = args.program
    else:
        print(f"error: {args.program!r} is neither a bundled kernel nor a "
              f"file; kernels: {', '.join(kernel_names())}", file=sys.stderr)
        return 2
    if args.trace_out:
        m.trace = TraceBuffer()
    try:
        s = m.run(max_cycles=args.max_cycles)
    except BudgetExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    print(f"program:    {label}")
    print(f"stop:       {s.stop_reason}")
    print(f"cycles:     {s.cycles}")
    print(f"instret:    {s.instret}")
    print(f"iterations: {s.iterations}")
    if s.halted:
        print(f"exit:       {s.exit_value}")
    if s.trap_count:
        print(f"traps:      {s.trap_count}")
    print(f"console:    {len(s.console)} bytes, "
          f"sha256 {hashlib.sha256(s.console).hexdigest()}")
    stat_rows = [{"name": g, **st} for g, st in sorted(
        s.per_group_stats.items()) if any(st.values())]
    if s.bitstream.get("enabled"):
        stat_rows.append({"name": "bitstream",
                          "hits": s.bitstream["hits"],
                          "misses": s.bitstream["misses"],
                          "evictions": "",
                          "stall_cycles": s.bitstream["extra_stall_cycles"]})
    if stat_rows:
        print()
        _print_table(RUN_STATS_COLUMNS, stat_rows)
    if args.stats_csv:
        harness.write_csv(args.stats_csv, RUN_STATS_COLUMNS, stat_rows)
        print(f"\nwrote {args.stats_csv}")
    if args.trace_out:
        m.trace.write_text(args.trace_out)
        print(f"wrote {args.trace_out} ({len(m.trace)} records)")
    return 0


# ---------- classify ----------

def cmd_classify(args) -> int:
    names = _name_list(args.names)
    measured = harness.classify_suite(names, iters=args.iters)
    rows = [{"benchmark": mb.spec.name, "class": mb.label,
             "speedup_m": mb.speedup_m, "speedup_f": mb.speedup_f,
             "cycles_rv32imf": mb.cycles["rv32imf"]} for mb in measured]
    _print_table(("benchmark", "class", "speedup_m", "speedup_f",
                  "cycles_rv32imf"), rows, floatfmt="{:.3f}")
    return 0


# ---------- sweeps ----------

def cmd_sweep_single(args) -> int:
    names = _name_list(args.names)
    fig2, fig3 = harness.sweep_single(names, iters=args.iters,
                                      slots=args.slots)
    paths = harness.emit_reports(args.out_dir, fig2=fig2, fig3=fig3)
    _print_table(harness.FIG3_COLUMNS, fig3)
    for p in paths:
        print(f"wrote {p}")
    return 0


def cmd_sweep_multi(args) -> int:
    rows = harness.sweep_multi(target=args.target,
                               iterations=args.iterations,
                               slots_list=_int_list(args.slots),
                               timer_list=_int_list(args.timers),
                               miss=args.miss, hit=args.hit,
                               switch_overhead=args.overhead,
                               names=_name_list(args.names),
                               baseline=args.baseline)
    paths = harness.emit_reports(args.out_dir, fig4=rows)
    print(f"{len(rows)} matrix cells")
    for p in paths:
        print(f"wrote {p}")
    return 0


# ---------- analyze-trace ----------

def cmd_analyze_trace(args) -> int:
    buf = TraceBuffer.read_text(args.trace)
    sizes = _int_list(args.windows)
    accs = analyze_trace(buf, sizes, mode=args.mode,
                         block_mask_bits=args.block_bits)
    rows, dist = [], []
    for n in sizes:
        acc = accs[n]
        if acc.windows == 0:
            print(f"note: no complete {n}-instruction window "
                  f"({len(buf)} records), size skipped", file=sys.stderr)
            continue
        for kind, st in acc.summary().items():
            rows.append({"stream_kind": kind, "window_size": n,
                         "median": st.median, "q1": st.q1, "q3": st.q3,
                         "max": st.max})
        for kind in STREAM_KINDS:
            for card in sorted(acc.counts[kind]):
                dist.append({"stream_kind": kind, "window_size": n,
                             "cardinality": card,
                             "windows": acc.counts[kind][card]})
    os.makedirs(args.out_dir, exist_ok=True)
    summary_path = os.path.join(args.out_dir, "reuse.csv")
    dist_path = os.path.join(args.out_dir, "reuse_dist.csv")
    harness.write_csv(summary_path, harness.REUSE_COLUMNS, rows)
    harness.write_csv(dist_path, DIST_COLUMNS, dist)
    _print_table(harness.REUSE_COLUMNS, rows)
    print(f"wrote {summary_path}")
    print(f"wrote {dist_path}")
    return 0


# ---------- fabric-calc ----------

def cmd_fabric_calc(args) -> int:
    bits = bitstream_bits(args.luts, args.lut_type)
    width = port_width(bits, args.latency)
    cache = BitstreamCache(blocks=args.blocks,
                           bitstream_bytes=args.block_bytes)
    sizing = cache.sizing_report()
    print(f"fabric:      {args.luts} x {args.lut_type}-LUT")
    print(f"bitstream:   {bits} bits ({bits_to_bytes(bits)} bytes)")
    print(f"port width:  {width} bits/cycle for "
          f"{args.latency}-cycle reconfiguration")
    print(f"chain:       {args.latency} rows x {width} bits")
    print(f"cache:       {sizing['blocks']} blocks x "
          f"{sizing['bitstream_bytes']} bytes = {sizing['total_bytes']} "
          f"bytes ({sizing['total_bytes'] / 1024:g} KiB)")
    return 0


# ---------- parser ----------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="slotsim",
        description="Cycle-level model of an RV32IMF core with "
                    "reconfigurable M/F instruction slots.")
    ap.add_argument("--config", metavar="FILE",
                    help="key=value config file (machine + scheduler)")
    ap.add_argument("--out-dir", default="reports", metavar="DIR",
                    help="directory for CSV reports (default: reports)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run one kernel or program image")
    p.add_argument("program", help="bundled kernel name, ELF32 file, "
                                   "or raw binary")
    p.add_argument("--target", default="rv32imf", choices=TARGETS,
                   help="build target for bundled kernels")
    p.add_argument("--iters", type=int, help="override kernel work units")
    p.add_argument("--base", type=_int, default=0,
                   help="load address for raw binaries")
    p.add_argument("--entry", type=_int, help="entry point override")
    p.add_argument("--max-cycles", type=_int, default=harness.RUN_BUDGET)
    p.add_argument("--trace-out", metavar="FILE",
                   help="write the instruction trace as text")
    p.add_argument("--stats-csv", metavar="FILE",
                   help="write per-group slot statistics as CSV")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("classify",
                       help="speedup classification of the bundled suite")
    p.add_argument("--names", help="comma-separated kernel subset")
    p.add_argument("--iters", type=int)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("sweep-single",
                       help="per-benchmark latency sweep (fig2/fig3 CSVs)")
    p.add_argument("--names", help="comma-separated kernel subset")
    p.add_argument("--iters", type=int)
    p.add_argument("--slots", type=int, default=4)
    p.set_defaults(func=cmd_sweep_single)

    p = sub.add_parser("sweep-multi",
                       help="timeshared-pair matrix (fig4 CSV)")
    p.add_argument("--target", default="rv32imf", choices=TARGETS)
    p.add_argument("--iterations", type=int, default=300,
                   help="work units each task must finish")
    p.add_argument("--slots", default="2,4,8", metavar="LIST")
    p.add_argument("--timers", default="1000,20000", metavar="LIST")
    p.add_argument("--miss", type=int, default=50)
    p.add_argument("--hit", type=int, default=0)
    p.add_argument("--overhead", type=int, default=200,
                   help="context-switch handler length in instructions")
    p.add_argument("--baseline", choices=("paired", "solo"),
                   default="paired")
    p.add_argument("--names", help="comma-separated kernel subset")
    p.set_defaults(func=cmd_sweep_multi)

    p = sub.add_parser("analyze-trace",
                       help="working-set quartiles from a trace file")
    p.add_argument("trace", help="text trace written by run --trace-out")
    p.add_argument("--windows", metavar="LIST",
                   default=",".join(str(1 << k) for k in range(6, 16)))
    p.add_argument("--mode", choices=("kind", "group"), default="kind")
    p.add_argument("--block-bits", type=int, default=6,
                   help="log2 of the address block size")
    p.set_defaults(func=cmd_analyze_trace)

    p = sub.add_parser("fabric-calc",
                       help="bitstream size, port width, chain geometry")
    p.add_argument("--luts", type=int, default=1680)
    p.add_argument("--lut-type", type=int, default=4,
                   choices=sorted(REFERENCE_BITS))
    p.add_argument("--latency", type=int, default=50,
                   help="target reconfiguration latency in cycles")
    p.add_argument("--blocks", type=int, default=64,
                   help="bitstream-cache capacity in blocks")
    p.add_argument("--block-bytes", type=int, default=12288)
    p.set_defaults(func=cmd_fabric_calc)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _USER_ERRORS as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
