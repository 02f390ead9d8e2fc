"""Benchmark harness: build, check, classify, sweep, report.

Every study follows the same discipline: a benchmark builds from one
source for all four fixed ISA targets, every image must produce the
same console output, and only then is anything timed.  A digest
disagreement is a correctness bug in the kernel or the core, and timing
a wrong program would quietly poison every downstream number.

Timing vocabulary, used by all reports:

  cycles(target)   the image for that target run on fixed hardware
                   (decode slots disabled)
  speedup_m        cycles(rv32i) / cycles(rv32im)
  speedup_f        cycles(rv32i) / cycles(rv32if)
  slowdown         cycles(series) / cycles(rv32imf), so 1.0 is the
                   fully-equipped fixed pipeline and bigger is worse
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .machine import Machine, SimConfig
from .slots import LatencyConfig
from .kernels import KERNELS, build_kernel, TARGETS
from .sched import SchedConfig, run_matrix, pair_grid, MATRIX_COLUMNS
from .reuse import analyze_trace, oversubscribe, OVERSUBSCRIBE_WINDOW
from .trace import TraceBuffer

__all__ = ["OutputMismatch", "BenchSpec", "MeasuredBench", "THRESHOLD",
           "LATENCY_GRID", "CLASS_LABELS", "build_bench", "measure_bench",
           "classify_suite", "sweep_single", "sweep_multi", "reuse_rows",
           "oversub_rows", "write_csv", "emit_reports", "grid_label",
           "groups_used", "portable_names",
           "FIG2_COLUMNS", "FIG3_COLUMNS", "FIG4_COLUMNS", "FIG7_COLUMNS",
           "FIG8_COLUMNS", "REUSE_COLUMNS", "RUN_BUDGET"]

THRESHOLD = 1.05
LATENCY_GRID = ((10, 0), (10, 1), (50, 0), (50, 4), (250, 0), (250, 16))
CLASS_LABELS = ("ImprovedByBoth", "ImprovedByM", "ImprovedByF",
                "Insensitive")

RUN_BUDGET = 200_000_000

FIG2_COLUMNS = ("benchmark", "class", "cycles_rv32i", "cycles_rv32im",
                "cycles_rv32if", "cycles_rv32imf", "speedup_m", "speedup_f")
FIG3_COLUMNS = ("benchmark", "rv32i", "rv32im", "rv32if", "max_im_if",
                "m10h0", "m10h1", "m50h0", "m50h4", "m250h0", "m250h16")
FIG4_COLUMNS = MATRIX_COLUMNS
FIG7_COLUMNS = ("kernel", "stream_kind", "window_size",
                "median", "q1", "q3", "max")
FIG8_COLUMNS = ("tasks", "stream_kind", "window_size",
                "median", "q1", "q3", "max")
REUSE_COLUMNS = ("stream_kind", "window_size", "median", "q1", "q3", "max")


class OutputMismatch(RuntimeError):
    """Two builds of one benchmark disagreed about their output."""


@dataclass(frozen=True)
class BenchSpec:
    name: str
    images: Dict[str, bytes]          # target -> assembled image
    iters: int


@dataclass(frozen=True)
class MeasuredBench:
    spec: BenchSpec
    digest: str
    cycles: Dict[str, int]            # target -> fixed-hardware cycles
    speedup_m: float
    speedup_f: float
    label: str


def grid_label(miss: int, hit: int) -> str:
    return f"m{miss}h{hit}"


def _digest(console: bytes) -> str:
    return hashlib.sha256(console).hexdigest()


def _fixed_cfg() -> SimConfig:
    return SimConfig(slots_enabled=False, bitstream_enabled=False)


def _slotted_cfg(miss: int, hit: int, slots: int = 4) -> SimConfig:
    return SimConfig(slot=LatencyConfig(num_slots=slots,
                                        miss_latency=miss,
                                        hit_latency=hit))


def _cfg_key(cfg: SimConfig) -> tuple:
    return (cfg.mem_size, cfg.lat, cfg.slots_enabled, cfg.slot.num_slots,
            cfg.slot.miss_latency, cfg.slot.hit_latency, cfg.slot_policy,
            cfg.slot_seed, cfg.tag_mode, cfg.group_table_text,
            cfg.bitstream_enabled, cfg.bitstream_blocks,
            cfg.bitstream_penalty, cfg.bitstream_bytes,
            cfg.trap_entry_cycles, cfg.halt_on_trap, cfg.mmio_base,
            cfg.engine)


def _run_image(image: bytes, cfg: SimConfig,
               budget: int = RUN_BUDGET,
               memo: Optional[dict] = None,
               want_trace: bool = False):
    """Run one image to halt; returns (digest, cycles, machine).

    Identical image bytes under an identical configuration always
    reproduce the same run, so sweeps memoize on that pair (several
    targets often assemble one kernel to the same bytes).
    """
    key = None
    if memo is not None and not want_trace:
        key = (hashlib.sha256(image).digest(), _cfg_key(cfg))
        hitv = memo.get(key)
        if hitv is not None:
            return hitv[0], hitv[1], None
    m = Machine(cfg)
    if want_trace:
        m.trace = TraceBuffer()
    m.load_image(image, 0)
    m.run(max_cycles=budget)
    if not m.halted:
        raise RuntimeError("image stopped without halting")
    out = (_digest(bytes(m.console)), m.cycle)
    if key is not None:
        memo[key] = out
    return out[0], out[1], m


def build_bench(name: str, iters: Optional[int] = None) -> BenchSpec:
    """Assemble one bundled kernel for all four fixed targets."""
    k = KERNELS[name]
    if set(TARGETS) - set(k.targets):
        raise ValueError(f"{name} is not a portable benchmark")
    n = k.iters if iters is None else iters
    images = {t: build_kernel(name, t, iters=n)[0] for t in TARGETS}
    return BenchSpec(name=name, images=images, iters=n)


def measure_bench(spec: BenchSpec, budget: int = RUN_BUDGET,
                  memo: Optional[dict] = None) -> MeasuredBench:
    """Correctness gate plus fixed-hardware timing and classification.

    Raises OutputMismatch before reporting any timing if the four
    builds disagree about their output.
    """
    cfg = _fixed_cfg()
    memo = {} if memo is None else memo
    digests = {}
    cycles = {}
    for t in TARGETS:
        d, c, _ = _run_image(spec.images[t], cfg, budget, memo)
        digests[t] = d
        cycles[t] = c
    if len(set(digests.values())) != 1:
        raise OutputMismatch(f"{spec.name}: outputs diverge: {digests}")
    sm = cycles["rv32i"] / cycles["rv32im"]
    sf = cycles["rv32i"] / cycles["rv32if"]
    if sm >= THRESHOLD and sf >= THRESHOLD:
        label = "ImprovedByBoth"
    elif sm >= THRESHOLD:
        label = "ImprovedByM"
    elif sf >= THRESHOLD:
        label = "ImprovedByF"
    else:
        label = "Insensitive"
    return MeasuredBench(spec=spec, digest=digests["rv32imf"],
                         cycles=cycles, speedup_m=sm, speedup_f=sf,
                         label=label)


def portable_names() -> Tuple[str, ...]:
    return tuple(n for n, k in KERNELS.items()
                 if not set(TARGETS) - set(k.targets))


def groups_used(name: str, target: str = "rv32imf",
                iters: Optional[int] = None) -> frozenset:
    """Distinct decode-slot tags a kernel actually executes."""
    from .groups import default_group_table
    img, _ = build_kernel(name, target, iters=iters)
    _, _, m = _run_image(img, _fixed_cfg(), want_trace=True)
    tags = default_group_table().tag_array()
    return frozenset(t for t in (tags[kid] for kid in m.trace.t_kid)
                     if t >= 0)


def classify_suite(names: Optional[Sequence[str]] = None,
                   iters: Optional[int] = None,
                   budget: int = RUN_BUDGET) -> List[MeasuredBench]:
    names = portable_names() if names is None else names
    memo = {}
    return [measure_bench(build_bench(n, iters), budget, memo)
            for n in names]


def sweep_single(names: Optional[Sequence[str]] = None,
                 iters: Optional[int] = None,
                 slots: int = 4,
                 grid: Sequence[Tuple[int, int]] = LATENCY_GRID,
                 budget: int = RUN_BUDGET):
    """Per-benchmark slowdown of every series against fixed rv32imf.

    Returns (fig2_rows, fig3_rows): classification table and the
    slowdown table with both mean summary rows.
    """
    measured = classify_suite(names, iters, budget)
    memo = {}
    fig2 = []
    fig3 = []
    series_names = ["rv32i", "rv32im", "rv32if", "max_im_if"] \
        + [grid_label(m, h) for m, h in grid]
    sums = {s: 0.0 for s in series_names}
    prods = {s: 1.0 for s in series_names}

    for mb in measured:
        fig2.append({
            "benchmark": mb.spec.name,
            "class": mb.label,
            "cycles_rv32i": mb.cycles["rv32i"],
            "cycles_rv32im": mb.cycles["rv32im"],
            "cycles_rv32if": mb.cycles["rv32if"],
            "cycles_rv32imf": mb.cycles["rv32imf"],
            "speedup_m": mb.speedup_m,
            "speedup_f": mb.speedup_f,
        })
        base = mb.cycles["rv32imf"]
        row = {"benchmark": mb.spec.name}
        row["rv32i"] = mb.cycles["rv32i"] / base
        row["rv32im"] = mb.cycles["rv32im"] / base
        row["rv32if"] = mb.cycles["rv32if"] / base
        row["max_im_if"] = min(mb.cycles["rv32im"],
                               mb.cycles["rv32if"]) / base
        img = mb.spec.images["rv32imf"]
        for miss, hit in grid:
            d, c, _ = _run_image(img, _slotted_cfg(miss, hit, slots),
                                 budget, memo)
            if d != mb.digest:
                raise OutputMismatch(
                    f"{mb.spec.name}: slotted run changed the output")
            row[grid_label(miss, hit)] = c / base
        for s in series_names:
            sums[s] += row[s]
            prods[s] *= row[s]
        fig3.append(row)

    n = len(measured)
    if n:
        fig3.append({"benchmark": "arith_mean",
                     **{s: sums[s] / n for s in series_names}})
        fig3.append({"benchmark": "geo_mean",
                     **{s: prods[s] ** (1.0 / n) for s in series_names}})
    return fig2, fig3


def sweep_multi(target: str = "rv32imf",
                iterations: int = 300,
                slots_list: Sequence[int] = (2, 4, 8),
                timer_list: Sequence[int] = (1000, 20000),
                miss: int = 50, hit: int = 0,
                switch_overhead: int = 200,
                names: Optional[Sequence[str]] = None,
                baseline: str = "paired",
                budget: int = RUN_BUDGET) -> List[dict]:
    """Timeshared-pair sweep; pairs float-improved kernels with each
    other and with integer-improved ones, per the classifier."""
    measured = classify_suite(names, budget=budget)
    both = [m.spec.name for m in measured if m.label == "ImprovedByBoth"]
    m_only = [m.spec.name for m in measured if m.label == "ImprovedByM"]
    pairs = pair_grid(both, m_only)
    cfg = SimConfig(slot=LatencyConfig(num_slots=4, miss_latency=miss,
                                       hit_latency=hit))
    return run_matrix(pairs, target, cfg, iterations,
                      slots_list=slots_list, timer_list=timer_list,
                      switch_overhead=switch_overhead, baseline=baseline)


def reuse_rows(names: Optional[Sequence[str]] = None,
               sizes: Sequence[int] = tuple(1 << k for k in range(6, 16)),
               iters: Optional[int] = None,
               mode: str = "kind") -> List[dict]:
    """Working-set quartiles per bundled kernel and window length."""
    names = portable_names() if names is None else names
    rows = []
    for name in names:
        img, _ = build_kernel(name, "rv32imf", iters=iters)
        _, _, m = _run_image(img, _fixed_cfg(), want_trace=True)
        accs = analyze_trace(m.trace, sizes, mode=mode)
        for size in sizes:
            acc = accs[size]
            if acc.windows == 0:
                continue
            for kind, st in acc.summary().items():
                rows.append({"kernel": name, "stream_kind": kind,
                             "window_size": size, "median": st.median,
                             "q1": st.q1, "q3": st.q3, "max": st.max})
    return rows


def oversub_rows(names: Sequence[str], target: str = "rv32imf",
                 iterations: int = 400,
                 timer_period: int = 20000,
                 window: int = OVERSUBSCRIBE_WINDOW,
                 mode: str = "group") -> List[dict]:
    """Union working set of k timeshared tasks, k = 1..len(names)."""
    rows = []
    for k in range(1, len(names) + 1):
        acc = oversubscribe(names[:k], target, iterations, SimConfig(),
                            SchedConfig(timer_period=timer_period),
                            mode=mode, window=window)
        if acc.windows == 0:
            continue
        for kind, st in acc.summary().items():
            rows.append({"tasks": k, "stream_kind": kind,
                         "window_size": window, "median": st.median,
                         "q1": st.q1, "q3": st.q3, "max": st.max})
    return rows


# ---------- CSV emission ----------

def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.6f}"
    return str(v)


def write_csv(path, columns: Sequence[str], rows: Sequence[dict]) -> None:
    """Fixed column order, fixed float format, newline-terminated."""
    lines = [",".join(columns)]
    for r in rows:
        lines.append(",".join(_fmt(r[c]) for c in columns))
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def emit_reports(out_dir, fig2=None, fig3=None, fig4=None,
                 fig7=None, fig8=None) -> List[str]:
    """Write whichever report tables were produced; returns paths."""
    import os
    os.makedirs(out_dir, exist_ok=True)
    written = []
    for stem, cols, rows in (("fig2", FIG2_COLUMNS, fig2),
                             ("fig3", FIG3_COLUMNS, fig3),
                             ("fig4", FIG4_COLUMNS, fig4),
                             ("fig7", FIG7_COLUMNS, fig7),
                             ("fig8", FIG8_COLUMNS, fig8)):
        if rows is None:
            continue
        path = os.path.join(out_dir, f"{stem}.csv")
        write_csv(path, cols, rows)
        written.append(path)
    return written
