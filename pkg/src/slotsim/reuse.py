"""Working-set analysis over retired-instruction streams.

Splits a stream into fixed-length windows and records, per window, how
many distinct opcode kinds, instruction blocks, and data blocks were
touched.  The opcode stream is the sizing input for the reconfigurable
decode slots; the two block streams give the same picture for code and
data locality.  A trailing partial window says nothing comparable about
a working set, so it is dropped.

Streams can come from three places: explicit events, a recorded
TraceBuffer, or a scheduled multi-task run (`oversubscribe`), which
measures how badly timesharing inflates the union working set.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterable, Optional, Sequence

from .groups import GroupTable, default_group_table
from .machine import SimConfig
from .trace import TraceBuffer, ParseError, NO_ADDR

__all__ = ["StreamEvent", "WindowConfig", "EmptyStats", "ReuseStats",
           "ReuseAccumulator", "analyze_events", "analyze_trace",
           "brute_force_counts", "oversubscribe", "ParseError",
           "STREAM_KINDS", "OVERSUBSCRIBE_WINDOW"]

STREAM_KINDS = ("opcode", "ip_block", "data_block")

# window length used for the multi-task oversubscription study
OVERSUBSCRIBE_WINDOW = 32768


@dataclass(frozen=True)
class StreamEvent:
    """One retired instruction: kind id, fetch pc, optional data address."""
    opcode_id: int
    ip: int
    data_addr: Optional[int] = None


@dataclass(frozen=True)
class WindowConfig:
    n: int = OVERSUBSCRIBE_WINDOW
    block_mask_bits: int = 6          # 64-byte blocks

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("window length must be >= 1")
        if not 0 <= self.block_mask_bits < 32:
            raise ValueError("block_mask_bits out of range")

    def mask_block(self, addr: int) -> int:
        return addr & ~((1 << self.block_mask_bits) - 1) & 0xFFFFFFFF


class EmptyStats(ValueError):
    """No completed window: the stream was shorter than one window."""


@dataclass(frozen=True)
class ReuseStats:
    median: int
    q1: int
    q3: int
    max: int


def _nearest_rank(counts: Counter, num: int, den: int) -> int:
    """Nearest-rank quantile (rank = ceil(total*num/den)) over a
    multiset given as value -> count."""
    total = sum(counts.values())
    rank = max(1, -((-total * num) // den))
    seen = 0
    for value in sorted(counts):
        seen += counts[value]
        if seen >= rank:
            return value
    raise AssertionError("rank beyond population")


class ReuseAccumulator:
    """Streaming per-window distinct counts for one window length.

    mode "kind" tracks distinct opcode kinds; mode "group" tracks
    distinct decode-slot tags instead, counting only instructions that
    actually go through the slots (the working set that matters for
    slot sizing).
    """

    def __init__(self, cfg: WindowConfig, mode: str = "kind",
                 groups: Optional[GroupTable] = None):
        if mode not in ("kind", "group"):
            raise ValueError(f"unknown mode {mode!r}")
        self.cfg = cfg
        self.mode = mode
        if mode == "group":
            gt = groups if groups is not None else default_group_table()
            self._tag_by_kid = gt.tag_array()
        else:
            self._tag_by_kid = None
        self.counts: Dict[str, Counter] = {k: Counter()
                                           for k in STREAM_KINDS}
        self.windows = 0
        self._op = set()
        self._ip = set()
        self._da = set()
        self._fill = 0

    def add(self, opcode_id: int, ip: int,
            data_addr: Optional[int] = None) -> None:
        if self._tag_by_kid is not None:
            tag = self._tag_by_kid[opcode_id]
            if tag >= 0:
                self._op.add(tag)
        else:
            self._op.add(opcode_id)
        mask = ~((1 << self.cfg.block_mask_bits) - 1)
        self._ip.add(ip & mask)
        if data_addr is not None and data_addr != NO_ADDR:
            self._da.add(data_addr & mask)
        self._fill += 1
        if self._fill == self.cfg.n:
            self._roll()

    def add_event(self, ev: StreamEvent) -> None:
        self.add(ev.opcode_id, ev.ip, ev.data_addr)

    def add_trace(self, buf: TraceBuffer) -> None:
        """Bulk path over a recorded trace."""
        n = self.cfg.n
        mask = ~((1 << self.cfg.block_mask_bits) - 1)
        tags = self._tag_by_kid
        op, ip, da = self._op, self._ip, self._da
        fill = self._fill
        for pc, kid, addr in zip(buf.t_pc, buf.t_kid, buf.t_addr):
            if tags is not None:
                tag = tags[kid]
                if tag >= 0:
                    op.add(tag)
            else:
                op.add(kid)
            ip.add(pc & mask)
            if addr != NO_ADDR:
                da.add(addr & mask)
            fill += 1
            if fill == n:
                self._fill = n
                self._roll()
                op, ip, da = self._op, self._ip, self._da
                fill = 0
        self._fill = fill

    def _roll(self) -> None:
        self.counts["opcode"][len(self._op)] += 1
        self.counts["ip_block"][len(self._ip)] += 1
        self.counts["data_block"][len(self._da)] += 1
        self.windows += 1
        self._op = set()
        self._ip = set()
        self._da = set()
        self._fill = 0

    def summary(self) -> Dict[str, ReuseStats]:
        if self.windows == 0:
            raise EmptyStats(
                f"no completed {self.cfg.n}-instruction window")
        out = {}
        for kind in STREAM_KINDS:
            c = self.counts[kind]
            out[kind] = ReuseStats(
                median=_nearest_rank(c, 1, 2),
                q1=_nearest_rank(c, 1, 4),
                q3=_nearest_rank(c, 3, 4),
                max=max(c),
            )
        return out


def analyze_events(events: Iterable[StreamEvent],
                   sizes: Sequence[int],
                   mode: str = "kind",
                   block_mask_bits: int = 6,
                   groups: Optional[GroupTable] = None,
                   ) -> Dict[int, ReuseAccumulator]:
    """Feed one event stream through accumulators at several window
    lengths; returns {window length: accumulator}."""
    accs = {n: ReuseAccumulator(WindowConfig(n, block_mask_bits), mode,
                                groups)
            for n in sizes}
    for ev in events:
        for acc in accs.values():
            acc.add_event(ev)
    return accs


def analyze_trace(buf: TraceBuffer, sizes: Sequence[int],
                  mode: str = "kind", block_mask_bits: int = 6,
                  groups: Optional[GroupTable] = None,
                  ) -> Dict[int, ReuseAccumulator]:
    accs = {n: ReuseAccumulator(WindowConfig(n, block_mask_bits), mode,
                                groups)
            for n in sizes}
    for acc in accs.values():
        acc.add_trace(buf)
    return accs


def brute_force_counts(events: Sequence[StreamEvent], cfg: WindowConfig,
                       mode: str = "kind",
                       groups: Optional[GroupTable] = None,
                       ) -> Dict[str, Counter]:
    """Two-pass reference: materialize each window, count with sets.

    Kept deliberately naive; the streaming accumulator must match this
    exactly.
    """
    if mode == "group":
        gt = groups if groups is not None else default_group_table()
        tags = gt.tag_array()
    counts = {k: Counter() for k in STREAM_KINDS}
    nwin = len(events) // cfg.n
    for w in range(nwin):
        chunk = events[w * cfg.n:(w + 1) * cfg.n]
        if mode == "group":
            ops = {tags[e.opcode_id] for e in chunk
                   if tags[e.opcode_id] >= 0}
        else:
            ops = {e.opcode_id for e in chunk}
        ips = {cfg.mask_block(e.ip) for e in chunk}
        das = {cfg.mask_block(e.data_addr) for e in chunk
               if e.data_addr is not None and e.data_addr != NO_ADDR}
        counts["opcode"][len(ops)] += 1
        counts["ip_block"][len(ips)] += 1
        counts["data_block"][len(das)] += 1
    return counts


def oversubscribe(kernel_names: Sequence[str], target: str,
                  iterations: int, cfg: SimConfig, sched,
                  mode: str = "group",
                  window: int = OVERSUBSCRIBE_WINDOW,
                  block_mask_bits: int = 6) -> ReuseAccumulator:
    """Timeshare k kernels on one core and analyze the merged stream.

    The merged trace includes the switch handler's instructions; that
    is the stream the shared front end actually sees.
    """
    from .sched import run_tasks, task_from_kernel, TASK_SPACING

    tasks = [task_from_kernel(name, target, i * TASK_SPACING, iterations)
             for i, name in enumerate(kernel_names)]
    m = run_tasks(tasks, cfg, sched, trace=True)
    acc = ReuseAccumulator(WindowConfig(window, block_mask_bits), mode)
    acc.add_trace(m.trace)
    return acc
