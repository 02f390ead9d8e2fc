"""Instruction disambiguator: a fully-associative table of N
reconfigurable slots, tagged by group (or opcode compound).

A slotted instruction whose tag is resident pays hit_latency; one whose
tag is absent stalls for miss_latency (reconfiguration is blocking and in
program order), fills an empty slot if any exists, and otherwise evicts
the victim chosen by the replacement policy.  State lives in plain arrays
so the compiled stepper can operate on the same storage the Python API
inspects.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass
from typing import Optional

__all__ = ["LatencyConfig", "Hit", "Miss", "SlotTable", "SlotSnapshot",
           "xorshift64"]


@dataclass(frozen=True)
class LatencyConfig:
    """Disambiguator geometry and timing knobs."""

    num_slots: int = 4
    miss_latency: int = 50
    hit_latency: int = 0

    def __post_init__(self):
        if self.num_slots < 1:
            raise ValueError("num_slots must be >= 1")
        if self.miss_latency < 0 or self.hit_latency < 0:
            raise ValueError("latencies must be >= 0")


@dataclass(frozen=True)
class Hit:
    latency: int


@dataclass(frozen=True)
class Miss:
    latency: int
    evicted: Optional[int]


@dataclass(frozen=True)
class SlotSnapshot:
    slots: tuple          # tag id per slot, None = empty
    stats: dict           # label -> {hits, misses, evictions, stall_cycles}


def xorshift64(state: int) -> int:
    """One step of the 64-bit xorshift generator (shifts 13, 7, 17).

    Used for the random replacement policy; the compiled stepper runs the
    same recurrence so both engines pick identical victims.
    """
    state &= 0xFFFFFFFFFFFFFFFF
    state ^= (state << 13) & 0xFFFFFFFFFFFFFFFF
    state ^= state >> 7
    state ^= (state << 17) & 0xFFFFFFFFFFFFFFFF
    return state


_POLICIES = ("lru", "fifo", "random")


class SlotTable:
    """N reconfigurable slots with per-tag statistics.

    `ntags` is the size of the tag universe (dense ids from a group
    table); `labels` names each tag for snapshots and CSVs.
    """

    def __init__(self, cfg: LatencyConfig, ntags: int, labels=None,
                 policy: str = "lru", seed: int = 0x9E3779B97F4A7C15):
        if policy not in _POLICIES:
            raise ValueError(f"unknown policy {policy!r}")
        if ntags < 1:
            raise ValueError("ntags must be >= 1")
        self.cfg = cfg
        self.ntags = ntags
        self.labels = tuple(labels) if labels is not None else tuple(
            f"T{i}" for i in range(ntags))
        if len(self.labels) != ntags:
            raise ValueError("labels length != ntags")
        self.policy = policy
        n = cfg.num_slots
        self.slot_tag = array("h", [-1] * n)
        self.slot_stamp = array("Q", [0] * n)
        # shared mutable scalars, one cell each, so the compiled stepper
        # can update them in place: [0] = recency counter, [1] = rng state
        self.ctr = array("Q", [0, seed or 1])
        self.hits = array("Q", [0] * ntags)
        self.misses = array("Q", [0] * ntags)
        self.evictions = array("Q", [0] * ntags)
        self.stall_cycles = array("Q", [0] * ntags)

    def access(self, tag: int, now: int = 0):
        """One slotted-instruction lookup.  Returns Hit or Miss."""
        slot_tag = self.slot_tag
        n = len(slot_tag)
        cfg = self.cfg
        for i in range(n):
            if slot_tag[i] == tag:
                self.ctr[0] += 1
                if self.policy != "fifo":
                    self.slot_stamp[i] = self.ctr[0]
                self.hits[tag] += 1
                lat = cfg.hit_latency
                self.stall_cycles[tag] += lat
                return Hit(lat)
        # miss: prefer the lowest-numbered empty slot
        victim = -1
        for i in range(n):
            if slot_tag[i] == -1:
                victim = i
                break
        evicted = None
        if victim < 0:
            if self.policy == "random":
                s = xorshift64(self.ctr[1])
                self.ctr[1] = s
                victim = s % n
            else:
                victim = 0
                best = self.slot_stamp[0]
                for i in range(1, n):
                    if self.slot_stamp[i] < best:
                        best = self.slot_stamp[i]
                        victim = i
            evicted = slot_tag[victim]
            self.evictions[evicted] += 1
        self.ctr[0] += 1
        slot_tag[victim] = tag
        self.slot_stamp[victim] = self.ctr[0]
        self.misses[tag] += 1
        lat = cfg.miss_latency
        self.stall_cycles[tag] += lat
        return Miss(lat, evicted)

    def add_stall(self, tag: int, cycles: int):
        """Charge extra stall (bitstream-cache penalty) to a tag."""
        self.stall_cycles[tag] += cycles

    def reset(self, clear_stats: bool = False):
        """Empty all slots (full-fabric invalidation)."""
        for i in range(len(self.slot_tag)):
            self.slot_tag[i] = -1
            self.slot_stamp[i] = 0
        if clear_stats:
            for a in (self.hits, self.misses, self.evictions,
                      self.stall_cycles):
                for i in range(len(a)):
                    a[i] = 0

    def occupied(self) -> int:
        return sum(1 for t in self.slot_tag if t != -1)

    def snapshot(self) -> SlotSnapshot:
        slots = tuple((t if t != -1 else None) for t in self.slot_tag)
        stats = {
            self.labels[i]: {
                "hits": self.hits[i],
                "misses": self.misses[i],
                "evictions": self.evictions[i],
                "stall_cycles": self.stall_cycles[i],
            }
            for i in range(self.ntags)
        }
        return SlotSnapshot(slots=slots, stats=stats)

    def total(self, field: str) -> int:
        return sum(getattr(self, field))
