"""Optional bitstream-cache layer behind the disambiguator.

On a slot miss the required bitstream is either already buffered
(cache hit: the plain miss latency applies) or must be fetched from
memory (cache miss: an extra penalty is added).  Disabled by default, in
which case the layer is cycle-identical to an always-hit cache.  With
the ten real groups a 64-block cache never evicts; synthetic pseudo-group
ids exercise the replacement path.
"""

from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass
from typing import Optional

__all__ = ["CacheHit", "CacheMiss", "BitstreamCache"]


@dataclass(frozen=True)
class CacheHit:
    extra_cycles: int = 0


@dataclass(frozen=True)
class CacheMiss:
    extra_cycles: int


class BitstreamCache:
    """LRU cache of `blocks` bitstreams, keyed by group/tag id."""

    def __init__(self, blocks: int = 64, penalty: int = 0,
                 bitstream_bytes: int = 12288, enabled: bool = False):
        if blocks < 1:
            raise ValueError("blocks must be >= 1")
        if penalty < 0:
            raise ValueError("penalty must be >= 0")
        self.blocks = blocks
        self.penalty = penalty
        self.bitstream_bytes = bitstream_bytes
        self.enabled = enabled
        self.resident = OrderedDict()  # tag -> None, LRU order
        self.hit_count = 0
        self.miss_count = 0
        self.extra_stall_cycles = 0

    def fetch(self, tag: int):
        """Resolve one disambiguator miss.  Returns CacheHit or CacheMiss."""
        if not self.enabled:
            return CacheHit(0)
        res = self.resident
        if tag in res:
            res.move_to_end(tag)
            self.hit_count += 1
            return CacheHit(0)
        self.miss_count += 1
        res[tag] = None
        if len(res) > self.blocks:
            res.popitem(last=False)
        self.extra_stall_cycles += self.penalty
        return CacheMiss(self.penalty)

    def sizing_report(self) -> dict:
        total = self.blocks * self.bitstream_bytes
        return {
            "blocks": self.blocks,
            "bitstream_bytes": self.bitstream_bytes,
            "total_bytes": total,
        }

    def stats(self) -> dict:
        return {
            "enabled": self.enabled,
            "hits": self.hit_count,
            "misses": self.miss_count,
            "extra_stall_cycles": self.extra_stall_cycles,
        }
