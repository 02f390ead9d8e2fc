"""Fabric sizing arithmetic and the configuration-chain model.

Calibration: a 1680-LUT fabric needs 91,200 configuration bits with
4-input LUTs (exactly 1824 bits/cycle for 50 cycles), 114,000 with 5-input
and 149,000 with 6-input LUTs.  Other fabric sizes scale linearly (whole
bits, rounded up) — the simplest model consistent with a tiled fabric.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

__all__ = ["UnknownLutType", "ShapeError", "FabricSpec", "ConfigChain",
           "bitstream_bits", "bits_to_bytes", "port_width", "REFERENCE_BITS",
           "REFERENCE_LUTS"]

REFERENCE_LUTS = 1680
REFERENCE_BITS = {4: 91200, 5: 114000, 6: 149000}


class UnknownLutType(ValueError):
    pass


class ShapeError(ValueError):
    pass


def bitstream_bits(lut_count: int, lut_type: int) -> int:
    """Configuration bits for a fabric of `lut_count` LUTs of given arity."""
    if lut_type not in REFERENCE_BITS:
        raise UnknownLutType(
            f"lut_type must be one of {sorted(REFERENCE_BITS)}, got {lut_type}")
    if lut_count < 1:
        raise ValueError("lut_count must be >= 1")
    ref = REFERENCE_BITS[lut_type]
    return -(-lut_count * ref // REFERENCE_LUTS)


def bits_to_bytes(bits: int) -> int:
    return -(-bits // 8)


def port_width(bits: int, latency_cycles: int) -> int:
    """Configuration-port width (bits/cycle) to load `bits` in the budget."""
    if latency_cycles < 1:
        raise ValueError("latency_cycles must be >= 1")
    if bits < 0:
        raise ValueError("bits must be >= 0")
    return -(-bits // latency_cycles)


@dataclass(frozen=True)
class FabricSpec:
    lut_count: int
    lut_type: int

    @property
    def bits_per_fabric(self) -> int:
        return bitstream_bits(self.lut_count, self.lut_type)

    def chain_for_latency(self, latency_cycles: int) -> "ConfigChain":
        return ConfigChain(depth=latency_cycles,
                           width=port_width(self.bits_per_fabric,
                                            latency_cycles))


class ConfigChain:
    """Shift-register configuration chain: one word enters per cycle.

    After exactly `depth` cycles of shifting, the chain holds a full
    bitstream in row order; a subsequent load fully overwrites it.
    """

    def __init__(self, depth: int, width: int):
        if depth < 1 or width < 1:
            raise ValueError("depth and width must be >= 1")
        self.depth = depth
        self.width = width
        zero = np.zeros(width, dtype=np.uint8)
        self._rows = deque((zero.copy() for _ in range(depth)), maxlen=depth)
        self.cycles = 0

    def shift_in(self, word) -> None:
        """One configuration cycle: `word` enters, everything moves down."""
        w = np.asarray(word, dtype=np.uint8)
        if w.shape != (self.width,):
            raise ShapeError(f"word must have {self.width} bits, got {w.shape}")
        self._rows.appendleft(w.copy())
        self.cycles += 1

    def load(self, bitstream) -> int:
        """Shift a full depth x width bit matrix in; returns cycles spent.

        Rows are fed last-first so that after the final cycle row i of the
        chain equals row i of the bitstream.
        """
        bs = np.asarray(bitstream, dtype=np.uint8)
        if bs.shape != (self.depth, self.width):
            raise ShapeError(
                f"bitstream must be {self.depth}x{self.width}, got {bs.shape}")
        for r in range(self.depth - 1, -1, -1):
            self.shift_in(bs[r])
        return self.depth

    def read_back(self) -> np.ndarray:
        """Current chain contents as a depth x width matrix."""
        return np.stack(list(self._rows))
