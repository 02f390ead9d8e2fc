"""slotsim: cycle-level model of an RV32IMF core whose M and F
instructions execute in reconfigurable fabric slots behind a small
tag-indexed disambiguator, plus the analysis tooling around it."""

from .isa import DecodeError, Instr, decode, encode
from .groups import GroupTable, ValidationError, default_group_table, \
    load_group_table
from .slots import Hit, LatencyConfig, Miss, SlotTable
from .bitstream import BitstreamCache
from .machine import (
    BudgetExceeded, LatencyTable, Machine, RunSummary, SimConfig, StepReport,
    MMIO_BASE, MMIO_CONSOLE, MMIO_HALT, MMIO_ITER,
)
from .trace import NO_ADDR, ParseError, TraceBuffer
from .fabric import (
    ConfigChain, FabricSpec, ShapeError, UnknownLutType,
    bitstream_bits, bits_to_bytes, port_width,
)

__version__ = "0.1.0"

__all__ = [
    "BitstreamCache", "BudgetExceeded", "ConfigChain", "DecodeError",
    "FabricSpec", "GroupTable", "Hit", "Instr", "LatencyConfig",
    "LatencyTable", "Machine", "Miss", "NO_ADDR", "ParseError",
    "RunSummary", "ShapeError", "SimConfig", "SlotTable", "StepReport",
    "TraceBuffer", "UnknownLutType", "ValidationError",
    "MMIO_BASE", "MMIO_CONSOLE", "MMIO_HALT", "MMIO_ITER",
    "bitstream_bits", "bits_to_bytes", "decode", "default_group_table",
    "encode", "load_group_table", "port_width",
]
