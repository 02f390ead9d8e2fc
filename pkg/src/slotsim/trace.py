"""Retired-instruction traces.

One record per retired instruction: (pc, kind id, data address).
Instructions that touch no memory carry the NO_ADDR sentinel.  Two
interchangeable file forms:

  text    one line per record, `pc,opcode_name,mem_addr` with all
          numbers as bare lowercase hex and `-` for no address
  binary  little-endian packed records `<IHI` (pc, kind id, addr),
          10 bytes each, no header; kind ids follow isa.KINDS order
"""

from __future__ import annotations

import struct
from array import array

from .isa import KIND_BY_ID, KIND_BY_NAME

NO_ADDR = 0xFFFFFFFF

_REC = struct.Struct("<IHI")


class ParseError(ValueError):
    def __init__(self, lineno: int, why: str):
        super().__init__(f"trace line {lineno}: {why}")
        self.lineno = lineno


class TraceBuffer:
    """Grow-only in-memory trace, cheap enough to leave on for full runs."""

    __slots__ = ("t_pc", "t_kid", "t_addr")

    def __init__(self):
        self.t_pc = array("I")
        self.t_kid = array("H")
        self.t_addr = array("I")

    def append(self, pc: int, kid: int, addr: int) -> None:
        self.t_pc.append(pc)
        self.t_kid.append(kid)
        self.t_addr.append(addr)

    def __len__(self) -> int:
        return len(self.t_pc)

    def __iter__(self):
        return zip(self.t_pc, self.t_kid, self.t_addr)

    def clear(self) -> None:
        del self.t_pc[:]
        del self.t_kid[:]
        del self.t_addr[:]

    # ---------- file I/O ----------

    def write_text(self, path) -> None:
        names = [k.name if k is not None else "?" for k in KIND_BY_ID]
        with open(path, "w") as fh:
            for pc, kid, addr in self:
                a = "-" if addr == NO_ADDR else f"{addr:x}"
                fh.write(f"{pc:x},{names[kid]},{a}\n")

    def write_binary(self, path) -> None:
        with open(path, "wb") as fh:
            pack = _REC.pack
            for rec in self:
                fh.write(pack(*rec))

    @classmethod
    def read_text(cls, path) -> "TraceBuffer":
        tb = cls()
        ap = tb.append
        with open(path) as fh:
            for ln, line in enumerate(fh, 1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                parts = line.split(",")
                if len(parts) != 3:
                    raise ParseError(ln, f"expected 3 fields, got {len(parts)}")
                info = KIND_BY_NAME.get(parts[1])
                if info is None:
                    raise ParseError(ln, f"unknown opcode {parts[1]!r}")
                try:
                    pc = int(parts[0], 16)
                    addr = NO_ADDR if parts[2] == "-" else int(parts[2], 16)
                except ValueError:
                    raise ParseError(ln, "bad hex field") from None
                if not 0 <= pc <= 0xFFFFFFFF or not 0 <= addr <= 0xFFFFFFFF:
                    raise ParseError(ln, "field out of 32-bit range")
                ap(pc, info.kid, addr)
        return tb

    @classmethod
    def read_binary(cls, path) -> "TraceBuffer":
        tb = cls()
        with open(path, "rb") as fh:
            blob = fh.read()
        if len(blob) % _REC.size:
            raise ParseError(len(blob) // _REC.size + 1,
                             f"trailing {len(blob) % _REC.size} bytes")
        nkinds = len(KIND_BY_ID)
        for i, (pc, kid, addr) in enumerate(_REC.iter_unpack(blob), 1):
            if not 1 <= kid < nkinds:
                raise ParseError(i, f"bad kind id {kid}")
            tb.append(pc, kid, addr)
        return tb
