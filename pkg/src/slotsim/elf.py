"""Program image loading: ELF32 little-endian or raw flat binary.

Only what a bare-metal image needs: PT_LOAD segments and the entry
point.  Sections, symbols and relocation are ignored.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

EM_RISCV = 243
PT_LOAD = 1


class ImageError(ValueError):
    pass


@dataclass
class Segment:
    addr: int
    data: bytes
    memsz: int  # >= len(data); the tail is zero-filled (.bss)


@dataclass
class Image:
    entry: int
    segments: list

    def load_into(self, machine) -> None:
        for seg in self.segments:
            machine.load_image(seg.data + bytes(seg.memsz - len(seg.data)),
                               seg.addr)
        machine.pc = self.entry


def parse_elf(blob: bytes) -> Image:
    if len(blob) < 52 or blob[:4] != b"\x7fELF":
        raise ImageError("not an ELF file")
    ei_class, ei_data = blob[4], blob[5]
    if ei_class != 1 or ei_data != 1:
        raise ImageError("need ELF32 little-endian")
    (e_type, e_machine, _ver, e_entry, e_phoff, _shoff, _flags, _ehsize,
     e_phentsize, e_phnum) = struct.unpack_from("<HHIIIIIHHH", blob, 16)
    if e_machine != EM_RISCV:
        raise ImageError(f"machine type {e_machine}, want RISC-V ({EM_RISCV})")
    if e_type != 2:
        raise ImageError("not an executable (ET_EXEC)")
    segs = []
    for i in range(e_phnum):
        off = e_phoff + i * e_phentsize
        (p_type, p_offset, p_vaddr, _paddr, p_filesz, p_memsz, _pflags,
         _align) = struct.unpack_from("<IIIIIIII", blob, off)
        if p_type != PT_LOAD:
            continue
        if p_offset + p_filesz > len(blob):
            raise ImageError(f"segment {i} extends past end of file")
        if p_memsz < p_filesz:
            raise ImageError(f"segment {i} memsz < filesz")
        segs.append(Segment(p_vaddr, blob[p_offset:p_offset + p_filesz],
                            p_memsz))
    if not segs:
        raise ImageError("no PT_LOAD segments")
    return Image(entry=e_entry, segments=segs)


def load_file(path: str, base: int = 0, entry: int = None) -> Image:
    """Parse path as ELF if it looks like one, else raw binary at base."""
    with open(path, "rb") as fh:
        blob = fh.read()
    if blob[:4] == b"\x7fELF":
        img = parse_elf(blob)
        if entry is not None:
            img.entry = entry
        return img
    return Image(entry=base if entry is None else entry,
                 segments=[Segment(base, blob, len(blob))])
