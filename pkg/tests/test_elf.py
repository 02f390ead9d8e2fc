"""ELF32 and flat-binary image loading."""

import struct

import pytest

from slotsim import elf
from slotsim.kernels.builder import Prog, A0

from conftest import make_machine


def minimal_elf(segments, entry=0x100, machine=elf.EM_RISCV, etype=2,
                ei_class=1, ei_data=1):
    """Build an ELF32 image: (vaddr, data, memsz) triples."""
    phoff = 52
    phentsize = 32
    body_off = phoff + phentsize * len(segments)
    phdrs = b""
    blobs = b""
    off = body_off
    for vaddr, data, memsz in segments:
        phdrs += struct.pack("<IIIIIIII", elf.PT_LOAD, off, vaddr, vaddr,
                             len(data), memsz, 5, 4)
        blobs += data
        off += len(data)
    ehdr = (b"\x7fELF" + bytes([ei_class, ei_data, 1]) + bytes(9)
            + struct.pack("<HHIIIIIHHHHHH", etype, machine, 1, entry,
                          phoff, 0, 0, 52, phentsize, len(segments),
                          0, 0, 0))
    assert len(ehdr) == 52
    return ehdr + phdrs + blobs


def test_parse_minimal():
    img = elf.parse_elf(minimal_elf([(0x200, b"\x13\x00\x00\x00", 4)]))
    assert img.entry == 0x100
    assert len(img.segments) == 1
    seg = img.segments[0]
    assert (seg.addr, seg.data, seg.memsz) == (0x200, b"\x13\x00\x00\x00", 4)


def test_bss_zero_fill():
    m = make_machine()
    m.mem[0x300:0x310] = b"\xAA" * 16
    img = elf.parse_elf(minimal_elf([(0x300, b"\x01\x02", 8)]))
    img.load_into(m)
    assert m.mem[0x300:0x308] == b"\x01\x02" + bytes(6)
    assert m.mem[0x308:0x310] == b"\xAA" * 8      # beyond memsz untouched
    assert m.pc == 0x100


def test_multiple_segments():
    img = elf.parse_elf(minimal_elf([(0x0, b"AB", 2), (0x500, b"CD", 2)]))
    assert [s.addr for s in img.segments] == [0x0, 0x500]


@pytest.mark.parametrize("kw,msg", [
    (dict(machine=40), "machine type"),
    (dict(etype=1), "ET_EXEC"),
    (dict(ei_class=2), "ELF32"),
    (dict(ei_data=2), "ELF32"),
])
def test_parse_rejections(kw, msg):
    blob = minimal_elf([(0, b"\x13\x00\x00\x00", 4)], **kw)
    with pytest.raises(elf.ImageError, match=msg):
        elf.parse_elf(blob)


def test_rejects_non_elf():
    with pytest.raises(elf.ImageError, match="not an ELF"):
        elf.parse_elf(b"MZ too short")


def test_rejects_truncated_segment():
    blob = minimal_elf([(0, b"\x13\x00\x00\x00", 4)])
    with pytest.raises(elf.ImageError, match="past end"):
        elf.parse_elf(blob[:-2])


def test_rejects_memsz_smaller_than_filesz():
    blob = minimal_elf([(0, b"\x13\x00\x00\x00", 2)])
    with pytest.raises(elf.ImageError, match="memsz"):
        elf.parse_elf(blob)


def test_rejects_no_load_segments():
    blob = minimal_elf([])
    with pytest.raises(elf.ImageError, match="no PT_LOAD"):
        elf.parse_elf(blob)


def test_load_file_elf(tmp_path):
    p = tmp_path / "prog.elf"
    p.write_bytes(minimal_elf([(0x40, b"\x13\x00\x00\x00", 4)], entry=0x40))
    img = elf.load_file(str(p))
    assert img.entry == 0x40
    img = elf.load_file(str(p), entry=0x80)   # explicit entry wins
    assert img.entry == 0x80


def test_load_file_flat_binary(tmp_path):
    prog = Prog("rv32imf")
    prog.li(A0, 31)
    prog.halt(reg=A0)
    blob = prog.assemble(0x200)
    p = tmp_path / "prog.bin"
    p.write_bytes(blob)
    img = elf.load_file(str(p), base=0x200)
    assert img.entry == 0x200
    m = make_machine()
    img.load_into(m)
    s = m.run()
    assert s.exit_value == 31


def test_flat_binary_entry_override(tmp_path):
    p = tmp_path / "x.bin"
    p.write_bytes(b"\x13\x00\x00\x00")
    img = elf.load_file(str(p), base=0x100, entry=0x104)
    assert img.entry == 0x104
    assert img.segments[0].addr == 0x100
