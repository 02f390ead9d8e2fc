"""Reconfigurable-group map: which slot tag each M/F instruction carries.

The default table partitions the 29 slotted kinds (8 integer
multiply/divide, 21 floating-point) into 10 groups, three for the M
extension and seven for F.  A group is the unit of reconfiguration: the
disambiguator tags slots by group id in the default mode, or by an
(opcode, funct3, funct7) compound in the per-opcode mode.
"""

from __future__ import annotations

from array import array

from .isa import KINDS, KIND_BY_NAME, KIND_BY_ID, Instr

__all__ = [
    "DEFAULT_GROUPS",
    "GroupTable",
    "ValidationError",
    "load_group_table",
    "default_group_table",
    "SLOTTED_KINDS",
]

DEFAULT_GROUPS = (
    ("G0", ("mul", "mulh", "mulhsu", "mulhu")),
    ("G1", ("div", "divu")),
    ("G2", ("rem", "remu")),
    ("G3", ("fadd.s", "fsub.s")),
    ("G4", ("fmul.s",)),
    ("G5", ("fdiv.s",)),
    ("G6", ("fsgnj.s", "fsgnjn.s", "fsgnjx.s", "fmin.s", "fmax.s",
            "fle.s", "flt.s", "feq.s")),
    ("G7", ("fsqrt.s",)),
    ("G8", ("fcvt.w.s", "fcvt.wu.s", "fcvt.s.w", "fcvt.s.wu")),
    ("G9", ("fmadd.s", "fmsub.s", "fnmsub.s", "fnmadd.s")),
)

SLOTTED_KINDS = frozenset(k.name for k in KINDS if k.ext in ("M", "F"))


class ValidationError(ValueError):
    pass


def _opcode_tag_key(info):
    """Compound tag for the per-opcode mode: (opcode, funct3, funct7).

    Two wrinkles keep the compound well defined: where the funct3 field
    holds a rounding mode it is not part of the instruction's identity, so
    it contributes 0; the fused kinds have no funct7 (their four major
    opcodes already differ), so it contributes 0 there.  As a consequence
    fcvt.w.s/fcvt.wu.s share a tag (they differ only in rs2, which the
    compound excludes), and likewise fcvt.s.w/fcvt.s.wu.
    """
    f3 = info.f3 if info.fmt not in ("FR", "FU", "R4") else 0
    f7 = info.f7 if info.f7 is not None and info.fmt != "R4" else 0
    return (info.opcode, f3 or 0, f7)


class GroupTable:
    """Immutable kind -> group assignment plus tag derivation.

    `mode` selects what the disambiguator tags slots with: "group" uses
    the group id, "opcode" uses the encoding compound. Tag ids are dense
    integers 0..ntags-1 either way; kinds outside the table get tag -1.
    """

    def __init__(self, groups, mode="group"):
        if mode not in ("group", "opcode"):
            raise ValidationError(f"unknown tag mode: {mode!r}")
        self.mode = mode
        self.groups = tuple((label, tuple(kinds)) for label, kinds in groups)
        seen = {}
        for label, kinds in self.groups:
            if not kinds:
                raise ValidationError(f"empty group {label}")
            for k in kinds:
                if k not in KIND_BY_NAME:
                    raise ValidationError(f"unknown mnemonic {k!r} in {label}")
                if k not in SLOTTED_KINDS:
                    raise ValidationError(
                        f"{k!r} is not a reconfigurable kind ({label})")
                if k in seen:
                    raise ValidationError(
                        f"{k!r} listed in both {seen[k]} and {label}")
                seen[k] = label
        missing = SLOTTED_KINDS - set(seen)
        if missing:
            raise ValidationError(
                "reconfigurable kinds missing from table: "
                + ", ".join(sorted(missing)))
        self._gid_by_kind = {}
        for gid, (label, kinds) in enumerate(self.groups):
            for k in kinds:
                self._gid_by_kind[k] = gid

        if mode == "group":
            self._labels = tuple(label for label, _ in self.groups)
            self._tag_by_kind = dict(self._gid_by_kind)
        else:
            by_key = {}
            for name in sorted(seen):
                key = _opcode_tag_key(KIND_BY_NAME[name])
                by_key.setdefault(key, []).append(name)
            self._labels = tuple(
                "+".join(by_key[key]) for key in sorted(by_key))
            tag_of_key = {key: i for i, key in enumerate(sorted(by_key))}
            self._tag_by_kind = {
                name: tag_of_key[_opcode_tag_key(KIND_BY_NAME[name])]
                for name in seen}

    @property
    def ntags(self) -> int:
        return len(self._labels)

    def label(self, tag: int) -> str:
        return self._labels[tag]

    def group_of(self, kind: str):
        """Group id for a kind name, or None when not reconfigurable."""
        return self._gid_by_kind.get(kind)

    def classify(self, instr: Instr):
        """Group id of a decoded instruction, or None when not slotted."""
        return self._gid_by_kind.get(instr.kind)

    def tag_of(self, kind: str) -> int:
        """Dense slot-tag id for a kind, -1 when not slotted."""
        return self._tag_by_kind.get(kind, -1)

    def tag_array(self) -> array:
        """kid -> tag id lookup (signed bytes, -1 = not slotted)."""
        out = array("b", [-1] * len(KIND_BY_ID))
        for name, tag in self._tag_by_kind.items():
            out[KIND_BY_NAME[name].kid] = tag
        return out

    def kinds_of_group(self, gid: int):
        return self.groups[gid][1]


def default_group_table(mode="group") -> GroupTable:
    return GroupTable(DEFAULT_GROUPS, mode=mode)


def load_group_table(config_text: str, mode="group") -> GroupTable:
    """Parse a group override file.

    One line per group, `G<id>: mnemonic[,mnemonic...]`; '#' starts a
    comment; blank lines ignored; empty input means the default table.
    Group ids must be unique and form 0..n-1 (order in the file is free).
    """
    entries = {}
    for lineno, raw in enumerate(config_text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, tail = line.partition(":")
        head = head.strip()
        if not sep or not head.startswith("G"):
            raise ValidationError(f"line {lineno}: expected 'G<id>: kinds'")
        try:
            gid = int(head[1:])
        except ValueError:
            raise ValidationError(f"line {lineno}: bad group id {head!r}") from None
        if gid in entries:
            raise ValidationError(f"line {lineno}: duplicate group G{gid}")
        kinds = tuple(k.strip() for k in tail.split(",") if k.strip())
        if not kinds:
            raise ValidationError(f"line {lineno}: group G{gid} lists no kinds")
        entries[gid] = kinds
    if not entries:
        return default_group_table(mode=mode)
    if sorted(entries) != list(range(len(entries))):
        raise ValidationError(
            f"group ids must be 0..{len(entries) - 1}, got {sorted(entries)}")
    groups = tuple((f"G{gid}", entries[gid]) for gid in sorted(entries))
    return GroupTable(groups, mode=mode)
