import pytest

from slotsim.groups import (DEFAULT_GROUPS, GroupTable, SLOTTED_KINDS,
                            ValidationError, default_group_table,
                            load_group_table)
from slotsim.isa import KINDS, KIND_BY_NAME


def test_default_partition_is_complete():
    listed = [k for _, kinds in DEFAULT_GROUPS for k in kinds]
    assert len(listed) == len(set(listed)) == 29
    assert set(listed) == SLOTTED_KINDS
    # 8 from M, 21 from F
    assert sum(1 for k in listed if KIND_BY_NAME[k].ext == "M") == 8
    assert sum(1 for k in listed if KIND_BY_NAME[k].ext == "F") == 21


def test_group_mode_tags():
    gt = default_group_table()
    assert gt.mode == "group"
    assert gt.ntags == 10
    assert gt.tag_of("mul") == 0
    assert gt.tag_of("div") == gt.tag_of("divu") == 1
    assert gt.tag_of("fmadd.s") == 9
    assert gt.tag_of("add") == -1
    assert gt.group_of("lui") is None
    assert gt.label(0) == "G0"


def test_opcode_mode_tags():
    gt = default_group_table(mode="opcode")
    # 29 kinds collapse to 27 encoding compounds: each fcvt direction
    # pair differs only in rs2
    assert gt.ntags == 27
    assert gt.tag_of("fcvt.w.s") == gt.tag_of("fcvt.wu.s")
    assert gt.tag_of("fcvt.s.w") == gt.tag_of("fcvt.s.wu")
    tag_names = set()
    for name in SLOTTED_KINDS:
        t = gt.tag_of(name)
        assert t >= 0
        tag_names.add(t)
    assert len(tag_names) == 27
    # every non-fcvt kind has a tag of its own
    assert gt.tag_of("mul") != gt.tag_of("mulh")
    assert gt.tag_of("fadd.s") != gt.tag_of("fsub.s")


def test_tag_array_shape():
    gt = default_group_table()
    tags = gt.tag_array()
    assert len(tags) == len(KINDS) + 1
    assert tags[0] == -1  # kid 0 is unused
    for info in KINDS:
        want = gt.tag_of(info.name)
        assert tags[info.kid] == want


def test_rejects_incomplete_table():
    with pytest.raises(ValidationError, match="missing"):
        GroupTable((("G0", ("mul",)),))


def test_rejects_unslotted_kind():
    groups = DEFAULT_GROUPS[:-1] + (
        ("G9", DEFAULT_GROUPS[-1][1] + ("add",)),)
    with pytest.raises(ValidationError, match="not a reconfigurable"):
        GroupTable(groups)


def test_rejects_duplicate_kind():
    groups = DEFAULT_GROUPS + (("G10", ("mul",)),)
    with pytest.raises(ValidationError, match="both"):
        GroupTable(groups)


def test_rejects_unknown_mode():
    with pytest.raises(ValidationError):
        GroupTable(DEFAULT_GROUPS, mode="banana")


# ---- override file parser ----

FULL_TEXT = "\n".join(
    f"G{i}: {', '.join(kinds)}" for i, (_, kinds) in enumerate(DEFAULT_GROUPS))


def test_load_round_trip():
    gt = load_group_table(FULL_TEXT)
    ref = default_group_table()
    for name in SLOTTED_KINDS:
        assert gt.tag_of(name) == ref.tag_of(name)


def test_load_comments_and_blanks():
    text = "# header\n\n" + FULL_TEXT + "   # trailing\n"
    assert load_group_table(text).ntags == 10


def test_load_empty_gives_default():
    gt = load_group_table("# nothing here\n")
    assert gt.ntags == 10
    assert gt.tag_of("fdiv.s") == 5


def test_load_regrouping_changes_tags():
    # merge everything into two groups: M and F
    m = [k for k in sorted(SLOTTED_KINDS) if KIND_BY_NAME[k].ext == "M"]
    f = [k for k in sorted(SLOTTED_KINDS) if KIND_BY_NAME[k].ext == "F"]
    text = f"G0: {','.join(m)}\nG1: {','.join(f)}\n"
    gt = load_group_table(text)
    assert gt.ntags == 2
    assert gt.tag_of("mul") == gt.tag_of("rem") == 0
    assert gt.tag_of("fsqrt.s") == 1


@pytest.mark.parametrize("text,msg", [
    ("G0 mul", "expected"),
    ("H0: mul", "expected"),
    ("Gx: mul", "bad group id"),
    ("G0: mul\nG0: div", "duplicate"),
    ("G0:", "no kinds"),
    ("G1: mul", "must be 0"),
])
def test_load_rejects(text, msg):
    with pytest.raises(ValidationError, match=msg):
        load_group_table(text)
