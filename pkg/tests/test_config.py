import pytest

from slotsim.config import ConfigError, parse_config, read_config
from slotsim.machine import SimConfig
from slotsim.sched import SchedConfig


def test_defaults_on_empty():
    cfg = parse_config("")
    assert cfg == SimConfig()


def test_nested_and_top_level_keys():
    cfg = parse_config("""
        # comment line
        slot.num_slots    = 8
        slot.miss_latency = 250     # inline comment
        lat.m_ext         = 9
        mem_size          = 0x20000
        tag_mode          = opcode
        slot_policy       = fifo
        halt_on_trap      = off
        bitstream.enabled = true
        bitstream.penalty = 12
    """)
    assert cfg.slot.num_slots == 8
    assert cfg.slot.miss_latency == 250
    assert cfg.slot.hit_latency == 0            # untouched default
    assert cfg.lat.m_ext == 9
    assert cfg.lat.base_i == 1
    assert cfg.mem_size == 0x20000
    assert cfg.tag_mode == "opcode"
    assert cfg.slot_policy == "fifo"
    assert cfg.halt_on_trap is False
    assert cfg.bitstream_enabled is True
    assert cfg.bitstream_penalty == 12


def test_base_config_overlay():
    base = SimConfig(mem_size=1 << 16)
    cfg = parse_config("lat.f_pipe = 11\n", base=base)
    assert cfg.mem_size == 1 << 16
    assert cfg.lat.f_pipe == 11


def test_group_table_file(tmp_path):
    gt = tmp_path / "two_groups.txt"
    mnames = "mul,mulh,mulhsu,mulhu,div,divu,rem,remu"
    fnames = ("fadd.s,fsub.s,fmul.s,fdiv.s,fsqrt.s,fsgnj.s,fsgnjn.s,"
              "fsgnjx.s,fmin.s,fmax.s,fle.s,flt.s,feq.s,fcvt.w.s,"
              "fcvt.wu.s,fcvt.s.w,fcvt.s.wu,fmadd.s,fmsub.s,fnmsub.s,"
              "fnmadd.s")
    gt.write_text(f"G0: {mnames}\nG1: {fnames}\n")
    cfgfile = tmp_path / "sim.cfg"
    cfgfile.write_text("group_table = two_groups.txt\n")
    cfg = read_config(str(cfgfile))
    assert cfg.group_table_text == gt.read_text()
    # the machine built from it really has two tags
    from slotsim import Machine
    assert Machine(cfg.with_(mem_size=1 << 16)).groups.ntags == 2


def test_group_table_missing_file(tmp_path):
    cfgfile = tmp_path / "sim.cfg"
    cfgfile.write_text("group_table = nope.txt\n")
    with pytest.raises(ConfigError, match="cannot read"):
        read_config(str(cfgfile))


def test_sched_keys_need_sched_context():
    with pytest.raises(ConfigError, match="not valid here"):
        parse_config("sched.timer_period = 500\n")


def test_sched_keys_with_context():
    cfg, sched = parse_config(
        "sched.timer_period = 500\nsched.switch_overhead_instrs = 10\n"
        "slot.num_slots = 2\n",
        sched=SchedConfig())
    assert isinstance(cfg, SimConfig)
    assert cfg.slot.num_slots == 2
    assert sched.timer_period == 500
    assert sched.switch_overhead_instrs == 10
    # untouched sched fields keep defaults
    assert sched.budget_cycles == SchedConfig().budget_cycles


def test_sched_returned_even_without_keys():
    cfg, sched = parse_config("mem_size = 0x8000\n", sched=SchedConfig())
    assert sched == SchedConfig()


@pytest.mark.parametrize("text,msg", [
    ("mem_size 123", "expected key = value"),
    ("slot.nonesuch = 1", "unknown key"),
    ("frobnicate = 1", "unknown key"),
    ("mem_size = banana", "expected an integer"),
    ("halt_on_trap = maybe", "expected a boolean"),
    ("_engine = x", "unknown key"),
])
def test_parse_errors(text, msg):
    with pytest.raises(ConfigError, match=msg):
        parse_config(text)


def test_error_reports_line_number():
    with pytest.raises(ConfigError, match="line 3"):
        parse_config("\nmem_size = 0x8000\nbogus = 1\n")


def test_hex_and_decimal_integers():
    cfg = parse_config("mem_size = 0x10000\nslot.miss_latency = 250\n")
    assert cfg.mem_size == 65536
    assert cfg.slot.miss_latency == 250
