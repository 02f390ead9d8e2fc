"""Flat key=value config files -> SimConfig (+ scheduler knobs).

Example:

    # four slots, 50-cycle reconfiguration
    slot.num_slots    = 4
    slot.miss_latency = 50
    lat.m_ext         = 4
    tag_mode          = group
    slot_policy       = lru
    group_table       = my_groups.txt
    mem_size          = 0x100000
    mmio_base         = 0x10000000
    sched.timer_period = 20000

Dotted prefixes fill the nested latency/slot/scheduler tables; bare
keys fill SimConfig fields.  `group_table` names a file whose text
becomes group_table_text.  The bundled kernels signal through the
default device base, so mmio_base overrides only make sense for
external images.
"""

from __future__ import annotations

import os
from dataclasses import replace

from .machine import LatencyTable, SimConfig
from .slots import LatencyConfig
from .sched import SchedConfig

_BOOL = {"true": True, "false": False, "1": True, "0": False,
         "yes": True, "no": False, "on": True, "off": False}


class ConfigError(ValueError):
    def __init__(self, lineno, why):
        super().__init__(f"config line {lineno}: {why}")


def _coerce(cur, raw, lineno):
    if isinstance(cur, bool):
        v = _BOOL.get(raw.lower())
        if v is None:
            raise ConfigError(lineno, f"expected a boolean, got {raw!r}")
        return v
    if isinstance(cur, int):
        try:
            return int(raw, 0)
        except ValueError:
            raise ConfigError(lineno, f"expected an integer, got {raw!r}") \
                from None
    return raw


def parse_config(text: str, base: SimConfig = None,
                 search_dir: str = ".", sched: SchedConfig = None):
    """Parse config text.  Returns the SimConfig; when a SchedConfig is
    passed, sched.* keys are accepted too and (SimConfig, SchedConfig)
    is returned."""
    cfg = base if base is not None else SimConfig()
    want_sched = sched is not None
    sched = sched if want_sched else SchedConfig()
    lat_kw, slot_kw, top_kw, sched_kw = {}, {}, {}, {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(lineno, "expected key = value")
        key, raw = (s.strip() for s in line.split("=", 1))
        if key.startswith("lat."):
            name, box, cur = key[4:], lat_kw, cfg.lat
        elif key.startswith("slot."):
            name, box, cur = key[5:], slot_kw, cfg.slot
        elif key.startswith("sched."):
            if not want_sched:
                raise ConfigError(lineno, f"{key!r} not valid here")
            name, box, cur = key[6:], sched_kw, sched
        elif key.startswith("bitstream."):
            name, box, cur = "bitstream_" + key[10:], top_kw, cfg
        else:
            name, box, cur = key, top_kw, cfg
        if name == "group_table":
            path = os.path.join(search_dir, raw)
            try:
                with open(path) as fh:
                    top_kw["group_table_text"] = fh.read()
            except OSError as e:
                raise ConfigError(lineno, f"cannot read {path}: {e}") \
                    from None
            continue
        if not hasattr(cur, name) or name.startswith("_"):
            raise ConfigError(lineno, f"unknown key {key!r}")
        box[name] = _coerce(getattr(cur, name), raw, lineno)
    if lat_kw:
        top_kw["lat"] = replace(cfg.lat, **lat_kw)
    if slot_kw:
        top_kw["slot"] = replace(cfg.slot, **slot_kw)
    out = cfg.with_(**top_kw) if top_kw else cfg
    if want_sched:
        return out, replace(sched, **sched_kw) if sched_kw else sched
    return out


def read_config(path: str, base: SimConfig = None,
                sched: SchedConfig = None):
    with open(path) as fh:
        text = fh.read()
    return parse_config(text, base,
                        search_dir=os.path.dirname(path) or ".",
                        sched=sched)
