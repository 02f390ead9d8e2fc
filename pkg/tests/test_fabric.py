"""Sizing arithmetic and the shift-register configuration chain."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from slotsim.fabric import (REFERENCE_BITS, REFERENCE_LUTS, ConfigChain,
                            FabricSpec, ShapeError, UnknownLutType,
                            bits_to_bytes, bitstream_bits, port_width)


def test_reference_fabric_bits():
    assert REFERENCE_LUTS == 1680
    assert bitstream_bits(1680, 4) == 91200
    assert bitstream_bits(1680, 5) == 114000
    assert bitstream_bits(1680, 6) == 149000


def test_linear_scaling_rounds_up():
    assert bitstream_bits(3360, 4) == 182400
    assert bitstream_bits(840, 4) == 45600
    # 1 LUT: 91200/1680 = 54.28..., ceil
    assert bitstream_bits(1, 4) == 55
    assert bitstream_bits(1679, 4) == 91146   # ceil(1679*91200/1680)


def test_port_width_reference_points():
    assert port_width(91200, 50) == 1824
    assert port_width(91200, 250) == 365     # ceil(364.8)
    assert port_width(91200, 10) == 9120
    assert port_width(0, 5) == 0


def test_port_width_ceiling():
    assert port_width(7, 2) == 4
    assert port_width(8, 2) == 4
    assert port_width(9, 2) == 5


def test_bits_to_bytes():
    assert bits_to_bytes(91200) == 11400
    assert bits_to_bytes(1) == 1
    assert bits_to_bytes(8) == 1
    assert bits_to_bytes(9) == 2


def test_errors():
    with pytest.raises(UnknownLutType):
        bitstream_bits(1680, 3)
    with pytest.raises(ValueError):
        bitstream_bits(0, 4)
    with pytest.raises(ValueError):
        port_width(100, 0)
    with pytest.raises(ValueError):
        port_width(-1, 10)


def test_fabric_spec_chain_geometry():
    spec = FabricSpec(lut_count=1680, lut_type=4)
    assert spec.bits_per_fabric == 91200
    ch = spec.chain_for_latency(50)
    assert (ch.depth, ch.width) == (50, 1824)
    ch = spec.chain_for_latency(250)
    assert (ch.depth, ch.width) == (250, 365)


# ---- configuration chain ----

def test_chain_starts_zeroed():
    ch = ConfigChain(depth=3, width=4)
    assert ch.read_back().shape == (3, 4)
    assert not ch.read_back().any()
    assert ch.cycles == 0


def test_shift_in_moves_rows_down():
    ch = ConfigChain(depth=3, width=2)
    ch.shift_in([1, 0])
    ch.shift_in([0, 1])
    got = ch.read_back()
    # newest word sits in row 0
    assert got.tolist() == [[0, 1], [1, 0], [0, 0]]
    assert ch.cycles == 2


def test_shift_overflow_drops_oldest():
    ch = ConfigChain(depth=2, width=1)
    for v in ([1], [0], [1]):
        ch.shift_in(v)
    assert ch.read_back().tolist() == [[1], [0]]


def test_load_cycle_count_and_identity():
    rng = np.random.default_rng(7)
    bs = rng.integers(0, 2, size=(50, 1824), dtype=np.uint8)
    ch = ConfigChain(depth=50, width=1824)
    assert ch.load(bs) == 50
    assert ch.cycles == 50
    assert np.array_equal(ch.read_back(), bs)


def test_second_load_overwrites():
    rng = np.random.default_rng(8)
    a = rng.integers(0, 2, size=(5, 3), dtype=np.uint8)
    b = rng.integers(0, 2, size=(5, 3), dtype=np.uint8)
    ch = ConfigChain(depth=5, width=3)
    ch.load(a)
    ch.load(b)
    assert np.array_equal(ch.read_back(), b)
    assert ch.cycles == 10


def test_shape_errors():
    ch = ConfigChain(depth=2, width=3)
    with pytest.raises(ShapeError):
        ch.shift_in([1, 0])
    with pytest.raises(ShapeError):
        ch.load(np.zeros((3, 3), dtype=np.uint8))
    with pytest.raises(ValueError):
        ConfigChain(depth=0, width=1)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=1, max_value=20),
       st.integers(min_value=1, max_value=20),
       st.integers(min_value=0, max_value=2 ** 32 - 1))
def test_load_read_back_round_trip(depth, width, seed):
    rng = np.random.default_rng(seed)
    bs = rng.integers(0, 2, size=(depth, width), dtype=np.uint8)
    ch = ConfigChain(depth=depth, width=width)
    ch.load(bs)
    assert np.array_equal(ch.read_back(), bs)
