"""Bundled benchmark suite: every kernel must print the same bytes on
every target it supports (the soft and hard lowerings are the same
computation), and the printed bytes are frozen here so silent changes
to any kernel or to either lowering show up as digest breaks."""

import hashlib

import pytest

from slotsim import Machine, SimConfig
from slotsim.kernels import KERNELS, TARGETS, build_kernel, kernel_names
from slotsim.kernels.builder import AsmError, Prog
from slotsim.harness import groups_used

# name -> sha256[:16] of console output at default iteration counts,
# identical across all supported targets
FROZEN_DIGESTS = {
    "matmul-int": "ebb425157085429d",
    "modexp": "95920e82ad574b69",
    "mandel": "3732eca13abc9dea",
    "crc32": "0c381a6335b63407",
    "sort": "a0bfc988c5aa7a6f",
    "fsm": "04b90392026e1b8d",
    "axpy": "a8077c66405f0e74",
    "nbody": "11eba9daf8661b8d",
    "poly": "28fe42e337a7e327",
    "qnorm": "5a5c35b9d777f7b5",
    "mgrind": "cf610be2c6f1ce23",
    "fgrind": "e22604be877ef6c6",
    "fgrind2": "13a909ec69e58b61",
}


def run_image(code, engine="fast"):
    m = Machine(SimConfig(engine=engine))
    m.load_image(code, 0)
    return m.run(max_cycles=500_000_000)


def test_suite_shape():
    names = kernel_names()
    assert set(names) == set(FROZEN_DIGESTS)
    portable = [n for n in names if KERNELS[n].targets == TARGETS]
    assert len(portable) == 10
    flavors = {KERNELS[n].flavor for n in names}
    assert flavors == {"plain", "int", "float", "mixed", "grind"}


@pytest.mark.parametrize("name", sorted(FROZEN_DIGESTS))
def test_digest_on_every_target(name):
    k = KERNELS[name]
    seen = set()
    for target in k.targets:
        code, _ = build_kernel(name, target)
        s = run_image(code)
        assert s.halted and s.exit_value == 0, (name, target, s.stop_reason)
        seen.add(hashlib.sha256(s.console).hexdigest()[:16])
    assert seen == {FROZEN_DIGESTS[name]}, (name, seen)


def test_iters_scale_output():
    a, _ = build_kernel("crc32", "rv32i", iters=4)
    b, _ = build_kernel("crc32", "rv32i", iters=8)
    sa, sb = run_image(a), run_image(b)
    assert sa.iterations == 4 and sb.iterations == 8
    assert len(sb.console) > len(sa.console)


def test_unknown_kernel_and_target():
    with pytest.raises(KeyError):
        build_kernel("nonesuch", "rv32imf")
    with pytest.raises(AsmError):
        build_kernel("crc32", "rv64gc")
    with pytest.raises(AsmError):
        Prog("armv8")


def test_grinder_targets_are_restricted():
    for name in ("mgrind", "fgrind", "fgrind2"):
        assert KERNELS[name].targets == ("rv32imf",)


def test_grinders_cover_all_groups():
    # the three grinders exist to touch every reconfigurable group
    union = set()
    for name in ("mgrind", "fgrind", "fgrind2"):
        union |= groups_used(name)
    assert union == {f"G{i}" for i in range(10)}


def test_plain_kernels_touch_no_groups():
    for name in ("crc32", "sort", "fsm"):
        assert groups_used(name) == set()


def test_int_kernels_stay_off_the_float_pipe():
    for name in ("matmul-int", "modexp", "mandel"):
        used = groups_used(name)
        assert used
        assert used <= {"G0", "G1", "G2"}


def test_float_kernels_use_float_groups():
    for name in ("axpy", "nbody", "poly"):
        used = groups_used(name)
        assert used & {f"G{i}" for i in range(3, 10)}


def test_console_output_is_printable():
    code, _ = build_kernel("sort", "rv32imf")
    s = run_image(code)
    text = s.console.decode("ascii")
    assert text.endswith("\n")
