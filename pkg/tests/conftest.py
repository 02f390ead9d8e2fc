import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import pytest

from slotsim import Machine, SimConfig

# Both engines when the compiled one is present, else just the fallback.
try:
    from slotsim import _faststep  # noqa: F401
    ENGINES = ("pure", "fast")
except ImportError:
    ENGINES = ("pure",)


@pytest.fixture(params=ENGINES)
def engine(request):
    return request.param


def make_machine(engine="pure", **kw):
    kw.setdefault("mem_size", 1 << 16)
    return Machine(SimConfig(engine=engine, **kw))


@pytest.fixture
def machine(engine):
    return make_machine(engine)
