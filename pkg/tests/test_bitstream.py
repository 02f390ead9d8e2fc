import pytest

from slotsim.bitstream import BitstreamCache, CacheHit, CacheMiss


def test_disabled_is_always_hit():
    c = BitstreamCache(enabled=False, penalty=99)
    for tag in (0, 1, 2, 0, 5):
        r = c.fetch(tag)
        assert isinstance(r, CacheHit) and r.extra_cycles == 0
    assert c.stats() == {"enabled": False, "hits": 0, "misses": 0,
                         "extra_stall_cycles": 0}


def test_miss_then_hit():
    c = BitstreamCache(blocks=4, penalty=7, enabled=True)
    r = c.fetch(3)
    assert isinstance(r, CacheMiss) and r.extra_cycles == 7
    r = c.fetch(3)
    assert isinstance(r, CacheHit)
    assert c.stats() == {"enabled": True, "hits": 1, "misses": 1,
                         "extra_stall_cycles": 7}


def test_lru_eviction_order():
    c = BitstreamCache(blocks=2, penalty=1, enabled=True)
    c.fetch(0)
    c.fetch(1)
    c.fetch(0)             # refresh 0; 1 is LRU
    c.fetch(2)             # evicts 1
    assert isinstance(c.fetch(0), CacheHit)
    assert isinstance(c.fetch(2), CacheHit)
    assert isinstance(c.fetch(1), CacheMiss)


def test_ten_groups_never_evict_at_64_blocks():
    c = BitstreamCache(blocks=64, penalty=10, enabled=True)
    for rep in range(3):
        for tag in range(10):
            c.fetch(tag)
    s = c.stats()
    assert s["misses"] == 10                # compulsory only
    assert s["hits"] == 20
    assert s["extra_stall_cycles"] == 100


def test_sizing_report():
    c = BitstreamCache(blocks=64, bitstream_bytes=12288)
    rep = c.sizing_report()
    assert rep == {"blocks": 64, "bitstream_bytes": 12288,
                   "total_bytes": 786432}
    assert rep["total_bytes"] == 768 * 1024


def test_validation():
    with pytest.raises(ValueError):
        BitstreamCache(blocks=0)
    with pytest.raises(ValueError):
        BitstreamCache(penalty=-1)
