"""Expansion cache: incremental levels and idle eviction."""

from datetime import datetime, timedelta

import pytest

from markovkit.errors import DiagramInvalid, PreconditionFailed
from markovkit.services.run_cache import ExpansionCache


def test_levels_grow_incrementally(diamond):
    cache = ExpansionCache()
    first = cache.levels(diamond, 2)
    assert [s.graph.counts for s in first] == [(2, 1), (4, 4)]
    deeper = cache.levels(diamond, 4)
    assert deeper[1] is first[1]
    assert [s.graph.counts for s in deeper] == [(2, 1), (4, 4), (12, 16), (44, 64)]
    assert len(cache.levels(diamond, 3)) == 3
    assert len(cache) == 1


def test_entries_are_keyed_by_content(builtins):
    cache = ExpansionCache()
    cache.entry(builtins["diamond"])
    cache.entry(builtins["cantor"])
    cache.entry(builtins["diamond"])
    assert len(cache) == 2


def test_depth_below_one(diamond):
    with pytest.raises(PreconditionFailed):
        ExpansionCache().levels(diamond, 0)


def test_invalid_diagram_is_not_expanded(one_eight, variant):
    cache = ExpansionCache()
    with pytest.raises(DiagramInvalid):
        cache.levels(variant(one_eight, gluings=()), 2)
    # the validation report is still cached
    assert len(cache) == 1


def test_eviction(diamond, solenoid):
    cache = ExpansionCache(timeout_minutes=5)
    cache.entry(diamond)
    cache.entry(solenoid)
    assert cache.evict_expired() == []
    later = datetime.now() + timedelta(minutes=6)
    assert len(cache.evict_expired(later)) == 2
    assert len(cache) == 0
    assert not cache.delete("sha256:missing")


async def test_cleanup_task_lifecycle(diamond):
    cache = ExpansionCache(timeout_minutes=0, sweep_seconds=0.01)
    await cache.start_cleanup_task()
    task = cache._cleanup_task
    await cache.start_cleanup_task()
    assert cache._cleanup_task is task
    await cache.stop_cleanup_task()
    assert task.cancelled()
    assert cache._cleanup_task is None
