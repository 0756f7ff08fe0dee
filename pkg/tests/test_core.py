"""Core types, validation, and the idle-set op."""

import pytest
from hypothesis import given, strategies as st

from pisim.core import (
    Allocation,
    Job,
    ModelParams,
    SlotEvents,
    SystemState,
    idle_set,
    make_state,
    validate,
)
from pisim.stochastic import deterministic, poisson, truncated_poisson, uniform_int


def mixed_params(n_slow=5, n_fast=5, arrival=None):
    caps = (deterministic(1),) * n_slow + (uniform_int(1, 19),) * n_fast
    if arrival is None:
        arrival = truncated_poisson(27.5, 550)
    return ModelParams(n=n_slow + n_fast, arrival=arrival, capacities=caps)


def test_derived_moments():
    p = mixed_params()
    assert p.mu == (1.0,) * 5 + (10.0,) * 5
    assert p.total_mu == 55.0
    assert p.s_max == 19
    assert p.sigma_s[:5] == (0.0,) * 5
    assert p.sigma_s[5] == pytest.approx(30.0**0.5)
    assert p.lam == pytest.approx(27.5)


def test_validate_clean_model():
    assert validate(mixed_params()) == []


def test_validate_capacity_below_one():
    p = ModelParams(n=1, arrival=poisson(1.0), capacities=(uniform_int(0, 3),))
    out = validate(p)
    assert any("capacity below 1" in s for s in out)


def test_validate_truncated_poisson_capacity_is_below_one():
    # The kind is representable but its support includes 0, so it can never
    # be a valid capacity.
    p = ModelParams(n=1, arrival=poisson(1.0), capacities=(truncated_poisson(3.0, 9),))
    assert any("capacity below 1" in s for s in validate(p))


def test_validate_unbounded_capacity():
    p = ModelParams(n=1, arrival=poisson(1.0), capacities=(poisson(2.0),))
    out = validate(p)
    assert any("capacity unbounded" in s for s in out)
    assert p.s_max is None


def test_validate_zero_arrival_probability_required():
    p = ModelParams(n=1, arrival=deterministic(2), capacities=(deterministic(1),))
    assert any("zero-arrival probability required" in s for s in validate(p))
    # uniform arrivals not anchored at 0 are equally bad
    p2 = ModelParams(n=1, arrival=uniform_int(1, 3), capacities=(deterministic(1),))
    assert any("zero-arrival probability required" in s for s in validate(p2))


def test_validate_capacity_count_mismatch():
    p = ModelParams(n=3, arrival=poisson(1.0), capacities=(deterministic(1),))
    assert any("capacity distributions" in s for s in validate(p))


def test_idle_set_example():
    # 0-based indices: servers 0 and 2 are empty.
    assert idle_set((0, 3, 0)) == frozenset({0, 2})
    assert idle_set((1, 2, 3)) == frozenset()
    assert idle_set(()) == frozenset()


@given(st.lists(st.integers(0, 5), max_size=12))
def test_idle_set_is_exactly_the_zeros(q):
    got = idle_set(q)
    for i, x in enumerate(q):
        assert (i in got) == (x == 0)


def test_make_state_token_invariant():
    s = make_state((0, 4, 0, 1), li=1, slot=7)
    assert s.dispatcher_tokens == frozenset({0, 2})
    assert s.slot == 7
    assert s.total_queue == 5
    assert isinstance(s.q, tuple)


def test_allocation_helpers():
    a = Allocation((0, 3, 0, 2))
    assert a.total == 5
    assert a.support == (1, 3)


def test_job_jct_same_slot_completion_is_one():
    j = Job(id=0, arrival_slot=9, server=2, position_in_batch=0)
    assert j.jct is None
    j.completion_slot = 9
    assert j.jct == 1
    j.completion_slot = 12
    assert j.jct == 4


def test_slot_events_freezes_sequences():
    ev = SlotEvents(
        slot=1,
        batch_size=2,
        allocation=Allocation((2, 0)),
        departures=[1, 0],
        completed_jobs=[],
        tokens_sent=0,
        is_sampling_event=False,
        li=0,
    )
    assert ev.departures == (1, 0)
    assert ev.completed_jobs == ()


def test_states_hashable_and_equal():
    a = make_state((0, 2), li=1)
    b = make_state((0, 2), li=1)
    assert a == b and hash(a) == hash(b)
