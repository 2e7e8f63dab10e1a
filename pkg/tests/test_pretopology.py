from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import small_systems, step_map_of
from emergent_space.dynsys import Subset, build_system, reach, reach_table
from emergent_space.errors import StateSpaceTooLarge
from emergent_space.pretopology import (
    Classification,
    check_axioms,
    classify_subset,
    closed_family,
    interior,
)
from oracles import naive_closed_family, naive_is_idempotent, naive_reach


class TestClassifySubset:
    def test_two_cycles_region_is_clopen(self, shift2_on4):
        rep = classify_subset(shift2_on4, shift2_on4.subset([2, 4]), 1)
        assert rep.is_closed and rep.is_open
        assert rep.interior.labels() == ("2", "4")
        assert rep.closure.labels() == ("2", "4")

    def test_shift_region_not_open(self, cyclic5):
        rep = classify_subset(cyclic5, cyclic5.subset([1, 2, 3]), 1)
        assert not rep.is_open
        assert rep.interior.labels() == ("2", "3")
        assert rep.closure.labels() == ("1", "2", "3", "4")

    def test_full_set_trivially_clopen(self, cyclic5):
        rep = classify_subset(cyclic5, Subset.full(cyclic5.universe), 3)
        assert rep.is_closed and rep.is_open
        assert rep.interior.mask == cyclic5.universe.full_mask()

    def test_report_sandwich_invariant(self, cyclic5):
        for mask in range(1 << 5):
            rep = classify_subset(cyclic5, Subset(cyclic5.universe, mask), 1)
            assert rep.interior <= rep.subset <= rep.closure


class TestInterior:
    def test_shift_interior(self, cyclic5):
        assert interior(cyclic5, cyclic5.subset([1, 2, 3]), 1).labels() == ("2", "3")

    def test_empty_interior(self, cyclic5):
        assert len(interior(cyclic5, Subset.empty(cyclic5.universe), 1)) == 0

    def test_invariant_pair_interior(self, shift2_on4):
        assert interior(shift2_on4, shift2_on4.subset([2, 4]), 1).labels() == ("2", "4")


class TestClosedFamily:
    def test_two_cycles_family(self, shift2_on4):
        fam = {s.labels() for s in closed_family(shift2_on4, 1)}
        oracle = {
            tuple(sorted(f, key=int))
            for f in naive_closed_family(shift2_on4.labels, step_map_of(shift2_on4), 1)
        }
        assert fam == oracle
        assert fam == {(), ("1", "3"), ("2", "4"), ("1", "2", "3", "4")}

    def test_single_cycle_has_no_proper_invariant_set(self, cyclic5):
        fam = {s.labels() for s in closed_family(cyclic5, 1)}
        oracle = {
            tuple(sorted(f, key=int))
            for f in naive_closed_family(cyclic5.labels, step_map_of(cyclic5), 1)
        }
        assert fam == oracle
        assert fam == {(), ("1", "2", "3", "4", "5")}

    def test_identity_dynamics_everything_invariant(self, identity3):
        assert len(closed_family(identity3, 4)) == 8

    def test_canonical_ordering(self, shift2_on4):
        fam = closed_family(shift2_on4, 1)
        keys = [(len(s), s.mask) for s in fam]
        assert keys == sorted(keys)

    def test_cap_enforced(self):
        labels = list(range(21))
        sys = build_system(labels, {i: i for i in labels})
        with pytest.raises(StateSpaceTooLarge):
            closed_family(sys, 1)


class TestCheckAxioms:
    def test_two_cycles_is_topology(self, shift2_on4):
        v = check_axioms(shift2_on4, 1)
        assert v.classification is Classification.TOPOLOGY
        assert v.closure_idempotent
        assert v.axioms.all_hold()
        assert v.exhaustive
        assert naive_is_idempotent(shift2_on4.labels, step_map_of(shift2_on4), 1)

    def test_single_cycle_is_pre_topology_only(self, cyclic5):
        v = check_axioms(cyclic5, 1)
        assert v.classification is Classification.PRE_TOPOLOGY_ONLY
        assert not v.closure_idempotent
        # the witness: closing {1} once then again grows the set further
        step = step_map_of(cyclic5)
        once = naive_reach(step, {"1"}, 1)
        twice = naive_reach(step, once, 1)
        assert once == {"1", "2"} and twice == {"1", "2", "3"}
        assert reach(cyclic5, cyclic5.subset([1]), 1).members.labels() == ("1", "2")

    def test_identity_dynamics_is_topology(self, identity3):
        v = check_axioms(identity3, 5)
        assert v.classification is Classification.TOPOLOGY

    def test_cap_without_sampling(self):
        labels = list(range(22))
        sys = build_system(labels, {i: (i + 1) % 22 for i in labels})
        with pytest.raises(StateSpaceTooLarge):
            check_axioms(sys, 1)

    def test_sampled_verdict_for_large_space(self):
        labels = list(range(22))
        sys = build_system(labels, {i: (i + 1) % 22 for i in labels})
        v = check_axioms(sys, 1, sample_limit=64, seed=7)
        assert not v.exhaustive
        assert v.classification is Classification.PRE_TOPOLOGY_ONLY
        # deterministic given the seed
        v2 = check_axioms(sys, 1, sample_limit=64, seed=7)
        assert [s.mask for s in v.closed_family] == [s.mask for s in v2.closed_family]


@settings(max_examples=50, deadline=None)
@given(sys=small_systems(), data=st.data())
def test_duality_open_iff_complement_closed(sys, data):
    horizon = data.draw(st.integers(0, sys.size))
    for mask in range(1 << sys.size):
        rep = classify_subset(sys, Subset(sys.universe, mask), horizon)
        comp = classify_subset(
            sys, Subset(sys.universe, mask).complement(), horizon
        )
        assert rep.is_open == comp.is_closed


@settings(max_examples=50, deadline=None)
@given(sys=small_systems(), data=st.data())
def test_kuratowski_subset_of_axioms(sys, data):
    horizon = data.draw(st.integers(0, sys.size))
    table = reach_table(sys, horizon)
    n = sys.size
    assert table[0] == 0  # closure of the empty set
    for m in range(1 << n):
        assert table[m] | m == table[m]  # extensive
    for a in range(1 << n):
        for b in range(a, 1 << n):
            assert table[a | b] == table[a] | table[b]  # union-preserving


@settings(max_examples=50, deadline=None)
@given(sys=small_systems(), data=st.data())
def test_verdict_matches_bruteforce_idempotency(sys, data):
    horizon = data.draw(st.integers(0, 3))
    v = check_axioms(sys, horizon)
    expected = naive_is_idempotent(sys.labels, step_map_of(sys), horizon)
    assert v.closure_idempotent == expected
    assert (v.classification is Classification.TOPOLOGY) == expected
    assert v.double_closure_is_double_horizon


@settings(max_examples=40, deadline=None)
@given(sys=small_systems(max_states=6), data=st.data())
def test_invariant_family_is_a_lattice(sys, data):
    horizon = data.draw(st.integers(0, 3))
    fam = {s.mask for s in closed_family(sys, horizon)}
    for a in fam:
        for b in fam:
            assert a | b in fam
            assert a & b in fam


@settings(max_examples=30, deadline=None)
@given(sys=small_systems(max_states=6), data=st.data())
def test_interior_bounds_the_largest_open_subset(sys, data):
    # The interior always contains every open subset of the region; without
    # idempotency it may be strictly larger than the largest open subset
    # (and need not be open itself), so equality is only demanded when the
    # verdict is a genuine topology.
    horizon = data.draw(st.integers(0, 3))
    mask = data.draw(st.integers(0, (1 << sys.size) - 1))
    inner = interior(sys, Subset(sys.universe, mask), horizon)
    best = 0
    for cand in range(1 << sys.size):
        if cand & ~mask:
            continue
        if classify_subset(sys, Subset(sys.universe, cand), horizon).is_open:
            best |= cand
    assert best & ~inner.mask == 0
    if check_axioms(sys, horizon).classification is Classification.TOPOLOGY:
        assert inner.mask == best


def test_pre_topology_interior_can_exceed_largest_open(cyclic5):
    # the one-step shift: interior({1,2,3}) = {2,3}, yet the only open sets
    # are the empty set and the whole space
    inner = interior(cyclic5, cyclic5.subset([1, 2, 3]), 1)
    assert inner.labels() == ("2", "3")
    opens = [
        mask
        for mask in range(1 << 5)
        if classify_subset(cyclic5, Subset(cyclic5.universe, mask), 1).is_open
    ]
    assert opens == [0, cyclic5.universe.full_mask()]
    rep = classify_subset(cyclic5, cyclic5.subset([2, 3]), 1)
    assert not rep.is_open
