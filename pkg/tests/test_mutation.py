"""Flips, categorical mutation, schedules and polygon exchange graphs."""

from __future__ import annotations

import random
from math import comb

import pytest
from hypothesis import given, settings

from infgon.arcs import arc
from infgon.homext import DomainError
from infgon.oracle import verify_exact
from infgon.triangulation import (
    ArcSetDescriptor,
    canonical,
    double_fan,
    fountain_at,
    is_valid,
    random_triangulation,
    restrict,
)
from infgon.mutation import (
    LEFT,
    RIGHT,
    Absent,
    BudgetError,
    Found,
    MembershipError,
    MutabilityError,
    NearestInfinite,
    Schedule,
    apply_schedule,
    approximations,
    arc_from_profile,
    exchange_graph,
    flip,
    flip_sequence,
    is_mutable,
    mutate_subcategory,
    polygon_descriptor,
    quadrilateral,
)

from .conftest import seeds


def catalan(n: int) -> int:
    return comb(2 * n, n) // (n + 1)


def _members(d: ArcSetDescriptor) -> list:
    return [x for x in restrict(d, (d.lo - 2, d.hi + 2)) if not x.is_boundary and x in d]


class TestMutableArcs:
    def test_first_triangulation(self, mutable_arcs_1) -> None:
        g = arc(None, 0)
        assert is_mutable(mutable_arcs_1, g)
        assert quadrilateral(mutable_arcs_1, g) == (None, -1, 0, 1)
        r = flip(mutable_arcs_1, g)
        assert r.removed == g and r.added == arc(-1, 1)
        assert quadrilateral(r.after, arc(-1, 1)) == (None, -1, 0, 1)

    def test_second_triangulation(self, mutable_arcs_2) -> None:
        assert not is_mutable(mutable_arcs_2, arc(None, 0))
        with pytest.raises(MutabilityError) as info:
            flip(mutable_arcs_2, arc(None, 0))
        assert info.value.code == "non-mutable"

    def test_wrapping_arcs_of_split_fountain(self, mutable_arcs_1) -> None:
        assert not is_mutable(mutable_arcs_1, arc(None, -1))
        assert not is_mutable(mutable_arcs_1, arc(None, 1))

    def test_finite_quadrilateral(self) -> None:
        d = polygon_descriptor(5, frozenset({arc(None, 0), arc(None, 3), arc(0, 2), arc(0, 3)}))
        assert quadrilateral(d, arc(0, 2)) == (0, 1, 2, 3)
        r = flip(d, arc(0, 2))
        assert r.added == arc(1, 3)
        fwd, back = r.exchange
        assert fwd.middle == (arc(1, 2), arc(0, 3))
        assert verify_exact(fwd, 3) and verify_exact(back, 3)

    def test_polygon_outer_arcs_fixed(self) -> None:
        d = polygon_descriptor(5)
        assert not is_mutable(d, arc(None, 0)) and not is_mutable(d, arc(None, 3))
        assert quadrilateral(d, arc(None, 1)) == (None, 0, 1, 2)

    def test_unknown_and_boundary_arcs(self, mutable_arcs_1) -> None:
        with pytest.raises(MembershipError) as info:
            flip(mutable_arcs_1, arc(-5, 7))
        assert info.value.code == "unknown-arc"
        with pytest.raises(DomainError):
            flip(mutable_arcs_1, arc(0, 1))

    @given(seed=seeds)
    @settings(max_examples=80, deadline=None)
    def test_finite_arcs_always_mutable(self, seed: int) -> None:
        d = random_triangulation(random.Random(seed))
        for g in _members(d):
            if g.is_finite and d.tail is not None:
                assert is_mutable(d, g)


class TestFlip:
    @given(seed=seeds)
    @settings(max_examples=100, deadline=None)
    def test_involution_and_validity(self, seed: int) -> None:
        rng = random.Random(seed)
        d = random_triangulation(rng)
        mutable = [g for g in _members(d) if is_mutable(d, g)]
        if not mutable:
            return
        g = rng.choice(mutable)
        r = flip(d, g)
        assert is_valid(r.after)
        assert r.added not in (g,) and r.added in r.after and g not in r.after
        back = flip(r.after, r.added)
        assert back.added == g
        assert back.after == canonical(d)

    @given(seed=seeds)
    @settings(max_examples=60, deadline=None)
    def test_mutability_is_quadrilateral(self, seed: int) -> None:
        d = random_triangulation(random.Random(seed))
        for g in _members(d):
            assert is_mutable(d, g) == (quadrilateral(d, g) is not None)

    @given(seed=seeds)
    @settings(max_examples=60, deadline=None)
    def test_exchange_sequences_connect(self, seed: int) -> None:
        rng = random.Random(seed)
        d = random_triangulation(rng)
        mutable = [g for g in _members(d) if is_mutable(d, g)]
        if mutable:
            r = flip(d, rng.choice(mutable))
            fwd, back = r.exchange
            assert (fwd.left, fwd.right) == (r.removed, r.added)
            assert (back.left, back.right) == (r.added, r.removed)

    def test_flip_sequence(self, mutable_arcs_1) -> None:
        rs = flip_sequence(mutable_arcs_1, [arc(None, 0), arc(-1, 1)])
        assert rs[-1].after == canonical(mutable_arcs_1)


class TestApproximations:
    def test_why_both_sides(self, mutable_arcs_1) -> None:
        a = approximations(mutable_arcs_1, arc(None, -1))
        assert isinstance(a.left, Absent) and a.left.witness
        assert isinstance(a.right, Found)
        # 0 -> (-inf,0) -> (-1,0) -> (-inf,-1) -> 0 with (-1,0) projective
        seq = a.right.sequence
        assert (seq.left, seq.middle, seq.right) == (arc(None, 0), (arc(-1, 0),), arc(None, -1))
        # naive right mutation would bring back (-inf,0), which is already present
        naive = ArcSetDescriptor(mutable_arcs_1.window, mutable_arcs_1.core - {arc(None, -1)} | {seq.left}, mutable_arcs_1.tail)
        assert not is_valid(naive)
        for direction in (LEFT, RIGHT):
            with pytest.raises(MutabilityError):
                mutate_subcategory(mutable_arcs_1, arc(None, -1), direction)

    def test_two_sided_fountain(self, mutable_arcs_2) -> None:
        a = approximations(mutable_arcs_2, arc(None, 0))
        assert isinstance(a.left, Absent) and isinstance(a.right, Absent)

    def test_mutable_arc_both_found(self, mutable_arcs_1) -> None:
        a = approximations(mutable_arcs_1, arc(None, 0))
        assert isinstance(a.left, Found) and isinstance(a.right, Found)
        for direction in (LEFT, RIGHT):
            assert mutate_subcategory(mutable_arcs_1, arc(None, 0), direction).added == arc(-1, 1)

    def test_boundary_rejected(self, mutable_arcs_1) -> None:
        with pytest.raises(DomainError):
            mutate_subcategory(mutable_arcs_1, arc(3, 4))

    def test_bad_direction(self, mutable_arcs_1) -> None:
        with pytest.raises(ValueError):
            mutate_subcategory(mutable_arcs_1, arc(None, 0), "up")

    def test_profile_reader(self) -> None:
        assert arc_from_profile({-3: 2, -2: 1, -1: 1, 0: 1, 1: 0}) == arc(-3, 0)
        assert arc_from_profile({-3: 1, 0: 1, 1: 0}) == arc(None, 0)
        with pytest.raises(ValueError):
            arc_from_profile({0: 0})

    @pytest.mark.parametrize("seed", range(12))
    def test_both_mutations_equal_flip(self, seed: int) -> None:
        """Left and right mutation agree with the flip, and exist exactly for mutable arcs."""
        rng = random.Random(1000 + seed)
        d = random_triangulation(rng, rng.choice(["fountain", "split-fountain", "fan-fountain", "zigzag", "double-fan"]))
        g = rng.choice(_members(d))
        a = approximations(d, g)
        both = isinstance(a.left, Found) and isinstance(a.right, Found)
        assert both == is_mutable(d, g)
        if both:
            added = flip(d, g).added
            assert mutate_subcategory(d, g, LEFT).added == added
            assert mutate_subcategory(d, g, RIGHT).added == added


class TestSchedules:
    def test_empty_schedule(self) -> None:
        rep = apply_schedule(double_fan(), Schedule(()), (-3, 3))
        assert rep.trajectory == (double_fan(),)
        assert rep.flipped == () and rep.halted is None

    def test_halts_on_wrapping_arc(self, mutable_arcs_2) -> None:
        rep = apply_schedule(mutable_arcs_2, Schedule((arc(None, 0),)), (-3, 3))
        assert rep.halted is not None
        assert rep.halted.arc == arc(None, 0) and rep.halted.step == 0

    def test_budget(self) -> None:
        rep = apply_schedule(double_fan(), Schedule((NearestInfinite(0),), repeat=10), (-3, 3), budget=3)
        assert rep.halted.reason == "budget exhausted" and len(rep.flipped) == 3

    def test_double_fan_reaches_fountain(self) -> None:
        rep = apply_schedule(double_fan(), Schedule((NearestInfinite(0),), repeat=9), (-3, 3))
        assert rep.stabilized_at == 6
        assert rep.restrictions[-1] == tuple(restrict(fountain_at(0), (-3, 3)))

    def test_stabilization_monotone(self) -> None:
        # Frozen from runs of the schedule: 2N flips settle [-N, N].
        steps = []
        for n in range(2, 6):
            rep = apply_schedule(double_fan(), Schedule((NearestInfinite(0),), repeat=2 * n + 3), (-n, n))
            steps.append(rep.stabilized_at)
        assert steps == [4, 6, 8, 10]


class TestExchangeGraph:
    @pytest.mark.parametrize("m", range(3, 9))
    def test_catalan_and_connected(self, m: int) -> None:
        g = exchange_graph(m)
        assert g.vertices == catalan(m - 2)
        assert g.connected
        # each triangulation has m - 3 diagonals, each flippable once
        assert g.edges == g.vertices * (m - 3) // 2

    def test_pentagon_cycle(self) -> None:
        g = exchange_graph(5)
        assert (g.vertices, g.edges) == (5, 5)
        assert all(deg == 2 for _, deg in g.graph.degree())

    def test_limits(self) -> None:
        with pytest.raises(BudgetError) as info:
            exchange_graph(13)
        assert info.value.code == "budget-exceeded"
        with pytest.raises(DomainError):
            exchange_graph(2)

    def test_deterministic(self) -> None:
        assert exchange_graph(7) == exchange_graph(7)
