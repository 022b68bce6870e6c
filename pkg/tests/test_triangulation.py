"""Descriptors, validation, classification, rigidity and approximations."""

from __future__ import annotations

import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from infgon.arcs import arc, arcs_in_window, cross
from infgon.homext import DomainError, hom_basis, Morphism
from infgon.triangulation import (
    FULL,
    GENERICALLY_FREE,
    AmbientError,
    ArcSetDescriptor,
    DoubleFan,
    Fan,
    FountainAt,
    LeftFanRightFountain,
    LeftFountain,
    LocallyFinite,
    NoPrecover,
    Precover,
    RightFanLeftFountain,
    RightFountain,
    Sided,
    TwoSidedZigZag,
    ValidationError,
    canonical,
    classify,
    configuration_to_json,
    contains,
    crossing_witness,
    descriptor_from_json,
    descriptor_to_json,
    double_fan,
    factors_through,
    fountain_at,
    is_almost_rigid,
    is_cluster_tilting,
    is_maximal_almost_rigid,
    is_maximal_rigid,
    is_rigid,
    is_valid,
    materialize,
    preenvelope,
    precover,
    random_triangulation,
    restrict,
    shift_configuration,
    shift_descriptor,
    split_fountain,
    validate,
    zigzag,
)

from .conftest import seeds

W = frozenset
FAMILIES = ["zigzag", "double-fan", "fan-fountain", "fountain-fan", "fountain", "split-fountain", "none"]


def _random(seed: int, family: str | None = None) -> ArcSetDescriptor:
    return random_triangulation(random.Random(seed), family)


def _brute_force_addable(d: ArcSetDescriptor, reach: int = 60) -> list:
    """Window arcs outside d that cross nothing in a wide materialization."""
    present = materialize(d, (d.lo - reach, d.hi + reach))
    return [
        x
        for x in arcs_in_window(d.lo, d.hi, boundary=False)
        if not contains(d, x) and not any(cross(x, y) for y in present)
    ]


class TestDescriptor:
    def test_core_must_lie_in_window(self) -> None:
        with pytest.raises(ValueError):
            ArcSetDescriptor((0, 2), W({arc(0, 5)}), None)

    def test_boundary_arcs_are_implicit(self) -> None:
        with pytest.raises(ValueError):
            ArcSetDescriptor((0, 2), W({arc(0, 1)}), None)
        d = ArcSetDescriptor((0, 2), W(), None)
        assert contains(d, arc(7, 8)) and arc(7, 8) not in d

    def test_zigzag_needs_both_letters(self) -> None:
        with pytest.raises(ValueError):
            TwoSidedZigZag(arc(-1, 1), "LL")


class TestMaterialize:
    def test_double_fan(self) -> None:
        d = ArcSetDescriptor((-1, 1), W({arc(None, -1), arc(None, 0), arc(None, 1)}), Sided(Fan(), Fan()))
        added = set(materialize(d, (-3, 3))) - set(materialize(d, (-1, 1)))
        assert sorted(added) == [arc(None, -3), arc(None, -2), arc(None, 2), arc(None, 3)]

    def test_right_fountain(self) -> None:
        d = ArcSetDescriptor((0, 0), W(), Sided(Fan(), RightFountain(0)))
        assert materialize(d, (0, 3)) == [arc(0, 2), arc(0, 3)]

    def test_zigzag_unfolds_pattern(self) -> None:
        """The base arc belongs to the tail and is listed with its successors."""
        assert materialize(zigzag(), (-3, 3)) == [arc(-3, 2), arc(-3, 3), arc(-2, 1), arc(-2, 2), arc(-1, 1)]

    def test_sorted_with_infinite_first(self) -> None:
        arcs = materialize(fountain_at(0), (-3, 3))
        assert arcs == sorted(arcs)
        assert arcs[0] == arc(None, 0)

    @given(seed=seeds)
    @settings(max_examples=40)
    def test_restrict_is_materialize(self, seed: int) -> None:
        d = _random(seed)
        assert restrict(d, (d.lo - 4, d.hi + 4)) == materialize(d, (d.lo - 4, d.hi + 4))


class TestValidate:
    def test_fountain_example(self, mutable_arcs_2) -> None:
        assert validate(mutable_arcs_2) is None
        assert validate(fountain_at(0)) is None

    def test_crossing_core(self) -> None:
        v = validate(ArcSetDescriptor((-3, 2), W({arc(-3, 0), arc(-1, 2)}), None))
        assert v.kind == "crossing"
        assert set(v.witness) == {arc(-3, 0), arc(-1, 2)}

    def test_missing_wrapping_arc(self) -> None:
        v = validate(fountain_at(0, wrapping=False))
        assert v.kind == "addable"
        assert v.witness == (arc(None, 0),)

    def test_fan_fountain_needs_wrapping_arc(self) -> None:
        d = ArcSetDescriptor((0, 0), W(), Sided(Fan(), RightFountain(0)))
        assert validate(d).witness == (arc(None, 0),)
        assert is_valid(ArcSetDescriptor((0, 0), W({arc(None, 0)}), Sided(Fan(), RightFountain(0))))

    def test_reversed_fountains(self) -> None:
        d = ArcSetDescriptor((0, 2), W(), Sided(LeftFountain(2), RightFountain(0)))
        assert validate(d).kind == "crossing"

    @pytest.mark.parametrize("family", FAMILIES)
    def test_random_are_valid(self, family: str) -> None:
        for seed in range(25):
            assert is_valid(_random(seed, family)), seed

    @given(seed=seeds)
    @settings(max_examples=60, deadline=None)
    def test_agrees_with_brute_force(self, seed: int) -> None:
        """Removing a core arc leaves exactly what exhaustive search finds addable."""
        d = _random(seed)
        assert _brute_force_addable(d) == []
        rng = random.Random(seed)
        removable = sorted(d.core)
        if removable:
            gone = rng.choice(removable)
            thinner = ArcSetDescriptor(d.window, d.core - {gone}, d.tail)
            addable = _brute_force_addable(thinner)
            assert gone in addable
            assert (validate(thinner) is None) == (addable == [])

    @given(seed=seeds)
    @settings(max_examples=60, deadline=None)
    def test_witness_crosses(self, seed: int) -> None:
        d = _random(seed)
        for x in arcs_in_window(d.lo - 2, d.hi + 2, boundary=False):
            w = crossing_witness(d, x)
            if w is not None:
                assert cross(x, w) and contains(d, w)

    @given(seed=seeds)
    @settings(max_examples=40, deadline=None)
    def test_greedy_completion(self, seed: int) -> None:
        """Adding addable window arcs in any order ends at a triangulation."""
        rng = random.Random(seed)
        d = _random(seed)
        core = set()
        start = ArcSetDescriptor(d.window, W(), d.tail)
        assert is_almost_rigid(start)
        while True:
            cur = ArcSetDescriptor(d.window, W(core), d.tail)
            options = [
                x
                for x in arcs_in_window(d.lo, d.hi, boundary=False)
                if not contains(cur, x) and crossing_witness(cur, x) is None
            ]
            if not options:
                break
            core.add(rng.choice(options))
        assert is_maximal_almost_rigid(cur)
        assert _brute_force_addable(cur) == []


class TestClassify:
    def test_examples(self) -> None:
        assert classify(zigzag()) == LocallyFinite()
        assert classify(fountain_at(0)) == FountainAt(0)
        assert classify(double_fan()) == DoubleFan()

    def test_split_and_one_sided(self, mutable_arcs_1) -> None:
        assert classify(mutable_arcs_1) == FountainAt(-1, 1)
        right = ArcSetDescriptor((0, 0), W({arc(None, 0)}), Sided(Fan(), RightFountain(0)))
        assert classify(right) == LeftFanRightFountain(0)
        left = ArcSetDescriptor((0, 0), W({arc(None, 0)}), Sided(LeftFountain(0), Fan()))
        assert classify(left) == RightFanLeftFountain(0)

    def test_finite_window_has_no_configuration(self) -> None:
        with pytest.raises(ValidationError):
            classify(_random(0, "none"))

    def test_invalid_rejected(self) -> None:
        with pytest.raises(ValidationError) as info:
            classify(fountain_at(0, wrapping=False))
        assert info.value.code == "invalid-triangulation"

    def test_shift_example(self) -> None:
        assert classify(shift_descriptor(fountain_at(0), 1)) == FountainAt(-1)

    @given(seed=seeds, s=st.integers(-9, 9))
    @settings(max_examples=60, deadline=None)
    def test_shift_equivariant(self, seed: int, s: int) -> None:
        d = _random(seed, random.Random(seed).choice(FAMILIES[:-1]))
        moved = shift_descriptor(d, s)
        assert is_valid(moved)
        assert classify(moved) == shift_configuration(classify(d), s)

    def test_json_tags(self) -> None:
        assert configuration_to_json(FountainAt(2)) == {"configuration": "fountain", "left": 2, "right": 2}


class TestRigidity:
    def test_fountain_single_wrapping_arc(self) -> None:
        assert is_rigid(fountain_at(0))
        assert is_maximal_rigid(fountain_at(0)) == (True, 3)

    def test_double_fan(self) -> None:
        d = double_fan()
        assert not is_rigid(d)
        assert is_almost_rigid(d) and is_maximal_almost_rigid(d)

    def test_empty_is_rigid(self) -> None:
        assert is_rigid(ArcSetDescriptor((0, 0), W(), None))

    def test_crossing_pair_not_almost_rigid(self) -> None:
        assert not is_almost_rigid(ArcSetDescriptor((-3, 2), W({arc(-3, 0), arc(-1, 2)}), None))

    def test_maximal_rigid_not_maximal_almost_rigid(self) -> None:
        """A split fountain with one of its two wrapping arcs."""
        d = split_fountain(-1, 1, infinite=(-1,))
        assert is_almost_rigid(d) and not is_maximal_almost_rigid(d)
        assert is_maximal_rigid(d) == (True, 2)
        assert not is_cluster_tilting(d, FULL)

    def test_zigzag(self) -> None:
        z = zigzag()
        assert is_maximal_rigid(z) == (True, 1)
        assert is_cluster_tilting(z, GENERICALLY_FREE)
        assert not is_cluster_tilting(z, FULL)

    def test_fountain_in_both_ambients(self) -> None:
        assert is_cluster_tilting(fountain_at(0), FULL)
        assert is_cluster_tilting(fountain_at(0, wrapping=False), GENERICALLY_FREE)

    def test_split_fountain_in_generically_free(self) -> None:
        assert not is_cluster_tilting(split_fountain(-1, 1), GENERICALLY_FREE)

    def test_generically_free_rejects_infinite_arcs(self) -> None:
        with pytest.raises(AmbientError) as info:
            is_cluster_tilting(fountain_at(0), GENERICALLY_FREE)
        assert info.value.code == "ambient-mismatch"

    @given(seed=seeds)
    @settings(max_examples=80, deadline=None)
    def test_hierarchy(self, seed: int) -> None:
        """cluster tilting => maximal rigid => rigid => almost rigid."""
        d = _random(seed)
        for cand in (d, ArcSetDescriptor(d.window, W(x for x in d.core if x.is_finite), d.tail)):
            if is_cluster_tilting(cand, FULL):
                assert is_maximal_rigid(cand)[0]
            if is_maximal_rigid(cand)[0]:
                assert is_rigid(cand)
            if is_rigid(cand):
                assert is_almost_rigid(cand)

    @given(seed=seeds)
    @settings(max_examples=60, deadline=None)
    def test_mar_iff_valid(self, seed: int) -> None:
        d = _random(seed)
        assert is_maximal_almost_rigid(d) == is_valid(d)


class TestApproximations:
    def test_fountain_precover(self) -> None:
        p = precover(fountain_at(0), arc(None, 3))
        assert isinstance(p, Precover)
        assert arc(None, 0) in p.arcs
        assert set(p.arcs) == {arc(None, 0), arc(3, 4)}

    def test_fountain_preenvelope(self) -> None:
        p = preenvelope(fountain_at(0), arc(None, 3))
        assert isinstance(p, Precover)
        assert set(p.arcs) == {arc(0, 3), arc(2, 3)}

    def test_zigzag_has_no_precover(self) -> None:
        p = precover(zigzag(), arc(None, 0))
        assert isinstance(p, NoPrecover)
        assert p.witness
        # nested arcs around the endpoint 0, all in the triangulation
        assert all(x.a < 0 < x.b and contains(zigzag(), x) for x in p.witness)

    def test_zigzag_finite_target(self) -> None:
        assert isinstance(precover(zigzag(), arc(-3, 4)), Precover)

    def test_split_fountain_has_no_precover(self) -> None:
        p = precover(split_fountain(-1, 1, infinite=(-1,)), arc(None, 3))
        assert isinstance(p, NoPrecover)
        assert all(x.a == 1 for x in p.witness)

    def test_boundary_target(self) -> None:
        p = precover(fountain_at(0), arc(0, 1))
        assert p.arcs == (arc(0, 1),)

    def test_requires_maximal_rigid(self) -> None:
        with pytest.raises(DomainError):
            precover(double_fan(), arc(None, 0))

    def test_maps_factor(self) -> None:
        """Every basis map from a nearby fountain arc factors through the precover."""
        d = fountain_at(0)
        target = arc(None, 3)
        p = precover(d, target)
        for x in restrict(d, (-6, 6)):
            for b in hom_basis(x, target):
                assert factors_through(Morphism.basis(b), p.arcs, "in")


class TestCanonicalAndJson:
    @given(seed=seeds)
    @settings(max_examples=60, deadline=None)
    def test_canonical(self, seed: int) -> None:
        d = _random(seed)
        c = canonical(d)
        assert canonical(c) == c
        assert is_valid(c)
        region = (min(d.lo, c.lo) - 5, max(d.hi, c.hi) + 5)
        assert materialize(c, region) == materialize(d, region)

    @given(seed=seeds)
    @settings(max_examples=60, deadline=None)
    def test_json_round_trip(self, seed: int) -> None:
        d = _random(seed)
        text = json.dumps(descriptor_to_json(d), sort_keys=True)
        assert descriptor_from_json(json.loads(text)) == d
        assert json.dumps(descriptor_to_json(descriptor_from_json(json.loads(text))), sort_keys=True) == text

    def test_json_shape(self) -> None:
        assert descriptor_to_json(fountain_at(0)) == {
            "window": [0, 0],
            "core": [["-inf", 0]],
            "tail": {"kind": "sided", "left": {"kind": "fountain", "at": 0}, "right": {"kind": "fountain", "at": 0}},
        }

    @pytest.mark.parametrize(
        "bad",
        [
            {"window": [0], "core": [], "tail": {"kind": "none"}},
            {"window": [0, 2], "core": [[0, 9]], "tail": {"kind": "none"}},
            {"window": [0, 2], "core": [], "tail": {"kind": "spiral"}},
            [],
        ],
    )
    def test_json_rejects(self, bad) -> None:
        with pytest.raises(ValueError):
            descriptor_from_json(bad)
