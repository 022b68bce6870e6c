"""Shared hypothesis strategies and fixtures."""

from __future__ import annotations

import random

import pytest
from hypothesis import strategies as st

from infgon.arcs import Arc, arc
from infgon.triangulation import ArcSetDescriptor, LeftFountain, RightFountain, Sided

ENDPOINT = st.integers(min_value=-8, max_value=8)


@st.composite
def arcs(draw: st.DrawFn, lo: int = -8, hi: int = 8, infinite: bool = True) -> Arc:
    b = draw(st.integers(min_value=lo + 1, max_value=hi))
    if infinite and draw(st.booleans()):
        return arc(None, b)
    a = draw(st.integers(min_value=lo, max_value=b - 1))
    return arc(a, b)


finite_arcs = arcs(infinite=False)
infinite_arcs = st.integers(min_value=-8, max_value=8).map(lambda b: arc(None, b))
any_arcs = arcs()
shifts = st.integers(min_value=-20, max_value=20)
seeds = st.integers(min_value=0, max_value=2**32 - 1)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240601)


@pytest.fixture
def mutable_arcs_1() -> ArcSetDescriptor:
    """Fountains to the left of -1 and right of 1 joined by three infinite arcs."""
    return ArcSetDescriptor(
        (-1, 1),
        frozenset({arc(None, -1), arc(None, 0), arc(None, 1)}),
        Sided(LeftFountain(-1), RightFountain(1)),
    )


@pytest.fixture
def mutable_arcs_2() -> ArcSetDescriptor:
    """Two-sided fountain at 0 with its single wrapping arc."""
    return ArcSetDescriptor((0, 0), frozenset({arc(None, 0)}), Sided(LeftFountain(0), RightFountain(0)))
