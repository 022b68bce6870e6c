"""Mutation of triangulations: flips, approximations and flip schedules.

Two independent routes meet here. :func:`flip` is pure geometry (find the two
triangles on either side of an arc and swap the diagonal of the
quadrilateral). :func:`approximations` works with morphisms only: it computes
minimal left and right approximations of an arc by the rest of the triangulation
and reads the exchanged arc off the cokernel or kernel.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import networkx as nx

from infgon.arcs import Arc, arc, cross
from infgon.homext import DomainError, ExchangeSequence, exchange_sequences
from infgon.triangulation import (
    ArcSetDescriptor,
    Point,
    Sided,
    TwoSidedZigZag,
    LeftFountain,
    RightFountain,
    _approx_regions,
    _edge,
    _region_arcs,
    injective_hull,
    projective_cover,
    advance,
    canonical,
    contains,
    expand,
    minimal_factoring_set,
    restrict,
    unfactored,
)


_NO_APEX = "no-apex"  # distinct from None, which is the point -inf


class MutabilityError(DomainError):
    code = "non-mutable"


class MembershipError(DomainError):
    code = "unknown-arc"


class BudgetError(DomainError):
    code = "budget-exceeded"


def _check_member(d: ArcSetDescriptor, g: Arc) -> None:
    if g.is_boundary:
        raise DomainError("boundary arcs are projective-injective and never mutated", g)
    if g not in d:
        raise MembershipError(f"{g!r} is not an arc of the triangulation", g)


def fountain_at_endpoint(d: ArcSetDescriptor, g: Arc) -> bool:
    t = d.tail
    if not g.is_infinite or not isinstance(t, Sided):
        return False
    return t.left == LeftFountain(g.b) or t.right == RightFountain(g.b)


def is_mutable(d: ArcSetDescriptor, g: Arc) -> bool:
    """An arc is mutable unless it is infinite and ends at a fountain.

    In a finite window (no tail) the two outer infinite arcs bound the
    polygon and have a triangle on one side only.
    """
    _check_member(d, g)
    if fountain_at_endpoint(d, g):
        return False
    if d.tail is None and g in (arc(None, d.lo), arc(None, d.hi)):
        return False
    return True


def prepare(d: ArcSetDescriptor, g: Arc) -> ArcSetDescriptor:
    """Unroll the tail until ``g`` and both of its triangles lie in the core window."""
    _check_member(d, g)
    t = d.tail
    if isinstance(t, TwoSidedZigZag):
        i = t.index_of(g)
        return d if i is None else advance(d, i + 1)
    if isinstance(t, Sided):
        left = g.b if g.is_infinite else g.a
        return expand(d, left - 1, g.b + 1)
    return d


def _present(d: ArcSetDescriptor, u: Point, v: Point) -> bool:
    return contains(d, _edge(u, v))


def _apexes(d: ArcSetDescriptor, g: Arc) -> tuple[Point | None, Point | None]:
    lo, hi = d.lo, d.hi
    if g.is_infinite:
        v = g.b
        left = [w for w in range(lo, v) if _present(d, None, w) and _present(d, w, v)]
        right = [w for w in range(v + 1, hi + 1) if _present(d, None, w) and _present(d, w, v)]
        pick_left = max(left) if left else _NO_APEX
        pick_right = min(right) if right else _NO_APEX
        return pick_left, pick_right
    u, v = g.a, g.b
    inner = [w for w in range(u + 1, v) if _present(d, u, w) and _present(d, w, v)]
    outer: list[Point] = [None] + list(range(lo, u)) + list(range(v + 1, hi + 1))
    outer = [w for w in outer if _present(d, u, w) and _present(d, w, v)]
    return (inner[0] if inner else _NO_APEX), (outer[0] if outer else _NO_APEX)


def quadrilateral(d: ArcSetDescriptor, g: Arc) -> tuple[Point, Point, Point, Point] | None:
    """Vertices of the two triangles on ``g``, sorted with -inf first, or None."""
    p = prepare(d, g)
    one, two = _apexes(p, g)
    if one == _NO_APEX or two == _NO_APEX:
        return None
    ends: list[Point] = [None if g.is_infinite else g.a, g.b, one, two]
    return tuple(sorted(ends, key=lambda v: (v is not None, v or 0)))  # type: ignore[return-value]


@dataclass(frozen=True)
class MutationResult:
    before: ArcSetDescriptor
    after: ArcSetDescriptor
    removed: Arc
    added: Arc
    exchange: tuple[ExchangeSequence, ExchangeSequence]


def _flip_core(d: ArcSetDescriptor, g: Arc) -> tuple[ArcSetDescriptor, Arc]:
    if not is_mutable(d, g):
        raise MutabilityError(f"{g!r} ends at a fountain and has a triangle on one side only", g)
    p = prepare(d, g)
    one, two = _apexes(p, g)
    if one == _NO_APEX or two == _NO_APEX:  # pragma: no cover - excluded by is_mutable
        raise MutabilityError(f"{g!r} does not bound two triangles", g)
    new = _edge(one, two)
    return canonical(ArcSetDescriptor(p.window, (p.core - {g}) | {new}, p.tail)), new


def flip(d: ArcSetDescriptor, g: Arc) -> MutationResult:
    """Replace ``g`` by the other diagonal of its quadrilateral."""
    after, new = _flip_core(d, g)
    fwd = exchange_sequences(g, new)
    back = exchange_sequences(new, g)
    return MutationResult(d, after, g, new, (fwd[0], back[0]))


# -- approximations -------------------------------------------------------------

def _profile(x: Arc, n: int) -> int:
    if n > x.b:
        return 0
    if x.is_infinite or n > x.a:
        return 1
    return 2


def arc_from_profile(dims: dict[int, int]) -> Arc:
    """The arc whose graded piece dimensions are ``dims`` (sampled on a range)."""
    degrees = sorted(dims)
    ones = [n for n in degrees if dims[n] >= 1]
    if not ones:
        raise ValueError("zero profile")
    b = max(ones)
    twos = [n for n in degrees if dims[n] == 2]
    x = arc(max(twos) if twos else None, b)
    if any(dims[n] != _profile(x, n) for n in degrees):
        raise ValueError(f"profile {dims} is not the profile of an indecomposable arc")
    return x


@dataclass(frozen=True)
class Found:
    sequence: ExchangeSequence

    @property
    def approximation(self) -> tuple[Arc, ...]:
        return self.sequence.middle


@dataclass(frozen=True)
class Absent:
    witness: tuple[Arc, ...]
    reason: str


@dataclass(frozen=True)
class Approximations:
    left: Union[Found, Absent]
    right: Union[Found, Absent]


def _side(d: ArcSetDescriptor, g: Arc, direction: str) -> Union[Found, Absent]:
    if d.tail is None:
        if not is_mutable(d, g):
            return Absent((), "window edge")
        regions = [d.window, d.window]
    else:
        regions = list(_approx_regions(d, g))
    # maps to or from boundary arcs factor through the injective hull or projective cover
    boundary = injective_hull(g) if direction == "out" else projective_cover(g)
    sets, avails = [], []
    for region in regions:
        avail = [x for x in _region_arcs(d, region) if x != g] + boundary
        avails.append(avail)
        sets.append(minimal_factoring_set(g, avail, direction))
    small, large = sets
    if small != large:
        witness = unfactored(g, avails[1], small, direction)
        return Absent(tuple(witness), "required summands keep growing with the region")
    ends = [g.b] + ([] if g.is_infinite else [g.a]) + [e for s in small for e in ([s.b] if s.is_infinite else [s.a, s.b])]
    degrees = range(min(ends) - 2, max(ends) + 3)
    dims = {n: sum(_profile(s, n) for s in small) - _profile(g, n) for n in degrees}
    z = arc_from_profile(dims)
    seqs = exchange_sequences(g, z) if direction == "out" else exchange_sequences(z, g)
    if not seqs or sorted(seqs[0].middle) != sorted(small):
        raise RuntimeError(f"approximation of {g!r} by {small} is not an exchange sequence")
    return Found(seqs[0])


def approximations(d: ArcSetDescriptor, g: Arc) -> Approximations:
    """Minimal left and right approximations of ``g`` by the rest of ``d``."""
    _check_member(d, g)
    p = prepare(d, g)
    return Approximations(_side(p, g, "out"), _side(p, g, "in"))


LEFT, RIGHT = "left", "right"


def mutate_subcategory(d: ArcSetDescriptor, g: Arc, direction: str = LEFT) -> MutationResult:
    """Exchange ``g`` through its approximations: ``left`` uses the cokernel of
    the left approximation, ``right`` the kernel of the right one."""
    if direction not in (LEFT, RIGHT):
        raise ValueError(f"direction must be {LEFT!r} or {RIGHT!r}")
    approx = approximations(d, g)
    for side in (approx.left, approx.right):
        if isinstance(side, Absent):
            raise MutabilityError(f"{g!r} lacks an approximation: {side.reason}", side.witness)
    left, right = approx.left.sequence, approx.right.sequence  # type: ignore[union-attr]
    z = left.right if direction == LEFT else right.left
    p = prepare(d, g)
    after = canonical(ArcSetDescriptor(p.window, (p.core - {g}) | {z}, p.tail))
    return MutationResult(d, after, g, z, (left, right))


# -- schedules ---------------------------------------------------------------------

@dataclass(frozen=True)
class NearestInfinite:
    """Pick the mutable infinite arc closest to ``anchor`` (ties go right), never the anchor itself."""

    anchor: int = 0


Selector = Union[Arc, NearestInfinite]


@dataclass(frozen=True)
class Schedule:
    selectors: tuple[Selector, ...]
    repeat: int = 1


@dataclass(frozen=True)
class Halt:
    step: int
    arc: Arc | None
    reason: str


@dataclass(frozen=True)
class ScheduleReport:
    trajectory: tuple[ArcSetDescriptor, ...]
    flipped: tuple[Arc, ...]
    restrictions: tuple[tuple[Arc, ...], ...]
    stabilized_at: int | None
    halted: Halt | None


def _resolve(d: ArcSetDescriptor, sel: Selector) -> Arc | None:
    if isinstance(sel, Arc):
        return sel
    reach = d.hi - d.lo + abs(sel.anchor - d.lo) + abs(sel.anchor - d.hi) + 3
    for k in range(1, reach + 1):
        for n in (sel.anchor + k, sel.anchor - k):
            g = arc(None, n)
            if g in d and is_mutable(d, g):
                return g
    return None


def apply_schedule(
    d: ArcSetDescriptor,
    schedule: Schedule,
    region: tuple[int, int],
    budget: int = 1000,
    patience: int = 2,
) -> ScheduleReport:
    """Run the flips and watch the restriction to ``region``.

    ``stabilized_at`` is the last step that changed the restriction, provided
    at least ``patience`` further steps left it alone.
    """
    steps = [s for _ in range(schedule.repeat) for s in schedule.selectors]
    trajectory = [d]
    flipped: list[Arc] = []
    halted = None
    for i, sel in enumerate(steps):
        if i >= budget:
            halted = Halt(i, None, "budget exhausted")
            break
        g = _resolve(trajectory[-1], sel)
        if g is None:
            halted = Halt(i, None, "no mutable infinite arc")
            break
        try:
            result = flip(trajectory[-1], g)
        except DomainError as err:
            halted = Halt(i, g, str(err))
            break
        trajectory.append(result.after)
        flipped.append(g)
    restrictions = [tuple(restrict(t, region)) for t in trajectory]
    last = 0
    for i in range(1, len(restrictions)):
        if restrictions[i] != restrictions[i - 1]:
            last = i
    stable = last if len(restrictions) - 1 - last >= patience else None
    return ScheduleReport(tuple(trajectory), tuple(flipped), tuple(restrictions), stable, halted)


# -- exchange graphs of polygons ---------------------------------------------------------

MAX_POLYGON = 12


def polygon_descriptor(m: int, core: frozenset[Arc] | None = None) -> ArcSetDescriptor:
    """The m-gon with vertices -inf, 0, ..., m-2; defaults to the fan at -inf."""
    hi = m - 2
    if core is None:
        core = frozenset(arc(None, n) for n in range(0, hi + 1))
    return ArcSetDescriptor((0, hi), core, None)


def polygon_diagonals(m: int) -> list[Arc]:
    hi = m - 2
    inner = [arc(None, n) for n in range(1, hi)]
    return inner + [arc(a, b) for a in range(0, hi + 1) for b in range(a + 2, hi + 1)]


def enumerate_polygon_triangulations(m: int) -> list[frozenset[Arc]]:
    """Every maximal non-crossing set of diagonals, by exhaustive search.

    Branches that can no longer reach m - 3 diagonals are cut; every leaf is
    still checked for maximality directly.
    """
    diags = polygon_diagonals(m)
    size = m - 3
    out: list[frozenset[Arc]] = []

    def extend(i: int, chosen: list[Arc]) -> None:
        if len(chosen) + len(diags) - i < size:
            return
        if i == len(diags):
            if all(x in chosen or any(cross(x, y) for y in chosen) for x in diags):
                out.append(frozenset(chosen))
            return
        x = diags[i]
        if not any(cross(x, y) for y in chosen):
            chosen.append(x)
            extend(i + 1, chosen)
            chosen.pop()
        extend(i + 1, chosen)

    extend(0, [])
    return out


@dataclass(frozen=True)
class ExchangeGraph:
    polygon: int
    vertices: int
    edges: int
    connected: bool
    graph: nx.Graph

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExchangeGraph):
            return NotImplemented
        return (self.polygon, self.vertices, self.edges, self.connected) == (
            other.polygon,
            other.vertices,
            other.edges,
            other.connected,
        )

    __hash__ = None  # type: ignore[assignment]


def exchange_graph(m: int) -> ExchangeGraph:
    """Flip graph on all triangulations of the m-gon with fixed outer arcs."""
    if m < 3:
        raise DomainError("a polygon needs at least 3 vertices", m)
    if m > MAX_POLYGON:
        raise BudgetError(f"polygon size {m} exceeds the limit {MAX_POLYGON}", m)
    outer = frozenset({arc(None, 0), arc(None, m - 2)})
    g = nx.Graph()
    for tri in enumerate_polygon_triangulations(m):
        d = polygon_descriptor(m, tri | outer)
        g.add_node(d.core)
        for x in sorted(tri):
            g.add_edge(d.core, _flip_core(d, x)[0].core)
    return ExchangeGraph(m, g.number_of_nodes(), g.number_of_edges(), nx.is_connected(g), g)


def flip_sequence(d: ArcSetDescriptor, arcs: Sequence[Arc]) -> list[MutationResult]:
    out = []
    for g in arcs:
        r = flip(d, g)
        out.append(r)
        d = r.after
    return out


__all__ = [
    "Absent",
    "Approximations",
    "BudgetError",
    "ExchangeGraph",
    "Found",
    "Halt",
    "MembershipError",
    "MutabilityError",
    "MutationResult",
    "NearestInfinite",
    "Schedule",
    "ScheduleReport",
    "apply_schedule",
    "approximations",
    "arc_from_profile",
    "enumerate_polygon_triangulations",
    "exchange_graph",
    "flip",
    "flip_sequence",
    "is_mutable",
    "mutate_subcategory",
    "polygon_descriptor",
    "prepare",
    "quadrilateral",
]
