"""Finitely described infinite arc sets and triangulations of the completed infinity-gon.

A descriptor is a window ``[lo, hi]``, a finite core of arcs inside it, and an
eventually canonical tail that says what happens outside:

* ``Sided(left, right)``: each side is a fan of infinite arcs ``(-inf, n)``
  beyond the window, or a fountain of finite arcs at a vertex in the window.
* ``TwoSidedZigZag(base, pattern)``: nested arcs grown one vertex at a time,
  left or right, following the repeated pattern. The base belongs to the tail.

Boundary arcs ``(n, n+1)`` are implicit everywhere.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field, replace
from functools import lru_cache
from fractions import Fraction
from typing import Iterable, Iterator, Union

from infgon import linalg
from infgon.arcs import Arc, arc, arc_from_json, arc_to_json, arcs_in_window, cross
from infgon.homext import DomainError, Morphism, admissible_kinds, compose, hom_basis, hom_dim, identity


class ValidationError(DomainError):
    code = "invalid-triangulation"


class AmbientError(DomainError):
    code = "ambient-mismatch"


# -- tails -------------------------------------------------------------------

@dataclass(frozen=True)
class Fan:
    def __repr__(self) -> str:
        return "Fan"


@dataclass(frozen=True)
class LeftFountain:
    a: int


@dataclass(frozen=True)
class RightFountain:
    b: int


@dataclass(frozen=True)
class Sided:
    left: Union[Fan, LeftFountain]
    right: Union[Fan, RightFountain]


@dataclass(frozen=True)
class TwoSidedZigZag:
    base: Arc
    pattern: str

    def __post_init__(self) -> None:
        if not self.pattern or set(self.pattern) - {"L", "R"}:
            raise ValueError("zig-zag pattern must be a nonempty word over L and R")
        if "L" not in self.pattern or "R" not in self.pattern:
            raise ValueError("zig-zag pattern must contain both L and R")
        if self.base.is_infinite:
            raise ValueError("zig-zag base must be a finite arc")

    def arcs(self) -> Iterator[Arc]:
        """The nested arcs alpha_0 = base, alpha_1, ... (infinite iterator)."""
        a, b = self.base.a, self.base.b
        i = 0
        while True:
            yield arc(a, b)
            if self.pattern[i % len(self.pattern)] == "L":
                a -= 1
            else:
                b += 1
            i += 1

    def index_of(self, x: Arc) -> int | None:
        if x.is_infinite:
            return None
        p, q = self.base.a, self.base.b
        left, right = p - x.a, x.b - q
        if left < 0 or right < 0:
            return None
        i = left + right
        period, n = divmod(i, len(self.pattern))
        lcount = period * self.pattern.count("L") + self.pattern[:n].count("L")
        return i if lcount == left else None

    def advanced(self, steps: int) -> TwoSidedZigZag:
        it = self.arcs()
        for _ in range(steps):
            next(it)
        k = steps % len(self.pattern)
        return TwoSidedZigZag(next(it), self.pattern[k:] + self.pattern[:k])


TailSpec = Union[Sided, TwoSidedZigZag]


@dataclass(frozen=True)
class ArcSetDescriptor:
    window: tuple[int, int]
    core: frozenset[Arc] = field(default_factory=frozenset)
    tail: TailSpec | None = None

    def __post_init__(self) -> None:
        lo, hi = self.window
        if lo > hi:
            raise ValueError("window must satisfy lo <= hi")
        object.__setattr__(self, "window", (lo, hi))
        object.__setattr__(self, "core", frozenset(self.core))
        for x in self.core:
            if x.is_boundary:
                raise ValueError(f"boundary arc {x!r} is implicit and may not be listed")
            if x.b < lo or x.b > hi or (x.is_finite and x.a < lo):
                raise ValueError(f"core arc {x!r} leaves the window [{lo},{hi}]")
        t = self.tail
        if isinstance(t, Sided):
            if isinstance(t.left, LeftFountain) and not lo <= t.left.a <= hi:
                raise ValueError("left fountain vertex must lie in the window")
            if isinstance(t.right, RightFountain) and not lo <= t.right.b <= hi:
                raise ValueError("right fountain vertex must lie in the window")
        elif isinstance(t, TwoSidedZigZag):
            if t.base.a < lo or t.base.b > hi:
                raise ValueError("zig-zag base must lie in the window")
        elif t is not None:
            raise TypeError(f"unknown tail {t!r}")
        for x in self.core:
            if tail_contains(self, x):
                raise ValueError(f"core arc {x!r} is already generated by the tail")

    @property
    def lo(self) -> int:
        return self.window[0]

    @property
    def hi(self) -> int:
        return self.window[1]

    def __contains__(self, x: Arc) -> bool:
        return x in self.core or tail_contains(self, x)


TriangulationDescriptor = ArcSetDescriptor


def tail_contains(d: ArcSetDescriptor, x: Arc) -> bool:
    t, lo, hi = d.tail, d.lo, d.hi
    if t is None or x.is_boundary:
        return False
    if isinstance(t, TwoSidedZigZag):
        return t.index_of(x) is not None
    if x.is_infinite:
        return (isinstance(t.left, Fan) and x.b < lo) or (isinstance(t.right, Fan) and x.b > hi)
    if isinstance(t.left, LeftFountain) and x.b == t.left.a and x.a < lo:
        return True
    if isinstance(t.right, RightFountain) and x.a == t.right.b and x.b > hi:
        return True
    return False


def contains(d: ArcSetDescriptor, x: Arc) -> bool:
    """Membership including the implicit boundary arcs."""
    return x.is_boundary or x in d


def tail_arcs(d: ArcSetDescriptor, region: tuple[int, int]) -> list[Arc]:
    """Tail arcs whose finite endpoints lie in ``region``."""
    rlo, rhi = region
    t, lo, hi = d.tail, d.lo, d.hi
    out: list[Arc] = []
    if t is None:
        return out
    if isinstance(t, TwoSidedZigZag):
        for x in t.arcs():
            if x.a < rlo or x.b > rhi:
                break
            if not x.is_boundary:
                out.append(x)
        return sorted(out)
    if isinstance(t.left, Fan):
        out.extend(arc(None, n) for n in range(rlo, min(lo, rhi + 1)))
    else:
        a = t.left.a
        if rlo <= a <= rhi:
            out.extend(arc(n, a) for n in range(rlo, min(lo, a - 1)))
    if isinstance(t.right, Fan):
        out.extend(arc(None, n) for n in range(max(hi + 1, rlo), rhi + 1))
    else:
        b = t.right.b
        if rlo <= b <= rhi:
            out.extend(arc(b, n) for n in range(max(hi + 1, b + 2), rhi + 1))
    return sorted(out)


def _in_region(x: Arc, region: tuple[int, int]) -> bool:
    rlo, rhi = region
    return rlo <= x.b <= rhi and (x.is_infinite or x.a >= rlo)


def materialize(d: ArcSetDescriptor, region: tuple[int, int]) -> list[Arc]:
    """Core arcs plus the tail arcs inside ``region``, sorted with -inf first."""
    return sorted(set(d.core) | set(tail_arcs(d, region)))


def restrict(d: ArcSetDescriptor, region: tuple[int, int]) -> list[Arc]:
    """All arcs of ``d`` with finite endpoints in ``region``."""
    return [x for x in materialize(d, region) if _in_region(x, region)]


def tail_crossing_witness(d: ArcSetDescriptor, x: Arc) -> Arc | None:
    """A tail arc crossing ``x``, decided in closed form, or None."""
    t, lo, hi = d.tail, d.lo, d.hi
    if t is None or x.is_boundary:
        return None
    if isinstance(t, TwoSidedZigZag):
        for y in t.arcs():
            if cross(x, y) and not y.is_boundary:
                return y
            if x.is_infinite:
                if y.a < x.b < y.b:
                    return y
            elif y.a < x.a and y.b > x.b:
                return None
        return None  # pragma: no cover - the loop always returns
    candidates: list[Arc] = []
    if isinstance(t.left, Fan):
        if x.is_finite and x.a + 1 < min(x.b, lo):
            candidates.append(arc(None, x.a + 1))
    else:
        a = t.left.a
        if x.is_finite and x.a < a < x.b:
            candidates.append(arc(min(x.a, lo) - 1, a))
        if x.b < a:
            start = x.a + 1 if x.is_finite else min(x.b, lo) - 1
            if start < min(x.b, lo):
                candidates.append(arc(start, a))
    if isinstance(t.right, Fan):
        if x.is_finite and max(x.a, hi) + 1 < x.b:
            candidates.append(arc(None, max(x.a, hi) + 1))
    else:
        b = t.right.b
        if (x.is_infinite or x.a < b) and b < x.b:
            candidates.append(arc(b, max(x.b, hi) + 1))
        if x.is_finite and b < x.a and max(x.a, hi) + 1 < x.b:
            candidates.append(arc(b, max(x.a, hi) + 1))
    for y in candidates:
        if not y.is_boundary and tail_contains(d, y) and cross(x, y):
            return y
    return None


def crossing_witness(d: ArcSetDescriptor, x: Arc) -> Arc | None:
    """An arc of ``d`` (core or tail) crossing ``x``, or None."""
    for y in sorted(d.core):
        if cross(x, y):
            return y
    return tail_crossing_witness(d, x)


@dataclass(frozen=True)
class Violation:
    kind: str  # "crossing", "addable" or "tail"
    witness: tuple[Arc, ...]
    message: str = ""


def _tail_violation(d: ArcSetDescriptor) -> Violation | None:
    t = d.tail
    if isinstance(t, Sided) and isinstance(t.left, LeftFountain) and isinstance(t.right, RightFountain):
        a, b = t.left.a, t.right.b
        if a > b:
            w = (arc(d.lo - 1, a), arc(b, d.hi + 1))
            return Violation("crossing", w, "left fountain lies to the right of the right fountain")
    return None


def crossing_violation(d: ArcSetDescriptor) -> Violation | None:
    v = _tail_violation(d)
    if v is not None:
        return v
    core = sorted(d.core)
    for i, x in enumerate(core):
        for y in core[i + 1 :]:
            if cross(x, y):
                return Violation("crossing", (x, y), "core arcs cross")
        w = tail_crossing_witness(d, x)
        if w is not None:
            return Violation("crossing", (x, w), "core arc crosses the tail")
    return None


def validate(d: ArcSetDescriptor, *, completed: bool = True) -> Violation | None:
    """None when ``d`` is a triangulation (window-complete and non-crossing).

    With ``completed=False`` only finite arcs are considered: the check is then
    for a triangulation of the infinity-gon without its accumulation point.
    """
    if not completed:
        return _validate_finite(d)
    v = crossing_violation(d)
    if v is not None:
        return v
    for x in arcs_in_window(d.lo, d.hi, boundary=False):
        if x in d:
            continue
        if crossing_witness(d, x) is None:
            return Violation("addable", (x,), "arc can be added without crossing")
    return None


def _validate_finite(d: ArcSetDescriptor) -> Violation | None:
    finite_core = frozenset(x for x in d.core if x.is_finite)
    t = d.tail
    if isinstance(t, Sided) and (isinstance(t.left, Fan) or isinstance(t.right, Fan)):
        lo = d.lo - 3 if isinstance(t.left, Fan) else d.hi + 1
        return Violation("addable", (arc(lo, lo + 2),), "no finite arcs beyond the window on a fan side")
    probe = replace(d, core=finite_core)
    v = crossing_violation(probe)
    if v is not None:
        return v
    for x in arcs_in_window(d.lo, d.hi, infinite=False, boundary=False):
        if x in probe:
            continue
        if crossing_witness(probe, x) is None:
            return Violation("addable", (x,), "finite arc can be added without crossing")
    return None


def is_valid(d: ArcSetDescriptor, *, completed: bool = True) -> bool:
    return validate(d, completed=completed) is None


# -- configurations ------------------------------------------------------------

@dataclass(frozen=True)
class LocallyFinite:
    pass


@dataclass(frozen=True, init=False)
class FountainAt:
    """Left fountain at ``a`` and right fountain at ``b``; ``a == b`` is a fountain."""

    a: int
    b: int

    def __init__(self, a: int, b: int | None = None):
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", a if b is None else b)

    @property
    def is_split(self) -> bool:
        return self.a != self.b


@dataclass(frozen=True)
class LeftFanRightFountain:
    b: int


@dataclass(frozen=True)
class RightFanLeftFountain:
    a: int


@dataclass(frozen=True)
class DoubleFan:
    pass


Configuration = Union[LocallyFinite, FountainAt, LeftFanRightFountain, RightFanLeftFountain, DoubleFan]


def classify(t: ArcSetDescriptor) -> Configuration:
    v = validate(t)
    if v is not None:
        raise ValidationError(f"not a triangulation: {v.message}", v.witness)
    tail = t.tail
    if tail is None:
        raise ValidationError("a finite window triangulation has no configuration")
    if isinstance(tail, TwoSidedZigZag):
        return LocallyFinite()
    left, right = tail.left, tail.right
    if isinstance(left, Fan) and isinstance(right, Fan):
        return DoubleFan()
    if isinstance(left, Fan):
        return LeftFanRightFountain(right.b)
    if isinstance(right, Fan):
        return RightFanLeftFountain(left.a)
    return FountainAt(left.a, right.b)


# -- rigidity hierarchy ----------------------------------------------------------

def infinite_arc_count(d: ArcSetDescriptor) -> float:
    t = d.tail
    if isinstance(t, Sided) and (isinstance(t.left, Fan) or isinstance(t.right, Fan)):
        return math.inf
    return sum(1 for x in d.core if x.is_infinite)


def is_almost_rigid(d: ArcSetDescriptor) -> bool:
    return crossing_violation(d) is None


def is_rigid(d: ArcSetDescriptor) -> bool:
    return is_almost_rigid(d) and infinite_arc_count(d) <= 1


def is_maximal_almost_rigid(d: ArcSetDescriptor) -> bool:
    return validate(d) is None


LOCALLY_FINITE_CASE, SPLIT_FOUNTAIN_CASE, FOUNTAIN_CASE = 1, 2, 3


def is_maximal_rigid(d: ArcSetDescriptor) -> tuple[bool, int | None]:
    """Whether ``d`` is maximal rigid, with the case number of the three-case list."""
    if not is_rigid(d) or validate(d, completed=False) is not None:
        return False, None
    infinite = {x for x in d.core if x.is_infinite}
    t = d.tail
    if isinstance(t, TwoSidedZigZag):
        return (True, LOCALLY_FINITE_CASE) if not infinite else (False, None)
    if isinstance(t, Sided) and isinstance(t.left, LeftFountain) and isinstance(t.right, RightFountain):
        a, b = t.left.a, t.right.b
        if a == b and infinite == {arc(None, a)}:
            return True, FOUNTAIN_CASE
        if a < b and infinite in ({arc(None, a)}, {arc(None, b)}):
            return True, SPLIT_FOUNTAIN_CASE
    return False, None


FULL, GENERICALLY_FREE = "full", "generically-free"


def is_cluster_tilting(d: ArcSetDescriptor, ambient: str = FULL) -> bool:
    if ambient == FULL:
        return is_maximal_rigid(d) == (True, FOUNTAIN_CASE)
    if ambient != GENERICALLY_FREE:
        raise ValueError(f"unknown ambient {ambient!r}")
    if infinite_arc_count(d) > 0:
        witness = next((x for x in sorted(d.core) if x.is_infinite), None)
        raise AmbientError("the generically free ambient has no infinite arcs", witness)
    if validate(d, completed=False) is not None:
        return False
    t = d.tail
    if isinstance(t, TwoSidedZigZag):
        return True
    return isinstance(t, Sided) and t.left == LeftFountain(getattr(t.right, "b", None))


# -- approximations ---------------------------------------------------------------

def _composites(x: Arc, m: Arc, y: Arc) -> list[list[Fraction]]:
    """Coordinates (in the basis of Hom(x, y)) of all g o f through ``m``."""
    s = x.b
    return [list(v) for v in _composites_at_zero(_shift_arc(x, s), _shift_arc(m, s), _shift_arc(y, s))]


@lru_cache(maxsize=None)
def _composites_at_zero(x: Arc, m: Arc, y: Arc) -> tuple[tuple[Fraction, ...], ...]:
    kinds = admissible_kinds(x, y)
    out = []
    for bf in hom_basis(x, m):
        for bg in hom_basis(m, y):
            c = compose(Morphism.basis(bg), Morphism.basis(bf)).coefficients
            out.append(tuple(c.get(k, Fraction(0)) for k in kinds))
    return tuple(out)


def minimal_factoring_set(x: Arc, available: Iterable[Arc], direction: str, extra: Iterable[Arc] = ()) -> list[Arc]:
    """Smallest subset S of ``available`` such that every map between ``x`` and
    an available arc factors through S together with ``extra``.

    ``direction="in"`` looks at maps into ``x`` (precovers), ``"out"`` at maps
    out of ``x`` (preenvelopes). Far arcs are discarded first.
    """
    pool = sorted(set(available) | set(extra))
    if direction == "in":
        cands = [b for b in pool if hom_dim(b, x)]
        comps = {(m, b): _composites(b, m, x) for b in cands for m in cands}
    else:
        cands = [b for b in pool if hom_dim(x, b)]
        comps = {(m, b): _composites(x, m, b) for b in cands for m in cands}
    fixed = set(extra)

    def covered(mids: list[Arc], targets: list[Arc]) -> bool:
        for b in targets:
            need = hom_dim(b, x) if direction == "in" else hom_dim(x, b)
            vecs = [v for m in mids for v in comps[(m, b)]]
            if linalg.rank(vecs) < need:
                return False
        return True

    def distance(b: Arc) -> int:
        ends = [b.b] + ([] if b.is_infinite else [b.a])
        ref = [x.b] + ([] if x.is_infinite else [x.a])
        return min(abs(e - r) for e in ends for r in ref) + (0 if b.is_infinite == x.is_infinite else 1)

    chosen = list(cands)
    for b in sorted(cands, key=lambda c: (-distance(c), c.sort_key())):
        if b in fixed:
            continue
        trial = [m for m in chosen if m != b]
        if covered(trial, [t for t in cands if comps[(b, t)]]):
            chosen = trial
    return sorted(c for c in chosen if c not in fixed)


def unfactored(x: Arc, available: Iterable[Arc], through: Iterable[Arc], direction: str) -> list[Arc]:
    """Available arcs with a map to (``in``) or from (``out``) ``x`` that does not
    factor through ``through``."""
    mids = list(through)
    out = []
    for b in sorted(set(available)):
        src, tgt = (b, x) if direction == "in" else (x, b)
        need = hom_dim(src, tgt)
        if need == 0:
            continue
        vecs = [v for m in mids for v in _composites(src, m, tgt)]
        if linalg.rank(vecs) < need:
            out.append(b)
    return out


@dataclass(frozen=True)
class Precover:
    summands: tuple[tuple[Arc, tuple[Morphism, ...]], ...]

    @property
    def arcs(self) -> tuple[Arc, ...]:
        return tuple(a for a, _ in self.summands)


@dataclass(frozen=True)
class NoPrecover:
    witness: tuple[Arc, ...]
    description: str


def projective_cover(x: Arc) -> list[Arc]:
    if x.is_boundary:
        return [x]
    if x.is_infinite:
        return [arc(x.b, x.b + 1)]
    return [arc(x.a, x.a + 1), arc(x.b, x.b + 1)]


def injective_hull(x: Arc) -> list[Arc]:
    if x.is_boundary:
        return [x]
    if x.is_infinite:
        return [arc(x.b - 1, x.b)]
    return [arc(x.a - 1, x.a), arc(x.b - 1, x.b)]


def _approx_regions(d: ArcSetDescriptor, target: Arc) -> tuple[tuple[int, int], tuple[int, int]]:
    ends = [d.lo, d.hi, target.b] + ([] if target.is_infinite else [target.a])
    lo, hi = min(ends), max(ends)
    period = len(d.tail.pattern) if isinstance(d.tail, TwoSidedZigZag) else 1
    m1 = 4 + period
    m2 = m1 + 2 * period + 4
    return (lo - m1, hi + m1), (lo - m2, hi + m2)


def _region_arcs(d: ArcSetDescriptor, region: tuple[int, int]) -> list[Arc]:
    """Arcs of ``d`` inside ``region``, boundary arcs excluded."""
    return [x for x in materialize(d, region) if _in_region(x, region)]


def _approximate(d: ArcSetDescriptor, target: Arc, direction: str) -> list[list[Arc]]:
    """Minimal factoring sets on two nested regions; equal sets mean the approximation exists.

    Boundary arcs are projective-injective, so maps between them and the
    target factor through its projective cover or injective hull; those are
    the only boundary arcs offered.
    """
    extra = projective_cover(target) if direction == "in" else injective_hull(target)
    results = []
    for region in _approx_regions(d, target):
        avail = [x for x in _region_arcs(d, region) if x != target]
        results.append(minimal_factoring_set(target, avail, direction, extra))
    return results


def _require_maximal_rigid(d: ArcSetDescriptor) -> None:
    if not is_maximal_rigid(d)[0]:
        raise DomainError("precovers are computed for maximal rigid descriptors only")


def _summands(arcs: Iterable[Arc], target: Arc, direction: str) -> tuple:
    out = []
    for s in arcs:
        basis = hom_basis(s, target) if direction == "in" else hom_basis(target, s)
        out.append((s, tuple(Morphism.basis(b) for b in basis)))
    return tuple(out)


def _approx(d: ArcSetDescriptor, target: Arc, direction: str) -> Precover | NoPrecover:
    _require_maximal_rigid(d)
    if target.is_boundary or target in d:
        return Precover(((target, (identity(target),)),))
    small, large = _approximate(d, target, direction)
    extra = projective_cover(target) if direction == "in" else injective_hull(target)
    if small != large:
        _, region = _approx_regions(d, target)
        witness = unfactored(target, _region_arcs(d, region), small + extra, direction)
        what = "precover" if direction == "in" else "preenvelope"
        return NoPrecover(tuple(witness), f"no {what}: the required summands keep growing with the region")
    return Precover(_summands(sorted(set(small) | set(extra)), target, direction))


def precover(d: ArcSetDescriptor, target: Arc) -> Precover | NoPrecover:
    return _approx(d, target, "in")


def preenvelope(d: ArcSetDescriptor, target: Arc) -> Precover | NoPrecover:
    return _approx(d, target, "out")


def factors_through(h: Morphism, summands: Iterable[Arc], direction: str) -> bool:
    """Whether ``h`` lies in the span of composites through ``summands``.

    ``direction="in"``: ``h: b -> x`` through maps ``s -> x``; ``"out"``:
    ``h: x -> b`` through maps ``x -> s``.
    """
    kinds = admissible_kinds(h.source, h.target)
    vecs = []
    for s in summands:
        vecs.extend(_composites(h.source, s, h.target))
    c = h.coefficients
    return linalg.in_span(vecs, [c.get(k, Fraction(0)) for k in kinds])


# -- shifting, canonical forms ---------------------------------------------------

def _shift_arc(x: Arc, s: int) -> Arc:
    return arc(None if x.is_infinite else x.a - s, x.b - s)


def shift_descriptor(d: ArcSetDescriptor, s: int) -> ArcSetDescriptor:
    """Apply the grading shift by ``s``: every finite endpoint moves down by ``s``."""
    t = d.tail
    if isinstance(t, TwoSidedZigZag):
        t = TwoSidedZigZag(_shift_arc(t.base, s), t.pattern)
    elif isinstance(t, Sided):
        left = t.left if isinstance(t.left, Fan) else LeftFountain(t.left.a - s)
        right = t.right if isinstance(t.right, Fan) else RightFountain(t.right.b - s)
        t = Sided(left, right)
    return ArcSetDescriptor((d.lo - s, d.hi - s), frozenset(_shift_arc(x, s) for x in d.core), t)


def shift_configuration(c: Configuration, s: int) -> Configuration:
    if isinstance(c, FountainAt):
        return FountainAt(c.a - s, c.b - s)
    if isinstance(c, LeftFanRightFountain):
        return LeftFanRightFountain(c.b - s)
    if isinstance(c, RightFanLeftFountain):
        return RightFanLeftFountain(c.a - s)
    return c


def expand(d: ArcSetDescriptor, lo: int, hi: int) -> ArcSetDescriptor:
    """Same arc set, larger window: tail arcs now inside move to the core."""
    if isinstance(d.tail, TwoSidedZigZag):
        raise ValueError("use advance() for zig-zag tails")
    lo, hi = min(lo, d.lo), max(hi, d.hi)
    moved = [x for x in tail_arcs(d, (lo, hi)) if _in_region(x, (lo, hi))]
    return ArcSetDescriptor((lo, hi), d.core | frozenset(moved), d.tail)


def advance(d: ArcSetDescriptor, steps: int) -> ArcSetDescriptor:
    """Move the first ``steps`` zig-zag arcs into the core."""
    t = d.tail
    if not isinstance(t, TwoSidedZigZag):
        raise ValueError("advance() needs a zig-zag tail")
    moved = []
    it = t.arcs()
    for _ in range(steps):
        x = next(it)
        if not x.is_boundary:
            moved.append(x)
    nt = t.advanced(steps)
    lo, hi = min(d.lo, nt.base.a), max(d.hi, nt.base.b)
    return ArcSetDescriptor((lo, hi), d.core | frozenset(moved), nt)


def _primitive(word: str) -> str:
    n = len(word)
    for p in range(1, n + 1):
        if n % p == 0 and word[:p] * (n // p) == word:
            return word[:p]
    return word


def canonical(d: ArcSetDescriptor) -> ArcSetDescriptor:
    """Normal form: smallest window, tails absorbing every arc they can generate."""
    t = d.tail
    if t is None:
        return d
    core = set(d.core)
    if isinstance(t, TwoSidedZigZag):
        base, pattern = t.base, _primitive(t.pattern)
        while base.b - base.a >= 2:
            letter = pattern[-1]
            prev = arc(base.a + 1, base.b) if letter == "L" else arc(base.a, base.b - 1)
            if not (prev.is_boundary or prev in core):
                break
            core.discard(prev)
            base, pattern = prev, letter + pattern[:-1]
        ends = [base.a, base.b] + [e for x in core for e in ((x.b,) if x.is_infinite else (x.a, x.b))]
        return ArcSetDescriptor((min(ends), max(ends)), frozenset(core), TwoSidedZigZag(base, pattern))
    lo, hi = d.lo, d.hi
    left, right = t.left, t.right

    def at(v: int) -> set[Arc]:
        return {x for x in core if x.b == v or (x.is_finite and x.a == v)}

    pinned = {v for v in (getattr(left, "a", None), getattr(right, "b", None)) if v is not None}
    changed = True
    while changed:
        changed = False
        if lo < hi and lo not in pinned:
            edge = arc(None, lo) if isinstance(left, Fan) else None
            if isinstance(left, Fan) and at(lo) == {edge}:
                core.discard(edge)
                lo += 1
                changed = True
        if isinstance(left, LeftFountain) and lo < left.a:
            edge = arc(lo, left.a) if lo <= left.a - 2 else None
            if at(lo) == ({edge} if edge else set()) and (edge is None or edge in core):
                core.discard(edge)
                lo += 1
                changed = True
        if hi > lo and hi not in pinned:
            edge = arc(None, hi)
            if isinstance(right, Fan) and at(hi) == {edge}:
                core.discard(edge)
                hi -= 1
                changed = True
        if isinstance(right, RightFountain) and hi > right.b:
            edge = arc(right.b, hi) if hi >= right.b + 2 else None
            if at(hi) == ({edge} if edge else set()) and (edge is None or edge in core):
                core.discard(edge)
                hi -= 1
                changed = True
    if isinstance(left, Fan) and isinstance(right, Fan) and lo == hi and core == {arc(None, lo)}:
        lo = hi = 0
        core = {arc(None, 0)}
    return ArcSetDescriptor((lo, hi), frozenset(core), t)


# -- polygons and random triangulations ----------------------------------------------

Point = Union[None, int]  # None stands for -inf


def _edge(u: Point, v: Point) -> Arc:
    if u is None:
        return arc(None, v)
    if v is None:
        return arc(None, u)
    return arc(min(u, v), max(u, v))


def random_polygon_triangulation(vertices: list[Point], rng: random.Random) -> set[Arc]:
    """Diagonals of a uniformly built random triangulation of a convex polygon."""
    out: set[Arc] = set()
    stack = [list(vertices)]
    while stack:
        poly = stack.pop()
        if len(poly) < 4:
            continue
        k = rng.randrange(1, len(poly) - 1)
        for i in (0, len(poly) - 1):
            if abs(k - i) > 1:
                out.add(_edge(poly[i], poly[k]))
        stack.append(poly[: k + 1])
        stack.append(poly[k:])
    return {x for x in out if not x.is_boundary}


def free_polygons(d: ArcSetDescriptor) -> list[list[Point]]:
    """The polygons a window core must triangulate for the tail of ``d``."""
    lo, hi, t = d.lo, d.hi, d.tail
    if isinstance(t, TwoSidedZigZag):
        return [list(range(t.base.a, t.base.b + 1))]
    if t is None:
        return [[None, *range(lo, hi + 1)]]
    polys: list[list[Point]] = []
    left_end = lo
    right_end = hi
    if isinstance(t.left, LeftFountain):
        polys.append(list(range(lo, t.left.a + 1)))
        left_end = t.left.a
    if isinstance(t.right, RightFountain):
        polys.append(list(range(t.right.b, hi + 1)))
        right_end = t.right.b
    polys.append([None, *range(left_end, right_end + 1)])
    return [p for p in polys if len(p) >= 3 or p[0] is None]


def forced_sides(d: ArcSetDescriptor) -> set[Arc]:
    """Sides of the free polygons that are arcs of the core."""
    out: set[Arc] = set()
    for poly in free_polygons(d):
        if poly[0] is None:
            sides = [arc(None, poly[1]), arc(None, poly[-1])]
        else:
            sides = [arc(poly[0], poly[-1])]
        out.update(x for x in sides if not x.is_boundary and not tail_contains(d, x))
    return out


def random_triangulation(rng: random.Random, family: str | None = None, width: int | None = None) -> ArcSetDescriptor:
    """A random valid descriptor: random tail family, window and core."""
    families = ["zigzag", "double-fan", "fan-fountain", "fountain-fan", "fountain", "split-fountain", "none"]
    family = family or rng.choice(families)
    width = width if width is not None else rng.randint(2, 7)
    lo = rng.randint(-4, 1)
    hi = lo + width
    if family == "zigzag":
        pattern = "".join(rng.choice("LR") for _ in range(rng.randint(2, 4)))
        if "L" not in pattern:
            pattern += "L"
        if "R" not in pattern:
            pattern += "R"
        tail: TailSpec | None = TwoSidedZigZag(arc(lo, hi), pattern)
    elif family == "double-fan":
        tail = Sided(Fan(), Fan())
    elif family == "fan-fountain":
        tail = Sided(Fan(), RightFountain(rng.randint(lo, hi)))
    elif family == "fountain-fan":
        tail = Sided(LeftFountain(rng.randint(lo, hi)), Fan())
    elif family == "fountain":
        a = rng.randint(lo, hi)
        tail = Sided(LeftFountain(a), RightFountain(a))
    elif family == "split-fountain":
        a = rng.randint(lo, hi - 1)
        tail = Sided(LeftFountain(a), RightFountain(rng.randint(a + 1, hi)))
    else:
        tail = None
    empty = ArcSetDescriptor((lo, hi), frozenset(), tail)
    core = forced_sides(empty)
    for poly in free_polygons(empty):
        core |= random_polygon_triangulation(poly, rng)
    core = {x for x in core if not tail_contains(empty, x)}
    return ArcSetDescriptor((lo, hi), frozenset(core), tail)


# -- JSON -----------------------------------------------------------------------------

def _side_to_json(s: object) -> dict:
    if isinstance(s, Fan):
        return {"kind": "fan"}
    if isinstance(s, LeftFountain):
        return {"kind": "fountain", "at": s.a}
    return {"kind": "fountain", "at": s.b}


def _side_from_json(data: object, left: bool) -> Union[Fan, LeftFountain, RightFountain]:
    if not isinstance(data, dict) or "kind" not in data:
        raise ValueError("tail side must be an object with a kind")
    if data["kind"] == "fan":
        return Fan()
    if data["kind"] == "fountain":
        at = data.get("at")
        if isinstance(at, bool) or not isinstance(at, int):
            raise ValueError("fountain needs an integer 'at'")
        return LeftFountain(at) if left else RightFountain(at)
    raise ValueError(f"unknown tail side kind {data['kind']!r}")


def descriptor_to_json(d: ArcSetDescriptor) -> dict:
    t = d.tail
    if t is None:
        tail: dict = {"kind": "none"}
    elif isinstance(t, TwoSidedZigZag):
        tail = {"kind": "zigzag", "base": arc_to_json(t.base), "pattern": t.pattern}
    else:
        tail = {"kind": "sided", "left": _side_to_json(t.left), "right": _side_to_json(t.right)}
    return {"window": [d.lo, d.hi], "core": [arc_to_json(x) for x in sorted(d.core)], "tail": tail}


def descriptor_from_json(data: object) -> ArcSetDescriptor:
    if not isinstance(data, dict):
        raise ValueError("descriptor must be an object")
    window = data.get("window")
    if (
        not isinstance(window, list)
        or len(window) != 2
        or not all(isinstance(v, int) and not isinstance(v, bool) for v in window)
    ):
        raise ValueError("window must be [lo, hi]")
    core = data.get("core", [])
    if not isinstance(core, list):
        raise ValueError("core must be an array of arcs")
    arcs = [arc_from_json(x) for x in core]
    if len(set(arcs)) != len(arcs):
        raise ValueError("core lists an arc twice")
    tail_data = data.get("tail", {"kind": "none"})
    if not isinstance(tail_data, dict) or "kind" not in tail_data:
        raise ValueError("tail must be an object with a kind")
    kind = tail_data["kind"]
    tail: TailSpec | None
    if kind == "none":
        tail = None
    elif kind == "zigzag":
        pattern = tail_data.get("pattern")
        if not isinstance(pattern, str):
            raise ValueError("zig-zag pattern must be a string")
        tail = TwoSidedZigZag(arc_from_json(tail_data.get("base")), pattern)
    elif kind == "sided":
        tail = Sided(_side_from_json(tail_data.get("left"), True), _side_from_json(tail_data.get("right"), False))
    else:
        raise ValueError(f"unknown tail kind {kind!r}")
    return ArcSetDescriptor((window[0], window[1]), frozenset(arcs), tail)


def configuration_to_json(c: Configuration) -> dict:
    if isinstance(c, FountainAt):
        return {"configuration": "fountain", "left": c.a, "right": c.b}
    if isinstance(c, LeftFanRightFountain):
        return {"configuration": "left-fan-right-fountain", "at": c.b}
    if isinstance(c, RightFanLeftFountain):
        return {"configuration": "right-fan-left-fountain", "at": c.a}
    if isinstance(c, DoubleFan):
        return {"configuration": "double-fan"}
    return {"configuration": "locally-finite"}


# -- named examples ---------------------------------------------------------------------

def double_fan() -> ArcSetDescriptor:
    return ArcSetDescriptor((0, 0), frozenset({arc(None, 0)}), Sided(Fan(), Fan()))


def fountain_at(a: int, *, wrapping: bool = True) -> ArcSetDescriptor:
    core = {arc(None, a)} if wrapping else set()
    return ArcSetDescriptor((a, a), frozenset(core), Sided(LeftFountain(a), RightFountain(a)))


def split_fountain(a: int, b: int, infinite: Iterable[int] = ()) -> ArcSetDescriptor:
    """Left fountain at a, right fountain at b, the arc (a, b) and chosen infinite arcs."""
    core = {arc(None, n) for n in infinite}
    if b - a >= 2:
        core.add(arc(a, b))
    return ArcSetDescriptor((a, b), frozenset(core), Sided(LeftFountain(a), RightFountain(b)))


def zigzag(base: Arc = arc(-1, 1), pattern: str = "LR") -> ArcSetDescriptor:
    """Zig-zag tail on ``base`` with the polygon inside fanned out from its left end."""
    core = frozenset(arc(base.a, k) for k in range(base.a + 2, base.b))
    return ArcSetDescriptor((base.a, base.b), core, TwoSidedZigZag(base, pattern))
