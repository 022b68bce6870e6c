"""Arcs of the completed infinity-gon and their module labels.

Marked points are the integers plus one accumulation point, written ``-inf``.
An arc ``(a, b)`` has ``a < b``; the right endpoint is always an integer.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import total_ordering
from typing import Union


@total_ordering
class MinusInfinity:
    """The accumulation point. Smaller than every vertex."""

    _instance: MinusInfinity | None = None

    def __new__(cls) -> MinusInfinity:
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "-inf"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, MinusInfinity)

    def __hash__(self) -> int:
        return hash("-inf")

    def __lt__(self, other: object) -> bool:
        if isinstance(other, (MinusInfinity, Vertex)):
            return isinstance(other, Vertex)
        return NotImplemented

    def __reduce__(self):
        return (MinusInfinity, ())


NEG_INF = MinusInfinity()


@total_ordering
@dataclass(frozen=True)
class Vertex:
    n: int

    def __repr__(self) -> str:
        return str(self.n)

    def __lt__(self, other: object) -> bool:
        if isinstance(other, Vertex):
            return self.n < other.n
        if isinstance(other, MinusInfinity):
            return False
        return NotImplemented


Endpoint = Union[MinusInfinity, Vertex]


def endpoint(value: int | str | Endpoint) -> Endpoint:
    """Coerce an int, the string ``"-inf"`` or an endpoint."""
    if isinstance(value, (MinusInfinity, Vertex)):
        return value
    if isinstance(value, str):
        if value.strip() == "-inf":
            return NEG_INF
        raise ValueError(f"not an endpoint: {value!r}")
    if isinstance(value, bool) or not isinstance(value, int):
        raise TypeError(f"not an endpoint: {value!r}")
    return Vertex(value)


class ArcKind(Enum):
    BOUNDARY = "boundary"
    FINITE_INTERNAL = "finite-internal"
    INFINITE = "infinite"


@dataclass(frozen=True)
class Arc:
    src: Endpoint
    tgt: int

    def __post_init__(self) -> None:
        if not isinstance(self.src, (MinusInfinity, Vertex)):
            raise TypeError("arc source must be an Endpoint")
        if isinstance(self.tgt, bool) or not isinstance(self.tgt, int):
            raise TypeError("arc target must be an integer")
        if not self.src < Vertex(self.tgt):
            raise ValueError(f"arc endpoints out of order: ({self.src!r}, {self.tgt})")

    @property
    def is_infinite(self) -> bool:
        return self.src is NEG_INF

    @property
    def is_finite(self) -> bool:
        return not self.is_infinite

    @property
    def a(self) -> int | None:
        """Left endpoint as an int, or None for ``-inf``."""
        return None if self.is_infinite else self.src.n

    @property
    def b(self) -> int:
        return self.tgt

    @property
    def kind(self) -> ArcKind:
        if self.is_infinite:
            return ArcKind.INFINITE
        if self.tgt == self.src.n + 1:
            return ArcKind.BOUNDARY
        return ArcKind.FINITE_INTERNAL

    @property
    def is_boundary(self) -> bool:
        return self.kind is ArcKind.BOUNDARY

    def sort_key(self) -> tuple[int, int, int]:
        if self.is_infinite:
            return (0, 0, self.tgt)
        return (1, self.src.n, self.tgt)

    def __lt__(self, other: Arc) -> bool:
        return self.sort_key() < other.sort_key()

    def __repr__(self) -> str:
        return f"({self.src!r},{self.tgt})"


def arc(a: int | str | Endpoint | None, b: int) -> Arc:
    """Build an arc; ``a`` may be an int, ``"-inf"``, ``None`` or an Endpoint."""
    return Arc(NEG_INF if a is None else endpoint(a), b)


@dataclass(frozen=True)
class IdealType:
    """The module (x, y^k)(j); k = 0 is the free module R(j)."""

    k: int
    j: int

    def __post_init__(self) -> None:
        if self.k < 0:
            raise ValueError("k must be non-negative")

    @property
    def is_projective(self) -> bool:
        return self.k == 0

    def __repr__(self) -> str:
        if self.k == 0:
            return f"R({self.j})"
        return f"(x,y^{self.k})({self.j})"


@dataclass(frozen=True)
class PolyQuot:
    """The module C[y](j) = R/(x), shifted by j."""

    j: int

    is_projective = False

    def __repr__(self) -> str:
        return f"C[y]({self.j})"


ModuleLabel = Union[IdealType, PolyQuot]


class ProjectiveFlag(Enum):
    """Returned by :func:`syzygy` for projective-injective modules."""

    PROJECTIVE = "projective"


def arc_to_module(x: Arc) -> ModuleLabel:
    if x.is_infinite:
        return PolyQuot(j=-x.tgt)
    return IdealType(k=x.tgt - x.src.n - 1, j=1 - x.tgt)


def module_to_arc(m: ModuleLabel) -> Arc:
    if isinstance(m, PolyQuot):
        return Arc(NEG_INF, -m.j)
    return Arc(Vertex(-m.j - m.k), 1 - m.j)


def shift_module(m: ModuleLabel, t: int) -> ModuleLabel:
    """Grading shift M(j) -> M(j + t)."""
    if isinstance(m, PolyQuot):
        return PolyQuot(m.j + t)
    return IdealType(m.k, m.j + t)


def _crosses(a: Endpoint, b: Endpoint, c: Endpoint, d: Endpoint) -> bool:
    return a < c < b < d


def cross(x: Arc, y: Arc) -> bool:
    b, d = Vertex(x.tgt), Vertex(y.tgt)
    return _crosses(x.src, b, y.src, d) or _crosses(y.src, d, x.src, b)


def shift(x: Arc, t: int) -> Arc:
    """Arc of M(t) when x is the arc of M: finite endpoints move down by t."""
    if x.is_infinite:
        return Arc(NEG_INF, x.tgt - t)
    return Arc(Vertex(x.src.n - t), x.tgt - t)


def syzygy(x: Arc) -> Arc | ProjectiveFlag:
    if x.is_boundary:
        return ProjectiveFlag.PROJECTIVE
    return shift(x, -1)


def boundary_arc(n: int) -> Arc:
    return Arc(Vertex(n), n + 1)


def arcs_in_window(lo: int, hi: int, *, infinite: bool = True, boundary: bool = True) -> list[Arc]:
    """All arcs with finite endpoints in ``[lo, hi]``, in canonical order."""
    out: list[Arc] = []
    if infinite:
        out.extend(Arc(NEG_INF, b) for b in range(lo, hi + 1))
    for a in range(lo, hi + 1):
        for b in range(a + 1, hi + 1):
            if boundary or b > a + 1:
                out.append(Arc(Vertex(a), b))
    return out


# JSON encoding: [a, b] with a an int or "-inf".

def arc_to_json(x: Arc) -> list:
    return ["-inf" if x.is_infinite else x.src.n, x.tgt]


def arc_from_json(data: object) -> Arc:
    if not isinstance(data, (list, tuple)) or len(data) != 2:
        raise ValueError(f"arc must be a two-element array, got {data!r}")
    a, b = data
    if isinstance(b, bool) or not isinstance(b, int):
        raise ValueError(f"arc target must be an integer, got {b!r}")
    if isinstance(a, str):
        if a != "-inf":
            raise ValueError(f"arc source must be an integer or \"-inf\", got {a!r}")
        return Arc(NEG_INF, b)
    if isinstance(a, bool) or not isinstance(a, int):
        raise ValueError(f"arc source must be an integer or \"-inf\", got {a!r}")
    return Arc(Vertex(a), b)
