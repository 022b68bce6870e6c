"""Closed-form Hom, Ext^1 and stable Hom between arcs, with explicit maps.

Every module is realized concretely: a finite arc ``(a, b)`` is the ideal
``(x, y^k)`` with ``k = b - a - 1`` and generators ``x`` and ``y^k``; an
infinite arc is ``C[y]`` with generator ``1``. An element is a dict from
monomials ``(e, s)`` (meaning ``x^e y^s``) to rationals. A morphism is fixed
by the images of the source generators.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

from infgon import linalg
from infgon.arcs import Arc, arc, arc_from_json, arc_to_json, cross, shift

Monomial = tuple[int, int]
Element = dict[Monomial, Fraction]


class DomainError(ValueError):
    """An operation was applied outside its domain."""

    code = "domain-error"

    def __init__(self, message: str, witness: object = None):
        super().__init__(message)
        self.witness = witness


class CompositionError(DomainError):
    code = "composition-domain"


class MorphKind(Enum):
    V = "V"
    U = "U"
    FIN_TO_INF = "FI"
    INF_TO_FIN = "IF"
    INF_TO_INF = "II"

    @property
    def code(self) -> str:
        return self.value


KIND_ORDER = (MorphKind.V, MorphKind.U, MorphKind.FIN_TO_INF, MorphKind.INF_TO_FIN, MorphKind.INF_TO_INF)


@dataclass(frozen=True)
class MorphBasis:
    source: Arc
    target: Arc
    kind: MorphKind


def _ends(x: Arc, y: Arc) -> tuple[int | None, int, int | None, int]:
    return x.a, x.b, y.a, y.b


def admissible_kinds(x: Arc, y: Arc) -> list[MorphKind]:
    a, b, c, d = _ends(x, y)
    if a is None:
        if b > d:
            return []
        return [MorphKind.INF_TO_INF] if c is None else [MorphKind.INF_TO_FIN]
    if c is None:
        return [MorphKind.FIN_TO_INF] if a <= d else []
    kinds = []
    if a <= c and b <= d:
        kinds.append(MorphKind.V)
    if a <= d:
        kinds.append(MorphKind.U)
    return kinds


def hom_dim(x: Arc, y: Arc) -> int:
    return len(admissible_kinds(x, y))


def hom_basis(x: Arc, y: Arc) -> list[MorphBasis]:
    return [MorphBasis(x, y, k) for k in admissible_kinds(x, y)]


def ext1_dim(x: Arc, y: Arc) -> int:
    if cross(x, y):
        return 1
    if x.is_infinite and y.is_infinite and x.b < y.b:
        return 1
    return 0


def stable_hom_dim(x: Arc, y: Arc) -> int:
    return ext1_dim(x, shift(y, -1))


# -- generator-image form ---------------------------------------------------

def generators(x: Arc) -> tuple[tuple[str, Monomial], ...]:
    """Named generators of the module of ``x`` as elements of R or C[y]."""
    if x.is_infinite:
        return (("1", (0, 0)),)
    return (("x", (1, 0)), ("y^k", (0, x.b - x.a - 1)))


def _mono(e: int, s: int) -> Element:
    return {(e, s): Fraction(1)}


def kind_images(kind: MorphKind, x: Arc, y: Arc) -> dict[str, Element]:
    """Images of the generators of ``x`` under the basis map of ``kind``."""
    if kind not in admissible_kinds(x, y):
        raise DomainError(f"{kind.code} is not a basis map {x!r} -> {y!r}")
    a, b, c, d = _ends(x, y)
    if kind is MorphKind.V:
        return {"x": _mono(1, d - b), "y^k": _mono(0, d - a - 1)}
    if kind is MorphKind.U:
        return {"x": {}, "y^k": _mono(1, d - a)}
    if kind is MorphKind.FIN_TO_INF:
        return {"x": {}, "y^k": _mono(0, d - a)}
    if kind is MorphKind.INF_TO_FIN:
        return {"1": _mono(1, d - b)}
    return {"1": _mono(0, d - b)}


def _add(acc: Element, elt: Mapping[Monomial, Fraction], scale: Fraction) -> None:
    for mono, c in elt.items():
        v = acc.get(mono, Fraction(0)) + scale * c
        if v:
            acc[mono] = v
        else:
            acc.pop(mono, None)


def _times_y(elt: Mapping[Monomial, Fraction], s: int) -> Element:
    return {(e, t + s): c for (e, t), c in elt.items()}


def decompose(x: Arc, elt: Mapping[Monomial, Fraction]) -> list[tuple[str, int, Fraction]]:
    """Write an element of the module of ``x`` as a sum of ``c * y^s * generator``."""
    out = []
    k = None if x.is_infinite else x.b - x.a - 1
    for (e, s), c in sorted(elt.items()):
        if x.is_infinite:
            if e != 0:
                raise DomainError(f"x-monomial in C[y] module of {x!r}")
            out.append(("1", s, c))
        elif e == 1:
            out.append(("x", s, c))
        else:
            if s < k:
                raise DomainError(f"y^{s} is not in the ideal of {x!r}")
            out.append(("y^k", s - k, c))
    return out


@dataclass(frozen=True)
class Morphism:
    """A rational combination of basis maps between two arcs."""

    source: Arc
    target: Arc
    coeffs: tuple[tuple[MorphKind, Fraction], ...] = field(default=())

    @staticmethod
    def of(source: Arc, target: Arc, coeffs: Mapping[MorphKind, object] | None = None) -> Morphism:
        allowed = admissible_kinds(source, target)
        clean = []
        for kind in KIND_ORDER:
            q = Fraction((coeffs or {}).get(kind, 0))
            if q == 0:
                continue
            if kind not in allowed:
                raise DomainError(f"{kind.code} is not admissible for {source!r} -> {target!r}")
            clean.append((kind, q))
        return Morphism(source, target, tuple(clean))

    @staticmethod
    def basis(b: MorphBasis) -> Morphism:
        return Morphism.of(b.source, b.target, {b.kind: 1})

    @staticmethod
    def zero(source: Arc, target: Arc) -> Morphism:
        return Morphism(source, target, ())

    @property
    def coefficients(self) -> dict[MorphKind, Fraction]:
        return dict(self.coeffs)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def __neg__(self) -> Morphism:
        return Morphism(self.source, self.target, tuple((k, -q) for k, q in self.coeffs))

    def scaled(self, q: object) -> Morphism:
        return Morphism.of(self.source, self.target, {k: v * Fraction(q) for k, v in self.coeffs})

    def images(self) -> dict[str, Element]:
        out: dict[str, Element] = {name: {} for name, _ in generators(self.source)}
        for kind, q in self.coeffs:
            for name, elt in kind_images(kind, self.source, self.target).items():
                _add(out[name], elt, q)
        return out

    def apply(self, elt: Mapping[Monomial, Fraction]) -> Element:
        imgs = self.images()
        out: Element = {}
        for name, s, c in decompose(self.source, elt):
            _add(out, _times_y(imgs[name], s), c)
        if self.target.is_infinite:
            out = {m: c for m, c in out.items() if m[0] == 0}
        return out


def _coordinates(x: Arc, images: Mapping[str, Element], keys: list[tuple[str, Monomial]]) -> list[Fraction]:
    return [images.get(name, {}).get(mono, Fraction(0)) for name, mono in keys]


def express(source: Arc, target: Arc, images: Mapping[str, Mapping[Monomial, Fraction]]) -> Morphism:
    """The morphism with the given generator images, in the normalized basis."""
    kinds = admissible_kinds(source, target)
    basis_imgs = [kind_images(k, source, target) for k in kinds]
    keys = sorted({(name, mono) for imgs in [*basis_imgs, images] for name, elt in imgs.items() for mono in elt})
    if source.is_finite and source.b == source.a + 1:
        # For R(j) the generator x equals x * 1, so only the image of 1 matters.
        keys = [key for key in keys if key[0] == "y^k"]
    columns = [_coordinates(source, imgs, keys) for imgs in basis_imgs]
    target_vec = _coordinates(source, images, keys)
    coeffs = linalg.solve(columns, target_vec)
    if coeffs is None:
        raise DomainError(f"images do not define a morphism {source!r} -> {target!r}")
    return Morphism.of(source, target, dict(zip(kinds, coeffs)))


@lru_cache(maxsize=65536)
def _compose_basis(k_g: MorphKind, k_f: MorphKind, x: Arc, y: Arc, z: Arc) -> Morphism:
    f = Morphism.of(x, y, {k_f: 1})
    g = Morphism.of(y, z, {k_g: 1})
    imgs = {name: g.apply(elt) for name, elt in f.images().items()}
    return express(x, z, imgs)


def compose(g: Morphism, f: Morphism) -> Morphism:
    """``g o f``; requires ``f.target == g.source``."""
    if f.target != g.source:
        raise CompositionError(f"cannot compose {g.source!r}->{g.target!r} after {f.source!r}->{f.target!r}")
    acc: dict[MorphKind, Fraction] = {}
    for kg, qg in g.coeffs:
        for kf, qf in f.coeffs:
            for k, q in _compose_basis(kg, kf, f.source, f.target, g.target).coeffs:
                acc[k] = acc.get(k, Fraction(0)) + qg * qf * q
    return Morphism.of(f.source, g.target, acc)


def add(f: Morphism, g: Morphism) -> Morphism:
    if (f.source, f.target) != (g.source, g.target):
        raise CompositionError("cannot add morphisms with different endpoints")
    acc = f.coefficients
    for k, q in g.coeffs:
        acc[k] = acc.get(k, Fraction(0)) + q
    return Morphism.of(f.source, f.target, acc)


def identity(x: Arc) -> Morphism:
    """The identity: V for finite arcs, II for infinite ones."""
    return Morphism.of(x, x, {MorphKind.INF_TO_INF if x.is_infinite else MorphKind.V: 1})


# -- exchange sequences ------------------------------------------------------

@dataclass(frozen=True)
class ExchangeSequence:
    """``0 -> left -> (+) middle -> right -> 0`` with explicit maps."""

    left: Arc
    middle: tuple[Arc, ...]
    right: Arc
    into_middle: tuple[Morphism, ...]
    onto_right: tuple[Morphism, ...]

    def __post_init__(self) -> None:
        if not 1 <= len(self.middle) <= 2:
            raise ValueError("middle term must have one or two summands")
        if len(self.into_middle) != len(self.middle) or len(self.onto_right) != len(self.middle):
            raise ValueError("one map per middle summand is required")
        for m, f, g in zip(self.middle, self.into_middle, self.onto_right):
            if (f.source, f.target) != (self.left, m) or (g.source, g.target) != (m, self.right):
                raise ValueError("map endpoints do not match the sequence terms")


def _seq(left: Arc, middle: list[Arc], right: Arc, f: list[dict], g: list[dict]) -> ExchangeSequence:
    return ExchangeSequence(
        left,
        tuple(middle),
        right,
        tuple(Morphism.of(left, m, c) for m, c in zip(middle, f)),
        tuple(Morphism.of(m, right, c) for m, c in zip(middle, g)),
    )


V, U = MorphKind.V, MorphKind.U
FI, IF, II = MorphKind.FIN_TO_INF, MorphKind.INF_TO_FIN, MorphKind.INF_TO_INF


def exchange_sequences(x: Arc, y: Arc) -> list[ExchangeSequence]:
    """Non-split extensions ``0 -> x -> E -> y -> 0`` (at most one up to scalar)."""
    if ext1_dim(y, x) == 0:
        return []
    if x.is_finite and y.is_finite:
        if x.a < y.a:
            # (a,b) = x, (c,d) = y with a < c < b < d
            a, b, c, d = x.a, x.b, y.a, y.b
            return [_seq(x, [arc(c, b), arc(a, d)], y, [{V: 1}, {V: 1}], [{V: 1}, {V: -1}])]
        # (c,d) = x, (a,b) = y with a < c < b < d
        a, b, c, d = y.a, y.b, x.a, x.b
        return [_seq(x, [arc(a, c), arc(b, d)], y, [{U: 1}, {V: 1}], [{V: 1}, {U: -1}])]
    if x.is_infinite and y.is_finite:
        a, b, c = y.a, x.b, y.b
        return [_seq(x, [arc(a, b), arc(None, c)], y, [{IF: 1}, {II: 1}], [{V: 1}, {IF: -1}])]
    if x.is_finite and y.is_infinite:
        a, c, b = x.a, x.b, y.b
        return [_seq(x, [arc(b, c), arc(None, a)], y, [{V: 1}, {FI: 1}], [{FI: 1}, {II: -1}])]
    a, b = y.b, x.b
    return [_seq(x, [arc(a, b)], y, [{IF: 1}], [{FI: 1}])]


# -- JSON ------------------------------------------------------------------

def fraction_to_json(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def fraction_from_json(s: object) -> Fraction:
    if isinstance(s, bool):
        raise ValueError(f"not a rational: {s!r}")
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str):
        raise ValueError(f"not a rational: {s!r}")
    return Fraction(s)


def morphism_to_json(m: Morphism) -> dict:
    return {
        "src": arc_to_json(m.source),
        "tgt": arc_to_json(m.target),
        "coeffs": {k.code: fraction_to_json(q) for k, q in m.coeffs},
    }


def morphism_from_json(data: object) -> Morphism:
    if not isinstance(data, dict) or set(data) != {"src", "tgt", "coeffs"}:
        raise ValueError("morphism must be an object with src, tgt and coeffs")
    coeffs = data["coeffs"]
    if not isinstance(coeffs, dict):
        raise ValueError("coeffs must be an object")
    try:
        kinds = {MorphKind(code): fraction_from_json(q) for code, q in coeffs.items()}
    except ValueError as exc:
        raise ValueError(f"bad coefficient map: {exc}") from exc
    return Morphism.of(arc_from_json(data["src"]), arc_from_json(data["tgt"]), kinds)


def sequence_to_json(s: ExchangeSequence) -> dict:
    return {
        "left": arc_to_json(s.left),
        "middle": [arc_to_json(m) for m in s.middle],
        "right": arc_to_json(s.right),
        "f": [morphism_to_json(m) for m in s.into_middle],
        "g": [morphism_to_json(m) for m in s.onto_right],
    }


def sequence_from_json(data: object) -> ExchangeSequence:
    if not isinstance(data, dict):
        raise ValueError("sequence must be an object")
    try:
        return ExchangeSequence(
            arc_from_json(data["left"]),
            tuple(arc_from_json(m) for m in data["middle"]),
            arc_from_json(data["right"]),
            tuple(morphism_from_json(m) for m in data["f"]),
            tuple(morphism_from_json(m) for m in data["g"]),
        )
    except KeyError as exc:
        raise ValueError(f"sequence is missing {exc}") from exc
