"""Closed forms against the linear-algebra oracle over every pair in a window."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from infgon.arcs import Arc, arcs_in_window, cross
from infgon.homext import exchange_sequences, ext1_dim, hom_dim, stable_hom_dim
from infgon.oracle import (
    ext1_oracle,
    ext1_resolution,
    hom_space,
    inclusion_splits,
    module_of,
    stable_hom_space,
    verify_exact,
)


@dataclass
class CheckResult:
    name: str
    checked: int = 0
    mismatches: list[tuple] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def to_json(self, limit: int = 10) -> dict:
        from infgon.arcs import arc_to_json

        def enc(v: object) -> object:
            return arc_to_json(v) if isinstance(v, Arc) else v

        return {
            "checked": self.checked,
            "mismatches": len(self.mismatches),
            "examples": [[enc(v) for v in row] for row in self.mismatches[:limit]],
        }


def window_arcs(n: int) -> list[Arc]:
    """All arcs with endpoints in [-n, n] together with -inf."""
    return arcs_in_window(-n, n)


def crossing_criterion(x: Arc, y: Arc) -> int:
    """Ext^1 dimension predicted by crossing, with the extra infinite-pair case."""
    if x.is_infinite and y.is_infinite:
        return int(x.b < y.b)
    return int(cross(x, y))


def check_hom(arcs: list[Arc]) -> CheckResult:
    res = CheckResult("hom")
    for x in arcs:
        mx = module_of(x)
        for y in arcs:
            res.checked += 1
            closed, oracle = hom_dim(x, y), hom_space(mx, module_of(y)).dimension
            if closed != oracle:
                res.mismatches.append((x, y, closed, oracle))
    return res


def check_ext(arcs: list[Arc]) -> CheckResult:
    res = CheckResult("ext")
    for x in arcs:
        mx = module_of(x)
        for y in arcs:
            res.checked += 1
            my = module_of(y)
            values = (ext1_dim(x, y), ext1_oracle(mx, my), ext1_resolution(mx, my), crossing_criterion(x, y))
            if x.is_boundary or y.is_boundary:
                values += (0,)
            if x.is_finite and y.is_finite:
                values += (ext1_dim(y, x),)
            if len(set(values)) != 1:
                res.mismatches.append((x, y, *values))
    return res


def check_stable_hom(arcs: list[Arc]) -> CheckResult:
    res = CheckResult("stable-hom")
    for x in arcs:
        mx = module_of(x)
        for y in arcs:
            res.checked += 1
            closed, oracle = stable_hom_dim(x, y), stable_hom_space(mx, module_of(y)).dimension
            if closed != oracle:
                res.mismatches.append((x, y, closed, oracle))
    return res


def extension_pairs(arcs: list[Arc]) -> list[tuple[Arc, Arc]]:
    """Pairs (x, y) with Ext^1(y, x) nonzero, i.e. those with an exchange sequence x -> . -> y."""
    return [(x, y) for x in arcs for y in arcs if ext1_dim(y, x)]


def check_sequences(pairs: list[tuple[Arc, Arc]], margins: tuple[int, ...] = (3, 5)) -> CheckResult:
    res = CheckResult("sequences")
    for x, y in pairs:
        res.checked += 1
        seqs = exchange_sequences(x, y)
        if len(seqs) != 1:
            res.mismatches.append((x, y, "count", len(seqs)))
            continue
        s = seqs[0]
        for m in margins:
            if not verify_exact(s, m):
                res.mismatches.append((x, y, "inexact", m))
        if inclusion_splits(s):
            res.mismatches.append((x, y, "split"))
    return res


def sample_pairs(pairs: list[tuple[Arc, Arc]], k: int, seed: int = 0) -> list[tuple[Arc, Arc]]:
    if k >= len(pairs):
        return list(pairs)
    return random.Random(seed).sample(pairs, k)


@dataclass
class VerifyReport:
    window: int
    checks: list[CheckResult]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def to_json(self) -> dict:
        return {"window": self.window, "ok": self.ok, "checks": {c.name: c.to_json() for c in self.checks}}


def verify_window(n: int) -> VerifyReport:
    arcs = window_arcs(n)
    return VerifyReport(
        n,
        [
            check_hom(arcs),
            check_ext(arcs),
            check_stable_hom(arcs),
            check_sequences(extension_pairs(arcs), margins=(3,)),
        ],
    )
