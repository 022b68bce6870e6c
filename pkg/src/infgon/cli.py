"""Command-line front end. JSON in, JSON (or SVG) out.

Exit codes: 0 success, 1 domain error, 2 malformed input. Errors are printed
to stdout as ``{"error": code, "witness": ...}`` with a readable line on stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Sequence, TextIO

from infgon.arcs import Arc, arc_from_json, arc_to_json
from infgon.homext import (
    DomainError,
    exchange_sequences,
    ext1_dim,
    hom_basis,
    morphism_to_json,
    Morphism,
    sequence_to_json,
    stable_hom_dim,
)
from infgon.mutation import (
    BudgetError,
    MutationResult,
    NearestInfinite,
    Schedule,
    apply_schedule,
    exchange_graph,
    flip,
    mutate_subcategory,
)
from infgon.render import render_arcs, render_descriptor
from infgon.triangulation import (
    FULL,
    GENERICALLY_FREE,
    ArcSetDescriptor,
    Violation,
    classify,
    configuration_to_json,
    crossing_violation,
    descriptor_from_json,
    descriptor_to_json,
    is_almost_rigid,
    is_cluster_tilting,
    is_maximal_rigid,
    is_rigid,
    validate,
)
from infgon.verify import verify_window

EXIT_OK, EXIT_DOMAIN, EXIT_MALFORMED = 0, 1, 2
MAX_REGION = 400


class MalformedInput(Exception):
    code = "malformed-input"


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise MalformedInput(message)


def _load_json(text: str) -> object:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"invalid JSON: {exc}") from exc


def _read_source(source: str, stdin: TextIO) -> object:
    """A JSON literal, ``-`` for stdin, or a path to a JSON file."""
    stripped = source.strip()
    if stripped == "-":
        return _load_json(stdin.read())
    if stripped[:1] in "[{":
        return _load_json(stripped)
    path = Path(source)
    if not path.is_file():
        raise MalformedInput(f"no such file: {source}")
    return _load_json(path.read_text())


def _arc(source: str, stdin: TextIO) -> Arc:
    try:
        return arc_from_json(_read_source(source, stdin))
    except (ValueError, TypeError) as exc:
        raise MalformedInput(str(exc)) from exc


def _descriptor(source: str, stdin: TextIO) -> ArcSetDescriptor:
    try:
        return descriptor_from_json(_read_source(source, stdin))
    except MalformedInput:
        raise
    except (ValueError, TypeError) as exc:
        raise MalformedInput(str(exc)) from exc


def _region(text: str) -> tuple[int, int]:
    data = _load_json(text)
    if (
        not isinstance(data, list)
        or len(data) != 2
        or not all(isinstance(v, int) and not isinstance(v, bool) for v in data)
        or data[0] > data[1]
    ):
        raise MalformedInput("region must be [lo, hi] with lo <= hi")
    if data[1] - data[0] > MAX_REGION:
        raise BudgetError(f"region wider than {MAX_REGION}", data)
    return data[0], data[1]


def witness_to_json(w: object) -> object:
    if isinstance(w, Arc):
        return arc_to_json(w)
    if isinstance(w, (list, tuple)):
        return [witness_to_json(v) for v in w]
    if isinstance(w, Violation):
        return {"kind": w.kind, "arcs": witness_to_json(w.witness), "message": w.message}
    if w is None or isinstance(w, (int, str, bool)):
        return w
    return repr(w)


def mutation_to_json(r: MutationResult) -> dict:
    return {
        "removed": arc_to_json(r.removed),
        "added": arc_to_json(r.added),
        "exchange": [sequence_to_json(s) for s in r.exchange],
        "triangulation": descriptor_to_json(r.after),
    }


# -- commands -------------------------------------------------------------------

def cmd_hom(args: argparse.Namespace, stdin: TextIO) -> object:
    x, y = _arc(args.source, stdin), _arc(args.target, stdin)
    basis = [morphism_to_json(Morphism.basis(b)) for b in hom_basis(x, y)]
    return {"dim": len(basis), "basis": basis}


def cmd_ext(args: argparse.Namespace, stdin: TextIO) -> object:
    return {"dim": ext1_dim(_arc(args.source, stdin), _arc(args.target, stdin))}


def cmd_stable_hom(args: argparse.Namespace, stdin: TextIO) -> object:
    return {"dim": stable_hom_dim(_arc(args.source, stdin), _arc(args.target, stdin))}


def cmd_sequences(args: argparse.Namespace, stdin: TextIO) -> object:
    seqs = exchange_sequences(_arc(args.left, stdin), _arc(args.right, stdin))
    return {"sequences": [sequence_to_json(s) for s in seqs]}


def cmd_classify(args: argparse.Namespace, stdin: TextIO) -> object:
    return configuration_to_json(classify(_descriptor(args.triangulation, stdin)))


def cmd_check(args: argparse.Namespace, stdin: TextIO) -> object:
    d = _descriptor(args.triangulation, stdin)
    prop = args.property
    witness: object = None
    if prop in ("mar", "maximal-almost-rigid"):
        v = validate(d)
        value, witness = v is None, v
    elif prop == "almost-rigid":
        v = crossing_violation(d)
        value, witness = is_almost_rigid(d), v
    elif prop == "rigid":
        value = is_rigid(d)
        if not value:
            infinite = sorted(x for x in d.core if x.is_infinite)
            witness = crossing_violation(d) or (infinite if len(infinite) > 1 else "infinitely many infinite arcs")
    elif prop == "maximal-rigid":
        value, case = is_maximal_rigid(d)
        witness = case
    else:
        value = is_cluster_tilting(d, args.ambient)
    return {"property": prop, "value": value, "witness": witness_to_json(witness)}


def cmd_mutate(args: argparse.Namespace, stdin: TextIO) -> object:
    d = _descriptor(args.triangulation, stdin)
    g = _arc(args.arc, stdin)
    r = flip(d, g) if args.direction == "flip" else mutate_subcategory(d, g, args.direction)
    return mutation_to_json(r)


def _selector(data: object) -> Arc | NearestInfinite:
    if isinstance(data, dict):
        if data.get("rule") != "nearest-infinite":
            raise MalformedInput(f"unknown selector rule {data.get('rule')!r}")
        anchor = data.get("anchor", 0)
        if isinstance(anchor, bool) or not isinstance(anchor, int):
            raise MalformedInput("anchor must be an integer")
        return NearestInfinite(anchor)
    try:
        return arc_from_json(data)
    except ValueError as exc:
        raise MalformedInput(str(exc)) from exc


def schedule_from_json(data: object) -> Schedule:
    if isinstance(data, list):
        return Schedule(tuple(_selector(s) for s in data))
    if isinstance(data, dict) and isinstance(data.get("selectors"), list):
        repeat = data.get("repeat", 1)
        if isinstance(repeat, bool) or not isinstance(repeat, int) or repeat < 0:
            raise MalformedInput("repeat must be a non-negative integer")
        return Schedule(tuple(_selector(s) for s in data["selectors"]), repeat)
    raise MalformedInput("schedule must be an array of selectors or {selectors, repeat}")


def cmd_schedule(args: argparse.Namespace, stdin: TextIO) -> object:
    d = _descriptor(args.triangulation, stdin)
    schedule = schedule_from_json(_read_source(args.schedule, stdin))
    region = _region(args.region)
    rep = apply_schedule(d, schedule, region, budget=args.budget, patience=args.patience)
    halted = None
    if rep.halted is not None:
        h = rep.halted
        halted = {"step": h.step, "arc": None if h.arc is None else arc_to_json(h.arc), "reason": h.reason}
    return {
        "steps": len(rep.flipped),
        "flipped": [arc_to_json(g) for g in rep.flipped],
        "stabilized_at": rep.stabilized_at,
        "halted": halted,
        "final_restriction": [arc_to_json(x) for x in rep.restrictions[-1]],
        "trajectory": [descriptor_to_json(t) for t in rep.trajectory],
    }


def cmd_explore(args: argparse.Namespace, stdin: TextIO) -> object:
    g = exchange_graph(args.polygon)
    return {"polygon": g.polygon, "vertices": g.vertices, "edges": g.edges, "connected": g.connected}


def cmd_verify(args: argparse.Namespace, stdin: TextIO) -> object:
    report = verify_window(args.window)
    return report.to_json(), (EXIT_OK if report.ok else EXIT_DOMAIN)


def cmd_render(args: argparse.Namespace, stdin: TextIO) -> object:
    data = _read_source(args.triangulation, stdin)
    region = _region(args.region) if args.region else None
    try:
        highlight = [arc_from_json(h) for h in _load_json(args.highlight)] if args.highlight else []
        if isinstance(data, list):
            arcs = [arc_from_json(x) for x in data]
            svg = render_arcs(arcs, region, highlight)
        else:
            svg = render_descriptor(descriptor_from_json(data), region, highlight)
    except (ValueError, TypeError) as exc:
        raise MalformedInput(str(exc)) from exc
    if args.output and args.output != "-":
        Path(args.output).write_text(svg)
        return {"written": args.output}
    return svg


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="infgon", description="Arc combinatorics and graded MCM modules over C[x,y]/(x^2).")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name, fn, a, b in (
        ("hom", cmd_hom, "source", "target"),
        ("ext", cmd_ext, "source", "target"),
        ("stable-hom", cmd_stable_hom, "source", "target"),
        ("sequences", cmd_sequences, "left", "right"),
    ):
        sp = sub.add_parser(name)
        sp.add_argument(a, help="arc as JSON, e.g. '[-3,0]' or '[\"-inf\",2]'")
        sp.add_argument(b)
        sp.set_defaults(func=fn)

    sp = sub.add_parser("classify")
    sp.add_argument("triangulation", help="descriptor JSON, file path, or - for stdin")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("check")
    sp.add_argument("triangulation")
    sp.add_argument(
        "--property",
        required=True,
        choices=["rigid", "maximal-rigid", "cluster-tilting", "almost-rigid", "mar", "maximal-almost-rigid"],
    )
    sp.add_argument("--ambient", choices=[FULL, GENERICALLY_FREE], default=FULL)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("mutate")
    sp.add_argument("triangulation")
    sp.add_argument("--arc", required=True)
    sp.add_argument("--direction", choices=["flip", "left", "right"], default="flip")
    sp.set_defaults(func=cmd_mutate)

    sp = sub.add_parser("schedule")
    sp.add_argument("triangulation")
    sp.add_argument("schedule", help="JSON array of selectors or {\"selectors\": [...], \"repeat\": n}")
    sp.add_argument("--region", required=True, help="[lo,hi]")
    sp.add_argument("--budget", type=int, default=1000)
    sp.add_argument("--patience", type=int, default=2)
    sp.set_defaults(func=cmd_schedule)

    sp = sub.add_parser("explore")
    sp.add_argument("--polygon", type=int, required=True)
    sp.set_defaults(func=cmd_explore)

    sp = sub.add_parser("verify")
    sp.add_argument("--window", type=int, default=6)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("render")
    sp.add_argument("triangulation", help="descriptor JSON or a JSON array of arcs")
    sp.add_argument("-o", "--output", default="-")
    sp.add_argument("--region", help="[lo,hi]")
    sp.add_argument("--highlight", help="JSON array of arcs drawn dashed")
    sp.set_defaults(func=cmd_render)
    return p


def _color(stream: TextIO) -> bool:
    if os.environ.get("INFGON_COLOR", "").lower() == "never":
        return False
    return hasattr(stream, "isatty") and stream.isatty()


def _fail(code: str, message: str, witness: object, stdout: TextIO, stderr: TextIO) -> None:
    stdout.write(json.dumps({"error": code, "witness": witness_to_json(witness)}, sort_keys=True) + "\n")
    label = "\x1b[31merror\x1b[0m" if _color(stderr) else "error"
    stderr.write(f"{label}: {message}\n")


def run(
    argv: Sequence[str] | None = None,
    stdin: TextIO | None = None,
    stdout: TextIO | None = None,
    stderr: TextIO | None = None,
) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        result = args.func(args, stdin)
    except MalformedInput as exc:
        _fail(MalformedInput.code, str(exc), str(exc), stdout, stderr)
        return EXIT_MALFORMED
    except DomainError as exc:
        _fail(exc.code, str(exc), exc.witness, stdout, stderr)
        return EXIT_DOMAIN
    except (ValueError, TypeError) as exc:
        _fail(MalformedInput.code, str(exc), str(exc), stdout, stderr)
        return EXIT_MALFORMED
    code = EXIT_OK
    if isinstance(result, tuple):
        result, code = result
    if isinstance(result, str):
        stdout.write(result)
    else:
        stdout.write(json.dumps(result, sort_keys=True) + "\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
