"""Command-line front end: ``weldlab build | analyze | barrier | sweep``."""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path
from typing import Any, Sequence

from . import barrier as bar
from .builders import build_cubic_lattice, build_repetition, build_solid, build_three_weld
from .codefile import CodeFileError, dumps, read_code
from .css import CssCode, Pauli, SearchBudgetError, commutation_audit, encoded_qubits, min_weight_logical

log = logging.getLogger("weldlab")

BUILDERS = ("solid", "repetition", "three-weld", "welded")


class CliError(Exception):
    pass


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _json(obj: Any) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _build(args: argparse.Namespace) -> CssCode:
    if args.builder == "solid":
        return build_solid(args.side)
    if args.builder == "repetition":
        return build_repetition(args.spins)
    if args.builder == "three-weld":
        return build_three_weld(args.side)
    if args.lattice < 1:
        raise ValueError("--lattice must be at least 1")
    return build_cubic_lattice(args.side, args.lattice)


def cmd_build(args: argparse.Namespace) -> int:
    code = _build(args)
    _emit(dumps(code), args.out)
    return 0


def _min_weight_entry(code: CssCode, pauli: Pauli, cap: int, budget: int) -> dict[str, Any]:
    try:
        op = min_weight_logical(code, pauli, cap, budget)
    except SearchBudgetError:
        return {"status": "skipped", "weight": None, "reason": f"search budget {budget} exhausted"}
    if op is None:
        return {"status": "above_cap", "weight": None, "reason": f"no logical of weight <= {cap}"}
    return {"status": "found", "weight": op.weight, "support": op.qubits()}


def cmd_analyze(args: argparse.Namespace) -> int:
    code = read_code(args.file)
    audit = commutation_audit(code)
    report: dict[str, Any] = {
        "n": code.n,
        "k": encoded_qubits(code) if audit else None,
        "audit": audit,
        "x_generators": len(code.x_generators),
        "z_generators": len(code.z_generators),
        "builder": code.metadata.get("builder"),
    }
    if audit and report["k"] >= 1:
        report["min_weights"] = {
            p.value.lower(): _min_weight_entry(code, p, args.weight_cap, args.budget) for p in (Pauli.X, Pauli.Z)
        }
    _emit(_json(report), args.out)
    return 0


def _threads(args: argparse.Namespace) -> int:
    return args.threads if args.threads is not None else bar.default_workers()


def cmd_barrier(args: argparse.Namespace) -> int:
    code = read_code(args.file)
    if not commutation_audit(code):
        raise CliError("generators do not commute; the Hamiltonian is not a stabilizer code")
    if encoded_qubits(code) < 1:
        raise CliError("code encodes no qubits, so no logical barrier exists")
    res = bar.barrier_bounds(code, args.sector, args.state_cap, workers=_threads(args))
    payload = {"sector": args.sector, "state_cap": args.state_cap, **res.to_dict()}
    if args.emit_witness:
        if res.witness is None:
            log.warning("no witness path to write")
        else:
            Path(args.emit_witness).write_text(_json(res.witness.to_dict()))
    _emit(_json(payload), args.out)
    return 0


def _sweep_points(raw: Any) -> tuple[list[tuple[int, int]], dict[str, Any]]:
    opts: dict[str, Any] = {}
    if isinstance(raw, dict):
        opts = {k: v for k, v in raw.items() if k != "points"}
        raw = raw.get("points")
    if not isinstance(raw, list):
        raise CliError("sweep spec must be a list of [N, R] pairs or an object with 'points'")
    points = []
    for i, p in enumerate(raw):
        if not (isinstance(p, list) and len(p) == 2 and all(isinstance(v, int) for v in p)):
            raise CliError(f"point {i} is not an [N, R] integer pair: {p!r}")
        if p[0] < 3 or p[1] < 1:
            raise CliError(f"point {i}: need N >= 3 and R >= 1, got {p!r}")
        points.append((p[0], p[1]))
    return points, opts


def cmd_sweep(args: argparse.Namespace) -> int:
    try:
        raw = json.loads(Path(args.spec).read_text())
    except json.JSONDecodeError as exc:
        raise CliError(f"{args.spec}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    points, opts = _sweep_points(raw)
    cap = args.state_cap if args.state_cap is not None else int(opts.get("state_cap", 10**7))
    rows = bar.scaling_sweep(points, cap, workers=_threads(args), exact=not args.no_exact)
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.DictWriter(out, fieldnames=bar.SWEEP_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: "" if v is None else v for k, v in row.items()})
    finally:
        if args.out:
            out.close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="weldlab", description="Welded solid codes and their energy barriers.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="write a code file")
    b.add_argument("builder", choices=BUILDERS)
    b.add_argument("--side", type=int, default=3, help="solid side length N (>= 3)")
    b.add_argument("--lattice", type=int, default=2, help="cubic weld lattice width R (welded only)")
    b.add_argument("--spins", type=int, default=5, help="chain length (repetition only)")
    b.add_argument("--out", help="output path (default stdout)")
    b.set_defaults(func=cmd_build)

    a = sub.add_parser("analyze", help="n, k, commutation audit and minimum logical weights")
    a.add_argument("file")
    a.add_argument("--weight-cap", type=int, default=12)
    a.add_argument("--budget", type=int, default=2_000_000, help="node budget of the weight search")
    a.add_argument("--out")
    a.set_defaults(func=cmd_analyze)

    r = sub.add_parser("barrier", help="energy barrier of one logical sector")
    r.add_argument("file")
    r.add_argument("--sector", choices=("x", "z"), default="z")
    r.add_argument("--state-cap", type=int, default=10**7, help="visited states allowed per energy level")
    r.add_argument("--emit-witness", metavar="PATH", help="write the witness error path as JSON")
    r.add_argument("--threads", type=int, help="search threads (default: $WELDLAB_THREADS or 1)")
    r.add_argument("--out")
    r.set_defaults(func=cmd_barrier)

    s = sub.add_parser("sweep", help="CSV of sizes and barrier bounds over (N, R) points")
    s.add_argument("spec", help="JSON list of [N, R] pairs")
    s.add_argument("--out", help="CSV path (default stdout)")
    s.add_argument("--state-cap", type=int)
    s.add_argument("--threads", type=int)
    s.add_argument("--no-exact", action="store_true", help="skip the exact Z search")
    s.set_defaults(func=cmd_sweep)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="weldlab: %(message)s")
    try:
        return args.func(args)
    except (CliError, CodeFileError, ValueError, OSError) as exc:
        print(f"weldlab: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
