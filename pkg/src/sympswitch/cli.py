"""Command-line front end: ``build``, ``verify`` and ``scan``.

Exit codes: 0 all checks passed, 1 a check failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .gf2 import MAX_NU, MIN_NU, check_nu
from .graph import build_symplectic
from .graph6 import graph6_encode
from .orbits import SpecialQuadruple
from .switching import SWITCHED_VARIANTS, VARIANTS, build_variant
from .triples import degeneracy_notes, scan_min_nonzero, table52_expected
from .verify import run_suite

log = logging.getLogger("sympswitch")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
DEFAULT_SEED = 20240101
TABLE_VARIANTS = ("base",) + SWITCHED_VARIANTS


class UsageError(Exception):
    pass


def _quadruple(text: str | None, nu: int) -> SpecialQuadruple | None:
    """Parse ``v1,v2,v3`` (integers, or 0/1 coordinate strings prefixed with ``b``)."""
    if not text:
        return None
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3:
        raise UsageError("--quadruple takes three vectors v1,v2,v3")
    vs = []
    for p in parts:
        if p.startswith("b"):
            vs.append(sum(int(c) << i for i, c in enumerate(p[1:])))
        else:
            vs.append(int(p, 0))
    try:
        return SpecialQuadruple.from_triple(*vs, nu=nu)
    except ValueError as exc:
        raise UsageError(f"invalid quadruple: {exc}") from None


def _emit(report: dict, fmt: str, out: Path | None) -> None:
    if fmt == "json":
        text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    else:
        text = _as_text(report)
    if out is None:
        sys.stdout.write(text)
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text, encoding="utf-8")


def _as_text(report: dict, indent: str = "") -> str:
    lines = []
    for key in sorted(report):
        value = report[key]
        if isinstance(value, dict):
            lines.append(f"{indent}{key}:")
            lines.append(_as_text(value, indent + "  ").rstrip("\n"))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{indent}{key}:")
            for item in value:
                lines.append(f"{indent}  - " + ", ".join(f"{k}={item[k]}" for k in sorted(item)))
        else:
            lines.append(f"{indent}{key}: {value}")
    return "\n".join(lines) + "\n"


def _config(args: argparse.Namespace) -> dict:
    cfg = {"command": args.command, "nu": args.nu, "version": __version__}
    for key in ("variant", "all_variants", "sample", "seed", "quadruple", "histogram", "graph6"):
        if getattr(args, key, None) is not None:
            cfg[key] = getattr(args, key)
    if args.command == "scan":
        cfg["mode"] = "sampled" if args.sample else "exhaustive"
    return cfg


def cmd_build(args: argparse.Namespace) -> int:
    nu = args.nu
    quad = _quadruple(args.quadruple, nu)
    var = build_variant(nu, args.variant, quad)
    for w in var.warnings:
        log.warning(w)
    outdir = Path(args.out or ".")
    outdir.mkdir(parents=True, exist_ok=True)
    stem = f"sp{2 * nu}_2_{args.variant}"
    files = {"graph6": outdir / f"{stem}.g6"}
    files["graph6"].write_bytes(graph6_encode(var.graph) + b"\n")
    if var.partition is not None:
        files["partition"] = outdir / f"{stem}.partition.json"
        files["partition"].write_text(json.dumps(var.partition.to_json(), indent=2, sort_keys=True) + "\n")
    if var.record is not None:
        files["switch"] = outdir / f"{stem}.switch.json"
        files["switch"].write_text(json.dumps(var.record.to_json(), sort_keys=True) + "\n")
    report = {
        "config": _config(args),
        "n": var.graph.n,
        "edges": var.graph.num_edges(),
        "files": {k: str(v) for k, v in files.items()},
        "toggled_pairs": 0 if var.record is None else len(var.record.toggles),
        "warnings": list(var.warnings),
    }
    _emit(report, args.format, None)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    quad = _quadruple(args.quadruple, args.nu)
    suite = run_suite(args.nu, quad, args.graph6)
    report = {"config": _config(args), "checks": suite.results, "ok": suite.ok}
    _emit(report, args.format, Path(args.out) if args.out else None)
    return EXIT_OK if suite.ok else EXIT_FAIL


def _scan_one(nu: int, variant: str, args: argparse.Namespace, quad, base) -> dict:
    var = build_variant(nu, variant, quad, base=base)
    mode = "sampled" if args.sample else "exhaustive"
    try:
        rep = scan_min_nonzero(
            var.graph, mode, samples=args.sample, seed=args.seed,
            threads=args.threads, histogram=args.histogram,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    log.info("%s: min nonzero %s over %d triples", variant, rep.min_nonzero, rep.triples_examined)
    out = rep.to_json(var.graph.labels)
    out["graph"] = variant
    if mode == "sampled":
        out["label"] = "sampled minimum (upper bound on the true minimum)"
    if var.warnings:
        out["warnings"] = list(var.warnings)
    if variant in TABLE_VARIANTS or variant == "AH2cell":
        expected = table52_expected(variant, nu)
        out["expected"] = expected
        if nu >= 4:
            got = rep.min_nonzero
            out["matches_expected"] = (got == expected) if mode == "exhaustive" else (got is not None and got >= expected)
    return out


def cmd_scan(args: argparse.Namespace) -> int:
    nu = args.nu
    quad = _quadruple(args.quadruple, nu)
    if bool(args.all_variants) == (args.variant is not None):
        raise UsageError("give exactly one of --variant or --all-variants")
    variants = TABLE_VARIANTS if args.all_variants else (args.variant,)
    base = build_symplectic(nu)
    scans = [_scan_one(nu, v, args, quad, base) for v in variants]
    report: dict = {"config": _config(args), "scans": scans}
    notes = degeneracy_notes(nu)
    if nu < 4:
        report["table_asserted"] = False
        report["degeneracies"] = notes
    ok = all(s.get("matches_expected", True) for s in scans)
    if args.all_variants:
        minima = [s["min_nonzero"] for s in scans]
        report["minima"] = dict(zip(variants, minima))
        distinct = len(set(minima)) == len(minima)
        report["verdict"] = "pairwise distinct" if distinct else "not pairwise distinct"
        if nu >= 4 and not args.sample:
            ok = ok and distinct
    report["ok"] = ok
    _emit(report, args.format, Path(args.out) if args.out else None)
    return EXIT_OK if ok else EXIT_FAIL


def _nu(text: str) -> int:
    try:
        return check_nu(int(text))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sympswitch", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("--nu", type=_nu, required=True, help=f"half the dimension, {MIN_NU}..{MAX_NU}")
        sp.add_argument("--quadruple", help="special 4-set as v1,v2,v3 (ints or b-prefixed coordinate strings)")
        sp.add_argument("--format", choices=("json", "text"), default="json")
        sp.add_argument("--out", help="output directory (build) or report file (verify, scan)")
        sp.add_argument("-v", "--verbose", action="store_true")

    b = sub.add_parser("build", help="write a graph in graph6 plus partition and switch JSON")
    common(b)
    b.add_argument("--variant", choices=VARIANTS, default="base")
    b.set_defaults(func=cmd_build)

    v = sub.add_parser("verify", help="run the invariant suite")
    common(v)
    v.add_argument("--graph6", help="also check this graph6 file for the expected SRG parameters")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("scan", help="nonzero minimum of common neighbours of three vertices")
    common(s)
    which = s.add_mutually_exclusive_group()
    which.add_argument("--variant", choices=VARIANTS)
    which.add_argument("--all-variants", action="store_true", default=None)
    how = s.add_mutually_exclusive_group()
    how.add_argument("--exhaustive", action="store_true")
    how.add_argument("--sample", type=int, metavar="N")
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.add_argument("--threads", type=int, default=1)
    s.add_argument("--histogram", action="store_true", default=None)
    s.set_defaults(func=cmd_scan)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s: %(message)s"))
    log.handlers = [handler]
    log.propagate = False
    log.setLevel(logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"sympswitch: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
