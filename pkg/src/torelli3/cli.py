"""Command line interface for the torelli3 toolkit.

Each subcommand runs one of the standard verification suites and prints
a JSON report with the shape::

    {"command": ..., "config": ..., "verdicts": ..., "ok": ...,
     "timing": {"seconds": ...}, "tool": {"name": ..., "version": ...}}

Exit status is 0 when every verdict agrees with the packaged
expectations, 1 on a mismatch, and 2 on usage errors or when a
truncation window is too small for the requested computation.  Set the
``TORELLI3_LOG`` environment variable (``debug``, ``info``, ...) to see
progress on stderr.
"""

import argparse
import json
import logging
import os
import random
import sys
import time
from importlib import resources

from . import __version__
from .cycles import PreconditionError, build_ladder
from .lattice import (
    A1,
    A2,
    A3,
    B1,
    B2,
    B3,
    STANDARD_SPLITTING,
    Splitting,
    SymplecticSubgroup,
    apply_matrix,
    smith_normal_form,
    transform_splitting,
    transvection_matrix,
)
from .sclasses import (
    lantern_check,
    o_module_reduce,
    per_splitting_rank,
    relation_matrix,
    s3_equivariance_check,
)
from .specseq import (
    Truncation,
    TruncationOverflowError,
    build_e1,
    check_image_separation,
    check_injective,
    d22_apply,
    d31_apply,
    e2_13_kernel,
    e2_13_tilde_kernel,
    vanishing_census,
)
from .surface import cd_arithmetic_line, census_json, classify_types

log = logging.getLogger("torelli3")

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2

DEFAULT_K = 3
DEFAULT_MN = (1, 2)
ZERO = A1 - A1


def _span(*vectors):
    return SymplecticSubgroup.spanned_by(vectors)


def plain_splitting_family():
    """Standard splitting plus three transvection translates.

    The translates realize the three classification letters with respect
    to the first handle class: two of type a, one of type b, one of
    type c.
    """
    family = [STANDARD_SPLITTING]
    for c in (A2 + A3, B1 + A2, B1 + A2 + A3):
        family.append(
            transform_splitting(transvection_matrix(c), STANDARD_SPLITTING)
        )
    return tuple(family)


def tilde_splitting_family():
    """Four splittings isolating the first handle, one per crossing type
    with respect to the probe class a2 + a3."""
    return (
        Splitting(
            [
                _span(A1, B1),
                _span(A2 + A3, B3),
                _span(A2, B2 - B3),
            ]
        ),
        Splitting(
            [
                _span(A1, B1 - B3),
                _span(A1 + A2 + A3, B2),
                _span(A1 + A3, B3 - B2),
            ]
        ),
        STANDARD_SPLITTING,
        Splitting(
            [
                _span(A1, B1 - B3),
                _span(A2, B2),
                _span(A1 + A3, B3),
            ]
        ),
    )


LANTERN_CONFIGS = (
    (ZERO, ZERO, ZERO, ZERO, ZERO, ZERO, ZERO),
    (A2, -A2, ZERO, ZERO, ZERO, A2, A2),
    (A1, A2, A3, A1 + A2 + A3, A1 + A2, A2 + A3, A1 + A3),
    (A1, A2 + A3, A2 - A3, A1 + 2 * A2, A1 + A2 + A3, 2 * A2, A1 + A2 - A3),
    (A1, ZERO, A3, A1 + A3, A1, A3, A1 + A3),
)

TRANSLATE_POOL = (A1, A2, A3, B1, B2, B3, A1 + B2, A2 - B3, B1 + A2 + A3)


def load_expectations():
    """Packaged verdict expectations, decoded from the data directory."""
    path = resources.files("torelli3").joinpath("data/expectations.json")
    return json.loads(path.read_text(encoding="utf-8"))


# ---------------------------------------------------------------------------
# suites


def run_types(exp, dim=None):
    expected = exp["types"]["counts"]
    if dim is None:
        counts = [len(classify_types(3, p)) for p in range(4)]
        log.info("census counts by dimension: %s", counts)
        verdicts = {"counts": counts, "total": sum(counts)}
        return {}, verdicts, counts == expected
    count = len(classify_types(3, dim))
    want = expected[dim] if dim < len(expected) else 0
    verdicts = {"count": count, "expected": want}
    return {"dim": dim}, verdicts, count == want


def run_cells(exp):
    records = census_json()
    lines = []
    for p in range(4):
        for entry in classify_types(3, p):
            lines.append(cd_arithmetic_line(entry.witness))
    worst = max(r["dim"] + r["cd_bound"] for r in records)
    required = exp["cells"]["required_lines"]
    verdicts = {
        "count": len(records),
        "max_dim_plus_cd": worst,
        "arithmetic": lines,
    }
    ok = worst == exp["cells"]["max_dim_plus_cd"] and all(
        line in lines for line in required
    )
    return {}, verdicts, ok


def run_ladder(exp, m, n, K):
    ladder = build_ladder(m, n, K)
    nv = len(ladder.vertices())
    ne = len(ladder.edges())
    nf = len(ladder.two_cells())
    euler = nv - ne + nf
    top = ladder.cell_psi.get(("R", 0), ladder.cell_psi[ladder.closing])
    psi = {
        "top": top,
        "previous": ladder.cell_psi[("R", -1)],
        "vertical": ladder.cell_psi[("V", 0)],
    }
    checks = {
        "pair_endpoints": ladder.check_pair_endpoints(),
        "rung_cofaces": ladder.check_rung_cofaces(),
        "ladder_property": ladder.check_ladder_property(),
        "psi_growth": ladder.check_psi_growth(),
    }
    log.info("ladder (%d, %d, K=%d): %d/%d/%d cells", m, n, K, nv, ne, nf)
    verdicts = {
        "vertices": nv,
        "edges": ne,
        "cells": nf,
        "euler": euler,
        "psi": psi,
        "checks": checks,
    }
    ok = (
        euler == exp["ladder"]["euler"]
        and all(checks.values()) == exp["ladder"]["checks_pass"]
        and psi["top"] == m + n
        and psi["previous"] == 2 * m + n
        and psi["vertical"] == m + 2 * n
    )
    return {"m": m, "n": n, "K": K}, verdicts, ok


def run_check_d31(exp, K):
    orbits = tuple(str(e.fingerprint) for e in classify_types(3, 3))
    trunc = Truncation(K=K, orbits=orbits)
    src = build_e1((3, 1), trunc)
    mat = d31_apply(src)
    injective = check_injective(mat)
    verdicts = {
        "orbits": len(orbits),
        "columns": len(mat.cols),
        "rank": mat.rank(),
        "injective": injective,
    }
    ok = injective == exp["check"]["d31"]["injective"]
    return {"K": K}, verdicts, ok


def run_check_d22(exp, m, n, K, height):
    ladder = build_ladder(m, n, K)
    u = _span(A3, B3)
    trunc = Truncation(K=K, ladder=ladder, subgroups=(u,), height=height)
    src = build_e1((2, 2), trunc)
    mat = d22_apply(src, ladder)
    kernel_rank = len(mat.kernel_vectors())
    separation = check_image_separation(ladder, u)
    verdicts = {
        "basis": len(src),
        "kernel_rank": kernel_rank,
        "separation": separation,
    }
    want = exp["check"]["d22"]
    ok = kernel_rank == want["kernel_rank"] and separation == want["separation"]
    return {"m": m, "n": n, "K": K, "height": height}, verdicts, ok


def run_check_d13(exp):
    family = plain_splitting_family()
    trunc = Truncation(splittings=family, x=A1)
    src = build_e1((1, 3), trunc)
    result = e2_13_kernel(src)
    letters = {}
    for (letter, key, _), _tag in src.basis:
        letters.setdefault(key, letter)
    counts = {c: sum(1 for v in letters.values() if v == c) for c in "abc"}
    expected_rank = counts["a"] + 2 * counts["b"] + 2 * counts["c"]
    verdicts = {
        "splittings": len(family),
        "counts": counts,
        "kernel_rank": result["rank"],
        "expected_rank": expected_rank,
    }
    return {}, verdicts, result["rank"] == expected_rank


def run_check_d13_tilde(exp):
    family = tilde_splitting_family()
    trunc = Truncation(splittings=family, x=A1, y=A2 + A3)
    src = build_e1((1, 3), trunc)
    result = e2_13_tilde_kernel(src)
    types = {}
    for (ytype, key, _), _tag in src.basis:
        types.setdefault(key, ytype)
    counts = {str(t): sum(1 for v in types.values() if v == t) for t in (1, 2, 3, 4)}
    expected_rank = sum(counts.values())
    verdicts = {
        "splittings": len(family),
        "counts": counts,
        "kernel_rank": result["rank"],
        "expected_rank": expected_rank,
    }
    return {}, verdicts, result["rank"] == expected_rank


def run_kernel(exp):
    table = vanishing_census()
    bounds = {str(r["fingerprint"]): r["zero_above"] for r in table["types"]}
    verdicts = {
        "rows": len(table["types"]),
        "tilde_0_4_zero": table["tilde_0_4_zero"],
        "bounds": bounds,
    }
    want = exp["kernel"]
    ok = (
        len(table["types"]) == want["rows"]
        and table["tilde_0_4_zero"] == want["tilde_0_4_zero"]
    )
    return {}, verdicts, ok


def run_smodule(exp):
    factors, _, _ = smith_normal_form(relation_matrix())
    nonzero = [f for f in factors if f]
    rank = per_splitting_rank()
    torsion_free = all(f == 1 for f in nonzero)
    equivariant = s3_equivariance_check()
    verdicts = {
        "rank": rank,
        "invariant_factors": nonzero,
        "torsion_free": torsion_free,
        "equivariant": equivariant,
        "diagonal_collapses": o_module_reduce((1, 1, 1)) == (0, 0),
    }
    want = exp["smodule"]
    ok = (
        rank == want["rank"]
        and torsion_free == want["torsion_free"]
        and equivariant == want["equivariant"]
        and verdicts["diagonal_collapses"]
    )
    return {}, verdicts, ok


def run_lantern(exp, seed=None):
    configs = list(LANTERN_CONFIGS)
    translated = 0
    if seed is not None:
        rng = random.Random(seed)
        for base in LANTERN_CONFIGS:
            c = rng.choice(TRANSLATE_POOL)
            power = rng.choice((1, -1, 2))
            mat = transvection_matrix(c, power=power)
            configs.append(tuple(apply_matrix(mat, v) for v in base))
            translated += 1
    results = [bool(lantern_check(*config)) for config in configs]
    verdicts = {
        "configs": len(configs),
        "translated": translated,
        "results": results,
        "all_pass": all(results),
    }
    ok = all(results) == exp["lantern"]["all_pass"]
    return {"seed": seed}, verdicts, ok


REPORT_SUITES = (
    ("types", lambda exp, args: run_types(exp)),
    ("cells", lambda exp, args: run_cells(exp)),
    ("ladder", lambda exp, args: run_ladder(exp, args.mn[0], args.mn[1], args.K)),
    ("d31", lambda exp, args: run_check_d31(exp, args.K)),
    (
        "d22",
        lambda exp, args: run_check_d22(exp, args.mn[0], args.mn[1], args.K, 1),
    ),
    ("d13", lambda exp, args: run_check_d13(exp)),
    ("d13-tilde", lambda exp, args: run_check_d13_tilde(exp)),
    ("kernel", lambda exp, args: run_kernel(exp)),
    ("smodule", lambda exp, args: run_smodule(exp)),
    ("lantern", lambda exp, args: run_lantern(exp, args.seed)),
)


def run_report(exp, args):
    sections = {}
    ok = True
    for name, suite in REPORT_SUITES:
        config, verdicts, section_ok = suite(exp, args)
        log.info("section %s: %s", name, "ok" if section_ok else "MISMATCH")
        sections[name] = {
            "config": config,
            "verdicts": verdicts,
            "ok": section_ok,
        }
        ok = ok and section_ok
    config = {"K": args.K, "mn": list(args.mn), "seed": args.seed}
    return config, sections, ok


# ---------------------------------------------------------------------------
# wiring


def _cmd_types(args, exp):
    return run_types(exp, dim=args.dim)


def _cmd_cells(args, exp):
    return run_cells(exp)


def _cmd_ladder(args, exp):
    return run_ladder(exp, args.mn[0], args.mn[1], args.K)


def _cmd_check(args, exp):
    if args.target == "d31":
        config, verdicts, ok = run_check_d31(exp, args.K)
    elif args.target == "d22":
        config, verdicts, ok = run_check_d22(
            exp, args.mn[0], args.mn[1], args.K, args.height
        )
    elif args.target == "d13":
        config, verdicts, ok = run_check_d13(exp)
    else:
        config, verdicts, ok = run_check_d13_tilde(exp)
    config = {"target": args.target, **config}
    return config, verdicts, ok


def _cmd_kernel(args, exp):
    return run_kernel(exp)


def _cmd_smodule(args, exp):
    return run_smodule(exp)


def _cmd_lantern(args, exp):
    return run_lantern(exp, seed=args.seed)


def _cmd_report(args, exp):
    return run_report(exp, args)


def _mn(text):
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected two integers like 1,2")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError as err:
        raise argparse.ArgumentTypeError("expected two integers like 1,2") from err


def build_parser():
    parser = argparse.ArgumentParser(
        prog="torelli3",
        description="verification suites for the genus 3 handlebody census",
    )
    parser.add_argument(
        "--version", action="version", version=f"torelli3 {__version__}"
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--json", metavar="PATH", help="also write the report to this file"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "types", parents=[common], help="count multicurve types by dimension"
    )
    p.add_argument("--dim", type=int, help="restrict to one dimension")
    p.set_defaults(run=_cmd_types)

    p = sub.add_parser(
        "cells", parents=[common], help="dimension bounds over the census"
    )
    p.set_defaults(run=_cmd_cells)

    p = sub.add_parser(
        "ladder", parents=[common], help="build and audit a truncated ladder"
    )
    p.add_argument("--mn", type=_mn, default=DEFAULT_MN, help="weights, e.g. 1,2")
    p.add_argument("--K", type=int, default=DEFAULT_K, help="truncation window")
    p.set_defaults(run=_cmd_ladder)

    p = sub.add_parser(
        "check", parents=[common], help="differential injectivity and kernels"
    )
    p.add_argument("target", choices=("d31", "d22", "d13", "d13-tilde"))
    p.add_argument("--mn", type=_mn, default=DEFAULT_MN, help="weights, e.g. 1,2")
    p.add_argument("--K", type=int, default=DEFAULT_K, help="truncation window")
    p.add_argument("--height", type=int, default=1, help="subgroup height cap")
    p.set_defaults(run=_cmd_check)

    p = sub.add_parser(
        "kernel", parents=[common], help="stabilizer vanishing table"
    )
    p.set_defaults(run=_cmd_kernel)

    p = sub.add_parser(
        "smodule", parents=[common], help="splitting class module structure"
    )
    p.set_defaults(run=_cmd_smodule)

    p = sub.add_parser(
        "lantern", parents=[common], help="lantern relation configurations"
    )
    p.add_argument("--seed", type=int, help="also check random translates")
    p.set_defaults(run=_cmd_lantern)

    p = sub.add_parser(
        "report", parents=[common], help="run every suite and aggregate"
    )
    p.add_argument("--mn", type=_mn, default=DEFAULT_MN, help="weights, e.g. 1,2")
    p.add_argument("--K", type=int, default=DEFAULT_K, help="truncation window")
    p.add_argument("--seed", type=int, help="seed for the lantern translates")
    p.set_defaults(run=_cmd_report)

    return parser


def _configure_logging():
    name = os.environ.get("TORELLI3_LOG", "warning").upper()
    level = getattr(logging, name, None)
    if not isinstance(level, int):
        level = logging.WARNING
    logging.basicConfig(
        level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s"
    )


def main(argv=None):
    _configure_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    expectations = load_expectations()
    started = time.perf_counter()
    try:
        config, verdicts, ok = args.run(args, expectations)
    except TruncationOverflowError as err:
        print(f"error: {err}; rerun with a larger --K", file=sys.stderr)
        return EXIT_USAGE
    except (PreconditionError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    report = {
        "command": args.command,
        "config": config,
        "verdicts": verdicts,
        "ok": ok,
        "timing": {"seconds": round(time.perf_counter() - started, 3)},
        "tool": {"name": "torelli3", "version": __version__},
    }
    text = json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False)
    print(text)
    if args.json:
        with open(args.json, "w", encoding="utf-8") as handle:
            handle.write(text + "\n")
    return EXIT_OK if ok else EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
