"""``prym-census`` command line.

Exit status: 0 on success, 1 on a domain error (reported under its module
error name), 2 on malformed input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from .census import census_pgl2, census_sl2, fiber_compatible, paradox_report
from .duality import DualPair, contragredient_dual, standard_dual, verify_perfect
from .errors import MalformedInput, PrymCensusError, RankGuardExceeded
from .involution import (
    InvolutionLattice,
    component_group,
    component_group_oracle,
    decompose,
    validate,
)
from .matrix_io import matrix_from_json, matrix_to_json
from .selftest import DEFAULT_SEED, selftest
from .spectral import (
    RealCurveData,
    build,
    closed_form_counts,
    fiber_counts,
    label_str,
    valid_curves,
)

SCHEMA_VERSION = 1
DEFAULT_RANK_GUARD = 64
DEFAULT_K_GUARD = 20
MAX_LISTED = 64  # cap on representatives / certificate entries in a report


def _read_matrix(path):
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise MalformedInput(f"cannot read {path}: {exc.strerror}") from None
    try:
        return matrix_from_json(data)
    except UnicodeDecodeError as exc:
        raise MalformedInput(f"{path} is not UTF-8", exc.start) from None


def _half(v):
    return {"numerator": list(v), "denominator": 2}


def _guard_rank(n, args):
    if n > args.rank_guard:
        raise RankGuardExceeded("rank", n, args.rank_guard)


def _guard_k(k, args):
    if k > args.k_guard:
        raise RankGuardExceeded("k", k, args.k_guard)


# -- commands -------------------------------------------------------------

def cmd_components(args):
    T = _read_matrix(args.matrix)
    if T.rows != T.cols:
        raise MalformedInput("involution matrix must be square")
    _guard_rank(T.rows, args)
    L = InvolutionLattice(T)
    dec = decompose(L, witness=args.witness)
    cg = component_group(L)
    reps = []
    for i, v in enumerate(cg.representatives()):
        if i >= MAX_LISTED:
            break
        reps.append(_half(v))
    report = {
        "rank": L.rank,
        "n_trivial": dec.n_trivial,
        "n_sign": dec.n_sign,
        "n_perm": dec.n_perm,
        "component_count": cg.order,
        "representatives": reps,
        "representatives_truncated": cg.order > MAX_LISTED,
        "generators": [_half(g) for g in cg.generators],
    }
    if args.witness:
        report["witness"] = matrix_to_json(dec.witness)
    if args.oracle:
        report["oracle_count"] = component_group_oracle(L)
    return report


def cmd_pairing(args):
    T = _read_matrix(args.matrix)
    if T.rows != T.cols:
        raise MalformedInput("involution matrix must be square")
    _guard_rank(T.rows, args)
    L = InvolutionLattice(T)
    validate(L)
    if args.dual is None and args.pairing is None:
        D = standard_dual(L)
    elif args.dual is None:
        D = contragredient_dual(L, _read_matrix(args.pairing))
    else:
        Td = _read_matrix(args.dual)
        P = (_read_matrix(args.pairing) if args.pairing
             else type(T).identity(T.rows))
        try:
            D = DualPair(L, InvolutionLattice(Td), P)
        except ValueError as exc:
            raise MalformedInput(str(exc)) from None
    ok, pairing, cert = verify_perfect(D, seed=args.seed)
    entries = [
        {"side": side, "class": _half(x), "partner": _half(y), "pairing_mod2": 1}
        for side, x, y in cert.partners[:MAX_LISTED]
    ]
    return {
        "rank_L": pairing.rank_L,
        "rank_dual": pairing.rank_dual,
        "gram_mod2": [list(r) for r in pairing.gram],
        "perfect": ok,
        "certificate": entries,
        "certificate_size": len(cert.partners),
        "unpaired_class": (
            {"side": cert.failure[0], "class": _half(cert.failure[1])}
            if cert.failure else None
        ),
    }


def _spectral_report(curve):
    S = build(curve)
    fc = fiber_counts(curve, S)
    jac, sl2, pgl2 = closed_form_counts(curve)
    return S, {
        "g": curve.g, "k": curve.k, "ell": curve.ell, "h": curve.h,
        "rank": S.rank,
        "jacobian": fc.jacobian_components,
        "sl2": fc.sl2_components,
        "pgl2": fc.pgl2_components,
        "n_sign_jacobian": fc.n_sign_jacobian,
        "n_sign_sl2": fc.n_sign_sl2,
        "n_sign_pgl2": fc.n_sign_pgl2,
        "closed_forms": {"jacobian": jac, "sl2": sl2, "pgl2": pgl2},
        "closed_forms_match": [fc.jacobian_components, fc.sl2_components,
                               fc.pgl2_components] == [jac, sl2, pgl2],
        "checks": S.checks(),
    }


def _curve(args):
    return RealCurveData(args.g, args.k, args.ell)


def cmd_spectral(args):
    curve = _curve(args)
    _guard_rank(8 * curve.g - 6, args)
    S, report = _spectral_report(curve)
    if args.emit_matrices:
        doc = {
            "schema_version": SCHEMA_VERSION,
            "basis_labels": [label_str(x) for x in S.basis_labels],
            "I": matrix_to_json(S.I),
            "Tau": matrix_to_json(S.Tau),
        }
        with open(args.emit_matrices, "w") as fh:
            json.dump(doc, fh, indent=1)
            fh.write("\n")
    return report


def _census_row(k):
    sl2, pgl2 = census_sl2(k), census_pgl2(k)
    return {
        "k": k,
        "sl2": sl2.count,
        "pgl2": pgl2.count,
        "pgl2_routes": {"enumeration": pgl2.enumeration,
                        "recursion": pgl2.recursion,
                        "closed_form": pgl2.closed_form},
        "recursion_trace": list(pgl2.recursion_trace),
    }


def cmd_census(args):
    if args.max_k is not None:
        _guard_k(args.max_k, args)
        return {"rows": [_census_row(k) for k in range(1, args.max_k + 1)]}
    if args.k is None:
        raise MalformedInput("census needs --k or --max-k")
    _guard_k(args.k, args)
    report = _census_row(args.k)
    report["sl2_note"] = census_sl2(args.k).note
    report["discrepancy_note"] = census_pgl2(args.k).note
    if args.ell is not None:
        fc = fiber_compatible(args.k, args.ell)
        report["fiber_compatible"] = {
            "ell": args.ell,
            "pre_parity": fc.pre_parity,
            "parity_filtered": fc.parity_filtered,
            "classes": [list(t) for t in fc.classes[:MAX_LISTED]],
        }
        if args.g is not None:
            report["paradox"] = paradox_report(args.g, args.k, args.ell)
    return report


def _sweep_point(curve):
    return _spectral_report(curve)[1]


def cmd_sweep(args):
    curves = list(valid_curves(args.g_min, args.g_max))
    for c in curves:
        _guard_rank(8 * c.g - 6, args)
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            rows = list(ex.map(_sweep_point, curves))  # map keeps grid order
    else:
        rows = [_sweep_point(c) for c in curves]
    for r in rows:
        del r["checks"]
    return {"rows": rows}


def cmd_selftest(args):
    return selftest(args.seed, g_max=args.g_max, k_max=args.k_guard,
                    inject_fault=args.inject_fault)


# -- formatting -----------------------------------------------------------

def _table(rows, columns):
    def cell(v):
        if isinstance(v, (list, tuple)):
            return ",".join(str(x) for x in v)
        return str(v)

    body = [[cell(r.get(c, "")) for c in columns] for r in rows]
    widths = [max([len(c)] + [len(b[i]) for b in body])
              for i, c in enumerate(columns)]
    lines = ["  ".join(c.rjust(w) for c, w in zip(columns, widths))]
    lines += ["  ".join(x.rjust(w) for x, w in zip(b, widths)) for b in body]
    return "\n".join(lines) + "\n"


TABLE_COLUMNS = {
    "census": ["k", "sl2", "pgl2", "recursion_trace"],
    "sweep": ["g", "k", "ell", "rank", "jacobian", "sl2", "pgl2",
              "closed_forms_match"],
}


def render(command, report, fmt):
    if fmt == "table" and "rows" in report and command in TABLE_COLUMNS:
        return _table(report["rows"], TABLE_COLUMNS[command])
    doc = {"schema_version": SCHEMA_VERSION, "command": command}
    doc.update(report)
    return json.dumps(doc, indent=2) + "\n"


# -- entry point ----------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "table"],
                        help="default: table for census --max-k, else json")
    common.add_argument("--output", "-o", help="write the report here")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help="seed for randomized checks "
                             "(PRYM_CENSUS_SEED overrides)")
    common.add_argument("--rank-guard", type=int, default=DEFAULT_RANK_GUARD)
    common.add_argument("--k-guard", type=int, default=DEFAULT_K_GUARD)

    p = argparse.ArgumentParser(
        prog="prym-census",
        description="Real components of lattices with involution, their "
                    "Langlands-dual pairing and SL(2)/PGL(2) counts.",
    )
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("components", parents=[common],
                       help="component group of an involution lattice")
    c.add_argument("--matrix", required=True)
    c.add_argument("--witness", action="store_true")
    c.add_argument("--oracle", action="store_true")

    c = sub.add_parser("pairing", parents=[common],
                       help="mod-2 pairing with the dual lattice")
    c.add_argument("--matrix", required=True)
    c.add_argument("--dual")
    c.add_argument("--pairing")

    c = sub.add_parser("spectral", parents=[common],
                       help="spectral-curve homology and fiber counts")
    c.add_argument("--g", type=int, required=True)
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--ell", type=int, required=True)
    c.add_argument("--emit-matrices", metavar="PATH")

    c = sub.add_parser("census", parents=[common],
                       help="global SL(2)/PGL(2) component counts")
    c.add_argument("--k", type=int)
    c.add_argument("--ell", type=int)
    c.add_argument("--g", type=int)
    c.add_argument("--max-k", type=int, help="sweep k = 1..MAX_K")

    c = sub.add_parser("sweep", parents=[common],
                       help="spectral counts over every valid (g, k, ell)")
    c.add_argument("--g-min", type=int, default=3)
    c.add_argument("--g-max", type=int, default=9)
    c.add_argument("--jobs", type=int, default=1)

    c = sub.add_parser("selftest", parents=[common],
                       help="run every invariant suite")
    c.add_argument("--g-max", type=int, default=9)
    c.add_argument("--inject-fault", action="store_true",
                   help=argparse.SUPPRESS)
    return p


COMMANDS = {
    "components": cmd_components,
    "pairing": cmd_pairing,
    "spectral": cmd_spectral,
    "census": cmd_census,
    "sweep": cmd_sweep,
    "selftest": cmd_selftest,
}


def _error(exc, stream):
    doc = {"schema_version": SCHEMA_VERSION, "error": exc.name,
           "message": str(exc)}
    if isinstance(exc, MalformedInput):
        doc["offset"] = exc.offset
    stream.write(json.dumps(doc) + "\n")


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    env_seed = os.environ.get("PRYM_CENSUS_SEED")
    if env_seed is not None:
        try:
            args.seed = int(env_seed)
        except ValueError:
            _error(MalformedInput(f"PRYM_CENSUS_SEED={env_seed!r} is not an "
                                  f"integer"), stderr)
            return 2
    if args.rank_guard > DEFAULT_RANK_GUARD or args.k_guard > DEFAULT_K_GUARD:
        stderr.write("warning: guards raised above defaults; Smith form and "
                     "enumeration cost grow quickly\n")
    try:
        report = COMMANDS[args.command](args)
    except MalformedInput as exc:
        _error(exc, stderr)
        return 2
    except PrymCensusError as exc:
        _error(exc, stderr)
        return 1
    fmt = args.format
    if fmt is None:
        fmt = "table" if getattr(args, "max_k", None) is not None else "json"
    text = render(args.command, report, fmt)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    if args.command == "selftest" and not report["passed"]:
        return 1
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
