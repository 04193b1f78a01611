"""Command-line front end: isogeny data, Selmer groups, the pairing report,
and the built-in example verification.

Curve files are JSON with rational coefficients as strings, low degree first:

    {"label": "k=113", "lambda": "1",
     "G1": ["226", "1"], "G2": ["0", "-678", "1"], "G3": ["-89383", "-678", "1"]}

Exit codes: 0 ok; 1 verification failure; 2 invalid input; 3 heuristic or
unproven result under --strict.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import gf2
from .arith import bad_places
from .cohomology import (
    NotInImageError,
    descend_to_phi,
    lift_phihat_to_two,
    quintuple_quotient,
)
from .ctp import PairingMatrix, ctp_local, rank_report
from .curve import INF, CurveError, RichelotPair, build_pair, poly, poly_str
from .localfield import places_of
from .localpoints import (
    LocalDataCache,
    SearchConfig,
    SearchExhausted,
    find_local_point,
    mu_two,
)
from .selmer import selmer_group
from .verify import run_verification

__all__ = ["main"]


def _parse_curve_file(path: str):
    try:
        data = json.loads(open(path).read())
    except OSError as e:
        raise CurveError(f"cannot read curve file: {e}")
    except json.JSONDecodeError as e:
        raise CurveError(f"curve file is not valid JSON: {e}")
    try:
        lam = Fraction(data.get("lambda", "1"))
        gs = [[Fraction(c) for c in data[k]] for k in ("G1", "G2", "G3")]
    except (KeyError, ValueError, ZeroDivisionError) as e:
        raise CurveError(f"malformed curve file: {e}")
    label = data.get("label", "")
    return label, lam, gs


def _curve_echo(curve: RichelotPair, label: str) -> dict:
    return {
        "label": label,
        "model": curve.label(),
        "factors": [[str(c) for c in g] for g in curve.G],
        "roots": [str(r) for r in curve.roots],
    }


def _kernel_descriptions(curve: RichelotPair):
    dom = {}
    for i in (1, 2, 3):
        T = curve.kernel_point(i)
        parts = []
        for m in sorted(T.support, key=lambda m: (1, 0) if m == INF else (0, m)):
            parts.append("inf" if m == INF else f"({curve.roots[m]}, 0)")
        dom[f"P{i}"] = "{" + ", ".join(parts) + "}"
    cod = {}
    for i in (1, 2, 3):
        grp = curve.codomain_roots_by_factor[i - 1]
        if len(curve.L[i - 1]) == 2:
            cod[f"P{i}'"] = "{(%s, 0), inf}" % grp[0]
        elif grp is None:
            cod[f"P{i}'"] = "{conjugate roots of %s}" % poly_str(curve.L[i - 1])
        else:
            cod[f"P{i}'"] = "{(%s, 0), (%s, 0)}" % grp
    return dom, cod


def _isogeny_dict(curve: RichelotPair, label: str) -> dict:
    dom, cod = _kernel_descriptions(curve)
    return {
        "curve": _curve_echo(curve, label),
        "delta": str(curve.delta),
        "L": [[str(c) for c in L] for L in curve.L],
        "codomain_model": "(%s) y^2 = (%s)(%s)(%s)" % (
            (str(curve.delta),) + tuple(poly_str(L) for L in curve.L)),
        "kernel_divisors": dom,
        "dual_kernel_divisors": cod,
    }


def _selmer_dict(sel) -> dict:
    return {
        "side": sel.side,
        "dim": sel.dim,
        "size": 1 << sel.dim,
        "basis": [list(t.values) for t in sel.basis],
        "known_point_basis": [list(t.values) for t in sel.known_point_basis],
        "status": sel.status,
    }


def _local_rows(a, curve, places, cfg, cache) -> dict:
    lift = lift_phihat_to_two(a)
    rows = {}
    for v in places:
        P_v = find_local_point(a, curve, v, cfg, cache)
        delta2 = mu_two(P_v, curve, v)
        lift_v = lift.restrict(v)
        diff = quintuple_quotient(delta2, lift_v)
        rho = descend_to_phi(diff)
        rows[str(v)] = {
            "P_v": str(P_v),
            "delta2": [c.representative() for c in delta2.classes],
            "lift": [c.representative() for c in lift_v.classes],
            "difference": [c.representative() for c in diff.classes],
            "rho": [c.representative() for c in rho.classes],
        }
    return rows


def _ctp_report(curve, label, cfg, cache, only_places=None) -> dict:
    S = bad_places(curve)
    places = places_of(S)
    partial = False
    if only_places:
        keep = set(only_places)
        places = [v for v in places if str(v) in keep]
        partial = True
    sel_hat = selmer_group(curve, "phihat", cfg, cache)
    sel_phi = selmer_group(curve, "phi", cfg, cache)

    basis = sel_hat.basis
    n = len(basis)
    entries = []
    breakdown = {}
    for i in range(n):
        row = []
        for j in range(n):
            bd = {}
            total = 0
            for v in places:
                val = ctp_local(basis[i], basis[j], curve, v, cache, cfg)
                bd[str(v)] = val
                total ^= val
            row.append(total)
            breakdown[f"{i},{j}"] = bd
        entries.append(row)

    # radical over the (possibly partial) entries; flag partial prominently
    rows = [sum(e << j for j, e in enumerate(r)) for r in entries]
    radical = gf2.echelon(gf2.nullspace(rows, n))
    symmetric = all(entries[i][j] == entries[j][i] for i in range(n) for j in range(n))

    report = {
        "curve": _curve_echo(curve, label),
        "isogeny": _isogeny_dict(curve, label),
        "bad_places": [str(v) for v in places_of(S)],
        "selmer": {"phihat": _selmer_dict(sel_hat), "phi": _selmer_dict(sel_phi)},
        "local_tables": {
            str(tuple(a.values)): _local_rows(a, curve, places, cfg, cache)
            for a in basis},
        "matrix": {
            "basis": [list(t.values) for t in basis],
            "entries": entries,
            "entries_qz": [["1/2" if e else "0" for e in r] for r in entries],
            "per_place": breakdown,
            "radical_dim": len(radical),
            "symmetric": symmetric,
        },
        "partial_places_only": partial,
        "config": {"precision": cfg.residue_exponent, "val_bound": cfg.val_bound,
                   "escalations": cfg.escalations},
        "status": "certified" if sel_hat.status == sel_phi.status == "certified"
                  else "heuristic",
    }
    if not symmetric:
        report["warnings"] = ["pairing matrix is not symmetric on this basis"]
    if not partial:
        # rank bookkeeping only makes sense for the full place set
        M = PairingMatrix(tuple(basis), tuple(tuple(r) for r in entries),
                          breakdown, tuple(radical), symmetric)
        rep = rank_report(curve, sel_phi, sel_hat, M)
        report["descent"] = {
            "rank_bound_before": rep.rank_bound_before,
            "rank_bound_after": rep.rank_bound_after,
            "inferred_dim_sel2": rep.inferred_dim_sel2,
            "sequence_dims": list(rep.sequence_dims),
            "note": "rank bounds and the 2-Selmer dimension are derived "
                    "bookkeeping around the computed groups",
        }
    return report


def _print_isogeny(iso):
    print(f"curve: {iso['curve']['model']}")
    print(f"delta = {iso['delta']}")
    for i, L in enumerate(iso["L"], 1):
        print(f"L{i} = {poly_str(poly(L))}")
    print(f"codomain: {iso['codomain_model']}")
    for k in sorted(iso["kernel_divisors"]):
        print(f"{k} = {iso['kernel_divisors'][k]}")
    for k in sorted(iso["dual_kernel_divisors"]):
        print(f"{k} = {iso['dual_kernel_divisors'][k]}")


def _print_selmer(report):
    print(f"curve: {report['curve']['model']}")
    s = report["selmer"]
    gens = ", ".join("(%s)" % ", ".join(map(str, b)) for b in s["basis"])
    print(f"Sel[{s['side']}]: dim {s['dim']}, size {s['size']} ({s['status']})")
    print(f"basis: {gens}")
    known = ", ".join("(%s)" % ", ".join(map(str, b)) for b in s["known_point_basis"])
    print(f"known-point images: {known or '(none)'}")


def _print_tables(report):
    print(f"curve: {report['curve']['model']}")
    iso = report["isogeny"]
    print(f"delta = {iso['delta']}")
    for i, L in enumerate(iso["L"], 1):
        print(f"L{i} = {poly_str(poly(L))}")
    print(f"bad places: {', '.join(report['bad_places'])}")
    for side in ("phihat", "phi"):
        s = report["selmer"][side]
        gens = ", ".join("(%s)" % ", ".join(map(str, b)) for b in s["basis"])
        print(f"Sel[{side}]: dim {s['dim']} ({s['status']}); basis {gens}")
    places = report["bad_places"] if not report["partial_places_only"] else \
        sorted({v for t in report["local_tables"].values() for v in t})
    for key, rows in report["local_tables"].items():
        print(f"\nlocal data for a = {key}")
        cols = [v for v in places if v in rows]
        head = ["row \\ v"] + cols
        lines = [head]
        for rowname, field in (("P_v", "P_v"), ("delta2(P_v)", "delta2"),
                               ("a_1,v", "lift"), ("difference", "difference"),
                               ("rho_v", "rho")):
            line = [rowname]
            for v in cols:
                cell = rows[v][field]
                line.append(cell if isinstance(cell, str) else
                            "(" + ",".join(map(str, cell)) + ")")
            lines.append(line)
        widths = [max(len(str(l[i])) for l in lines) for i in range(len(head))]
        for l in lines:
            print("  ".join(str(c).ljust(w) for c, w in zip(l, widths)))
    M = report["matrix"]
    print("\npairing matrix (entries in Q/Z):")
    for row in M["entries_qz"]:
        print("  [" + "  ".join(e.rjust(3) for e in row) + "]")
    print(f"radical dimension: {M['radical_dim']}")
    if "descent" in report:
        d = report["descent"]
        print(f"rank bound: {d['rank_bound_before']} -> {d['rank_bound_after']}")
        print(f"inferred 2-Selmer dimension: {d['inferred_dim_sel2']}")
        print(f"six-term dimensions: {tuple(d['sequence_dims'])}")
    print(f"status: {report['status']}")


def _emit(report, as_json: bool, renderer=None):
    if as_json:
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        (renderer or _print_tables)(report)


def _add_search_flags(p: argparse.ArgumentParser):
    p.add_argument("--precision", type=int, default=4,
                   help="residue modulus exponent for the local point search")
    p.add_argument("--val-bound", type=int, default=6,
                   help="valuation window for the local point search")
    p.add_argument("--escalations", type=int, default=2,
                   help="number of times search bounds may escalate")
    p.add_argument("--cache-dir", default=None,
                   help="directory for persisting local search witnesses")
    p.add_argument("--strict", action="store_true",
                   help="exit 3 when any result is heuristic or unproven")
    p.add_argument("--json", action="store_true", help="machine-readable output")


def _cfg_of(args) -> SearchConfig:
    return SearchConfig(residue_exponent=args.precision, val_bound=args.val_bound,
                        escalations=args.escalations)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="richelot-ctp",
        description="Descent and pairing computations for split genus-2 Jacobians")
    sub = parser.add_subparsers(dest="command", required=True)

    p_iso = sub.add_parser("isogeny", help="codomain model, delta, and kernel data")
    p_iso.add_argument("curve_file")
    p_iso.add_argument("--json", action="store_true")

    p_sel = sub.add_parser("selmer", help="compute a kernel Selmer group")
    p_sel.add_argument("curve_file")
    p_sel.add_argument("--side", choices=("phihat", "phi"), default="phihat")
    _add_search_flags(p_sel)

    p_ctp = sub.add_parser("ctp", help="full pairing pipeline and rank report")
    p_ctp.add_argument("curve_file")
    p_ctp.add_argument("--places", default=None,
                       help="comma-separated places for a partial per-place run")
    _add_search_flags(p_ctp)

    sub.add_parser("verify-example", help="check the bundled reference example")

    args = parser.parse_args(argv)

    if args.command == "verify-example":
        results = run_verification(report=print)
        failed = [r for r in results if not r.passed]
        if failed:
            print(f"FAILED: {failed[0].name}: {failed[0].detail}")
            return 1
        print(f"ok: {len(results)} checks passed")
        return 0

    try:
        label, lam, gs = _parse_curve_file(args.curve_file)
        curve = build_pair(lam, *gs)
    except CurveError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2

    if args.command == "isogeny":
        _emit(_isogeny_dict(curve, label), args.json, _print_isogeny)
        return 0

    cfg = _cfg_of(args)
    cache = LocalDataCache(args.cache_dir)

    if args.command == "selmer":
        try:
            sel = selmer_group(curve, args.side, cfg, cache)
        except CurveError as e:
            print(f"error: {e}", file=sys.stderr)
            return 2
        report = {"curve": _curve_echo(curve, label),
                  "selmer": _selmer_dict(sel),
                  "config": {"precision": cfg.residue_exponent,
                             "val_bound": cfg.val_bound,
                             "escalations": cfg.escalations}}
        _emit(report, args.json, _print_selmer)
        if args.strict and sel.status != "certified":
            return 3
        return 0

    # full pipeline
    only = [s.strip() for s in args.places.split(",")] if args.places else None
    try:
        report = _ctp_report(curve, label, cfg, cache, only_places=only)
    except CurveError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except SearchExhausted as e:
        partial = {"curve": _curve_echo(curve, label),
                   "failed_at": "local point search", "error": str(e)}
        print(json.dumps(partial, sort_keys=True, indent=2))
        return 3
    except NotInImageError as e:
        partial = {"curve": _curve_echo(curve, label),
                   "failed_at": "pairing pipeline self-check", "error": str(e)}
        print(json.dumps(partial, sort_keys=True, indent=2))
        return 3
    _emit(report, args.json)
    if args.strict and report["status"] != "certified":
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
