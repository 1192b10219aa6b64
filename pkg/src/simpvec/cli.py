"""Command-line driver. Every run prints human text and can emit one JSON report."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Callable

from . import __version__
from .chains import betti, induces_identity_on_homology, is_iso, normalized_complex
from .doldkan import DK, aw, dk_unit_iso, ez
from .duality import (double_dual_check, is_hom_nondegenerate, kstar, kstar_defect, kstar_defect_form,
                      kstar_legs, n_dual, n_dual_pairing, vertex_functional)
from .fixture_io import FixtureError, load_fixture, parse_complex, parse_rational
from .linalg import ContractError, Mat
from .maps import tensor_svs, validate_simp_map
from .simplicial import SVS, order_up_to, validate_identities

REPORT_SCHEMA = "simpvec-report"
REPORT_VERSION = 1

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _load(spec: str) -> SVS:
    try:
        return load_fixture(spec).build()
    except ContractError as e:
        raise FixtureError(str(e)) from None


def _order(V: SVS, given: int | None = None) -> int:
    if given is not None:
        return given
    if V.groupoid_order is not None:
        return V.groupoid_order
    L = getattr(V, "L", 2)
    return order_up_to(V, L + 2).order


def _up_to(args, n: int) -> int:
    return args.up_to if args.up_to is not None else n + 2


# ---------------------------------------------------------------------------
# commands: each returns (ok, bounds, results, lines)

def cmd_validate(args):
    V = _load(args.fixture)
    n = _order(V, args.n)
    up = _up_to(args, n)
    bad = validate_identities(V, up)
    rep = order_up_to(V, up)
    lines = ["ok" if not bad else "identity failures:"] + [f"  {b}" for b in bad]
    lines.append(f"normalized dims {list(rep.normalized_dims)}; groupoid order {n}")
    res = {"failures": bad, "level_dims": [V.dim(m) for m in range(up + 1)],
           "normalized_dims": list(rep.normalized_dims), "order": n,
           "kan": rep.kan, "strict_kan_above": n, "strict_kan": rep.is_n_groupoid(n)}
    return not bad, {"up_to": up}, res, lines


def cmd_level(args):
    V = _load(args.fixture)
    m = args.m
    lv = V.level(m)
    res = {"level": m, "dim": lv.dim,
           "faces": [f.to_strings() for f in lv.faces], "degeneracies": [s.to_strings() for s in lv.degens]}
    lines = [f"level {m}: dim {lv.dim}"]
    for i, f in enumerate(lv.faces):
        lines.append(f"  d_{i} = {f.to_strings()}")
    for j, s in enumerate(lv.degens):
        lines.append(f"  s_{j} = {s.to_strings()}")
    return True, {"level": m}, res, lines


def cmd_homology(args):
    V = _load(args.fixture)
    up = _up_to(args, _order(V, args.n))
    C = normalized_complex(V, up + 1)
    b = betti(C, range(up + 1))
    dims = [b[i] for i in range(up + 1)]
    return True, {"up_to": up}, {"betti": dims}, [f"homology dims {dims}"]


def cmd_normalized(args):
    V = _load(args.fixture)
    up = _up_to(args, _order(V, args.n))
    C = normalized_complex(V, up)
    dims = [C.dim(i) for i in range(up + 1)]
    diffs = {str(i): C.d(i).to_strings() for i in range(1, up + 1)}
    lines = [f"normalized dims {dims}"] + [f"  d_{i} = {diffs[str(i)]}" for i in range(1, up + 1)]
    return True, {"up_to": up}, {"dims": dims, "differentials": diffs}, lines


def cmd_dk(args):
    if args.complex:
        try:
            doc = json.loads(Path(args.complex).read_text())
            A = parse_complex(doc)
        except (OSError, json.JSONDecodeError) as e:
            raise FixtureError(f"cannot read complex: {e}") from None
        up = args.up_to if args.up_to is not None else A.hi + 2
        X = DK(A)
        NX = normalized_complex(X, max(up, A.hi + 1))
        ok = all(NX.dim(i) == A.dim(i) and NX.d(i) == A.d(i) for i in range(0, A.hi + 2))
        res = {"level_dims": [X.dim(m) for m in range(up + 1)], "normalized_equals_input": ok}
        return ok, {"up_to": up}, res, [f"DK level dims {res['level_dims']}", f"N(DK(A)) = A: {ok}"]
    if not args.fixture:
        raise UsageError("dk needs a fixture or --complex")
    V = _load(args.fixture)
    up = _up_to(args, _order(V, args.n))
    phi = dk_unit_iso(V, up)
    inv = all(phi.at(m).rows == phi.at(m).cols and phi.at(m).rank() == phi.at(m).rows for m in range(up + 1))
    comm = not validate_simp_map(phi, up)
    NV = normalized_complex(V, up)
    back = normalized_complex(phi.source, up)
    rt = all(NV.dim(i) == back.dim(i) and NV.d(i) == back.d(i) for i in range(up + 1))
    res = {"unit_invertible": inv, "unit_commutes": comm, "normalized_round_trip": rt}
    ok = inv and comm and rt
    return ok, {"up_to": up}, res, [f"{k}: {v}" for k, v in res.items()]


def cmd_ez_check(args):
    V, W = _load(args.left), _load(args.right)
    up = args.up_to if args.up_to is not None else 4
    E, A = ez(V, W, up + 1), aw(V, W, up + 1)
    left = A @ E
    retract = all(left.comp(i) == Mat.identity(E.source.dim(i)) for i in range(up + 1))
    chain = not E.validate() and not A.validate()
    hom = induces_identity_on_homology(E @ A, range(up + 1))
    res = {"aw_ez_identity": retract, "chain_maps": chain, "ez_aw_identity_on_homology": hom}
    return retract and chain and hom, {"up_to": up}, res, [f"{k}: {v}" for k, v in res.items()]


def _dual_checks(V, n, up, pairing: bool, double: bool):
    res = {}
    D = n_dual(V, n)
    res["level_dims"] = [D.dim(m) for m in range(n + 1)]
    res["groupoid_identities"] = not validate_identities(D, n + 1)
    ok = res["groupoid_identities"]
    if pairing:
        a = n_dual_pairing(V, n, D)
        res["pairing_multiplicative"] = a.is_multiplicative()
        res["pairing_normalized"] = a.is_normalized()
        res["pairing_hom_nondegenerate"] = is_hom_nondegenerate(a, up)
        ok = ok and all(res[k] for k in ("pairing_multiplicative", "pairing_normalized",
                                          "pairing_hom_nondegenerate"))
    if double:
        res["double_dual"] = double_dual_check(V, n, up)
        ok = ok and res["double_dual"]
    return ok, res


def cmd_dual(args):
    V = _load(args.fixture)
    up = _up_to(args, args.n)
    ok, res = _dual_checks(V, args.n, up, args.check_pairing, args.check_double_dual)
    return ok, {"n": args.n, "up_to": up}, res, [f"{k}: {v}" for k, v in res.items()]


def cmd_pairing_check(args):
    V = _load(args.fixture)
    up = _up_to(args, args.n)
    ok, res = _dual_checks(V, args.n, up, True, False)
    return ok, {"n": args.n, "up_to": up}, res, [f"{k}: {v}" for k, v in res.items()]


def cmd_double_dual(args):
    V = _load(args.fixture)
    up = _up_to(args, args.n)
    ok = double_dual_check(V, args.n, up)
    return ok, {"n": args.n, "up_to": up}, {"double_dual": ok}, [f"double_dual: {ok}"]


def cmd_kstar_defect(args):
    V = _load(args.fixture)
    K = kstar(V)
    ident = not validate_identities(K.svs, 3)
    legs = kstar_legs(V, K)
    iso = is_iso(legs)
    T = kstar_defect_form(V)
    res = {"kstar_identities": ident, "normalized_iso": iso, "defect_form": T.to_strings(),
           "defect_nonzero": not T.is_zero()}
    if args.w is not None:
        if args.phi is not None:
            phi = args.phi
        elif args.theta is not None:
            phi = vertex_functional(V, args.theta)
        else:
            raise UsageError("--w needs --phi or --theta")
        if len(phi) != V.dim(2) or len(args.w) != V.dim(2):
            raise UsageError(f"phi and W must have length {V.dim(2)}")
        res["defect"] = str(kstar_defect(V, phi, args.w))
    lines = [f"{k}: {v}" for k, v in res.items() if k != "defect_form"]
    return ident and iso, {"levels": 3}, res, lines


def cmd_tensor_order(args):
    V, W = _load(args.left), _load(args.right)
    n, m = _order(V, args.n), _order(W, args.m)
    top = n + m
    up = args.up_to if args.up_to is not None else top + 1
    T = tensor_svs(V, W)
    C = normalized_complex(T, up + 1)
    b = betti(C, range(up + 1))
    nonzero_top = C.dim(top) != 0
    vanish = all(b[i] == 0 for i in range(top + 1, up + 1))
    res = {"orders": [n, m], "normalized_dims": [C.dim(i) for i in range(up + 1)],
           "betti": [b[i] for i in range(up + 1)], "top_nonzero": nonzero_top, "vanishes_above": vanish}
    return nonzero_top and vanish, {"up_to": up}, res, [f"{k}: {v}" for k, v in res.items()]


SUITE_BUILTINS = ["zero", "id 1", "id 3", "pair 1", "pair 2", "bnr 1", "bnr 2"]


def cmd_suite(args):
    specs = SUITE_BUILTINS
    if args.directory:
        d = Path(args.directory)
        if not d.is_dir():
            raise UsageError(f"not a directory: {d}")
        specs = [str(p) for p in sorted(d.glob("*.json"))]
    results, lines, ok = {}, [], True
    for spec in specs:
        V = _load(spec)
        n = _order(V)
        up = n + 2
        checks = {"identities": not validate_identities(V, up)}
        C = normalized_complex(V, up + 1)
        checks["n_type"] = all(b == 0 for i, b in betti(C, range(up + 1)).items() if i > n)
        phi = dk_unit_iso(V, up)
        checks["dk_unit"] = not validate_simp_map(phi, up) and all(
            phi.at(k).rank() == V.dim(k) == phi.at(k).cols for k in range(up + 1))
        if n <= 2:
            good, r = _dual_checks(V, n, up, True, True)
            checks["dual"] = good
            NK = kstar_legs(V)
            checks["kstar_iso"] = is_iso(NK)
        results[spec] = {"order": n, "checks": checks}
        good = all(checks.values())
        ok = ok and good
        lines.append(f"{'PASS' if good else 'FAIL'} {spec}: " + ", ".join(f"{k}={v}" for k, v in checks.items()))
    return ok, {"per_fixture": "order + 2"}, {"fixtures": results}, lines


# ---------------------------------------------------------------------------

def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the JSON report instead of text")
    common.add_argument("--report", metavar="PATH", help="also write the JSON report to PATH")

    p = argparse.ArgumentParser(prog="simpvec", description="Exact computations with simplicial vector spaces.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn: Callable, help_: str, fixture=True, bounds=True, order=True):
        sp = sub.add_parser(name, parents=[common], help=help_)
        if fixture:
            sp.add_argument("fixture", help="fixture file or built-in form such as 'pair 1'")
        if bounds:
            sp.add_argument("--up-to", type=int, default=None, help="level/degree bound (default n+2)")
        if order:
            sp.add_argument("--n", type=int, default=None, help="groupoid order (default: known or detected)")
        sp.set_defaults(func=fn)
        return sp

    add("validate", cmd_validate, "check simplicial identities and Kan conditions")
    lv = add("level", cmd_level, "print one level", bounds=False, order=False)
    lv.add_argument("m", type=int)
    add("homology", cmd_homology, "homology of the normalized complex")
    add("normalized", cmd_normalized, "the normalized complex")
    dk = sub.add_parser("dk", parents=[common], help="Dold-Kan checks")
    dk.add_argument("fixture", nargs="?")
    dk.add_argument("--complex", help="JSON complex {'dims': [...], 'differentials': {...}}")
    dk.add_argument("--up-to", type=int, default=None)
    dk.add_argument("--n", type=int, default=None)
    dk.set_defaults(func=cmd_dk)
    ezp = sub.add_parser("ez-check", parents=[common], help="Eilenberg-Zilber and Alexander-Whitney checks")
    ezp.add_argument("left")
    ezp.add_argument("right")
    ezp.add_argument("--up-to", type=int, default=None, help="degree bound (default 4)")
    ezp.set_defaults(func=cmd_ez_check)
    du = add("dual", cmd_dual, "the n-dual", order=False)
    du.add_argument("--n", type=int, required=True)
    du.add_argument("--check-pairing", action="store_true")
    du.add_argument("--check-double-dual", action="store_true")
    pc = add("pairing-check", cmd_pairing_check, "check the n-dual pairing", order=False)
    pc.add_argument("--n", type=int, required=True)
    dd = add("double-dual", cmd_double_dual, "check reflexivity", order=False)
    dd.add_argument("--n", type=int, required=True)
    ks = add("kstar-defect", cmd_kstar_defect, "K* model and its multiplicativity defect", bounds=False,
             order=False)
    ks.add_argument("--phi", type=_rat_list, help="functional on level 2, comma separated")
    ks.add_argument("--theta", type=_rat_list, help="functional on level 0; phi = theta d0 d0")
    ks.add_argument("--w", type=_rat_list, help="level-2 vector, comma separated")
    to = sub.add_parser("tensor-order", parents=[common], help="order of a tensor product")
    to.add_argument("left")
    to.add_argument("right")
    to.add_argument("--n", type=int, default=None)
    to.add_argument("--m", type=int, default=None)
    to.add_argument("--up-to", type=int, default=None, help="degree bound (default n+m+1)")
    to.set_defaults(func=cmd_tensor_order)
    su = sub.add_parser("suite", parents=[common], help="run the checks on every fixture in a directory")
    su.add_argument("directory", nargs="?")
    su.set_defaults(func=cmd_suite)
    return p


def _rat_list(text: str) -> list:
    try:
        return [parse_rational(x.strip(), "vector") for x in text.split(",")]
    except FixtureError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def run_command(argv: list[str]) -> tuple[int, dict, list[str]]:
    """Run one command; returns ``(exit code, report, text lines)``. Parse errors raise."""
    code, report, lines, _ = _run(argv)
    return code, report, lines


def _run(argv):
    args = _parser().parse_args(argv)
    ok, bounds, results, lines = args.func(args)
    report = {"schema": REPORT_SCHEMA, "version": REPORT_VERSION, "command": args.command,
              "argv": _echo_argv(argv), "bounds": bounds, "ok": bool(ok), "results": results}
    return (EXIT_OK if ok else EXIT_FAILED), report, lines, args


def _echo_argv(argv: list[str]) -> list[str]:
    """Arguments that determine the results; output options are left out."""
    out, skip = [], False
    for a in argv:
        if skip:
            skip = False
        elif a == "--report":
            skip = True
        elif a != "--json" and not a.startswith("--report="):
            out.append(a)
    return out


def render(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        code, report, lines, args = _run(argv)
    except SystemExit as e:  # argparse exits 0 for --help and 2 for usage errors
        return EXIT_OK if not e.code else EXIT_USAGE
    except (FixtureError, UsageError, ContractError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    text = render(report)
    if args.report:
        Path(args.report).write_text(text)
    if args.json:
        sys.stdout.write(text)
    else:
        for line in lines:
            print(line)
        print(f"bounds {json.dumps(report['bounds'], sort_keys=True)}")
        print("ok" if report["ok"] else "FAILED")
    return code
