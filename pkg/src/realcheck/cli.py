"""Batch front door: load structures, run checkers, emit reports.

Exit status: 0 when every check passed, 1 when any check failed or was
refused, 2 on malformed input.  ``--format machine`` switches the report
stream to one JSON record per check, stable across runs.
"""

from __future__ import annotations

import argparse
import sys
import time
from itertools import product

from . import aks as aksmod
from . import bco as bcomod
from . import k2 as k2mod
from . import tripos as triposmod
from .errors import CapExceeded, ConstructionError, StructureError
from .formats import load_aks, load_map, load_opca, save_aks
from .opca import check_filter, check_opca_axioms
from .report import FAIL, PASS, REFUSED, Report


def _emit(report, fmt, t0):
    report.elapsed_ms = (time.time() - t0) * 1000.0
    if fmt == "machine":
        print(report.render_machine())
    else:
        print(report.render_text())
        verdict = "all passed" if report.passed else "FAILURES"
        print(f"-- {report.subject}: {len(report.records)} checks, {verdict},"
              f" {report.elapsed_ms:.1f} ms")
    return 0 if report.passed else 1


def _cmd_check_opca(args):
    t0 = time.time()
    opca, _ = load_opca(args.file)
    rep = check_opca_axioms(opca, search_ks=args.search_ks)
    if opca.filter is not None:
        rep.extend(check_filter(opca, opca.filter))
    if args.eval_term:
        from .terms import free_vars, parse_term
        try:
            term = parse_term(args.eval_term)
            if free_vars(term):
                raise ValueError(f"term has free variables {sorted(free_vars(term))}")
            value = opca.eval(term)
        except ValueError as e:
            raise StructureError(str(e), source="--eval-term")
        rep.add("term.value", PASS if value is not None else FAIL,
                witnesses={"value": value} if value is not None else {},
                counterexample=None if value is not None else ("undefined",),
                detail=args.eval_term)
    return _emit(rep, args.format, t0)


def _cmd_check_bco(args):
    t0 = time.time()
    from .formats import load_bco
    return _emit(bcomod.check_bco(load_bco(args.file)), args.format, t0)


def _cmd_check_filter(args):
    t0 = time.time()
    opca, _ = load_opca(args.file)
    subset = frozenset(args.subset) if args.subset else opca.filter
    if subset is None:
        raise StructureError("no filter in file and none given", source=args.file)
    return _emit(check_filter(opca, subset), args.format, t0)


def _cmd_build_aks(args):
    t0 = time.time()
    opca, _ = load_opca(args.file)
    U = frozenset(args.U) if args.U else opca.U
    built = aksmod.build_aks(opca, max_len=args.max_len, U=U)
    rep = aksmod.check_aks(built.aks)
    if args.out:
        save_aks(args.out, built.aks)
        rep.add("aks.saved", PASS, witnesses={"path": args.out})
    return _emit(rep, args.format, t0)


def _cmd_check_aks(args):
    t0 = time.time()
    return _emit(aksmod.check_aks(load_aks(args.file)), args.format, t0)


def _cmd_check_order_ca(args):
    t0 = time.time()
    aks = load_aks(args.file)
    _, rep = aksmod.check_order_ca(aks)
    return _emit(rep, args.format, t0)


def _cmd_check_localic(args):
    t0 = time.time()
    opca, _ = load_opca(args.file)
    rep = Report(opca.name)
    witness = triposmod.localic_criterion(opca)
    rep.add("localic.criterion", PASS if witness is not None else FAIL,
            witnesses={"e": witness} if witness is not None else {},
            counterexample=None if witness is not None else ("no uniform witness",))
    built = aksmod.build_aks(opca, max_len=args.max_len)
    kr = aksmod.check_kr(built.aks)
    rep.add("localic.kr", PASS if kr is not None else FAIL,
            witnesses={"a": kr} if kr is not None else {},
            counterexample=None if kr is not None else ("no quasi-proof satisfies it",))
    least = aksmod.tv_least_of_aks(built.aks)
    rep.add("localic.tv_least", PASS if least is not None else FAIL,
            witnesses={"least": least} if least is not None else {},
            counterexample=None if least is not None else ("no least truth value",))
    agree = (witness is None) == (kr is None) == (least is None)
    rep.add("localic.triangulation", PASS if agree else FAIL,
            counterexample=None if agree else (witness, kr, least))
    return _emit(rep, args.format, t0)


def _cmd_check_density(args):
    t0 = time.time()
    src, _ = load_opca(args.src)
    dst, _ = load_opca(args.dst)
    fmap = load_map(args.mapfile)
    for a in src.elements:
        if a not in fmap:
            raise StructureError(f"map misses {a!r}", source=args.mapfile, field="map")
    rep = bcomod.check_applicative_morphism(fmap, src, dst)
    dens = bcomod.check_density(fmap, src, dst)
    rep.add("density.cd_sk", PASS if dens.cd else FAIL,
            witnesses={"m": dens.cd[0], "g": dens.cd[1]} if dens.cd else {},
            counterexample=None if dens.cd else ("no (m, g) family",))
    rep.add("density.simple", PASS if dens.simple else FAIL,
            witnesses={"t": dens.simple[0], "h": dens.simple[1]} if dens.simple else {},
            counterexample=None if dens.simple else ("no (h, t) family",))
    rep.add("density.agreement", PASS if dens.agree else FAIL,
            counterexample=None if dens.agree else (bool(dens.cd), bool(dens.simple)))
    return _emit(rep, args.format, t0)


def _cmd_check_tripos(args):
    t0 = time.time()
    opca, sup = load_opca(args.file)
    rep = Report(opca.name)
    if opca.filter is None:
        raise StructureError("check-tripos needs a filtered opca", source=args.file)

    if sup is None:
        try:
            sup = bcomod.join_sup(opca)
            rep.add("tripos.sup_source", PASS, witnesses={"derived": "poset joins"})
        except StructureError:
            rep.add("tripos.sup_source", REFUSED,
                    detail="no sup table in file and poset joins incomplete")
            sup = None
    if sup is not None:
        alg = bcomod.PseudoDAlgebra(host=opca, sup=sup, name=f"sup({opca.name})")
        alg_rep = bcomod.check_pseudo_d_algebra(alg)
        rep.extend(alg_rep)
        star = bcomod.check_star(alg)
        rep.add("tripos.star", PASS if star is not None else FAIL,
                witnesses={"v": star} if star is not None else {},
                counterexample=None if star is not None else ("no uniform bound",))
        DA = bcomod.downset_opca(opca)
        sup_map = {d: alg.value(d) for d in DA.elements}
        appl = bcomod.check_applicative_morphism(sup_map, DA, opca)
        appl_ok = bcomod.applicative_verdict(appl)
        rep.add("tripos.sup_applicative", PASS if appl_ok else FAIL,
                counterexample=None if appl_ok else ("sup not applicative",))
        agree = appl_ok == (star is not None)
        rep.add("tripos.star_equals_applicative", PASS if agree else FAIL,
                counterexample=None if agree else (appl_ok, star))
        if alg_rep.passed and star is not None:
            kit = bcomod.implication_from_sup(alg, report=alg_rep)
            kit_rep = bcomod.check_implicative(kit, mode="pre-implicative")
            rep.extend(kit_rep)
            if kit_rep.passed:
                try:
                    bcomod.sup_from_implication(kit)
                    rep.add("tripos.roundtrip_sup", PASS)
                except ConstructionError as e:
                    rep.add("tripos.roundtrip_sup", FAIL, counterexample=(str(e),))

    if opca.U is not None:
        downs = opca.downsets()
        size = args.index_size
        if len(downs) ** size > args.predicate_cap:
            rep.add("tripos.booleanization", REFUSED,
                    detail=f"{len(downs)}^{size} predicates exceed cap")
        else:
            index = tuple(f"i{n}" for n in range(size))
            preds = [triposmod.Predicate(index, dict(zip(index, vals)))
                     for vals in product(downs, repeat=size)]
            bad = None
            for phi in preds:
                notnot = phi.map_values(
                    lambda a: triposmod.arrow_U(triposmod.arrow_U(a, opca), opca))
                fwd = triposmod.boolean_leq(phi, notnot, opca)
                back = triposmod.boolean_leq(notnot, phi, opca)
                if not (fwd.holds and back.holds):
                    bad = tuple(sorted(map(str, phi(i))) for i in index)
                    break
            rep.add("tripos.booleanization", FAIL if bad else PASS,
                    witnesses={} if bad else {"predicates": len(preds)},
                    counterexample=bad)
    return _emit(rep, args.format, t0)


def _parse_k2_elems(spec_str):
    return [k2mod.from_expr(src.strip()) for src in spec_str.split(";") if src.strip()]


def _cmd_k2(args):
    t0 = time.time()
    rep = Report("k2")
    if args.k2_command == "apply":
        alpha = k2mod.from_expr(args.alpha)
        beta = k2mod.from_expr(args.beta)
        value = k2mod.k2_apply(alpha, beta, args.n, args.fuel)
        rep.add("k2.apply", PASS if value is not None else FAIL,
                witnesses={"value": value} if value is not None else {},
                counterexample=None if value is not None else ("undefined-at-fuel",),
                detail=f"n={args.n} fuel={args.fuel}")
    elif args.k2_command == "tau":
        alpha = k2mod.from_expr(args.alpha)
        prefix = [int(x) for x in args.prefix.split(",") if x.strip() != ""]
        value = k2mod.tau_extract(alpha, prefix, args.nprime, args.j, args.fuel)
        rep.add("k2.tau", PASS if value is not None else FAIL,
                witnesses={"value": value} if value is not None else {},
                counterexample=None if value is not None else ("undefined-at-fuel",))
    elif args.k2_command == "discrete":
        elems = _parse_k2_elems(args.elems)
        result = k2mod.is_discrete(elems, args.depth)
        rep.add("k2.discrete", PASS if result.discrete else FAIL,
                witnesses={"prefixes": result.prefixes} if result.discrete else {},
                counterexample=result.witness)
    return _emit(rep, args.format, t0)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="realcheck",
        description="check realizability structures and build Krivine structures")
    parser.add_argument("--format", choices=("text", "machine"), default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-opca", help="order/application/k/s axioms")
    p.add_argument("file")
    p.add_argument("--search-ks", action="store_true",
                   help="also brute-force a working (k,s) pair")
    p.add_argument("--eval-term", metavar="TERM",
                   help=r"evaluate a closed term (K, S, element names, "
                        r"juxtaposition, \x. M) in the structure")
    p.set_defaults(fn=_cmd_check_opca)

    p = sub.add_parser("check-bco", help="the three BCO clauses")
    p.add_argument("file")
    p.set_defaults(fn=_cmd_check_bco)

    p = sub.add_parser("check-filter", help="application closure and k/s membership")
    p.add_argument("file")
    p.add_argument("--subset", nargs="*", help="override the file's filter")
    p.set_defaults(fn=_cmd_check_filter)

    p = sub.add_parser("build-aks", help="Krivine structure from a filtered opca + U")
    p.add_argument("file")
    p.add_argument("--U", nargs="*", help="downset elements (default: file's U)")
    p.add_argument("--max-len", type=int, default=3)
    p.add_argument("--out", help="write the built structure to this file")
    p.set_defaults(fn=_cmd_build_aks)

    p = sub.add_parser("check-aks", help="pole rules S1-S5 on an aks file")
    p.add_argument("file")
    p.set_defaults(fn=_cmd_check_aks)

    p = sub.add_parser("check-order-ca", help="induced order-ca on closed stack sets")
    p.add_argument("file")
    p.set_defaults(fn=_cmd_check_order_ca)

    p = sub.add_parser("check-tripos",
                       help="sup-algebra, pre-implicative, Booleanization suites")
    p.add_argument("file")
    p.add_argument("--index-size", type=int, default=1)
    p.add_argument("--predicate-cap", type=int, default=4096)
    p.set_defaults(fn=_cmd_check_tripos)

    p = sub.add_parser("check-localic",
                       help="localic criterion + least truth value + (Kr)")
    p.add_argument("file")
    p.add_argument("--max-len", type=int, default=3)
    p.set_defaults(fn=_cmd_check_localic)

    p = sub.add_parser("check-density", help="computational density of a map")
    p.add_argument("src")
    p.add_argument("dst")
    p.add_argument("mapfile")
    p.set_defaults(fn=_cmd_check_density)

    p = sub.add_parser("k2", help="dialogue model operations")
    k2sub = p.add_subparsers(dest="k2_command", required=True)
    q = k2sub.add_parser("apply")
    q.add_argument("--alpha", required=True, help="generator expression")
    q.add_argument("--beta", required=True)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--fuel", type=int, default=10**5)
    q.set_defaults(fn=_cmd_k2)
    q = k2sub.add_parser("tau")
    q.add_argument("--alpha", required=True)
    q.add_argument("--prefix", required=True, help="comma-separated values")
    q.add_argument("--nprime", type=int, required=True)
    q.add_argument("--j", type=int, required=True)
    q.add_argument("--fuel", type=int, default=8)
    q.set_defaults(fn=_cmd_k2)
    q = k2sub.add_parser("discrete")
    q.add_argument("--elems", required=True, help="semicolon-separated expressions")
    q.add_argument("--depth", type=int, required=True)
    q.set_defaults(fn=_cmd_k2)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except StructureError as e:
        print(f"input error: {e}", file=sys.stderr)
        return 2
    except (ConstructionError, CapExceeded) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
