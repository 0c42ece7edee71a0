"""Command-line surface: closed forms, oracle tables and the verify suites.

See docs/formats.md for the CSV column layouts.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from fractions import Fraction

from . import assembly, lattice, ntransform, orbital_arch, orbital_local, spectral, testfns, verify
from .formal import FormalLog
from .ideals import load_config, parse_ideal


def _parse_range(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(x) for x in text.split(",")]


def cmd_ntransform(args) -> int:
    primes, _eta, _raw = load_config(args.config)
    n = parse_ideal(args.ideal, primes)
    if args.fn == "one":
        val = ntransform.closed_power(n, 0) if args.closed else ntransform.n_transform(ntransform.one_fn(), n)
        out = FormalLog.of_const(val)
    elif args.fn == "lognorm":
        out = ntransform.closed_log(n) if args.closed else ntransform.n_transform(ntransform.log_norm_fn(), n)
    elif args.fn.startswith("norm^"):
        t = Fraction(args.fn.split("^", 1)[1])
        val = ntransform.closed_power(n, t) if args.closed else ntransform.n_transform(ntransform.norm_power_fn(t), n)
        out = FormalLog.of_const(val)
    else:
        raise SystemExit(f"unknown --fn {args.fn}")
    json.dump({"ideal": str(n), "fn": args.fn, "result": out.to_json()}, sys.stdout, indent=2)
    print()
    return 0


def cmd_local_weights(args) -> int:
    rep_obj = json.loads(args.rep)
    kwargs = {"q": args.q, "c": int(rep_obj["c"])}
    if "Q" in rep_obj:
        kwargs["Q"] = Fraction(rep_obj["Q"])
    if "chi" in rep_obj:
        kwargs["chi"] = int(rep_obj["chi"])
    rep = spectral.LocalRepData(**kwargs)
    rows = []
    for k in range(1, args.k + 1):
        rows.append({
            "k": k,
            "r_center": str(spectral.r_at_center(rep, args.eta, k)),
            "partial_r": str(spectral.partial_r(rep, args.eta, k)),
            "partial_r_sum": str(spectral.partial_r_sum(rep, args.eta, k)),
        })
    json.dump({"rep": rep_obj, "q": args.q, "eta": args.eta, "table": rows}, sys.stdout, indent=2)
    print()
    return 0


def cmd_moments(args) -> int:
    writer = csv.writer(sys.stdout)
    writer.writerow(["n", "U_closed", "U_quad", "U_abs_err", "dU_closed", "dU_quad", "dU_abs_err"])
    for n in _parse_range(args.n):
        u_closed = float(testfns.unip_u_scaled(args.eta, n)) * args.q ** (-n / 2)
        du_closed = float(testfns.unip_du_scaled(args.eta, n)) * args.q ** (-n / 2) * math.log(args.q)
        u_quad = testfns.period_integral("upsilon", args.q, args.eta, testfns.alpha_pn_at(args.q, n)).real
        du_quad = testfns.period_integral("dunip_kernel", args.q, args.eta, testfns.alpha_pn_at(args.q, n)).real
        writer.writerow([n, f"{u_closed:.12g}", f"{u_quad:.12g}", f"{abs(u_closed - u_quad):.3e}",
                         f"{du_closed:.12g}", f"{du_quad:.12g}", f"{abs(du_closed - du_quad):.3e}"])
    return 0


def cmd_local_tables(args) -> int:
    place = json.loads(args.place)
    q = int(place["q"])
    writer = csv.writer(sys.stdout)
    writer.writerow(["ordb", "ordb1", "W_unram", "W_unram_oracle_delta",
                     "W_level", "W_level_oracle_delta", "W_ram", "W_ram_bound"])
    lo, hi = args.ordb.split("..")
    for ordb in range(int(lo), int(hi) + 1):
        pt = orbital_local.LocalPoint(ordb, 0 if ordb > 0 else (ordb if ordb < 0 else args.ordb1))
        wu = orbital_local.w_unramified(pt, q, args.eta)
        wu_o = orbital_local.w_unramified_oracle(pt, q, args.eta)
        wl = orbital_local.w_level(pt, args.ordn, q, args.eta)
        wl_o = orbital_local.w_level_oracle(pt, args.ordn, q, args.eta)
        wr = orbital_local.w_ramified(pt, args.f, q, 1, pt.unit_eta) if pt.ordb >= -args.f else 0.0
        wr_b = orbital_local.w_ramified_bound(pt, args.f, q)
        delta_u = (wu - wu_o).evaluate()
        delta_l = (wl - wl_o).evaluate()
        writer.writerow([ordb, pt.ordb1,
                         f"{wu.evaluate():.10g}", f"{delta_u:.3e}",
                         f"{wl.evaluate():.10g}", f"{delta_l:.3e}",
                         f"{wr * math.log(q):.10g}", f"{wr_b * math.log(q):.10g}"])
    return 0


def cmd_arch(args) -> int:
    b = float(Fraction(args.b)) if "/" in args.b else float(args.b)
    j_one = orbital_arch.j_arch(args.l, b, "one")
    j_sgn = orbital_arch.j_arch(args.l, b, "sgn")
    wp = orbital_arch.w_plus(args.l, b)
    wq = orbital_arch.w_plus_quad(args.l, b)
    eps_m1 = -1 if args.eps == "sgn" else 1
    json.dump({
        "l": args.l, "b": b,
        "J_one": [j_one.real, j_one.imag],
        "J_sgn": [j_sgn.real, j_sgn.imag],
        "W_plus": [wp.real, wp.imag],
        "W_eps": [(wp + eps_m1 * wp.conjugate()).real, (wp + eps_m1 * wp.conjugate()).imag],
        "oracle_delta": abs(wp - wq),
    }, sys.stdout, indent=2)
    print()
    return 0


def cmd_lattice(args) -> int:
    l = [float(x) for x in args.l.split(",")]
    if args.field == "Q":
        lat = lattice.embed_ideal("Q", args.ideal if args.ideal != "O" else 1)
        ambient = lattice.embed_ideal("Q", 1)
    else:
        m = int(args.field.replace("Q(sqrt", "").rstrip(")"))
        desc = "O" if args.ideal == "O" else int(args.ideal)
        lat = lattice.embed_ideal("real_quadratic", desc, m=m)
        ambient = lattice.embed_ideal("real_quadratic", "O", m=m)
    th = lattice.theta(lat, l, args.R)
    audits = lattice.bound_audits(lat, ambient, l, args.R)
    json.dump({
        "provenance": lat.provenance,
        "theta": th["value"],
        "tail_bound": th["tail_bound"],
        "tail_estimate": th["tail_estimate"],
        "points": th["count"],
        "r": lattice.min_vector_radius(lat),
        "covol": lat.covolume,
        "audits": {
            "theta_ratio": audits["theta_ratio"],
            "covering_ok": audits["covering_ok"],
            "submultiplicative_ok": audits["submultiplicative_ok"],
            "minkowski_ok": audits["minkowski_ok"],
        },
    }, sys.stdout, indent=2)
    print()
    return 0


def cmd_main_terms(args) -> int:
    primes, eta, raw = load_config(args.config)
    n = parse_ideal(args.n, primes)
    a = parse_ideal(args.a, primes)
    cobj = raw.get("consts", {})
    consts = assembly.AnalyticConsts(
        D_F=float(cobj.get("D_F", 1.0)),
        L1_eta=float(cobj.get("L1_eta", 1.0)),
        Lp_over_L=float(cobj.get("Lp_over_L", 0.0)),
    )
    w = assembly.WeightData(tuple(raw.get("weights", [6] * len(eta.arch_signs))))
    cls = None
    payload = {"n": str(n), "a": str(a), "nu": str(assembly.nu_of_n(n)),
               "X_n": assembly.x_of_n(n).to_json(), "C_l": assembly.c_l(w),
               "frak_C": assembly.frak_c(w, eta)}
    try:
        payload["AL_main"] = assembly.main_AL(n, a, eta, consts, w)
        cls = "+"
    except Exception:
        pass
    try:
        bracket = assembly.main_ADL_bracket(n, a, eta)
        geom = assembly.geom_kernel_bracket(n, a, eta)
        payload["ADL_bracket"] = bracket.to_json()
        payload["ADL_main"] = assembly.main_ADL_value(n, a, eta, consts, w)
        payload["geom_equals_main"] = bracket == geom
        cls = "-"
    except Exception:
        pass
    payload["sign_class"] = cls
    if args.out == "json":
        json.dump(payload, sys.stdout, indent=2)
        print()
    else:
        writer = csv.writer(sys.stdout)
        writer.writerow(sorted(payload))
        writer.writerow([json.dumps(payload[k]) if isinstance(payload[k], dict) else payload[k]
                         for k in sorted(payload)])
    return 0


def cmd_verify(args) -> int:
    names = None if args.suite == "all" else [args.suite]
    results = verify.run_suites(names, seed=args.seed)
    failures = 0
    for res in results:
        print(res.line())
        failures += not res.ok
    print(f"{len(results) - failures}/{len(results)} checks passed")
    return 1 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rtf", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("ntransform", help="transform of a named arithmetic function")
    p.add_argument("--config", required=True)
    p.add_argument("--fn", default="one", help="one | norm^t | lognorm")
    p.add_argument("--ideal", required=True)
    p.add_argument("--closed", action="store_true", help="use the closed form instead of the defining sum")
    p.set_defaults(func=cmd_ntransform)

    p = sub.add_parser("local-weights", help="r, partial r table for a local datum")
    p.add_argument("--rep", required=True, help='e.g. {"c":0,"Q":"1/3"}')
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--eta", type=int, choices=(1, -1), required=True)
    p.add_argument("--k", type=int, default=4)
    p.set_defaults(func=cmd_local_weights)

    p = sub.add_parser("moments", help="unipotent moments: closed vs contour quadrature")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--eta", type=int, choices=(1, -1), required=True)
    p.add_argument("--n", default="0..8")
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("local-tables", help="orbital integral tables with oracle deltas")
    p.add_argument("--place", required=True, help='e.g. {"q":3}')
    p.add_argument("--eta", type=int, choices=(1, -1), required=True)
    p.add_argument("--ordb", default="-3..6")
    p.add_argument("--ordb1", type=int, default=0)
    p.add_argument("--ordn", type=int, default=1)
    p.add_argument("--f", type=int, default=1)
    p.set_defaults(func=cmd_local_tables)

    p = sub.add_parser("arch", help="archimedean J and W values with the quadrature delta")
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--eps", default="one", choices=("one", "sgn"))
    p.set_defaults(func=cmd_arch)

    p = sub.add_parser("lattice", help="theta sum of an embedded ideal")
    p.add_argument("--field", default="Q", help='Q or "Q(sqrt2)"')
    p.add_argument("--ideal", default="O")
    p.add_argument("--l", default="6,6")
    p.add_argument("--R", type=float, default=50.0)
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("main-terms", help="main terms of the two averages")
    p.add_argument("--config", required=True)
    p.add_argument("--n", required=True)
    p.add_argument("--a", default="O")
    p.add_argument("--out", default="json", choices=("json", "csv"))
    p.set_defaults(func=cmd_main_terms)

    p = sub.add_parser("verify", help="run invariant suites; nonzero exit on failure")
    p.add_argument("--suite", default="all",
                   choices=("all",) + tuple(verify.SUITES))
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
