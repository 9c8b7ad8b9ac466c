"""Command-line front end.  Every subcommand prints JSON (or DOT) on stdout.

Exit codes: 0 pass, 1 theorem-check failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from itertools import product

from . import cluster, poisson, potential
from .errors import ArtifactError, NotReduced
from .groups import factorization_chart, generalized_minor, parse_word, word_seed
from .rootdata import langlands_dual, parse_group
from .symbolic import format_poly


def _ints(text: str) -> tuple:
    return tuple(int(x) for x in text.split(",") if x.strip()) if text else ()


def _fracs(text: str) -> tuple:
    return tuple(Fraction(x) for x in text.split(","))


def _enc(obj):
    if isinstance(obj, Fraction):
        return int(obj) if obj.denominator == 1 else str(obj)
    if isinstance(obj, dict):
        return {str(k): _enc(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_enc(v) for v in obj]
    return obj


def _emit(obj) -> None:
    print(json.dumps(_enc(obj), sort_keys=True, indent=2))


def _word(datum, args):
    if args.word:
        return parse_word(datum, args.word)
    return parse_word(datum, tuple(-i for i in datum.longest_word()))


def _status(report) -> int:
    return 0 if report.get("status") == "pass" else 1


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_rootdata(args) -> int:
    datum = parse_group(args.group)
    out = datum.to_json()
    out["dual"] = langlands_dual(datum).to_json()
    _emit(out)
    return 0


def cmd_seed(args) -> int:
    datum = parse_group(args.group)
    _emit(word_seed(_word(datum, args)).to_json())
    return 0


def cmd_mutate(args) -> int:
    datum = parse_group(args.group)
    seed = word_seed(_word(datum, args))
    path = cluster.MutationPath(seed, _ints(args.at))
    _emit({"directions": list(path.directions), "seed": path.end().to_json()})
    return 0


def cmd_minor(args) -> int:
    datum = parse_group(args.group)
    word = _word(datum, args)
    g = factorization_chart(word)
    p = generalized_minor(_ints(args.u), _ints(args.v), args.i, g)
    _emit({"u": list(_ints(args.u)), "v": list(_ints(args.v)), "i": args.i,
           "word": list(word.letters), "minor": format_poly(p)})
    return 0


def cmd_potential(args) -> int:
    datum = parse_group(args.group)
    pot = potential.bk_potential(datum, _word(datum, args))
    _emit({"variables": list(pot.variables),
           "terms": {label: format_poly(t) for label, t in pot.terms()}})
    return 0


def cmd_cone(args) -> int:
    datum = parse_group(args.group)
    cone = potential.cone_for(datum, _word(datum, args).letters)
    out = cone.to_json()
    out["describe"] = cone.describe()
    _emit(out)
    return 0


def cmd_crystal(args) -> int:
    datum = parse_group(args.group)
    cone = potential.cone_for(datum, _word(datum, args).letters)
    lam = datum.cochar_coords(_fracs(args.fiber))
    if args.dot:
        print(potential.crystal_dot(cone, lam))
        return 0
    pts = potential.fiber_enumerate(cone, lam)
    _emit({"lambda_vee": list(_fracs(args.fiber)), "size": len(pts),
           "points": [{"point": list(p), **potential.crystal_stats(cone, p)} for p in pts]})
    return 0


def cmd_compare(args) -> int:
    datum = parse_group(args.group)
    psi = potential.comparison_map(datum, _word(datum, args))
    _emit({"point": list(_fracs(args.point)), "image": list(psi(_fracs(args.point)))})
    return 0


def cmd_poisson(args) -> int:
    datum = parse_group(args.group)
    skel = poisson.build_skeleton(datum, _word(datum, args))
    if args.action == "bracket":
        _emit(skel.to_json())
        return 0
    if args.action == "leaves":
        _emit(poisson.leaves(skel, _fracs(args.lam_vee)))
        return 0
    if args.action == "bs":
        lam_vee = poisson.lambda_vee_of(datum, _fracs(args.lam))
        bs = poisson.bs_lattice(skel, lam_vee, args.box)
        report = poisson.verify_bs_duality(datum, skel.word.letters, _fracs(args.lam), args.box)
        _emit({"lambda_vee": list(lam_vee), "base_point": list(bs.base_point),
               "points": [list(p) for p in bs.points()],
               "x_chart": [list(p) for p in bs.x_chart_points(skel)], "duality": report})
        return _status(report)
    if args.action == "volume":
        rows = poisson.volume(skel, _fracs(args.lam_vee), range(1, args.N + 1) if args.all else [args.N])
        _emit({"lambda_vee": list(_fracs(args.lam_vee)),
               "rows": [{**r, "ratio_float": float(r["ratio"])} for r in rows]})
        return 0
    raise AssertionError(args.action)


def _small_dominant(datum, top: int = 2) -> list:
    """Nonzero dominant cocharacters with omega-vee coordinates at most top."""
    out = []
    for lam in product(range(top + 1), repeat=datum.rank):
        if any(lam):
            try:
                datum.cochar_coords(lam)
            except ArtifactError:
                continue
            out.append(lam)
    return out


def verify_all(datum, letters, samples: int = 2000, seed: int = 0) -> list:
    """Every theorem check available for one datum and double reduced word."""
    reports = []
    reports.append({"check": "denominator_identity",
                    "status": "pass" if datum.denominator_identity_check() else "fail",
                    "counterexamples": []})
    bad = []
    for w in datum.reduced_words_of_w0():
        try:
            poisson.build_skeleton(datum, tuple(-i for i in w))
        except ArtifactError as exc:
            bad.append({"word": list(w), "error": str(exc)})
    reports.append({"check": "theorem_sym", "status": "pass" if not bad else "fail", "counterexamples": bad})
    cone, dual_cone, psi = potential.dual_pair(datum, letters)
    basis = _small_dominant(datum)
    dual = langlands_dual(datum)
    bad_fiber, bad_axiom = [], []
    for lam_vee in basis:
        lam_c = datum.cochar_coords(lam_vee)
        n = potential.fiber_count(cone, lam_c)
        if n != dual.weyl_dim(lam_vee):
            bad_fiber.append({"lambda_vee": list(lam_vee), "count": n, "weyl_dim": dual.weyl_dim(lam_vee)})
        bad_axiom += potential.crystal_axioms(cone, lam_c)
    reports.append({"check": "fiber_counts", "status": "pass" if not bad_fiber else "fail",
                    "counterexamples": bad_fiber})
    reports.append({"check": "crystal_axioms", "status": "pass" if not bad_axiom else "fail",
                    "counterexamples": bad_axiom})
    psi_checks = ["cone_comparison", "chart_independence", "crystal_scaling", "bs_duality",
                  "corollary_volume", "quantizability"]
    if not datum.psi_integral:
        # psi is not a map of lattices, so the comparison statements do not apply
        reason = "psi does not map X_*(H) into X^*(H)"
        reports += [{"check": c, "status": "skipped", "reason": reason, "counterexamples": []}
                    for c in psi_checks]
        return reports
    reports.append(potential.verify_cone_comparison(cone, dual_cone, psi, samples=samples, seed=seed))
    reports.append(potential.verify_chart_independence(datum, letters, samples=samples, seed=seed))
    bad_scaling = []
    for lam_vee in basis:
        lam_c = datum.cochar_coords(lam_vee)
        bad_scaling += potential.verify_crystal_scaling(cone, dual_cone, psi, lam_c)["counterexamples"]
    reports.append({"check": "crystal_scaling", "status": "pass" if not bad_scaling else "fail",
                    "counterexamples": bad_scaling})
    for lam_vee in basis:
        reports.append(poisson.verify_bs_duality(datum, letters, datum.psi(lam_vee)))
    regular = [lam for lam in basis if all(lam)]
    reports.append(poisson.corollary_vol_check(datum, regular))
    q = poisson.quantizability_check(poisson.pt_variety(datum, letters), datum.psi(regular[-1]))
    reports.append({"check": "quantizability", "status": "pass" if q else "fail", "counterexamples": []})
    return reports


def cmd_verify(args) -> int:
    datum = parse_group(args.group)
    word = _word(datum, args)
    reports = verify_all(datum, word.letters, args.samples, args.seed)
    ok = all(r["status"] != "fail" for r in reports)
    _emit({"group": args.group, "word": list(word.letters), "seed": args.seed,
           "status": "pass" if ok else "fail", "reports": reports})
    return 0 if ok else 1


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="artifact", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--group", required=True, help="e.g. A1, SL2, PSL2, B2, C2, SO5, SP4, A2:adj")
        p.add_argument("--word", default="", help="comma separated signed letters, negative for (w0, e)")
        p.add_argument("--seed", type=int, default=0, help="RNG seed for sampling checks")
        p.set_defaults(func=func)
        return p

    add("rootdata", cmd_rootdata, "Cartan data, lattices and psi")
    add("seed", cmd_seed, "seed of a double reduced word")
    add("mutate", cmd_mutate, "mutate the word seed").add_argument("--at", required=True,
                                                                    help="comma separated directions")
    p = add("minor", cmd_minor, "generalized minor on the factorization chart")
    p.add_argument("--u", default="", help="reduced word of u")
    p.add_argument("--v", default="", help="reduced word of v")
    p.add_argument("--i", type=int, required=True)
    add("potential", cmd_potential, "BK potential terms")
    add("cone", cmd_cone, "BK cone inequalities")
    p = add("crystal", cmd_crystal, "crystal structure on a fiber")
    p.add_argument("--fiber", required=True, help="lambda-vee in fundamental coweight coordinates")
    p.add_argument("--dot", action="store_true", help="print a DOT graph instead of JSON")
    add("compare", cmd_compare, "tropical comparison map").add_argument("--point", required=True)
    p = add("poisson", cmd_poisson, "PT(K*) bracket, leaves, Bohr-Sommerfeld lattice, volume")
    p.add_argument("action", choices=["bracket", "leaves", "bs", "volume"])
    p.add_argument("--lambda", dest="lam", default="", help="integral dominant weight (bs)")
    p.add_argument("--lambda-vee", dest="lam_vee", default="", help="coweight label (leaves, volume)")
    p.add_argument("--box", type=int, default=12)
    p.add_argument("--N", type=int, default=20)
    p.add_argument("--all", action="store_true", help="volume rows for every N up to --N")
    p = add("verify", cmd_verify, "run every theorem check")
    p.add_argument("target", choices=["all"])
    p.add_argument("--samples", type=int, default=2000)
    return parser


_VALUE_FLAGS = ("--word", "--point", "--at", "--fiber", "--lambda", "--lambda-vee", "--u", "--v")


def _glue_negative_values(argv: list) -> list:
    """'--word -1,-2' -> '--word=-1,-2' so argparse does not read the value as an option."""
    out, k = [], 0
    while k < len(argv):
        a = argv[k]
        if a in _VALUE_FLAGS and k + 1 < len(argv) and argv[k + 1].startswith("-"):
            out.append(f"{a}={argv[k + 1]}")
            k += 2
            continue
        out.append(a)
        k += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_glue_negative_values(argv))
    try:
        return args.func(args)
    except NotReduced as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ArtifactError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
