"""Acceptance suite: twelve criteria, each with its stated tolerance and time budget.

Run with pytest (a summary line per criterion is printed at the end of the session)
or directly with `python3 tests/test_acceptance.py`.
"""

import time
from fractions import Fraction
from itertools import product

import pytest

from artifact.groups import parse_word
from artifact.poisson import (bs_lattice_count, build_skeleton, corollary_vol_check, pt_variety,
                              quantizability_check, synthetic_counterexample, verify_bs_duality, volume)
from artifact.potential import (bk_potential, comparison_map, cone_for, dual_pair, fiber_count,
                                fiber_enumerate, verify_chart_independence, verify_cone_comparison,
                                verify_crystal_scaling)
from artifact.rootdata import parse_group, registered_data
from artifact.symbolic import parse_poly
from oracles import rank2_bc_dim
from test_potential import SO5_CONE, SP4_CONE

B2_WORD = (-1, -2, -1, -2)
VARS = ("h1", "h2", "t1", "t2", "t3", "t4")

RESULTS = {}


def _criterion_1():
    so5, sp4 = bk_potential(parse_group("SO5"), B2_WORD), bk_potential(parse_group("SP4"), B2_WORD)
    so5_total = parse_poly("t1 + t3*t4^-2 + 2 * t2*t4^-1 + t2^2*t3^-1 + t4 + h1*t1^-1"
                           " + h2*t4^-1 + h2*t2*t3^-1 + h2*t1*t2^-1", VARS)
    sp4_total = parse_poly("t1 + t2*t3^-1 + t3*t4^-1 + t4 + h1^2*h2^-1*t1^-1 + h1^-2*h2^2*t4^-1"
                           " + h1^-2*h2^2*t2*t3^-2 + 2 * h1^-2*h2^2*t1*t3^-1 + h1^-2*h2^2*t1^2*t2^-1", VARS)
    ok = (so5.total() == so5_total and sp4.total() == sp4_total
          and set(cone_for(parse_group("SO5"), B2_WORD).inequalities) == SO5_CONE
          and set(cone_for(parse_group("SP4"), B2_WORD).inequalities) == SP4_CONE)
    return ok, "SO5 and Sp4 potentials and cones equal the golden transcriptions"


def _criterion_2():
    sl2 = set(cone_for(parse_group("SL2"), (-1,)).inequalities)
    psl2 = set(cone_for(parse_group("PSL2"), (-1,)).inequalities)
    return sl2 == {(0, 1), (2, -1)} and psl2 == {(0, 1), (1, -1)}, f"SL2 {sorted(sl2)}, PSL2 {sorted(psl2)}"


def _criterion_3():
    m = comparison_map(parse_group("SO5"), B2_WORD).matrix
    golden = ((1, 1, 0, 0, 0, 0), (1, 2, 0, 0, 0, 0), (0, 0, 1, 0, 0, 0),
              (0, 0, 0, 2, 0, 0), (0, 0, 0, 0, 1, 0), (0, 0, 0, 0, 0, 2))
    return m == golden, "psi = (x1+x2, x1+2x2; t1, 2t2, t3, 2t4)"


def _criterion_4():
    bad, parts = 0, []
    for name, letters in [("SL3", (-1, -2, -1)), ("SO5", B2_WORD), ("SP4", B2_WORD), ("SL2", (-1,))]:
        cone, dual_cone, psi = dual_pair(parse_group(name), letters)
        rep = verify_cone_comparison(cone, dual_cone, psi, samples=2000, box=20, seed=0)
        bad += len(rep["counterexamples"])
        parts.append(f"{name}: {len(rep['counterexamples'])}")
    return bad == 0, "counterexamples " + ", ".join(parts)


def _criterion_5():
    bad, parts = 0, []
    for name, letters in [("SL3", (-1, -2, -1)), ("SO5", B2_WORD)]:
        rep = verify_chart_independence(parse_group(name), letters, samples=2000, box=20, seed=0)
        bad += len(rep["counterexamples"])
        parts.append(f"{name}: {len(rep['counterexamples'])}")
    return bad == 0, "mismatches " + ", ".join(parts)


def _criterion_6():
    so5, sp4 = parse_group("SO5"), parse_group("SP4")
    cone = cone_for(so5, B2_WORD)
    bad = []
    for a, b in product(range(5), repeat=2):
        n = fiber_count(cone, (a, b))
        if n != sp4.weyl_dim((a, b)) or n != rank2_bc_dim(a, b):
            bad.append(((a, b), n))
    ok = not bad and fiber_count(cone, (1, 0)) == 4 and fiber_count(cone, (0, 1)) == 5
    return ok, f"25 labels checked, mismatches {bad}"


def _criterion_7():
    cone, dual_cone, psi = dual_pair(parse_group("SO5"), B2_WORD)
    bad, points = 0, 0
    for lam in product(range(5), repeat=2):
        rep = verify_crystal_scaling(cone, dual_cone, psi, lam)
        bad += len(rep["counterexamples"])
        points += rep["fiber_size"]
    return bad == 0, f"{points} points, {bad} violations"


def _criterion_8():
    words = 0
    for name in ("A2", "A3", "B2", "C2"):
        datum = parse_group(name)
        for w in datum.reduced_words_of_w0():
            build_skeleton(datum, tuple(-i for i in w))  # raises TheoremSymViolation on failure
            words += 1
    return True, f"{words} reduced words factor as B = D B'"


def _criterion_9():
    bad, parts = 0, []
    for name in ("SO5", "SP4"):
        datum = parse_group(name)
        for lam_vee in [(1, 0), (0, 1), (1, 1)]:
            rep = verify_bs_duality(datum, B2_WORD, datum.psi(lam_vee), box=12)
            bad += len(rep["counterexamples"])
            parts.append(f"{name}{lam_vee}:{rep['size']}")
    return bad == 0, "set sizes " + " ".join(parts)


def _criterion_10():
    so5 = parse_group("SO5")
    skel = build_skeleton(so5, B2_WORD)
    row = volume(skel, (1, 1), [20])[0]
    ratio = float(row["ratio"])
    cor = corollary_vol_check(so5, [(1, 1), (2, 2)])
    ok = abs(ratio - 1) <= 0.05 and cor["status"] == "pass"
    return ok, (f"N=20 count {row['count']} vs {row['weyl_product']}, ratio {ratio:.4f} (tolerance 0.05); "
                f"dimension identity {cor['status']}")


def _criterion_11():
    results = {}
    for name, letters in [("SL2", (-1,)), ("SL3", (-1, -2, -1)), ("SO5", B2_WORD)]:
        datum = parse_group(name)
        results[name] = quantizability_check(pt_variety(datum, letters), datum.psi((2,) * datum.rank))
    synthetic = quantizability_check(synthetic_counterexample(), (2, 2))
    return all(results.values()) and not synthetic, f"{results}, synthetic {synthetic}"


def _criterion_12():
    data = registered_data()
    return all(d.denominator_identity_check() for d in data), f"{len(data)} registered data"


CRITERIA = [
    (1, "potentials and cones for SO5 / Sp4", _criterion_1, 10),
    (2, "SL2 / PSL2 cones", _criterion_2, 1),
    (3, "comparison map golden", _criterion_3, 1),
    (4, "cone comparison, 2000 samples", _criterion_4, 60),
    (5, "chart independence, 2000 samples", _criterion_5, 120),
    (6, "crystal fiber counts", _criterion_6, 120),
    (7, "crystal scaling", _criterion_7, 120),
    (8, "B = D B' for all reduced words", _criterion_8, 30),
    (9, "Bohr-Sommerfeld duality", _criterion_9, 60),
    (10, "volume asymptotics and dimension identity", _criterion_10, 300),
    (11, "quantizability criterion", _criterion_11, 10),
    (12, "Weyl denominator product identity", _criterion_12, 1),
]


def run_criterion(number, func, budget):
    start = time.perf_counter()
    try:
        ok, detail = func()
    except Exception as exc:  # a raised theorem violation is a failure, not an error
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    elapsed = time.perf_counter() - start
    if elapsed > budget:
        ok, detail = False, f"{detail}; took {elapsed:.1f}s, budget {budget}s"
    line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'} ({elapsed:.1f}s) {detail}"
    RESULTS[number] = line
    return ok, line


@pytest.mark.parametrize("number,title,func,budget", CRITERIA, ids=[f"c{n:02d}" for n, *_ in CRITERIA])
def test_criterion(number, title, func, budget):
    ok, line = run_criterion(number, func, budget)
    print(line)
    assert ok, line


if __name__ == "__main__":
    for number, title, func, budget in CRITERIA:
        print(run_criterion(number, func, budget)[1], flush=True)
