from collections import Counter
from fractions import Fraction
from itertools import product

import pytest

from artifact.errors import LatticeError, NotDominant, NotInCone
from artifact.potential import (bk_potential, comparison_map, cone_for, crystal_apply, crystal_axioms,
                                crystal_dot, crystal_stats, dual_pair, fiber_count, fiber_enumerate,
                                hw_trop, verify_chart_independence, verify_cone_comparison,
                                verify_crystal_scaling, weight)
from artifact.rootdata import langlands_dual, parse_group
from artifact.symbolic import parse_poly
from oracles import brute_cone_points, rank2_bc_dim, sl_dim, so5_dim

B2_WORD = (-1, -2, -1, -2)
VARS = ("h1", "h2", "t1", "t2", "t3", "t4")

# coordinates (x1, x2, t1, t2, t3, t4); each row reads <row, point> >= 0
SO5_CONE = {
    (1, 0, -1, 0, 0, 0), (0, 0, 1, 0, 0, 0),        # x1 >= t1 >= 0
    (0, 1, 0, 0, 0, -1), (0, 0, 0, 0, 0, 1),        # x2 >= t4 >= 0
    (0, 0, 0, 2, -1, 0), (0, 0, 0, 0, 1, -2),       # 2t2 >= t3 >= 2t4
    (0, 1, 1, -1, 0, 0),                            # x2 >= t2 - t1
    (0, 1, 0, 1, -1, 0),                            # x2 >= t3 - t2
}
SP4_CONE = {
    (2, -1, -1, 0, 0, 0), (0, 0, 1, 0, 0, 0),       # 2y1 - y2 >= t1 >= 0
    (-2, 2, 0, 0, 0, -1), (0, 0, 0, 0, 0, 1),       # 2y2 - 2y1 >= t4 >= 0
    (0, 0, 0, 1, -1, 0), (0, 0, 0, 0, 1, -1),       # t2 >= t3 >= t4
    (-2, 2, 2, -1, 0, 0),                           # 2y2 - 2y1 >= t2 - 2t1
    (-2, 2, 0, 1, -2, 0),                           # 2y2 - 2y1 >= 2t3 - t2
}


def _terms(name):
    pot = bk_potential(parse_group(name), B2_WORD)
    return {label: p for label, p in pot.terms()}


def test_so5_potential():
    t = _terms("SO5")
    assert t["p1"] == parse_poly("t1 + t3*t4^-2 + 2 * t2*t4^-1 + t2^2*t3^-1", VARS)
    assert t["p2"] == parse_poly("t4", VARS)
    assert t["q1"] == parse_poly("h1*t1^-1", VARS)
    assert t["q2"] == parse_poly("h2*t4^-1 + h2*t2*t3^-1 + h2*t1*t2^-1", VARS)


def test_sp4_potential():
    t = _terms("SP4")
    assert t["p1"] == parse_poly("t1 + t2*t3^-1 + t3*t4^-1", VARS)
    assert t["p2"] == parse_poly("t4", VARS)
    assert t["q1"] == parse_poly("h1^2*h2^-1*t1^-1", VARS)
    assert t["q2"] == parse_poly("h1^-2*h2^2*t4^-1 + h1^-2*h2^2*t2*t3^-2 + 2 * h1^-2*h2^2*t1*t3^-1"
                                 " + h1^-2*h2^2*t1^2*t2^-1", VARS)


def test_rank_two_cones():
    assert set(cone_for(parse_group("SO5"), B2_WORD).inequalities) == SO5_CONE
    assert set(cone_for(parse_group("SP4"), B2_WORD).inequalities) == SP4_CONE


def test_rank_one_cones():
    assert set(cone_for(parse_group("SL2"), (-1,)).inequalities) == {(0, 1), (2, -1)}
    assert set(cone_for(parse_group("PSL2"), (-1,)).inequalities) == {(0, 1), (1, -1)}
    assert cone_for(parse_group("SL2"), (-1,)).describe() == ["t1 >= 0", "2x1 - t1 >= 0"]


def test_comparison_map_golden():
    psi = comparison_map(parse_group("SO5"), B2_WORD)
    assert psi.matrix == ((1, 1, 0, 0, 0, 0), (1, 2, 0, 0, 0, 0), (0, 0, 1, 0, 0, 0),
                          (0, 0, 0, 2, 0, 0), (0, 0, 0, 0, 1, 0), (0, 0, 0, 0, 0, 2))
    assert psi((1, 1, 0, 0, 0, 0)) == (2, 3, 0, 0, 0, 0)


@pytest.mark.parametrize("name,letters", [("SO5", B2_WORD), ("SP4", (-2, -1, -2, -1)), ("SL3", (-1, -2, -1))])
def test_fiber_matches_brute_force(name, letters):
    datum = parse_group(name)
    cone = cone_for(datum, letters)
    r, m = datum.rank, len(letters)
    for lam_vee in product(range(3), repeat=r):
        try:
            lam = datum.cochar_coords(lam_vee)
        except LatticeError:
            continue
        # append the fixed x as a constant coordinate equal to 1
        rows = [row[r:] + (sum(a * b for a, b in zip(row[:r], lam)),) for row in cone.inequalities]
        pts = {p[:m] for p in brute_cone_points(rows, 10, m + 1) if p[m] == 1}
        assert {p[r:] for p in fiber_enumerate(cone, lam)} == pts


def test_fiber_counts_match_dual_dimensions():
    cases = [("SO5", B2_WORD, rank2_bc_dim), ("SP4", B2_WORD, so5_dim), ("SL3", (-1, -2, -1), lambda a, b: sl_dim((a, b)))]
    for name, letters, oracle in cases:
        datum = parse_group(name)
        cone = cone_for(datum, letters)
        checked = 0
        for lam_vee in product(range(4), repeat=2):
            try:
                lam = datum.cochar_coords(lam_vee)
            except LatticeError:
                continue
            assert fiber_count(cone, lam) == oracle(*lam_vee)
            checked += 1
        assert checked >= 4


def test_fiber_rejects_non_dominant():
    with pytest.raises(NotDominant):
        fiber_enumerate(cone_for(parse_group("SO5"), B2_WORD), (1, -1))


def test_specific_fiber_sizes():
    cone = cone_for(parse_group("SO5"), B2_WORD)
    assert fiber_count(cone, (1, 0)) == 4
    assert fiber_count(cone, (0, 1)) == 5
    assert fiber_count(cone, (1, 1)) == 16


def test_crystal_axioms_hold():
    for name, letters, lams in [("SO5", B2_WORD, [(1, 1), (2, 1)]), ("SP4", B2_WORD, [(1, 2), (2, 2)]),
                                ("SL3", (-2, -1, -2), [(1, 1), (3, 0)])]:
        datum = parse_group(name)
        cone = cone_for(datum, letters)
        for lam_vee in lams:
            assert crystal_axioms(cone, datum.cochar_coords(lam_vee)) == []


def test_crystal_is_a_connected_highest_weight_crystal():
    so5 = parse_group("SO5")
    cone = cone_for(so5, B2_WORD)
    pts = fiber_enumerate(cone, (1, 1))
    tops = [p for p in pts if crystal_stats(cone, p)["epsilon"] == (0, 0)]
    assert tops == [(1, 1, 0, 0, 0, 0)]
    assert weight(cone, tops[0]) == (1, 1)
    # the character is Weyl invariant
    wts = Counter(weight(cone, p) for p in pts)
    for w, mult in wts.items():
        for i in (1, 2):
            assert wts[so5.reflect_h(i, w)] == mult


def test_crystal_ghost_and_errors():
    cone = cone_for(parse_group("SL2"), (-1,))
    assert crystal_apply(cone, "f", 1, (1, 2)) is None
    assert crystal_apply(cone, "e", 1, (1, 0)) is None
    assert crystal_apply(cone, "f", 1, (1, 0)) == (1, 1)
    with pytest.raises(NotInCone):
        hw_trop(cone, (1, 3))


def test_crystal_dot():
    text = crystal_dot(cone_for(parse_group("SL2"), (-1,)), (2,))
    assert text.startswith("digraph crystal {")
    assert text.count("->") == 4


@pytest.mark.parametrize("name,letters", [("SO5", B2_WORD), ("SL2", (-1,)), ("SL3", (-1, -2, -1))])
def test_cone_comparison_sampled(name, letters):
    cone, dual_cone, psi = dual_pair(parse_group(name), letters)
    report = verify_cone_comparison(cone, dual_cone, psi, samples=300, seed=1)
    assert report["status"] == "pass", report["counterexamples"][:3]


def test_cone_comparison_detects_a_wrong_map():
    cone, dual_cone, psi = dual_pair(parse_group("SO5"), B2_WORD)
    wrong = comparison_map(parse_group("SP4"), B2_WORD)
    report = verify_cone_comparison(cone, dual_cone, wrong, samples=300, seed=1)
    assert report["status"] == "fail"


def test_crystal_scaling():
    cone, dual_cone, psi = dual_pair(parse_group("SO5"), B2_WORD)
    for lam in [(1, 0), (0, 1), (1, 1)]:
        assert verify_crystal_scaling(cone, dual_cone, psi, lam)["status"] == "pass"


@pytest.mark.parametrize("name,letters", [("SO5", B2_WORD), ("SL3", (-1, -2, -1)), ("SP4", (-2, -1, -2, -1))])
def test_chart_independence_sampled(name, letters):
    report = verify_chart_independence(parse_group(name), letters, samples=200, seed=2)
    assert report["status"] == "pass"
