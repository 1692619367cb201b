from fractions import Fraction as Q

import pytest

from pvcubics import catalog
from pvcubics.catalog import (EPSILON, LABELS, XPoly, build, cubic, evaluate,
                              gtable, omega_polys, reconcile_intro)
from pvcubics.rings import CoeffPoly, DEFAULT_TABLE

T = DEFAULT_TABLE


def sym(name, k=1):
    return CoeffPoly.sym(name, k, T)


def const(v):
    return CoeffPoly.const(v, T)


def omega_reference(label):
    # independent transcription of the master formulas, used as the oracle
    e1, e2, e3 = EPSILON[label]
    G1, G2, G3, Gi = sym("G1"), sym("G2"), sym("G3"), sym("Ginf")
    return (
        -(G1 * Gi) - const(e1) * G2 * G3,
        -(G2 * Gi) - const(e2) * G1 * G3,
        -(G3 * Gi) - const(e3) * G1 * G2,
        const(e2 * e3) * G1 ** 2 + const(e1 * e3) * G2 ** 2
        + const(e1 * e2) * G3 ** 2 + Gi ** 2 + G1 * G2 * G3 * Gi
        - const(4 * e1 * e2 * e3),
    )


def test_epsilon_table():
    assert EPSILON["E8"] == (0, 0, 0)
    assert EPSILON["D4"] == (1, 1, 1)
    assert EPSILON["E6"] == (1, 0, 0)
    for lab in LABELS:
        assert all(e in (0, 1) for e in EPSILON[lab])


def test_omegas_reconstruct_for_all_labels():
    for lab in LABELS:
        assert build(lab).omega == omega_reference(lab)


def test_d5_omega4_after_gtable():
    spec = build("D5")
    w = spec.omega_specialized()
    assert w[3] == const(1) + sym("Ginf") ** 2 + sym("G1") * sym("G2") * sym("Ginf")
    assert w[2] == -sym("Ginf")
    assert w[0] == -sym("G1") * sym("Ginf") - sym("G2")
    assert w[1] == -sym("G2") * sym("Ginf") - sym("G1")


def test_e7star_omegas_after_gtable():
    w = build("E7star").omega_specialized()
    assert w[0] == const(-1) and w[1] == const(-1) and w[2] == const(-1)
    assert w[3] == sym("g", -2) + sym("g", 2)   # Ginf^2 + Ginf^-2 at Ginf = 1/g


def test_d6_omegas_match_section_display():
    w = build("D6").omega_specialized()
    ab = sym("a") * sym("b")
    assert w[0] == -(const(1) + ab ** 2)        # -1 - Ginf^2
    assert w[3] == ab ** 2                       # Ginf^2
    assert w[2].is_zero()


def test_e6_omegas_match_section_display():
    w = build("E6").omega_specialized()
    Gi = sym("Ginf")
    assert w[0] == -sym("G1") * Gi - Gi ** 2
    assert w[1] == -Gi ** 2
    assert w[2] == -Gi ** 2
    assert w[3] == Gi ** 2 + sym("G1") * Gi ** 3


def test_d8_raw_cubic_after_gtable():
    spec = build("D8")
    w = spec.omega_specialized()
    assert [str(x) for x in w] == ["-1", "-1", "0", "1"]


def test_d7_gtable_leaves_g2_free():
    spec = build("D7")
    w = spec.omega_specialized()
    assert w[0] == -sym("G2")     # G2 entry missing from the source table
    assert w[1] == const(-1)
    assert w[2].is_zero()
    assert w[3] == const(1)


def test_cubic_shape():
    c = cubic(build("D4"))
    one = CoeffPoly.one(T)
    assert c.coefficient((1, 1, 1), CoeffPoly.zero(T)) == one
    assert c.total_degree() == 3


def test_d4_all_twos_witness():
    # all G's = 2: omegas (-8,-8,-8,28); (-7,-7,-7) on the surface
    spec = build("D4")
    assign = {"G1": 2, "G2": 2, "G3": 2, "Ginf": 2}
    w = [wi.specialize(assign) for wi in spec.omega]
    assert [x.constant_value() for x in w] == [Q(-8), Q(-8), Q(-8), Q(28)]
    c = cubic(spec).map_coefficients(lambda k: k.specialize(assign))
    val = evaluate(c, tuple(const(-7) for _ in range(3)))
    assert val.is_zero()


def test_d5_witness_point():
    spec = build("D5")
    assign = {"G1": 2, "G2": 2, "G3": 1, "Ginf": 1}
    w = [wi.specialize(assign) for wi in spec.omega]
    assert [x.constant_value() for x in w] == [Q(-4), Q(-4), Q(-1), Q(6)]
    c = cubic(spec).map_coefficients(lambda k: k.specialize(assign))
    val = evaluate(c, (const(-5), const(-2), const(-7)))
    assert val.is_zero()


def test_evaluate_at_origin_gives_constant():
    for lab in LABELS:
        spec = build(lab)
        c = cubic(spec)
        zero3 = tuple(CoeffPoly.zero(T) for _ in range(3))
        assert evaluate(c, zero3) == spec.omega[3]


def test_e8_sign_change_reproduces_intro():
    rec = reconcile_intro("E8")
    assert rec["consistent"]
    assert rec["remark_sign_map"] == (-1, -1, 1)
    assert rec["remark_matches"]


def test_d6_reconciles_with_remark_map():
    rec = reconcile_intro("D6")
    assert rec["consistent"]
    assert (-1, -1, 1) in rec["matched_sign_maps"]


def test_e7starstar_reconciles_via_unstated_map():
    rec = reconcile_intro("E7starstar")
    assert rec["consistent"]
    assert (-1, 1, -1) in rec["matched_sign_maps"]


def test_e7star_remark_map_fails_and_is_reported():
    rec = reconcile_intro("E7star")
    assert not rec["consistent"]
    assert rec["remark_sign_map"] == (1, -1, 1)
    assert rec["remark_matches"] is False
    assert rec["remark_residuals"]


def test_e6_intro_constant_reported():
    rec = reconcile_intro("E6")
    assert not rec["consistent"]


def test_d7_d8_intro_dropped_terms_reported():
    assert not reconcile_intro("D7")["consistent"]
    rec = reconcile_intro("D8")
    assert not rec["consistent"]
    assert "i*x1" in rec["note"]


def test_d4_d5_trivially_consistent():
    assert reconcile_intro("D4")["consistent"]
    assert reconcile_intro("D5")["consistent"]


def test_metadata_table():
    assert build("D5").singularity == "A3"
    assert build("E6").singularity == "A2"
    for lab in ("D7", "D8", "E8"):
        assert build(lab).singularity == "non-singular"


def test_xpoly_compose_identity():
    c = cubic(build("D4"))
    one = CoeffPoly.one(T)
    xs = [XPoly.coordinate(i, one) for i in (1, 2, 3)]
    assert c.compose(xs) == c
