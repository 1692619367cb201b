import os
import random
from itertools import product

import pytest

from pvcubics.rings import CoeffPoly, DEFAULT_TABLE, DivisionFailure, Q
from pvcubics.torus import (CLASSICAL, QUANTUM, ModeMismatch, TorusElement,
                            TorusSubstitution, chi, exact_divide_torus,
                            oracle_weyl_phase, pairing, sigma, weyl_quantize)

SEED = int(os.environ.get("PVC_SEED", "20240901"))
T = DEFAULT_TABLE


def qh(k=1):
    return CoeffPoly.sym("qh", k, T)


def E(i, mode=QUANTUM):
    return TorusElement.gen(i, T, mode)


def rand_quantum(rng, nterms=3, span=3):
    out = TorusElement.zero(T, QUANTUM)
    for _ in range(rng.randint(1, nterms)):
        e = tuple(rng.randint(-span, span) for _ in range(3))
        c = CoeffPoly.monomial(
            {"qh": rng.randint(-2, 2), "g1": rng.randint(-1, 1)},
            Q(rng.randint(-5, 5), rng.randint(1, 4)), T)
        out = out + TorusElement.monomial(e, c, T, QUANTUM)
    return out


def rand_classical(rng, nterms=3, span=3):
    out = TorusElement.zero(T, CLASSICAL)
    for _ in range(rng.randint(1, nterms)):
        e = tuple(rng.randint(-span, span) for _ in range(3))
        c = CoeffPoly.monomial(
            {"g2": rng.randint(-1, 1)}, Q(rng.randint(-5, 5), rng.randint(1, 3)), T)
        out = out + TorusElement.monomial(e, c, T, CLASSICAL)
    return out


# -- exchange data -------------------------------------------------------

def test_pairing_antisymmetric_exhaustive():
    for a in product(range(-2, 3), repeat=3):
        assert pairing(a, a) == 0
        for b in product(range(-2, 3), repeat=3):
            assert pairing(a, b) == -pairing(b, a)


def test_chi_antisymmetrization_is_minus_pairing():
    # the hbar-free semiclassical statement: chi(a,b) - chi(b,a) + <a,b> = 0
    for a in product(range(-3, 4), repeat=3):
        for b in product(range(-3, 4), repeat=3):
            assert chi(a, b) - chi(b, a) + pairing(a, b) == 0


def test_sigma_against_bch_oracle():
    for a in product(range(-2, 3), repeat=3):
        assert sigma(a) == oracle_weyl_phase(a)


# -- quantum multiplication -----------------------------------------------

def test_e2_e1_gives_q_e1e2():
    # q^(1/2) E1 E2 = q^(-1/2) E2 E1, i.e. E2*E1 = qh^2 * E1E2
    got = E(2) * E(1)
    want = TorusElement.monomial((1, 1, 0), qh(2), T, QUANTUM)
    assert got == want
    # and the defining relation E1E2 = qh^-2 E2E1
    assert E(1) * E(2) == TorusElement.monomial((1, 1, 0), CoeffPoly.one(T), T, QUANTUM)


def test_cyclic_relations():
    for i, j in ((1, 2), (2, 3), (3, 1)):
        lhs = E(i) * E(j)
        rhs = (E(j) * E(i)).coeff_map(lambda c: c * qh(-2))
        assert lhs == rhs


def test_inverse_monomial():
    x = E(1)
    assert x * x.inverse() == TorusElement.one(T, QUANTUM)
    m = TorusElement.monomial((2, -1, 3), qh(3) * 5, T, QUANTUM)
    assert m * m.inverse() == TorusElement.one(T, QUANTUM)
    assert m.inverse() * m == TorusElement.one(T, QUANTUM)


def test_classical_mul_commutes():
    a, b = E(2, CLASSICAL), E(1, CLASSICAL)
    assert a * b == b * a


def test_mode_mismatch_raises():
    with pytest.raises(ModeMismatch):
        E(1, CLASSICAL) * E(1, QUANTUM)


def test_associativity_randomized():
    rng = random.Random(SEED)
    for _ in range(500):
        x, y, z = (rand_quantum(rng) for _ in range(3))
        assert (x * y) * z == x * (y * z)


# -- Weyl quantization ------------------------------------------------------

def test_weyl_examples():
    assert weyl_quantize((1, 1, 0), 1, T) == TorusElement.monomial((1, 1, 0), qh(1), T, QUANTUM)
    assert weyl_quantize((0, 1, 1), 1, T) == TorusElement.monomial((0, 1, 1), qh(1), T, QUANTUM)
    assert weyl_quantize((1, 0, 0), 1, T) == TorusElement.monomial((1, 0, 0), CoeffPoly.one(T), T, QUANTUM)


def test_weyl_inverse_pairs():
    one = TorusElement.one(T, QUANTUM)
    for a in product(range(-3, 4), repeat=3):
        na = (-a[0], -a[1], -a[2])
        assert weyl_quantize(a, 1, T) * weyl_quantize(na, 1, T) == one


def test_weyl_product_rule():
    # e^(aS) e^(bS) = qh^(-<a,b>) e^((a+b)S)
    for a in product(range(-2, 3), repeat=3):
        for b in ((1, 0, 0), (0, 1, -1), (2, -1, 1)):
            lhs = weyl_quantize(a, 1, T) * weyl_quantize(b, 1, T)
            ab = tuple(x + y for x, y in zip(a, b))
            rhs = weyl_quantize(ab, 1, T).coeff_map(lambda c: c * qh(-pairing(a, b)))
            assert lhs == rhs


def test_weyl_rejects_qh_coefficient():
    with pytest.raises(ValueError):
        weyl_quantize((1, 0, 0), qh(1), T)


def test_hermitian_conjugation_fixes_weyl_terms():
    x = weyl_quantize((1, 1, 0), CoeffPoly.sym("g1", 1, T) * 3, T) \
        + weyl_quantize((0, -1, 2), 1, T)
    assert x.hermitian_conjugate() == x


def test_conjugation_is_antihomomorphism():
    rng = random.Random(SEED + 3)
    for _ in range(100):
        x, y = rand_quantum(rng), rand_quantum(rng)
        lhs = (x * y).hermitian_conjugate()
        rhs = y.hermitian_conjugate() * x.hermitian_conjugate()
        assert lhs == rhs


# -- classical limit -----------------------------------------------------------

def test_classical_limit_examples():
    x = TorusElement.monomial((1, 1, 0), qh(1), T, QUANTUM)
    assert x.classical_limit() == TorusElement.monomial((1, 1, 0), 1, T, CLASSICAL)
    y = TorusElement.scalar(qh(2) - qh(-2), T, QUANTUM)
    assert y.classical_limit().is_zero()


def test_classical_limit_multiplicative():
    rng = random.Random(SEED + 4)
    for _ in range(200):
        x, y = rand_quantum(rng), rand_quantum(rng)
        assert (x * y).classical_limit() == x.classical_limit() * y.classical_limit()


# -- Poisson bracket -------------------------------------------------------------

def test_poisson_examples():
    e1, e2 = E(1, CLASSICAL), E(2, CLASSICAL)
    assert e1.poisson(e2) == TorusElement.monomial((1, 1, 0), 1, T, CLASSICAL)
    assert e1.poisson(e1.inverse()).is_zero()
    g1e1 = TorusElement.monomial((1, 0, 0), CoeffPoly.sym("g1", 1, T), T, CLASSICAL)
    assert g1e1.poisson(e2) == TorusElement.monomial((1, 1, 0), CoeffPoly.sym("g1", 1, T), T, CLASSICAL)


def test_poisson_antisymmetry_and_leibniz():
    rng = random.Random(SEED + 5)
    for _ in range(200):
        x, y, z = (rand_classical(rng) for _ in range(3))
        assert x.poisson(y) + y.poisson(x) == TorusElement.zero(T, CLASSICAL)
        assert x.poisson(y * z) == x.poisson(y) * z + y * x.poisson(z)


def test_poisson_jacobi_randomized():
    rng = random.Random(SEED + 6)
    zero = TorusElement.zero(T, CLASSICAL)
    for _ in range(150):
        x, y, z = (rand_classical(rng, nterms=2, span=2) for _ in range(3))
        s = x.poisson(y.poisson(z)) + y.poisson(z.poisson(x)) + z.poisson(x.poisson(y))
        assert s == zero


def test_poisson_rejects_quantum():
    with pytest.raises(ModeMismatch):
        E(1).poisson(E(2))


def test_semiclassical_compatibility_on_commutators():
    # E^a E^b - E^b E^a carries qh^(2chi(a,b)) - qh^(2chi(b,a)); at the
    # exponent level chi(a,b)-chi(b,a) = -<a,b> ties it to the bracket
    for a in ((1, 0, 0), (1, -2, 1), (0, 2, -1)):
        for b in ((0, 1, 0), (1, 1, 1), (-1, 0, 2)):
            xa = TorusElement.monomial(a, 1, T, QUANTUM)
            xb = TorusElement.monomial(b, 1, T, QUANTUM)
            comm = xa * xb - xb * xa
            ab = tuple(x + y for x, y in zip(a, b))
            want = TorusElement.monomial(ab, qh(2 * chi(a, b)) - qh(2 * chi(b, a)), T, QUANTUM)
            assert comm == want


# -- substitution -----------------------------------------------------------------

def test_substitution_monomial_images_classical():
    # E3 -> E1^-1 E2^-1 (the PI-case torus constraint, classical side)
    sub = TorusSubstitution(T, gen_images={3: (1, (-1, -1, 0))})
    x = TorusElement.monomial((0, 1, 1), 1, T, CLASSICAL)
    assert x.substitute(sub) == TorusElement.monomial((-1, 0, 0), 1, T, CLASSICAL)


def test_substitution_requires_pairing_preservation():
    with pytest.raises(ValueError):
        TorusSubstitution(T, gen_images={3: (1, (1, 1, 0))})


def test_substitution_symbol_to_central_monomial():
    # g2 -> E1E2E3 (the E6 constraint)
    sub = TorusSubstitution(T, sym_images={"g2": (1, (1, 1, 1))})
    x = TorusElement.scalar(CoeffPoly.sym("g2", 1, T), T, CLASSICAL)
    assert x.substitute(sub) == TorusElement.monomial((1, 1, 1), 1, T, CLASSICAL)


def test_substitution_zero_specialization():
    sub = TorusSubstitution(T, sym_images={"g2": None})
    x = TorusElement.monomial((1, 0, 0), CoeffPoly.sym("g2", 1, T), T, CLASSICAL) \
        + TorusElement.one(T, CLASSICAL)
    assert x.substitute(sub) == TorusElement.one(T, CLASSICAL)
    bad = TorusElement.scalar(CoeffPoly.sym("g2", -1, T), T, CLASSICAL)
    with pytest.raises(ValueError):
        bad.substitute(sub)


def test_substitution_is_homomorphism_both_modes():
    rng = random.Random(SEED + 7)
    sub = TorusSubstitution(
        T,
        gen_images={3: (1, (-1, -1, 0))},
        sym_images={"g2": (1, (1, 1, 1)), "g1": (Q(1, 2), ())})
    for _ in range(100):
        x, y = rand_quantum(rng, nterms=2, span=2), rand_quantum(rng, nterms=2, span=2)
        assert sub.apply(x * y) == sub.apply(x) * sub.apply(y)
        xc, yc = x.classical_limit(), y.classical_limit()
        assert sub.apply(xc * yc) == sub.apply(xc) * sub.apply(yc)


def test_quantization_commutes_with_substitution():
    # quantize(sub(x)) == sub(quantize(x)) for monomial substitutions
    rng = random.Random(SEED + 8)
    sub = TorusSubstitution(
        T,
        gen_images={3: (1, (-1, -1, 0))},
        sym_images={"g2": (1, (1, 1, 1))})
    for _ in range(100):
        x = rand_classical(rng, nterms=3, span=2)
        assert sub.apply(x).quantize() == sub.apply(x.quantize())


# -- exact division in the classical torus --------------------------------------

def test_torus_exact_division_roundtrip():
    rng = random.Random(SEED + 9)
    for _ in range(200):
        a, b = rand_classical(rng), rand_classical(rng)
        if b.is_zero():
            continue
        assert exact_divide_torus(a * b, b) == a


def test_torus_division_failure():
    one = TorusElement.one(T, CLASSICAL)
    den = E(1, CLASSICAL) + one
    with pytest.raises(DivisionFailure):
        exact_divide_torus(one, den)


# -- serialization ---------------------------------------------------------------

def test_json_shape():
    x = TorusElement.monomial((1, 0, -1), qh(1), T, QUANTUM) + TorusElement.one(T, QUANTUM)
    j = x.to_json()
    assert j["mode"] == "quantum"
    assert [t["e"] for t in j["terms"]] == sorted([t["e"] for t in j["terms"]])


def test_evaluate_numeric():
    x = TorusElement.monomial((1, 1, 0), CoeffPoly.sym("g1", 1, T), T, CLASSICAL)
    v = x.evaluate((Q(2), Q(3), Q(5)), {"g1": Q(7)})
    assert v == Q(42)
