"""Shear-coordinate parameterizations of the nine cubics and their checks.

Each family's coordinate triple is a classical torus element in E_i =
e^{s~_i} with g_i = e^{p_i/2} Casimir coefficients, transcribed verbatim
from the flat-coordinate displays.  ``verify_cubic`` checks that the triple
satisfies the family's cubic identically; the omegas are the master-formula
ones realized through the family data, except for D7 and D8 where the
identity forces the confluence-limit omegas (the mismatch is reported, and
for D8 it is a constant, the calibration case).
"""

from __future__ import annotations

import random

from . import catalog
from .report import CALIBRATED, FAIL, PASS, REPORTED, VerificationReport
from .rings import CoeffPoly, DEFAULT_TABLE, MonomialSubstitution, Q
from .torus import CLASSICAL, TorusElement, TorusSubstitution

T = DEFAULT_TABLE

GSYMS = ("G1", "G2", "G3", "Ginf")


def _gsum(i):
    return CoeffPoly.sym("g%d" % i, 1, T) + CoeffPoly.sym("g%d" % i, -1, T)


def _gmono(i):
    return CoeffPoly.sym("g%d" % i, 1, T)


def _zero():
    return CoeffPoly.zero(T)


def _telt(terms):
    """Classical element -sum coeff*E^e from [(coeff, e), ...]."""
    out = TorusElement.zero(T, CLASSICAL)
    for coeff, e in terms:
        if isinstance(coeff, int):
            coeff = CoeffPoly.const(coeff, T)
        out = out + TorusElement.monomial(e, coeff, T, CLASSICAL)
    return out


def _x(*terms):
    """All shear displays are sums of negated exponential terms."""
    return -_telt(terms)


class ShearParam:
    """One family's shear data.

    xs: the coordinate triple (unconstrained); grealize: torus realization
    of each abstract G; constraint: the printed "to obtain the cubic in our
    form" substitution; effective_omegas: the omega realization for which
    the cubic identity holds exactly (equals the realized master formulas
    except for D7/D8).
    """

    def __init__(self, label, xs, grealize, constraint, constraint_desc,
                 effective_omegas=None):
        self.label = label
        self.xs = xs
        self.grealize = grealize
        self.constraint = constraint
        self.constraint_desc = constraint_desc
        self._effective = effective_omegas

    def realize_coeff(self, p: CoeffPoly) -> TorusElement:
        """Map a polynomial in the abstract G's into the classical torus."""
        idx = {T.index(n): self.grealize[n] for n in GSYMS}
        out = TorusElement.zero(T, CLASSICAL)
        for e, c in p.terms.items():
            stripped = list(e)
            term = None
            for i, img in idx.items():
                k = e[i]
                stripped[i] = 0
                if k:
                    factor = img ** k
                    term = factor if term is None else term * factor
            base = TorusElement.scalar(CoeffPoly(T, {tuple(stripped): c}), T, CLASSICAL)
            term = base if term is None else base * term
            out = out + term
        return out

    def eqomega_realized(self):
        spec = catalog.build(self.label)
        return tuple(self.realize_coeff(w) for w in spec.omega)

    def effective_omegas(self):
        if self._effective is not None:
            return self._effective
        return self.eqomega_realized()

    def constrained(self, elt: TorusElement) -> TorusElement:
        return elt.substitute(self.constraint) if self.constraint else elt


_E = {
    "s2+s3": (0, 1, 1), "-s2-s3": (0, -1, -1), "-s2+s3": (0, -1, 1),
    "s3": (0, 0, 1), "-s2": (0, -1, 0),
    "s3+s1": (1, 0, 1), "-s3-s1": (-1, 0, -1), "s1-s3": (1, 0, -1),
    "s1": (1, 0, 0), "-s3": (0, 0, -1),
    "s1+s2": (1, 1, 0), "-s1-s2": (-1, -1, 0), "-s1+s2": (-1, 1, 0),
    "s2": (0, 1, 0), "-s1": (-1, 0, 0),
}


def _central(k=1):
    return TorusElement.monomial((k, k, k), 1, T, CLASSICAL)


def param(label) -> ShearParam:
    one = CoeffPoly.one(T)
    E = _E
    if label == "D4":
        xs = (
            _x((1, E["s2+s3"]), (1, E["-s2-s3"]), (1, E["-s2+s3"]),
               (_gsum(2), E["s3"]), (_gsum(3), E["-s2"])),
            _x((1, E["s3+s1"]), (1, E["-s3-s1"]), (1, E["s1-s3"]),
               (_gsum(3), E["s1"]), (_gsum(1), E["-s3"])),
            _x((1, E["s1+s2"]), (1, E["-s1-s2"]), (1, E["-s1+s2"]),
               (_gsum(1), E["s2"]), (_gsum(2), E["-s1"])),
        )
        gre = {"G1": TorusElement.scalar(_gsum(1), T),
               "G2": TorusElement.scalar(_gsum(2), T),
               "G3": TorusElement.scalar(_gsum(3), T),
               "Ginf": _central(1) + _central(-1)}
        return ShearParam(label, xs, gre, None, "none")
    if label == "D5":
        xs = (
            _x((1, E["s2+s3"]), (1, E["-s2+s3"]), (_gsum(2), E["s3"]),
               (_gmono(3), E["-s2"])),
            _x((1, E["s3+s1"]), (_gmono(3), E["s1"])),
            _x((1, E["s1+s2"]), (1, E["-s1-s2"]), (1, E["-s1+s2"]),
               (_gsum(1), E["s2"]), (_gsum(2), E["-s1"])),
        )
        gre = {"G1": TorusElement.scalar(_gsum(1), T),
               "G2": TorusElement.scalar(_gsum(2), T),
               "G3": TorusElement.scalar(_gmono(3), T),
               "Ginf": _central(1)}
        con = TorusSubstitution(T, sym_images={"g3": (1, ())})
        return ShearParam(label, xs, gre, con, "p3 = 0 (g3 -> 1)")
    if label == "E6":
        xs = (
            _x((1, E["s2+s3"]), (_gmono(2), E["s3"])),
            _x((1, E["s3+s1"]), (_gmono(3), E["s1"])),
            _x((1, E["s1+s2"]), (1, E["-s1+s2"]), (_gsum(1), E["s2"]),
               (_gmono(2), E["-s1"])),
        )
        gre = {"G1": TorusElement.scalar(_gsum(1), T),
               "G2": TorusElement.scalar(_gmono(2), T),
               "G3": TorusElement.scalar(_gmono(3), T),
               "Ginf": _central(1)}
        con = TorusSubstitution(T, sym_images={"g2": (1, (1, 1, 1)),
                                               "g3": (1, (1, 1, 1))})
        return ShearParam(label, xs, gre, con,
                          "p3 = p2 = 2(s~1+s~2+s~3) (g2, g3 -> E1E2E3)")
    if label in ("E7star", "E7starstar"):
        xs = (
            _x((1, E["s2+s3"]), (_gmono(2), E["s3"])),
            _x((1, E["s3+s1"]), (_gmono(3), E["s1"])),
            _x((1, E["s1+s2"]), (_gmono(1), E["s2"])),
        )
        gre = {"G1": TorusElement.scalar(_gmono(1), T),
               "G2": TorusElement.scalar(_gmono(2), T),
               "G3": TorusElement.scalar(_gmono(3), T),
               "Ginf": _central(1)}
        if label == "E7star":
            con = TorusSubstitution(T, sym_images={
                "g1": (1, (-1, -1, -1)), "g2": (1, (-1, -1, -1)),
                "g3": (1, (-1, -1, -1))})
            desc = "p3 = p2 = p1 = -2(s~1+s~2+s~3)"
        else:
            con = TorusSubstitution(T, sym_images={
                "g1": (1, (-1, -1, -1)), "g2": (1, (1, 1, 1)),
                "g3": (1, (-1, -1, -1))})
            desc = "p3 = -p2 = p1 = -2(s~1+s~2+s~3)"
        return ShearParam(label, xs, gre, con, desc)
    if label == "E8":
        xs = (
            _x((1, E["s2+s3"]), (_gmono(2), E["s3"])),
            _x((1, E["s3+s1"])),
            _x((1, E["s1+s2"]), (_gmono(1), E["s2"])),
        )
        gre = {"G1": TorusElement.scalar(_gmono(1), T),
               "G2": TorusElement.scalar(_gmono(2), T),
               "G3": TorusElement.zero(T, CLASSICAL),
               "Ginf": _central(1)}
        con = TorusSubstitution(T, gen_images={3: (1, (-1, -1, 0))},
                                sym_images={"g1": (1, ()), "g2": (1, ())})
        return ShearParam(label, xs, gre, con,
                          "p1 = p2 = 0 and s~1+s~2+s~3 = 0 (E3 -> (E1E2)^-1)")
    if label == "D6":
        xs = (
            _x((1, E["s2+s3"]), (1, E["-s2+s3"]), (_gsum(2), E["s3"])),
            _x((1, E["s3+s1"])),
            _x((1, E["s1+s2"]), (1, E["-s1+s2"]), (1, E["-s1-s2"]),
               (_gsum(1), E["s2"]), (_gsum(2), E["-s1"])),
        )
        gre = {"G1": TorusElement.scalar(_gsum(1), T),
               "G2": TorusElement.scalar(_gsum(2), T),
               "G3": TorusElement.zero(T, CLASSICAL),
               "Ginf": _central(1)}
        con = TorusSubstitution(T, sym_images={"g1": (1, (1, 1, 1))})
        return ShearParam(label, xs, gre, con, "p1 = 2(s~1+s~2+s~3)")
    if label == "D7":
        xs = (
            _x((1, E["-s2+s3"]), (_gmono(2), E["s3"]), (_gmono(3), E["-s2"])),
            _x((1, E["s3+s1"]), (_gmono(3), E["s1"])),
            _x((1, E["s1+s2"]), (1, E["-s1-s2"]), (_gmono(2), E["-s1"])),
        )
        gre = {"G1": TorusElement.scalar(_gmono(1), T),
               "G2": TorusElement.scalar(_gmono(2), T),
               "G3": TorusElement.scalar(_gmono(3), T),
               "Ginf": _central(1)}
        con = TorusSubstitution(T, sym_images={"g1": (1, (-1, -1, -1))})
        g2, g3 = _gmono(2), _gmono(3)
        eff = (TorusElement.scalar(-(g2 * g3), T),
               TorusElement.monomial((1, 1, 1), -g2, T, CLASSICAL),
               TorusElement.zero(T, CLASSICAL),
               TorusElement.zero(T, CLASSICAL))
        return ShearParam(label, xs, gre, con,
                          "p1 = -2(s~1+s~2+s~3) (as printed; does not enter "
                          "the identity, g1 occurs nowhere)", eff)
    if label == "D8":
        xs = (
            _x((1, E["-s2+s3"]), (_gmono(2), E["s3"])),
            _x((1, E["s3+s1"])),
            _x((1, E["s1+s2"]), (1, E["-s1-s2"]), (_gmono(2), E["-s1"])),
        )
        gre = {"G1": TorusElement.zero(T, CLASSICAL),
               "G2": TorusElement.scalar(_gmono(2), T),
               "G3": TorusElement.zero(T, CLASSICAL),
               "Ginf": _central(1)}
        con = TorusSubstitution(T, sym_images={"g2": None})
        eff = (TorusElement.zero(T, CLASSICAL),
               TorusElement.monomial((1, 1, 1), -_gmono(2), T, CLASSICAL),
               TorusElement.zero(T, CLASSICAL),
               TorusElement.zero(T, CLASSICAL))
        return ShearParam(label, xs, gre, con, "G2 = 0 (g2 -> 0)", eff)
    raise KeyError(label)


def cubic_on(xs, eps, omegas):
    """x1x2x3 + sum eps_i x_i^2 + sum omega_i x_i + omega4 in the torus."""
    s = xs[0] * xs[1] * xs[2]
    for i in range(3):
        if eps[i]:
            s = s + xs[i] * xs[i] * eps[i]
        s = s + omegas[i] * xs[i]
    return s + omegas[3]


def verify_cubic(label) -> VerificationReport:
    p = param(label)
    eps = catalog.EPSILON[label]
    eff = p.effective_omegas()
    eqw = p.eqomega_realized()

    residual_eff = cubic_on(p.xs, eps, eff)
    payload = {"constraint": p.constraint_desc}
    if not residual_eff.is_zero():
        return VerificationReport("shear", label, "cubic", FAIL,
                                  residual=residual_eff, payload=payload)

    xs_c = tuple(p.constrained(x) for x in p.xs)
    eqw_c = tuple(p.constrained(w) for w in eqw)
    residual_eq = cubic_on(xs_c, eps, eqw_c)
    if residual_eq.is_zero():
        return VerificationReport("shear", label, "cubic", PASS, payload=payload)

    # the effective identity holds; report how the master-formula omegas differ
    payload["effective_omegas"] = [w.to_json() for w in eff]
    delta = residual_eq - (eqw_c[3] - p.constrained(eff[3]))
    if delta.is_zero():
        # mismatch is the constant term only: the calibration case
        payload["calibrated_constant"] = p.constrained(eff[3]).to_json()
        payload["eqomega_constant"] = eqw_c[3].to_json()
        payload["note"] = "constant calibrated; identity exact with it"
    else:
        payload["eqomega_minus_effective"] = [
            (w1 - w2).to_json() for w1, w2 in zip(eqw, eff)]
        payload["note"] = ("master-formula omegas unreachable for this family; "
                           "identity exact with the confluence-limit omegas")
    return VerificationReport("shear", label, "cubic", CALIBRATED,
                              residual=residual_eq, payload=payload)


def verify_poisson(label) -> VerificationReport:
    """{x_i, x_(i+1)} = x_i x_(i+1) + 2 eps_k x_k + omega_k, k the third index."""
    p = param(label)
    eps = catalog.EPSILON[label]
    om = p.effective_omegas()
    residuals = {}
    iconv_zero = {}
    for i in range(3):
        j = (i + 1) % 3
        k = (j + 1) % 3
        lhs = p.xs[i].poisson(p.xs[j])
        rhs = p.xs[i] * p.xs[j] + p.xs[k] * (2 * eps[k]) + om[k]
        residuals[(i + 1, j + 1)] = lhs - rhs
        rhs_i = p.xs[i] * p.xs[j] + p.xs[k] * (2 * eps[i]) + om[i]
        iconv_zero[(i + 1, j + 1)] = (lhs - rhs_i).is_zero()
    bad = {pair: r for pair, r in residuals.items() if not r.is_zero()}
    payload = {"i_convention_residual_zero": {str(k): v for k, v in iconv_zero.items()}}
    if bad:
        pair, r = next(iter(bad.items()))
        return VerificationReport("shear", label, "poisson", FAIL,
                                  residual=r, payload=payload)
    return VerificationReport("shear", label, "poisson", PASS, payload=payload)


def verify_jacobi_casimir(label) -> VerificationReport:
    p = param(label)
    eps = catalog.EPSILON[label]
    x1, x2, x3 = p.xs
    jac = (x1.poisson(x2.poisson(x3)) + x2.poisson(x3.poisson(x1))
           + x3.poisson(x1.poisson(x2)))
    if not jac.is_zero():
        return VerificationReport("shear", label, "jacobi_casimir", FAIL, residual=jac)
    # Casimir through the realization: S is the zero element there, so the
    # content is the abstract coordinate-level identity {x_i, S} = 0.
    s_val = cubic_on(p.xs, eps, p.effective_omegas())
    cas = [x.poisson(s_val) for x in p.xs]
    for c in cas:
        if not c.is_zero():
            return VerificationReport("shear", label, "jacobi_casimir", FAIL, residual=c)
    ok, residual = abstract_jacobi_casimir(eps)
    if not ok:
        return VerificationReport("shear", label, "jacobi_casimir", FAIL,
                                  residual=residual,
                                  payload={"note": "abstract coordinate bracket failed"})
    return VerificationReport("shear", label, "jacobi_casimir", PASS)


# -- the abstract (coordinate-level) bracket --------------------------------

def xpoly_diff(f: catalog.XPoly, i: int) -> catalog.XPoly:
    terms = {}
    for d, c in f.terms.items():
        if d[i - 1]:
            nd = list(d)
            nd[i - 1] -= 1
            nd = tuple(nd)
            v = c * d[i - 1]
            prev = terms.get(nd)
            terms[nd] = v if prev is None else prev + v
    return catalog.XPoly(terms)


def nambu_bracket(f, g, S):
    """{f, g} = det(grad f, grad g, grad S), the residue-form bracket."""
    df = [xpoly_diff(f, i) for i in (1, 2, 3)]
    dg = [xpoly_diff(g, i) for i in (1, 2, 3)]
    dS = [xpoly_diff(S, i) for i in (1, 2, 3)]
    out = catalog.XPoly()
    for (a, b, c, sign) in ((0, 1, 2, 1), (1, 2, 0, 1), (2, 0, 1, 1),
                            (0, 2, 1, -1), (2, 1, 0, -1), (1, 0, 2, -1)):
        term = df[a] * dg[b] * dS[c]
        out = out + (term if sign > 0 else -term)
    return out


def abstract_jacobi_casimir(eps):
    """Jacobi and Casimir for the Nambu bracket with symbolic omegas."""
    S = catalog.generic_cubic(eps)
    one = CoeffPoly.one(T)
    xs = [catalog.XPoly.coordinate(i, one) for i in (1, 2, 3)]
    # {x_i, x_j} must equal dS/dx_k for cyclic (i,j,k)
    for (i, j, k) in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        r = nambu_bracket(xs[i], xs[j], S) - xpoly_diff(S, k + 1)
        if not r.is_zero():
            return False, r
    jac = catalog.XPoly()
    for (i, j, k) in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        inner = nambu_bracket(xs[j], xs[k], S)
        jac = jac + nambu_bracket(xs[i], inner, S)
    if not jac.is_zero():
        return False, jac
    for x in xs:
        r = nambu_bracket(x, S, S)
        if not r.is_zero():
            return False, r
    return True, None


# -- the Cayley cubic ---------------------------------------------------------

def verify_cayley() -> VerificationReport:
    """x = (-u-1/u, -v-1/v, -uv-1/(uv)) solves the D4 cubic with omega4 = -4."""
    u = CoeffPoly.sym("u", 1, T)
    v = CoeffPoly.sym("v", 1, T)
    uv = u * v
    xs = (-(u + u.inverse()), -(v + v.inverse()), -(uv + uv.inverse()))
    omegas = CoeffPoly.const(-4, T)
    c = catalog.XPoly({(1, 1, 1): CoeffPoly.one(T),
                       (2, 0, 0): CoeffPoly.one(T),
                       (0, 2, 0): CoeffPoly.one(T),
                       (0, 0, 2): CoeffPoly.one(T),
                       (0, 0, 0): omegas})
    residual = catalog.evaluate(c, xs)
    if not residual.is_zero():
        return VerificationReport("shear", "D4", "cayley", FAIL, residual=residual)
    inv = MonomialSubstitution(T, {"u": (1, {"u": -1}), "v": (1, {"v": -1})})
    for x in xs:
        if not (x.substitute(inv) - x).is_zero():
            return VerificationReport("shear", "D4", "cayley", FAIL,
                                      residual=x.substitute(inv) - x,
                                      payload={"note": "involution invariance failed"})
    # spot witness u = v = 1 -> (-2,-2,-2), cubic value -8 + 12 - 4 = 0
    pt = [x.specialize({"u": 1, "v": 1}).constant_value() for x in xs]
    if pt != [Q(-2), Q(-2), Q(-2)]:
        return VerificationReport("shear", "D4", "cayley", FAIL,
                                  payload={"note": "witness point mismatch"})
    return VerificationReport("shear", "D4", "cayley", PASS)


# -- randomized evaluate/substitute consistency ----------------------------------

def random_point(rng):
    def nzq():
        n = rng.randint(1, 6) * rng.choice((1, -1))
        d = rng.randint(1, 6)
        return Q(n, d)
    es = tuple(nzq() for _ in range(3))
    coeffs = {name: Q(1) for name in T.names}
    for name in ("g1", "g2", "g3"):
        coeffs[name] = nzq()
    return es, coeffs


def randomized_consistency(label, rng, npoints=20) -> VerificationReport:
    """Symbolic residual evaluations agree with pointwise reconstruction."""
    p = param(label)
    eps = catalog.EPSILON[label]
    om = p.effective_omegas()
    residual = cubic_on(p.xs, eps, om)
    for _ in range(npoints):
        es, coeffs = random_point(rng)
        lhs = residual.evaluate(es, coeffs)
        xv = [x.evaluate(es, coeffs) for x in p.xs]
        ov = [w.evaluate(es, coeffs) for w in om]
        rhs = (xv[0] * xv[1] * xv[2]
               + sum(eps[i] * xv[i] * xv[i] for i in range(3))
               + sum(ov[i] * xv[i] for i in range(3)) + ov[3])
        if lhs != rhs or (residual.is_zero() and rhs != 0):
            return VerificationReport("shear", label, "random_consistency", FAIL,
                                      payload={"note": "pointwise mismatch"})
    return VerificationReport("shear", label, "random_consistency", PASS)


def run_suite(labels=None, rng=None):
    labels = labels or catalog.LABELS
    rng = rng or random.Random(0)
    reports = []
    for lab in labels:
        reports.append(verify_cubic(lab))
        reports.append(verify_poisson(lab))
        reports.append(verify_jacobi_casimir(lab))
        reports.append(randomized_consistency(lab, rng))
    if labels == catalog.LABELS or "D4" in labels:
        reports.append(verify_cayley())
    return reports
