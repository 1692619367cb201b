"""The nine Painleve cubic families: epsilons, omegas, G-tables, sign maps.

``build`` assembles each family from the master formulas (the epsilon table
and the omega expressions in the four abstract constants G1, G2, G3, Ginf);
``gtable`` records the per-family specialization of those constants into
catalog unit symbols.  The intro-style display of each cubic and the sign
conventions relating it to the master form are kept as data so that the
reconciliation report can compare them mechanically; discrepancies are
reported, never patched.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .rings import CoeffPoly, DEFAULT_TABLE, MonomialSubstitution, Q

LABELS = ("D4", "D5", "D6", "D7", "D8", "E6", "E7star", "E7starstar", "E8")

EPSILON = {
    "D4": (1, 1, 1),
    "D5": (1, 1, 0),
    "D6": (1, 1, 0),
    "D7": (1, 1, 0),
    "D8": (1, 1, 0),
    "E6": (1, 0, 0),
    "E7star": (0, 0, 0),
    "E7starstar": (0, 0, 0),
    "E8": (0, 0, 0),
}

# Painleve equation and surface singularity type per family.
METADATA = {
    "D4": ("PVI", "D4"),
    "D5": ("PV", "A3"),
    "D6": ("PIII(D6)", "A1"),
    "D7": ("PIII(D7)", "non-singular"),
    "D8": ("PIII(D8)", "non-singular"),
    "E6": ("PIV", "A2"),
    "E7star": ("PII(FN)", "A1"),
    "E7starstar": ("PII(MJ)", "A1"),
    "E8": ("PI", "non-singular"),
}

T = DEFAULT_TABLE


def _sym(name, k=1):
    return CoeffPoly.sym(name, k, T)


def _const(v):
    return CoeffPoly.const(v, T)


class XPoly:
    """Polynomial in the surface coordinates x1,x2,x3 over exact coefficients.

    Coefficients are duck-typed ring elements (CoeffPoly, RingFraction over
    CoeffPoly, or classical torus elements); they must support +, *, unary
    minus and ``is_zero``.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for d, c in terms.items():
                if not c.is_zero():
                    self.terms[tuple(d)] = c

    @classmethod
    def scalar(cls, c):
        return cls({(0, 0, 0): c})

    @classmethod
    def coordinate(cls, i, one):
        d = [0, 0, 0]
        d[i - 1] = 1
        return cls({tuple(d): one})

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, XPoly):
            return NotImplemented
        return (self - other).is_zero()

    def __add__(self, other):
        terms = dict(self.terms)
        for d, c in other.terms.items():
            s = terms.get(d)
            s = c if s is None else s + c
            if s.is_zero():
                terms.pop(d, None)
            else:
                terms[d] = s
        return XPoly(terms)

    def __neg__(self):
        return XPoly({d: -c for d, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        terms = {}
        for d1, c1 in self.terms.items():
            for d2, c2 in other.terms.items():
                d = (d1[0] + d2[0], d1[1] + d2[1], d1[2] + d2[2])
                c = c1 * c2
                s = terms.get(d)
                s = c if s is None else s + c
                if s.is_zero():
                    terms.pop(d, None)
                else:
                    terms[d] = s
        return XPoly(terms)

    def __pow__(self, k):
        if k < 0:
            raise ValueError("coordinate polynomials are not inverted")
        out = None
        base = self
        for _ in range(k):
            out = base if out is None else out * base
        if out is None:
            raise ValueError("use scalar(one) for the empty power")
        return out

    def coefficient(self, d, zero):
        return self.terms.get(tuple(d), zero)

    def map_coefficients(self, fn):
        out = {}
        for d, c in self.terms.items():
            c = fn(c)
            if not c.is_zero():
                out[d] = c
        return XPoly(out)

    def total_degree(self):
        return max((sum(d) for d in self.terms), default=0)

    def evaluate(self, values, embed=lambda c: c):
        """Evaluate at a triple of ring elements; coefficients via embed."""
        out = None
        for d, c in sorted(self.terms.items()):
            term = embed(c)
            for v, k in zip(values, d):
                for _ in range(k):
                    term = term * v
            out = term if out is None else out + term
        return out

    def compose(self, images):
        """Substitute XPoly images for the three coordinates."""
        if not self.terms:
            return XPoly()
        return self.evaluate(images, embed=lambda c: XPoly.scalar(c))

    def to_json(self):
        return [{"xdeg": list(d), "coeff": self.terms[d].to_json()}
                for d in sorted(self.terms)]

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for d in sorted(self.terms, reverse=True):
            mono = "".join("*%s" % n if k == 1 else "*%s^%d" % (n, k)
                           for n, k in zip(("x1", "x2", "x3"), d) if k)
            bits.append("(%s)%s" % (self.terms[d], mono))
        return " + ".join(bits)

    __repr__ = __str__


def omega_polys(label):
    """(omega1..omega4) from the master formulas, abstract in G1..Ginf."""
    e1, e2, e3 = EPSILON[label]
    G1, G2, G3, Gi = _sym("G1"), _sym("G2"), _sym("G3"), _sym("Ginf")
    w1 = -G1 * Gi - _const(e1) * G2 * G3
    w2 = -G2 * Gi - _const(e2) * G1 * G3
    w3 = -G3 * Gi - _const(e3) * G1 * G2
    w4 = (_const(e2 * e3) * G1 * G1 + _const(e1 * e3) * G2 * G2
          + _const(e1 * e2) * G3 * G3 + Gi * Gi + G1 * G2 * G3 * Gi
          - _const(4 * e1 * e2 * e3))
    return (w1, w2, w3, w4)


def gtable(label):
    """Specialization of each abstract G into catalog unit symbols.

    Entries map symbol name -> CoeffPoly; symbols left out stay free.  The
    D7 row of the G2 table is missing from the source, so D7 leaves G2 free.
    """
    one = CoeffPoly.one(T)
    if label == "D4":
        return {}
    if label == "D5":
        return {"G3": one}
    if label == "D6":
        ab = _sym("a") * _sym("b")
        return {"G1": ab + ab.inverse(),
                "G2": _sym("a") * _sym("b", -1) + _sym("a", -1) * _sym("b"),
                "G3": CoeffPoly.zero(T),
                "Ginf": ab}
    if label == "D7":
        return {"G1": one, "G3": one, "Ginf": CoeffPoly.zero(T)}
    if label == "D8":
        return {"G1": one, "G2": one, "G3": CoeffPoly.zero(T), "Ginf": one}
    if label == "E6":
        return {"G2": _sym("Ginf"), "G3": _sym("Ginf")}
    if label == "E7star":
        return {"G1": _sym("g"), "G2": _sym("g"), "G3": _sym("g"),
                "Ginf": _sym("g", -1)}
    if label == "E7starstar":
        return {"G1": _sym("h", -1), "G2": _sym("h"), "G3": _sym("h", -1),
                "Ginf": _sym("h")}
    if label == "E8":
        return {"G1": one, "G2": one, "G3": CoeffPoly.zero(T), "Ginf": one}
    raise KeyError(label)


# Sign conventions stated in the source remark; "None" means only a textual
# note exists (the D8 rescale by i lives outside this ring).
REMARK_SIGN_MAPS = {
    "E7star": (1, -1, 1),
    "E8": (-1, -1, 1),
    "D6": (-1, -1, 1),
    "D8": None,
}


@dataclass
class CubicSpec:
    label: str
    eps: tuple
    omega: tuple                  # abstract-G CoeffPolys
    gtable: dict                  # symbol -> CoeffPoly specialization
    signconv: tuple | None
    painleve: str = ""
    singularity: str = ""

    def omega_specialized(self):
        return tuple(w.specialize(self.gtable) if self.gtable else w
                     for w in self.omega)


def build(label) -> CubicSpec:
    if label not in LABELS:
        raise KeyError("unknown Dynkin label %r" % (label,))
    painleve, singularity = METADATA[label]
    return CubicSpec(
        label=label,
        eps=EPSILON[label],
        omega=omega_polys(label),
        gtable=gtable(label),
        signconv=REMARK_SIGN_MAPS.get(label),
        painleve=painleve,
        singularity=singularity,
    )


def cubic(spec: CubicSpec, specialized=False) -> XPoly:
    """x1x2x3 + sum eps_i x_i^2 + sum omega_i x_i + omega4."""
    one = CoeffPoly.one(T)
    omegas = spec.omega_specialized() if specialized else spec.omega
    terms = {(1, 1, 1): one}
    for i in range(3):
        if spec.eps[i]:
            d = [0, 0, 0]
            d[i] = 2
            terms[tuple(d)] = _const(spec.eps[i])
    for i in range(3):
        d = [0, 0, 0]
        d[i] = 1
        if not omegas[i].is_zero():
            terms[tuple(d)] = omegas[i]
    if not omegas[3].is_zero():
        terms[(0, 0, 0)] = omegas[3]
    return XPoly(terms)


def generic_cubic(eps, table=T) -> XPoly:
    """The cubic with free omega symbols om1..om4 (for braid identities)."""
    one = CoeffPoly.one(table)
    terms = {(1, 1, 1): one}
    for i in range(3):
        if eps[i]:
            d = [0, 0, 0]
            d[i] = 2
            terms[tuple(d)] = CoeffPoly.const(eps[i], table)
        d = [0, 0, 0]
        d[i] = 1
        terms[tuple(d)] = CoeffPoly.sym("om%d" % (i + 1), 1, table)
    terms[(0, 0, 0)] = CoeffPoly.sym("om4", 1, table)
    return XPoly(terms)


def evaluate(cubic_poly: XPoly, point, embed=lambda c: c):
    """Evaluate a cubic at a point of any commutative ring."""
    return cubic_poly.evaluate(point, embed)


def calibrate_constant(cubic_poly: XPoly, point, omega4, embed=lambda c: c):
    """Solve for the constant making cubic(point) = 0.

    Returns the corrected constant (in the evaluation ring) or raises
    ValueError when the residual is not a Casimir, i.e. the mismatch is not
    merely the constant term.
    """
    residual = evaluate(cubic_poly, point, embed)
    omega4_emb = embed(omega4) if not hasattr(omega4, "is_central") else omega4
    corrected = omega4_emb - residual
    if hasattr(corrected, "is_central") and not corrected.is_central():
        raise ValueError("nonconstant residual; parameterization mismatch")
    return corrected


# -- intro displays and reconciliation ---------------------------------------

def _apply_sign_map(spec: CubicSpec, signs):
    """Coefficients of the cubic after x_i -> s_i x_i, renormalized to +x1x2x3.

    Returns (eps', omegas', const') with the global factor folded in.
    """
    s1, s2, s3 = signs
    g = s1 * s2 * s3
    w = spec.omega_specialized()
    eps_p = tuple(spec.eps[i] * g for i in range(3))
    om_p = tuple(w[i] * _const([s1, s2, s3][i] * g) for i in range(3))
    c_p = w[3] * _const(g)
    return eps_p, om_p, c_p


def _intro_pattern(label):
    """Constraints the intro display imposes on (eps', om', const').

    Each constraint is (description, callable) returning a CoeffPoly
    residual; all-zero residuals mean the display matches.
    """
    one = CoeffPoly.one(T)
    zero = CoeffPoly.zero(T)
    if label in ("D4", "D5"):
        return []
    if label == "D6":
        return [("x3 coefficient vanishes", lambda e, o, c: o[2]),
                ("constant equals (x1 coefficient) - 1", lambda e, o, c: c - (o[0] - one))]
    if label == "D7":
        return [("x2 coefficient vanishes", lambda e, o, c: o[1]),
                ("x3 coefficient vanishes", lambda e, o, c: o[2]),
                ("constant vanishes", lambda e, o, c: c)]
    if label == "D8":
        return [("x1 coefficient vanishes", lambda e, o, c: o[0]),
                ("x2 coefficient vanishes", lambda e, o, c: o[1]),
                ("x3 coefficient vanishes", lambda e, o, c: o[2]),
                ("constant equals 1", lambda e, o, c: c - one)]
    if label == "E6":
        w4 = build("E6").omega_specialized()[3]
        return [("x2 and x3 coefficients agree", lambda e, o, c: o[1] - o[2]),
                ("constant equals 1 + omega4", lambda e, o, c: c - (one + w4))]
    if label == "E7star":
        return [("x1 coefficient is +1", lambda e, o, c: o[0] - one),
                ("x2 coefficient is +1", lambda e, o, c: o[1] - one),
                ("x3 coefficient is +1", lambda e, o, c: o[2] - one)]
    if label == "E7starstar":
        return [("x1 coefficient is +1", lambda e, o, c: o[0] - one),
                ("x3 coefficient is +1", lambda e, o, c: o[2] - one),
                ("constant equals 1 - (x2 coefficient)", lambda e, o, c: c - (one - o[1]))]
    if label == "E8":
        return [("x1 coefficient is +1", lambda e, o, c: o[0] - one),
                ("x2 coefficient is +1", lambda e, o, c: o[1] - one),
                ("x3 coefficient vanishes", lambda e, o, c: o[2]),
                ("constant equals 1", lambda e, o, c: c - one)]
    raise KeyError(label)


ALL_SIGN_MAPS = [(s1, s2, s3) for s1 in (1, -1) for s2 in (1, -1) for s3 in (1, -1)]


def reconcile_intro(label):
    """Compare the raw (master-formula) cubic with the intro display.

    Searches all eight coordinate sign maps for one that reproduces the
    display; reports the matching map, the remark's stated map, and the
    residuals of the remark map when it fails.
    """
    spec = build(label)
    pattern = _intro_pattern(label)
    matches = []
    for signs in ALL_SIGN_MAPS:
        eps_p, om_p, c_p = _apply_sign_map(spec, signs)
        if tuple(1 if e == 1 else 0 if e == 0 else -1 for e in eps_p) != spec.eps:
            continue
        residuals = [fn(eps_p, om_p, c_p) for _, fn in pattern]
        if all(r.is_zero() for r in residuals):
            matches.append(signs)
    remark = REMARK_SIGN_MAPS.get(label)
    remark_residuals = None
    if remark is not None:
        eps_p, om_p, c_p = _apply_sign_map(spec, remark)
        remark_residuals = [(desc, str(fn(eps_p, om_p, c_p)))
                            for desc, fn in pattern]
    return {
        "label": label,
        "matched_sign_maps": matches,
        "consistent": bool(matches),
        "remark_sign_map": remark,
        "remark_matches": remark in matches if remark is not None else None,
        "remark_residuals": remark_residuals,
        "note": ("the D8 remark rescale x1 -> i*x1, x3 -> i*x3 concerns the "
                 "cited reference and is outside this ring"
                 if label == "D8" else ""),
    }
