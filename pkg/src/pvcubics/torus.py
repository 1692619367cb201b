"""The (quantum) torus generated by E_i = e^{s~_i} with cyclic exchange data.

Monomials are normal-ordered as E1^a1 E2^a2 E3^a3.  In quantum mode the
product rule is ``E^a * E^b = qh^(2*chi(a,b)) * E^(a+b)`` and the Weyl
quantization of a classical monomial is ``qh^sigma(a) * E^a``; both closed
forms are checked against a BCH-style oracle in the test suite.  Classical
mode drops all phases and carries the Poisson bracket
``{E^a, E^b} = <a,b> E^(a+b)`` induced by {s~_i, s~_(i+1)} = 1.
"""

from __future__ import annotations

from fractions import Fraction

from .rings import (CoeffPoly, DEFAULT_TABLE, Q, RingFraction, SymbolTable,
                    SymbolTableMismatch)

CLASSICAL = "classical"
QUANTUM = "quantum"


def pairing(a, b):
    """The antisymmetric exchange pairing <a,b> from the cyclic bracket."""
    return (a[0] * b[1] - a[1] * b[0]
            + a[1] * b[2] - a[2] * b[1]
            + a[2] * b[0] - a[0] * b[2])


def chi(a, b):
    """Normal-ordering phase: E^a E^b = qh^(2 chi(a,b)) E^(a+b)."""
    return a[1] * b[0] - a[2] * b[0] + a[2] * b[1]


def sigma(a):
    """Weyl phase: e^(a.S) = qh^sigma(a) E^a in normal order."""
    return a[0] * a[1] + a[1] * a[2] - a[0] * a[2]


class ModeMismatch(Exception):
    pass


class TorusElement:
    """Map from exponent triples to nonzero CoeffPoly coefficients."""

    __slots__ = ("table", "mode", "terms")

    def __init__(self, table: SymbolTable, mode: str, terms=None):
        if mode not in (CLASSICAL, QUANTUM):
            raise ValueError("mode must be classical or quantum")
        self.table = table
        self.mode = mode
        self.terms = {}
        if terms:
            for e, c in terms.items():
                if not c.is_zero():
                    self.terms[tuple(e)] = c

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, table=DEFAULT_TABLE, mode=CLASSICAL):
        return cls(table, mode)

    @classmethod
    def scalar(cls, coeff, table=DEFAULT_TABLE, mode=CLASSICAL):
        if isinstance(coeff, (int, Fraction)):
            coeff = CoeffPoly.const(coeff, table)
        return cls(table, mode, {(0, 0, 0): coeff})

    @classmethod
    def one(cls, table=DEFAULT_TABLE, mode=CLASSICAL):
        return cls.scalar(1, table, mode)

    @classmethod
    def monomial(cls, e, coeff=1, table=DEFAULT_TABLE, mode=CLASSICAL):
        if isinstance(coeff, (int, Fraction)):
            coeff = CoeffPoly.const(coeff, table)
        return cls(table, mode, {tuple(e): coeff})

    @classmethod
    def gen(cls, i, table=DEFAULT_TABLE, mode=CLASSICAL):
        """E_i for i in 1..3."""
        e = [0, 0, 0]
        e[i - 1] = 1
        return cls.monomial(e, 1, table, mode)

    def _qh(self):
        return CoeffPoly.sym("qh", 1, self.table)

    # -- structure -------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = TorusElement.scalar(other, self.table, self.mode)
        if not isinstance(other, TorusElement):
            return NotImplemented
        return (self.table == other.table and self.mode == other.mode
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.mode, frozenset((e, hash(c)) for e, c in self.terms.items())))

    def _check(self, other):
        if isinstance(other, (int, Fraction, CoeffPoly)):
            other = TorusElement.scalar(other, self.table, self.mode)
        if not isinstance(other, TorusElement):
            raise TypeError("cannot combine TorusElement with %r" % (other,))
        if other.mode != self.mode:
            raise ModeMismatch("mode mismatch: %s vs %s" % (self.mode, other.mode))
        if other.table != self.table:
            raise SymbolTableMismatch("coefficient tables differ")
        return other

    def is_central(self):
        """True when every exponent triple is a multiple of (1,1,1)."""
        return all(e[0] == e[1] == e[2] for e in self.terms)

    # -- algebra ----------------------------------------------------------

    def __add__(self, other):
        other = self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e)
            s = c if s is None else s + c
            if s.is_zero():
                terms.pop(e, None)
            else:
                terms[e] = s
        return TorusElement(self.table, self.mode, terms)

    __radd__ = __add__

    def __neg__(self):
        return TorusElement(self.table, self.mode,
                            {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) + (-self)

    def __mul__(self, other):
        other = self._check(other)
        quantum = self.mode == QUANTUM
        qh = self._qh() if quantum else None
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
                c = c1 * c2
                if quantum:
                    ph = 2 * chi(e1, e2)
                    if ph:
                        c = c * qh ** ph
                s = terms.get(e)
                s = c if s is None else s + c
                if s.is_zero():
                    terms.pop(e, None)
                else:
                    terms[e] = s
        return TorusElement(self.table, self.mode, terms)

    def __rmul__(self, other):
        return self._check(other) * self

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = TorusElement.one(self.table, self.mode)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def inverse(self):
        """Inverse of a single-term element with invertible coefficient."""
        if len(self.terms) != 1:
            raise ValueError("only monomials are invertible: %s" % self)
        (e, c), = self.terms.items()
        inv_e = (-e[0], -e[1], -e[2])
        cinv = c.inverse()
        if self.mode == QUANTUM:
            # E^e E^-e = qh^(2 chi(e,-e)) = qh^(-2 chi(e,e))
            cinv = cinv * self._qh() ** (2 * chi(e, e))
        return TorusElement(self.table, self.mode, {inv_e: cinv})

    def commutator(self, other):
        return self * other - other * self

    # -- quantization ------------------------------------------------------

    def quantize(self):
        """Termwise Weyl quantization c*E^a -> c*qh^sigma(a)*E^a."""
        if self.mode != CLASSICAL:
            raise ModeMismatch("quantize expects a classical element")
        qh = self._qh()
        terms = {}
        for e, c in self.terms.items():
            if c.mentions("qh"):
                raise ValueError("classical coefficient mentions qh: %s" % c)
            s = sigma(e)
            terms[e] = c * qh ** s if s else c
        return TorusElement(self.table, QUANTUM, terms)

    def classical_limit(self):
        """qh -> 1 and flip to classical mode."""
        if self.mode != QUANTUM:
            raise ModeMismatch("classical_limit expects a quantum element")
        one = CoeffPoly.one(self.table)
        terms = {}
        for e, c in self.terms.items():
            c = c.specialize({"qh": one})
            if c.is_zero():
                continue
            prev = terms.get(e)
            terms[e] = c if prev is None else prev + c
        return TorusElement(self.table, CLASSICAL,
                            {e: c for e, c in terms.items() if not c.is_zero()})

    def hermitian_conjugate(self):
        """Anti-involution: reverse products, qh -> qh^-1.

        On a normal-ordered term c*qh^t*E^a the reversed product
        E3^a3 E2^a2 E1^a1 renormalizes with phase qh^(2 sigma(a)), so the
        image is (c with qh->qh^-1) * qh^(2 sigma(a)) * E^a.
        """
        if self.mode != QUANTUM:
            raise ModeMismatch("conjugation acts on quantum elements")
        qh = self._qh()
        qinv = CoeffPoly.sym("qh", -1, self.table)
        terms = {}
        for e, c in self.terms.items():
            c = c.specialize({"qh": qinv}) * qh ** (2 * sigma(e))
            if not c.is_zero():
                terms[e] = c
        return TorusElement(self.table, QUANTUM, terms)

    # -- Poisson bracket ----------------------------------------------------

    def poisson(self, other):
        """{x, y} on classical elements; coefficients are Casimirs."""
        other = self._check(other)
        if self.mode != CLASSICAL:
            raise ModeMismatch("poisson bracket requires classical mode")
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                w = pairing(e1, e2)
                if not w:
                    continue
                e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
                c = c1 * c2 * w
                s = terms.get(e)
                s = c if s is None else s + c
                if s.is_zero():
                    terms.pop(e, None)
                else:
                    terms[e] = s
        return TorusElement(self.table, CLASSICAL, terms)

    # -- substitution ---------------------------------------------------------

    def substitute(self, sub: "TorusSubstitution"):
        return sub.apply(self)

    def exact_divide(self, den: "TorusElement") -> "TorusElement":
        return exact_divide_torus(self, den)

    def try_exact_divide(self, den: "TorusElement"):
        from .rings import DivisionFailure
        try:
            return exact_divide_torus(self, den)
        except DivisionFailure:
            return None

    def coeff_map(self, fn):
        """Apply ``fn`` to every coefficient (dropping zeros)."""
        terms = {}
        for e, c in self.terms.items():
            c = fn(c)
            if not c.is_zero():
                terms[e] = c
        return TorusElement(self.table, self.mode, terms)

    # -- eps grading -------------------------------------------------------------

    def eps_degree_range(self):
        """(min, max) eps-exponent over all coefficient terms."""
        lo, hi = None, None
        for c in self.terms.values():
            a, b = c.degree_range("eps")
            lo = a if lo is None else min(lo, a)
            hi = b if hi is None else max(hi, b)
        if lo is None:
            return (0, 0)
        return (lo, hi)

    def graded_parts(self):
        """Split by eps-degree: degree -> TorusElement."""
        parts = {}
        for e, c in self.terms.items():
            for d, p in c.graded_parts("eps").items():
                parts.setdefault(d, {})
                prev = parts[d].get(e)
                parts[d][e] = p if prev is None else prev + p
        return {d: TorusElement(self.table, self.mode, t) for d, t in parts.items()}

    # -- evaluation / output --------------------------------------------------

    def evaluate(self, point, coeff_values):
        """Evaluate at rational E-values and coefficient-symbol values.

        ``point`` is a triple of nonzero Fractions for E1..E3;
        ``coeff_values`` maps symbol names to nonzero Fractions (every symbol
        mentioned by a coefficient must be covered).  Classical only.
        """
        if self.mode != CLASSICAL:
            raise ModeMismatch("numeric evaluation is classical")
        point = [Q(p) for p in point]
        total = Q(0)
        for e, c in self.terms.items():
            v = Q(1)
            for p, k in zip(point, e):
                v *= p ** k
            for ce, cc in c.terms.items():
                w = cc
                for name, k in zip(self.table.names, ce):
                    if k:
                        w *= Q(coeff_values[name]) ** k
                v2 = w
                total += v * v2
        return total

    def to_json(self):
        return {"mode": self.mode,
                "terms": [{"e": list(e), "c": self.terms[e].to_json()}
                          for e in sorted(self.terms)]}

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for e in sorted(self.terms, reverse=True):
            mono = []
            for name, k in zip(("E1", "E2", "E3"), e):
                if k == 1:
                    mono.append(name)
                elif k:
                    mono.append("%s^%d" % (name, k))
            c = str(self.terms[e])
            if mono:
                bits.append("(%s)*%s" % (c, "*".join(mono)))
            else:
                bits.append("(%s)" % c)
        return " + ".join(bits)

    __repr__ = __str__


class TorusSubstitution:
    """Monomial substitution on torus generators and coefficient symbols.

    Defined by classical data: each generator E_i maps to
    ``coeff_monomial * E^m`` and each listed coefficient symbol maps to
    ``coeff_monomial * E^m`` (possibly zero for specializations, possibly a
    central E-monomial, as in g2 -> E1E2E3).  In quantum mode each image
    acquires the Weyl phase qh^sigma(m), which is what makes quantization
    commute with substitution.  Generator images must preserve the exchange
    pairing; coefficient-symbol images must be central.
    """

    def __init__(self, table: SymbolTable, gen_images=None, sym_images=None):
        self.table = table
        # gen_images: {1|2|3: (CoeffPoly monomial coeff, e-triple)}
        self.gen_images = {}
        for i in (1, 2, 3):
            e = [0, 0, 0]
            e[i - 1] = 1
            self.gen_images[i] = (CoeffPoly.one(table), tuple(e))
        if gen_images:
            for i, (coeff, e) in gen_images.items():
                coeff = self._as_coeff(coeff)
                if not coeff.is_monomial():
                    raise ValueError("generator image coefficient must be a monomial")
                self.gen_images[int(i)] = (coeff, tuple(e))
        basis = [self.gen_images[i][1] for i in (1, 2, 3)]
        units = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
        for i in range(3):
            for j in range(3):
                if pairing(basis[i], basis[j]) != pairing(units[i], units[j]):
                    raise ValueError("generator images break the exchange pairing")
        # sym_images: {name: None (zero) | (coeff monomial, central e-triple)}
        self.sym_images = {}
        if sym_images:
            for name, img in sym_images.items():
                table.index(name)
                if img is None:
                    self.sym_images[name] = None
                    continue
                coeff, e = img
                coeff = self._as_coeff(coeff)
                e = tuple(e) or (0, 0, 0)
                if not (coeff.is_monomial() or coeff.is_zero()):
                    raise ValueError("symbol image coefficient must be a monomial")
                if coeff.is_zero():
                    self.sym_images[name] = None
                    continue
                if not (e[0] == e[1] == e[2]):
                    raise ValueError("coefficient-symbol image must be central")
                self.sym_images[name] = (coeff, e)

    def _as_coeff(self, c):
        if isinstance(c, (int, Fraction)):
            return CoeffPoly.const(c, self.table)
        return c

    def _image_of_monomial(self, e, mode):
        """Image of bare E^e as a one-term TorusElement."""
        out = TorusElement.one(self.table, mode)
        for i in (1, 2, 3):
            k = e[i - 1]
            if not k:
                continue
            coeff, m = self.gen_images[i]
            if mode == QUANTUM:
                ph = sigma(m)
                img = TorusElement.monomial(
                    m, coeff * CoeffPoly.sym("qh", ph, self.table) if ph else coeff,
                    self.table, mode)
            else:
                img = TorusElement.monomial(m, coeff, self.table, mode)
            out = out * img ** k
        return out

    def apply(self, elt: TorusElement) -> TorusElement:
        if elt.table != self.table:
            raise SymbolTableMismatch("substitution table mismatch")
        mode = elt.mode
        out = TorusElement.zero(self.table, mode)
        mono_cache = {}
        sym_idx = {self.table.index(n): n for n in self.sym_images}
        for e, c in elt.terms.items():
            if e not in mono_cache:
                mono_cache[e] = self._image_of_monomial(e, mode)
            base = mono_cache[e]
            for ce, cc in c.terms.items():
                piece = TorusElement.scalar(
                    CoeffPoly(self.table, {self._strip(ce, sym_idx): cc}),
                    self.table, mode)
                dead = False
                for i, name in sym_idx.items():
                    k = ce[i]
                    if not k:
                        continue
                    img = self.sym_images[name]
                    if img is None:
                        if k < 0:
                            raise ValueError(
                                "zero assigned to %r with negative exponent" % name)
                        dead = True
                        break
                    coeff, m = img
                    if mode == QUANTUM:
                        ph = sigma(m)
                        if ph:
                            coeff = coeff * CoeffPoly.sym("qh", ph, self.table)
                    piece = piece * TorusElement.monomial(m, coeff, self.table, mode) ** k
                if dead:
                    continue
                out = out + piece * base
        return out

    def _strip(self, ce, sym_idx):
        if not sym_idx:
            return ce
        v = list(ce)
        for i in sym_idx:
            v[i] = 0
        return tuple(v)


def weyl_quantize(e, coeff=1, table=DEFAULT_TABLE):
    """Quantum image of the classical monomial coeff*E^e: coeff*qh^sigma(e)*E^e."""
    if isinstance(coeff, (int, Fraction)):
        coeff = CoeffPoly.const(coeff, table)
    if coeff.mentions("qh"):
        raise ValueError("coefficient must be free of qh")
    s = sigma(e)
    if s:
        coeff = coeff * CoeffPoly.sym("qh", s, table)
    return TorusElement.monomial(e, coeff, table, QUANTUM)


def oracle_weyl_phase(a):
    """BCH oracle for sigma: split a.S one generator at a time.

    Uses only e^(X+Y) = e^X e^Y qh^(P(X,Y)) for central commutators, where
    P(a.S, b.S) = <a,b>, peeling from the left; an independent derivation
    path from the closed form.
    """
    phase = 0
    rest = list(a)
    for i in range(2):
        head = [0, 0, 0]
        head[i] = rest[i]
        tail = list(rest)
        tail[i] = 0
        phase += pairing(head, tail)
        rest = tail
    return phase


def torus_fraction(num: TorusElement, den: TorusElement) -> RingFraction:
    return RingFraction(num, den)


def exact_divide_torus(num: TorusElement, den: TorusElement) -> TorusElement:
    """Exact division in the classical torus (Laurent in E's over CoeffPoly).

    Leading-term elimination in lex order on exponent triples; coefficient
    division happens in CoeffPoly.  The result is verified by
    reconstruction, so success is sound; failure raises DivisionFailure
    with the offending term.
    """
    from .rings import DivisionFailure

    if num.mode != CLASSICAL or den.mode != CLASSICAL:
        raise ModeMismatch("exact division implemented for classical mode")
    if den.is_zero():
        raise ZeroDivisionError("division by zero torus element")
    if num.is_zero():
        return TorusElement.zero(num.table, CLASSICAL)
    lo_num = tuple(min(e[i] for e in num.terms) for i in range(3))
    lo_den = tuple(min(e[i] for e in den.terms) for i in range(3))
    rem = {(e[0] - lo_num[0], e[1] - lo_num[1], e[2] - lo_num[2]): c
           for e, c in num.terms.items()}
    dterms = {(e[0] - lo_den[0], e[1] - lo_den[1], e[2] - lo_den[2]): c
              for e, c in den.terms.items()}
    lead = max(dterms)
    lead_c = dterms[lead]
    shift = (lo_num[0] - lo_den[0], lo_num[1] - lo_den[1], lo_num[2] - lo_den[2])
    qterms = {}
    while rem:
        e = max(rem)
        c = rem[e]
        if e[0] < lead[0] or e[1] < lead[1] or e[2] < lead[2]:
            raise DivisionFailure("inexact division", witness=(e, c))
        qe = (e[0] - lead[0], e[1] - lead[1], e[2] - lead[2])
        qc = c.try_exact_divide(lead_c)
        if qc is None:
            raise DivisionFailure("coefficient does not divide", witness=(e, c))
        prev = qterms.get(qe)
        qterms[qe] = qc if prev is None else prev + qc
        for de, dc in dterms.items():
            te = (qe[0] + de[0], qe[1] + de[1], qe[2] + de[2])
            s = rem.get(te)
            s = -(qc * dc) if s is None else s - qc * dc
            if s.is_zero():
                rem.pop(te, None)
            else:
                rem[te] = s
    out = TorusElement(num.table, CLASSICAL,
                       {(e[0] + shift[0], e[1] + shift[1], e[2] + shift[2]): c
                        for e, c in qterms.items()})
    if not (out * den - num).is_zero():
        raise DivisionFailure("reconstruction check failed", witness=None)
    return out
