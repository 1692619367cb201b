"""Exact commutative Laurent-polynomial arithmetic over the rationals.

Everything downstream (the quantum torus, the cubic catalog, the
verification suites) stores its scalars as :class:`CoeffPoly` values:
finitely many terms ``coefficient * prod(symbol**exponent)`` with exact
``Fraction`` coefficients and integer (possibly negative) exponents over a
fixed :class:`SymbolTable`.  Canonical form is the term map itself, so
equality is exact and zero-testing is trivial.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

Q = Fraction


class SymbolTableMismatch(Exception):
    pass


class DivisionFailure(Exception):
    """Exact division failed; ``witness`` is a term that cannot be cancelled."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class SymbolTable:
    """An ordered list of named invertible commuting symbols.

    Symbol indices are stable for the table's lifetime.  Tables compare by
    their name tuple, so two independently built tables with the same names
    are interchangeable.
    """

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError("duplicate symbol names: %r" % (names,))
        self.names = names
        self._index = {n: i for i, n in enumerate(names)}

    def __len__(self):
        return len(self.names)

    def __eq__(self, other):
        return isinstance(other, SymbolTable) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return "SymbolTable(%r)" % (self.names,)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError("symbol %r not in table %r" % (name, self.names))

    def contains(self, name: str) -> bool:
        return name in self._index

    def exponent_vector(self, powers: Mapping[str, int]) -> tuple:
        v = [0] * len(self.names)
        for name, k in powers.items():
            v[self.index(name)] = v[self.index(name)] + int(k)
        return tuple(v)


# The shared default table.  qh is q^(1/2); g1..g3 are e^(p_i/2); G1..G3 and
# Ginf are the abstract cubic constants; eps is the confluence grader; u, v
# are Cayley/unfolding auxiliaries; a, b, g, h are per-label catalog units;
# om1..om4 are free cubic parameters; x, y, z are unfolding coordinates.
DEFAULT_SYMBOLS = (
    "qh", "g1", "g2", "g3", "G1", "G2", "G3", "Ginf", "eps", "u", "v",
    "a", "b", "g", "h", "om1", "om2", "om3", "om4", "x", "y", "z",
)
DEFAULT_TABLE = SymbolTable(DEFAULT_SYMBOLS)

_ZEROS_CACHE = {}


def _zero_vec(n):
    try:
        return _ZEROS_CACHE[n]
    except KeyError:
        _ZEROS_CACHE[n] = (0,) * n
        return _ZEROS_CACHE[n]


class CoeffPoly:
    """A Laurent polynomial: map from exponent vectors to nonzero Fractions."""

    __slots__ = ("table", "terms")

    def __init__(self, table: SymbolTable, terms: Mapping[tuple, Fraction] | None = None):
        self.table = table
        if terms is None:
            self.terms = {}
        else:
            self.terms = {e: Q(c) for e, c in terms.items() if c != 0}

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, table=DEFAULT_TABLE):
        return cls(table)

    @classmethod
    def const(cls, value, table=DEFAULT_TABLE):
        value = Q(value)
        if value == 0:
            return cls(table)
        return cls(table, {_zero_vec(len(table)): value})

    @classmethod
    def one(cls, table=DEFAULT_TABLE):
        return cls.const(1, table)

    @classmethod
    def sym(cls, name, k=1, table=DEFAULT_TABLE):
        return cls.monomial({name: k}, 1, table)

    @classmethod
    def monomial(cls, powers: Mapping[str, int], coeff=1, table=DEFAULT_TABLE):
        coeff = Q(coeff)
        if coeff == 0:
            return cls(table)
        return cls(table, {table.exponent_vector(powers): coeff})

    # -- basic structure -------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_constant(self) -> bool:
        n = len(self.table)
        return all(e == _zero_vec(n) for e in self.terms)

    def constant_value(self) -> Fraction:
        if self.is_zero():
            return Q(0)
        if not self.is_constant():
            raise ValueError("not a constant: %s" % self)
        return next(iter(self.terms.values()))

    def mentions(self, name: str) -> bool:
        i = self.table.index(name)
        return any(e[i] != 0 for e in self.terms)

    def degree_range(self, name: str) -> tuple:
        """(min, max) exponent of ``name`` across terms; (0, 0) for zero."""
        i = self.table.index(name)
        if not self.terms:
            return (0, 0)
        degs = [e[i] for e in self.terms]
        return (min(degs), max(degs))

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CoeffPoly.const(other, self.table)
        if not isinstance(other, CoeffPoly):
            return NotImplemented
        return self.table == other.table and self.terms == other.terms

    def __hash__(self):
        return hash((self.table, frozenset(self.terms.items())))

    def _check(self, other) -> "CoeffPoly":
        if isinstance(other, (int, Fraction)):
            return CoeffPoly.const(other, self.table)
        if not isinstance(other, CoeffPoly):
            raise TypeError("cannot combine CoeffPoly with %r" % (other,))
        if other.table != self.table:
            raise SymbolTableMismatch(
                "tables differ: %r vs %r" % (self.table.names, other.table.names))
        return other

    # -- ring operations --------------------------------------------------

    def __add__(self, other):
        other = self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e, 0) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        out = CoeffPoly(self.table)
        out.terms = terms
        return out

    __radd__ = __add__

    def __neg__(self):
        out = CoeffPoly(self.table)
        out.terms = {e: -c for e, c in self.terms.items()}
        return out

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) + (-self)

    def __mul__(self, other):
        other = self._check(other)
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = terms.get(e, 0) + c1 * c2
                if s:
                    terms[e] = s
                else:
                    terms.pop(e, None)
        out = CoeffPoly(self.table)
        out.terms = terms
        return out

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("exponent must be int")
        if k < 0:
            inv = self.inverse()
            return inv ** (-k)
        out = CoeffPoly.one(self.table)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def inverse(self) -> "CoeffPoly":
        """Inverse of an invertible monomial."""
        if len(self.terms) != 1:
            raise ValueError("only monomials are invertible: %s" % self)
        (e, c), = self.terms.items()
        out = CoeffPoly(self.table)
        out.terms = {tuple(-a for a in e): Q(1) / c}
        return out

    # -- substitution / specialization -------------------------------------

    def substitute(self, sub: "MonomialSubstitution") -> "CoeffPoly":
        """Apply a monomial substitution (a ring homomorphism)."""
        if sub.table != self.table:
            raise SymbolTableMismatch("substitution table mismatch")
        terms = {}
        for e, c in self.terms.items():
            coeff, vec = sub.image_of_exponent(e)
            s = terms.get(vec, 0) + c * coeff
            if s:
                terms[vec] = s
            else:
                terms.pop(vec, None)
        out = CoeffPoly(self.table)
        out.terms = terms
        return out

    def specialize(self, assignments: Mapping[str, "CoeffPoly | int | Fraction"]) -> "CoeffPoly":
        """Evaluation homomorphism sending named symbols to polynomial values.

        A symbol occurring with a negative exponent must be assigned an
        invertible monomial; assigning zero there raises ValueError.
        """
        imgs = {}
        for name, val in assignments.items():
            if isinstance(val, (int, Fraction)):
                val = CoeffPoly.const(val, self.table)
            imgs[self.table.index(name)] = self._check(val)
        out = CoeffPoly.zero(self.table)
        pow_cache = {}
        for e, c in self.terms.items():
            residual = list(e)
            factor = CoeffPoly.const(c, self.table)
            dead = False
            for i, img in imgs.items():
                k = e[i]
                if k == 0:
                    continue
                residual[i] = 0
                if img.is_zero():
                    if k < 0:
                        raise ValueError(
                            "zero assigned to %r occurring with negative exponent"
                            % self.table.names[i])
                    dead = True
                    break
                key = (i, k)
                if key not in pow_cache:
                    pow_cache[key] = img ** k
                factor = factor * pow_cache[key]
            if dead:
                continue
            base = CoeffPoly(self.table)
            base.terms = {tuple(residual): Q(1)}
            out = out + base * factor
        return out

    # -- exact division -----------------------------------------------------

    def exact_divide(self, den: "CoeffPoly") -> "CoeffPoly":
        """Return q with q*den == self, or raise DivisionFailure.

        Both operands are shifted to honest polynomials (min exponent 0 per
        symbol) first; exact Laurent divisibility forces the shifted
        quotient to be a polynomial too, so leading-term elimination in lex
        order on N^k terminates and fails fast with a witness term.
        """
        den = self._check(den)
        if den.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return CoeffPoly.zero(self.table)
        n = len(self.table)
        lo_num = [min(e[i] for e in self.terms) for i in range(n)]
        lo_den = [min(e[i] for e in den.terms) for i in range(n)]
        rem = {tuple(a - b for a, b in zip(e, lo_num)): c
               for e, c in self.terms.items()}
        dterms = {tuple(a - b for a, b in zip(e, lo_den)): c
                  for e, c in den.terms.items()}
        lead = max(dterms)
        lead_c = dterms[lead]
        shift = tuple(a - b for a, b in zip(lo_num, lo_den))
        qterms = {}
        while rem:
            e = max(rem)
            c = rem[e]
            if any(a < b for a, b in zip(e, lead)):
                raise DivisionFailure(
                    "inexact division, leading term does not reduce",
                    witness=(tuple(a + b for a, b in zip(e, lo_num)), c))
            qe = tuple(a - b for a, b in zip(e, lead))
            qc = c / lead_c
            qterms[qe] = qterms.get(qe, 0) + qc
            for de, dc in dterms.items():
                te = tuple(a + b for a, b in zip(qe, de))
                s = rem.get(te, 0) - qc * dc
                if s:
                    rem[te] = s
                else:
                    rem.pop(te, None)
        out = CoeffPoly(self.table)
        out.terms = {tuple(a + b for a, b in zip(e, shift)): c
                     for e, c in qterms.items() if c}
        return out

    def try_exact_divide(self, den: "CoeffPoly"):
        try:
            return self.exact_divide(den)
        except DivisionFailure:
            return None

    # -- eps grading ----------------------------------------------------------

    def graded_parts(self, name: str) -> dict:
        """Split by the exponent of ``name``: degree -> CoeffPoly."""
        i = self.table.index(name)
        parts = {}
        for e, c in self.terms.items():
            parts.setdefault(e[i], {})[e] = c
        out = {}
        for d, terms in parts.items():
            p = CoeffPoly(self.table)
            p.terms = dict(terms)
            out[d] = p
        return out

    # -- output ---------------------------------------------------------------

    def to_json(self):
        items = []
        for e in sorted(self.terms):
            c = self.terms[e]
            items.append({"exponents": list(e), "coeff": "%d/%d" % (c.numerator, c.denominator)})
        return items

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            factors = []
            for name, k in zip(self.table.names, e):
                if k == 1:
                    factors.append(name)
                elif k:
                    factors.append("%s^%d" % (name, k))
            if not factors:
                bits.append(str(c))
            elif c == 1:
                bits.append("*".join(factors))
            elif c == -1:
                bits.append("-" + "*".join(factors))
            else:
                bits.append(str(c) + "*" + "*".join(factors))
        s = " + ".join(bits)
        return s.replace("+ -", "- ")

    __repr__ = __str__


class MonomialSubstitution:
    """Sends each symbol to coefficient * monomial, e.g. g3 -> eps^-1 * g3.

    Images are pairs ``(Fraction, exponent_vector)``; unmentioned symbols map
    to themselves.  Application is a ring homomorphism by construction (every
    image is invertible, so negative source exponents are safe).
    """

    def __init__(self, table: SymbolTable, images: Mapping[str, tuple] | None = None):
        self.table = table
        n = len(table)
        self.coeffs = [Q(1)] * n
        self.vectors = [None] * n
        for i in range(n):
            v = [0] * n
            v[i] = 1
            self.vectors[i] = tuple(v)
        if images:
            for name, (coeff, powers) in images.items():
                i = table.index(name)
                coeff = Q(coeff)
                if coeff == 0:
                    raise ValueError("image of %r is not invertible" % name)
                self.coeffs[i] = coeff
                self.vectors[i] = table.exponent_vector(powers)

    @classmethod
    def identity(cls, table=DEFAULT_TABLE):
        return cls(table)

    def image_of_exponent(self, e: tuple) -> tuple:
        coeff = Q(1)
        vec = [0] * len(e)
        for i, k in enumerate(e):
            if k == 0:
                continue
            coeff *= self.coeffs[i] ** k
            for j, m in enumerate(self.vectors[i]):
                if m:
                    vec[j] += k * m
        return coeff, tuple(vec)


class RingFraction:
    """num/den over any exact ring element (CoeffPoly or classical torus).

    Fractions are never auto-reduced; equality is by cross-multiplication.
    ``simplify`` attempts exact division and returns the ring element on
    success.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if den is None:
            den = num.__class__.one(num.table) if hasattr(num, "table") else None
        if den is None or den.is_zero():
            raise ZeroDivisionError("fraction with zero denominator")
        self.num = num
        self.den = den

    @classmethod
    def of(cls, value):
        if isinstance(value, RingFraction):
            return value
        return cls(value)

    def is_zero(self):
        return self.num.is_zero()

    def __add__(self, other):
        other = RingFraction.of(other)
        return RingFraction(self.num * other.den + other.num * self.den,
                            self.den * other.den)

    def __sub__(self, other):
        other = RingFraction.of(other)
        return RingFraction(self.num * other.den - other.num * self.den,
                            self.den * other.den)

    def __neg__(self):
        return RingFraction(-self.num, self.den)

    def __mul__(self, other):
        other = RingFraction.of(other)
        return RingFraction(self.num * other.num, self.den * other.den)

    def __pow__(self, k: int):
        if k < 0:
            return self.reciprocal() ** (-k)
        num, den = self.num, self.den
        out = RingFraction(num.__class__.one(num.table))
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def reciprocal(self):
        return RingFraction(self.den, self.num)

    def __eq__(self, other):
        other = RingFraction.of(other)
        return (self.num * other.den - other.num * self.den).is_zero()

    def simplify(self):
        """Exact-divide den into num; returns a ring element or raises."""
        return self.num.exact_divide(self.den)

    def try_simplify(self):
        return self.num.try_exact_divide(self.den)

    def __str__(self):
        return "(%s) / (%s)" % (self.num, self.den)

    __repr__ = __str__


def solve_linear_system(rows, rhs):
    """Solve an exact rational linear system ``rows * x = rhs``.

    ``rows`` is a list of lists of Fractions.  Returns ``(solution, nullity)``
    where ``solution`` is None when inconsistent and nullity counts the free
    directions (0 means the solution is unique).
    """
    m = [list(map(Q, row)) + [Q(r)] for row, r in zip(rows, rhs)]
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(m)):
            if m[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        pv = m[r][c]
        m[r] = [v / pv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    for i in range(r, len(m)):
        if m[i][ncols] != 0:
            return None, ncols - len(pivots)
    sol = [Q(0)] * ncols
    for row, c in zip(m, pivots):
        sol[c] = row[ncols]
    return sol, ncols - len(pivots)
