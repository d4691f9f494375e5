"""The ring of polynomials over a finite field.

Polynomials are coefficient tuples (lowest degree first) of integer
encodings over a ``FieldSpec``.  Canonical form: the zero polynomial is
the empty tuple, otherwise the last coefficient is nonzero.

Absolute values |f| = k^(deg f) are carried as integer exponents via
``AbsValue`` and never converted to floating point.  The module also
provides monic gcd, complete factorization (squarefree decomposition,
distinct-degree and equal-degree splitting, with trial division for
small degrees), the Moebius function, the totient counting residues
coprime to q, and the block enumerators for polynomial vectors ordered
by max-norm.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import ClassVar, Dict, Iterator, List, Optional, Sequence, Tuple

from .ffield import FieldElement, FieldMismatchError, FieldSpec


class PolynomialError(ValueError):
    pass


# ---------------------------------------------------------------------------
# absolute values as exponents of k
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=False)
class AbsValue:
    """Value in {0} united with {k^e : e integer}; exp None encodes 0.

    Multiplication adds exponents and 0 absorbs; the order puts 0 below
    every power of k.
    """

    exp: Optional[int]

    ZERO: ClassVar["AbsValue"]

    @staticmethod
    def of(exp: int) -> "AbsValue":
        return AbsValue(exp)

    def is_zero(self) -> bool:
        return self.exp is None

    def __mul__(self, other: "AbsValue") -> "AbsValue":
        if self.exp is None or other.exp is None:
            return AbsValue(None)
        return AbsValue(self.exp + other.exp)

    def __truediv__(self, other: "AbsValue") -> "AbsValue":
        if other.exp is None:
            raise ZeroDivisionError("division by zero absolute value")
        if self.exp is None:
            return AbsValue(None)
        return AbsValue(self.exp - other.exp)

    def __pow__(self, n: int) -> "AbsValue":
        if self.exp is None:
            if n == 0:
                return AbsValue(0)
            return AbsValue(None)
        return AbsValue(self.exp * n)

    def _key(self) -> Tuple[int, int]:
        return (0, 0) if self.exp is None else (1, self.exp)

    def __lt__(self, other: "AbsValue") -> bool:
        return self._key() < other._key()

    def __le__(self, other: "AbsValue") -> bool:
        return self._key() <= other._key()

    def __gt__(self, other: "AbsValue") -> bool:
        return self._key() > other._key()

    def __ge__(self, other: "AbsValue") -> bool:
        return self._key() >= other._key()

    def to_fraction(self, k: int) -> Fraction:
        if self.exp is None:
            return Fraction(0)
        if self.exp >= 0:
            return Fraction(k**self.exp)
        return Fraction(1, k**-self.exp)

    def __repr__(self) -> str:
        return "|0|" if self.exp is None else f"k^{self.exp}"


AbsValue.ZERO = AbsValue(None)


def abs_max(values: Sequence[AbsValue]) -> AbsValue:
    out = AbsValue.ZERO
    for v in values:
        if v > out:
            out = v
    return out


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Poly:
    """Canonical polynomial over a FieldSpec; coeffs lowest degree first."""

    coeffs: Tuple[int, ...]
    field: FieldSpec

    @staticmethod
    def make(field: FieldSpec, coeffs: Sequence[int]) -> "Poly":
        cs = [int(c) for c in coeffs]
        for c in cs:
            if not 0 <= c < field.k:
                raise PolynomialError(f"coefficient encoding {c} out of range")
        while cs and cs[-1] == 0:
            cs.pop()
        return Poly(tuple(cs), field)

    @staticmethod
    def zero(field: FieldSpec) -> "Poly":
        return Poly((), field)

    @staticmethod
    def one(field: FieldSpec) -> "Poly":
        return Poly((1,), field)

    @staticmethod
    def x(field: FieldSpec) -> "Poly":
        return Poly((0, 1), field)

    @staticmethod
    def constant(field: FieldSpec, c: int) -> "Poly":
        return Poly.make(field, [c])

    @staticmethod
    def from_index(field: FieldSpec, index: int, width: int) -> "Poly":
        """Polynomial whose coefficient word is index written base k."""
        cs = []
        for _ in range(width):
            cs.append(index % field.k)
            index //= field.k
        return Poly.make(field, cs)

    # -- basic structure ---------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> Optional[int]:
        """Degree, or None for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else None

    def coeff(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def leading(self) -> int:
        if not self.coeffs:
            raise PolynomialError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def abs_value(self) -> AbsValue:
        return AbsValue.ZERO if not self.coeffs else AbsValue(len(self.coeffs) - 1)

    def elements(self) -> Tuple[FieldElement, ...]:
        return tuple(FieldElement(c, self.field) for c in self.coeffs)

    def _check(self, other: "Poly") -> None:
        if self.field != other.field:
            raise FieldMismatchError("polynomials over different fields")

    # -- ring operations ----------------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        f = self.field
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = f.add(out[i], c)
        return Poly.make(f, out)

    def __neg__(self) -> "Poly":
        f = self.field
        return Poly(tuple(f.neg(c) for c in self.coeffs), f)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        self._check(other)
        f = self.field
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly.zero(f)
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        out[i + j] = f.add(out[i + j], f.mul(ai, bj))
        return Poly.make(f, out)

    def scale(self, c: int) -> "Poly":
        f = self.field
        if c == 0:
            return Poly.zero(f)
        return Poly(tuple(f.mul(c, a) for a in self.coeffs), f)

    def shift(self, n: int) -> "Poly":
        """Multiply by X^n (n >= 0)."""
        if self.is_zero():
            return self
        return Poly((0,) * n + self.coeffs, self.field)

    def __divmod__(self, other: "Poly") -> Tuple["Poly", "Poly"]:
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        f = self.field
        rem = list(self.coeffs)
        db = len(other.coeffs) - 1
        lead_inv = f.inv(other.coeffs[-1])
        quot = [0] * max(0, len(rem) - db)
        while len(rem) - 1 >= db and rem:
            factor = f.mul(rem[-1], lead_inv)
            pos = len(rem) - 1 - db
            quot[pos] = factor
            for i, c in enumerate(other.coeffs):
                rem[pos + i] = f.sub(rem[pos + i], f.mul(factor, c))
            while rem and rem[-1] == 0:
                rem.pop()
        return Poly.make(f, quot), Poly.make(f, rem)

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def monic(self) -> "Poly":
        if self.is_zero():
            raise PolynomialError("zero polynomial cannot be made monic")
        if self.is_monic():
            return self
        return self.scale(self.field.inv(self.coeffs[-1]))

    def pow_mod(self, e: int, mod: "Poly") -> "Poly":
        r = Poly.one(self.field)
        base = self % mod
        while e:
            if e & 1:
                r = (r * base) % mod
            base = (base * base) % mod
            e >>= 1
        return r

    def derivative(self) -> "Poly":
        f = self.field
        out = []
        for i in range(1, len(self.coeffs)):
            c = self.coeffs[i]
            acc = 0
            for _ in range(i % f.p):
                acc = f.add(acc, c)
            out.append(acc)
        return Poly.make(f, out)

    # -- serialization --------------------------------------------------------

    def to_config(self) -> List[int]:
        return list(self.coeffs)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append("X" if c == 1 else f"{c}*X")
            else:
                parts.append(f"X^{i}" if c == 1 else f"{c}*X^{i}")
        return " + ".join(reversed(parts))


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic greatest common divisor; gcd(a, 0) = monic a."""
    a._check(b)
    if a.is_zero() and b.is_zero():
        raise PolynomialError("gcd(0, 0) is undefined")
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_coprime(a: Poly, b: Poly) -> bool:
    g = poly_gcd(a, b)
    return g.degree() == 0


# ---------------------------------------------------------------------------
# irreducibility and factorization
# ---------------------------------------------------------------------------


def is_irreducible(f: Poly) -> bool:
    """Trial division by every monic polynomial of degree <= deg f / 2."""
    d = f.degree()
    if d is None or d < 1:
        return False
    for e in range(1, d // 2 + 1):
        for div in enumerate_polys(f.field, e, monic=True):
            if (f % div).is_zero():
                return False
    return True


@functools.lru_cache(maxsize=None)
def monic_irreducibles(field: FieldSpec, degree: int) -> Tuple[Poly, ...]:
    """All monic irreducibles of exact degree, in enumeration order."""
    return tuple(p for p in enumerate_polys(field, degree, monic=True) if is_irreducible(p))


def _pth_root(f: Poly) -> Poly:
    """Inverse of Frobenius on polynomials of the form g(X^p)."""
    fd = f.field
    p = fd.p
    root_exp = fd.k // p  # c -> c^(p^(l-1)) inverts c -> c^p
    out = []
    for i in range(0, len(f.coeffs), p):
        out.append(fd.pow(f.coeffs[i], root_exp))
    return Poly.make(fd, out)


def squarefree_decomposition(f: Poly) -> List[Tuple[Poly, int]]:
    """Monic f as a product of pairwise-coprime squarefree parts g_i^i."""
    fd = f.field
    p = fd.p
    out: List[Tuple[Poly, int]] = []
    if f.degree() == 0:
        return out
    deriv = f.derivative()
    if deriv.is_zero():
        inner = squarefree_decomposition(_pth_root(f))
        return [(g, m * p) for g, m in inner]
    c = poly_gcd(f, deriv)
    w = f // c
    i = 1
    while w.degree() != 0:
        y = poly_gcd(w, c)
        fac = w // y
        if fac.degree() != 0:
            out.append((fac, i))
        w = y
        c = c // y
        i += 1
    if c.degree() != 0:
        inner = squarefree_decomposition(_pth_root(c))
        out.extend((g, m * p) for g, m in inner)
    return out


def _distinct_degree(f: Poly) -> List[Tuple[Poly, int]]:
    """Split squarefree monic f into products of irreducibles of equal degree."""
    fd = f.field
    out = []
    h = Poly.x(fd) % f
    x = Poly.x(fd)
    d = 0
    while True:
        deg_f = f.degree()
        assert deg_f is not None
        if deg_f == 0:
            break
        d += 1
        if deg_f < 2 * d:
            out.append((f, deg_f))
            break
        h = h.pow_mod(fd.k, f)
        g = poly_gcd(h - x, f) if not (h - x).is_zero() else f.monic()
        if g.degree() != 0:
            out.append((g, d))
            f = f // g
            h = h % f
    return out


def _equal_degree_split(f: Poly, d: int) -> List[Poly]:
    """Factor a squarefree monic product of degree-d irreducibles.

    Splitting elements are drawn from the deterministic enumeration of
    polynomials of degree < deg f, so factorizations are reproducible.
    """
    fd = f.field
    deg_f = f.degree()
    assert deg_f is not None
    if deg_f == d:
        return [f]
    one = Poly.one(fd)
    idx = 1
    width = deg_f
    while True:
        idx += 1
        h = Poly.from_index(fd, idx, width)
        if h.is_zero() or h.degree() == 0:
            continue
        g = poly_gcd(h, f) if not h.is_zero() else one
        if g.degree() != 0 and g.degree() != deg_f:
            return _equal_degree_split(g, d) + _equal_degree_split(f // g, d)
        if fd.p == 2:
            # trace map sums the Frobenius orbit of h in the quotient
            t = Poly.zero(fd)
            acc = h % f
            for _ in range(d * fd.l):
                t = t + acc
                acc = (acc * acc) % f
        else:
            t = h.pow_mod((fd.k**d - 1) // 2, f) - one
        if t.is_zero():
            continue
        g = poly_gcd(t, f)
        if g.degree() != 0 and g.degree() != deg_f:
            return _equal_degree_split(g, d) + _equal_degree_split(f // g, d)


def _factor_squarefree_trial(f: Poly) -> List[Poly]:
    d = f.degree()
    assert d is not None and d >= 1
    for e in range(1, d // 2 + 1):
        for p in monic_irreducibles(f.field, e):
            if (f % p).is_zero():
                return [p] + _factor_squarefree_trial(f // p)
    return [f]


def poly_factor(f: Poly) -> Tuple[int, Dict[Poly, int]]:
    """Complete factorization: (leading coefficient, {monic irreducible: mult}).

    Small squarefree parts (degree <= 4) go through trial division,
    larger ones through distinct/equal-degree splitting.  Every factor
    is re-verified irreducible and the product is checked against f.
    """
    if f.is_zero():
        raise PolynomialError("cannot factor the zero polynomial")
    lead = f.leading()
    g = f.monic()
    factors: Dict[Poly, int] = {}
    for part, mult in squarefree_decomposition(g):
        deg = part.degree()
        assert deg is not None
        if deg <= 4:
            irreds = _factor_squarefree_trial(part)
        else:
            irreds = []
            for block, d in _distinct_degree(part):
                irreds.extend(_equal_degree_split(block, d))
        for p in irreds:
            if not is_irreducible(p):
                raise PolynomialError(f"factorization produced reducible part {p!r}")
            factors[p] = factors.get(p, 0) + mult
    check = Poly.constant(f.field, lead)
    for p, m in factors.items():
        for _ in range(m):
            check = check * p
    if check != f:
        raise PolynomialError("factorization does not reproduce input")
    return lead, factors


def poly_mobius(f: Poly) -> int:
    """0 on non-squarefree inputs, else (-1)^(number of distinct factors)."""
    if f.is_zero():
        raise PolynomialError("Moebius of zero is undefined")
    _, factors = poly_factor(f)
    if any(m > 1 for m in factors.values()):
        return 0
    return -1 if len(factors) % 2 else 1


def totient(q: Poly) -> int:
    """Number of residues of norm below |q| coprime to q.

    Computed from the factorization as |q| * prod (1 - 1/|P|) over the
    distinct irreducible divisors P; constants get 0 by convention
    (there is no residue of norm below 1).
    """
    if q.is_zero():
        raise PolynomialError("totient of zero is undefined")
    d = q.degree()
    assert d is not None
    if d == 0:
        return 0
    k = q.field.k
    _, factors = poly_factor(q)
    out = k**d
    for p in factors:
        dp = p.degree()
        assert dp is not None
        out = out // k**dp * (k**dp - 1)
    return out


def totient_bruteforce(q: Poly) -> int:
    """Independent oracle: count coprime residues by gcd enumeration."""
    if q.is_zero():
        raise PolynomialError("totient of zero is undefined")
    d = q.degree()
    assert d is not None
    if d == 0:
        return 0
    count = 0
    for p in enumerate_polys_upto(q.field, d - 1):
        if not p.is_zero() and poly_gcd(q, p).degree() == 0:
            count += 1
    return count


def coprime_density(g: Poly) -> Fraction:
    """Density of residues coprime to g; 1 when g is a nonzero constant."""
    if g.is_zero():
        raise PolynomialError("coprime density of zero is undefined")
    d = g.degree()
    assert d is not None
    if d == 0:
        return Fraction(1)
    return Fraction(totient(g), g.field.k**d)


def totient_lower_constant(field: FieldSpec, max_degree: int) -> Fraction:
    """Worst-case totient(q)/|q| over deg q <= max_degree, from the factor table.

    The minimum of prod (1 - 1/|P|) is attained by packing the smallest
    distinct irreducibles, so the product over every irreducible of
    degree <= max_degree is a valid lower bound.
    """
    k = field.k
    c = Fraction(1)
    for d in range(1, max_degree + 1):
        n_irr = len(monic_irreducibles(field, d))
        c *= Fraction(k**d - 1, k**d) ** n_irr
    return c


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------


def enumerate_polys(field: FieldSpec, degree: int, monic: bool = False) -> Iterator[Poly]:
    """All (monic) polynomials of exact degree; k^d monic, (k-1)k^d total."""
    if degree < 0:
        raise PolynomialError("degree must be >= 0")
    k = field.k
    leads = [1] if monic else list(range(1, k))
    for lead in leads:
        for idx in range(k**degree):
            low = []
            rem = idx
            for _ in range(degree):
                low.append(rem % k)
                rem //= k
            yield Poly(tuple(low) + (lead,), field)


def enumerate_polys_upto(field: FieldSpec, max_degree: int) -> Iterator[Poly]:
    """All polynomials of degree <= max_degree, zero included (k^(d+1) values)."""
    k = field.k
    for idx in range(k ** (max_degree + 1)):
        yield Poly.from_index(field, idx, max_degree + 1)


def count_polys(field: FieldSpec, degree: int, monic: bool = False) -> int:
    k = field.k
    return k**degree if monic else (k - 1) * k**degree


# ---------------------------------------------------------------------------
# polynomial vectors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PolyVector:
    """Tuple of m polynomials with the max-norm geometry."""

    entries: Tuple[Poly, ...]

    @staticmethod
    def make(entries: Sequence[Poly]) -> "PolyVector":
        if not entries:
            raise PolynomialError("vectors need at least one coordinate")
        field = entries[0].field
        for e in entries:
            if e.field != field:
                raise FieldMismatchError("mixed fields in vector")
        return PolyVector(tuple(entries))

    @property
    def m(self) -> int:
        return len(self.entries)

    @property
    def field(self) -> FieldSpec:
        return self.entries[0].field

    def is_zero(self) -> bool:
        return all(e.is_zero() for e in self.entries)

    def norm_inf(self) -> AbsValue:
        return abs_max([e.abs_value() for e in self.entries])

    def norm_exponent(self) -> Optional[int]:
        """Exponent N with |q| = k^N, or None for the zero vector."""
        return self.norm_inf().exp

    def content(self) -> Poly:
        """Monic gcd of the coordinates."""
        if self.is_zero():
            raise PolynomialError("content of the zero vector is undefined")
        g: Optional[Poly] = None
        for e in self.entries:
            if e.is_zero():
                continue
            g = e.monic() if g is None else poly_gcd(g, e)
        assert g is not None
        return g

    def primitive_part(self) -> "PolyVector":
        g = self.content()
        return PolyVector(tuple(e // g for e in self.entries))

    def to_config(self) -> List[List[int]]:
        return [e.to_config() for e in self.entries]

    def __repr__(self) -> str:
        return "(" + ", ".join(repr(e) for e in self.entries) + ")"


def vectors_linearly_dependent(q: PolyVector, r: PolyVector) -> bool:
    """Dependence over the fraction field: all 2x2 minors vanish."""
    m = q.m
    for i in range(m):
        for j in range(i + 1, m):
            minor = q.entries[i] * r.entries[j] - q.entries[j] * r.entries[i]
            if not minor.is_zero():
                return False
    return True


def dependent_multipliers(q: PolyVector, r: PolyVector) -> Tuple[PolyVector, Poly, Poly]:
    """For dependent nonzero q, r: primitive qhat and lam, lam' with
    q = lam * qhat and r = lam' * qhat."""
    if q.is_zero() or r.is_zero():
        raise PolynomialError("multiplier extraction needs nonzero vectors")
    if not vectors_linearly_dependent(q, r):
        raise PolynomialError("vectors are not linearly dependent")
    qhat = q.primitive_part()
    i0 = next(i for i, e in enumerate(qhat.entries) if not e.is_zero())
    lam = q.entries[i0] // qhat.entries[i0]
    lam2, rem = divmod(r.entries[i0], qhat.entries[i0])
    if not rem.is_zero():
        raise PolynomialError("vectors are not polynomial multiples of a common primitive vector")
    for i in range(q.m):
        if r.entries[i] != lam2 * qhat.entries[i]:
            raise PolynomialError("vectors are not polynomial multiples of a common primitive vector")
    return qhat, lam, lam2


def enumerate_vectors(field: FieldSpec, m: int, norm_exponent: int) -> Iterator[PolyVector]:
    """All q in F[X]^m with |q| = k^N exactly; k^(m(N+1)) - k^(mN) of them."""
    if norm_exponent < 0:
        raise PolynomialError("norm exponent must be >= 0")
    k = field.k
    width = norm_exponent + 1
    total = k ** (m * width)
    for idx in range(total):
        rem = idx
        entries = []
        hit = False
        for _ in range(m):
            poly = Poly.from_index(field, rem % k**width, width)
            rem //= k**width
            if poly.degree() == norm_exponent:
                hit = True
            entries.append(poly)
        if hit:
            yield PolyVector(tuple(entries))


def count_vectors(field: FieldSpec, m: int, norm_exponent: int) -> int:
    k = field.k
    return k ** (m * (norm_exponent + 1)) - k ** (m * norm_exponent)
