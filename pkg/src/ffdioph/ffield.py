"""Arithmetic in the finite field with k = p^l elements.

Elements are represented in the polynomial basis: the residue
c_0 + c_1 t + ... + c_{l-1} t^{l-1} modulo a monic irreducible degree-l
polynomial over F_p is encoded as the integer c_0 + c_1 p + ... +
c_{l-1} p^{l-1}.  The encodings 0 and 1 are always the additive and
multiplicative identities.

Two layers are provided.  ``FieldSpec`` owns the construction data and
exposes arithmetic directly on integer encodings (``add``, ``mul``,
``inv``, ...); this is what the inner loops use.  ``FieldElement`` is a
thin immutable wrapper with operator overloading for code that prefers
typed values.  Elements of distinct specs never mix: every binary
operation checks the spec and raises ``FieldMismatchError`` otherwise.

For small fields (k <= 2**16) a discrete-log table over a generator is
built lazily and used to speed up multiplication and inversion; the
schoolbook polynomial-basis routines remain the defining semantics.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple

_LOG_TABLE_MAX_K = 1 << 16


class FieldError(ValueError):
    """Invalid field construction data."""


class FieldMismatchError(ValueError):
    """Operands belong to different field specs."""


def is_prime(n: int) -> bool:
    """Deterministic trial-division primality test (small n only)."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _fp_poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> List[int]:
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    while out and out[-1] == 0:
        out.pop()
    return out


def _fp_poly_mod(a: Sequence[int], m: Sequence[int], p: int) -> List[int]:
    # m monic
    a = list(a)
    dm = len(m) - 1
    while len(a) - 1 >= dm and a:
        lead = a[-1]
        if lead:
            shift = len(a) - 1 - dm
            for i, mi in enumerate(m):
                a[shift + i] = (a[shift + i] - lead * mi) % p
        while a and a[-1] == 0:
            a.pop()
    return a


def _fp_is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    d = len(poly) - 1
    if d < 1:
        return False
    for e in range(1, d // 2 + 1):
        for idx in range(p**e):
            div, rem = [], idx
            for _ in range(e):
                div.append(rem % p)
                rem //= p
            div.append(1)  # monic of degree e
            if not _fp_poly_mod(poly, div, p):
                return False
    return True


def default_modulus(p: int, l: int) -> List[int]:
    """First monic irreducible of degree l over F_p in base-p encoding order."""
    if l == 1:
        return [0, 1]
    for idx in range(p**l):
        poly, rem = [], idx
        for _ in range(l):
            poly.append(rem % p)
            rem //= p
        poly.append(1)
        if _fp_is_irreducible(poly, p):
            return poly
    raise FieldError(f"no irreducible of degree {l} over F_{p}")  # unreachable


class FieldSpec:
    """Construction data for F_{p^l} plus arithmetic on integer encodings."""

    __slots__ = ("p", "l", "k", "modulus", "_exp", "_log", "_tables_built")

    def __init__(self, p: int, l: int = 1, modulus: Optional[Sequence[int]] = None):
        if not is_prime(p):
            raise FieldError(f"p = {p} is not prime")
        if l < 1:
            raise FieldError("extension degree must be >= 1")
        if modulus is None:
            modulus = default_modulus(p, l)
        modulus = [int(c) % p for c in modulus]
        if len(modulus) != l + 1 or modulus[-1] != 1:
            raise FieldError("modulus must be monic of degree l")
        if l > 1 and not _fp_is_irreducible(modulus, p):
            raise FieldError("modulus is reducible")
        self.p = p
        self.l = l
        self.k = p**l
        self.modulus = tuple(modulus)
        self._exp: Optional[List[int]] = None
        self._log: Optional[List[int]] = None
        self._tables_built = False

    # -- encoding helpers --------------------------------------------------

    def _digits(self, a: int) -> List[int]:
        out = []
        while a:
            out.append(a % self.p)
            a //= self.p
        return out

    def _undigits(self, ds: Sequence[int]) -> int:
        out = 0
        for d in reversed(ds):
            out = out * self.p + d
        return out

    # -- arithmetic on encodings -------------------------------------------

    def add(self, a: int, b: int) -> int:
        p = self.p
        if p == 2:
            return a ^ b
        if self.l == 1:
            return (a + b) % p
        da, db = self._digits(a), self._digits(b)
        if len(da) < len(db):
            da, db = db, da
        for i, d in enumerate(db):
            da[i] = (da[i] + d) % p
        return self._undigits(da)

    def neg(self, a: int) -> int:
        p = self.p
        if p == 2:
            return a
        if self.l == 1:
            return (-a) % p
        return self._undigits([(-d) % p for d in self._digits(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def _mul_schoolbook(self, a: int, b: int) -> int:
        if self.l == 1:
            return (a * b) % self.p
        prod = _fp_poly_mul(self._digits(a), self._digits(b), self.p)
        return self._undigits(_fp_poly_mod(prod, self.modulus, self.p))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if a == 1:
            return b
        if b == 1:
            return a
        if self.k <= _LOG_TABLE_MAX_K:
            self._build_tables()
            assert self._exp is not None and self._log is not None
            return self._exp[(self._log[a] + self._log[b]) % (self.k - 1)]
        return self._mul_schoolbook(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero field element")
        if a == 1:
            return 1
        if self.k <= _LOG_TABLE_MAX_K:
            self._build_tables()
            assert self._exp is not None and self._log is not None
            return self._exp[(self.k - 1 - self._log[a]) % (self.k - 1)]
        return self.pow(a, self.k - 2)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        r = 1
        while e:
            if e & 1:
                r = self._mul_schoolbook(r, a)
            a = self._mul_schoolbook(a, a)
            e >>= 1
        return r

    def _build_tables(self) -> None:
        if self._tables_built:
            return
        k = self.k
        # find a generator of the multiplicative group
        order = k - 1
        prime_factors = []
        m = order
        f = 2
        while f * f <= m:
            if m % f == 0:
                prime_factors.append(f)
                while m % f == 0:
                    m //= f
            f += 1
        if m > 1:
            prime_factors.append(m)
        g = None
        for cand in range(2, k):
            if all(self.pow(cand, order // q) != 1 for q in prime_factors):
                g = cand
                break
        if g is None:  # k == 2
            g = 1
        exp = [1] * order
        log = [0] * k
        acc = 1
        for i in range(order):
            exp[i] = acc
            log[acc] = i
            acc = self._mul_schoolbook(acc, g)
        self._exp, self._log = exp, log
        self._tables_built = True

    # -- element layer -----------------------------------------------------

    def element(self, rep: int) -> "FieldElement":
        if not 0 <= rep < self.k:
            raise FieldError(f"encoding {rep} out of range for k = {self.k}")
        return FieldElement(rep, self)

    def zero(self) -> "FieldElement":
        return FieldElement(0, self)

    def one(self) -> "FieldElement":
        return FieldElement(1, self)

    def elements(self) -> Iterator["FieldElement"]:
        """All k elements; deterministic order, 0 then 1 then the rest."""
        for rep in range(self.k):
            yield FieldElement(rep, self)

    # -- identity / serialization -------------------------------------------

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FieldSpec)
            and self.p == other.p
            and self.l == other.l
            and self.modulus == other.modulus
        )

    def __hash__(self) -> int:
        return hash((self.p, self.l, self.modulus))

    def __repr__(self) -> str:
        return f"FieldSpec(p={self.p}, l={self.l}, k={self.k})"

    def to_config(self) -> dict:
        return {"p": self.p, "l": self.l, "modulus": list(self.modulus)}

    @classmethod
    def from_config(cls, cfg: dict) -> "FieldSpec":
        return cls(int(cfg["p"]), int(cfg.get("l", 1)), cfg.get("modulus"))


@dataclass(frozen=True)
class FieldElement:
    """Immutable element of a ``FieldSpec``, encoding in [0, k)."""

    rep: int
    spec: FieldSpec

    def _check(self, other: "FieldElement") -> None:
        if self.spec != other.spec:
            raise FieldMismatchError(
                f"cannot combine elements of {self.spec} and {other.spec}"
            )

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.spec.add(self.rep, other.rep), self.spec)

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.spec.sub(self.rep, other.rep), self.spec)

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.spec.neg(self.rep), self.spec)

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.spec.mul(self.rep, other.rep), self.spec)

    def inverse(self) -> "FieldElement":
        return FieldElement(self.spec.inv(self.rep), self.spec)

    def __truediv__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return self * other.inverse()

    def __pow__(self, e: int) -> "FieldElement":
        return FieldElement(self.spec.pow(self.rep, e), self.spec)

    def __bool__(self) -> bool:
        return self.rep != 0

    def __repr__(self) -> str:
        return f"<{self.rep} in GF({self.spec.k})>"


def field_add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def field_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def field_inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def enumerate_field(spec: FieldSpec) -> Tuple[FieldElement, ...]:
    return tuple(spec.elements())
