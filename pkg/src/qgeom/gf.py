"""Arithmetic in GF(p^e).

Elements are integers in [0, q).  The base-p digits of an element are the
coefficients of its residue polynomial, lowest degree first:
``rep = c_0 + c_1 p + ... + c_{e-1} p^{e-1}`` stands for
``c_0 + c_1 t + ... + c_{e-1} t^{e-1}`` modulo the field's irreducible
polynomial.  The modulus is the lexicographically smallest monic
irreducible of degree e (coefficients compared from degree 0 upwards), so
two fields with the same (p, e) always use the same encoding.

Hot paths work on numpy arrays of reps through :meth:`FieldSpec.add_arr`
and friends.  For q <= 4096 those are full lookup tables; larger fields use
exp/log tables of size q plus digit-wise addition.
"""

from __future__ import annotations

import itertools
from functools import cached_property, lru_cache
from typing import Sequence

import numpy as np

from .errors import DivisionByZero, FieldMismatch, NonPrime, TooLarge

MAX_ORDER = 1 << 20
TABLE_LIMIT = 4096


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, e) with q = p**e, or raise NonPrime."""
    if q < 2:
        raise NonPrime(q)
    p = next(d for d in range(2, q + 1) if q % d == 0)
    e = 0
    r = q
    while r % p == 0:
        r //= p
        e += 1
    if r != 1:
        raise NonPrime(q)
    return p, e


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# -- polynomials over F_p, coefficient lists lowest degree first ------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_rem(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    """Remainder of a modulo b over F_p (b nonzero)."""
    a = _trim([c % p for c in a])
    b = _trim([c % p for c in b])
    inv_lead = pow(b[-1], p - 2, p)
    db = len(b) - 1
    while len(a) - 1 >= db and a:
        shift = len(a) - 1 - db
        factor = a[-1] * inv_lead % p
        for i, c in enumerate(b):
            a[shift + i] = (a[shift + i] - factor * c) % p
        _trim(a)
    return a


def poly_mulmod(a: Sequence[int], b: Sequence[int], mod: Sequence[int], p: int) -> list[int]:
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    return poly_rem(prod, mod, p)


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    deg = len(_trim(list(poly))) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            if not poly_rem(poly, list(tail) + [1], p):
                return False
    return True


def smallest_irreducible(p: int, e: int) -> tuple[int, ...]:
    # product() varies the last slot fastest, so slot 0 (the constant term)
    # is the most significant key: low-degree-first lexicographic order.
    for tail in itertools.product(range(p), repeat=e):
        cand = list(tail) + [1]
        if is_irreducible(cand, p):
            return tuple(cand)
    raise AssertionError(f"no irreducible of degree {e} over F_{p}")


class FieldSpec:
    """The finite field GF(p^e) with a canonical modulus.

    Build instances with :func:`field_make`, which caches them, so
    ``field_make(p, e) is field_make(p, e)``.
    """

    def __init__(self, p: int, e: int = 1):
        if not is_prime(p):
            raise NonPrime(p)
        if e < 1 or p**e > MAX_ORDER:
            raise TooLarge((p, e))
        self.p = p
        self.e = e
        self.q = p**e
        self.modulus = smallest_irreducible(p, e)

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.e})" if self.e > 1 else f"GF({self.p})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FieldSpec) and (self.p, self.e) == (other.p, other.e)

    def __hash__(self) -> int:
        return hash((self.p, self.e))

    def __reduce__(self):
        return field_make, (self.p, self.e)

    # -- encoding --------------------------------------------------------

    def digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.e):
            a, r = divmod(a, self.p)
            out.append(r)
        return out

    def from_digits(self, coeffs: Sequence[int]) -> int:
        a = 0
        for c in reversed(list(coeffs)[: self.e]):
            a = a * self.p + c % self.p
        return a

    def element(self, rep: int) -> FieldElement:
        return FieldElement(self, int(rep))

    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, 0)

    @property
    def one(self) -> FieldElement:
        return FieldElement(self, 1)

    def elements(self) -> list[FieldElement]:
        return [FieldElement(self, a) for a in range(self.q)]

    # -- scalar arithmetic by polynomial manipulation ----------------------
    # These never touch the lookup tables; the tables are built from them.

    def poly_add(self, a: int, b: int) -> int:
        p = self.p
        return self.from_digits([(x + y) % p for x, y in zip(self.digits(a), self.digits(b))])

    def poly_neg(self, a: int) -> int:
        return self.from_digits([-x % self.p for x in self.digits(a)])

    def poly_mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return a * b % self.p
        return self.from_digits(poly_mulmod(self.digits(a), self.digits(b), self.modulus, self.p))

    def poly_pow(self, a: int, k: int) -> int:
        result, base = 1, a
        while k:
            if k & 1:
                result = self.poly_mul(result, base)
            base = self.poly_mul(base, base)
            k >>= 1
        return result

    # -- tables ------------------------------------------------------------

    @cached_property
    def primitive_element(self) -> int:
        if self.q == 2:
            return 1
        order = self.q - 1
        factors = _prime_factors(order)
        for g in range(2, self.q):
            if all(self.poly_pow(g, order // r) != 1 for r in factors):
                return g
        raise AssertionError("multiplicative group is cyclic")

    @cached_property
    def _exp_log(self) -> tuple[np.ndarray, np.ndarray]:
        order = self.q - 1
        exp = np.zeros(2 * order, dtype=np.int64)
        log = np.zeros(self.q, dtype=np.int64)
        g = self.primitive_element
        x = 1
        for i in range(order):
            exp[i] = x
            log[x] = i
            x = self.poly_mul(x, g)
        exp[order:] = exp[:order]
        return exp, log

    @cached_property
    def _digit_array(self) -> np.ndarray:
        a = np.arange(self.q, dtype=np.int64)
        return np.stack([(a // self.p**i) % self.p for i in range(self.e)], axis=-1)

    @cached_property
    def _powers(self) -> np.ndarray:
        return self.p ** np.arange(self.e, dtype=np.int64)

    @property
    def has_tables(self) -> bool:
        return self.q <= TABLE_LIMIT

    @cached_property
    def _dtype(self):
        return np.int32 if self.q <= 1024 else np.int16

    @cached_property
    def add_table(self) -> np.ndarray:
        d = self._digit_array
        s = (d[:, None, :] + d[None, :, :]) % self.p
        return (s @ self._powers).astype(self._dtype)

    @cached_property
    def sub_table(self) -> np.ndarray:
        d = self._digit_array
        s = (d[:, None, :] - d[None, :, :]) % self.p
        return (s @ self._powers).astype(self._dtype)

    @cached_property
    def mul_table(self) -> np.ndarray:
        a = np.arange(self.q)
        return self._mul_via_log(a[:, None], a[None, :]).astype(self._dtype)

    @cached_property
    def neg_table(self) -> np.ndarray:
        return ((-self._digit_array) % self.p) @ self._powers

    @cached_property
    def inv_table(self) -> np.ndarray:
        exp, log = self._exp_log
        inv = np.zeros(self.q, dtype=np.int64)
        nz = np.arange(1, self.q)
        inv[nz] = exp[(-log[nz]) % (self.q - 1)]
        return inv

    def _mul_via_log(self, a, b) -> np.ndarray:
        exp, log = self._exp_log
        a = np.asarray(a)
        b = np.asarray(b)
        out = exp[(log[a] + log[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    # -- vectorised arithmetic on numpy arrays of reps -------------------

    def add_arr(self, a, b) -> np.ndarray:
        if self.has_tables:
            return self.add_table[a, b]
        da = self._digit_array[np.asarray(a)]
        db = self._digit_array[np.asarray(b)]
        return ((da + db) % self.p) @ self._powers

    def sub_arr(self, a, b) -> np.ndarray:
        if self.has_tables:
            return self.sub_table[a, b]
        return self.add_arr(a, self.neg_table[np.asarray(b)])

    def mul_arr(self, a, b) -> np.ndarray:
        if self.has_tables:
            return self.mul_table[a, b]
        return self._mul_via_log(a, b)

    def neg_arr(self, a) -> np.ndarray:
        return self.neg_table[np.asarray(a)]

    # -- scalar arithmetic on reps -----------------------------------------

    def add(self, a: int, b: int) -> int:
        return int(self.add_arr(a, b))

    def sub(self, a: int, b: int) -> int:
        return int(self.sub_arr(a, b))

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_arr(a, b))

    def neg(self, a: int) -> int:
        return int(self.neg_table[a])

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        return int(self.inv_table[a])

    def pow(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        if a == 0:
            return 1 if k == 0 else 0
        exp, log = self._exp_log
        return int(exp[(int(log[a]) * k) % (self.q - 1)])

    def from_int(self, n: int) -> int:
        """Image of the integer n under Z -> F_p -> F_q."""
        return n % self.p

    # -- trace and the canonical additive character ------------------------

    def trace_frobenius(self, a: int) -> int:
        """Absolute trace as the literal Frobenius sum a + a^p + ... ."""
        total, x = 0, a
        for _ in range(self.e):
            total = self.poly_add(total, x)
            x = self.poly_pow(x, self.p)
        return total

    @cached_property
    def trace_table(self) -> np.ndarray:
        # Tr is F_p-linear, so Tr(sum c_i t^i) = sum c_i Tr(t^i).
        basis_traces = np.array(
            [self.trace_frobenius(self.p**i) for i in range(self.e)], dtype=np.int64
        )
        if np.any(basis_traces >= self.p):
            raise AssertionError("trace left the prime subfield")
        return (self._digit_array @ basis_traces) % self.p

    def trace(self, a: int) -> int:
        return int(self.trace_table[a])

    @property
    def char_table(self) -> np.ndarray:
        """``char_table[a]`` is j with chi(a) = exp(2 pi i j / p)."""
        return self.trace_table

    def char_exponent(self, a: int) -> int:
        return int(self.trace_table[a])


@lru_cache(maxsize=None)
def field_make(p: int, e: int = 1) -> FieldSpec:
    """Canonical GF(p^e); raises NonPrime or TooLarge."""
    return FieldSpec(p, e)


def field_of_order(q: int) -> FieldSpec:
    p, e = prime_power(q)
    return field_make(p, e)


class FieldElement:
    """A field element bound to its FieldSpec, with operator overloading.

    Integer operands are mapped into the prime subfield.
    """

    __slots__ = ("field", "rep")

    def __init__(self, field: FieldSpec, rep: int):
        if not 0 <= rep < field.q:
            raise ValueError(f"rep {rep} out of range for {field}")
        self.field = field
        self.rep = rep

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other.rep
        if isinstance(other, (int, np.integer)):
            return self.field.from_int(int(other))
        return NotImplemented

    def _wrap(self, rep: int) -> FieldElement:
        return FieldElement(self.field, rep)

    def __add__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.add(self.rep, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.sub(self.rep, b))

    def __rsub__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.sub(b, self.rep))

    def __mul__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.mul(self.rep, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        return self._wrap(self.field.mul(self.rep, self.field.inv(b)))

    def __neg__(self):
        return self._wrap(self.field.neg(self.rep))

    def __pow__(self, k: int):
        return self._wrap(self.field.pow(self.rep, k))

    def inv(self) -> FieldElement:
        return self._wrap(self.field.inv(self.rep))

    def trace(self) -> int:
        return self.field.trace(self.rep)

    def char_exponent(self) -> int:
        return self.field.char_exponent(self.rep)

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.field == other.field and self.rep == other.rep
        if isinstance(other, int):
            return self.rep == self.field.from_int(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field, self.rep))

    def __int__(self) -> int:
        return self.rep

    def __repr__(self) -> str:
        return f"{self.field}({self.rep})"


def add(a: FieldElement, b) -> FieldElement:
    return a + b


def sub(a: FieldElement, b) -> FieldElement:
    return a - b


def mul(a: FieldElement, b) -> FieldElement:
    return a * b


def inv(a: FieldElement) -> FieldElement:
    return a.inv()


def power(a: FieldElement, k: int) -> FieldElement:
    return a**k


def trace(a: FieldElement) -> int:
    return a.trace()


def char_exponent(a: FieldElement) -> int:
    return a.char_exponent()


def verify_field(field: FieldSpec, samples: int = 4000, seed: int = 0) -> list:
    """Compare the fast tables against the polynomial oracle.

    Exhaustive over all pairs when q <= 64, otherwise over ``samples``
    seeded random pairs and triples.
    """
    from .report import Check

    q, p = field.q, field.p
    prm = {"q": q, "p": p, "e": field.e}
    if q <= 64:
        a, b = (x.ravel() for x in np.meshgrid(np.arange(q), np.arange(q)))
        c = (a + b) % q
    else:
        rng = np.random.default_rng(seed)
        a, b, c = (rng.integers(0, q, samples) for _ in range(3))
    mul_ok = all(field.mul(int(x), int(y)) == field.poly_mul(int(x), int(y)) for x, y in zip(a, b))
    add_ok = all(field.add(int(x), int(y)) == field.poly_add(int(x), int(y)) for x, y in zip(a, b))
    lhs = field.mul_arr(a, field.add_arr(b, c))
    rhs = field.add_arr(field.mul_arr(a, b), field.mul_arr(a, c))
    nz = np.arange(1, q)
    inv_ok = bool(np.all(field.mul_arr(nz, field.inv_table[nz]) == 1))
    tr_pts = range(q) if q <= TABLE_LIMIT else np.random.default_rng(seed).integers(0, q, samples)
    tr_ok = all(field.trace(int(x)) == field.trace_frobenius(int(x)) for x in tr_pts)
    hits = np.bincount(field.trace_table, minlength=p)
    return [
        Check("gf.modulus_irreducible", "field-construction", is_irreducible(field.modulus, p),
              list(field.modulus), None, params=prm),
        Check("gf.mul_oracle", "field-arithmetic", mul_ok, len(a), None, params=prm),
        Check("gf.add_oracle", "field-arithmetic", add_ok, len(a), None, params=prm),
        Check("gf.distributive", "field-arithmetic", bool(np.array_equal(lhs, rhs)), len(a), None, params=prm),
        Check("gf.inverses", "field-arithmetic", inv_ok, q - 1, None, params=prm),
        Check("gf.trace_oracle", "trace", tr_ok, None, None, params=prm),
        Check("gf.trace_balanced", "character-orthogonality", bool(np.all(hits == q // p)),
              [int(h) for h in hits], q // p, params=prm),
    ]
