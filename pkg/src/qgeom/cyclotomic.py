"""Exact integers of Q(zeta_p) for prime p.

An element sum_j c_j zeta^j is stored as p integer coefficients.  The only
relation among p-th roots of unity is 1 + zeta + ... + zeta^(p-1) = 0, so
subtracting c_{p-1} from every coefficient gives a unique form with the
last coefficient zero.  The element is a rational integer exactly when the
canonical coefficients 1 .. p-2 all vanish.
"""

from __future__ import annotations

import cmath
from typing import Iterable

import numpy as np

from .errors import ExactnessViolation


class CyclotomicInt:
    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs: Iterable[int]):
        c = [int(x) for x in coeffs]
        if len(c) != p:
            raise ValueError(f"need {p} coefficients, got {len(c)}")
        top = c[-1]
        self.p = p
        self.coeffs = tuple(x - top for x in c)

    @classmethod
    def from_int(cls, p: int, n: int) -> CyclotomicInt:
        return cls(p, [n] + [0] * (p - 1))

    @classmethod
    def from_exponents(cls, p: int, exponents) -> CyclotomicInt:
        """Sum of zeta^j over the given exponent multiset."""
        counts = np.bincount(np.asarray(exponents, dtype=np.int64).ravel() % p, minlength=p)
        return cls(p, counts)

    def _other(self, other) -> CyclotomicInt:
        if isinstance(other, CyclotomicInt):
            if other.p != self.p:
                raise ValueError("mixing different cyclotomic rings")
            return other
        if isinstance(other, (int, np.integer)):
            return CyclotomicInt.from_int(self.p, int(other))
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return CyclotomicInt(self.p, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicInt(self.p, [-a for a in self.coeffs])

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        p = self.p
        out = [0] * p
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    out[(i + j) % p] += a * b
        return CyclotomicInt(p, out)

    __rmul__ = __mul__

    def conj(self) -> CyclotomicInt:
        """Complex conjugate: zeta^j -> zeta^(-j)."""
        p = self.p
        return CyclotomicInt(p, [self.coeffs[(-j) % p] for j in range(p)])

    def norm_sq(self) -> CyclotomicInt:
        return self * self.conj()

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def to_int(self) -> int:
        if not self.is_rational():
            raise ExactnessViolation(f"{self!r} is not a rational integer")
        return self.coeffs[0]

    def evaluate(self) -> complex:
        z = cmath.exp(2j * cmath.pi / self.p)
        return sum(c * z**j for j, c in enumerate(self.coeffs))

    def __eq__(self, other) -> bool:
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self) -> int:
        return hash((self.p, self.coeffs))

    def __repr__(self) -> str:
        return f"CyclotomicInt(p={self.p}, {list(self.coeffs)})"


# -- the same operations on coefficient matrices, one element per row -------

def canonicalize(C: np.ndarray) -> np.ndarray:
    C = np.asarray(C)
    return C - C[:, -1:]


def rows_rational(C: np.ndarray) -> np.ndarray:
    """Boolean mask of rows that are rational integers."""
    C = canonicalize(C)
    return ~np.any(C[:, 1:-1] != 0, axis=1) if C.shape[1] > 2 else np.ones(len(C), dtype=bool)


def sum_norm_sq(C: np.ndarray) -> CyclotomicInt:
    """sum over rows of F * conj(F), as a single CyclotomicInt.

    The coefficient of zeta^t is sum_rows sum_j C[j] C[j - t].
    """
    C = np.asarray(C)
    p = C.shape[1]
    if C.dtype != object and C.size:
        bound = int(np.abs(C).max()) ** 2 * C.shape[0] * p
        if bound >= 2**62:
            C = C.astype(object)
    out = [int((C * np.roll(C, t, axis=1)).sum()) for t in range(p)]
    return CyclotomicInt(p, out)


def evaluate_rows(C: np.ndarray) -> np.ndarray:
    p = C.shape[1]
    zeta = np.exp(2j * np.pi * np.arange(p) / p)
    return np.asarray(C, dtype=np.float64) @ zeta


def rows_norm_sq(C: np.ndarray) -> np.ndarray:
    """Canonical coefficients of F * conj(F) for each row.

    These are real but not rational in general; sums over subspaces of
    frequencies are, so callers reduce first and convert afterwards.
    """
    C = np.asarray(C)
    p = C.shape[1]
    if C.dtype != object and C.size and int(np.abs(C).max()) ** 2 * p >= 2**62:
        C = C.astype(object)
    N = np.stack([(C * np.roll(C, t, axis=1)).sum(axis=1) for t in range(p)], axis=1)
    return N - N[:, -1:]
