"""Vectors, subspaces and affine planes in F_q^n, plus Gaussian binomials.

A vector is a tuple of field reps.  Point sets and bulk computations use
numpy arrays of shape (N, n).  The integer *index* of a point treats its
coordinates as base-q digits with coordinate 0 most significant, so index
order is lexicographic order.

Subspaces are stored in reduced row echelon form, which makes equality and
hashing structural.  The canonical representative of a coset x + U is its
lexicographically smallest member: reducing x against the RREF rows so that
every pivot coordinate becomes 0.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import BadRange, DimensionMismatch
from .gf import FieldSpec

Vector = tuple[int, ...]


# -- point encoding ----------------------------------------------------------

def encode(points: np.ndarray, q: int) -> np.ndarray:
    """Index of each row of ``points`` (coordinate 0 most significant)."""
    pts = np.asarray(points, dtype=np.int64)
    n = pts.shape[-1]
    weights = q ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return pts @ weights


def decode(indices, q: int, n: int) -> np.ndarray:
    idx = np.asarray(indices, dtype=np.int64)
    weights = q ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return (idx[..., None] // weights) % q


@lru_cache(maxsize=32)
def all_points(q: int, n: int) -> np.ndarray:
    """Every vector of F_q^n as a (q^n, n) array, in index order."""
    out = decode(np.arange(q**n), q, n)
    out.setflags(write=False)
    return out


def dot(field: FieldSpec, a: Sequence[int], b: Sequence[int]) -> int:
    if len(a) != len(b):
        raise DimensionMismatch(f"{len(a)} != {len(b)}")
    acc = 0
    for x, y in zip(a, b):
        acc = field.add(acc, field.mul(x, y))
    return acc


def dot_arr(field: FieldSpec, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Dot products of every row of A with every row of B, shape (|A|, |B|)."""
    A = np.asarray(A)
    B = np.asarray(B)
    if A.shape[-1] != B.shape[-1]:
        raise DimensionMismatch(f"{A.shape[-1]} != {B.shape[-1]}")
    if field.e == 1 and A.shape[-1] * (field.p - 1) ** 2 < 2**62:
        # prime field: integer products summed exactly, reduced once
        return (A.astype(np.int64) @ B.astype(np.int64).T) % field.p
    acc = np.zeros((A.shape[0], B.shape[0]), dtype=np.int64)
    for j in range(A.shape[-1]):
        acc = field.add_arr(acc, field.mul_arr(A[:, j, None], B[None, :, j]))
    return np.asarray(acc, dtype=np.int64)


def combine(field: FieldSpec, coeffs: np.ndarray, rows: np.ndarray) -> np.ndarray:
    """Linear combinations ``coeffs @ rows`` over the field.

    coeffs has shape (M, k) and rows shape (k, n); returns (M, n).
    """
    coeffs = np.asarray(coeffs)
    rows = np.asarray(rows)
    out = np.zeros((coeffs.shape[0], rows.shape[1]), dtype=np.int64)
    for i in range(rows.shape[0]):
        out = field.add_arr(out, field.mul_arr(coeffs[:, i, None], rows[None, i, :]))
    return np.asarray(out, dtype=np.int64)


# -- row reduction -------------------------------------------------------------

def rref(field: FieldSpec, rows: Iterable[Sequence[int]], n: int) -> tuple[tuple[Vector, ...], tuple[int, ...]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    M = [list(r) for r in rows]
    for r in M:
        if len(r) != n:
            raise DimensionMismatch(f"row of length {len(r)} in F_q^{n}")
    pivots: list[int] = []
    top = 0
    for col in range(n):
        pick = next((i for i in range(top, len(M)) if M[i][col]), None)
        if pick is None:
            continue
        M[top], M[pick] = M[pick], M[top]
        scale = field.inv(M[top][col])
        M[top] = [field.mul(scale, x) for x in M[top]]
        for i in range(len(M)):
            if i != top and M[i][col]:
                f = M[i][col]
                M[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(M[i], M[top])]
        pivots.append(col)
        top += 1
        if top == len(M):
            break
    return tuple(tuple(r) for r in M[:top]), tuple(pivots)


@dataclass(frozen=True)
class Subspace:
    """A linear subspace of F_q^n held in reduced row echelon form.

    Construct through :func:`span` (or :meth:`Subspace.from_rref` when the
    rows are already canonical).
    """

    field: FieldSpec
    n: int
    basis: tuple[Vector, ...]

    @classmethod
    def from_rref(cls, field: FieldSpec, n: int, basis) -> Subspace:
        return cls(field, n, tuple(tuple(int(x) for x in r) for r in basis))

    @property
    def k(self) -> int:
        return len(self.basis)

    dim = k

    def __repr__(self) -> str:
        return f"Subspace(q={self.field.q}, n={self.n}, basis={list(self.basis)})"

    def sort_key(self) -> tuple:
        return (self.k, self.pivots, self.basis)

    @cached_property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(j for j, x in enumerate(r) if x) for r in self.basis)

    @cached_property
    def free_columns(self) -> tuple[int, ...]:
        piv = set(self.pivots)
        return tuple(j for j in range(self.n) if j not in piv)

    @cached_property
    def matrix(self) -> np.ndarray:
        return np.array(self.basis, dtype=np.int64).reshape(self.k, self.n)

    @property
    def size(self) -> int:
        return self.field.q**self.k

    def points(self) -> np.ndarray:
        """All q^k members, as a (q^k, n) array."""
        coeffs = all_points(self.field.q, self.k) if self.k else np.zeros((1, 0), dtype=np.int64)
        return combine(self.field, coeffs, self.matrix)

    def reduce(self, X: np.ndarray) -> np.ndarray:
        """Canonical coset representative of each row of X modulo this subspace."""
        X = np.asarray(X, dtype=np.int64)
        out = X.copy()
        f = self.field
        for row, piv in zip(self.matrix, self.pivots):
            c = out[:, piv].copy()
            out = np.asarray(f.sub_arr(out, f.mul_arr(c[:, None], row[None, :])), dtype=np.int64)
        return out

    def coset_ids(self, X: np.ndarray) -> np.ndarray:
        """Compact coset label in [0, q^(n-k)) for each row of X.

        The label is the index of the representative's free coordinates, so
        ordering by label is the same as ordering by representative.
        """
        reps = self.reduce(X)
        free = list(self.free_columns)
        if not free:
            return np.zeros(len(reps), dtype=np.int64)
        return encode(reps[:, free], self.field.q)

    def contains(self, x: Sequence[int]) -> bool:
        return not np.any(self.reduce(np.array([x]))[0])

    def __contains__(self, x) -> bool:
        return self.contains(x)

    def contains_subspace(self, other: Subspace) -> bool:
        if other.k == 0:
            return True
        return not np.any(self.reduce(other.matrix))

    @cached_property
    def _perp(self) -> Subspace:
        return orth_complement(self)

    def perp(self) -> Subspace:
        return self._perp


def span(field: FieldSpec, vectors: Iterable[Sequence[int]], n: int | None = None) -> Subspace:
    vectors = [tuple(int(x) for x in v) for v in vectors]
    if n is None:
        if not vectors:
            raise DimensionMismatch("span() of no vectors needs the ambient dimension n")
        n = len(vectors[0])
    rows, _ = rref(field, vectors, n)
    return Subspace(field, n, rows)


def zero_subspace(field: FieldSpec, n: int) -> Subspace:
    return Subspace(field, n, ())


def full_space(field: FieldSpec, n: int) -> Subspace:
    return Subspace(field, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))


def orth_complement(S: Subspace) -> Subspace:
    """{y : y . x = 0 for all x in S} under the plain bilinear dot product."""
    f = S.field
    vecs = []
    for c in S.free_columns:
        v = [0] * S.n
        v[c] = 1
        for row, piv in zip(S.basis, S.pivots):
            v[piv] = f.neg(row[c])
        vecs.append(v)
    return span(f, vecs, S.n)


# -- enumeration ---------------------------------------------------------------

def enumerate_grassmannian(k: int, n: int, field: FieldSpec) -> Iterator[Subspace]:
    """Every k-dimensional subspace of F_q^n exactly once.

    Ordered by pivot-column set (lexicographic), then by the free entries of
    the RREF matrix read row by row.
    """
    if not 0 <= k <= n:
        raise BadRange((k, n))
    q = field.q
    for pivots in itertools.combinations(range(n), k):
        pset = set(pivots)
        slots = [(i, j) for i, p in enumerate(pivots) for j in range(p + 1, n) if j not in pset]
        for values in itertools.product(range(q), repeat=len(slots)):
            M = [[0] * n for _ in range(k)]
            for i, p in enumerate(pivots):
                M[i][p] = 1
            for (i, j), v in zip(slots, values):
                M[i][j] = v
            yield Subspace(field, n, tuple(tuple(r) for r in M))


@lru_cache(maxsize=64)
def grassmannian(k: int, n: int, field: FieldSpec) -> tuple[Subspace, ...]:
    """Cached tuple version of :func:`enumerate_grassmannian`."""
    return tuple(enumerate_grassmannian(k, n, field))


def all_subspaces(n: int, field: FieldSpec) -> Iterator[Subspace]:
    for k in range(n + 1):
        yield from grassmannian(k, n, field)


@dataclass(frozen=True)
class AffinePlane:
    """The coset rep + direction, with rep the lexicographic minimum."""

    direction: Subspace
    rep: Vector

    @classmethod
    def through(cls, x: Sequence[int], direction: Subspace) -> AffinePlane:
        rep = direction.reduce(np.array([x]))[0]
        return cls(direction, tuple(int(v) for v in rep))

    @property
    def k(self) -> int:
        return self.direction.k

    def points(self) -> np.ndarray:
        f = self.direction.field
        return np.asarray(f.add_arr(self.direction.points(), np.array(self.rep)[None, :]), dtype=np.int64)

    def contains(self, x: Sequence[int]) -> bool:
        rep = self.direction.reduce(np.array([x]))[0]
        return tuple(int(v) for v in rep) == self.rep

    def __contains__(self, x) -> bool:
        return self.contains(x)

    def sort_key(self) -> tuple:
        return (self.direction.sort_key(), self.rep)


def coset_reps(U: Subspace) -> np.ndarray:
    """The q^(n-k) canonical coset representatives of U, lexicographically."""
    free = list(U.free_columns)
    q = U.field.q
    reps = np.zeros((q ** len(free), U.n), dtype=np.int64)
    if free:
        reps[:, free] = all_points(q, len(free))
    return reps


def enumerate_cosets(U: Subspace) -> Iterator[AffinePlane]:
    for rep in coset_reps(U):
        yield AffinePlane(U, tuple(int(v) for v in rep))


def enumerate_affine(k: int, n: int, field: FieldSpec) -> Iterator[AffinePlane]:
    """Every affine k-plane of F_q^n exactly once."""
    for V in enumerate_grassmannian(k, n, field):
        yield from enumerate_cosets(V)


# -- point sets ----------------------------------------------------------------

class PointSet:
    """A finite subset of F_q^n.

    Points are kept as a sorted array of indices; ``array`` gives the
    coordinates in the same order.
    """

    def __init__(self, field: FieldSpec, n: int, points: Iterable[Sequence[int]] = ()):
        pts = [tuple(int(x) for x in p) for p in points]
        for p in pts:
            if len(p) != n:
                raise DimensionMismatch(f"point {p} not in F_q^{n}")
            if any(not 0 <= x < field.q for x in p):
                raise ValueError(f"point {p} has entries outside [0, {field.q})")
        self.field = field
        self.n = n
        arr = np.array(pts, dtype=np.int64).reshape(len(pts), n)
        self.indices = np.unique(encode(arr, field.q)) if len(pts) else np.zeros(0, dtype=np.int64)

    @classmethod
    def from_indices(cls, field: FieldSpec, n: int, indices) -> PointSet:
        obj = cls(field, n)
        idx = np.unique(np.asarray(indices, dtype=np.int64))
        if idx.size and (idx[0] < 0 or idx[-1] >= field.q**n):
            raise ValueError("point index out of range")
        obj.indices = idx
        return obj

    @classmethod
    def from_array(cls, field: FieldSpec, n: int, arr) -> PointSet:
        arr = np.asarray(arr, dtype=np.int64).reshape(-1, n)
        return cls.from_indices(field, n, encode(arr, field.q))

    @classmethod
    def whole_space(cls, field: FieldSpec, n: int) -> PointSet:
        return cls.from_indices(field, n, np.arange(field.q**n))

    @property
    def q(self) -> int:
        return self.field.q

    @cached_property
    def array(self) -> np.ndarray:
        return decode(self.indices, self.field.q, self.n)

    def __len__(self) -> int:
        return int(self.indices.size)

    def __iter__(self) -> Iterator[Vector]:
        for row in self.array:
            yield tuple(int(x) for x in row)

    def __contains__(self, x) -> bool:
        i = int(encode(np.array([x]), self.field.q)[0])
        j = np.searchsorted(self.indices, i)
        return bool(j < len(self.indices) and self.indices[j] == i)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PointSet)
            and self.field == other.field
            and self.n == other.n
            and np.array_equal(self.indices, other.indices)
        )

    def __hash__(self) -> int:
        return hash((self.field, self.n, self.indices.tobytes()))

    def __repr__(self) -> str:
        return f"PointSet(q={self.field.q}, n={self.n}, size={len(self)})"

    def mask(self) -> np.ndarray:
        m = np.zeros(self.field.q**self.n, dtype=bool)
        m[self.indices] = True
        return m

    def translate(self, t: Sequence[int]) -> PointSet:
        moved = self.field.add_arr(self.array, np.asarray(t, dtype=np.int64)[None, :])
        return PointSet.from_array(self.field, self.n, moved)

    def complement(self) -> PointSet:
        return PointSet.from_indices(self.field, self.n, np.flatnonzero(~self.mask()))


# -- Gaussian binomial coefficients ---------------------------------------------

def gaussian_binomial(n: int, k: int, q: int) -> int:
    """(n choose k)_q by the defining product; 0 when k > n or k < 0."""
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q**n - q**i
        den *= q**k - q**i
    value, rem = divmod(num, den)
    assert rem == 0
    return value


def count_independent_tuples(k: int, n: int, field: FieldSpec) -> int:
    """Brute-force count of linearly independent k-tuples in F_q^n."""
    pts = [tuple(int(x) for x in p) for p in all_points(field.q, n)]
    count = 0
    for tup in itertools.product(pts, repeat=k):
        if span(field, tup, n).k == k:
            count += 1
    return count


def verify_gbc_identities(n_max: int, q: int, enum_limit: int = 20_000) -> list:
    """Check the Gaussian binomial identities for all 0 <= k <= n <= n_max.

    Pascal, symmetry and the sandwich bound are checked exactly for every
    pair.  The subspace-counting statements are checked by enumerating
    G(k, n) when q^n <= 10^5 and the Grassmannian has at most
    ``enum_limit`` members.  Returns a list of :class:`~qgeom.report.Check`.
    """
    from .gf import field_of_order
    from .report import Check

    checks: list[Check] = []
    for n in range(n_max + 1):
        for k in range(n + 1):
            g = gaussian_binomial(n, k, q)
            lo = q ** (k * (n - k))
            checks.append(Check("gbc.sandwich", "gbc-sandwich", lo <= g <= 4 * lo, g, 4 * lo,
                                Fraction(g, lo), params={"n": n, "k": k}))
            checks.append(Check("gbc.symmetry", "gbc-symmetry", g == gaussian_binomial(n, n - k, q),
                                g, gaussian_binomial(n, n - k, q), 1, params={"n": n, "k": k}))
            if k >= 1:
                rhs = gaussian_binomial(n - 1, k, q) + q ** (n - k) * gaussian_binomial(n - 1, k - 1, q)
                checks.append(Check("gbc.pascal", "gbc-pascal", g == rhs, g, rhs, 1,
                                    params={"n": n, "k": k}))
            checks.append(Check("gbc.asymptotic_ratio", "gbc-asymptotics", None, g, lo,
                                Fraction(g, lo), params={"n": n, "k": k}))

    field = field_of_order(q)
    for n in range(1, n_max + 1):
        if q**n > 10**5:
            break
        z = tuple([1] + [0] * (n - 1))
        z2 = tuple([0] * (n - 1) + [1])
        zline = span(field, [z], n)
        hyper = orth_complement(zline)
        for k in range(n + 1):
            if gaussian_binomial(n, k, q) > enum_limit:
                continue
            subs = grassmannian(k, n, field)
            checks.append(Check("gbc.count_grassmannian", "gbc-size", len(subs) == gaussian_binomial(n, k, q),
                                len(subs), gaussian_binomial(n, k, q), 1, params={"n": n, "k": k}))
            for zz in {z, z2}:
                if k >= 1:
                    cnt = sum(1 for V in subs if V.contains(zz))
                    exp = gaussian_binomial(n - 1, k - 1, q)
                    checks.append(Check("gbc.containing_z", "gbc-contains-z", cnt == exp, cnt, exp, 1,
                                        params={"n": n, "k": k, "z": list(zz)}))
                perps = [V for V in subs if V.perp().contains(zz)]
                exp = gaussian_binomial(n - 1, k, q)
                checks.append(Check("gbc.z_in_perp", "gbc-perp-contains-z", len(perps) == exp, len(perps), exp, 1,
                                    params={"n": n, "k": k, "z": list(zz)}))
            # {V : z in V-perp} is exactly {V : V inside span(z)-perp}
            inside = {V for V in subs if hyper.contains_subspace(V)}
            perp_set = {V for V in subs if V.perp().contains(z)}
            checks.append(Check("gbc.perp_equivalence", "gbc-perp-contains-z", inside == perp_set,
                                len(inside), len(perp_set), 1, params={"n": n, "k": k}))
    return checks
