"""Fourier analysis on F_q^n with the trace character chi(a) = zeta_p^Tr(a).

Two arithmetic modes:

* ``exact``: the unnormalised transform F(m) = sum_x f(x) chi(-m.x) as an
  element of Z[zeta_p] (rows of a coefficient matrix, canonical form).
* ``float``: the normalised transform q^-n F(m) as complex doubles,
  computed straight from the character values rather than from the exact
  coefficients, so the two modes check each other.

The transform is the naive O(q^2n) sum, evaluated in row blocks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .cyclotomic import CyclotomicInt, canonicalize, evaluate_rows, sum_norm_sq
from .errors import BadExponent, DimensionMismatch, EmptySet, ExactnessViolation, SingletonSet
from .gf import FieldSpec
from .report import Check, safe_ratio
from .vecspace import PointSet, Subspace, all_points, dot_arr, encode

FLOAT_RTOL = 1e-9
MULTISET_TOL = 1e-12
_BLOCK_ELEMS = 1 << 21


class FunctionTable:
    """A function F_q^n -> Z (or C), stored densely in point-index order."""

    def __init__(self, field: FieldSpec, n: int, values):
        values = np.asarray(values)
        if values.shape != (field.q**n,):
            raise DimensionMismatch(f"expected {field.q**n} values, got {values.shape}")
        self.field = field
        self.n = n
        self.values = values

    @classmethod
    def indicator(cls, E: PointSet) -> FunctionTable:
        return cls(E.field, E.n, E.mask().astype(np.int64))

    @classmethod
    def from_mapping(cls, field: FieldSpec, n: int, mapping: dict) -> FunctionTable:
        """Sparse constructor: points absent from ``mapping`` map to 0."""
        vals = np.zeros(field.q**n, dtype=np.int64)
        if mapping:
            keys = encode(np.array(list(mapping.keys())), field.q)
            vals[keys] = list(mapping.values())
        return cls(field, n, vals)

    @classmethod
    def random_integer(cls, field: FieldSpec, n: int, rng: np.random.Generator,
                       low: int = -2, high: int = 2) -> FunctionTable:
        return cls(field, n, rng.integers(low, high + 1, size=field.q**n, dtype=np.int64))

    @property
    def is_integer(self) -> bool:
        return self.values.dtype.kind in "iu" or self.values.dtype == object

    def total(self):
        return int(self.values.sum()) if self.is_integer else complex(self.values.sum())

    def sum_sq(self):
        if self.is_integer:
            return int((self.values.astype(object) ** 2).sum())
        return float(np.sum(np.abs(self.values) ** 2))

    def __getitem__(self, x: Sequence[int]):
        return self.values[int(encode(np.array([x]), self.field.q)[0])]


def as_table(obj) -> FunctionTable:
    if isinstance(obj, FunctionTable):
        return obj
    if isinstance(obj, PointSet):
        return FunctionTable.indicator(obj)
    raise TypeError(f"expected PointSet or FunctionTable, got {type(obj).__name__}")


@lru_cache(maxsize=64)
def _char_lookup(field: FieldSpec, scale: int) -> np.ndarray:
    """t -> exponent of chi(-scale * t)."""
    t = np.arange(field.q)
    return field.char_table[field.mul_arr(scale, field.neg_arr(t))].astype(np.int64)


def exponent_rows(field: FieldSpec, n: int, freq_idx: np.ndarray, scale: int = 1) -> np.ndarray:
    """Exponents j with chi_scale(-m.x) = zeta^j, for the given frequencies m
    (rows) and every x (columns)."""
    X = all_points(field.q, n)
    M = X[np.asarray(freq_idx, dtype=np.int64)]
    return _char_lookup(field, scale)[dot_arr(field, M, X)]


def _blocks(N: int):
    step = max(1, _BLOCK_ELEMS // max(N, 1))
    for start in range(0, N, step):
        yield np.arange(start, min(N, start + step))


@dataclass
class Spectrum:
    """Fourier transform of a function on F_q^n.

    ``data`` is an (q^n, p) integer matrix of canonical coefficients of
    q^n f^(m) in exact mode, or a length q^n complex vector of f^(m) in
    float mode.  Rows are in frequency-index order.
    """

    field: FieldSpec
    n: int
    mode: str
    data: np.ndarray

    @property
    def N(self) -> int:
        return self.field.q**self.n

    def __getitem__(self, m: Sequence[int]):
        i = int(encode(np.array([m]), self.field.q)[0])
        if self.mode == "exact":
            return CyclotomicInt(self.field.p, self.data[i])
        return complex(self.data[i])

    def normalized(self) -> np.ndarray:
        """f^(m) as complex numbers, whatever the mode."""
        if self.mode == "float":
            return self.data
        return evaluate_rows(self.data) / self.N

    def moduli(self) -> np.ndarray:
        return np.abs(self.normalized())


def fourier(f, mode: str = "exact", char_scale: int = 1) -> Spectrum:
    """Transform of a FunctionTable (or indicator of a PointSet).

    ``char_scale`` a != 0 swaps chi for the character x -> chi(a x).
    """
    f = as_table(f)
    field, n = f.field, f.n
    N = field.q**n
    p = field.p
    if mode == "exact":
        if not f.is_integer:
            raise TypeError("exact mode needs an integer-valued function")
        vals = f.values
        use_float_bins = vals.dtype != object and int(np.abs(vals).sum()) < 2**52
        out = np.zeros((N, p), dtype=np.int64 if use_float_bins else object)
        for rows in _blocks(N):
            expo = exponent_rows(field, n, rows, char_scale)
            if use_float_bins:
                flat = (expo + (np.arange(len(rows)) * p)[:, None]).ravel()
                w = np.broadcast_to(vals.astype(np.float64), expo.shape).ravel()
                binned = np.bincount(flat, weights=w, minlength=len(rows) * p)
                out[rows] = np.rint(binned).astype(np.int64).reshape(len(rows), p)
            else:
                obj = vals.astype(object)
                for j in range(p):
                    out[rows, j] = ((expo == j).astype(object) @ obj)
        return Spectrum(field, n, "exact", canonicalize(out))
    if mode == "float":
        zeta = np.exp(2j * np.pi * np.arange(p) / p)
        vals = f.values.astype(np.complex128)
        out = np.zeros(N, dtype=np.complex128)
        for rows in _blocks(N):
            out[rows] = zeta[exponent_rows(field, n, rows, char_scale)] @ vals
        return Spectrum(field, n, "float", out / N)
    raise ValueError(f"unknown mode {mode!r}")


# -- Plancherel ---------------------------------------------------------------

def _exact_total(C: np.ndarray, what: str) -> int:
    total = sum_norm_sq(C)
    if not total.is_rational():
        raise ExactnessViolation(f"{what}: {total!r} is not a rational integer")
    return total.to_int()


def plancherel_check(E, mode: str = "exact", spectrum: Spectrum | None = None) -> Check:
    """sum_m |f^(m)|^2 = q^-n sum_x |f(x)|^2.

    Exact mode compares q^2n times both sides as integers.
    """
    f = as_table(E)
    N = f.field.q**f.n
    spec = spectrum if spectrum is not None else fourier(f, mode)
    if spec.mode == "exact":
        lhs = _exact_total(spec.data, "plancherel")
        rhs = N * f.sum_sq()
        return Check("plancherel", "plancherel", lhs == rhs, lhs, rhs, safe_ratio(lhs, rhs))
    lhs = float(np.sum(np.abs(spec.data) ** 2))
    rhs = f.sum_sq() / N
    ok = math.isclose(lhs, rhs, rel_tol=FLOAT_RTOL, abs_tol=1e-300)
    return Check("plancherel", "plancherel", ok, lhs, rhs, safe_ratio(lhs, rhs), mode="float")


def subspace_plancherel_check(f, U: Subspace, spectrum: Spectrum | None = None,
                              mode: str = "exact") -> Check:
    """sum_{m in U-perp} |f^(m)|^2 = q^(-2n+k) sum_j |S_f(U + t_j)|^2, k = dim U-perp.

    For an indicator, S_f of a coset is |E cap coset|.  Exact mode compares
    q^2n times both sides as integers.
    """
    f = as_table(f)
    field, n = f.field, f.n
    N = field.q**n
    spec = spectrum if spectrum is not None else fourier(f, mode)
    W = U.perp()
    k = W.k
    freq = encode(W.points(), field.q)
    ids = U.coset_ids(all_points(field.q, n))
    params = {"dim_U": U.k, "basis": [list(r) for r in U.basis]}
    if spec.mode == "exact":
        if not f.is_integer:
            raise TypeError("exact mode needs an integer-valued function")
        sums = np.zeros(field.q ** (n - U.k), dtype=object)
        np.add.at(sums, ids, f.values.astype(object))
        lhs = _exact_total(spec.data[freq], "subspace plancherel")
        rhs = field.q**k * int(sum(int(s) ** 2 for s in sums))
        return Check("subspace_plancherel", "plancherel-subspaces", lhs == rhs, lhs, rhs,
                     safe_ratio(lhs, rhs), params=params)
    sums = np.zeros(field.q ** (n - U.k), dtype=np.complex128)
    np.add.at(sums, ids, f.values.astype(np.complex128))
    lhs = float(np.sum(np.abs(spec.data[freq]) ** 2))
    rhs = float(field.q ** k) * float(np.sum(np.abs(sums) ** 2)) / N**2
    ok = math.isclose(lhs, rhs, rel_tol=FLOAT_RTOL, abs_tol=1e-15)
    return Check("subspace_plancherel", "plancherel-subspaces", ok, lhs, rhs,
                 safe_ratio(lhs, rhs), mode="float", params=params)


# -- character sums over orthogonal complements -------------------------------

def character_sum_complement(U: Subspace, x: Sequence[int]) -> CyclotomicInt:
    """sum over y in U-perp of chi(-x.y), exactly."""
    field = U.field
    Y = U.perp().points()
    d = dot_arr(field, np.array([x], dtype=np.int64), Y)[0]
    return CyclotomicInt.from_exponents(field.p, _char_lookup(field, 1)[d])


def character_sum_table(U: Subspace) -> np.ndarray:
    """Canonical coefficients of the character sum for every x in F_q^n."""
    field = U.field
    N = field.q**U.n
    p = field.p
    X = all_points(field.q, U.n)
    Y = U.perp().points()
    expo = _char_lookup(field, 1)[dot_arr(field, X, Y)]
    flat = (expo + (np.arange(N) * p)[:, None]).ravel()
    counts = np.bincount(flat, minlength=N * p).reshape(N, p)
    return canonicalize(counts)


def character_sum_check(U: Subspace) -> Check:
    """Both branches: 0 off U, q^dim(U-perp) on U, for every x."""
    field = U.field
    table = character_sum_table(U)
    in_U = ~np.any(U.reduce(all_points(field.q, U.n)), axis=1)
    expected = np.zeros_like(table)
    expected[in_U, 0] = field.q ** (U.n - U.k)
    bad = int(np.sum(np.any(table != expected, axis=1)))
    return Check("character_sum", "character-sum-lemma", bad == 0, bad, 0, None,
                 params={"q": field.q, "n": U.n, "dim_U": U.k, "members": int(in_U.sum())})


# -- p-norms and Salem sets ---------------------------------------------------

def _spectrum_for(E: PointSet, spectrum: Spectrum | None) -> Spectrum:
    return spectrum if spectrum is not None else fourier(E, "float")


def p_norm(E, p: float, spectrum: Spectrum | None = None) -> float:
    """(q^-n sum_{m != 0} |E^(m)|^p)^(1/p)."""
    if not p >= 1:
        raise BadExponent(p)
    spec = _spectrum_for(E, spectrum)
    mod = spec.moduli()[1:]
    return float((np.sum(mod**p) / spec.N) ** (1.0 / p))


def p_norm_closed_form_2(E: PointSet) -> float:
    """The p = 2 norm from Plancherel alone."""
    N = E.field.q**E.n
    d = len(E) / N
    return math.sqrt(max(d * (1 - d), 0.0) / N)


def renormalized_power_mean(E, p: float, spectrum: Spectrum | None = None) -> float:
    spec = _spectrum_for(E, spectrum)
    mod = spec.moduli()[1:]
    return float(np.mean(mod**p) ** (1.0 / p))


@dataclass(frozen=True)
class SalemParams:
    p: float
    s: float
    C: float

    def __post_init__(self):
        if not self.p >= 1:
            raise BadExponent(self.p)
        if not 0 <= self.s <= 1:
            raise ValueError(f"s={self.s} outside [0, 1]")
        if not self.C > 0:
            raise ValueError(f"C={self.C} must be positive")


@dataclass(frozen=True)
class SalemResult:
    passes: bool
    norm: float
    bound: float
    minimal_C: float
    slack: float


def minimal_salem_constant(E: PointSet, p: float, s: float, spectrum: Spectrum | None = None) -> float:
    """Smallest C with ||E^||_p <= C q^-n |E|^(1-s)."""
    if len(E) == 0:
        raise EmptySet("Salem constant of the empty set")
    norm = p_norm(E, p, spectrum)
    return norm * E.field.q**E.n / len(E) ** (1 - s)


def salem_check(E: PointSet, params: SalemParams, spectrum: Spectrum | None = None) -> SalemResult:
    if len(E) == 0:
        raise EmptySet("Salem check of the empty set")
    norm = p_norm(E, params.p, spectrum)
    bound = params.C * len(E) ** (1 - params.s) / E.field.q**E.n
    c_min = norm * E.field.q**E.n / len(E) ** (1 - params.s)
    passes = norm <= bound * (1 + FLOAT_RTOL)
    return SalemResult(passes, norm, bound, c_min, bound - norm)


def best_salem_exponent(E: PointSet, p: float, C: float, spectrum: Spectrum | None = None) -> float:
    """Largest s in [0, 1] for which E passes the (p, s) Salem test with constant C."""
    if len(E) == 0:
        raise EmptySet("best Salem exponent of the empty set")
    norm = p_norm(E, p, spectrum)
    if len(E) == 1:
        passes = norm <= C / E.field.q**E.n * (1 + FLOAT_RTOL)
        err = SingletonSet(f"|E| = 1: condition is s-independent and {'passes' if passes else 'fails'}")
        err.passes = passes
        err.norm = norm
        raise err
    if norm == 0:
        return 1.0
    s = 1 - math.log(E.field.q**E.n * norm / C) / math.log(len(E))
    return min(1.0, max(0.0, s))


def character_invariance_check(E, scales: Sequence[int] | None = None) -> Check:
    """Changing chi to x -> chi(a x) permutes frequencies m -> a m.

    Checks both the permutation and the multiset of moduli.
    """
    f = as_table(E)
    field = f.field
    base = fourier(f, "float")
    X = all_points(field.q, f.n)
    worst = 0.0
    for a in scales if scales is not None else range(1, field.q):
        alt = fourier(f, "float", char_scale=a)
        am = encode(np.asarray(field.mul_arr(a, X), dtype=np.int64), field.q)
        worst = max(worst, float(np.max(np.abs(alt.data - base.data[am]))))
        diff = np.abs(np.sort(np.abs(alt.data)) - np.sort(np.abs(base.data)))
        worst = max(worst, float(diff.max()))
    return Check("character_invariance", "character-choice", worst <= MULTISET_TOL, worst,
                 MULTISET_TOL, None, mode="float")


def exact_float_agreement(E, exact: Spectrum | None = None, flt: Spectrum | None = None) -> Check:
    """Exact coefficients evaluated at zeta agree with the float transform."""
    f = as_table(E)
    exact = exact if exact is not None else fourier(f, "exact")
    flt = flt if flt is not None else fourier(f, "float")
    N = f.field.q**f.n
    err = float(np.max(np.abs(evaluate_rows(exact.data) - flt.data * N)))
    tol = 1e-10 * N
    return Check("exact_float_agreement", "fourier-transform", err <= tol, err, tol, None, mode="float")


def zero_frequency_check(E, spectrum: Spectrum | None = None) -> Check:
    f = as_table(E)
    spec = spectrum if spectrum is not None else fourier(f, "exact")
    F0 = CyclotomicInt(f.field.p, spec.data[0])
    total = f.total()
    return Check("zero_frequency", "fourier-transform", F0 == total, F0.to_int() if F0.is_rational() else repr(F0),
                 total, None)


def plancherel_residual(E: PointSet) -> Fraction:
    """sum_{m != 0} |E^(m)|^2 in closed form: q^-n |E| - q^-2n |E|^2."""
    N = E.field.q**E.n
    return Fraction(len(E), N) - Fraction(len(E) ** 2, N**2)
