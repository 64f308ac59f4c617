"""Point / k-plane incidences, moment identities and sharpness examples.

Affine k-planes are indexed globally: the plane x + W, with W the i-th
member of G(k, n) and c the coset label of x modulo W, has id
i * q^(n-k) + c.  A :class:`PlaneFamily` is a sorted array of such ids,
which makes families canonical and duplicate-free by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

import numpy as np

from .cyclotomic import CyclotomicInt, rows_norm_sq
from .errors import (
    DimensionMismatch,
    EmptySet,
    EvenCharacteristic,
    FieldMismatch,
    HypothesisNotMet,
    SizeRange,
    URangeViolation,
)
from .gf import FieldSpec, field_of_order
from .projections import projection_sizes, projection_sizes_direct, exceptional_set
from .report import Check, safe_ratio
from .spectral import fourier
from .vecspace import (
    AffinePlane,
    PointSet,
    Subspace,
    all_points,
    coset_reps,
    encode,
    gaussian_binomial,
    grassmannian,
    span,
)

_KEY_CACHE_LIMIT = 1 << 23


# -- plane indexing -------------------------------------------------------------

@lru_cache(maxsize=32)
def _direction_index(field: FieldSpec, n: int, k: int) -> dict[Subspace, int]:
    return {W: i for i, W in enumerate(grassmannian(k, n, field))}


def _keys(field: FieldSpec, n: int, subspaces) -> np.ndarray:
    X = all_points(field.q, n)
    out = np.empty((len(subspaces), field.q**n), dtype=np.int32)
    for i, W in enumerate(subspaces):
        out[i] = W.coset_ids(X)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=16)
def _plane_keys_cached(field: FieldSpec, n: int, k: int) -> np.ndarray:
    return _keys(field, n, grassmannian(k, n, field))


def plane_keys(field: FieldSpec, n: int, k: int) -> np.ndarray:
    """Row i gives the coset label of every point modulo the i-th W in G(k, n)."""
    if gaussian_binomial(n, k, field.q) * field.q**n <= _KEY_CACHE_LIMIT:
        return _plane_keys_cached(field, n, k)
    return _keys(field, n, grassmannian(k, n, field))


def plane_count(field: FieldSpec, n: int, k: int) -> int:
    """|A(k, n)| = q^(n-k) (n, k)_q."""
    return field.q ** (n - k) * gaussian_binomial(n, k, field.q)


def plane_id(P: AffinePlane) -> int:
    W = P.direction
    f, n, k = W.field, W.n, W.k
    i = _direction_index(f, n, k)[W]
    c = int(W.coset_ids(np.array([P.rep]))[0])
    return i * f.q ** (n - k) + c


def plane_from_id(field: FieldSpec, n: int, k: int, pid: int) -> AffinePlane:
    width = field.q ** (n - k)
    W = grassmannian(k, n, field)[pid // width]
    return AffinePlane(W, tuple(int(v) for v in coset_reps(W)[pid % width]))


def plane_intersections(E: PointSet, k: int) -> np.ndarray:
    """|E cap A| for every A in A(k, n), indexed by plane id."""
    f, n = E.field, E.n
    keys = plane_keys(f, n, k)[:, E.indices].astype(np.int64)
    rows, width = keys.shape[0], f.q ** (n - k)
    flat = (keys + (np.arange(rows, dtype=np.int64) * width)[:, None]).ravel()
    return np.bincount(flat, minlength=rows * width)


# -- families -------------------------------------------------------------------

class PlaneFamily:
    """A set of affine k-planes of F_q^n, stored as sorted unique plane ids."""

    def __init__(self, field: FieldSpec, n: int, k: int, ids=()):
        ids = np.unique(np.asarray(list(ids) if not isinstance(ids, np.ndarray) else ids, dtype=np.int64))
        if ids.size and (ids[0] < 0 or ids[-1] >= plane_count(field, n, k)):
            raise ValueError("plane id out of range")
        self.field, self.n, self.k = field, n, k
        self.ids = ids
        self.ids.setflags(write=False)

    @classmethod
    def from_planes(cls, planes: Iterable[AffinePlane], field: FieldSpec | None = None,
                    n: int | None = None, k: int | None = None) -> PlaneFamily:
        planes = list(planes)
        if planes:
            W = planes[0].direction
            field, n, k = W.field, W.n, W.k
            for P in planes:
                if P.direction.field != field:
                    raise FieldMismatch("planes over different fields")
                if P.direction.n != n or P.k != k:
                    raise DimensionMismatch("planes of different dimensions")
        if field is None or n is None or k is None:
            raise ValueError("an empty family needs field, n and k")
        return cls(field, n, k, [plane_id(P) for P in planes])

    @classmethod
    def all_planes(cls, field: FieldSpec, n: int, k: int) -> PlaneFamily:
        return cls(field, n, k, np.arange(plane_count(field, n, k)))

    @classmethod
    def random(cls, field: FieldSpec, n: int, k: int, rng: np.random.Generator,
               size: int | None = None) -> PlaneFamily:
        total = plane_count(field, n, k)
        size = int(rng.integers(0, total + 1)) if size is None else size
        return cls(field, n, k, rng.choice(total, size=size, replace=False))

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def planes(self) -> list[AffinePlane]:
        return [plane_from_id(self.field, self.n, self.k, int(i)) for i in self.ids]

    def __len__(self) -> int:
        return len(self.ids)

    def __iter__(self):
        return iter(self.planes)

    def __contains__(self, P: AffinePlane) -> bool:
        pid = plane_id(P)
        j = np.searchsorted(self.ids, pid)
        return bool(j < len(self.ids) and self.ids[j] == pid)

    def __eq__(self, other) -> bool:
        return (isinstance(other, PlaneFamily) and (self.field, self.n, self.k) == (other.field, other.n, other.k)
                and np.array_equal(self.ids, other.ids))

    def __hash__(self) -> int:
        return hash((self.field, self.n, self.k, self.ids.tobytes()))

    def __repr__(self) -> str:
        return f"PlaneFamily(q={self.q}, n={self.n}, k={self.k}, size={len(self)})"


def _compatible(E: PointSet, F: PlaneFamily) -> None:
    if E.field != F.field:
        raise FieldMismatch("point set and family over different fields")
    if E.n != F.n:
        raise DimensionMismatch(f"point set in dimension {E.n}, family in {F.n}")


def incidence_count(E: PointSet, F: PlaneFamily) -> int:
    """I(E, F) = #{(x, A) in E x F : x in A}."""
    _compatible(E, F)
    if len(E) == 0 or len(F) == 0:
        return 0
    width = F.q ** (F.n - F.k)
    dirs = F.ids // width
    total = 0
    subs = grassmannian(F.k, F.n, F.field)
    for d in np.unique(dirs):
        cosets = F.ids[dirs == d] % width
        counts = np.bincount(subs[d].coset_ids(E.array), minlength=width)
        total += int(counts[cosets].sum())
    return total


def incidence_count_bruteforce(E: PointSet, F: PlaneFamily) -> int:
    """Same count by listing each plane's points and testing membership."""
    _compatible(E, F)
    if len(E) == 0:
        return 0
    mask = E.mask()
    return sum(int(mask[encode(P.points(), F.q)].sum()) for P in F.planes)


# -- moments --------------------------------------------------------------------

@dataclass
class MomentTriple:
    e0: int
    e1: int
    e2: int
    closed: tuple[int, int, int]
    deviation: Fraction
    deviation_closed: Fraction
    e2_fourier: int | None = None

    def checks(self, q: int, n: int, k: int) -> list[Check]:
        prm = {"q": q, "n": n, "k": k}
        out = [
            Check(f"moments.e{r}", f"moment-{r}", v == c, v, c, safe_ratio(v, c), params=prm)
            for r, (v, c) in enumerate(zip((self.e0, self.e1, self.e2), self.closed))
        ]
        out.append(Check("moments.deviation", "deviation-identity", self.deviation == self.deviation_closed,
                         self.deviation, self.deviation_closed, None, params=prm))
        if self.e2_fourier is not None:
            out.append(Check("moments.e2_fourier", "second-moment-fourier", self.e2_fourier == self.e2,
                             self.e2_fourier, self.e2, None, params=prm))
        return out


def moment_closed_forms(size: int, q: int, n: int, k: int) -> tuple[int, int, int]:
    g = gaussian_binomial
    return (q ** (n - k) * g(n, k, q),
            size * g(n, k, q),
            size * q**k * g(n - 1, k, q) + size**2 * g(n - 1, k - 1, q))


def deviation_closed_form(size: int, q: int, n: int, k: int) -> Fraction:
    g = gaussian_binomial(n - 1, k, q)
    return size * q**k * g - Fraction(size**2 * q**k * g, q**n)


def second_moment_fourier(E: PointSet, k: int) -> int:
    """e2 through the transform: q^(k-n) sum_W sum_{m in W-perp} |E^(m)|^2."""
    f, n, q = E.field, E.n, E.q
    norms = rows_norm_sq(fourier(E, "exact").data)
    total = CyclotomicInt.from_int(f.p, 0)
    for W in grassmannian(k, n, f):
        idx = encode(W.perp().points(), q)
        total = total + CyclotomicInt(f.p, norms[idx].sum(axis=0))
    val = Fraction(total.to_int(), q ** (n - k))
    if val.denominator != 1:
        raise ArithmeticError("Fourier route produced a non-integer second moment")
    return int(val)


def moments(E: PointSet, k: int, fourier_route: bool = False) -> MomentTriple:
    """Enumerated sum_A |E cap A|^r over all of A(k, n), r = 0, 1, 2."""
    f, n, q = E.field, E.n, E.q
    if not 0 <= k <= n:
        raise ValueError(f"k={k} outside 0..{n}")
    keys = plane_keys(f, n, k)
    e0 = sum(len(np.unique(row)) for row in keys)
    counts = plane_intersections(E, k) if len(E) else np.zeros(1, dtype=np.int64)
    e1 = int(counts.sum())
    e2 = int((counts.astype(np.int64) ** 2).sum())
    avg = Fraction(len(E), q ** (n - k))
    deviation = e2 - 2 * avg * e1 + avg * avg * e0
    return MomentTriple(
        e0, e1, e2,
        moment_closed_forms(len(E), q, n, k),
        deviation,
        deviation_closed_form(len(E), q, n, k),
        second_moment_fourier(E, k) if fourier_route else None,
    )


# -- the incidence theorem ------------------------------------------------------

def bracket(size: int, q: int, n: int, k: int) -> Fraction:
    """(n-1, k)_q (1 - |E| q^-n) / q^(k(n-k-1)), exact."""
    return (gaussian_binomial(n - 1, k, q) * (1 - Fraction(size, q**n))) / Fraction(q) ** (k * (n - k - 1))


@dataclass
class IncidenceReport:
    count: int
    main_term: Fraction
    deviation: Fraction
    bound_sq: Fraction
    bracket: Fraction
    holds: bool
    params: dict = field(default_factory=dict)

    @property
    def bound(self) -> float:
        return math.sqrt(self.bound_sq)

    @property
    def ratio(self):
        if self.bound_sq == 0:
            return None if self.deviation == 0 else math.inf
        return abs(float(self.deviation)) / self.bound

    def check(self) -> Check:
        return Check("incidence.theorem", "incidence-theorem", self.holds, abs(self.deviation), self.bound,
                     self.ratio, params={**self.params, "count": self.count, "main_term": self.main_term,
                                         "bracket": self.bracket})


def _product_terms(E: PointSet, F: PlaneFamily) -> tuple[int, Fraction, int]:
    q, n, k = F.q, F.n, F.k
    prod = len(E) * len(F)
    return prod, Fraction(prod, q ** (n - k)), q ** (k * (n - k)) * prod


def incidence_bound_check(E: PointSet, F: PlaneFamily, count: int | None = None) -> IncidenceReport:
    """|I - |E||A|/q^(n-k)|^2 <= q^(k(n-k)) |E||A| * bracket, in rationals."""
    _compatible(E, F)
    q, n, k = F.q, F.n, F.k
    I = incidence_count(E, F) if count is None else count
    _, main, X2 = _product_terms(E, F)
    B = bracket(len(E), q, n, k)
    dev = I - main
    bound_sq = X2 * B
    return IncidenceReport(I, main, dev, bound_sq, B, dev * dev <= bound_sq,
                           params={"q": q, "n": n, "k": k, "E": len(E), "A": len(F)})


def cor1_check(E: PointSet, F: PlaneFamily, count: int | None = None) -> Check:
    """|I - |E||A|/q^(n-k)| <= (q^(k(n-k)) |E||A|)^(1/2).

    Asserted when k = n-1, or when |E| > q^(n-1) and the exact bracket is
    at most 1.  With |E| > q^(n-1) but a bracket above 1 the check is
    reported as inapplicable (holds None).
    """
    _compatible(E, F)
    q, n, k = F.q, F.n, F.k
    big = len(E) > q ** (n - 1)
    if k != n - 1 and not big:
        raise HypothesisNotMet(f"need k = n-1 or |E| > q^(n-1); got k={k}, |E|={len(E)}")
    rep = incidence_bound_check(E, F, count)
    _, _, X2 = _product_terms(E, F)
    applicable = k == n - 1 or rep.bracket <= 1
    ok = rep.deviation**2 <= X2
    return Check("incidence.cor1", "bracket-free-bound", ok if applicable else None, abs(rep.deviation),
                 math.sqrt(X2), safe_ratio(abs(float(rep.deviation)), math.sqrt(X2)),
                 params={"q": q, "n": n, "k": k, "bracket": rep.bracket, "applicable": applicable,
                         "hypothesis": "k=n-1" if k == n - 1 else "size"})


def _le_sum_of_roots(I: int, X2: Fraction, B: Fraction) -> bool:
    """I <= X (1 + sqrt(B)) where X = sqrt(X2), decided exactly."""
    lhs = I * I - X2 * (1 + B)
    return lhs <= 0 or lhs * lhs <= 4 * X2 * X2 * B


def cor2_classify(E: PointSet, F: PlaneFamily, count: int | None = None) -> tuple[str, list[Check]]:
    """Regime of |E||A| and the corresponding incidence inequalities.

    large:  |E||A| > q^((k+2)(n-k))
    medium: 4 q^(k(n-k)) < |E||A| <= q^((k+2)(n-k))
    small:  |E||A| <= 4 q^(k(n-k))
    Every regime asserts the two-sided band from the incidence theorem and
    the trivial bound I <= |E||A|; the medium regime also asserts
    I <= (1 + sqrt(bracket)) (q^(k(n-k)) |E||A|)^(1/2).
    """
    _compatible(E, F)
    q, n, k = F.q, F.n, F.k
    if n < 2 or not 1 <= k <= n - 1:
        raise ValueError(f"need n >= 2 and 1 <= k <= n-1, got n={n}, k={k}")
    rep = incidence_bound_check(E, F, count)
    prod, main, X2 = _product_terms(E, F)
    hi, lo = q ** ((k + 2) * (n - k)), 4 * q ** (k * (n - k))
    regime = "large" if prod > hi else ("medium" if prod > lo else "small")
    prm = {"q": q, "n": n, "k": k, "regime": regime, "product": prod}
    checks = [
        Check("incidence.cor2.band", "two-sided-band", rep.holds, rep.count, main, safe_ratio(rep.count, main),
              params={**prm, "bracket": rep.bracket}),
        Check("incidence.cor2.trivial", "trivial-bound", rep.count <= prod, rep.count, prod,
              safe_ratio(rep.count, prod), params=prm),
    ]
    if regime == "medium":
        X = math.sqrt(X2)
        checks.append(Check("incidence.cor2.medium", "medium-regime", _le_sum_of_roots(rep.count, X2, rep.bracket),
                            rep.count, X * (1 + math.sqrt(rep.bracket)), rep.count / X, params=prm))
    return regime, checks


# -- sharpness constructions ----------------------------------------------------

def _field(q) -> FieldSpec:
    return q if isinstance(q, FieldSpec) else field_of_order(int(q))


def construct_few_incidence(q, n: int, k: int) -> tuple[PointSet, PlaneFamily]:
    """E = the first floor(q^(n-k)/2) + 1 points, A = planes missing E."""
    f = _field(q)
    q = f.q
    if q ** (n - k) < 2:
        raise ValueError("need q^(n-k) >= 2")
    E = PointSet.from_indices(f, n, np.arange(q ** (n - k) // 2 + 1))
    counts = plane_intersections(E, k)
    F = PlaneFamily(f, n, k, np.flatnonzero(counts == 0))
    if incidence_count(E, F) != 0:
        raise AssertionError("few-incidence family meets E")
    if Fraction(len(F)) < Fraction(q ** ((k + 1) * (n - k)), 2) - q ** (k * (n - k)):
        raise AssertionError("few-incidence family smaller than guaranteed")
    return E, F


def few_incidence_checks(E: PointSet, F: PlaneFamily) -> list[Check]:
    q, n, k = F.q, F.n, F.k
    I = incidence_count(E, F)
    floor_A = Fraction(q ** ((k + 1) * (n - k)), 2) - q ** (k * (n - k))
    floor_prod = Fraction(q ** ((k + 2) * (n - k)), 4) - Fraction(q ** ((k + 1) * (n - k)), 2)
    prm = {"q": q, "n": n, "k": k, "E": len(E), "A": len(F)}
    return [
        Check("sharpness.few.zero", "few-incidences", I == 0, I, 0, None, params=prm),
        Check("sharpness.few.family_size", "few-incidences", len(F) >= floor_A, len(F), floor_A,
              safe_ratio(len(F), floor_A), params=prm),
        Check("sharpness.few.product", "few-incidences", len(E) * len(F) > floor_prod, len(E) * len(F),
              floor_prod, safe_ratio(len(E) * len(F), floor_prod), params=prm),
        incidence_bound_check(E, F, I).check(),
    ]


def construct_kakeya_2d(q) -> tuple[PointSet, PlaneFamily]:
    """Parabola Kakeya set in F_q^2 for odd q.

    K = {(x, s^2 - x^2)} together with the line x = 0.  The line
    y = m x + m^2/4 lies in K because m x + m^2/4 + x^2 = (x + m/2)^2.
    """
    f = _field(q)
    q = f.q
    if f.p == 2:
        raise EvenCharacteristic(f"q={q} is even")
    els = np.arange(q)
    sq = f.mul_arr(els, els)
    pts = f.sub_arr(sq[None, :], sq[:, None]).astype(np.int64)
    xs = np.broadcast_to(els[:, None], pts.shape)
    par = np.stack([xs.ravel(), pts.ravel()], axis=1)
    vert = np.stack([np.zeros(q, dtype=np.int64), els], axis=1)
    K = PointSet.from_array(f, 2, np.vstack([par, vert]))
    quarter = f.inv(f.from_int(4))
    lines = []
    for m in range(q):
        c = f.mul(f.mul(m, m), quarter)
        lines.append(AffinePlane.through((0, c), span(f, [(1, m)], 2)))
    lines.append(AffinePlane.through((0, 0), span(f, [(0, 1)], 2)))
    fam = PlaneFamily.from_planes(lines)
    mask = K.mask()
    for P in lines:
        if not mask[encode(P.points(), q)].all():
            raise AssertionError("Kakeya line leaves K")
    if len(fam) != q + 1 or 2 * len(K) > q * (q + 1) + 2 * q:
        raise AssertionError("Kakeya construction has the wrong size")
    return K, fam


def kakeya_checks(q) -> list[Check]:
    K, lines = construct_kakeya_2d(q)
    f = K.field
    E = K.complement()
    I = incidence_count(E, lines)
    prm = {"q": f.q, "K": len(K), "E": len(E), "A": len(lines)}
    return [
        Check("sharpness.kakeya.size", "kakeya-size", 2 * len(K) <= f.q * (f.q + 1) + 2 * f.q, len(K),
              Fraction(f.q * (f.q + 1), 2) + f.q, None, params=prm),
        Check("sharpness.kakeya.zero", "kakeya-incidences", I == 0, I, 0, None, params=prm),
        Check("sharpness.kakeya.product", "kakeya-product", None, len(E) * len(lines), f.q**3,
              safe_ratio(len(E) * len(lines), f.q**3), params=prm),
        incidence_bound_check(E, lines, I).check(),
    ]


def construct_many_incidence(E: PointSet, k: int) -> PlaneFamily:
    """{x + V : x in E, V in G(k, n)}."""
    q, n = E.q, E.n
    if not 1 <= len(E) <= q ** (n - k):
        raise SizeRange(f"|E|={len(E)} outside [1, q^(n-k)] = [1, {q ** (n - k)}]")
    keys = plane_keys(E.field, n, k)[:, E.indices].astype(np.int64)
    width = q ** (n - k)
    ids = keys + (np.arange(keys.shape[0], dtype=np.int64) * width)[:, None]
    return PlaneFamily(E.field, n, k, ids.ravel())


def many_incidence_checks(E: PointSet, k: int) -> list[Check]:
    """I >= |E|(n,k)_q >= |E| q^(k(n-k)) and I / (|E| q^(k(n-k))) <= g + sqrt(g B).

    Here g = (n,k)_q / q^(k(n-k)) and B is the bracket, so the upper ratio
    is 2 plus a slack that vanishes as q grows.
    """
    F = construct_many_incidence(E, k)
    q, n = E.q, E.n
    I = incidence_count(E, F)
    G = gaussian_binomial(n, k, q)
    L = len(E) * q ** (k * (n - k))
    g = Fraction(G, q ** (k * (n - k)))
    B = bracket(len(E), q, n, k)
    r = I - L * g
    upper_ok = r <= 0 or r * r <= L * L * g * B
    cap = float(g) + math.sqrt(g * B)
    prm = {"q": q, "n": n, "k": k, "E": len(E), "A": len(F), "slack": cap - 2}
    return [
        Check("sharpness.many.lower", "many-incidences", I >= len(E) * G >= L, I, len(E) * G,
              safe_ratio(I, len(E) * G), params=prm),
        Check("sharpness.many.family_size", "many-incidences", len(F) <= len(E) * G, len(F), len(E) * G,
              safe_ratio(len(F), len(E) * G), params=prm),
        Check("sharpness.many.ratio", "many-incidences", I >= L and upper_ok, Fraction(I, L), cap,
              I / L / cap, params=prm),
        incidence_bound_check(E, F, I).check(),
    ]


def refute_claimed_bound(q=3, n: int = 5, k: int = 2) -> list[Check]:
    """E = {0} and A = G(k, n) break |E||A|/q^(n-k) + (q^(n+k-2) |E||A|)^(1/2).

    The corrected bound with the exact bracket must still hold.
    """
    f = _field(q)
    q = f.q
    E = PointSet(f, n, [(0,) * n])
    F = PlaneFamily(f, n, k, np.arange(gaussian_binomial(n, k, q)) * q ** (n - k))
    I = incidence_count(E, F)
    prod, main, _ = _product_terms(E, F)
    dev = I - main
    claimed_sq = q ** (n + k - 2) * prod
    claimed = float(main) + math.sqrt(claimed_sq)
    rep = incidence_bound_check(E, F, I)
    correct = float(main) + rep.bound
    prm = {"q": q, "n": n, "k": k, "I": I}
    return [
        Check("refutation.count", "refutation", I == gaussian_binomial(n, k, q), I, gaussian_binomial(n, k, q),
              None, params=prm),
        Check("refutation.claimed_fails", "refutation", dev > 0 and dev * dev > claimed_sq, I, claimed,
              I / claimed, params=prm),
        Check("refutation.correct_holds", "refutation", rep.holds and I >= main, I, correct, I / correct,
              params={**prm, "bracket": rep.bracket}),
    ]


# -- projections through incidences ---------------------------------------------

def projection_via_incidence(E: PointSet, k: int, u: float,
                             sizes: np.ndarray | None = None) -> list[Check]:
    """Bound |Theta| with the incidence theorem applied to (n-k)-planes.

    A is the union over V in Theta of pi_V(E).  Then |A| <= u |Theta|,
    I(E, A) >= |Theta| |E|, and for u <= q^k / 2 the incidence theorem
    yields |Theta| <= 4 G u q^(k(n-k)) / |E| with the exact factor
    G = (n-1, n-k)_q (1 - |E| q^-n) / q^((n-k)(k-1)).

    ``sizes`` may carry a precomputed :func:`projection_sizes_direct`.
    """
    if len(E) == 0:
        raise EmptySet("projection bound needs a nonempty set")
    q, n, f = E.q, E.n, E.field
    if not 0 < u <= Fraction(q**k, 2):
        raise URangeViolation(f"u={u} outside (0, q^k/2]")
    sizes = projection_sizes_direct(E, k) if sizes is None else sizes
    subs = grassmannian(k, n, f)
    chosen = np.flatnonzero(sizes <= u)
    # pi_V(E) as (n-k)-plane ids: coset labels of E modulo V-perp, offset by V-perp's index
    width = q**k
    per_v = np.zeros(0, dtype=np.int64)
    ids = np.zeros(0, dtype=np.int64)
    if chosen.size:
        index = _direction_index(f, n, n - k)
        js = np.array([index[subs[i].perp()] for i in chosen], dtype=np.int64)
        labels = np.sort(plane_keys(f, n, n - k)[js][:, E.indices].astype(np.int64), axis=1)
        first = np.ones(labels.shape, dtype=bool)
        first[:, 1:] = labels[:, 1:] != labels[:, :-1]
        per_v = first.sum(axis=1)
        ids = (labels + js[:, None] * width)[first]
    theta = [subs[i] for i in chosen]
    fam = PlaneFamily(f, n, n - k, ids)
    disjoint = len(fam) == ids.size
    I = incidence_count(E, fam)
    G = bracket(len(E), q, n, n - k)
    u_frac = Fraction(u).limit_denominator()
    bound = 4 * G * u_frac * q ** (k * (n - k)) / len(E)
    direct = exceptional_set(E, k, u, projection_sizes(E, k)).theta_count
    prm = {"q": q, "n": n, "k": k, "u": u, "E": len(E), "theta": len(theta)}
    return [
        Check("projection_incidence.disjoint", "disjoint-union", disjoint, len(fam), int(ids.size), None, params=prm),
        Check("projection_incidence.image_sizes", "projection-size", bool(np.all(per_v == sizes[chosen])),
              int(per_v.sum()), int(sizes[chosen].sum()), None, params=prm),
        Check("projection_incidence.family_size", "family-size", len(fam) <= u_frac * len(theta), len(fam),
              u_frac * len(theta), None, params=prm),
        Check("projection_incidence.incidences", "incidence-lower", I >= len(theta) * len(E), I,
              len(theta) * len(E), None, params=prm),
        Check("projection_incidence.bound", "projection-from-incidence", len(theta) <= bound, len(theta), bound,
              safe_ratio(len(theta), bound), params={**prm, "G": G}),
        Check("projection_incidence.cross_check", "exceptional-count", direct == len(theta), len(theta), direct,
              None, params=prm),
    ]
