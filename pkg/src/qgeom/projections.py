"""Projections pi_V(E), exceptional sets and the projection theorems.

pi_V(E) is the set of cosets of V-perp that meet E.  Every theorem check
measures the Salem constant C of E instead of assuming one, which turns
each statement into a closed inequality that can be asserted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import EmptySet, URangeViolation
from .gf import FieldSpec
from .report import Check, safe_ratio
from .spectral import FLOAT_RTOL, Spectrum, fourier, minimal_salem_constant, p_norm
from .vecspace import AffinePlane, PointSet, Subspace, all_points, dot_arr, gaussian_binomial, grassmannian

_KEY_CACHE_LIMIT = 1 << 23
_DIRECT_BLOCK = 1 << 22


@dataclass
class ProjectionImage:
    V: Subspace
    planes: frozenset[AffinePlane]

    def __len__(self) -> int:
        return len(self.planes)


def project(E: PointSet, V: Subspace) -> ProjectionImage:
    W = V.perp()
    reps = np.unique(W.reduce(E.array), axis=0) if len(E) else np.zeros((0, V.n), dtype=np.int64)
    return ProjectionImage(V, frozenset(AffinePlane(W, tuple(int(x) for x in r)) for r in reps))


@lru_cache(maxsize=16)
def _perp_keys_cached(field: FieldSpec, n: int, k: int) -> np.ndarray:
    return _perp_keys(field, n, k, grassmannian(k, n, field))


def _perp_keys(field: FieldSpec, n: int, k: int, subspaces) -> np.ndarray:
    X = all_points(field.q, n)
    out = np.empty((len(subspaces), field.q**n), dtype=np.int32)
    for i, V in enumerate(subspaces):
        out[i] = V.perp().coset_ids(X)
    out.setflags(write=False)
    return out


def perp_coset_keys(field: FieldSpec, n: int, k: int) -> np.ndarray:
    """Row i labels each point of F_q^n by its coset of V_i-perp, V_i the
    i-th member of G(k, n)."""
    size = gaussian_binomial(n, k, field.q) * field.q**n
    if size <= _KEY_CACHE_LIMIT:
        return _perp_keys_cached(field, n, k)
    return _perp_keys(field, n, k, grassmannian(k, n, field))


def fiber_counts(E: PointSet, k: int) -> np.ndarray:
    """(|G(k,n)|, q^k) array of |E cap (V-perp + t_j)|."""
    keys = perp_coset_keys(E.field, E.n, k)[:, E.indices].astype(np.int64)
    rows, width = keys.shape[0], E.field.q**k
    flat = (keys + (np.arange(rows) * width)[:, None]).ravel()
    return np.bincount(flat, minlength=rows * width).reshape(rows, width)


def projection_sizes(E: PointSet, k: int) -> np.ndarray:
    """|pi_V(E)| for every V in G(k, n), in Grassmannian order."""
    if len(E) == 0:
        return np.zeros(gaussian_binomial(E.n, k, E.q), dtype=np.int64)
    keys = np.sort(perp_coset_keys(E.field, E.n, k)[:, E.indices], axis=1)
    return 1 + np.count_nonzero(np.diff(keys, axis=1), axis=1)


@dataclass
class ExceptionalReport:
    E_summary: dict
    u: float
    theta: list[Subspace]
    theta_count: int
    bounds: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "E": self.E_summary,
            "u": self.u,
            "theta_count": self.theta_count,
            "theta": [[list(r) for r in V.basis] for V in self.theta],
            "bounds": {k: list(v) for k, v in self.bounds.items()},
        }


def _summary(E: PointSet, k: int) -> dict:
    return {"size": len(E), "q": E.q, "n": E.n, "k": k}


def exceptional_set(E: PointSet, k: int, u: float, sizes: np.ndarray | None = None) -> ExceptionalReport:
    """{V in G(k, n) : |pi_V(E)| <= u} by sweeping the whole Grassmannian."""
    if len(E) == 0:
        raise EmptySet("exceptional set of the empty set")
    if not u > 0:
        raise ValueError(f"u={u} must be positive")
    sizes = projection_sizes(E, k) if sizes is None else sizes
    subs = grassmannian(k, E.n, E.field)
    theta = [subs[i] for i in np.flatnonzero(sizes <= u)]
    return ExceptionalReport(_summary(E, k), u, theta, len(theta))


def main_theorem_bound(E: PointSet, k: int, u: float, p: float, C: float, s: float) -> float:
    """(4C)^p u^(p/2) q^(k(n-k)) |E|^(-ps)."""
    q, n = E.q, E.n
    return (4 * C) ** p * u ** (p / 2) * float(q) ** (k * (n - k)) * len(E) ** (-p * s)


def check_main_theorem(E: PointSet, k: int, u: float, p: float, s: float = 0.5,
                       spectrum: Spectrum | None = None, sizes: np.ndarray | None = None,
                       report_only: bool = False) -> Check:
    """|Theta| <= (4C)^p u^(p/2) q^(k(n-k)) |E|^(-ps) with C measured.

    Applicable for p >= 2 and 0 < u <= q^(2k/p)/4; outside that range this
    raises URangeViolation unless ``report_only`` is set, in which case the
    comparison is still reported with ``holds`` left as None.
    """
    if not p >= 2:
        raise ValueError(f"p={p} must be at least 2")
    if len(E) == 0:
        raise EmptySet("main theorem needs a nonempty set")
    applicable = u <= E.q ** (2 * k / p) / 4
    if not applicable and not report_only:
        raise URangeViolation(f"u={u} exceeds q^(2k/p)/4 = {E.q ** (2 * k / p) / 4}")
    spectrum = spectrum if spectrum is not None else fourier(E, "float")
    C = minimal_salem_constant(E, p, s, spectrum)
    theta = exceptional_set(E, k, u, sizes).theta_count
    bound = main_theorem_bound(E, k, u, p, C, s)
    holds = theta <= bound * (1 + FLOAT_RTOL)
    return Check("projection.main_theorem", "main-projection-theorem", holds if applicable else None,
                 theta, bound, safe_ratio(theta, bound), mode="float",
                 params={"k": k, "u": u, "p": p, "s": s, "C": C, "applicable": applicable,
                         "observed_holds": holds})


def check_mattila_branch(E: PointSet, k: int, u: float, sizes: np.ndarray | None = None) -> Check:
    """Monitor |Theta| / (u q^(k(n-k)-k)); never asserted."""
    theta = exceptional_set(E, k, u, sizes).theta_count
    denom = Fraction(u).limit_denominator() * Fraction(E.q) ** (k * (E.n - k) - k)
    applicable = u <= min(E.q**k, len(E)) / 4
    return Check("projection.mattila_ratio", "mattila-branch", None, theta, denom,
                 safe_ratio(Fraction(theta), denom), params={"k": k, "u": u, "applicable": applicable})


def uniform_lower_bound(E: PointSet, k: int, p: float, C: float, s: float) -> float:
    """Right-hand side of |pi_V(E)|^(1/2) >= 1 / (C q^((n-k)/p) |E|^-s + q^(-k/2))."""
    q, n = E.q, E.n
    return 1.0 / (C * q ** ((n - k) / p) * len(E) ** (-s) + q ** (-k / 2))


def check_uniform_lower_bound(E: PointSet, k: int, p: float, s: float = 0.5,
                              spectrum: Spectrum | None = None,
                              sizes: np.ndarray | None = None) -> Check:
    if not p >= 2:
        raise ValueError(f"p={p} must be at least 2")
    if len(E) == 0:
        raise EmptySet("uniform lower bound needs a nonempty set")
    spectrum = spectrum if spectrum is not None else fourier(E, "float")
    C = minimal_salem_constant(E, p, s, spectrum)
    sizes = projection_sizes(E, k) if sizes is None else sizes
    rhs = uniform_lower_bound(E, k, p, C, s)
    roots = np.sqrt(sizes.astype(np.float64))
    violations = int(np.sum(roots < rhs * (1 - FLOAT_RTOL)))
    worst = float(roots.min())
    return Check("projection.uniform_lower_bound", "uniform-lower-bound", violations == 0, worst, rhs,
                 safe_ratio(worst, rhs), mode="float",
                 params={"k": k, "p": p, "s": s, "C": C, "min_projection": int(sizes.min()),
                         "violations": violations})


def fiber_checks(E: PointSet, k: int) -> list[Check]:
    """Per-V identities behind the projection proofs.

    Fibres over pi_V(E) partition E, and Cauchy-Schwarz gives
    |E|^2 <= |pi_V(E)| * sum_j |E cap (V-perp + t_j)|^2.
    """
    counts = fiber_counts(E, k)
    sizes = np.count_nonzero(counts, axis=1)
    totals = counts.sum(axis=1)
    sq = (counts.astype(np.int64) ** 2).sum(axis=1)
    partition_ok = bool(np.all(totals == len(E)))
    cs_ok = bool(np.all(len(E) ** 2 <= sizes * sq))
    cs_min = float(np.min(sizes * sq / max(len(E), 1) ** 2)) if len(E) else math.inf
    return [
        Check("projection.fiber_partition", "fiber-accounting", partition_ok, int(totals.min()), len(E), None,
              params={"k": k}),
        Check("projection.cauchy_schwarz", "first-inequality", cs_ok, len(E) ** 2, None, cs_min,
              params={"k": k}),
        Check("projection.size_bound", "projection-size", bool(np.all(sizes <= min(E.q**k, len(E)))),
              int(sizes.max()), min(E.q**k, len(E)), None, params={"k": k}),
    ]


@lru_cache(maxsize=16)
def _basis_stack(field: FieldSpec, n: int, k: int) -> np.ndarray:
    """Bases of G(k, n) in order, shape (|G|, k, n)."""
    subs = grassmannian(k, n, field)
    out = np.array([V.basis for V in subs], dtype=np.int64).reshape(len(subs), k, n)
    out.setflags(write=False)
    return out


def projection_sizes_direct(E: PointSet, k: int) -> np.ndarray:
    """|pi_V(E)| from coordinates: x and y share a coset of V-perp exactly
    when v.x = v.y for every basis vector v of V.

    Counts distinct coordinate tuples per V, with no use of V-perp or of
    canonical coset labels.
    """
    field, n, q = E.field, E.n, E.q
    count = gaussian_binomial(n, k, q)
    if len(E) == 0:
        return np.zeros(count, dtype=np.int64)
    if k == 0:
        return np.ones(count, dtype=np.int64)
    bases = _basis_stack(field, n, k)
    weights = q ** np.arange(k, dtype=np.int64)
    step = max(1, _DIRECT_BLOCK // (len(E) * k))
    out = np.empty(count, dtype=np.int64)
    for lo in range(0, count, step):
        block = bases[lo:lo + step]
        coords = dot_arr(field, E.array, block.reshape(-1, n)).reshape(len(E), len(block), k)
        codes = np.sort(coords @ weights, axis=0)
        out[lo:lo + len(block)] = 1 + np.count_nonzero(np.diff(codes, axis=0), axis=0)
    return out


def salem_constant_profile(E: PointSet, ps, spectrum: Spectrum | None = None) -> dict:
    spectrum = spectrum if spectrum is not None else fourier(E, "float")
    return {p: p_norm(E, p, spectrum) for p in ps}
