"""Seeded point-set generators.

Every generator draws from ``numpy.random.default_rng(seed)`` (PCG64), so
a kind, field, dimension and seed always give the same set.
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigError, SizeTooLarge
from .gf import FieldSpec
from .vecspace import PointSet, Subspace, encode, span

GENERATOR_NAME = "numpy PCG64"
KINDS = ("random", "subspace", "coset", "singleton", "complement-of-kakeya", "full")


def parse_gen(spec: str) -> tuple[str, int | None]:
    """'random:9' -> ('random', 9); 'singleton' -> ('singleton', None)."""
    kind, _, arg = spec.partition(":")
    if kind not in KINDS:
        raise ConfigError(f"unknown generator {kind!r}; choose from {', '.join(KINDS)}")
    if kind in ("random", "subspace", "coset"):
        if not arg:
            raise ConfigError(f"generator {kind!r} needs a parameter, e.g. {kind}:2")
        try:
            return kind, int(arg)
        except ValueError as exc:
            raise ConfigError(f"bad generator parameter {arg!r}") from exc
    if arg:
        raise ConfigError(f"generator {kind!r} takes no parameter")
    return kind, None


def random_subspace(field: FieldSpec, n: int, k: int, rng: np.random.Generator) -> Subspace:
    """Uniform over G(k, n): every subspace has the same number of ordered bases."""
    if not 0 <= k <= n:
        raise ConfigError(f"subspace dimension {k} outside 0..{n}")
    while True:
        rows = rng.integers(0, field.q, size=(k, n))
        S = span(field, rows.tolist(), n)
        if S.k == k:
            return S


def generate_set(field: FieldSpec, n: int, kind: str, param: int | None = None, seed: int = 0) -> PointSet:
    rng = np.random.default_rng(seed)
    q = field.q
    if kind == "random":
        if param is None or param < 0:
            raise ConfigError("random needs a nonnegative size")
        if param > q**n:
            raise SizeTooLarge(f"size {param} exceeds q^n = {q**n}")
        return PointSet.from_indices(field, n, rng.choice(q**n, size=param, replace=False))
    if kind == "singleton":
        return PointSet(field, n, [(0,) * n])
    if kind == "full":
        return PointSet.whole_space(field, n)
    if kind in ("subspace", "coset"):
        if param is None or not 0 <= param <= n:
            raise SizeTooLarge(f"{kind} dimension {param} outside 0..{n}")
        S = random_subspace(field, n, param, rng)
        pts = S.points()
        if kind == "coset":
            t = rng.integers(0, q, size=n)
            pts = np.asarray(field.add_arr(pts, t[None, :]), dtype=np.int64)
        return PointSet.from_indices(field, n, encode(pts, q))
    if kind == "complement-of-kakeya":
        from .incidence import construct_kakeya_2d

        if n != 2:
            raise ConfigError("the Kakeya construction is planar (n=2)")
        K, _ = construct_kakeya_2d(field)
        return K.complement()
    raise ConfigError(f"unknown generator {kind!r}")
