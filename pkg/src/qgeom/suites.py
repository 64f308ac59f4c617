"""Verification suites run by ``qgeom verify``.

Each suite maps an :class:`ExperimentConfig` to a list of checks.  A suite
passes when no check has ``holds is False``.
"""

from __future__ import annotations

import math

import numpy as np

from . import incidence as inc
from . import projections as proj
from ._workers import pmap
from .config import ExperimentConfig
from .errors import HypothesisNotMet
from .gf import verify_field
from .report import Check
from .spectral import (
    FunctionTable,
    character_sum_check,
    exact_float_agreement,
    fourier,
    plancherel_check,
    subspace_plancherel_check,
    zero_frequency_check,
)
from .vecspace import all_subspaces, gaussian_binomial, verify_gbc_identities

SUITES = ("gf", "gbc", "character", "plancherel", "subspace-plancherel", "moments", "incidence", "projection")
FAMILIES_PER_K = 20


def _ks(cfg: ExperimentConfig, lo: int, hi: int) -> list[int]:
    if cfg.k is not None:
        return [cfg.k] if lo <= cfg.k <= hi else []
    return list(range(lo, hi + 1))


def _functions(cfg: ExperimentConfig) -> list[tuple[str, FunctionTable]]:
    E = cfg.point_set()
    rng = np.random.default_rng(cfg.seed)
    return [("indicator", FunctionTable.indicator(E)),
            ("integer", FunctionTable.random_integer(cfg.field, cfg.n, rng))]


def suite_gf(cfg: ExperimentConfig) -> list[Check]:
    return verify_field(cfg.field, seed=cfg.seed)


def suite_gbc(cfg: ExperimentConfig) -> list[Check]:
    return verify_gbc_identities(cfg.n, cfg.q)


def suite_character(cfg: ExperimentConfig) -> list[Check]:
    return pmap(character_sum_check, list(all_subspaces(cfg.n, cfg.field)))


def suite_plancherel(cfg: ExperimentConfig) -> list[Check]:
    out = []
    for label, f in _functions(cfg):
        spec = fourier(f, cfg.mode)
        c = plancherel_check(f, cfg.mode, spec)
        c.params["function"] = label
        out.append(c)
        if cfg.mode == "exact":
            out.append(zero_frequency_check(f, spec))
            out.append(exact_float_agreement(f, exact=spec))
    return out


def suite_subspace_plancherel(cfg: ExperimentConfig) -> list[Check]:
    out = []
    subs = list(all_subspaces(cfg.n, cfg.field))
    for label, f in _functions(cfg):
        spec = fourier(f, cfg.mode)
        for U in subs:
            c = subspace_plancherel_check(f, U, spec, cfg.mode)
            c.params["function"] = label
            out.append(c)
    return out


def suite_moments(cfg: ExperimentConfig) -> list[Check]:
    E = cfg.point_set()
    fourier_route = cfg.q**cfg.n <= 4096
    out = []
    for k in _ks(cfg, 0, cfg.n):
        out += inc.moments(E, k, fourier_route).checks(cfg.q, cfg.n, k)
        first = inc.incidence_count(E, inc.PlaneFamily.all_planes(cfg.field, cfg.n, k))
        expected = len(E) * gaussian_binomial(cfg.n, k, cfg.q)
        out.append(Check("moments.first_vs_incidence", "first-moment", first == expected, first, expected,
                         None, params={"k": k}))
    return out


def suite_incidence(cfg: ExperimentConfig) -> list[Check]:
    E = cfg.point_set()
    rng = np.random.default_rng(cfg.seed)
    out = []
    for k in _ks(cfg, 1, cfg.n - 1):
        for _ in range(FAMILIES_PER_K):
            F = inc.PlaneFamily.random(cfg.field, cfg.n, k, rng)
            I = inc.incidence_count(E, F)
            out.append(inc.incidence_bound_check(E, F, I).check())
            out += inc.cor2_classify(E, F, I)[1]
            try:
                out.append(inc.cor1_check(E, F, I))
            except HypothesisNotMet:
                pass
    return out


def suite_projection(cfg: ExperimentConfig) -> list[Check]:
    E = cfg.point_set()
    spec = fourier(E, "float")
    ps = cfg.p_list or [2, 3, 4]
    out = []
    for k in _ks(cfg, 1, cfg.n - 1):
        sizes = proj.projection_sizes(E, k)
        direct = proj.projection_sizes_direct(E, k)
        out.append(Check("projection.sizes_agree", "projection-size", bool(np.array_equal(sizes, direct)),
                         int(sizes.sum()), int(direct.sum()), None, params={"k": k}))
        out += proj.fiber_checks(E, k)
        for p in ps:
            if p < 2:
                continue
            umax = cfg.q ** (2 * k / p) / 4
            us = cfg.u_list or list(range(1, math.floor(umax) + 1))
            for u in us:
                out.append(proj.check_main_theorem(E, k, u, p, spectrum=spec, sizes=sizes, report_only=True))
        for p in cfg.p_list or [2, 4, 8]:
            if p >= 2:
                out.append(proj.check_uniform_lower_bound(E, k, p, spectrum=spec, sizes=sizes))
        out.append(proj.check_mattila_branch(E, k, 1, sizes))
        half = cfg.q**k / 2
        for u in cfg.u_list or list(range(1, math.floor(half) + 1)):
            if 0 < u <= half:
                out += inc.projection_via_incidence(E, k, u, direct)
    return out


_RUNNERS = {
    "gf": suite_gf,
    "gbc": suite_gbc,
    "character": suite_character,
    "plancherel": suite_plancherel,
    "subspace-plancherel": suite_subspace_plancherel,
    "moments": suite_moments,
    "incidence": suite_incidence,
    "projection": suite_projection,
}


def run_suite(name: str, cfg: ExperimentConfig) -> list[Check]:
    if name == "all":
        return [c for s in SUITES for c in _RUNNERS[s](cfg)]
    return _RUNNERS[name](cfg)
