from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qgeom.cyclotomic import CyclotomicInt
from qgeom.errors import BadExponent, EmptySet, SingletonSet
from qgeom.gf import field_of_order
from qgeom.spectral import (
    FunctionTable,
    SalemParams,
    best_salem_exponent,
    character_invariance_check,
    character_sum_check,
    character_sum_complement,
    exact_float_agreement,
    fourier,
    minimal_salem_constant,
    p_norm,
    p_norm_closed_form_2,
    plancherel_check,
    plancherel_residual,
    renormalized_power_mean,
    salem_check,
    subspace_plancherel_check,
    zero_frequency_check,
)
from qgeom.vecspace import PointSet, all_points, all_subspaces, span

from .conftest import point_sets, random_set


def _naive_transform(f: FunctionTable) -> list[CyclotomicInt]:
    """sum_x f(x) zeta^Tr(-m.x) with polynomial arithmetic and the Frobenius trace."""
    F, n = f.field, f.n
    X = [tuple(int(v) for v in r) for r in all_points(F.q, n)]
    out = []
    for m in X:
        coeffs = [0] * F.p
        for i, x in enumerate(X):
            d = 0
            for a, b in zip(m, x):
                d = F.poly_add(d, F.poly_mul(a, b))
            j = F.trace_frobenius(F.poly_neg(d))
            coeffs[j] += int(f.values[i])
        out.append(CyclotomicInt(F.p, coeffs))
    return out


@pytest.mark.parametrize("q,n,seed", [(2, 2, 0), (3, 2, 1), (4, 2, 2), (5, 1, 3), (9, 1, 4), (2, 3, 5), (8, 1, 6)])
def test_exact_transform_matches_naive_oracle(q, n, seed):
    rng = np.random.default_rng(seed)
    f = FunctionTable.random_integer(field_of_order(q), n, rng)
    spec = fourier(f, "exact")
    assert [CyclotomicInt(spec.field.p, r) for r in spec.data] == _naive_transform(f)


def test_line_in_F2_squared():
    F2 = field_of_order(2)
    E = PointSet(F2, 2, [(0, 0), (1, 1)])
    spec = fourier(E, "exact")
    vals = [CyclotomicInt(2, r).to_int() for r in spec.data]
    assert vals == [2, 0, 0, 2]


@pytest.mark.parametrize("q,n", [(3, 2), (4, 2), (2, 3)])
def test_trivial_spectra(q, n):
    F = field_of_order(q)
    single = fourier(PointSet(F, n, [(0,) * n]), "float").data
    assert np.allclose(single, q ** (-n))
    full = fourier(PointSet.whole_space(F, n), "float").data
    assert abs(full[0] - 1) < 1e-12 and np.allclose(full[1:], 0, atol=1e-12)


@given(point_sets(max_points=64))
def test_plancherel_both_modes(E):
    assert plancherel_check(E, "exact").holds
    assert plancherel_check(E, "float").holds


@given(point_sets(max_points=64))
def test_exact_and_float_agree(E):
    exact, flt = fourier(E, "exact"), fourier(E, "float")
    assert exact_float_agreement(E, exact, flt).holds
    assert np.max(np.abs(exact.normalized() - flt.data)) <= 1e-12 * exact.N
    assert zero_frequency_check(E, exact).holds


@pytest.mark.parametrize("q,n", [(2, 3), (3, 2), (4, 2), (5, 2)])
def test_subspace_plancherel_all_subspaces(q, n):
    F = field_of_order(q)
    rng = np.random.default_rng(q * 10 + n)
    for f in (FunctionTable.random_integer(F, n, rng), FunctionTable.indicator(random_set(q, n, q))):
        exact, flt = fourier(f, "exact"), fourier(f, "float")
        for U in all_subspaces(n, F):
            assert subspace_plancherel_check(f, U, exact).holds
            assert subspace_plancherel_check(f, U, flt, mode="float").holds


@pytest.mark.parametrize("q,n", [(4, 2), (9, 2), (8, 2), (3, 3)])
def test_character_sum_lemma(q, n):
    F = field_of_order(q)
    for U in all_subspaces(n, F):
        assert character_sum_check(U).holds


def test_character_sum_examples():
    F4 = field_of_order(4)
    U = span(F4, [(1, 0)])
    assert character_sum_complement(U, (0, 0)).to_int() == 4
    assert character_sum_complement(U, (3, 0)).to_int() == 4
    for x in all_points(4, 2):
        if x[1] != 0:
            assert character_sum_complement(U, tuple(x)).is_zero()


def test_character_sum_totals():
    F = field_of_order(9)
    for U in all_subspaces(2, F):
        total = sum((character_sum_complement(U, tuple(x)) for x in all_points(9, 2)),
                    CyclotomicInt.from_int(3, 0))
        assert total.to_int() == 9 ** (2 - U.k) * 9**U.k


def test_p_norm_examples():
    F2 = field_of_order(2)
    assert math.isclose(p_norm(PointSet(F2, 1, [(0,)]), 2), 2**-1.5)
    assert p_norm(PointSet.whole_space(field_of_order(3), 2), 3) < 1e-12
    with pytest.raises(BadExponent):
        p_norm(PointSet(F2, 1, [(0,)]), 0.5)


@given(point_sets(max_points=64))
def test_p_norm_two_closed_form(E):
    assert math.isclose(p_norm(E, 2), p_norm_closed_form_2(E), rel_tol=1e-9, abs_tol=1e-12)
    assert plancherel_residual(E) == Fraction(len(E), E.q**E.n) - Fraction(len(E) ** 2, E.q ** (2 * E.n))


@given(point_sets(max_points=64, nonempty=True), st.floats(1, 6), st.floats(1, 6))
def test_renormalized_power_mean_monotone(E, a, b):
    lo, hi = sorted((a, b))
    assert renormalized_power_mean(E, lo) <= renormalized_power_mean(E, hi) * (1 + 1e-9) + 1e-15


@given(point_sets(max_points=81, nonempty=True))
def test_every_set_is_two_half_salem(E):
    assert salem_check(E, SalemParams(2, 0.5, 1.0)).passes
    assert minimal_salem_constant(E, 2, 0.5) <= 1 + 1e-9


def test_salem_errors_and_best_exponent():
    F5 = field_of_order(5)
    with pytest.raises(EmptySet):
        salem_check(PointSet(F5, 2), SalemParams(2, 0.5, 1.0))
    with pytest.raises(SingletonSet) as info:
        best_salem_exponent(PointSet(F5, 2, [(1, 1)]), 2, 1.0)
    assert info.value.passes in (True, False)
    assert best_salem_exponent(PointSet.whole_space(F5, 2), 2, 1.0) == 1.0
    E = random_set(5, 2, 3, size=10)
    assert best_salem_exponent(E, 2, 1.0) >= 0.5 - 1e-12
    with pytest.raises(ValueError):
        SalemParams(2, 1.5, 1.0)


def test_best_exponent_inverts_definition():
    E = random_set(3, 2, 7, size=4)
    C = minimal_salem_constant(E, 2, 0.5)
    assert math.isclose(best_salem_exponent(E, 2, C), 0.5, abs_tol=1e-9)


def test_character_invariance():
    F3 = field_of_order(3)
    assert character_invariance_check(PointSet(F3, 1, [(0,), (1,)]), [2]).holds
    assert character_invariance_check(random_set(4, 2, 9)).holds
    E = random_set(3, 2, 1)
    assert np.array_equal(fourier(E, "exact", 1).data, fourier(E, "exact").data)
