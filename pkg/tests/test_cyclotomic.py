from __future__ import annotations

import cmath

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qgeom.cyclotomic import CyclotomicInt, canonicalize, rows_norm_sq, rows_rational, sum_norm_sq
from qgeom.errors import ExactnessViolation

PRIMES = st.sampled_from([2, 3, 5, 7])


@st.composite
def cyclo(draw, p=None):
    p = p or draw(PRIMES)
    return CyclotomicInt(p, draw(st.lists(st.integers(-20, 20), min_size=p, max_size=p)))


def _value(z: CyclotomicInt) -> complex:
    w = cmath.exp(2j * cmath.pi / z.p)
    return sum(c * w**j for j, c in enumerate(z.coeffs))


@given(PRIMES.flatmap(lambda p: st.tuples(cyclo(p), cyclo(p))))
def test_ring_operations_match_complex_values(pair):
    a, b = pair
    assert abs(_value(a + b) - (_value(a) + _value(b))) < 1e-6
    assert abs(_value(a * b) - _value(a) * _value(b)) < 1e-6
    assert abs(_value(a - b) - (_value(a) - _value(b))) < 1e-6
    assert abs(_value(a.conj()) - _value(a).conjugate()) < 1e-6


@given(cyclo())
def test_canonical_form_is_unique(z):
    shifted = CyclotomicInt(z.p, [c + 7 for c in z.coeffs])
    assert shifted == z
    assert z.coeffs[-1] == 0


@given(cyclo())
def test_norm_is_real_and_nonnegative(z):
    v = _value(z.norm_sq())
    assert abs(v.imag) < 1e-6 and v.real > -1e-6
    assert z.norm_sq() == z.norm_sq().conj()


def test_full_root_sum_is_zero():
    for p in (2, 3, 5, 7):
        assert CyclotomicInt(p, [1] * p).is_zero()
        assert CyclotomicInt.from_exponents(p, range(p)).is_zero()


def test_to_int():
    assert CyclotomicInt.from_int(5, -4).to_int() == -4
    with pytest.raises(ExactnessViolation):
        CyclotomicInt(3, [0, 1, 0]).to_int()
    assert CyclotomicInt(2, [3, 1]).to_int() == 2


def test_matrix_helpers_agree_with_scalar_class():
    rng = np.random.default_rng(1)
    for p in (2, 3, 5):
        C = rng.integers(-5, 6, size=(7, p))
        total = sum((CyclotomicInt(p, r).norm_sq() for r in C), CyclotomicInt.from_int(p, 0))
        assert sum_norm_sq(C) == total
        N = rows_norm_sq(C)
        for r, nr in zip(C, N):
            assert CyclotomicInt(p, nr) == CyclotomicInt(p, r).norm_sq()
        assert np.array_equal(canonicalize(C)[:, -1], np.zeros(7))
        mask = rows_rational(C)
        assert list(mask) == [CyclotomicInt(p, r).is_rational() for r in C]


def test_sum_norm_sq_big_values_stay_exact():
    C = np.array([[2**40, 0, 0], [0, 2**40, 0]], dtype=np.int64)
    got = sum_norm_sq(C)
    # each row is 2^40 zeta^j, so |.|^2 = 2^80
    assert got.to_int() == 2 * 2**80
