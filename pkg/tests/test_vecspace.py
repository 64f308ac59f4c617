from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qgeom.errors import BadRange
from qgeom.gf import field_of_order
from qgeom.vecspace import (
    AffinePlane,
    PointSet,
    all_points,
    coset_reps,
    count_independent_tuples,
    decode,
    dot,
    dot_arr,
    encode,
    enumerate_affine,
    enumerate_cosets,
    enumerate_grassmannian,
    full_space,
    gaussian_binomial,
    orth_complement,
    span,
    verify_gbc_identities,
    zero_subspace,
)

from .conftest import point_sets


def _brute_subspaces(q, n, k):
    """Distinct point sets spanned by k-tuples of vectors, kept when of size q^k."""
    F = field_of_order(q)
    X = all_points(q, n)
    coeffs = all_points(q, k) if k else np.zeros((1, 0), dtype=np.int64)
    seen = set()
    for rows in itertools.combinations(range(len(X)), k):
        M = X[list(rows)]
        pts = np.zeros((len(coeffs), n), dtype=np.int64)
        for j in range(k):
            pts = F.add_arr(pts, F.mul_arr(coeffs[:, j:j + 1], M[j][None, :]))
        s = frozenset(encode(pts, q).tolist())
        if len(s) == q**k:
            seen.add(s)
    return seen


def _brute_gaussian(n, k, q):
    num = den = 1
    for i in range(k):
        num *= q**n - q**i
        den *= q**k - q**i
    return num // den if 0 <= k <= n else 0


@pytest.mark.parametrize("q,n", [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (4, 2), (5, 2)])
def test_grassmannian_matches_bruteforce(q, n):
    F = field_of_order(q)
    for k in range(n + 1):
        got = {frozenset(encode(V.points(), q).tolist()) for V in enumerate_grassmannian(k, n, F)}
        assert got == _brute_subspaces(q, n, k)


@pytest.mark.parametrize("n,k,q,expected", [(2, 1, 2, 3), (4, 2, 2, 35), (5, 2, 3, 1210), (3, 1, 3, 13),
                                            (4, 2, 3, 130), (2, 1, 3, 4), (7, 0, 5, 1), (3, 4, 2, 0)])
def test_gaussian_binomial_values(n, k, q, expected):
    assert gaussian_binomial(n, k, q) == expected


def test_gaussian_binomial_negative_k_is_zero():
    assert gaussian_binomial(3, -1, 2) == 0


@given(st.integers(0, 9), st.integers(0, 9), st.sampled_from([2, 3, 4, 5, 7, 8, 9]))
def test_gaussian_binomial_product_formula(n, k, q):
    assert gaussian_binomial(n, k, q) == _brute_gaussian(n, k, q)


@given(st.integers(1, 10), st.integers(0, 10), st.sampled_from([2, 3, 4, 5, 7, 8, 9]))
def test_gaussian_binomial_pascal_symmetry_sandwich(n, k, q):
    g = gaussian_binomial
    if k <= n:
        assert g(n, k, q) == g(n, n - k, q)
        assert q ** (k * (n - k)) <= g(n, k, q) <= 4 * q ** (k * (n - k))
    if 1 <= k <= n:
        assert g(n, k, q) == g(n - 1, k - 1, q) + q**k * g(n - 1, k, q)


def test_gaussian_binomial_is_exact_big_integer():
    v = gaussian_binomial(40, 20, 9)
    assert isinstance(v, int) and v > 2**64
    assert v == _brute_gaussian(40, 20, 9)


@pytest.mark.parametrize("q,n,k", [(2, 3, 2), (3, 2, 1), (3, 3, 2), (4, 2, 2)])
def test_count_independent_tuples(q, n, k):
    # ordered bases of k-subspaces: |G(k,n)| * |GL_k|
    gl = 1
    for i in range(k):
        gl *= q**k - q**i
    assert count_independent_tuples(k, n, field_of_order(q)) == gaussian_binomial(n, k, q) * gl


def test_grassmannian_bad_range():
    with pytest.raises(BadRange):
        list(enumerate_grassmannian(3, 2, field_of_order(2)))
    with pytest.raises(BadRange):
        list(enumerate_grassmannian(-1, 2, field_of_order(2)))


def test_dot_examples():
    F2, F3 = field_of_order(2), field_of_order(3)
    assert dot(F2, (0, 0, 0), (1, 1, 1)) == 0
    assert dot(F2, (1, 1, 0), (1, 1, 1)) == 0
    assert dot(F3, (1, 2), (2, 2)) == 0


def test_span_examples():
    F2 = field_of_order(2)
    assert span(F2, [], 3).k == 0
    assert span(F2, [(1, 0, 0), (0, 1, 0), (0, 0, 1)]).k == 3
    assert span(F2, [(1, 1, 0), (0, 1, 1), (1, 0, 1)]).k == 2


def test_span_is_canonical():
    F3 = field_of_order(3)
    a = span(F3, [(1, 2, 0), (0, 1, 1)])
    b = span(F3, [(1, 0, 1), (0, 2, 2)])
    assert set(encode(a.points(), 3)) == set(encode(b.points(), 3))
    assert a == b and hash(a) == hash(b)


def test_orth_complement_examples():
    F2 = field_of_order(2)
    assert orth_complement(zero_subspace(F2, 3)) == full_space(F2, 3)
    assert orth_complement(full_space(F2, 3)) == zero_subspace(F2, 3)
    L = span(F2, [(1, 1)])
    assert L.perp() == L


@pytest.mark.parametrize("q,n", [(2, 4), (3, 3), (4, 2), (9, 2)])
def test_perp_properties(q, n):
    F = field_of_order(q)
    for k in range(n + 1):
        for V in enumerate_grassmannian(k, n, F):
            W = V.perp()
            assert W.k == n - k
            assert W.perp() == V
            assert _orthogonal(F, V, W)


def _orthogonal(F, V, W):
    if V.k == 0 or W.k == 0:
        return True
    return bool(np.all(dot_arr(F, V.points(), W.points()) == 0))


def test_coset_examples():
    F3 = field_of_order(3)
    U = span(F3, [(1, 0)])
    assert [P.rep for P in enumerate_cosets(U)] == [(0, 0), (0, 1), (0, 2)]
    assert len(list(enumerate_cosets(full_space(F3, 2)))) == 1
    assert len(list(enumerate_cosets(zero_subspace(F3, 2)))) == 9


def test_affine_counts():
    F3 = field_of_order(3)
    assert len(list(enumerate_affine(1, 2, F3))) == 12
    assert len(list(enumerate_affine(2, 2, F3))) == 1
    assert len(list(enumerate_affine(0, 2, F3))) == 9


@pytest.mark.parametrize("q,n", [(2, 3), (3, 2), (4, 2), (3, 3)])
def test_cosets_partition_and_reps_canonical(q, n):
    F = field_of_order(q)
    for k in range(n + 1):
        for U in enumerate_grassmannian(k, n, F):
            seen = np.zeros(q**n, dtype=int)
            for P in enumerate_cosets(U):
                pts = P.points()
                idx = encode(pts, q)
                seen[idx] += 1
                # canonical rep is the lexicographic minimum and is recovered from any member
                assert int(idx.min()) == int(encode(np.array([P.rep]), q)[0])
                for x in pts[:: max(1, len(pts) // 3)]:
                    assert AffinePlane.through(x, U) == P
            assert np.all(seen == 1)


def test_affine_planes_distinct():
    F = field_of_order(4)
    planes = list(enumerate_affine(1, 2, F))
    assert len(set(planes)) == len(planes) == 4 * 5


@given(point_sets())
def test_pointset_encoding_roundtrip(E):
    assert np.array_equal(encode(decode(E.indices, E.q, E.n), E.q), E.indices)
    assert PointSet(E.field, E.n, list(E)) == E
    assert len(E.complement()) == E.q**E.n - len(E)


@given(point_sets(nonempty=True), st.data())
def test_translate_preserves_size(E, data):
    t = data.draw(st.lists(st.integers(0, E.q - 1), min_size=E.n, max_size=E.n))
    assert len(E.translate(t)) == len(E)


def test_index_order_is_lexicographic():
    X = all_points(3, 2)
    assert [tuple(r) for r in X] == sorted(tuple(r) for r in X)
    assert tuple(X[5]) == (1, 2)


@pytest.mark.parametrize("n_max,q", [(5, 2), (4, 3), (3, 4)])
def test_gbc_identity_report(n_max, q):
    checks = verify_gbc_identities(n_max, q)
    assert checks and all(c.holds is not False for c in checks)


def test_containing_and_perp_counts():
    F2 = field_of_order(2)
    z = (1, 0, 0)
    lines = list(enumerate_grassmannian(1, 3, F2))
    assert sum(V.contains(z) for V in lines) == gaussian_binomial(2, 0, 2) == 1
    assert coset_reps(lines[0]).shape == (4, 3)
