"""Normal-ordering algebra: product identity, Stirling transforms, differences."""

import math

import numpy as np
import pytest

from squeezelab import fock
from squeezelab.ordering import (
    NormallyOrderedPoly,
    a_pow_times_f,
    antinormal_to_normal,
    normal_order_product,
    number_function_matrix,
    ordered_number_function,
    stirling_first_signed,
    stirling_second,
    stirling_second_alternating_sum,
    table_from_values,
)


def test_basic_commutator():
    # a a+ = a+ a + 1
    out = normal_order_product([0, 1], [0, 1])
    assert out[1, 1] == pytest.approx(1.0)
    assert out[0, 0] == pytest.approx(1.0)
    assert len(out.coeffs) == 2


def test_a_squared_times_adag():
    # a^2 a+ = a+ a^2 + 2a
    out = normal_order_product([0, 0, 1], [0, 1])
    assert out[1, 2] == pytest.approx(1.0)
    assert out[0, 1] == pytest.approx(2.0)


def test_constant_g():
    out = normal_order_product([3.0], [1.0, 2.0, 1.0])
    assert out[0, 0] == pytest.approx(3.0)
    assert out[1, 0] == pytest.approx(6.0)
    assert out[2, 0] == pytest.approx(3.0)


def test_a_pow_times_f():
    # n=0 leaves f alone
    out = a_pow_times_f(0, [1, 2, 3])
    assert out[0, 0] == 1 and out[1, 0] == 2 and out[2, 0] == 3
    # n=1, f=z: a a+ = a+ a + 1
    out = a_pow_times_f(1, [0, 1])
    assert out[1, 1] == pytest.approx(1.0)
    assert out[0, 0] == pytest.approx(1.0)


@pytest.mark.parametrize("g_coeffs,f_coeffs", [
    ([0, 1], [0, 1]),
    ([0, 0, 1], [0, 0, 1]),
    ([1, 2, 0, 1], [0, 1, 1]),
    ([0, 0, 0, 1], [1, 0, 0, 0, 1]),
    ([2, -1, 3, 0, 1], [0, 2, 0, 1]),
])
def test_product_identity_matrix_oracle(g_coeffs, f_coeffs):
    dim = 16
    a = fock.annihilator(dim)
    ad = fock.creator(dim)
    lhs = fock.poly_of_op(g_coeffs, a) @ fock.poly_of_op(f_coeffs, ad)
    rhs = normal_order_product(g_coeffs, f_coeffs).to_matrix(dim)
    # only the subspace below the truncation corner is meaningful
    k = dim - max(len(g_coeffs), len(f_coeffs))
    assert np.max(np.abs(lhs[:k, :k] - rhs[:k, :k])) < 1e-10


def test_a_pow_matrix_oracle():
    dim = 8
    a = fock.annihilator(dim)
    ad = fock.creator(dim)
    lhs = a @ a @ fock.poly_of_op([0, 0, 1], ad)
    rhs = a_pow_times_f(2, [0, 0, 1]).to_matrix(dim)
    assert np.max(np.abs(lhs[:4, :4] - rhs[:4, :4])) < 1e-10


class TestStirling:
    def test_diagonal(self):
        for m in range(9):
            assert stirling_second(m, m) == 1
            assert stirling_first_signed(m, m) == 1

    def test_s32(self):
        # brute-force: partitions of {1,2,3} into 2 blocks
        assert stirling_second(3, 2) == 3

    def test_zero_above_diagonal(self):
        assert stirling_second(2, 5) == 0
        assert stirling_first_signed(1, 4) == 0

    def test_alternating_sum_cross_check(self):
        for m in range(8):
            for k in range(m + 1):
                assert stirling_second(m, k) == stirling_second_alternating_sum(m, k)

    def test_mutually_inverse(self):
        n = 11
        S = np.array([[stirling_second(m, k) for k in range(n)] for m in range(n)])
        s = np.array([[stirling_first_signed(m, k) for k in range(n)] for m in range(n)])
        assert np.array_equal(S @ s, np.eye(n, dtype=int))
        assert np.array_equal(s @ S, np.eye(n, dtype=int))


class TestDifferenceTable:
    def test_g_identity(self):
        t = ordered_number_function(lambda n: n, 6)
        assert t.deltas == (0, 1, 0, 0, 0, 0, 0)

    def test_g_squared(self):
        t = ordered_number_function(lambda n: n * n, 5)
        assert t.deltas[:3] == (0, 1, 2)
        assert all(d == 0 for d in t.deltas[3:])

    def test_constant(self):
        t = ordered_number_function(lambda n: 4.5, 4)
        assert t.deltas == (4.5, 0, 0, 0, 0)

    def test_polynomial_coefficient_input(self):
        # coefficient list [0, 0, 1] means g(n) = n^2
        t = ordered_number_function([0, 0, 1], 5)
        assert t.g_values == (0, 1, 4, 9, 16, 25)
        assert t.deltas[:3] == (0, 1, 2)

    def test_table_from_values(self):
        t = table_from_values([0, 1, 4, 9, 16])
        assert t.deltas[:3] == (0, 1, 2)
        assert t.g(3) == 9

    def test_binomial_identity(self):
        # deltas[k] = sum_i (-1)^(k-i) C(k,i) g(i)
        vals = [1.0, 2.5, -0.5, 7.0, 3.0, 3.0]
        t = table_from_values(vals)
        for k in range(len(vals)):
            ref = sum((-1) ** (k - i) * math.comb(k, i) * vals[i] for i in range(k + 1))
            assert t.deltas[k] == pytest.approx(ref)


@pytest.mark.parametrize("g,K", [
    (lambda n: n, 12),
    (lambda n: n * n, 12),
    (lambda n: 2.0**n, 11),  # truncated exponential: needs all orders
])
def test_delta_expansion_reproduces_diagonal(g, K):
    """sum_k deltas[k]/k! (a+)^k a^k = diag(g(0..dim-1)) entrywise."""
    dim = 12
    t = ordered_number_function(g, K)
    m = number_function_matrix(t, dim)
    ref = np.diag([g(n) for n in range(dim)])
    assert np.max(np.abs(m - ref)) < 1e-10


def test_antinormal_to_normal_matrix_oracle():
    rng = np.random.default_rng(19)
    dim = 40
    a = fock.annihilator(dim)
    ad = fock.creator(dim)
    amps = rng.normal(size=10) * 0.5 ** np.arange(10)
    psi = fock.FockVector(np.concatenate([amps, np.zeros(dim - 10)])).normalized()
    anti = {}
    for n in range(4):
        for m in range(4 - n):
            anti[n, m] = fock.expectation(
                psi, np.linalg.matrix_power(a, n) @ np.linalg.matrix_power(ad, m))
    normal = antinormal_to_normal(anti)
    for (m, n), val in normal.items():
        ref = fock.expectation(
            psi, np.linalg.matrix_power(ad, m) @ np.linalg.matrix_power(a, n))
        assert abs(val - ref) < 1e-10


def test_normally_ordered_poly_hermitian_flag():
    p = NormallyOrderedPoly({(1, 0): 1.0 + 2j, (0, 1): 1.0 - 2j, (1, 1): 3.0})
    assert p.is_hermitian()
    q = NormallyOrderedPoly({(1, 0): 1.0, (0, 1): -1.0})
    assert not q.is_hermitian()
