"""Normal-ordering algebra for bosonic polynomials.

Product identity g(a) f(a+) = sum_k f^(k)(a+) g^(k)(a) / k!, Stirling-number
transforms between n^m and :n^m:, and the difference-operator expansion of
g(n) used by the deformed squeezing model.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np


class NormallyOrderedPoly:
    """sum coeffs[(n, m)] a+^n a^m with all creators on the left."""

    def __init__(self, coeffs=None):
        self.coeffs = {k: v for k, v in (coeffs or {}).items() if v != 0}

    def __getitem__(self, key):
        return self.coeffs.get(key, 0.0)

    def add_term(self, n, m, value):
        if value == 0:
            return
        key = (n, m)
        new = self.coeffs.get(key, 0.0) + value
        if new == 0:
            self.coeffs.pop(key, None)
        else:
            self.coeffs[key] = new

    def is_hermitian(self, tol=1e-12):
        keys = set(self.coeffs) | {(m, n) for n, m in self.coeffs}
        return all(abs(self[n, m] - np.conj(self[m, n])) <= tol for n, m in keys)

    def to_matrix(self, dim):
        from . import fock

        a = fock.annihilator(dim)
        ad = fock.creator(dim)
        out = np.zeros((dim, dim), dtype=complex)
        for (n, m), c in self.coeffs.items():
            out += c * np.linalg.matrix_power(ad, n) @ np.linalg.matrix_power(a, m)
        return out


def _poly_deriv(coeffs, order):
    """order-th derivative of a coefficient list [c0, c1, ...]."""
    c = list(coeffs)
    for _ in range(order):
        c = [k * c[k] for k in range(1, len(c))]
        if not c:
            return [0]
    return c


def a_pow_times_f(n, f_coeffs):
    """Normal order a^n f(a+) = sum_k C(n,k) f^(k)(a+) a^(n-k)."""
    out = NormallyOrderedPoly()
    for k in range(n + 1):
        fk = _poly_deriv(f_coeffs, k)
        binom = math.comb(n, k)
        for p, c in enumerate(fk):
            out.add_term(p, n - k, binom * c)
    return out


def normal_order_product(g_coeffs, f_coeffs):
    """Normal order g(a) f(a+) for polynomial g, f."""
    out = NormallyOrderedPoly()
    max_k = min(len(g_coeffs), len(f_coeffs))
    for k in range(max_k):
        fk = _poly_deriv(f_coeffs, k)
        gk = _poly_deriv(g_coeffs, k)
        inv_fact = 1.0 / math.factorial(k)
        for p, fc in enumerate(fk):
            for q, gc in enumerate(gk):
                out.add_term(p, q, inv_fact * fc * gc)
    return out


@lru_cache(maxsize=None)
def stirling_second(m, k):
    """Stirling number of the second kind S(m, k), exact integers."""
    if k < 0 or k > m:
        return 0
    if m == 0:
        return 1 if k == 0 else 0
    if k == 0:
        return 0
    return k * stirling_second(m - 1, k) + stirling_second(m - 1, k - 1)


@lru_cache(maxsize=None)
def stirling_first_signed(m, k):
    """Signed Stirling number of the first kind s(m, k), exact integers."""
    if k < 0 or k > m:
        return 0
    if m == 0:
        return 1 if k == 0 else 0
    return stirling_first_signed(m - 1, k - 1) - (m - 1) * stirling_first_signed(m - 1, k)


def stirling_second_alternating_sum(m, k):
    """S(m,k) by the explicit alternating sum; cross-check only."""
    total = 0
    for i in range(k + 1):
        total += (-1) ** (k - i) * math.comb(k, i) * i**m
    return total // math.factorial(k)


def antinormal_to_normal(antinormal):
    """Convert moments <a^n a+^m> (dict keyed (n, m)) to <a+^m a^n>.

    Uses a^n a+^m = sum_k C(n,k) m!/(m-k)! a+^(m-k) a^(n-k), solved
    top-down for the normal moments.
    """
    normal = {}
    for n, m in sorted(antinormal, key=lambda t: t[0] + t[1]):
        val = antinormal[n, m]
        for k in range(1, min(n, m) + 1):
            c = math.comb(n, k) * math.factorial(m) // math.factorial(m - k)
            val = val - c * normal[m - k, n - k]
        normal[m, n] = val
    return normal


@dataclass(frozen=True)
class DifferenceTable:
    """Forward differences (Delta^k g)(0) of a number function g."""

    g_values: tuple
    deltas: tuple

    def g(self, n):
        return self.g_values[n]

    @property
    def order(self):
        return len(self.deltas) - 1


def table_from_values(values):
    """DifferenceTable straight from the values g(0), g(1), ..."""
    values = list(values)
    deltas = []
    row = list(values)
    for _ in range(len(values)):
        deltas.append(row[0])
        row = [row[i + 1] - row[i] for i in range(len(row) - 1)]
    return DifferenceTable(tuple(values), tuple(deltas))


def ordered_number_function(g, K):
    """Difference table of g up to order K; g may be a callable on
    nonnegative integers or a polynomial coefficient list."""
    if K < 0:
        raise ValueError("K must be >= 0")
    if callable(g):
        values = [g(n) for n in range(K + 1)]
    else:
        coeffs = list(g)
        values = [sum(c * n**p for p, c in enumerate(coeffs)) for n in range(K + 1)]
    deltas = []
    row = list(values)
    for _ in range(K + 1):
        deltas.append(row[0])
        row = [row[i + 1] - row[i] for i in range(len(row) - 1)]
    return DifferenceTable(tuple(values), tuple(deltas))


def number_function_matrix(table: DifferenceTable, dim):
    """Reassemble g(n) from its Delta-expansion as a truncated matrix:
    sum_k deltas[k]/k! (a+)^k a^k.  Must reproduce diag(g(0..dim-1))."""
    from . import fock

    a = fock.annihilator(dim)
    ad = fock.creator(dim)
    out = np.zeros((dim, dim), dtype=complex)
    adk = np.eye(dim, dtype=complex)
    ak = np.eye(dim, dtype=complex)
    for k, d in enumerate(table.deltas):
        out += (d / math.factorial(k)) * (adk @ ak)
        adk = ad @ adk
        ak = a @ ak
    return out
