"""Fock-Bargmann layer: discrete-sum formulas vs matrix and quadrature oracles."""

import math

import numpy as np
import pytest

from squeezelab import bargmann, fock
from squeezelab.bargmann import (
    EntireState,
    char_fn,
    inner,
    moment,
    normalization,
    q_function,
    q_grid,
    scale_state,
    shift_state,
    squeezed_char_fn,
)


def random_state(rng, dim):
    amps = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    amps *= 0.5 ** np.arange(dim)  # decay so truncation is harmless
    return EntireState(fock.FockVector(amps).normalized())


def test_taylor_fock_relation():
    c = np.array([1.0, 2.0, 3.0, 4.0])
    st = EntireState.from_fock_amps(c)
    a = st.taylor
    for n in range(4):
        assert a[n] * math.sqrt(math.factorial(n)) == pytest.approx(c[n])
    back = EntireState.from_taylor(a)
    assert np.allclose(back.fock.amps, c)


def test_evaluation_and_derivatives():
    st = EntireState.from_taylor([1.0, 2.0, 3.0])  # 1 + 2z + 3z^2
    z = 0.7 - 0.2j
    assert st(z) == pytest.approx(1 + 2 * z + 3 * z * z)
    d = st.derivatives_at(z)
    assert d[0] == pytest.approx(1 + 2 * z + 3 * z * z)
    assert d[1] == pytest.approx(2 + 6 * z)
    assert d[2] == pytest.approx(6.0)


def test_inner_normalized():
    rng = np.random.default_rng(0)
    st = random_state(rng, 12)
    assert inner(st, st).real == pytest.approx(1.0, abs=1e-12)


def test_inner_vacuum_coherent():
    vac = EntireState(fock.vacuum(40))
    coh = EntireState(fock.coherent(1.0, 40))
    assert inner(vac, coh) == pytest.approx(math.exp(-0.5), abs=1e-10)


def test_inner_vs_gaussian_quadrature():
    """The discrete sum equals the phase-space integral
    (1/pi) int psi1*(z) psi2(z) e^{-|z|^2} d^2z."""
    rng = np.random.default_rng(4)
    st1 = random_state(rng, 6)
    st2 = random_state(rng, 6)
    n = 220
    xs = np.linspace(-6, 6, n)
    h = xs[1] - xs[0]
    total = 0.0 + 0.0j
    for y in xs:
        zs = xs + 1j * y
        v1 = np.array([st1(z) for z in zs])
        v2 = np.array([st2(z) for z in zs])
        total += np.sum(np.conj(v1) * v2 * np.exp(-(xs**2 + y**2)))
    total *= h * h / math.pi
    assert abs(total - inner(st1, st2)) < 1e-8


def test_normalization():
    vac = EntireState(fock.vacuum(5))
    assert normalization(vac) == pytest.approx(1.0)
    double = EntireState(fock.FockVector(2.0 * fock.vacuum(5).amps))
    assert normalization(double) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        normalization(EntireState(fock.FockVector(np.zeros(3))))


def test_moment_trivial():
    vac = EntireState(fock.vacuum(8))
    assert moment(vac, 1, 1) == 0
    assert moment(vac, 0, 0) == pytest.approx(1.0)
    one = EntireState(fock.basis_state(1, 8))
    assert moment(one, 1, 1) == pytest.approx(1.0)


def test_moment_vs_matrix_oracle():
    rng = np.random.default_rng(9)
    st = random_state(rng, 20)
    dim = st.dim
    a = fock.annihilator(dim)
    ad = fock.creator(dim)
    for n, m in [(0, 1), (1, 0), (1, 1), (2, 0), (2, 2), (0, 3)]:
        ref = fock.expectation(st.fock, np.linalg.matrix_power(ad, n)
                               @ np.linalg.matrix_power(a, m))
        assert moment(st, n, m) == pytest.approx(ref, abs=1e-10)


def test_char_fn_basics():
    rng = np.random.default_rng(2)
    st = random_state(rng, 10)
    assert char_fn(st, 0.0) == pytest.approx(1.0, abs=1e-12)
    vac = EntireState(fock.vacuum(10))
    for b in (0.3, 1j, -0.5 + 0.2j):
        assert char_fn(vac, b) == pytest.approx(1.0, abs=1e-12)


def test_char_fn_derivatives_give_moments():
    """d^{n+m} Phi / d beta^n d(-beta*)^m at 0 = <a+^n a^m> (finite differences)."""
    rng = np.random.default_rng(17)
    st = random_state(rng, 14)
    h = 1e-4
    # <a+ a> via mixed second difference over (beta, beta*) as independent
    # real directions: Phi(b) = sum_{n,m} <a+^n a^m> b^n (-b*)^m /(n! m!)
    def phi(br, bi):
        return char_fn(st, complex(br, bi))

    # d/d beta d/d(-beta*): with beta = x+iy, beta* = x-iy,
    # d/dbeta = (d/dx - i d/dy)/2, d/d(-beta*) = -(d/dx + i d/dy)/2
    fxx = (phi(h, 0) - 2 * phi(0, 0) + phi(-h, 0)) / h**2
    fyy = (phi(0, h) - 2 * phi(0, 0) + phi(0, -h)) / h**2
    mixed = -(fxx + fyy) / 4
    assert abs(mixed - moment(st, 1, 1)) < 1e-6


def test_squeezed_char_fn_trivial():
    rng = np.random.default_rng(21)
    st = random_state(rng, 12)
    b = 0.4 - 0.1j
    assert squeezed_char_fn(st, 0.0, b) == pytest.approx(char_fn(st, b))


def test_squeezed_char_fn_vs_matrix_squeeze():
    dim = 60
    vac = EntireState(fock.vacuum(dim))
    xi = 0.5
    sq = fock.squeeze_op(xi, dim) @ fock.vacuum(dim).amps
    sq_state = EntireState(fock.FockVector(sq))
    for b in (0.2, 0.3 + 0.1j, -0.4j):
        direct = char_fn(sq_state, b)
        indirect = squeezed_char_fn(vac, xi, b)
        assert abs(direct - indirect) < 1e-8


def test_shift_scale_states():
    rng = np.random.default_rng(30)
    st = random_state(rng, 10)
    assert np.allclose(shift_state(st, 0.0).taylor, st.taylor)
    vac = EntireState(fock.vacuum(6))
    assert np.allclose(scale_state(vac, 2.7).fock.amps, vac.fock.amps)
    # psi(z + alpha) evaluated at z equals psi(z + alpha)
    alpha = 0.3 + 0.2j
    sh = shift_state(st, alpha)
    for z in (0.0, 0.5, -0.2 + 0.4j):
        assert abs(sh(z) - st(z + alpha)) < 1e-12


def test_shift_matches_matrix_exponential():
    """e^{alpha a}|gamma> is proportional to |gamma> with factor e^{alpha gamma}."""
    from scipy.linalg import expm

    dim = 50
    alpha, gamma = 0.4, 0.9
    coh = fock.coherent(gamma, dim)
    ref = expm(alpha * fock.annihilator(dim)) @ coh.amps
    shifted = shift_state(EntireState(coh), alpha)
    assert np.max(np.abs(shifted.fock.amps - ref)) < 1e-9


def test_q_function_vacuum_and_coherent():
    vac = EntireState(fock.vacuum(10))
    assert q_function(vac, 0.0) == pytest.approx(1.0)
    coh = EntireState(fock.coherent(2.0, 50))
    # maximum at alpha = 2
    q_center = q_function(coh, 2.0)
    for off in (1.5, 2.5, 2.0 + 0.5j):
        assert q_function(coh, off) < q_center


def test_q_function_equals_coherent_overlap():
    rng = np.random.default_rng(40)
    st = random_state(rng, 15)
    for alpha in (0.3, -0.7 + 0.4j, 1.2j):
        ov = abs(bargmann.inner(EntireState(fock.coherent(alpha, st.dim)), st)) ** 2
        assert abs(q_function(st, alpha) - ov) < 1e-9


def test_normalized_q_integrates_to_one():
    rng = np.random.default_rng(8)
    st = random_state(rng, 8)
    xs, ys, q = q_grid(st, -6, 6, -6, 6, 121, 121, normalized=True)
    h = xs[1] - xs[0]
    assert abs(np.sum(q) * h * h - 1.0) < 1e-3


def test_q_grid_matches_pointwise():
    rng = np.random.default_rng(14)
    st = random_state(rng, 7)
    xs, ys, q = q_grid(st, -2, 2, -1, 1, 9, 5)
    for iy in (0, 2, 4):
        for ix in (0, 4, 8):
            alpha = complex(xs[ix], ys[iy])
            assert q[iy, ix] == pytest.approx(q_function(st, alpha), abs=1e-12)
