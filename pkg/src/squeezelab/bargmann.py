"""Fock-Bargmann representation of truncated pure states.

A state with Fock amplitudes c_n is the entire function
psi(z) = sum_n c_n z^n / sqrt(n!) acting on the vacuum as psi(a+)|0>.
Truncated states are polynomials, so every series in k below terminates
at the truncation order and no convergence control is needed.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .fock import FockVector, coherent, vacuum  # noqa: F401 (re-exported)


def _sqrt_factorials(dim):
    out = np.empty(dim)
    out[0] = 1.0
    for n in range(1, dim):
        out[n] = out[n - 1] * math.sqrt(n)
    return out


@dataclass
class EntireState:
    """Pure state as Fock amplitudes plus Taylor data of psi(z)."""

    fock: FockVector

    @property
    def dim(self):
        return self.fock.dim

    @property
    def taylor(self):
        """a_n with psi(z) = sum a_n z^n;  a_n = c_n / sqrt(n!)."""
        return self.fock.amps / _sqrt_factorials(self.dim)

    @classmethod
    def from_taylor(cls, a):
        a = np.asarray(a, dtype=complex)
        return cls(FockVector(a * _sqrt_factorials(a.size)))

    @classmethod
    def from_fock_amps(cls, c):
        return cls(FockVector(np.asarray(c, dtype=complex)))

    def __call__(self, z):
        """Evaluate psi(z) by Horner's rule."""
        a = self.taylor
        val = 0.0 + 0.0j
        for coeff in a[::-1]:
            val = val * z + coeff
        return val

    def derivatives_at(self, beta):
        """psi^(k)(beta) for k = 0..dim-1 by Taylor re-expansion."""
        a = self.taylor
        n = a.size
        shifted = _shift_taylor(a, beta)
        facts = np.cumprod(np.concatenate(([1.0], np.arange(1, n))))
        return shifted * facts

    def padded(self, dim):
        return EntireState(self.fock.padded(dim))


def _shift_taylor(a, alpha):
    """Taylor coefficients of p(z + alpha) for polynomial p with coeffs a."""
    n = a.size
    out = np.zeros(n, dtype=complex)
    # binomial expansion: out[k] = sum_{j>=k} a[j] C(j,k) alpha^(j-k)
    for j in range(n):
        if a[j] == 0:
            continue
        term = a[j]
        out[j] += term
        binom = 1.0
        pw = 1.0 + 0.0j
        for k in range(j - 1, -1, -1):
            binom = binom * (k + 1) / (j - k)
            pw = pw * alpha
            out[k] += a[j] * binom * pw
    return out


def shift_state(psi: EntireState, alpha) -> EntireState:
    """Action of e^{alpha a}: psi(z) -> psi(z + alpha)."""
    return EntireState.from_taylor(_shift_taylor(psi.taylor, alpha))


def scale_state(psi: EntireState, mu) -> EntireState:
    """Action of mu^n: psi(z) -> psi(mu z)."""
    a = psi.taylor
    return EntireState.from_taylor(a * mu ** np.arange(a.size))


def inner(psi1: EntireState, psi2: EntireState):
    """<psi1|psi2> = sum_k psi1*^(k)(0) psi2^(k)(0) / k!."""
    d = max(psi1.dim, psi2.dim)
    c1 = psi1.padded(d).fock.amps
    c2 = psi2.padded(d).fock.amps
    return complex(np.vdot(c1, c2))


def normalization(psi: EntireState):
    """N such that N * psi has unit norm."""
    n2 = inner(psi, psi).real
    if n2 == 0.0:
        raise ValueError("zero state has no normalization")
    return 1.0 / math.sqrt(n2)


def moment(psi: EntireState, n, m):
    """Normally ordered moment <a+^n a^m> from the Taylor data."""
    c = psi.fock.amps
    total = 0.0 + 0.0j
    for k in range(psi.dim - max(n, m)):
        # sqrt((n+k)!/k!) built as a short product so large dims never
        # touch the (overflowing) bare factorials
        fn = 1.0
        for j in range(k + 1, k + n + 1):
            fn *= math.sqrt(j)
        fm = 1.0
        for j in range(k + 1, k + m + 1):
            fm *= math.sqrt(j)
        total += np.conj(c[n + k]) * c[m + k] * fn * fm
    return total


def char_fn(psi: EntireState, beta):
    """Normally ordered characteristic function <e^{beta a+} e^{-beta* a}>.

    The first factor is the coefficient-conjugated function psi* evaluated
    at beta, obtained as conj(psi^(k)(conj(beta))).
    """
    d1 = psi.derivatives_at(np.conj(beta))
    d2 = psi.derivatives_at(-np.conj(beta))
    total = 0.0 + 0.0j
    inv_fact = 1.0
    for k in range(psi.dim):
        if k > 0:
            inv_fact /= k
        total += np.conj(d1[k]) * d2[k] * inv_fact
    return total


def squeeze_params(xi):
    """mu = cosh|xi|, nu = e^{i arg xi} sinh|xi|."""
    r = abs(xi)
    if r == 0.0:
        return 1.0, 0.0 + 0.0j
    phase = xi / r
    return math.cosh(r), phase * math.sinh(r)


def squeezed_char_fn(psi: EntireState, xi, beta):
    """Characteristic function of S(xi)|psi> without building the state."""
    mu, nu = squeeze_params(xi)
    beta_p = mu * beta + nu * np.conj(beta)
    damp = -abs(nu) ** 2 * abs(beta) ** 2 - mu * (np.conj(nu) * beta**2).real
    return char_fn(psi, beta_p) * cmath.exp(damp)


def q_function(psi: EntireState, alpha, normalized=False):
    """Husimi Q at alpha: |psi(alpha*)|^2 e^{-|alpha|^2}.

    Unnormalized by default (matching an arbitrary overall scale of psi);
    with normalized=True the value integrates to one over phase space.
    """
    val = abs(psi(np.conj(alpha))) ** 2 * math.exp(-abs(alpha) ** 2)
    if normalized:
        val *= normalization(psi) ** 2 / math.pi
    return val


def q_grid(psi: EntireState, x_min, x_max, y_min, y_max, nx, ny, normalized=False):
    """Q on a rectangular grid; returns (xs, ys, Q[iy, ix])."""
    xs = np.linspace(x_min, x_max, nx)
    ys = np.linspace(y_min, y_max, ny)
    scale = normalization(psi) ** 2 / math.pi if normalized else 1.0
    a = psi.taylor
    out = np.empty((ny, nx))
    for iy, y in enumerate(ys):
        zs = xs - 1j * y  # alpha* on this row
        vals = np.zeros_like(zs)
        for coeff in a[::-1]:
            vals = vals * zs + coeff
        out[iy] = np.abs(vals) ** 2 * np.exp(-(xs**2 + y**2)) * scale
    return xs, ys, out
