"""Truncated Fock-space linear algebra.

Dense numpy matrices for the ladder operators and polynomials thereof.
This module is the brute-force oracle layer: everything computed elsewhere
analytically can be cross-checked against a matrix calculation here.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np

TAIL_LEAK_THRESHOLD = 1e-8


class TruncationWarning(UserWarning):
    pass


@dataclass
class FockVector:
    """Truncated pure state: amplitudes c_0..c_{dim-1}."""

    amps: np.ndarray

    def __post_init__(self):
        self.amps = np.asarray(self.amps, dtype=complex)
        if self.amps.ndim != 1 or self.amps.size < 1:
            raise ValueError("amps must be a nonempty 1-d array")

    @property
    def dim(self):
        return self.amps.size

    def norm(self):
        return float(np.linalg.norm(self.amps))

    def normalized(self):
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize the zero state")
        return FockVector(self.amps / n)

    def padded(self, dim):
        if dim < self.dim:
            raise ValueError("cannot pad to a smaller dimension")
        out = np.zeros(dim, dtype=complex)
        out[: self.dim] = self.amps
        return FockVector(out)

    def to_json_dict(self):
        return {
            "dim": self.dim,
            "amps": [[float(c.real), float(c.imag)] for c in self.amps],
        }

    @classmethod
    def from_json_dict(cls, d):
        amps = np.array([complex(re, im) for re, im in d["amps"]])
        if len(amps) != d["dim"]:
            raise ValueError("dim does not match amps length")
        return cls(amps)

    def save(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_json_dict(), fh)

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_json_dict(json.load(fh))


def basis_state(n, dim):
    amps = np.zeros(dim, dtype=complex)
    amps[n] = 1.0
    return FockVector(amps)


def vacuum(dim):
    return basis_state(0, dim)


def coherent(alpha, dim):
    """Truncated coherent state |alpha>, renormalized on the truncation."""
    n = np.arange(dim)
    log_fact = np.cumsum(np.concatenate(([0.0], np.log(np.arange(1, dim)))))
    amps = np.exp(n * np.log(complex(alpha)) - 0.5 * log_fact) if alpha != 0 else np.zeros(dim, dtype=complex)
    if alpha == 0:
        amps[0] = 1.0
    amps = np.asarray(amps, dtype=complex)
    amps *= math.exp(-0.5 * abs(alpha) ** 2)
    return FockVector(amps)


def annihilator(dim):
    m = np.zeros((dim, dim), dtype=complex)
    for n in range(1, dim):
        m[n - 1, n] = math.sqrt(n)
    return m


def creator(dim):
    return annihilator(dim).conj().T


def number_op(dim):
    return np.diag(np.arange(dim, dtype=complex))


def poly_of_op(coeffs, A):
    """sum_k coeffs[k] A^k by Horner evaluation."""
    dim = A.shape[0]
    out = np.zeros_like(A)
    for c in reversed(list(coeffs)):
        out = out @ A + c * np.eye(dim)
    return out


def squeeze_op(xi, dim):
    """S(xi) = expm((xi* a^2 - xi a^dag^2)/2), truncated matrix exponential."""
    from scipy.linalg import expm

    a = annihilator(dim)
    ad = creator(dim)
    return expm(0.5 * (np.conj(xi) * (a @ a) - xi * (ad @ ad)))


def tail_leakage(psi: FockVector, A) -> float:
    """Tail mass of the top 10% of amplitudes of A|psi> (truncation metric)."""
    v = A @ psi.amps
    k = max(1, psi.dim // 10)
    tail = v[psi.dim - k:]
    total = np.vdot(v, v).real
    if total == 0.0:
        return 0.0
    return float(np.vdot(tail, tail).real / total)


@dataclass
class ExpectationResult:
    value: complex
    leakage: float = 0.0

    @property
    def leaky(self):
        return self.leakage > TAIL_LEAK_THRESHOLD


def expectation(psi: FockVector, A):
    """<psi|A|psi> for a normalized psi."""
    return complex(np.vdot(psi.amps, A @ psi.amps))


def expectation_checked(psi: FockVector, A) -> ExpectationResult:
    return ExpectationResult(expectation(psi, A), tail_leakage(psi, A))


def variance(psi: FockVector, A):
    """<A^2> - <A>^2 for Hermitian A; small negative values are clamped."""
    if np.max(np.abs(A - A.conj().T)) > 1e-12 * max(1.0, np.max(np.abs(A))):
        raise ValueError("variance requires a Hermitian operator")
    mean = expectation(psi, A).real
    second = expectation(psi, A @ A).real
    var = second - mean * mean
    if var < -1e-10:
        raise ValueError(f"variance came out negative beyond tolerance: {var}")
    return max(var, 0.0)


def quadrature_ops(f_coeffs, dim):
    """F = f(a) + f(a^dag), G = -i (f(a) - f(a^dag)) for real-coefficient f."""
    coeffs = np.asarray(f_coeffs, dtype=float)
    a = annihilator(dim)
    fa = poly_of_op(coeffs, a)
    fad = fa.conj().T
    F = fa + fad
    G = -1j * (fa - fad)
    return F, G


@dataclass
class UncertaintyReport:
    delta_F: float
    delta_G: float
    commutator_half: float
    defect: float
    no_var_F: float
    no_var_G: float
    leakage: float = 0.0


def normally_ordered_variance(psi: FockVector, f_coeffs, which):
    """<:(Delta F)^2:> (or G) via the normal-ordered operator expansion.

    For f with real coefficients, <:(dF)^2:> = <(d f+)^2> + <(d f)^2>
    + 2 <d f+ d f> with f = f(a); similarly for G with signs flipped on
    the first two terms.
    """
    dim = psi.dim
    a = annihilator(dim)
    fa = poly_of_op(np.asarray(f_coeffs, dtype=float), a)
    fad = fa.conj().T
    mf = expectation(psi, fa)
    # centered pieces
    dfa = fa - mf * np.eye(dim)
    dfad = fad - np.conj(mf) * np.eye(dim)
    t1 = expectation(psi, dfad @ dfad)
    t2 = expectation(psi, dfa @ dfa)
    t3 = expectation(psi, dfad @ dfa)
    if which == "F":
        return (t1 + t2 + 2 * t3).real
    if which == "G":
        return (-t1 - t2 + 2 * t3).real
    raise ValueError("which must be 'F' or 'G'")


def uncertainty_report(psi: FockVector, f_coeffs) -> UncertaintyReport:
    """Dispersions, commutator bound and defect for F, G built from f(a)."""
    F, G = quadrature_ops(f_coeffs, psi.dim)
    var_F = variance(psi, F)
    var_G = variance(psi, G)
    comm = expectation(psi, F @ G - G @ F)
    half_comm = 0.5 * abs(comm)
    dF = math.sqrt(var_F)
    dG = math.sqrt(var_G)
    leak = max(tail_leakage(psi, F), tail_leakage(psi, G))
    return UncertaintyReport(
        delta_F=dF,
        delta_G=dG,
        commutator_half=half_comm,
        defect=dF * dG - half_comm,
        no_var_F=normally_ordered_variance(psi, f_coeffs, "F"),
        no_var_G=normally_ordered_variance(psi, f_coeffs, "G"),
        leakage=leak,
    )
