"""Problem builders and closed-form solutions for the squeezing models.

Two families are supported: polynomial quadrature generalizations
f(a) + f(a+) and deformed models built from g(n) a.  For lambda = 1 both
admit closed forms (coherent superpositions over the roots of f, and
nonlinear coherent states, respectively).
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np
import sympy

from . import fock, numerics, ordering
from .bargmann import EntireState
from .ordering import DifferenceTable
from .solver import RayOde


@dataclass(frozen=True)
class PolyFSpec:
    """f(z) = sum coeffs[k] z^k with real coefficients, plus lambda, beta."""

    coeffs: tuple
    lam: complex
    beta: complex

    def __post_init__(self):
        if len(self.coeffs) < 2 or self.coeffs[-1] == 0:
            raise ValueError("f must have degree >= 1")
        if any(abs(complex(c).imag) > 0 for c in self.coeffs):
            raise ValueError("f must have real coefficients")

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def gamma(self):
        return self.beta / 2


@dataclass(frozen=True)
class DeformedGSpec:
    """Deformed model f = g(n) a; g given by values on 0..K."""

    g_values: tuple
    lam: complex
    beta: complex

    def table(self) -> DifferenceTable:
        return ordering.table_from_values(self.g_values)


def build_poly_f_ode(spec: PolyFSpec) -> RayOde:
    """ODE f(d/dz) psi = (w f(z) + u) psi with w=(lam-1)/(lam+1), u=beta/(lam+1)."""
    if spec.lam == -1:
        raise ValueError("lambda = -1 is excluded (division by lambda + 1)")
    w = (spec.lam - 1) / (spec.lam + 1)
    u = spec.beta / (spec.lam + 1)
    K = spec.degree
    polys = []
    p0 = [-w * complex(c) for c in spec.coeffs]
    p0[0] += complex(spec.coeffs[0]) - u
    polys.append(tuple(p0))
    for k in range(1, K + 1):
        polys.append((complex(spec.coeffs[k]),))
    return RayOde(polys=tuple(polys), lam=complex(spec.lam), beta=complex(spec.beta))


def build_deformed_ode(spec: DeformedGSpec, K_max=None) -> RayOde:
    """ODE sum_k C_k psi^(k) = beta psi from the Delta-expansion of g(n).

    C_0 = (1-lam) g(0) z and, for k >= 1,
    C_k = (1+lam) (D^{k-1}g)(0)/(k-1)! z^{k-1} + (1-lam) (D^k g)(0)/k! z^{k+1}.
    For polynomial g of degree d the family terminates at k = d + 1.
    """
    if spec.lam == -1:
        raise ValueError("lambda = -1 is excluded")
    table = spec.table()
    deltas = list(table.deltas)
    order = 0
    for k in range(1, len(deltas) + 1):
        if deltas[k - 1] != 0:
            order = k
    if order == 0:
        raise ValueError("g vanishes identically")
    if K_max is not None and order > K_max:
        raise ValueError(
            f"g requires ODE order {order} > K_max={K_max}; "
            "truncate g or raise K_max"
        )
    lam = complex(spec.lam)
    beta = complex(spec.beta)
    polys = [(-beta, (1 - lam) * table.g(0))]
    for k in range(1, order + 1):
        p = [0.0] * (k + 2)
        p[k - 1] = (1 + lam) * deltas[k - 1] / math.factorial(k - 1)
        if k < len(deltas):
            p[k + 1] = (1 - lam) * deltas[k] / math.factorial(k)
        while p and p[-1] == 0:
            p.pop()
        polys.append(tuple(p))
    return RayOde(polys=tuple(polys), lam=lam, beta=beta)


class RecurrenceInconsistent(ValueError):
    pass


class RecurrenceFree(Exception):
    """g(k) = 0 with zero numerator: the next derivative is a free parameter."""

    def __init__(self, k):
        super().__init__(f"psi^({k + 1})(0) is a free parameter (g({k}) = 0)")
        self.k = k


def initial_condition_recurrence(spec: DeformedGSpec, psi0, order, phi=0.0,
                                 free_values=None):
    """Derivatives psi_phi^(k)(0), k = 0..order, for the deformed model.

    Uses the three-term relation
    (1+lam) g(k) e^{i phi} psi^(k+1)(0)
      = beta psi^(k)(0) - k (1-lam) g(k-1) e^{-i phi} psi^(k-1)(0).
    Whenever g(k) = 0 the left side vanishes: a nonzero right side is an
    inconsistency, a zero right side leaves psi^(k+1)(0) free (supplied via
    `free_values`, default 0, except psi^(0) which is always `psi0`).
    """
    table = spec.table()
    lam = complex(spec.lam)
    beta = complex(spec.beta)
    em = cmath.exp(-1j * phi)
    ep = cmath.exp(1j * phi)
    free_values = list(free_values or [])
    d = np.zeros(order + 1, dtype=complex)
    d[0] = psi0
    for k in range(order):
        if k >= len(table.g_values):
            raise ValueError("g_values too short for requested order")
        gk = table.g(k)
        rhs = beta * d[k]
        if k >= 1:
            rhs -= k * (1 - lam) * table.g(k - 1) * em * d[k - 1]
        if gk != 0:
            d[k + 1] = rhs / ((1 + lam) * gk * ep)
        else:
            if abs(rhs) > 1e-12 * max(1.0, float(np.max(np.abs(d)))):
                raise RecurrenceInconsistent(
                    f"g({k}) = 0 but the recurrence numerator is nonzero; "
                    "no analytic solution with these data"
                )
            d[k + 1] = free_values.pop(0) if free_values else 0.0
    return d


@dataclass
class RootSet:
    roots: list  # (root, multiplicity)
    separable: bool
    discriminant: complex


def _newton_polish(coeffs, x, steps=3):
    dcoeffs = [k * c for k, c in enumerate(coeffs)][1:]
    for _ in range(steps):
        p = sum(c * x**k for k, c in enumerate(coeffs))
        dp = sum(c * x**k for k, c in enumerate(dcoeffs))
        if dp == 0:
            break
        x = x - p / dp
    return x


def find_roots(f_coeffs, gamma, cluster_tol=1e-7):
    """Roots of f(z) = gamma with multiplicities, companion-matrix based."""
    coeffs = [complex(c) for c in f_coeffs]
    coeffs[0] -= complex(gamma)
    # numpy.roots wants highest degree first
    raw = np.roots(coeffs[::-1])
    polished = [_newton_polish(coeffs, r) for r in raw]
    clusters = []
    for r in sorted(polished, key=lambda z: (z.real, z.imag)):
        for i, (c, k) in enumerate(clusters):
            if abs(r - c) < cluster_tol:
                clusters[i] = ((c * k + r) / (k + 1), k + 1)
                break
        else:
            clusters.append((r, 1))
    return clusters


def separability_check(f_coeffs, gamma=0.0):
    """All roots of f - gamma simple <=> resultant(f - gamma, f') != 0."""
    z = sympy.symbols("z")
    poly = sum(sympy.nsimplify(c, rational=True) * z**k
               for k, c in enumerate(f_coeffs)) - sympy.nsimplify(gamma, rational=True)
    disc = sympy.resultant(poly, sympy.diff(poly, z), z)
    disc = complex(disc)
    return disc != 0, disc


def root_report(f_coeffs, gamma=0.0) -> RootSet:
    separable, disc = separability_check(f_coeffs, gamma)
    return RootSet(roots=find_roots(f_coeffs, gamma), separable=separable,
                   discriminant=disc)


def coherent_superposition(roots, weights, dim, poly_coeffs=None):
    """State sum_alpha w_alpha P_{k-1}(a+ - alpha*) |alpha> truncated at dim.

    `roots` are (alpha, multiplicity) pairs; for a multiple root the
    polynomial P (coefficient list, degree multiplicity-1) must be given in
    poly_coeffs (one list per root, ignored for simple roots unless given).
    """
    amps = np.zeros(dim, dtype=complex)
    ad = fock.creator(dim)
    for i, ((alpha, mult), w) in enumerate(zip(roots, weights)):
        base = fock.coherent(alpha, dim).amps
        pc = None
        if poly_coeffs is not None and poly_coeffs[i] is not None:
            pc = poly_coeffs[i]
        elif mult > 1:
            raise ValueError(f"root {alpha} has multiplicity {mult}; supply P coefficients")
        if pc is None:
            amps += w * base
        else:
            op = fock.poly_of_op(pc, ad - np.conj(alpha) * np.eye(dim))
            amps += w * (op @ base)
    return EntireState(fock.FockVector(amps))


def lambda_one_solution_poly_f(spec: PolyFSpec, weights=None, dim=40,
                               poly_coeffs=None):
    """lambda = 1 general solution: superposition over the roots of f = beta/2."""
    if spec.lam != 1:
        raise ValueError("closed form requires lambda = 1")
    report = root_report(spec.coeffs, spec.gamma)
    if weights is None:
        weights = [1.0] * len(report.roots)
    state = coherent_superposition(report.roots, weights, dim, poly_coeffs)
    return report, state


def nonlinear_coherent_state(spec: DeformedGSpec, dim) -> EntireState:
    """lambda = 1 nonlinear coherent state for g(n) a, when no g(n) vanishes:
    c_n proportional to gamma^n / (sqrt(n!) g(0)...g(n-1))."""
    if spec.lam != 1:
        raise ValueError("nonlinear coherent state requires lambda = 1")
    gamma = complex(spec.beta) / 2
    g = spec.g_values
    if len(g) < dim - 1:
        raise ValueError("need g(n) for n < dim - 1")
    for n in range(dim - 1):
        if g[n] == 0:
            raise ValueError(
                f"g({n}) = 0: the closed form does not apply; use the "
                "ODE/recurrence path instead"
            )
    amps = np.zeros(dim, dtype=complex)
    amps[0] = 1.0
    prod = 1.0 + 0.0j
    for n in range(1, dim):
        prod *= g[n - 1]
        amps[n] = gamma**n / (math.sqrt(math.factorial(n)) * prod)
    v = fock.FockVector(amps)
    return EntireState(v.normalized())


def g_n_closed_form(beta, dim) -> EntireState:
    """lambda = 1 solution for g(n) = n, beta != 0:
    0F2(;1,2;|beta|^2/4)^{-1/2} 0F1~(;2; beta a+ / 2) |1>."""
    if beta == 0:
        raise ValueError(
            "beta = 0 is degenerate: the solution space is span{|0>, |1>}"
        )
    beta = complex(beta)
    norm = numerics.hyp0f2(1.0, 2.0, abs(beta) ** 2 / 4) ** (-0.5)
    # 0F1~(;2;z) = sum_k z^k / (k! (k+1)!); applied as a function of a+ to |1>
    amps = np.zeros(dim, dtype=complex)
    term = 1.0 + 0.0j  # (beta/2)^k / (k! (k+1)!)
    for k in range(dim - 1):
        if k > 0:
            term *= (beta / 2) / (k * (k + 1))
        # (a+)^k |1> = sqrt((k+1)!) / 1 * |k+1>  (since a+^k|1> = sqrt((k+1)!/1!)|k+1>)
        amps[k + 1] += term * math.sqrt(math.factorial(k + 1))
    return EntireState(fock.FockVector(norm * amps))
