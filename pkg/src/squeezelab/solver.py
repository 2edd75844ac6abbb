"""Numerical solution of the eigenvalue ODE in the Fock-Bargmann picture.

The complex ODE  sum_k P_k(z) psi^(k)(z) = 0  (eigenvalue term folded into
P_0) is solved two independent ways:

* `solve_series` -- a Taylor-coefficient recurrence obtained by matching
  powers of z, exact at fixed truncation;
* `integrate_ray` / `assemble_field` -- the polar-ray family obtained by
  substituting z = r e^{-i phi}, integrated with an adaptive embedded
  Runge-Kutta scheme, one ODE per phase, with analyticity-linked initial
  conditions psi_phi^(k)(0) = c_k e^{-i k phi}.

Agreement of the two routes is the main internal consistency check.
"""

import cmath
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .bargmann import EntireState


class SolverError(Exception):
    pass


class SingularRayError(SolverError):
    """Leading ODE coefficient vanished along a ray."""

    def __init__(self, phi, r):
        super().__init__(f"singular leading coefficient at phi={phi}, r={r}")
        self.phi = phi
        self.r = r


class RecurrenceBreakdown(SolverError):
    """Vanishing pivot with inconsistent data in the Taylor recurrence."""

    def __init__(self, index, residual, freedom):
        super().__init__(
            f"recurrence pivot vanished at order {index} with residual "
            f"{residual:.3e}; remaining solution freedom: {freedom}"
        )
        self.index = index
        self.residual = residual
        self.freedom = freedom


@dataclass(frozen=True)
class RayOde:
    """Linear ODE sum_k P_k(z) psi^(k) = 0 with polynomial coefficients.

    polys[k] is the coefficient list of P_k(z).  lam/beta are carried for
    reporting; they are already baked into the polynomials.
    """

    polys: tuple
    lam: complex
    beta: complex

    @property
    def order(self):
        return len(self.polys) - 1

    def ray_coefficients(self, phi, r):
        """Coefficients A_k of d^k/dr^k at (phi, r): A_k = P_k(r e^{-i phi}) e^{i k phi}."""
        z = r * cmath.exp(-1j * phi)
        out = []
        for k, p in enumerate(self.polys):
            val = 0.0 + 0.0j
            for c in reversed(p):
                val = val * z + c
            out.append(val * cmath.exp(1j * k * phi))
        return out

    def pivot_offset(self):
        """max (k - m) over nonzero z^m-coefficients of P_k: the recurrence order."""
        s = None
        for k, p in enumerate(self.polys):
            for m, c in enumerate(p):
                if c != 0:
                    s = k - m if s is None else max(s, k - m)
        if s is None:
            raise SolverError("ODE has no nonzero coefficients")
        return s

    def singular_at_origin(self):
        """True when the leading ray coefficient vanishes at r = 0."""
        pk = self.polys[-1]
        return len(pk) == 0 or pk[0] == 0


@dataclass(frozen=True)
class InitialData:
    """Ray-independent seeds c_k: psi_phi^(k)(0) = c_k e^{-i k phi}."""

    c: tuple

    def derivative(self, k, phi):
        if k >= len(self.c):
            return 0.0 + 0.0j
        return self.c[k] * cmath.exp(-1j * k * phi)


@dataclass
class RayField:
    phis: np.ndarray
    rs: np.ndarray
    values: np.ndarray  # [len(phis), len(rs)]
    free_indices: list = field(default_factory=list)


def _falling(j, k):
    """j! / (j-k)! as a float."""
    out = 1.0
    for i in range(k):
        out *= j - i
    return out


def taylor_coefficients(ode: RayOde, init: InitialData, n_taylor,
                        consistency_tol=1e-9):
    """Taylor coefficients a_0..a_{n_taylor-1} of psi(z) by power matching.

    Seeds are consumed whenever a coefficient is genuinely free: the first
    s* coefficients (s* = pivot offset) always are, and further ones appear
    when a recurrence pivot vanishes with a consistent (zero) residual.
    Returns (a, free_indices).
    """
    s_star = ode.pivot_offset()
    polys = ode.polys
    scale = max(max((abs(c) for c in p), default=0.0) for p in polys)
    if scale == 0.0:
        raise SolverError("zero ODE")
    a = np.zeros(n_taylor, dtype=complex)
    seeds = list(init.c)
    free_indices = []

    def next_seed(j):
        # seeds are derivative values psi^(j)(0); a_j = c / j!
        c = seeds.pop(0) if seeds else 0.0 + 0.0j
        return c / math.factorial(j)

    for j in range(min(s_star, n_taylor)):
        a[j] = next_seed(j)
        free_indices.append(j)
    for n in range(n_taylor - s_star):
        target = n + s_star
        pivot = 0.0 + 0.0j
        rest = 0.0 + 0.0j
        for k, p in enumerate(polys):
            for m, c in enumerate(p):
                if c == 0 or n - m < 0:
                    continue
                idx = n - m + k
                w = c * _falling(idx, k)
                if idx == target:
                    pivot += w
                else:
                    rest += w * a[idx]
        mag = scale * _falling(target, min(target, ode.order)) + 1.0
        if abs(pivot) > 1e-13 * mag:
            a[target] = -rest / pivot
        else:
            amax = np.max(np.abs(a)) if target else 1.0
            if abs(rest) > consistency_tol * mag * max(1.0, amax):
                raise RecurrenceBreakdown(n, abs(rest), len(seeds))
            a[target] = next_seed(target)
            free_indices.append(target)
    return a, free_indices


def solve_series(ode: RayOde, init: InitialData, n_taylor) -> EntireState:
    """EntireState from the Taylor recurrence (independent of the RK path)."""
    a, _ = taylor_coefficients(ode, init, n_taylor)
    return EntireState.from_taylor(a)


# Dormand-Prince 5(4) embedded pair.
_DP_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_DP_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_DP_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_DP_B4 = (5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200,
          187 / 2100, 1 / 40)


def _rk_step(f, r, y, h):
    k = []
    for i in range(7):
        yi = y.copy()
        for j, aij in enumerate(_DP_A[i]):
            if aij != 0.0:
                yi += h * aij * k[j]
        k.append(f(r + _DP_C[i] * h, yi))
    y5 = y.copy()
    err = np.zeros_like(y)
    for i in range(7):
        if _DP_B5[i] != 0.0:
            y5 += h * _DP_B5[i] * k[i]
        d = _DP_B5[i] - _DP_B4[i]
        if d != 0.0:
            err += h * d * k[i]
    return y5, float(np.max(np.abs(err)))


def _integrate_to(f, r0, y0, r1, tol):
    """Adaptive DP45 from r0 to r1 (r1 > r0); returns y(r1)."""
    r, y = r0, y0
    h = max((r1 - r0) * 0.1, 1e-8)
    while r < r1:
        h = min(h, r1 - r)
        y_new, err = _rk_step(f, r, y, h)
        scale = tol * max(1.0, float(np.max(np.abs(y))))
        if err <= scale or h < 1e-13:
            if h < 1e-13 and err > scale:
                raise SolverError(f"step underflow at r={r}")
            r += h
            y = y_new
            factor = 5.0 if err == 0.0 else min(5.0, 0.9 * (scale / err) ** 0.2)
            h *= max(0.2, factor)
        else:
            h *= max(0.2, 0.9 * (scale / err) ** 0.2)
    return y


def _ray_rhs(ode: RayOde, phi):
    order = ode.order

    def f(r, y):
        coeffs = ode.ray_coefficients(phi, r)
        lead = coeffs[order]
        if abs(lead) < 1e-300:
            raise SingularRayError(phi, r)
        dy = np.empty_like(y)
        dy[:-1] = y[1:]
        acc = 0.0 + 0.0j
        for k in range(order):
            acc += coeffs[k] * y[k]
        dy[-1] = -acc / lead
        return dy

    return f


def integrate_ray(ode: RayOde, init: InitialData, phi, rs, tol=1e-10,
                  n_series_start=30):
    """psi_phi at the radii `rs` by adaptive RK integration along the ray.

    When the leading coefficient vanishes at r = 0 (Frobenius point) the
    integration starts at a small r0 with state supplied by the Taylor
    recurrence, which is exact at the singular point.
    """
    rs = np.asarray(rs, dtype=float)
    if np.any(np.diff(rs) <= 0) and rs.size > 1:
        raise ValueError("rs must be strictly increasing")
    order = ode.order
    a, _ = taylor_coefficients(ode, init, max(n_series_start, order + 1))
    phase = cmath.exp(-1j * phi)

    def germ_state(r):
        """(psi, psi', ..., psi^(K-1)) wrt r at radius r, from the germ series;
        d/dr = e^{-i phi} d/dz."""
        y = np.zeros(order, dtype=complex)
        for k in range(order):
            y[k] = _poly_deriv_at(a, k, r * phase) * phase**k
        return y

    r_start = 1e-4 if ode.singular_at_origin() else 0.0
    y = germ_state(r_start)
    f = _ray_rhs(ode, phi)
    out = np.empty(rs.size, dtype=complex)
    r_cur = r_start
    for i, r in enumerate(rs):
        if r <= r_start + 1e-12:
            out[i] = _poly_deriv_at(a, 0, r * phase)
            continue
        y = _integrate_to(f, r_cur, y, r, tol)
        r_cur = r
        out[i] = y[0]
    return out


def _poly_deriv_at(a, k, z):
    """k-th derivative of the polynomial with coefficients a, at z."""
    val = 0.0 + 0.0j
    for n in range(len(a) - 1, k - 1, -1):
        val = val * z + a[n] * _falling(n, k)
    return val


def _thread_count():
    env = os.environ.get("SQUEEZELAB_THREADS")
    if env:
        return max(1, int(env))
    return min(8, os.cpu_count() or 1)


def assemble_field(ode: RayOde, init: InitialData, phi_count=64, r_count=200,
                   r_max=4.0, tol=1e-10) -> RayField:
    """Integrate all rays of the polar family on a uniform (phi, r) grid."""
    if phi_count < 4:
        raise ValueError("phi_count must be >= 4")
    phis = np.linspace(0.0, 2 * math.pi, phi_count, endpoint=False)
    rs = np.linspace(0.0, r_max, r_count)
    values = np.empty((phi_count, r_count), dtype=complex)

    def run(j):
        try:
            return j, integrate_ray(ode, init, phis[j], rs, tol)
        except SolverError as exc:
            raise SolverError(f"ray phi={phis[j]:.6f} failed: {exc}") from exc

    with ThreadPoolExecutor(max_workers=_thread_count()) as pool:
        for j, row in pool.map(run, range(phi_count)):
            values[j] = row
    _, free = taylor_coefficients(ode, init, ode.order + 2)
    return RayField(phis=phis, rs=rs, values=values, free_indices=free)


@dataclass
class AnalyticityReport:
    positive_mode_residual: float
    profile_residuals: np.ndarray  # per mode 0..n_modes-1

    @property
    def max_residual(self):
        prof = float(np.max(self.profile_residuals)) if self.profile_residuals.size else 0.0
        return max(self.positive_mode_residual, prof)


def analyticity_check(field: RayField, n_modes=8) -> AnalyticityReport:
    """Fourier-diagnose the assembled field.

    For an analytic psi, the phi-transform of psi_phi(r) contains only
    modes e^{-i n phi} with radial profiles proportional to r^n; any
    positive-frequency content signals ill-chosen initial conditions.
    """
    M = field.phis.size
    modes = np.fft.fft(field.values, axis=0) / M
    overall = float(np.max(np.abs(modes)))
    if overall == 0.0:
        return AnalyticityReport(0.0, np.zeros(n_modes))
    # with phis[j] = 2 pi j / M, the allowed e^{-i n phi} component sits at
    # FFT index (M - n) mod M; forbidden e^{+i n phi} content at 1..M/2-1
    lower = modes[1:M // 2, :]
    pos_res = float(np.max(np.abs(lower))) / overall if lower.size else 0.0
    n_modes = min(n_modes, M // 2)
    prof = np.zeros(n_modes)
    rs = field.rs
    for n in range(n_modes):
        cn = modes[(M - n) % M, :]
        rn = rs**n
        denom = float(rn @ rn)
        an = (cn @ rn) / denom  # least-squares amplitude
        resid = cn - an * rn
        prof[n] = float(np.max(np.abs(resid))) / overall
    return AnalyticityReport(pos_res, prof)
