"""Closed-form quadrature and amplitude-squared squeezed states.

These are the two analytically solvable models; everything here doubles as
an oracle for the numerical solver.  Complex lambda with Re lambda > 0 is
allowed throughout (normalizable states); minimum uncertainty holds only
for real lambda.
"""

import cmath
import math
from dataclasses import dataclass

import mpmath
import numpy as np
import sympy

from . import bargmann, fock, numerics, ordering
from .bargmann import EntireState


class NotNormalizable(ValueError):
    pass


def _require_positive_re(lam):
    if complex(lam).real <= 0:
        raise NotNormalizable(
            f"Re lambda = {complex(lam).real} <= 0: state is not normalizable"
        )


# ---------------------------------------------------------------------------
# quadrature squeezing, f(a) = a
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadratureParams:
    lam: complex
    beta: complex

    def __post_init__(self):
        _require_positive_re(self.lam)

    @property
    def w(self):
        return (self.lam - 1) / (self.lam + 1)

    @property
    def u(self):
        return self.beta / (self.lam + 1)

    @property
    def phi_arg(self):
        return cmath.phase(complex(self.lam))


def quad_norm_closed(p: QuadratureParams):
    """Squared normalization N^2 of the Gaussian eigenstate, closed form."""
    lam = complex(p.lam)
    beta = complex(p.beta)
    re = lam.real
    expo = -(abs(beta) ** 2 + ((np.conj(lam) - 1) / (lam + 1) * beta**2).real) / (4 * re)
    return 2 * math.sqrt(re) / abs(lam + 1) * math.exp(expo)


def quad_state(p: QuadratureParams, dim) -> EntireState:
    """Normalized Gaussian eigenstate N exp(w a+^2 / 2 + u a+)|0>."""
    a = np.zeros(dim, dtype=complex)
    a[0] = 1.0
    # psi' = (u + w z) psi  =>  (n+1) a_{n+1} = u a_n + w a_{n-1}
    for n in range(dim - 1):
        a[n + 1] = (p.u * a[n] + (p.w * a[n - 1] if n >= 1 else 0.0)) / (n + 1)
    psi = EntireState.from_taylor(a)
    return EntireState(psi.fock.normalized())


@dataclass
class QuadDispersions:
    var_x: float
    var_p: float
    defect: float
    min_no_quad_variance: float


def quad_dispersions(p: QuadratureParams) -> QuadDispersions:
    """(dx)^2 = |lam|^2/Re lam, (dp)^2 = 1/Re lam, defect = tan^2(arg lam),
    and the optimal-phase normally ordered quadrature variance minimum."""
    lam = complex(p.lam)
    re = lam.real
    var_x = abs(lam) ** 2 / re
    var_p = 1.0 / re
    defect = var_x * var_p - 1.0
    min_no = -2 * abs(lam - 1) / (abs(lam + 1) + abs(lam - 1))
    return QuadDispersions(var_x, var_p, defect, min_no)


def quad_moments(p: QuadratureParams, max_order=4):
    """Normally ordered moments <a+^n a^m> for n+m <= max_order.

    Antinormal moments come from differentiating the closed-form N^{-2}
    with beta and beta* treated as independent variables, then are
    converted to normal order.
    """
    lam = complex(p.lam)
    re = lam.real
    B, Bs = sympy.symbols("B Bs")
    c1 = (np.conj(lam) - 1) / (lam + 1)
    c1b = (lam - 1) / (np.conj(lam) + 1)
    Q = (B * Bs + sympy.Rational(1, 2) * c1 * B**2
         + sympy.Rational(1, 2) * c1b * Bs**2) / (4 * re)
    expQ = sympy.exp(Q)
    subs = {B: complex(p.beta), Bs: np.conj(complex(p.beta))}
    anti = {}
    for n in range(max_order + 1):
        for m in range(max_order + 1 - n):
            d = sympy.diff(expQ, Bs, n, B, m)
            val = complex(d.subs(subs)) * complex(sympy.exp(-Q.subs(subs)))
            anti[n, m] = complex((np.conj(lam) + 1) ** n * (lam + 1) ** m) * val
    return ordering.antinormal_to_normal(anti)


def quad_mean_a(p: QuadratureParams):
    """<a> = (Re(lam beta*) + i Im beta) / (2 Re lam)."""
    lam = complex(p.lam)
    beta = complex(p.beta)
    return ((lam * np.conj(beta)).real + 1j * beta.imag) / (2 * lam.real)


# ---------------------------------------------------------------------------
# generic squeezing witness from moments
# ---------------------------------------------------------------------------

def min_no_quadrature_variance(psi: EntireState):
    """min over phases of <:(Delta x_phi)^2:> computed from moments:
    2 Re(e^{-2 i phi} Va) + 2 nc minimized analytically in phi."""
    norm = bargmann.normalization(psi)
    psi_n = EntireState(fock.FockVector(psi.fock.amps * norm))
    m01 = bargmann.moment(psi_n, 0, 1)
    m02 = bargmann.moment(psi_n, 0, 2)
    m11 = bargmann.moment(psi_n, 1, 1)
    va = m02 - m01**2
    nc = m11 - abs(m01) ** 2
    return float(-2 * abs(va) + 2 * nc.real)


# ---------------------------------------------------------------------------
# amplitude-squared squeezing, f(a) = a^2
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AmpSquaredParams:
    lam: complex
    beta: complex
    branch: int = +1  # sign choice for sqrt((lam-1)/(lam+1)); results invariant

    def __post_init__(self):
        _require_positive_re(self.lam)
        if self.branch not in (+1, -1):
            raise ValueError("branch must be +1 or -1")

    @property
    def w(self):
        return (complex(self.lam) - 1) / (complex(self.lam) + 1)

    @property
    def sqrt_w(self):
        return self.branch * cmath.sqrt(self.w)

    @property
    def c(self):
        return 0.5 * self.sqrt_w

    @property
    def sqrt_lam2_minus_1(self):
        # branch-consistent: sqrt(lam^2-1) = (lam-1)/sqrt((lam-1)/(lam+1))
        if self.w == 0:
            raise ZeroDivisionError("lambda = 1: sqrt(lam^2 - 1) branch rule degenerate")
        return (complex(self.lam) - 1) / self.sqrt_w

    @property
    def b(self):
        if complex(self.lam) == 1:
            # lam -> 1 limit: beta/sqrt(lam^2-1) -> infinity unless beta = 0;
            # for beta = 0 the limit of b is 1/4
            if self.beta == 0:
                return 0.25 + 0j
            raise ZeroDivisionError("b undefined at lambda = 1 with beta != 0")
        return 0.25 * (1 + complex(self.beta) / self.sqrt_lam2_minus_1)

    @property
    def xi(self):
        aw = abs(self.w)
        if aw == 0:
            return 0.0 + 0.0j
        return (self.sqrt_w / abs(self.sqrt_w)) * math.atanh(math.sqrt(aw))

    @property
    def mu(self):
        return math.cosh(abs(self.xi))

    @property
    def nu(self):
        xi = self.xi
        if xi == 0:
            return 0.0 + 0.0j
        return (xi / abs(xi)) * math.sinh(abs(xi))

    @property
    def zeta(self):
        return self.nu / self.mu

    @property
    def v(self):
        return self.sqrt_w / (1 + abs(self.w))


def amp2_fb_value(p: AmpSquaredParams, parity, z):
    """psi_e/o evaluated directly: e^{-c z^2} 1F1(...; 2 c z^2) (times z if odd)."""
    c = p.c
    t = 2 * c * z * z
    if parity == "even":
        return cmath.exp(-c * z * z) * numerics.hyp1f1(p.b, 0.5, t)
    return z * cmath.exp(-c * z * z) * numerics.hyp1f1(p.b + 0.5, 1.5, t)


def amp2_fb_solution(p: AmpSquaredParams, parity, dim) -> EntireState:
    """Raw even/odd Fock-Bargmann solution, unnormalized:
    psi_e = e^{-c z^2} 1F1(b; 1/2; 2 c z^2),
    psi_o = z e^{-c z^2} 1F1(b + 1/2; 3/2; 2 c z^2).

    The Taylor coefficients of the product suffer ~2^n cancellation, so the
    convolution is done in extended precision and rounded at the end.
    """
    c = p.c
    if parity == "even":
        b, denom_par, shift = p.b, 0.5, 0
    elif parity == "odd":
        b, denom_par, shift = p.b + 0.5, 1.5, 1
    else:
        raise ValueError("parity must be 'even' or 'odd'")
    n_half = (dim - shift + 1) // 2
    with mpmath.workdps(30 + dim // 2):
        cm = mpmath.mpc(c)
        bm = mpmath.mpc(b)
        ea = [mpmath.mpc(1)]
        fb = [mpmath.mpc(1)]
        for k in range(1, n_half):
            ea.append(ea[-1] * (-cm) / k)
            fb.append(fb[-1] * (bm + k - 1) / (denom_par + k - 1) * (2 * cm) / k)
        a = np.zeros(dim, dtype=complex)
        for k in range(n_half):
            idx = 2 * k + shift
            if idx < dim:
                s = mpmath.fsum(ea[j] * fb[k - j] for j in range(k + 1))
                a[idx] = complex(s)
    return EntireState.from_taylor(a)


def amp2_norm_closed(p: AmpSquaredParams, parity,
                     ctl=numerics.SeriesControl(max_terms=20000, rel_tol=1e-15)):
    """N^{-2} = 2F1(b, b*; 1/2; 4|v|^2) (even) or the 3/2 variant (odd).

    Since S(xi) is unitary this equals the squared norm of the core state
    1F1(...; v a+^2)|0 or 1>, which is the discrete-sum cross-check.
    """
    b = p.b
    x = 4 * abs(p.v) ** 2
    if parity == "even":
        return numerics.hyp2f1(b, np.conj(b), 0.5, x, ctl)
    return numerics.hyp2f1(b + 0.5, np.conj(b) + 0.5, 1.5, x, ctl)


def amp2_core_state(p: AmpSquaredParams, parity, dim) -> fock.FockVector:
    """1F1(b; 1/2; v a+^2)|0> resp. 1F1(b+1/2; 3/2; v a+^2)|1>, unnormalized."""
    amps = np.zeros(dim, dtype=complex)
    v = p.v
    if parity == "even":
        b, cpar, shift = p.b, 0.5, 0
    else:
        b, cpar, shift = p.b + 0.5, 1.5, 1
    # amp_{2m+shift} = (b)_m v^m / ((cpar)_m m!) * sqrt((2m+shift)!/shift!);
    # tracked through its ratio to avoid factorial overflow
    amp = 1.0 + 0.0j
    m = 0
    while 2 * m + shift < dim:
        n = 2 * m + shift
        amps[n] = amp
        amp *= (b + m) / (cpar + m) * v / (m + 1) * math.sqrt((n + 1) * (n + 2))
        m += 1
    return fock.FockVector(amps)


def _work_dim(p: AmpSquaredParams, dim, cap=8000):
    """Truncation needed for the slowly converging core state: its amplitude
    ratio is 2|v| per photon, which approaches 1 for large |lambda|."""
    q = (2 * abs(p.v)) ** 2
    if q < 0.5:
        return dim
    m = math.log(1e-18) / math.log(q)
    return min(cap, max(dim, 2 * int(math.ceil(m)) + 4))


def amp2_squeezed_form(p: AmpSquaredParams, parity, dim) -> EntireState:
    """Normalized eigenstate N S(xi) 1F1(...; v a+^2)|0 or 1>.

    The squeeze operator is applied as a truncated matrix exponential (in a
    working dimension large enough for the core-state tail, sparse
    expm_multiply); the result is cut back to `dim` and renormalized.
    """
    from scipy.sparse import lil_matrix
    from scipy.sparse.linalg import expm_multiply

    wd = _work_dim(p, dim)
    core = amp2_core_state(p, parity, wd)
    xi = p.xi
    gen = lil_matrix((wd, wd), dtype=complex)
    for n in range(wd - 2):
        s = math.sqrt((n + 1) * (n + 2))
        gen[n, n + 2] = 0.5 * np.conj(xi) * s  # xi* a^2 / 2
        gen[n + 2, n] = -0.5 * xi * s          # -xi a+^2 / 2
    out = expm_multiply(gen.tocsr(), core.amps)
    return EntireState(fock.FockVector(out[:dim]).normalized())


def amp2_eigen_residual(p: AmpSquaredParams, psi: EntireState):
    """|| ((1+lam) a^2 + (1-lam) a+^2) psi - beta psi || for a unit psi."""
    dim = psi.dim
    a = fock.annihilator(dim)
    op = (1 + complex(p.lam)) * (a @ a) + (1 - complex(p.lam)) * (a.conj().T @ a.conj().T)
    resid = op @ psi.fock.amps - complex(p.beta) * psi.fock.amps
    # ignore the top two rows, which truncation corrupts by construction
    return float(np.linalg.norm(resid[: dim - 2]))


def _mean_photon_formula(p: AmpSquaredParams, x, hyp2f1):
    """Closed form for <n> of the even state, with the 2F1 argument
    supplied by the caller.  Two published argument conventions circulate
    (4|c|^2 vs 4|v|^2); both are evaluated and checked against the
    numerical moment, and the matching one is reported."""
    lam = complex(p.lam)
    b = p.b
    al = abs(lam ** 2 - 1)
    re = lam.real
    ratio_sq = ((abs(lam + 1) - abs(lam - 1)) / (abs(lam + 1) + abs(lam - 1))) ** 2
    f_top = hyp2f1(b + 1, np.conj(b) + 1, 1.5, x)
    f_bot = hyp2f1(b, np.conj(b), 0.5, x)
    term1 = 4 * abs(b) ** 2 * (al / re) * ratio_sq * (f_top / f_bot)
    term2 = -2 * (al / re) * complex(b).real
    term3 = abs(lam - 1) / (abs(lam + 1) - abs(lam - 1))
    return complex(term1).real + term2 + term3


@dataclass
class MeanPhotonReport:
    value: float
    matched_variant: str  # "4|c|^2" or "4|v|^2"
    value_c_variant: float
    value_v_variant: float
    numeric: float


def amp2_mean_photon_even(p: AmpSquaredParams, dim=120, rel_tol=1e-4,
                          extended=None) -> MeanPhotonReport:
    """Closed-form <n> of the even state, cross-checked against the
    Fock-side moment; reports which printed 2F1-argument variant matched."""
    if extended is None:
        extended = dim > 80 or abs(complex(p.lam)) > 5
    if extended:
        with mpmath.workdps(40):
            def h(a_, b_, c_, z_):
                return mpmath.hyp2f1(mpmath.mpc(a_), mpmath.mpc(b_),
                                     mpmath.mpc(c_), mpmath.mpf(z_))

            val_c = float(_mean_photon_formula(p, 4 * abs(p.c) ** 2, h))
            val_v = float(_mean_photon_formula(p, 4 * abs(p.v) ** 2, h))
    else:
        def h(a_, b_, c_, z_):
            return numerics.hyp2f1(a_, b_, c_, z_)

        val_c = float(_mean_photon_formula(p, 4 * abs(p.c) ** 2, h))
        val_v = float(_mean_photon_formula(p, 4 * abs(p.v) ** 2, h))
    psi = amp2_squeezed_form(p, "even", dim)
    numeric = bargmann.moment(psi, 1, 1).real
    err_c = abs(val_c - numeric) / max(1.0, abs(numeric))
    err_v = abs(val_v - numeric) / max(1.0, abs(numeric))
    if min(err_c, err_v) > rel_tol:
        raise ValueError(
            f"neither mean-photon variant matches the numeric value: "
            f"4|c|^2 -> {val_c}, 4|v|^2 -> {val_v}, numeric -> {numeric}"
        )
    if err_c <= err_v:
        return MeanPhotonReport(val_c, "4|c|^2", val_c, val_v, numeric)
    return MeanPhotonReport(val_v, "4|v|^2", val_c, val_v, numeric)


@dataclass
class Amp2Uncertainty:
    delta_F: float
    delta_G: float
    commutator_half: float
    defect: float


def amp2_uncertainty(p: AmpSquaredParams, parity, dim=120) -> Amp2Uncertainty:
    """Dispersions of F = a^2 + a+^2 and G = -i(a^2 - a+^2) from fourth-order
    moments of the constructed state."""
    psi = amp2_squeezed_form(p, parity, dim)
    m = {}
    for n in range(5):
        for mm in range(5 - n):
            m[n, mm] = bargmann.moment(psi, n, mm)
    mean_F = (m[2, 0] + m[0, 2]).real
    sec_F = (m[0, 4] + m[4, 0] + 2 * m[2, 2] + 4 * m[1, 1] + 2).real
    var_F = sec_F - mean_F**2
    mean_G = (-1j * (m[0, 2] - m[2, 0])).real
    sec_G = (-m[0, 4] - m[4, 0] + 2 * m[2, 2] + 4 * m[1, 1] + 2).real
    var_G = sec_G - mean_G**2
    half_comm = float(4 * m[1, 1].real + 2)
    dF = math.sqrt(max(var_F, 0.0))
    dG = math.sqrt(max(var_G, 0.0))
    return Amp2Uncertainty(dF, dG, half_comm, dF * dG - half_comm)


def report_json(p, parity=None, unc=None, mean_n=None, matched=None):
    """Assemble the standard report dictionary for serialization."""
    lam = complex(p.lam)
    beta = complex(p.beta)
    out = {
        "lambda": [lam.real, lam.imag],
        "beta": [beta.real, beta.imag],
    }
    if parity is not None:
        out["parity"] = parity
    if unc is not None:
        out.update(
            var_F=unc.delta_F**2,
            var_G=unc.delta_G**2,
            commutator=unc.commutator_half,
            defect=unc.defect,
        )
    if mean_n is not None:
        out["mean_n"] = mean_n
    if matched is not None:
        out["matched_variant"] = matched
    return out
