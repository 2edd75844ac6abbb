"""Complex special functions: gamma, Pochhammer, Hermite, hypergeometric series.

Everything here works on ordinary Python complex numbers by default.  The
series evaluators only use +, *, / and abs(), so they also accept mpmath
numbers for the high-precision path (used by `analytic` for moment
cross-checks).
"""

from dataclasses import dataclass

import mpmath


class SeriesError(Exception):
    """A hypergeometric series failed to converge within max_terms."""

    def __init__(self, message, partial_sum=None, last_term=None):
        super().__init__(message)
        self.partial_sum = partial_sum
        self.last_term = last_term


class DomainError(ValueError):
    """Argument outside the domain of convergence/definition."""


@dataclass(frozen=True)
class SeriesControl:
    max_terms: int = 500
    rel_tol: float = 1e-15

    def __post_init__(self):
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")
        if not 0.0 < self.rel_tol < 1.0:
            raise ValueError("rel_tol must be in (0, 1)")


DEFAULT_CONTROL = SeriesControl()

# Lanczos g=7, n=9 coefficients (double precision).
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

_PI = 3.141592653589793238462643383279502884


def pochhammer(b, k):
    """Rising factorial (b)_k = b (b+1) ... (b+k-1); (b)_0 = 1."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    result = b * 0 + 1  # unit of the same numeric type as b
    for i in range(k):
        result = result * (b + i)
    return result


def gamma_complex(z):
    """Gamma function for complex z, Lanczos approximation with reflection.

    mpmath inputs are delegated to mpmath.gamma (extended-precision path).
    """
    if isinstance(z, (mpmath.mpf, mpmath.mpc)):
        return mpmath.gamma(z)
    z = complex(z)
    if z.imag == 0.0 and z.real <= 0.0 and z.real == int(z.real):
        raise DomainError(f"gamma pole at z={z}")
    if z.real < 0.5:
        # reflection formula
        import cmath

        return _PI / (cmath.sin(_PI * z) * gamma_complex(1.0 - z))
    import cmath

    z -= 1.0
    x = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        x += _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return cmath.sqrt(2 * _PI) * t ** (z + 0.5) * cmath.exp(-t) * x


def _sum_series(term_ratio, first_term, ctl):
    """Sum a series whose k-th term obeys term_{k+1} = term_k * ratio(k).

    Stops when |term| <= rel_tol * |sum| for two consecutive terms (guards
    against odd/even cancellation in alternating series).
    """
    total = first_term
    term = first_term
    small_streak = 0
    for k in range(ctl.max_terms):
        term = term * term_ratio(k)
        total = total + term
        if abs(term) <= ctl.rel_tol * abs(total):
            small_streak += 1
            if small_streak >= 2:
                return total
        else:
            small_streak = 0
    raise SeriesError(
        f"series did not converge in {ctl.max_terms} terms",
        partial_sum=total,
        last_term=abs(term),
    )


def _is_nonpos_int(c):
    try:
        cc = complex(c)
    except TypeError:
        cc = complex(float(mpmath.re(c)), float(mpmath.im(c)))
    return cc.imag == 0.0 and cc.real <= 0.0 and cc.real == int(cc.real)


def hyp1f1(b, c, z, ctl=DEFAULT_CONTROL):
    """Kummer confluent hypergeometric function 1F1(b; c; z)."""
    if _is_nonpos_int(c):
        raise DomainError(f"1F1 undefined for c={c} (nonpositive integer)")
    if z == 0:
        return z * 0 + 1
    one = z * 0 + 1

    def ratio(k):
        return (b + k) / (c + k) * z / (k + 1)

    return _sum_series(ratio, one, ctl)


def hyp2f1(a, b, c, z, ctl=DEFAULT_CONTROL):
    """Gauss hypergeometric 2F1(a, b; c; z) by its series, |z| < 1 only."""
    if abs(z) >= 1:
        raise DomainError(f"2F1 series requires |z| < 1, got |z|={abs(z)}")
    if _is_nonpos_int(c):
        raise DomainError(f"2F1 undefined for c={c} (nonpositive integer)")
    if z == 0:
        return z * 0 + 1
    one = z * 0 + 1

    def ratio(k):
        return (a + k) * (b + k) / (c + k) * z / (k + 1)

    return _sum_series(ratio, one, ctl)


def hyp0f1(b, z, ctl=DEFAULT_CONTROL):
    """Confluent limit function 0F1(; b; z)."""
    if _is_nonpos_int(b):
        raise DomainError(f"0F1 undefined for b={b} (nonpositive integer)")
    if z == 0:
        return z * 0 + 1
    one = z * 0 + 1

    def ratio(k):
        return z / ((b + k) * (k + 1))

    return _sum_series(ratio, one, ctl)


def hyp0f1_regularized(b, z, ctl=DEFAULT_CONTROL):
    """0F1(; b; z) / Gamma(b), defined for all b."""
    if _is_nonpos_int(b):
        # 0F1~(;b;z) = sum_{k} z^k / (k! * Gamma(b+k)); terms with
        # b+k a nonpositive integer vanish.  Start the sum at k0 = 1-b.
        k0 = int(round(1 - complex(b).real))
        total = 0.0 * z
        term = z**k0
        fact = 1.0
        for i in range(1, k0 + 1):
            fact *= i
        term = term / fact  # z^k0 / k0!; Gamma(b+k0) = Gamma(1) = 1
        total = term
        k = k0
        small_streak = 0
        for _ in range(ctl.max_terms):
            k += 1
            term = term * z / (k * (k - k0))  # Gamma(b+k) = (k-k0)!
            total = total + term
            if abs(term) <= ctl.rel_tol * abs(total):
                small_streak += 1
                if small_streak >= 2:
                    return total
            else:
                small_streak = 0
        raise SeriesError("regularized 0F1 did not converge",
                          partial_sum=total, last_term=abs(term))
    return hyp0f1(b, z, ctl) / gamma_complex(b)


def hyp0f2(b1, b2, z, ctl=DEFAULT_CONTROL):
    """Generalized hypergeometric 0F2(; b1, b2; z)."""
    if _is_nonpos_int(b1) or _is_nonpos_int(b2):
        raise DomainError("0F2 undefined for nonpositive integer parameters")
    if z == 0:
        return z * 0 + 1
    one = z * 0 + 1

    def ratio(k):
        return z / ((b1 + k) * (b2 + k) * (k + 1))

    return _sum_series(ratio, one, ctl)


def hermite(n, x):
    """Physicists' Hermite polynomial H_n(x) by the three-term recurrence."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    h_prev = x * 0 + 1
    if n == 0:
        return h_prev
    h = 2 * x
    for k in range(1, n):
        h, h_prev = 2 * x * h - 2 * k * h_prev, h
    return h


def mehler_closed_form(x, y, z):
    """(1-z^2)^{-1/2} exp[(2xyz - (x^2+y^2)z^2)/(1-z^2)]."""
    import cmath

    one_minus = 1 - z * z
    return cmath.exp((2 * x * y * z - (x * x + y * y) * z * z) / one_minus) / cmath.sqrt(one_minus)


def mehler_sum(x, y, z, ctl=DEFAULT_CONTROL):
    """Bilinear Hermite generating series sum_n H_n(x) H_n(y) (z/2)^n / n!.

    Converges only for |z| < 1; must agree with `mehler_closed_form`.
    """
    if abs(z) >= 1:
        raise DomainError(f"Mehler series requires |z| < 1, got |z|={abs(z)}")
    if z == 0:
        return x * 0 + y * 0 + 1
    import cmath

    # scaled recurrence: A_n = H_n(x) s^n / sqrt(n!), s = sqrt(z/2), so the
    # n-th term is A_n B_n; keeps everything O(|z|^n) instead of overflowing
    s = cmath.sqrt(z / 2)
    import math as _math

    ax_prev, ax = None, x * 0 + 1
    by_prev, by = None, y * 0 + 1
    total = ax * by  # n = 0 term
    small_streak = 0
    for n in range(1, ctl.max_terms):
        rn = _math.sqrt(n)
        if n == 1:
            ax, ax_prev = 2 * x * s, ax
            by, by_prev = 2 * y * s, by
        else:
            ax, ax_prev = (2 * x * s * ax - 2 * s * s * _math.sqrt(n - 1) * ax_prev) / rn, ax
            by, by_prev = (2 * y * s * by - 2 * s * s * _math.sqrt(n - 1) * by_prev) / rn, by
        term = ax * by
        total = total + term
        if abs(term) <= ctl.rel_tol * abs(total):
            small_streak += 1
            if small_streak >= 2:
                return total
        else:
            small_streak = 0
    raise SeriesError("Mehler series did not converge",
                      partial_sum=total, last_term=abs(term))
