"""Incomplete beta function b_q(alpha, beta) = int_0^q u^(alpha-1) (1-u)^(beta-1) du.

The integral converges for Re(alpha) > 0.  Two integration-by-parts
recurrences move alpha up or down by whole steps; the raising one is also the
analytic continuation into Re(alpha) <= 0.
"""

from __future__ import annotations

import cmath
import math

from scipy import integrate, special

from .errors import DomainError, ParamError, PoleAtAlpha, PoleAtBeta, PoleError
from .qcore import pochhammer

POCHHAMMER_POLE_TOL = 1e-12
SERIES_SPLIT = 0.5


def _check_upper(q: float) -> float:
    q = float(q)
    if not (0.0 < q < 1.0):
        raise ParamError(f"upper limit must lie in (0, 1), got {q!r}")
    return q


def _head_series(c: float, alpha: complex, beta: complex, tol: float) -> complex:
    """int_0^c via sum_j (1-beta)_j/j! c^(alpha+j)/(alpha+j); exact at the u = 0 endpoint."""
    log_c = math.log(c)
    coef = 1.0 + 0j  # (1-beta)_j / j!
    total = 0j
    j = 0
    jmin = int(abs(1 - beta)) + 2
    while True:
        term = coef * cmath.exp((alpha + j) * log_c) / (alpha + j)
        total += term
        if j > jmin and abs(term) < tol * 1e-3 * max(1.0, abs(total)):
            return total
        coef *= (1 - beta + j) / (j + 1)
        j += 1
        if j > 10_000:
            raise DomainError("incomplete beta head series failed to converge")


def _integrand_parts(alpha: complex, beta: complex):
    a1, b1 = alpha - 1, beta - 1

    def value(u: float) -> complex:
        return cmath.exp(a1 * math.log(u) + b1 * math.log1p(-u))

    return (lambda u: value(u).real), (lambda u: value(u).imag)


def incomplete_beta(q: float, alpha: complex, beta: complex, tol: float = 1e-12) -> complex:
    """b_q(alpha, beta) for Re(alpha) > 0.

    The stretch [0, min(q, 1/2)] is summed from the binomial series, which
    absorbs the u^(alpha-1) endpoint singularity exactly; any remainder up to
    q is smooth and goes to adaptive Gauss-Kronrod quadrature.
    """
    q = _check_upper(q)
    alpha, beta = complex(alpha), complex(beta)
    if alpha.real <= 0:
        raise DomainError(f"incomplete_beta needs Re(alpha) > 0, got alpha = {alpha}; use raise_alpha_recurrence")
    c = min(q, SERIES_SPLIT)
    total = _head_series(c, alpha, beta, tol)
    if q > c:
        re_f, im_f = _integrand_parts(alpha, beta)
        opts = dict(epsabs=tol / 4, epsrel=1e-13, limit=400)
        re, _ = integrate.quad(re_f, c, q, **opts)
        im, _ = integrate.quad(im_f, c, q, **opts) if (alpha.imag or beta.imag) else (0.0, 0.0)
        total += complex(re, im)
    return total


def raise_alpha_recurrence(q: float, alpha: complex, beta: complex, steps: int, tol: float = 1e-12) -> complex:
    """b_q(alpha, beta) through b_q(alpha + steps, beta - steps).

    Defines the continuation to Re(alpha) <= 0; the zeros of (alpha)_l,
    l <= steps, are genuine poles.
    """
    if steps < 1:
        raise ParamError("steps must be >= 1")
    q = _check_upper(q)
    alpha, beta = complex(alpha), complex(beta)
    log_q, log_1mq = math.log(q), math.log1p(-q)
    total = 0j
    num = 1 + 0j  # (1-beta)_{l-1}
    den = 1 + 0j  # (alpha)_l
    for l in range(1, steps + 1):
        den *= alpha + l - 1
        if abs(den) < POCHHAMMER_POLE_TOL:
            raise PoleAtAlpha(f"(alpha)_{l} vanishes at alpha = {alpha}")
        sign = 1 if l % 2 == 1 else -1
        total += sign * num / den * cmath.exp((alpha + l - 1) * log_q + (beta - l) * log_1mq)
        num *= 1 - beta + l - 1
    sign = -1 if steps % 2 else 1  # (-1)^(M-1) with M = steps + 1
    base = incomplete_beta(q, alpha + steps, beta - steps, tol)
    return total + sign * num / den * base


def lower_alpha_recurrence(q: float, alpha: complex, beta: complex, steps: int, tol: float = 1e-12) -> complex:
    """b_q(alpha, beta) through b_q(alpha - steps, beta + steps); needs Re(alpha) > steps."""
    if steps < 1:
        raise ParamError("steps must be >= 1")
    q = _check_upper(q)
    alpha, beta = complex(alpha), complex(beta)
    log_q, log_1mq = math.log(q), math.log1p(-q)
    total = 0j
    num = 1 + 0j  # (1-alpha)_{l-1}
    den = 1 + 0j  # (beta)_l
    for l in range(1, steps + 1):
        den *= beta + l - 1
        if abs(den) < POCHHAMMER_POLE_TOL:
            raise PoleAtBeta(f"(beta)_{l} vanishes at beta = {beta}")
        sign = -1 if l % 2 == 1 else 1
        total += sign * num / den * cmath.exp((alpha - l) * log_q + (beta + l - 1) * log_1mq)
        num *= 1 - alpha + l - 1
    sign = 1 if steps % 2 == 0 else -1  # (-1)^(M-1)
    base = incomplete_beta(q, alpha - steps, beta + steps, tol)
    return total + sign * num / den * base


def special_beta_terms(q: float, alpha: complex, nu: int) -> complex:
    """Finite closed form of b_q(alpha - nu + 1, -alpha), no domain check.

    The right-hand side is entire in alpha apart from the zeros of
    (-alpha)_{r+1}, so it is also the continued value.
    """
    log_q, log_1mq = math.log(q), math.log1p(-q)
    total = 0j
    num = 1 + 0j  # (-nu+1)_r
    den = 1 + 0j  # (-alpha)_{r+1}
    for r in range(nu):
        den *= -alpha + r
        if abs(den) < POCHHAMMER_POLE_TOL:
            raise PoleAtAlpha(f"(-alpha)_{r + 1} vanishes at alpha = {alpha}")
        total += num / den * cmath.exp((alpha - nu + 1) * log_q + (-alpha + r) * log_1mq)
        num *= -nu + 1 + r
    return -total


def closed_form_special(q: float, alpha: complex, nu: int) -> complex:
    """b_q(alpha - nu + 1, -alpha) as a finite sum of nu elementary terms."""
    if nu < 1:
        raise ParamError("nu must be >= 1")
    q = _check_upper(q)
    alpha = complex(alpha)
    if alpha.real <= nu - 1:
        raise DomainError(f"closed form needs Re(alpha) > nu - 1 = {nu - 1}, got {alpha}")
    return special_beta_terms(q, alpha, nu)


def _nonpositive_integer(z: complex) -> bool:
    return z.imag == 0 and z.real <= 0 and z.real == math.floor(z.real)


def complete_beta(alpha: complex, beta: complex) -> complex:
    """B(alpha, beta) = Gamma(alpha) Gamma(beta) / Gamma(alpha + beta)."""
    alpha, beta = complex(alpha), complex(beta)
    if _nonpositive_integer(alpha) or _nonpositive_integer(beta):
        raise PoleError(f"beta function has a pole at ({alpha}, {beta})")
    if _nonpositive_integer(alpha + beta):
        return 0j
    lg = special.loggamma(alpha) + special.loggamma(beta) - special.loggamma(alpha + beta)
    return complex(cmath.exp(lg))
