"""Closed forms: values at non-positive integers, crystal limits, the
Tsumura variant and the Jackson q-gamma function."""

from __future__ import annotations

import cmath
import math

import numpy as np

from ..errors import OutsideCrystalDomain, ParamError, PoleProximity
from ..qcore import DirichletCharacter, as_qparam, g_chi, gen_bernoulli, pochhammer
from .series import DEFAULT_TOL, SeriesSpec, f_direct

POLE_RADIUS = 1e-8


def special_value_neg_int(m: int, nu: int, chi: DirichletCharacter, q) -> complex:
    """L_q^(nu)(-m, chi) as a finite sum of m + 2 terms."""
    if m < 0 or nu < 1:
        raise ParamError("need m >= 0 and nu >= 1")
    qp = as_qparam(q)
    total = 0j
    for r in range(m + 1):
        z = cmath.exp((-m + r - nu) * qp.log_q)
        total += (-1) ** r * math.comb(m, r) * g_chi(chi, z)
    b0 = gen_bernoulli(0, chi)
    coef = (-1) ** (m + 1) * math.factorial(m) * math.factorial(nu - 1) / math.factorial(m + nu)
    total += coef * b0 / qp.log_q
    return math.exp(-m * qp.log1m) * total


def in_crystal_domain(s: complex, nu: int) -> bool:
    s = complex(s)
    if s.imag == 0 and s.real <= 0 and s.real == math.floor(s.real):
        return True
    x = s.real
    return not (x == math.floor(x) and x <= nu)


def crystal_value(s, nu: int, chi: DirichletCharacter | None = None) -> complex:
    """Pointwise limit q -> 0 of L_q^(nu)(s, chi) on its domain of existence."""
    s = complex(s)
    if nu < 1:
        raise ParamError("nu must be >= 1")
    if not in_crystal_domain(s, nu):
        raise OutsideCrystalDomain(f"the limit q -> 0 does not exist at s = {s} (nu = {nu})")
    trivial = chi is None or chi.modulus == 1
    if not trivial:
        return 0j
    if s.imag == 0 and s.real <= 0 and s.real == math.floor(s.real):
        return -1 + 0j if s.real == 0 else 0j
    if s.real > nu:
        return 0j
    # nu - m - 1 < Re(s) < nu - m
    m = math.floor(nu - s.real)
    return -pochhammer(s + 1, m) / math.factorial(m)


def tsumura_zeta(s, mu: int, a: float, q, tol: float = DEFAULT_TOL) -> complex:
    """(mu-1)!/(1-s)_mu (1-q)^s / log q + g_q(s, mu, a)."""
    s = complex(s)
    if mu < 1:
        raise ParamError("mu must be >= 1")
    for k in range(1, mu + 1):
        if abs(s - k) < POLE_RADIUS:
            raise PoleProximity(f"simple pole at s = {k}", index=k)
    qp = as_qparam(q)
    lead = math.factorial(mu - 1) / pochhammer(1 - s, mu) * cmath.exp(s * qp.log1m) / qp.log_q
    tail = f_direct(SeriesSpec.g(s, mu, a), qp, tol).value
    return lead + tail


def _log_product_terms(s: complex, qp, tol: float):
    """q^(s+j) for j = 0..J, with J large enough that the omitted log-terms are below tol."""
    r0 = math.exp(s.real * qp.log_q)
    # |log(1 - x)| <= |x|/(1 - |x|); the tail sum over j > J is <= 2 r0 q^(J+1)/(1-q) once r0 q^J < 1/2
    J = 0
    if r0 > 0.5:
        J = math.ceil(math.log(0.5 / r0) / qp.log_q)
    need = math.log(tol * (1 - qp.q) / (2 * max(r0, 1e-300))) / qp.log_q
    J = max(J, math.ceil(need), 1)
    j = np.arange(J + 1)
    x = np.exp((s + j) * qp.log_q)
    gaps = np.abs(1 - x)
    if np.any(gaps < POLE_RADIUS):
        jj = int(np.argmin(gaps))
        raise PoleProximity(f"q^(s+{jj}) = 1: pole of the q-gamma function", index=jj)
    return x


def q_gamma(s, q, tol: float = DEFAULT_TOL) -> complex:
    """Jackson's (q;q)_inf / (q^s;q)_inf (1-q)^(1-s)."""
    s = complex(s)
    qp = as_qparam(q)
    x = _log_product_terms(s, qp, tol)
    y = np.exp((1 + np.arange(len(x))) * qp.log_q)
    log_val = np.sum(np.log1p(-y)) - np.sum(np.log(1 - x)) + (1 - s) * qp.log1m
    return complex(np.exp(log_val))


def q_digamma(s, q, tol: float = DEFAULT_TOL) -> complex:
    """Gamma_q'(s)/Gamma_q(s) = -log(1-q) + log q sum_j q^(s+j)/(1 - q^(s+j))."""
    s = complex(s)
    qp = as_qparam(q)
    x = _log_product_terms(s, qp, tol)
    return -qp.log1m + qp.log_q * complex(np.sum(x / (1 - x)))


def g_chi_at_one(chi: DirichletCharacter) -> complex:
    """Limit of g_chi(z) as z -> 1 for a non-principal chi: -sum k chi(k) / N."""
    return -sum(k * chi(k) for k in range(1, chi.modulus + 1)) / chi.modulus


def L_at_one_via_qgamma(nu: int, chi: DirichletCharacter, q, tol: float = DEFAULT_TOL,
                        include_center: bool = True) -> complex:
    """L_q^(nu)(1, chi) through the logarithmic derivative of Gamma_{q^N}.

    The expansion at s = 1 has one term at z = q^0 = 1, where g_chi takes the
    finite value -sum k chi(k)/N.  That value vanishes for even characters
    and not otherwise; ``include_center=False`` drops it.
    """
    if chi.is_principal:
        raise ParamError("L_q(1, chi) is a pole for the principal character")
    qp = as_qparam(q)
    N = chi.modulus
    total = 0j
    for r in range(1, nu):
        total += g_chi(chi, cmath.exp((-nu + r) * qp.log_q))
    if include_center:
        total += g_chi_at_one(chi)
    qN = as_qparam(qp.q**N)
    digs = 0j
    for k in range(1, N + 1):
        c = chi(k)
        if c:
            digs += c * q_digamma(k / N, qN, tol)
    return (1 - qp.q) * total + (1 - qp.q) / (N * qp.log_q) * digs
