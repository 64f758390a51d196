"""Euler-Maclaurin evaluation of zeta_q^(nu)(s) with a certified remainder.

With f(x) = q^(tx) (1 - q^x)^(-s), t = s - nu, Euler-Maclaurin from x = N
gives a head sum, a half-term, the integral (a closed-form incomplete
beta), Bernoulli corrections and a periodic-Bernoulli integral.  Writing
the periodic Bernoulli function as a Fourier series turns that last
integral into a double sum over Fourier modes l and over j of incomplete
beta values b_{q^N}(t + j + delta l, 1 - s - j).  Raising alpha M - 1
times leaves elementary terms plus one beta remainder.  We keep the modes
l0 <= l <= l1 and bound the rest.

Bound.  Everything omitted is

  |log q|^(2n-1) (1-q)^Re(s) / (2 pi)^(2n) * ( A + B )

  A = sum_{l outside window} sum_j sum_{k<M} |a_j| / l^(2n) |(s+j)_{k-1}| / |(t+j+delta l)_k|
        Q^(Re t + j + k - 1) / (1-Q)^(Re s + j - 1 + k)
  B = sum_{l != 0} sum_j |a_j| / l^(2n) |(s+j)_{M-1}| / |(t+j+delta l)_{M-1}|
        b_Q(Re t + j + M - 1, -Re s - j - M + 2)

with Q = q^N.  |b_Q(alpha, beta)| <= b_Q(Re alpha, Re beta) needs
Re(t) + j + M - 1 > 0, which is the admissibility condition on s.  For
|l| > Lam, where |l| |delta| >= 2 |Im t|, every factor of the Pochhammer
symbols has modulus >= |l| |delta| / 2, and the l-tails are summed with
sum_{l > Lam} l^(-p) <= Lam^(1-p) / (p - 1).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from ..errors import BudgetExceeded, ParamError, PoleProximity
from ..incbeta import special_beta_terms
from ..qcore import as_qparam, bernoulli
from .series import EvalOutput, Strategy

TWO_PI = 2.0 * math.pi
POCH_POLE_TOL = 1e-12
# Largest tolerated growth Q^min(Re t, 0) of the head sum: rounding error in
# the result is about this times machine epsilon.
MAX_HEAD_GROWTH = 1e6
EPS = 2.220446049250313e-16


@dataclass(frozen=True)
class EvalParams:
    N: int
    M: int
    n: int
    l0: int
    l1: int
    target: float = 1e-5

    def __post_init__(self):
        if self.N < 1 or self.M < 2 or self.n < 1:
            raise ParamError(f"need N >= 1, M >= 2, n >= 1, got N={self.N}, M={self.M}, n={self.n}")
        if not self.l0 < self.l1:
            raise ParamError(f"need l0 < l1, got {self.l0}, {self.l1}")
        if not self.target > 0:
            raise ParamError("target must be positive")


@dataclass(frozen=True)
class ACoeffTable:
    n: int
    s: complex
    t: complex
    entries: tuple

    def __getitem__(self, j: int) -> complex:
        return self.entries[j]

    def __len__(self) -> int:
        return len(self.entries)


def a_coeffs(n: int, s, t) -> ACoeffTable:
    """a_j^(n), j = 0..n, with (d/dx)^n q^(tx)(1-q^x)^(-s) = (log q)^n sum_j a_j h_j(x)."""
    if n < 0:
        raise ParamError("order must be >= 0")
    s, t = complex(s), complex(t)
    a = [1 + 0j]
    for m in range(1, n + 1):
        nxt = []
        for j in range(m + 1):
            v = (t + j) * a[j] if j < m else 0j
            if j >= 1:
                v += (s + j - 1) * a[j - 1]
            nxt.append(v)
        a = nxt
    return ACoeffTable(n, s, t, tuple(a))


def _check(s: complex, nu: int, params: EvalParams):
    if nu < 1:
        raise ParamError("nu must be >= 1")
    if not s.real > nu + 1 - params.M:
        raise ParamError(f"need Re(s) > nu + 1 - M = {nu + 1 - params.M}, got {s}")
    if max(abs(params.l0), abs(params.l1)) > 10**6:
        raise ParamError("Fourier window too wide")


def _window_sum(s, t, delta, N_log_q, log1mQ, a2n, n, M, ls):
    """Sum over l in ls (l != 0), j, k of the raised-beta elementary terms, without
    the (log q)^(2n-1) factor; also the sum of their moduli."""
    ls = np.asarray([l for l in ls if l != 0], dtype=float)
    if ls.size == 0:
        return 0j, 0.0
    total = np.zeros(ls.size, dtype=complex)
    mag = np.zeros(ls.size)
    for j, aj in enumerate(a2n):
        if aj == 0:
            continue
        base = t + j + delta * ls
        poch = np.ones(ls.size, dtype=complex)
        up = 1 + 0j  # (s+j)_{k-1}
        for k in range(1, M):
            poch = poch * (base + k - 1)
            if np.any(np.abs(poch) < POCH_POLE_TOL):
                raise PoleProximity(f"(t + {j} + delta l)_{k} vanishes: s is on the pole lattice", index=j + k - 1)
            elem = cmath.exp(N_log_q * (t - 1 + j + k) - (s + j - 1 + k) * log1mQ)
            term = aj * (-1) ** k * up / poch * elem
            total += term
            mag += np.abs(term)
            up *= s + j + k - 1
    fourier = (TWO_PI * 1j * ls) ** (2 * n)
    return complex(np.sum(total / fourier)), float(np.sum(mag / np.abs(fourier)))


def _em_sum(s: complex, nu: int, qp, params: EvalParams):
    """(value, scale) where scale bounds the moduli of everything summed."""
    N, M, n = params.N, params.M, params.n
    L = qp.log_q
    t = s - nu
    Q = math.exp(N * L)
    log1mQ = math.log1p(-Q)
    for k in range(1, nu + 1):
        if abs(s - k) < 1e-8:
            raise PoleProximity(f"simple pole at s = {k}", index=nu - k)

    m = np.arange(1, N + 1)
    heads = np.exp(m * t * L - s * np.log1p(-np.exp(m * L)))
    parts = [complex(np.sum(heads))]
    scale = float(np.sum(np.abs(heads)))
    parts.append(-0.5 * cmath.exp(N * t * L - s * log1mQ))
    # -(1/log q) b_Q(t, 1-s) in closed form
    parts.append(-special_beta_terms(Q, s - 1, nu) / L)

    for k in range(1, n + 1):
        coef = bernoulli(2 * k) / math.factorial(2 * k) * L ** (2 * k - 1)
        for j, aj in enumerate(a_coeffs(2 * k - 1, s, t).entries):
            parts.append(-coef * aj * cmath.exp(N * (t + j) * L - (s + j) * log1mQ))

    a2n = a_coeffs(2 * n, s, t).entries
    win, win_scale = _window_sum(s, t, qp.delta, N * L, log1mQ, a2n, n, M, range(params.l0, params.l1 + 1))
    lead = L ** (2 * n - 1)
    parts.append(lead * win)
    scale += sum(abs(x) for x in parts[1:-1]) + abs(lead) * win_scale
    pre = cmath.exp(s * qp.log1m)
    return pre * sum(parts), abs(pre) * scale


def zeta_em(s, nu: int, q, params: EvalParams) -> EvalOutput:
    """zeta_q^(nu)(s) from the Euler-Maclaurin formula, with remainder_bound as ``bound``."""
    s = complex(s)
    qp = as_qparam(q)
    _check(s, nu, params)
    value, _ = _em_sum(s, nu, qp, params)
    bound = remainder_bound(s, nu, qp, params)
    terms = params.N + params.n + (params.l1 - params.l0) * (2 * params.n + 1) * (params.M - 1)
    return EvalOutput(value, bound, Strategy.EULER_MACLAURIN, terms)


def rounding_estimate(s, nu: int, q, params: EvalParams) -> float:
    """Machine epsilon times the total modulus of the summed terms."""
    s = complex(s)
    qp = as_qparam(q)
    _check(s, nu, params)
    return EPS * _em_sum(s, nu, qp, params)[1]


def _bound_parts(s: complex, nu: int, qp, params: EvalParams):
    """(A, B) of the module docstring, before the common prefactor."""
    N, M, n = params.N, params.M, params.n
    L = qp.log_q
    t = s - nu
    delta = qp.delta
    dabs = abs(delta)
    Q = math.exp(N * L)
    log1mQ = math.log1p(-Q)
    a2n = np.abs(np.asarray(a_coeffs(2 * n, s, t).entries))
    lam = max(abs(params.l0), abs(params.l1), math.ceil(2 * abs(t.imag) / dabs) + 1, 8)
    lfull = np.concatenate([np.arange(-lam, 0), np.arange(1, lam + 1)]).astype(float)
    outside = (lfull < params.l0) | (lfull > params.l1)
    inv_l = np.abs(lfull) ** (-2.0 * n)

    A = 0.0
    B = 0.0
    for j in range(2 * n + 1):
        if a2n[j] == 0:
            continue
        base = t + j + delta * lfull
        poch = np.ones(lfull.size, dtype=complex)
        up = 1.0  # |(s+j)_{k-1}|
        for k in range(1, M):
            poch = poch * (base + k - 1)
            mags = np.abs(poch)
            if np.any(mags < POCH_POLE_TOL):
                raise PoleProximity("bound undefined on the pole lattice")
            elem = math.exp(N * L * (t.real + j + k - 1) - (s.real + j - 1 + k) * log1mQ)
            explicit = float(np.sum((inv_l / mags)[outside]))
            p = 2 * n + k
            # sum over |l| > lam of l^(-2n) (|l| |delta| / 2)^(-k), both signs
            tail = 2 * (dabs / 2) ** (-k) * lam ** (1 - p) / (p - 1)
            A += a2n[j] * up * elem * (explicit + tail)
            up *= abs(s + j + k - 1)
        # beta part, k = M - 1 Pochhammer already in poch
        mags = np.abs(poch)
        alpha = s.real + j + M - 2
        beta_val = abs(special_beta_terms(Q, alpha, nu))
        p = 2 * n + M - 1
        tail = 2 * (dabs / 2) ** (-(M - 1)) * lam ** (1 - p) / (p - 1)
        B += a2n[j] * up * beta_val * (float(np.sum(inv_l / mags)) + tail)
    return A, B


def remainder_bound(s, nu: int, q, params: EvalParams) -> float:
    s = complex(s)
    qp = as_qparam(q)
    _check(s, nu, params)
    A, B = _bound_parts(s, nu, qp, params)
    pre = abs(qp.log_q) ** (2 * params.n - 1) * math.exp(s.real * qp.log1m) / TWO_PI ** (2 * params.n)
    return pre * (A + B)


def _prefactor(s: complex, qp, n: int) -> float:
    return abs(qp.log_q) ** (2 * n - 1) * math.exp(s.real * qp.log1m) / TWO_PI ** (2 * n)


def _head_growth_ok(t: complex, qp, N: int) -> bool:
    return math.exp(N * qp.log_q * min(t.real, 0.0)) <= MAX_HEAD_GROWTH


def auto_params(s, nu: int, q, target: float = 1e-5, budget: int = 200) -> EvalParams:
    """Escalate (N, M, n, window) until remainder_bound < target.

    Whichever of the two bound pieces dominates is attacked: the beta piece
    by doubling N (while the head sum stays well conditioned) or else by
    raising M; the window piece by widening the window.  n is raised when
    neither move is available.  A tuple meeting the bound is accepted only
    if its rounding estimate is also below target / 100; otherwise N is
    capped lower and the search goes on.  Deterministic; BudgetExceeded
    after ``budget`` escalation steps.
    """
    if not target > 0:
        raise ParamError("target must be positive")
    s = complex(s)
    qp = as_qparam(q)
    t = s - nu
    # smallest admissible M, plus one for slack
    M = max(2, math.floor(nu + 1 - s.real) + 2)
    N, n = 1, 2
    N_cap = 1 << 14
    # t + delta l is smallest near l* = -Im(t) / Im(delta); centre the window there
    lstar = round(-t.imag / qp.delta.imag)
    width = 2
    round_tol = target / 100
    for _ in range(budget):
        params = EvalParams(N, M, n, lstar - width, lstar + width, target)
        A, B = _bound_parts(s, nu, qp, params)
        pre = _prefactor(s, qp, n)
        if pre * (A + B) < target and math.isfinite(A + B):
            if N == 1 or EPS * _em_sum(s, nu, qp, params)[1] < round_tol:
                return params
            N //= 2
            N_cap = N
            continue
        if not math.isfinite(A + B) or B >= A:
            if 2 * N <= N_cap and _head_growth_ok(t, qp, 2 * N):
                N *= 2
            elif M < 40:
                M += 1
            elif n < 12:
                n += 1
            else:
                break
        else:
            if width < 512:
                width *= 2
            elif n < 12:
                n += 1
            else:
                break
    raise BudgetExceeded(f"no parameters within budget reach remainder < {target:g} at s = {s}, q = {qp.q}")
