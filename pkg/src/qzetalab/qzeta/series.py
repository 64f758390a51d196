"""Direct summation and the binomial expansion of the q-series.

The expansion

    f_q(s, t, chi) = (1-q)^s sum_r binom(s+r-1, r) g_chi(q^(t+r))

continues f_q to all s away from its poles, but taken literally it cancels
badly once |s| or -Re(t) is large: individual terms grow like
|binom(s+r-1, r)| while the sum stays moderate.  We therefore split off a
head n < K of the defining series, sum it directly (each (1-q^n)^(-s) is an
honest power since 1-q^n > 0), and expand only the tail n >= K.  That tail
is the same binomial sum with g_chi(z) replaced by z^(K-1) g_chi(z), so
its terms decay like (q^K)^r and the head cutoff K trades head length
against cancellation.  K = 1 is the textbook formula.

Poles.  The r-th tail term is singular where q^(N(t+r)) = 1, i.e. on the
lattice t + r in (2 pi i / (N log q)) Z.  For L_q^(nu) (t = s - nu) that is
s in nu - r + delta Z / N.  At lattice points where sum_k chi(k) zeta^k
vanishes the singularity is removable.  When t = s - nu and s sits at a
non-positive integer the binomial coefficient vanishes against the
pole, and that term is evaluated in the limit form.

Convergence.  Once Re(t + r) > 0 the kernel obeys
|z^(K-1) g_chi(z)| <= W |z|^K / (1 - |z|^N) with W = sum |chi|, and consecutive
bounds shrink by at most q^K (1 + |s-1|/(r+1)).  The tail after r is then
geometric and that bound is the stopping rule.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from ..errors import BudgetExceeded, NotConvergent, ParamError, PoleProximity
from ..qcore import DirichletCharacter, QParam, as_qparam, principal_character
from ._kernel import Kernel

DEFAULT_TOL = 1e-13
DEFAULT_MAX_TERMS = 200_000
MAX_HEAD = 50_000
# Largest ratio q^K we let the tail run at, and the one we aim for when Re(t) >= 0.
_Y_MAX = 0.5
_Y_MIN = 1e-3


class SeriesKind(enum.Enum):
    F_CHI = "f"
    G_HURWITZ = "g"
    L_NU = "L"
    ZETA_NU = "zeta"
    L_MU = "L_mu"
    TSUMURA = "tsumura"


class Strategy(enum.Enum):
    DIRECT = "direct"
    EXPANSION = "expansion"
    EULER_MACLAURIN = "em"


@dataclass(frozen=True)
class SeriesSpec:
    """Which member of the family, at which s.

    ``param`` is t for F_CHI and G_HURWITZ, nu for L_NU and ZETA_NU, mu for
    L_MU and TSUMURA.
    """

    kind: SeriesKind
    s: complex
    param: Union[complex, int]
    a: float = 1.0
    chi: Optional[DirichletCharacter] = None

    def __post_init__(self):
        object.__setattr__(self, "s", complex(self.s))
        if not (0.0 < self.a <= 1.0):
            raise ParamError(f"Hurwitz shift a must lie in (0, 1], got {self.a}")
        if self.kind in (SeriesKind.L_NU, SeriesKind.ZETA_NU, SeriesKind.L_MU, SeriesKind.TSUMURA):
            if int(self.param) != self.param or int(self.param) < 1:
                raise ParamError(f"{self.kind.name} needs an integer parameter >= 1, got {self.param}")
            object.__setattr__(self, "param", int(self.param))
        else:
            object.__setattr__(self, "param", complex(self.param))
        if self.kind in (SeriesKind.L_NU, SeriesKind.F_CHI, SeriesKind.L_MU) and self.chi is None:
            object.__setattr__(self, "chi", principal_character(1))
        if self.kind is SeriesKind.ZETA_NU:
            object.__setattr__(self, "chi", principal_character(1))

    @classmethod
    def zeta(cls, s, nu: int = 1) -> "SeriesSpec":
        return cls(SeriesKind.ZETA_NU, s, nu)

    @classmethod
    def L(cls, s, nu: int, chi: DirichletCharacter) -> "SeriesSpec":
        return cls(SeriesKind.L_NU, s, nu, chi=chi)

    @classmethod
    def f(cls, s, t, chi: Optional[DirichletCharacter] = None) -> "SeriesSpec":
        return cls(SeriesKind.F_CHI, s, t, chi=chi)

    @classmethod
    def g(cls, s, t, a: float = 1.0) -> "SeriesSpec":
        return cls(SeriesKind.G_HURWITZ, s, t, a=a)

    @classmethod
    def L_mu(cls, s, mu: int, chi: Optional[DirichletCharacter] = None) -> "SeriesSpec":
        return cls(SeriesKind.L_MU, s, mu, chi=chi)

    @classmethod
    def tsumura(cls, s, mu: int, a: float = 1.0) -> "SeriesSpec":
        return cls(SeriesKind.TSUMURA, s, mu, a=a)

    @property
    def t(self) -> complex:
        if self.kind in (SeriesKind.L_NU, SeriesKind.ZETA_NU):
            return self.s - self.param
        return complex(self.param)

    @property
    def dt_ds(self) -> int:
        return 1 if self.kind in (SeriesKind.L_NU, SeriesKind.ZETA_NU) else 0

    @property
    def nu(self) -> int:
        return self.param if self.kind in (SeriesKind.L_NU, SeriesKind.ZETA_NU) else 0

    def with_s(self, s) -> "SeriesSpec":
        return SeriesSpec(self.kind, s, self.param, self.a, self.chi)


@dataclass(frozen=True)
class EvalOutput:
    value: complex
    bound: Optional[float]
    strategy: Strategy
    terms_used: int


def _power(log_base, z: complex) -> complex:
    return cmath.exp(z * log_base)


# ----------------------------------------------------------------------------
# direct summation


def f_direct(spec: SeriesSpec, q, tol: float = DEFAULT_TOL, max_terms: int = DEFAULT_MAX_TERMS) -> EvalOutput:
    """Partial sums of the defining series, Re(t) > 0 only.

    Tail after the cut: every term has |[m]_q^(-s)| <= B = max(1, (1-q)^Re(s))
    for m >= 1, so sum_{n > cut} |chi(n) q^(n t) [n]^(-s)| <= B q^((cut+1) Re t)/(1 - q^Re t)
    (with n + a in place of n for the Hurwitz variant).
    """
    qp = as_qparam(q)
    if spec.kind is SeriesKind.TSUMURA:
        raise ParamError("use tsumura_zeta for the Tsumura variant")
    s, t = spec.s, spec.t
    if t.real <= 0:
        raise NotConvergent(f"the defining series needs Re(t) > 0, got t = {t}")
    L, L1 = qp.log_q, qp.log1m
    B = max(1.0, math.exp(s.real * L1))
    rt = math.exp(t.real * L)
    shift = 0.0 if spec.kind is not SeriesKind.G_HURWITZ else spec.a
    # smallest cut with B q^((cut+1) Re t) / (1 - q^Re t) < tol
    need = math.log(tol * (1 - rt) / B) / (t.real * L) - 1
    cut = max(1, math.ceil(need))
    if spec.kind is SeriesKind.G_HURWITZ:
        cut += 1
    if cut > max_terms:
        raise BudgetExceeded(f"direct series needs {cut} terms, budget {max_terms}")
    if spec.kind is SeriesKind.G_HURWITZ:
        m = np.arange(cut, dtype=float) + shift
        coef = np.ones(cut, dtype=complex)
    else:
        n = np.arange(1, cut + 1)
        vals = np.asarray(spec.chi.values, dtype=complex)
        coef = vals[(n - 1) % spec.chi.modulus]
        m = n.astype(float)
    # log [m]_q = log(1 - q^m) - log(1 - q)
    log_qint = np.log(-np.expm1(m * L)) - L1
    terms = coef * np.exp(m * t * L - s * log_qint)
    value = complex(math.fsum(terms.real), math.fsum(terms.imag))
    return EvalOutput(value, None, Strategy.DIRECT, cut)


# ----------------------------------------------------------------------------
# expansion


def choose_head(s: complex, t: complex, qp: QParam, modulus: int = 1) -> int:
    """Head cutoff K (K = 1 mod modulus) putting q^K near the cancellation optimum.

    The tail terms carry roughly |binom(s+r-1, r)| y^(r + Re t) with y = q^K,
    whose sum is y^Re(t) (1-y)^(-|s|).  Minimizing over y gives
    y = a/(a + |s|) with a = -Re(t) > 0; for Re(t) >= 0 a y of order 1/|s|
    keeps the growth bounded by e.
    """
    a = max(0.0, -t.real)
    m = abs(s)
    if a > 0:
        y = a / (a + m) if m > 0 else _Y_MAX
    else:
        y = 1.0 / (1.0 + m)
    y = min(max(y, _Y_MIN), _Y_MAX)
    if qp.q <= y:
        return 1
    K = math.ceil(math.log(y) / qp.log_q)
    K = min(K, MAX_HEAD)
    # round up to 1 mod modulus
    K += (1 - K) % modulus
    return max(K, 1)


def _head_sum(chi: DirichletCharacter, s: complex, t: complex, dt: int, qp: QParam, K: int, want_ds: bool, want_dq: bool):
    if K <= 1:
        return 0j, 0j, 0j
    L = qp.log_q
    n = np.arange(1, K)
    vals = np.asarray(chi.values, dtype=complex)[(n - 1) % chi.modulus]
    keep = vals != 0
    n, vals = n[keep], vals[keep]
    qn = np.exp(n * L)
    log1m = np.log1p(-qn)
    terms = vals * np.exp(n * t * L - s * log1m)
    H = complex(np.sum(terms))
    dHs = dHq = 0j
    if want_ds:
        dHs = complex(np.sum(terms * (n * L * dt - log1m)))
    if want_dq:
        dHq = complex(np.sum(terms * (n * t / qp.q + s * n * qn / (qp.q * (1 - qn)))))
    return H, dHs, dHq


def _expansion_core(spec: SeriesSpec, qp: QParam, tol: float, max_terms: int, head: Optional[int],
                    want_ds: bool = False, want_dq: bool = False):
    s, t, dt = spec.s, spec.t, spec.dt_ds
    chi = spec.chi
    nu = spec.nu
    L, q = qp.log_q, qp.q
    N = chi.modulus
    K = choose_head(s, t, qp, N) if head is None else int(head)
    if K < 1 or (K - 1) % N:
        raise ParamError(f"head cutoff must be >= 1 and 1 mod {N}, got {K}")
    kern = Kernel(chi.values, K)
    deriv = want_ds or want_dq

    H, dHs, dHq = _head_sum(chi, s, t, dt, qp, K, want_ds, want_dq)

    T = dTs = dTq = 0j
    C, dC = 1 + 0j, 0j  # binom(s+r-1, r) and its s-derivative
    r_min = nu + 2 if dt else 2
    qK = math.exp(K * L)
    s1 = abs(s - 1)
    r = 0
    while True:
        x = t + r
        w = x * L
        reg = dt == 1 and r >= nu and abs(x) < 0.5
        try:
            if reg:
                G, dG = kern.value(w, regularized=True, deriv=deriv)
                P, dP = _reduced_binomial(s, r, r - nu)
                T += P * G / L
                if want_ds:
                    dTs += (dP * G + P * dG * L) / L
                if want_dq:
                    dTq += P * (dG * x / (L * q) - G / (L * L * q))
            else:
                F, dF = kern.value(w, deriv=deriv)
                T += C * F
                if want_ds:
                    dTs += dC * F + C * dF * L * dt
                if want_dq:
                    dTq += C * dF * x / q
        except PoleProximity as exc:
            raise PoleProximity(f"expansion term r = {r} sits on a pole: {exc}", index=r) from None
        if r >= r_min and x.real > 0 and not reg:
            rho = qK * (1 + s1 / (r + 1))
            if rho < 1:
                # C vanishes identically past a removable index at integer s, dC does not
                mag = abs(C) + (abs(dC) if want_ds else 0.0)
                tail = mag * kern.abs_bound(w) * rho / (1 - rho)
                scale = max(1.0, abs(H + T))
                if deriv:
                    tail *= r + 2
                if tail < tol * scale:
                    break
        dC = (dC * (s + r) + C) / (r + 1)
        C = C * (s + r) / (r + 1)
        r += 1
        if r > max_terms:
            raise BudgetExceeded(f"expansion did not converge within {max_terms} terms")

    pre = cmath.exp(s * qp.log1m)
    S = H + T
    value = pre * S
    ds = pre * (qp.log1m * S + dHs + dTs) if want_ds else None
    dq = pre * (-s / (1 - q) * S + dHq + dTq) if want_dq else None
    return value, ds, dq, K - 1 + r + 1


def _reduced_binomial(s: complex, r: int, m: int):
    """binom(s+r-1, r) with the factor (s+m) removed, and its s-derivative."""
    P, dP = 1 + 0j, 0j
    for i in range(r):
        if i == m:
            P, dP = P / (i + 1), dP / (i + 1)
        else:
            dP = (dP * (s + i) + P) / (i + 1)
            P = P * (s + i) / (i + 1)
    return P, dP


_EXPANSION_KINDS = (SeriesKind.L_NU, SeriesKind.ZETA_NU, SeriesKind.L_MU, SeriesKind.F_CHI)


def _check_expansion_kind(spec: SeriesSpec):
    if spec.kind not in _EXPANSION_KINDS:
        raise ParamError(f"the binomial expansion covers character series, not {spec.kind.name}")


def zeta_expansion(spec: SeriesSpec, q, tol: float = DEFAULT_TOL, max_terms: int = DEFAULT_MAX_TERMS,
                   head: Optional[int] = None) -> EvalOutput:
    """Meromorphic continuation through the binomial expansion.

    ``head`` fixes the cutoff K; ``head=1`` is the unshifted textbook sum.
    """
    _check_expansion_kind(spec)
    qp = as_qparam(q)
    try:
        value, _, _, used = _expansion_core(spec, qp, tol, max_terms, head)
    except PoleProximity as exc:
        raise PoleProximity(f"s = {spec.s} is at or next to a simple pole ({exc})", exc.index) from None
    if spec.s.imag == 0 and spec.t.imag == 0 and spec.chi.is_real():
        value = complex(value.real, 0.0)
    return EvalOutput(value, None, Strategy.EXPANSION, used)


def dzeta_ds(spec: SeriesSpec, q, tol: float = DEFAULT_TOL) -> complex:
    _check_expansion_kind(spec)
    return _expansion_core(spec, as_qparam(q), tol, DEFAULT_MAX_TERMS, None, want_ds=True)[1]


def dzeta_dq(spec: SeriesSpec, q, tol: float = DEFAULT_TOL) -> complex:
    _check_expansion_kind(spec)
    return _expansion_core(spec, as_qparam(q), tol, DEFAULT_MAX_TERMS, None, want_dq=True)[2]


def value_and_ds(spec: SeriesSpec, q, tol: float = DEFAULT_TOL):
    """(value, d/ds value) from a single pass; what Newton iterations want."""
    _check_expansion_kind(spec)
    v, ds, _, _ = _expansion_core(spec, as_qparam(q), tol, DEFAULT_MAX_TERMS, None, want_ds=True)
    return v, ds


def zeta(s, nu: int = 1, q=0.5, tol: float = DEFAULT_TOL) -> complex:
    """zeta_q^(nu)(s) by the expansion."""
    return zeta_expansion(SeriesSpec.zeta(s, nu), q, tol).value
