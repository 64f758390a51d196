"""Classical oracles for q -> 1 comparisons: Hurwitz, Riemann and Dirichlet
L via Euler-Maclaurin, the digamma function and a small table of zeros."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import special

from .errors import ParamError, PoleAtOne, PoleError
from .qcore import DirichletCharacter, bernoulli

MAX_ORDER = 120
# left of this the head sum cancels too much; use the functional equation
REFLECT_BELOW = -4.0
EULER_GAMMA = 0.57721566490153286061


@dataclass(frozen=True)
class KnownZeros:
    """Trivial zeros -2j and the first few non-trivial ordinates on Re = 1/2."""

    nontrivial_im: tuple = (14.13472, 21.02203, 25.01085, 30.42487, 32.93506)

    def __post_init__(self):
        ims = self.nontrivial_im
        if any(b <= a for a, b in zip(ims, ims[1:])):
            raise ParamError("ordinates must be strictly increasing")

    @staticmethod
    def trivial(j: int) -> complex:
        if j < 1:
            raise ParamError("j >= 1")
        return complex(-2 * j, 0)

    def rho(self, j: int) -> complex:
        if not 1 <= j <= len(self.nontrivial_im):
            raise ParamError(f"only rho_1..rho_{len(self.nontrivial_im)} are tabulated")
        return complex(0.5, self.nontrivial_im[j - 1])


KNOWN_ZEROS = KnownZeros()


def _em_tail(s: complex, b: float, M: Optional[int]):
    """zeta(s, b) for b >= 10 by the plain Euler-Maclaurin formula.

    Returns (value, last_term). With M=None terms are added until they stop
    mattering or start to grow.
    """
    val = b ** (1 - s) / (s - 1) + 0.5 * b ** (-s)
    poch = s  # (s)_{2l-1}
    pw = b ** (-s - 1)
    last = 0j
    limit = MAX_ORDER if M is None else M
    prev = math.inf
    for l in range(1, limit + 1):
        term = bernoulli(2 * l) / math.factorial(2 * l) * poch * pw
        if M is None:
            size = abs(term)
            if size > prev:
                break
            val += term
            last = term
            if size <= 1e-17 * abs(val) or poch == 0:
                break
            prev = size
        else:
            val += term
            last = term
        poch *= (s + 2 * l - 1) * (s + 2 * l)
        pw /= b * b
    return val, last


def hurwitz_zeta(s, a: float = 1.0, M: Optional[int] = None, K: Optional[int] = None) -> complex:
    """zeta(s, a) for 0 < a <= 1 with the head shift zeta(s,a) = sum_{n<K} (n+a)^-s + zeta(s, a+K)."""
    s = complex(s)
    if not 0 < a <= 1:
        raise ParamError("a must lie in (0, 1]")
    if s == 1:
        raise PoleAtOne("zeta(s, a) has a pole at s = 1")
    if M is not None and s.real <= -M:
        raise ParamError(f"order M = {M} needs Re(s) > -M")
    if s.real < REFLECT_BELOW and M is None and K is None:
        return _hurwitz_reflected(s, a)
    if K is None:
        K = max(10, math.ceil(abs(s.imag)))
    n = np.arange(K) + a
    head = complex(np.sum(np.exp(-s * np.log(n))))
    tail, _ = _em_tail(s, K + a, M)
    return head + tail


def _hurwitz_reflected(s: complex, a: float) -> complex:
    """zeta(s, a) = 2 Gamma(w) (2 pi)^-w sum_n cos(pi w/2 - 2 pi n a) n^-w with w = 1 - s."""
    w = 1 - s
    # sum over n > N is below N^(1 - Re w)/(Re w - 1)
    sigma = w.real
    N = math.ceil((1e-17 * (sigma - 1)) ** (1 / (1 - sigma)))
    n = np.arange(1, N + 1, dtype=float)
    terms = np.cos(np.pi * w / 2 - 2 * np.pi * n * a) * np.exp(-w * np.log(n))
    total = math.fsum(terms.real[::-1]) + 1j * math.fsum(terms.imag[::-1])
    return 2 * np.exp(special.loggamma(w) - w * math.log(2 * math.pi)) * total


def riemann_zeta(s) -> complex:
    return hurwitz_zeta(s, 1.0)


def dirichlet_L(s, chi: DirichletCharacter) -> complex:
    """N^-s sum_k chi(k) zeta(s, k/N)."""
    s = complex(s)
    N = chi.modulus
    if s == 1:
        if chi.is_principal:
            raise PoleAtOne("L(s, chi) has a pole at s = 1 for principal chi")
        # the pole parts cancel since sum chi(k) = 0; use the digamma form
        return -sum(chi(k) * digamma(k / N) for k in range(1, N + 1)) / N
    total = 0j
    for k in range(1, N + 1):
        c = chi(k)
        if c:
            total += c * hurwitz_zeta(s, k / N)
    return N ** (-s) * total


def digamma(x: float) -> float:
    """psi(x) for real x: upward recurrence to x >= 10, then the asymptotic series.

    Negative non-integers go through the reflection formula.
    """
    x = float(x)
    if x <= 0 and x == math.floor(x):
        raise PoleError(f"digamma has a pole at {x:g}")
    if x < 0:
        return digamma(1 - x) - math.pi / math.tan(math.pi * x)
    acc = 0.0
    while x < 10:
        acc -= 1 / x
        x += 1
    inv2 = 1 / (x * x)
    series = 0.0
    p = inv2
    for k in range(1, 10):
        series += bernoulli(2 * k) / (2 * k) * p
        p *= inv2
    return acc + math.log(x) - 0.5 / x - series
