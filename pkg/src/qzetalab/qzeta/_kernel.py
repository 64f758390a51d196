"""Stable evaluation of the shifted character kernel.

For a character table chi mod N and a head cutoff K (K = 1 mod N) the tail of
every q-series here reduces to

    F(w) = e^{(K-1) w} * sum_j chi(j) e^{j w} / (1 - e^{N w}),   w = x log q,

i.e. z^(K-1) g_chi(z) at z = q^x.  F has a lattice of (possibly removable)
poles at w = 2 pi i k / N.  Near the lattice everything is rewritten relative
to the nearest lattice point so that numerator and denominator are both
computed with expm1 and never cancel.
"""

from __future__ import annotations

import cmath
import math

from ..errors import PoleProximity

TWO_PI = 2.0 * math.pi
# |1 - z^N| below this is treated as sitting on a pole.
POLE_RADIUS = 1e-8
_SMALL = 1e-3


def exprel(x: complex) -> complex:
    """(e^x - 1)/x, equal to 1 at x = 0."""
    if abs(x) < _SMALL:
        return 1 + x / 2 * (1 + x / 3 * (1 + x / 4 * (1 + x / 5)))
    return _expm1(x) / x


def exprel_prime(x: complex) -> complex:
    if abs(x) < _SMALL:
        return 0.5 + x / 3 + x * x / 8 + x**3 / 30
    ex = cmath.exp(x)
    return (x * ex - _expm1(x)) / (x * x)


def _expm1(x: complex) -> complex:
    """Complex expm1 without cancellation for small |x|."""
    if x.imag == 0:
        return complex(math.expm1(x.real))
    a, b = x.real, x.imag
    # e^{a+ib} - 1 = (e^a cos b - 1) + i e^a sin b
    em1 = math.expm1(a)
    # cos b - 1 = -2 sin^2(b/2)
    cm1 = -2.0 * math.sin(b / 2) ** 2
    re = em1 * math.cos(b) + cm1
    return complex(re, math.exp(a) * math.sin(b))


class Kernel:
    """F(w) and F'(w) for one character and one head cutoff."""

    def __init__(self, values, K: int = 1, pole_radius: float = POLE_RADIUS):
        self.chi = tuple(complex(v) for v in values)
        self.N = len(self.chi)
        if (K - 1) % self.N:
            raise ValueError("head cutoff K must be 1 mod the character modulus")
        self.K = K
        self.pole_radius = pole_radius
        self.weight = sum(abs(c) for c in self.chi)
        self._roots = {}

    def _lattice_coeffs(self, k: int):
        """chi(j) * exp(2 pi i j k / N) for j = 1..N, and their sum."""
        kk = k % self.N
        hit = self._roots.get(kk)
        if hit is None:
            coeffs = []
            for j, c in enumerate(self.chi, start=1):
                if c == 0:
                    coeffs.append(0j)
                    continue
                m = (j * kk) % self.N
                coeffs.append(c * cmath.rect(1.0, TWO_PI * m / self.N))
            num0 = sum(coeffs)
            removable = abs(num0) <= 1e-12 * self.weight
            hit = (coeffs, num0, removable)
            self._roots[kk] = hit
        return hit

    def nearest_lattice(self, w: complex) -> int:
        return round((self.N * w).imag / TWO_PI)

    def value(self, w: complex, regularized: bool = False, deriv: bool = False):
        """Return (F, F') at w; with ``regularized`` return (w F, (w F)')."""
        N, K = self.N, self.K
        Nw = N * w
        if abs(Nw.real) < 1.0:
            k = self.nearest_lattice(w)
            if regularized and k == 0:
                return self._regularized_origin(w, deriv)
            F, dF = self._near_lattice(w, k, deriv)
        elif Nw.real <= -1.0:
            F, dF = self._inside(w, deriv)
        else:
            F, dF = self._outside(w, deriv)
        if regularized:
            return w * F, (F + w * dF) if deriv else None
        return F, dF

    def _inside(self, w: complex, deriv: bool):
        # |z| < 1: direct form.
        N, K = self.N, self.K
        num = 0j
        dnum = 0j
        for j, c in enumerate(self.chi, start=1):
            if c:
                e = cmath.exp((K - 1 + j) * w)
                num += c * e
                dnum += c * (K - 1 + j) * e
        eN = cmath.exp(N * w)
        den = 1 - eN
        F = num / den
        if not deriv:
            return F, None
        dden = -N * eN
        return F, (dnum * den - num * dden) / (den * den)

    def _outside(self, w: complex, deriv: bool):
        # |z| > 1: divide through by z^N.
        N, K = self.N, self.K
        num = 0j
        dnum = 0j
        for j, c in enumerate(self.chi, start=1):
            if c:
                p = K - 1 + j - N
                e = cmath.exp(p * w)
                num += c * e
                dnum += c * p * e
        emN = cmath.exp(-N * w)
        den = emN - 1
        F = num / den
        if not deriv:
            return F, None
        dden = -N * emN
        return F, (dnum * den - num * dden) / (den * den)

    def _near_lattice(self, w: complex, k: int, deriv: bool):
        N, K = self.N, self.K
        coeffs, num0, removable = self._lattice_coeffs(k)
        w0 = complex(0.0, TWO_PI * k / N)
        e = w - w0
        # e^{(K-1) w} = e^{(K-1) e} because (K-1) w0 is a multiple of 2 pi i.
        shift = cmath.exp((K - 1) * e)
        Ne = N * e
        den = -_expm1(Ne)
        if removable:
            # num = sum c_j expm1(j e); num/den = -sum c_j j exprel(j e) / (N exprel(N e))
            A = 0j
            dA = 0j
            for j, c in enumerate(coeffs, start=1):
                if c:
                    A -= c * j * exprel(j * e)
                    if deriv:
                        dA -= c * j * j * exprel_prime(j * e)
            B = N * exprel(Ne)
            R = A / B
            F = shift * R
            if not deriv:
                return F, None
            dB = N * N * exprel_prime(Ne)
            dR = (dA * B - A * dB) / (B * B)
            return F, (K - 1) * F + shift * dR
        if abs(den) < self.pole_radius:
            raise PoleProximity(f"|1 - z^{N}| = {abs(den):.3g} at lattice point k = {k}")
        num = 0j
        dnum = 0j
        for j, c in enumerate(coeffs, start=1):
            if c:
                ej = cmath.exp(j * e)
                num += c * ej
                dnum += c * j * ej
        R = num / den
        F = shift * R
        if not deriv:
            return F, None
        dden = -N * cmath.exp(Ne)
        dR = (dnum * den - num * dden) / (den * den)
        return F, (K - 1) * F + shift * dR

    def _regularized_origin(self, w: complex, deriv: bool):
        # w F(w) = -e^{(K-1)w} num(w) / (N exprel(N w)), analytic at w = 0.
        N, K = self.N, self.K
        num = 0j
        dnum = 0j
        for j, c in enumerate(self.chi, start=1):
            if c:
                e = cmath.exp((K - 1 + j) * w)
                num += c * e
                dnum += c * (K - 1 + j) * e
        B = N * exprel(N * w)
        G = -num / B
        if not deriv:
            return G, None
        dB = N * N * exprel_prime(N * w)
        return G, -(dnum * B - num * dB) / (B * B)

    def abs_bound(self, w: complex) -> float:
        """Upper bound of |F(w)| valid for Re(w) < 0."""
        r = math.exp(w.real)
        return self.weight * r**self.K / (1 - r**self.N)
