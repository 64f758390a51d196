"""q-integers, Pochhammer symbols, Bernoulli numbers and Dirichlet characters."""

from __future__ import annotations

import cmath
import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

from .errors import InvalidCharacter, ParamError, PoleProximity

Number = Union[int, float, complex]

# |1 - z^N| below this makes g_chi refuse to evaluate.
G_CHI_POLE_THRESHOLD = 1e-12
BERNOULLI_DEFAULT_MAX = 64


@dataclass(frozen=True)
class QParam:
    """Deformation parameter 0 < q < 1 with log q and delta = 2*pi*i/log q cached."""

    q: float
    log_q: float = field(init=False)
    delta: complex = field(init=False)

    def __post_init__(self):
        q = float(self.q)
        if not (0.0 < q < 1.0):
            raise ParamError(f"q must lie in (0, 1), got {self.q!r}")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "log_q", math.log(q))
        object.__setattr__(self, "delta", 2j * math.pi / self.log_q)

    @property
    def log1m(self) -> float:
        """log(1 - q), computed without cancellation."""
        return math.log1p(-self.q)


def as_qparam(q: Union[QParam, float]) -> QParam:
    return q if isinstance(q, QParam) else QParam(q)


def qint(n: int, q: Union[QParam, float]) -> float:
    """The q-integer [n]_q = (1 - q^n)/(1 - q)."""
    if n < 1:
        raise ParamError("qint needs n >= 1")
    qp = as_qparam(q)
    return math.expm1(n * qp.log_q) / math.expm1(qp.log_q)


def pochhammer(s: Number, k: int) -> Number:
    """Rising factorial (s)_k = s (s+1) ... (s+k-1)."""
    if k < 0:
        raise ParamError("pochhammer needs k >= 0")
    out = 1
    for i in range(k):
        out = out * (s + i)
    return out


def complex_binomial(s: Number, r: int) -> Number:
    """binom(s + r - 1, r) = (s)_r / r!, the coefficients of (1 - x)^(-s)."""
    if r < 0:
        raise ParamError("complex_binomial needs r >= 0")
    out = 1
    for i in range(r):
        out = out * (s + i) / (i + 1)
    return out


class BernoulliCache:
    """Exact Bernoulli numbers B_0..B_max (B_1 = -1/2), extended on demand."""

    def __init__(self, max_index: int = BERNOULLI_DEFAULT_MAX):
        self._lock = threading.Lock()
        self._table: list[Fraction] = [Fraction(1)]
        self.extend(max_index)

    @property
    def max(self) -> int:
        return len(self._table) - 1

    def extend(self, n: int) -> None:
        with self._lock:
            table = self._table
            for m in range(len(table), n + 1):
                # sum_{j=0}^{m} C(m+1, j) B_j = 0
                acc = sum(math.comb(m + 1, j) * table[j] for j in range(m))
                table.append(-acc / (m + 1))

    def exact(self, n: int) -> Fraction:
        if n < 0:
            raise ParamError("Bernoulli index must be >= 0")
        if n > self.max:
            self.extend(n)
        return self._table[n]

    def __getitem__(self, n: int) -> float:
        return float(self.exact(n))


_BERNOULLI = BernoulliCache()


def bernoulli_exact(n: int) -> Fraction:
    return _BERNOULLI.exact(n)


def bernoulli(n: int) -> float:
    return _BERNOULLI[n]


def bernoulli_poly(n: int, x: float) -> float:
    """B_n(x) = sum_j C(n, j) B_j x^(n-j)."""
    if n < 0:
        raise ParamError("Bernoulli index must be >= 0")
    # Horner in x over the coefficients C(n, j) B_j, highest power first.
    out = 0.0
    for j in range(n + 1):
        out = out * x + math.comb(n, j) * float(_BERNOULLI.exact(j))
    return out


def periodic_bernoulli(n: int, x: float) -> float:
    return bernoulli_poly(n, x - math.floor(x))


@dataclass(frozen=True)
class DirichletCharacter:
    """A Dirichlet character stored as its value table chi(1), ..., chi(N).

    Call it on any integer: ``chi(n)`` reduces n modulo N.
    """

    modulus: int
    values: tuple
    is_principal: bool

    def __call__(self, n: int) -> complex:
        return self.values[(n % self.modulus) - 1]

    def __iter__(self):
        return iter(self.values)

    def is_real(self) -> bool:
        return all(v.imag == 0 for v in self.values)

    def is_even(self) -> bool:
        return abs(self(self.modulus - 1) - 1) < 1e-12

    def label(self) -> str:
        if self.is_principal:
            return f"principal:{self.modulus}"
        vals = ",".join(_fmt_value(v) for v in self.values)
        return f"chi{self.modulus}[{vals}]"


def _fmt_value(v: complex) -> str:
    if v.imag == 0:
        return f"{v.real:g}"
    return f"{v.real:g}{v.imag:+g}j"


def _group_exponent(n: int) -> int:
    units = [k for k in range(1, n + 1) if math.gcd(k, n) == 1]
    exp = 1
    for u in units:
        order, x = 1, u % n
        while x != 1 % n:
            x = (x * u) % n
            order += 1
        exp = exp * order // math.gcd(exp, order)
    return exp


def make_character(modulus: int, values: Sequence[Number], tol: float = 1e-12) -> DirichletCharacter:
    """Validate a value table chi(1..N) and wrap it as a character."""
    if modulus < 1:
        raise InvalidCharacter("modulus must be positive")
    if len(values) != modulus:
        raise InvalidCharacter("table length", f"expected {modulus} values, got {len(values)}")
    vals = tuple(complex(v) for v in values)
    if any(not (cmath.isfinite(v)) for v in vals):
        raise InvalidCharacter("finite values")

    def chi(k: int) -> complex:
        return vals[(k % modulus) - 1]

    for k in range(1, modulus + 1):
        coprime = math.gcd(k, modulus) == 1
        if not coprime and abs(chi(k)) > tol:
            raise InvalidCharacter("chi(k) = 0 when gcd(k, N) > 1", f"chi({k}) = {chi(k)}")
        if coprime and abs(chi(k)) < tol:
            raise InvalidCharacter("chi(k) != 0 when gcd(k, N) = 1", f"chi({k}) = 0")
    if abs(chi(1) - 1) > tol:
        raise InvalidCharacter("chi(1) = 1", f"chi(1) = {chi(1)}")

    units = [k for k in range(1, modulus + 1) if math.gcd(k, modulus) == 1]
    exponent = _group_exponent(modulus)
    for u in units:
        v = chi(u)
        if abs(abs(v) - 1) > tol or abs(v**exponent - 1) > 1e3 * tol:
            raise InvalidCharacter("values are roots of unity", f"chi({u}) = {v}")
    for a in units:
        for b in units:
            if abs(chi(a * b) - chi(a) * chi(b)) > tol:
                raise InvalidCharacter("multiplicativity", f"chi({a}*{b}) != chi({a}) chi({b})")

    principal = all(abs(chi(u) - 1) <= tol for u in units)
    if not principal and abs(sum(vals)) > 1e-10:
        raise InvalidCharacter("orthogonality", f"sum of values = {sum(vals)}")
    # Snap near-integers so tables read from text files compare exactly.
    snapped = tuple(_snap(v) for v in vals)
    return DirichletCharacter(modulus, snapped, principal)


def _snap(v: complex, tol: float = 1e-14) -> complex:
    re = round(v.real) if abs(v.real - round(v.real)) < tol else v.real
    im = round(v.imag) if abs(v.imag - round(v.imag)) < tol else v.imag
    return complex(re, im)


def principal_character(modulus: int) -> DirichletCharacter:
    vals = [1 if math.gcd(k, modulus) == 1 else 0 for k in range(1, modulus + 1)]
    return DirichletCharacter(modulus, tuple(complex(v) for v in vals), True)


def gen_bernoulli(n: int, chi: DirichletCharacter) -> complex:
    """Generalized Bernoulli number B_{n,chi} = N^(n-1) sum_k chi(k) B_n(k/N)."""
    N = chi.modulus
    # Exact rationals for real tables; B_n(k/N) is exact in Fraction arithmetic.
    total_re = Fraction(0)
    total_im = Fraction(0)
    for k in range(1, N + 1):
        c = chi(k)
        if c == 0:
            continue
        x = Fraction(k, N)
        bn = sum(math.comb(n, j) * bernoulli_exact(j) * x ** (n - j) for j in range(n + 1))
        total_re += Fraction(c.real) * bn
        total_im += Fraction(c.imag) * bn
    scale = Fraction(N) ** (n - 1)
    return complex(float(total_re * scale), float(total_im * scale))


def g_chi(chi: DirichletCharacter, z: Number, threshold: float = G_CHI_POLE_THRESHOLD) -> complex:
    """sum_{k=1}^{N} chi(k) z^k / (1 - z^N), the generating series sum_n chi(n) z^n."""
    N = chi.modulus
    z = complex(z)
    denom = 1 - z**N
    if abs(denom) < threshold:
        raise PoleProximity(f"g_chi: |1 - z^{N}| = {abs(denom):.3g} below {threshold:g} at z = {z}")
    num = sum(chi(k) * z**k for k in range(1, N + 1))
    return num / denom
