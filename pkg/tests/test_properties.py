import math

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from qzetalab.qcore import bernoulli_poly, make_character, pochhammer, principal_character, qint
from qzetalab.qzeta import SeriesSpec, f_direct, zeta_expansion

CHARACTERS = [
    make_character(4, (1, 0, -1, 0)),
    make_character(5, (1, -1, -1, 1, 0)),
    make_character(3, (1, -1, 0)),
    principal_character(6),
]

reals = st.floats(min_value=-6, max_value=6, allow_nan=False)
qs = st.floats(min_value=0.05, max_value=0.95)
nus = st.integers(min_value=1, max_value=3)
fast = settings(max_examples=40, deadline=None)


@given(st.sampled_from(CHARACTERS), st.integers(1, 200), st.integers(1, 200))
def test_character_multiplicative_and_periodic(chi, m, n):
    assert abs(chi(m * n) - chi(m) * chi(n)) < 1e-12
    assert chi(n + chi.modulus) == chi(n)


@given(st.sampled_from(CHARACTERS))
def test_character_sum(chi):
    total = sum(chi(k) for k in range(1, chi.modulus + 1))
    want = sum(1 for k in range(1, chi.modulus + 1) if math.gcd(k, chi.modulus) == 1) if chi.is_principal else 0
    assert abs(total - want) < 1e-12


@given(st.integers(1, 12), st.floats(min_value=-2, max_value=2))
def test_bernoulli_difference(n, x):
    lhs = bernoulli_poly(n, x + 1) - bernoulli_poly(n, x)
    assert lhs == pytest.approx(n * x ** (n - 1), rel=1e-9, abs=1e-9)


@given(st.integers(1, 60), qs)
def test_qint_geometric_sum(n, q):
    assert qint(n, q) == pytest.approx(math.fsum(q**k for k in range(n)), rel=1e-13, abs=1e-15)


@given(reals, reals, st.integers(0, 15))
def test_pochhammer_step(a, b, k):
    s = complex(a, b)
    lhs = pochhammer(s, k + 1)
    assert abs(lhs - pochhammer(s, k) * (s + k)) <= 1e-12 * max(1, abs(lhs))


def _away_from_poles(s, nu):
    return all(abs(s - k) > 1e-3 for k in range(1, nu + 1))


@fast
@given(reals, st.floats(min_value=-30, max_value=30), nus, qs)
def test_conjugate_reflection(a, b, nu, q):
    s = complex(a, b)
    assume(_away_from_poles(s, nu))
    v = zeta_expansion(SeriesSpec.zeta(s, nu), q).value
    w = zeta_expansion(SeriesSpec.zeta(s.conjugate(), nu), q).value
    assert abs(v.conjugate() - w) <= 1e-12 * max(1, abs(v))


@fast
@given(reals, nus, qs)
def test_real_on_real_axis(a, nu, q):
    assume(_away_from_poles(complex(a), nu))
    assert zeta_expansion(SeriesSpec.zeta(a, nu), q).value.imag == 0


@fast
@given(st.floats(min_value=0, max_value=6), st.floats(min_value=-20, max_value=20), nus, qs)
def test_no_zeros_right_of_wall(x, y, nu, q):
    s = complex(2 * nu + x, y)
    assume(_away_from_poles(s, nu))
    assert abs(zeta_expansion(SeriesSpec.zeta(s, nu), q).value) > 1e-12


@fast
@given(st.floats(min_value=0.2, max_value=3), st.floats(min_value=-5, max_value=5), reals, st.floats(min_value=0.2, max_value=0.9))
def test_expansion_matches_direct(tr, ti, sr, q):
    # wherever the defining series converges the two routes agree
    s, t = complex(sr, ti), complex(tr, ti)
    spec = SeriesSpec.f(s, t)
    a = f_direct(spec, q).value
    b = zeta_expansion(spec, q).value
    assert abs(a - b) <= 1e-9 * max(1, abs(a))
