import math
import random

import mpmath as mp
import pytest

from qzetalab.errors import DomainError, ParamError, PoleAtAlpha, PoleAtBeta, PoleError
from qzetalab.incbeta import (
    closed_form_special,
    complete_beta,
    incomplete_beta,
    lower_alpha_recurrence,
    raise_alpha_recurrence,
)


def oracle(q, a, b):
    """q^a/a 2F1(a, 1-b; a+1; q): the integral for Re a > 0 and its continuation."""
    mp.mp.dps = 30
    a, b = mp.mpc(complex(a).real, complex(a).imag), mp.mpc(complex(b).real, complex(b).imag)
    return complex(mp.power(q, a) / a * mp.hyp2f1(a, 1 - b, a + 1, q))


class TestIncompleteBeta:
    def test_examples(self):
        assert incomplete_beta(0.5, 1, 1) == pytest.approx(0.5, abs=1e-13)
        assert incomplete_beta(0.25, 0.5, 1) == pytest.approx(1.0, abs=1e-12)
        # u^2 (1-u)^-2 / 2 at u = 1/2
        assert incomplete_beta(0.5, 2, -2) == pytest.approx(0.5, abs=1e-12)

    @pytest.mark.parametrize(
        "q,a,b",
        [(0.3, 0.2, 1.5), (0.9, 0.05 + 1j, -2.5 + 0.5j), (0.99, 3 - 2j, 0.7), (0.75, 1.5, -4), (0.6, 0.5j + 0.01, 2)],
    )
    def test_against_hypergeometric(self, q, a, b):
        want = oracle(q, a, b)
        assert abs(incomplete_beta(q, a, b) - want) < 1e-10 * max(1, abs(want))

    def test_requires_positive_alpha(self):
        with pytest.raises(DomainError):
            incomplete_beta(0.5, -0.5, 1)
        with pytest.raises(ParamError):
            incomplete_beta(1.0, 1, 1)

    def test_tends_to_complete_beta(self):
        for a, b in [(1.5, 2.0), (0.7, 0.9), (2 + 1j, 1.5)]:
            full = complete_beta(a, b)
            e99 = abs(incomplete_beta(0.99, a, b) - full)
            e999 = abs(incomplete_beta(0.999, a, b) - full)
            assert e999 < e99

    def test_derivative_in_q(self):
        rng = random.Random(7)
        for _ in range(10):
            q = rng.uniform(0.1, 0.9)
            a = complex(rng.uniform(0.3, 3), rng.uniform(-2, 2))
            b = complex(rng.uniform(-3, 3), rng.uniform(-2, 2))
            h = 1e-5
            fd = (incomplete_beta(q + h, a, b, 1e-14) - incomplete_beta(q - h, a, b, 1e-14)) / (2 * h)
            exact = q ** (a - 1) * (1 - q) ** (b - 1)
            assert abs(fd - exact) < 1e-6 * abs(exact)


class TestRecurrences:
    def test_raise_one_step_consistent(self):
        for q, a, b in [(0.4, 1.2, 0.5), (0.8, 0.6 + 2j, -1.5)]:
            assert abs(raise_alpha_recurrence(q, a, b, 1) - incomplete_beta(q, a, b)) < 1e-11

    def test_raise_continuation(self):
        # (1-u)^1 expands exactly: sum_j C(1,j) (-1)^j q^(a+j)/(a+j)
        q, a = 0.5, -0.5
        want = q**a / a - q ** (a + 1) / (a + 1)
        assert raise_alpha_recurrence(q, a, 2, 2) == pytest.approx(want, abs=1e-12)

    @pytest.mark.parametrize("q,a,b,steps", [(0.5, -1.5 + 0.3j, 0.5, 3), (0.9, -0.2 - 4j, -2 + 1j, 2), (0.2, -3.7, 1.1, 5)])
    def test_raise_against_hypergeometric(self, q, a, b, steps):
        want = oracle(q, a, b)
        assert abs(raise_alpha_recurrence(q, a, b, steps) - want) < 1e-10 * max(1, abs(want))

    def test_raise_pole(self):
        with pytest.raises(PoleAtAlpha):
            raise_alpha_recurrence(0.5, 0, 1, 1)
        with pytest.raises(PoleAtAlpha):
            raise_alpha_recurrence(0.5, -2, 1, 4)

    def test_lower_one_step_consistent(self):
        assert abs(lower_alpha_recurrence(0.5, 3, -1.5, 1) - incomplete_beta(0.5, 3, -1.5)) < 1e-11

    def test_lower_both_routes(self):
        v1 = lower_alpha_recurrence(0.5, 3, -1.5, 2)
        assert abs(v1 - incomplete_beta(0.5, 3, -1.5)) < 1e-10

    def test_round_trip(self):
        q, a, b = 0.6, 3.3 + 0.5j, 0.4
        upper = incomplete_beta(q, a, b)
        lower = incomplete_beta(q, a - 2, b + 2)
        # each side rebuilt from the other
        assert abs(lower_alpha_recurrence(q, a, b, 2) - upper) < 1e-10
        assert abs(raise_alpha_recurrence(q, a - 2, b + 2, 2) - lower) < 1e-10

    def test_lower_pole(self):
        with pytest.raises(PoleAtBeta):
            lower_alpha_recurrence(0.5, 4, -1, 3)

    def test_steps_validation(self):
        with pytest.raises(ParamError):
            raise_alpha_recurrence(0.5, 1, 1, 0)


class TestClosedForm:
    def test_examples(self):
        assert closed_form_special(0.5, 2, 1) == pytest.approx(0.5, abs=1e-14)
        assert closed_form_special(0.3, 1, 1) == pytest.approx(0.3 / 0.7, abs=1e-14)

    def test_nu2_against_recurrence(self):
        q, alpha, nu = 0.5, 3.0, 2
        want = incomplete_beta(q, alpha - nu + 1, -alpha)
        assert abs(closed_form_special(q, alpha, nu) - want) < 1e-10
        assert abs(lower_alpha_recurrence(q, alpha - nu + 1, -alpha, 1) - want) < 1e-10

    @pytest.mark.parametrize("nu", [1, 2, 3, 4])
    def test_against_integral(self, nu):
        for alpha in (nu - 0.5, nu + 0.3 + 2j, nu + 4.1):
            for q in (0.2, 0.7):
                want = incomplete_beta(q, alpha - nu + 1, -alpha)
                assert abs(closed_form_special(q, alpha, nu) - want) < 1e-10 * max(1, abs(want))

    def test_nu1_grid(self):
        for q in (0.1, 0.45, 0.9):
            for alpha in (0.3, 1, 2.5 - 1j, 7):
                want = q**alpha * (1 - q) ** (-alpha) / alpha
                assert abs(closed_form_special(q, alpha, 1) - want) < 1e-12 * max(1, abs(want))

    def test_domain(self):
        with pytest.raises(DomainError):
            closed_form_special(0.5, 0.5, 2)


class TestCompleteBeta:
    def test_examples(self):
        assert complete_beta(1, 1) == pytest.approx(1)
        assert complete_beta(2, 3) == pytest.approx(1 / 12)
        assert complete_beta(0.5, 0.5) == pytest.approx(math.pi)

    def test_against_mpmath(self):
        for a, b in [(3.5 + 2j, 1.25), (-2.5, 4.5 - 1j), (40 + 10j, 30)]:
            want = complex(mp.beta(mp.mpc(a), mp.mpc(b)))
            assert abs(complete_beta(a, b) - want) < 1e-12 * abs(want)

    def test_poles(self):
        with pytest.raises(PoleError):
            complete_beta(0, 1)
        with pytest.raises(PoleError):
            complete_beta(1.5, -2)
