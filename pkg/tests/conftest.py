import random
import sys
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from tdpairs.scalars import QQ, scalar
from tdpairs.tdsystem import QRacahParams
from tdpairs.uqmodule import rl_coefficients

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def S(x):
    return scalar(Fraction(x) if isinstance(x, str) else x)


def running(d, q=2):
    """q=2, a=0, b=1, c=3, a*=0, b*=1, c*=2."""
    return QRacahParams.of(q, 0, 1, 3, 0, 1, 2, d)


def running_coeffs(d=1, u=1, v=1):
    return rl_coefficients(running(d), u, v)


def rand_rational(rng, num=9, den=9, nonzero=True):
    while True:
        x = Fraction(rng.randint(-num, num), rng.randint(1, den))
        if x or not nonzero:
            return S(x)


def rand_alphas(rng, d):
    return [rand_rational(rng) for _ in range(d)]


nonzero_rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12).filter(lambda x: x != 0)
rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@pytest.fixture
def rng():
    return random.Random(20240611)


QS = [Fraction(2), Fraction(3), Fraction(3, 2), Fraction(5, 2), Fraction(4, 3)]


def random_qracah_params(rng, d):
    """Random rational q-Racah parameters with q > 1, redrawn until the eigenvalues are distinct."""
    from tdpairs.tdsystem import DistinctnessError, eigen_sequences

    while True:
        q = S(rng.choice(QS))
        vals = [rand_rational(rng, nonzero=(k % 3 != 0)) for k in range(6)]
        p = QRacahParams(q, *vals, d)
        try:
            eigen_sequences(p)
        except DistinctnessError:
            continue
        return p


def random_parameter_array(rng, d):
    """(pa, params): eigenvalues from random parameters, split sequence from random rational alphas.

    Redraws until condition (ii) holds. For d <= 2 the array carries q; the
    caller passes ``params`` to the construction when d <= 1.
    """
    from tdpairs.drinfeld import split_sequence
    from tdpairs.tdsystem import ParameterArray, condition_ii, eigen_sequences
    from tdpairs.uqmodule import standard_module

    while True:
        p = random_qracah_params(rng, d)
        th, ts = eigen_sequences(p)
        m = standard_module(rand_alphas(rng, d), p.q, rl_coefficients(p))
        pa = ParameterArray(th, ts, split_sequence(m), p.q if d <= 2 else None)
        if condition_ii(pa).holds:
            return pa, p


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
