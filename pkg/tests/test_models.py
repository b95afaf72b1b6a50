import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from scalefit.errors import InputError
from scalefit.models import (
    ModelParams,
    amdahl_asymptote,
    eval_capacity,
    superserial_nc,
    superserial_nc_int,
)

SIGMA, GAMMA = 6.85e-3, 3.13e-4


def _brute_argmax(sigma, gamma, n_max):
    best_n, best_c = 1, 0.0
    for n in range(1, n_max + 1):
        c = n / (1 + sigma * ((n - 1) + gamma * n * (n - 1)))
        if c > best_c:
            best_n, best_c = n, c
    return best_n


def test_amdahl_without_serial_fraction_is_linear():
    assert eval_capacity(ModelParams("amdahl", sigma=0.0), 64) == 64


def test_superserial_value_at_512():
    # exact rational evaluation of the formula as an independent oracle
    s, g, n = Fraction(SIGMA), Fraction(GAMMA), 512
    expected = float(n / (1 + s * ((n - 1) + g * n * (n - 1))))
    got = eval_capacity(ModelParams("superserial", sigma=SIGMA, gamma=GAMMA), 512)
    assert got == pytest.approx(expected, rel=1e-14)
    assert got == pytest.approx(101.2, abs=0.1)


def test_powerlaw_at_one_is_b():
    assert eval_capacity(ModelParams("powerlaw", a=0.77, b=1.28), 1) == 1.28


@pytest.mark.parametrize(
    "params",
    [
        ModelParams("linear"),
        ModelParams("amdahl", sigma=0.3),
        ModelParams("gustafson", sigma_prime=0.4),
        ModelParams("superserial", sigma=0.2, gamma=0.1),
    ],
)
def test_table_models_equal_one_at_one(params):
    assert eval_capacity(params, 1) == 1.0


def test_amdahl_asymptote():
    assert amdahl_asymptote(0.01) == 100
    big = eval_capacity(ModelParams("amdahl", sigma=0.01), 10**9)
    assert big == pytest.approx(100, rel=1e-4)
    with pytest.raises(InputError, match="unbounded"):
        amdahl_asymptote(0.0)


def test_nc_real_and_integer():
    assert superserial_nc(SIGMA, GAMMA) == pytest.approx(680.6, abs=0.5)
    assert superserial_nc_int(SIGMA, GAMMA) == _brute_argmax(SIGMA, GAMMA, 5000) == 681


def test_nc_close_to_reported_683():
    assert abs(superserial_nc_int(SIGMA, GAMMA) - 683) <= 3


def test_nc_sigma_equals_gamma():
    s = 0.02
    assert superserial_nc(s, s) == pytest.approx(math.sqrt(1 - s) / s, rel=1e-15)


def test_nc_zero_product():
    with pytest.raises(InputError):
        superserial_nc(0.1, 0.0)


@pytest.mark.parametrize(
    "kwargs, message",
    [
        ({"kind": "amdahl"}, "requires sigma"),
        ({"kind": "superserial", "sigma": 0.1}, "requires gamma"),
        ({"kind": "amdahl", "sigma": 1.5}, "outside"),
        ({"kind": "powerlaw", "a": 0.5, "b": 0.0}, "b must be positive"),
        ({"kind": "cubic"}, "unknown model kind"),
    ],
)
def test_invalid_params(kwargs, message):
    with pytest.raises(InputError, match=message):
        ModelParams(**kwargs)


def test_core_count_below_one():
    with pytest.raises(InputError):
        eval_capacity(ModelParams("linear"), 0)


# -- properties ------------------------------------------------------------

unit = st.floats(1e-6, 1.0)


@given(unit)
def test_superserial_gamma_zero_is_amdahl(sigma):
    n = np.arange(1, 4097)
    cs = eval_capacity(ModelParams("superserial", sigma=sigma, gamma=0.0), n)
    ca = eval_capacity(ModelParams("amdahl", sigma=sigma), n)
    np.testing.assert_allclose(cs, ca, rtol=1e-12, atol=0)


@given(unit)
def test_amdahl_monotone_and_bounded(sigma):
    n = np.unique(np.logspace(0, 7, 300).astype(int))
    c = eval_capacity(ModelParams("amdahl", sigma=sigma), n)
    # nondecreasing up to rounding of the last bit
    assert np.all(np.diff(c) >= -4 * np.finfo(float).eps * c[1:])
    assert np.all(c <= 1 / sigma * (1 + 1e-15))


@given(st.floats(1e-3, 0.2), st.floats(1e-4, 0.2))
def test_superserial_integer_optimum_dominates(sigma, gamma):
    nc = superserial_nc_int(sigma, gamma)
    n = np.arange(1, 10 * nc + 1)
    c = eval_capacity(ModelParams("superserial", sigma=sigma, gamma=gamma), n)
    c_best = eval_capacity(ModelParams("superserial", sigma=sigma, gamma=gamma), nc)
    far = np.abs(n - nc) >= 2
    assert np.all(c[far] < c_best)
    assert c_best == c.max()


def test_gustafson_without_serial_is_linear():
    n = np.arange(1, 2000)
    np.testing.assert_array_equal(eval_capacity(ModelParams("gustafson", sigma_prime=0.0), n), n)


def test_unit_powerlaw_is_linear():
    n = np.arange(1, 5000)
    np.testing.assert_array_equal(
        eval_capacity(ModelParams("powerlaw", a=1.0, b=1.0), n),
        eval_capacity(ModelParams("linear"), n),
    )
