"""Exact mod-1 reduction helpers against Fraction arithmetic oracles."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orthodyn._numutil import (fmt_float, frac, frac_monomial, frac_poly,
                               frac_scale, logsumexp_rows, make_rng,
                               parallel_map, resolve_threads, unit_phase)

finite_floats = st.floats(min_value=-1e6, max_value=1e6,
                          allow_nan=False, allow_infinity=False)


def frac_oracle(c: float, n: int, power: int) -> float:
    """Exact fractional part of c * n**power via rational arithmetic."""
    return float(Fraction(c) * n ** power % 1)


@given(finite_floats, st.integers(min_value=0, max_value=10 ** 8),
       st.integers(min_value=1, max_value=4))
@settings(max_examples=300, deadline=None)
def test_frac_monomial_matches_fraction_oracle(c, n, power):
    got = float(frac_monomial(c, n, power))
    want = frac_oracle(c, n, power)
    delta = min(abs(got - want), 1.0 - abs(got - want))
    assert delta <= 1e-12


@given(st.integers(min_value=-10 ** 6, max_value=10 ** 6),
       st.integers(min_value=1, max_value=10 ** 9))
@settings(max_examples=200, deadline=None)
def test_frac_monomial_negative_multiplier(m, n):
    """Integer multiples of a coefficient with either sign reduce exactly."""
    c = 0.37109375  # dyadic: 95/256
    got = float(frac_monomial(m * c, n, 1))
    want = float(Fraction(95, 256) * m * n % 1)
    delta = min(abs(got - want), 1.0 - abs(got - want))
    assert delta <= 1e-12


@given(st.floats(min_value=0.0, max_value=1.0, exclude_max=True),
       st.integers(min_value=-(1 << 26), max_value=1 << 26))
@settings(max_examples=300, deadline=None)
def test_frac_scale_matches_fraction_oracle(x, q):
    got = float(frac_scale(x, q))
    want = float(Fraction(x) * q % 1)
    delta = min(abs(got - want), 1.0 - abs(got - want))
    assert delta <= 1e-12


def test_frac_scale_vectorized():
    rng = make_rng(11)
    x = rng.random(500)
    q = 12345
    got = frac_scale(x, q)
    want = np.array([float(Fraction(v) * q % 1) for v in x])
    delta = np.minimum(np.abs(got - want), 1.0 - np.abs(got - want))
    assert delta.max() <= 1e-12


def test_frac_scale_rejects_large_multiplier():
    with pytest.raises(ValueError):
        frac_scale(0.5, (1 << 26) + 1)


def test_frac_poly_matches_horner_oracle():
    coeffs = [0.25, 0.1259765625, 0.0029296875]
    ns = np.arange(1, 200)
    got = frac_poly(coeffs, ns)
    want = np.array([
        float(sum(Fraction(c) * int(n) ** j for j, c in enumerate(coeffs)) % 1)
        for n in ns])
    delta = np.minimum(np.abs(got - want), 1.0 - np.abs(got - want))
    assert delta.max() <= 1e-10


def test_frac_basic():
    assert frac(1.25) == 0.25
    assert frac(-0.25) == 0.75
    np.testing.assert_allclose(frac(np.array([2.0, -1.0])), [0.0, 0.0])


def test_unit_phase_is_on_circle():
    x = np.linspace(0, 1, 17, endpoint=False)
    z = unit_phase(x)
    np.testing.assert_allclose(np.abs(z), 1.0, atol=1e-15)
    np.testing.assert_allclose(z[0], 1.0 + 0.0j, atol=1e-15)


def test_logsumexp_rows_against_scipy():
    from scipy.special import logsumexp
    rng = make_rng(3)
    a = rng.normal(size=(8, 40)) * 30
    a[2, :] = -np.inf
    a[3, 5:] = -np.inf
    got = logsumexp_rows(a)
    want = logsumexp(a, axis=1)
    np.testing.assert_allclose(got, want, rtol=1e-13, atol=1e-300)


def test_make_rng_deterministic_and_streamed():
    a = make_rng(5).random(4)
    b = make_rng(5).random(4)
    c = make_rng(5, 1).random(4)
    np.testing.assert_array_equal(a, b)
    assert not np.allclose(a, c)


def test_parallel_map_matches_serial():
    items = list(range(20))
    assert parallel_map(lambda v: v * v, items, threads=4) == \
        [v * v for v in items]
    assert resolve_threads(3) == 3


def test_fmt_float_round_trips():
    vals = [0.1, 1 / 3, math.pi, 1e-300, 123456.789, 0.0]
    for v in vals:
        assert float(fmt_float(v)) == v
