"""Orbit maps: inverses, closed forms, and observable plumbing."""

import numpy as np
import pytest

from orthodyn._numutil import make_rng
from orthodyn.sequences import phase_sequence
from orthodyn.systems import (Character, ConstantObservable, ProductSystem,
                              Rotation, Shear, SkewShift, WedgeObservable,
                              WedgePoint, WedgeSystem, inverse_step,
                              iterate_n, orbit_observable, orbit_values,
                              parse_system, step, system_to_string)

ALPHA = 0.41421356237309515


def test_step_then_inverse_returns_point():
    rng = make_rng(1)
    systems = [Rotation((0.3, 0.7)), Shear(), SkewShift(0.3),
               ProductSystem((Rotation((0.2,)), Shear()))]
    for system in systems:
        x = rng.random(system.dim)
        y = inverse_step(system, step(system, x))
        np.testing.assert_allclose(np.minimum(np.abs(y - x),
                                              1.0 - np.abs(y - x)),
                                   0.0, atol=1e-12)


def test_shear_fixes_first_coordinate():
    x = np.array([0.25, 0.1])
    y = step(Shear(), x)
    np.testing.assert_allclose(y, [0.25, 0.35], atol=1e-15)
    z = iterate_n(Shear(), x, 1000)
    assert z[0] == 0.25


def test_skew_shift_example():
    y = step(SkewShift(0.3), np.array([0.9, 0.5]))
    np.testing.assert_allclose(y, [0.2, 0.4], atol=1e-12)


def test_shear_closed_form_matches_stepping():
    system = Shear()
    x = np.array([0.37109375, 0.1259765625])
    pt = x.copy()
    for n in range(1, 21):
        pt = step(system, pt)
        closed = iterate_n(system, x, n)
        np.testing.assert_allclose(
            np.minimum(np.abs(closed - pt), 1.0 - np.abs(closed - pt)),
            0.0, atol=1e-12)


def test_skew_closed_form_matches_stepping():
    system = SkewShift(ALPHA)
    x = np.array([0.0, 0.0])
    pt = x.copy()
    for n in range(1, 101):
        pt = step(system, pt)
        closed = iterate_n(system, x, n)
        np.testing.assert_allclose(
            np.minimum(np.abs(closed - pt), 1.0 - np.abs(closed - pt)),
            0.0, atol=1e-10)


def test_rotation_orbit_is_phase_sequence():
    system = Rotation((ALPHA,))
    u = orbit_observable(system, np.array([0.0]), Character((1,)), 300)
    v = phase_sequence([0.0, ALPHA], 300)
    np.testing.assert_allclose(u.complex_values(), v.complex_values(),
                               atol=1e-10)


def test_shear_orbit_linear_phase():
    """On the first-coordinate-fixed shear, e(y) along the orbit of (x, 0)
    is the linear phase e(nx)."""
    system = Shear()
    x0 = 0.29631
    u = orbit_observable(system, np.array([x0, 0.0]), Character((0, 1)), 200)
    v = phase_sequence([0.0, x0], 200)
    np.testing.assert_allclose(u.complex_values(), v.complex_values(),
                               atol=1e-10)


def test_skew_orbit_quadratic_phase():
    """On the skew shift from the origin, e(y) gives e(n(n-1)/2 * a)."""
    system = SkewShift(ALPHA)
    u = orbit_observable(system, np.array([0.0, 0.0]), Character((0, 1)), 150)
    ns = np.arange(1, 151, dtype=object)
    from fractions import Fraction
    want = np.array([
        np.exp(2j * np.pi * float(Fraction(ALPHA) * n * (n - 1) / 2 % 1))
        for n in ns])
    np.testing.assert_allclose(u.complex_values(), want, atol=1e-9)


def test_orbit_values_nonnegative_exponents_only():
    system = Rotation((0.3,))
    with pytest.raises(ValueError):
        orbit_values(system, np.array([0.0]), Character((1,)),
                     np.array([-1, 0, 1]))


def test_wedge_orbit_frozen_components():
    inner = (Rotation((0.3,)), Rotation((0.7,)))
    system = WedgeSystem(inner, (0.5, 0.25))
    f = WedgeObservable(1.0, (Character((1,)),))
    base_orbit = orbit_values(system, WedgePoint(0), f, np.arange(10))
    np.testing.assert_allclose(base_orbit, 1.0, atol=1e-15)
    deep = orbit_values(system, WedgePoint(2, (0.1,)), f, np.arange(10))
    np.testing.assert_allclose(deep, 1.0, atol=1e-15)
    live = orbit_values(system, WedgePoint(1, (0.0,)), f, np.arange(5))
    want = np.exp(2j * np.pi * (0.3 * np.arange(5) % 1.0))
    np.testing.assert_allclose(live, want, atol=1e-12)


def test_wedge_validation():
    with pytest.raises(ValueError):
        WedgeSystem((Rotation((0.3,)),), (0.5, 0.25))  # scale count
    with pytest.raises(ValueError):
        WedgeSystem((Rotation((0.3,)), Shear()), (0.25, 0.5))  # not shrinking


def test_constant_observable_and_unit_bound():
    c = ConstantObservable(0.5 + 0.5j)
    assert c.c == 0.5 + 0.5j
    with pytest.raises(ValueError):
        ConstantObservable(2.0)
    with pytest.raises(ValueError):
        WedgeObservable(1.5)


def test_system_string_round_trip():
    systems = [Rotation((0.3, 0.7)), Shear(), SkewShift(ALPHA),
               ProductSystem((Rotation((0.2,)), Shear())),
               WedgeSystem((Rotation((0.3,)), Shear()), (0.5, 0.25))]
    for system in systems:
        text = system_to_string(system)
        again = parse_system(text)
        assert system_to_string(again) == text


def test_parse_system_errors():
    with pytest.raises(ValueError):
        parse_system("banana")
    with pytest.raises(ValueError):
        parse_system("wedge(rotation:0.1)")
