"""Window sup scans against dense frequency grids and closed forms."""

import math

import numpy as np
import pytest

from orthodyn._numutil import make_rng, unit_phase
from orthodyn.fourier import f1, f1_log, window_sup
from orthodyn.sequences import (BoundedSequence, InsufficientDataError,
                                phase_sequence, random_signs)

ALPHA = 0.41421356237309515


def dense_sup(vals: np.ndarray, m: int, H: int, grid: int = 1 << 16) -> float:
    """Reference sup over a very fine frequency grid, no refinement."""
    window = vals[m : m + H]
    alphas = np.arange(grid) / grid
    h = np.arange(H)
    phases = np.exp(2j * np.pi * np.outer(alphas, h))
    return float(np.max(np.abs(phases @ window)) / H)


def test_window_sup_matches_dense_scan_random():
    """The scan lands within its own grid-gap bound of a fine reference."""
    u = random_signs(400, seed=2)
    vals = u.complex_values()
    for m in (0, 13, 200):
        r = window_sup(u, m, 64, grid_factor=8)
        want = dense_sup(vals, m, 64)
        assert r.sup_value <= want * (1.0 + 1e-5)
        assert r.sup_value >= want * (1.0 - r.grid_gap_bound)


def test_window_sup_exact_on_pure_phase():
    """A pure phase window has sup 1 at the conjugate frequency."""
    u = phase_sequence([0.0, ALPHA], 600)
    r = window_sup(u, 0, 128, grid_factor=8)
    assert r.sup_value >= 0.999999
    gap = abs(r.argmax_alpha - (1.0 - ALPHA)) % 1.0
    assert min(gap, 1.0 - gap) <= 1.0 / 128


def test_window_sup_refinement_beats_grid():
    """Refined sup must never fall below the best raw grid value."""
    u = random_signs(300, seed=5)
    vals = u.complex_values()
    r = window_sup(u, 7, 50, grid_factor=4)
    L = 4 * 50
    grid_vals = np.abs(np.fft.ifft(vals[7:57], n=L) * L) / 50
    assert r.sup_value >= np.max(grid_vals) - 1e-12


def test_f1_is_mean_of_window_sups():
    u = random_signs(2000, seed=3)
    r = f1(u, 100, M=10, stride=50)
    sups = [window_sup(u, 50 * i, 100).sup_value for i in range(10)]
    assert abs(r.value - np.mean(sups)) <= 1e-12
    np.testing.assert_allclose(r.sup_values, sups, atol=1e-12)


def test_f1_full_mass_on_pure_phase():
    u = phase_sequence([0.0, ALPHA], 3000)
    r = f1(u, 256, M=8)
    assert r.value >= 0.999


def test_f1_log_matches_weighted_sum():
    u = random_signs(500, seed=4)
    r = f1_log(u, 50, M=20)
    total = sum(window_sup(u, m, 50).sup_value / m for m in range(1, 21))
    assert abs(r.value - total / math.log(20)) <= 1e-12


def test_f1_decreases_for_noise_windows():
    """Longer windows dilute a random sequence's exponential sums."""
    u = random_signs(60_000, seed=7)
    values = [f1(u, H, M=64).value for H in (256, 512, 1024)]
    assert values[0] > values[1] > values[2]


def test_threads_do_not_change_values():
    u = random_signs(8000, seed=6)
    a = f1(u, 128, M=40, threads=1)
    b = f1(u, 128, M=40, threads=4)
    np.testing.assert_array_equal(a.sup_values, b.sup_values)
    assert a.value == b.value


def test_window_guards():
    u = random_signs(100, seed=0)
    with pytest.raises(InsufficientDataError):
        window_sup(u, 80, 50)
    with pytest.raises(ValueError):
        window_sup(u, 0, 10, grid_factor=1)
    with pytest.raises(InsufficientDataError):
        f1(u, 50, M=3, stride=30)
    with pytest.raises(InsufficientDataError):
        f1_log(u, 90, M=20)


def test_scan_handles_zero_window():
    u = BoundedSequence(np.zeros(64, dtype=np.complex128))
    r = window_sup(u, 0, 32)
    assert r.sup_value == 0.0
