"""Spectral diagnostics from shift correlations: atoms and Wiener sums.

The correlation array c[0..H_max] of a bounded sequence plays the role of
Fourier coefficients of its spectral distribution.  Atom masses at a unit
frequency lam are Cesaro kernel averages (1/H) sum lam^h c[h]; by design
that evaluation shares its code path with the modulated degree-1 seminorm,
so the two agree bit for bit.  A Wiener average of |c[h]|^2 estimates the
total squared atom mass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._numutil import frac, unit_phase
from .sequences import BoundedSequence
from .seminorms import CESARO, correlations, modulated_average


@dataclass(frozen=True)
class AutocorrEstimate:
    """Correlations c[h], h = 0..H_max, from a length-N prefix average."""

    c: np.ndarray
    N: int

    def __post_init__(self):
        c = np.asarray(self.c, dtype=np.complex128)
        object.__setattr__(self, "c", c)
        if c.ndim != 1 or c.size < 1:
            raise ValueError("need a one-dimensional lag array")
        c0 = c[0]
        if abs(c0.imag) > 1e-9 or not -1e-9 <= c0.real <= 1.0 + 1e-9:
            raise ValueError(f"c[0] must be real in [0, 1], got {c0}")
        if np.max(np.abs(c)) > c0.real + 5e-3:
            raise ValueError("a lag exceeds c[0] beyond the finite-N slack")

    @property
    def H_max(self) -> int:
        return int(self.c.size - 1)


@dataclass(frozen=True)
class Atom:
    """One located atom: position in [0, 1) with lam = e(position)."""

    position: float
    lam: complex
    mass: float


def autocorr(u: BoundedSequence, N: int | None = None,
             H_max: int | None = None, mode: str = CESARO) -> AutocorrEstimate:
    """Correlation array over lags 0..H_max with H_max <= N/4."""
    if N is None:
        N = (4 * u.N) // 5
    N = int(N)
    if H_max is None:
        H_max = N // 4
    H_max = int(H_max)
    if H_max < 1:
        raise ValueError("H_max must be >= 1")
    if H_max > N // 4:
        raise ValueError(f"H_max={H_max} above N/4={N // 4}")
    return AutocorrEstimate(c=correlations(u, N, H_max, mode), N=N)


def atom_mass(est: AutocorrEstimate, lam: complex, H: int | None = None) -> float:
    """Kernel mass estimate Re[(1/H) sum lam^h c[h]] at unit frequency lam.

    Shares modulated_average with the seminorm estimators, so for equal
    (N, H) it reproduces the modulated degree-1 raw value exactly.
    """
    if H is None:
        H = est.H_max
    return modulated_average(est.c, lam, int(H)).real


def wiener_sum(est: AutocorrEstimate, H: int | None = None) -> float:
    """(1/H) sum_{h=1..H} |c[h]|^2: total squared atom mass estimate."""
    if H is None:
        H = est.H_max
    H = int(H)
    if not 1 <= H <= est.H_max:
        raise ValueError(f"need 1 <= H <= {est.H_max}")
    return float(np.sum(np.abs(est.c[1 : H + 1]) ** 2) / H)


def _grid_masses(est: AutocorrEstimate, H: int, grid: int) -> np.ndarray:
    c = est.c
    if grid >= H + 1:
        buf = np.zeros(grid, dtype=np.complex128)
        buf[1 : H + 1] = c[1 : H + 1]
        vals = np.fft.ifft(buf) * grid
        return vals.real / H
    j = np.arange(grid)
    h = np.arange(1, H + 1)
    kernel = np.exp(2j * np.pi * np.outer(j, h) / grid)
    return (kernel @ c[1 : H + 1]).real / H


def atom_scan(est: AutocorrEstimate, H: int | None = None, grid: int = 2048,
              tau: float = 0.05) -> list[Atom]:
    """Locate kernel-mass local maxima above tau on a size-`grid` circle.

    Each maximum is refined by a three-point parabola on the real kernel
    values and re-evaluated exactly at the refined position.  Results come
    back sorted by position.
    """
    if H is None:
        H = est.H_max
    H = int(H)
    if not 1 <= H <= est.H_max:
        raise ValueError(f"need 1 <= H <= {est.H_max}")
    if grid < 8:
        raise ValueError("grid must be >= 8")
    masses = _grid_masses(est, H, grid)
    left = np.roll(masses, 1)
    right = np.roll(masses, -1)
    peaks = np.nonzero((masses > tau) & (masses > left) & (masses >= right))[0]
    atoms = []
    for j in peaks:
        m0, ml, mr = masses[j], left[j], right[j]
        denom = ml - 2.0 * m0 + mr
        delta = 0.5 * (ml - mr) / denom if denom < 0 else 0.0
        if not math.isfinite(delta) or abs(delta) > 0.5:
            delta = 0.0
        pos = float(frac((j + delta) / grid))
        lam = complex(unit_phase(np.float64(pos)))
        refined = modulated_average(est.c, lam, H).real
        if refined < m0:       # keep the grid point if refinement regressed
            pos = float(j) / grid
            lam = complex(unit_phase(np.float64(pos)))
            refined = m0
        atoms.append(Atom(position=pos, lam=lam, mass=float(refined)))
    atoms.sort(key=lambda a: a.position)
    return atoms
