"""Coordinate-adding torus automorphism and its spectral pushforward check.

The map A(y, v, z) = (y, v, y + z) acts on a triple of d-dimensional torus
points, adding the frozen first block into the third.  For a character
F(w) = e(2 pi i (m1.y + m2.v + m3.z)) the composition satisfies
F(A w) = chi3(y) F(w) with chi3(y) = e(2 pi i m3.y), so the spectral
correlation (1/M) sum_w F(A^n w) conj(F(w)) against a lifted measure
equals the n-th moment of chi3 under the (y, v)-marginal.  This module
samples the lift, evaluates both sides with exact mod-1 phase reduction,
and checks the block-sum reduction of characters of the product shear.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._numutil import frac, frac_monomial, frac_scale, make_rng, unit_phase
from .momo import BlockStructure
from .sequences import BoundedSequence

MAX_DIM = 64
MAX_FREQ = 1000
DEFAULT_S = 10 ** 6


def _torus_coords(x, d: int | None = None) -> np.ndarray:
    arr = frac(np.asarray(x, dtype=np.float64).reshape(-1))
    if d is not None and arr.size != d:
        raise ValueError(f"expected {d} coordinates, got {arr.size}")
    if arr.size > MAX_DIM:
        raise ValueError(f"dimension exceeds {MAX_DIM}")
    return arr


@dataclass(frozen=True)
class UniversalState:
    """Point (y, v, z) of the triple torus, all blocks of equal dimension."""

    y: np.ndarray
    v: np.ndarray
    z: np.ndarray

    def __post_init__(self):
        y = _torus_coords(self.y)
        v = _torus_coords(self.v, y.size)
        z = _torus_coords(self.z, y.size)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "z", z)

    @property
    def d(self) -> int:
        return self.y.size


def apply_A(state: UniversalState) -> UniversalState:
    """One step: (y, v, z) -> (y, v, z + y) mod 1."""
    return UniversalState(state.y, state.v, frac(state.z + state.y))


def apply_A_n(state: UniversalState, n: int) -> UniversalState:
    """Closed form A^n: z picks up n*y, reduced mod 1 without drift."""
    if n < 0:
        raise ValueError("n must be >= 0")
    shift = np.array([float(frac_monomial(float(c), n, 1)) for c in state.y])
    return UniversalState(state.y, state.v, frac(state.z + shift))


def _check_freqs(m, d: int | None) -> tuple:
    t = tuple(int(a) for a in m)
    if d is not None and len(t) != d:
        raise ValueError("frequency vectors must share one length")
    if any(abs(a) > MAX_FREQ for a in t):
        raise ValueError(f"frequency entries must satisfy |m| <= {MAX_FREQ}")
    return t


@dataclass(frozen=True)
class CharacterTriple:
    """F(y, v, z) = e(2 pi i (m1.y + m2.v + m3.z)) with integer frequencies."""

    m1: tuple
    m2: tuple
    m3: tuple

    def __post_init__(self):
        m1 = _check_freqs(self.m1, None)
        object.__setattr__(self, "m1", m1)
        object.__setattr__(self, "m2", _check_freqs(self.m2, len(m1)))
        object.__setattr__(self, "m3", _check_freqs(self.m3, len(m1)))

    @property
    def d(self) -> int:
        return len(self.m1)

    def value(self, state: UniversalState) -> complex:
        total = 0.0
        for coords, freqs in ((state.y, self.m1), (state.v, self.m2),
                              (state.z, self.m3)):
            for c, m in zip(coords, freqs):
                if m:
                    total += float(frac_monomial(float(c), m, 1))
        return complex(unit_phase(frac(np.float64(total))))

    def chi3(self, y: np.ndarray, n: int = 1) -> complex:
        """chi3(y)**n = e(2 pi i n m3.y), reduced exactly per coordinate."""
        total = 0.0
        for c, m in zip(y, self.m3):
            if m * n:
                total += float(frac_monomial(float(c), m * n, 1))
        return complex(unit_phase(frac(np.float64(total))))


def _batch_phase(coords: np.ndarray, freqs: tuple, out: np.ndarray) -> None:
    for j, m in enumerate(freqs):
        if m:
            out += frac_scale(coords[:, j], m)


def triple_phase(chi: CharacterTriple, Y: np.ndarray, V: np.ndarray,
                 Z: np.ndarray) -> np.ndarray:
    """Phase of F at each sample row, reduced mod 1."""
    total = np.zeros(Y.shape[0])
    _batch_phase(Y, chi.m1, total)
    _batch_phase(V, chi.m2, total)
    _batch_phase(Z, chi.m3, total)
    return frac(total)


@dataclass(frozen=True)
class EtaSampler:
    """Distribution of the (y, v) pair feeding the lifted measure.

    kind 'point_mass' holds fixed (y0, v0); 'product' draws coordinates
    independently, each either ('point', value) or ('uniform',); kind
    'empirical' resamples rows of a stored list of (y, v) pairs.
    """

    kind: str
    d: int
    y0: np.ndarray = None
    v0: np.ndarray = None
    y_spec: tuple = ()
    v_spec: tuple = ()
    samples: tuple = ()

    def __post_init__(self):
        if self.kind not in ("point_mass", "product", "empirical"):
            raise ValueError(f"unknown sampler kind {self.kind!r}")
        if not 1 <= self.d <= MAX_DIM:
            raise ValueError(f"dimension must lie in 1..{MAX_DIM}")

    def draw_batch(self, M: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
        """M rows of (y, v), consuming the generator coordinate-major."""
        if self.kind == "point_mass":
            return (np.tile(self.y0, (M, 1)), np.tile(self.v0, (M, 1)))
        if self.kind == "product":
            Y = np.empty((M, self.d))
            V = np.empty((M, self.d))
            for out, spec in ((Y, self.y_spec), (V, self.v_spec)):
                for j, entry in enumerate(spec):
                    if entry[0] == "uniform":
                        out[:, j] = rng.random(M)
                    else:
                        out[:, j] = float(entry[1]) % 1.0
            return Y, V
        idx = rng.integers(0, len(self.samples), size=M)
        Y = np.stack([self.samples[i][0] for i in idx])
        V = np.stack([self.samples[i][1] for i in idx])
        return Y, V


def point_mass_eta(y0, v0) -> EtaSampler:
    y = _torus_coords(y0)
    return EtaSampler(kind="point_mass", d=y.size, y0=y, v0=_torus_coords(v0, y.size))


def product_eta(y_spec, v_spec) -> EtaSampler:
    yt, vt = tuple(y_spec), tuple(v_spec)
    for spec in (yt, vt):
        for entry in spec:
            if entry[0] not in ("uniform", "point"):
                raise ValueError(f"unknown coordinate law {entry[0]!r}")
    if len(yt) != len(vt):
        raise ValueError("y and v need one law per coordinate each")
    return EtaSampler(kind="product", d=len(yt), y_spec=yt, v_spec=vt)


def empirical_eta(pairs) -> EtaSampler:
    rows = tuple((_torus_coords(y), _torus_coords(v)) for y, v in pairs)
    if not rows:
        raise ValueError("need at least one sample")
    d = rows[0][0].size
    for y, v in rows:
        if y.size != d or v.size != d:
            raise ValueError("inconsistent sample dimensions")
    return EtaSampler(kind="empirical", d=d, samples=rows)


def eta_tilde_sample(eta: EtaSampler, rng: np.random.Generator,
                     S: int = DEFAULT_S) -> UniversalState:
    """One draw of the lift: (y, v) from eta, then z = s*y with s < S."""
    Y, V = eta.draw_batch(1, rng)
    s = int(rng.integers(0, S))
    z = np.array([float(frac_monomial(float(c), s, 1)) for c in Y[0]])
    return UniversalState(Y[0], V[0], z)


@dataclass(frozen=True)
class SpectralReport:
    rows: tuple
    max_discrepancy: float
    M: int
    S: int
    kind: str


def _analytic_moment(chi: CharacterTriple, eta: EtaSampler, n: int,
                     Y: np.ndarray) -> complex:
    if eta.kind == "point_mass":
        return chi.chi3(eta.y0, n)
    if eta.kind == "product":
        val = 1.0 + 0.0j
        for j, entry in enumerate(eta.y_spec):
            m = chi.m3[j] * n
            if m == 0:
                continue
            if entry[0] == "uniform":
                return 0.0 + 0.0j
            val *= complex(unit_phase(frac_monomial(float(entry[1]), m, 1)))
        return val
    total = np.zeros(Y.shape[0])
    for j, m in enumerate(chi.m3):
        if m * n:
            total += frac_scale(Y[:, j], m * n)
    return complex(np.mean(unit_phase(frac(total))))


def spectral_wzors_check(chi: CharacterTriple, eta: EtaSampler, n_max: int,
                         M: int, S: int = DEFAULT_S,
                         seed: int = 0) -> SpectralReport:
    """Empirical F-correlation along A^n versus the chi3 moment of eta.

    Left side: (1/M) sum over lifted samples w of F(A^n w) conj(F(w)).
    Right side: the exact chi3(y)^n moment for point_mass and product
    samplers, or the mean of chi3(y)^n over the same samples otherwise.
    """
    if M < 1:
        raise ValueError("need at least one sample")
    if chi.d != eta.d:
        raise ValueError("character and sampler dimensions differ")
    rng = make_rng(seed)
    Y, V = eta.draw_batch(M, rng)
    s = rng.integers(0, S, size=M)
    Z = np.stack([frac_scale(Y[:, j], s) for j in range(eta.d)], axis=1)
    base_phase = triple_phase(chi, Y, V, Z)
    rows = []
    worst = 0.0
    for n in range(n_max + 1):
        shift = np.stack([frac_scale(Y[:, j], n) for j in range(eta.d)], axis=1)
        Zn = frac(Z + shift)
        phase_n = triple_phase(chi, Y, V, Zn)
        emp = complex(np.mean(unit_phase(frac(phase_n - base_phase))))
        ana = _analytic_moment(chi, eta, n, Y)
        disc = abs(emp - ana)
        worst = max(worst, disc)
        rows.append({"n": n, "empirical_re": emp.real, "empirical_im": emp.imag,
                     "analytic_re": ana.real, "analytic_im": ana.imag,
                     "discrepancy": disc})
    return SpectralReport(rows=tuple(rows), max_discrepancy=worst, M=M, S=S,
                          kind=eta.kind)


def a2_reduction_identity(beta, x_blocks, y_blocks, u: BoundedSequence,
                          blocks: BlockStructure, alphas=None) -> float:
    """Max gap between the orbit block sum and its one-frequency reduction.

    Left side per block: |sum over the block of e(2 pi i (sum_j alpha_j x_j
    + sum_j beta_j (n x_j + y_j))) u(n)| with each n x_j reduced mod 1
    separately, the way an orbit of the product shear evaluates the
    character.  Right side: |sum of e(2 pi i n sum_j beta_j x_j) u(n)|.
    Both sides are computed in exact rational arithmetic before the final
    complex exponential, so the gap isolates the algebraic identity.
    """
    beta = [int(b) for b in beta]
    t = len(beta)
    alphas = [0] * t if alphas is None else [int(a) for a in alphas]
    if len(alphas) != t:
        raise ValueError("alphas must match beta in length")
    if blocks.b_K > u.N:
        raise ValueError("blocks extend beyond the sequence prefix")
    if len(x_blocks) != blocks.K - 1 or len(y_blocks) != blocks.K - 1:
        raise ValueError(f"need {blocks.K - 1} coordinate vectors per side")
    vals = u.complex_values()
    worst = 0.0
    for k in range(blocks.K - 1):
        xs = [Fraction(float(c)) % 1 for c in x_blocks[k]]
        ys = [Fraction(float(c)) % 1 for c in y_blocks[k]]
        if len(xs) != t or len(ys) != t:
            raise ValueError("coordinate vectors must match beta in length")
        s_red = sum((b * x for b, x in zip(beta, xs)), Fraction(0))
        const = sum((a * x + b * y for a, x, b, y in zip(alphas, xs, beta, ys)),
                    Fraction(0))
        lo, hi = int(blocks.b[k]), int(blocks.b[k + 1])
        lhs = 0.0 + 0.0j
        rhs = 0.0 + 0.0j
        for n in range(lo, hi):
            orbit = const
            for b, x in zip(beta, xs):
                if b:
                    orbit += b * ((n * x) % 1)
            lhs += complex(unit_phase(float(orbit % 1))) * vals[n - 1]
            rhs += complex(unit_phase(float((n * s_red) % 1))) * vals[n - 1]
        worst = max(worst, abs(abs(lhs) - abs(rhs)))
    return worst
