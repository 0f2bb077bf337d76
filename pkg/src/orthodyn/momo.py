"""Block orthogonality functionals along increasing block structures.

Given blocks b_1 < b_2 < ... < b_K, a system T, an observable f, and one
point per block, the block functional averages |sum over the k-th block of
u(n) f(T^(n - b_k) x_k)|, normalized by b_K: the orbit restarts at every
block.  The logarithmic variant weights u(n) by 1/n, normalizes by
log b_K, and does not restart: it evaluates f along T^n from the block's
point.  A wedge variant splits the total into core blocks (points in
components where the observable varies) and tail blocks (where it is
frozen at the base value).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._numutil import make_rng
from .sequences import BoundedSequence
from .systems import (ConstantObservable, System, WedgeObservable, WedgePoint,
                      WedgeSystem, orbit_values)


@dataclass(frozen=True)
class BlockStructure:
    """Strictly increasing positive block boundaries b_1 < ... < b_K."""

    b: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.b, dtype=np.int64)
        object.__setattr__(self, "b", b)
        if b.ndim != 1 or b.size < 2:
            raise ValueError("need at least two block boundaries")
        if b[0] < 1 or np.any(np.diff(b) <= 0):
            raise ValueError("boundaries must be strictly increasing and >= 1")

    @property
    def K(self) -> int:
        return int(self.b.size)

    @property
    def b_K(self) -> int:
        return int(self.b[-1])

    @property
    def gaps(self) -> np.ndarray:
        return np.diff(self.b)

    @property
    def growth_ok(self) -> bool:
        """Growth proxy: the last quarter's smallest gap beats the first's."""
        q = self.K // 4
        if q < 1:
            return True
        g = self.gaps
        return float(np.min(g[-q:])) > float(np.min(g[:q]))

    @property
    def density(self) -> float:
        return self.K / self.b_K

    @property
    def zero_density_ok(self) -> bool:
        return self.density <= 0.01


def make_blocks(kind: str, K: int, degree: int = 2, ratio: int = 2,
                values=None) -> BlockStructure:
    """poly: b_k = k**degree; geometric: b_k = ratio**(k-1); explicit list."""
    if kind == "poly":
        if degree < 1:
            raise ValueError("degree must be >= 1")
        return BlockStructure(np.arange(1, K + 1, dtype=np.int64) ** degree)
    if kind == "geometric":
        if ratio < 2:
            raise ValueError("ratio must be >= 2")
        return BlockStructure(np.int64(ratio) ** np.arange(K, dtype=np.int64))
    if kind == "explicit":
        if values is None:
            raise ValueError("explicit blocks need values")
        return BlockStructure(np.asarray(list(values), dtype=np.int64))
    raise ValueError(f"unknown block kind {kind!r}")


@dataclass(frozen=True)
class MomoResult:
    value: float
    block_values: np.ndarray
    mode: str


@dataclass(frozen=True)
class WedgeMomoResult:
    value: float
    core: float
    tail: float
    block_values: np.ndarray
    tail_mask: np.ndarray


def _check_points(blocks: BlockStructure, points) -> list:
    pts = list(points)
    if len(pts) != blocks.K - 1:
        raise ValueError(f"need K-1 = {blocks.K - 1} points, got {len(pts)}")
    return pts


def _block_sums(u: BoundedSequence, system: System, f, blocks: BlockStructure,
                points, restart: bool, log_weight: bool) -> np.ndarray:
    if blocks.b_K > u.N:
        raise ValueError(f"blocks end at {blocks.b_K} beyond prefix {u.N}")
    pts = _check_points(blocks, points)
    vals = u.complex_values()
    sums = np.empty(blocks.K - 1, dtype=np.complex128)
    for k in range(blocks.K - 1):
        lo, hi = int(blocks.b[k]), int(blocks.b[k + 1])
        ns = np.arange(lo, hi, dtype=np.int64)
        exps = ns - lo if restart else ns
        obs = orbit_values(system, pts[k], f, exps)
        useg = vals[lo - 1 : hi - 1]
        if log_weight:
            useg = useg / ns
        sums[k] = np.dot(useg, obs)
    return sums


def momo_value(u: BoundedSequence, system: System, f, blocks: BlockStructure,
               points) -> MomoResult:
    """(1/b_K) sum over k < K of |block sum with orbit restarted per block|."""
    sums = _block_sums(u, system, f, blocks, points, restart=True, log_weight=False)
    mags = np.abs(sums)
    return MomoResult(value=float(np.sum(mags) / blocks.b_K),
                      block_values=mags, mode="cesaro")


def momo_log_value(u: BoundedSequence, system: System, f, blocks: BlockStructure,
                   points) -> MomoResult:
    """(1/log b_K) sum over k < K of |sum of (u(n)/n) f(T^n x_k)|, no restart."""
    sums = _block_sums(u, system, f, blocks, points, restart=False, log_weight=True)
    mags = np.abs(sums)
    return MomoResult(value=float(np.sum(mags) / math.log(blocks.b_K)),
                      block_values=mags, mode="logarithmic")


def clt_envelope(blocks: BlockStructure) -> float:
    """Null scale of the block functional: (1/b_K) sum of sqrt(gap).

    For independent centered unit-variance symbols each |block sum| has
    root-mean-square sqrt(gap), so this is the expected order of the
    functional under the noise null.
    """
    return float(np.sum(np.sqrt(blocks.gaps)) / blocks.b_K)


def sample_point(system: System, rng: np.random.Generator):
    """One uniform-ish point of the system's phase space."""
    if isinstance(system, WedgeSystem):
        comp = int(rng.integers(0, len(system.parts) + 1))
        if comp == 0:
            return WedgePoint(0)
        part = system.parts[comp - 1]
        return WedgePoint(comp, tuple(rng.random(part.dim)))
    return rng.random(system.dim)


def adversarial_points(u: BoundedSequence, system: System, f,
                       blocks: BlockStructure, trials: int = 32,
                       seed: int = 0) -> tuple[list, MomoResult]:
    """Greedy per-block point choice maximizing each |block sum|.

    Candidates are drawn from a counter-based generator keyed by the seed,
    so the selection is reproducible; ties keep the earliest candidate.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = make_rng(seed)
    vals = u.complex_values()
    chosen = []
    for k in range(blocks.K - 1):
        lo, hi = int(blocks.b[k]), int(blocks.b[k + 1])
        exps = np.arange(hi - lo, dtype=np.int64)
        useg = vals[lo - 1 : hi - 1]
        best, best_mag = None, -1.0
        for _ in range(trials):
            cand = sample_point(system, rng)
            mag = abs(np.dot(useg, orbit_values(system, cand, f, exps)))
            if mag > best_mag + 1e-15:
                best, best_mag = cand, mag
        chosen.append(best)
    return chosen, momo_value(u, system, f, blocks, chosen)


def wedge_momo(u: BoundedSequence, system: WedgeSystem, f: WedgeObservable,
               blocks: BlockStructure, points) -> WedgeMomoResult:
    """Block functional on a wedge with its exact core/tail decomposition.

    A block is tail when its point sits at the base or in a component on
    which f is frozen; there the restarted orbit never leaves the point, so
    the block sum is f(base) times the plain block sum of u.  The reported
    value is core + tail by construction.
    """
    if not isinstance(system, WedgeSystem):
        raise TypeError("wedge_momo needs a wedge system")
    if not isinstance(f, (WedgeObservable, ConstantObservable)):
        raise TypeError("wedge_momo needs a wedge observable")
    if isinstance(f, ConstantObservable):
        f = WedgeObservable(f.c, ())
    pts = _check_points(blocks, points)
    sums = _block_sums(u, system, f, blocks, pts, restart=True, log_weight=False)
    mags = np.abs(sums)
    tail_mask = np.array([p.component == 0 or p.component >= f.cutoff for p in pts])
    core = float(np.sum(mags[~tail_mask]) / blocks.b_K)
    tail = float(np.sum(mags[tail_mask]) / blocks.b_K)
    return WedgeMomoResult(value=core + tail, core=core, tail=tail,
                           block_values=mags, tail_mask=tail_mask)
