"""Windowed exponential-sum sup scans and their strided averages.

For a length-H window starting at offset m, the scan estimates
sup over alpha of |(1/H) sum_{h<H} u(m+h) e(2 pi i h alpha)| by a
zero-padded DFT on grid_factor * H points, followed by a three-point
parabolic refinement on the log-magnitude and one exact re-evaluation at
the refined frequency.  The grid-only relative error is at most
(pi^2 / 2) / grid_factor^2, recorded on every result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._numutil import frac, parallel_map, unit_phase
from .sequences import BoundedSequence, InsufficientDataError


@dataclass(frozen=True)
class WindowSupResult:
    m: int
    H: int
    sup_value: float
    argmax_alpha: float
    grid_factor: int
    grid_gap_bound: float


@dataclass(frozen=True)
class F1Result:
    """Strided average of window sups; value = mean over the M windows."""

    value: float
    H: int
    M: int
    stride: int
    grid_factor: int
    sup_values: np.ndarray
    argmax_alphas: np.ndarray


def _scan_rows(rows: np.ndarray, grid_factor: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-row sup scan: returns (sup values, refined frequencies)."""
    n_rows, H = rows.shape
    L = grid_factor * H
    F = np.fft.ifft(rows, n=L, axis=1) * L        # F[k] = sum_h w_h e(+2 pi i hk/L)
    mags = np.abs(F) / H
    k_star = np.argmax(mags, axis=1)
    idx = np.arange(n_rows)
    center = mags[idx, k_star]
    left = mags[idx, (k_star - 1) % L]
    right = mags[idx, (k_star + 1) % L]
    with np.errstate(divide="ignore", invalid="ignore"):
        lm, l0, lp = np.log(left), np.log(center), np.log(right)
        denom = lm - 2.0 * l0 + lp
        delta = 0.5 * (lm - lp) / denom
    bad = ~np.isfinite(delta) | (np.abs(delta) > 0.5)
    delta = np.where(bad, 0.0, delta)
    alpha = frac((k_star + delta) / L)
    # one exact re-evaluation at the refined frequency
    h = np.arange(H, dtype=np.float64)
    phases = unit_phase(frac(alpha[:, None] * h[None, :]))
    refined = np.abs(np.einsum("ij,ij->i", rows, phases)) / H
    sup = np.maximum(center, refined)
    alpha = np.where(refined >= center, alpha, k_star / L)
    return sup, alpha


def _window_matrix(u: BoundedSequence, offsets: np.ndarray, H: int) -> np.ndarray:
    vals = u.complex_values()
    if offsets.size and offsets.max() + H > u.N:
        raise InsufficientDataError(
            f"window [{offsets.max()}, {offsets.max() + H}) beyond prefix {u.N}")
    if offsets.size and offsets.min() < 0:
        raise ValueError("window offsets must be >= 0")
    return vals[offsets[:, None] + np.arange(H)[None, :]]


def _check_params(H: int, grid_factor: int) -> None:
    if H < 1:
        raise ValueError("H must be >= 1")
    if grid_factor < 2:
        raise ValueError("grid_factor must be >= 2")


def _gap_bound(grid_factor: int) -> float:
    return (math.pi ** 2 / 2.0) / grid_factor ** 2


def window_sup(u: BoundedSequence, m: int, H: int, grid_factor: int = 8) -> WindowSupResult:
    """Sup scan of one window starting at 0-based offset m."""
    _check_params(H, grid_factor)
    rows = _window_matrix(u, np.array([int(m)]), H)
    sup, alpha = _scan_rows(rows, grid_factor)
    return WindowSupResult(m=int(m), H=H, sup_value=float(sup[0]),
                           argmax_alpha=float(alpha[0]), grid_factor=grid_factor,
                           grid_gap_bound=_gap_bound(grid_factor))


def _scan_offsets(u: BoundedSequence, offsets: np.ndarray, H: int,
                  grid_factor: int, threads: int | None) -> tuple[np.ndarray, np.ndarray]:
    chunk = max(1, (1 << 22) // (grid_factor * H))
    pieces = [offsets[i : i + chunk] for i in range(0, len(offsets), chunk)]

    def scan(piece):
        return _scan_rows(_window_matrix(u, piece, H), grid_factor)

    parts = parallel_map(scan, pieces, threads)
    sups = np.concatenate([p[0] for p in parts])
    alphas = np.concatenate([p[1] for p in parts])
    return sups, alphas


def f1(u: BoundedSequence, H: int, M: int | None = None, stride: int | None = None,
       grid_factor: int = 8, threads: int | None = None) -> F1Result:
    """Average of window sups over offsets 0, stride, ..., (M-1)*stride."""
    _check_params(H, grid_factor)
    if stride is None:
        stride = max(1, H // 4)
    stride = int(stride)
    if stride < 1:
        raise ValueError("stride must be >= 1")
    max_windows = (u.N - H) // stride + 1
    if u.N < H:
        raise InsufficientDataError(f"prefix {u.N} shorter than window {H}")
    M = max_windows if M is None else int(M)
    if M < 1 or (M - 1) * stride + H > u.N:
        raise InsufficientDataError("window schedule runs past the prefix")
    offsets = stride * np.arange(M, dtype=np.int64)
    sups, alphas = _scan_offsets(u, offsets, H, grid_factor, threads)
    return F1Result(value=float(np.mean(sups)), H=H, M=M, stride=stride,
                    grid_factor=grid_factor, sup_values=sups, argmax_alphas=alphas)


def f1_log(u: BoundedSequence, H: int, M: int | None = None,
           grid_factor: int = 8, threads: int | None = None) -> F1Result:
    """Log-averaged variant: (1/log M) sum over m = 1..M of sup_m / m."""
    _check_params(H, grid_factor)
    if M is None:
        M = u.N - H
    M = int(M)
    if M < 2 or M + H > u.N:
        raise InsufficientDataError("need 2 <= M and M + H <= prefix length")
    offsets = np.arange(1, M + 1, dtype=np.int64)
    sups, alphas = _scan_offsets(u, offsets, H, grid_factor, threads)
    value = float(np.sum(sups / offsets) / math.log(M))
    return F1Result(value=value, H=H, M=M, stride=1, grid_factor=grid_factor,
                    sup_values=sups, argmax_alphas=alphas)
