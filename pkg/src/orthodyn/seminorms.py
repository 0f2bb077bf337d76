"""Degree-s uniformity seminorm estimators for bounded sequences.

The degree-1 seminorm is a Cesaro average of shift correlations; higher
degrees come from the inductive rule that the 2^(s+1) power of the degree
(s+1) seminorm is the average over shifts h of the 2^s power applied to
u(.+h) * conj(u).  Logarithmic variants replace the n-average (1/N) sum
by (1/log N) sum of (1/n) terms.  All estimators work on one finite
prefix and report the exact finite formula they evaluated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._numutil import frac, frac_monomial, unit_phase
from .sequences import BoundedSequence, InsufficientDataError
from .sequences import two_sided as two_sided_at

CESARO = "cesaro"
LOG = "logarithmic"


@dataclass(frozen=True)
class SeminormEstimate:
    """One seminorm evaluation: value = max(Re raw, 0) ** (1 / 2**s).

    raw is the pre-clip top-level average: the complex correlation average
    for s = 1, and the mean of the (already clipped, hence real) inner
    squares for s >= 2.
    """

    value: float
    s: int
    H: int
    N: int
    mode: str
    raw: complex


def _mode_weights(N: int, mode: str) -> tuple[np.ndarray | None, float]:
    """Per-n weights and normalizer: (None, N) for Cesaro averages."""
    if mode == CESARO:
        return None, float(N)
    if mode == LOG:
        n = np.arange(1, N + 1, dtype=np.float64)
        return 1.0 / n, math.log(N)
    raise ValueError(f"unknown mode {mode!r}")


def correlations(u: BoundedSequence, N: int, max_lag: int, mode: str = CESARO) -> np.ndarray:
    """c[h] = normalized sum over n <= N of u(n) * conj(u(n+h)), h = 0..max_lag.

    The FFT and direct paths compute the same sums; the choice depends only
    on (N, max_lag), so repeated calls with equal arguments are bitwise
    reproducible.
    """
    if N < 1 or max_lag < 0:
        raise ValueError("need N >= 1 and max_lag >= 0")
    if N + max_lag > u.N:
        raise InsufficientDataError(
            f"need prefix of length {N + max_lag}, have {u.N}")
    vals = u.complex_values()
    w, norm = _mode_weights(N, mode)
    a = vals[:N] if w is None else vals[:N] * w
    b = vals[: N + max_lag]
    if N >= 4096 and max_lag >= 32:
        size = 1 << (N + max_lag - 1).bit_length()
        fa = np.fft.fft(a, size)
        fb = np.fft.fft(b, size)
        z = np.fft.ifft(np.conj(fa) * fb)[: max_lag + 1]
        return np.conj(z) / norm
    out = np.empty(max_lag + 1, dtype=np.complex128)
    bc = np.conj(b)
    for h in range(max_lag + 1):
        out[h] = np.dot(a, bc[h : h + N])
    return out / norm


def corr(u: BoundedSequence, h: int, N: int, mode: str = CESARO,
         two_sided: bool = False) -> complex:
    """Single shift correlation (1/N) sum of u(n) * conj(u(n+h)).

    Negative shifts are only reachable through the symmetric two-sided
    extension; nonnegative shifts read the stored prefix directly.
    """
    if h >= 0:
        return complex(correlations(u, N, h, mode)[h])
    if not two_sided:
        raise InsufficientDataError("negative shift needs two_sided=True")
    w, norm = _mode_weights(N, mode)
    total = 0.0 + 0.0j
    for n in range(1, N + 1):
        lhs = two_sided_at(u, n)
        rhs = two_sided_at(u, n + h)
        term = lhs * np.conj(rhs)
        total += term if w is None else term * w[n - 1]
    return complex(total / norm)


def modulated_average(c: np.ndarray, lam: complex, H: int) -> complex:
    """(1/H) sum over h = 1..H of lam**h * c[h].

    The modulation frequency is reduced mod 1 through the exact integer
    path, so lam**h never drifts.  This is the single code path shared by
    the seminorm estimators and the spectral atom-mass evaluation.
    """
    if H < 1 or H >= len(c):
        raise ValueError(f"need 1 <= H < len(c), got H={H}, len={len(c)}")
    lam = complex(lam)
    if abs(abs(lam) - 1.0) > 1e-9:
        raise ValueError("modulation must lie on the unit circle")
    t = math.atan2(lam.imag, lam.real) / (2.0 * math.pi)
    h = np.arange(1, H + 1, dtype=np.int64)
    weights = unit_phase(frac_monomial(t % 1.0, h, 1))
    return complex(np.dot(weights, c[1 : H + 1]) / H)


def _default_H(n: int) -> int:
    return max(1, int(n ** (1.0 / 3.0) + 1e-9))


def _resolve_window(u: BoundedSequence, N, H, levels: int, allow_large_H: bool):
    if H is None:
        H = _default_H(u.N if N is None else N)
    H = int(H)
    if N is None:
        N = u.N - levels * H
    N = int(N)
    if H < 1:
        raise ValueError("H must be >= 1")
    if N < 1:
        raise InsufficientDataError("prefix too short for the nested shifts")
    if not allow_large_H and H > N // 10:
        raise ValueError(f"H={H} above N/10={N // 10}; pass allow_large_H=True to override")
    if N + levels * H > u.N:
        raise InsufficientDataError(
            f"need prefix of length {N + levels * H}, have {u.N}")
    return N, H


def u1_sq(u: BoundedSequence, N: int | None = None, H: int | None = None,
          mode: str = CESARO, allow_large_H: bool = False) -> SeminormEstimate:
    """Degree-1 seminorm square via the Cesaro average of correlations.

    Computed through modulated_average at unit modulation, so it is
    bitwise the spectral kernel-mass formula at frequency zero.
    """
    N, H = _resolve_window(u, N, H, levels=1, allow_large_H=allow_large_H)
    c = correlations(u, N, H, mode)
    raw = modulated_average(c, 1.0, H)
    value = math.sqrt(max(raw.real, 0.0))
    return SeminormEstimate(value=value, s=1, H=H, N=N, mode=mode, raw=raw)


def u1_lambda_sq(u: BoundedSequence, lam: complex, N: int | None = None,
                 H: int | None = None, mode: str = CESARO,
                 allow_large_H: bool = False) -> SeminormEstimate:
    """Modulated degree-1 square: (1/H) sum of lam**h * c[h], clipped."""
    N, H = _resolve_window(u, N, H, levels=1, allow_large_H=allow_large_H)
    c = correlations(u, N, H, mode)
    raw = modulated_average(c, lam, H)
    value = math.sqrt(max(raw.real, 0.0))
    return SeminormEstimate(value=value, s=1, H=H, N=N, mode=mode, raw=raw)


def _inner_u1_clipped(vals: np.ndarray, N_in: int, H_in: int, mode: str) -> float:
    """Clipped degree-1 square of a shifted-product sequence.

    Uses the window-sum identity: summing c[h1] over h1 = 1..H equals
    averaging v(n) * conj(C(n+H) - C(n)) with C the prefix sums, which is
    the same finite sum reorganized.
    """
    w, norm = _mode_weights(N_in, mode)
    a = vals[:N_in] if w is None else vals[:N_in] * w
    C = np.concatenate([[0.0 + 0.0j], np.cumsum(vals[: N_in + H_in])])
    windows = C[H_in + 1 : N_in + H_in + 1] - C[1 : N_in + 1]
    raw = np.dot(a, np.conj(windows)) / (norm * H_in)
    return max(raw.real, 0.0)


def us_norm(u: BoundedSequence, s: int = 2, N: int | None = None,
            H: int | None = None, mode: str = CESARO,
            allow_large_H: bool = False) -> SeminormEstimate:
    """Degree-s seminorm via the shift recursion, s in {1, 2, 3}."""
    if s not in (1, 2, 3):
        raise ValueError("degree s must be 1, 2, or 3")
    if s == 1:
        est = u1_sq(u, N=N, H=H, mode=mode, allow_large_H=allow_large_H)
        return SeminormEstimate(value=est.value, s=1, H=est.H, N=est.N,
                                mode=mode, raw=est.raw)
    N, H = _resolve_window(u, N, H, levels=s, allow_large_H=allow_large_H)
    vals = u.complex_values()
    inner_len = N + (s - 1) * H
    total = 0.0
    for h in range(1, H + 1):
        v_h = vals[h : h + inner_len] * np.conj(vals[:inner_len])
        if s == 2:
            total += _inner_u1_clipped(v_h, N, H, mode)
        else:
            sub = 0.0
            for h2 in range(1, H + 1):
                w_h = v_h[h2 : h2 + N + H] * np.conj(v_h[: N + H])
                sub += _inner_u1_clipped(w_h, N, H, mode)
            total += sub / H
    raw = total / H
    value = raw ** (1.0 / (1 << s)) if raw > 0 else 0.0
    return SeminormEstimate(value=value, s=s, H=H, N=N, mode=mode, raw=complex(raw))


def log_variant(op, u: BoundedSequence, **params) -> SeminormEstimate:
    """Run a seminorm estimator with logarithmic n-averaging."""
    params = dict(params)
    params["mode"] = LOG
    return op(u, **params)


def u2_fourier_fourth(u: BoundedSequence, N: int | None = None) -> float:
    """Diagnostic cross-check: (sum over DFT bins of |u_hat|^4) ** (1/4)."""
    N = u.N if N is None else int(N)
    z = np.fft.fft(u.complex_values()[:N]) / N
    return float(np.sum(np.abs(z) ** 4) ** 0.25)
