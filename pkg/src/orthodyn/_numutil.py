"""Shared numeric helpers: exact mod-1 phase reduction and small utilities.

Phases of the form c * n**j must be reduced mod 1 without losing the low
bits: at n ~ 1e8 and j = 4 the product has ~160 bits and a naive float
reduction returns noise.  The reduction here goes through the exact binary
representation of the coefficient, so the result is the true fractional
part of the (exact dyadic) coefficient times n**j, up to one final rounding.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

TAU = 2.0 * math.pi


def frac(x):
    """Fractional part in [0, 1), elementwise."""
    return x - np.floor(x)


def _coeff_bits(c: float) -> tuple[int, int]:
    """Exact decomposition c = m * 2**-E with integer m and E >= 0.

    Floats are dyadic rationals, so this is lossless.  Integer-valued c
    returns (0, 0) since its multiples contribute nothing mod 1.
    """
    fr, exp = math.frexp(c)        # c = fr * 2**exp, 0.5 <= |fr| < 1
    m = int(fr * (1 << 53))        # exact: fr has at most 53 mantissa bits
    e = exp - 53
    while m != 0 and m % 2 == 0:
        m //= 2
        e += 1
    if e >= 0:                     # c is an integer
        return 0, 0
    return m, -e


def frac_monomial(c: float, n, power: int) -> np.ndarray:
    """frac(c * n**power) computed exactly before the final float rounding.

    n: integer array (any integer dtype or Python ints).  power >= 0.
    """
    n_arr = np.asarray(n)
    if power == 0:
        return np.broadcast_to(np.float64(frac(np.float64(c))), n_arr.shape).copy()
    m, E = _coeff_bits(float(c))
    if m == 0:
        return np.zeros(n_arr.shape, dtype=np.float64)
    if E <= 63:
        # (m * n**power) mod 2**E via wrap-around uint64 products
        mask = np.uint64((1 << E) - 1)
        base = n_arr.astype(np.int64).astype(np.uint64)
        acc = np.full(n_arr.shape, np.uint64(m % (1 << E)))
        for _ in range(power):
            acc = (acc * base) & mask
        return acc.astype(np.float64) / float(1 << E)
    # rare slow path: coefficient below 2**-63, exact big-int per element
    mod = 1 << E
    flat = n_arr.ravel()
    out = np.empty(flat.shape, dtype=np.float64)
    for i, nv in enumerate(flat):
        r = (m * pow(int(nv), power, mod)) % mod
        out[i] = r / mod
    return out.reshape(n_arr.shape)


def frac_scale(x, q) -> np.ndarray:
    """frac(q * x) for float array x in [0, 1) and integer |q| <= 2**26.

    Splits x at 26 bits: the high part reduces exactly in int64, the low
    part contributes |q * x_lo| < 1 with absolute rounding error below
    2**-53.  q may be a scalar or an array broadcastable against x.
    """
    x = np.asarray(x, dtype=np.float64)
    q_arr = np.asarray(q, dtype=np.int64)
    if np.any(np.abs(q_arr) > 1 << 26):
        raise ValueError("multiplier exceeds the exact 2**26 range")
    hi = np.floor(x * (1 << 26))
    lo = x - hi / (1 << 26)
    m = np.mod(q_arr * hi.astype(np.int64), 1 << 26)
    return frac(m / (1 << 26) + q_arr * lo)


def frac_poly(coeffs, n) -> np.ndarray:
    """frac(sum_j coeffs[j] * n**j) with per-monomial exact reduction."""
    n_arr = np.asarray(n)
    total = np.zeros(n_arr.shape, dtype=np.float64)
    for j, c in enumerate(coeffs):
        if c == 0.0:
            continue
        total += frac_monomial(c, n_arr, j)
    return frac(total)


def unit_phase(theta) -> np.ndarray:
    """e(theta) = exp(2 pi i theta) for theta already reduced to [0, 1)."""
    t = np.asarray(theta, dtype=np.float64)
    return np.exp(1j * TAU * t)


def e_poly(coeffs, n) -> np.ndarray:
    """exp(2 pi i * poly(n)) with exact mod-1 polynomial reduction."""
    return unit_phase(frac_poly(coeffs, n))


def logsumexp_rows(a: np.ndarray) -> np.ndarray:
    """log(sum(exp(a), axis=1)) row-wise, safe against -inf rows."""
    mx = np.max(a, axis=1, keepdims=True)
    mx_safe = np.where(np.isfinite(mx), mx, 0.0)
    s = np.sum(np.exp(a - mx_safe), axis=1)
    with np.errstate(divide="ignore"):
        out = mx_safe[:, 0] + np.log(s)
    return np.where(np.isfinite(mx[:, 0]), out, -np.inf)


def resolve_threads(threads: int | None = None) -> int:
    """Thread budget: explicit argument, then ORTHODYN_THREADS, then 1."""
    if threads is not None and threads >= 1:
        return int(threads)
    env = os.environ.get("ORTHODYN_THREADS", "")
    if env.strip().isdigit() and int(env) >= 1:
        return int(env)
    return 1


def parallel_map(fn, items, threads: int | None = None) -> list:
    """Order-preserving map, optionally on a thread pool.

    Each item is handled independently, and results are collected in input
    order, so the output is identical for every thread count.
    """
    k = resolve_threads(threads)
    items = list(items)
    if k <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=k) as pool:
        return list(pool.map(fn, items))


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """Counter-based generator; extra stream indices derive child streams."""
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(s) for s in stream))
    return np.random.Generator(np.random.Philox(ss))


def fmt_float(x: float) -> str:
    """17-significant-digit decimal rendering used by every CSV writer."""
    return format(float(x), ".17g")
