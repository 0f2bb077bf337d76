"""Bounded arithmetic test sequences and their binary cache format.

Sources: the Mobius and Liouville functions via a segmented sieve, phase
polynomials e(c0 + c1*n + ... + cd*n^d) with exact mod-1 reduction, and
reproducible random unit signs from a counter-based generator.  All
sequences are 1-indexed: entry n of the mathematical sequence sits at
values[n-1].
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np

from ._numutil import e_poly, make_rng

SEGMENT = 1 << 20
MAX_N = 1 << 40

MAGIC = b"ODSQ1"
_KIND_I8 = 0
_KIND_C16 = 1


class InsufficientDataError(ValueError):
    """An operation needed sequence entries beyond the stored prefix."""


@dataclass
class BoundedSequence:
    """A finite prefix u(1..N) of a complex sequence with |u(n)| <= 1."""

    values: np.ndarray
    label: str = "seq"
    two_sided_ok: bool = True

    def __post_init__(self):
        self.values = np.asarray(self.values)
        if self.values.ndim != 1:
            raise ValueError("sequence values must be one-dimensional")
        if self.values.size:
            top = float(np.max(np.abs(self.values.astype(np.complex128))))
            if top > 1.0 + 1e-12:
                raise ValueError(f"sequence exceeds the unit bound: {top}")

    @property
    def N(self) -> int:
        return int(self.values.size)

    def complex_values(self) -> np.ndarray:
        if self.values.dtype == np.complex128:
            return self.values
        return self.values.astype(np.complex128)

    def at(self, n: int) -> complex:
        """Entry u(n), 1-indexed."""
        if not 1 <= n <= self.N:
            raise InsufficientDataError(f"index {n} outside prefix 1..{self.N}")
        return complex(self.values[n - 1])


def _check_n(N: int, minimum: int = 1) -> int:
    N = int(N)
    if N > MAX_N:
        raise ValueError(f"N={N} exceeds the {MAX_N} limit")
    if N < minimum:
        raise ValueError(f"N must be >= {minimum}, got {N}")
    return N


def _base_primes(limit: int) -> np.ndarray:
    """Primes up to limit via a plain boolean sieve."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, int(limit**0.5) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return np.nonzero(mask)[0].astype(np.int64)


def mobius(N: int) -> BoundedSequence:
    """Mobius function mu(1..N), int8 values in {-1, 0, 1}."""
    N = _check_n(N)
    primes = _base_primes(int(N**0.5) + 1)
    out = np.empty(N, dtype=np.int8)
    for lo in range(1, N + 1, SEGMENT):
        hi = min(lo + SEGMENT, N + 1)
        size = hi - lo
        mu = np.ones(size, dtype=np.int8)
        rem = np.arange(lo, hi, dtype=np.int64)
        for p in primes:
            p = int(p)
            if p * p >= hi and p >= hi:
                break
            start = (-lo) % p
            mu[start::p] *= -1
            rem[start::p] //= p
            p2 = p * p
            if p2 < hi:
                start2 = (-lo) % p2
                mu[start2::p2] = 0
        mu[rem > 1] *= -1
        out[lo - 1 : hi - 1] = mu
    return BoundedSequence(out, label="mobius")


def liouville(N: int) -> BoundedSequence:
    """Liouville function lambda(1..N) = (-1)**Omega(n), int8 values."""
    N = _check_n(N)
    primes = _base_primes(int(N**0.5) + 1)
    out = np.empty(N, dtype=np.int8)
    for lo in range(1, N + 1, SEGMENT):
        hi = min(lo + SEGMENT, N + 1)
        size = hi - lo
        lam = np.ones(size, dtype=np.int8)
        rem = np.arange(lo, hi, dtype=np.int64)
        for p in primes:
            p = int(p)
            pe = p
            while pe < hi:
                start = (-lo) % pe
                lam[start::pe] *= -1
                rem[start::pe] //= p
                if pe > hi // p:
                    break
                pe *= p
        lam[rem > 1] *= -1
        out[lo - 1 : hi - 1] = lam
    return BoundedSequence(out, label="liouville")


def phase_sequence(coeffs, N: int) -> BoundedSequence:
    """u(n) = e(c0 + c1*n + ... + cd*n^d) for n = 1..N, degree d <= 4.

    Each monomial is reduced mod 1 through exact integer arithmetic on the
    coefficient's binary representation, so phases stay accurate for n well
    beyond 1e8 where naive float products lose the fractional part.
    """
    coeffs = [float(c) for c in coeffs]
    if len(coeffs) > 5:
        raise ValueError("polynomial degree above 4 is not supported")
    N = _check_n(N, minimum=0)
    n = np.arange(1, N + 1, dtype=np.int64)
    label = "phase[" + ",".join(repr(c) for c in coeffs) + "]"
    return BoundedSequence(e_poly(coeffs, n), label=label)


def random_signs(N: int, seed: int) -> BoundedSequence:
    """Reproducible +-1 sequence from a counter-based generator.

    The draw for index n depends only on (seed, n), so prefixes of the
    same seed agree and chunked generation reproduces the full run.
    """
    N = _check_n(N, minimum=0)
    if N == 0:
        return BoundedSequence(np.empty(0, dtype=np.int8), label=f"random_signs[seed={seed}]")
    bits = make_rng(seed).integers(0, 2, size=N, dtype=np.int8)
    return BoundedSequence((2 * bits - 1).astype(np.int8), label=f"random_signs[seed={seed}]")


def two_sided(u: BoundedSequence, m: int) -> complex:
    """Symmetric extension: u(m) for m >= 1, 1 at m = 0, u(-m) below."""
    if not u.two_sided_ok:
        raise InsufficientDataError("two-sided extension disabled for this sequence")
    if m == 0:
        return 1.0 + 0.0j
    return u.at(abs(m))


def mix(parts, weights) -> BoundedSequence:
    """Pointwise convex-style combination sum_i w_i * u_i of equal prefixes."""
    parts = list(parts)
    weights = [complex(w) for w in weights]
    if len(parts) != len(weights) or not parts:
        raise ValueError("parts and weights must be equal-length and nonempty")
    if sum(abs(w) for w in weights) > 1.0 + 1e-12:
        raise ValueError("total weight must stay within the unit bound")
    N = parts[0].N
    if any(p.N != N for p in parts):
        raise ValueError("all parts must share the same prefix length")
    vals = np.zeros(N, dtype=np.complex128)
    for w, p in zip(weights, parts):
        vals += w * p.complex_values()
    label = "mix[" + "+".join(p.label for p in parts) + "]"
    return BoundedSequence(vals, label=label)


def concat(first: BoundedSequence, second: BoundedSequence) -> BoundedSequence:
    """First prefix followed by the second on the later indices."""
    vals = np.concatenate([first.complex_values(), second.complex_values()])
    return BoundedSequence(vals, label=f"concat[{first.label}|{second.label}]")


def save_cache(path, u: BoundedSequence) -> None:
    """Binary cache: magic, little-endian u64 length, kind byte, payload."""
    if u.values.dtype == np.int8:
        kind, payload = _KIND_I8, u.values.tobytes()
    else:
        c = np.ascontiguousarray(u.complex_values(), dtype="<c16")
        kind, payload = _KIND_C16, c.tobytes()
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<Q", u.N))
        fh.write(struct.pack("B", kind))
        fh.write(payload)


def load_cache(path, label: str = "cached") -> BoundedSequence:
    with open(path, "rb") as fh:
        blob = fh.read()
    if blob[: len(MAGIC)] != MAGIC:
        raise ValueError("not a sequence cache file (bad magic)")
    (n,) = struct.unpack_from("<Q", blob, len(MAGIC))
    kind = blob[len(MAGIC) + 8]
    payload = blob[len(MAGIC) + 9 :]
    if kind == _KIND_I8:
        if len(payload) != n:
            raise ValueError("cache payload length mismatch")
        vals = np.frombuffer(payload, dtype=np.int8).copy()
    elif kind == _KIND_C16:
        if len(payload) != 16 * n:
            raise ValueError("cache payload length mismatch")
        vals = np.frombuffer(payload, dtype="<c16").astype(np.complex128)
    else:
        raise ValueError(f"unknown payload kind {kind}")
    return BoundedSequence(vals, label=label)
