"""Shared test helpers: small independent oracles."""

import numpy as np


def mobius_trial(n: int) -> int:
    """Trial-division Mobius value, the slow reference implementation."""
    if n == 1:
        return 1
    count = 0
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            count += 1
        else:
            d += 1
    if n > 1:
        count += 1
    return -1 if count % 2 else 1


def omega_trial(n: int) -> int:
    """Number of prime factors with multiplicity, by trial division."""
    count = 0
    d = 2
    while d * d <= n:
        while n % d == 0:
            n //= d
            count += 1
        d += 1
    if n > 1:
        count += 1
    return count


def brute_correlation(vals: np.ndarray, N: int, h: int) -> complex:
    """(1/N) sum_{n=1..N} u(n) conj(u(n+h)) as a plain Python loop."""
    total = 0.0 + 0.0j
    for n in range(N):
        total += vals[n] * np.conj(vals[n + h])
    return total / N
