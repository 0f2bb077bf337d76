"""Constructive nested-arc recursion for multiply-by-p character approximation.

State is a finite union of pairwise disjoint closed arcs of the circle,
each addressed by a binary word.  One refinement step picks the midpoint
x of every arc, forms the target arc of points z with |e(2 pi i z) -
f(x)| < eps, and lifts it through x -> p^k x: each arc receives the two
lowest preimage components starting inside it, truncated at the arc end.
Arc endpoints are exact rationals, so disjointness, nesting, and the
inclusion p^k(child) inside the target are checked exactly; the sup
bound on |e(2 pi i p^k x) - f(x)| is certified by sampling plus an
analytic Lipschitz slack.

Before lifting, each arc is shrunk around its midpoint to length
eps / (4 pi L) where L is the Lipschitz bound of the test function's
phase.  This keeps |f(x) - f(midpoint)| below eps / 2 across the arc, so
the certified sup stays under 2 eps at every finite level rather than
only asymptotically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from ._numutil import TAU

SCALE = 1 << 48
MAX_COVER_EXPONENT = 64


def _as_fraction(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _floor_fraction(x: float, margin_ulps: int = 0) -> Fraction:
    """Rational lower bound of a float on the 2**-48 grid."""
    return Fraction(math.floor(x * SCALE) - margin_ulps, SCALE)


@dataclass(frozen=True)
class Arc:
    """Closed arc [start, start + length] mod 1 with rational endpoints."""

    start: Fraction
    length: Fraction
    word: str = ""

    def __post_init__(self):
        object.__setattr__(self, "start", _as_fraction(self.start) % 1)
        object.__setattr__(self, "length", _as_fraction(self.length))
        if not 0 < self.length <= 1:
            raise ValueError("arc length must lie in (0, 1]")

    @property
    def end(self) -> Fraction:
        return self.start + self.length

    @property
    def midpoint(self) -> Fraction:
        return (self.start + self.length / 2) % 1

    def contains_arc(self, other: "Arc") -> bool:
        delta = (other.start - self.start) % 1
        return delta + other.length <= self.length

    def contains_point(self, x) -> bool:
        return (_as_fraction(x) - self.start) % 1 <= self.length


@dataclass(frozen=True)
class ArcSet:
    """Level-n state: 2**n pairwise disjoint arcs addressed by binary words."""

    level: int
    arcs: tuple

    def __post_init__(self):
        object.__setattr__(self, "arcs", tuple(self.arcs))
        if self.level < 0:
            raise ValueError("level must be >= 0")
        if len(self.arcs) != 2 ** self.level:
            raise ValueError(f"level {self.level} needs {2 ** self.level} arcs")
        ordered = sorted(self.arcs, key=lambda a: a.start)
        for i in range(len(ordered) - 1):
            if ordered[i].end >= ordered[i + 1].start:
                raise ValueError("arcs overlap")
        if len(ordered) > 1 and ordered[-1].end >= ordered[0].start + 1:
            raise ValueError("arcs overlap around the wrap point")

    @property
    def max_length(self) -> Fraction:
        return max(a.length for a in self.arcs)


def full_circle() -> ArcSet:
    return ArcSet(0, (Arc(Fraction(0), Fraction(1), ""),))


@dataclass(frozen=True)
class TestFunction:
    """Unit-modulus map x -> e(2 pi i (w x + sum_j a_j cos 2 pi j x + b_j sin 2 pi j x)).

    Coefficients are exact rationals; trailing zero pairs are trimmed so
    equal functions share one representation.
    """

    w: int
    coeffs: tuple = ()

    def __post_init__(self):
        cs = [(_as_fraction(a), _as_fraction(b)) for a, b in self.coeffs]
        while cs and cs[-1] == (0, 0):
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "w", int(self.w))

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    @property
    def height(self) -> int:
        q = 1
        for a, b in self.coeffs:
            q = math.lcm(q, a.denominator, b.denominator)
        return abs(self.w) + self.degree + q

    @property
    def lipschitz_phase(self) -> float:
        return abs(self.w) + sum(TAU * (j + 1) * (abs(float(a)) + abs(float(b)))
                                 for j, (a, b) in enumerate(self.coeffs))

    def phase(self, x):
        x = np.asarray(x, dtype=np.float64)
        out = self.w * x
        for j, (a, b) in enumerate(self.coeffs, start=1):
            out = out + float(a) * np.cos(TAU * j * x) + float(b) * np.sin(TAU * j * x)
        return out

    def value(self, x):
        return np.exp(1j * TAU * self.phase(x))

    def label(self) -> str:
        parts = [f"w={self.w}"]
        for j, (a, b) in enumerate(self.coeffs, start=1):
            parts.append(f"a{j}={a}")
            parts.append(f"b{j}={b}")
        return ";".join(parts)


def enumerate_test_functions(count: int, max_height: int = 6) -> list:
    """First `count` test functions ordered by height with deterministic ties.

    At height h the candidates are every (w, d, q) with |w| + d + q = h and
    coefficients from (1/q)Z intersected with [-1, 1]; duplicates met at a
    lower height are skipped.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    seen = set()
    out = []
    for h in range(1, max_height + 1):
        batch = []
        for w in range(-h, h + 1):
            rem = h - abs(w)
            for d in range(rem):
                q = rem - d
                grid = range(-q, q + 1)
                for nums in product(grid, repeat=2 * d):
                    coeffs = tuple((Fraction(nums[2 * j], q), Fraction(nums[2 * j + 1], q))
                                   for j in range(d))
                    tf = TestFunction(w, coeffs)
                    key = (tf.w, tf.coeffs)
                    if key in seen:
                        continue
                    seen.add(key)
                    batch.append(tf)
        batch.sort(key=lambda t: (t.w, t.degree,
                                  tuple((a.numerator, a.denominator,
                                         b.numerator, b.denominator)
                                        for a, b in t.coeffs)))
        out.extend(batch)
        if len(out) >= count:
            return out[:count]
    raise ValueError(f"only {len(out)} test functions up to height {max_height}")


def _cover_exponent(p: int, min_length: Fraction) -> int:
    """Smallest k with p**k * min_length > 2."""
    k = 1
    while p ** k * min_length <= 2:
        k += 1
        if k > MAX_COVER_EXPONENT:
            raise RuntimeError("arcs too short: covering exponent exceeds 64")
    return k


def arc_lift(p: int, U_list, V_list) -> tuple[int, list]:
    """Lift each target V_j through x -> p^k x into two sub-arcs of U_j.

    k is the smallest exponent with p^k |U_j| > 2 for every j.  The
    preimage of V_j splits into p^k arcs of length |V_j| / p^k; the two
    with the lowest start coordinate inside U_j are kept, truncated at the
    end of U_j, and the inclusion p^k(sub-arc) within V_j is re-checked in
    exact arithmetic.
    """
    if len(U_list) != len(V_list) or not U_list:
        raise ValueError("need matching nonempty arc families")
    k = _cover_exponent(p, min(u.length for u in U_list))
    pk = p ** k
    pairs = []
    for U, V in zip(U_list, V_list):
        comp_len = V.length / pk
        v0 = V.start
        t0 = math.ceil(U.start * pk - v0)
        subs = []
        t = t0
        while len(subs) < 2:
            s = Fraction(v0 + t, pk)
            if s >= U.end:
                raise RuntimeError("fewer than two preimage components in an arc")
            length = min(comp_len, U.end - s)
            subs.append(Arc(s, length))
            t += 1
        for sub in subs:
            delta = (sub.start * pk - V.start) % 1
            if delta + sub.length * pk > V.length:
                raise RuntimeError("lifted arc escapes its target")
        pairs.append((subs[0], subs[1]))
    return k, pairs


def _target_arc(f: TestFunction, x: Fraction, eps: float) -> Arc:
    """Rational arc inside {z : |e(2 pi i z) - f(x)| < eps}, rounded inward."""
    half = _floor_fraction(math.asin(eps / 2) / math.pi, margin_ulps=8)
    if half <= 0:
        raise ValueError("eps too small for the rational grid")
    c = float(f.phase(float(x))) % 1.0
    center = Fraction(round(c * SCALE), SCALE)
    return Arc((center - half) % 1, 2 * half)


def kronecker_step(p: int, K_prev: ArcSet, f: TestFunction,
                   eps: float) -> tuple[ArcSet, int]:
    """One refinement level: shrink, lift, truncate; returns (K_next, k_n)."""
    eps = float(eps)
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    n = K_prev.level + 1
    L = f.lipschitz_phase
    targets, shrunk = [], []
    for arc in K_prev.arcs:
        length = arc.length
        if L > 0:
            cap = _floor_fraction(eps / (4 * math.pi * L))
            if cap <= 0:
                raise RuntimeError("shrink target below the rational grid")
            length = min(length, cap)
        mid = arc.midpoint
        shrunk.append(Arc((mid - length / 2) % 1, length, arc.word))
        targets.append(_target_arc(f, mid, eps))
    k, pairs = arc_lift(p, shrunk, targets)
    cap_n = Fraction(1, 2 ** n)
    children = []
    for parent, (s0, s1) in zip(K_prev.arcs, pairs):
        for i, sub in enumerate((s0, s1)):
            length = min(sub.length, parent.length / 4, cap_n)
            children.append(Arc(sub.start, length, parent.word + str(i)))
    return ArcSet(n, tuple(children)), k


@dataclass(frozen=True)
class StarCertificate:
    level: int
    k: int
    worst: float
    slack: float
    bound: float
    ok: bool


def verify_star(p: int, K: ArcSet, f: TestFunction, k: int, eps: float,
                samples_per_arc: int = 64) -> StarCertificate:
    """Certify sup over K of |e(2 pi i p^k x) - f(x)| < 2 eps.

    Each arc is sampled at samples_per_arc equispaced interior points plus
    both endpoints; the analytic slack (Lipschitz bound of the integrand
    times the largest arc length over samples_per_arc) is added to the
    sampled maximum before the comparison.
    """
    if samples_per_arc < 1:
        raise ValueError("samples_per_arc must be >= 1")
    pk = p ** k
    worst = 0.0
    for arc in K.arcs:
        grid = [arc.start + arc.length * i / (samples_per_arc + 1)
                for i in range(samples_per_arc + 2)]
        xs = np.array([float(g) for g in grid])
        chi = np.exp(1j * TAU * np.array([float((pk * g) % 1) for g in grid]))
        gap = np.max(np.abs(chi - f.value(xs)))
        worst = max(worst, float(gap))
    lip = TAU * (pk + f.lipschitz_phase)
    slack = lip * float(K.max_length) / samples_per_arc
    bound = 2.0 * float(eps)
    return StarCertificate(level=K.level, k=k, worst=worst, slack=slack,
                           bound=bound, ok=worst + slack < bound)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def build(p: int, depth: int, eps_schedule=None, tests=None,
          samples_per_arc: int = 64) -> tuple[ArcSet, list]:
    """Run the recursion to `depth` levels and certify every level.

    Defaults: eps_n = 2**-n and the height-ordered test function
    enumeration.  Returns the final arc set and one certificate per level.
    """
    if not _is_prime(p):
        raise ValueError("p must be prime")
    if depth < 0:
        raise ValueError("depth must be >= 0")
    K = full_circle()
    if depth == 0:
        return K, []
    if tests is None:
        tests = enumerate_test_functions(depth)
    if eps_schedule is None:
        eps_schedule = [2.0 ** -n for n in range(1, depth + 1)]
    if len(tests) < depth or len(eps_schedule) < depth:
        raise ValueError("need one test function and one eps per level")
    certificates = []
    for n in range(1, depth + 1):
        K, k_n = kronecker_step(p, K, tests[n - 1], eps_schedule[n - 1])
        certificates.append(verify_star(p, K, tests[n - 1], k_n,
                                        eps_schedule[n - 1], samples_per_arc))
    return K, certificates
