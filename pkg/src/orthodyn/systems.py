"""Torus dynamical systems, wedge unions, and observables along orbits.

Systems: coordinatewise rotations, the shear (x, y) -> (x, x + y), the
skew shift (x, y) -> (x + alpha, x + y), finite products, and a shrinking
wedge of subsystems glued at a common fixed base point.  Every system
exposes both single-step application and a closed-form n-th iterate, so the
two paths can be cross-checked; character observables additionally have an
exact vectorized orbit evaluation built on integer mod-1 reduction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from ._numutil import frac, frac_monomial, unit_phase
from .sequences import BoundedSequence


# ---------------------------------------------------------------- systems

@dataclass(frozen=True)
class Rotation:
    """x -> x + alpha coordinatewise on the d-torus."""

    alphas: tuple

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))
        if not self.alphas:
            raise ValueError("rotation needs at least one coordinate")

    @property
    def dim(self) -> int:
        return len(self.alphas)


@dataclass(frozen=True)
class Shear:
    """(x, y) -> (x, x + y): unipotent shear over a fixed first coordinate."""

    @property
    def dim(self) -> int:
        return 2


@dataclass(frozen=True)
class SkewShift:
    """(x, y) -> (x + alpha, x + y)."""

    alpha: float

    @property
    def dim(self) -> int:
        return 2


@dataclass(frozen=True)
class ProductSystem:
    parts: tuple

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        if not self.parts:
            raise ValueError("empty product")

    @property
    def dim(self) -> int:
        return sum(p.dim for p in self.parts)


@dataclass(frozen=True)
class WedgeSystem:
    """Subsystems glued at a shared fixed base point, with shrinking scales.

    scales[i] is the declared diameter of component i+1; the sequence must
    be strictly decreasing and positive, one entry per part.
    """

    parts: tuple
    scales: tuple

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        object.__setattr__(self, "scales", tuple(float(s) for s in self.scales))
        if len(self.parts) != len(self.scales):
            raise ValueError("one scale per wedge component is required")
        if not self.parts:
            raise ValueError("empty wedge")
        s = self.scales
        if any(x <= 0 for x in s) or any(s[i + 1] >= s[i] for i in range(len(s) - 1)):
            raise ValueError("wedge scales must be positive and strictly decreasing")


TorusSystem = Union[Rotation, Shear, SkewShift, ProductSystem]
System = Union[Rotation, Shear, SkewShift, ProductSystem, WedgeSystem]


@dataclass(frozen=True)
class WedgePoint:
    """Point of a wedge: component 0 is the base point, else an inner point."""

    component: int
    coords: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(float(c) for c in self.coords))
        if self.component < 0:
            raise ValueError("component must be >= 0")
        if self.component == 0 and self.coords:
            raise ValueError("the base point carries no coordinates")


def _as_coords(point) -> np.ndarray:
    arr = np.asarray(point, dtype=np.float64).reshape(-1)
    return frac(arr)


def step(system: System, point):
    """One application of the system map."""
    if isinstance(system, Rotation):
        x = _as_coords(point)
        return frac(x + np.asarray(system.alphas))
    if isinstance(system, Shear):
        x, y = _as_coords(point)
        return np.array([x, frac(x + y)])
    if isinstance(system, SkewShift):
        x, y = _as_coords(point)
        return np.array([frac(x + system.alpha), frac(x + y)])
    if isinstance(system, ProductSystem):
        x = _as_coords(point)
        out, k = [], 0
        for part in system.parts:
            out.append(step(part, x[k : k + part.dim]))
            k += part.dim
        return np.concatenate(out)
    if isinstance(system, WedgeSystem):
        if point.component == 0:
            return point
        part = system.parts[point.component - 1]
        return WedgePoint(point.component, tuple(step(part, point.coords)))
    raise TypeError(f"unknown system {system!r}")


def inverse_step(system: System, point):
    """One application of the inverse map."""
    if isinstance(system, Rotation):
        x = _as_coords(point)
        return frac(x - np.asarray(system.alphas))
    if isinstance(system, Shear):
        x, y = _as_coords(point)
        return np.array([x, frac(y - x)])
    if isinstance(system, SkewShift):
        X, Y = _as_coords(point)
        x = frac(X - system.alpha)
        return np.array([x, frac(Y - x)])
    if isinstance(system, ProductSystem):
        x = _as_coords(point)
        out, k = [], 0
        for part in system.parts:
            out.append(inverse_step(part, x[k : k + part.dim]))
            k += part.dim
        return np.concatenate(out)
    if isinstance(system, WedgeSystem):
        if point.component == 0:
            return point
        part = system.parts[point.component - 1]
        return WedgePoint(point.component, tuple(inverse_step(part, point.coords)))
    raise TypeError(f"unknown system {system!r}")


def iterate_n(system: System, point, n):
    """Closed-form n-th iterate; n may be a scalar or an integer array.

    Returns coords (for scalar n) or an (len(n), dim) array for torus
    systems; wedge points map to wedge points.
    """
    scalar = np.isscalar(n)
    ns = np.atleast_1d(np.asarray(n, dtype=np.int64))
    if np.any(ns < 0):
        raise ValueError("iterate exponents must be >= 0")
    if isinstance(system, WedgeSystem):
        if point.component == 0:
            return point if scalar else [point] * len(ns)
        part = system.parts[point.component - 1]
        inner = iterate_n(part, point.coords, n)
        if scalar:
            return WedgePoint(point.component, tuple(inner))
        return [WedgePoint(point.component, tuple(row)) for row in inner]
    out = _iterate_torus(system, _as_coords(point), ns)
    return out[0] if scalar else out


def _iterate_torus(system: TorusSystem, x: np.ndarray, ns: np.ndarray) -> np.ndarray:
    if isinstance(system, Rotation):
        cols = [frac(x[j] + frac_monomial(system.alphas[j], ns, 1)) for j in range(system.dim)]
        return np.stack(cols, axis=1)
    if isinstance(system, Shear):
        y = frac(x[1] + frac_monomial(x[0], ns, 1))
        return np.stack([np.full(ns.shape, x[0]), y], axis=1)
    if isinstance(system, SkewShift):
        tri = ns * (ns - 1) // 2
        first = frac(x[0] + frac_monomial(system.alpha, ns, 1))
        second = frac(x[1] + frac_monomial(x[0], ns, 1) + frac_monomial(system.alpha, tri, 1))
        return np.stack([first, second], axis=1)
    if isinstance(system, ProductSystem):
        cols, k = [], 0
        for part in system.parts:
            cols.append(_iterate_torus(part, x[k : k + part.dim], ns))
            k += part.dim
        return np.concatenate(cols, axis=1)
    raise TypeError(f"unknown torus system {system!r}")


# ------------------------------------------------------------ observables

@dataclass(frozen=True)
class Character:
    """f(x) = e(sum_j freqs[j] * x_j), a torus character; |f| = 1."""

    freqs: tuple

    def __post_init__(self):
        object.__setattr__(self, "freqs", tuple(int(m) for m in self.freqs))

    def value(self, coords) -> complex:
        x = _as_coords(coords)
        if x.size != len(self.freqs):
            raise ValueError("character frequency count does not match dimension")
        theta = frac(sum(frac_monomial(float(x[j]), np.int64(m), 1)
                         for j, m in enumerate(self.freqs)))
        return complex(unit_phase(theta))


@dataclass(frozen=True)
class ConstantObservable:
    c: complex = 1.0 + 0.0j

    def __post_init__(self):
        if abs(self.c) > 1.0 + 1e-12:
            raise ValueError("observable exceeds the unit bound")


@dataclass(frozen=True)
class WedgeObservable:
    """Eventually constant wedge observable.

    Takes base_value at the base point, applies inner[k-1] on component k
    for k <= len(inner), and is identically base_value on every deeper
    component, which makes it continuous on the shrinking wedge.
    """

    base_value: complex
    inner: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "inner", tuple(self.inner))
        if abs(self.base_value) > 1.0 + 1e-12:
            raise ValueError("observable exceeds the unit bound")

    @property
    def cutoff(self) -> int:
        """First component index on which the observable is constant."""
        return len(self.inner) + 1

    def value(self, point: WedgePoint) -> complex:
        if point.component == 0 or point.component > len(self.inner):
            return complex(self.base_value)
        obs = self.inner[point.component - 1]
        if isinstance(obs, ConstantObservable):
            return complex(obs.c)
        return obs.value(point.coords)


Observable = Union[Character, ConstantObservable, WedgeObservable]


def _character_orbit_phase(system: TorusSystem, x: np.ndarray, freqs, ns: np.ndarray) -> np.ndarray:
    """Phase of e-character along the orbit, reduced mod 1 exactly.

    Every term is an integer multiple of a float coordinate or a float
    coefficient times an integer, so frac_monomial keeps it exact.
    """
    total = np.zeros(ns.shape, dtype=np.float64)
    if isinstance(system, Rotation):
        for j, m in enumerate(freqs):
            if m == 0:
                continue
            total += frac_monomial(x[j], np.int64(m), 1)
            total += frac_monomial(system.alphas[j], m * ns, 1)
        return frac(total)
    if isinstance(system, Shear):
        m1, m2 = freqs
        total += frac_monomial(x[0], np.int64(m1), 1)
        total += frac_monomial(x[1], np.int64(m2), 1)
        total += frac_monomial(x[0], m2 * ns, 1)
        return frac(total)
    if isinstance(system, SkewShift):
        m1, m2 = freqs
        tri = ns * (ns - 1) // 2
        total += frac_monomial(x[0], np.int64(m1), 1)
        total += frac_monomial(x[1], np.int64(m2), 1)
        total += frac_monomial(system.alpha, m1 * ns, 1)
        total += frac_monomial(x[0], m2 * ns, 1)
        total += frac_monomial(system.alpha, m2 * tri, 1)
        return frac(total)
    if isinstance(system, ProductSystem):
        k = 0
        for part in system.parts:
            d = part.dim
            sub = freqs[k : k + d]
            if any(sub):
                total += _character_orbit_phase(part, x[k : k + d], sub, ns)
            k += d
        return frac(total)
    raise TypeError(f"unknown torus system {system!r}")


def orbit_values(system: System, point, f: Observable, ns) -> np.ndarray:
    """f(T^n point) for each exponent n in ns (integers >= 0)."""
    ns = np.asarray(ns, dtype=np.int64)
    if np.any(ns < 0):
        raise ValueError("iterate exponents must be >= 0")
    if isinstance(f, ConstantObservable):
        return np.full(ns.shape, complex(f.c), dtype=np.complex128)
    if isinstance(system, WedgeSystem):
        if not isinstance(f, WedgeObservable):
            raise TypeError("wedge systems take wedge observables")
        if point.component == 0 or point.component > len(f.inner):
            return np.full(ns.shape, complex(f.base_value), dtype=np.complex128)
        part = system.parts[point.component - 1]
        return orbit_values(part, np.asarray(point.coords), f.inner[point.component - 1], ns)
    if isinstance(f, Character):
        x = _as_coords(point)
        if x.size != len(f.freqs):
            raise ValueError("character frequency count does not match dimension")
        return unit_phase(_character_orbit_phase(system, x, f.freqs, ns))
    raise TypeError(f"unsupported observable {f!r}")


def orbit_observable(system: System, point, f: Observable, N: int) -> BoundedSequence:
    """The bounded sequence n -> f(T^n point) for n = 1..N."""
    ns = np.arange(1, int(N) + 1, dtype=np.int64)
    vals = orbit_values(system, point, f, ns)
    return BoundedSequence(vals, label=f"orbit[{system.__class__.__name__}]")


# ------------------------------------------------------------- stringform

def system_to_string(system: System) -> str:
    if isinstance(system, Rotation):
        return "rotation:" + ",".join(repr(a) for a in system.alphas)
    if isinstance(system, Shear):
        return "shear"
    if isinstance(system, SkewShift):
        return f"skew:{system.alpha!r}"
    if isinstance(system, ProductSystem):
        return "product(" + ";".join(system_to_string(p) for p in system.parts) + ")"
    if isinstance(system, WedgeSystem):
        inner = ";".join(system_to_string(p) for p in system.parts)
        scales = ",".join(repr(s) for s in system.scales)
        return f"wedge({inner}|scales={scales})"
    raise TypeError(f"unknown system {system!r}")


def _split_top(text: str, sep: str) -> list:
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return out


def parse_system(text: str) -> System:
    """Parse the compact system grammar used by configs and the CLI."""
    text = text.strip()
    if text.startswith("rotation:"):
        return Rotation(tuple(float(t) for t in text[len("rotation:") :].split(",")))
    if text == "shear":
        return Shear()
    if text.startswith("skew:"):
        return SkewShift(float(text[len("skew:") :]))
    if text.startswith("product(") and text.endswith(")"):
        inner = text[len("product(") : -1]
        return ProductSystem(tuple(parse_system(t) for t in _split_top(inner, ";")))
    if text.startswith("wedge(") and text.endswith(")"):
        inner = text[len("wedge(") : -1]
        body, _, tail = inner.rpartition("|scales=")
        if not body:
            raise ValueError("wedge spec needs |scales=...")
        parts = tuple(parse_system(t) for t in _split_top(body, ";"))
        scales = tuple(float(t) for t in tail.split(","))
        return WedgeSystem(parts, scales)
    raise ValueError(f"cannot parse system spec {text!r}")
