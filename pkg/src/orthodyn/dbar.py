"""Block-distribution transport distance over a finite alphabet.

Length-k blocks over an alphabet of size A are encoded as base-A integers,
most significant symbol first.  The distance between two block
distributions is the optimal-transport cost under the normalized Hamming
ground metric (disagreeing positions divided by k).  Small instances are
solved exactly by a transportation network simplex with Bland's pivot
rule; larger ones by log-domain entropic regularization with an annealed
temperature, rounded to an exactly feasible plan.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._numutil import logsumexp_rows, make_rng
from .sequences import BoundedSequence

EXACT_LIMIT = 512
MATRIX_LIMIT = 4096


@dataclass(frozen=True)
class BlockDistribution:
    """Probability vector over the A**k length-k blocks."""

    alphabet: int
    k: int
    probs: np.ndarray
    source: str = "exact"
    n_samples: int = 0

    def __post_init__(self):
        if self.alphabet < 2:
            raise ValueError("alphabet size must be >= 2")
        if not 1 <= self.k <= 8:
            raise ValueError("block length must be in 1..8")
        size = self.alphabet ** self.k
        if size > 1 << 20:
            raise ValueError("block space larger than 2**20")
        p = np.asarray(self.probs, dtype=np.float64)
        if p.shape != (size,):
            raise ValueError(f"need {size} probabilities, got shape {p.shape}")
        if np.min(p) < -1e-12:
            raise ValueError("negative block probability")
        p = np.maximum(p, 0.0)
        if abs(float(np.sum(p)) - 1.0) > 1e-9:
            raise ValueError("block probabilities must sum to 1")
        object.__setattr__(self, "probs", p)
        if self.source not in ("exact", "empirical"):
            raise ValueError("source must be 'exact' or 'empirical'")

    @property
    def size(self) -> int:
        return self.alphabet ** self.k

    @property
    def shift_residual(self) -> float:
        """Max gap between first-symbol and last-symbol (k-1)-marginals."""
        if self.k == 1:
            return 0.0
        A = self.alphabet
        head = self.probs.reshape(A, -1).sum(axis=0)
        tail = self.probs.reshape(-1, A).sum(axis=1)
        return float(np.max(np.abs(head - tail)))

    def stationarity_ok(self) -> bool:
        if self.source == "empirical" and self.n_samples > 0:
            return self.shift_residual <= 5.0 / math.sqrt(self.n_samples)
        return self.shift_residual <= 1e-9


def block_string(index: int, alphabet: int, k: int) -> str:
    """Base-A digit string of a block index, most significant first."""
    digits = []
    for _ in range(k):
        digits.append(str(index % alphabet))
        index //= alphabet
    return "".join(reversed(digits))


def block_digits(alphabet: int, k: int) -> np.ndarray:
    """(A**k, k) array of base-A digits, most significant column first."""
    idx = np.arange(alphabet ** k, dtype=np.int64)
    cols = [(idx // alphabet ** (k - 1 - t)) % alphabet for t in range(k)]
    return np.stack(cols, axis=1)


def hamming_cost(alphabet: int, k: int) -> np.ndarray:
    """Normalized Hamming distance matrix between all pairs of blocks."""
    D = block_digits(alphabet, k)
    C = np.zeros((D.shape[0], D.shape[0]), dtype=np.float64)
    for t in range(k):
        C += (D[:, None, t] != D[None, :, t])
    return C / k


def sign_symbols(u: BoundedSequence) -> np.ndarray:
    """Map a +/-1 valued sequence to symbols over {0, 1} (+1 -> 1)."""
    v = np.real(u.complex_values())
    s = (v > 0).astype(np.int64)
    if np.max(np.abs(np.abs(v) - 1.0)) > 1e-9:
        raise ValueError("sequence is not +/-1 valued")
    return s


def empirical_blocks(symbols, k: int, alphabet: int | None = None) -> BlockDistribution:
    """Sliding-window block frequencies of an integer symbol sequence."""
    s = np.asarray(symbols, dtype=np.int64)
    if s.ndim != 1 or s.size < k:
        raise ValueError("need a 1-D symbol sequence of length >= k")
    A = int(alphabet) if alphabet is not None else int(np.max(s)) + 1
    if np.min(s) < 0 or np.max(s) >= A:
        raise ValueError(f"symbols must lie in 0..{A - 1}")
    powers = A ** np.arange(k - 1, -1, -1, dtype=np.int64)
    windows = np.lib.stride_tricks.sliding_window_view(s, k)
    codes = windows @ powers
    counts = np.bincount(codes, minlength=A ** k).astype(np.float64)
    n = s.size - k + 1
    return BlockDistribution(A, k, counts / n, source="empirical", n_samples=n)


def bernoulli_blocks(p: float, k: int) -> BlockDistribution:
    """Product measure on binary blocks with P(symbol 1) = p."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    ones = block_digits(2, k).sum(axis=1)
    probs = p ** ones * (1.0 - p) ** (k - ones)
    return BlockDistribution(2, k, probs, source="exact")


@dataclass(frozen=True)
class TransportPlan:
    cost: float
    plan: np.ndarray
    method: str
    converged: bool
    iterations: int
    marginal_residual: float = field(default=0.0)

    def feasible(self) -> bool:
        tol = 1e-9 if self.method == "exact" else 1e-6
        return self.marginal_residual <= tol


def _northwest_corner(p: np.ndarray, q: np.ndarray) -> dict:
    """Initial basic feasible staircase with exactly m + n - 1 cells."""
    m, n = p.size, q.size
    s, d = p.copy(), q.copy()
    flow = {}
    i = j = 0
    while True:
        x = min(s[i], d[j])
        flow[(i, j)] = x
        s[i] -= x
        d[j] -= x
        if i == m - 1 and j == n - 1:
            break
        if s[i] <= 0.0 and i < m - 1:
            i += 1
        else:
            j += 1
    return flow


def _tree_duals(m: int, n: int, row_adj: list, col_adj: list,
                C: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    u = np.full(m, np.nan)
    v = np.full(n, np.nan)
    u[0] = 0.0
    stack = [(0, True)]
    while stack:
        node, is_row = stack.pop()
        if is_row:
            for j in row_adj[node]:
                if np.isnan(v[j]):
                    v[j] = C[node, j] - u[node]
                    stack.append((j, False))
        else:
            for i in col_adj[node]:
                if np.isnan(u[i]):
                    u[i] = C[i, node] - v[node]
                    stack.append((i, True))
    return u, v


def _tree_path(i0: int, j0: int, m: int, row_adj: list, col_adj: list) -> list:
    """Cells along the unique basis-tree path from row i0 to column j0."""
    parent = {("r", i0): None}
    stack = [("r", i0)]
    while stack:
        kind, node = stack.pop()
        if kind == "r":
            for j in row_adj[node]:
                if ("c", j) not in parent:
                    parent[("c", j)] = ("r", node)
                    stack.append(("c", j))
        else:
            for i in col_adj[node]:
                if ("r", i) not in parent:
                    parent[("r", i)] = ("c", node)
                    stack.append(("r", i))
    cells = []
    cur = ("c", j0)
    while parent[cur] is not None:
        prev = parent[cur]
        if cur[0] == "c":
            cells.append((prev[1], cur[1]))
        else:
            cells.append((cur[1], prev[1]))
        cur = prev
    cells.reverse()
    return cells


def _network_simplex(p: np.ndarray, q: np.ndarray, C: np.ndarray,
                     max_pivots: int = 200_000) -> tuple[np.ndarray, int]:
    """Exact transportation simplex, Bland entering rule, lowest-index ties."""
    m, n = p.size, q.size
    flow = _northwest_corner(p, q)
    row_adj = [set() for _ in range(m)]
    col_adj = [set() for _ in range(n)]
    for (i, j) in flow:
        row_adj[i].add(j)
        col_adj[j].add(i)
    pivots = 0
    while True:
        u, v = _tree_duals(m, n, row_adj, col_adj, C)
        red = C - u[:, None] - v[None, :]
        neg = red.ravel() < -1e-12
        if not neg.any():
            break
        if pivots >= max_pivots:
            raise RuntimeError("transportation simplex exceeded the pivot cap")
        enter = int(np.argmax(neg))
        i0, j0 = divmod(enter, n)
        path = _tree_path(i0, j0, m, row_adj, col_adj)
        cycle = [(i0, j0)] + path[::-1]
        theta = math.inf
        leave = None
        for pos in range(1, len(cycle), 2):
            cell = cycle[pos]
            f = flow[cell]
            key = cell[0] * n + cell[1]
            if f < theta - 1e-15 or (abs(f - theta) <= 1e-15 and
                                     (leave is None or key < leave[0] * n + leave[1])):
                theta, leave = f, cell
        flow[(i0, j0)] = 0.0
        row_adj[i0].add(j0)
        col_adj[j0].add(i0)
        for pos, cell in enumerate(cycle):
            sign = 1.0 if pos % 2 == 0 else -1.0
            flow[cell] = max(0.0, flow[cell] + sign * theta)
        del flow[leave]
        row_adj[leave[0]].discard(leave[1])
        col_adj[leave[1]].discard(leave[0])
        pivots += 1
    X = np.zeros((m, n))
    for (i, j), f in flow.items():
        X[i, j] = f
    return X, pivots


def _round_to_feasible(X: np.ndarray, p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Scale rows and columns down, then patch the deficit with a rank-1 term."""
    r = X.sum(axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        scale = np.where(r > 0, np.minimum(1.0, p / np.where(r > 0, r, 1.0)), 0.0)
    X = X * scale[:, None]
    c = X.sum(axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        scale = np.where(c > 0, np.minimum(1.0, q / np.where(c > 0, c, 1.0)), 0.0)
    X = X * scale[None, :]
    er = np.maximum(p - X.sum(axis=1), 0.0)
    ec = np.maximum(q - X.sum(axis=0), 0.0)
    s = er.sum()
    if s > 0:
        X = X + np.outer(er, ec) / s
    return X


def _sinkhorn(p: np.ndarray, q: np.ndarray, C: np.ndarray,
              eps_start: float = 0.1, eps_end: float = 1e-3,
              max_iter: int = 10_000) -> tuple[np.ndarray, bool, int]:
    """Log-domain Sinkhorn with geometric temperature annealing."""
    with np.errstate(divide="ignore"):
        logp = np.log(p)
        logq = np.log(q)
    stages = 8
    f = np.zeros(p.size)
    g = np.zeros(q.size)
    X = np.outer(p, q)
    total = 0
    converged = False
    for t in range(stages):
        eps = eps_start * (eps_end / eps_start) ** (t / (stages - 1))
        budget = max_iter // stages if t < stages - 1 else max_iter - total
        it = 0
        while it < budget:
            f = eps * (logp - logsumexp_rows((g[None, :] - C) / eps))
            f = np.where(np.isfinite(logp), f, -np.inf)
            g = eps * (logq - logsumexp_rows((f[None, :] - C.T) / eps))
            g = np.where(np.isfinite(logq), g, -np.inf)
            total += 1
            it += 1
            if it % 5 and it < budget:
                continue
            with np.errstate(invalid="ignore"):
                logX = (f[:, None] + g[None, :] - C) / eps
            logX = np.where(np.isneginf(f)[:, None] | np.isneginf(g)[None, :],
                            -np.inf, logX)
            X = np.exp(logX)
            res = max(float(np.max(np.abs(X.sum(axis=1) - p))),
                      float(np.max(np.abs(X.sum(axis=0) - q))))
            if res < 1e-8:
                converged = t == stages - 1
                break
        if converged:
            break
    return X, converged, total


def dbar_k(P: BlockDistribution, Q: BlockDistribution,
           method: str = "auto", max_iter: int = 10_000) -> TransportPlan:
    """Optimal transport cost between two block distributions.

    method 'auto' dispatches on instance size: exact network simplex up to
    512 blocks, annealed entropic regularization beyond that.
    """
    if P.alphabet != Q.alphabet or P.k != Q.k:
        raise ValueError("distributions must share alphabet and block length")
    size = P.size
    if size > MATRIX_LIMIT:
        raise ValueError(f"instance size {size} exceeds {MATRIX_LIMIT}")
    if method == "auto":
        method = "exact" if size <= EXACT_LIMIT else "entropic"
    C = hamming_cost(P.alphabet, P.k)
    p, q = P.probs, Q.probs
    if method == "exact":
        X, pivots = _network_simplex(p, q, C)
        res = max(float(np.max(np.abs(X.sum(axis=1) - p))),
                  float(np.max(np.abs(X.sum(axis=0) - q))))
        return TransportPlan(cost=float(np.sum(X * C)), plan=X, method="exact",
                             converged=True, iterations=pivots,
                             marginal_residual=res)
    if method != "entropic":
        raise ValueError(f"unknown method {method!r}")
    X, converged, iters = _sinkhorn(p, q, C, max_iter=max_iter)
    if not converged:
        raise RuntimeError("entropic solver did not converge within the cap")
    X = _round_to_feasible(X, p, q)
    res = max(float(np.max(np.abs(X.sum(axis=1) - p))),
              float(np.max(np.abs(X.sum(axis=0) - q))))
    return TransportPlan(cost=float(np.sum(X * C)), plan=X, method="entropic",
                         converged=converged, iterations=iters,
                         marginal_residual=res)


def dbar_curve(x_symbols, y_symbols, k_max: int,
               alphabet: int | None = None) -> np.ndarray:
    """dbar_k of the empirical block distributions for k = 1..k_max."""
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    xs = np.asarray(x_symbols, dtype=np.int64)
    ys = np.asarray(y_symbols, dtype=np.int64)
    A = int(alphabet) if alphabet is not None else int(max(xs.max(), ys.max())) + 1
    out = np.empty(k_max)
    for k in range(1, k_max + 1):
        P = empirical_blocks(xs, k, A)
        Q = empirical_blocks(ys, k, A)
        out[k - 1] = dbar_k(P, Q).cost
    return out


@dataclass(frozen=True)
class LscProbe:
    values: np.ndarray
    limit_value: float
    liminf_proxy: float
    ok: bool


def lsc_probe(family, limit: BlockDistribution, other: BlockDistribution) -> LscProbe:
    """Lower-semicontinuity check: cost at the limit vs a liminf proxy.

    The proxy is the smallest of the last three family values plus a 1e-6
    slack; ok means the limit's cost does not exceed it.
    """
    vals = np.array([dbar_k(Pm, other).cost for Pm in family])
    if vals.size < 1:
        raise ValueError("need at least one family member")
    lim = dbar_k(limit, other).cost
    proxy = float(np.min(vals[-3:])) + 1e-6
    return LscProbe(values=vals, limit_value=lim, liminf_proxy=proxy,
                    ok=lim <= proxy)


def random_distribution(alphabet: int, k: int, seed: int) -> BlockDistribution:
    """Dirichlet-flat random block distribution, reproducible by seed."""
    rng = make_rng(seed)
    w = rng.random(alphabet ** k) + 1e-12
    return BlockDistribution(alphabet, k, w / w.sum(), source="exact")
