"""Transport distance solver against LP and tree-enumeration oracles."""

import math

import numpy as np
import pytest

from orthodyn.dbar import (BlockDistribution, bernoulli_blocks, block_digits,
                           block_string, dbar_curve, dbar_k, empirical_blocks,
                           hamming_cost, lsc_probe, random_distribution,
                           sign_symbols)
from orthodyn.sequences import phase_sequence, random_signs


def lp_cost(p_probs, q_probs, C):
    """Independent LP oracle via scipy's HiGHS simplex."""
    from scipy.optimize import linprog
    m, n = len(p_probs), len(q_probs)
    A_eq = []
    b_eq = []
    for i in range(m):
        row = np.zeros((m, n))
        row[i, :] = 1.0
        A_eq.append(row.ravel())
        b_eq.append(p_probs[i])
    for j in range(n - 1):  # drop one dependent constraint
        col = np.zeros((m, n))
        col[:, j] = 1.0
        A_eq.append(col.ravel())
        b_eq.append(q_probs[j])
    res = linprog(C.ravel(), A_eq=np.array(A_eq), b_eq=np.array(b_eq),
                  bounds=(0, None), method="highs")
    assert res.success
    return res.fun


def tree_enumeration_cost(p_probs, q_probs, C):
    """Exact optimum by enumerating every basic solution of the transport
    polytope: each vertex is the flow of a spanning tree of K_{m,n}."""
    import networkx as nx
    m, n = len(p_probs), len(q_probs)
    G = nx.complete_bipartite_graph(m, n)
    best = math.inf
    for T in nx.SpanningTreeIterator(G):
        rem = list(p_probs) + list(q_probs)
        T2 = nx.Graph()
        T2.add_edges_from(T.edges)
        cost = 0.0
        feasible = True
        while T2.number_of_nodes() > 1:
            leaf = next(v for v in T2.nodes if T2.degree(v) == 1)
            nbr = next(iter(T2.neighbors(leaf)))
            f = rem[leaf]
            if f < -1e-12:
                feasible = False
                break
            i, j = (leaf, nbr - m) if leaf < m else (nbr, leaf - m)
            cost += f * C[i, j]
            rem[nbr] -= f
            T2.remove_node(leaf)
        if feasible:
            best = min(best, cost)
    return best


def test_bernoulli_gap_is_exact():
    for k in range(1, 6):
        P = bernoulli_blocks(0.3, k)
        Q = bernoulli_blocks(0.5, k)
        plan = dbar_k(P, Q, method="exact")
        assert abs(plan.cost - 0.2) <= 1e-12, f"k={k}"
        assert plan.feasible()


def test_identical_distributions_cost_zero():
    P = bernoulli_blocks(0.37, 3)
    plan = dbar_k(P, P, method="exact")
    assert plan.cost <= 1e-15


def test_exact_solver_matches_linprog_oracle():
    for seed in range(12):
        for alphabet, k in ((2, 1), (2, 2), (2, 3), (3, 1), (4, 1), (3, 2)):
            if alphabet ** k > 16:
                continue
            P = random_distribution(alphabet, k, seed)
            Q = random_distribution(alphabet, k, seed + 1000)
            C = hamming_cost(alphabet, k)
            plan = dbar_k(P, Q, method="exact")
            want = lp_cost(P.probs, Q.probs, C)
            assert abs(plan.cost - want) <= 1e-9, (alphabet, k, seed)


def test_exact_solver_matches_tree_enumeration():
    for seed in (0, 1, 2):
        for alphabet, k in ((2, 1), (3, 1), (2, 2)):
            P = random_distribution(alphabet, k, seed)
            Q = random_distribution(alphabet, k, seed + 500)
            C = hamming_cost(alphabet, k)
            plan = dbar_k(P, Q, method="exact")
            want = tree_enumeration_cost(P.probs, Q.probs, C)
            assert abs(plan.cost - want) <= 1e-9, (alphabet, k, seed)


def test_metric_axioms_on_seeded_triples():
    for seed in range(20):
        P = random_distribution(2, 2, seed)
        Q = random_distribution(2, 2, seed + 100)
        R = random_distribution(2, 2, seed + 200)
        dpq = dbar_k(P, Q, method="exact").cost
        dqp = dbar_k(Q, P, method="exact").cost
        dqr = dbar_k(Q, R, method="exact").cost
        dpr = dbar_k(P, R, method="exact").cost
        assert abs(dpq - dqp) <= 1e-9
        assert dpr <= dpq + dqr + 1e-6


def test_entropic_agrees_with_exact():
    P = bernoulli_blocks(0.3, 3)
    Q = bernoulli_blocks(0.5, 3)
    plan = dbar_k(P, Q, method="entropic")
    assert plan.converged
    assert plan.feasible()
    assert abs(plan.cost - 0.2) <= 0.01


def test_entropic_plan_marginals_are_exact():
    P = random_distribution(2, 3, 7)
    Q = random_distribution(2, 3, 8)
    plan = dbar_k(P, Q, method="entropic")
    np.testing.assert_allclose(plan.plan.sum(axis=1), P.probs, atol=1e-9)
    np.testing.assert_allclose(plan.plan.sum(axis=0), Q.probs, atol=1e-9)
    exact = dbar_k(P, Q, method="exact")
    assert plan.cost >= exact.cost - 1e-9  # rounding keeps it feasible
    assert plan.cost - exact.cost <= 0.02


def iid_blocks(weights, k):
    """Product distribution of one i.i.d. letter law over k positions."""
    w = np.asarray(weights, dtype=np.float64)
    probs = np.array([1.0])
    for _ in range(k):
        probs = np.kron(probs, w)
    return BlockDistribution(len(w), k, probs, source="exact")


def test_auto_routes_by_size():
    P = bernoulli_blocks(0.2, 3)
    Q = bernoulli_blocks(0.4, 3)
    assert dbar_k(P, Q).method == "exact"
    # 729 states > exact limit; transport between i.i.d. product laws under
    # normalized Hamming cost factorizes, so the optimum is the letter TV.
    P6 = iid_blocks([0.2, 0.3, 0.5], 6)
    Q6 = iid_blocks([0.4, 0.3, 0.3], 6)
    plan = dbar_k(P6, Q6)
    assert plan.method == "entropic"
    assert plan.feasible()
    assert abs(plan.cost - 0.2) <= 0.01


def test_block_encoding_msb_first():
    assert block_string(0, 2, 3) == "000"
    assert block_string(5, 2, 3) == "101"
    assert block_string(7, 3, 2) == "21"
    D = block_digits(2, 3)
    np.testing.assert_array_equal(D[5], [1, 0, 1])
    C = hamming_cost(2, 1)
    np.testing.assert_allclose(C, [[0, 1], [1, 0]])
    C3 = hamming_cost(2, 3)
    assert C3[0b101, 0b100] == pytest.approx(1 / 3)
    assert C3[0, 7] == pytest.approx(1.0)


def test_empirical_blocks_match_manual_count():
    symbols = np.array([0, 1, 1, 0, 1, 0, 0, 1, 1, 1])
    P = empirical_blocks(symbols, 2)
    counts = np.zeros(4)
    for i in range(9):
        counts[2 * symbols[i] + symbols[i + 1]] += 1
    np.testing.assert_allclose(P.probs, counts / 9, atol=1e-15)
    assert P.source == "empirical"
    assert P.n_samples == 9


def test_sign_symbols_conversion():
    u = random_signs(50, seed=1)
    s = sign_symbols(u)
    assert set(np.unique(s)) <= {0, 1}
    np.testing.assert_array_equal(s == 1, u.values == 1)
    with pytest.raises(ValueError):
        sign_symbols(phase_sequence([0.0, 0.3], 50))


def test_dbar_curve_same_sequence_is_zero():
    x = sign_symbols(random_signs(4000, seed=3))
    costs = dbar_curve(x, x, 3)
    assert max(costs) <= 1e-12


def test_dbar_curve_separates_biased_processes():
    rng_a = np.random.default_rng(1)
    rng_b = np.random.default_rng(2)
    a = (rng_a.random(200_000) < 0.3).astype(np.int64)
    b = (rng_b.random(200_000) < 0.5).astype(np.int64)
    costs = dbar_curve(a, b, 3)
    for c in costs:
        assert abs(c - 0.2) <= 0.01


def test_bernoulli_blocks_are_shift_stationary():
    P = bernoulli_blocks(0.3, 4)
    assert P.shift_residual <= 1e-12
    assert P.stationarity_ok
    assert abs(P.probs.sum() - 1.0) <= 1e-12


def test_distribution_validation():
    with pytest.raises(ValueError):
        BlockDistribution(2, 2, np.array([0.5, 0.5, 0.5, 0.5]))  # sums to 2
    with pytest.raises(ValueError):
        BlockDistribution(1, 1, np.array([1.0]))  # alphabet too small
    P = bernoulli_blocks(0.3, 2)
    Q = bernoulli_blocks(0.5, 3)
    with pytest.raises(ValueError):
        dbar_k(P, Q)  # mismatched k
    R = BlockDistribution(3, 2, np.ones(9) / 9)
    with pytest.raises(ValueError):
        dbar_k(P, R)  # mismatched alphabet


def test_lsc_probe_converged_family_passes():
    """A family converging fast to the limit shows liminf >= limit value."""
    target = bernoulli_blocks(0.5, 2)
    other = bernoulli_blocks(0.1, 2)
    family = [bernoulli_blocks(0.5 - 0.1 * 0.5 ** m, 2) for m in range(20)]
    probe = lsc_probe(family, target, other)
    assert probe.ok
    assert abs(probe.limit_value - 0.4) <= 1e-9


def test_lsc_probe_reports_honest_failure_when_family_is_shallow():
    """A slowly converging family undershoots the limit and the probe says
    so instead of papering over it."""
    target = bernoulli_blocks(0.5, 2)
    other = bernoulli_blocks(0.1, 2)
    family = [bernoulli_blocks(0.3 + 0.02 * m, 2) for m in range(5)]
    probe = lsc_probe(family, target, other)
    assert not probe.ok


def test_random_distribution_reproducible():
    a = random_distribution(3, 2, 5)
    b = random_distribution(3, 2, 5)
    np.testing.assert_array_equal(a.probs, b.probs)
    assert abs(a.probs.sum() - 1.0) <= 1e-9
