"""Arc recursion: exact lifting geometry and certified approximation."""

from fractions import Fraction

import numpy as np
import pytest

from orthodyn.kronecker import (Arc, ArcSet, TestFunction, arc_lift, build,
                                enumerate_test_functions, full_circle,
                                kronecker_step, verify_star)

TestFunction.__test__ = False  # keep pytest from collecting the class


def exact_image_inside(p, k, sub, V):
    """Check p^k * sub lands inside V, all in rational arithmetic."""
    pk = p ** k
    delta = (sub.start * pk - V.start) % 1
    return delta + sub.length * pk <= V.length


def test_arc_basics():
    a = Arc(Fraction(5, 4), Fraction(1, 8))
    assert a.start == Fraction(1, 4)  # reduced mod 1
    assert a.end == Fraction(3, 8)
    assert a.midpoint == Fraction(5, 16)
    with pytest.raises(ValueError):
        Arc(Fraction(0), Fraction(0))
    with pytest.raises(ValueError):
        Arc(Fraction(0), Fraction(3, 2))


def test_arc_containment_wraps_around():
    outer = Arc(Fraction(7, 8), Fraction(1, 4))
    inner = Arc(Fraction(15, 16), Fraction(1, 8))
    assert outer.contains_arc(inner)
    assert outer.contains_point(Fraction(1, 16))
    assert not outer.contains_point(Fraction(1, 2))
    assert not inner.contains_arc(outer)


def test_arcset_validation():
    with pytest.raises(ValueError):
        ArcSet(1, (Arc(Fraction(0), Fraction(1, 8)),))  # wrong count
    with pytest.raises(ValueError):
        ArcSet(1, (Arc(Fraction(0), Fraction(1, 4)),
                   Arc(Fraction(1, 8), Fraction(1, 4))))  # overlap
    with pytest.raises(ValueError):
        ArcSet(1, (Arc(Fraction(1, 16), Fraction(1, 4)),
                   Arc(Fraction(7, 8), Fraction(1, 4))))  # wraps onto first
    ok = ArcSet(1, (Arc(Fraction(0), Fraction(1, 8)),
                    Arc(Fraction(1, 2), Fraction(1, 8))))
    assert ok.max_length == Fraction(1, 8)


def test_arc_lift_cover_exponent_and_geometry():
    U = Arc(Fraction(0), Fraction(998, 1000))
    V = Arc(Fraction(1, 3), Fraction(1, 10))
    k, pairs = arc_lift(2, [U], [V])
    assert k == 2  # 2 * 0.998 <= 2 < 4 * 0.998
    s0, s1 = pairs[0]
    assert s0.length == V.length / 4
    assert s1.length == V.length / 4
    for sub in (s0, s1):
        assert U.contains_arc(sub)
        assert exact_image_inside(2, k, sub, V)
    assert s1.start == s0.start + Fraction(1, 4)


def test_arc_lift_same_exponent_for_moderate_arc():
    U = Arc(Fraction(1, 5), Fraction(3, 5))
    V = Arc(Fraction(0), Fraction(1, 7))
    k, pairs = arc_lift(2, [U], [V])
    assert k == 2  # 2 * 0.6 <= 2 < 4 * 0.6
    for sub in pairs[0]:
        assert U.contains_arc(sub)
        assert exact_image_inside(2, k, sub, V)


def test_arc_lift_full_circle_target():
    U = full_circle().arcs[0]
    V = Arc(Fraction(0), Fraction(1))
    k, pairs = arc_lift(2, [U], [V])
    assert k == 2
    s0, s1 = pairs[0]
    assert s0.length == Fraction(1, 4)
    assert exact_image_inside(2, k, s0, V)
    assert exact_image_inside(2, k, s1, V)


def test_arc_lift_input_validation():
    U = Arc(Fraction(0), Fraction(1, 2))
    with pytest.raises(ValueError):
        arc_lift(2, [U], [])
    with pytest.raises(ValueError):
        arc_lift(2, [], [])


def test_enumeration_order_and_uniqueness():
    tfs = enumerate_test_functions(20)
    assert len(tfs) == 20
    assert tfs[0] == TestFunction(0)
    assert tfs[1] == TestFunction(-1)
    assert tfs[2] == TestFunction(0, ((-1, -1),))
    assert tfs[3] == TestFunction(0, ((-1, 0),))
    assert tfs[4] == TestFunction(0, ((-1, 1),))
    keys = {(t.w, t.coeffs) for t in tfs}
    assert len(keys) == 20
    heights = [t.height for t in tfs]
    assert heights == sorted(heights)
    with pytest.raises(ValueError):
        enumerate_test_functions(10 ** 6, max_height=2)
    with pytest.raises(ValueError):
        enumerate_test_functions(0)


def test_test_function_properties():
    f = TestFunction(1, ((Fraction(1, 2), 0), (0, 0)))
    assert f.degree == 1  # trailing zero pair trimmed
    assert f.height == 1 + 1 + 2
    g = TestFunction(2, ((Fraction(1, 2), Fraction(1, 4)),))
    assert g.lipschitz_phase == pytest.approx(2 + 2 * np.pi * 0.75)
    xs = np.linspace(0, 1, 50)
    np.testing.assert_allclose(np.abs(g.value(xs)), 1.0, atol=1e-12)
    # constant function: phase 0, value 1 everywhere
    const = TestFunction(0)
    np.testing.assert_allclose(const.value(xs), 1.0, atol=0)
    assert "w=2" in g.label() and "a1=1/2" in g.label()


def test_build_depth_five_binary():
    K, certs = build(2, 5)
    assert K.level == 5
    assert len(K.arcs) == 32
    assert len(certs) == 5
    for n, cert in enumerate(certs, start=1):
        assert cert.level == n
        assert cert.ok
        assert cert.worst + cert.slack < cert.bound
        assert cert.bound == pytest.approx(2.0 * 2.0 ** -n)
    for arc in K.arcs:
        assert arc.length <= Fraction(1, 2 ** 5)
        assert len(arc.word) == 5
        assert set(arc.word) <= {"0", "1"}
    # strict disjointness, including across the wrap point
    ordered = sorted(K.arcs, key=lambda a: a.start)
    for a, b in zip(ordered, ordered[1:]):
        assert a.end < b.start
    assert ordered[-1].end < ordered[0].start + 1


def test_build_matches_stepwise_recursion_and_nesting():
    depth = 4
    tests = enumerate_test_functions(depth)
    eps = [2.0 ** -n for n in range(1, depth + 1)]
    K, certs = build(2, depth)
    levels = [full_circle()]
    for n in range(depth):
        K_next, k_n = kronecker_step(2, levels[-1], tests[n], eps[n])
        levels.append(K_next)
        assert k_n == certs[n].k
    assert levels[-1].arcs == K.arcs
    # every child sits inside the parent addressed by its word prefix
    for n in range(1, depth + 1):
        parents = {a.word: a for a in levels[n - 1].arcs}
        for child in levels[n].arcs:
            assert parents[child.word[:-1]].contains_arc(child)


def test_build_depth_three_ternary():
    K, certs = build(3, 3)
    assert len(K.arcs) == 8
    assert all(c.ok for c in certs)
    assert [c.k for c in certs] == sorted(c.k for c in certs)


def test_certificate_rejects_misaligned_arcs():
    # shifting by 1/4 fixes e(2 pi i 2^k x) for k >= 2 but rotates the
    # degree-one test function a quarter turn, so the gap jumps to ~sqrt(2)
    K, certs = build(2, 2)
    tests = enumerate_test_functions(2)
    assert certs[1].k >= 2
    shifted = ArcSet(K.level, tuple(Arc((a.start + Fraction(1, 4)) % 1,
                                        a.length, a.word)
                                    for a in K.arcs))
    cert = verify_star(2, shifted, tests[1], certs[1].k, 0.25)
    assert not cert.ok
    assert cert.worst > cert.bound


def test_sparse_sampling_makes_certificate_fail_honestly():
    _, certs = build(2, 1, samples_per_arc=1)
    assert not certs[0].ok
    _, certs_ok = build(2, 1)
    assert certs_ok[0].ok


def test_step_validates_eps():
    K0 = full_circle()
    f = TestFunction(0)
    with pytest.raises(ValueError):
        kronecker_step(2, K0, f, 0.0)
    with pytest.raises(ValueError):
        kronecker_step(2, K0, f, 1.5)
    with pytest.raises(ValueError):
        kronecker_step(2, K0, f, 1e-16)  # below the rational grid


def test_build_validates_inputs():
    with pytest.raises(ValueError):
        build(4, 2)
    with pytest.raises(ValueError):
        build(1, 2)
    with pytest.raises(ValueError):
        build(2, -1)
    with pytest.raises(ValueError):
        build(2, 3, tests=enumerate_test_functions(2))
    with pytest.raises(ValueError):
        build(2, 3, eps_schedule=[0.5, 0.25])
    K, certs = build(2, 0)
    assert K.level == 0 and certs == []
