"""Weyl groups of types A and C, chambers, Theta subsets and cones."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cartan_spectra.root_system import (
    WeylElement,
    chamber_locate,
    cone_contains,
    coset_equal,
    coset_representatives,
    dual_theta,
    enumerate_weyl,
    in_closed_chamber,
    lambda_k,
    longest_element,
    stabilizer_subgroup,
    theta_of,
    type_a,
    type_c,
    weyl_act,
)

A2 = type_a(3)
C2 = type_c(2)


def w_(text, n=3):
    return WeylElement.from_cycles(text, n)


def test_root_counts():
    assert len(A2.positive_roots) == 3 and A2.rank == 2
    a3 = type_a(4)
    assert len(a3.positive_roots) == 6 and a3.rank == 3
    assert len(C2.positive_roots) == 4 and C2.rank == 2
    assert set(C2.positive_roots) == {(1, -1), (1, 1), (2, 0), (0, 2)}


@pytest.mark.parametrize("rs, size", [(type_a(2), 2), (A2, 6), (C2, 8), (type_a(4), 24), (type_c(3), 48)])
def test_enumerate_weyl_sizes(rs, size):
    ws = enumerate_weyl(rs)
    assert len(ws) == size == len(set(ws))
    assert ws[0].is_identity()
    assert longest_element(rs) in ws


def test_enumerate_weyl_overflow():
    with pytest.raises(OverflowError):
        enumerate_weyl(type_a(11))


def test_group_axioms_a3():
    ws = enumerate_weyl(type_a(4))
    e = ws[0]
    rng = np.random.default_rng(0)
    for _ in range(50):
        a, b, c = (ws[i] for i in rng.integers(len(ws), size=3))
        assert (a * b) * c == a * (b * c)
        assert a * a.inverse() == e and a.inverse() * a == e
        assert a * e == a
        h = rng.standard_normal(4)
        assert np.allclose((a * b).act(h), a.act(b.act(h)))


def test_weyl_act_examples():
    h = np.array([1.0, 0.0, -1.0])
    assert np.array_equal(weyl_act(WeylElement.identity(3), h), h)
    assert np.array_equal(weyl_act(w_("(13)"), h), [-1.0, 0.0, 1.0])
    out = weyl_act(longest_element(A2), [2.0, 0.0, -2.0])
    assert np.array_equal(out, [-2.0, 0.0, 2.0])
    # w0 sends the positive chamber to its negative
    assert np.all(A2.simple_matrix @ out < 0)


def test_weyl_act_rank_mismatch():
    with pytest.raises(ValueError):
        weyl_act(w_("(12)"), [1.0, -1.0])


def test_longest_element_type_c_is_minus_identity():
    assert np.array_equal(longest_element(C2).matrix(), -np.eye(2))


def test_chamber_locate_examples():
    assert chamber_locate(A2, [5.0, 1.0, -6.0]) == (WeylElement.identity(3), frozenset())
    assert chamber_locate(A2, [-6.0, 1.0, 5.0]) == (longest_element(A2), frozenset())
    assert chamber_locate(A2, [1.0, 1.0, -2.0]) == (WeylElement.identity(3), frozenset({1}))


def test_chamber_locate_wall_tie_break():
    # (1, -2, 1) sits on a wall; both (23) and (23)(12) sort it, the earlier one wins
    w, walls = chamber_locate(A2, [1.0, -2.0, 1.0])
    assert walls == frozenset({1})
    valid = [u for u in A2.weyl if np.allclose(u.inverse().act([1.0, -2.0, 1.0]), [1.0, 1.0, -2.0])]
    assert w == min(valid, key=WeylElement.sort_key)


def test_theta_of_examples():
    assert theta_of(A2, [1.0, 0.0, -1.0]) == frozenset()
    assert theta_of(A2, [1.0, 1.0, -2.0]) == frozenset({1})
    assert theta_of(A2, [0.0, 0.0, 0.0]) == frozenset({1, 2})
    with pytest.raises(ValueError):
        theta_of(A2, [-1.0, 0.0, 1.0])


def test_stabilizer_examples():
    assert stabilizer_subgroup(A2, frozenset()) == [WeylElement.identity(3)]
    assert stabilizer_subgroup(A2, {1}) == [WeylElement.identity(3), w_("(12)")]
    assert set(stabilizer_subgroup(A2, {1, 2})) == set(A2.weyl)
    assert len(stabilizer_subgroup(C2, {2})) == 2


@pytest.mark.parametrize("rs", [A2, type_a(4), C2])
def test_stabilizer_equals_fixer(rs):
    rng = np.random.default_rng(1)
    for theta in itertools.chain.from_iterable(
            itertools.combinations(sorted(rs.all_simple()), k) for k in range(rs.rank + 1)):
        # build H in cl a+ with exactly these walls
        coeff = rng.uniform(0.5, 2.0, rs.rank)
        coeff[[i - 1 for i in theta]] = 0.0
        h = np.linalg.lstsq(rs.simple_matrix, coeff, rcond=None)[0]
        assert theta_of(rs, h, 1e-9) == frozenset(theta)
        fixers = {w for w in rs.weyl if np.allclose(w.act(h), h, atol=1e-12)}
        assert fixers == set(stabilizer_subgroup(rs, theta))


def test_coset_equal_examples():
    assert coset_equal(A2, {1}, w_("(23)"), w_("(123)"))
    assert coset_equal(A2, {2}, w_("(12)"), w_("(132)"))
    for w in A2.weyl:
        assert coset_equal(A2, set(), w, w)
        for u in A2.weyl:
            if u != w:
                assert not coset_equal(A2, set(), w, u)


def test_coset_representatives_count():
    assert len(coset_representatives(A2, set())) == 6
    assert len(coset_representatives(A2, {1})) == 3
    assert len(coset_representatives(A2, {1, 2})) == 1


def test_cone_contains_examples():
    assert cone_contains(A2, set(), [2.0, 0.0, -2.0], 0.0)
    assert cone_contains(A2, {1}, [1.0, 1.0, -2.0], 0.0)
    assert not cone_contains(A2, {1}, [1.0, -2.0, 1.0], 0.0)


def test_cone_dichotomy():
    rng = np.random.default_rng(2)
    theta = {1}
    for _ in range(20):
        w1, w2 = (A2.weyl[i] for i in rng.integers(6, size=2))
        probes = [rng.standard_normal(3) for _ in range(50)]
        probes = [p - p.mean() for p in probes]
        a = [cone_contains(A2, theta, w1.inverse().act(p)) for p in probes]
        b = [cone_contains(A2, theta, w2.inverse().act(p)) for p in probes]
        # the cones w int(W_Theta cl a+) are indexed by left cosets w W_Theta
        if coset_equal(A2, theta, w1.inverse(), w2.inverse()):
            assert a == b
        else:
            assert not any(x and y for x, y in zip(a, b))


def test_lambda_k_examples():
    ln2 = np.log(2.0)
    assert lambda_k([ln2, 0.0, -ln2], 1) == ln2
    assert lambda_k([0.3, 0.5, -0.8], 3) == pytest.approx(0.0, abs=1e-15)
    assert lambda_k([1.0, 1.0, -2.0], 2) == 2.0
    with pytest.raises(ValueError):
        lambda_k([1.0, -1.0], 3)


def test_lambda_k_linear():
    h, g = np.array([1.0, 0.5, -1.5]), np.array([0.25, -2.0, 1.75])
    assert lambda_k(2 * h + 3 * g, 2) == 2 * lambda_k(h, 2) + 3 * lambda_k(g, 2)


def test_dual_theta():
    assert dual_theta(A2, {1}) == frozenset({2})
    assert dual_theta(A2, set()) == frozenset()
    for theta in [set(), {1}, {2}, {1, 2}]:
        assert dual_theta(C2, theta) == frozenset(theta)


def test_lengths_a2():
    assert sorted(A2.length(w) for w in A2.weyl) == [0, 1, 1, 2, 2, 3]
    assert A2.length(longest_element(A2)) == 3


def test_cycle_labels_roundtrip():
    for w in type_a(4).weyl:
        assert WeylElement.from_cycles(w.cycles(), 4) == w


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(-5, 5, allow_nan=False), min_size=3, max_size=3))
def test_chamber_locate_sorts(values):
    h = np.array(values)
    h = h - h.mean()
    w, walls = chamber_locate(A2, h)
    assert in_closed_chamber(A2, w.inverse().act(h), 1e-6)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(-5, 5, allow_nan=False), min_size=2, max_size=2))
def test_chamber_locate_type_c(values):
    h = np.array(values)
    w, _ = chamber_locate(C2, h)
    assert in_closed_chamber(C2, w.inverse().act(h), 1e-6)


def test_orbit_sizes():
    regular = np.array([2.0, 0.5, -2.5])
    assert len({tuple(w.act(regular)) for w in A2.weyl}) == 6
    wall = np.array([1.0, 1.0, -2.0])
    assert len({tuple(w.act(wall)) for w in A2.weyl}) == 3
