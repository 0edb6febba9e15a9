"""Iwasawa, polar and hyperbolic decompositions of Sl(n) and the Gl(n) split."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cartan_spectra.lie_core import (
    DecompositionError,
    GroupElement,
    exp_diag,
    hyperbolic_log,
    iwasawa,
    iwasawa_a,
    polar,
)

LN2 = np.log(2.0)


def _random_sl(rng, n):
    g = rng.uniform(-2, 2, (n, n))
    if np.linalg.det(g) < 0:
        g[:, 0] *= -1
    return g / abs(np.linalg.det(g)) ** (1 / n)


def _rotation(theta):
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def test_iwasawa_identity():
    t = iwasawa(np.eye(3))
    assert np.allclose(t.k_factor, np.eye(3))
    assert np.allclose(t.a_log, 0)
    assert np.array_equal(t.n_factor, np.eye(3))


def test_iwasawa_diagonal():
    t = iwasawa([[2.0, 0.0], [0.0, 0.5]])
    assert np.allclose(t.k_factor, np.eye(2))
    assert np.allclose(t.a_log, [LN2, -LN2], atol=1e-15)
    assert np.allclose(t.n_factor, np.eye(2))


def test_iwasawa_gram_schmidt_oracle():
    # hand Gram-Schmidt on the columns (1, 1) and (0, 1)
    t = iwasawa([[1.0, 0.0], [1.0, 1.0]])
    r = 1 / np.sqrt(2)
    assert np.allclose(t.k_factor, [[r, -r], [r, r]], atol=1e-14)
    assert np.allclose(t.a_log, [0.5 * LN2, -0.5 * LN2], atol=1e-14)
    assert np.allclose(t.n_factor, [[1.0, 0.5], [0.0, 1.0]], atol=1e-14)


def test_iwasawa_factor_shapes():
    rng = np.random.default_rng(0)
    t = iwasawa(_random_sl(rng, 4))
    assert np.allclose(t.k_factor.T @ t.k_factor, np.eye(4), atol=1e-12)
    assert np.array_equal(np.diagonal(t.n_factor), np.ones(4))
    assert np.array_equal(np.tril(t.n_factor, -1), np.zeros((4, 4)))


def test_iwasawa_a_of_k_and_n_elements():
    assert np.allclose(iwasawa_a(_rotation(0.7)), 0, atol=1e-15)
    assert np.allclose(iwasawa_a([[1.0, 5.0], [0.0, 1.0]]), 0, atol=1e-15)


def test_iwasawa_a_right_parabolic_shift():
    rng = np.random.default_rng(1)
    g = _random_sl(rng, 3)
    m = np.diag([1.0, -1.0, -1.0])
    n = np.eye(3) + np.triu(rng.standard_normal((3, 3)), 1)
    p = m @ exp_diag([1.0, 0.0, -1.0]) @ n
    assert np.allclose(iwasawa_a(g @ p), iwasawa_a(g) + [1.0, 0.0, -1.0], atol=1e-12)


@pytest.mark.parametrize("bad", [np.zeros((3, 3)), np.array([[1.0, np.nan], [0.0, 1.0]]), np.ones((2, 3))])
def test_iwasawa_rejects_bad_input(bad):
    with pytest.raises(DecompositionError):
        iwasawa(bad)


def test_polar_examples():
    assert np.allclose(polar(np.diag([2.0, 0.5])).a_plus_log, [LN2, -LN2])
    assert np.allclose(polar(_rotation(1.1)).a_plus_log, 0, atol=1e-15)
    phi = (1 + np.sqrt(5)) / 2
    assert np.allclose(polar([[1.0, 1.0], [0.0, 1.0]]).a_plus_log, [np.log(phi), -np.log(phi)], atol=1e-14)


def test_polar_sign_rule_and_order():
    rng = np.random.default_rng(2)
    for _ in range(20):
        p = polar(_random_sl(rng, 4))
        assert np.all(np.diff(p.a_plus_log) <= 0)
        for row in p.v_factor:
            lead = row[np.abs(row) > 1e-12][0]
            assert lead > 0


def test_polar_rejects_nonfinite():
    with pytest.raises(DecompositionError):
        polar([[np.inf, 0.0], [0.0, 1.0]])


def test_hyperbolic_log_examples():
    assert np.allclose(hyperbolic_log([[2.0, 1.0], [0.0, 0.5]]), [LN2, -LN2])
    assert np.allclose(hyperbolic_log(_rotation(0.3)), 0, atol=1e-15)
    assert np.allclose(hyperbolic_log([[1.0, 1.0], [0.0, 1.0]]), 0, atol=1e-15)


def test_hyperbolic_log_complex_pair_counts_twice():
    g = np.zeros((3, 3))
    g[:2, :2] = 2.0 * _rotation(0.4)
    g[2, 2] = 0.25
    assert np.allclose(hyperbolic_log(g), [LN2, LN2, -2 * LN2])


def test_hyperbolic_log_powers():
    rng = np.random.default_rng(3)
    for _ in range(10):
        g = _random_sl(rng, 3)
        h = hyperbolic_log(g)
        for k in range(1, 6):
            assert np.allclose(hyperbolic_log(np.linalg.matrix_power(g, k)), k * h, atol=1e-8)


def test_son_elements_have_zero_projections():
    rng = np.random.default_rng(4)
    q, _ = np.linalg.qr(rng.standard_normal((4, 4)))
    if np.linalg.det(q) < 0:
        q[:, 0] *= -1
    assert np.allclose(iwasawa_a(q), 0, atol=1e-14)
    assert np.allclose(polar(q).a_plus_log, 0, atol=1e-14)


def test_sl_constructor_checks_determinant():
    GroupElement.sl(np.diag([2.0, 0.5]))
    with pytest.raises(DecompositionError):
        GroupElement.sl(np.diag([2.0, 1.0]))


def test_gl_split_central_and_sign():
    m = np.diag([4.0, 1.0, -2.0])
    g = GroupElement.gl(m)
    assert g.central_log == pytest.approx(np.log(8.0) / 3)
    assert g.column_flipped
    assert np.linalg.det(g.entries) == pytest.approx(1.0)
    assert np.allclose(g.matrix(), m)
    # the flip is an M element: the Cartan projection of the Sl part is unchanged by it
    assert np.allclose(iwasawa_a(g.entries), iwasawa_a(np.abs(m) / 2.0))


def test_group_element_is_read_only():
    g = GroupElement.sl(np.eye(2))
    with pytest.raises(ValueError):
        g.entries[0, 0] = 2.0


_entries = st.lists(st.floats(-2, 2, allow_nan=False), min_size=9, max_size=9)


def _to_sl(values):
    g = np.array(values).reshape(3, 3)
    det = np.linalg.det(g)
    if abs(det) < 1e-3:
        return None
    if det < 0:
        g[:, 0] *= -1
    return g / abs(det) ** (1 / 3)


@settings(max_examples=200, deadline=None)
@given(_entries)
def test_roundtrips_property(values):
    g = _to_sl(values)
    if g is None:
        return
    assert np.max(np.abs(iwasawa(g).reconstruct() - g)) <= 1e-10
    assert np.max(np.abs(polar(g).reconstruct() - g)) <= 1e-10


@settings(max_examples=200, deadline=None)
@given(_entries, st.lists(st.floats(-1, 1), min_size=2, max_size=2), st.integers(0, 3))
def test_additivity_property(values, a, sign_pattern):
    g = _to_sl(values)
    if g is None:
        return
    signs = [[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]][sign_pattern]
    h = np.array([a[0], a[1], -a[0] - a[1]])
    p = np.diag(signs) @ exp_diag(h) @ (np.eye(3) + np.triu(np.array(values).reshape(3, 3), 1))
    assert np.allclose(iwasawa_a(g @ p), iwasawa_a(g) + iwasawa_a(p), atol=1e-10)


def test_uniqueness_probe():
    rng = np.random.default_rng(5)
    for _ in range(50):
        k, r = np.linalg.qr(rng.standard_normal((3, 3)))
        k = k * np.sign(np.diagonal(r))
        a = rng.uniform(-1, 1, 3)
        n = np.eye(3) + np.triu(rng.uniform(-1, 1, (3, 3)), 1)
        t = iwasawa(k @ exp_diag(a) @ n)
        assert np.allclose(t.k_factor, k, atol=1e-10)
        assert np.allclose(t.a_log, a, atol=1e-10)
        assert np.allclose(t.n_factor, n, atol=1e-10)


def test_polar_inverse_symmetry():
    rng = np.random.default_rng(6)
    for _ in range(50):
        g = _random_sl(rng, 4)
        a = polar(g).a_plus_log
        assert np.allclose(polar(np.linalg.inv(g)).a_plus_log, -a[::-1], atol=1e-10)
