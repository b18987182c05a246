import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from sveirc.linalg import (
    charpoly,
    cubic_roots,
    eigenvalues,
    is_irreducible,
    is_metzler,
    spectral_radius,
    stability_modulus,
)


def _sorted(z):
    z = np.asarray(z, dtype=complex)
    return z[np.lexsort((z.imag, z.real))]


@pytest.mark.parametrize("dim", [1, 2, 3, 4, 5])
def test_eigenvalues_match_lapack(dim):
    rng = np.random.default_rng(dim)
    for _ in range(200):
        M = rng.normal(size=(dim, dim)) * 10.0 ** rng.uniform(-3, 3)
        ours = _sorted(eigenvalues(M))
        ref = _sorted(np.linalg.eigvals(M))
        scale = max(np.max(np.abs(ref)), 1e-300)
        assert np.max(np.abs(ours - ref)) / scale < 1e-8


@settings(max_examples=200)
@given(arrays(float, (3, 3), elements=st.floats(-100, 100)))
def test_stability_modulus_matches_lapack(M):
    ref = np.max(np.linalg.eigvals(M).real)
    scale = max(np.max(np.abs(M)), 1.0)
    assert abs(stability_modulus(M) - ref) < 1e-7 * scale


def test_diagonal_examples():
    assert stability_modulus(np.diag([-1.0, -2.0])) == -1.0
    assert stability_modulus(np.zeros((3, 3))) == 0.0


def test_charpoly_of_companion():
    # companion of (x-1)(x-2)(x-3) = x^3 - 6x^2 + 11x - 6
    M = np.array([[0.0, 0.0, 6.0], [1.0, 0.0, -11.0], [0.0, 1.0, 6.0]])
    np.testing.assert_allclose(charpoly(M), [1.0, -6.0, 11.0, -6.0], atol=1e-12)


def test_cubic_complex_pair():
    # (x + 1)(x^2 + 1)
    roots = _sorted(cubic_roots(1.0, 1.0, 1.0))
    np.testing.assert_allclose(roots, _sorted([-1.0, 1j, -1j]), atol=1e-14)


def test_spectral_radius_nonnegative():
    rng = np.random.default_rng(3)
    for _ in range(100):
        M = rng.uniform(0.0, 5.0, size=(3, 3))
        assert spectral_radius(M) == pytest.approx(np.max(np.abs(np.linalg.eigvals(M))), rel=1e-12)


def test_metzler_irreducible():
    Z = np.zeros((3, 3))
    assert is_metzler(Z)
    assert not is_irreducible(Z)
    M = np.array([[-1.0, -0.1], [1.0, -1.0]])
    assert not is_metzler(M)
    cycle = np.array([[-1.0, 0.0, 1.0], [1.0, -1.0, 0.0], [0.0, 1.0, -1.0]])
    assert is_metzler(cycle) and is_irreducible(cycle)
    chain = np.array([[-1.0, 0.0, 0.0], [1.0, -1.0, 0.0], [0.0, 1.0, -1.0]])
    assert not is_irreducible(chain)


@pytest.mark.parametrize("sign", [1.0, -1.0])
def test_tiny_entries_next_to_unit_entries(sign):
    t = sign * 2.69562244e-295
    M = np.array([[t, t, 1.0], [1.0, t, t], [t, t, t]])
    ref = _sorted(np.linalg.eigvals(M))
    np.testing.assert_allclose(_sorted(eigenvalues(M)), ref, atol=1e-12)


def test_cubic_roots_near_degenerate():
    rng = np.random.default_rng(11)
    for _ in range(2000):
        roots = rng.normal(size=3) * 10.0 ** rng.integers(-8, 3)
        roots[1] = roots[0] * (1 + 10.0 ** rng.uniform(-12, -2))
        a, b, c = np.poly(roots)[1:]
        got = np.sort(np.array(cubic_roots(a, b, c)).real)
        np.testing.assert_allclose(got, np.sort(roots), atol=1e-5 * np.max(np.abs(roots)))
