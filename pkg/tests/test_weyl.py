import itertools

import numpy as np
import pytest

from fef.errors import DimensionMismatch, DimensionTooSmall
from fef.weyl import (
    bell_basis,
    expand_in_basis,
    gellmann_generators,
    operator_basis,
    psi_plus,
    reconstruct,
)

from conftest import random_unitary

DIMS = [2, 3, 4, 5]


def test_d2_is_pauli():
    b = operator_basis(2)
    assert b.omega == pytest.approx(-1)
    np.testing.assert_array_equal(b.unit(0, 0), np.eye(2))
    np.testing.assert_array_equal(b.unit(0, 1), [[0, 1], [1, 0]])
    np.testing.assert_allclose(b.unit(1, 0), np.diag([1, -1]), atol=1e-16)
    np.testing.assert_allclose(b.unit(1, 1), b.shift @ b.clock, atol=1e-16)
    assert np.trace(b.unit(0, 1)) == 0
    assert np.trace(b.unit(0, 0)) == 2


@pytest.mark.parametrize("d", DIMS)
def test_shift_and_clock_act_exactly(d):
    b = operator_basis(d)
    for j in range(d):
        e = np.zeros(d)
        e[j] = 1
        expected = np.zeros(d)
        expected[(j + 1) % d] = 1
        np.testing.assert_array_equal(b.shift @ e, expected)
        assert (b.clock @ e)[j] == np.exp(-2j * np.pi * j / d)


@pytest.mark.parametrize("d", DIMS)
def test_units_are_products_of_powers(d):
    b = operator_basis(d)
    for s, t in itertools.product(range(d), repeat=2):
        direct = np.linalg.matrix_power(b.shift, t) @ np.linalg.matrix_power(b.clock, s)
        np.testing.assert_allclose(b.unit(s, t), direct, atol=1e-12)


@pytest.mark.parametrize("d", DIMS)
def test_orthogonality_trace_and_unitarity(d):
    b = operator_basis(d)
    u = b.units
    gram = np.einsum("nji,mji->nm", u.conj(), u)
    np.testing.assert_allclose(gram, d * np.eye(d * d), atol=1e-12)
    for n in range(d * d):
        np.testing.assert_allclose(u[n] @ u[n].conj().T, np.eye(d), atol=1e-12)
    traces = np.trace(u, axis1=1, axis2=2)
    expected = np.zeros(d * d)
    expected[0] = d
    np.testing.assert_allclose(traces, expected, atol=1e-12)


@pytest.mark.parametrize("d", DIMS)
def test_commutation_phase(d):
    b = operator_basis(d)
    w = b.omega
    for (s, t), (s2, t2) in itertools.product(itertools.product(range(d), repeat=2), repeat=2):
        lhs = b.unit(s, t) @ b.unit(s2, t2)
        rhs = w ** (s * t2 - t * s2) * b.unit(s2, t2) @ b.unit(s, t)
        np.testing.assert_allclose(lhs, rhs, atol=1e-12)


def test_d3_gram_is_identity():
    b = operator_basis(3)
    gram = np.array([[np.trace(x.conj().T @ y) / 3 for y in b.units] for x in b.units])
    np.testing.assert_allclose(gram, np.eye(9), atol=1e-12)


def test_dimension_too_small():
    with pytest.raises(DimensionTooSmall):
        operator_basis(1)
    with pytest.raises(DimensionTooSmall):
        gellmann_generators(1)


def test_bell_d2_examples():
    bb = bell_basis(operator_basis(2))
    r = 1 / np.sqrt(2)
    np.testing.assert_allclose(bb.vectors[0], [r, 0, 0, r], atol=1e-16)
    np.testing.assert_allclose(bb.vectors[operator_basis(2).index(0, 1)], [0, r, r, 0], atol=1e-16)


@pytest.mark.parametrize("d", DIMS)
def test_bell_basis_orthonormal_and_complete(d):
    b = operator_basis(d)
    bb = bell_basis(b)
    v = bb.vectors
    np.testing.assert_allclose(v.conj() @ v.T, np.eye(d * d), atol=1e-12)
    np.testing.assert_allclose(v.T @ v.conj(), np.eye(d * d), atol=1e-10)
    np.testing.assert_allclose(v[0], psi_plus(d), atol=1e-15)
    # definition via explicit Kronecker product
    for n in range(d * d):
        direct = np.kron(np.eye(d), b.units[n].conj()) @ psi_plus(d)
        np.testing.assert_allclose(v[n], direct, atol=1e-14)


def test_gellmann_d2_is_pauli():
    g = gellmann_generators(2).generators
    np.testing.assert_array_equal(g[0], [[0, 1], [1, 0]])
    np.testing.assert_array_equal(g[1], [[0, -1j], [1j, 0]])
    np.testing.assert_allclose(g[2], [[1, 0], [0, -1]])


@pytest.mark.parametrize("d", DIMS)
def test_gellmann_properties(d):
    g = gellmann_generators(d).generators
    assert len(g) == d * d - 1
    for lam in g:
        np.testing.assert_allclose(lam, lam.conj().T, atol=1e-12)
        assert abs(np.trace(lam)) < 1e-12
    gram = np.einsum("aij,bji->ab", g, g)
    np.testing.assert_allclose(gram, 2 * np.eye(d * d - 1), atol=1e-12)
    casimir = np.einsum("aij,ajk->ik", g, g)
    np.testing.assert_allclose(casimir, 2 * (d * d - 1) / d * np.eye(d), atol=1e-12)


def test_gellmann_d3_ordering():
    g = gellmann_generators(3).generators
    # symmetric (0,1),(0,2),(1,2); antisymmetric same; then diagonals
    assert g[1][0, 2] == 1 and g[1][2, 0] == 1
    assert g[5][1, 2] == -1j and g[5][2, 1] == 1j
    np.testing.assert_allclose(np.diag(g[7]).real, np.array([1, 1, -2]) / np.sqrt(3))


def test_expand_examples():
    b = operator_basis(3)
    z = expand_in_basis(np.eye(3), b)
    np.testing.assert_allclose(z, np.eye(9)[0], atol=1e-15)
    for m in range(9):
        np.testing.assert_allclose(expand_in_basis(b.units[m], b), np.eye(9)[m], atol=1e-15)
    with pytest.raises(DimensionMismatch):
        expand_in_basis(np.eye(2), b)


@pytest.mark.parametrize("d", DIMS)
def test_expand_round_trip(d, rng):
    b = operator_basis(d)
    for _ in range(5):
        w = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        np.testing.assert_allclose(reconstruct(expand_in_basis(w, b), b), w, atol=1e-10)
        u = random_unitary(d, rng)
        z = expand_in_basis(u, b)
        assert np.sum(np.abs(z) ** 2) == pytest.approx(1.0, abs=1e-10)
