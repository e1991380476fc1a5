import json
from fractions import Fraction

import numpy as np
import pytest

from fef.errors import (
    DimensionMismatch,
    NotHermitian,
    NotPSD,
    ParamOutOfRange,
    ParseError,
    TraceNotOne,
    ValidationError,
)
from fef.states import (
    alpha_family_3x3,
    bloch_decompose,
    horodecki_3x3,
    isotropic,
    load_state,
    make_state,
    max_entangled,
    max_mixed,
    pure_state,
    random_state,
    save_state,
    validate,
    weakly_mixed_3x3,
)
from fef.weyl import gellmann_generators, psi_plus


def horodecki_exact(a: Fraction, root: Fraction):
    """Entries of the Horodecki matrix as rationals; `root` stands for sqrt(1 - a^2)."""
    m = [[Fraction(0)] * 9 for _ in range(9)]
    for i in range(9):
        m[i][i] = a
    for i in (0, 4, 8):
        for j in (0, 4, 8):
            m[i][j] = a
    m[6][6] = m[8][8] = (1 + a) / 2
    m[6][8] = m[8][6] = root / 2
    return [[x / (8 * a + 1) for x in row] for row in m]


def test_validate_examples():
    assert validate(np.eye(4) / 4, 2).d == 2
    with pytest.raises(NotPSD):
        validate(np.diag([1.5, -0.5, 0, 0]), 2)
    rho = max_entangled(3)
    assert np.linalg.matrix_rank(rho.mat, tol=1e-9) == 1


def test_validate_errors_and_repairs():
    with pytest.raises(DimensionMismatch):
        validate(np.eye(3) / 3, 2)
    with pytest.raises(TraceNotOne):
        validate(np.eye(4) * 0.9 / 4, 2)
    bad = np.eye(4) / 4
    bad[0, 1] = 0.1
    with pytest.raises(NotHermitian):
        validate(bad, 2)
    drift = np.eye(4) / 4 * (1 + 4e-10)
    drift[0, 1] = 1e-11
    rho = validate(drift, 2)
    assert np.trace(rho.mat).real == pytest.approx(1.0, abs=1e-15)
    np.testing.assert_allclose(rho.mat, rho.mat.conj().T, atol=0)
    with pytest.raises(ValidationError):
        validate([[np.nan, 0], [0, 1]], 1)


@pytest.mark.parametrize("a", [Fraction(0), Fraction(1)])
def test_horodecki_corners_exact(a):
    root = Fraction(1) if a == 0 else Fraction(0)
    exact = np.array(horodecki_exact(a, root), dtype=float)
    np.testing.assert_allclose(horodecki_3x3(float(a)).mat, exact, atol=1e-15)


def test_horodecki_corner_structure():
    r0 = horodecki_3x3(0.0).mat
    nz = np.argwhere(np.abs(r0) > 0)
    assert {tuple(x) for x in nz} == {(6, 6), (6, 8), (8, 6), (8, 8)}
    r1 = horodecki_3x3(1.0).mat
    assert r1[0, 0] == pytest.approx(1 / 9) and r1[0, 8] == pytest.approx(1 / 9)
    assert r1[6, 6] == pytest.approx(1 / 9) and r1[6, 8] == 0


def test_horodecki_half_against_hand_typed():
    a = 0.5
    s = np.sqrt(0.75) / 2
    hand = np.array(
        [
            [a, 0, 0, 0, a, 0, 0, 0, a],
            [0, a, 0, 0, 0, 0, 0, 0, 0],
            [0, 0, a, 0, 0, 0, 0, 0, 0],
            [0, 0, 0, a, 0, 0, 0, 0, 0],
            [a, 0, 0, 0, a, 0, 0, 0, a],
            [0, 0, 0, 0, 0, a, 0, 0, 0],
            [0, 0, 0, 0, 0, 0, 0.75, 0, s],
            [0, 0, 0, 0, 0, 0, 0, a, 0],
            [a, 0, 0, 0, a, 0, s, 0, 0.75],
        ]
    ) / 5.0
    rho = horodecki_3x3(a)
    np.testing.assert_allclose(rho.mat, hand, atol=1e-15)
    assert np.trace(rho.mat).real == pytest.approx(1.0)
    assert np.linalg.eigvalsh(rho.mat).min() > -1e-12


def test_horodecki_range():
    with pytest.raises(ParamOutOfRange):
        horodecki_3x3(1.1)
    with pytest.raises(ParamOutOfRange):
        horodecki_3x3(-0.1)


@pytest.mark.parametrize("alpha", [0.0, 1.0, 2.5, 3.5, 4.0, 4.5, 5.0])
def test_alpha_family_top_eigenpair(alpha):
    rho = alpha_family_3x3(alpha)
    w, v = np.linalg.eigh(rho.mat)
    assert w[-1] == pytest.approx(2 / 7, abs=1e-10)
    top = v[:, -1] * np.sign(v[0, -1].real)
    np.testing.assert_allclose(top, np.array([1, 0, 0, 0, 1, 0, 0, 0, 1]) / np.sqrt(3), atol=1e-10)


def test_alpha_family_weights():
    rho = alpha_family_3x3(2.5).mat
    for idx in (1, 5, 6, 3, 7, 2):  # |01>,|12>,|20>,|10>,|21>,|02>
        assert rho[idx, idx] == pytest.approx((5 / 7) / 6)
    rho5 = alpha_family_3x3(5.0).mat
    for idx in (3, 7, 2):
        assert rho5[idx, idx] == 0
    with pytest.raises(ParamOutOfRange):
        alpha_family_3x3(5.5)


def test_weakly_mixed_examples():
    np.testing.assert_allclose(weakly_mixed_3x3(0.0, 3.0).mat, np.eye(9) / 9, atol=1e-16)
    p_plus = np.outer(psi_plus(3), psi_plus(3))
    np.testing.assert_allclose(weakly_mixed_3x3(1.0, 1.0).mat, p_plus, atol=1e-15)
    p = 0.5
    w = np.linalg.eigvalsh(weakly_mixed_3x3(p, 2.0).mat)
    np.testing.assert_allclose(w, [(1 - p) / 9] * 8 + [(1 - p) / 9 + p], atol=1e-14)
    with pytest.raises(ParamOutOfRange):
        weakly_mixed_3x3(1.5, 1.0)


def test_isotropic_examples():
    np.testing.assert_allclose(isotropic(3, 1.0).mat, max_entangled(3).mat, atol=1e-15)
    np.testing.assert_allclose(isotropic(3, 1 / 9).mat, np.eye(9) / 9, atol=1e-15)
    rho = isotropic(2, 0.6)
    p = psi_plus(2)
    assert np.vdot(p, rho.mat @ p).real == pytest.approx(0.6, abs=1e-14)
    with pytest.raises(ParamOutOfRange):
        isotropic(2, 1.2)


def test_make_state():
    assert make_state("alpha3x3", {"alpha": 4}).d == 3
    assert make_state("max-mixed", d=4).d == 4
    with pytest.raises(ValidationError):
        make_state("nope")
    with pytest.raises(ValidationError):
        make_state("weakly-mixed3x3", {"p": 0.5})
    with pytest.raises(DimensionMismatch):
        make_state("horodecki3x3", {"a": 0.5}, d=2)
    with pytest.raises(ValidationError):
        make_state("isotropic", {"f": 0.5})


def test_bloch_examples():
    for d in (2, 3):
        b = bloch_decompose(max_mixed(d), gellmann_generators(d))
        assert not np.any(np.abs(b.r) > 1e-15) and not np.any(np.abs(b.N) > 1e-15)
    n = bloch_decompose(max_entangled(2), gellmann_generators(2)).N
    np.testing.assert_allclose(n, np.diag([0.25, -0.25, 0.25]), atol=1e-15)


def test_bloch_of_product_factorizes(rng):
    for d in (2, 3):
        a = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        b = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        rho = pure_state(np.kron(a, b), d)
        dec = bloch_decompose(rho, gellmann_generators(d))
        np.testing.assert_allclose(dec.N, np.outer(dec.r, dec.s), atol=1e-14)


@pytest.mark.parametrize("d", [2, 3])
def test_bloch_reconstruction(d, rng):
    gm = gellmann_generators(d)
    for _ in range(100):
        rho = random_state(d, rng, rank=int(rng.integers(1, d * d + 1)))
        dec = bloch_decompose(rho, gm)
        assert np.max(np.abs(dec.reconstruct(gm) - rho.mat)) <= 1e-9


def test_bloch_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        bloch_decompose(max_mixed(2), gellmann_generators(3))


def test_constructors_validate():
    for rho in [horodecki_3x3(a) for a in np.linspace(0, 1, 11)] + [
        alpha_family_3x3(a) for a in np.linspace(0, 5, 11)
    ] + [weakly_mixed_3x3(p, x) for p in (0, 0.3, 1) for x in (-1, 0, 0.5, 2)]:
        validate(rho.mat, rho.d)


def write(tmp_path, obj, name="s.json"):
    path = tmp_path / name
    path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return path


def test_load_state_examples(tmp_path):
    mat = [[[0.25 if i == j else 0.0, 0.0] for j in range(4)] for i in range(4)]
    rho = load_state(write(tmp_path, {"d": 2, "matrix": mat}))
    np.testing.assert_allclose(rho.mat, np.eye(4) / 4)
    mat = [[[0.225 if i == j else 0.0, 0.0] for j in range(4)] for i in range(4)]
    with pytest.raises(TraceNotOne):
        load_state(write(tmp_path, {"d": 2, "matrix": mat}))


def test_save_load_round_trip(tmp_path, rng):
    rho = random_state(3, rng)
    path = tmp_path / "rho.json"
    save_state(rho, path)
    back = load_state(path)
    np.testing.assert_array_equal(back.mat, rho.mat)


@pytest.mark.parametrize(
    "obj",
    [
        "not json",
        "[]",
        {"matrix": [[[1, 0]]]},
        {"d": 1},
        {"d": 2, "matrix": [[[0.25, 0]] * 4] * 3},
        {"d": 2, "matrix": [[[0.25, 0]] * 4] * 3 + [[[0.25, 0]] * 3]},
        {"d": 2, "matrix": [[[0.25, 0, 0]] * 4] * 4},
        {"d": 2, "matrix": [[["x", 0]] * 4] * 4},
        '{"d": 1, "matrix": [[[NaN, 0]]]}',
        '{"d": 1, "matrix": [[[Infinity, 0]]]}',
    ],
)
def test_load_state_parse_errors(tmp_path, obj):
    with pytest.raises(ParseError):
        load_state(write(tmp_path, obj))


def test_load_missing_file(tmp_path):
    with pytest.raises(ParseError):
        load_state(tmp_path / "missing.json")
