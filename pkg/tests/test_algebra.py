from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from g2lab import algebra as alg
from g2lab.errors import NotInLambda7Error, NotOrthogonalError

e = alg.basis_vector
E = alg.basis_bivector

vec7 = st.lists(st.floats(-10, 10, allow_nan=False), min_size=7, max_size=7).map(np.array)


def brute_curl(alpha):
    """*(phi0 ^ alpha) by explicit wedge and Hodge star over index sets."""
    t = alg.PHI0.tensor
    a = alg.as_matrix(alpha)
    out = np.zeros(21)
    for five in combinations(range(7), 5):
        coeff = 0.0
        for tri in combinations(five, 3):
            pair = tuple(i for i in five if i not in tri)
            coeff += alg.perm_sign(tri + pair) * t[tri] * a[pair]
        rest = tuple(i for i in range(7) if i not in five)
        out[alg.PAIR_INDEX[rest]] += alg.perm_sign(five + rest) * coeff
    return out


def test_phi0_has_seven_unit_terms():
    c = alg.PHI0.coeffs
    assert np.count_nonzero(c) == 7
    assert set(np.abs(c[c != 0])) == {1.0}


@pytest.mark.parametrize("idx,val", [((1, 2, 3), 1), ((1, 4, 5), 1), ((1, 6, 7), -1), ((2, 4, 6), 1),
                                     ((2, 7, 5), -1), ((3, 4, 7), 1), ((3, 5, 6), -1), ((4, 5, 6), 0)])
def test_phi0_coefficients(idx, val):
    assert alg.PHI0.coefficient(*idx) == val


def test_wedge_examples():
    assert np.array_equal(alg.wedge2(e(1), e(2)), E(1, 2))
    y = np.arange(7.0)
    assert np.all(alg.wedge2(y, y) == 0)
    assert np.array_equal(alg.wedge2(e(1) + e(2), e(3)), E(1, 3) + E(2, 3))


def test_interior_examples():
    assert np.array_equal(alg.interior(e(1), E(1, 2)), e(2))
    assert np.array_equal(alg.interior(e(3), E(1, 2)), np.zeros(7))
    assert np.array_equal(alg.interior(e(2), E(1, 2)), -e(1))


def test_phi_eval_examples():
    assert alg.phi_eval(e(1), e(2), e(3)) == 1
    assert alg.phi_eval(e(2), e(1), e(3)) == -1
    assert alg.phi_eval(e(1), e(2), e(4)) == 0


def test_cross_examples():
    assert np.array_equal(alg.cross(e(1), e(2)), e(3))
    assert np.array_equal(alg.cross(e(4), e(5)), e(1))
    v = np.linspace(-1, 1, 7)
    assert np.allclose(alg.cross(v, v), 0, atol=1e-15)


def test_cross_table_matches_contraction_oracle():
    # <e_k, e_i x e_j> read off the coefficient list directly
    want = np.zeros((7, 7, 7))
    for (i, j, k), s in alg.phi0_terms():
        for p, q, r, sg in [(i, j, k, 1), (j, k, i, 1), (k, i, j, 1), (j, i, k, -1), (i, k, j, -1), (k, j, i, -1)]:
            want[r, p, q] = sg * s
    got = np.array([[alg.cross(e(i + 1), e(j + 1)) for j in range(7)] for i in range(7)])
    assert np.array_equal(np.transpose(got, (2, 0, 1)), want)


@given(vec7, vec7, vec7)
def test_phi_antisymmetry(x, y, z):
    v = alg.phi_eval(x, y, z)
    scale = 1 + np.linalg.norm(x) * np.linalg.norm(y) * np.linalg.norm(z)
    assert abs(alg.phi_eval(y, z, x) - v) <= 1e-14 * scale
    assert abs(alg.phi_eval(y, x, z) + v) <= 1e-14 * scale
    assert abs(alg.phi_eval(x, y, z) - np.dot(x, alg.cross(y, z))) <= 1e-14 * scale


@given(vec7, vec7, vec7)
def test_cross_gram_identity(y, z, w):
    lhs = alg.cross(y, z) @ alg.cross(y, w)
    rhs = (y @ y) * (z @ w) - (y @ z) * (y @ w)
    assert abs(lhs - rhs) <= 1e-12 * (1 + (y @ y) * np.linalg.norm(z) * np.linalg.norm(w))


def test_curl_examples():
    a7 = (E(1, 2) + E(4, 7) - E(5, 6)) / 3
    assert np.allclose(alg.curl_op(a7), -2 * a7, atol=1e-15)
    b = 2 * E(1, 2) - E(4, 7) + E(5, 6)
    assert np.allclose(alg.curl_op(b), b, atol=1e-15)
    assert np.allclose(alg.curl_op(E(1, 2)), -E(4, 7) + E(5, 6), atol=1e-15)


def test_curl_matrix_matches_brute_force():
    for k in range(21):
        basis = np.eye(21)[k]
        assert np.allclose(alg.curl_op(basis), brute_curl(basis), atol=1e-14)


def test_curl_spectrum():
    ev = np.sort(np.linalg.eigvals(alg.CURL_MATRIX).real)
    assert np.allclose(ev, [-2] * 7 + [1] * 14, atol=1e-10)


def test_project_split_properties():
    rng = np.random.default_rng(3)
    a = rng.standard_normal((1000, 21))
    a7, a14 = alg.project_split(a)
    assert np.allclose(a7 + a14, a, atol=1e-14)
    assert np.max(np.abs(alg.biv_inner(a7, a14))) < 1e-12
    assert np.allclose(alg.curl_op(a7), -2 * a7, atol=1e-12)
    assert np.allclose(alg.curl_op(a14), a14, atol=1e-12)
    b7, b14 = alg.project_split(a7)
    assert np.allclose(b7, a7, atol=1e-14) and np.allclose(b14, 0, atol=1e-14)


def test_pi7_of_e12_exact():
    assert np.array_equal(alg.pi7(E(1, 2)), (E(1, 2) + E(4, 7) - E(5, 6)) / 3)


def test_lambda7_iso():
    assert np.allclose(alg.lambda7_iso(e(3)), (E(1, 2) + E(4, 7) - E(5, 6)) / 3, atol=1e-16)
    assert abs(alg.biv_norm(alg.lambda7_iso(e(3))) ** 2 - 1 / 3) < 1e-15
    rng = np.random.default_rng(0)
    x = rng.standard_normal((200, 7))
    img = alg.lambda7_iso(x)
    assert np.allclose(alg.lambda7_iso_inv(img), x, atol=1e-12)
    assert np.allclose(alg.curl_op(img), -2 * img, atol=1e-12)
    assert np.allclose(alg.biv_norm(img), np.linalg.norm(x, axis=1) / np.sqrt(3), atol=1e-12)


def test_lambda7_inverse_rejects_14_part():
    with pytest.raises(NotInLambda7Error) as info:
        alg.lambda7_iso_inv(E(1, 2))
    assert info.value.residual > 0.5


def test_lambda7_vector_on_simple_bivectors():
    rng = np.random.default_rng(1)
    y, z = rng.standard_normal((2, 50, 7))
    assert np.allclose(alg.lambda7_vector(alg.wedge2(y, z)), alg.cross(y, z), atol=1e-12)


def test_jmap_examples():
    assert np.array_equal(alg.jmap(e(3), e(1)), e(2))
    assert np.array_equal(alg.jmap(e(3), e(4)), e(7))
    with pytest.raises(NotOrthogonalError):
        alg.jmap(e(3), e(3) + e(1))


def test_j_squared_random():
    rng = np.random.default_rng(2)
    eta = rng.standard_normal((1000, 7))
    eta /= np.linalg.norm(eta, axis=1, keepdims=True)
    v = rng.standard_normal((1000, 7))
    v -= np.sum(v * eta, axis=1, keepdims=True) * eta
    jv = alg.jmap(eta, v)
    assert np.allclose(alg.jmap(eta, jv), -v, atol=1e-12)
    assert np.allclose(np.linalg.norm(jv, axis=1), np.linalg.norm(v, axis=1), atol=1e-12)
    assert np.max(np.abs(np.sum(jv * eta, axis=1))) < 1e-12


def test_compat_check():
    assert alg.compat_check(alg.PHI0).passed
    rep = alg.compat_check(alg.ThreeForm7(np.zeros(35)))
    assert not rep.passed
    names = [f[0] for f in rep.failures]
    assert "norm_identity" in names
    assert set(rep.failures[0][2]) == {"y", "z"}


def test_three_form_validation():
    with pytest.raises(ValueError):
        alg.ThreeForm7(np.zeros(34))
    with pytest.raises(ValueError):
        alg.ThreeForm7(np.full(35, np.nan))


def test_complex_pairing_is_bilinear():
    eps = e(1) - 1j * e(2)
    assert np.sum(eps * eps) == 0
    assert np.sum(eps * np.conj(eps)) == 2
