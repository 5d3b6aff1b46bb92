"""Property tests for quaternion/biquaternion arithmetic.

The 2x2 matrix representation e_k -> -i*sigma_k is used as an independent
oracle for the Hamilton product: it is implemented here directly from the
Pauli matrices, not via the bridge methods under test.
"""

import numpy as np
import pytest

from fractalspin.algebra import (
    E1,
    E2,
    E3,
    ONE,
    PAULI,
    Biquaternion,
    Quaternion,
    ZERO_DIVISOR_EPS,
    pauli_identity_residual,
    q_inverse,
    q_mul,
    sigma_dot,
    symplectic_join,
    symplectic_split,
)
from fractalspin.errors import ZeroDivisor

N_CASES = 1000


def _rand_bq(rng, scale=1.0):
    re = rng.uniform(-scale, scale, 4)
    im = rng.uniform(-scale, scale, 4)
    return Biquaternion.from_array(re + 1j * im)


def _rand_quat(rng, scale=1.0):
    return Quaternion(*rng.uniform(-scale, scale, 4))


def _oracle_matrix(bq):
    """Matrix image built directly from the Pauli matrices."""
    a = bq.a
    m = a[0] * np.eye(2, dtype=complex)
    for k in range(3):
        m = m + a[k + 1] * (-1j * PAULI[k])
    return m


def test_basis_table():
    assert (E1 * E2).allclose(E3)
    assert (E2 * E3).allclose(E1)
    assert (E3 * E1).allclose(E2)
    assert (E2 * E1).allclose(-E3)
    for e in (E1, E2, E3):
        assert (e * e).allclose(-ONE)


def test_scalar_i_commutes_with_basis():
    # (i*e1)*e2 == e1*(i*e2) == i*e3
    left = (1j * E1) * E2
    right = E1 * (1j * E2)
    assert left.allclose(right)
    assert left.allclose(1j * E3)


def test_product_against_matrix_oracle():
    rng = np.random.default_rng(101)
    for _ in range(N_CASES):
        p, q = _rand_bq(rng), _rand_bq(rng)
        direct = _oracle_matrix(p * q)
        via_matrices = _oracle_matrix(p) @ _oracle_matrix(q)
        assert np.max(np.abs(direct - via_matrices)) < 1e-12


def test_associativity():
    rng = np.random.default_rng(102)
    worst = 0.0
    for _ in range(N_CASES):
        a, b, c = _rand_bq(rng), _rand_bq(rng), _rand_bq(rng)
        d = (a * b) * c - a * (b * c)
        worst = max(worst, d.max_abs())
    assert worst < 1e-12


def test_complex_norm_multiplicative():
    rng = np.random.default_rng(103)
    for _ in range(N_CASES):
        p, q = _rand_bq(rng), _rand_bq(rng)
        lhs = (p * q).complex_norm()
        rhs = p.complex_norm() * q.complex_norm()
        assert abs(lhs - rhs) < 1e-12


def test_real_quaternion_norm_multiplicative():
    rng = np.random.default_rng(104)
    for _ in range(N_CASES):
        p, q = _rand_quat(rng), _rand_quat(rng)
        assert abs((p * q).norm() - p.norm() * q.norm()) < 1e-12


def test_conjugation_reverses_products():
    rng = np.random.default_rng(105)
    for _ in range(200):
        p, q = _rand_bq(rng), _rand_bq(rng)
        assert (p * q).conjugate().allclose(q.conjugate() * p.conjugate())


def test_inverse_round_trip():
    rng = np.random.default_rng(106)
    count = 0
    for _ in range(N_CASES):
        q = _rand_bq(rng)
        try:
            qi = q.inverse()
        except ZeroDivisor:
            continue
        count += 1
        assert (q * qi).allclose(ONE, atol=1e-10)
        assert (qi * q).allclose(ONE, atol=1e-10)
    assert count > N_CASES * 0.9  # random biquaternions are rarely singular


def test_zero_divisor_raises():
    zd = Biquaternion(1.0, 1.0j)  # N = 1 + (i)^2 = 0
    assert abs(zd.complex_norm()) < ZERO_DIVISOR_EPS
    with pytest.raises(ZeroDivisor):
        zd.inverse()
    # and the companion product really does annihilate:
    partner = Biquaternion(1.0, -1.0j)
    assert (zd * partner).max_abs() < 1e-15


def test_one_plus_e1_is_invertible():
    # contrast with the zero divisor: (1 + e1)(1 - e1) = 2
    p = ONE + E1
    q = ONE - E1
    assert (p * q).allclose(2.0 * ONE)
    assert (p * p.inverse()).allclose(ONE)


def test_complex_norm_is_complex_scalar():
    q = Biquaternion(1.0 + 1.0j)
    assert q.complex_norm() == (1 + 1j) ** 2
    assert Biquaternion(0, 2j, 0, 0).complex_norm() == pytest.approx(-4.0)


def test_eight_square_norm_and_component_order():
    comps = np.array([0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8])
    q = Biquaternion.from_components(comps)
    assert q.a[0] == pytest.approx(0.1 + 0.2j)
    assert q.a[3] == pytest.approx(0.7 + 0.8j)
    assert np.allclose(q.components, comps)
    assert q.eight_square_norm() == pytest.approx(float(np.sum(comps**2)))


def test_symplectic_round_trip():
    rng = np.random.default_rng(107)
    for _ in range(N_CASES):
        q = _rand_quat(rng)
        back = symplectic_join(symplectic_split(q))
        assert back.coeffs == q.coeffs  # bit-exact: pure repacking


def test_symplectic_split_examples():
    assert symplectic_split(Quaternion(1)) == (1 + 0j, 0j)
    assert symplectic_split(Quaternion(0, 0, 1, 0)) == (0j, 1 + 0j)
    assert symplectic_split(Quaternion(0, 0, 0, 1)) == (0j, -1j)


def test_matrix_bridge_round_trip_and_homomorphism():
    rng = np.random.default_rng(108)
    for _ in range(N_CASES):
        p, q = _rand_bq(rng), _rand_bq(rng)
        assert np.allclose(p.to_matrix(), _oracle_matrix(p), atol=1e-15)
        assert Biquaternion.from_matrix(p.to_matrix()).allclose(p, atol=1e-14)
        hom = (p * q).to_matrix() - p.to_matrix() @ q.to_matrix()
        assert np.max(np.abs(hom)) < 1e-12


def test_matrix_bridge_covers_all_matrices():
    # from_matrix is a two-sided inverse, so the bridge is onto M2(C)
    rng = np.random.default_rng(109)
    for _ in range(200):
        m = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        q = Biquaternion.from_matrix(m)
        assert np.allclose(q.to_matrix(), m, atol=1e-14)


def test_sigma_from_bridge():
    # sigma_k = i * matrix(e_k)
    for k, e in enumerate((E1, E2, E3)):
        assert np.allclose(1j * e.to_matrix(), PAULI[k])


def test_pauli_identity_complex_vectors():
    rng = np.random.default_rng(110)
    worst = 0.0
    for _ in range(N_CASES):
        a = rng.uniform(-1, 1, 3) + 1j * rng.uniform(-1, 1, 3)
        b = rng.uniform(-1, 1, 3) + 1j * rng.uniform(-1, 1, 3)
        worst = max(worst, pauli_identity_residual(a, b))
    assert worst < 1e-12


def test_sigma_dot_linearity():
    v = np.array([0.3, -1.2, 0.7])
    m = sigma_dot(v)
    oracle = v[0] * PAULI[0] + v[1] * PAULI[1] + v[2] * PAULI[2]
    assert np.allclose(m, oracle)


def test_inverse_derivative_identity():
    # d(psi * psi^-1) = 0, so psi * d(psi^-1) = -(d psi) * psi^-1.
    # Finite-difference check on a biquaternion-valued curve.
    def psi(s):
        return Biquaternion(1.0 + 0.3j * s, 0.2 * s, -0.1 * s * s, 0.05 + 0.4j * s)

    h = 1e-6
    for s in (0.0, 0.7, -1.3):
        dpsi = (psi(s + h) - psi(s - h)) * (0.5 / h)
        dinv = (psi(s + h).inverse() - psi(s - h).inverse()) * (0.5 / h)
        resid = psi(s) * dinv + dpsi * psi(s).inverse()
        assert resid.max_abs() < 1e-8


def test_quaternion_biquaternion_mixing():
    q = Quaternion(1, 2, 3, 4)
    b = Biquaternion(0.0, 1.0j)
    assert (q * b).allclose(q.to_biquaternion() * b)
    assert (b * q).allclose(b * q.to_biquaternion())
    assert (q.to_biquaternion() + 1j * b).a is not None


def test_scalar_arithmetic():
    q = Biquaternion(1.0, 2.0)
    assert (2 * q).allclose(q * 2)
    assert (q / 2).allclose(Biquaternion(0.5, 1.0))
    assert (1 + q).allclose(Biquaternion(2.0, 2.0))
    assert (q - 1).allclose(Biquaternion(0.0, 2.0))
    assert (1 - q).allclose(Biquaternion(0.0, -2.0))
