"""Tests for plane-wave spinor fields and their derivatives."""

import numpy as np
import pytest

from fractalspin.algebra import Biquaternion, E1, E2, ONE
from fractalspin.errors import AxisSingularity
from fractalspin.fields import (
    PlaneWaveTerm,
    SpacetimePoint,
    SpinorField,
    amplitude_from_spinor,
    bloch_spinor,
    plane_wave,
    s0_from_diffusion,
    spiral_pair_field,
)

HBAR = 1.0


def _wave(p=(0.0, 0.0, 1.0), energy=0.5, sigma=0.0, amp=None, **consts):
    return plane_wave(amp or ONE, p, energy, sigma, hbar=HBAR, **consts)


def test_operator_signs_on_single_term():
    # d_t psi = +(i/hbar) E psi and d_k psi = -(i/hbar) p_k psi
    f = _wave(p=(0.3, -0.2, 1.1), energy=0.7)
    pt = SpacetimePoint(0.4, 0.1, -0.2, 0.3)
    v = f.value(pt)
    assert f.partial(pt, 0).allclose(v * (1j * 0.7 / HBAR), atol=1e-12)
    assert f.partial(pt, 1).allclose(v * (-1j * 0.3 / HBAR), atol=1e-12)
    assert f.partial(pt, 3).allclose(v * (-1j * 1.1 / HBAR), atol=1e-12)


def test_fd_matches_analytic():
    amp = Biquaternion(0.8, 0.1 + 0.2j, -0.3, 0.05j)
    f = SpinorField(
        [PlaneWaveTerm(amp, (0.4, 0.2, -0.6), 0.9),
         PlaneWaveTerm(ONE + E2, (-0.1, 0.0, 0.3), 0.2)],
        hbar=0.7)
    pt = (0.3, 0.9, 0.4, -0.2)
    for mu in range(4):
        d_true = f.partial(pt, mu)
        d_fd = f.partial_fd(pt, mu, h=1e-4)
        assert (d_true - d_fd).max_abs() < 1e-6


def test_spiral_phase_gradient():
    # at (x, y) = (1, 0) the azimuthal gradient points along +y with
    # magnitude sigma
    f = _wave(p=(0.0, 0.0, 1.0), energy=0.5, sigma=0.25)
    pt = (0.0, 1.0, 0.0, 0.0)
    v = f.value(pt)
    assert f.partial(pt, 1).allclose(v * 0.0, atol=1e-12)        # p_x + 0
    assert f.partial(pt, 2).allclose(v * (-1j * 0.25), atol=1e-12)
    d_fd = f.partial_fd(pt, 2, h=1e-5)
    assert (f.partial(pt, 2) - d_fd).max_abs() < 1e-6


def test_axis_singularity():
    f = _wave(sigma=0.5)
    with pytest.raises(AxisSingularity):
        f.value((0.0, 0.0, 0.0, 1.0))
    with pytest.raises(AxisSingularity):
        f.partial((0.0, 0.0, 0.0, 1.0), 1)
    # sigma = 0 is fine on the axis
    assert _wave(sigma=0.0).value((0.0, 0.0, 0.0, 1.0)) is not None


def test_remove_rest_phase_is_exact_scalar_factor():
    amp = Biquaternion(0.6, 0.2j, 0.1, -0.4)
    f = plane_wave(amp, (0.2, 0.0, 0.5), 1.3, hbar=0.5, m=2.0, c=3.0)
    g = f.remove_rest_phase()
    assert g.terms[0].energy == pytest.approx(1.3 - 2.0 * 9.0)
    pt = (0.7, 0.3, -0.1, 0.2)
    # psi' = psi * exp(-i m c^2 t / hbar)
    factor = complex(np.exp(-1j * 2.0 * 9.0 * 0.7 / 0.5))
    assert g.value(pt).allclose(f.value(pt) * factor, atol=1e-12)


def test_project_large_zeroes_lower_sector():
    amp = Biquaternion(0.6, 0.2j, 0.1, -0.4)
    f = plane_wave(amp, (0.0, 0.0, 0.1), 0.3)
    g = f.project_large()
    a = g.terms[0].amplitude.a
    assert a[2] == 0 and a[3] == 0
    assert a[0] == 0.6 and a[1] == 0.2j


def test_spiral_pair_validation():
    t0 = PlaneWaveTerm(ONE, (0.0, 0.0, 1.0), 0.5, 0.5)
    t_bad_p = PlaneWaveTerm(E1, (0.0, 0.1, 1.0), 0.6, 0.5)
    t_bad_s = PlaneWaveTerm(E1, (0.0, 0.0, 1.0), 0.6, 0.25)
    t_ok = PlaneWaveTerm(E1, (0.0, 0.0, 1.0), 0.6, 0.5)
    with pytest.raises(ValueError, match="momenta"):
        spiral_pair_field(t0, t_bad_p)
    with pytest.raises(ValueError, match="sigma"):
        spiral_pair_field(t0, t_bad_s)
    f = spiral_pair_field(t0, t_ok)
    assert len(f.terms) == 2


def test_bloch_spinor():
    rng = np.random.default_rng(7)
    for _ in range(100):
        th, ph = rng.uniform(0, np.pi), rng.uniform(-np.pi, np.pi)
        s = bloch_spinor(th, ph)
        assert np.vdot(s, s).real == pytest.approx(1.0, abs=1e-14)
    up = bloch_spinor(0.0, 0.0)
    assert np.allclose(up, [1.0, 0.0])
    # equal-weight superposition along +x
    sx = bloch_spinor(np.pi / 2, 0.0)
    assert abs(sx[0]) == pytest.approx(abs(sx[1]))


def test_amplitude_from_spinor_round_trip():
    s = bloch_spinor(1.1, -0.4)
    amp = amplitude_from_spinor(s)
    a = amp.a
    assert a[0] == s[0] and a[1] == s[1] and a[2] == 0 and a[3] == 0


def test_s0_default_and_diffusion_relation():
    # with power-of-two values 2*m*D is exact: s0(hbar) == s0(2mD) bitwise
    m, hbar = 1.0, 1.0
    d = hbar / (2.0 * m)
    assert s0_from_diffusion(m, d) == hbar
    f1 = plane_wave(ONE, (0, 0, 1), 0.5, m=m, hbar=hbar)
    f2 = plane_wave(ONE, (0, 0, 1), 0.5, m=m, hbar=hbar,
                    s0=s0_from_diffusion(m, d))
    assert f1.s0 == f2.s0


def test_constants_stored():
    f = plane_wave(ONE, (0, 0, 1), 0.5, hbar=0.1, m=2.0, c=5.0, s0=0.25)
    assert (f.hbar, f.m, f.c, f.s0) == (0.1, 2.0, 5.0, 0.25)
    assert plane_wave(ONE, (0, 0, 1), 0.5, hbar=0.3).s0 == 0.3
