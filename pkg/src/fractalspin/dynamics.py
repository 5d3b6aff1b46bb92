"""Differential operators, wave-equation residuals, and the
non-integrability witness.

Field objects here are deliberately generic: anything with ``value(pt)``
and ``derivative(pt, orders)`` works, where ``orders`` is a 4-tuple of
non-negative derivative counts for (t, x, y, z).  Two implementations are
provided: :class:`ExponentialField` (sums A * exp(k . (t,x,y,z)) with
exact derivatives of every order) and :class:`NumericField` (an arbitrary
callable differentiated by nested central differences).  Amplitudes may
be biquaternions, complex scalars, or NumPy vectors; operators that need
a ring inverse (geodesic residual, witness) require biquaternion values.

Sign conventions match :mod:`fractalspin.fields`: momentum operator
+i hbar grad, energy operator -i hbar d/dt, minimal coupling through
(p_hat - (e/c) A).
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np

from .algebra import PAULI, Biquaternion, sigma_dot
from .errors import GeometryInvalid  # noqa: F401  (re-exported for CLI use)

_E2 = Biquaternion(0, 0, 1.0)
_IDENT2 = np.eye(2, dtype=complex)


def _orders_unit(mu: int) -> tuple[int, int, int, int]:
    o = [0, 0, 0, 0]
    o[mu] = 1
    return tuple(o)


def _orders_add(a, b) -> tuple[int, int, int, int]:
    return tuple(x + y for x, y in zip(a, b))


class ExponentialField:
    """Finite sum of terms A_i * exp(k_i . (t, x, y, z)).

    k_i is a complex 4-vector, so oscillatory, growing and decaying
    behaviour are all representable; derivatives of any order are exact
    (each derivative multiplies a term by components of its k).
    """

    def __init__(self, terms: Sequence[tuple]):
        self.terms = [(amp, np.asarray(k, dtype=complex).reshape(4))
                      for amp, k in terms]
        if not self.terms:
            raise ValueError("need at least one term")

    def value(self, pt):
        pt = np.asarray(pt, dtype=float).reshape(4)
        acc = None
        for amp, k in self.terms:
            piece = amp * complex(np.exp(k @ pt))
            acc = piece if acc is None else acc + piece
        return acc

    def derivative(self, pt, orders):
        pt = np.asarray(pt, dtype=float).reshape(4)
        acc = None
        for amp, k in self.terms:
            factor = complex(np.exp(k @ pt))
            for mu, n in enumerate(orders):
                if n:
                    factor *= k[mu] ** n
            piece = amp * factor
            acc = piece if acc is None else acc + piece
        return acc


def product_field(f1: ExponentialField, f2: ExponentialField) -> ExponentialField:
    """Exact pointwise product of two exponential sums.

    The scalar exponentials commute with everything, so the product is
    again an exponential sum with pairwise amplitude products (order of
    the factors is preserved: amplitudes need not commute).
    """
    return ExponentialField([(a1 * a2, k1 + k2)
                             for a1, k1 in f1.terms
                             for a2, k2 in f2.terms])


def rotor_field(axis: int, omega: float, kvec) -> ExponentialField:
    """exp(e_axis * (omega t + k . r)) as an exact two-term exponential sum,
    using exp(e f) = cos f + e sin f for a unit imaginary e."""
    if axis not in (1, 2, 3):
        raise ValueError(f"axis must be 1, 2 or 3, got {axis}")
    e = Biquaternion(*(1.0 if i == axis else 0.0 for i in range(4)))
    one = Biquaternion(1.0)
    k4 = 1j * np.array([omega, *np.asarray(kvec, dtype=float).reshape(3)],
                       dtype=complex)
    return ExponentialField([
        ((one - 1j * e) * 0.5, k4),
        ((one + 1j * e) * 0.5, -k4),
    ])


class NumericField:
    """Wrap a plain callable pt -> value; derivatives by nested central
    differences (exact for low-order polynomials, O(h^2) otherwise)."""

    def __init__(self, fn: Callable, h: float = 1e-3):
        self.fn = fn
        self.h = float(h)

    def value(self, pt):
        return self.fn(np.asarray(pt, dtype=float).reshape(4))

    def derivative(self, pt, orders):
        total = int(sum(orders))
        if total == 0:
            return self.value(pt)
        pt = np.asarray(pt, dtype=float).reshape(4)
        mu = next(i for i, n in enumerate(orders) if n)
        rest = list(orders)
        rest[mu] -= 1
        rest = tuple(rest)
        up, dn = pt.copy(), pt.copy()
        up[mu] += self.h
        dn[mu] -= self.h
        return (self.derivative(up, rest) - self.derivative(dn, rest)) \
            * (0.5 / self.h)


# -- electromagnetic potentials ------------------------------------------


class EMField:
    """Scalar and vector potentials with optional analytic curl/divergence.

    a0 and a are callables of the spacetime point; b (the curl of a) and
    div_a fall back to central differences when not supplied.
    """

    def __init__(self, a0: Callable | None = None, a: Callable | None = None,
                 b: Callable | None = None, div_a: Callable | None = None,
                 h: float = 1e-5):
        self._a0 = a0
        self._a = a
        self._b = b
        self._div = div_a
        self.h = float(h)

    def a0(self, pt) -> float:
        return 0.0 if self._a0 is None else float(self._a0(pt))

    def a(self, pt) -> np.ndarray:
        if self._a is None:
            return np.zeros(3)
        return np.asarray(self._a(pt), dtype=float).reshape(3)

    def _d_a(self, pt, j) -> np.ndarray:
        """d a / d x_j by central difference (j = 0, 1, 2 spatial)."""
        up = np.asarray(pt, dtype=float).copy()
        dn = up.copy()
        up[j + 1] += self.h
        dn[j + 1] -= self.h
        return (self.a(up) - self.a(dn)) * (0.5 / self.h)

    def b(self, pt) -> np.ndarray:
        if self._b is not None:
            return np.asarray(self._b(pt), dtype=float).reshape(3)
        da = [self._d_a(pt, j) for j in range(3)]
        return np.array([da[1][2] - da[2][1],
                         da[2][0] - da[0][2],
                         da[0][1] - da[1][0]])

    def div_a(self, pt) -> float:
        if self._div is not None:
            return float(self._div(pt))
        return float(sum(self._d_a(pt, j)[j] for j in range(3)))


def uniform_b_field(b0: float) -> EMField:
    """Uniform magnetic field (0, 0, b0) in the symmetric gauge
    A = (B x r)/2 = (-b0 y/2, b0 x/2, 0); A0 = 0, div A = 0."""
    def a(pt):
        return np.array([-0.5 * b0 * pt[2], 0.5 * b0 * pt[1], 0.0])

    return EMField(a0=None, a=a,
                   b=lambda pt: np.array([0.0, 0.0, b0]),
                   div_a=lambda pt: 0.0)


# -- covariant derivative and geodesic residual ----------------------------


def covariant_derivative(velocity: Callable, diffusion: float, f, pt):
    """(d_t + V . grad - i D laplacian) f at pt.

    velocity is a callable pt -> 3 components (scalars or biquaternions);
    each component left-multiplies the corresponding spatial derivative
    of f.
    """
    v = velocity(pt)
    out = f.derivative(pt, (1, 0, 0, 0))
    for k in range(3):
        out = out + v[k] * f.derivative(pt, _orders_unit(k + 1))
    lap = None
    for k in range(3):
        o = [0, 0, 0, 0]
        o[k + 1] = 2
        piece = f.derivative(pt, tuple(o))
        lap = piece if lap is None else lap + piece
    return out + lap * (-1j * diffusion)


def _second(mu, nu):
    return _orders_add(_orders_unit(mu), _orders_unit(nu))


def geodesic_residual(field, diffusion: float, pt) -> list:
    """Residual of the free quaternionic geodesic equation,

        R_k = d_t G_k - 2iD [ sum_j G_j d_j G_k + (1/2) laplacian G_k ],

    with G_k = psi^-1 d_k psi.  All derivatives of G are expanded by the
    product rule into derivatives of psi (exact for exponential-sum
    fields); needs field values up to third derivatives.
    """
    inv = field.value(pt).inverse()
    d1 = [field.derivative(pt, _orders_unit(mu)) for mu in range(4)]
    g_t = inv * d1[0]
    g = [inv * d1[k] for k in (1, 2, 3)]

    # second-derivative contractions inv * d_mu_nu psi
    h = {}
    for mu in range(4):
        for nu in range(mu, 4):
            h[(mu, nu)] = inv * field.derivative(pt, _second(mu, nu))
            h[(nu, mu)] = h[(mu, nu)]

    out = []
    for k in (1, 2, 3):
        gk = g[k - 1]
        dt_gk = -(g_t * gk) + h[(0, k)]
        conv = None
        lap = None
        for j in (1, 2, 3):
            gj = g[j - 1]
            dj_gk = -(gj * gk) + h[(j, k)]
            piece = gj * dj_gk
            conv = piece if conv is None else conv + piece
            o3 = _orders_add(_second(j, j), _orders_unit(k))
            d3 = inv * field.derivative(pt, o3)
            lap_piece = (gj * (gj * gk)) * 2.0 - h[(j, j)] * gk \
                - (gj * h[(j, k)]) * 2.0 + d3
            lap = lap_piece if lap is None else lap + lap_piece
        out.append(dt_gk + (conv + lap * 0.5) * (-2j * diffusion))
    return out


# -- non-integrability witness ---------------------------------------------


def acceleration_field(field, diffusion: float, pt) -> list:
    """E_k = d_t(psi^-1 d_k psi) - 2iD d_k(laplacian(psi) psi^-1), k=1..3.

    For commuting (complex) fields this is a spatial gradient; for
    genuinely quaternionic fields its curl reduces to -d_t[G_j, G_k] and
    need not vanish.
    """
    val = field.value(pt)
    inv = val.inverse()
    d1 = [field.derivative(pt, _orders_unit(mu)) for mu in range(4)]
    g_t = inv * d1[0]
    lap = None
    for j in (1, 2, 3):
        piece = field.derivative(pt, _second(j, j))
        lap = piece if lap is None else lap + piece
    out = []
    for k in (1, 2, 3):
        gk = inv * d1[k]
        dt_gk = -(g_t * gk) + inv * field.derivative(pt, _second(0, k))
        # d_k (lap(psi) inv) = (d_k lap psi) inv - lap psi * inv d_k psi inv
        lap_k = None
        for j in (1, 2, 3):
            o3 = _orders_add(_second(j, j), _orders_unit(k))
            piece = field.derivative(pt, o3)
            lap_k = piece if lap_k is None else lap_k + piece
        grad_term = lap_k * inv - lap * (inv * (d1[k] * inv))
        out.append(dt_gk + grad_term * (-2j * diffusion))
    return out


def gradient_witness(field, diffusion: float, points, h: float = 1e-4) -> float:
    """Max curl component of the acceleration field over the sample points.

    The inner derivatives of E come from the field's own (exact or
    nested-FD) derivatives; only the outer curl is one central-difference
    level, so the noise floor for gradient-type fields is O(h^2) times
    local scale.
    """
    worst = 0.0
    for pt in points:
        pt = np.asarray(pt, dtype=float).reshape(4)
        cache: dict = {}

        def e_vec(q):
            key = tuple(q)
            if key not in cache:
                cache[key] = acceleration_field(field, diffusion, q)
            return cache[key]

        for j in (1, 2, 3):
            for k in range(j + 1, 4):
                up_j, dn_j = pt.copy(), pt.copy()
                up_j[j] += h
                dn_j[j] -= h
                d_j_ek = (e_vec(up_j)[k - 1] - e_vec(dn_j)[k - 1]) * (0.5 / h)
                up_k, dn_k = pt.copy(), pt.copy()
                up_k[k] += h
                dn_k[k] -= h
                d_k_ej = (e_vec(up_k)[j - 1] - e_vec(dn_k)[j - 1]) * (0.5 / h)
                worst = max(worst, (d_j_ek - d_k_ej).max_abs())
    return worst


def sample_box(bounds, n: int, seed: int = 0):
    """n uniform random spacetime points in the box bounds = ((lo, hi),) * 4."""
    rng = np.random.default_rng(seed)
    return [np.array([rng.uniform(lo, hi) for lo, hi in bounds])
            for _ in range(n)]


# -- two-component (Pauli) and four-component (Dirac) residuals -------------


def small_component(phi_field, em: EMField, pt, *, m: float = 1.0,
                    c: float = 1.0, hbar: float = 1.0,
                    charge: float = 1.0) -> np.ndarray:
    """Lower 2-spinor reconstructed from the upper one:
    chi = sigma . (i hbar grad - (e/c) A) phi / (2 m c)."""
    a = em.a(pt)
    pi_phi = []
    for k in range(3):
        dk = phi_field.derivative(pt, _orders_unit(k + 1))
        pi_phi.append(1j * hbar * dk - (charge / c) * a[k] * phi_field.value(pt))
    out = np.zeros(2, dtype=complex)
    for k in range(3):
        out = out + PAULI[k] @ pi_phi[k]
    return out / (2 * m * c)


def pauli_residual(phi_field, em: EMField, pt, *, m: float = 1.0,
                   c: float = 1.0, hbar: float = 1.0, charge: float = 1.0,
                   g: float = 2.0) -> np.ndarray:
    """Residual of the two-component wave equation

        -i hbar d_t phi = (1/2m)(i hbar grad - (e/c) A)^2 phi
                          - (g/2)(e hbar / 2 m c) sigma . B phi
                          + e A0 phi,

    returned as LHS - RHS.  g = 2 is what the four-component reduction
    produces; other values break the magnetic anchor on purpose.
    """
    phi = phi_field.value(pt)
    a = em.a(pt)
    b = em.b(pt)
    diva = em.div_a(pt)
    lhs = -1j * hbar * phi_field.derivative(pt, (1, 0, 0, 0))

    lap = np.zeros_like(phi)
    grad = []
    for k in range(3):
        o = [0, 0, 0, 0]
        o[k + 1] = 2
        lap = lap + phi_field.derivative(pt, tuple(o))
        grad.append(phi_field.derivative(pt, _orders_unit(k + 1)))
    a_dot_grad = sum(a[k] * grad[k] for k in range(3))
    kinetic = (-hbar**2 * lap
               - 1j * hbar * (charge / c) * (diva * phi + 2.0 * a_dot_grad)
               + (charge / c)**2 * float(a @ a) * phi)
    rhs = kinetic / (2 * m) \
        - (g / 2) * (charge * hbar / (2 * m * c)) * (sigma_dot(b) @ phi) \
        + charge * em.a0(pt) * phi
    return lhs - rhs


def gamma_matrices() -> tuple[np.ndarray, ...]:
    """Dirac-representation gamma matrices, built from the Pauli set that
    the biquaternion bridge e_k -> -i sigma_k singles out."""
    zero = np.zeros((2, 2), dtype=complex)
    g0 = np.block([[_IDENT2, zero], [zero, -_IDENT2]])
    gk = tuple(np.block([[zero, PAULI[k]], [-PAULI[k], zero]])
               for k in range(3))
    return (g0, *gk)


def dirac_residual(psi_field, em: EMField, pt, *, m: float = 1.0,
                   c: float = 1.0, hbar: float = 1.0,
                   charge: float = 1.0) -> np.ndarray:
    """Residual of the four-component equation

        [ gamma^0 (E_hat - e A0)/c - sum_k gamma^k (p_hat_k - (e/c) A_k)
          - m c ] psi = 0,

    with E_hat = -i hbar d_t and p_hat = +i hbar grad."""
    g0, g1, g2, g3 = gamma_matrices()
    gk = (g1, g2, g3)
    psi = psi_field.value(pt)
    a = em.a(pt)
    e_psi = -1j * hbar * psi_field.derivative(pt, (1, 0, 0, 0))
    out = g0 @ ((e_psi - charge * em.a0(pt) * psi) / c)
    for k in range(3):
        p_psi = 1j * hbar * psi_field.derivative(pt, _orders_unit(k + 1))
        out = out - gk[k] @ (p_psi - (charge / c) * a[k] * psi)
    return out - m * c * psi


def dirac_plane_wave(xi, p, *, m: float = 1.0, c: float = 1.0,
                     hbar: float = 1.0) -> ExponentialField:
    """Positive-energy on-shell plane wave exp(-(i/hbar)(p.r - E t)) with
    upper 2-spinor xi and lower block c sigma.p xi / (E + m c^2)."""
    p = np.asarray(p, dtype=float).reshape(3)
    xi = np.asarray(xi, dtype=complex).reshape(2)
    energy = math.sqrt(float(p @ p) * c**2 + (m * c**2) ** 2)
    lower = c * (sigma_dot(p) @ xi) / (energy + m * c**2)
    amp = np.concatenate([xi, lower])
    k4 = (1j / hbar) * np.array([energy, -p[0], -p[1], -p[2]], dtype=complex)
    return ExponentialField([(amp, k4)])


def strip_rest_phase(field: ExponentialField, *, m: float = 1.0,
                     c: float = 1.0, hbar: float = 1.0) -> ExponentialField:
    """Multiply an exponential-sum field by exp(-i m c^2 t / hbar)."""
    shift = np.array([-1j * m * c**2 / hbar, 0, 0, 0], dtype=complex)
    return ExponentialField([(amp, k + shift) for amp, k in field.terms])


def upper_components(field: ExponentialField) -> ExponentialField:
    """Project a 4-component exponential field onto its upper 2-spinor."""
    return ExponentialField([(np.asarray(amp)[:2], k)
                             for amp, k in field.terms])
