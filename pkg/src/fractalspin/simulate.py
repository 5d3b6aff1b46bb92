"""Deterministic and stochastic integration of the spiral drift field.

The drift is the velocity extracted from a spiraling two-term spinor
superposition:

    vx = -(sigma0/m) y / (x^2 + y^2)
    vy = +(sigma0/m) x / (x^2 + y^2)
    vz = p0 / m

a rigid rotation about the z axis (tangential speed sigma0/(m rho))
superposed on uniform axial motion.  The deterministic integrator is
classical RK4; it conserves rho and the angular momentum m(x vy - y vx)
to round-off-dominated accuracy.  The stochastic integrator is
Euler-Maruyama with increments

    dX = v(X) dt + eta sqrt(2 D dt),   eta ~ N(0, 1) per component,

with the drift denominator regularized as max(rho^2, r_min^2) so a path
that diffuses through the axis does not blow up; r_min defaults to ten
noise step lengths, 10 sqrt(2 D dt).

Seeding: one master integer seed; per-trajectory generators are
Philox(SeedSequence(master).spawn(i)), so every trajectory is independent
and bit-reproducible regardless of how the ensemble is blocked.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import AxisSingularity, InsufficientData

_BLOCK = 512  # paths per vectorized ensemble block (does not affect results)


@dataclass
class SimConfig:
    diffusion: float = 0.05
    dt: float = 0.01
    n_steps: int = 2000
    seed: int = 0
    m: float = 1.0
    p0: float = 1.0
    sigma0: float = 0.5
    x0: tuple = (1.0, 0.0, 0.0)
    n_traj: int = 1
    r_min: float | None = None

    def core_radius(self) -> float:
        if self.r_min is not None:
            return float(self.r_min)
        return 10.0 * math.sqrt(2.0 * self.diffusion * self.dt)


def spiral_preset(**overrides) -> SimConfig:
    """Demo parameters: D = 0.05, dt = 0.01, sigma0 = 1/2, p0 = 1, m = 1
    (so hbar = 2 m D = 0.1 and sigma0 = 5 hbar), started at (1, 0, 0)."""
    return replace(SimConfig(), **overrides)


@dataclass
class Trajectory:
    times: np.ndarray
    positions: np.ndarray
    config: SimConfig


def spiral_drift(pos, m: float, p0: float, sigma0: float,
                 r_min: float = 0.0) -> np.ndarray:
    """Raw drift velocity; raises AxisSingularity at rho^2 <= r_min^2."""
    x, y = float(pos[0]), float(pos[1])
    rho2 = x * x + y * y
    if rho2 <= r_min * r_min:
        raise AxisSingularity(
            f"drift evaluated at rho = {math.sqrt(rho2):.3e} "
            f"inside core radius {r_min:.3e}")
    return np.array([-(sigma0 / m) * y / rho2,
                     (sigma0 / m) * x / rho2,
                     p0 / m])


def _drift_block(x: np.ndarray, m: float, p0: float, sigma0: float,
                 r_min: float) -> np.ndarray:
    """Regularized drift for a block of positions, shape (n, 3)."""
    rho2 = x[:, 0] ** 2 + x[:, 1] ** 2
    denom = np.maximum(rho2, r_min * r_min)
    out = np.empty_like(x)
    out[:, 0] = -(sigma0 / m) * x[:, 1] / denom
    out[:, 1] = (sigma0 / m) * x[:, 0] / denom
    out[:, 2] = p0 / m
    return out


def integrate_deterministic(cfg: SimConfig) -> Trajectory:
    """Classical fixed-step RK4 on the raw (unregularized) drift."""
    r_min = 0.0 if cfg.r_min is None else cfg.r_min
    dt = cfg.dt
    x = np.asarray(cfg.x0, dtype=float).copy()
    out = np.empty((cfg.n_steps + 1, 3))
    out[0] = x
    for n in range(cfg.n_steps):
        k1 = spiral_drift(x, cfg.m, cfg.p0, cfg.sigma0, r_min)
        k2 = spiral_drift(x + 0.5 * dt * k1, cfg.m, cfg.p0, cfg.sigma0, r_min)
        k3 = spiral_drift(x + 0.5 * dt * k2, cfg.m, cfg.p0, cfg.sigma0, r_min)
        k4 = spiral_drift(x + dt * k3, cfg.m, cfg.p0, cfg.sigma0, r_min)
        x = x + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        out[n + 1] = x
    times = np.arange(cfg.n_steps + 1) * dt
    return Trajectory(times, out, cfg)


def _child_generators(seed, n: int):
    master = seed if isinstance(seed, np.random.SeedSequence) \
        else np.random.SeedSequence(seed)
    return [np.random.Generator(np.random.Philox(child))
            for child in master.spawn(n)]


def _integrate_noise_block(cfg: SimConfig, noise: np.ndarray) -> np.ndarray:
    """Euler-Maruyama for a block of paths sharing a config.

    noise has shape (n_paths, n_steps, 3) and is the raw eta draw; the
    sqrt(2 D dt) scale is applied here.  Returns (n_paths, n_steps+1, 3).
    """
    n_paths, n_steps, _ = noise.shape
    r_min = cfg.core_radius()
    step_scale = math.sqrt(2.0 * cfg.diffusion * cfg.dt)
    x = np.tile(np.asarray(cfg.x0, dtype=float), (n_paths, 1))
    out = np.empty((n_paths, n_steps + 1, 3))
    out[:, 0] = x
    for n in range(n_steps):
        v = _drift_block(x, cfg.m, cfg.p0, cfg.sigma0, r_min)
        x = x + v * cfg.dt + noise[:, n] * step_scale
        out[:, n + 1] = x
    return out


def integrate_stochastic(cfg: SimConfig, seed=None) -> Trajectory:
    """One Euler-Maruyama path.

    seed defaults to cfg.seed and may be an int, a SeedSequence, or a
    Generator.  Ensembles hand each trajectory i the child sequence
    SeedSequence(master).spawn(i), so running this function with that
    child reproduces ensemble path i bit for bit.
    """
    if seed is None:
        seed = cfg.seed
    gen = seed if isinstance(seed, np.random.Generator) \
        else np.random.Generator(np.random.Philox(seed))
    noise = gen.standard_normal((1, cfg.n_steps, 3))
    paths = _integrate_noise_block(cfg, noise)
    times = np.arange(cfg.n_steps + 1) * cfg.dt
    return Trajectory(times, paths[0], cfg)


def lz_series(traj: Trajectory, mode: str = "forward") -> np.ndarray:
    """Angular momentum about z along the path, m (x vy - y vx), with
    finite-difference velocities.

    forward: v_n = (x_{n+1} - x_n)/dt at the left point (natural for
    stochastic paths); central: interior second-order differences (use
    for smooth deterministic paths).
    """
    x = traj.positions
    dt = traj.config.dt
    m = traj.config.m
    if mode == "forward":
        v = (x[1:] - x[:-1]) / dt
        base = x[:-1]
    elif mode == "central":
        v = (x[2:] - x[:-2]) / (2 * dt)
        base = x[1:-1]
    else:
        raise ValueError(f"mode must be 'forward' or 'central', got {mode!r}")
    return m * (base[:, 0] * v[:, 1] - base[:, 1] * v[:, 0])


def two_sided_velocity(traj: Trajectory, i: int) -> tuple[np.ndarray, np.ndarray]:
    """Forward and backward difference quotients at step i:
    v+ = (x_{i+1} - x_i)/dt,  v- = (x_i - x_{i-1})/dt.

    For a diffusive path the two pick up independent noise of variance
    2D/dt per component, so RMS(v+ - v-) = 2 sqrt(D/dt)."""
    if not 0 < i < len(traj.positions) - 1:
        raise IndexError(f"need an interior step, got i = {i}")
    x = traj.positions
    dt = traj.config.dt
    return (x[i + 1] - x[i]) / dt, (x[i] - x[i - 1]) / dt


def default_lags(n_steps: int, max_lag: int = 100) -> np.ndarray:
    top = min(max_lag, max(n_steps // 5, 1))
    lags = np.unique(np.geomspace(1, top, 16).astype(int))
    return lags


def rms_increments(positions: np.ndarray, lags) -> tuple[np.ndarray, np.ndarray]:
    """RMS vector increment per lag, pooled over paths.

    positions: (n+1, 3) single path or (paths, n+1, 3).
    Returns (counts, rms) arrays aligned with lags.
    """
    x = np.asarray(positions, dtype=float)
    if x.ndim == 2:
        x = x[None]
    counts = np.empty(len(lags), dtype=int)
    rms = np.empty(len(lags))
    for i, lag in enumerate(lags):
        d = x[:, lag:] - x[:, :-lag]
        sq = np.sum(d * d, axis=-1)
        counts[i] = sq.size
        rms[i] = math.sqrt(float(np.mean(sq)))
    return counts, rms


@dataclass
class ScalingResult:
    hurst: float
    fractal_dimension: float
    lag_times: np.ndarray
    rms: np.ndarray


def increment_scaling(positions: np.ndarray, dt: float, lags=None,
                      min_increments: int = 1000,
                      min_decades: float = 2.0) -> ScalingResult:
    """Hurst exponent from the log-log slope of RMS increment vs lag,
    and the fractal dimension D_F = 1/H.

    Raises InsufficientData when the largest lag has fewer than
    min_increments increments (pooled over paths) or the lags span fewer
    than min_decades decades.
    """
    x = np.asarray(positions, dtype=float)
    n_steps = x.shape[-2] - 1
    lags = np.asarray(default_lags(n_steps) if lags is None else lags,
                      dtype=int)
    if lags.min() < 1 or lags.max() >= n_steps + 1:
        raise ValueError("lags must lie within the trajectory length")
    span = math.log10(lags.max() / lags.min())
    if span < min_decades:
        raise InsufficientData(
            f"lag span {span:.2f} decades < {min_decades:.2f}")
    counts, rms = rms_increments(x, lags)
    if counts[-1] < min_increments:
        raise InsufficientData(
            f"only {counts[-1]} increments at the largest lag "
            f"(need {min_increments})")
    lag_times = lags * dt
    slope, _ = np.polyfit(np.log(lag_times), np.log(rms), 1)
    return ScalingResult(float(slope), 1.0 / float(slope), lag_times, rms)


def crossover_lag(lag_times: np.ndarray, rms: np.ndarray,
                  threshold: float = 0.75) -> float:
    """Lag time where the local log-log slope first crosses the threshold
    (1/2 on the diffusive side, 1 on the ballistic side), interpolated in
    log space.  Raises InsufficientData if no crossing is bracketed."""
    lt = np.log(np.asarray(lag_times, dtype=float))
    lr = np.log(np.asarray(rms, dtype=float))
    slopes = np.diff(lr) / np.diff(lt)
    mids = 0.5 * (lt[1:] + lt[:-1])
    for i in range(len(slopes) - 1):
        s0, s1 = slopes[i], slopes[i + 1]
        if (s0 - threshold) * (s1 - threshold) <= 0 and s0 != s1:
            f = (threshold - s0) / (s1 - s0)
            return float(np.exp(mids[i] + f * (mids[i + 1] - mids[i])))
    raise InsufficientData("no slope crossover bracketed by the lag range")


@dataclass
class EnsembleResult:
    n_traj: int
    seed: int
    hurst: float | None
    fractal_dimension: float | None
    lz_mean: float
    lz_std: float
    increment_var: np.ndarray
    mean_path: np.ndarray
    mean_final: np.ndarray
    lag_times: np.ndarray | None = None
    lag_rms: np.ndarray | None = None
    eta_mean: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def to_dict(self) -> dict:
        return {
            "n_traj": self.n_traj,
            "seed": self.seed,
            "H": self.hurst,
            "D_F": self.fractal_dimension,
            "Lz_mean": self.lz_mean,
            "Lz_std": self.lz_std,
            "increment_var": [float(v) for v in self.increment_var],
            "mean_final": [float(v) for v in self.mean_final],
        }


def ensemble_run(cfg: SimConfig, lags=None) -> EnsembleResult:
    """Integrate cfg.n_traj stochastic paths and pool their statistics.

    Per-path angular momenta are time averages of the forward-difference
    L_z; increment_var is the per-component variance of one-step
    displacement increments divided by dt (so pure diffusion gives 2D per
    component); the Hurst exponent is fitted on pooled RMS increments
    (None when the lag window would be too narrow to be meaningful).
    """
    lags = np.asarray(default_lags(cfg.n_steps) if lags is None else lags,
                      dtype=int)
    gens = _child_generators(cfg.seed, cfg.n_traj)

    sq_sums = np.zeros(len(lags))
    sq_counts = np.zeros(len(lags), dtype=np.int64)
    lz_means = []
    inc_sum = np.zeros(3)
    inc_sq = np.zeros(3)
    inc_n = 0
    eta_sum = np.zeros(3)
    path_sum = np.zeros((cfg.n_steps + 1, 3))

    for start in range(0, cfg.n_traj, _BLOCK):
        block_gens = gens[start:start + _BLOCK]
        noise = np.stack([g.standard_normal((cfg.n_steps, 3))
                          for g in block_gens])
        paths = _integrate_noise_block(cfg, noise)
        eta_sum += noise.sum(axis=(0, 1))
        path_sum += paths.sum(axis=0)

        inc = paths[:, 1:] - paths[:, :-1]
        inc_sum += inc.sum(axis=(0, 1))
        inc_sq += (inc ** 2).sum(axis=(0, 1))
        inc_n += inc.shape[0] * inc.shape[1]

        for i, lag in enumerate(lags):
            d = paths[:, lag:] - paths[:, :-lag]
            sq = np.sum(d * d, axis=-1)
            sq_sums[i] += float(sq.sum())
            sq_counts[i] += sq.size

        pos = paths[:, :-1]
        v = (paths[:, 1:] - paths[:, :-1]) / cfg.dt
        lz = cfg.m * (pos[..., 0] * v[..., 1] - pos[..., 1] * v[..., 0])
        lz_means.extend(np.mean(lz, axis=1))

    mean_inc = inc_sum / inc_n
    inc_var = (inc_sq / inc_n - mean_inc ** 2) / cfg.dt
    rms = np.sqrt(sq_sums / sq_counts)
    lag_times = lags * cfg.dt

    hurst = None
    span = math.log10(lags.max() / max(lags.min(), 1))
    if span >= 2.0 and sq_counts[-1] >= 1000:
        slope, _ = np.polyfit(np.log(lag_times), np.log(rms), 1)
        hurst = float(slope)

    lz_means = np.asarray(lz_means)
    return EnsembleResult(
        n_traj=cfg.n_traj,
        seed=cfg.seed,
        hurst=hurst,
        fractal_dimension=None if hurst is None else 1.0 / hurst,
        lz_mean=float(np.mean(lz_means)),
        lz_std=float(np.std(lz_means)),
        increment_var=inc_var,
        mean_path=path_sum / cfg.n_traj,
        mean_final=path_sum[-1] / cfg.n_traj,
        lag_times=lag_times,
        lag_rms=rms,
        eta_mean=eta_sum / (cfg.n_traj * cfg.n_steps),
    )
