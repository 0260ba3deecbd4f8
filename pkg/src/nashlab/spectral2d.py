"""Periodic pseudo-spectral solver for 2D vorticity (and passive scalars).

Conventions
-----------
A :class:`GridField` samples a scalar on an ``n x n`` uniform grid of the
periodic square of side ``length`` (``2*pi`` for the solver, ``1`` for the
Cantor fields).  Axis 0 is ``x``, axis 1 is ``y``.  Fourier coefficients are
``fft2(values) / n**2`` so that ``f(x) = sum_k c_k exp(i k.x)``; all norms use
the true Lebesgue measure of the torus, e.g. ``||f||^2 = vol * sum |c_k|^2``.

Velocity is recovered from vorticity by ``u = grad^perp (-Delta)^{-1} omega``
with ``grad^perp = (d_y, -d_x)`` so that ``curl u = d_x u_2 - d_y u_1 = omega``.
"""
from __future__ import annotations

import csv
import dataclasses
import struct
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np
from scipy import special

from .errors import CflViolation, NonFinite, ResolutionError

TWO_PI = 2.0 * np.pi

CONVENTION_TAGS = {TWO_PI: b"TORUS2PI", 1.0: b"TORUS1\x00\x00"}


def wavenumbers(n, length=TWO_PI):
    """Angular wavenumber grids ``(kx, ky)`` with ``ij`` indexing."""
    k = np.fft.fftfreq(n, d=1.0 / n) * (TWO_PI / length)
    return np.meshgrid(k, k, indexing="ij")


def dealias_mask(n):
    """2/3-rule mask: keep integer modes with ``|m| < n/3`` in each direction."""
    m = np.abs(np.fft.fftfreq(n, d=1.0 / n))
    keep = m < n / 3.0
    return keep[:, None] & keep[None, :]


@dataclass(frozen=True)
class GridField:
    values: np.ndarray
    length: float = TWO_PI
    # grid points at (i + offset) * spacing; 0.5 means cell centres
    offset: float = 0.0

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ValueError(f"expected a square 2D array, got shape {v.shape}")
        object.__setattr__(self, "values", v)

    @classmethod
    def from_function(cls, func, n, length=TWO_PI, offset=0.0):
        x = (np.arange(n) + offset) * (length / n)
        X, Y = np.meshgrid(x, x, indexing="ij")
        return cls(func(X, Y), length=length, offset=offset)

    @classmethod
    def from_spectrum(cls, coeffs, length=TWO_PI, offset=0.0):
        n = coeffs.shape[0]
        return cls(np.real(np.fft.ifft2(coeffs * n * n)), length=length, offset=offset)

    @property
    def n(self):
        return self.values.shape[0]

    @property
    def spacing(self):
        return self.length / self.n

    @property
    def volume(self):
        return self.length**2

    @property
    def coords(self):
        x = (np.arange(self.n) + self.offset) * self.spacing
        return np.meshgrid(x, x, indexing="ij")

    @cached_property
    def spectrum(self):
        return np.fft.fft2(self.values) / self.n**2

    @cached_property
    def k(self):
        return wavenumbers(self.n, self.length)

    @property
    def mean(self):
        return float(np.real(self.spectrum[0, 0]))

    def with_values(self, values):
        return GridField(values, length=self.length, offset=self.offset)

    def __neg__(self):
        return self.with_values(-self.values)

    def __mul__(self, scalar):
        return self.with_values(self.values * scalar)

    __rmul__ = __mul__


# ---------------------------------------------------------------- norms


def l1_norm(f: GridField) -> float:
    return float(np.sum(np.abs(f.values)) * f.spacing**2)


def l2_norm_sq(f: GridField) -> float:
    return float(f.volume * np.sum(np.abs(f.spectrum) ** 2))


def h1_seminorm_sq(f: GridField) -> float:
    kx, ky = f.k
    return float(f.volume * np.sum((kx**2 + ky**2) * np.abs(f.spectrum) ** 2))


def h_minus_1_sq(f: GridField) -> float:
    """Homogeneous negative Sobolev norm ``vol * sum_{k!=0} |c_k|^2/|k|^2``."""
    kx, ky = f.k
    k2 = kx**2 + ky**2
    k2[0, 0] = np.inf
    return float(f.volume * np.sum(np.abs(f.spectrum) ** 2 / k2))


def sup_norm(f: GridField) -> float:
    return float(np.max(np.abs(f.values)))


def gradient(f: GridField):
    kx, ky = f.k
    c = f.spectrum
    n2 = f.n**2
    return (np.real(np.fft.ifft2(1j * kx * c * n2)), np.real(np.fft.ifft2(1j * ky * c * n2)))


def upsample(f: GridField, factor: int) -> GridField:
    """Band-limited interpolation by zero padding (Nyquist row dropped)."""
    n, m = f.n, f.n * factor
    c = f.spectrum
    half = (n - 1) // 2
    idx = np.r_[0 : half + 1, n - half : n]
    jdx = np.r_[0 : half + 1, m - half : m]
    big = np.zeros((m, m), dtype=complex)
    big[np.ix_(jdx, jdx)] = c[np.ix_(idx, idx)]
    return GridField.from_spectrum(big, length=f.length, offset=f.offset * factor)


def continuum_sup(f: GridField, upsample_factor=4, n_candidates=6, newton_steps=8) -> float:
    """Sup of |f| over the continuum, treating f as its trigonometric interpolant.

    Starts from the largest local maxima of an upsampled grid and polishes each
    with Newton steps on the exact Fourier series.
    """
    up = upsample(f, upsample_factor)
    a = np.abs(up.values)
    flat = np.argsort(a, axis=None)[::-1][: 4 * n_candidates]
    X, Y = up.coords
    kx, ky = f.k
    c = f.spectrum
    mask = np.abs(c) > 1e-15 * np.max(np.abs(c))
    kxm, kym, cm = kx[mask], ky[mask], c[mask]
    best = float(a.max())
    seen = []
    for idx in flat:
        i, j = np.unravel_index(idx, a.shape)
        p = np.array([X[i, j], Y[i, j]])
        if any(np.hypot(*(p - q)) < 2 * up.spacing for q in seen):
            continue
        seen.append(p)
        if len(seen) > n_candidates:
            break
        sign = np.sign(up.values[i, j]) or 1.0
        for _ in range(newton_steps):
            e = cm * np.exp(1j * (kxm * p[0] + kym * p[1]))
            g = sign * np.real(np.array([np.sum(1j * kxm * e), np.sum(1j * kym * e)]))
            hxx = sign * np.real(np.sum(-kxm * kxm * e))
            hxy = sign * np.real(np.sum(-kxm * kym * e))
            hyy = sign * np.real(np.sum(-kym * kym * e))
            H = np.array([[hxx, hxy], [hxy, hyy]])
            try:
                stepv = np.linalg.solve(H, g)
            except np.linalg.LinAlgError:
                break
            if np.hypot(*stepv) > up.spacing:  # not in the Newton basin of this peak
                break
            p = p - stepv
        val = abs(float(np.real(np.sum(cm * np.exp(1j * (kxm * p[0] + kym * p[1]))))))
        best = max(best, val)
    return best


# ---------------------------------------------------------------- Biot-Savart


def biot_savart(omega_hat, kx, ky, mean_velocity=(0.0, 0.0)):
    """Velocity Fourier coefficients from vorticity coefficients."""
    k2 = kx**2 + ky**2
    k2 = np.where(k2 == 0, 1.0, k2)
    u_hat = 1j * ky * omega_hat / k2
    v_hat = -1j * kx * omega_hat / k2
    u_hat[0, 0] = mean_velocity[0]
    v_hat[0, 0] = mean_velocity[1]
    return u_hat, v_hat


def divergence(u, v, length=TWO_PI):
    n = u.shape[0]
    kx, ky = wavenumbers(n, length)
    return np.real(np.fft.ifft2(1j * kx * np.fft.fft2(u) + 1j * ky * np.fft.fft2(v)))


def curl(u, v, length=TWO_PI):
    n = u.shape[0]
    kx, ky = wavenumbers(n, length)
    return np.real(np.fft.ifft2(1j * kx * np.fft.fft2(v) - 1j * ky * np.fft.fft2(u)))


# ---------------------------------------------------------------- solver


@dataclass(frozen=True)
class SolverConfig:
    cfl: float = 0.4
    # step() refuses dt with dt*|u|_inf/h above this
    cfl_limit: float = 1.0
    dealias: bool = True
    integrator: str = "ifrk4"
    dt_max: float | None = None
    mean_velocity: tuple = (0.0, 0.0)
    # prescribed divergence-free (u, v) grid arrays -> passive scalar mode
    velocity: tuple | None = None


@dataclass(frozen=True)
class SolverState:
    omega: GridField
    viscosity: float
    time: float = 0.0
    step_count: int = 0
    config: SolverConfig = field(default_factory=SolverConfig)


class _Operators:
    """Per-grid spectral operators, cached by (n, length)."""

    _cache: dict = {}

    def __init__(self, n, length):
        self.kx, self.ky = wavenumbers(n, length)
        self.k2 = self.kx**2 + self.ky**2
        self.mask = dealias_mask(n)
        self.n = n
        self.h = length / n

    @classmethod
    def get(cls, n, length):
        key = (n, float(length))
        if key not in cls._cache:
            cls._cache[key] = cls(n, length)
        return cls._cache[key]


def _velocity(ops, w_hat, config):
    n2 = ops.n**2
    if config.velocity is not None:
        return config.velocity
    u_hat, v_hat = biot_savart(w_hat, ops.kx, ops.ky, config.mean_velocity)
    return np.real(np.fft.ifft2(u_hat * n2)), np.real(np.fft.ifft2(v_hat * n2))


def _nonlinear(ops, w_hat, config):
    """Coefficients of -(u . grad w), dealiased."""
    n2 = ops.n**2
    u, v = _velocity(ops, w_hat, config)
    wx = np.real(np.fft.ifft2(1j * ops.kx * w_hat * n2))
    wy = np.real(np.fft.ifft2(1j * ops.ky * w_hat * n2))
    nl = -np.fft.fft2(u * wx + v * wy) / n2
    if config.dealias:
        nl = nl * ops.mask
    nl[0, 0] = 0.0
    return nl


def max_velocity(state: SolverState) -> float:
    ops = _Operators.get(state.omega.n, state.omega.length)
    u, v = _velocity(ops, state.omega.spectrum, state.config)
    return float(np.max(np.hypot(u, v)))


def stable_dt(state: SolverState) -> float:
    """Advective CFL step ``cfl * h / |u|_inf`` (capped by ``dt_max``)."""
    umax = max_velocity(state)
    dt = np.inf if umax == 0 else state.config.cfl * state.omega.spacing / umax
    if state.config.dt_max is not None:
        dt = min(dt, state.config.dt_max)
    return dt


def step(state: SolverState, dt: float | None = None) -> SolverState:
    """One integrating-factor RK4 step; diffusion is integrated exactly."""
    ops = _Operators.get(state.omega.n, state.omega.length)
    cfg = state.config
    if dt is None:
        dt = stable_dt(state)
        if not np.isfinite(dt):
            raise CflViolation("no finite CFL step (zero velocity and no dt_max)")
    else:
        umax = max_velocity(state)
        if dt * umax / ops.h > cfg.cfl_limit:
            raise CflViolation(f"dt={dt:.3e} gives Courant number {dt * umax / ops.h:.3f} > {cfg.cfl_limit}")

    w = state.omega.spectrum
    lin = -state.viscosity * ops.k2
    E = np.exp(lin * dt)
    E2 = np.exp(lin * dt / 2)
    a = _nonlinear(ops, w, cfg)
    b = _nonlinear(ops, E2 * (w + 0.5 * dt * a), cfg)
    c = _nonlinear(ops, E2 * w + 0.5 * dt * b, cfg)
    d = _nonlinear(ops, E * w + dt * E2 * c, cfg)
    w_new = E * w + dt / 6.0 * (E * a + 2.0 * E2 * (b + c) + d)
    w_new[0, 0] = w[0, 0]

    if not np.all(np.isfinite(w_new)):
        raise NonFinite(f"non-finite vorticity at step {state.step_count + 1}")
    omega = GridField.from_spectrum(w_new, length=state.omega.length, offset=state.omega.offset)
    return dataclasses.replace(state, omega=omega, time=state.time + dt, step_count=state.step_count + 1)


# ---------------------------------------------------------------- diagnostics


@dataclass(frozen=True)
class Diagnostics:
    energy: float
    enstrophy: float
    palinstrophy: float
    h_minus_1: float
    sup_norm: float
    ball_mass: dict | None = None


def disk_kernel_hat(r, kx, ky):
    """Fourier transform of the indicator of a radius-r disk: 2 pi r J1(r|k|)/|k|."""
    k = np.hypot(kx, ky)
    out = np.empty_like(k)
    nz = k > 0
    out[nz] = TWO_PI * r * special.j1(r * k[nz]) / k[nz]
    out[~nz] = np.pi * r * r
    return out


def ball_mass_spectral(f: GridField, r: float) -> float:
    """max over grid points x of the |f|-mass of B_r(x), via spectral convolution."""
    if 2 * r >= f.length:
        raise ResolutionError("ball diameter exceeds the torus period")
    kx, ky = f.k
    conv = np.real(np.fft.ifft2(np.fft.fft2(np.abs(f.values)) * disk_kernel_hat(r, kx, ky)))
    return float(conv.max())


def diagnostics(state: SolverState, with_ball_mass=None) -> Diagnostics:
    f = state.omega
    cfg = state.config
    if cfg.velocity is None:
        kx, ky = f.k
        u_hat, v_hat = biot_savart(f.spectrum, kx, ky, cfg.mean_velocity)
        energy = 0.5 * f.volume * float(np.sum(np.abs(u_hat) ** 2 + np.abs(v_hat) ** 2))
    else:
        # passive scalar: report the H^-1 "energy" of the scalar itself
        energy = 0.5 * h_minus_1_sq(f)
    balls = None
    if with_ball_mass is not None:
        balls = {float(r): ball_mass_spectral(f, r) for r in with_ball_mass}
    return Diagnostics(
        energy=energy,
        enstrophy=l2_norm_sq(f),
        palinstrophy=h1_seminorm_sq(f),
        h_minus_1=h_minus_1_sq(f),
        sup_norm=sup_norm(f),
        ball_mass=balls,
    )


@dataclass
class DissipationRecord:
    nu: float
    times: np.ndarray
    enstrophy: np.ndarray
    cum_dissipation: np.ndarray
    energy: np.ndarray | None = None
    palinstrophy: np.ndarray | None = None
    h_minus_1: np.ndarray | None = None
    sup_norm: np.ndarray | None = None
    convention: str = "torus"
    metadata: dict = field(default_factory=dict)

    def dissipation(self, t0=None, t1=None):
        """nu * int_{t0}^{t1} enstrophy, trapezoid on the snapshot grid."""
        t, z = self.times, self.enstrophy
        sel = np.ones_like(t, dtype=bool)
        if t0 is not None:
            sel &= t >= t0
        if t1 is not None:
            sel &= t <= t1
        return float(self.nu * np.trapezoid(z[sel], t[sel]))


def _trapz_cumulative(y, t):
    out = np.zeros_like(y)
    out[1:] = np.cumsum(0.5 * (y[1:] + y[:-1]) * np.diff(t))
    return out


def run_to(state: SolverState, T: float, snapshot_every: int = 1):
    """Advance to time T; return ``(final_state, DissipationRecord)``.

    The dt sequence depends only on the state, so runs are reproducible.
    Snapshots are taken every ``snapshot_every`` steps and at T.
    """
    if T <= state.time:
        raise ValueError("T must exceed the current time")
    snaps = [(state.time, diagnostics(state))]
    while state.time < T * (1 - 1e-14):
        dt = stable_dt(state)
        if not np.isfinite(dt):
            dt = T - state.time
        dt = min(dt, T - state.time)
        state = step(state, dt)
        if state.step_count % snapshot_every == 0 or state.time >= T * (1 - 1e-14):
            snaps.append((state.time, diagnostics(state)))
    times = np.array([s[0] for s in snaps])
    diag = [s[1] for s in snaps]
    z = np.array([d.enstrophy for d in diag])
    rec = DissipationRecord(
        nu=state.viscosity,
        times=times,
        enstrophy=z,
        cum_dissipation=state.viscosity * _trapz_cumulative(z, times),
        energy=np.array([d.energy for d in diag]),
        palinstrophy=np.array([d.palinstrophy for d in diag]),
        h_minus_1=np.array([d.h_minus_1 for d in diag]),
        sup_norm=np.array([d.sup_norm for d in diag]),
        convention=f"torus:L={state.omega.length:.12g}",
        metadata={"n": state.omega.n, "steps": state.step_count, "cfl": state.config.cfl},
    )
    return state, rec


def balance_residuals(record: DissipationRecord):
    """Relative residuals of the energy identity and the enstrophy balance.

    energy:    E(t) + nu int_0^t Z  - E(0)
    enstrophy: Z(t) + 2 nu int_0^t P - Z(0)
    Each is the max over snapshots divided by the initial value.
    """
    t = record.times
    nu = record.nu
    e_res = record.energy + nu * _trapz_cumulative(record.enstrophy, t) - record.energy[0]
    z_res = record.enstrophy + 2 * nu * _trapz_cumulative(record.palinstrophy, t) - record.enstrophy[0]

    def rel(res, scale):
        m = float(np.max(np.abs(res)))
        return m / scale if scale > 0 else m

    return rel(e_res, record.energy[0]), rel(z_res, record.enstrophy[0])


# ---------------------------------------------------------------- data helpers


def taylor_green(n, amplitude=1.0) -> GridField:
    """omega = a cos x cos y on the 2 pi torus (single shell |k|^2 = 2)."""
    return GridField.from_function(lambda x, y: amplitude * np.cos(x) * np.cos(y), n)


def random_smooth_field(n, kmax=4, seed=0, length=TWO_PI, amplitude=1.0) -> GridField:
    """Zero-mean random trigonometric polynomial with modes |k_i| <= kmax."""
    rng = np.random.default_rng(seed)
    c = np.zeros((n, n), dtype=complex)
    m = np.fft.fftfreq(n, d=1.0 / n)
    M1, M2 = np.meshgrid(m, m, indexing="ij")
    band = (np.abs(M1) <= kmax) & (np.abs(M2) <= kmax)
    c[band] = rng.normal(size=band.sum()) + 1j * rng.normal(size=band.sum())
    c[0, 0] = 0
    vals = np.real(np.fft.ifft2(c))
    vals *= amplitude / np.max(np.abs(vals))
    return GridField(vals, length=length)


def gaussian_mollify(f: GridField, scale: float) -> GridField:
    """Convolve with a unit-mass Gaussian of standard deviation ``scale``."""
    kx, ky = f.k
    filt = np.exp(-0.5 * scale**2 * (kx**2 + ky**2))
    return GridField.from_spectrum(f.spectrum * filt, length=f.length, offset=f.offset)


# ---------------------------------------------------------------- I/O

_HEADER = struct.Struct("<4sIIddd8s")
_MAGIC = b"NSVT"


def save_checkpoint(state: SolverState, path):
    """Flat little-endian binary: header then row-major float64 values."""
    f = state.omega
    tag = CONVENTION_TAGS.get(float(f.length), b"TORUSL\x00\x00")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(_MAGIC, 1, f.n, f.length, state.time, state.viscosity, tag))
        fh.write(np.ascontiguousarray(f.values, dtype="<f8").tobytes())


def load_checkpoint(path, config: SolverConfig | None = None) -> SolverState:
    raw = Path(path).read_bytes()
    magic, version, n, length, time, nu, _tag = _HEADER.unpack_from(raw)
    if magic != _MAGIC or version != 1:
        raise ValueError(f"{path}: not a vorticity checkpoint")
    vals = np.frombuffer(raw, dtype="<f8", offset=_HEADER.size, count=n * n).reshape(n, n)
    return SolverState(
        omega=GridField(vals.copy(), length=length), viscosity=nu, time=time, config=config or SolverConfig()
    )


DIAG_COLUMNS = ("t", "energy", "enstrophy", "palinstrophy", "h_minus_1", "sup_norm", "cum_dissipation")


def write_diagnostics_csv(record: DissipationRecord, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(DIAG_COLUMNS)
        for i, t in enumerate(record.times):
            w.writerow(
                [
                    repr(float(t)),
                    repr(float(record.energy[i])),
                    repr(float(record.enstrophy[i])),
                    repr(float(record.palinstrophy[i])),
                    repr(float(record.h_minus_1[i])),
                    repr(float(record.sup_norm[i])),
                    repr(float(record.cum_dissipation[i])),
                ]
            )
