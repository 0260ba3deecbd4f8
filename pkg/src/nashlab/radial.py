"""Whole-plane radial heat-flow examples.

A radial vorticity evolves by the heat equation (the nonlinearity vanishes),
so everything reduces to 1D radial integrals.  Fourier convention:
``f^(xi) = int f(x) exp(-i x.xi) dx``, Plancherel ``||f||^2 = (2 pi)^-2 ||f^||^2``.
For a radial f the transform is ``2 pi int f(r) J0(rho r) r dr`` and

    ||e^{s Delta} f||^2 = (1 / 2 pi) int |f^(rho)|^2 exp(-2 s rho^2) rho drho.

Three examples live here: the uniform measure on the unit circle (transform
``2 pi J0``), a rescaled smooth bump, and the integrable datum
``1 / (|x|^2 |log|x||^{3/2})`` on the disk of radius 1/2.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate, interpolate, special

from .errors import DomainError, ParameterError, QuadratureFailure

TWO_PI = 2.0 * math.pi
# exp(-GAUSS_CUT) = 1e-18: where the heat factor is dropped
GAUSS_CUT = 18.0 * math.log(10.0)


# ---------------------------------------------------------------- Bessel J0

_SERIES_TERMS = 40
_TRAP_POINTS = 128
_HANKEL_TERMS = 24


def _j0_series(x):
    q = -0.25 * x * x
    term = np.ones_like(x)
    total = term.copy()
    for k in range(1, _SERIES_TERMS):
        term = term * q / (k * k)
        total += term
    return total


def _j0_trapezoid(x, chunk=4096):
    # J0(x) = (1/2pi) int_0^{2pi} cos(x sin t) dt; the periodic trapezoid rule
    # with M nodes errs by about 2 J_M(x), negligible for M = 128 and x < 25
    th = TWO_PI * np.arange(_TRAP_POINTS) / _TRAP_POINTS
    s = np.sin(th)
    out = np.empty_like(x)
    for i in range(0, x.size, chunk):
        xs = x[i : i + chunk]
        out[i : i + chunk] = np.cos(xs[:, None] * s[None, :]).mean(axis=1)
    return out


def _j0_hankel(x):
    # asymptotic P, Q series; terms c_k = prod_{j<=k} (-(2j-1)^2) / (k! (8x)^k)
    inv8x = 1.0 / (8.0 * x)
    c = np.ones_like(x)
    P = np.ones_like(x)
    Q = np.zeros_like(x)
    for k in range(1, _HANKEL_TERMS):
        c = c * (-((2 * k - 1) ** 2)) * inv8x / k
        if k % 2 == 0:
            P += (-1) ** (k // 2) * c
        else:
            Q += (-1) ** ((k - 1) // 2) * c
    chi = x - 0.25 * math.pi
    return np.sqrt(2.0 / (math.pi * x)) * (P * np.cos(chi) - Q * np.sin(chi))


def bessel_j0(x):
    """J0 for x >= 0: power series below 8, trapezoid integral on [8, 25), Hankel expansion beyond."""
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0):
        raise DomainError("bessel_j0 expects x >= 0")
    flat = xa.ravel()
    out = np.empty_like(flat)
    small = flat < 8.0
    mid = (flat >= 8.0) & (flat < 25.0)
    big = flat >= 25.0
    out[small] = _j0_series(flat[small])
    out[mid] = _j0_trapezoid(flat[mid])
    out[big] = _j0_hankel(flat[big])
    out = out.reshape(xa.shape)
    return float(out) if out.ndim == 0 else out


@lru_cache(maxsize=8)
def _j0_zeros(count):
    m = np.arange(1, count + 1, dtype=float)
    b = (m - 0.25) * math.pi
    z = b + 1.0 / (8 * b) - 124.0 / (3.0 * (8 * b) ** 3)  # McMahon
    for _ in range(4):
        z = z + bessel_j0(z) / special.j1(z)  # Newton with J0' = -J1
    z.setflags(write=False)
    return z


def j0_zeros_upto(x_max):
    """All positive zeros of J0 below x_max."""
    count = max(int(x_max / math.pi) + 2, 4)
    # round the cache key up so repeated calls share a table
    count = 1 << (count - 1).bit_length()
    z = _j0_zeros(count)
    return z[z < x_max]


@lru_cache(maxsize=4)
def _leggauss(n):
    return np.polynomial.legendre.leggauss(n)


def composite_gauss(breaks, order=16):
    """Nodes and weights of Gauss-Legendre panels between consecutive breakpoints."""
    b = np.asarray(breaks, dtype=float)
    x0, w0 = _leggauss(order)
    a, c = b[:-1, None], b[1:, None]
    half = 0.5 * (c - a)
    nodes = (a + c) * 0.5 + half * x0[None, :]
    weights = half * w0[None, :]
    return nodes.ravel(), weights.ravel()


# ---------------------------------------------------------------- containers


@dataclass(frozen=True)
class RadialSpectrum:
    nodes: np.ndarray
    values: np.ndarray
    tail_model: str = "None"  # "None" | "BesselOscillatory" | "LogDecay"
    tail_params: tuple = ()

    @property
    def mass(self):
        """Value at rho = 0 (total signed mass) if 0 is a node."""
        if self.nodes[0] != 0.0:
            raise ParameterError("spectrum not sampled at rho = 0")
        return float(self.values[0])


@dataclass(frozen=True)
class HeatEnstrophyCurve:
    s_nodes: np.ndarray
    values: np.ndarray


def write_curve_csv(xs, ys, path, header=("rho_or_s", "value")):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for x, y in zip(xs, ys):
            w.writerow([repr(float(x)), repr(float(y))])


def _gaussian_cut(s):
    return math.sqrt(GAUSS_CUT / (2.0 * s))


# ---------------------------------------------------------------- circle measure

CIRCLE_SWITCHOVER = 2000.0


def circle_spectrum(nodes) -> RadialSpectrum:
    nodes = np.asarray(nodes, dtype=float)
    return RadialSpectrum(nodes, TWO_PI * bessel_j0(nodes), "BesselOscillatory", (TWO_PI, -0.25 * math.pi))


def _circle_tail(s, R):
    """(1/pi) int_R^inf (1 - 1/(8 rho^2) + sin 2rho) exp(-2 s rho^2) drho.

    Leading Hankel terms of rho J0(rho)^2; the dropped terms are O(R^-2).
    """
    a = 2.0 * s
    sa = math.sqrt(a)
    erfc = special.erfc(sa * R)
    flat = 0.5 * math.sqrt(math.pi / a) * erfc
    inv_sq = math.exp(-a * R * R) / R - math.sqrt(math.pi * a) * erfc
    osc = 0.5 * math.sqrt(math.pi / a) * np.exp(-a * R * R + 2j * R) * special.wofz(1.0 / sa + 1j * sa * R)
    return (flat - inv_sq / 8.0 + osc.imag) / math.pi


def _circle_panels(s, R, order):
    upper = min(R, _gaussian_cut(s))
    sigma = 1.0 / math.sqrt(4.0 * s)
    m = int(math.ceil(upper / min(math.pi, sigma))) + 1
    breaks = np.unique(np.concatenate([[0.0, upper], j0_zeros_upto(upper), np.linspace(0.0, upper, m)]))
    x, w = composite_gauss(breaks, order)
    val = float(np.sum(w * bessel_j0(x) ** 2 * x * np.exp(-2.0 * s * x * x)))
    if upper >= R:
        val += _circle_tail(s, R)
    return val


def circle_enstrophy(s: float, order: int = 20, R: float = CIRCLE_SWITCHOVER, rtol: float = 1e-9) -> float:
    """E(s) = 2 pi int_0^inf J0(rho)^2 exp(-2 s rho^2) rho drho.

    Gauss panels between J0 zeros up to min(R, Gaussian cut); beyond R the
    Hankel leading terms are integrated in closed form.
    """
    if not s > 0:
        raise DomainError("s must be positive")
    hi = _circle_panels(s, R, order)
    lo = _circle_panels(s, R, order // 2 + 2)
    if abs(hi - lo) > rtol * abs(hi):
        raise QuadratureFailure(f"panel rule did not converge at s={s:g}: {lo!r} vs {hi!r}")
    return TWO_PI * hi


def circle_enstrophy_closed(s):
    """Independent closed form (pi / 2s) exp(-1/4s) I0(1/4s)."""
    s = np.asarray(s, dtype=float)
    return math.pi / (2.0 * s) * special.i0e(1.0 / (4.0 * s))


def circle_heat_field(radius_x, s: float, n_theta: int | None = None):
    """Heat evolution of the unit-circle measure at |x| = radius_x by angular trapezoid."""
    if not s > 0:
        raise DomainError("s must be positive")
    rho = np.atleast_1d(np.asarray(radius_x, dtype=float))
    out = np.empty_like(rho)
    for i, r in enumerate(rho):
        if n_theta is None:
            width = math.sqrt(s / max(r, 1e-12))
            m = int(min(2**20, 64 + 8 * TWO_PI / min(width, 1.0)))
        else:
            m = n_theta
        th = TWO_PI * np.arange(m) / m
        avg = np.exp(-r * (1.0 - np.cos(th)) / (2.0 * s)).mean()
        out[i] = math.exp(-((r - 1.0) ** 2) / (4.0 * s)) / (2.0 * s) * avg
    return float(out[0]) if np.ndim(radius_x) == 0 else out


def circle_heat_field_closed(radius_x, s):
    r = np.asarray(radius_x, dtype=float)
    return np.exp(-((r - 1.0) ** 2) / (4.0 * s)) / (2.0 * s) * special.i0e(r / (2.0 * s))


def circle_mass(s: float) -> float:
    """int omega_2(., s) over the plane, by radial quadrature of the trapezoid field."""
    w = 12.0 * math.sqrt(s)
    pts = [p for p in (1.0 - w, 1.0, 1.0 + w) if p > 0]
    f = lambda r: circle_heat_field(r, s) * TWO_PI * r  # noqa: E731
    upper = 1.0 + 40.0 * math.sqrt(s) + 1.0
    return integrate.quad(f, 0.0, upper, points=pts, limit=400, epsabs=0.0, epsrel=1e-11)[0]


def _ball_mass_at(density, r, a, scale):
    """|.|-mass of B_r(x) with |x| = a for a radial density, via arc lengths."""

    def arc(R):
        if R <= 0:
            return 0.0
        if a == 0.0:
            return TWO_PI * R if R < r else 0.0
        c = (R * R + a * a - r * r) / (2.0 * R * a)
        return 2.0 * R * math.acos(min(1.0, max(-1.0, c)))

    lo, hi = max(0.0, a - r), a + r
    pts = [p for p in (abs(r - a), 1.0, 1.0 - 3 * scale, 1.0 + 3 * scale) if lo < p < hi]
    val = integrate.quad(lambda R: density(R) * arc(R), lo, hi, points=pts or None, limit=400, epsrel=1e-10)[0]
    if a < r:
        val += integrate.quad(lambda R: density(R) * TWO_PI * R, 0.0, r - a, limit=400, epsrel=1e-10)[0]
    return val


def circle_ball_mass(r: float, s: float, n_centers: int = 41) -> float:
    """sup over sampled centres of the mass of omega_2(., s) in B_r(x)."""
    dens = lambda R: float(circle_heat_field_closed(R, s))  # noqa: E731
    centers = np.unique(np.concatenate([[0.0], np.linspace(max(0.0, 1.0 - 2.0 * r), 1.0 + r, n_centers)]))
    return max(_ball_mass_at(dens, r, a, math.sqrt(s)) for a in centers)


# ---------------------------------------------------------------- smooth cutoff part


@dataclass(frozen=True)
class Cutoff:
    """chi = 1 on [0, r0], 0 beyond r1, with a smooth transition."""

    kind: str = "smoothstep7"  # "smoothstep7" | "cinf" | "none"
    r0: float = 1.0
    r1: float = 1.9

    def __post_init__(self):
        if self.kind not in ("smoothstep7", "cinf", "none"):
            raise ParameterError(f"unknown cutoff {self.kind!r}")
        if not 0 < self.r0 < self.r1 < 2.0:
            raise ParameterError("need 0 < r0 < r1 < 2")

    def _t(self, r):
        return np.clip((np.asarray(r, dtype=float) - self.r0) / (self.r1 - self.r0), 0.0, 1.0)

    def chi(self, r):
        t = self._t(r)
        if self.kind == "none":
            return np.ones_like(t)
        if self.kind == "smoothstep7":
            return 1.0 - t**4 * (35 - 84 * t + 70 * t**2 - 20 * t**3)
        with np.errstate(divide="ignore", over="ignore"):
            sig = special.expit(-(1.0 / t - 1.0 / (1.0 - t)))
        return 1.0 - np.where(t <= 0, 0.0, np.where(t >= 1, 1.0, sig))

    def dchi(self, r):
        t = self._t(r)
        L = self.r1 - self.r0
        if self.kind == "none":
            return np.zeros_like(t)
        if self.kind == "smoothstep7":
            return -140.0 * t**3 * (1 - t) ** 3 / L
        inside = (t > 0) & (t < 1)
        tt = np.where(inside, t, 0.5)
        sig = special.expit(-(1.0 / tt - 1.0 / (1.0 - tt)))
        d = (1.0 / tt**2 + 1.0 / (1.0 - tt) ** 2) * sig * (1.0 - sig)
        return np.where(inside, -d / L, 0.0)


SMOOTH_RHO_MAX = 300.0


@dataclass(frozen=True)
class SmoothPart:
    """omega_{0,1}(x) = chi'(|x|)/|x| and its heat evolution."""

    cutoff: Cutoff = Cutoff()

    def profile(self, r):
        r = np.asarray(r, dtype=float)
        return self.cutoff.dchi(r) / r

    def _r_nodes(self):
        return composite_gauss(np.linspace(self.cutoff.r0, self.cutoff.r1, 65), 16)

    def mass(self) -> float:
        x, w = self._r_nodes()
        return TWO_PI * float(np.sum(w * self.cutoff.dchi(x)))

    def transform(self, rho):
        rho = np.atleast_1d(np.asarray(rho, dtype=float))
        x, w = self._r_nodes()
        g = w * self.cutoff.dchi(x)
        out = np.empty_like(rho)
        for i in range(0, rho.size, 256):
            blk = rho[i : i + 256]
            out[i : i + 256] = TWO_PI * bessel_j0(blk[:, None] * x[None, :]) @ g
        return out

    def l2_sq_physical(self) -> float:
        x, w = self._r_nodes()
        return TWO_PI * float(np.sum(w * self.cutoff.dchi(x) ** 2 / x))

    def heat_l2_sq(self, s) -> float:
        rho, w, vals = _smooth_table(self.cutoff)
        return float(np.sum(w * vals**2 * np.exp(-2.0 * s * rho * rho) * rho)) / TWO_PI

    def l2_sq_plancherel(self) -> float:
        return self.heat_l2_sq(0.0)


@lru_cache(maxsize=4)
def _smooth_table(cutoff):
    rho, w = composite_gauss(np.linspace(0.0, SMOOTH_RHO_MAX, int(SMOOTH_RHO_MAX) + 1), 16)
    return rho, w, SmoothPart(cutoff).transform(rho)


def smooth_part_spectrum(cutoff: Cutoff = Cutoff(), nodes=None) -> RadialSpectrum:
    if nodes is None:
        nodes = np.linspace(0.0, 50.0, 501)
    nodes = np.asarray(nodes, dtype=float)
    if cutoff.kind == "none":
        return RadialSpectrum(nodes, np.zeros_like(nodes))
    return RadialSpectrum(nodes, SmoothPart(cutoff).transform(nodes))


# ---------------------------------------------------------------- rescaled bump

BUMP_RHO_MAX = 250.0


def bump_profile(r):
    r = np.asarray(r, dtype=float)
    inside = r < 1.0
    rr = np.where(inside, r, 0.0)
    return np.where(inside, np.exp(-1.0 / (1.0 - rr * rr)), 0.0)


def gaussian_profile(r):
    return np.exp(-np.asarray(r, dtype=float) ** 2)


@lru_cache(maxsize=1)
def _bump_r_nodes():
    return composite_gauss(np.linspace(0.0, 1.0, 49), 16)


def bump_transform(rho):
    rho = np.atleast_1d(np.asarray(rho, dtype=float))
    x, w = _bump_r_nodes()
    g = w * bump_profile(x) * x
    out = np.empty_like(rho)
    for i in range(0, rho.size, 256):
        blk = rho[i : i + 256]
        out[i : i + 256] = TWO_PI * bessel_j0(blk[:, None] * x[None, :]) @ g
    return out


@lru_cache(maxsize=1)
def _bump_table():
    rho, w = composite_gauss(np.linspace(0.0, BUMP_RHO_MAX, int(BUMP_RHO_MAX) + 1), 16)
    return rho, w, bump_transform(rho)


def bump_l1() -> float:
    x, w = _bump_r_nodes()
    return TWO_PI * float(np.sum(w * bump_profile(x) * x))


def mu_l1(profile="bump"):
    return bump_l1() if profile == "bump" else math.pi


def mu_heat_l2_sq(t: float, profile: str = "bump") -> float:
    """||mu(t)||^2 for the unrescaled heat evolution (spectral route)."""
    if t < 0:
        raise DomainError("t must be nonnegative")
    if profile == "gaussian":
        return math.pi / (2.0 * (1.0 + 4.0 * t))
    if profile != "bump":
        raise ParameterError(f"unknown profile {profile!r}")
    rho, w, vals = _bump_table()
    return float(np.sum(w * vals**2 * np.exp(-2.0 * t * rho * rho) * rho)) / TWO_PI


def mu_heat_field(r, t: float, profile: str = "bump"):
    """Physical-space heat evolution of the bump, radial kernel quadrature."""
    r = np.atleast_1d(np.asarray(r, dtype=float))
    if t == 0:
        return bump_profile(r)
    x, w = composite_gauss(np.linspace(0.0, 1.0, 129), 16)
    g = w * bump_profile(x) * x
    ker = np.exp(-((r[:, None] - x[None, :]) ** 2) / (4.0 * t)) * special.i0e(r[:, None] * x[None, :] / (2.0 * t))
    return ker @ g / (2.0 * t)


def mu_heat_l2_sq_physical(t: float) -> float:
    upper = 1.0 + 14.0 * math.sqrt(max(t, 1e-300))
    x, w = composite_gauss(np.linspace(0.0, upper, 129), 16)
    return TWO_PI * float(np.sum(w * mu_heat_field(x, t) ** 2 * x))


def rescaled_bump_enstrophy(nu: float, t: float, profile: str = "bump") -> float:
    """||mu^nu(t)||^2 = ||mu(t)||^2 / (nu |log nu|) for the concentrated bump."""
    if not 0 < nu < 1:
        raise DomainError("nu must lie in (0, 1)")
    return mu_heat_l2_sq(t, profile) / (nu * abs(math.log(nu)))


def rescaled_bump_l1(nu: float, profile: str = "bump") -> float:
    return mu_l1(profile) / math.sqrt(abs(math.log(nu)))


def rescaled_total_enstrophy(nu: float, t: float, cutoff: Cutoff = Cutoff(), profile: str = "bump") -> float:
    """||f^nu(t) + mu^nu(t)||^2 including the velocity-cutoff part.

    The cutoff part is (m / sqrt|log nu|) chi'(|x|)/|x| with m = ||mu_0||_1/(2 pi).
    """
    if not 0 < nu < 1:
        raise DomainError("nu must lie in (0, 1)")
    L = abs(math.log(nu))
    m = mu_l1(profile) / TWO_PI
    main = mu_heat_l2_sq(t, profile) / nu
    sp = SmoothPart(cutoff)
    smooth = m * m * sp.heat_l2_sq(nu * t) if cutoff.kind != "none" else 0.0
    cross = 0.0
    if cutoff.kind != "none":
        rho, weights = _cross_weights(nu, cutoff, profile)
        cross = 2.0 * m * float(np.sum(weights * np.exp(-2.0 * nu * t * rho * rho))) / TWO_PI
    return (main + smooth + cross) / L


@lru_cache(maxsize=64)
def _cross_weights(nu, cutoff, profile):
    rho, w, vals = _smooth_table(cutoff)
    mu_hat = bump_transform(math.sqrt(nu) * rho) if profile == "bump" else math.pi * np.exp(-nu * rho * rho / 4.0)
    return rho, w * vals * mu_hat * rho


# ---------------------------------------------------------------- log-decay datum

LOGDATUM_MASS = 4.0 * math.pi / math.sqrt(math.log(2.0))
LOGDATUM_RHO_MAX = 3.0e5


def logdatum_profile(r):
    r = np.asarray(r, dtype=float)
    inside = (r > 0) & (r < 0.5)
    rr = np.where(inside, r, 0.25)
    return np.where(inside, 1.0 / (rr * rr * np.abs(np.log(rr)) ** 1.5), 0.0)


def logdatum_ball_mass(r: float) -> float:
    """Mass of the datum in B_r(0): 4 pi / sqrt|log r| for r <= 1/2."""
    if r <= 0:
        raise DomainError("r must be positive")
    return LOGDATUM_MASS if r >= 0.5 else 4.0 * math.pi / math.sqrt(abs(math.log(r)))


def logdatum_mass_quadrature() -> float:
    """Total mass by direct radial quadrature (u = log 1/r), independent of the transform."""
    return TWO_PI * integrate.quad(lambda u: u**-1.5, math.log(2.0), np.inf, epsabs=0, epsrel=1e-13)[0]


def _logdatum_nonosc(rho):
    """2 pi int over z = rho r <= 1 in u = log(1/r): 2/sqrt(u_s) + int u^-3/2 (J0 - 1)."""
    us = max(math.log(2.0), math.log(rho)) if rho > 0 else math.log(2.0)
    base = 2.0 / math.sqrt(us)
    if rho == 0:
        return TWO_PI * base
    x, w = composite_gauss(us + np.array([0.0, 1.0, 2.5, 5.0, 10.0, 20.0, 40.0]), 24)
    corr = float(np.sum(w * x**-1.5 * (bessel_j0(rho * np.exp(-x)) - 1.0)))
    return TWO_PI * (base + corr)


def _logdatum_osc(rho, order=16):
    """2 pi int_1^{rho/2} J0(z) / (z log(rho/z)^{3/2}) dz, panels between J0 zeros."""
    zmax = 0.5 * rho
    if zmax <= 1.0:
        return 0.0
    z = j0_zeros_upto(zmax)
    breaks = np.unique(np.concatenate([[1.0], z[z > 1.0], [zmax]]))
    x, w = composite_gauss(breaks, order)
    return TWO_PI * float(np.sum(w * bessel_j0(x) / (x * np.log(rho / x) ** 1.5)))


def logdatum_transform(rho) -> np.ndarray:
    rho = np.atleast_1d(np.asarray(rho, dtype=float))
    return np.array([_logdatum_nonosc(r) + _logdatum_osc(r) for r in rho])


def logdatum_spectrum(nodes=None) -> RadialSpectrum:
    if nodes is None:
        nodes = np.concatenate([[0.0], np.geomspace(1e-2, 1e6, 81)])
    nodes = np.asarray(nodes, dtype=float)
    return RadialSpectrum(nodes, logdatum_transform(nodes), "LogDecay", (4.0 * math.pi,))


@lru_cache(maxsize=1)
def _logdatum_table():
    lin = np.linspace(0.0, 200.0, 801)
    geo = np.geomspace(200.0, LOGDATUM_RHO_MAX, 321)[1:]
    nodes = np.concatenate([lin, geo])
    return nodes, interpolate.CubicSpline(nodes, logdatum_transform(nodes))


def logdatum_heat_l2_sq(s: float) -> float:
    """||e^{s Delta} omega_0||^2 by Plancherel over the tabulated transform."""
    if not 0 < s:
        raise DomainError("s must be positive")
    cut = _gaussian_cut(s)
    if cut > LOGDATUM_RHO_MAX:
        raise DomainError(f"s = {s:g} needs frequencies beyond the tabulated range")
    _, spline = _logdatum_table()
    lin = np.arange(0.0, min(cut, 200.0) + 1e-12, 1.0)
    if lin[-1] < min(cut, 200.0):
        lin = np.append(lin, min(cut, 200.0))
    breaks = lin
    if cut > 200.0:
        breaks = np.concatenate([lin, np.geomspace(200.0, cut, int(math.log(cut / 200.0) / 0.02) + 2)[1:]])
    x, w = composite_gauss(breaks, 16)
    return float(np.sum(w * spline(x) ** 2 * np.exp(-2.0 * s * x * x) * x)) / TWO_PI


def logdatum_enstrophy(nu: float, t: float) -> float:
    s = nu * t
    if not 0 < s < 1:
        raise DomainError("nu t must lie in (0, 1)")
    return logdatum_heat_l2_sq(s)


def claim_integral(eps: float) -> float:
    """int_{4 sqrt(eps)}^inf r exp(-r^2) / (1/2 - log r / log eps) dr for eps in (0, 1)."""
    if not 0 < eps < 1:
        raise DomainError("eps must lie in (0, 1)")
    le = math.log(eps)
    a = 4.0 * math.sqrt(eps)
    f = lambda r: r * math.exp(-r * r) / (0.5 - math.log(r) / le)  # noqa: E731
    pts = [p for p in (1.0, 2.0 * a, 10.0 * a) if p > a]
    head = integrate.quad(f, a, max(a, 8.0), points=pts or None, limit=400, epsrel=1e-10)[0]
    return head


# ---------------------------------------------------------------- dissipation


def dissipation_integral(example: str, nu: float, t0: float, t1: float, **kw) -> float:
    """nu int_{t0}^{t1} ||omega(tau)||^2 dtau for example in {circle, bump, logdatum}."""
    if not 0 <= t0 < t1:
        raise DomainError("need 0 <= t0 < t1")
    if example == "circle":
        # s = u^2 removes the s^{-1/2} singularity at 0
        a, b = math.sqrt(nu * t0), math.sqrt(nu * t1)
        f = lambda u: 2.0 * u * circle_enstrophy(u * u) if u > 0 else 2.0 * math.sqrt(math.pi / 2.0)  # noqa: E731
        return integrate.quad(f, a, b, epsabs=0.0, epsrel=1e-9, limit=200)[0]
    if example == "logdatum":
        if t0 == 0:
            raise DomainError("the log datum is only integrable away from t = 0")
        lo, hi = -math.log(nu * t1), -math.log(nu * t0)
        f = lambda v: logdatum_heat_l2_sq(math.exp(-v)) * math.exp(-v)  # noqa: E731
        return integrate.quad(f, lo, hi, epsabs=0.0, epsrel=1e-8, limit=200)[0]
    if example == "bump":
        cutoff = kw.get("cutoff", Cutoff())
        profile = kw.get("profile", "bump")
        f = lambda t: rescaled_total_enstrophy(nu, t, cutoff, profile)  # noqa: E731
        return nu * integrate.quad(f, t0, t1, epsabs=0.0, epsrel=1e-9, limit=200)[0]
    raise ParameterError(f"unknown example {example!r}")


def heat_curve(example: str, s_nodes) -> HeatEnstrophyCurve:
    s_nodes = np.asarray(s_nodes, dtype=float)
    fn = {"circle": circle_enstrophy, "logdatum": logdatum_heat_l2_sq, "bump": mu_heat_l2_sq}[example]
    return HeatEnstrophyCurve(s_nodes, np.array([fn(s) for s in s_nodes]))
