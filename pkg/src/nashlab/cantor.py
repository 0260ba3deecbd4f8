"""Self-similar Cantor test functions on the unit torus.

The n-th member is a sum of ``N = 4**n`` radial trapezoids: plateau ``h`` on a
core disk of radius ``delta`` and a linear ramp down to zero at ``2 delta``,
with ``h = delta**-2 / N`` so that every member carries the same mass.  All
norms are closed-form and kept in log domain because ``delta`` underflows
double precision for the log-sparse rule at ``n >= 3``.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, GeometryViolation, ParameterError, ResolutionError
from .spectral2d import GridField

LOG4 = math.log(4.0)

# exact radial integrals of the unit profile p(rho) = 1 on [0,1], 2 - rho on [1,2]
PROFILE_L1 = 7.0 * math.pi / 3.0  # int p   2 pi rho drho
PROFILE_L2 = 11.0 * math.pi / 6.0  # int p^2 2 pi rho drho
PROFILE_H1 = 3.0 * math.pi  # int |p'|^2 2 pi rho drho
MEAN = PROFILE_L1  # torus average of every member (unit volume)


@dataclass(frozen=True)
class Algebraic:
    alpha: float

    def __post_init__(self):
        if not 0.0 < self.alpha < 2.0:
            raise ParameterError(f"alpha must lie in (0, 2), got {self.alpha}")

    @property
    def name(self):
        return "algebraic"

    @property
    def radius_scale(self):
        """Family-wide factor kappa keeping 2-delta disks disjoint from n = 2 on."""
        return min(1.0, 2.0 ** (4.0 / self.alpha - 4.0))

    def nominal_log_radius(self, n):
        return -n * LOG4 / self.alpha


@dataclass(frozen=True)
class LogSparse:
    @property
    def name(self):
        return "logsparse"

    @property
    def alpha(self):
        return None

    @property
    def radius_scale(self):
        return 1.0

    def nominal_log_radius(self, n):
        return -float(16**n)


def _effective_log_radius(rule, n):
    """log of the radius actually used; returns (value, clamped)."""
    if n == 0:
        return min(math.log(rule.radius_scale), math.log(0.25)), False
    log_d = math.log(rule.radius_scale) + rule.nominal_log_radius(n)
    cap = -n * math.log(2.0) - math.log(4.0)  # quarter of the level-n cell width
    if log_d > cap + 1e-12:
        return cap, True
    return log_d, False


@dataclass(frozen=True)
class CantorFamily:
    level: int
    rule: Algebraic | LogSparse
    log_radius: float
    centers: np.ndarray | None = None
    metadata: dict = field(default_factory=dict)

    @property
    def disk_count(self) -> int:
        return 4**self.level

    @property
    def log_disk_count(self) -> float:
        return self.level * LOG4

    @property
    def radius(self) -> float:
        return math.exp(self.log_radius)

    @property
    def log_plateau(self) -> float:
        return -2.0 * self.log_radius - self.log_disk_count

    @property
    def plateau(self) -> float:
        return math.exp(self.log_plateau)

    @property
    def cell_width(self) -> float:
        return 2.0**-self.level

    def level_log_radius(self, j):
        """log radius the same rule uses at level j (breakpoints of the ball-mass envelope)."""
        return _effective_log_radius(self.rule, j)[0]


def quadtree_centers(n):
    s = 2.0**-n
    c = (np.arange(2**n) + 0.5) * s
    X, Y = np.meshgrid(c, c, indexing="ij")
    return np.column_stack([X.ravel(), Y.ravel()])


MAX_MATERIALIZED_LEVEL = 10


def build_family(rule, n: int, materialize: bool | None = None) -> CantorFamily:
    """Level-n member; centres are materialized for algebraic rules up to level 10."""
    if n < 1 or int(n) != n:
        raise ParameterError(f"level must be a positive integer, got {n}")
    n = int(n)
    log_d, clamped = _effective_log_radius(rule, n)
    meta = {
        "nominal_log_radius": rule.nominal_log_radius(n),
        "radius_scale": rule.radius_scale,
        "clamped": clamped,
    }
    centers = None
    if materialize is None:
        materialize = (isinstance(rule, Algebraic) and n <= MAX_MATERIALIZED_LEVEL) or n == 1
    if materialize:
        centers = quadtree_centers(n)
        _check_geometry(centers, math.exp(log_d), n)
    return CantorFamily(level=n, rule=rule, log_radius=log_d, centers=centers, metadata=meta)


def _check_geometry(centers, delta, n):
    s = 2.0**-n
    # touching supports are allowed: the profile vanishes on the outer circle
    tol = 1e-12 * s
    if 4 * delta > s + tol:
        raise GeometryViolation(f"disks of radius {2 * delta:g} overlap at spacing {s:g}")
    lo = centers.min() - 2 * delta
    hi = centers.max() + 2 * delta
    if lo < -tol or hi > 1 + tol:
        raise GeometryViolation("support leaves the unit square")


def eval(family: CantorFamily, points) -> np.ndarray:
    """Evaluate the non-negative member at points of the unit square (shape (..., 2))."""
    if family.centers is None:
        raise ResolutionError("centers are not materialized for this family")
    p = np.asarray(points, dtype=float)
    s = family.cell_width
    # disks sit at cell centres and never cross cell walls, so only the own cell matters
    cell = np.clip(np.floor(p / s), 0, 2**family.level - 1)
    d = np.linalg.norm(p - (cell + 0.5) * s, axis=-1)
    rho = d / family.radius
    return family.plateau * np.clip(2.0 - np.maximum(rho, 1.0), 0.0, 1.0)


# ---------------------------------------------------------------- norms


@dataclass(frozen=True)
class NormBundle:
    l1: float
    l2_sq_log: float
    h1_sq_log: float
    mean: float


def closed_form_norms(family: CantorFamily) -> NormBundle:
    base = -2.0 * family.log_radius - family.log_disk_count
    return NormBundle(
        l1=PROFILE_L1,
        l2_sq_log=math.log(PROFILE_L2) + base,
        h1_sq_log=math.log(PROFILE_H1) + base - 2.0 * family.log_radius,
        mean=MEAN,
    )


def zero_mean_l2_sq_log(family: CantorFamily) -> float:
    """log ||f - c||^2 = log(||f||^2 - c^2), without leaving log domain."""
    lg = closed_form_norms(family).l2_sq_log
    return lg + math.log1p(-math.exp(2.0 * math.log(MEAN) - lg))


def zero_mean_l1(family: CantorFamily) -> float:
    """||f - c||_{L^1} in closed form.

    With q = c/h the ramp crosses level c a distance q*delta inside the outer
    circle; integrating the sign change gives 2c - 8 pi q + 4 pi q^2 (1 - q/6).
    """
    q = math.exp(math.log(MEAN) - family.log_plateau)
    return 2 * MEAN - 8 * math.pi * q + 4 * math.pi * q * q * (1 - q / 6)


def log_saturation(family: CantorFamily, zero_mean=True, normalized=False) -> float:
    # write l2 = 2u + l2r and h1 = 4u + h1r with u = -log delta; the u terms
    # cancel symbolically, which keeps log-sparse levels (u = 16**n) exact
    u = -family.log_radius
    l2r = _l2_rest(family, zero_mean, normalized)
    h1r = -family.log_disk_count + (0.0 if normalized else math.log(PROFILE_H1))
    if isinstance(family.rule, Algebraic):
        a = family.rule.alpha
        p = (4.0 - a) / (2.0 - a)
        return u * (p - 2.0) + 0.5 * p * l2r - 0.5 * h1r
    return l2r - 0.5 * h1r + 0.25 * math.log(2.0 * u + 0.5 * h1r)


def _l2_rest(family, zero_mean, normalized):
    rest = -family.log_disk_count + (0.0 if normalized else math.log(PROFILE_L2))
    if zero_mean:
        lg = closed_form_norms(family).l2_sq_log
        rest += math.log1p(-math.exp(2.0 * math.log(MEAN) - lg))
    return rest


def saturation_sequence(rule, n_max: int, n_min: int = 1, zero_mean=True, normalized=False) -> np.ndarray:
    """S_n for n = n_min..n_max from closed forms; finite for any n.

    ``normalized`` divides out the n-independent profile constants of the two
    norms so the log-sparse sequence tends to 2**(1/4).
    """
    return np.array(
        [
            math.exp(log_saturation(build_family(rule, n), zero_mean, normalized))
            for n in range(n_min, n_max + 1)
        ]
    )


def saturation_limit(rule, normalized=False) -> float:
    """n -> infinity limit of S_n (the mean correction vanishes in the limit)."""
    c2 = 1.0 if normalized else PROFILE_L2
    c3 = 1.0 if normalized else PROFILE_H1
    if isinstance(rule, Algebraic):
        p = (4.0 - rule.alpha) / (2.0 - rule.alpha)
        return c2 ** (p / 2) / math.sqrt(c3) * rule.radius_scale ** (2.0 - p)
    return c2 / math.sqrt(c3) * 2.0**0.25


# ---------------------------------------------------------------- ball mass


def _lattice_count(R, s):
    m = math.floor(2.0 * R / s) + 1
    return m * m


def log_ball_mass_worst_case(family: CantorFamily, r=None, log_r=None) -> float:
    """log of the analytic worst-case |f|-mass of a radius-r ball."""
    if log_r is None:
        if r is None or r <= 0:
            raise DomainError("radius must be positive")
        log_r = math.log(r)
    if log_r >= math.log(0.5):
        raise DomainError("radius must be below 1/2")
    n = family.level
    log_total = math.log(PROFILE_L1)
    if log_r <= family.log_radius:
        return min(log_total, family.log_plateau + math.log(math.pi) + 2.0 * log_r)
    log_md = log_total - family.log_disk_count
    # r in (delta_{j+1}, delta_j]  <->  k = n - j scale levels covered
    k = None
    for j in range(n - 1, -1, -1):
        if log_r <= family.level_log_radius(j):
            k = n - j
            break
    if k is None:
        return log_total
    R = math.exp(log_r) + 2.0 * family.radius
    count = max(4**k, min(_lattice_count(R, family.cell_width), family.disk_count))
    return min(log_total, math.log(count) + log_md)


def ball_mass_worst_case(family: CantorFamily, r: float) -> float:
    return math.exp(log_ball_mass_worst_case(family, r))


@dataclass(frozen=True)
class BallMassCurve:
    radii: np.ndarray
    masses: np.ndarray
    kind: str


def worst_case_curve(family, radii) -> BallMassCurve:
    radii = np.asarray(radii, dtype=float)
    return BallMassCurve(radii, np.array([ball_mass_worst_case(family, r) for r in radii]), "AnalyticWorstCase")


def disk_weights(r, h, supersample=8):
    """Partial-cell area weights (in units of cell area) of a radius-r disk."""
    m = int(math.ceil(r / h)) + 1
    offs = np.arange(-m, m + 1) * h
    sub = (np.arange(supersample) + 0.5) / supersample - 0.5
    X = offs[:, None, None, None] + h * sub[None, None, :, None]
    Y = offs[None, :, None, None] + h * sub[None, None, None, :]
    inside = (X**2 + Y**2) <= r * r
    return inside.mean(axis=(2, 3))


def ball_mass_oracle(source, r: float, grid_size: int | None = None, supersample=8) -> float:
    """Max over grid centres of the quadrature of |f| over B_r(x).

    ``source`` is a GridField or a CantorFamily; a family is rasterized without
    the mean shift at ``grid_size`` so the result is comparable with the
    analytic envelope.
    """
    if r <= 0:
        raise DomainError("radius must be positive")
    if isinstance(source, CantorFamily):
        if grid_size is None:
            raise ParameterError("grid_size is required for a family")
        f = rasterize(source, grid_size, zero_mean=None)
    else:
        f = source
    if 2 * r >= f.length:
        raise DomainError("ball diameter exceeds the torus period")
    h = f.spacing
    w = disk_weights(r, h, supersample)
    m = (w.shape[0] - 1) // 2
    if w.shape[0] > f.n:
        raise ResolutionError("ball wider than the grid")
    kern = np.zeros_like(f.values)
    idx = np.arange(-m, m + 1) % f.n
    kern[np.ix_(idx, idx)] = w
    conv = np.real(np.fft.ifft2(np.fft.fft2(np.abs(f.values)) * np.fft.fft2(kern)))
    return float(conv.max() * h * h)


def oracle_curve(source, radii, grid_size=None) -> BallMassCurve:
    radii = np.asarray(radii, dtype=float)
    return BallMassCurve(radii, np.array([ball_mass_oracle(source, r, grid_size) for r in radii]), "GridOracle")


# ---------------------------------------------------------------- grids


def rasterize(family: CantorFamily, grid_size: int, zero_mean="grid") -> GridField:
    """Sample the member at cell centres of a ``grid_size**2`` grid (unit torus).

    zero_mean: "grid" subtracts the sample mean (exactly zero-mean field),
    "exact" subtracts the closed-form mean, None keeps the raw member.
    """
    h = 1.0 / grid_size
    if family.centers is None or 2.0 * family.radius < 8 * h:
        raise ResolutionError(
            f"grid {grid_size} puts fewer than 8 cells across a core disk (log delta = {family.log_radius:.4g})"
        )
    x = (np.arange(grid_size) + 0.5) * h
    X, Y = np.meshgrid(x, x, indexing="ij")
    vals = eval(family, np.stack([X, Y], axis=-1))
    if zero_mean == "grid":
        vals = vals - vals.mean()
    elif zero_mean == "exact":
        vals = vals - MEAN
    elif zero_mean is not None:
        raise ParameterError(f"unknown zero_mean mode {zero_mean!r}")
    return GridField(vals, length=1.0, offset=0.5)


# ---------------------------------------------------------------- CSV

CSV_COLUMNS = ("rule", "alpha", "n", "delta_log", "l1", "l2_sq_log", "h1_sq_log", "S_n")


def saturation_rows(rule, n_max, n_min=1, normalized=False):
    rows = []
    for n in range(n_min, n_max + 1):
        fam = build_family(rule, n)
        nb = closed_form_norms(fam)
        s = math.exp(log_saturation(fam, normalized=normalized))
        rows.append((rule.name, rule.alpha, n, fam.log_radius, nb.l1, nb.l2_sq_log, nb.h1_sq_log, s))
    return rows


def write_csv(rows, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_COLUMNS)
        for row in rows:
            w.writerow(["" if v is None else (repr(v) if isinstance(v, float) else v) for v in row])
