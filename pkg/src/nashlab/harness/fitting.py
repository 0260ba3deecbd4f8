"""Log-log rate fits and dissipation/budget comparisons."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .. import bounds
from ..errors import ConventionMismatch, InsufficientData, NonPositiveData, ParameterError


@dataclass(frozen=True)
class RateFit:
    slope: float
    intercept: float
    stderr: float
    r_squared: float
    window: tuple

    def within(self, target, tol):
        return abs(self.slope - target) <= tol


def fit_rate(xs, ys, trim: int = 0) -> RateFit:
    """Least squares of log y on log x.

    ``trim`` drops that many points at each end of the sorted abscissa; the
    window actually used is recorded.
    """
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.size != y.size:
        raise ParameterError("xs and ys differ in length")
    if x.size < 4:
        raise InsufficientData(f"need at least 4 points, got {x.size}")
    if np.any(x <= 0) or np.any(y <= 0):
        raise NonPositiveData("rate fits need positive data")
    order = np.argsort(x)
    x, y = x[order], y[order]
    if trim:
        if x.size - 2 * trim < 2:
            raise InsufficientData("trimming leaves fewer than 2 points")
        x, y = x[trim:-trim], y[trim:-trim]
    lx, ly = np.log(x), np.log(y)
    res = stats.linregress(lx, ly)
    resid = ly - (res.intercept + res.slope * lx)
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    ss_res = float(np.sum(resid**2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    stderr = 0.0 if not np.isfinite(res.stderr) else float(res.stderr)
    return RateFit(float(res.slope), float(res.intercept), stderr, r2, (float(x[0]), float(x[-1])))


def budget_value(kind: str, nu: float, params: dict) -> float:
    if kind == "inverse_log":
        return 1.0 / abs(math.log(nu))
    if kind in ("algebraic", "delort", "lp"):
        return bounds.dissipation_budget(
            kind, nu, params.get("T", 1.0), delta=params.get("delta"), alpha=params.get("alpha"), p=params.get("p")
        )
    raise ParameterError(f"unknown budget kind {kind!r}")


def compare_to_budget(records, budget_kind: str, params: dict | None = None):
    """Ratios measured dissipation / budget along a viscosity sweep.

    ``records`` is a mapping nu -> dissipation, or an iterable of objects with
    ``nu`` and ``dissipation()`` (e.g. spectral2d.DissipationRecord).
    Returns ``(nus, ratios)`` sorted by decreasing nu.
    """
    params = dict(params or {})
    want = params.pop("convention", None)
    pairs = []
    if isinstance(records, dict):
        pairs = list(records.items())
    else:
        for rec in records:
            conv = getattr(rec, "convention", None)
            if want is not None and conv is not None and conv != want:
                raise ConventionMismatch(f"record convention {conv!r} != {want!r}")
            pairs.append((rec.nu, rec.dissipation()))
    pairs.sort(key=lambda p: -p[0])
    nus = np.array([p[0] for p in pairs])
    ratios = np.array([d / budget_value(budget_kind, nu, params) for nu, d in pairs])
    return nus, ratios
