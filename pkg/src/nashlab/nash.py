"""Classical and improved Nash inequalities on gridded fields.

Every inequality is exposed as a ratio lhs/rhs.  Implicit constants are fixed
once by :func:`calibrate` on a reference suite (2x the worst ratio) and frozen
in ``data/nash_constants.json``; later fields are checked against the frozen
values.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from importlib import resources

import numpy as np

from . import cantor
from .errors import DegenerateField, ParameterError
from .spectral2d import GridField, h1_seminorm_sq, l1_norm, l2_norm_sq

CONSTANTS_FILE = "nash_constants.json"
CALIBRATION_FACTOR = 2.0
ELL_GRID = tuple(float(x) for x in np.logspace(-3.0, -0.5, 12))


@dataclass(frozen=True)
class SplitTerms:
    length: float
    gradient_term: float
    mass_term: float
    lhs: float

    @property
    def ratio(self):
        return self.lhs / (self.gradient_term + self.mass_term)


@dataclass(frozen=True)
class NashReport:
    classical_ratio: float
    improved_ratio: float
    ell_opt: float


@dataclass(frozen=True)
class Delort:
    @property
    def alpha(self):
        return None


def _norms(f: GridField):
    l2 = l2_norm_sq(f)
    g2 = h1_seminorm_sq(f)
    if g2 <= 0 or l2 <= 0:
        raise DegenerateField("field is constant; Nash ratios are undefined")
    return l2, math.sqrt(g2)


def classical_nash(f: GridField) -> float:
    """||f||_2^2 / (||f||_1 ||grad f||_2)."""
    l2, g = _norms(f)
    return l2 / (l1_norm(f) * g)


def _improved_from_norms(l2_sq, grad, kind):
    if isinstance(kind, (cantor.Algebraic,)):
        a = kind.alpha
        p = (4.0 - a) / (2.0 - a)
        return l2_sq ** (p / 2) / grad
    if isinstance(kind, Delort):
        return l2_sq * (1.0 + abs(math.log(grad))) ** 0.25 / grad
    raise ParameterError(f"unknown decay kind {kind!r}")


def improved_ratio(f: GridField, kind) -> float:
    """lhs/rhs of the algebraic (``cantor.Algebraic(alpha)``) or ``Delort()`` inequality."""
    l2, g = _norms(f)
    return _improved_from_norms(l2, g, kind)


def improved_ratio_closed_form(family: cantor.CantorFamily, kind) -> float:
    """Same ratio for a Cantor member from its closed-form zero-mean norms (log domain)."""
    l2_log = cantor.zero_mean_l2_sq_log(family)
    g_log = 0.5 * cantor.closed_form_norms(family).h1_sq_log
    if isinstance(kind, cantor.Algebraic):
        p = (4.0 - kind.alpha) / (2.0 - kind.alpha)
        return math.exp(0.5 * p * l2_log - g_log)
    if isinstance(kind, Delort):
        return math.exp(l2_log + 0.25 * math.log(1.0 + abs(g_log)) - g_log)
    raise ParameterError(f"unknown decay kind {kind!r}")


def ell_opt(f: GridField) -> float:
    """Scale balancing the two split terms when the ball mass is bounded by ||f||_1."""
    _, g = _norms(f)
    return math.sqrt(l1_norm(f) / g)


def mollify_split(f: GridField, ell: float, ball_mass_fn) -> SplitTerms:
    if not 0.0 < ell < 1.0:
        raise ParameterError("ell must lie in (0, 1)")
    return SplitTerms(
        length=ell,
        gradient_term=ell * ell * h1_seminorm_sq(f),
        mass_term=l1_norm(f) * ball_mass_fn(ell) / (ell * ell),
        lhs=l2_norm_sq(f),
    )


def nash_report(f: GridField, kind) -> NashReport:
    return NashReport(classical_nash(f), improved_ratio(f, kind), ell_opt(f))


def grid_ball_mass(f: GridField):
    return lambda ell: cantor.ball_mass_oracle(f, ell)


def cantor_ball_mass(family: cantor.CantorFamily):
    """Ball mass bound for f - c: analytic envelope of f plus the mean's share."""
    return lambda ell: cantor.ball_mass_worst_case(family, ell) + cantor.MEAN * math.pi * ell * ell


def max_split_ratio(f, ball_mass_fn, ells=ELL_GRID) -> float:
    return max(mollify_split(f, ell, ball_mass_fn).ratio for ell in ells)


# ---------------------------------------------------------------- reference suite


@dataclass(frozen=True)
class ReferenceField:
    field_id: str
    field: GridField
    ball_mass_fn: object


def _unit_torus(func, n):
    return GridField.from_function(func, n, length=1.0, offset=0.5)


def _gaussian(width):
    def g(x, y):
        r2 = (x - 0.5) ** 2 + (y - 0.5) ** 2
        return np.exp(-r2 / (2 * width**2))

    return g


def reference_suite(grid_size=512) -> list[ReferenceField]:
    tp = 2 * np.pi
    fields = []
    for fid, fn in [
        ("mode_1_0", lambda x, y: np.cos(tp * x)),
        ("mode_2_0", lambda x, y: np.cos(2 * tp * x)),
        ("mode_4_1", lambda x, y: np.cos(tp * (4 * x + y))),
        ("mode_1_1", lambda x, y: np.cos(tp * x) * np.cos(tp * y)),
        ("gauss_0.1", _gaussian(0.1)),
        ("gauss_0.03", _gaussian(0.03)),
    ]:
        f = _unit_torus(fn, grid_size)
        f = f.with_values(f.values - f.values.mean())
        fields.append(ReferenceField(fid, f, grid_ball_mass(f)))
    for n in (1, 2, 3):
        fam = cantor.build_family(cantor.Algebraic(1.0), n)
        f = cantor.rasterize(fam, grid_size)
        fields.append(ReferenceField(f"cantor_a1_n{n}", f, cantor_ball_mass(fam)))
    return fields


def suite_ratios(suite, ells=ELL_GRID):
    """Worst ratio per inequality and the per-field rows for CSV output."""
    worst = {"classical": 0.0, "algebraic_1": 0.0, "delort": 0.0, "split": 0.0}
    rows = []
    a1 = cantor.Algebraic(1.0)
    for ref in suite:
        f = ref.field
        vals = {
            "classical": classical_nash(f),
            "algebraic_1": improved_ratio(f, a1),
            "delort": improved_ratio(f, Delort()),
        }
        for kind, v in vals.items():
            rows.append((ref.field_id, kind, 1.0 if kind == "algebraic_1" else "", v, "", "", ""))
        split = 0.0
        for ell in ells:
            t = mollify_split(f, ell, ref.ball_mass_fn)
            split = max(split, t.ratio)
            rows.append((ref.field_id, "split", "", t.ratio, ell, t.gradient_term, t.mass_term))
        vals["split"] = split
        for k, v in vals.items():
            worst[k] = max(worst[k], v)
    return worst, rows


def calibrate(suite=None, factor=CALIBRATION_FACTOR) -> dict:
    suite = suite if suite is not None else reference_suite()
    worst, _ = suite_ratios(suite)
    return {
        "version": 1,
        "factor": factor,
        "grid_size": int(suite[0].field.n),
        "ell_grid": list(ELL_GRID),
        "suite": [r.field_id for r in suite],
        "max_ratios": worst,
        "constants": {k: factor * v for k, v in worst.items()},
    }


def load_constants() -> dict:
    text = resources.files("nashlab").joinpath("data", CONSTANTS_FILE).read_text()
    return json.loads(text)


def satisfies(ratio: float, kind: str, constants: dict | None = None) -> bool:
    constants = constants or load_constants()
    return ratio <= constants["constants"][kind]


CSV_COLUMNS = ("field_id", "kind", "alpha", "ratio", "ell", "gradient_term", "mass_term")


def write_csv(rows, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_COLUMNS)
        for row in rows:
            w.writerow([repr(v) if isinstance(v, float) else v for v in row])
