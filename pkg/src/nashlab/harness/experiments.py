"""Experiment specs, runners and JSON reports.

Each runner takes the spec parameters, writes its CSV artifacts into the
output directory and returns a list of :class:`Assertion`.  Reports are
byte-for-byte deterministic for a given spec: no timestamps, fixed
quadrature budgets, fixed dt policy and seeded random fields.
"""
from __future__ import annotations

import csv
import hashlib
import json
import math
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .. import bounds, cantor, nash, radial, spectral2d
from ..errors import NashLabError, ParameterError
from .fitting import compare_to_budget, fit_rate

KINDS = ("CantorSaturation", "NashSuite", "CircleRate", "RescaledBump", "LogDatum", "TorusEnvelope", "BudgetTable")


@dataclass
class ExperimentSpec:
    name: str
    kind: str
    parameters: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParameterError(f"unknown experiment kind {self.kind!r}")

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "ExperimentSpec":
        d = json.loads(text)
        return cls(name=d["name"], kind=d["kind"], parameters=d.get("parameters", {}), seed=d.get("seed", 0))

    @classmethod
    def load(cls, path) -> "ExperimentSpec":
        return cls.from_json(Path(path).read_text())


@dataclass
class Assertion:
    name: str
    expected: str
    measured: float | str
    tolerance: float | str
    passed: bool

    def as_dict(self):
        return {
            "name": self.name,
            "expected": self.expected,
            "measured": _jsonable(self.measured),
            "tolerance": _jsonable(self.tolerance),
            "pass": bool(self.passed),
        }


def _jsonable(v):
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return v if math.isfinite(v) else repr(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    return v


def git_blob_hash(data: bytes) -> str:
    """Content hash in git's blob format (sha1 of 'blob <len>\\0' + data)."""
    return hashlib.sha1(b"blob %d\0" % len(data) + data).hexdigest()


def _write_rows(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])


def _le(name, measured, bound, expected=None):
    return Assertion(name, expected or f"<= {bound!r}", float(measured), float(bound), bool(measured <= bound))


def _ge(name, measured, bound, expected=None):
    return Assertion(name, expected or f">= {bound!r}", float(measured), float(bound), bool(measured >= bound))


def _band(values):
    v = np.asarray(values, dtype=float)
    return float(v.max() / v.min())


# ---------------------------------------------------------------- cantor


def run_cantor(p, out: Path, seed):
    check = p.get("check", "saturation")
    if check == "saturation":
        return _cantor_saturation(p, out)
    if check == "logsparse":
        return _cantor_logsparse(p, out)
    if check == "ball_mass":
        return _cantor_ball_mass(p, out)
    raise ParameterError(f"unknown cantor check {check!r}")


def _cantor_saturation(p, out):
    res = []
    rows = []
    n_min, n_max = p.get("n_min", 2), p.get("n_max", 6)
    for a in p.get("alphas", [0.5, 1.0, 1.5]):
        rule = cantor.Algebraic(a)
        seq = cantor.saturation_sequence(rule, n_max, n_min)
        rows += cantor.saturation_rows(rule, n_max, 1)
        res.append(_le(f"S_n max/min, alpha={a}, n={n_min}..{n_max}", _band(seq), p.get("band", 2.0)))
        n_lim = p.get("limit_level", 100)
        far = math.exp(cantor.log_saturation(cantor.build_family(rule, n_lim)))
        rel = abs(far / cantor.saturation_limit(rule) - 1.0)
        res.append(_le(f"closed-form limit vs log-domain S_{n_lim}, alpha={a}", rel, p.get("limit_rtol", 1e-10)))
    cantor.write_csv(rows, out / "cantor_saturation.csv")
    return res


def _cantor_logsparse(p, out):
    rule = cantor.LogSparse()
    n_max = p.get("n_max", 4)
    seq = cantor.saturation_sequence(rule, n_max, 1, normalized=True)
    res = []
    for n, s in zip(range(1, n_max + 1), seq):
        target = 2.0**0.25 * (1.0 - n * 4.0 ** (-2 * n)) ** 0.25
        res.append(_le(f"log-sparse S_{n} vs 2^(1/4)(1-n 4^-2n)^(1/4)", abs(s / target - 1.0), p.get("rtol", 0.10)))
    cantor.write_csv(cantor.saturation_rows(rule, n_max, 1, normalized=True), out / "cantor_logsparse.csv")
    return res


def _cantor_ball_mass(p, out):
    res = []
    rows = []
    n_max = p.get("n_max", 6)
    radii_log = np.linspace(math.log(p.get("r_min", 1e-6)), math.log(0.49), p.get("n_radii", 60))
    for a in p.get("alphas", [0.5, 1.0, 1.5]):
        rule = cantor.Algebraic(a)
        sups = []
        for n in range(1, n_max + 1):
            fam = cantor.build_family(rule, n, materialize=False)
            ratios = [math.exp(cantor.log_ball_mass_worst_case(fam, log_r=lr) - a * lr) for lr in radii_log]
            sups.append(max(ratios))
            rows += [("algebraic", a, n, math.exp(lr), r) for lr, r in zip(radii_log, ratios)]
        # one constant for all levels: the per-level sups may not drift apart
        res.append(_le(f"sup_r M(r)/r^alpha max/min over n<={n_max}, alpha={a}", _band(sups), p.get("band", 2.0)))
    # log-sparse: M(r) sqrt|log r| bounded for n <= 4, radii down to delta_n in log domain
    sups = []
    for n in range(1, p.get("logsparse_n_max", 4) + 1):
        fam = cantor.build_family(cantor.LogSparse(), n, materialize=False)
        lrs = np.concatenate([np.linspace(1.5 * fam.log_radius, fam.log_radius, 5), radii_log])
        vals = [math.exp(cantor.log_ball_mass_worst_case(fam, log_r=lr)) * math.sqrt(abs(lr)) for lr in lrs]
        sups.append(max(vals))
        rows += [("logsparse", "", n, lr, v) for lr, v in zip(lrs, vals)]
    res.append(_le("log-sparse sup_r M(r) sqrt|log r| max/min, n<=4", _band(sups), p.get("band", 2.0)))

    # grid oracle against the analytic envelope
    n, grid = p.get("oracle_level", 2), p.get("oracle_grid", 1024)
    fam = cantor.build_family(cantor.Algebraic(1.0), n)
    raster = cantor.rasterize(fam, grid, zero_mean=None)
    tol = p.get("oracle_rtol", 0.05)
    for frac in p.get("oracle_fracs", [0.25, 0.5, 1.0]):
        r = frac * fam.radius
        o = cantor.ball_mass_oracle(raster, r)
        w = cantor.ball_mass_worst_case(fam, r)
        res.append(_le(f"oracle vs envelope at r={frac}*delta_{n} (grid {grid})", abs(o / w - 1.0), tol))
        rows.append(("oracle", 1.0, n, r, o))
    over = []
    for r in np.geomspace(0.3 * fam.radius, 0.45, 8):
        over.append(cantor.ball_mass_oracle(raster, r) / cantor.ball_mass_worst_case(fam, r))
    res.append(_le("oracle <= envelope (1+tol) on r grid", max(over), 1.0 + tol))
    _write_rows(out / "ball_mass.csv", ("rule", "alpha", "n", "r_or_log_r", "value"), rows)
    return res


# ---------------------------------------------------------------- nash


def run_nash(p, out: Path, seed):
    consts = nash.load_constants()
    c = consts["constants"]
    suite = nash.reference_suite(p.get("grid", consts["grid_size"]))
    worst, rows = nash.suite_ratios(suite)
    res = [_le(f"reference suite: {k}", worst[k], c[k]) for k in ("classical", "algebraic_1", "delort", "split")]
    # fields outside the calibration suite must obey the frozen classical constant
    grid = p.get("grid", consts["grid_size"])
    worst_val = 0.0
    rng = np.random.default_rng(seed)
    for i in range(p.get("n_random", 6)):
        f = spectral2d.random_smooth_field(grid, kmax=int(rng.integers(1, 12)), seed=int(rng.integers(1 << 31)), length=1.0)
        v = nash.classical_nash(f)
        worst_val = max(worst_val, v)
        rows.append((f"random_{i}", "classical", "", v, "", "", ""))
    dip = nash._unit_torus(lambda x, y: np.exp(-((x - 0.4) ** 2 + (y - 0.5) ** 2) / 0.002)
                           - np.exp(-((x - 0.6) ** 2 + (y - 0.5) ** 2) / 0.002), grid)
    v = nash.classical_nash(dip)
    worst_val = max(worst_val, v)
    rows.append(("dipole", "classical", "", v, "", "", ""))
    res.append(_le("validation fields: classical", worst_val, c["classical"]))
    # closed-form Cantor members beyond the calibration levels
    a1 = cantor.Algebraic(1.0)
    vals = [nash.improved_ratio_closed_form(cantor.build_family(a1, n, materialize=False), a1) for n in range(4, 9)]
    for n, v in zip(range(4, 9), vals):
        rows.append((f"cantor_a1_n{n}_closed", "algebraic_1", 1.0, v, "", "", ""))
    res.append(_le("Cantor alpha=1 n=4..8 (closed form): algebraic", max(vals), c["algebraic_1"]))
    nash.write_csv(rows, out / "nash_ratios.csv")
    return res


# ---------------------------------------------------------------- radial


def run_circle(p, out: Path, seed):
    res = []
    s_grid = np.geomspace(*p.get("s_range", [1e-4, 1e-2]), p.get("n_s", 9))
    E = np.array([radial.circle_enstrophy(s) for s in s_grid])
    fit = fit_rate(s_grid, E, trim=1)
    res.append(Assertion("enstrophy slope vs s", "-0.5", fit.slope, 0.05, fit.within(-0.5, 0.05)))
    radial.write_curve_csv(s_grid, E, out / "circle_enstrophy.csv", ("s", "enstrophy"))

    nus = np.array(p.get("nus", [1e-3, 1e-4, 1e-5, 1e-6, 1e-7]))
    D = np.array([radial.dissipation_integral("circle", nu, 0.0, 1.0) for nu in nus])
    fit = fit_rate(nus, D, trim=1)
    res.append(Assertion("dissipation slope vs nu", "0.5", fit.slope, 0.05, fit.within(0.5, 0.05)))
    _, ratio = compare_to_budget(dict(zip(nus, D)), "algebraic", {"alpha": 1.0, "T": 1.0})
    res.append(_le("dissipation / (nu T)^(1/2) band", _band(ratio), p.get("band", 2.0)))
    radial.write_curve_csv(nus, D, out / "circle_dissipation.csv", ("nu", "dissipation"))

    rows = []
    worst = 0.0
    for s in p.get("ball_s", [1e-4, 1e-3, 1e-2, 1e-1]):
        for r in p.get("ball_r", [0.005, 0.02, 0.05, 0.1, 0.2, 0.4]):
            m = radial.circle_ball_mass(r, s)
            rows.append((s, r, m, m / r))
            worst = max(worst, m / r)
    res.append(_le("sup M(r)/r over r, s grids", worst, p.get("ball_bound", 4.0)))
    _write_rows(out / "circle_ball_mass.csv", ("s", "r", "mass", "ratio"), rows)

    tol = p.get("quad_rtol", 1e-6)
    chk = np.geomspace(1e-7, 10.0, 9)
    err = max(abs(radial.circle_enstrophy(s) / radial.circle_enstrophy_closed(s) - 1) for s in chk)
    res.append(_le("enstrophy quadrature vs I0 closed form", err, tol))
    err = max(abs(radial.circle_mass(s) / (2 * math.pi) - 1) for s in (1e-4, 1e-2, 1.0))
    res.append(_le("heat-field mass = 2 pi", err, tol))
    rr = np.linspace(0.5, 1.5, 11)
    err = max(float(np.max(np.abs(radial.circle_heat_field(rr, s) / radial.circle_heat_field_closed(rr, s) - 1)))
              for s in (1e-4, 1e-2, 1.0))
    res.append(_le("angular trapezoid vs closed-form field", err, tol))
    return res


def run_bump(p, out: Path, seed):
    res = []
    nus = p.get("nus", [1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8])
    rows = []
    for t in p.get("times", [0.1, 0.5, 1.0]):
        vals = [radial.rescaled_total_enstrophy(nu, t) * nu * abs(math.log(nu)) for nu in nus]
        rows += [(nu, t, v) for nu, v in zip(nus, vals)]
        res.append(_le(f"||omega^nu(t)||^2 nu|log nu| band, t={t}", _band(vals), p.get("band", 2.0)))
        # scaling identity: rescaled spectrum integrated on nu-scaled nodes
        base = radial.mu_heat_l2_sq(t)
        rho, w, mh = radial._bump_table()
        worst = 0.0
        for nu in nus:
            L = abs(math.log(nu))
            k, wk = rho / math.sqrt(nu), w / math.sqrt(nu)
            direct = float(np.sum(wk * (mh**2 / L) * np.exp(-2 * nu * t * k * k) * k)) / (2 * math.pi)
            worst = max(worst, abs(direct / radial.rescaled_bump_enstrophy(nu, t) - 1))
        res.append(_le(f"scaling identity, t={t}", worst, p.get("identity_rtol", 1e-12)))
        phys = radial.mu_heat_l2_sq_physical(t)
        res.append(_le(f"Plancherel vs physical ||mu(t)||^2, t={t}", abs(base / phys - 1), p.get("plancherel_rtol", 1e-8)))
    _write_rows(out / "bump_enstrophy.csv", ("nu", "t", "scaled_enstrophy"), rows)
    D = {nu: radial.dissipation_integral("bump", nu, 0.0, 1.0) for nu in nus}
    _, ratio = compare_to_budget(D, "inverse_log")
    res.append(_le("dissipation / (1/|log nu|) band", _band(ratio), p.get("band", 2.0)))
    _write_rows(out / "bump_dissipation.csv", ("nu", "dissipation"), sorted(D.items()))
    return res


def run_logdatum(p, out: Path, seed):
    res = []
    tol = p.get("mass_rtol", 1e-6)
    val0 = float(radial.logdatum_transform([p.get("rho_zero", 1e-8)])[0])
    res.append(_le("omega0^(0) vs 4 pi/sqrt(log 2)", abs(val0 / radial.LOGDATUM_MASS - 1), tol))
    res.append(_le("physical mass quadrature vs 4 pi/sqrt(log 2)",
                   abs(radial.logdatum_mass_quadrature() / radial.LOGDATUM_MASS - 1), tol))
    rhos = np.geomspace(10.0, 1e6, p.get("n_rho", 13))
    spec = radial.logdatum_spectrum(rhos)
    decay = np.abs(spec.values) * np.sqrt(np.log(rhos))
    res.append(_le("sup |omega0^(rho)| sqrt(log rho), rho in [10, 1e6]", float(decay.max()), p.get("decay_bound", 8 * math.pi)))
    radial.write_curve_csv(rhos, spec.values, out / "logdatum_spectrum.csv")

    s_grid = np.array(p.get("s_grid", [1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9]))
    E = np.array([radial.logdatum_heat_l2_sq(s) for s in s_grid])
    scaled = E * s_grid * np.abs(np.log(s_grid))
    res.append(_le("enstrophy nu t |log nu t| band", _band(scaled), p.get("band", 2.0)))
    radial.write_curve_csv(s_grid, E, out / "logdatum_enstrophy.csv", ("s", "enstrophy"))

    eps = np.geomspace(1e-14, 0.5, p.get("n_eps", 15))
    I = np.array([radial.claim_integral(e) for e in eps])
    ok = bool(np.all(np.isfinite(I)))
    res.append(Assertion("claim integral finite on eps grid", "finite", float(I.max()), "finite", ok))
    res.append(_le("sup_eps claim integral", float(I.max()), p.get("claim_bound", 2.0)))

    delta = p.get("delta", 0.1)
    nus = p.get("nus", [1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8])
    D = {nu: radial.dissipation_integral("logdatum", nu, delta, 1.0) for nu in nus}
    nu_s, ratio = compare_to_budget(D, "delort", {"delta": delta, "T": 1.0})
    tail = ratio[len(ratio) // 2 - 1 :]
    dec = bool(np.all(np.diff(tail) < 0))
    res.append(Assertion("dissipation / Delort budget decreasing on nu tail", "strictly decreasing",
                         float(tail[-1] / tail[0]), "monotone", dec))
    _write_rows(out / "logdatum_dissipation.csv", ("nu", "dissipation", "ratio_to_budget"),
                [(nu, D[nu], r) for nu, r in zip(nu_s, ratio)])
    return res


# ---------------------------------------------------------------- torus


def _mollified_cantor(n, grid, alpha=1.0):
    fam = cantor.build_family(cantor.Algebraic(alpha), n)
    f = cantor.rasterize(fam, grid)
    # measure-like data are smoothed over two grid cells before the run
    return spectral2d.gaussian_mollify(f, 2.0 * f.spacing)


def run_torus(p, out: Path, seed):
    mode = p.get("mode", "solver")
    if mode == "solver":
        return _torus_solver(p, out, seed)
    if mode == "envelope":
        return _torus_envelope(p, out, seed)
    raise ParameterError(f"unknown torus mode {mode!r}")


def _checked_run(state, T, inv_tol):
    """Run with per-step invariant checks; returns (record, worst invariant errors)."""
    sup0 = spectral2d.continuum_sup(state.omega)
    worst = {"mean": 0.0, "divergence": 0.0, "max_principle": 0.0}
    prev_sup = sup0
    snaps = [(state.time, spectral2d.diagnostics(state))]
    ops_len = state.omega.length
    while state.time < T * (1 - 1e-14):
        dt = min(spectral2d.stable_dt(state), T - state.time)
        state = spectral2d.step(state, dt)
        w = state.omega
        worst["mean"] = max(worst["mean"], abs(w.mean) / max(sup0, 1e-300))
        kx, ky = w.k
        u_hat, v_hat = spectral2d.biot_savart(w.spectrum, kx, ky)
        n2 = w.n**2
        u = np.real(np.fft.ifft2(u_hat * n2))
        v = np.real(np.fft.ifft2(v_hat * n2))
        umax = max(float(np.max(np.hypot(u, v))), 1e-300)
        worst["divergence"] = max(worst["divergence"], float(np.max(np.abs(spectral2d.divergence(u, v, ops_len)))) / umax * w.spacing)
        sup = spectral2d.continuum_sup(w)
        worst["max_principle"] = max(worst["max_principle"], (sup - prev_sup) / sup0)
        prev_sup = sup
        snaps.append((state.time, spectral2d.diagnostics(state)))
    t = np.array([s[0] for s in snaps])
    d = [s[1] for s in snaps]
    z = np.array([x.enstrophy for x in d])
    rec = spectral2d.DissipationRecord(
        nu=state.viscosity, times=t, enstrophy=z,
        cum_dissipation=state.viscosity * spectral2d._trapz_cumulative(z, t),
        energy=np.array([x.energy for x in d]), palinstrophy=np.array([x.palinstrophy for x in d]),
        h_minus_1=np.array([x.h_minus_1 for x in d]), sup_norm=np.array([x.sup_norm for x in d]),
        convention=f"torus:L={state.omega.length:.12g}",
    )
    return rec, worst


def _torus_solver(p, out, seed):
    res = []
    n, nu, T = p.get("grid", 128), p.get("nu", 0.01), p.get("T", 1.0)
    st = spectral2d.SolverState(spectral2d.taylor_green(n), nu)
    _, rec = spectral2d.run_to(st, T)
    exact = rec.enstrophy[0] * np.exp(-4 * nu * rec.times)
    res.append(_le("Taylor-Green enstrophy vs exp(-4 nu t)", float(np.max(np.abs(rec.enstrophy / exact - 1))), p.get("tg_rtol", 1e-8)))
    res.append(_le("Taylor-Green cumulative dissipation = energy drop",
                   abs(rec.cum_dissipation[-1] - (rec.energy[0] - rec.energy[-1])) / rec.energy[0], p.get("tg_rtol", 1e-8)))
    spectral2d.write_diagnostics_csv(rec, out / "taylor_green.csv")

    rn, rnu, rT = p.get("random_grid", 128), p.get("random_nu", 1e-3), p.get("random_T", 1.0)
    f = spectral2d.random_smooth_field(rn, kmax=p.get("random_kmax", 4), seed=seed)
    rec, worst = _checked_run(spectral2d.SolverState(f, rnu), rT, 1e-6)
    e_res, z_res = spectral2d.balance_residuals(rec)
    tol = p.get("balance_rtol", 1e-6)
    res.append(_le("random run: energy balance residual", e_res, tol))
    res.append(_le("random run: enstrophy balance residual", z_res, tol))
    res.append(_le("every step: |mean| / sup|omega_0|", worst["mean"], p.get("mean_tol", 1e-13)))
    res.append(_le("every step: h |div u|_inf / |u|_inf", worst["divergence"], p.get("div_tol", 1e-12)))
    res.append(_le("every step: sup growth / sup|omega_0|", worst["max_principle"], p.get("max_principle_tol", 1e-6)))
    mono = bool(np.all(np.diff(rec.enstrophy) <= 1e-14 * rec.enstrophy[0]) and np.all(np.diff(rec.energy) <= 1e-14 * rec.energy[0]))
    res.append(Assertion("enstrophy and energy nonincreasing", "monotone", float(np.max(np.diff(rec.enstrophy))), "monotone", mono))
    spectral2d.write_diagnostics_csv(rec, out / "random_run.csv")
    return res


def _torus_envelope(p, out, seed):
    res = []
    consts = nash.load_constants()["constants"]
    frac = p.get("margin_frac", 1e-3)

    n, nu, T = p.get("grid", 128), p.get("nu", 0.01), p.get("T", 1.0)
    st = spectral2d.SolverState(spectral2d.taylor_green(n), nu)
    _, rec = spectral2d.run_to(st, T)
    M = spectral2d.l1_norm(st.omega)
    psi = bounds.quadratic_psi_for(M, consts["classical"], convention=rec.convention)
    m = bounds.envelope_vs_simulation(rec, psi)
    res.append(_ge("Taylor-Green quadratic envelope: min margin / (nu T)", float(m.min()) / (nu * T), -frac))
    _write_rows(out / "tg_margins.csv", ("t", "enstrophy", "margin"), zip(rec.times, rec.enstrophy, m))

    cn, cgrid, cnu, cT = p.get("cantor_level", 2), p.get("cantor_grid", 128), p.get("cantor_nu", 1e-3), p.get("cantor_T", 1.0)
    w0 = _mollified_cantor(cn, cgrid)
    st = spectral2d.SolverState(w0, cnu)
    _, rec = spectral2d.run_to(st, cT)
    psi = bounds.algebraic_psi_for(1.0, consts["algebraic_1"], convention=rec.convention)
    m = bounds.envelope_vs_simulation(rec, psi)
    res.append(_ge("mollified Cantor(1,2) algebraic envelope: min margin / (nu T)", float(m.min()) / (cnu * cT), -frac))
    spectral2d.write_diagnostics_csv(rec, out / "cantor_run.csv")
    _write_rows(out / "cantor_margins.csv", ("t", "enstrophy", "margin"), zip(rec.times, rec.enstrophy, m))
    return res


# ---------------------------------------------------------------- bounds


def run_budget(p, out: Path, seed):
    mode = p.get("mode", "envelope")
    if mode == "envelope":
        return _budget_envelope(p, out)
    if mode == "timescale":
        return _budget_timescale(p, out)
    raise ParameterError(f"unknown budget mode {mode!r}")


def _budget_envelope(p, out):
    res = []
    w_grid = np.geomspace(1e-3, 1e8, 23)
    for kind, kw in (("quadratic", {}), ("algebraic", {"alpha": 0.5}), ("algebraic", {"alpha": 1.0}),
                     ("algebraic", {"alpha": 1.5}), ("delort", {})):
        env = bounds.envelope(bounds.make_psi(kind, **kw))
        err = max(abs(env.F_inv(env.F(w)) / w - 1) for w in w_grid)
        res.append(_le(f"F_inv(F(w)) = w, {kind} {kw}", err, p.get("inverse_rtol", 1e-10)))
    s_grid = np.geomspace(1e-9, 0.5, 17)
    q = bounds.make_psi("quadratic")
    err = max(abs(bounds.enstrophy_envelope(q, s, 1.0) * s - 1) for s in s_grid)
    res.append(_le("quadratic envelope = 1/(nu t)", err, p.get("exact_rtol", 1e-15)))
    for a in (0.5, 1.0, 1.5):
        psi = bounds.make_psi("algebraic", C=1.0, alpha=a)
        env = bounds.envelope(psi)
        err = max(abs(bounds.numeric_F_inv(psi, s) / env.F_inv(s) - 1) for s in s_grid)
        res.append(_le(f"algebraic envelope vs closed form, alpha={a}", err, p.get("closed_rtol", 1e-10)))
    d = bounds.make_psi("delort")
    sd = np.geomspace(1e-9, 1e-1, 9)
    scaled = [bounds.enstrophy_envelope(d, s, 1.0) * s * math.sqrt(abs(math.log(s))) for s in sd]
    res.append(_le("Delort envelope s sqrt|log s| F_inv(s) band", _band(scaled), p.get("band", 2.0)))
    ratio = bounds.cleaner_reformulation_ratio(d, np.geomspace(1e-12, p.get("s1", 0.5), 25))
    res.append(_le("lhs/Psi on (0, s1] (cleaner reformulation)", float(ratio.max()), p.get("reformulation_bound", 2.0)))
    val = bounds.dissipation_budget("delort", 1e-8, 1.0, delta=0.1)
    res.append(_le("Delort budget nu=1e-8, delta=0.1, T=1 vs 0.5365", abs(val - 0.5365), 1e-4))
    rows = []
    for nu in p.get("nus", [1e-2, 1e-4, 1e-6, 1e-8]):
        rows.append(("algebraic", 1.0, nu, None, 1.0, bounds.dissipation_budget("algebraic", nu, 1.0, alpha=1.0)))
        rows.append(("delort", None, nu, 0.1, 1.0, bounds.dissipation_budget("delort", nu, 1.0, delta=0.1)))
        rows.append(("lp", 2.0, nu, None, 1.0, bounds.dissipation_budget("lp", nu, 1.0, p=2.0)))
    bounds.write_budget_csv(rows, out / "budget_table.csv")
    return res


def _budget_timescale(p, out):
    nus = [10.0**-k for k in range(p.get("k_min", 2), p.get("k_max", 12) + 1)]
    delta = p.get("delta", 0.1)
    cases = [
        ("T = nu^-0.9", "algebraic", lambda nu: nu**-0.9, {"alpha": 1.0}, ("vanishes",)),
        ("T = exp(|log nu|^0.2), kappa=0.3", "delort", lambda nu: math.exp(abs(math.log(nu)) ** 0.2),
         {"kappa": 0.3, "delta": delta}, ("vanishes",)),
        ("T = nu^-1", "algebraic", lambda nu: 1.0 / nu, {"alpha": 1.0}, ("inconclusive", "does-not-vanish")),
    ]
    res = []
    rows = []
    for label, kind, T, kw, expect in cases:
        v = bounds.timescale_verdict(kind, T, nus, **kw)
        res.append(Assertion(f"verdict {label}", " or ".join(expect), v.verdict, "exact", v.verdict in expect))
        rows += [(label, nu, t, b, v.verdict) for nu, t, b in zip(v.nus, v.Ts, v.budgets)]
    _write_rows(out / "timescale_verdicts.csv", ("law", "nu", "T", "budget", "verdict"), rows)
    return res


RUNNERS = {
    "CantorSaturation": run_cantor,
    "NashSuite": run_nash,
    "CircleRate": run_circle,
    "RescaledBump": run_bump,
    "LogDatum": run_logdatum,
    "TorusEnvelope": run_torus,
    "BudgetTable": run_budget,
}


class ExperimentFailure(NashLabError):
    pass


def run(spec: ExperimentSpec, out_dir) -> dict:
    """Run a spec, write CSVs and ``report.json`` into out_dir, return the report."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    try:
        assertions = RUNNERS[spec.kind](spec.parameters, out, spec.seed)
    except NashLabError as exc:
        raise ExperimentFailure(f"{spec.name}: {type(exc).__name__}: {exc}") from exc
    text = spec.to_json()
    report = {
        "spec": json.loads(text),
        "input_hash": git_blob_hash(text.encode()),
        "assertions": [a.as_dict() for a in assertions],
        "pass": all(a.passed for a in assertions),
    }
    (out / "report.json").write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    return report


def bundled_specs() -> dict:
    root = resources.files("nashlab.harness").joinpath("specs")
    specs = {}
    for entry in sorted(root.iterdir(), key=lambda e: e.name):
        if entry.name.endswith(".json"):
            spec = ExperimentSpec.from_json(entry.read_text())
            specs[spec.name] = spec
    return specs


def resolve_spec(ref) -> ExperimentSpec:
    path = Path(ref)
    if path.exists():
        return ExperimentSpec.load(path)
    specs = bundled_specs()
    if ref in specs:
        return specs[ref]
    raise ParameterError(f"no spec file or bundled spec named {ref!r}")
