"""Superquadratic Gronwall envelopes, dissipation budgets and timescale verdicts.

For an enstrophy z obeying ``z' <= -nu * Psi(z)`` with ``Psi`` superquadratic,
``F(w) = int_w^inf dv / Psi(v)`` is finite and the comparison principle gives
``F(z(t)) >= nu t``, i.e. ``z(t) <= F^{-1}(nu t)``.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize, special

from .errors import ConventionMismatch, DomainError, NonIntegrableTail, ParameterError

# splice point between the quadratic-cubic low branch and gamma^{-1} squared
DELORT_V0 = math.e**2


def gamma_delort(z):
    """gamma(z) = z / (log z)^(1/4), increasing for log z > 1/4."""
    return z / np.log(z) ** 0.25


def gamma_delort_prime(z):
    L = np.log(z)
    return L**-0.25 * (1.0 - 0.25 / L)


def gamma_delort_inv(v, tol=1e-15, max_iter=100):
    """Inverse of gamma on [e, inf): guarded Newton with bisection fallback."""
    v = float(v)
    lo = math.e**0.5  # gamma increasing beyond e^(1/4); start safely above it
    if v < gamma_delort(lo):
        raise DomainError(f"gamma^-1 undefined below {gamma_delort(lo):.4g}")
    hi = max(2.0 * v, 4.0)
    while gamma_delort(hi) < v:
        hi *= 2.0
    z = min(max(v * math.log(max(v, math.e)) ** 0.25, lo), hi)
    for _ in range(max_iter):
        g = gamma_delort(z) - v
        if g > 0:
            hi = z
        else:
            lo = z
        z_new = z - g / gamma_delort_prime(z)
        if not lo < z_new < hi:
            z_new = 0.5 * (lo + hi)
        if abs(z_new - z) <= tol * z:
            return z_new
        z = z_new
    return z


@dataclass(frozen=True)
class PsiModel:
    kind: str  # "quadratic" | "algebraic" | "delort"
    C: float = 1.0
    alpha: float | None = None
    convention: str | None = None

    def __post_init__(self):
        if self.kind not in ("quadratic", "algebraic", "delort"):
            raise ParameterError(f"unknown Psi kind {self.kind!r}")
        if not self.C > 0:
            raise ParameterError("C must be positive")
        if self.kind == "algebraic" and (self.alpha is None or not 0 < self.alpha < 2):
            raise ParameterError("algebraic Psi needs alpha in (0, 2)")
        if self.kind == "delort":
            z0 = gamma_delort_inv(DELORT_V0)
            psi0 = self.C * z0 * z0
            dpsi0 = 2.0 * self.C * z0 / gamma_delort_prime(z0)
            v0 = DELORT_V0
            object.__setattr__(self, "_z0", z0)
            object.__setattr__(self, "_A", (3.0 * psi0 - dpsi0 * v0) / v0**2)
            object.__setattr__(self, "_B", (dpsi0 * v0 - 2.0 * psi0) / v0**3)

    @property
    def exponent(self):
        """Growth exponent (superquadratic certificate); delort is 2 with a log gain."""
        if self.kind == "algebraic":
            return (4.0 - self.alpha) / (2.0 - self.alpha)
        return 2.0

    @property
    def superquadratic(self):
        return self.kind != "quadratic"

    @property
    def splice(self):
        """(A, B) of the low branch A v^2 + B v^3 used below e^2 (delort only)."""
        return (self._A, self._B) if self.kind == "delort" else None

    def __call__(self, v):
        v = np.asarray(v, dtype=float)
        if self.kind == "quadratic":
            return self.C * v**2
        if self.kind == "algebraic":
            return self.C * v**self.exponent
        out = np.empty_like(v)
        lo = v < DELORT_V0
        out[lo] = self._A * v[lo] ** 2 + self._B * v[lo] ** 3
        hi_v = v[~lo]
        out[~lo] = self.C * np.array([gamma_delort_inv(x) for x in hi_v.ravel()]).reshape(hi_v.shape) ** 2
        return out if out.ndim else float(out)


def make_psi(kind: str, C: float = 1.0, alpha: float | None = None, convention: str | None = None) -> PsiModel:
    return PsiModel(kind=kind, C=C, alpha=alpha, convention=convention)


@dataclass(frozen=True)
class EnvelopeFn:
    psi: PsiModel

    def F(self, w: float) -> float:
        psi = self.psi
        if w <= 0:
            return math.inf
        if psi.kind == "quadratic":
            return 1.0 / (psi.C * w)
        if psi.kind == "algebraic":
            a = psi.alpha
            return (2.0 - a) / (2.0 * psi.C) * w ** (-2.0 / (2.0 - a))
        if w >= DELORT_V0:
            return self._F_delort_high(w)
        A, B = psi.splice

        def G(v):
            return -1.0 / (A * v) + (B / A**2) * math.log((A + B * v) / v)

        return G(DELORT_V0) - G(w) + self._F_delort_high(DELORT_V0)

    def _F_delort_high(self, w):
        # substitute v = gamma(z), integrate by parts, u = log z
        a = gamma_delort_inv(w)
        L = math.log(a)
        inc_gamma = special.gammaincc(0.75, L) * special.gamma(0.75)
        return (2.0 * inc_gamma - gamma_delort(a) / a**2) / self.psi.C

    def F_inv(self, s: float) -> float:
        """Largest w with F(w) >= s."""
        if s <= 0:
            return math.inf
        psi = self.psi
        if psi.kind == "quadratic":
            return 1.0 / (psi.C * s)
        if psi.kind == "algebraic":
            a = psi.alpha
            return ((2.0 - a) / (2.0 * psi.C * s)) ** ((2.0 - a) / 2.0)
        g = lambda x: math.log(self.F(math.exp(x))) - math.log(s)  # noqa: E731
        lo, hi = -1.0, 1.0
        while g(lo) < 0:
            lo -= 2.0 * abs(lo)
        while g(hi) > 0:
            hi += 2.0 * abs(hi)
        return math.exp(optimize.brentq(g, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500))


def numeric_F(psi: PsiModel, w: float) -> float:
    """F(w) = int_w^inf dv / Psi(v) by adaptive quadrature in u = log v."""
    f = lambda u: math.exp(u) / float(psi(math.exp(u)))  # noqa: E731
    lo = math.log(w)
    total, piece = 0.0, 8.0
    while True:
        val = integrate.quad(f, lo, lo + piece, epsabs=0.0, epsrel=1e-13, limit=200)[0]
        total += val
        if val <= 1e-16 * total:
            return total
        lo += piece


def numeric_F_inv(psi: PsiModel, s: float) -> float:
    """Independent route to F_inv: brentq on the quadrature F."""
    g = lambda x: math.log(numeric_F(psi, math.exp(x))) - math.log(s)  # noqa: E731
    lo, hi = -1.0, 1.0
    while g(lo) < 0:
        lo -= 2.0 * abs(lo)
    while g(hi) > 0:
        hi += 2.0 * abs(hi)
    return math.exp(optimize.brentq(g, lo, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps, maxiter=500))


def envelope(psi: PsiModel) -> EnvelopeFn:
    if psi.exponent <= 1.0:
        raise NonIntegrableTail(f"1/Psi is not integrable at infinity (exponent {psi.exponent})")
    return EnvelopeFn(psi)


def enstrophy_envelope(psi: PsiModel, nu: float, t: float) -> float:
    s = nu * t
    if not s > 0:
        raise DomainError("nu * t must be positive")
    return envelope(psi).F_inv(s)


def cleaner_reformulation_ratio(psi: PsiModel, s) -> np.ndarray:
    """(1/(s^2 sqrt(log 1/s))) / Psi(1/(s sqrt(log 1/s))); bounded for small s."""
    s = np.asarray(s, dtype=float)
    L = np.sqrt(np.log(1.0 / s))
    return (1.0 / (s * s * L)) / psi(1.0 / (s * L))


# ---------------------------------------------------------------- budgets


def dissipation_budget(kind: str, nu: float, T: float, delta: float | None = None, alpha: float | None = None,
                       p: float | None = None, check_domain: bool = True) -> float:
    """Budget for nu int enstrophy with unit constant.

    kind "algebraic": (nu T)^(alpha/2) over (0, T)
    kind "delort":    log(T/delta) / sqrt|log(nu T)| over (delta, T)
    kind "lp":        (nu T)^(2(p-1)/p) over (0, T)
    """
    s = nu * T
    if check_domain and not 0 < s < 1:
        raise DomainError(f"nu*T = {s:g} must lie in (0, 1)")
    if kind == "algebraic":
        if alpha is None:
            raise ParameterError("alpha required")
        return s ** (alpha / 2.0)
    if kind == "delort":
        if delta is None or not 0 < delta < T:
            raise ParameterError("need 0 < delta < T")
        return math.log(T / delta) / math.sqrt(abs(math.log(s)))
    if kind == "lp":
        if p is None or p <= 1:
            raise ParameterError("p > 1 required")
        return s ** (2.0 * (p - 1.0) / p)
    raise ParameterError(f"unknown budget kind {kind!r}")


BUDGET_COLUMNS = ("kind", "alpha_or_kappa", "nu", "delta", "T", "budget")


def write_budget_csv(rows, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(BUDGET_COLUMNS)
        for row in rows:
            w.writerow(["" if v is None else (repr(v) if isinstance(v, float) else v) for v in row])


@dataclass(frozen=True)
class TimescaleVerdict:
    nus: np.ndarray
    Ts: np.ndarray
    budgets: np.ndarray
    antecedent_holds: bool
    budget_vanishes: bool
    verdict: str  # "vanishes" | "does-not-vanish" | "inconclusive"
    note: str = ""


def _strictly_decreasing(x, rtol):
    return bool(np.all(x[1:] < x[:-1] * (1.0 - rtol)))


def timescale_verdict(kind: str, T_of_nu, nu_grid, alpha: float = 1.0, kappa: float | None = None,
                      delta: float = 0.1, tail: float = 0.5, rtol: float = 1e-9) -> TimescaleVerdict:
    """Evaluate the budget along (nu, T_nu) and test whether it tends to zero.

    The grid is sorted by decreasing nu; the last ``tail`` fraction is the
    monotone-tail window.  kind "algebraic" checks nu T_nu -> 0, kind "delort"
    checks T_nu / exp(|log nu|^kappa) -> 0 as the antecedent.
    """
    nus = np.sort(np.asarray(nu_grid, dtype=float))[::-1]
    Ts = np.array([T_of_nu(nu) for nu in nus], dtype=float)
    if kind == "algebraic":
        b = np.array([dissipation_budget("algebraic", nu, T, alpha=alpha, check_domain=False) for nu, T in zip(nus, Ts)])
        ante = nus * Ts
        note = ""
    elif kind == "delort":
        if kappa is None or not 0 < kappa < 0.5:
            raise ParameterError("kappa in (0, 1/2) required")
        b = np.array([dissipation_budget("delort", nu, T, delta=delta, check_domain=False) for nu, T in zip(nus, Ts)])
        ante = Ts / np.exp(np.abs(np.log(nus)) ** kappa)
        note = "covers the (delta, T) budget only; short-time behaviour is a hypothesis"
    else:
        raise ParameterError(f"unknown kind {kind!r}")
    k0 = min(int(len(nus) * (1 - tail)), len(nus) - 3)
    tb, ta = b[k0:], ante[k0:]
    antecedent = _strictly_decreasing(ta, rtol)
    decreasing = _strictly_decreasing(tb, rtol)
    flat = bool(np.all(np.abs(tb / tb[0] - 1.0) <= 1e3 * rtol))
    if decreasing and antecedent:
        verdict = "vanishes"
    elif bool(np.all(tb[1:] > tb[:-1] * (1.0 + rtol))):
        verdict = "does-not-vanish"
    else:
        verdict = "inconclusive"
    if flat:
        note = (note + "; " if note else "") + "budget stays constant"
    return TimescaleVerdict(nus, Ts, b, antecedent, decreasing, verdict, note)


# ---------------------------------------------------------------- comparison with data


def envelope_vs_simulation(record, psi: PsiModel) -> np.ndarray:
    """Margins F(enstrophy(t)) - nu t; the comparison principle predicts >= 0.

    A vanishing enstrophy gives the +inf sentinel.
    """
    if psi.convention is not None and getattr(record, "convention", None) not in (None, psi.convention):
        raise ConventionMismatch(f"record convention {record.convention!r} != Psi convention {psi.convention!r}")
    env = envelope(psi)
    t = np.asarray(record.times, dtype=float)
    z = np.asarray(record.enstrophy, dtype=float)
    return np.array([env.F(zi) - record.nu * ti if zi > 0 else math.inf for zi, ti in zip(z, t)])


def quadratic_psi_for(l1_mass: float, nash_constant: float, convention=None) -> PsiModel:
    """z' = -2 nu |grad w|^2 <= -nu * 2 z^2 / (C_N M)^2 by the classical inequality."""
    return make_psi("quadratic", C=2.0 / (nash_constant * l1_mass) ** 2, convention=convention)


def algebraic_psi_for(alpha: float, constant: float, convention=None) -> PsiModel:
    """z' <= -nu * 2 z^p / C^2 from ||w||^p <= C ||grad w||."""
    return make_psi("algebraic", C=2.0 / constant**2, alpha=alpha, convention=convention)
