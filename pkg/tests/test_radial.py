from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from nashlab import radial
from nashlab.errors import DomainError, ParameterError


def test_bessel_j0_against_scipy_all_regimes():
    x = np.concatenate([np.linspace(0, 8, 200), np.linspace(8, 25, 200), np.geomspace(25, 1e6, 200)])
    assert np.max(np.abs(radial.bessel_j0(x) - special.j0(x))) < 1e-13


def test_bessel_j0_rejects_negative():
    with pytest.raises(DomainError):
        radial.bessel_j0(np.array([-1.0]))


def test_j0_zeros():
    z = radial.j0_zeros_upto(100.0)
    ref = special.jn_zeros(0, z.size)
    assert np.max(np.abs(z - ref)) < 1e-12
    assert z[-1] <= 100.0 < ref[-1] + math.pi


def test_composite_gauss_polynomial_exact():
    x, w = radial.composite_gauss([0.0, 0.3, 1.0, 2.5], 8)
    assert np.sum(w * x**7) == pytest.approx(2.5**8 / 8, rel=1e-14)


def test_circle_enstrophy_closed_forms():
    for s in (1e-8, 1e-4, 1e-2, 1.0, 10.0):
        assert radial.circle_enstrophy(s) == pytest.approx(radial.circle_enstrophy_closed(s), rel=1e-8)
    # small-s asymptote: sqrt(pi/2) / sqrt(s)
    s = 1e-6
    assert radial.circle_enstrophy(s) * math.sqrt(s) == pytest.approx(math.sqrt(math.pi / 2), rel=1e-3)


def test_circle_field_and_mass():
    r = np.linspace(0.2, 2.0, 13)
    for s in (1e-3, 0.1):
        assert np.allclose(radial.circle_heat_field(r, s), radial.circle_heat_field_closed(r, s), rtol=1e-10, atol=1e-300)
        assert radial.circle_mass(s) == pytest.approx(2 * math.pi, rel=1e-12)


def test_circle_ball_mass_linear_in_r():
    # once r exceeds the heat width the ball sees an arc of length ~2r
    vals = [radial.circle_ball_mass(r, 1e-3) / r for r in (0.01, 0.05, 0.2)]
    assert max(vals) < 2.1
    assert vals[-1] == pytest.approx(2.0, rel=0.05)


def test_cutoff_validation_and_range():
    c = radial.Cutoff()
    r = np.linspace(0, 3, 31)
    chi = c.chi(r)
    assert np.all((chi >= 0) & (chi <= 1))
    assert chi[0] == 1.0 and chi[-1] == 0.0
    with pytest.raises(ParameterError):
        radial.Cutoff(kind="bogus")


def test_smooth_part_plancherel():
    sp = radial.SmoothPart(radial.Cutoff())
    assert sp.mass() == pytest.approx(-2 * math.pi, rel=1e-10)
    assert sp.l2_sq_plancherel() == pytest.approx(sp.l2_sq_physical(), rel=1e-10)


def test_bump_physical_vs_spectral():
    for t in (0.0, 0.1, 1.0):
        assert radial.mu_heat_l2_sq(t) == pytest.approx(radial.mu_heat_l2_sq_physical(t), rel=1e-10)


def test_gaussian_profile_closed_form():
    assert radial.mu_heat_l2_sq(0.5, "gaussian") == pytest.approx(math.pi / 6)


def test_rescaled_bump_scaling_identity():
    nu = 1e-6
    assert radial.rescaled_bump_enstrophy(nu, 0.5) * nu * abs(math.log(nu)) == pytest.approx(radial.mu_heat_l2_sq(0.5), rel=1e-15)
    assert radial.rescaled_bump_l1(nu) * math.sqrt(abs(math.log(nu))) == pytest.approx(radial.bump_l1(), rel=1e-15)
    with pytest.raises(DomainError):
        radial.rescaled_bump_enstrophy(1.5, 0.1)


def test_logdatum_mass_and_zero_frequency():
    assert radial.logdatum_mass_quadrature() == pytest.approx(radial.LOGDATUM_MASS, rel=1e-10)
    assert radial.logdatum_transform([1e-8])[0] == pytest.approx(radial.LOGDATUM_MASS, rel=1e-8)


def test_logdatum_spectrum_log_decay():
    rho = np.geomspace(1e3, 1e6, 5)
    vals = np.abs(radial.logdatum_transform(rho)) * np.sqrt(np.log(rho))
    assert np.all(vals < 8 * math.pi)
    assert vals[-1] == pytest.approx(4 * math.pi, rel=0.05)


def test_logdatum_ball_mass_decay():
    for r in (1e-1, 1e-3, 1e-6):
        assert radial.logdatum_ball_mass(r) * math.sqrt(abs(math.log(r))) < 20.0


def test_claim_integral_bounded():
    vals = [radial.claim_integral(e) for e in np.geomspace(1e-14, 0.5, 8)]
    assert max(vals) < 2.0
    with pytest.raises(DomainError):
        radial.claim_integral(1.0)


def test_dissipation_integral_circle_scaling():
    d1 = radial.dissipation_integral("circle", 1e-4, 0.0, 1.0)
    d2 = radial.dissipation_integral("circle", 1e-6, 0.0, 1.0)
    assert d1 / d2 == pytest.approx(10.0, rel=1e-3)
    with pytest.raises(DomainError):
        radial.dissipation_integral("logdatum", 1e-4, 0.0, 1.0)
    with pytest.raises(ParameterError):
        radial.dissipation_integral("square", 1e-4, 0.0, 1.0)


def test_heat_curve_and_csv(tmp_path):
    c = radial.heat_curve("circle", [1e-3, 1e-2])
    radial.write_curve_csv(c.s_nodes, c.values, tmp_path / "c.csv", ("s", "enstrophy"))
    assert (tmp_path / "c.csv").read_text().splitlines()[0] == "s,enstrophy"


@settings(max_examples=30, deadline=None)
@given(ls=st.floats(-14.0, 1.0))
def test_circle_enstrophy_monotone_decreasing(ls):
    s = 10.0**ls
    assert radial.circle_enstrophy(s * 1.1) < radial.circle_enstrophy(s)
