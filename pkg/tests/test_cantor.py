from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from nashlab import cantor, spectral2d
from nashlab.errors import DomainError, GeometryViolation, ParameterError, ResolutionError

A1 = cantor.Algebraic(1.0)


def test_profile_constants_by_quadrature():
    p = lambda r: 1.0 if r <= 1 else 2.0 - r  # noqa: E731
    l1 = integrate.quad(lambda r: p(r) * 2 * np.pi * r, 0, 2, points=[1])[0]
    l2 = integrate.quad(lambda r: p(r) ** 2 * 2 * np.pi * r, 0, 2, points=[1])[0]
    h1 = integrate.quad(lambda r: 2 * np.pi * r, 1, 2)[0]
    assert l1 == pytest.approx(cantor.PROFILE_L1, rel=1e-14)
    assert l2 == pytest.approx(cantor.PROFILE_L2, rel=1e-14)
    assert h1 == pytest.approx(cantor.PROFILE_H1, rel=1e-14)


def test_radius_scale_and_clamp():
    assert A1.radius_scale == 1.0
    assert cantor.Algebraic(1.5).radius_scale == pytest.approx(2 ** (4 / 1.5 - 4))
    fam = cantor.build_family(cantor.Algebraic(1.5), 1)
    assert fam.metadata["clamped"]
    assert fam.radius == pytest.approx(1 / 8)
    assert not cantor.build_family(cantor.Algebraic(1.5), 2).metadata["clamped"]
    fam = cantor.build_family(A1, 3)
    assert not fam.metadata["clamped"]
    assert fam.radius == pytest.approx(4.0**-3)


def test_invalid_inputs():
    with pytest.raises(ParameterError):
        cantor.Algebraic(2.0)
    with pytest.raises(ParameterError):
        cantor.build_family(A1, 0)
    with pytest.raises(DomainError):
        cantor.log_ball_mass_worst_case(cantor.build_family(A1, 2), 0.5)


def test_geometry_check_rejects_overlap():
    centers = np.array([[0.25, 0.5], [0.3, 0.5]])
    with pytest.raises(GeometryViolation):
        cantor._check_geometry(centers, 0.2, 1)


def test_lazy_centres_for_deep_levels():
    fam = cantor.build_family(A1, 100)
    assert fam.centers is None
    assert math.isfinite(cantor.log_saturation(fam))
    with pytest.raises(ResolutionError):
        cantor.rasterize(fam, 64)


@pytest.mark.parametrize("n", [1, 2])
def test_closed_norms_vs_grid(n):
    fam = cantor.build_family(A1, n)
    f = cantor.rasterize(fam, 1024, zero_mean=None)
    nb = cantor.closed_form_norms(fam)
    assert spectral2d.l1_norm(f) == pytest.approx(nb.l1, rel=2e-3)
    assert math.log(spectral2d.l2_norm_sq(f)) == pytest.approx(nb.l2_sq_log, abs=2e-3)
    # the kink at rho = 1, 2 limits spectral H1 accuracy to a few per cent
    assert math.log(spectral2d.h1_seminorm_sq(f)) == pytest.approx(nb.h1_sq_log, abs=0.05)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_zero_mean_l1_vs_radial_quadrature(n):
    fam = cantor.build_family(A1, n)
    c, h, d = cantor.MEAN, fam.plateau, fam.radius
    prof = lambda rho: h * (1.0 if rho <= 1 else 2.0 - rho)  # noqa: E731
    cross = 2.0 - c / h
    per_disk = integrate.quad(
        lambda rho: abs(prof(rho) - c) * 2 * np.pi * rho * d * d, 0, 2, points=[1, cross], limit=200, epsrel=1e-13
    )[0]
    outside = c * (1.0 - fam.disk_count * np.pi * (2 * d) ** 2)
    assert cantor.zero_mean_l1(fam) == pytest.approx(fam.disk_count * per_disk + outside, rel=1e-10)


def test_zero_mean_l2_matches_grid():
    fam = cantor.build_family(A1, 2)
    f = cantor.rasterize(fam, 1024, zero_mean="exact")
    assert math.log(spectral2d.l2_norm_sq(f)) == pytest.approx(cantor.zero_mean_l2_sq_log(fam), abs=3e-3)


def test_saturation_limit_matches_deep_level():
    for a in (0.5, 1.0, 1.5):
        rule = cantor.Algebraic(a)
        far = math.exp(cantor.log_saturation(cantor.build_family(rule, 200)))
        assert far == pytest.approx(cantor.saturation_limit(rule), rel=1e-12)


def test_saturation_sequence_frozen():
    # frozen from the closed forms; alpha = 0.5 is flat from n = 2
    s = cantor.saturation_sequence(cantor.Algebraic(0.5), 6, 2)
    assert s.max() / s.min() == pytest.approx(1.0026639233188224, rel=1e-12)
    s = cantor.saturation_sequence(A1, 6, 2)
    assert s.max() / s.min() == pytest.approx(3.7022396399950694, rel=1e-12)


def test_logsparse_normalized_sequence():
    seq = cantor.saturation_sequence(cantor.LogSparse(), 4, 1, normalized=True)
    target = [2**0.25 * (1 - n * 4.0 ** (-2 * n)) ** 0.25 for n in range(1, 5)]
    assert np.allclose(seq, [1.1827, 1.1884, 1.1891, 1.1892], atol=1e-4)
    assert np.all(np.abs(seq / target - 1) < 0.02)
    far = math.exp(cantor.log_saturation(cantor.build_family(cantor.LogSparse(), 20, materialize=False), normalized=True))
    assert far == pytest.approx(cantor.saturation_limit(cantor.LogSparse(), normalized=True), rel=1e-12)


def test_ball_mass_small_radius_is_plateau_disk():
    fam = cantor.build_family(A1, 3)
    r = 0.5 * fam.radius
    assert cantor.ball_mass_worst_case(fam, r) == pytest.approx(fam.plateau * math.pi * r * r, rel=1e-14)


def test_ball_mass_oracle_matches_envelope():
    fam = cantor.build_family(A1, 2)
    raster = cantor.rasterize(fam, 512, zero_mean=None)
    for frac in (0.5, 1.0):
        r = frac * fam.radius
        assert cantor.ball_mass_oracle(raster, r) == pytest.approx(cantor.ball_mass_worst_case(fam, r), rel=5e-3)


def test_ball_mass_total_cap():
    fam = cantor.build_family(A1, 2)
    assert cantor.ball_mass_worst_case(fam, 0.49) <= cantor.PROFILE_L1 * (1 + 1e-12)


@settings(max_examples=40, deadline=None)
@given(n=st.integers(1, 8), a=st.sampled_from([0.5, 1.0, 1.5]), lr1=st.floats(-20.0, -0.7), lr2=st.floats(-20.0, -0.7))
def test_ball_mass_monotone_in_radius(n, a, lr1, lr2):
    fam = cantor.build_family(cantor.Algebraic(a), n, materialize=False)
    lo, hi = sorted((lr1, lr2))
    assert cantor.log_ball_mass_worst_case(fam, log_r=lo) <= cantor.log_ball_mass_worst_case(fam, log_r=hi) + 1e-12


@settings(max_examples=25, deadline=None)
@given(n=st.integers(1, 60), a=st.floats(0.1, 1.9))
def test_saturation_finite_in_log_domain(n, a):
    fam = cantor.build_family(cantor.Algebraic(a), n, materialize=False)
    assert math.isfinite(cantor.log_saturation(fam))
    assert cantor.zero_mean_l2_sq_log(fam) <= cantor.closed_form_norms(fam).l2_sq_log


def test_csv(tmp_path):
    rows = cantor.saturation_rows(A1, 3)
    cantor.write_csv(rows, tmp_path / "s.csv")
    lines = (tmp_path / "s.csv").read_text().splitlines()
    assert lines[0] == ",".join(cantor.CSV_COLUMNS) and len(lines) == 4
