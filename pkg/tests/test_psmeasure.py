import math

import numpy as np
import pytest

from kleinlog.moebius import INF, SpherePoint, phi
from kleinlog.psmeasure import (
    MeasureError,
    NayataniDensity,
    PSMeasure,
    SingularEvaluationError,
    asymptotic_profile,
    atom_resolution,
    build_ps,
    conformality_report,
    metric_factor,
    nayatani_F,
    quasi_invariance_residual,
    read_measure_csv,
    write_measure_csv,
)


def single_atom(delta=1.0, at=0j) -> PSMeasure:
    return PSMeasure(
        points=np.array([at], dtype=complex),
        inf_mask=np.array([False]),
        weights=np.array([1.0]),
        delta=delta,
        depth=1,
        basepoint=INF,
    )


def test_build_ps_mass_and_support(std_group, sharp_delta):
    m = build_ps(std_group, sharp_delta, depth=6)
    assert abs(math.fsum(m.weights) - 1.0) <= 1e-12
    assert len(m) == 2 * 2 * 3 ** 5
    assert (m.weights > 0).all()
    assert not m.inf_mask.any()
    # every atom sits inside one of the defining disks
    inside = np.zeros(len(m), dtype=bool)
    for c in std_group.circles:
        inside |= np.abs(m.points - c.center) <= c.radius + 1e-9
    assert inside.all()
    assert m.delta == sharp_delta.delta


def test_build_ps_rejects_bad_inputs(std_group):
    with pytest.raises(MeasureError):
        build_ps(std_group, 0.3, depth=1)
    with pytest.raises(MeasureError):
        build_ps(std_group, -0.5, depth=6)
    from kleinlog.schottky import SchottkyGroup

    with pytest.raises(MeasureError):
        build_ps(SchottkyGroup([]), 0.3, depth=6)


def test_psmeasure_validation():
    pts = np.array([0j, 1 + 0j])
    msk = np.array([False, False])
    with pytest.raises(MeasureError):
        PSMeasure(pts, msk, np.array([0.7, 0.7]), 0.5, 1, INF)  # mass != 1
    with pytest.raises(MeasureError):
        PSMeasure(pts, msk, np.array([1.5, -0.5]), 0.5, 1, INF)  # negative
    with pytest.raises(MeasureError):
        PSMeasure(np.array([], dtype=complex), np.array([], dtype=bool),
                  np.array([]), 0.5, 1, INF)
    m = PSMeasure(pts, msk, np.array([0.5, 0.5]), 0.5, 1, INF)
    assert len(m) == 2
    with pytest.raises(ValueError):
        m.weights[0] = 1.0  # arrays are frozen


def test_quasi_invariance_residual_decreases(std_group, sharp_delta):
    res = [
        quasi_invariance_residual(build_ps(std_group, sharp_delta, d), std_group)
        for d in (6, 8)
    ]
    assert res[0] > res[1] > 0.0
    assert res[1] < 1e-3


def test_wrong_delta_inflates_residual(std_group, sharp_delta):
    good = quasi_invariance_residual(build_ps(std_group, sharp_delta, 6), std_group)
    bad = quasi_invariance_residual(
        build_ps(std_group, sharp_delta.delta + 0.2, 6), std_group
    )
    assert bad > 5.0 * good


def test_custom_test_functions(std_group, sharp_delta):
    m = build_ps(std_group, sharp_delta, 6)
    only_const = quasi_invariance_residual(
        m, std_group, test_functions=[("1", lambda n1, n2, n3: np.ones_like(n1))]
    )
    full = quasi_invariance_residual(m, std_group)
    assert only_const <= full + 1e-15


def test_single_atom_density_closed_form():
    d = NayataniDensity(single_atom(delta=1.0))
    rng = np.random.default_rng(211)
    for _ in range(50):
        x = SpherePoint(complex(rng.normal(), rng.normal()))
        expected = 1.0 / phi(x, SpherePoint(0j))
        assert abs(d.F(x) - expected) < 1e-12 * abs(expected)
        assert abs(nayatani_F(d, x) - d.F(x)) == 0.0
    # antipode of 0 is infinity: phi = 2 there, F = 1/2
    assert abs(d.F(INF) - 0.5) < 1e-15
    assert abs(metric_factor(d, INF) - 0.25) < 1e-15


def test_density_singular_at_atom():
    d = NayataniDensity(single_atom(delta=0.7))
    with pytest.raises(SingularEvaluationError):
        d.F(SpherePoint(0j))
    vals, singular = d.F_many(np.array([0j, 1j]), np.array([False, False]))
    assert singular[0] and not singular[1]
    assert np.isinf(vals[0]) and np.isfinite(vals[1])


def test_f_many_matches_scalar(std_group, sharp_delta):
    m = build_ps(std_group, sharp_delta, 5)
    den = NayataniDensity(m)
    rng = np.random.default_rng(223)
    pts = rng.normal(size=40) + 1j * rng.normal(size=40)
    vals, singular = den.F_many(pts, np.zeros(40, dtype=bool))
    assert not singular.any()
    for p, v in zip(pts, vals):
        assert abs(den.F(SpherePoint(complex(p))) - v) <= 1e-12 * abs(v)


def test_asymptotic_profile_single_atom():
    # F = phi^-delta around one atom gives log-slope exactly -2 delta
    for delta in (0.5, 1.0):
        d = NayataniDensity(single_atom(delta=delta))
        radii = np.geomspace(1e-2, 1e-4, 7)
        prof = asymptotic_profile(d, SpherePoint(0j), radii)
        assert abs(prof.slope + 2.0 * delta) < 1e-6
        assert prof.resolution == 0.0


def test_profile_refuses_below_resolution(std_group, sharp_delta):
    m = build_ps(std_group, sharp_delta, 6)
    den = NayataniDensity(m)
    y0 = SpherePoint(m.points[3])
    res = atom_resolution(den, y0)
    assert res >= 0.0
    with pytest.raises(MeasureError):
        asymptotic_profile(den, y0, np.geomspace(res + 1e-15, (res + 1e-15) / 100, 5))


def test_profile_near_limit_set(std_group, sharp_delta):
    # slope is recorded, not asserted: the measured profile exponent near the
    # limit set is diagnostic output
    m = build_ps(std_group, sharp_delta, 6)
    den = NayataniDensity(m)
    prof = asymptotic_profile(den, SpherePoint(2.2 + 0j), np.geomspace(0.5, 0.08, 6))
    assert np.isfinite(prof.slope)
    assert len(prof.values) == 6
    assert all(v > 0 for v in prof.values)


def test_conformality_report(std_group, sharp_delta):
    m = build_ps(std_group, sharp_delta, 8)
    den = NayataniDensity(m)
    rep = conformality_report(den, std_group, n_points=50, seed=0)
    assert rep.n_points > 0
    assert rep.max_rel_deviation > 0
    assert rep.residual > 0
    assert rep.max_rel_deviation <= rep.constant * max(rep.residual, 1e-12) + 1e-12
    assert rep.constant < 10.0


def test_csv_roundtrip(tmp_path, std_group, sharp_delta):
    m = build_ps(std_group, sharp_delta, 5)
    path = tmp_path / "measure.csv"
    write_measure_csv(m, path)
    back = read_measure_csv(path)
    assert back.delta == m.delta
    assert back.depth == m.depth
    assert back.basepoint.is_infinity == m.basepoint.is_infinity
    assert np.array_equal(back.points, m.points)
    assert np.array_equal(back.weights, m.weights)
    # a second export of the re-imported measure is byte identical
    path2 = tmp_path / "measure2.csv"
    write_measure_csv(back, path2)
    assert path.read_bytes() == path2.read_bytes()
