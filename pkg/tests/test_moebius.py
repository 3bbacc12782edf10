import cmath
import math
import random

import pytest

from kleinlog.moebius import (
    INF,
    MoebiusMap,
    NotLoxodromicError,
    PoleError,
    SpherePoint,
    as_sphere_point,
    chordal,
    from_fixed_points_multiplier,
    phi,
)


def rand_map(rng) -> MoebiusMap:
    while True:
        a, b, c, d = (complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in range(4))
        if abs(a * d - b * c) > 1e-3:
            return MoebiusMap(a, b, c, d)


def rand_point(rng) -> SpherePoint:
    # occasionally infinity, otherwise a moderate finite point
    if rng.random() < 0.1:
        return INF
    return SpherePoint(complex(rng.gauss(0, 2), rng.gauss(0, 2)))


def test_determinant_normalized():
    rng = random.Random(7)
    for _ in range(200):
        m = rand_map(rng)
        assert abs(m.a * m.d - m.b * m.c - 1.0) < 1e-12


def test_identity_and_inverse():
    rng = random.Random(11)
    e = MoebiusMap.identity()
    assert e.is_identity()
    for _ in range(100):
        m = rand_map(rng)
        assert (m @ m.inverse()).is_identity()
        assert (m.inverse() @ m).is_identity()


def test_apply_composition_consistency():
    rng = random.Random(13)
    for _ in range(300):
        m1, m2 = rand_map(rng), rand_map(rng)
        p = rand_point(rng)
        lhs = (m1 @ m2).apply(p)
        rhs = m1.apply(m2.apply(p))
        assert chordal(lhs, rhs) < 1e-9


def test_apply_pol_to_infinity():
    m = MoebiusMap(0, 1, 1, 0)  # z -> 1/z
    assert m.apply(SpherePoint(0j)).is_infinity
    assert complex(m.apply(INF)) == 0j
    t = MoebiusMap.translation(3 + 4j)
    assert t.apply(INF).is_infinity
    assert complex(t.apply(SpherePoint(1 + 0j))) == 4 + 4j


def test_chordal_metric_properties():
    rng = random.Random(17)
    pts = [rand_point(rng) for _ in range(40)]
    for x in pts:
        assert chordal(x, x) == 0.0
        for y in pts:
            d = chordal(x, y)
            assert 0.0 <= d <= 2.0 + 1e-15
            assert abs(d - chordal(y, x)) < 1e-15
    # triangle inequality on random triples
    for _ in range(200):
        x, y, z = (rand_point(rng) for _ in range(3))
        assert chordal(x, z) <= chordal(x, y) + chordal(y, z) + 1e-12


def test_chordal_closed_forms():
    # 0 and infinity are antipodal; 0 and 1 sit at distance sqrt(2)
    assert abs(chordal(SpherePoint(0j), INF) - 2.0) < 1e-15
    assert abs(chordal(SpherePoint(0j), SpherePoint(1 + 0j)) - math.sqrt(2)) < 1e-15
    # phi is half the squared chordal distance
    rng = random.Random(19)
    for _ in range(100):
        x, y = rand_point(rng), rand_point(rng)
        assert abs(phi(x, y) - 0.5 * chordal(x, y) ** 2) < 1e-13


def test_spherical_derivative_chain_rule():
    rng = random.Random(23)
    for _ in range(200):
        g, h = rand_map(rng), rand_map(rng)
        p = rand_point(rng)
        lhs = (g @ h).spherical_derivative(p)
        rhs = g.spherical_derivative(h.apply(p)) * h.spherical_derivative(p)
        assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(lhs))


def test_spherical_derivative_matches_chordal_ratio():
    rng = random.Random(29)
    for _ in range(100):
        m = rand_map(rng)
        p = rand_point(rng)
        if p.is_finite and m.c != 0 and abs(complex(p) + m.d / m.c) < 1e-2:
            continue  # finite differencing is hopeless next to the pole
        q = as_sphere_point(
            (complex(p) if p.is_finite else 1e8) + 1e-6 * cmath.exp(2j * rng.random())
        )
        ratio = chordal(m.apply(p), m.apply(q)) / chordal(p, q)
        assert abs(ratio - m.spherical_derivative(p)) < 1e-3 * max(
            1.0, m.spherical_derivative(p)
        )


def test_derivative_pole():
    m = MoebiusMap(1, 0, 1, 1)  # pole at -1
    with pytest.raises(PoleError):
        m.derivative(-1 + 0j)
    with pytest.raises(ValueError):
        m.derivative(INF)


def test_scaling_fixed_points_and_multiplier():
    m = MoebiusMap.scaling(4.0)
    fp = m.fixed_points_multiplier()
    # attracting fixed point of z -> 4z is infinity
    assert fp.fix_attracting.is_infinity
    assert complex(fp.fix_repelling) == 0j
    assert abs(fp.multiplier - 4.0) < 1e-12


def test_from_fixed_points_multiplier_roundtrip():
    rng = random.Random(31)
    for _ in range(100):
        zp = rand_point(rng)
        zm = rand_point(rng)
        if chordal(zp, zm) < 1e-2:
            continue
        lam = complex(rng.uniform(1.2, 8.0), rng.uniform(-1.0, 1.0))
        if abs(lam) <= 1.05:
            continue
        m = from_fixed_points_multiplier(zm, zp, lam)
        assert chordal(m.apply(zp), zp) < 1e-9
        assert chordal(m.apply(zm), zm) < 1e-9
        fp = m.fixed_points_multiplier()
        assert chordal(fp.fix_attracting, zp) < 1e-7
        assert chordal(fp.fix_repelling, zm) < 1e-7
        assert abs(fp.multiplier - lam) < 1e-7 * abs(lam)


def test_from_fixed_points_rejects_unit_multiplier():
    with pytest.raises(ValueError):
        from_fixed_points_multiplier(SpherePoint(0j), INF, cmath.exp(1j))


def test_classify():
    assert MoebiusMap.identity().classify() == "identity"
    assert MoebiusMap.translation(1 + 0j).classify() == "parabolic"
    assert MoebiusMap.scaling(cmath.exp(0.7j)).classify() == "elliptic"
    assert MoebiusMap.scaling(3.0).classify() == "loxodromic"
    assert MoebiusMap.scaling(2.0 * cmath.exp(0.5j)).classify() == "loxodromic"
    with pytest.raises(NotLoxodromicError):
        MoebiusMap.translation(1 + 0j).fixed_points_multiplier()


def test_conjugation():
    rng = random.Random(37)
    for _ in range(50):
        m, h = rand_map(rng), rand_map(rng)
        c = m.conjugate_by(h)
        p = rand_point(rng)
        lhs = c.apply(h.apply(p))
        rhs = h.apply(m.apply(p))
        assert chordal(lhs, rhs) < 1e-8
