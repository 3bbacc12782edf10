"""Vectorized sphere arithmetic over arrays of points.

Points are (complex ndarray, bool inf-mask) pairs; all formulas go through
bounded homogeneous coordinates so nothing overflows near infinity.
"""

from __future__ import annotations

import numpy as np

from .moebius import INF, MoebiusMap, SpherePoint, as_sphere_point


def hom_many(points: np.ndarray, inf_mask: np.ndarray):
    """Bounded homogeneous representatives (Z, W) with max(|Z|,|W|) <= 1."""
    pts = np.asarray(points, dtype=complex)
    Z = np.ones_like(pts)
    W = np.zeros_like(pts)
    fin = ~np.asarray(inf_mask, dtype=bool)
    big = fin & (np.abs(pts) > 1.0)
    sml = fin & ~big
    Z[sml] = pts[sml]
    W[sml] = 1.0
    W[big] = 1.0 / pts[big]
    return Z, W


def apply_many(m: MoebiusMap, points, inf_mask):
    """Apply a Moebius map to an array of sphere points."""
    Z, W = hom_many(points, inf_mask)
    num = m.a * Z + m.b * W
    den = m.c * Z + m.d * W
    out_inf = den == 0
    out = num / np.where(out_inf, 1.0, den)
    bad = ~np.isfinite(out.real) | ~np.isfinite(out.imag)
    out_inf = out_inf | bad
    return np.where(out_inf, 0.0, out), out_inf


def spherical_derivative_many(m: MoebiusMap, points, inf_mask) -> np.ndarray:
    Z, W = hom_many(points, inf_mask)
    num = m.a * Z + m.b * W
    den = m.c * Z + m.d * W
    n0 = Z.real**2 + Z.imag**2 + W.real**2 + W.imag**2
    n1 = num.real**2 + num.imag**2 + den.real**2 + den.imag**2
    return n0 / n1


def chordal_many(p, points, inf_mask) -> np.ndarray:
    """Chordal distances from one sphere point to an array of them."""
    p = as_sphere_point(p)
    if p.is_infinity:
        zp, wp = 1.0 + 0j, 0j
    elif abs(p.value) <= 1.0:
        zp, wp = p.value, 1.0 + 0j
    else:
        zp, wp = 1.0 + 0j, 1.0 / p.value
    Z, W = hom_many(points, inf_mask)
    cross = np.abs(zp * W - Z * wp)
    np_sq = abs(zp) ** 2 + abs(wp) ** 2
    n_sq = Z.real**2 + Z.imag**2 + W.real**2 + W.imag**2
    return 2.0 * cross / np.sqrt(np_sq * n_sq)


def sphere_coords_many(points, inf_mask):
    """Unit-sphere embedding (n1, n2, n3); infinity maps to (0, 0, 1)."""
    Z, W = hom_many(points, inf_mask)
    nn = Z.real**2 + Z.imag**2 + W.real**2 + W.imag**2
    zw = Z * np.conj(W)
    return 2.0 * zw.real / nn, 2.0 * zw.imag / nn, (np.abs(Z) ** 2 - np.abs(W) ** 2) / nn


def to_sphere(p) -> np.ndarray:
    p = as_sphere_point(p)
    if p.is_infinity:
        return np.array([0.0, 0.0, 1.0])
    pts = np.array([p.value])
    msk = np.array([False])
    n1, n2, n3 = sphere_coords_many(pts, msk)
    return np.array([n1[0], n2[0], n3[0]])


def from_sphere(n) -> SpherePoint:
    n1, n2, n3 = (float(c) for c in n)
    denom = 1.0 - n3
    if denom <= 1e-15:
        return INF
    return SpherePoint(complex(n1 / denom, n2 / denom))


def uniform_sphere_points(rng: np.random.Generator, n: int):
    """n uniform points on the sphere from two uniform variates each
    (area-preserving cylinder map), stereographed to the plane."""
    u = rng.uniform(-1.0, 1.0, size=n)  # cos(polar angle)
    ang = rng.uniform(0.0, 2.0 * np.pi, size=n)
    s = np.sqrt(np.maximum(0.0, 1.0 - u * u))
    n1, n2, n3 = s * np.cos(ang), s * np.sin(ang), u
    denom = 1.0 - n3
    inf_mask = denom <= 1e-15
    denom = np.where(inf_mask, 1.0, denom)
    pts = (n1 + 1j * n2) / denom
    return np.where(inf_mask, 0.0, pts), inf_mask
