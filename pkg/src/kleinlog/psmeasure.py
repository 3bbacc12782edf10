"""Finite atomic Patterson-Sullivan approximations on Schottky limit sets,
the associated conformal density F, and residual tests for quasi-invariance.

The measure places the deepest-shell orbit of the basepoint on the sphere
with weights proportional to the spherical derivative raised to delta; the
density is F(x) = sum_i w_i * phi(x, x_i)^(-delta) with phi half the squared
chordal distance.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from ._vec import (
    apply_many,
    chordal_many,
    from_sphere,
    hom_many,
    sphere_coords_many,
    spherical_derivative_many,
    to_sphere,
    uniform_sphere_points,
)
from .moebius import INF, SpherePoint, as_sphere_point
from .schottky import DeltaEstimate, SchottkyGroup, estimate_delta

MASS_TOL = 1e-12
ATOM_GUARD = 1e-12
RESIDUAL_EPS = 1e-12


class MeasureError(ValueError):
    """Measure construction or evaluation rejected with a diagnostic."""


class SingularEvaluationError(MeasureError):
    """Density evaluation requested on or too near an atom."""


@dataclass(frozen=True)
class PSMeasure:
    """Atomic measure with unit total mass; immutable after build."""

    points: np.ndarray
    inf_mask: np.ndarray
    weights: np.ndarray
    delta: float
    depth: int
    basepoint: SpherePoint

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=complex)
        msk = np.asarray(self.inf_mask, dtype=bool)
        wts = np.asarray(self.weights, dtype=float)
        if not (pts.shape == msk.shape == wts.shape) or pts.ndim != 1:
            raise MeasureError("points, inf_mask, weights must be equal 1-d arrays")
        if wts.size == 0:
            raise MeasureError("a measure needs at least one atom")
        if np.any(wts < 0) or not np.all(np.isfinite(wts)):
            raise MeasureError("weights must be finite and nonnegative")
        total = math.fsum(wts)
        if abs(total - 1.0) > MASS_TOL:
            raise MeasureError(f"total mass {total!r} is not 1 within {MASS_TOL}")
        for a in (pts, msk, wts):
            a.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "inf_mask", msk)
        object.__setattr__(self, "weights", wts)
        object.__setattr__(self, "basepoint", as_sphere_point(self.basepoint))

    @property
    def atoms(self):
        return tuple(
            (INF if m else SpherePoint(p), float(w))
            for p, m, w in zip(self.points, self.inf_mask, self.weights)
        )

    def __len__(self):
        return self.weights.size


def build_ps(group: SchottkyGroup, delta=None, depth: int = 8) -> PSMeasure:
    """Deepest-shell orbit measure: atoms w(basepoint) over |w| = depth,
    weights proportional to (spherical derivative of w at basepoint)^delta."""
    if depth < 2:
        raise MeasureError(f"depth must be >= 2, got {depth}")
    if group.rank == 0:
        raise MeasureError("the trivial group carries no limit-set measure")
    if delta is None:
        delta = estimate_delta(group).delta
    elif isinstance(delta, DeltaEstimate):
        delta = delta.delta
    delta = float(delta)
    if not (delta >= 0.0 and math.isfinite(delta)):
        raise MeasureError(f"delta must be a finite nonnegative real, got {delta!r}")
    bp = group.default_basepoint()
    pts, msk, sph = group.shell_terms(depth, bp, "absolute")
    raw = sph**delta
    total = math.fsum(raw)
    if not (total > 0.0 and math.isfinite(total)):
        raise MeasureError("degenerate weight normalization")
    wts = raw / total
    # rescale so the compensated total is exactly representable as 1
    wts = wts / math.fsum(wts)
    if group.circles is not None:
        group._ensure_shells(depth)
        first = group._shell_first[depth]
        seen = set(int(f) for f in first)
        missing = [l for l in group.letters if l not in seen]
        if missing:
            raise MeasureError(
                f"depth {depth} leaves defining disks of letters {missing} empty")
        for l in group.letters:
            sel = first == l
            tgt = group.target_circle(int(l))
            inside = np.abs(pts[sel] - tgt.center) <= tgt.radius + 1e-9
            if np.any(msk[sel]) or not np.all(inside):
                raise MeasureError(
                    f"orbit atoms escaped the defining disk of letter {l}")
    return PSMeasure(pts, msk, wts, delta, int(depth), bp)


# test functions: constant plus the first eight real spherical harmonics,
# evaluated through the unit-sphere embedding

def _tf_const(n1, n2, n3):
    return np.ones_like(n1)


DEFAULT_TEST_FUNCTIONS = (
    ("1", _tf_const),
    ("n1", lambda n1, n2, n3: n1),
    ("n2", lambda n1, n2, n3: n2),
    ("n3", lambda n1, n2, n3: n3),
    ("n1*n2", lambda n1, n2, n3: n1 * n2),
    ("n1*n3", lambda n1, n2, n3: n1 * n3),
    ("n2*n3", lambda n1, n2, n3: n2 * n3),
    ("n1^2-n2^2", lambda n1, n2, n3: n1 * n1 - n2 * n2),
    ("3*n3^2-1", lambda n1, n2, n3: 3.0 * n3 * n3 - 1.0),
)


def quasi_invariance_residual(measure: PSMeasure, group: SchottkyGroup,
                              test_functions=None) -> float:
    """max over generators g and test functions f of
    |sum w f(x) - sum w s_g(x)^delta f(gx)| / (sum w |f(x)| + eps)."""
    fns = DEFAULT_TEST_FUNCTIONS if test_functions is None else tuple(test_functions)
    pts, msk, wts = measure.points, measure.inf_mask, measure.weights
    cx = sphere_coords_many(pts, msk)
    worst = 0.0
    for g in group.generators:
        img, img_msk = apply_many(g, pts, msk)
        jac = spherical_derivative_many(g, pts, msk) ** measure.delta
        cy = sphere_coords_many(img, img_msk)
        for _, f in fns:
            fx = f(*cx)
            fy = f(*cy)
            lhs = math.fsum(wts * fx)
            rhs = math.fsum(wts * jac * fy)
            den = math.fsum(wts * np.abs(fx)) + RESIDUAL_EPS
            worst = max(worst, abs(lhs - rhs) / den)
    return worst


@dataclass(frozen=True)
class NayataniDensity:
    """Conformal density of a PSMeasure; evaluations are pure and share only
    the pre-extracted atom arrays."""

    measure: PSMeasure

    def __post_init__(self):
        # cache the atoms' homogeneous coordinates once; F evaluations reuse them
        Z, W = hom_many(self.measure.points, self.measure.inf_mask)
        object.__setattr__(self, "_atom_Z", Z)
        object.__setattr__(self, "_atom_W", W)
        object.__setattr__(self, "_atom_nsq",
                           Z.real**2 + Z.imag**2 + W.real**2 + W.imag**2)

    @property
    def delta(self) -> float:
        return self.measure.delta

    def _phi_row(self, zp: complex, wp: complex) -> np.ndarray:
        cross = np.abs(zp * self._atom_W - self._atom_Z * wp)
        np_sq = abs(zp) ** 2 + abs(wp) ** 2
        return 2.0 * cross**2 / (np_sq * self._atom_nsq)

    def F(self, x) -> float:
        p = as_sphere_point(x)
        if p.is_infinity:
            zp, wp = 1.0 + 0j, 0j
        elif abs(p.value) <= 1.0:
            zp, wp = p.value, 1.0 + 0j
        else:
            zp, wp = 1.0 + 0j, 1.0 / p.value
        ph = self._phi_row(zp, wp)
        if np.min(ph) <= 0.5 * ATOM_GUARD**2:
            raise SingularEvaluationError(
                "evaluation point within the atom guard distance")
        return math.fsum(self.measure.weights * ph ** (-self.measure.delta))

    def metric_factor(self, x) -> float:
        d = self.measure.delta
        if d <= 0.0:
            raise MeasureError("metric factor needs delta > 0")
        return self.F(x) ** (2.0 / d)

    def F_many(self, points, inf_mask, chunk: int = 256):
        """Vectorized F with a singular mask instead of raising; fixed chunk
        size keeps the summation order reproducible."""
        pts = np.asarray(points, dtype=complex)
        msk = np.asarray(inf_mask, dtype=bool)
        out = np.empty(pts.shape, dtype=float)
        singular = np.zeros(pts.shape, dtype=bool)
        Z, W = hom_many(pts, msk)
        np_sq = Z.real**2 + Z.imag**2 + W.real**2 + W.imag**2
        d = self.measure.delta
        w = self.measure.weights
        for lo in range(0, pts.size, chunk):
            hi = min(lo + chunk, pts.size)
            cross = np.abs(Z[lo:hi, None] * self._atom_W[None, :]
                           - self._atom_Z[None, :] * W[lo:hi, None])
            ph = 2.0 * cross**2 / (np_sq[lo:hi, None] * self._atom_nsq[None, :])
            bad = ph.min(axis=1) <= 0.5 * ATOM_GUARD**2
            singular[lo:hi] = bad
            ph[bad] = 1.0
            out[lo:hi] = np.sum(w[None, :] * ph ** (-d), axis=1)
        out[singular] = np.inf
        return out, singular


def nayatani_F(density: NayataniDensity, x) -> float:
    return density.F(x)


def metric_factor(density: NayataniDensity, x) -> float:
    return density.metric_factor(x)


@dataclass(frozen=True)
class AsymptoticProfile:
    radii: tuple[float, ...]
    values: tuple[float, ...]
    slope: float
    resolution: float


def atom_resolution(density: NayataniDensity, y0) -> float:
    """Chordal distance from y0 to the nearest atom not coincident with it."""
    d = chordal_many(y0, density.measure.points, density.measure.inf_mask)
    distinct = d[d > ATOM_GUARD]
    return float(distinct.min()) if distinct.size else 0.0


def asymptotic_profile(density: NayataniDensity, y0, radii) -> AsymptoticProfile:
    """F along a fixed tangent ray toward y0, at the given chordal radii,
    with the fitted log-log slope."""
    radii = [float(r) for r in radii]
    if len(radii) < 2 or any(r <= 0 for r in radii):
        raise MeasureError("need at least two positive radii")
    if any(radii[i] <= radii[i + 1] for i in range(len(radii) - 1)):
        raise MeasureError("radii must be strictly decreasing")
    if radii[0] >= 2.0:
        raise MeasureError("chordal radii must be < 2")
    res = atom_resolution(density, y0)
    if res > 0.0 and min(radii) < res:
        raise MeasureError(
            f"radius {min(radii):.3e} is below the atom resolution scale "
            f"{res:.3e} of the measure; deepen the measure or raise the radii")
    n0 = to_sphere(y0)
    t = np.cross([0.0, 0.0, 1.0], n0)
    if np.linalg.norm(t) < 1e-9:
        t = np.cross([1.0, 0.0, 0.0], n0)
    t = t / np.linalg.norm(t)
    values = []
    for r in radii:
        theta = 2.0 * math.asin(min(1.0, r / 2.0))
        x = from_sphere(math.cos(theta) * n0 + math.sin(theta) * t)
        values.append(density.F(x))
    logs_r = np.log(radii)
    logs_f = np.log(values)
    slope = float(np.polyfit(logs_r, logs_f, 1)[0])
    return AsymptoticProfile(tuple(radii), tuple(values), slope, res)


@dataclass(frozen=True)
class ConformalityReport:
    max_rel_deviation: float
    residual: float
    constant: float
    n_points: int


def conformality_report(density: NayataniDensity, group: SchottkyGroup,
                        n_points: int = 50, seed: int = 0) -> ConformalityReport:
    """Checks F(gx) * s_g(x)^delta = F(x) at sampled fundamental-domain points;
    reports the worst relative deviation and its ratio to the measure residual."""
    rng = np.random.default_rng(seed)
    samples = []
    guard = 0
    while len(samples) < n_points:
        pts, msk = uniform_sphere_points(rng, 4 * n_points)
        for p, m in zip(pts, msk):
            if len(samples) >= n_points:
                break
            sp = INF if m else SpherePoint(complex(p))
            if group.circles is not None and any(
                    c.contains(sp) for c in group.circles):
                continue
            try:
                density.F(sp)
            except SingularEvaluationError:
                continue
            samples.append(sp)
        guard += 1
        if guard > 50:
            raise MeasureError("could not sample enough fundamental-domain points")
    worst = 0.0
    d = density.measure.delta
    for g in group.generators:
        for x in samples:
            fx = density.F(x)
            gx = g.apply(x)
            rel = abs(density.F(gx) * g.spherical_derivative(x) ** d - fx) / fx
            worst = max(worst, rel)
    residual = quasi_invariance_residual(density.measure, group)
    constant = worst / max(residual, RESIDUAL_EPS)
    return ConformalityReport(worst, residual, constant, n_points)


def write_measure_csv(measure: PSMeasure, path) -> None:
    """CSV rows re,im,weight (infinity as inf,inf) under a JSON comment header."""
    bp = measure.basepoint
    header = {
        "delta": measure.delta,
        "depth": measure.depth,
        "basepoint": "inf" if bp.is_infinity else [bp.value.real, bp.value.imag],
    }
    with open(path, "w", encoding="ascii") as f:
        f.write("# " + json.dumps(header, sort_keys=True) + "\n")
        f.write("re,im,weight\n")
        for p, m, w in zip(measure.points, measure.inf_mask, measure.weights):
            if m:
                f.write(f"inf,inf,{float(w)!r}\n")
            else:
                f.write(f"{float(p.real)!r},{float(p.imag)!r},{float(w)!r}\n")


def read_measure_csv(path) -> PSMeasure:
    with open(path, "r", encoding="ascii") as f:
        first = f.readline()
        if not first.startswith("# "):
            raise MeasureError("missing JSON header line")
        header = json.loads(first[2:])
        cols = f.readline().strip()
        if cols != "re,im,weight":
            raise MeasureError(f"unexpected column line {cols!r}")
        pts, msk, wts = [], [], []
        for line in f:
            line = line.strip()
            if not line:
                continue
            re_s, im_s, w_s = line.split(",")
            re_v, im_v = float(re_s), float(im_s)
            if math.isinf(re_v) or math.isinf(im_v):
                pts.append(0j)
                msk.append(True)
            else:
                pts.append(complex(re_v, im_v))
                msk.append(False)
            wts.append(float(w_s))
    bp = header["basepoint"]
    basepoint = INF if bp == "inf" else SpherePoint(complex(bp[0], bp[1]))
    return PSMeasure(np.array(pts, dtype=complex), np.array(msk, dtype=bool),
                     np.array(wts, dtype=float), float(header["delta"]),
                     int(header["depth"]), basepoint)
