"""Classical polylogarithms and single-valued variants with tracked truncation error.

Li_n uses three argument regions: a direct power series for |z| <= 1/2, the
inversion formula through a Bernoulli polynomial for |z| >= 2, and the
log-argument expansion in the remaining band.  Every region carries a proven
geometric tail bound, so the reported error_bound is honest rather than a
heuristic.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .moebius import as_sphere_point

EPS = 2.220446049250313e-16
TWO_PI = 2.0 * math.pi

# global sup of |D| on the sphere; the true maximum is D(exp(i*pi/3)) ~ 1.01494
D_GLOBAL_BOUND = 1.015


class SingularArgumentError(ValueError):
    """Polylogarithm evaluated at a singular or excluded argument."""


@dataclass(frozen=True)
class PolylogResult:
    """A value together with an a-priori bound on its truncation error."""

    value: complex
    error_bound: float
    terms_used: int


@lru_cache(maxsize=None)
def _bernoulli_fraction(m: int) -> Fraction:
    # recurrence sum_{j<=m} C(m+1, j) B_j = 0, convention B_1 = -1/2
    if m == 0:
        return Fraction(1)
    acc = Fraction(0)
    for j in range(m):
        acc += math.comb(m + 1, j) * _bernoulli_fraction(j)
    return -acc / (m + 1)


def bernoulli_number(m: int) -> float:
    """The Bernoulli number B_m (B_1 = -1/2)."""
    if m < 0:
        raise ValueError("Bernoulli index must be >= 0")
    if m > 2 and m % 2 == 1:
        return 0.0
    return float(_bernoulli_fraction(m))


@lru_cache(maxsize=None)
def zeta_int(k: int) -> float:
    """Riemann zeta at an integer argument != 1."""
    if k == 1:
        raise ValueError("zeta has a pole at 1")
    if k <= 0:
        n = -k
        return (-1.0) ** n * bernoulli_number(n + 1) / (n + 1)
    if k >= 64:
        return 1.0 + 2.0 ** (-k) + 3.0 ** (-k)
    # Euler-Maclaurin with cutoff N; correction terms decay like (k/ (2 pi N))^{2r}
    n_cut = 24
    acc = sum(j ** (-float(k)) for j in range(1, n_cut))
    acc += n_cut ** (1.0 - k) / (k - 1.0)
    acc += 0.5 * n_cut ** (-float(k))
    factor = k * n_cut ** (-float(k) - 1.0)
    for r in range(1, 13):
        acc += bernoulli_number(2 * r) / math.factorial(2 * r) * factor
        factor *= (k + 2 * r - 1) * (k + 2 * r) / (n_cut * n_cut)
    return acc


def _harmonic(n: int) -> float:
    return sum(1.0 / j for j in range(1, n + 1))


def _clean_neg(z: complex) -> complex:
    # -z with negative-zero components collapsed, so principal logs on the
    # real axis stay on the continuity-from-below branch
    w = -z
    return complex(w.real + 0.0, w.imag + 0.0)


def _fsum_complex(terms) -> complex:
    return complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))


def _li_series(n: int, z: complex, tol: float) -> PolylogResult:
    # direct sum, valid for |z| <= 1/2: tail after K terms is
    # <= |z|^{K+1} / ((K+1)^n (1 - |z|))
    az = abs(z)
    terms = []
    zk = 1 + 0j
    k = 0
    while True:
        k += 1
        zk *= z
        terms.append(zk / k ** n)
        tail = az ** (k + 1) / ((k + 1) ** n * (1.0 - az))
        if tail <= 0.5 * tol or k >= 10_000:
            break
    value = _fsum_complex(terms)
    rounding = 4.0 * EPS * math.fsum(abs(t) for t in terms)
    return PolylogResult(value, tail + rounding, k)


def _bernoulli_poly(n: int, u: complex) -> complex:
    # B_n(u) by Horner in u
    acc = 0j
    for k in range(n, -1, -1):
        acc = acc * u + math.comb(n, k) * bernoulli_number(n - k)
    return acc


def _li_inversion(n: int, z: complex, tol: float) -> PolylogResult:
    # Li_n(z) = (-1)^{n-1} Li_n(1/z) - (2 pi i)^n / n! * B_n(1/2 + log(-z)/(2 pi i))
    inner = _li_series(n, 1.0 / z, 0.5 * tol)
    u = 0.5 + cmath.log(_clean_neg(z)) / (2j * math.pi)
    corr = -((2j * math.pi) ** n) / math.factorial(n) * _bernoulli_poly(n, u)
    value = (-1.0) ** (n - 1) * inner.value + corr
    err = inner.error_bound + 8.0 * EPS * (abs(corr) + abs(value))
    return PolylogResult(value, err, inner.terms_used + n + 1)


def _li_log_band(n: int, z: complex, tol: float) -> PolylogResult:
    # expansion in mu = log z, valid for |mu| < 2 pi:
    # Li_n(e^mu) = mu^{n-1}/(n-1)! (H_{n-1} - log(-mu)) + sum_{k != n-1} zeta(n-k) mu^k / k!
    mu = cmath.log(z)
    amu = abs(mu)
    rho = amu / TWO_PI
    prefac = 0.549 * amu ** (n - 1) / (1.0 - rho * rho)
    terms = []
    k = 0
    mupow = 1 + 0j
    fact = 1.0
    used = 0
    while True:
        if k == n - 1:
            terms.append(mupow / fact * (_harmonic(n - 1) - cmath.log(_clean_neg(mu))))
            used += 1
        else:
            zv = zeta_int(n - k)
            if zv != 0.0:
                terms.append(zv * mupow / fact * (1 + 0j))
                used += 1
        k += 1
        mupow *= mu
        fact *= k
        if k > n:
            # remaining terms sit at k = n-1+2j; bound their sum geometrically
            j0 = (k - n + 2) // 2
            tail = prefac * rho ** (2 * j0)
            if tail <= 0.5 * tol or k >= 600:
                break
    value = _fsum_complex(terms)
    rounding = 4.0 * EPS * math.fsum(abs(t) for t in terms)
    return PolylogResult(value, tail + rounding, used)


def li(n: int, z, tol: float = 1e-12) -> PolylogResult:
    """Li_n(z) on the principal branch (continuous from below across (1, inf))."""
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValueError(f"polylogarithm order must be an integer >= 1, got {n!r}")
    if not (tol > 0.0):
        raise ValueError(f"tolerance must be positive, got {tol!r}")
    p = as_sphere_point(z)
    if p.is_infinity:
        raise SingularArgumentError("Li_n is not defined at infinity")
    zz = p.value
    if zz == 0:
        return PolylogResult(0j, 0.0, 0)
    if n == 1:
        if zz == 1:
            raise SingularArgumentError("Li_1 has a pole at z = 1")
        value = -cmath.log(_clean_neg(zz - 1.0))
        return PolylogResult(value, 4.0 * EPS * (1.0 + abs(value)), 1)
    az = abs(zz)
    if az <= 0.5:
        return _li_series(n, zz, tol)
    if az >= 2.0:
        return _li_inversion(n, zz, tol)
    if zz == 1:
        return PolylogResult(complex(zeta_int(n)), 4.0 * EPS, 1)
    return _li_log_band(n, zz, tol)


def _bloch_wigner_bounded(z: complex, tol: float) -> tuple[float, float]:
    # assumes z finite with z.imag > 0; returns (value, error bound)
    res = li(2, z, tol)
    logabs = math.log(abs(z))
    corr = cmath.phase(_clean_neg(z - 1.0)) * logabs
    value = res.value.imag + corr
    err = res.error_bound + 4.0 * EPS * (abs(res.value.imag) + abs(corr))
    return value, err


def bloch_wigner(z, tol: float = 1e-14) -> float:
    """The single-valued dilogarithm Im(Li_2(z)) + arg(1-z) log|z|.

    Vanishes identically on the real axis and at 0, 1, infinity; antisymmetric
    under conjugation by construction.
    """
    p = as_sphere_point(z)
    if p.is_infinity:
        return 0.0
    zz = p.value
    if zz.imag == 0.0:
        return 0.0
    if zz.imag < 0.0:
        return -_bloch_wigner_bounded(zz.conjugate(), tol)[0]
    return _bloch_wigner_bounded(zz, tol)[0]


# vectorized evaluation -------------------------------------------------------

_SERIES_K = 48
_INV_K2 = np.array([1.0 / k ** 2 for k in range(_SERIES_K, 0, -1)])

_BAND_K = 64
# coefficients zeta(2-k)/k! of mu^k for k >= 2 (the k = 0, 1 terms are explicit)
_BAND_COEFFS = np.array(
    [zeta_int(2 - k) / math.factorial(k) for k in range(_BAND_K, 1, -1)]
)


def _d_small_vec(u: np.ndarray) -> np.ndarray:
    # D on |u| <= 1/2, u off the real axis
    acc = np.zeros(u.shape, dtype=complex)
    for c in _INV_K2:
        acc = acc * u + c
    s = u * acc
    return s.imag + np.angle(1.0 - u) * np.log(np.abs(u))


def _d_band_vec(u: np.ndarray) -> np.ndarray:
    # D on the band 1/2 < |u| < 2, |1-u| > 1/2, u off the real axis
    mu = np.log(u)
    acc = np.zeros(u.shape, dtype=complex)
    for c in _BAND_COEFFS:
        acc = acc * mu + c
    li2 = zeta_int(2) + mu * (1.0 - np.log(-mu)) + mu * mu * acc
    return li2.imag + np.angle(1.0 - u) * np.log(np.abs(u))


def bloch_wigner_many(z: np.ndarray) -> np.ndarray:
    """Vectorized bloch_wigner over an array of finite complex arguments."""
    z = np.asarray(z, dtype=complex)
    flat = z.ravel()
    if flat.size and not np.all(np.isfinite(flat)):
        raise ValueError("bloch_wigner_many requires finite arguments")
    out = np.zeros(flat.shape, dtype=float)
    off_axis = flat.imag != 0.0
    w = flat[off_axis]
    sign = np.where(w.imag < 0.0, -1.0, 1.0)
    w = np.where(w.imag < 0.0, np.conj(w), w)
    res = np.empty(w.shape, dtype=float)
    aw = np.abs(w)
    m_small = aw <= 0.5
    m_large = aw >= 2.0
    m_mid = ~m_small & ~m_large
    m_refl = m_mid & (np.abs(1.0 - w) <= 0.5)
    m_band = m_mid & ~m_refl
    if m_small.any():
        res[m_small] = _d_small_vec(w[m_small])
    if m_large.any():
        res[m_large] = -_d_small_vec(1.0 / w[m_large])
    if m_refl.any():
        res[m_refl] = -_d_small_vec(1.0 - w[m_refl])
    if m_band.any():
        res[m_band] = _d_band_vec(w[m_band])
    out[off_axis] = sign * res
    return out.reshape(z.shape)


# Ramakrishnan ladder ---------------------------------------------------------

ODD_DENOMINATORS = ("2*m!", "(2m)!")


def ramakrishnan_L(m: int, z, tol: float = 1e-10) -> PolylogResult:
    """L_m(z) = sum_{j=1}^m (-log|z|)^{m-j}/(m-j)! Li_j(z) for z not in {0, 1}."""
    if not isinstance(m, int) or isinstance(m, bool) or m < 1:
        raise ValueError(f"ladder order must be an integer >= 1, got {m!r}")
    if not (tol > 0.0):
        raise ValueError(f"tolerance must be positive, got {tol!r}")
    p = as_sphere_point(z)
    if p.is_infinity:
        raise SingularArgumentError("L_m is not defined at infinity")
    zz = p.value
    if zz == 0 or zz == 1:
        raise SingularArgumentError(f"L_m is not defined at z = {zz}")
    neg_log = -math.log(abs(zz))
    parts = []
    err = 0.0
    used = 0
    for j in range(1, m + 1):
        res = li(j, zz, tol / m)
        coef = neg_log ** (m - j) / math.factorial(m - j)
        parts.append(coef * res.value)
        err += abs(coef) * res.error_bound
        used += res.terms_used
    value = _fsum_complex(parts)
    err += 4.0 * EPS * math.fsum(abs(t) for t in parts)
    return PolylogResult(value, err, used)


def ramakrishnan_D(m: int, z, tol: float = 1e-10, odd_denominator: str = "2*m!") -> PolylogResult:
    """Single-valued D_m: Im L_m for even m, Re L_m plus a log-power term for odd m.

    The odd-m correction is (log|z|)^m divided by 2*m! by default; pass
    odd_denominator="(2m)!" for the alternative normalization.
    """
    if odd_denominator not in ODD_DENOMINATORS:
        raise ValueError(f"odd_denominator must be one of {ODD_DENOMINATORS}")
    res = ramakrishnan_L(m, z, tol)
    if m % 2 == 0:
        return PolylogResult(res.value.imag, res.error_bound, res.terms_used)
    logabs = math.log(abs(complex(as_sphere_point(z))))
    if odd_denominator == "2*m!":
        denom = 2.0 * math.factorial(m)
    else:
        denom = float(math.factorial(2 * m))
    corr = logabs ** m / denom
    value = res.value.real + corr
    err = res.error_bound + 4.0 * EPS * (abs(value) + abs(corr))
    return PolylogResult(value, err, res.terms_used)
