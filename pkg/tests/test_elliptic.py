import cmath
import math

import numpy as np
import pytest

from kleinlog.elliptic import ConvergenceRegimeError, EllipticParams, elliptic_d2
from kleinlog.polylog import bloch_wigner


def brute_bilateral(q: complex, x: complex, tol: float = 1e-13) -> float:
    """Direct sum of D(q^k x) over k in [-K, K], K grown until the dominating
    tail 2 r (1 + |log r|) / (1 - |q|) on both ends is below tol."""
    aq, ax = abs(q), abs(x)

    def side_bound(r):
        return 2 * r * (1 + abs(math.log(r))) / (1 - aq)

    K = 8
    while K < 4000:
        r_pos = aq ** (K + 1) * ax  # |q^k x| for k = K+1
        r_neg = aq ** (K + 1) / ax  # |1 / (q^-k x)| for k = -(K+1)
        if side_bound(r_pos) < tol and side_bound(r_neg) < tol:
            break
        K *= 2
    terms = [bloch_wigner(q ** k * x) for k in range(-K, K + 1)]
    return math.fsum(terms)


def sample_pairs(rng, n, q_hi=0.8):
    out = []
    while len(out) < n:
        aq = rng.uniform(0.05, q_hi)
        q = aq * cmath.exp(2j * math.pi * rng.random())
        # x in the fundamental annulus |q| < |x| <= 1, off the q-orbit of 1
        ax = rng.uniform(aq + 0.02, 1.0)
        x = ax * cmath.exp(2j * math.pi * rng.random())
        out.append((q, x))
    return out


def test_matches_brute_oracle():
    rng = np.random.default_rng(101)
    for q, x in sample_pairs(rng, 40):
        got = elliptic_d2(q, x, 1e-12)
        ref = brute_bilateral(q, x)
        assert abs(got.value - ref) < 1e-10, (q, x)
        assert abs(got.value - ref) <= got.error_bound + 1e-12


def test_invariance_under_q_shift():
    rng = np.random.default_rng(103)
    tol = 1e-10
    for q, x in sample_pairs(rng, 100):
        a = elliptic_d2(q, x, tol).value
        b = elliptic_d2(q, q * x, tol).value
        assert abs(a - b) <= 2 * tol, (q, x)


def test_conjugation_antisymmetry():
    rng = np.random.default_rng(107)
    for q, x in sample_pairs(rng, 30):
        a = elliptic_d2(q, x, 1e-11).value
        b = elliptic_d2(q.conjugate(), x.conjugate(), 1e-11).value
        assert abs(a + b) < 5e-11


def test_real_q_real_x_vanishes():
    # conjugation symmetry forces the average to vanish for real data
    for q in (0.3, 0.6, -0.5):
        for x in (0.8, -0.9, 0.5):
            assert abs(elliptic_d2(q, x, 1e-11).value) < 5e-11


def test_rejects_bad_regimes():
    with pytest.raises(ConvergenceRegimeError):
        elliptic_d2(1.0 + 0j, 0.5j)
    with pytest.raises(ConvergenceRegimeError):
        elliptic_d2(1.2, 0.5j)
    with pytest.raises(ConvergenceRegimeError):
        elliptic_d2(0.0, 0.5j)
    with pytest.raises(ValueError):
        elliptic_d2(0.5, 0.0)


def test_params_validation():
    p = EllipticParams(0.5 + 0j, 0.7j, 1e-10)
    assert p.q == 0.5 + 0j
    with pytest.raises(ValueError):
        EllipticParams(0.5 + 0j, 0.7j, -1.0)


def test_lattice_point_is_finite():
    # x on the orbit of 1 is fine: D(1) = 0, no singularity
    q = 0.4 + 0.1j
    v = elliptic_d2(q, 1.0 + 0j, 1e-11).value
    w = elliptic_d2(q, q, 1e-11).value
    assert abs(v - w) < 5e-11
    assert math.isfinite(v)
