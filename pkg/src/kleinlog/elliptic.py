"""The q-averaged single-valued dilogarithm sum_k D(q^k x) on the Tate curve."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .moebius import as_sphere_point
from .polylog import D_GLOBAL_BOUND, PolylogResult, SingularArgumentError, _bloch_wigner_bounded

_Q_MARGIN = 1e-12
_MAX_PAIRS = 500_000


class ConvergenceRegimeError(ValueError):
    """|q| outside the open unit annulus where the average converges."""


@dataclass(frozen=True)
class EllipticParams:
    """Validated parameters for the elliptic average."""

    q: complex
    x: complex
    tol: float = 1e-10

    def __post_init__(self):
        q = complex(self.q)
        aq = abs(q)
        if not (0.0 < aq < 1.0 - _Q_MARGIN):
            raise ConvergenceRegimeError(
                f"|q| must lie in (0, 1 - {_Q_MARGIN}), got |q| = {aq}"
            )
        x = as_sphere_point(self.x)
        if x.is_infinity or x.value == 0:
            raise SingularArgumentError("x must be finite and nonzero")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "x", x.value)
        if not (self.tol > 0.0):
            raise ValueError(f"tolerance must be positive, got {self.tol!r}")


def _d_envelope(r: float) -> float:
    # proven pointwise bound for |D| on the circle |w| = r
    if r <= 0.0:
        return 0.0
    if r <= 0.5:
        return 2.0 * r * (1.0 - math.log(r))
    if r >= 2.0:
        return 2.0 / r * (1.0 + math.log(r))
    return D_GLOBAL_BOUND


def elliptic_tail_bound(q, x, terms: int) -> float:
    """Upper bound for the mass of all |k| > terms summands of the average.

    Monotone non-increasing in `terms`; combines explicit envelope values in
    the transition annulus with a closed geometric form beyond it.
    """
    aq = abs(complex(q))
    x = as_sphere_point(x)
    if x.is_infinity or x.value == 0:
        raise SingularArgumentError("x must be finite and nonzero")
    ax = abs(x.value)
    if not (0.0 < aq < 1.0):
        raise ConvergenceRegimeError(f"|q| must lie in (0, 1), got {aq}")
    if terms < 0:
        raise ValueError("terms must be >= 0")
    biglog = -math.log(aq)

    def one_side(a: float) -> float:
        # bounds sum_{k > terms} |D(w_k)| with |w_k| = a * aq^k
        k0 = terms + 1
        if a > 0.5:
            k0 = max(k0, math.ceil(math.log(2.0 * a) / biglog))
        explicit = math.fsum(
            _d_envelope(a * aq ** k) for k in range(terms + 1, k0)
        )
        # for k >= k0 the modulus is <= 1/2 and |D(w)| <= 2|w|(1 + |log|w||)
        r0 = aq ** k0
        geo0 = r0 / (1.0 - aq)
        geo1 = r0 * (k0 - (k0 - 1) * aq) / (1.0 - aq) ** 2
        return explicit + 2.0 * a * ((1.0 + abs(math.log(a))) * geo0 + biglog * geo1)

    return one_side(ax) + one_side(1.0 / ax)


def elliptic_d2(q, x=None, tol: float = 1e-10) -> PolylogResult:
    """sum_{k in Z} D(q^k x), summed symmetrically until the tail bound meets tol.

    Accepts either an EllipticParams or (q, x, tol).  The reported error_bound
    covers both the truncated tail and per-term evaluation error.
    """
    if isinstance(q, EllipticParams):
        params = q
    else:
        params = EllipticParams(q, x, tol)
    q, x, tol = params.q, params.x, params.tol

    def term(w: complex) -> tuple[float, float]:
        if w.imag == 0.0:
            return 0.0, 0.0
        if w.imag < 0.0:
            v, e = _bloch_wigner_bounded(w.conjugate(), 1e-14)
            return -v, e
        return _bloch_wigner_bounded(w, 1e-14)

    v0, e0 = term(x)
    values = [v0]
    eval_err = e0
    w_plus = x
    w_minus = x
    pairs = 0
    while True:
        tail = elliptic_tail_bound(q, x, pairs)
        if tail <= 0.5 * tol:
            break
        if pairs >= _MAX_PAIRS:
            raise ConvergenceRegimeError(
                f"tail bound {tail} did not reach tol {tol} within {_MAX_PAIRS} pairs"
            )
        pairs += 1
        w_plus = w_plus * q
        w_minus = w_minus / q
        if not (math.isfinite(w_minus.real) and math.isfinite(w_minus.imag)):
            # |q^-k x| overflowed; its D value is far below any sensible tol
            w_minus = 0j
        vp, ep = term(w_plus)
        vm, em = term(w_minus)
        values.append(vp)
        values.append(vm)
        eval_err += ep + em
    value = math.fsum(values)
    return PolylogResult(value, tail + eval_err, 2 * pairs + 1)
