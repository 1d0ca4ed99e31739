"""Numerically stable Hermite polynomial and Hermite function machinery.

The probabilists' Hermite polynomials follow the three-term recurrence
``H_{k+1}(x) = x H_k(x) - k H_{k-1}(x)`` with ``H_0 = 1``, ``H_1 = x``.
Raw values near the spectral edge reach magnitudes around e^k, far past
double range, so heavy lifting happens in two guarded forms:

* :class:`ScaledValue`, a (mantissa, base-2 exponent) pair, carries raw
  ``H_k(x)`` out of :func:`hermite_poly`;
* the normalized recurrence over ``psi_k = H_k / sqrt(k!)``,

      psi_{k+1} = (x psi_k - sqrt(k) psi_{k-1}) / sqrt(k+1),

  with periodic power-of-two rescaling of the running pair, drives the
  squared Hermite function density

      phi_k(x)^2 = psi_k(x)^2 e^{-x^2/2} / sqrt(2 pi),

  assembled in log space so tails underflow cleanly to zero instead of
  corrupting the mantissa path.

The module also hosts the quadrature utilities used by the CDF oracles:
an adaptive Gauss-Kronrod (G7/K15) panel integrator whose initial panel
width tracks the local oscillation scale pi / sqrt(4k+2) of phi_k^2.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, ParameterError

LN2 = math.log(2.0)
LN_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)

# keep the working pair inside [2^-512, 2^limit]; the limit shrinks when
# |x| is so large that one more multiply could overflow
_RESCALE_LOG2 = 512.0
_OVERFLOW_LOG2 = 1000.0


@dataclass(frozen=True)
class ScaledValue:
    """A real number stored as mantissa * 2^exponent.

    The mantissa is normalized to |mantissa| in [1, 2), or exactly 0 with
    exponent 0, which keeps log-magnitudes recoverable for exponents far
    beyond the double range.
    """

    mantissa: float
    exponent: int

    @staticmethod
    def normalize(value, exponent=0):
        if value == 0.0:
            return ScaledValue(0.0, 0)
        m, e = math.frexp(value)  # |m| in [0.5, 1)
        return ScaledValue(2.0 * m, exponent + e - 1)

    def to_float(self):
        """Collapse to a double; overflows to +-inf, underflows to 0."""
        return math.ldexp(self.mantissa, self.exponent)

    @property
    def log_abs(self):
        """Natural log of |value|; -inf for zero."""
        if self.mantissa == 0.0:
            return -math.inf
        return math.log(abs(self.mantissa)) + self.exponent * LN2


@dataclass(frozen=True)
class HermiteEval:
    """One evaluation of the squared Hermite function density."""

    k: int
    x: float
    phi_sq: float
    log_phi_sq: float


def hermite_poly(k, x):
    """Probabilists' Hermite polynomial H_k(x) as a :class:`ScaledValue`.

    Runs the raw three-term recurrence in O(k) operations, rescaling the
    working pair by powers of two whenever it threatens the double range.
    """
    k = int(k)
    if k < 0:
        raise ParameterError(f"polynomial degree must be >= 0, got {k}")
    x = float(x)
    if k == 0:
        return ScaledValue.normalize(1.0)
    log2x = math.frexp(abs(x))[1] if x != 0.0 else 0
    limit = math.ldexp(1.0, int(min(_RESCALE_LOG2, _OVERFLOW_LOG2 - max(log2x, 0))))
    prev, cur, expo = 1.0, x, 0
    if abs(x) > 2.0**500:
        # pre-scale so the first x*cur product cannot overflow; the
        # recurrence is linear in the (prev, cur) pair
        sh = math.frexp(x)[1]
        prev = math.ldexp(prev, -sh)
        cur = math.ldexp(cur, -sh)
        expo = sh
    for j in range(1, k):
        prev, cur = cur, x * cur - j * prev
        m = max(abs(prev), abs(cur))
        if m > limit or (0.0 < m < 2.0**-512):
            sh = math.frexp(m)[1]
            prev = math.ldexp(prev, -sh)
            cur = math.ldexp(cur, -sh)
            expo += sh
    return ScaledValue.normalize(cur, expo)


def _psi_scaled(k, x):
    """Normalized recurrence value psi_k(x) = H_k(x)/sqrt(k!) as (mantissa, exp2).

    Scalar path; the vectorized equivalent lives in :func:`_psi_scaled_many`.
    """
    if k == 0:
        return 1.0, 0
    if k == 1:
        return x, 0
    absx = abs(x)
    log2x = math.log2(absx) if absx > 1.0 else 0.0
    threshold = min(_RESCALE_LOG2, _OVERFLOW_LOG2 - log2x)
    prev, cur, expo = 1.0, x, 0
    budget = 1.0
    for j in range(1, k):
        sj = math.sqrt(j)
        sj1 = math.sqrt(j + 1.0)
        prev, cur = cur, (x * cur - sj * prev) / sj1
        growth = (absx + sj) / sj1
        if growth > 1.0:
            budget += math.log2(growth)
        if budget > threshold:
            m = max(abs(prev), abs(cur))
            if m > 0.0:
                sh = math.frexp(m)[1]
                prev = math.ldexp(prev, -sh)
                cur = math.ldexp(cur, -sh)
                expo += sh
            budget = 1.0
    return cur, expo


def phi_eval(k, x):
    """Evaluate phi_k(x)^2 with its log, via the normalized recurrence."""
    k = int(k)
    if k < 0:
        raise ParameterError(f"degree must be >= 0, got {k}")
    x = float(x)
    if not math.isfinite(x):
        raise ParameterError(f"evaluation point must be finite, got {x}")
    if abs(x) >= 1e154:
        # e^{-x^2/2} is far below the subnormal range; short-circuit
        return HermiteEval(k, x, 0.0, -math.inf)
    mant, expo = _psi_scaled(k, x)
    if mant == 0.0:
        return HermiteEval(k, x, 0.0, -math.inf)
    log_phi = 2.0 * (math.log(abs(mant)) + expo * LN2) - 0.5 * x * x - LN_SQRT_2PI
    phi = math.exp(log_phi) if log_phi > -745.0 else 0.0
    return HermiteEval(k, x, phi, log_phi)


def phi_squared(k, x):
    """The squared Hermite function density phi_k(x)^2."""
    return phi_eval(k, x).phi_sq


def _pair_rescale(prev, cur, expo):
    big = np.maximum(np.abs(prev), np.abs(cur))
    sh = np.frexp(big)[1]  # 0 where big == 0
    np.ldexp(prev, -sh, out=prev)
    np.ldexp(cur, -sh, out=cur)
    expo += sh
    return prev, cur, expo


def _psi_scaled_many(k, x):
    """Vectorized psi_k over an array: returns (mantissas, base-2 exponents)."""
    x = np.ascontiguousarray(x, dtype=float)
    if k == 0:
        return np.ones_like(x), np.zeros(x.shape, dtype=np.int64)
    if k == 1:
        return x.copy(), np.zeros(x.shape, dtype=np.int64)
    absx = float(np.max(np.abs(x))) if x.size else 0.0
    log2x = math.log2(absx) if absx > 1.0 else 0.0
    threshold = min(_RESCALE_LOG2, _OVERFLOW_LOG2 - log2x)
    prev = np.ones_like(x)
    cur = x.copy()
    expo = np.zeros(x.shape, dtype=np.int64)
    t1 = np.empty_like(x)
    t2 = np.empty_like(x)
    sq = np.sqrt(np.arange(k + 1, dtype=float))
    inv_sq = 1.0 / sq[1:]
    budget = 1.0
    for j in range(1, k):
        np.multiply(x, cur, out=t1)
        np.multiply(sq[j], prev, out=t2)
        np.subtract(t1, t2, out=t1)
        np.multiply(t1, inv_sq[j], out=t1)
        prev, cur, t1 = cur, t1, prev
        growth = (absx + sq[j]) * inv_sq[j]
        if growth > 1.0:
            budget += math.log2(growth)
        if budget > threshold:
            prev, cur, expo = _pair_rescale(prev, cur, expo)
            budget = 1.0
    return cur.copy(), expo


_CHUNK = 32768


def phi_squared_many(k, x, return_log=False):
    """Vectorized phi_k^2 over an array of points.

    Long inputs are processed in cache-sized chunks; each chunk runs the
    full O(k) recurrence across its lanes.
    """
    k = int(k)
    if k < 0:
        raise ParameterError(f"degree must be >= 0, got {k}")
    x = np.asarray(x, dtype=float)
    shape = x.shape
    x = np.ravel(x)
    log_phi = np.empty(x.size)
    for lo in range(0, x.size, _CHUNK):
        xs = x[lo : lo + _CHUNK]
        safe = np.abs(xs) < 1e154
        xs_safe = np.where(safe, xs, 0.0)
        mant, expo = _psi_scaled_many(k, xs_safe)
        with np.errstate(divide="ignore"):
            lp = 2.0 * (np.log(np.abs(mant)) + expo * LN2)
        lp -= 0.5 * xs_safe * xs_safe + LN_SQRT_2PI
        lp[~safe] = -np.inf
        log_phi[lo : lo + _CHUNK] = lp
    if return_log:
        return log_phi.reshape(shape)
    with np.errstate(under="ignore"):
        phi = np.exp(log_phi)
    return phi.reshape(shape)


def mixture_density_many(n, x):
    """Density of one uniformly chosen eigenvalue: (1/n) sum_{k<n} phi_k^2."""
    n = int(n)
    if n < 1:
        raise ParameterError(f"ensemble size must be >= 1, got {n}")
    x = np.asarray(x, dtype=float)
    shape = x.shape
    x = np.ravel(x)
    out = np.empty(x.size)
    for lo in range(0, x.size, _CHUNK):
        out[lo : lo + _CHUNK] = _mixture_chunk(n, x[lo : lo + _CHUNK])
    return out.reshape(shape)


def _mixture_chunk(n, x):
    x = np.ascontiguousarray(x, dtype=float)
    safe = np.abs(x) < 1e154
    x = np.where(safe, x, 0.0)
    absx = float(np.max(np.abs(x))) if x.size else 0.0
    log2x = math.log2(absx) if absx > 1.0 else 0.0
    threshold = min(_RESCALE_LOG2 / 2.0, (_OVERFLOW_LOG2 - log2x) / 2.0)
    prev = np.ones_like(x)
    cur = x.copy()
    expo = np.zeros(x.shape, dtype=np.int64)
    acc = 1.0 + x * x  # psi_0^2 + psi_1^2 at the current scale
    if n == 1:
        acc = np.ones_like(x)
        cur = prev
    sq = np.sqrt(np.arange(n + 1, dtype=float))
    budget = 1.0
    for j in range(1, n - 1):
        nxt = (x * cur - sq[j] * prev) / sq[j + 1]
        prev, cur = cur, nxt
        acc += cur * cur
        growth = (absx + sq[j]) / sq[j + 1]
        if growth > 1.0:
            budget += math.log2(growth)
        if budget > threshold:
            big = np.maximum(np.abs(prev), np.abs(cur))
            sh = np.frexp(big)[1]
            np.ldexp(prev, -sh, out=prev)
            np.ldexp(cur, -sh, out=cur)
            np.ldexp(acc, -2 * sh, out=acc)
            expo += sh
            budget = 1.0
    with np.errstate(divide="ignore"):
        log_mix = np.log(acc) + 2.0 * expo * LN2
    log_mix -= 0.5 * x * x + LN_SQRT_2PI + math.log(n)
    log_mix[~safe] = -np.inf
    with np.errstate(under="ignore"):
        return np.exp(log_mix)


def mixture_density(n, x):
    """Scalar convenience wrapper for :func:`mixture_density_many`."""
    return float(mixture_density_many(n, np.array([float(x)]))[0])


# ----------------------------------------------------------------------
# Gauss-Kronrod quadrature (G7 embedded in K15)
# ----------------------------------------------------------------------

_GK_NODES = np.array(
    [
        -0.991455371120813,
        -0.949107912342759,
        -0.864864423359769,
        -0.741531185599394,
        -0.586087235467691,
        -0.405845151377397,
        -0.207784955007898,
        0.0,
        0.207784955007898,
        0.405845151377397,
        0.586087235467691,
        0.741531185599394,
        0.864864423359769,
        0.949107912342759,
        0.991455371120813,
    ]
)
_GK_WEIGHTS_K = np.array(
    [
        0.022935322010529,
        0.063092092629979,
        0.104790010322250,
        0.140653259715525,
        0.169004726639267,
        0.190350578064785,
        0.204432940075298,
        0.209482141084728,
        0.204432940075298,
        0.190350578064785,
        0.169004726639267,
        0.140653259715525,
        0.104790010322250,
        0.063092092629979,
        0.022935322010529,
    ]
)
_GK_WEIGHTS_G = np.array(
    [
        0.0,
        0.129484966168870,
        0.0,
        0.279705391489277,
        0.0,
        0.381830050505119,
        0.0,
        0.417959183673469,
        0.0,
        0.381830050505119,
        0.0,
        0.279705391489277,
        0.0,
        0.129484966168870,
        0.0,
    ]
)


def _gk_panels(f, left, right):
    """K15 values and |K15-G7| error estimates for a batch of panels."""
    center = 0.5 * (left + right)
    halfw = 0.5 * (right - left)
    nodes = center[:, None] + halfw[:, None] * _GK_NODES[None, :]
    vals = np.asarray(f(nodes.ravel()), dtype=float).reshape(nodes.shape)
    ik = (vals @ _GK_WEIGHTS_K) * halfw
    ig = (vals @ _GK_WEIGHTS_G) * halfw
    return ik, np.abs(ik - ig)


def integrate_adaptive(
    f,
    a,
    b,
    tol,
    initial_width=None,
    max_panels=300000,
    max_rounds=30,
    return_panels=False,
):
    """Adaptive panel integration of a vectorized integrand on [a, b].

    Starts from uniform panels of ``initial_width`` (default: one
    sixteenth of the interval) and bisects any panel whose K15-vs-G7
    discrepancy exceeds its share of ``tol`` until the summed estimate
    is below ``tol``.

    Returns ``(value, err)``, or ``(value, err, edges, panel_values)``
    with panel data sorted by position when ``return_panels`` is set.
    """
    if tol <= 0.0:
        raise ParameterError(f"tolerance must be > 0, got {tol}")
    a, b = float(a), float(b)
    if not b > a:
        if b == a:
            return (0.0, 0.0, np.array([a, b]), np.zeros(1)) if return_panels else (0.0, 0.0)
        raise ParameterError(f"integration bounds must satisfy a <= b, got [{a}, {b}]")
    if initial_width is None:
        initial_width = (b - a) / 16.0
    count = int(np.clip(math.ceil((b - a) / initial_width), 4, max_panels))
    edges = np.linspace(a, b, count + 1)
    left, right = edges[:-1], edges[1:]
    vals, errs = _gk_panels(f, left, right)
    for _ in range(max_rounds):
        total_err = float(errs.sum())
        if total_err <= tol:
            break
        if left.size >= max_panels:
            raise ConvergenceError(
                f"quadrature needs more than {max_panels} panels for tol={tol}"
            )
        bad = errs > tol / (2.0 * left.size)
        if not bad.any():
            bad = errs == errs.max()
        mid = 0.5 * (left[bad] + right[bad])
        new_left = np.concatenate([left[bad], mid])
        new_right = np.concatenate([mid, right[bad]])
        new_vals, new_errs = _gk_panels(f, new_left, new_right)
        left = np.concatenate([left[~bad], new_left])
        right = np.concatenate([right[~bad], new_right])
        vals = np.concatenate([vals[~bad], new_vals])
        errs = np.concatenate([errs[~bad], new_errs])
    else:
        raise ConvergenceError(
            f"quadrature did not reach tol={tol} in {max_rounds} refinement rounds"
        )
    value = float(vals.sum())
    if return_panels:
        order = np.argsort(left)
        edges = np.append(left[order], right[order][-1])
        return value, float(errs.sum()), edges, vals[order]
    return value, float(errs.sum())


def oscillation_width(k):
    """Bulk oscillation scale of phi_k^2: pi / sqrt(4k+2)."""
    return math.pi / math.sqrt(4.0 * k + 2.0)


def tail_cutoff(k):
    """Point beyond which the phi_k^2 tail mass is negligible (< 1e-18)."""
    base = 2.0 * math.sqrt(k + 1.0) + 2.0 + 12.0 * (k + 1.0) ** (-1.0 / 6.0)
    for _ in range(200):
        if phi_squared(k, base) < 1e-22:
            return base
        base += 1.0 + 0.01 * base
    raise ConvergenceError(f"could not locate a tail cutoff for degree {k}")


def phi_sq_cdf(k, x, tol=1e-10):
    """CDF of the phi_k^2 density at ``x``, by adaptive quadrature.

    Uses evenness: integrates on [0, |x|] and reflects. Absolute accuracy
    ``tol``; raises ConvergenceError when the panel budget cannot reach it.
    """
    k = int(k)
    if k < 0:
        raise ParameterError(f"degree must be >= 0, got {k}")
    if tol <= 0.0:
        raise ParameterError(f"tolerance must be > 0, got {tol}")
    x = float(x)
    ax = abs(x)
    upper = min(ax, tail_cutoff(k))
    if upper == 0.0:
        half = 0.0
    else:
        half, _ = integrate_adaptive(
            lambda xs: phi_squared_many(k, xs),
            0.0,
            upper,
            tol,
            initial_width=oscillation_width(k),
        )
    return 0.5 + half if x >= 0.0 else 0.5 - half


def phi_sq_cdf_many(k, xs, tol=1e-8):
    """CDF of phi_k^2 at many points with one shared quadrature pass.

    The base panel grid (adaptively refined to ``tol``) is merged with
    the query points, each merged panel gets one K15 rule, and the
    cumulative sums give the CDF exactly at every query abscissa.
    """
    k = int(k)
    if k < 0:
        raise ParameterError(f"degree must be >= 0, got {k}")
    xs = np.asarray(xs, dtype=float)
    shape = xs.shape
    xs = np.ravel(xs)
    cutoff = tail_cutoff(k)
    f = lambda pts: phi_squared_many(k, pts)
    _, _, base_edges, _ = integrate_adaptive(
        f, 0.0, cutoff, tol, initial_width=oscillation_width(k), return_panels=True
    )
    queries = np.clip(np.abs(xs), 0.0, cutoff)
    edges = np.unique(np.concatenate([base_edges, queries]))
    vals, _ = _gk_panels(f, edges[:-1], edges[1:])
    cum = np.concatenate([[0.0], np.cumsum(vals)])
    pos = np.searchsorted(edges, queries)
    half = cum[pos]
    out = np.where(xs >= 0.0, 0.5 + half, 0.5 - half)
    return out.reshape(shape)
