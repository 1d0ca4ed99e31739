"""Constant-time squeeze bounds for the squared Hermite function density.

On |x| <= 2 sqrt(n+1) the degree-n Hermite polynomial admits the
representation H_n = A_n (B_n + mu R_n) with an explicit amplitude A_n,
oscillatory term B_n, remainder scale R_n, and a constant mu known to
satisfy |mu| <= 4.2.  Dropping the remainder gives the approximation

    f_n(x) = B_n(x)^2 * A_n(x)^2 e^{-x^2/2} / (sqrt(2 pi) n!),

computable in O(1), together with certified envelopes

    eps_plus  = pref * (8.4 (B_n)_+ R_n + 4.2^2 R_n^2)
    eps_minus = pref * 8.4 |B_n R_n|

where pref is the same log-space prefactor.  These give the sandwich
(f - eps_minus)_+ <= phi_n^2 <= (f + eps_plus) ^ h_n used by the
squeeze-accelerated rejection sampler: most accept/reject decisions
resolve against the cheap bounds and never touch the O(n) recurrence.

f_n is defined as 0 outside |x| <= 2 sqrt(n+1); no envelopes exist there
and callers must bypass the squeeze.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import dominator
from .errors import ParameterError

_MU_BOUND = 4.2
_LN_PI = math.log(math.pi)
_LN_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
_EDGE_GUARD = 1e-12


@dataclass(frozen=True)
class VanVeenTerms:
    """All intermediate quantities of one squeeze evaluation."""

    n: int
    x: float
    alpha: float
    log_prefactor: float
    B_term: float
    R_term: float
    f: float
    eps_plus: float
    eps_minus: float


def domain_edge(n):
    """Right end of the representation's validity domain: 2 sqrt(n+1)."""
    return 2.0 * math.sqrt(n + 1.0)


def _check_domain(n, ax, edge):
    if ax > edge * (1.0 - _EDGE_GUARD):
        raise ParameterError(
            f"|x|={ax} is at or beyond the representation domain 2*sqrt(n+1)={edge}"
            f" (singular sin(alpha))"
        )


def _raw_terms(n, ax):
    """alpha, log_prefactor, B, R at |x| = ax (scalar or ndarray)."""
    np1 = n + 1.0
    edge = 2.0 * math.sqrt(np1)
    alpha = np.arccos(ax / edge)
    sin_a = np.sin(alpha)
    x_sq = ax * ax
    # log A_n, then the squared-amplitude prefactor, all in log space;
    # the x^2/4 and x^2/2 terms cancel exactly in doubles
    log_a = math.lgamma(n + 1.0) - _LN_PI + np1 / 2.0 + x_sq / 4.0 - (n / 2.0) * math.log(np1)
    log_pref = 2.0 * log_a - x_sq / 2.0 - _LN_SQRT_2PI - math.lgamma(n + 1.0)
    phase = (np1 / 2.0) * (np.sin(2.0 * alpha) - 2.0 * alpha) + alpha / 2.0 + 0.75 * math.pi
    b = math.sqrt(math.pi) / np.sqrt(np1 * sin_a) * np.sin(phase)
    r = 1.0 / (3.0 * np1 * sin_a * sin_a)
    return alpha, log_pref, b, r


def evaluate(n, x):
    """Squeeze terms at one point; raises outside |x| < 2 sqrt(n+1).

    Even in x: the computation uses |x| throughout.
    """
    n = int(n)
    if n < 1:
        raise ParameterError(f"degree must be >= 1, got {n}")
    x = float(x)
    ax = abs(x)
    edge = domain_edge(n)
    _check_domain(n, ax, edge)
    alpha, log_pref, b, r = _raw_terms(n, ax)
    pref = math.exp(log_pref)
    f = b * b * pref
    eps_plus = pref * (2.0 * _MU_BOUND * max(b, 0.0) * r + _MU_BOUND**2 * r * r)
    eps_minus = pref * 2.0 * _MU_BOUND * abs(b * r)
    return VanVeenTerms(
        n=n,
        x=x,
        alpha=float(alpha),
        log_prefactor=float(log_pref),
        B_term=float(b),
        R_term=float(r),
        f=float(f),
        eps_plus=float(eps_plus),
        eps_minus=float(eps_minus),
    )


def terms_many(n, x):
    """Vectorized (f, eps_plus, eps_minus) for the sampler hot path.

    Callers must keep |x| strictly inside the domain; the squeeze window
    used by the samplers (|x| <= x1 < 2 sqrt(n+1)) guarantees this.
    """
    n = int(n)
    ax = np.abs(np.asarray(x, dtype=float))
    edge = domain_edge(n)
    if ax.size and float(ax.max()) > edge * (1.0 - _EDGE_GUARD):
        raise ParameterError(
            f"squeeze evaluated at |x|={float(ax.max())} near/beyond domain edge {edge}"
        )
    _, log_pref, b, r = _raw_terms(n, ax)
    pref = np.exp(log_pref)
    f = b * b * pref
    eps_plus = pref * (2.0 * _MU_BOUND * np.maximum(b, 0.0) * r + _MU_BOUND**2 * r * r)
    eps_minus = pref * 2.0 * _MU_BOUND * np.abs(b * r)
    return f, eps_plus, eps_minus


def squeeze_bounds_many(n, x):
    """Lower and raw upper squeeze bounds: ((f-eps-)_+, f+eps+)."""
    f, ep, em = terms_many(n, x)
    return np.maximum(f - em, 0.0), f + ep


def delta_eps(n, x, spec=None):
    """Gap between the sandwich bounds: min(f+eps+, h_n) - (f-eps-)_+."""
    if spec is None:
        spec = dominator.make_spec(n)
    t = evaluate(n, x)
    upper = min(t.f + t.eps_plus, dominator.envelope(spec, x))
    lower = max(t.f - t.eps_minus, 0.0)
    return upper - lower


def delta_eps_many(n, x, spec=None):
    """Vectorized sandwich gap, for quadrature."""
    if spec is None:
        spec = dominator.make_spec(n)
    x = np.asarray(x, dtype=float)
    lower, upper = squeeze_bounds_many(n, x)
    upper = np.minimum(upper, dominator.envelope_many(spec, x))
    return upper - lower
