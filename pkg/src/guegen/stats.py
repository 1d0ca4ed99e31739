"""Goodness-of-fit and scaling-fit helpers for the verification suites.

Both Kolmogorov-Smirnov variants report the raw sup-distance together
with the sqrt(n)-scaled statistic and pass/fail decisions at the
standard significance levels, using the asymptotic critical values
c(alpha) = sqrt(-ln(alpha/2) / 2).  Decisions are auxiliary; acceptance
thresholds always compare the scaled statistic itself.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import OracleError, ParameterError

ALPHAS = (0.05, 0.01, 0.001)
_MIN_SAMPLES = 100


def ks_critical(alpha):
    """Asymptotic two-sided critical value for the scaled KS statistic."""
    if not 0.0 < alpha < 1.0:
        raise ParameterError(f"significance level must be in (0,1), got {alpha}")
    return math.sqrt(-0.5 * math.log(alpha / 2.0))


@dataclass(frozen=True)
class KSResult:
    statistic: float
    n_effective: float
    scaled: float
    pass_at: dict

    def passes(self, alpha):
        return self.scaled < ks_critical(alpha)


def _result(statistic, n_effective):
    scaled = statistic * math.sqrt(n_effective)
    return KSResult(
        statistic=float(statistic),
        n_effective=float(n_effective),
        scaled=float(scaled),
        pass_at={a: scaled < ks_critical(a) for a in ALPHAS},
    )


def ks_one_sample(samples, cdf_oracle):
    """Sup-distance between the empirical CDF and a reference CDF.

    ``cdf_oracle`` may be vectorized (preferred) or scalar.  It must be
    nondecreasing with values in [0, 1]; violations raise OracleError
    since they mean the oracle itself is broken.
    """
    xs = np.sort(np.asarray(samples, dtype=float))
    n = xs.size
    if n < _MIN_SAMPLES:
        raise ParameterError(f"need at least {_MIN_SAMPLES} samples, got {n}")
    try:
        f = np.asarray(cdf_oracle(xs), dtype=float)
        if f.shape != xs.shape:
            raise TypeError
    except TypeError:
        f = np.array([float(cdf_oracle(x)) for x in xs])
    if np.any(np.diff(f) < -1e-12):
        raise OracleError("reference CDF is not monotone on the sample points")
    if f.min() < -1e-9 or f.max() > 1.0 + 1e-9:
        raise OracleError("reference CDF left [0, 1]")
    i = np.arange(n)
    d_plus = np.max((i + 1) / n - f)
    d_minus = np.max(f - i / n)
    return _result(max(d_plus, d_minus, 0.0), n)


def ks_two_sample(a, b):
    """Two-sample KS with effective size ab / (a + b)."""
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    if a.size < _MIN_SAMPLES or b.size < _MIN_SAMPLES:
        raise ParameterError(
            f"need at least {_MIN_SAMPLES} samples per side, got {a.size}, {b.size}"
        )
    pooled = np.concatenate([a, b])
    pooled.sort(kind="mergesort")
    ca = np.searchsorted(a, pooled, side="right") / a.size
    cb = np.searchsorted(b, pooled, side="right") / b.size
    d = float(np.max(np.abs(ca - cb)))
    n_eff = a.size * b.size / (a.size + b.size)
    return _result(d, n_eff)


def loglog_slope(points):
    """Least-squares slope of log y against log n, with its standard error.

    ``points`` is a sequence of (n, y) pairs, all strictly positive,
    at least three of them.
    """
    arr = np.asarray(points, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] < 3:
        raise ParameterError("need at least 3 (n, y) pairs")
    if np.any(arr <= 0.0):
        raise ParameterError("log-log fit needs strictly positive inputs")
    lx = np.log(arr[:, 0])
    ly = np.log(arr[:, 1])
    dx = lx - lx.mean()
    sxx = float(np.sum(dx * dx))
    if sxx == 0.0:
        raise ParameterError("all n values coincide; slope undefined")
    slope = float(np.sum(dx * ly) / sxx)
    resid = ly - ly.mean() - slope * dx
    dof = arr.shape[0] - 2
    stderr = math.sqrt(float(np.sum(resid * resid)) / dof / sxx) if dof else 0.0
    return slope, stderr
