"""Exact rejection sampler for the full ordered GUE(n) spectrum.

The target is the ordered eigenvalue density proportional to

    1{x_1 <= ... <= x_n} prod_{i<j} (x_j - x_i)^2 prod_i e^{-x_i^2/2}.

An arithmetic-geometric-mean bound turns the interaction product into a
product over symmetric pairs (j, n+1-j): with p_j = 4n - 8j + 2,

    prod_{i<j}(x_j-x_i)^2 <= 2^{2 floor(n/2) - 2 C(n,2)}
                             prod_j (x_{n+1-j} - x_j)^{p_j},

whose right side, combined with the Gaussian weights, factorizes into
independent bivariate proposals.  Each pair is drawn through the
transform (X, Y) = ((Z-W)/2, (Z+W)/2) with Z = sqrt(2) N and
W = 2 sqrt(Gamma((p+1)/2)) independent, which has joint density
proportional to (y-x)^p e^{-x^2/2 - y^2/2} on y > x.  A proposal is
accepted when the concatenated coordinates are strictly increasing and a
uniform passes the (log-space) ratio test against the bound.

The Gaussian beta-ensemble generalization replaces every pair exponent p
by p*beta/2 and rescales the Gaussian components (the Z part of each
pair and the lone middle coordinate for odd n) by sqrt(2/beta); the
half-difference variate W keeps its base scale.  At beta = 2 the
generalized path is bit-identical to the base path.

For odd n the middle coordinate carries no pair partner and is drawn
from the Gaussian factor alone.

Acceptance decays quickly with n (this sampler trades speed for an exact
finite-dimensional spectrum); expect hundreds to tens of thousands of
attempts per accept already at n = 4, and use ``max_attempts`` plus the
progress callback to keep long runs observable.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import BudgetError, ParameterError

_SQRT2 = math.sqrt(2.0)
_LN2 = math.log(2.0)
PROGRESS_EVERY = 10**5
DEFAULT_MAX_ATTEMPTS = 10**7


@dataclass(frozen=True)
class JointProposal:
    """One candidate spectrum before the acceptance test."""

    n: int
    values: np.ndarray
    beta: float
    pair_exponents: tuple  # base (beta=2) exponents p_j = 4n - 8j + 2


@dataclass(frozen=True)
class JointSample:
    """An accepted spectrum and the number of attempts it took."""

    n: int
    values: np.ndarray
    attempts: int
    beta: float


def pair_exponents(n):
    """Base pair exponents p_j = 4n - 8j + 2 for j = 1 .. floor(n/2)."""
    return tuple(4 * n - 8 * j + 2 for j in range(1, n // 2 + 1))


def pair_transform(p, stream):
    """Draw (X, Y) with joint density ~ (y-x)^p e^{-x^2/2 - y^2/2}, y > x."""
    if p < 0:
        raise ParameterError(f"pair exponent must be >= 0, got {p}")
    return _pair(float(p), stream, 1.0)


def _pair(p, stream, gauss_scale):
    z = _SQRT2 * gauss_scale * stream.standard_normal()
    w = 2.0 * math.sqrt(stream.gamma((p + 1.0) / 2.0))
    return (z - w) / 2.0, (z + w) / 2.0


def _validated(n, beta):
    n = int(n)
    if n < 2:
        raise ParameterError(f"joint sampling needs n >= 2, got {n}")
    beta = float(beta)
    if not beta > 0.0:
        raise ParameterError(f"beta must be > 0, got {beta}")
    return n, beta


def propose(n, beta=2.0, stream=None):
    """One proposal: pair draws for j = 1 .. floor(n/2), middle Gaussian
    coordinate when n is odd.  Pair j fills positions (j, n+1-j)."""
    n, beta = _validated(n, beta)
    gauss_scale = math.sqrt(2.0 / beta)
    base = pair_exponents(n)
    values = np.empty(n)
    for j, p in enumerate(base, start=1):
        lo, hi = _pair(p * beta / 2.0, stream, gauss_scale)
        values[j - 1] = lo
        values[n - j] = hi
    if n % 2 == 1:
        values[(n - 1) // 2] = gauss_scale * stream.standard_normal()
    return JointProposal(n=n, values=values, beta=beta, pair_exponents=base)


def _log_bound_and_target(values, beta):
    """Log of the dominating kernel and of the target interaction kernel.

    The Gaussian weights are identical on both sides and cancel from the
    ratio, so only the interaction factors appear.  Caller guarantees the
    values are strictly increasing.
    """
    values = np.asarray(values, dtype=float)
    n = values.size
    log_const = beta * (n // 2 - n * (n - 1) // 2) * _LN2
    base = pair_exponents(n)
    gaps = values[::-1][: n // 2] - values[: n // 2]  # x_{n+1-j} - x_j
    log_dom = log_const + float(
        np.sum(np.array(base) * (beta / 2.0) * np.log(gaps))
    )
    diffs = values[None, :] - values[:, None]
    iu = np.triu_indices(n, 1)
    log_target = beta * float(np.sum(np.log(diffs[iu])))
    return log_dom, log_target


def accept_test(proposal, stream):
    """Ordering check plus the uniform ratio test, in log space."""
    values = proposal.values
    if np.any(np.diff(values) <= 0.0):
        return False
    u = stream.uniform()
    log_dom, log_target = _log_bound_and_target(values, proposal.beta)
    if u == 0.0:
        return True
    return math.log(u) + log_dom < log_target


def sample_joint(
    n,
    beta=2.0,
    stream=None,
    max_attempts=DEFAULT_MAX_ATTEMPTS,
    progress=None,
    progress_every=PROGRESS_EVERY,
):
    """One exact ordered spectrum; raises BudgetError past ``max_attempts``.

    ``progress``, if given, is called with the running attempt count
    every ``progress_every`` attempts.
    """
    n, beta = _validated(n, beta)
    if max_attempts < 1:
        raise ParameterError("max_attempts must be >= 1")
    for attempt in range(1, max_attempts + 1):
        prop = propose(n, beta, stream)
        if accept_test(prop, stream):
            return JointSample(n=n, values=prop.values, attempts=attempt, beta=beta)
        if progress is not None and attempt % progress_every == 0:
            progress(attempt)
    raise BudgetError(
        f"no accepted spectrum within {max_attempts} attempts at n={n}",
        attempts=max_attempts,
    )


def sample_joint_many(
    n,
    count,
    beta=2.0,
    stream=None,
    max_attempts=DEFAULT_MAX_ATTEMPTS,
    progress=None,
    progress_every=PROGRESS_EVERY,
):
    """``count`` spectra, attempts vectorized in blocks.

    Returns ``(values, attempts)`` where ``values`` has shape (count, n)
    and ``attempts[i]`` counts the proposals consumed by sample i (the
    gap since the previous accept).  ``max_attempts`` caps each sample's
    gap, matching the scalar sampler's budget semantics.
    """
    n, beta = _validated(n, beta)
    count = int(count)
    if count < 0:
        raise ParameterError(f"count must be >= 0, got {count}")
    values = np.empty((count, n))
    attempts = np.empty(count, dtype=np.int64)
    if count == 0:
        return values, attempts

    gauss_scale = math.sqrt(2.0 / beta)
    base = pair_exponents(n)
    q = np.array(base, dtype=float) * (beta / 2.0)
    shapes = (q + 1.0) / 2.0
    log_const = beta * (n // 2 - n * (n - 1) // 2) * _LN2
    iu = np.triu_indices(n, 1)

    filled = 0
    gap = 0  # attempts since the last accept (carries across blocks)
    total = 0
    last_report = 0
    rate = 0.5  # adaptive acceptance-rate estimate
    block_cap = max(1024, min(400000, 4_000_000 // (n * n)))
    while filled < count:
        block = int(np.clip((count - filled) / rate * 1.2, 512, block_cap))
        coords = np.empty((block, n))
        gaps = np.empty((len(base), block))
        for idx, (p, shape) in enumerate(zip(base, shapes)):
            z = _SQRT2 * gauss_scale * stream.standard_normals(block)
            w = 2.0 * np.sqrt(stream.gammas(shape, block))
            coords[:, idx] = (z - w) / 2.0
            coords[:, n - 1 - idx] = (z + w) / 2.0
            gaps[idx] = w
        if n % 2 == 1:
            coords[:, (n - 1) // 2] = gauss_scale * stream.standard_normals(block)
        ordered = np.all(np.diff(coords, axis=1) > 0.0, axis=1)
        u = stream.uniforms(block)
        with np.errstate(divide="ignore"):
            lhs = np.log(u) + log_const + q @ np.log(gaps)
        diffs = coords[:, None, :] - coords[:, :, None]
        with np.errstate(divide="ignore", invalid="ignore"):
            rhs = beta * np.sum(np.log(diffs[:, iu[0], iu[1]]), axis=1)
        accept = ordered & (lhs < rhs)

        pos = np.flatnonzero(accept)
        need = count - filled
        if pos.size > need:
            pos = pos[:need]
        prev = -1
        for p_idx in pos:
            gap += int(p_idx) - prev
            if gap > max_attempts:
                raise BudgetError(
                    f"sample exceeded {max_attempts} attempts at n={n}",
                    attempts=gap,
                )
            attempts[filled] = gap
            values[filled] = coords[p_idx]
            filled += 1
            total += gap
            gap = 0
            prev = int(p_idx)
        if filled < count:
            gap += block - 1 - prev
            if gap > max_attempts:
                raise BudgetError(
                    f"sample exceeded {max_attempts} attempts at n={n}",
                    attempts=gap,
                )
            pending = total + gap
            if progress is not None and pending - last_report >= progress_every:
                progress(pending)
                last_report = pending
        rate = max(filled / max(total + gap, 1), 1e-7)
    return values, attempts


def vandermonde_max_log(n):
    """Log of the maximum of prod_{i<j}(x_j - x_i) over ordered points
    pinned to x_1 = 0 and x_n = 1 (interior points free)."""
    n = int(n)
    if n < 2:
        raise ParameterError(f"need n >= 2, got {n}")
    total = 0.0
    for j in range(n):
        if j > 0:
            total += j * math.log(j)
        total += 0.5 * (j + 1) * math.log(j + 1)
        total -= 0.5 * (j + n - 1) * math.log(j + n - 1)
    return total


def vandermonde_max(n):
    """Closed-form maximum of the pinned Vandermonde product."""
    return math.exp(vandermonde_max_log(n))
