"""Exact single-eigenvalue samplers.

Three layers, all targeting the same densities exactly:

* plain rejection from the piecewise envelope, paying one O(k)
  recurrence evaluation per proposal;
* squeeze-accelerated rejection, which resolves most proposals against
  the constant-time sandwich bounds and falls back to the exact
  recurrence only on the inconclusive band (or when the proposal lands
  outside the squeeze window |x| <= x1, where the bounds do not apply);
* the uniform-index mixture: pick K uniform on {0, ..., n-1}, draw from
  the squared Hermite function density of degree K.  The result is one
  uniformly chosen eigenvalue of an n x n GUE matrix in the unscaled
  convention (spectrum ~ [-2 sqrt(n), 2 sqrt(n)]).

Degree 0 short-circuits to a standard normal draw, since the degree-0
density is exactly the standard normal density.

Scalar entry points consume the stream one proposal at a time, mirroring
the rejection loop shape; the ``*_many`` batch entry points vectorize
proposals in blocks and are what the CLI and the verification suites
use.  Both are deterministic functions of (seed, parameters), but they
consume the stream in different orders and so produce different (equally
exact) outputs.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from . import dominator, hermite, vanveen
from .errors import BudgetError, ParameterError

DEFAULT_MAX_PROPOSALS = 10**6
_BLOCK_CAP = 1_500_000


@dataclass
class SamplerStats:
    """Counters describing the work a sampler performed.

    ``exact_evals`` counts proposals whose decision needed the O(k)
    recurrence, i.e. squeeze-inconclusive proposals plus all proposals
    outside the squeeze window (and every proposal in plain mode).
    """

    proposals: int = 0
    squeeze_lower_accepts: int = 0
    squeeze_upper_rejects: int = 0
    exact_evals: int = 0
    accepted: int = 0
    elapsed: float = 0.0

    def merge(self, other):
        self.proposals += other.proposals
        self.squeeze_lower_accepts += other.squeeze_lower_accepts
        self.squeeze_upper_rejects += other.squeeze_upper_rejects
        self.exact_evals += other.exact_evals
        self.accepted += other.accepted
        self.elapsed += other.elapsed


@dataclass(frozen=True)
class SamplerConfig:
    """Validated sampler parameters."""

    mode: str = "squeeze"
    k: int | None = None
    n: int = 1
    max_proposals: int = DEFAULT_MAX_PROPOSALS

    def __post_init__(self):
        if self.mode not in ("plain", "squeeze"):
            raise ParameterError(f"mode must be 'plain' or 'squeeze', got {self.mode!r}")
        if self.k is not None and self.k < 0:
            raise ParameterError(f"degree k must be >= 0, got {self.k}")
        if self.n < 1:
            raise ParameterError(f"ensemble size n must be >= 1, got {self.n}")
        if self.k is not None and self.k >= self.n > 1:
            raise ParameterError(
                f"mixture mode requires k < n, got k={self.k}, n={self.n}"
            )
        if self.max_proposals < 1:
            raise ParameterError("max_proposals must be >= 1")


@dataclass
class SampleBatch:
    """A batch of draws plus the metadata needed to reproduce it."""

    values: np.ndarray
    mode: str
    seed: int
    n: int | None = None
    k: int | None = None
    beta: float = 2.0
    convention: str = "unscaled"
    stats: SamplerStats = field(default_factory=SamplerStats)


# ----------------------------------------------------------------------
# scalar samplers (one proposal at a time)
# ----------------------------------------------------------------------


def _sample_scalar(k, stream, stats, squeeze, max_proposals):
    t0 = time.perf_counter()
    if k == 0:
        x = stream.standard_normal()
        if stats is not None:
            stats.proposals += 1
            stats.accepted += 1
            stats.elapsed += time.perf_counter() - t0
        return x
    spec = dominator.make_spec(k)
    for _ in range(max_proposals):
        x = dominator.sample_envelope(spec, stream)
        u = stream.uniform()
        if stats is not None:
            stats.proposals += 1
        uh = u * dominator.envelope(spec, x)
        if squeeze and abs(x) <= spec.x1:
            t = vanveen.evaluate(k, x)
            lower = max(t.f - t.eps_minus, 0.0)
            if uh <= lower:
                if stats is not None:
                    stats.squeeze_lower_accepts += 1
                    stats.accepted += 1
                    stats.elapsed += time.perf_counter() - t0
                return x
            if uh > t.f + t.eps_plus:
                if stats is not None:
                    stats.squeeze_upper_rejects += 1
                continue
        if stats is not None:
            stats.exact_evals += 1
        if uh <= hermite.phi_squared(k, x):
            if stats is not None:
                stats.accepted += 1
                stats.elapsed += time.perf_counter() - t0
            return x
    raise BudgetError(
        f"no acceptance within {max_proposals} proposals at degree {k}",
        attempts=max_proposals,
    )


def sample_phi_sq_plain(k, stream, stats=None, max_proposals=DEFAULT_MAX_PROPOSALS):
    """One exact draw from the degree-k squared Hermite function density,
    evaluating the O(k) recurrence on every proposal."""
    return _sample_scalar(int(k), stream, stats, False, max_proposals)


def sample_phi_sq_squeeze(k, stream, stats=None, max_proposals=DEFAULT_MAX_PROPOSALS):
    """One exact draw, squeeze-accelerated: constant-time bounds decide
    most proposals, the exact recurrence only the inconclusive band."""
    return _sample_scalar(int(k), stream, stats, True, max_proposals)


def sample_gue_eigenvalue(n, stream, stats=None, max_proposals=DEFAULT_MAX_PROPOSALS):
    """One uniformly chosen eigenvalue of GUE(n), unscaled convention."""
    n = int(n)
    if n < 1:
        raise ParameterError(f"ensemble size must be >= 1, got {n}")
    k = stream.index(n)
    return _sample_scalar(k, stream, stats, True, max_proposals)


# ----------------------------------------------------------------------
# batch engine
# ----------------------------------------------------------------------


def sample_phi_sq_many(
    k,
    count,
    stream,
    mode="squeeze",
    stats=None,
    max_proposals=DEFAULT_MAX_PROPOSALS,
):
    """``count`` exact draws from the degree-k density, vectorized.

    Proposals are generated in blocks sized from the known acceptance
    rate. Counters in ``stats`` reflect the sequential semantics: blocks
    are truncated at the proposal that produced the last needed accept,
    and everything after it is discarded as if never drawn.
    """
    k = int(k)
    count = int(count)
    if k < 0:
        raise ParameterError(f"degree must be >= 0, got {k}")
    if count < 0:
        raise ParameterError(f"count must be >= 0, got {count}")
    if mode not in ("plain", "squeeze"):
        raise ParameterError(f"mode must be 'plain' or 'squeeze', got {mode!r}")
    t0 = time.perf_counter()
    if stats is None:
        stats = SamplerStats()
    if count == 0:
        return np.empty(0)
    if k == 0:
        out = stream.standard_normals(count)
        stats.proposals += count
        stats.accepted += count
        stats.elapsed += time.perf_counter() - t0
        return out

    spec = dominator.make_spec(k)
    expected_trials = spec.mass  # mean proposals per accept
    budget = max_proposals * count
    use_squeeze = mode == "squeeze"

    out = np.empty(count)
    filled = 0
    spent = 0
    while filled < count:
        need = count - filled
        block = int(need * expected_trials * 1.2) + 32
        block = min(block, _BLOCK_CAP, budget - spent)
        if block <= 0:
            raise BudgetError(
                f"no acceptance within {budget} proposals at degree {k}",
                attempts=budget,
            )
        x = dominator.sample_envelope_many(spec, stream, block)
        u = stream.uniforms(block)
        uh = u * dominator.envelope_many(spec, x)

        accept = np.zeros(block, dtype=bool)
        lower_acc = np.zeros(block, dtype=bool)
        upper_rej = np.zeros(block, dtype=bool)
        exact = np.zeros(block, dtype=bool)
        if use_squeeze:
            window = np.abs(x) <= spec.x1
            lo, up = vanveen.squeeze_bounds_many(k, x[window])
            uhw = uh[window]
            qa = uhw <= lo
            qr = uhw > up
            lower_acc[window] = qa
            upper_rej[window] = qr
            exact[window] = ~qa & ~qr
            exact[~window] = True
        else:
            exact[:] = True
        idx = np.flatnonzero(exact)
        if idx.size:
            phi = hermite.phi_squared_many(k, x[idx])
            accept[idx] = uh[idx] <= phi
        accept[lower_acc] = True

        pos = np.flatnonzero(accept)
        cut = pos[need - 1] + 1 if pos.size >= need else block
        take = pos[:need]
        out[filled : filled + take.size] = x[take]
        filled += take.size
        spent += int(cut)
        stats.proposals += int(cut)
        stats.squeeze_lower_accepts += int(lower_acc[:cut].sum())
        stats.squeeze_upper_rejects += int(upper_rej[:cut].sum())
        stats.exact_evals += int(exact[:cut].sum())
        stats.accepted += take.size
    stats.elapsed += time.perf_counter() - t0
    return out


def sample_gue_eigenvalues(
    n,
    count,
    stream,
    mode="squeeze",
    stats=None,
    max_proposals=DEFAULT_MAX_PROPOSALS,
):
    """``count`` uniformly chosen GUE(n) eigenvalues, vectorized.

    Draws all mixture indices first, then samples each represented
    degree as one batch; output order matches the index draw order.
    """
    n = int(n)
    count = int(count)
    if n < 1:
        raise ParameterError(f"ensemble size must be >= 1, got {n}")
    if stats is None:
        stats = SamplerStats()
    ks = stream.indices(n, count)
    out = np.empty(count)
    for k in np.unique(ks):
        sel = ks == k
        out[sel] = sample_phi_sq_many(
            int(k), int(sel.sum()), stream, mode, stats, max_proposals
        )
    return out


# ----------------------------------------------------------------------
# benchmarking
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class BenchRow:
    """Per-degree aggregate of a benchmark run.

    ``cost_proxy`` is the Wald-style work estimate per accepted draw:
    (proposals + n * exact_evals) / accepted, counting one unit per
    constant-time proposal and n units per exact recurrence evaluation.
    """

    n: int
    mode: str
    accepted: int
    proposals: int
    exact_evals: int
    proposals_per_accept: float
    exact_share: float
    cost_proxy: float
    ns_per_sample: float


def benchmark(mode, n_list, samples_per_n, seed=0, max_proposals=DEFAULT_MAX_PROPOSALS):
    """Run the sampler across degrees and aggregate its counters.

    Each degree gets an independent derived stream, so rows do not
    depend on each other or on the order of ``n_list``.
    """
    if not n_list:
        raise ParameterError("n_list must be nonempty")
    from .rng import RandomStream

    master = RandomStream(seed)
    streams = master.spawn(len(n_list))
    rows = []
    for n, st in zip(n_list, streams):
        stats = SamplerStats()
        sample_phi_sq_many(n, samples_per_n, st, mode, stats, max_proposals)
        rows.append(
            BenchRow(
                n=int(n),
                mode=mode,
                accepted=stats.accepted,
                proposals=stats.proposals,
                exact_evals=stats.exact_evals,
                proposals_per_accept=stats.proposals / max(stats.accepted, 1),
                exact_share=stats.exact_evals / max(stats.proposals, 1),
                cost_proxy=(stats.proposals + n * stats.exact_evals)
                / max(stats.accepted, 1),
                ns_per_sample=1e9 * stats.elapsed / max(stats.accepted, 1),
            )
        )
    return rows
