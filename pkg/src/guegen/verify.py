"""Verification suites for the package's correctness and runtime claims.

Each suite checks one acceptance criterion end to end, returning a list
of :class:`CheckResult` rows with the measured statistic and its
threshold.  The CLI ``verify`` command renders these as JSON; the
acceptance tests assert them directly.  ``quick=True`` shrinks sample
counts (statistical thresholds adapt automatically where they depend on
the count).

All suites use fixed seeds derived from one base constant, so a passing
run is reproducible bit for bit.
"""

import math
import time
from dataclasses import dataclass

import numpy as np

from . import dominator, hermite, joint, oracle, samplers, stats, vanveen
from .errors import ParameterError
from .rng import RandomStream

BASE_SEED = 20260810


@dataclass
class CheckResult:
    test: str
    statistic: float
    threshold: float
    passed: bool
    comparison: str = "<"
    detail: str = ""

    def as_dict(self):
        return {
            "test": self.test,
            "statistic": self.statistic,
            "threshold": self.threshold,
            "comparison": self.comparison,
            "pass": bool(self.passed),
            "detail": self.detail,
        }


def _less(test, statistic, threshold, detail=""):
    return CheckResult(test, float(statistic), float(threshold), bool(statistic < threshold), "<", detail)


def _stream(tag):
    return RandomStream(BASE_SEED, spawn_key=(tag,))


# ----------------------------------------------------------------------
# 1. exactness of single-degree sampling against the quadrature CDF
# ----------------------------------------------------------------------


def check_exactness(quick=False):
    draws = 10_000 if quick else 100_000
    out = []
    for i, k in enumerate((1, 3, 10, 100, 1000)):
        st = _stream(10 + i)
        xs = samplers.sample_phi_sq_many(k, draws, st, "squeeze")
        res = stats.ks_one_sample(xs, lambda s: hermite.phi_sq_cdf_many(k, s, tol=1e-8))
        out.append(
            _less(
                f"exactness: KS of {draws} squeeze draws vs quadrature CDF, degree {k}",
                res.scaled,
                1.95,
                detail=f"D={res.statistic:.3e}",
            )
        )
    return out


# ----------------------------------------------------------------------
# 2. plain and squeeze samplers draw the same law
# ----------------------------------------------------------------------


def check_equivalence(quick=False):
    draws = 20_000 if quick else 100_000
    crit = stats.ks_critical(0.01)
    out = []
    for i, k in enumerate((1, 10, 100)):
        a = samplers.sample_phi_sq_many(k, draws, _stream(20 + i), "plain")
        b = samplers.sample_phi_sq_many(k, draws, _stream(30 + i), "squeeze")
        res = stats.ks_two_sample(a, b)
        out.append(
            _less(
                f"equivalence: two-sample KS plain vs squeeze, degree {k}, alpha=0.01",
                res.scaled,
                crit,
            )
        )
    return out


# ----------------------------------------------------------------------
# 3. proposals per accept equal the envelope mass
# ----------------------------------------------------------------------


def check_rejection_constant(quick=False):
    accepts = 5_000 if quick else 100_000
    out = []
    for i, n in enumerate((10, 1_000, 100_000)):
        spec = dominator.make_spec(n)
        st = _stream(40 + i)
        s = samplers.SamplerStats()
        samplers.sample_phi_sq_many(n, accepts, st, "squeeze", s)
        mean_trials = s.proposals / s.accepted
        # trials per accept are geometric with mean = envelope mass
        sigma = math.sqrt((spec.mass**2 - spec.mass) / s.accepted)
        out.append(
            _less(
                f"rejection constant: |proposals/accept - envelope mass| at degree {n}",
                abs(mean_trials - spec.mass),
                3.0 * sigma,
                detail=f"measured {mean_trials:.4f}, mass {spec.mass:.4f}",
            )
        )
        quad = 2.0 * dominator.half_mass_numeric(spec)
        out.append(
            _less(
                f"rejection constant: closed-form mass vs quadrature, degree {n}",
                abs(quad / spec.mass - 1.0),
                1e-8,
            )
        )
    return out


# ----------------------------------------------------------------------
# 4. cost scaling: squeeze sublinear, plain linear
# ----------------------------------------------------------------------


def check_sublinearity(quick=False):
    n_list = (100, 1_000, 10_000, 100_000)
    if quick:
        squeeze_counts = (1_000, 700, 400, 200)
        plain_counts = (400, 150, 60, 30)
    else:
        squeeze_counts = (6_000, 4_000, 2_500, 1_500)
        plain_counts = (6_000, 2_000, 1_000, 600)
    out = []
    rows = []
    for n, c in zip(n_list, squeeze_counts):
        rows += samplers.benchmark("squeeze", [n], c, seed=BASE_SEED + n)
    slope, err = stats.loglog_slope([(r.n, r.cost_proxy) for r in rows])
    detail = "; ".join(f"n={r.n}: proxy={r.cost_proxy:.1f}" for r in rows)
    out.append(
        CheckResult(
            "sublinearity: squeeze cost proxy log-log slope in [0.55, 0.80]",
            slope,
            0.80,
            0.55 <= slope <= 0.80,
            "in-window",
            detail + f"; stderr={err:.3f}",
        )
    )
    share_slope, _ = stats.loglog_slope([(r.n, r.exact_share) for r in rows])
    out.append(
        CheckResult(
            "sublinearity: exact-evaluation share per proposal, slope in [-0.45, -0.20]",
            share_slope,
            -0.20,
            -0.45 <= share_slope <= -0.20,
            "in-window",
            "; ".join(f"n={r.n}: share={r.exact_share:.3f}" for r in rows),
        )
    )
    rows = []
    for n, c in zip(n_list, plain_counts):
        rows += samplers.benchmark("plain", [n], c, seed=BASE_SEED + 7 * n)
    # quick mode has ~4x the slope noise of the full run; widen the
    # window accordingly (the full-size gate keeps [0.9, 1.1] exactly)
    lo, hi = (0.78, 1.22) if quick else (0.9, 1.1)
    slope, err = stats.loglog_slope([(r.n, r.cost_proxy) for r in rows])
    # exact expectation of this slope from the closed-form envelope masses:
    # 0.8979 over this n range (the envelope mass itself falls ~n^-0.10
    # between n=100 and n=100000), so the lower window edge 0.9 sits
    # 0.002 above the true value
    expected = stats.loglog_slope(
        [(n, dominator.make_spec(n).mass * (1.0 + n)) for n in n_list]
    )[0]
    out.append(
        CheckResult(
            f"linearity: plain cost proxy log-log slope in [{lo}, {hi}]",
            slope,
            hi,
            lo <= slope <= hi,
            "in-window",
            "; ".join(f"n={r.n}: proxy={r.cost_proxy:.1f}" for r in rows)
            + f"; stderr={err:.3f}; closed-form expectation {expected:.4f}",
        )
    )
    return out


# ----------------------------------------------------------------------
# 5. squeeze sandwich validity and envelope domination on grids
# ----------------------------------------------------------------------


def check_squeeze_validity(quick=False):
    points = 2_001 if quick else 10_001
    out = []
    for n in (5, 10, 50, 200, 1000):
        spec = dominator.make_spec(n)
        grid = np.linspace(-spec.x1, spec.x1, points)
        f, ep, em = vanveen.terms_many(n, grid)
        lower = np.maximum(f - em, 0.0)
        h = dominator.envelope_many(spec, grid)
        upper = np.minimum(f + ep, h)
        phi = hermite.phi_squared_many(n, grid)
        slack = 1e-10 * h
        worst = max(
            float(np.max(lower - phi - slack)),
            float(np.max(phi - upper - slack)),
            float(np.max(phi - h - slack)),
        )
        out.append(
            _less(
                f"squeeze validity: worst sandwich/domination violation, degree {n}",
                worst,
                0.0,
                detail=f"{points} grid points on [-x1, x1]",
            )
        )
    return out


# ----------------------------------------------------------------------
# 6. sandwich gap integral scales like n^(-1/3)
# ----------------------------------------------------------------------


def check_gap_scaling(quick=False):
    ns = (100, 1_000, 10_000)
    integrals = []
    for n in ns:
        spec = dominator.make_spec(n)
        val, _ = hermite.integrate_adaptive(
            lambda xs: vanveen.delta_eps_many(n, xs, spec),
            0.0,
            spec.x1,
            1e-9,
            initial_width=hermite.oscillation_width(n),
        )
        integrals.append(val)
    scaled = [v * n ** (1.0 / 3.0) for v, n in zip(integrals, ns)]
    ratio = max(scaled) / min(scaled)
    out = [
        _less(
            "gap scaling: spread of n^(1/3) * integral of the sandwich gap",
            ratio,
            3.0,
            detail="; ".join(f"n={n}: {s:.4f}" for n, s in zip(ns, scaled)),
        )
    ]
    slope, _ = stats.loglog_slope(list(zip(ns, integrals)))
    out.append(
        CheckResult(
            "gap scaling: raw gap integral log-log slope in [-0.45, -0.20]",
            slope,
            -0.20,
            -0.45 <= slope <= -0.20,
            "in-window",
        )
    )
    return out


# ----------------------------------------------------------------------
# 7. second moment of the mixture equals the matrix size
# ----------------------------------------------------------------------


def check_second_moment(quick=False):
    draws = 10_000 if quick else 100_000
    out = []
    for i, n in enumerate((2, 50, 1000)):
        st = _stream(50 + i)
        xs = samplers.sample_gue_eigenvalues(n, draws, st)
        sq = xs * xs
        se = float(np.std(sq)) / math.sqrt(draws)
        out.append(
            _less(
                f"second moment: |mean(X^2) - {n}| over {draws} mixture draws",
                abs(float(np.mean(sq)) - n),
                3.0 * se,
                detail=f"mean {float(np.mean(sq)):.4f}",
            )
        )
        # independent quadrature oracle on the mixture density
        cut = hermite.tail_cutoff(n - 1)
        val, _ = hermite.integrate_adaptive(
            lambda xs_: xs_ * xs_ * hermite.mixture_density_many(n, xs_),
            0.0,
            cut,
            1e-7 * n,
            initial_width=hermite.oscillation_width(max(n - 1, 1)),
        )
        out.append(
            _less(
                f"second moment: quadrature of x^2 * mixture density at n={n}",
                abs(2.0 * val / n - 1.0),
                1e-6,
            )
        )
    return out


# ----------------------------------------------------------------------
# 8. joint sampler at n=2 accepts every proposal
# ----------------------------------------------------------------------


def check_joint_n2(quick=False):
    count = 10_000 if quick else 100_000
    st = _stream(60)
    values, attempts = joint.sample_joint_many(2, count, 2.0, st)
    out = [
        _less(
            f"joint n=2: worst attempt count over {count} samples (must be 1)",
            float(attempts.max()),
            1.0 + 1e-9,
        )
    ]
    total = values.sum(axis=1)
    var = float(np.var(total))
    window = 3.0 * 2.0 * math.sqrt(2.0 / (count - 1))
    out.append(
        _less(
            "joint n=2: |Var(X1 + X2) - 2|",
            abs(var - 2.0),
            window,
            detail=f"Var {var:.4f}",
        )
    )
    return out


# ----------------------------------------------------------------------
# 9. joint sampler == mixture sampler == entrywise matrices
# ----------------------------------------------------------------------


def check_joint_triangle(quick=False):
    draws = 2_000 if quick else 10_000
    crit = stats.ks_critical(0.01)
    out = []
    t0 = time.perf_counter()
    for i, n in enumerate((2, 3, 4)):
        st = _stream(70 + i)
        values, attempts = joint.sample_joint_many(n, draws, 2.0, st)
        coord_idx = st.indices(n, draws)
        coords = values[np.arange(draws), coord_idx]
        mix = samplers.sample_gue_eigenvalues(n, draws, _stream(80 + i))
        res = stats.ks_two_sample(coords, mix)
        out.append(
            _less(
                f"triangle: joint coordinate vs mixture draw, n={n}, alpha=0.01",
                res.scaled,
                crit,
                detail=f"attempts mean {attempts.mean():.1f}, max {int(attempts.max())}",
            )
        )
        mats = oracle.sample_gue_matrices(n, draws, "unscaled", _stream(90 + i))
        spectra = oracle.spectra_many(mats)
        for pos in range(n):
            res = stats.ks_two_sample(values[:, pos], spectra[:, pos])
            out.append(
                _less(
                    f"triangle: order statistic {pos + 1} joint vs eigensolver, n={n}",
                    res.scaled,
                    crit,
                )
            )
    out.append(
        _less(
            "triangle: total runtime (seconds)",
            time.perf_counter() - t0,
            1800.0,
        )
    )
    return out


# ----------------------------------------------------------------------
# 10. beta generalization
# ----------------------------------------------------------------------


def _base_propose(n, stream):
    """β=2 pair listing written out directly, for bit-comparison."""
    values = np.empty(n)
    for j, p in enumerate(joint.pair_exponents(n), start=1):
        z = math.sqrt(2.0) * stream.standard_normal()
        w = 2.0 * math.sqrt(stream.gamma((p + 1.0) / 2.0))
        values[j - 1] = (z - w) / 2.0
        values[n - j] = (z + w) / 2.0
    if n % 2 == 1:
        values[(n - 1) // 2] = stream.standard_normal()
    return values


def check_beta(quick=False):
    reps = 100 if quick else 500
    worst = 0.0
    for n in (2, 3, 6):
        sa = _stream(100 + n)
        sb = _stream(100 + n)
        for _ in range(reps):
            general = joint.propose(n, 2.0, sa).values
            base = _base_propose(n, sb)
            worst = max(worst, float(np.max(np.abs(general - base))))
    out = [
        CheckResult(
            "beta: generalized path at beta=2 is bit-identical to the base listing",
            worst,
            0.0,
            worst == 0.0,
            "==",
            detail=f"{reps} proposals at n in (2, 3, 6)",
        )
    ]
    count = 10_000 if quick else 100_000
    st = _stream(110)
    values, _ = joint.sample_joint_many(2, count, 1.0, st)
    gap_sq = (values[:, 1] - values[:, 0]) ** 2
    se = float(np.std(gap_sq)) / math.sqrt(count)
    out.append(
        _less(
            "beta: n=2, beta=1 mean squared gap vs 4 * gamma shape (= 4)",
            abs(float(np.mean(gap_sq)) - 4.0),
            3.0 * se,
            detail=f"mean {float(np.mean(gap_sq)):.4f}",
        )
    )
    return out


# ----------------------------------------------------------------------
# 11. pinned Vandermonde maximum
# ----------------------------------------------------------------------


def _pinned_vandermonde_peak(n, passes=200):
    """Numerically maximize prod_{i<j}(x_j - x_i) with x_1 = 0, x_n = 1.

    The log objective is concave, so cyclic coordinate ascent with
    golden-section line searches converges to the global maximum.
    """
    gold = (math.sqrt(5.0) - 1.0) / 2.0
    x = np.linspace(0.0, 1.0, n)

    def log_obj(pts):
        d = pts[None, :] - pts[:, None]
        iu = np.triu_indices(n, 1)
        return float(np.sum(np.log(d[iu])))

    for _ in range(passes):
        moved = 0.0
        for i in range(1, n - 1):
            lo = x[i - 1] + 1e-14
            hi = x[i + 1] - 1e-14
            start = x[i]

            def f(t):
                x[i] = t
                return log_obj(x)

            a, b = lo, hi
            c = b - gold * (b - a)
            d = a + gold * (b - a)
            fc, fd = f(c), f(d)
            for _ in range(80):
                if fc > fd:
                    b, d, fd = d, c, fc
                    c = b - gold * (b - a)
                    fc = f(c)
                else:
                    a, c, fc = c, d, fd
                    d = a + gold * (b - a)
                    fd = f(d)
            best = c if fc > fd else d
            moved = max(moved, abs(start - best))
            x[i] = best
        if moved < 1e-13:
            break
    return math.exp(log_obj(x))


def check_vandermonde_max(quick=False):
    out = [
        _less(
            "vandermonde max: |log M_2| (closed form, M_2 = 1)",
            abs(joint.vandermonde_max_log(2)),
            1e-12,
        ),
        _less(
            "vandermonde max: |log M_3 - log(1/4)| (closed form, M_3 = 1/4)",
            abs(joint.vandermonde_max_log(3) - math.log(0.25)),
            1e-12,
        ),
    ]
    numeric = _pinned_vandermonde_peak(5)
    out.append(
        _less(
            "vandermonde max: M_5 closed form vs numerical maximization",
            abs(joint.vandermonde_max(5) / numeric - 1.0),
            1e-6,
            detail=f"closed {joint.vandermonde_max(5):.9e}, numeric {numeric:.9e}",
        )
    )
    return out


# ----------------------------------------------------------------------
# suite registry
# ----------------------------------------------------------------------

SUITES = {
    "exactness": check_exactness,
    "equivalence": check_equivalence,
    "rejection-constant": check_rejection_constant,
    "sublinearity": check_sublinearity,
    "squeeze-validity": check_squeeze_validity,
    "gap-scaling": check_gap_scaling,
    "second-moment": check_second_moment,
    "joint-n2": check_joint_n2,
    "joint-triangle": check_joint_triangle,
    "beta": check_beta,
    "vandermonde-max": check_vandermonde_max,
}


def run_suites(names=None, quick=False):
    """Run the requested suites (all by default); returns a JSON-ready dict."""
    if names is None or names == ["all"]:
        names = list(SUITES)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise ParameterError(f"unknown suite(s): {', '.join(unknown)}")
    report = {"quick": bool(quick), "suites": {}, "pass": True}
    for name in names:
        t0 = time.perf_counter()
        checks = SUITES[name](quick=quick)
        elapsed = time.perf_counter() - t0
        ok = all(c.passed for c in checks)
        report["suites"][name] = {
            "pass": ok,
            "elapsed_seconds": round(elapsed, 3),
            "checks": [c.as_dict() for c in checks],
        }
        report["pass"] = report["pass"] and ok
    return report
