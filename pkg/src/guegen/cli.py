"""Command-line interface.

Subcommands: sample, sample-joint, bench, verify, tabulate-envelope,
tabulate-squeeze, oracle.  CSV goes to stdout (or --out) with a header
row; verification reports are JSON.  Exit codes: 0 success, 1 parameter
or usage error (and failed verification), 2 exhausted budget or failed
numerical convergence.
"""

import argparse
import json
import math
import sys

import numpy as np

from . import dominator, hermite, joint, oracle, samplers, vanveen, verify
from .errors import BudgetError, ConvergenceError, GuegenError, ParameterError
from .rng import RandomStream


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; route through the
    # package's parameter-error path (exit 1) instead
    def error(self, message):
        raise ParameterError(message)


def _seed(text):
    try:
        return int(text, 0)  # accepts decimal and 0x-prefixed hex
    except ValueError:
        raise ParameterError(f"seed must be a decimal or hex integer, got {text!r}")


def _emit(lines, out_path):
    if out_path:
        with open(out_path, "w") as fh:
            for line in lines:
                fh.write(line + "\n")
    else:
        for line in lines:
            print(line)


def _csv(header, rows):
    yield ",".join(header)
    for row in rows:
        yield ",".join(
            f"{v:.17g}" if isinstance(v, float) else str(v) for v in row
        )


def build_parser():
    p = _Parser(prog="guegen", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("sample", help="draw single eigenvalues or fixed-degree variates")
    sp.add_argument("--n", type=int, help="ensemble size for mixture sampling")
    sp.add_argument("--k", type=int, help="fixed degree instead of the mixture")
    sp.add_argument("--count", type=int, required=True)
    sp.add_argument("--mode", choices=["plain", "squeeze"], default="squeeze")
    sp.add_argument("--seed", type=_seed, default=0)
    sp.add_argument("--format", choices=["csv", "json"], default="csv")
    sp.add_argument("--convention", choices=["unscaled", "intro"], default="unscaled")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--max-proposals", type=int, default=samplers.DEFAULT_MAX_PROPOSALS)
    sp.add_argument("--out")

    jp = sub.add_parser("sample-joint", help="draw full ordered spectra")
    jp.add_argument("--n", type=int, required=True)
    jp.add_argument("--beta", type=float, default=2.0)
    jp.add_argument("--count", type=int, required=True)
    jp.add_argument("--seed", type=_seed, default=0)
    jp.add_argument("--max-attempts", type=int, default=joint.DEFAULT_MAX_ATTEMPTS)
    jp.add_argument("--format", choices=["csv", "json"], default="csv")
    jp.add_argument("--out")

    bp = sub.add_parser("bench", help="measure sampler cost scaling")
    bp.add_argument("--mode", choices=["plain", "squeeze"], default="squeeze")
    bp.add_argument("--n-list", required=True, help="comma-separated degrees")
    bp.add_argument("--samples-per-n", type=int, default=1000)
    bp.add_argument("--seed", type=_seed, default=0)
    bp.add_argument("--out")

    vp = sub.add_parser("verify", help="run verification suites, print a JSON report")
    vp.add_argument("--suite", default="all", help="comma-separated suite names or 'all'")
    vp.add_argument("--quick", action="store_true", help="reduced sample counts")
    vp.add_argument("--out")

    tp = sub.add_parser("tabulate-envelope", help="CSV of envelope vs density on a grid")
    tp.add_argument("--n", type=int, required=True)
    tp.add_argument("--points", type=int, default=2001)
    tp.add_argument("--out")

    qp = sub.add_parser("tabulate-squeeze", help="CSV of the squeeze sandwich on a grid")
    qp.add_argument("--n", type=int, required=True)
    qp.add_argument("--points", type=int, default=2001)
    qp.add_argument("--out")

    op = sub.add_parser("oracle", help="CSV spectra from entrywise matrices")
    op.add_argument("--n", type=int, required=True)
    op.add_argument("--count", type=int, required=True)
    op.add_argument("--seed", type=_seed, default=0)
    op.add_argument("--convention", choices=["unscaled", "intro"], default="unscaled")
    op.add_argument("--out")

    return p


def _cmd_sample(args):
    if args.k is None and args.n is None:
        raise ParameterError("sample needs --n (mixture) or --k (fixed degree)")
    if args.count < 1:
        raise ParameterError("--count must be >= 1")
    if args.workers < 1:
        raise ParameterError("--workers must be >= 1")
    if args.k is not None and args.convention == "intro":
        raise ParameterError("--convention intro applies to eigenvalue sampling, not --k")
    if args.k is not None and args.n is not None and args.k >= args.n:
        raise ParameterError(f"--k must be below --n, got k={args.k}, n={args.n}")
    master = RandomStream(args.seed)
    streams = master.spawn(args.workers) if args.workers > 1 else [master]
    shares = [args.count // args.workers] * args.workers
    for i in range(args.count % args.workers):
        shares[i] += 1
    stats = samplers.SamplerStats()
    chunks = []
    for st, share in zip(streams, shares):
        if share == 0:
            continue
        if args.k is not None:
            chunks.append(
                samplers.sample_phi_sq_many(
                    args.k, share, st, args.mode, stats, args.max_proposals
                )
            )
        else:
            chunks.append(
                samplers.sample_gue_eigenvalues(
                    args.n, share, st, args.mode, stats, args.max_proposals
                )
            )
    values = np.concatenate(chunks)
    if args.convention == "intro":
        values = values / math.sqrt(args.n)
    batch = samplers.SampleBatch(
        values=values,
        mode=args.mode,
        seed=args.seed,
        n=args.n,
        k=args.k,
        convention=args.convention,
        stats=stats,
    )
    if args.format == "json":
        _emit(
            [
                json.dumps(
                    {
                        "n": batch.n,
                        "k": batch.k,
                        "mode": batch.mode,
                        "seed": batch.seed,
                        "convention": batch.convention,
                        "count": len(values),
                        "proposals": stats.proposals,
                        "exact_evals": stats.exact_evals,
                        "values": [float(v) for v in values],
                    }
                )
            ],
            args.out,
        )
    else:
        _emit(
            _csv(["index", "value"], ((i, float(v)) for i, v in enumerate(values))),
            args.out,
        )
    return 0


def _cmd_sample_joint(args):
    if args.count < 1:
        raise ParameterError("--count must be >= 1")
    stream = RandomStream(args.seed)
    progress = lambda a: print(f"attempts so far: {a}", file=sys.stderr)
    values, attempts = joint.sample_joint_many(
        args.n, args.count, args.beta, stream, args.max_attempts, progress=progress
    )
    if args.format == "json":
        _emit(
            [
                json.dumps(
                    {
                        "n": args.n,
                        "beta": args.beta,
                        "seed": args.seed,
                        "attempts": [int(a) for a in attempts],
                        "values": [[float(v) for v in row] for row in values],
                    }
                )
            ],
            args.out,
        )
    else:
        header = ["index", "attempts"] + [f"x{i + 1}" for i in range(args.n)]
        rows = (
            (i, int(attempts[i]), *map(float, values[i])) for i in range(args.count)
        )
        _emit(_csv(header, rows), args.out)
    return 0


def _cmd_bench(args):
    try:
        n_list = [int(s) for s in args.n_list.split(",") if s]
    except ValueError:
        raise ParameterError(f"--n-list must be comma-separated integers, got {args.n_list!r}")
    rows = samplers.benchmark(args.mode, n_list, args.samples_per_n, seed=args.seed)
    header = [
        "n",
        "mode",
        "accepted",
        "proposals",
        "exact_evals",
        "proposals_per_accept",
        "exact_share",
        "cost_proxy",
        "ns_per_sample",
    ]
    _emit(
        _csv(
            header,
            (
                (
                    r.n,
                    r.mode,
                    r.accepted,
                    r.proposals,
                    r.exact_evals,
                    r.proposals_per_accept,
                    r.exact_share,
                    r.cost_proxy,
                    r.ns_per_sample,
                )
                for r in rows
            ),
        ),
        args.out,
    )
    return 0


def _cmd_verify(args):
    names = [s for s in args.suite.split(",") if s]
    report = verify.run_suites(names if names != ["all"] else None, quick=args.quick)
    _emit([json.dumps(report, indent=2)], args.out)
    return 0 if report["pass"] else 1


def _cmd_tabulate_envelope(args):
    if args.points < 2:
        raise ParameterError("--points must be >= 2")
    spec = dominator.make_spec(args.n)
    span = spec.x2 + 3.0 * (spec.x2 - spec.edge)
    grid = np.linspace(-span, span, args.points)
    h = dominator.envelope_many(spec, grid)
    phi = hermite.phi_squared_many(args.n, grid)
    _emit(
        _csv(
            ["x", "h", "phi_sq"],
            ((float(x), float(a), float(b)) for x, a, b in zip(grid, h, phi)),
        ),
        args.out,
    )
    return 0


def _cmd_tabulate_squeeze(args):
    if args.points < 2:
        raise ParameterError("--points must be >= 2")
    spec = dominator.make_spec(args.n)
    grid = np.linspace(-spec.x1, spec.x1, args.points)
    f, ep, em = vanveen.terms_many(args.n, grid)
    h = dominator.envelope_many(spec, grid)
    lower = np.maximum(f - em, 0.0)
    upper = np.minimum(f + ep, h)
    phi = hermite.phi_squared_many(args.n, grid)
    _emit(
        _csv(
            ["x", "phi_sq", "f", "lower", "upper", "h"],
            (
                tuple(map(float, row))
                for row in zip(grid, phi, f, lower, upper, h)
            ),
        ),
        args.out,
    )
    return 0


def _cmd_oracle(args):
    if args.count < 1:
        raise ParameterError("--count must be >= 1")
    stream = RandomStream(args.seed)
    mats = oracle.sample_gue_matrices(args.n, args.count, args.convention, stream)
    spectra = oracle.spectra_many(mats)
    header = ["index"] + [f"x{i + 1}" for i in range(args.n)]
    _emit(
        _csv(header, ((i, *map(float, spectra[i])) for i in range(args.count))),
        args.out,
    )
    return 0


_COMMANDS = {
    "sample": _cmd_sample,
    "sample-joint": _cmd_sample_joint,
    "bench": _cmd_bench,
    "verify": _cmd_verify,
    "tabulate-envelope": _cmd_tabulate_envelope,
    "tabulate-squeeze": _cmd_tabulate_squeeze,
    "oracle": _cmd_oracle,
}


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        return _COMMANDS[args.command](args)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (BudgetError, ConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except GuegenError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
