"""Command-line front end.

Every subcommand accepts ``--config FILE`` (JSON whose keys are the long
option names with dashes replaced by underscores); explicit flags override
the file. Output goes to ``--output`` or standard output.
"""

import argparse
import json
import sys

import numpy as np

from . import analysis, clda, performance
from .channel import RunawayChannelError, monte_carlo_arq
from .codes import CapacityError, CodeParameterError, parse_code
from .weights import weight_distribution

DEFAULTS = {
    "simulate": {"trials": 10000, "seed": 0, "N": "10", "context": "uniform",
                 "selector": "clda", "workers": 1},
    "clda-demo": {"preset": "example1"},
    "bound": {"N": "10"},
    "paverage": {"N": "2", "context": "uniform"},
}


class UsageError(ValueError):
    pass


def parse_grid(text):
    """``start:stop:count`` with both ends included, or a comma list of values."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError("grid must be start:stop:count, got %r" % text)
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        if count < 1:
            raise UsageError("grid count must be positive")
        return [float(v) for v in np.linspace(start, stop, count)]
    return [float(v) for v in text.split(",") if v]


def _p_values(args):
    if args.p is not None:
        grid = parse_grid(str(args.p))
    elif args.p_grid is not None:
        grid = parse_grid(str(args.p_grid))
    else:
        raise UsageError("need --p or --p-grid")
    for p in grid:
        if not 0.0 <= p <= 0.5:
            raise UsageError("p must lie in [0, 0.5], got %r" % p)
    return grid


def parse_context(text, M=None):
    """``uniform``, ``cyclic``, ``cyclic:SEED``, ``random:SEED``, ``example1`` or a JSON path."""
    name, _, arg = text.partition(":")
    if name == "example1":
        return clda.example1_context()
    if name in ("uniform", "cyclic", "random"):
        if M is None:
            raise UsageError("context %r needs a code to fix the number of states" % text)
        if name == "uniform":
            return clda.uniform_context(M)
        if name == "cyclic":
            return clda.cyclic_context(M, seed=int(arg) if arg else None)
        return clda.random_context(M, int(arg) if arg else 0)
    return clda.load_context(text)


def _emit(text, args):
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj):
    return json.dumps(obj, indent=2) + "\n"


def cmd_analyze(args):
    code = parse_code(args.code)
    rows = analysis.sweep(weight_distribution(code), _p_values(args))
    _emit(analysis.sweep_csv(rows), args)


def cmd_simulate(args):
    code = parse_code(args.code)
    trials = int(args.trials)
    if trials < 1:
        raise UsageError("--trials must be at least 1")
    (p,) = _p_values(args)[:1]
    seed = int(args.seed)
    dist = weight_distribution(code)
    if args.kind == "arq":
        rep = monte_carlo_arq(code, p, trials, seed, workers=int(args.workers)).to_dict()
        ref = analysis.arq_metrics(dist, p)
        rep["reference"] = {"Pe_arq": ref.Pe_arq,
                            "P_list_share": ref.P_b,
                            "mean_retransmissions": None if p == 0 else
                            performance.p_retrans(dist, p) / (1 - performance.p_retrans(dist, p)),
                            "retransmission_rate": performance.p_retrans(dist, p)}
    else:
        N = int(str(args.N).split(",")[0])
        ctx = parse_context(args.context, code.size)
        rep = performance.simulate_clda(code, ctx, p, N, trials, seed,
                                        selector=args.selector).to_dict()
        rep["reference"] = {"in_list_probability": performance.in_list_probability(dist, p, N)}
    _emit(_dump(rep), args)


def cmd_clda_demo(args):
    if args.context:
        ctx = parse_context(args.context)
        if not args.lists:
            raise UsageError("--context needs --lists (JSON file with a list of lists)")
        with open(args.lists) as fh:
            lists = json.load(fh)
    elif args.preset == "example1":
        ctx, lists = clda.example1_context(), clda.example1_lists()
    else:
        raise UsageError("unknown preset %r" % args.preset)
    if args.N is not None:
        lists = lists[:int(args.N)]
    F, trace = clda.clda_select(ctx, lists)
    out = trace.to_dict()
    out["T"] = [[float("%.12g" % v) for v in row] for row in trace.T]
    if args.check_oracle:
        G = clda.exhaustive_select(ctx, lists)
        same = np.isclose(clda.sentence_weight(ctx, G, log=True),
                          clda.sentence_weight(ctx, F, log=True), rtol=1e-9, atol=0)
        out["oracle"] = "MATCH" if same else "MISMATCH"
    _emit(_dump(out), args)
    if args.check_oracle:
        print("oracle: %s" % out["oracle"], file=sys.stderr)


def cmd_bound(args):
    code = parse_code(args.code)
    dist = weight_distribution(code)
    Ns = [int(v) for v in str(args.N).split(",")]
    rows = performance.bound_sweep(code, dist, _p_values(args), Ns,
                                   assume_singleton=bool(args.singleton))
    _emit(performance.bound_csv(rows), args)


def cmd_paverage(args):
    code = parse_code(args.code)
    ctx = parse_context(args.context, code.size)
    N = int(str(args.N).split(",")[0])
    out = []
    for p in _p_values(args):
        r = performance.p_average(code, ctx, N, p)
        out.append({"p": p, "N": N, "P_average": r.value, "tie_rule": r.tie_rule})
    _emit(_dump(out), args)


def build_parser():
    ap = argparse.ArgumentParser(prog="arqlist", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, code=True, grid=True):
        p.add_argument("--config", help="JSON file with default option values")
        p.add_argument("--output", "-o", help="write here instead of stdout")
        if code:
            p.add_argument("--code", help="hamming:M, rm:R,M, rep:N or a code JSON file")
        if grid:
            p.add_argument("--p", help="crossover probability (or start:stop:count)")
            p.add_argument("--p-grid", dest="p_grid", help="start:stop:count, inclusive")

    p = sub.add_parser("analyze", help="closed-form ARQ metrics over p")
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("simulate", help="Monte Carlo of ARQ or of context selection")
    p.add_argument("kind", choices=("arq", "clda"))
    common(p)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--N")
    p.add_argument("--context")
    p.add_argument("--selector", choices=("clda", "exhaustive"))
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("clda-demo", help="dump the selection tables for a preset or given lists")
    common(p, code=False, grid=False)
    p.add_argument("--preset")
    p.add_argument("--context")
    p.add_argument("--lists")
    p.add_argument("--N")
    p.add_argument("--check-oracle", dest="check_oracle", action="store_true", default=None)
    p.set_defaults(func=cmd_clda_demo)

    p = sub.add_parser("bound", help="lower bound on correct selection over (p, N)")
    common(p)
    p.add_argument("--N")
    p.add_argument("--singleton", action="store_true", default=None)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("paverage", help="average correct-selection probability (brute force)")
    common(p)
    p.add_argument("--context")
    p.add_argument("--N")
    p.set_defaults(func=cmd_paverage)
    return ap


def _apply_config(args):
    conf = {}
    if getattr(args, "config", None):
        with open(args.config) as fh:
            conf = json.load(fh)
    defaults = DEFAULTS.get(args.command, {})
    for key, val in vars(args).items():
        if val is None:
            if key in conf:
                setattr(args, key, conf[key])
            elif key in defaults:
                setattr(args, key, defaults[key])
    if hasattr(args, "code") and args.command != "clda-demo" and not args.code:
        raise UsageError("--code is required")


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        _apply_config(args)
        args.func(args)
    except (UsageError, CodeParameterError, CapacityError, clda.ContextError,
            ValueError, OSError) as exc:
        print("arqlist: error: %s" % exc, file=sys.stderr)
        return 2
    except RunawayChannelError as exc:
        print("arqlist: error: %s" % exc, file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
