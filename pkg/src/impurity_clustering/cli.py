"""Command-line entry point.

Exit codes: 0 success, 1 verification failure, 2 malformed or invalid input,
3 exact search over budget.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

from . import io
from .channel import design_quantizer
from .core import Clustering, clustering_impurity
from .errors import DomainError, ParseError, ResourceError
from .graphs import random_4_regular
from .reductions import (
    build_trace,
    generate_hard_instance,
    normalize_minimal_cover,
    read_bundle,
    reduce_r3,
    star_decomposition,
    write_bundle,
)
from .solvers import DEFAULT_BUDGET, solve
from .verify import SUITES, run_suite

EXIT_VERIFY_FAIL = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3


INPUTS = {
    "impurity": ("instance", "assignment"),
    "solve": ("instance",),
    "quantize": ("channel",),
    "reduce": ("graph",),
    "gen-hard": (),
    "decompose": ("bundle", "cover"),
    "verify": (),
}


@dataclass
class Config:
    subcommand: str
    inputs: tuple = ()
    k: int | None = None
    method: str = "exact"
    seed: int = 0
    restarts: int = 10
    max_iters: int = 100
    tol: float = 1e-9
    output: str | None = None
    budget: int = DEFAULT_BUDGET
    stage: str | None = None
    n: int | None = None
    epsilon: float | None = None
    suite: str = "all"
    p_max: int = 7

    @classmethod
    def from_argv(cls, argv=None) -> "Config":
        ns = vars(build_parser().parse_args(argv))
        inputs = tuple(ns.pop(name) for name in INPUTS[ns["subcommand"]])
        return cls(inputs=inputs, **ns)


def _positive_int(s):
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {s}")
    return v


def _nonneg_int(s):
    v = int(s)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {s}")
    return v


def _positive_float(s):
    v = float(s)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {s}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="impurity-clustering", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="subcommand", required=True)

    def common(sp, k_required=False):
        sp.add_argument("--out", dest="output", help="write here instead of stdout")
        sp.add_argument("--seed", type=_nonneg_int, default=0)
        if k_required:
            sp.add_argument("--k", type=_positive_int, required=True)

    sp = sub.add_parser("impurity", help="impurity of an assignment")
    sp.add_argument("instance")
    sp.add_argument("assignment", help="label line or solve output")
    sp.add_argument("--out", dest="output")

    sp = sub.add_parser("solve", help="minimum-impurity clustering")
    sp.add_argument("instance")
    common(sp, k_required=True)
    sp.add_argument("--method", choices=["exact", "lloyd", "multistart"], default="exact")
    sp.add_argument("--restarts", type=_positive_int, default=10)
    sp.add_argument("--iters", dest="max_iters", type=_positive_int, default=100)
    sp.add_argument("--tol", type=_positive_float, default=1e-9)
    sp.add_argument("--budget", type=_positive_int, default=DEFAULT_BUDGET)

    sp = sub.add_parser("quantize", help="quantizer for a channel")
    sp.add_argument("channel")
    common(sp, k_required=True)
    sp.add_argument("--method", choices=["exact", "lloyd"], default="exact")
    sp.add_argument("--restarts", type=_positive_int, default=10)
    sp.add_argument("--iters", dest="max_iters", type=_positive_int, default=100)
    sp.add_argument("--budget", type=_positive_int, default=DEFAULT_BUDGET)

    sp = sub.add_parser("reduce", help="run the reduction on a 4-regular graph")
    sp.add_argument("graph")
    common(sp)
    sp.add_argument("--stage", choices=["r1", "r2", "r3"], required=True)

    sp = sub.add_parser("gen-hard", help="write a hard-instance bundle")
    sp.add_argument("--n", type=_positive_int, required=True, help="vertices of the 4-regular graph")
    sp.add_argument("--k", type=_positive_int, required=True)
    sp.add_argument("--epsilon", type=_positive_float, required=True)
    sp.add_argument("--seed", type=_nonneg_int, default=0)
    sp.add_argument("--out", dest="output", required=True, help="bundle directory")

    sp = sub.add_parser("decompose", help="star clustering from a minimal cover")
    sp.add_argument("bundle")
    sp.add_argument("cover", help="one line of vertex ids of G")
    sp.add_argument("--out", dest="output")

    sp = sub.add_parser("verify", help="brute-force checks of the bounds")
    sp.add_argument("--suite", choices=sorted(SUITES), default="all")
    sp.add_argument("--p-max", type=_positive_int, default=7)
    sp.add_argument("--seed", type=_nonneg_int, default=0)
    sp.add_argument("--out", dest="output", default=".", help="directory for counterexample files")
    return p


def _emit(text: str, output):
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _impurity(a):
    inst = io.read_instance(a.inputs[0])
    c = io.read_assignment(a.inputs[1])
    if len(c.assignment) != inst.n:
        raise DomainError(f"assignment has {len(c.assignment)} labels, instance has {inst.n} vectors")
    _emit(io.fmt(clustering_impurity(inst, c)) + "\n", a.output)
    return 0


def _solve(a):
    inst = io.read_instance(a.inputs[0])
    res = solve(inst, a.k, a.method, seed=a.seed, restarts=a.restarts, max_iters=a.max_iters,
                tol=a.tol, budget=a.budget)
    _emit(io.format_solve_result(res.objective, res.clustering), a.output)
    return 0


def _quantize(a):
    ch = io.read_channel(a.inputs[0])
    des = design_quantizer(ch, a.k, a.method, seed=a.seed, restarts=a.restarts,
                           max_iters=a.max_iters, budget=a.budget)
    _emit(io.format_labels(des.quantizer.map) + f"mi={io.fmt(des.mi)} delta={io.fmt(des.delta)}\n", a.output)
    return 0


def _reduce(a):
    g = io.read_graph(a.inputs[0])
    trace = build_trace(g, a.seed)
    if a.stage == "r1":
        text = io.format_graph(trace.h)
    elif a.stage == "r2":
        text = io.format_graph(trace.g)
    else:
        text = io.format_instance(reduce_r3(trace.g))
    _emit(text, a.output)
    return 0


def _gen_hard(a):
    g_prime = random_4_regular(a.n, a.seed)
    hi = generate_hard_instance(g_prime, a.k, a.epsilon, a.seed)
    write_bundle(hi, a.output)
    return 0


def _decompose(a):
    hi = read_bundle(a.inputs[0])
    cover = io.read_labels(a.inputs[1])
    s = normalize_minimal_cover(hi.trace, cover)
    c: Clustering = star_decomposition(hi.trace, s)
    _emit(io.format_solve_result(clustering_impurity(hi.instance, c), c), a.output)
    return 0


def _verify(a):
    status = 0
    for rep in run_suite(a.suite, a.p_max, a.seed):
        where = None
        if not rep.passed:
            out = Path(a.output)
            out.mkdir(parents=True, exist_ok=True)
            where = out / f"{rep.name}.counterexample.txt"
            where.write_text(f"{rep.name}\n{rep.parameters}\n{rep.counterexample!r}\n")
            status = EXIT_VERIFY_FAIL
        print(rep.line(where))
    return status


HANDLERS = {
    "impurity": _impurity,
    "solve": _solve,
    "quantize": _quantize,
    "reduce": _reduce,
    "gen-hard": _gen_hard,
    "decompose": _decompose,
    "verify": _verify,
}


def main(argv=None) -> int:
    cfg = Config.from_argv(argv)
    try:
        return HANDLERS[cfg.subcommand](cfg)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET


run = main

if __name__ == "__main__":
    sys.exit(main())
