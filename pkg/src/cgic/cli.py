"""Command-line entry point.

Environment overrides (flags win): ``CGIC_DIRECTIONS``, ``CGIC_SEED``,
``CGIC_OUT``. ``CGIC_DISABLE_NUMBA=1`` selects the pure-numpy kernels.
"""

import argparse
import os
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import verify as verify_mod
from .bounds import bound_value, gaussian_evaluator, inner_constants, inner_region, outer_region
from .channel_model import CompoundChannel, canonicalize
from .det_oracle import DetEvaluator, det_certify
from .errors import CgicError, SpecParseError
from .export import region_pair_csv, region_svg
from .gap import certify
from .inequality_gen import system_for
from .instances import random_channel
from .polytope import ValuedSystem, dual_min
from .rebalance import rebalance
from .specfile import load_channel

COMMANDS = ("region", "gap", "verify", "dual-cert", "rebalance-demo")


def _env_int(name, default):
    v = os.environ.get(name)
    return int(v) if v not in (None, "") else default


def build_parser():
    p = argparse.ArgumentParser(prog="cgic", description="Inner and outer capacity bounds for "
                                "compound interference channels.")
    p.add_argument("--command", required=True, choices=COMMANDS)
    p.add_argument("--channel", help="channel YAML file; region and gap draw a random one from --seed if omitted")
    p.add_argument("--directions", type=int, default=None, help="support directions (default 361)")
    p.add_argument("--out", default=None, help="output directory (default: current directory)")
    p.add_argument("--seed", type=int, default=None, help="seed for randomised runs (default 42)")
    p.add_argument("--a", type=float, default=1.0, help="dual-cert: weight on R1")
    p.add_argument("--b", type=float, default=1.0, help="dual-cert: weight on R2")
    p.add_argument("--vector", help="rebalance-demo: comma-separated layer rates, user 1 then user 2")
    p.add_argument("--full", action="store_true", help="verify: larger sample counts")
    return p


def _load(args):
    if args.channel:
        return load_channel(args.channel)
    return random_channel(np.random.default_rng(args.seed), 2)


def _evaluator(obj):
    if isinstance(obj, CompoundChannel):
        ch = canonicalize(obj)
        return ch.n_states, gaussian_evaluator(ch)
    ch, dist = obj
    return ch.n_states, DetEvaluator(ch, dist)


def cmd_region(args, out):
    n, ev = _evaluator(_load(args))
    system = system_for(n)
    inner = inner_region(system, ev, args.directions)
    outer = outer_region(system, ev, args.directions)
    out.mkdir(parents=True, exist_ok=True)
    (out / "region.csv").write_text(region_pair_csv(inner, outer))
    (out / "region.svg").write_text(region_svg({"inner": inner, "outer": outer}))
    print(f"wrote {out / 'region.csv'} and {out / 'region.svg'}")
    print(f"inner vertices: {len(inner.vertices)}, outer vertices: {len(outer.vertices)}")
    return 0


def cmd_gap(args, out):
    obj = _load(args)
    if isinstance(obj, CompoundChannel):
        rep = certify(obj, args.directions)
    else:
        rep = det_certify(obj[0], obj[1], args.directions)
    text = rep.to_text()
    sys.stdout.write(text)
    if args.out is not None or os.environ.get("CGIC_OUT"):
        out.mkdir(parents=True, exist_ok=True)
        (out / "gap.txt").write_text(text)
    return 0


def cmd_verify(args, out):
    results = verify_mod.suite(args.seed, quick=not args.full)
    if args.channel:
        obj = load_channel(args.channel)
        if isinstance(obj, CompoundChannel):
            rep = certify(obj, args.directions)
            name = "channel gap"
        else:
            rep = det_certify(obj[0], obj[1], args.directions)
            name = "channel exactness"
        results.append(verify_mod.CheckResult(name, rep.certified, rep.per_direction_max_gap, 0.0, 1,
                                              rep.failures))
    failed = 0
    for r in results:
        print(r.line())
        for d in r.detail[:5]:
            print(f"    {d}")
        failed += not r.passed
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 1 if failed else 0


def cmd_dual_cert(args, out):
    n, ev = _evaluator(_load(args))
    system = system_for(n)
    rin = inner_constants(system, ev)
    cert = dual_min(ValuedSystem(system, rin), args.a, args.b)
    print(f"direction: ({args.a:g}, {args.b:g})")
    print(f"c_star: {cert.objective:.9g}")
    print(f"omega: {cert.omega[0]:.9g} {cert.omega[1]:.9g}")
    for tag, w in zip(system.tags, cert.weights):
        if w > 1e-12:
            print(f"  {tag}: {w:.9g}")
    bv = bound_value(system, ev, args.a, args.b)
    print(f"omega-free c_in: {bv.c_in:.9g}")
    print(f"omega-free c_out: {bv.c_out:.9g}")
    print(f"primal point: {' '.join(f'{v:.9g}' for v in cert.point)}")
    return 0


def cmd_rebalance_demo(args, out):
    if not args.vector:
        raise CgicError("rebalance-demo needs --vector")
    try:
        v = [Fraction(s.strip()) for s in args.vector.split(",")]
    except ValueError as exc:
        raise CgicError(f"bad --vector: {exc}") from None
    if len(v) % 2 or len(v) < 4:
        raise CgicError("--vector needs 2(N+1) components")
    n = len(v) // 2 - 1
    system = system_for(n)
    if args.channel:
        _, ev = _evaluator(load_channel(args.channel))
        rhs, check = system.evaluate(ev), True
    else:
        rhs, check = None, False
    names = system.names
    print("input:  " + "  ".join(f"{nm}={float(x):g}" for nm, x in zip(names, v)))
    trace = []
    res = rebalance(v, system, rhs, check=check, trace=trace)
    m = n + 1
    for user, step, levels in trace:
        cols = names[(user - 1) * m:user * m]
        print(f"user {user} step {step}: " + "  ".join(f"{nm}={float(x):g}" for nm, x in zip(cols, levels)))
    print("output: " + "  ".join(f"{nm}={float(x):g}" for nm, x in zip(names, res)))
    print(f"user totals: {float(sum(res[:m])):g} {float(sum(res[m:])):g}")
    return 0


_DISPATCH = {
    "region": cmd_region,
    "gap": cmd_gap,
    "verify": cmd_verify,
    "dual-cert": cmd_dual_cert,
    "rebalance-demo": cmd_rebalance_demo,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.directions is None:
        args.directions = _env_int("CGIC_DIRECTIONS", 361)
    if args.seed is None:
        args.seed = _env_int("CGIC_SEED", 42)
    if args.directions < 3:
        print("error: --directions must be at least 3", file=sys.stderr)
        return 2
    out = Path(args.out or os.environ.get("CGIC_OUT") or ".")
    try:
        return _DISPATCH[args.command](args, out)
    except SpecParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CgicError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
