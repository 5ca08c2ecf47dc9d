"""Command-line interface.

    opticbm optimize  [--json] scenario.json
    opticbm evaluate  [--json] --threshold T scenario.json
    opticbm simulate  [--json] [--cycles N] [--seed S] scenario.json
    opticbm sweep     [--grid N] scenario.json
    opticbm table     [--check] [--csv]

Scenario files are flat JSON objects with the model parameters
(mu1, mu2, lambda, tau, c_c, c_p_so, c_p_uso) plus optional "policy"
and "sim" blocks; see README for the schema.

Exit codes: 0 success, 2 validation or parse error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import (
    NEVER,
    DomainError,
    ModelParams,
    ThresholdPolicy,
    UnsupportedPolicy,
    ValidationError,
    validate_params,
)
from .cost import average_cost, corrective_only_cost, so_only_cost
from .policy import Regime, optimal_policy
from .sim import SimConfig, simulate
from .verifier import NoConvergence, f_difference


class ParseError(ValueError):
    pass


# Published long-run average costs: (c_p_so, tau, lambda) ->
# (a_opt, a_so, a_alw). For tau=1 the optimal policy coincides with
# SO-only (t* >= tau), hence a_opt == a_so there.
PUBLISHED_TABLE = {
    (4000, 1, 0.1): (2840.41, 2840.41, 2885.56),
    (4000, 1, 0.5): (2840.41, 2840.41, 3042.07),
    (4000, 1, 1): (2840.41, 2840.41, 3194.24),
    (4000, 1, 2): (2840.41, 2840.41, 3401.88),
    (4000, 2, 0.1): (3384.70, 3384.86, 3422.03),
    (4000, 2, 0.5): (3384.09, 3384.86, 3538.91),
    (4000, 2, 1): (3383.38, 3384.86, 3636.35),
    (4000, 2, 2): (3382.15, 3384.86, 3747.82),
    (4000, 4, 0.1): (3802.49, 3807.90, 3823.32),
    (4000, 4, 0.5): (3784.63, 3807.90, 3867.21),
    (4000, 4, 1): (3768.42, 3807.90, 3899.32),
    (4000, 4, 2): (3747.68, 3807.90, 3932.53),
    (6500, 1, 0.1): (3378.56, 3378.56, 3403.48),
    (6500, 1, 0.5): (3378.56, 3378.56, 3489.66),
    (6500, 1, 1): (3378.56, 3378.56, 3573.11),
    (6500, 1, 2): (3378.56, 3378.56, 3686.18),
    (6500, 2, 0.1): (3719.49, 3720.28, 3738.77),
    (6500, 2, 0.5): (3716.57, 3720.28, 3796.18),
    (6500, 2, 1): (3713.40, 3720.28, 3842.96),
    (6500, 2, 2): (3708.32, 3720.28, 3894.71),
    (6500, 4, 0.1): (3979.00, 3985.81, 3989.58),
    (6500, 4, 0.5): (3956.81, 3985.81, 3998.72),
    (6500, 4, 1): (3937.06, 3985.81, 4003.48),
    (6500, 4, 2): (3912.27, 3985.81, 4006.06),
    (9000, 1, 0.1): (3792.57, 3792.57, 3797.66),
    (9000, 1, 0.5): (3792.57, 3792.57, 3816.41),
    (9000, 1, 1): (3792.57, 3792.57, 3836.68),
    (9000, 1, 2): (3792.57, 3792.57, 3868.78),
    (9000, 2, 0.1): (3916.43, 3916.70, 3921.39),
    (9000, 2, 0.5): (3915.40, 3916.70, 3937.26),
    (9000, 2, 1): (3914.21, 3916.70, 3951.98),
    (9000, 2, 2): (3912.11, 3916.70, 3970.48),
    (9000, 4, 0.1): (4052.18, 4055.71, 4055.51),
    (9000, 4, 0.5): (4039.84, 4055.71, 4053.46),
    (9000, 4, 1): (4027.59, 4055.71, 4049.58),
    (9000, 4, 2): (4010.20, 4055.71, 4041.61),
}
TABLE_C_P_SO = (4000, 6500, 9000)
TABLE_TAU = (1, 2, 4)
TABLE_LAMBDA = (0.1, 0.5, 1, 2)
TABLE_BASE = dict(mu1=1.0, mu2=0.4, c_c=15000.0, c_p_uso=10000.0)


@dataclass(frozen=True)
class Scenario:
    params: ModelParams
    policy: ThresholdPolicy
    sim: SimConfig


def _resolve_policy(params: ModelParams, spec) -> ThresholdPolicy:
    if spec is None or spec == "optimal":
        return optimal_policy(params).policy
    if spec == "never":
        return ThresholdPolicy.never()
    if not isinstance(spec, dict):
        raise ParseError(f"policy: expected 'optimal', 'never' or an object, got {spec!r}")
    replace_at_so = bool(spec.get("replace_at_so", True))
    thr = spec.get("uso_threshold", "never")
    if thr == "never":
        thr = NEVER
    else:
        try:
            thr = float(thr)
        except (TypeError, ValueError):
            raise ParseError(f"policy.uso_threshold: expected a number or 'never', got {thr!r}")
    return ThresholdPolicy(replace_at_so=replace_at_so, uso_threshold=thr)


def load_scenario(path: str) -> Scenario:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as e:
        raise ParseError(f"{path}: {e.strerror}")
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}:{e.lineno}:{e.colno}: {e.msg}")
    if not isinstance(raw, dict):
        raise ParseError(f"{path}: scenario must be a JSON object")
    policy_spec = raw.pop("policy", None)
    sim_spec = raw.pop("sim", {})
    params = validate_params(raw)
    policy = _resolve_policy(params, policy_spec)
    if not isinstance(sim_spec, dict):
        raise ParseError(f"{path}: sim block must be an object")
    cfg = SimConfig(
        cycles=int(sim_spec.get("cycles", 100_000)),
        seed=int(sim_spec.get("seed", 12345)),
        warmup_cycles=int(sim_spec.get("warmup_cycles", 0)),
    )
    return Scenario(params, policy, cfg)


def _policy_json(policy: ThresholdPolicy) -> dict:
    thr = policy.uso_threshold
    return {
        "replace_at_so": policy.replace_at_so,
        "uso_threshold": "never" if math.isinf(thr) else thr,
    }


def _cost_json(cb) -> dict:
    return {
        "total": cb.total,
        "corrective": cb.corrective,
        "preventive_uso": cb.preventive_uso,
        "preventive_so": cb.preventive_so,
    }


def _emit(report: dict, as_json: bool, lines):
    if as_json:
        print(json.dumps(report))
    else:
        for line in lines:
            print(line)


def cmd_optimize(args) -> int:
    sc = load_scenario(args.scenario)
    res = optimal_policy(sc.params)
    if res.policy.replace_at_so:
        cost = average_cost(sc.params, res.policy)
    else:
        cost = corrective_only_cost(sc.params)
    report = {
        "regime": res.regime.value,
        "t_star": res.t_star,
        "policy": _policy_json(res.policy),
        "cost": _cost_json(cost),
    }
    _emit(report, args.json, [
        f"regime: {res.regime.value}",
        f"t_star: {res.t_star if res.t_star is not None else '-'}",
        f"policy: replace_at_so={res.policy.replace_at_so} "
        f"uso_threshold={_policy_json(res.policy)['uso_threshold']}",
        f"average cost: {cost.total:.2f} (corrective {cost.corrective:.2f}, "
        f"uso-preventive {cost.preventive_uso:.2f}, so-preventive {cost.preventive_so:.2f})",
    ])
    return 0


def cmd_evaluate(args) -> int:
    sc = load_scenario(args.scenario)
    if not 0.0 <= args.threshold <= sc.params.tau:
        raise DomainError(f"threshold {args.threshold} outside [0, {sc.params.tau}]")
    policy = ThresholdPolicy(replace_at_so=True, uso_threshold=args.threshold)
    cost = average_cost(sc.params, policy)
    report = {"policy": _policy_json(policy), "cost": _cost_json(cost)}
    _emit(report, args.json, [
        f"threshold: {args.threshold}",
        f"average cost: {cost.total:.2f} (corrective {cost.corrective:.2f}, "
        f"uso-preventive {cost.preventive_uso:.2f}, so-preventive {cost.preventive_so:.2f})",
    ])
    return 0


def cmd_simulate(args) -> int:
    sc = load_scenario(args.scenario)
    cfg = SimConfig(
        cycles=args.cycles if args.cycles is not None else sc.sim.cycles,
        seed=args.seed if args.seed is not None else sc.sim.seed,
        warmup_cycles=sc.sim.warmup_cycles,
    )
    rep = simulate(sc.params, sc.policy, cfg)
    report = {
        "policy": _policy_json(sc.policy),
        "cycles": cfg.cycles,
        "seed": cfg.seed,
        "mean_cost_rate": rep.mean_cost_rate,
        "ci_halfwidth": rep.ci_halfwidth,
        "failures": rep.failures,
        "uso_replacements": rep.uso_replacements,
        "so_replacements": rep.so_replacements,
    }
    _emit(report, args.json, [
        f"cycles: {cfg.cycles} (seed {cfg.seed})",
        f"mean cost rate: {rep.mean_cost_rate:.2f} +/- {rep.ci_halfwidth:.2f} (95% CI)",
        f"events: {rep.failures} failures, {rep.uso_replacements} USO replacements, "
        f"{rep.so_replacements} SO replacements",
    ])
    return 0


def cmd_sweep(args) -> int:
    sc = load_scenario(args.scenario)
    if args.grid < 2:
        raise DomainError("--grid must be >= 2")
    ts = np.linspace(0.0, sc.params.tau, args.grid)
    fd = f_difference(sc.params, ThresholdPolicy.so_only(), n=args.grid)
    print("t,average_cost,f_difference")
    for t, d in zip(ts, fd.d):
        cost = average_cost(sc.params, ThresholdPolicy(True, float(t))).total
        print(f"{float(t)!r},{cost!r},{float(d)!r}")
    return 0


def _table_entries():
    """Yield (c_p_so, tau, lam, a_opt, a_so, a_alw, t_star, clamped)."""
    for c_p_so in TABLE_C_P_SO:
        for tau in TABLE_TAU:
            for lam in TABLE_LAMBDA:
                params = ModelParams(lam=float(lam), tau=float(tau),
                                     c_p_so=float(c_p_so), **TABLE_BASE)
                res = optimal_policy(params)
                clamped = res.t_star is not None and res.t_star >= tau
                a_opt = average_cost(params, res.policy).total
                a_so = so_only_cost(params).total
                a_alw = average_cost(params, ThresholdPolicy.always()).total
                yield c_p_so, tau, lam, a_opt, a_so, a_alw, res.t_star, clamped


def cmd_table(args) -> int:
    entries = list(_table_entries())
    if args.csv:
        print("c_p_so,tau,lambda,a_opt,a_so,a_alw,t_star")
        for c_p_so, tau, lam, a_opt, a_so, a_alw, t_star, _ in entries:
            print(f"{c_p_so},{tau},{lam},{a_opt!r},{a_so!r},{a_alw!r},{t_star!r}")
    else:
        for c_p_so in TABLE_C_P_SO:
            block = [e for e in entries if e[0] == c_p_so]
            t_star = block[0][6]
            print(f"c_p_so = {c_p_so}   t* = {t_star:.4f}")
            header = f"{'lambda':>8}"
            for tau in TABLE_TAU:
                header += f" | {'a_opt':>9} {'a_so':>9} {'a_alw':>9} (tau={tau})"
            print(header)
            for lam in TABLE_LAMBDA:
                row = f"{lam:>8}"
                for tau in TABLE_TAU:
                    (_, _, _, a_opt, a_so, a_alw, _, clamped) = next(
                        e for e in block if e[1] == tau and e[2] == lam)
                    note = "*" if clamped else " "
                    row += f" | {a_opt:>8.2f}{note} {a_so:>9.2f} {a_alw:>9.2f}        "
                print(row)
            print("  (* t* >= tau: optimal policy replaces at scheduled opportunities only)")
            print()
    if args.check:
        max_dev = 0.0
        for c_p_so, tau, lam, a_opt, a_so, a_alw, _, _ in entries:
            pub = PUBLISHED_TABLE[(c_p_so, tau, lam)]
            for got, want in zip((a_opt, a_so, a_alw), pub):
                max_dev = max(max_dev, abs(got - want))
        print(f"max absolute deviation from published values: {max_dev:.4f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="opticbm",
        description="Optimal condition-based replacement with scheduled and "
                    "unscheduled maintenance opportunities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def scenario_cmd(name, fn, help):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("scenario", help="scenario JSON file")
        sp.add_argument("--json", action="store_true", help="emit JSON instead of text")
        sp.set_defaults(fn=fn)
        return sp

    scenario_cmd("optimize", cmd_optimize, "derive the optimal policy and its cost")
    sp = scenario_cmd("evaluate", cmd_evaluate, "closed-form cost of a threshold policy")
    sp.add_argument("--threshold", type=float, required=True,
                    help="USO replacement threshold (residual time)")
    sp = scenario_cmd("simulate", cmd_simulate, "Monte Carlo cost estimate")
    sp.add_argument("--cycles", type=int, default=None)
    sp.add_argument("--seed", type=int, default=None)
    sp = scenario_cmd("sweep", cmd_sweep, "CSV of cost and value-gap curves over [0, tau]")
    sp.add_argument("--grid", type=int, default=257, help="number of grid points")
    sp = sub.add_parser("table", help="reproduce the published cost comparison table")
    sp.add_argument("--check", action="store_true",
                    help="compare against the embedded published values")
    sp.add_argument("--csv", action="store_true", help="emit CSV instead of a table")
    sp.set_defaults(fn=cmd_table)
    return parser


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ParseError, ValidationError, DomainError, UnsupportedPolicy, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except NoConvergence as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
