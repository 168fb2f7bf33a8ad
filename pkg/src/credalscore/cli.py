"""Command-line front end.

Exit codes: 0 success, 2 empty or inconsistent knowledge, 3 conditioning
on a null event, 4 input error.  Reports go to stdout (a plain table, or
JSON with ``--json``); diagnostics go to stderr.  Every number is rounded
to 12 significant digits before it is printed in either form, so the two
forms carry identical values.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Optional, Sequence

import numpy as np

from . import belief as bf
from . import credal, inference, infosys, scoring
from .errors import EmptySetError, NullEventError, TotalConflictError, ValidationError
from .optim import CgOptions
from .problem import ProblemError, ProblemSpec, load_problem

EXIT_OK, EXIT_EMPTY, EXIT_NULL, EXIT_INPUT = 0, 2, 3, 4


class CommandError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def num(x: float) -> float:
    """Round to the 12 significant digits used in every report."""
    x = float(x)
    if not math.isfinite(x):
        return x
    return float(f"{x:.12g}")


def fmt(x: Any) -> str:
    if isinstance(x, bool) or x is None:
        return json.dumps(x)
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def _clean(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (float, np.floating)):
        return num(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def render(report: dict) -> str:
    """Plain-text rendering: scalars as ``key  value`` lines, lists of
    records as aligned tables."""
    lines: list[str] = []
    width = max((len(k) for k, v in report.items() if not _is_table(v)), default=0)
    for key, value in report.items():
        if _is_table(value):
            lines.append(f"{key}:")
            lines.extend("  " + row for row in _table(value))
        elif isinstance(value, list):
            lines.append(f"{key.ljust(width)}  " + " ".join(fmt(v) for v in value))
        elif isinstance(value, dict):
            lines.append(f"{key}:")
            lines.extend("  " + row for row in render(value).splitlines())
        else:
            lines.append(f"{key.ljust(width)}  {fmt(value)}")
    return "\n".join(lines)


def _is_table(value: Any) -> bool:
    return isinstance(value, list) and bool(value) and all(isinstance(v, dict) for v in value)


def _table(rows: list[dict]) -> list[str]:
    cols = list(rows[0])
    cells = [[_cell(r.get(c)) for c in cols] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
    out = ["  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip()]
    out += ["  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip() for row in cells]
    return out


def _cell(v: Any) -> str:
    if isinstance(v, list):
        return "[" + " ".join(fmt(x) for x in v) + "]"
    return fmt(v)


# ---------------------------------------------------------------------------
# helpers


def _rule(name: Optional[str], spec: Optional[ProblemSpec]) -> scoring.ScoreRule:
    name = name or (spec.score if spec else None) or "log"
    name = {"quad": "quadratic"}.get(name, name)
    if name == "log":
        return scoring.log_score()
    if name == "quadratic":
        return scoring.quadratic_score()
    if spec is None or spec.payoff is None:
        raise ProblemError("decisional score needs a 'payoff' block in the problem file")
    return scoring.decisional_score(spec.payoff)


def _opts(args) -> CgOptions:
    return CgOptions(gap_tol=args.tol) if args.tol is not None else CgOptions()


def _event(frame, text: Optional[str]):
    if not text:
        return None
    names = [t.strip() for t in text.split(",") if t.strip()]
    for n in names:
        if n not in frame.atoms:
            raise ProblemError(f"--event: unknown atom {n!r}")
    return frame.event(names)


def _atom_bounds(k, frame) -> list[dict]:
    rows = []
    for i, name in enumerate(frame.atoms):
        lo, hi = credal.prob_bounds(k, frame.atom(i))
        rows.append({"atom": name, "lower": lo, "upper": hi})
    return rows


def _dist(q) -> dict:
    return {a: float(v) for a, v in zip(q.frame.atoms, q.p)}


def _require(k) -> None:
    if credal.is_empty(k):
        raise EmptySetError("empty knowledge set: the constraints admit no distribution")


def _problem_set(path: str):
    spec = load_problem(path)
    if spec.kind == "infosys":
        raise ProblemError(f"{path}: use the 'infosys' subcommands for information systems")
    return spec, spec.credal_set()


# ---------------------------------------------------------------------------
# commands


def cmd_infer(args) -> dict:
    spec, k = _problem_set(args.file)
    rule = _rule(args.score, spec)
    if rule.kind == scoring.DECISIONAL:
        raise ProblemError("the min-score rule needs a log or quadratic score; use 'game' for decisional")
    _require(k)
    est = inference.min_score_estimate(k, rule, _opts(args))
    return {"command": "infer", "score": rule.kind, "estimate": _dist(est.q),
            "H": est.h_value, "certificate_gap": est.certificate_gap}


def cmd_bounds(args) -> dict:
    spec, k = _problem_set(args.file)
    _require(k)
    e = _event(spec.frame, args.event)
    if e is None:
        return {"command": "bounds", "atoms": _atom_bounds(k, spec.frame)}
    lo, hi = credal.prob_bounds(k, e)
    return {"command": "bounds", "event": e.names(), "lower": lo, "upper": hi, "width": hi - lo}


def cmd_game(args) -> dict:
    spec, k = _problem_set(args.file)
    rule = _rule(args.score, spec)
    _require(k)
    gb = inference.game_bounds(k, rule, _opts(args))
    report = {"command": "game", "score": rule.kind, "lower": gb.lower, "upper": gb.upper}
    if rule.kind == scoring.DECISIONAL:
        w, value = inference.decisional_maxmin(k, rule.payoff)
        report["maxmin_value"] = value
        report["mixed_action"] = [{"action": a, "weight": float(x)}
                                  for a, x in zip(rule.payoff.actions, w)]
    return report


def cmd_update_knowledge(args) -> dict:
    spec1, k1 = _problem_set(args.first)
    spec2, k2 = _problem_set(args.second)
    if spec1.frame != spec2.frame:
        raise ProblemError("both files must declare the same frame")
    k = credal.intersect(k1, k2)
    if credal.is_empty(k):
        raise EmptySetError("inconsistent evidence: the two knowledge sets do not intersect "
                            "(consistency check of knowledge updating); one body of evidence is wrong")
    rows = []
    for i, name in enumerate(spec1.frame.atoms):
        e = spec1.frame.atom(i)
        rows.append({"atom": name,
                     "before": list(credal.prob_bounds(k1, e)) if not credal.is_empty(k1) else None,
                     "added": list(credal.prob_bounds(k2, e)) if not credal.is_empty(k2) else None,
                     "updated": list(credal.prob_bounds(k, e))})
    return {"command": "update knowledge", "consistent": True, "atoms": rows}


def cmd_update_observe(args) -> dict:
    spec, k = _problem_set(args.file)
    e = _event(spec.frame, args.event)
    if e is None:
        raise ProblemError("--event is required for 'update observe'")
    _require(k)
    kc = credal.condition_set(k, e, allow_boundary=args.allow_boundary)
    return {"command": "update observe", "event": e.names(),
            "generators": [_dist(g) for g in kc.vertices()],
            "atoms": _atom_bounds(kc, kc.frame)}


def _mass_rows(m) -> list[dict]:
    return [{"focal": e.names(), "mass": v} for e, v in zip(m.focal_events(), m.masses.values())]


def _belief_spec(path: str):
    spec = load_problem(path)
    if spec.kind != "belief":
        raise ProblemError(f"{path}: expected a 'belief' problem")
    return spec


def cmd_belief_tocredal(args) -> dict:
    spec = _belief_spec(args.file)
    k = bf.belief_to_credal(spec.belief)
    return {"command": "belief tocredal", "constraints": len(k.constraints),
            "vertices": [_dist(v) for v in k.vertices()], "atoms": _atom_bounds(k, spec.frame)}


def cmd_belief_combine(args) -> dict:
    s1, s2 = _belief_spec(args.first), _belief_spec(args.second)
    if s1.frame != s2.frame:
        raise ProblemError("both files must declare the same frame")
    kappa = bf.conflict(s1.belief, s2.belief)
    m = bf.dempster_combine(s1.belief, s2.belief)
    return {"command": "belief combine", "conflict": kappa, "mass": _mass_rows(m)}


def cmd_belief_compare(args) -> dict:
    s1, s2 = _belief_spec(args.first), _belief_spec(args.second)
    if s1.frame != s2.frame:
        raise ProblemError("both files must declare the same frame")
    rep = bf.compare_updating(s1.belief, s2.belief)
    return {
        "command": "belief compare",
        "conflict": rep.kappa,
        "dempster_defined": rep.dempster_mass is not None,
        "intersection_inconsistent": rep.inconsistent,
        "atoms": [{"atom": r.atom,
                   "dempster": list(r.dempster) if r.dempster else None,
                   "intersection": list(r.intersection) if r.intersection else None}
                  for r in rep.atoms],
    }


def cmd_infosys_infer(args) -> dict:
    spec = load_problem(args.file)
    if spec.kind != "infosys":
        raise ProblemError(f"{args.file}: expected an 'infosys' problem")
    rule = _rule(args.score, spec)
    if rule.kind == scoring.DECISIONAL:
        raise ProblemError("information-system inference needs a log or quadratic score")
    system = spec.system if spec.system is not None else infosys.binary_family(spec.channel)
    est = infosys.min_score_joint(system, rule, _opts(args))
    J = est.q.p.reshape(system.frame.shape)
    return {"command": "infosys infer", "score": rule.kind, "joint": _dist(est.q),
            "hypothesis_marginal": dict(zip(system.frame_e.atoms, map(float, J.sum(axis=1)))),
            "H_E_given_I": est.h_value, "certificate_gap": est.certificate_gap}


def cmd_infosys_eq3(args) -> dict:
    ch = infosys.BinaryChannel(args.q, args.r, 1)
    p = infosys.eq3_solve(ch.q, ch.r)
    res = 0.0 if ch.q == ch.r else infosys.eq3_residual(p, ch.q, ch.r)
    return {"command": "infosys eq3", "q": ch.q, "r": ch.r, "prior": p, "residual": res}


def cmd_infosys_prior_study(args) -> dict:
    base = infosys.BinaryChannel(args.q, args.r, 1)
    ns = args.n or [1, 2, 3]
    with ThreadPoolExecutor() as pool:
        priors = list(pool.map(lambda n: infosys.best_prior(base.with_n(n)), ns))
    return {"command": "infosys prior-study", "q": base.q, "r": base.r,
            "priors": [{"n": n, "prior": p} for n, p in zip(ns, priors)]}


def cmd_infosys_transfer(args) -> dict:
    rep = infosys.posterior_transfer_gap(infosys.BinaryChannel(args.q, args.r, 1))
    return {"command": "infosys transfer", "p1": rep.p1, "p2": rep.p2,
            "predictive_transfer": rep.predictive_transfer,
            "predictive_joint": rep.predictive_joint, "gap": rep.gap}


def cmd_check_proper(args) -> dict:
    spec = load_problem(args.problem) if args.problem else None
    name = args.score or (spec.score if spec else None) or "log"
    if name == "decisional" and spec is None:
        rng = np.random.default_rng(args.seed)
        rule = scoring.decisional_score(scoring.PayoffMatrix.from_array(rng.normal(size=(3, 4))))
    else:
        rule = _rule(name, spec)
    rep = scoring.check_proper(rule, args.trials, args.seed)
    return {"command": "check proper", "score": rule.kind, "trials": rep.trials,
            "violations": rep.violations, "max_violation": rep.max_violation}


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float, default=None, help="optimizer gap tolerance")

    scored = argparse.ArgumentParser(add_help=False)
    scored.add_argument("--score", choices=["log", "quad", "decisional"])

    p = argparse.ArgumentParser(prog="credalscore",
                                description="Inference with knowledge sets and proper scores.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("infer", parents=[common, scored], help="min-score estimate")
    s.add_argument("file")
    s.set_defaults(func=cmd_infer)

    s = sub.add_parser("bounds", parents=[common], help="probability intervals")
    s.add_argument("file")
    s.add_argument("--event")
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("game", parents=[common, scored], help="value bounds of the game against nature")
    s.add_argument("file")
    s.set_defaults(func=cmd_game)

    upd = sub.add_parser("update", help="knowledge or information updating").add_subparsers(
        dest="mode", required=True)
    s = upd.add_parser("knowledge", parents=[common], help="intersect two knowledge sets")
    s.add_argument("first")
    s.add_argument("second")
    s.set_defaults(func=cmd_update_knowledge)
    s = upd.add_parser("observe", parents=[common], help="condition on an observed event")
    s.add_argument("file")
    s.add_argument("--event")
    s.add_argument("--allow-boundary", action="store_true")
    s.set_defaults(func=cmd_update_observe)

    bel = sub.add_parser("belief", help="belief functions").add_subparsers(dest="mode", required=True)
    s = bel.add_parser("tocredal", parents=[common])
    s.add_argument("file")
    s.set_defaults(func=cmd_belief_tocredal)
    for name, func in (("combine", cmd_belief_combine), ("compare", cmd_belief_compare)):
        s = bel.add_parser(name, parents=[common])
        s.add_argument("first")
        s.add_argument("second")
        s.set_defaults(func=func)

    info = sub.add_parser("infosys", help="information systems").add_subparsers(dest="mode", required=True)
    s = info.add_parser("infer", parents=[common, scored])
    s.add_argument("file")
    s.set_defaults(func=cmd_infosys_infer)
    for name, func in (("eq3", cmd_infosys_eq3), ("prior-study", cmd_infosys_prior_study),
                       ("transfer", cmd_infosys_transfer)):
        s = info.add_parser(name, parents=[common])
        s.add_argument("--q", type=float, required=True)
        s.add_argument("--r", type=float, required=True)
        if name == "prior-study":
            s.add_argument("--n", type=int, nargs="+")
        s.set_defaults(func=func)

    chk = sub.add_parser("check", help="sanity checks").add_subparsers(dest="mode", required=True)
    s = chk.add_parser("proper", parents=[common, scored])
    s.add_argument("--trials", type=int, default=10_000)
    s.add_argument("--problem", help="problem file supplying a payoff matrix")
    s.set_defaults(func=cmd_check_proper)
    return p


def run_command(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        report = _clean(args.func(args))
    except (EmptySetError, TotalConflictError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_EMPTY
    except NullEventError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_NULL
    except (ProblemError, ValidationError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    if args.json:
        print(json.dumps(report, indent=2), file=stdout)
    else:
        print(render(report), file=stdout)
    return EXIT_OK


def main() -> None:
    sys.exit(run_command())
