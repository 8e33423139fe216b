"""Command line front end.

Exit status: 0 optimal (or report produced), 2 infeasible, 1 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from .analysis import analyze_flexibility, apply_solution, flexibility_table, format_flexibility_table, sweep_constraint
from .candidates import (
    CandidateFileError,
    CandidateSet,
    candidate_set_from_dict,
    candidate_set_to_dict,
    load_candidates,
)
from .config import ConfigError, RunSettings, load_config
from .ilp_model import ModelConfig, ModelValidationError, build_model
from .solver import OracleLimitError, Status, enumerate_feasible_bruteforce, solve_branch_and_bound
from .text_metrics import EmptyDocumentError, LexiconError, MetricsSummary, load_lexicon, measure_text

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INFEASIBLE = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _rational(q: Fraction) -> str:
    return f"{q} ({float(q):.4f})"


def format_metrics(m: MetricsSummary) -> str:
    return (
        f"W={m.W} S={m.S} F={m.F} avg={m.avg_sentence_length} density={m.lexical_density_ratio}"
        f"  (avg~{float(m.avg_sentence_length):.4f}, density~{float(m.lexical_density_ratio):.4f})"
    )


def _label(key) -> str:
    i, j = key
    return f"p{i}{j}" if i < 10 and j < 10 else f"p{i}_{j}"


def _settings(args) -> RunSettings:
    settings = load_config(args.config)
    overrides = {k: getattr(args, k) for k in ("k1", "k2", "k3") if getattr(args, k) is not None}
    if overrides:
        c = settings.constraints
        values = {"k1": c.k1, "k2": c.k2, "k3": c.k3, **overrides}
        try:
            constraints = ModelConfig(values["k1"], values["k2"], values["k3"], c.per_sentence_exclusivity)
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise ConfigError(str(exc)) from exc
        settings = RunSettings(constraints, settings.weights, settings.allow_sentence_deletion)
    return settings


def _candidate_set(args, settings: RunSettings) -> CandidateSet:
    lexicon = load_lexicon(args.lexicon)
    cs = load_candidates(args.candidates, lexicon, settings.allow_sentence_deletion)
    if getattr(args, "document", None):
        # document file overrides the text embedded in the candidate file
        data = candidate_set_to_dict(cs)
        data["document"] = Path(args.document).read_text(encoding="utf-8")
        for c in data["candidates"]:
            del c["f"], c["w"], c["s"]
        cs = candidate_set_from_dict(data, lexicon, settings.allow_sentence_deletion, source=str(args.candidates))
    return cs


def solve_record(cs: CandidateSet, settings: RunSettings, threads: int = 1, oracle: bool = False) -> dict:
    """Everything ``solve`` reports, as a JSON-ready dict."""
    model = build_model(cs, settings.constraints, settings.weights)
    sol = solve_branch_and_bound(model, threads=threads)
    record = {
        "status": sol.status.value,
        "selected": [list(k) for k in sol.assignment],
        "selected_labels": [_label(k) for k in sol.assignment],
        "z": str(sol.z) if sol.z is not None else None,
        "constraints": settings.constraints.as_dict(),
        "weights": settings.weights.as_dict(),
        "variables": [
            {"key": list(k), "label": _label(k), "cost": str(model.objective[k]),
             "f": model.deltas[k][0], "w": model.deltas[k][1], "s": model.deltas[k][2]}
            for k in model.variables
        ],
        "metrics_before": cs.base_metrics.as_dict(),
    }
    if sol.status is Status.OPTIMAL:
        text, after = apply_solution(cs.document, cs, sol.assignment)
        record["metrics_after"] = after.as_dict()
        record["rewritten_text"] = text
    else:
        record["metrics_after"] = None
        record["rewritten_text"] = None
        record["flexibility"] = {
            "min_total_words": analyze_flexibility(cs, "total_words", "min").as_dict(),
            "min_avg_sentence_length": analyze_flexibility(cs, "avg_sentence_length", "min").as_dict(),
            "max_lexical_density": analyze_flexibility(cs, "lexical_density", "max").as_dict(),
        }
    if oracle:
        feasible = enumerate_feasible_bruteforce(model)
        best = min(((model.z(a), a) for a in feasible), default=None)
        record["oracle"] = {
            "feasible": [[list(k) for k in a] for a in feasible],
            "count": len(feasible),
            "optimum": [list(k) for k in best[1]] if best else None,
            "agrees": (best is None and sol.status is Status.INFEASIBLE)
            or (best is not None and best[0] == sol.z and tuple(best[1]) == sol.assignment),
        }
    record["stats"] = {**sol.stats.as_dict(), "threads": threads, "deterministic": False}
    return record


def _print_solve_human(record: dict, out) -> None:
    print(f"status: {record['status']}", file=out)
    if record["status"] == Status.OPTIMAL.value:
        sel = ", ".join(record["selected_labels"]) or "(none)"
        print(f"selected: {sel}", file=out)
        print(f"z = {_rational(Fraction(record['z']))}", file=out)
    before = record["metrics_before"]
    print(f"before: W={before['W']} S={before['S']} F={before['F']} "
          f"avg={before['avg_sentence_length']} density={before['lexical_density']}", file=out)
    if record["metrics_after"]:
        a = record["metrics_after"]
        print(f"after:  W={a['W']} S={a['S']} F={a['F']} "
              f"avg={a['avg_sentence_length']} density={a['lexical_density']}", file=out)
        print("rewritten text:", file=out)
        print(record["rewritten_text"], file=out)
    if "flexibility" in record:
        print("nearest achievable (costs and other bounds ignored):", file=out)
        for name, rep in record["flexibility"].items():
            print(f"  {name}: {_rational(Fraction(rep['extreme_value']))}", file=out)
    if "oracle" in record:
        o = record["oracle"]
        sets = " ".join("{" + ",".join(_label(k) for k in a) + "}" for a in o["feasible"])
        print(f"oracle: {o['count']} feasible: {sets}", file=out)
        print(f"oracle agrees: {o['agrees']}", file=out)
    s = record["stats"]
    print(f"search (non-deterministic across threads): {s['nodes_explored']} of {s['full_space']} "
          f"assignments evaluated, {s['tree_nodes']} nodes", file=out)


def _emit(args, record, human) -> None:
    if args.format == "json":
        json.dump(record, sys.stdout, indent=2)
        sys.stdout.write("\n")
    else:
        human(record, sys.stdout)


def cmd_metrics(args) -> int:
    lexicon = load_lexicon(args.lexicon)
    text = Path(args.document).read_text(encoding="utf-8")
    _, m = measure_text(text, lexicon)
    if m.S == 0:
        raise EmptyDocumentError(f"{args.document}: no sentences")
    _emit(args, m.as_dict(), lambda r, out: print(format_metrics(m), file=out))
    return EXIT_OK


def cmd_solve(args) -> int:
    settings = _settings(args)
    cs = _candidate_set(args, settings)
    record = solve_record(cs, settings, threads=args.threads, oracle=args.oracle)
    if args.out and record["rewritten_text"] is not None:
        Path(args.out).write_text(record["rewritten_text"], encoding="utf-8")
    _emit(args, record, _print_solve_human)
    return EXIT_OK if record["status"] == Status.OPTIMAL.value else EXIT_INFEASIBLE


def cmd_flexibility(args) -> int:
    settings = _settings(args)
    cs = _candidate_set(args, settings)
    rows = flexibility_table(cs)
    record = {
        "rows": [
            {"label": label, "metrics": m.as_dict(), "report": rep.as_dict() if rep else None}
            for label, m, rep in rows
        ]
    }
    _emit(args, record, lambda r, out: print(format_flexibility_table(rows), file=out))
    return EXIT_OK


def cmd_sweep(args) -> int:
    settings = _settings(args)
    cs = _candidate_set(args, settings)
    model = build_model(cs, settings.constraints, settings.weights)
    values = [v for v in args.values.split(",") if v.strip()]
    try:
        points = sweep_constraint(model, args.bound, values, threads=args.threads)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(str(exc)) from exc
    record = {
        "bound": args.bound,
        "points": [
            {"value": str(v), "status": s.status.value, "z": str(s.z) if s.z is not None else None,
             "selected": [list(k) for k in s.assignment]}
            for v, s in points
        ],
    }

    def human(r, out):
        print(f"{args.bound:>12}  {'status':<10}  {'z':>10}  selected", file=out)
        for p in r["points"]:
            sel = ",".join(_label(tuple(k)) for k in p["selected"])
            print(f"{p['value']:>12}  {p['status']:<10}  {p['z'] or '-':>10}  {sel}", file=out)

    _emit(args, record, human)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="paraselect", description="Minimal-change paraphrase selection under text constraints.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, candidates=True):
        p.add_argument("--lexicon", help="function-word list (default: shipped list)")
        p.add_argument("--format", choices=["human", "json"], default="human")
        if candidates:
            p.add_argument("--candidates", required=True, help="candidate JSON file")
            p.add_argument("--document", help="document text file (overrides the one in --candidates)")
            p.add_argument("--config", help="JSON config file")
            p.add_argument("--k1", type=int)
            p.add_argument("--k2")
            p.add_argument("--k3")
            p.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("metrics", help="print W, S, F and the derived ratios")
    p.add_argument("--document", required=True)
    common(p, candidates=False)
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("solve", help="select the cheapest paraphrases meeting the bounds")
    common(p)
    p.add_argument("--oracle", action="store_true", help="cross-check with exhaustive enumeration")
    p.add_argument("--out", help="write the rewritten text here")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("flexibility", help="extreme metric values reachable by any selection")
    common(p)
    p.set_defaults(func=cmd_flexibility)

    p = sub.add_parser("sweep", help="re-solve over a list of values for one bound")
    common(p)
    p.add_argument("--bound", choices=["k1", "k2", "k3"], required=True)
    p.add_argument("--values", required=True, help="comma-separated bound values")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "threads", 1) < 1:
        print("paraselect: error: --threads must be >= 1", file=sys.stderr)
        return EXIT_INPUT
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            return args.func(args)
    except ModelValidationError as exc:
        for problem in exc.problems:
            print(f"paraselect: invalid candidates: {problem}", file=sys.stderr)
        return EXIT_INPUT
    except (CandidateFileError, ConfigError, LexiconError, EmptyDocumentError, OracleLimitError, OSError) as exc:
        print(f"paraselect: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
