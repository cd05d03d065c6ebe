"""Command line entry point.

`nvhyperfine run CONFIG` executes the configured trials and writes
results (CSV or JSON), a summary, and a config echo into the output
directory. Outputs carry no timestamps, so repeated runs with the same
configuration are byte-identical.
"""
import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np
import yaml

from .bayes import ConstraintError, NoFeasibleTau, VisibilityUnderflow
from .config import (
    ERROR_MODELS,
    ConfigError,
    Settings,
    echo_config,
    parse_config,
)
from .protocol import TrialEnsemble, run_ensemble

__all__ = ["main", "emit_figure_data"]

_CSV_HEADER = (
    "trial,k,tau_us,m_k,Z_k,A_k_MHz,Delta_k_MHz,R_k_us,"
    "Delta_QML_MHz,Delta_SQL_MHz,"
    "resonance_ok,taylor_ok,visibility_ok,qml_ok,repeated_tau"
)


def _g(x: float) -> str:
    """Format with 15 significant digits (decimal round-trip safe)."""
    return f"{x:.15g}"


def _records(ensemble: TrialEnsemble):
    for trial, trace in enumerate(ensemble.traces):
        for s in trace.steps:
            yield {
                "trial": trial,
                "k": s.k,
                "tau_us": s.tau,
                "m_k": s.m,
                "Z_k": s.Z,
                "A_k_MHz": s.A,
                "Delta_k_MHz": s.Delta,
                "R_k_us": s.R,
                "Delta_QML_MHz": s.Delta_QML,
                "Delta_SQL_MHz": s.Delta_SQL,
                "resonance_ok": s.constraints.resonance_ok,
                "taylor_ok": s.constraints.taylor_ok,
                "visibility_ok": s.constraints.visibility_ok,
                "qml_ok": s.constraints.qml_ok,
                "repeated_tau": s.repeated_tau,
            }


def results_csv(ensemble: TrialEnsemble) -> str:
    lines = [_CSV_HEADER]
    for r in _records(ensemble):
        lines.append(
            ",".join(
                [
                    str(r["trial"]),
                    str(r["k"]),
                    _g(r["tau_us"]),
                    str(r["m_k"]),
                    _g(r["Z_k"]),
                    _g(r["A_k_MHz"]),
                    _g(r["Delta_k_MHz"]),
                    _g(r["R_k_us"]),
                    _g(r["Delta_QML_MHz"]),
                    _g(r["Delta_SQL_MHz"]),
                    str(r["resonance_ok"]).lower(),
                    str(r["taylor_ok"]).lower(),
                    str(r["visibility_ok"]).lower(),
                    str(r["qml_ok"]).lower(),
                    str(r["repeated_tau"]).lower(),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def results_json(ensemble: TrialEnsemble) -> str:
    return json.dumps({"records": list(_records(ensemble))}, indent=2) + "\n"


def summarize(ensemble: TrialEnsemble) -> dict:
    """Ensemble aggregates: final medians, limit ratios, coverage."""
    med = ensemble.median_deltas()
    qml = ensemble.median_qml()
    sql = ensemble.median_sql()
    final_A = float(np.median([t.steps[-1].A for t in ensemble.traces]))
    return {
        "trials": len(ensemble.traces),
        "steps": ensemble.n_steps,
        "median_final_A_MHz": final_A,
        "median_final_Delta_MHz": float(med[-1]),
        "median_final_Delta_QML_MHz": float(qml[-1]),
        "median_final_Delta_SQL_MHz": float(sql[-1]),
        "ratio_to_QML": float(med[-1] / qml[-1]),
        "ratio_to_SQL": float(med[-1] / sql[-1]),
        "coverage_95": ensemble.coverage(),
    }


def emit_figure_data(ensemble: TrialEnsemble) -> str:
    """Per-step median precision and limits, each normalized to its k=1 value."""
    med = ensemble.median_deltas()
    qml = ensemble.median_qml()
    sql = ensemble.median_sql()
    lines = ["k,Delta_norm,Delta_QML_norm,Delta_SQL_norm"]
    for i in range(len(med)):
        lines.append(
            f"{i + 1},{_g(med[i] / med[0])},"
            f"{_g(qml[i] / qml[0])},{_g(sql[i] / sql[0])}"
        )
    return "\n".join(lines) + "\n"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nvhyperfine",
        description="Adaptive hyperfine estimation on a two-qubit register.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    run_p = sub.add_parser("run", help="run estimation trials from a config")
    run_p.add_argument("config", help="YAML configuration file")
    run_p.add_argument("--seed", type=int, default=None, help="override seed")
    run_p.add_argument(
        "--trials", type=int, default=None, help="override trial count"
    )
    run_p.add_argument(
        "--error-model",
        choices=ERROR_MODELS,
        default=None,
        help="override the configured error model",
    )
    run_p.add_argument(
        "--output",
        default=None,
        help="output directory (default: $NVHYPERFINE_OUTPUT_DIR or CWD)",
    )
    run_p.add_argument(
        "--format", choices=("csv", "json"), default="csv", dest="fmt"
    )
    run_p.add_argument(
        "--figure", default=None, help="also write normalized figure data here"
    )
    return parser


def _load_with_overrides(args) -> Settings:
    try:
        with open(args.config, encoding="utf-8") as fh:
            data = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"invalid YAML in {args.config}: {exc}") from exc
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError("configuration must be a mapping")
    if args.seed is not None:
        data["seed"] = args.seed
    if args.trials is not None:
        data["trials"] = args.trials
    if args.error_model is not None:
        data["error_model"] = args.error_model
    return parse_config(data)


def _run(args) -> int:
    settings = _load_with_overrides(args)
    out_dir = Path(
        args.output
        if args.output is not None
        else os.environ.get("NVHYPERFINE_OUTPUT_DIR", ".")
    )
    out_dir.mkdir(parents=True, exist_ok=True)

    ensemble = run_ensemble(settings.run, settings.trials)
    if args.fmt == "csv":
        (out_dir / "results.csv").write_text(results_csv(ensemble))
    else:
        (out_dir / "results.json").write_text(results_json(ensemble))
    summary = summarize(ensemble)
    (out_dir / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    (out_dir / "config_echo.yaml").write_text(echo_config(settings))
    if args.figure is not None:
        Path(args.figure).write_text(emit_figure_data(ensemble))

    print(f"trials: {summary['trials']}  steps: {summary['steps']}")
    print(f"median final A: {_g(summary['median_final_A_MHz'])} MHz")
    print(f"median final Delta: {_g(summary['median_final_Delta_MHz'])} MHz")
    print(
        f"ratio to QML: {_g(summary['ratio_to_QML'])}  "
        f"ratio to SQL: {_g(summary['ratio_to_SQL'])}"
    )
    print(f"95% coverage: {_g(summary['coverage_95'])}")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _run(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (ConstraintError, NoFeasibleTau, VisibilityUnderflow) as exc:
        print(f"constraint error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
