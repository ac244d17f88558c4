"""Command-line front end.

Subcommands:
  run       simulate one scenario, write telemetry + summary + figure
  campaign  run an event grid, write the per-event table + figure
  fit       fit a resonance trace from a two-column CSV
  serve     expose a live run over HTTP

Exit codes: 0 success, 2 bad input (scenario/config/command validation),
3 unexpected runtime failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from importlib import resources

import numpy as np

from .analysis import fit_lorentzian, pearson_r
from .config import default_config
from .engine import (Campaign, Scenario, load_campaign, load_scenario,
                     run_campaign, run_scenario, write_campaign_csv, write_csv,
                     write_jsonl, write_summary)
from .errors import NeonFilmError, ScenarioError


def resolve_scenario(name: str) -> Scenario:
    """Accept a path, or the bare name of a bundled scenario."""
    if os.path.exists(name):
        return load_scenario(name)
    stem = name[:-5] if name.endswith(".json") else name
    bundle = resources.files("neonfilm").joinpath(f"scenarios/{stem}.json")
    if bundle.is_file():
        return Scenario.from_dict(json.loads(bundle.read_text()))
    raise ScenarioError("scenario", f"no such file or bundled scenario: {name}")


def resolve_campaign(name: str) -> Campaign:
    if os.path.exists(name):
        return load_campaign(name)
    stem = name[:-5] if name.endswith(".json") else name
    bundle = resources.files("neonfilm").joinpath(f"scenarios/{stem}.json")
    if bundle.is_file():
        return Campaign.from_dict(json.loads(bundle.read_text()))
    raise ScenarioError("campaign", f"no such file or bundled campaign: {name}")


def list_bundled() -> list[str]:
    root = resources.files("neonfilm").joinpath("scenarios")
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def _cmd_run(args: argparse.Namespace) -> int:
    scenario = resolve_scenario(args.scenario)
    if args.seed is not None:
        scenario = dataclasses.replace(scenario, seed=args.seed)
    cfg = default_config()
    result = run_scenario(scenario, cfg)
    os.makedirs(args.out, exist_ok=True)
    base = os.path.join(args.out, scenario.name)
    write_csv(result.records, base + ".csv")
    if args.jsonl:
        write_jsonl(result.records, base + ".jsonl")
    write_summary(result.summary, base + "_summary.json")
    if not args.no_figures:
        from .report import render_run_figure
        render_run_figure(result.records, cfg, base + ".png")
    final = result.summary["final"]
    print(f"wrote {base}.csv ({len(result.records)} records)")
    print(f"final: T={final['T_cell_K']:.3f} K, d_local={final['d_local_m'] * 1e9:.2f} nm, "
          f"phase={final['phase']}")
    for kind in ("liquid_onset", "solid_onset", "collapse", "melt"):
        if kind in result.summary:
            ev = result.summary[kind]
            extra = f", T={ev['T_K']:.3f} K" if "T_K" in ev else ""
            print(f"event {kind}: t={ev['t_s']:.1f} s{extra}")
    return 0


def _cmd_campaign(args: argparse.Namespace) -> int:
    campaign = resolve_campaign(args.campaign)
    if args.seed is not None:
        campaign = dataclasses.replace(campaign, master_seed=args.seed)
    cfg = default_config()
    events = run_campaign(campaign, cfg, jobs=args.jobs)
    os.makedirs(args.out, exist_ok=True)
    base = os.path.join(args.out, campaign.name)
    write_campaign_csv(events, base + "_events.csv")

    d_liq = np.array([e.d_liquid_m for e in events])
    d_sol = np.array([e.d_solid_m for e in events])
    ok = (d_liq > 0) & (d_sol > 0)
    summary = {"campaign": campaign.name, "events": len(events),
               "master_seed": campaign.master_seed}
    if ok.sum() >= 3:
        summary["pearson_r_log"] = pearson_r(d_liq[ok], d_sol[ok], log_space=True)
        summary["solid_decades"] = float(np.log10(d_sol[ok].max() / d_sol[ok].min()))
    write_summary(summary, base + "_summary.json")
    if not args.no_figures:
        from .report import render_campaign_figure
        render_campaign_figure(events, base + ".png")
    print(f"wrote {base}_events.csv ({len(events)} events)")
    if "pearson_r_log" in summary:
        print(f"log-space correlation r={summary['pearson_r_log']:.3f} over "
              f"{summary['solid_decades']:.2f} decades")
    return 0


def _cmd_fit(args: argparse.Namespace) -> int:
    data = np.loadtxt(args.csv, delimiter=",", skiprows=args.skip_rows)
    if data.ndim != 2 or data.shape[1] < 2:
        raise ScenarioError("fit.csv", "need two numeric columns (f_Hz, amplitude)")
    result = fit_lorentzian(data[:, 0], data[:, 1])
    out = {"converged": result.converged, "message": result.message,
           "rms_residual": result.rms_residual}
    for key, value in result.params.items():
        out[key] = value
        if key in result.sigmas:
            out[key + "_sigma"] = result.sigmas[key]
    print(json.dumps(out, indent=2, sort_keys=True))
    return 0 if result.converged else 3


def _cmd_serve(args: argparse.Namespace) -> int:
    from .service import serve
    scenario = resolve_scenario(args.scenario)
    if args.seed is not None:
        scenario = dataclasses.replace(scenario, seed=args.seed)
    print(f"serving {scenario.name} on http://{args.host}:{args.port} "
          f"(pacing x{args.pacing:g})")
    serve(scenario, default_config(), host=args.host, port=args.port,
          pacing=args.pacing)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="neonfilm",
        description="Cryogenic neon film growth monitor (digital twin).")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="simulate one scenario")
    p_run.add_argument("scenario", help="scenario JSON path or bundled name")
    p_run.add_argument("--out", default="out", help="output directory")
    p_run.add_argument("--seed", type=int, default=None)
    p_run.add_argument("--jsonl", action="store_true",
                       help="also write JSON-lines telemetry")
    p_run.add_argument("--no-figures", action="store_true")
    p_run.set_defaults(func=_cmd_run)

    p_camp = sub.add_parser("campaign", help="run an event grid")
    p_camp.add_argument("campaign", help="campaign JSON path or bundled name")
    p_camp.add_argument("--out", default="out")
    p_camp.add_argument("--jobs", type=int, default=1)
    p_camp.add_argument("--seed", type=int, default=None)
    p_camp.add_argument("--no-figures", action="store_true")
    p_camp.set_defaults(func=_cmd_campaign)

    p_fit = sub.add_parser("fit", help="fit a resonance trace")
    p_fit.add_argument("csv", help="two-column CSV: f_Hz, amplitude")
    p_fit.add_argument("--skip-rows", type=int, default=0)
    p_fit.set_defaults(func=_cmd_fit)

    p_serve = sub.add_parser("serve", help="serve a live run over HTTP")
    p_serve.add_argument("scenario")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8777)
    p_serve.add_argument("--pacing", type=float, default=60.0,
                         help="sim seconds per wall second (0 = unpaced)")
    p_serve.add_argument("--seed", type=int, default=None)
    p_serve.set_defaults(func=_cmd_serve)

    p_list = sub.add_parser("scenarios", help="list bundled scenarios")
    p_list.set_defaults(func=lambda a: (print("\n".join(list_bundled())), 0)[1])

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NeonFilmError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        print(f"unexpected failure: {exc!r}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
