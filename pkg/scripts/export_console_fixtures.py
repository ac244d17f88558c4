"""Regenerate the operator-console test fixtures.

The console's vitest suite replays gateway traffic without a Python
process. These files are byte-for-byte what /stream and /scenario emit,
so the client parser is exercised against production framing.

Run from the repo root after any telemetry schema change:
    python3 scripts/export_console_fixtures.py
"""

import json
import os

from neonfilm.cli import resolve_scenario
from neonfilm.engine import run_scenario
from neonfilm.service import SimService

OUT = os.path.join(os.path.dirname(__file__), "..", "frontend", "test", "fixtures")


def stream_lines(name: str, t_max: float | None = None) -> str:
    result = run_scenario(resolve_scenario(name))
    lines = []
    for rec in result.records:
        if t_max is not None and rec.t_s > t_max:
            break
        lines.append(json.dumps(rec.as_dict(), sort_keys=True))
    return "\n".join(lines) + "\n"


def main() -> None:
    os.makedirs(OUT, exist_ok=True)
    with open(os.path.join(OUT, "quench_stream.ndjson"), "w") as fh:
        fh.write(stream_lines("quench_1sccm"))
    # First 300 s covers the 5 dBm step at t=60 and the settled hot film.
    with open(os.path.join(OUT, "relaxation_stream.ndjson"), "w") as fh:
        fh.write(stream_lines("relaxation_step", t_max=300.0))
    service = SimService(resolve_scenario("quench_1sccm"), pacing=0.0)
    with open(os.path.join(OUT, "scenario_quench.json"), "w") as fh:
        json.dump(service.scenario_info(), fh, sort_keys=True)
        fh.write("\n")
    print(f"fixtures written to {os.path.normpath(OUT)}")


if __name__ == "__main__":
    main()
