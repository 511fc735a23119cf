"""
The experiment runner
=====================

Experiments are declared in TOML, run deterministically from a master
seed, and written as records.jsonl + summary.csv + report.json.  Every
record is a pure function of (config, seed), so reruns — with any number
of worker processes — are byte-identical, and `replay` recomputes the
aggregates from the records alone.
"""

import json
import tempfile
from pathlib import Path

from hypwalk.experiments import (parse_config, replay, run_experiment,
                                 write_report)

CONFIG = """
[experiment]
id = "demo-drift"
kind = "drift"
master_seed = 2024

[group]
spec = "free(2)"

[distribution]
uniform_generators = true

[grid]
n = [50, 100, 200]
trials = 150

[params]
band_epsilon = 0.25
"""

config = parse_config(CONFIG)
print("parsed:", config.experiment_id, config.kind,
      "n_grid =", config.n_grid, "trials =", config.trials)

report = run_experiment(config, threads=2)
print("drift constant:", report.drift_constant)
print("\nn     mean d/n   95% ci             tail outside 25% band")
for row in report.aggregates:
    print(f"{row['n']:<5d} {row['estimate']:<10.4f} "
          f"[{row['ci_lo']:.4f}, {row['ci_hi']:.4f}]  "
          f"{row['tail_fraction']:.4f}")

with tempfile.TemporaryDirectory() as tmp:
    paths = write_report(report, tmp)
    print("\nwrote:", *[Path(p).name for p in paths])

    rerun = run_experiment(config, threads=8)
    same = all(a.to_json() == b.to_json()
               for a, b in zip(report.records, rerun.records))
    print("rerun with 8 workers byte-identical:", same)

    ok, diffs = replay(Path(tmp) / "records.jsonl")
    print("replay from records.jsonl:", "ok" if ok else diffs)

    first = json.loads((Path(tmp) / "records.jsonl").read_text()
                       .splitlines()[0])
    print("first record:", first)
