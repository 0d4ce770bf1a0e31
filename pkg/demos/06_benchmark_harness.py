"""Reproducible experiment sweeps through the harness.

A single config drives ground-truth generation, measurement simulation,
recovery, completion and scoring, with every random draw derived from the
master seed. The emitted JSON/CSV files regenerate identically (up to the
isolated timing section) when the config is rerun.
"""

import json
import pathlib
import tempfile

from superop_sensing import ExperimentConfig, emit_results, run_experiment

config = ExperimentConfig(
    task="channel", n=4, design="blockwise", strategy="als_i", source="random",
    sweep=[8, 12, 16, 24], kraus_rank=2, sigma=0.0, subset_ratio=0.5,
    trials=8, master_seed=123)

result = run_experiment(config)
print(f"strategy {config.strategy}, {config.trials} trials per point, "
      f"sigma={config.sigma:.0e}")
print(f"{'M_O':>5} {'mean error':>12} {'recovery':>9} {'mean time':>10}")
for point in result.points:
    agg = point.aggregates(config.recovery_threshold)
    print(f"{point.m:5d} {agg['mean_error']:12.3e} "
          f"{agg['recovery_rate']:9.2f} {agg['mean_time_s']:9.3f}s")

out = pathlib.Path(tempfile.mkdtemp(prefix="superop_demo_"))
written = emit_results(result, str(out))
print(f"\nwrote {len(written)} files to {out}:")
for path in written:
    print(f"  {pathlib.Path(path).name}")
payload = json.loads((out / "results.json").read_text())
print(f"manifest hash: {payload['manifest_hash']}")
