"""The experiment runner and the on-disk artifact formats.

Runs the verify experiment programmatically (equivalent to `bolab verify`),
then shows the snapshot binary format and the CSV/JSON exports.
"""

import json
import tempfile
from pathlib import Path

import numpy as np

import bolab
from bolab.experiments import default_spec, run_experiment
from bolab.storage import field_to_csv, read_snapshot, write_snapshot

out = Path(tempfile.mkdtemp(prefix="bolab_demo_"))
print(f"writing artifacts under {out}")

spec = default_spec(
    "verify", str(out / "verify"),
    grid={"length": 128.0, "n_points": 2048},
    lax={"n_modes": 512},
)
report = run_experiment(spec)
print(f"\nverify: {'PASSED' if report.passed else 'FAILED'} "
      f"({sum(c.passed for c in report.checks)}/{len(report.checks)} checks)")
for check in report.checks[:5]:
    print(" ", check.line())
print("  ...")

doc = json.loads((out / "verify" / "verify.json").read_text())
print(f"\nverify.json echoes the full configuration "
      f"(grid L = {doc['config']['grid']['length']}) and lists "
      f"{len(doc['checks'])} checks")

# Snapshot binary format: magic "BOF1", n_points, L, t, then the samples.
grid = bolab.Grid(64.0, 512)
field = bolab.single_soliton(-0.5, 3.0, grid)
snap = out / "field.bof"
write_snapshot(snap, field, t=1.5)
back, t = read_snapshot(snap)
print(f"\nsnapshot round trip: t = {t}, max sample error "
      f"{np.max(np.abs(back.samples - field.samples)):.1e}")
print(f"sidecar metadata: {(out / 'field.bof.json').read_text().strip()}")

csv = out / "field.csv"
field_to_csv(csv, field)
print(f"\nCSV head: {csv.read_text().splitlines()[:2]}")
