"""File formats: binary field snapshots, CSV exports, JSON reports.

Snapshot layout (little-endian): magic "BOF1", u64 n_points, f64 L, f64 t,
then n_points f64 samples; a JSON sidecar (<path>.json) carries the grid
metadata.  CSV exports use 17 significant digits so doubles round-trip.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .grid import Grid, RealField
from .lax import BetaCurve, SpectralData, WuReport

__all__ = [
    "write_snapshot",
    "read_snapshot",
    "field_to_csv",
    "beta_curve_to_csv",
    "spectral_to_json",
    "write_trajectory",
    "fmt",
]

MAGIC = b"BOF1"
_HEADER = struct.Struct("<Qdd")


def fmt(x: float) -> str:
    """Render a double with 17 significant digits (lossless round-trip)."""
    return format(float(x), ".17g")


def write_snapshot(path: str | Path, field: RealField, t: float) -> None:
    path = Path(path)
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(_HEADER.pack(field.grid.n_points, field.grid.length, float(t)))
        fh.write(field.samples.astype("<f8").tobytes())
    sidecar = {
        "n_points": field.grid.n_points,
        "length": field.grid.length,
        "dx": field.grid.dx,
        "t": float(t),
        "format": "BOF1",
    }
    with open(path.with_suffix(path.suffix + ".json"), "w") as fh:
        json.dump(sidecar, fh, sort_keys=True, indent=1)
        fh.write("\n")


def read_snapshot(path: str | Path) -> tuple[RealField, float]:
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != MAGIC:
            raise ValueError(f"{path}: bad magic {magic!r}, expected {MAGIC!r}")
        n, length, t = _HEADER.unpack(fh.read(_HEADER.size))
        data = np.frombuffer(fh.read(8 * n), dtype="<f8")
    if data.size != n:
        raise ValueError(f"{path}: truncated snapshot ({data.size} of {n} samples)")
    return RealField(Grid(length, int(n)), data.astype(float)), t


def field_to_csv(path: str | Path, field: RealField) -> None:
    with open(path, "w") as fh:
        fh.write("x,u\n")
        for x, u in zip(field.grid.x, field.samples):
            fh.write(f"{fmt(x)},{fmt(u)}\n")


def beta_curve_to_csv(path: str | Path, curve: BetaCurve) -> None:
    with open(path, "w") as fh:
        fh.write("kappa,beta\n")
        for k, b in zip(curve.kappas, curve.values):
            fh.write(f"{fmt(k)},{fmt(b)}\n")


def spectral_to_json(data: SpectralData, wu: WuReport | None = None) -> dict:
    out = {
        "eigenvalues": data.eigenvalues.tolist(),
        "couplings": [{"re": float(g), "im": 0.0} for g in data.couplings],
    }
    if wu is not None:
        out["wu_ratios"] = wu.ratios.tolist()
    return out


def write_trajectory(out_dir: str | Path, traj) -> list[Path]:
    """Snapshot files plus monitors.csv with t,E0,E1,beta[,lambda_1..lambda_N]."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for i, (t, snap) in enumerate(zip(traj.times, traj.snapshots)):
        p = out_dir / f"snapshot_{i:05d}.bof"
        write_snapshot(p, snap, float(t))
        written.append(p)

    n_eig = 0
    if traj.negative_eigenvalues is not None:
        n_eig = max((e.size for e in traj.negative_eigenvalues), default=0)
    header = "t,E0,E1,beta" + "".join(f",lambda_{j + 1}" for j in range(n_eig))
    mon = out_dir / "monitors.csv"
    with open(mon, "w") as fh:
        fh.write(header + "\n")
        for i, t in enumerate(traj.times):
            row = [fmt(t), fmt(traj.e0[i]), fmt(traj.e1[i]), fmt(traj.beta[i])]
            if n_eig:
                eigs = traj.negative_eigenvalues[i]
                row += [fmt(e) for e in eigs]
                row += [""] * (n_eig - eigs.size)
            fh.write(",".join(row) + "\n")
    written.append(mon)
    return written
