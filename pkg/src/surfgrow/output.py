"""Deterministic run serialization: snapshot CSVs, a metrics stream, and a
checksummed manifest.

Numbers are written with 17 significant decimal digits so parsing an
emitted file reproduces the in-memory doubles bitwise.  Identical
(config, version) pairs produce byte-identical data files; the manifest
additionally records the wall-clock duration when one is supplied.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .errors import IoError
from .scenarios import RunResult

SNAPSHOT_COLUMNS = ("x2", "v1", "v2", "Fe11", "Fe12", "Fe21", "Fe22", "p", "rho")
METRIC_FIELDS = ("t", "H", "mass_residual", "momentum_residual",
                 "traction_residual", "system_residual", "det_drift",
                 "max_F_e21", "max_p_dev")


def fmt(x: float) -> str:
    """17-significant-digit decimal; round-trips 64-bit floats."""
    return format(float(x), ".17g")


@dataclass
class RunManifest:
    """Inventory of one run's outputs with SHA-256 checksums."""

    version: str
    config: dict
    grid: dict
    time: dict
    duration_seconds: float | None
    snapshots: list
    files: list

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    h.update(path.read_bytes())
    return h.hexdigest()


def _snapshot_indices(n_records: int, n_snapshots: int) -> list[int]:
    if n_records == 0:
        return []
    k = min(n_snapshots, n_records)
    return sorted(set(np.linspace(0, n_records - 1, k).round().astype(int).tolist()))


def _write_snapshot(path: Path, rec) -> None:
    v1 = 0.5 * (rec.v_nodes[:-1] + rec.v_nodes[1:])
    rows = [",".join(SNAPSHOT_COLUMNS)]
    for j, x2 in enumerate(rec.grid.centers):
        F = rec.F_e[j]
        rows.append(",".join(fmt(v) for v in
                             (x2, v1[j], 0.0, F[0, 0], F[0, 1], F[1, 0], F[1, 1],
                              rec.p[j], rec.rho[j])))
    path.write_text("\n".join(rows) + "\n", encoding="utf-8", newline="\n")


def _write_metrics(path: Path, result: RunResult) -> None:
    oracle_keys = sorted(k for k in result.oracle_errors if k != "t")
    lines = [json.dumps({"type": "header",
                         "fields": list(METRIC_FIELDS) + oracle_keys},
                        sort_keys=True)]
    for k, rec in enumerate(result.history):
        row = {"type": "step", "step": k}
        row.update({name: fmt(rec.metrics[name]) for name in METRIC_FIELDS})
        for key in oracle_keys:
            row[key] = fmt(result.oracle_errors[key][k])
        lines.append(json.dumps(row, sort_keys=True))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def _write_pathlines(path: Path, result: RunResult) -> None:
    history = result.history
    t0 = history[0].t
    dt = history[1].t - history[0].t if len(history) > 1 else 1.0
    lines = ["pathline,t,x1,x2,Fe11,Fe12,Fe21,Fe22,v1,v2,p"]
    for i, pl in enumerate(result.pathlines):
        for m, t in enumerate(pl.t):
            k = min(max(int(round((t - t0) / dt)), 0), len(history) - 1)
            rec = history[k]
            x2 = min(max(pl.x[m, 1], 0.0), rec.grid.height)
            v1 = float(np.interp(x2, rec.grid.faces, rec.v_nodes))
            p = float(np.interp(x2, rec.grid.centers, rec.p))
            F = pl.F_e[m]
            lines.append(",".join([str(i)] + [fmt(v) for v in
                                              (t, pl.x[m, 0], pl.x[m, 1],
                                               F[0, 0], F[0, 1], F[1, 0], F[1, 1],
                                               v1, 0.0, p)]))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def read_snapshot(path) -> dict:
    """Parse an emitted snapshot back into column arrays (bitwise faithful)."""
    text = Path(path).read_text(encoding="utf-8").strip().splitlines()
    header = text[0].split(",")
    cols = {name: [] for name in header}
    for line in text[1:]:
        for name, tok in zip(header, line.split(",")):
            cols[name].append(float(tok))
    return {name: np.array(vals) for name, vals in cols.items()}


def write_fields(result: RunResult, out_dir,
                 duration_seconds: float | None = None) -> RunManifest:
    """Serialize a run: snapshot CSVs, metrics stream, pathlines, manifest.

    Snapshot count follows ``result.config.n_snapshots`` (evenly spaced over
    the stored history, first and last always included).
    """
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        cfg = result.config
        snapshots = []
        for ordinal, idx in enumerate(_snapshot_indices(len(result.history),
                                                        cfg.n_snapshots)):
            rec = result.history[idx]
            name = f"snapshot_{ordinal:04d}.csv"
            _write_snapshot(out / name, rec)
            snapshots.append({"file": name, "step": int(idx), "t": fmt(rec.t)})
        _write_metrics(out / "metrics.jsonl", result)
        written = [s["file"] for s in snapshots] + ["metrics.jsonl"]
        if result.pathlines:
            _write_pathlines(out / "pathlines.csv", result)
            written.append("pathlines.csv")
        dt, n_steps = cfg.resolve_dt()
        config_echo = {"kind": cfg.kind, "G": cfg.params.G, "mu": cfg.params.mu,
                       "rho": cfg.params.rho, "alpha": cfg.alpha,
                       "H0": cfg.height0, "V_G": cfg.V_G, "h": cfg.h,
                       "v0": cfg.v0, "L": cfg.L, "n_cells": cfg.n_cells,
                       "dt": dt, "t_end": cfg.t_end,
                       "mu_sweep": list(cfg.sweep_values()),
                       "n_snapshots": cfg.n_snapshots}
        files = sorted(({"name": name, "sha256": _sha256(out / name),
                         "bytes": (out / name).stat().st_size}
                        for name in written), key=lambda f: f["name"])
        manifest = RunManifest(
            version=__version__,
            config=config_echo,
            grid={"n_cells": cfg.n_cells,
                  "final_height": result.history[-1].grid.height if result.history else None},
            time={"dt": dt, "n_steps": n_steps, "t_end": cfg.t_end},
            duration_seconds=duration_seconds,
            snapshots=snapshots,
            files=files,
        )
        (out / "manifest.json").write_text(manifest.to_json(), encoding="utf-8",
                                           newline="\n")
        return manifest
    except OSError as exc:
        raise IoError(f"failed writing run outputs to {out}: {exc}") from exc
