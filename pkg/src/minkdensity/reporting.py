"""Stable on-disk formats for sweep reports, density fields and manifests.

CSV for one-dimensional sweeps (plot-tool friendly), JSON for fields
(shape metadata required).  Floats are written with 17 significant digits
so both formats round-trip bit-exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .estimators import DensityField, PointEstimate, SweepReport, SweepRow
from .geometry import Point, Window

SWEEP_HEADER = "r,estimate,stderr,reference,abs_error"


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_sweep_csv(report: SweepReport, path) -> None:
    """Write ``r,estimate,stderr,reference,abs_error`` rows in report order;
    absent references leave their cells empty."""
    lines = [SWEEP_HEADER]
    for row in report.rows:
        ref = _fmt(row.reference) if row.reference is not None else ""
        err = _fmt(row.abs_error) if row.abs_error is not None else ""
        lines.append(
            f"{_fmt(row.r)},{_fmt(row.estimate.value)},{_fmt(row.estimate.stderr)},{ref},{err}"
        )
    text = "\n".join(lines) + "\n"
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write sweep csv {path}: {exc}") from exc


def read_sweep_csv(path) -> SweepReport:
    """Inverse of :func:`write_sweep_csv`; malformed rows name their line."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise OSError(f"cannot read sweep csv {path}: {exc}") from exc
    lines = text.splitlines()
    if not lines or lines[0] != SWEEP_HEADER:
        raise ValueError(f"{path}:1: expected header {SWEEP_HEADER!r}")
    rows = []
    for idx, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 5:
            raise ValueError(f"{path}:{idx}: expected 5 fields, got {len(parts)}")
        try:
            r = float(parts[0])
            est = float(parts[1])
            se = float(parts[2])
            ref = float(parts[3]) if parts[3] else None
            err = float(parts[4]) if parts[4] else None
        except ValueError as exc:
            raise ValueError(f"{path}:{idx}: {exc}") from exc
        rows.append(SweepRow(r, PointEstimate(est, se, 0), ref, err))
    return SweepReport(tuple(rows), {"source": str(path)})


def write_field_json(field_: DensityField, path) -> None:
    """Structured field document: region bounds, grid shape, radius,
    row-major value and stderr arrays."""
    doc = {
        "region": {"lo": list(field_.region.lo.coords), "hi": list(field_.region.hi.coords)},
        "shape": list(field_.shape),
        "radius": field_.radius,
        "replicates": field_.replicates,
        "values": [float(v) for v in field_.values.ravel()],
        "stderr": [float(v) for v in field_.stderrs.ravel()],
    }
    try:
        Path(path).write_text(json.dumps(doc, indent=1) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write field json {path}: {exc}") from exc


def read_field_json(path) -> DensityField:
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise OSError(f"cannot read field json {path}: {exc}") from exc
    region = Window(Point(tuple(doc["region"]["lo"])), Point(tuple(doc["region"]["hi"])))
    shape = tuple(doc["shape"])
    values = np.array(doc["values"], dtype=np.float64).reshape(shape)
    stderr = np.array(doc["stderr"], dtype=np.float64).reshape(shape)
    return DensityField(region, shape, doc["radius"], values, stderr, doc["replicates"])


@dataclass(frozen=True)
class RunManifest:
    """Everything needed to reproduce a run's outputs bit-for-bit: the full
    resolved configuration, the master seed, and the produced files."""

    version: str
    command: str
    config: dict
    master_seed: int
    outputs: tuple[str, ...]
    created_utc: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "command": self.command,
            "config": self.config,
            "master_seed": self.master_seed,
            "outputs": list(self.outputs),
            "created_utc": self.created_utc,
        }


def write_manifest(manifest: RunManifest, path) -> None:
    try:
        Path(path).write_text(json.dumps(manifest.to_dict(), indent=1, sort_keys=True) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write manifest {path}: {exc}") from exc


def read_manifest(path) -> RunManifest:
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise OSError(f"cannot read manifest {path}: {exc}") from exc
    return RunManifest(
        version=doc["version"],
        command=doc["command"],
        config=doc["config"],
        master_seed=doc["master_seed"],
        outputs=tuple(doc["outputs"]),
        created_utc=doc["created_utc"],
    )
