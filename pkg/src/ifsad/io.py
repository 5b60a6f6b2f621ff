"""Readers and writers for edge streams, characteristic tables, labels and
detection reports."""

from __future__ import annotations

import csv
import json
import math
import re
from pathlib import Path
from typing import Sequence

import numpy as np

from ifsad.errors import ConfigError, InputFormatError
from ifsad.graph_metrics import Snapshot, build_snapshot
from ifsad.pipeline import CharacteristicMatrix, Classification, DetectionModel, EvalMetrics

_SPLIT = re.compile(r"[,\s]+")


def _read_lines(path) -> list[str]:
    try:
        return Path(path).read_text().splitlines()
    except OSError as exc:
        raise InputFormatError(f"cannot read {path}: {exc}") from None


def load_edge_stream(path, window_seconds: int) -> list[Snapshot]:
    """Bucket ``timestamp src dst`` rows into fixed windows.

    Tick k holds the events with ``floor((t - t0) / window_seconds) == k``
    where t0 is the earliest timestamp; windows without events become empty
    snapshots.
    """
    if window_seconds <= 0:
        raise ConfigError(f"window length must be positive, got {window_seconds}")
    events: list[tuple[int, str, str]] = []
    for lineno, raw in enumerate(_read_lines(path), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = _SPLIT.split(line)
        if len(parts) != 3:
            raise InputFormatError(f"{path}:{lineno}: expected 'timestamp src dst', got {raw!r}")
        try:
            t = int(parts[0])
        except ValueError:
            raise InputFormatError(f"{path}:{lineno}: timestamp {parts[0]!r} is not an integer") from None
        events.append((t, parts[1], parts[2]))
    if not events:
        return []
    t0 = min(e[0] for e in events)
    buckets: dict[int, list] = {}
    for t, u, v in events:
        buckets.setdefault((t - t0) // window_seconds, []).append((u, v))
    return [build_snapshot(buckets.get(k, []), tick=k) for k in range(max(buckets) + 1)]


def load_characteristic_csv(path) -> CharacteristicMatrix:
    """Read a header-first CSV with one row per tick.

    A leading ``tick`` column, if present, gives the tick indices; every
    other column is a characteristic.
    """
    lines = [ln for ln in _read_lines(path) if ln.strip()]
    if not lines:
        raise InputFormatError(f"{path}: empty file")
    rows = list(csv.reader(lines))
    header = [h.strip() for h in rows[0]]
    if not header or any(_is_number(h) for h in header):
        raise InputFormatError(f"{path}: first row must name the characteristics")
    has_tick = header[0] == "tick"
    names = header[1:] if has_tick else header
    if not names:
        raise InputFormatError(f"{path}: no characteristic columns")
    if len(set(names)) != len(names):
        raise InputFormatError(f"{path}: duplicate column names")

    body = np.empty((len(rows) - 1, len(header)), dtype=np.float64)
    for k, row in enumerate(rows[1:]):
        lineno = k + 2
        if len(row) != len(header):
            raise InputFormatError(f"{path}:{lineno}: expected {len(header)} cells, got {len(row)}")
        for c, cell in enumerate(row):
            try:
                value = float(cell)
            except ValueError:
                raise InputFormatError(f"{path}:{lineno}: non-numeric cell {cell!r}") from None
            if not math.isfinite(value):
                raise InputFormatError(f"{path}:{lineno}: non-finite cell {cell!r}")
            body[k, c] = value

    if has_tick:
        ticks = body[:, 0]
        if np.any(ticks != np.round(ticks)):
            raise InputFormatError(f"{path}: tick column must hold integers")
        if np.any(np.diff(ticks) <= 0):
            raise InputFormatError(f"{path}: ticks must be strictly increasing")
        return CharacteristicMatrix(body[:, 1:].T.copy(), tuple(names), ticks.astype(np.int64))
    return CharacteristicMatrix(body.T.copy(), tuple(names))


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def write_characteristic_csv(path, c_matrix: CharacteristicMatrix) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(("tick",) + c_matrix.names)
        for k, tick in enumerate(c_matrix.ticks):
            writer.writerow([int(tick)] + [repr(float(x)) for x in c_matrix.values[:, k]])
    return path


def load_labels(path, ticks: Sequence[int]) -> np.ndarray:
    """``tick,label`` rows with label 0/1; ticks not listed are normal."""
    wanted = {int(t): i for i, t in enumerate(ticks)}
    labels = np.zeros(len(wanted), dtype=bool)
    seen = set()
    for lineno, raw in enumerate(_read_lines(path), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split(",")]
        if lineno == 1 and parts == ["tick", "label"]:
            continue
        if len(parts) != 2 or parts[1] not in ("0", "1"):
            raise InputFormatError(f"{path}:{lineno}: expected 'tick,label' with label 0 or 1")
        try:
            tick = int(parts[0])
        except ValueError:
            raise InputFormatError(f"{path}:{lineno}: bad tick {parts[0]!r}") from None
        if tick in seen:
            raise InputFormatError(f"{path}:{lineno}: tick {tick} labelled twice")
        seen.add(tick)
        if tick in wanted:
            labels[wanted[tick]] = parts[1] == "1"
    return labels


def write_labels(path, ticks: Sequence[int], labels: Sequence[bool]) -> Path:
    path = Path(path)
    with path.open("w") as fh:
        fh.write("tick,label\n")
        for t, lab in zip(ticks, labels):
            fh.write(f"{int(t)},{int(bool(lab))}\n")
    return path


def write_classifications(path, model: DetectionModel, results: Sequence[Classification]) -> Path:
    path = Path(path)
    header = ["tick"]
    for var in model.variables:
        header += [f"{var}_mu", f"{var}_gamma", f"{var}_pi"]
    header += ["predicted", "abnormal"]
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for c in results:
            row: list = [c.tick]
            for t in c.fused:
                row += [repr(t.mu), repr(t.gamma), repr(t.pi)]
            row += [c.predicted, int(c.binary_abnormal)]
            writer.writerow(row)
    return path


def metrics_table(rows: Sequence[tuple[str, EvalMetrics]]) -> str:
    """Fixed-width text table, one row per detector."""
    head = ("detector", "a", "p", "r", "F1", "TP", "FP", "TN", "FN")
    body = [
        (name, f"{m.a:.4f}", f"{m.p:.4f}", f"{m.r:.4f}", f"{m.f1:.4f}",
         str(m.tp), str(m.fp), str(m.tn), str(m.fn))
        for name, m in rows
    ]
    widths = [max(len(r[i]) for r in [head, *body]) for i in range(len(head))]

    def fmt(r):
        cells = [r[0].ljust(widths[0])] + [c.rjust(w) for c, w in zip(r[1:], widths[1:])]
        return "  ".join(cells).rstrip()

    rule = "  ".join("-" * w for w in widths)
    return "\n".join([fmt(head), rule, *map(fmt, body)]) + "\n"


def write_metrics(outdir, rows: Sequence[tuple[str, EvalMetrics]], extra: dict | None = None) -> tuple[Path, Path]:
    outdir = Path(outdir)
    payload = {"detectors": {name: m.as_dict() for name, m in rows}}
    if extra:
        payload.update(extra)
    json_path = outdir / "metrics.json"
    json_path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    txt_path = outdir / "metrics.txt"
    txt_path.write_text(metrics_table(rows))
    return json_path, txt_path


def write_sweep(path, table: Sequence[tuple[int, float]]) -> Path:
    path = Path(path)
    with path.open("w") as fh:
        fh.write("m,accuracy\n")
        for m, a in table:
            fh.write(f"{m},{a!r}\n")
    return path
