"""CSV / JSON / key-value writers shared by the CLI.

Floats are written with ``%.17g`` so identical inputs give byte-identical
files.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np
import yaml

REPORT_FIELDS = ("test", "n_max", "margin", "norm_interior", "norm_full", "tolerance", "pass")


def fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    if isinstance(value, (list, tuple)):
        return " ".join(fmt(v) for v in value)
    return str(value)


def write_csv(path, header, rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])
    return path


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def write_json(path, obj) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(_plain(obj), indent=2, sort_keys=True, allow_nan=True) + "\n")
    return path


def write_records(path_stem, records, fmt_name: str = "csv", fields=REPORT_FIELDS) -> Path:
    """Write check records as ``<stem>.csv`` or ``<stem>.json``."""
    records = [_plain(r) for r in records]
    stem = Path(path_stem)
    if fmt_name == "json":
        return write_json(stem.with_suffix(".json"), records)
    if fmt_name != "csv":
        raise ValueError(f"unknown format {fmt_name!r}")
    return write_csv(stem.with_suffix(".csv"), fields, ([r.get(f, "") for f in fields] for r in records))


def write_kv_report(path, records) -> Path:
    """``key: value`` blocks, one per record, blank-line separated."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    blocks = []
    for r in records:
        blocks.append("\n".join(f"{k}: {fmt(v)}" for k, v in _plain(r).items()))
    path.write_text("\n\n".join(blocks) + "\n")
    return path


def write_manifest(path, config: dict, meta: dict | None = None) -> Path:
    """YAML manifest; ``config`` is loadable again with ``--config``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    doc = dict(_plain(config))
    if meta:
        doc["meta"] = _plain(meta)
    path.write_text(yaml.safe_dump(doc, sort_keys=True, default_flow_style=None))
    return path


def load_config(path) -> dict:
    """Flat key-value YAML; a ``meta`` block (from manifests) is ignored."""
    doc = yaml.safe_load(Path(path).read_text()) or {}
    if not isinstance(doc, dict):
        raise ValueError(f"{path}: config must be a key-value mapping")
    doc.pop("meta", None)
    return doc
