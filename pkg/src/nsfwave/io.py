"""CSV and JSON writers with config hashes and deterministic formatting."""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, is_dataclass
from pathlib import Path

import numpy as np

FLOAT_FMT = "{:.17g}"


def _plain(obj):
    """Convert dataclasses, tuples and numpy scalars/arrays to JSON-ready values."""
    if is_dataclass(obj) and not isinstance(obj, type):
        return _plain(asdict(obj))
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else str(x)
    return obj


def dumps(obj) -> str:
    return json.dumps(_plain(obj), sort_keys=True, indent=2, ensure_ascii=False)


def config_hash(config) -> str:
    """Short sha256 of the canonical JSON form of ``config``."""
    canon = json.dumps(_plain(config), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()[:16]


def write_json(path, obj) -> Path:
    path = Path(path)
    path.write_text(dumps(obj) + "\n", encoding="utf-8")
    return path


def write_csv(path, columns, rows, meta: dict | None = None) -> Path:
    """Comma-separated table with ``# key: value`` metadata lines and 17-digit floats."""
    path = Path(path)
    lines = [f"# {k}: {v}" for k, v in (meta or {}).items()]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(FLOAT_FMT.format(float(x)) for x in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def write_columns(path, data: dict, meta: dict | None = None) -> Path:
    cols = list(data)
    arrays = [np.asarray(data[c], dtype=float) for c in cols]
    return write_csv(path, cols, zip(*arrays), meta)


def read_csv(path):
    """Inverse of :func:`write_csv`: returns (meta, columns, array)."""
    meta, header, rows = {}, None, []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.startswith("#"):
            k, _, v = line[1:].partition(":")
            meta[k.strip()] = v.strip()
        elif header is None:
            header = line.split(",")
        elif line:
            rows.append([float(x) for x in line.split(",")])
    return meta, header, np.array(rows).reshape(-1, len(header or []))
