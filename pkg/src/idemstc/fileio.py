"""JSON interchange for constellations and quality reports.

Constellation file (``format_version`` "1")::

    {
      "format_version": "1",
      "order": 2,
      "matrices": [{"label": "U_0", "rows": [[[1.0, 0.0], [0.0, 0.0]], ...]}, ...],
      "metadata": {"family": "angle", "params": {"n": 5}, "chain": []}
    }

Each entry is a ``[re, im]`` pair.  Floats are written with ``repr``, the
shortest decimal that reads back to the same double, so a write/read cycle
is bit-exact.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from .constellations import Constellation
from .errors import IdemError

FORMAT_VERSION = "1"


class FileFormatError(IdemError, ValueError):
    pass


def matrix_rows(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def constellation_to_dict(c: Constellation) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "order": c.order,
        "matrices": [{"label": lab, "rows": matrix_rows(m)} for lab, m in zip(c.labels, c.matrices)],
        "metadata": {"family": c.family, "params": c.params, "chain": list(c.chain)},
    }


def constellation_from_dict(data: Any) -> Constellation:
    """Parse and structurally check a constellation document.

    Unitarity and distinctness are *not* enforced here; see
    :meth:`Constellation.validate` and the ``verify`` command.
    """
    if not isinstance(data, dict):
        raise FileFormatError("top level must be an object")
    if str(data.get("format_version")) != FORMAT_VERSION:
        raise FileFormatError(f"unsupported format_version {data.get('format_version')!r}")
    order = data.get("order")
    if not isinstance(order, int) or order < 1:
        raise FileFormatError("order must be a positive integer")
    mats = data.get("matrices")
    if not isinstance(mats, list) or not mats:
        raise FileFormatError("matrices must be a non-empty list")
    labels, arrays = [], []
    for k, entry in enumerate(mats):
        if not isinstance(entry, dict) or "rows" not in entry:
            raise FileFormatError(f"matrix {k}: expected an object with 'label' and 'rows'")
        label = str(entry.get("label", k))
        rows = entry["rows"]
        if not isinstance(rows, list) or len(rows) != order:
            raise FileFormatError(f"matrix {label}: expected {order} rows")
        arr = np.empty((order, order), dtype=np.complex128)
        for i, row in enumerate(rows):
            if not isinstance(row, list) or len(row) != order:
                raise FileFormatError(f"matrix {label}: row {i} must have {order} entries")
            for j, z in enumerate(row):
                if (
                    not isinstance(z, list)
                    or len(z) != 2
                    or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in z)
                ):
                    raise FileFormatError(f"matrix {label}: entry ({i},{j}) must be [re, im]")
                arr[i, j] = complex(z[0], z[1])
        if not np.all(np.isfinite(arr)):
            raise FileFormatError(f"matrix {label}: non-finite entry")
        labels.append(label)
        arrays.append(arr)
    if len(set(labels)) != len(labels):
        raise FileFormatError("labels must be unique")
    meta = data.get("metadata") or {}
    if not isinstance(meta, dict):
        raise FileFormatError("metadata must be an object")
    return Constellation(
        tuple(arrays),
        tuple(labels),
        str(meta.get("family", "")),
        dict(meta.get("params") or {}),
        tuple(meta.get("chain") or ()),
    )


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=1, ensure_ascii=False, allow_nan=False) + "\n"


def write_json(path: str | Path, obj: Any) -> None:
    Path(path).write_text(dumps(obj), encoding="utf-8")


def read_json(path: str | Path) -> Any:
    text = Path(path).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{path}: invalid JSON ({exc})") from exc


def load_constellation(path: str | Path) -> Constellation:
    return constellation_from_dict(read_json(path))


def save_constellation(path: str | Path, c: Constellation) -> None:
    write_json(path, constellation_to_dict(c))
