"""Distribution and witness files.

Distribution CSV: one distribution per row, entries as decimal floats. Files
holding incomplete distributions start with a ``# q=<value>`` line.

A witness is written as a two-row distribution CSV (``p`` then ``p2``) plus a
JSON sidecar with the same stem holding q, alpha, delta, ratio, N and the
construction metadata.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Iterable, TextIO

import numpy as np

from .errors import DomainError
from .simplex import COMPLETE, INCOMPLETE, Distribution, make_distribution


def fmt(x: float) -> str:
    """Shortest-safe round-trippable decimal (17 significant digits)."""
    return format(float(x), ".17g")


def write_distributions(rows: Iterable, out: TextIO, q: float | None = None) -> None:
    if q is not None:
        out.write(f"# q={fmt(q)}\n")
    writer = csv.writer(out, lineterminator="\n")
    for row in rows:
        writer.writerow([fmt(x) for x in np.ravel(getattr(row, "p", row))])


def parse_distributions(text: str) -> list[Distribution]:
    q = None
    rows = []
    for line in text.splitlines():
        s = line.strip()
        if not s:
            continue
        if s.startswith("#"):
            body = s[1:].strip()
            if body.startswith("q="):
                try:
                    q = float(body[2:])
                except ValueError as exc:
                    raise DomainError(f"bad q header: {line!r}") from exc
            continue
        rows.append(next(csv.reader(io.StringIO(s))))
    kind = COMPLETE if q is None else INCOMPLETE
    out = []
    for r in rows:
        try:
            values = [float(x) for x in r]
        except ValueError as exc:
            raise DomainError(f"non-numeric entry in row {r!r}") from exc
        out.append(make_distribution(values, kind, q))
    return out


def read_distributions(path: str | Path) -> list[Distribution]:
    return parse_distributions(Path(path).read_text(encoding="utf-8"))


def sidecar_path(path: str | Path) -> Path:
    return Path(path).with_suffix(".json")


def write_witness(witness, path: str | Path) -> tuple[Path, Path]:
    """Write the dense pair to ``path`` and the metadata to ``path`` with a ``.json`` suffix."""
    path = Path(path)
    p, p2 = witness.dense()
    q = witness.functional.q if witness.kind == INCOMPLETE else None
    with path.open("w", encoding="utf-8", newline="") as fh:
        write_distributions([p, p2], fh, q=q)
    side = sidecar_path(path)
    meta = witness.summary()
    if witness.observable is not None:
        meta["observable"] = witness.dense_observable().tolist()
        meta["functional"] = dict(meta["functional"], observable=meta["observable"])
    side.write_text(json.dumps(meta, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    return path, side
