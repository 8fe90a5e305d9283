"""Report documents: JSON with 17 significant digits, CSV face/edge tables."""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from numbers import Integral, Real
from pathlib import Path
from typing import Any, Optional

from .bounds import SampleSummary
from .optimize import OptimizationReport

CSV_COLUMNS = ["class", "q", "table", "id", "max", "p", "x", "y"]


def _number(v: float) -> str:
    if not math.isfinite(v):
        return "null"
    text = format(float(v), ".17g")
    if not any(c in text for c in ".en"):
        text += ".0"
    return text


def to_json(obj: Any, indent: int = 2) -> str:
    """Serialize ``obj`` as JSON, writing every float with 17 significant digits.

    17 digits make ``float(text) == value`` hold exactly, so a report read
    back reproduces its numbers bit for bit.
    """

    def enc(o, level):
        pad = " " * (indent * (level + 1))
        end = " " * (indent * level)
        if o is None or isinstance(o, bool):
            return json.dumps(o)
        if isinstance(o, Integral):
            return str(int(o))
        if isinstance(o, Real):
            return _number(o)
        if isinstance(o, str):
            return json.dumps(o, ensure_ascii=False)
        if isinstance(o, dict):
            if not o:
                return "{}"
            items = [f"{pad}{json.dumps(str(k))}: {enc(v, level + 1)}" for k, v in o.items()]
            return "{\n" + ",\n".join(items) + "\n" + end + "}"
        if isinstance(o, (list, tuple)):
            if not o:
                return "[]"
            return "[\n" + ",\n".join(pad + enc(v, level + 1) for v in o) + "\n" + end + "]"
        raise TypeError(f"cannot serialize {type(o).__name__}")

    return enc(obj, 0) + "\n"


def _class_fields(tag) -> dict:
    out = {"class": "star" if tag.is_star else "qstar"}
    if not tag.is_star:
        out["q"] = tag.q
    return out


def _table(entries) -> list[dict]:
    return [{"id": e.id, "max": e.value, "argmax": e.point.as_dict()} for e in entries]


def samples_dict(summary: Optional[SampleSummary]) -> Optional[dict]:
    if summary is None:
        return None
    return {
        "count": summary.count,
        "max_observed_h3": summary.max_observed_h3,
        "seed": summary.seed,
        "min_slack": summary.min_slack,
        "max_bound_excess": summary.max_bound_excess,
        "domination_violations": summary.domination_violations,
        "bound_violations": summary.bound_violations,
    }


def report_to_dict(report: OptimizationReport, samples: Optional[SampleSummary] = None,
                   wall_time_ms: Optional[float] = None) -> dict:
    doc = _class_fields(report.tag)
    doc.update({
        "bound_closed_form": report.bound_closed_form,
        "bound_numeric": report.max_value,
        "argmax": report.argmax.as_dict(),
        "stage": report.stage.value,
        "face_table": _table(report.face_table),
        "edge_table": _table(report.edge_table),
        "extremal_h3": report.extremal_h3,
        "samples": samples_dict(samples),
        "tolerance": report.tolerance_estimate,
        "grid_initial": report.grid_initial,
        "refinement_rounds": report.refinement_rounds,
        "seeds": list(report.seeds) + ([samples.seed] if samples is not None else []),
        "wall_time_ms": wall_time_ms,
    })
    return doc


def csv_rows(doc: dict) -> list[dict]:
    """Flatten the face/edge tables of a report (or of each record) into rows."""
    records = doc.get("records", [doc])
    rows = []
    for rec in records:
        for table in ("face_table", "edge_table"):
            for e in rec.get(table) or []:
                rows.append({
                    "class": rec.get("class", ""),
                    "q": rec.get("q", ""),
                    "table": table.split("_")[0],
                    "id": e["id"],
                    "max": _number(e["max"]),
                    "p": _number(e["argmax"]["p"]),
                    "x": _number(e["argmax"]["x"]),
                    "y": _number(e["argmax"]["y"]),
                })
    for r in rows:
        if r["q"] != "":
            r["q"] = _number(r["q"])
    return rows


def to_csv(doc: dict) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(csv_rows(doc))
    return buf.getvalue()


def emit_report(doc: dict, fmt: str = "json", path: str = "-") -> None:
    """Write ``doc`` to ``path`` (``"-"`` for standard output) as JSON or CSV.

    Write failures surface as :class:`OSError`.
    """
    fmt = fmt.lower()
    if fmt == "json":
        text = to_json(doc)
    elif fmt == "csv":
        text = to_csv(doc)
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    if path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    Path(path).write_text(text, encoding="utf-8")


def load_report(path: str) -> dict:
    if path == "-":
        return json.load(sys.stdin)
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)
