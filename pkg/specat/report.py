"""Versioned machine-readable reports and their text rendering."""

from __future__ import annotations

import json
from typing import Any, Dict, List, Mapping, Optional

from .catcore import FiniteCategory, FunctorData, GroupTable, Subcategory

SCHEMA_VERSION = 1


def to_jsonable(value: Any) -> Any:
    """Plain data for categories, functors, groups and containers; keys are sorted on dump."""

    if isinstance(value, FiniteCategory):
        raw = value.describe()
        return {
            "name": raw.name,
            "objects": list(raw.objects),
            "morphisms": [list(m) for m in raw.morphisms],
            "compositions": [list(c) for c in raw.compositions],
        }
    if isinstance(value, Subcategory):
        return {"objects": sorted(value.objects), "morphisms": sorted(value.morphisms)}
    if isinstance(value, FunctorData):
        return {
            "source": value.source.name,
            "target": value.target.name,
            "objects": dict(sorted(value.object_map.items())),
            "morphisms": dict(sorted(value.morphism_map.items())),
        }
    if isinstance(value, GroupTable):
        return {
            "elements": list(value.elements),
            "identity": value.identity,
            "product": [[a, b, c] for (a, b), c in sorted(value.product.items())],
        }
    if isinstance(value, Mapping):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = [to_jsonable(v) for v in value]
        return sorted(items, key=repr) if isinstance(value, (set, frozenset)) else items
    return value


def build_report(
    command: str,
    inputs: Mapping[str, Any],
    verdict: Any,
    witnesses: Optional[Mapping[str, Any]] = None,
    timings: Optional[Mapping[str, float]] = None,
    seed: Optional[int] = None,
    error: Optional[str] = None,
) -> Dict[str, Any]:
    report: Dict[str, Any] = {
        "schema": SCHEMA_VERSION,
        "command": command,
        "inputs": to_jsonable(dict(inputs)),
        "verdict": to_jsonable(verdict),
        "witnesses": to_jsonable(dict(witnesses or {})),
        "timings_ms": {k: round(v, 3) for k, v in sorted((timings or {}).items())},
        "seed": seed,
    }
    if error is not None:
        report["error"] = error
    return report


def dump_json(report: Mapping[str, Any]) -> str:
    return json.dumps(report, ensure_ascii=False, sort_keys=True, indent=2) + "\n"


def _lines(value: Any, indent: int) -> List[str]:
    pad = "  " * indent
    if isinstance(value, Mapping):
        out: List[str] = []
        for key, item in value.items():
            if isinstance(item, (Mapping, list)) and item:
                out.append(f"{pad}{key}:")
                out.extend(_lines(item, indent + 1))
            else:
                out.append(f"{pad}{key}: {_scalar(item)}")
        return out
    if isinstance(value, list):
        out = []
        for item in value:
            if isinstance(item, Mapping) and item:
                out.append(f"{pad}-")
                out.extend(_lines(item, indent + 1))
            else:
                out.append(f"{pad}- {_scalar(item)}")
        return out
    return [f"{pad}{_scalar(value)}"]


def _scalar(value: Any) -> str:
    if isinstance(value, list):
        return " ".join(_scalar(v) for v in value) if value else "(none)"
    if isinstance(value, Mapping):
        return "(none)"
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "yes" if value else "no"
    return str(value)


def render_text(report: Mapping[str, Any]) -> str:
    """Human-oriented rendering; not a stable format."""

    lines = [f"{report['command']}"]
    if report.get("error"):
        lines.append(f"error: {report['error']}")
    lines.append("verdict:")
    lines.extend(_lines(report.get("verdict"), 1))
    if report.get("witnesses"):
        lines.append("witnesses:")
        lines.extend(_lines(report["witnesses"], 1))
    if report.get("timings_ms"):
        lines.append("timings (ms):")
        lines.extend(_lines(report["timings_ms"], 1))
    return "\n".join(lines) + "\n"
