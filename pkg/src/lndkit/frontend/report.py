"""Reports: per-command entries, rendered as text or as JSON.

The machine form is ``json.dumps`` with keys in insertion order, which
the runner keeps fixed, and it never includes timing, so equal inputs
give byte-identical output.  Exact numbers are written as strings
(``"3/2"``) to stay exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class Entry:
    command: str
    params: dict
    status: str  # "ok", "error", "expected-error", "unexpected-success"
    result: dict | None = None
    error: dict | None = None
    elapsed: float = 0.0

    @property
    def failed(self):
        return self.status in ("error", "unexpected-success")

    def exit_code(self):
        if self.status == "error":
            return self.error.get("exit_code", 1)
        if self.status == "unexpected-success":
            return 1
        return 0

    def to_dict(self):
        out = {"command": self.command, "params": dict(self.params), "status": self.status}
        if self.result is not None:
            out["result"] = self.result
        if self.error is not None:
            out["error"] = self.error
        return out


@dataclass
class Report:
    scenario: str
    header: dict
    validation: dict
    entries: list = field(default_factory=list)

    def exit_code(self):
        codes = [e.exit_code() for e in self.entries]
        if self.validation.get("status") == "rejected":
            codes.append(self.validation["error"].get("exit_code", 1))
        return max(codes, default=0)

    def to_dict(self):
        return {
            "scenario": self.scenario,
            "ring": self.header.get("ring"),
            "system": self.header.get("system"),
            "validation": self.validation,
            "entries": [e.to_dict() for e in self.entries],
        }

    def to_machine(self):
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=True) + "\n"

    def to_text(self):
        lines = [f"scenario {self.scenario}"]
        ring = self.header.get("ring") or {}
        if ring:
            text = f"Q[{', '.join(ring['variables'])}]"
            if ring.get("relation"):
                text += f" / ({ring['relation']})"
            lines.append(f"  ring {text}")
        v = self.validation
        if v.get("status") == "rejected":
            err = v["error"]
            lines.append(f"  REJECTED [{err['class']}] {err['message']}")
        for e in self.entries:
            params = " ".join(f"{k}={val}" for k, val in e.params.items())
            head = f"== {e.command} {params}".rstrip()
            lines.append(f"{head}  [{e.status}, {e.elapsed:.3f} s]")
            if e.error is not None:
                lines.append(f"  {e.error['class']}: {e.error['message']}")
            if e.result is not None:
                lines.extend(render(e.result, 1))
        return "\n".join(lines) + "\n"


def error_dict(exc):
    out = {"class": type(exc).__name__, "message": str(exc), "exit_code": getattr(exc, "exit_code", 1)}
    for attr in ("witness", "generator", "alpha", "indices", "offset"):
        val = getattr(exc, attr, None)
        if val is not None and val != ():
            out[attr] = val if isinstance(val, int) else (
                [str(v) for v in val] if isinstance(val, (list, tuple)) else str(val)
            )
    return out


def _is_table(value):
    return (
        isinstance(value, list) and value and all(isinstance(r, dict) for r in value)
        and all(list(r) == list(value[0]) for r in value)
        and all(not isinstance(v, (dict, list)) for r in value for v in r.values())
    )


def _cell(v):
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    return str(v)


def render(value, depth=0):
    pad = "  " * depth
    lines = []
    if isinstance(value, dict):
        for k, v in value.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.extend(render(v, depth + 1))
            else:
                lines.append(f"{pad}{k}: {_cell(v) if not isinstance(v, (dict, list)) else '[]'}")
    elif _is_table(value):
        keys = list(value[0])
        rows = [[_cell(r[k]) for k in keys] for r in value]
        widths = [max(len(k), *(len(r[j]) for r in rows)) for j, k in enumerate(keys)]
        lines.append((pad + "  ".join(k.ljust(w) for k, w in zip(keys, widths))).rstrip())
        for r in rows:
            lines.append((pad + "  ".join(c.ljust(w) for c, w in zip(r, widths))).rstrip())
    elif isinstance(value, list):
        for v in value:
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}-")
                lines.extend(render(v, depth + 1))
            else:
                lines.append(f"{pad}- {_cell(v)}")
    else:
        lines.append(pad + _cell(value))
    return lines
