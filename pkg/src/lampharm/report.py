"""Structured experiment reports: a manifest sufficient for exact
reruns, named numeric series, and pass/fail verdicts that carry their
thresholds. Serialization is deterministic (sorted keys, fixed float
format, no timestamps) so identical runs produce identical bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

TOOL_VERSION = "0.1.0"
FLOAT_FMT = "%.17g"


def fmt_value(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return FLOAT_FMT % v
    return str(v)


@dataclass
class ExperimentReport:
    """Manifest + series + verdicts for one command run.

    series maps a name to a list of (parameter, value) pairs; verdicts
    map a name to a dict with passed, threshold, and value entries.
    """

    manifest: dict = field(default_factory=dict)
    series: dict = field(default_factory=dict)
    verdicts: dict = field(default_factory=dict)

    def __post_init__(self):
        self.manifest.setdefault("tool_version", TOOL_VERSION)

    def add_series(self, name, pairs):
        self.series[name] = [(p, v) for p, v in pairs]

    def add_verdict(self, name, passed, threshold, value, note=""):
        self.verdicts[name] = {
            "passed": bool(passed),
            "threshold": threshold,
            "value": value,
            "note": note,
        }

    @property
    def all_passed(self):
        return all(v["passed"] for v in self.verdicts.values())

    def to_json(self):
        blob = {
            "manifest": self.manifest,
            "series": {
                name: [[p, v] for p, v in pairs]
                for name, pairs in self.series.items()
            },
            "verdicts": self.verdicts,
        }
        return json.dumps(blob, sort_keys=True, indent=2)

    def to_csv(self):
        lines = ["series,parameter,value"]
        for name in sorted(self.series):
            for p, v in self.series[name]:
                lines.append(f"{name},{fmt_value(p)},{fmt_value(v)}")
        return "\n".join(lines) + "\n"


def write_csv(path, header, rows):
    """Plain CSV with the fixed float format; returns the text written."""
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt_value(v) for v in row))
    text = "\n".join(lines) + "\n"
    with open(path, "w") as fh:
        fh.write(text)
    return text


def dirichlet_json(descriptor, R, p, boundary_values, solution, residual,
                   energy):
    """Serialized Dirichlet problem and result."""
    blob = {
        "graph": descriptor,
        "R": R,
        "p": p,
        "boundary": [[int(i), float(v)] for i, v in sorted(boundary_values.items())],
        "solution": [float(v) for v in solution],
        "residual": float(residual),
        "energy": float(energy),
    }
    return json.dumps(blob, sort_keys=True, indent=2)
