"""JSON configuration grammar for graph families.

Descriptors are plain dicts, e.g.

    {"family": "line"}
    {"family": "cycle", "n": 5}
    {"family": "grid", "d": 2}
    {"family": "free_group", "rank": 2}
    {"family": "caterpillar"}
    {"family": "product", "left": {...}, "right": {...}}
    {"family": "lamplighter", "lamp": {"family": "path", "n": 2},
     "space": {"family": "line"}, "root": 0}

The lamplighter root is a vertex of the lamp graph, written as an integer
or a list of integers (IntPoint coordinates).
"""

from __future__ import annotations

import json

from .graphs import (
    GraphOracle,
    caterpillar_graph,
    cycle_graph,
    direct_product,
    free_group_graph,
    grid_graph,
    lamplighter,
    line_graph,
    path_graph,
)
from .keys import IntPoint

FAMILIES = (
    "line",
    "cycle",
    "path",
    "grid",
    "free_group",
    "caterpillar",
    "product",
    "lamplighter",
)


class DescriptorError(ValueError):
    """Malformed graph descriptor."""


def _require(desc, key, kind=int):
    if key not in desc:
        raise DescriptorError(f"descriptor {desc!r} is missing '{key}'")
    v = desc[key]
    if not isinstance(v, kind):
        raise DescriptorError(
            f"'{key}' must be {kind.__name__}, got {v!r}"
        )
    return v


def _parse_root(value):
    if isinstance(value, int):
        return IntPoint((value,))
    if isinstance(value, (list, tuple)) and all(isinstance(c, int) for c in value):
        return IntPoint(tuple(value))
    raise DescriptorError(f"cannot parse root vertex {value!r}")


def parse_descriptor(desc) -> GraphOracle:
    """Build a GraphOracle from a descriptor dict (or JSON string)."""
    if isinstance(desc, str):
        try:
            desc = json.loads(desc)
        except json.JSONDecodeError as e:
            raise DescriptorError(f"descriptor is not valid JSON: {e}")
    if not isinstance(desc, dict):
        raise DescriptorError(f"descriptor must be an object, got {type(desc)}")
    family = desc.get("family")
    if family == "line":
        return line_graph()
    if family == "cycle":
        return cycle_graph(_require(desc, "n"))
    if family == "path":
        return path_graph(_require(desc, "n"))
    if family == "grid":
        return grid_graph(_require(desc, "d"))
    if family == "free_group":
        return free_group_graph(_require(desc, "rank"))
    if family == "caterpillar":
        return caterpillar_graph()
    if family == "product":
        left = parse_descriptor(_require(desc, "left", kind=dict))
        right = parse_descriptor(_require(desc, "right", kind=dict))
        return direct_product(left, right)
    if family == "lamplighter":
        lamp = parse_descriptor(_require(desc, "lamp", kind=dict))
        space = parse_descriptor(_require(desc, "space", kind=dict))
        root = _parse_root(desc.get("root", 0))
        return lamplighter(lamp, space, root)
    raise DescriptorError(
        f"unknown family {family!r}; known families: {', '.join(FAMILIES)}"
    )


def load_descriptor_file(path) -> GraphOracle:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_descriptor(json.load(fh))
