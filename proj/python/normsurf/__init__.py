"""Normal and almost normal surfaces in triangulated 3-manifolds."""

from ._core import (
    Error,
    Triangulation,
    balanced_reduce,
    carrier,
    classify,
    decompose,
    enumerate,
    euler,
    flare_check,
    genus_scan,
    haken_sum,
    intersect,
    is_admissible,
    matching_system,
    regular_check,
    vertex_link,
    weight,
)


def load(path):
    """Read a triangulation JSON file."""
    with open(path, encoding="utf-8") as fh:
        return Triangulation.parse(fh.read())


__all__ = [
    "Error",
    "Triangulation",
    "balanced_reduce",
    "carrier",
    "classify",
    "decompose",
    "enumerate",
    "euler",
    "flare_check",
    "genus_scan",
    "haken_sum",
    "intersect",
    "is_admissible",
    "load",
    "matching_system",
    "regular_check",
    "vertex_link",
    "weight",
]
