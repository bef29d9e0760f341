"""Bundled surface families.

Each builder returns a window spec for one integer parameter value:

* ``flute``: chain of one-cusp pieces, all curve lengths 1.  The best
  domain is the whole window, with isoperimetric ratio 1/(pi*n).
* ``shrinking_flute``: same chain with gluing lengths 1/n^2 and window
  anchors of length 1/n, so interior domains have only short boundary
  components and the regularity constant collapses.
* ``pants_tree``: window of the surface glued along a 3-regular tree,
  parameter = tree depth.  Isoperimetric ratios stay bounded below.
* ``genus_ladder``: consecutive pieces doubly glued, one strand of each
  rung short and non-separating; parameter = number of rungs (= genus).

Builder-style family files are JSON objects
{"family": "<builder name>", "param": {"name": "n", "range": [lo, hi]}};
fixed-topology family files with length expressions are handled by
:func:`cheegernet.surface.family_from_dict`.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .surface import Family, SpecError, SurfaceSpec, family_from_dict, make_spec

__all__ = [
    "flute",
    "shrinking_flute",
    "pants_tree",
    "genus_ladder",
    "BUILDERS",
    "load_family",
    "bundled_path",
    "bundled_families",
]


def flute(n: int) -> SurfaceSpec:
    """Chain of n one-cusp pieces; gluings and window anchors of length 1."""
    if n < 1:
        raise SpecError(f"flute needs n >= 1, got {n}")
    gluings = [((i, 1), (i + 1, 0), 1.0) for i in range(n - 1)]
    cusps = [(i, 2) for i in range(n)]
    opens = [((0, 0), 1.0), ((n - 1, 1), 1.0)]
    return make_spec(n, gluings, cusps, opens)


def shrinking_flute(n: int) -> SurfaceSpec:
    """Flute chain with gluing lengths 1/n^2 and anchor lengths 1/n."""
    if n < 2:
        raise SpecError(f"shrinking_flute needs n >= 2, got {n}")
    short = 1.0 / (n * n)
    gluings = [((i, 1), (i + 1, 0), short) for i in range(n - 1)]
    cusps = [(i, 2) for i in range(n)]
    opens = [((0, 0), 1.0 / n), ((n - 1, 1), 1.0 / n)]
    return make_spec(n, gluings, cusps, opens)


def pants_tree(depth: int) -> SurfaceSpec:
    """Window of the 3-regular-tree gluing: root piece with three subtrees
    of the given depth minus one; leaf slots stay open.  All lengths 1."""
    if depth < 1:
        raise SpecError(f"pants_tree needs depth >= 1, got {depth}")
    gluings: list[tuple[tuple[int, int], tuple[int, int], float]] = []
    opens: list[tuple[tuple[int, int], float]] = []
    # Pieces are allocated in BFS order; the root uses all three slots for
    # children, every other piece uses slot 0 for its parent.
    next_id = 1
    frontier = [(0, s, depth - 1) for s in range(3)]
    while frontier:
        parent, slot, levels = frontier.pop(0)
        if levels == 0:
            opens.append(((parent, slot), 1.0))
            continue
        child = next_id
        next_id += 1
        gluings.append(((parent, slot), (child, 0), 1.0))
        frontier.extend((child, s, levels - 1) for s in (1, 2))
    return make_spec(next_id, gluings, cusps=[], opens=opens)


def genus_ladder(n: int) -> SurfaceSpec:
    """2n pieces; pieces 2i and 2i+1 share two gluings (lengths 1 and
    1/(4n)), consecutive pairs share one (length 1); anchors length 1."""
    if n < 1:
        raise SpecError(f"genus_ladder needs n >= 1, got {n}")
    short = 1.0 / (4.0 * n)
    gluings: list[tuple[tuple[int, int], tuple[int, int], float]] = []
    for i in range(n):
        a, b = 2 * i, 2 * i + 1
        gluings.append(((a, 1), (b, 0), 1.0))
        gluings.append(((a, 2), (b, 1), short))
        if i + 1 < n:
            gluings.append(((b, 2), (2 * i + 2, 0), 1.0))
    opens = [((0, 0), 1.0), ((2 * n - 1, 2), 1.0)]
    return make_spec(2 * n, gluings, cusps=[], opens=opens)


BUILDERS = {
    "flute": flute,
    "shrinking_flute": shrinking_flute,
    "pants_tree": pants_tree,
    "genus_ladder": genus_ladder,
}


def load_family(source: str | Path | dict, name: str | None = None) -> Family:
    """Load either style of family file (builder reference or fixed-topology
    template with length expressions)."""
    if isinstance(source, dict):
        obj = source
        default_name = name or "family"
    else:
        path = Path(source)
        try:
            obj = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise SpecError(f"{source}: not valid JSON: {exc}") from exc
        default_name = name or path.stem
    if not isinstance(obj, dict):
        raise SpecError(f"family must be a JSON object, got {type(obj).__name__}")
    if "family" in obj:
        builder_name = obj["family"]
        builder = BUILDERS.get(builder_name)
        if builder is None:
            raise SpecError(
                f"unknown family builder {builder_name!r}; known: {sorted(BUILDERS)}"
            )
        from .surface import _parse_param

        pname, lo, hi = _parse_param(obj, default_name)
        return Family(name=builder_name, param_name=pname, lo=lo, hi=hi, builder=builder)
    return family_from_dict(obj, default_name)


def bundled_path(filename: str) -> Path:
    """Filesystem path of a bundled data file."""
    return Path(str(resources.files("cheegernet").joinpath("data", filename)))


def bundled_families() -> dict[str, Path]:
    """The four shipped family files, keyed by builder name."""
    return {
        "flute": bundled_path("flute.family.json"),
        "shrinking_flute": bundled_path("shrinking.family.json"),
        "pants_tree": bundled_path("tree.family.json"),
        "genus_ladder": bundled_path("genus.family.json"),
    }
