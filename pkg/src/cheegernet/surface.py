"""Pants-decomposition surface model.

A surface is specified combinatorially as a set of generalized Y-pieces
(three-holed spheres), each with three boundary slots.  Every slot is either
glued to another slot (sharing a closed geodesic of a given length), a cusp,
or open.  An open slot is a window edge: it marks a geodesic along which the
surface continues beyond the modelled window, so finite files can stand in
for infinite surfaces.  A spec with no open slots is a closed finite-area
surface.

Pieces are indexed 0..pieces-1, slots 0..2.  The pieces multigraph has one
node per piece and one edge per gluing (self-gluings are loops).

File format (JSON): {"pieces": int,
                     "gluings": [{"a": [piece, slot], "b": [piece, slot],
                                  "length": number}, ...],
                     "cusps": [[piece, slot], ...],
                     "opens": [{"at": [piece, slot], "length": number}, ...]}
with "opens" optional.  Family files carry the same shape plus
{"param": {"name": "n", "range": [lo, hi]}} and may give lengths as
expressions in the parameter (numbers, the parameter name, + - * / ^,
exp, ln, parentheses).
"""

from __future__ import annotations

import ast
import json
import math
from collections import OrderedDict
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Callable, Iterable, Iterator

from .hypmath import DomainError, check_margulis, collar_width, cusp_collar, delta1, thin_boundary_length, thin_collar_area, thin_half_width

__all__ = [
    "SpecError",
    "Slot",
    "Gluing",
    "OpenBoundary",
    "SurfaceSpec",
    "ThinCollar",
    "CuspCollarAt",
    "ThickThin",
    "BoundaryCurve",
    "GeodesicDomain",
    "Family",
    "validate",
    "require_valid",
    "piece_adjacency",
    "separating_gluings",
    "thick_thin",
    "domain_from_pieces",
    "boundary_length",
    "lambda_x",
    "connected_piece_subsets",
    "spec_to_dict",
    "spec_from_dict",
    "load_spec",
    "save_spec",
    "family_from_dict",
    "load_family",
    "eval_length_expr",
]

Slot = tuple[int, int]


class SpecError(ValueError):
    """Raised for malformed or invalid surface specifications."""


@dataclass(frozen=True, order=True)
class Gluing:
    """Two slots sharing a closed geodesic of the given length."""

    a: Slot
    b: Slot
    length: float


@dataclass(frozen=True, order=True)
class OpenBoundary:
    """A window-edge slot: the surface continues past this geodesic."""

    at: Slot
    length: float


@dataclass(frozen=True)
class SurfaceSpec:
    pieces: int
    gluings: tuple[Gluing, ...]
    cusps: tuple[Slot, ...]
    opens: tuple[OpenBoundary, ...] = ()

    def slots(self) -> Iterator[Slot]:
        for p in range(self.pieces):
            for s in range(3):
                yield (p, s)


def make_gluing(a: Slot, b: Slot, length: float) -> Gluing:
    """Gluing with endpoints in canonical (sorted) order."""
    a = (int(a[0]), int(a[1]))
    b = (int(b[0]), int(b[1]))
    if a == b:
        raise SpecError(f"gluing joins slot {a} to itself")
    if b < a:
        a, b = b, a
    return Gluing(a=a, b=b, length=float(length))


def make_spec(
    pieces: int,
    gluings: Iterable[tuple[Slot, Slot, float]],
    cusps: Iterable[Slot] = (),
    opens: Iterable[tuple[Slot, float]] = (),
) -> SurfaceSpec:
    """Convenience constructor used by the bundled family builders."""
    return SurfaceSpec(
        pieces=int(pieces),
        gluings=tuple(make_gluing(a, b, l) for a, b, l in gluings),
        cusps=tuple(sorted((int(p), int(s)) for p, s in cusps)),
        opens=tuple(OpenBoundary(at=(int(p), int(s)), length=float(l)) for (p, s), l in opens),
    )


@lru_cache(maxsize=256)
def validate(spec: SurfaceSpec) -> tuple[str, ...]:
    """All invariant violations of a spec, as precise messages.  Empty = valid."""
    out: list[str] = []
    if spec.pieces < 1:
        out.append(f"piece count must be >= 1, got {spec.pieces}")
        return tuple(out)

    ranges_ok = True

    def check_slot(slot: Slot, where: str) -> bool:
        nonlocal ranges_ok
        p, s = slot
        if not (0 <= p < spec.pieces and 0 <= s < 3):
            out.append(f"{where}: slot {slot} out of range for {spec.pieces} pieces")
            ranges_ok = False
            return False
        return True

    used: dict[Slot, list[str]] = {}

    def use(slot: Slot, where: str) -> None:
        if check_slot(slot, where):
            used.setdefault(slot, []).append(where)

    for i, g in enumerate(spec.gluings):
        use(g.a, f"gluing {i}")
        use(g.b, f"gluing {i}")
        if g.a == g.b:
            out.append(f"gluing {i} attaches slot {g.a} to itself")
        if not (math.isfinite(g.length) and g.length > 0.0):
            out.append(f"gluing {i} length must be positive, got {g.length!r}")
    for i, c in enumerate(spec.cusps):
        use(c, f"cusp {i}")
    for i, o in enumerate(spec.opens):
        use(o.at, f"open {i}")
        if not (math.isfinite(o.length) and o.length > 0.0):
            out.append(f"open {i} length must be positive, got {o.length!r}")

    for slot in spec.slots():
        owners = used.get(slot, [])
        if not owners:
            out.append(f"slot {slot} is neither glued, a cusp, nor open")
        elif len(owners) > 1:
            out.append(f"slot {slot} used more than once: {', '.join(owners)}")

    if spec.pieces > 1 and ranges_ok:
        adj = piece_adjacency(spec)
        seen = {0}
        stack = [0]
        while stack:
            p = stack.pop()
            for q, _ in adj[p]:
                if q not in seen:
                    seen.add(q)
                    stack.append(q)
        if len(seen) != spec.pieces:
            missing = sorted(set(range(spec.pieces)) - seen)
            out.append(f"pieces multigraph is disconnected; unreachable pieces {missing}")
    return tuple(out)


def require_valid(spec: SurfaceSpec) -> SurfaceSpec:
    problems = validate(spec)
    if problems:
        raise SpecError("invalid spec:\n" + "\n".join(problems))
    return spec


def piece_adjacency(spec: SurfaceSpec) -> list[list[tuple[int, int]]]:
    """Adjacency of the pieces multigraph: adj[p] lists (q, gluing_index)."""
    adj: list[list[tuple[int, int]]] = [[] for _ in range(spec.pieces)]
    for i, g in enumerate(spec.gluings):
        pa, pb = g.a[0], g.b[0]
        adj[pa].append((pb, i))
        if pb != pa:
            adj[pb].append((pa, i))
    return adj


# Domain enumeration calls domain_from_pieces once per subset, which would
# revalidate the full spec and rescan every gluing each time.  Memoize the
# validated per-piece tables per spec object; the stored spec reference keeps
# its id stable while cached.
_DOMAIN_TABLES: OrderedDict = OrderedDict()
_DOMAIN_TABLES_MAX = 64


def _domain_tables(spec: SurfaceSpec):
    """(nbrs, cross_gluings, cusp_counts, open_lists) per piece, validated."""
    key = id(spec)
    hit = _DOMAIN_TABLES.get(key)
    if hit is not None and hit[0] is spec:
        _DOMAIN_TABLES.move_to_end(key)
        return hit[1]
    require_valid(spec)
    nbrs = tuple(tuple(row) for row in piece_adjacency(spec))
    # Cross gluings only: a self-gluing has both endpoints inside whenever its
    # piece is, so it can never contribute a boundary curve.
    cross: list[list[tuple[int, int, float]]] = [[] for _ in range(spec.pieces)]
    for i, g in enumerate(spec.gluings):
        pa, pb = g.a[0], g.b[0]
        if pa != pb:
            cross[pa].append((pb, i, g.length))
            cross[pb].append((pa, i, g.length))
    cusp_counts = [0] * spec.pieces
    for c in spec.cusps:
        cusp_counts[c[0]] += 1
    open_lists: list[list[tuple[int, float]]] = [[] for _ in range(spec.pieces)]
    for i, o in enumerate(spec.opens):
        open_lists[o.at[0]].append((i, o.length))
    tables = (
        nbrs,
        tuple(tuple(row) for row in cross),
        tuple(cusp_counts),
        tuple(tuple(row) for row in open_lists),
    )
    _DOMAIN_TABLES[key] = (spec, tables)
    if len(_DOMAIN_TABLES) > _DOMAIN_TABLES_MAX:
        _DOMAIN_TABLES.popitem(last=False)
    return tables


def _connected_without(spec: SurfaceSpec, skip_gluing: int) -> bool:
    if spec.pieces <= 1:
        return True
    adj = piece_adjacency(spec)
    seen = {0}
    stack = [0]
    while stack:
        p = stack.pop()
        for q, gi in adj[p]:
            if gi != skip_gluing and q not in seen:
                seen.add(q)
                stack.append(q)
    return len(seen) == spec.pieces


def separating_gluings(spec: SurfaceSpec) -> frozenset[int]:
    """Indices of gluings whose geodesic separates the surface (bridges of the
    pieces multigraph).  Self-gluings and doubled gluings never separate."""
    require_valid(spec)
    return frozenset(
        i
        for i, g in enumerate(spec.gluings)
        if g.a[0] != g.b[0] and not _connected_without(spec, i)
    )


@dataclass(frozen=True)
class ThinCollar:
    gluing_index: int
    core_length: float
    half_width: float
    boundary_length: float  # each of the two collar boundary curves
    area: float
    is_separating: bool


@dataclass(frozen=True)
class CuspCollarAt:
    cusp: Slot
    lam: float  # boundary horocycle length; also the collar area


@dataclass(frozen=True)
class ThickThin:
    eps: float
    thin_collars: tuple[ThinCollar, ...]
    cusp_collars: tuple[CuspCollarAt, ...]

    def thin_indices(self) -> tuple[int, ...]:
        return tuple(sorted(t.gluing_index for t in self.thin_collars))


def thick_thin(spec: SurfaceSpec, eps: float) -> ThickThin:
    """Classify glued geodesics: a gluing is eps-thin iff its length < 2*eps."""
    require_valid(spec)
    eps = check_margulis(eps)
    seps = separating_gluings(spec)
    thin = tuple(
        ThinCollar(
            gluing_index=i,
            core_length=g.length,
            half_width=thin_half_width(g.length, eps),
            boundary_length=thin_boundary_length(g.length, eps),
            area=thin_collar_area(g.length, eps),
            is_separating=i in seps,
        )
        for i, g in enumerate(spec.gluings)
        if g.length < 2.0 * eps
    )
    lam = cusp_collar(eps).lam
    cusp_rows = tuple(CuspCollarAt(cusp=c, lam=lam) for c in spec.cusps)
    return ThickThin(eps=eps, thin_collars=thin, cusp_collars=cusp_rows)


@dataclass(frozen=True)
class BoundaryCurve:
    kind: str  # "gluing" or "open"
    index: int
    length: float


@dataclass(frozen=True)
class GeodesicDomain:
    piece_set: tuple[int, ...]
    boundary: tuple[BoundaryCurve, ...]
    boundary_count: int  # m, closed boundary geodesics
    cusp_count: int  # p, cusps inside the domain
    genus: int
    area: float


def domain_from_pieces(spec: SurfaceSpec, piece_set: Iterable[int]) -> GeodesicDomain:
    """Geodesic domain spanned by a connected set of pieces.

    The boundary consists of the gluings cut by the set plus the open curves
    of its pieces.  Area is 2*pi per piece, and the genus is recovered from
    m + p - 2 + 2g = #pieces.
    """
    nbrs, cross, cusp_counts, open_lists = _domain_tables(spec)
    inside = sorted(set(int(p) for p in piece_set))
    if not inside:
        raise SpecError("domain needs at least one piece")
    for p in inside:
        if not 0 <= p < spec.pieces:
            raise SpecError(f"piece {p} out of range")
    inset = set(inside)

    seen = {inside[0]}
    stack = [inside[0]]
    while stack:
        p = stack.pop()
        for q, _ in nbrs[p]:
            if q in inset and q not in seen:
                seen.add(q)
                stack.append(q)
    if seen != inset:
        raise SpecError(f"piece set {inside} is not connected")

    # Each cut gluing is discovered exactly once, from its inside endpoint;
    # re-sorting by index reproduces the scan order over spec.gluings so the
    # boundary tuple (and any length sum over it) is unchanged.
    cuts: list[tuple[int, float]] = []
    openings: list[tuple[int, float]] = []
    p_count = 0
    for p in inside:
        p_count += cusp_counts[p]
        openings.extend(open_lists[p])
        for q, gi, length in cross[p]:
            if q not in inset:
                cuts.append((gi, length))
    cuts.sort()
    openings.sort()
    boundary = [
        BoundaryCurve(kind="gluing", index=gi, length=length) for gi, length in cuts
    ]
    boundary.extend(
        BoundaryCurve(kind="open", index=i, length=length) for i, length in openings
    )

    m = len(boundary)
    k = len(inside)
    twice_g = k - m - p_count + 2
    if twice_g < 0 or twice_g % 2 != 0:
        raise SpecError(
            f"inconsistent domain topology: pieces={k}, m={m}, p={p_count}"
        )
    genus = twice_g // 2
    return GeodesicDomain(
        piece_set=tuple(inside),
        boundary=tuple(boundary),
        boundary_count=m,
        cusp_count=p_count,
        genus=genus,
        area=2.0 * math.pi * k,
    )


def boundary_length(domain: GeodesicDomain) -> float:
    return sum(c.length for c in domain.boundary)


def lambda_x(spec: SurfaceSpec, eps: float, delta: float) -> float:
    """Infimum of lengths of non-separating geodesics shorter than 2*delta;
    +inf when there are none.  Requires 0 < delta < delta1(eps)."""
    require_valid(spec)
    eps = check_margulis(eps)
    if not 0.0 < delta < delta1(eps):
        raise DomainError(
            f"delta must lie in (0, delta1(eps)) = (0, {delta1(eps)!r}), got {delta!r}"
        )
    seps = separating_gluings(spec)
    lengths = [
        g.length
        for i, g in enumerate(spec.gluings)
        if g.length < 2.0 * delta and i not in seps
    ]
    return min(lengths) if lengths else math.inf


def connected_piece_subsets(spec: SurfaceSpec, max_size: int) -> Iterator[tuple[int, ...]]:
    """All connected piece sets of size <= max_size, each exactly once,
    in deterministic order."""
    require_valid(spec)
    max_size = min(int(max_size), spec.pieces)
    if max_size < 1:
        return
    nbrs: list[set[int]] = [set() for _ in range(spec.pieces)]
    for g in spec.gluings:
        pa, pb = g.a[0], g.b[0]
        if pa != pb:
            nbrs[pa].add(pb)
            nbrs[pb].add(pa)

    def grow(members: list[int], frontier: list[int], banned: set[int]) -> Iterator[tuple[int, ...]]:
        yield tuple(sorted(members))
        if len(members) == max_size:
            return
        local_ban: set[int] = set()
        for idx, u in enumerate(frontier):
            new_frontier = frontier[idx + 1 :] + sorted(
                w
                for w in nbrs[u]
                if w > members[0]
                and w not in members
                and w not in banned
                and w not in local_ban
                and w not in frontier
            )
            yield from grow(members + [u], new_frontier, banned | local_ban)
            local_ban.add(u)

    for v0 in range(spec.pieces):
        start_frontier = sorted(w for w in nbrs[v0] if w > v0)
        yield from grow([v0], start_frontier, set())


# ---------------------------------------------------------------------------
# Serialization


def _slot_from_json(obj, where: str) -> Slot:
    if (
        not isinstance(obj, (list, tuple))
        or len(obj) != 2
        or not all(isinstance(x, int) for x in obj)
    ):
        raise SpecError(f"{where}: expected [piece, slot] pair, got {obj!r}")
    return (obj[0], obj[1])


def _length_from_json(obj, where: str) -> float:
    if isinstance(obj, bool) or not isinstance(obj, (int, float)):
        raise SpecError(
            f"{where}: expected a number, got {obj!r}"
            + (" (expressions are only allowed in family files)" if isinstance(obj, str) else "")
        )
    return float(obj)


def spec_from_dict(obj: dict) -> SurfaceSpec:
    if not isinstance(obj, dict):
        raise SpecError(f"spec must be a JSON object, got {type(obj).__name__}")
    for key in ("param", "family"):
        if key in obj:
            raise SpecError(f"found {key!r} key: this is a family file, use load_family")
    if "pieces" not in obj or not isinstance(obj["pieces"], int):
        raise SpecError("spec needs an integer 'pieces' count")
    for key in ("gluings", "cusps"):
        if key not in obj or not isinstance(obj[key], list):
            raise SpecError(f"spec needs a {key!r} list")
    gluings = []
    for i, g in enumerate(obj.get("gluings", [])):
        if not isinstance(g, dict) or not {"a", "b", "length"} <= set(g):
            raise SpecError(f"gluing {i}: expected object with 'a', 'b', 'length'")
        gluings.append(
            make_gluing(
                _slot_from_json(g["a"], f"gluing {i} 'a'"),
                _slot_from_json(g["b"], f"gluing {i} 'b'"),
                _length_from_json(g["length"], f"gluing {i} length"),
            )
        )
    cusps = tuple(
        sorted(_slot_from_json(c, f"cusp {i}") for i, c in enumerate(obj.get("cusps", [])))
    )
    opens = []
    for i, o in enumerate(obj.get("opens", [])):
        if not isinstance(o, dict) or not {"at", "length"} <= set(o):
            raise SpecError(f"open {i}: expected object with 'at', 'length'")
        opens.append(
            OpenBoundary(
                at=_slot_from_json(o["at"], f"open {i} 'at'"),
                length=_length_from_json(o["length"], f"open {i} length"),
            )
        )
    return SurfaceSpec(
        pieces=obj["pieces"], gluings=tuple(gluings), cusps=cusps, opens=tuple(opens)
    )


def spec_to_dict(spec: SurfaceSpec) -> dict:
    out: dict = {
        "pieces": spec.pieces,
        "gluings": [
            {"a": list(g.a), "b": list(g.b), "length": g.length} for g in spec.gluings
        ],
        "cusps": [list(c) for c in spec.cusps],
    }
    if spec.opens:
        out["opens"] = [{"at": list(o.at), "length": o.length} for o in spec.opens]
    return out


def load_spec(source: str | Path | dict) -> SurfaceSpec:
    if isinstance(source, dict):
        return spec_from_dict(source)
    text = Path(source).read_text()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"{source}: not valid JSON: {exc}") from exc
    return spec_from_dict(obj)


def save_spec(spec: SurfaceSpec, path: str | Path) -> None:
    Path(path).write_text(json.dumps(spec_to_dict(spec), sort_keys=True, indent=2) + "\n")


# ---------------------------------------------------------------------------
# Families

_EXPR_FUNCS = {"exp": math.exp, "ln": math.log}


def eval_length_expr(expr: float | str, param_name: str, value: float) -> float:
    """Evaluate a length expression in one parameter.

    Grammar: numbers, the parameter name, + - * / ^ (also **), unary minus,
    exp(...), ln(...), parentheses.
    """
    if isinstance(expr, (int, float)) and not isinstance(expr, bool):
        return float(expr)
    if not isinstance(expr, str):
        raise SpecError(f"length must be a number or expression string, got {expr!r}")
    try:
        tree = ast.parse(expr.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise SpecError(f"bad length expression {expr!r}: {exc}") from exc

    def ev(node: ast.AST) -> float:
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant):
            if isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
                return float(node.value)
            raise SpecError(f"bad constant {node.value!r} in {expr!r}")
        if isinstance(node, ast.Name):
            if node.id == param_name:
                return float(value)
            raise SpecError(f"unknown name {node.id!r} in {expr!r}")
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            ops = {
                ast.Add: lambda x, y: x + y,
                ast.Sub: lambda x, y: x - y,
                ast.Mult: lambda x, y: x * y,
                ast.Div: lambda x, y: x / y,
                ast.Pow: lambda x, y: x**y,
            }
            fn = ops.get(type(node.op))
            if fn is None:
                raise SpecError(f"operator {type(node.op).__name__} not allowed in {expr!r}")
            return fn(ev(node.left), ev(node.right))
        if (
            isinstance(node, ast.Call)
            and isinstance(node.func, ast.Name)
            and node.func.id in _EXPR_FUNCS
            and len(node.args) == 1
            and not node.keywords
        ):
            return _EXPR_FUNCS[node.func.id](ev(node.args[0]))
        raise SpecError(f"disallowed element in length expression {expr!r}")

    return ev(tree)


@dataclass(frozen=True)
class Family:
    """Parametrized family of surface specs (one spec per integer parameter)."""

    name: str
    param_name: str
    lo: int
    hi: int
    builder: Callable[[int], SurfaceSpec] = field(repr=False, compare=False)

    def values(self) -> range:
        return range(self.lo, self.hi + 1)

    def instance(self, value: int) -> SurfaceSpec:
        if not self.lo <= value <= self.hi:
            raise SpecError(
                f"family {self.name}: {self.param_name}={value} outside [{self.lo}, {self.hi}]"
            )
        return self.builder(value)


def _parse_param(obj: dict, where: str) -> tuple[str, int, int]:
    param = obj.get("param")
    if (
        not isinstance(param, dict)
        or not isinstance(param.get("name"), str)
        or not isinstance(param.get("range"), list)
        or len(param["range"]) != 2
        or not all(isinstance(x, int) for x in param["range"])
    ):
        raise SpecError(f"{where}: need 'param': {{'name': str, 'range': [lo, hi]}}")
    lo, hi = param["range"]
    if lo > hi:
        raise SpecError(f"{where}: empty parameter range [{lo}, {hi}]")
    return param["name"], lo, hi


def family_from_dict(obj: dict, name: str = "family") -> Family:
    """Family from a fixed-topology template whose lengths may be expressions
    in the parameter.  Builder-style files ({"family": ...}) are handled by
    :mod:`cheegernet.families`."""
    if not isinstance(obj, dict):
        raise SpecError(f"family must be a JSON object, got {type(obj).__name__}")
    if "family" in obj:
        raise SpecError("builder-style family file: use cheegernet.families.load_family")
    pname, lo, hi = _parse_param(obj, name)
    template = {k: v for k, v in obj.items() if k != "param"}

    def build(value: int) -> SurfaceSpec:
        inst = json.loads(json.dumps(template))
        for g in inst.get("gluings", []):
            if isinstance(g, dict) and "length" in g:
                g["length"] = eval_length_expr(g["length"], pname, value)
        for o in inst.get("opens", []):
            if isinstance(o, dict) and "length" in o:
                o["length"] = eval_length_expr(o["length"], pname, value)
        return spec_from_dict(inst)

    return Family(name=name, param_name=pname, lo=lo, hi=hi, builder=build)


def load_family(source: str | Path | dict, name: str | None = None) -> Family:
    if isinstance(source, dict):
        return family_from_dict(source, name or "family")
    path = Path(source)
    try:
        obj = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise SpecError(f"{source}: not valid JSON: {exc}") from exc
    return family_from_dict(obj, name or path.stem)
