"""Net graphs of decorated surfaces and their quotient meshes.

A net places one hub per piece, a ring of samples along every boundary
curve at roughly one sample per delta of length, and a special vertex per
cusp and per delta-thin geodesic.  Special vertices stand for the deep
ends the net cannot reach; they attach only to ring samples, never to each
other, and distinct specials never share a neighbor.

The quotient mesh realizes the surgery that removes thin collars: the two
rings around a delta-thin geodesic collapse to a single ring, cusp rings
lose their special, and everything is refined so mesh distances can be
compared against net distances through the inclusion map.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np

from .graphtools import CheegerReport, Graph, cheeger
from .hypmath import (
    DomainError,
    check_margulis,
    collar_width,
    cusp_collar,
    delta1,
    thin_boundary_length,
)
from .surface import Slot, SurfaceSpec, require_valid

__all__ = [
    "NetBuildParams",
    "RingInfo",
    "NetGraph",
    "build_net",
    "degree_bound",
    "max_degree",
    "BoundarySets",
    "boundary_vertex_set",
    "interior_vertices",
    "net_cheeger_estimate",
    "build_quotient_mesh",
    "QIReport",
    "minimal_beta",
    "estimate_qi_constants",
    "to_edgelist",
    "parse_edgelist",
    "to_dot",
]


@dataclass(frozen=True)
class NetBuildParams:
    eps: float
    delta: float
    samples_per_unit_length: float = 1.0

    def __post_init__(self):
        check_margulis(self.eps)
        if not 0.0 < self.delta < delta1(self.eps):
            raise DomainError(
                f"delta must lie in (0, delta1(eps)) = "
                f"(0, {delta1(self.eps)!r}), got {self.delta!r}"
            )
        if not (math.isfinite(self.samples_per_unit_length) and self.samples_per_unit_length > 0):
            raise DomainError("samples_per_unit_length must be positive")

    @property
    def density(self) -> float:
        return max(1.0 / self.delta, self.samples_per_unit_length)


@dataclass(frozen=True)
class RingInfo:
    kind: str  # "thick" | "thin_side" | "cusp" | "open"
    slot: Slot  # owning slot; label namespace for the samples
    gluing_index: int | None
    length: float
    labels: tuple
    pieces: tuple  # pieces this curve is incident to


@dataclass(frozen=True)
class NetGraph:
    spec: SurfaceSpec
    params: NetBuildParams
    graph: Graph
    rings: tuple[RingInfo, ...]
    ring_of_slot: dict
    special_w: dict
    special_v: dict
    vertex_kind: dict = field(repr=False)


def _ring_count(length: float, density: float) -> int:
    return max(1, math.ceil(length * density))


def _add_ring(graph: Graph, labels) -> None:
    k = len(labels)
    for lab in labels:
        graph.add_vertex(lab)
    if k == 2:
        graph.add_edge(labels[0], labels[1])
    elif k > 2:
        for j in range(k):
            graph.add_edge(labels[j], labels[(j + 1) % k])


def build_net(spec: SurfaceSpec, params: NetBuildParams) -> NetGraph:
    """Net graph of a spec at scale (eps, delta).

    Thick gluings (length >= 2*delta) carry one shared ring on the
    geodesic, labeled by the smaller slot; both hubs spoke into it.
    Delta-thin gluings carry one ring per side at the collar boundary
    length, joined only through the special vertex of that geodesic.
    """
    require_valid(spec)
    dens = params.density
    g = Graph()
    for p in range(spec.pieces):
        g.add_vertex(("hub", p))

    rings: list[RingInfo] = []
    ring_of_slot: dict = {}
    special_w: dict = {}
    special_v: dict = {}

    def new_ring(kind, slot, gi, length, pieces) -> RingInfo:
        k = _ring_count(length, dens)
        labels = tuple(("net", slot[0], slot[1], j) for j in range(k))
        _add_ring(g, labels)
        info = RingInfo(kind, slot, gi, length, labels, pieces)
        rings.append(info)
        return info

    for gi, gl in enumerate(spec.gluings):
        pa, pb = gl.a[0], gl.b[0]
        if gl.length < 2.0 * params.delta:
            side_len = thin_boundary_length(gl.length, params.eps)
            ra = new_ring("thin_side", gl.a, gi, side_len, (pa,))
            rb = new_ring("thin_side", gl.b, gi, side_len, (pb,))
            ring_of_slot[gl.a] = ra
            ring_of_slot[gl.b] = rb
            v_lab = ("v", gi)
            g.add_vertex(v_lab)
            special_v[gi] = v_lab
            for lab in ra.labels + rb.labels:
                g.add_edge(v_lab, lab)
        else:
            owner = min(gl.a, gl.b)
            ring = new_ring("thick", owner, gi, gl.length, (pa, pb))
            ring_of_slot[gl.a] = ring
            ring_of_slot[gl.b] = ring

    lam = cusp_collar(params.eps).lam
    for c in spec.cusps:
        ring = new_ring("cusp", c, None, lam, (c[0],))
        ring_of_slot[c] = ring
        w_lab = ("w", c[0], c[1])
        g.add_vertex(w_lab)
        special_w[c] = w_lab
        for lab in ring.labels:
            g.add_edge(w_lab, lab)

    for o in spec.opens:
        ring = new_ring("open", o.at, None, o.length, (o.at[0],))
        ring_of_slot[o.at] = ring

    for p in range(spec.pieces):
        hub = ("hub", p)
        for s in range(3):
            ring = ring_of_slot[(p, s)]
            for lab in ring.labels:
                if not g.has_edge(hub, lab):
                    g.add_edge(hub, lab)

    kinds = {}
    for v in g.vertices():
        kinds[v] = v[0]
    return NetGraph(
        spec=spec,
        params=params,
        graph=g,
        rings=tuple(rings),
        ring_of_slot=ring_of_slot,
        special_w=special_w,
        special_v=special_v,
        vertex_kind=kinds,
    )


def degree_bound(
    eps: float,
    delta: float,
    max_curve_length: float = 2.0,
    samples_per_unit_length: float = 1.0,
) -> int:
    """Uniform degree bound for nets built at (eps, delta) from specs whose
    curve lengths stay below max_curve_length.

    mu = 2 is the ring-per-special packing constant: a special vertex sees
    at most two rings, each no longer than the cusp scale 2*sinh(eps).
    Ring samples see at most mu + 3 neighbors (two ring edges, two hubs, or
    one hub and one special).
    """
    check_margulis(eps)
    if not 0.0 < delta < delta1(eps):
        raise DomainError(
            f"delta must lie in (0, delta1(eps)), got {delta!r}"
        )
    if max_curve_length <= 0.0:
        raise DomainError("max_curve_length must be positive")
    dens = max(1.0 / delta, samples_per_unit_length)
    mu = 2
    horo = 2.0 * math.sinh(eps)
    ring_cap = math.ceil(max(max_curve_length, horo) * dens)
    return max(
        mu + 3,
        3 * ring_cap,
        mu * math.ceil(horo * dens),
    )


def max_degree(graph: Graph) -> int:
    return max(graph.degree(v) for v in graph.vertices())


# ---------------------------------------------------------------------------
# Boundary vertex sets of a domain inside the net


@dataclass(frozen=True)
class BoundarySets:
    members: frozenset
    boundary: frozenset
    boundary_2delta: frozenset

    @property
    def boundary_deep(self) -> frozenset:
        return self.boundary - self.boundary_2delta


def boundary_vertex_set(net: NetGraph, piece_set) -> BoundarySets:
    """Vertices of the net carried by a set of pieces, with its frontier.

    A ring sample belongs iff every piece its curve touches is in the set,
    so the shared ring of a cut thick gluing is left out and lands in the
    frontier.  The 2delta part of the frontier is the portion adjacent to
    ordinary member vertices; the rest hangs off special vertices only and
    corresponds to collar ends beyond the 2delta horizon.
    """
    pieces = frozenset(piece_set)
    if not pieces:
        raise DomainError("boundary_vertex_set needs a nonempty piece set")
    for p in pieces:
        if not 0 <= p < net.spec.pieces:
            raise DomainError(f"piece {p} out of range")

    members = set()
    for p in pieces:
        members.add(("hub", p))
    for ring in net.rings:
        if all(p in pieces for p in ring.pieces):
            members.update(ring.labels)
    for c, lab in net.special_w.items():
        if c[0] in pieces:
            members.add(lab)
    for gi, lab in net.special_v.items():
        gl = net.spec.gluings[gi]
        if gl.a[0] in pieces or gl.b[0] in pieces:
            members.add(lab)

    g = net.graph
    boundary = set()
    for v in members:
        for u in g.neighbors(v):
            if u not in members:
                boundary.add(u)
    deep = set()
    for u in boundary:
        for x in g.neighbors(u):
            if x in members and net.vertex_kind[x] in ("hub", "net"):
                deep.add(u)
                break
    return BoundarySets(frozenset(members), frozenset(boundary), frozenset(deep))


def interior_vertices(net: NetGraph) -> list:
    """Every vertex except open-ring samples, in canonical order.  Open
    rings mark the truncation edge of the window and are the designated
    exterior for ambient Cheeger estimates."""
    open_labels = set()
    for ring in net.rings:
        if ring.kind == "open":
            open_labels.update(ring.labels)
    return [v for v in net.graph.vertices() if v not in open_labels]


def net_cheeger_estimate(
    net: NetGraph, work_limit: int = 1 << 20, seed: int = 0
) -> CheegerReport:
    """Cheeger estimate of the net: ambient against the open rings when the
    spec has them, else the plain finite graph constant."""
    interior = interior_vertices(net)
    if len(interior) == net.graph.n:
        return cheeger(net.graph, mode="finite_half", work_limit=work_limit, seed=seed)
    return cheeger(
        net.graph,
        mode="ambient",
        interior=interior,
        work_limit=work_limit,
        seed=seed,
    )


# ---------------------------------------------------------------------------
# Quotient mesh


def _piece_spoke_weight(spec: SurfaceSpec, params: NetBuildParams, p: int) -> float:
    """Hub-to-ring weight in the mesh: the collar width of the shortest
    geodesic around the piece, clamped into [delta, 1]."""
    shortest = math.inf
    for gl in spec.gluings:
        if gl.a[0] == p or gl.b[0] == p:
            shortest = min(shortest, gl.length)
    for o in spec.opens:
        if o.at[0] == p:
            shortest = min(shortest, o.length)
    if math.isinf(shortest):
        return 1.0
    return min(1.0, max(params.delta, collar_width(shortest)))


def build_quotient_mesh(
    spec: SurfaceSpec, params: NetBuildParams, refinement: int = 3
):
    """Refined mesh of the surface after thin-collar surgery.

    Returns (graph, vmap, kinds): a weighted graph, the inclusion map from
    net vertices (specials have no image), and a kind tag per mesh vertex.
    Each net ring reappears refined by the given factor; the two rings of a
    delta-thin gluing map onto one ring, realizing the gluing of the collar
    boundaries; cusp rings stay but their special end is removed.
    """
    if refinement < 1:
        raise DomainError(f"refinement must be >= 1, got {refinement}")
    net = build_net(spec, params)
    mesh = Graph()
    vmap: dict = {}
    kinds: dict = {}

    for p in range(spec.pieces):
        hub = ("hub", p)
        mesh.add_vertex(hub)
        vmap[hub] = hub
        kinds[hub] = "hub"

    merged_of_gluing: dict[int, tuple] = {}
    mesh_ring_of_slot: dict = {}
    weights_of_ring: dict = {}

    def add_mesh_ring(slot, net_count, length, kind):
        k = net_count * refinement
        labels = tuple(("m", slot[0], slot[1], j) for j in range(k))
        for lab in labels:
            mesh.add_vertex(lab)
            kinds[lab] = kind
        w = length / k
        if k == 2:
            mesh.add_edge(labels[0], labels[1], w)
        elif k > 2:
            for j in range(k):
                mesh.add_edge(labels[j], labels[(j + 1) % k], w)
        return labels

    for ring in net.rings:
        if ring.kind == "thin_side":
            gi = ring.gluing_index
            if gi in merged_of_gluing:
                continue
            gl = spec.gluings[gi]
            owner = min(gl.a, gl.b)
            labels = add_mesh_ring(owner, len(ring.labels), ring.length, "thin_core")
            merged_of_gluing[gi] = labels
            mesh_ring_of_slot[gl.a] = labels
            mesh_ring_of_slot[gl.b] = labels
        else:
            labels = add_mesh_ring(
                ring.slot, len(ring.labels), ring.length, ring.kind
            )
            for slot, r in net.ring_of_slot.items():
                if r is ring:
                    mesh_ring_of_slot[slot] = labels

    for ring in net.rings:
        if ring.kind == "thin_side":
            target = merged_of_gluing[ring.gluing_index]
        else:
            target = mesh_ring_of_slot[ring.slot]
        for j, lab in enumerate(ring.labels):
            vmap[lab] = target[j * refinement]

    for p in range(spec.pieces):
        hub = ("hub", p)
        w = _piece_spoke_weight(spec, params, p)
        for s in range(3):
            for lab in mesh_ring_of_slot[(p, s)]:
                if not mesh.has_edge(hub, lab):
                    mesh.add_edge(hub, lab, w)

    return mesh, vmap, kinds


# ---------------------------------------------------------------------------
# Quasi-isometry constant estimation


@dataclass(frozen=True)
class QIReport:
    alpha: float
    beta: float
    fullness: float
    pairs: int
    table: tuple  # ((alpha, beta), ...)

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "beta": self.beta,
            "fullness": self.fullness,
            "pairs": self.pairs,
            "table": [[a, b] for a, b in self.table],
        }


def _pair_matrices(graph_a: Graph, graph_b: Graph, vmap):
    dom = [v for v in graph_a.vertices() if v in vmap]
    if len(dom) < 2:
        raise DomainError("quasi-isometry estimate needs at least two mapped vertices")
    da = np.empty((len(dom), len(dom)))
    for i, v in enumerate(dom):
        dist = graph_a.bfs_distances(v)
        da[i] = [dist[u] for u in dom]
    db = np.empty((len(dom), len(dom)))
    for i, v in enumerate(dom):
        dist = graph_b.dijkstra(vmap[v])
        db[i] = [dist[vmap[u]] for u in dom]
    iu = np.triu_indices(len(dom), k=1)
    return da[iu], db[iu], len(dom)


def minimal_beta(graph_a: Graph, graph_b: Graph, vmap, alpha: float) -> float:
    """Least beta making vmap an (alpha, beta) quasi-isometric embedding:
    d_A/alpha - beta <= d_B <= alpha*d_A + beta over all mapped pairs."""
    if alpha < 1.0:
        raise DomainError(f"alpha must be >= 1, got {alpha!r}")
    da, db, _ = _pair_matrices(graph_a, graph_b, vmap)
    over = db - alpha * da
    under = da / alpha - db
    return float(max(0.0, over.max(), under.max()))


def estimate_qi_constants(
    graph_a: Graph,
    graph_b: Graph,
    vmap,
    alpha_grid=None,
    beta_tol: float = 0.5,
) -> QIReport:
    """Grid search for quasi-isometry constants of vmap.

    beta(alpha) is non-increasing, so the search reports the knee: the
    smallest grid alpha whose beta comes within beta_tol of the best beta
    on the grid.  Fullness is the largest distance from any vertex of the
    target to the image.
    """
    if alpha_grid is None:
        alpha_grid = [1.0 + 0.25 * k for k in range(29)]  # 1.0 .. 8.0
    da, db, ndom = _pair_matrices(graph_a, graph_b, vmap)
    table = []
    for alpha in alpha_grid:
        over = db - alpha * da
        under = da / alpha - db
        beta = float(max(0.0, over.max(), under.max()))
        table.append((float(alpha), beta))
    best_beta = min(b for _, b in table)
    alpha_star, beta_star = next(
        (a, b) for a, b in table if b <= best_beta + beta_tol
    )

    image = sorted({vmap[v] for v in graph_a.vertices() if v in vmap},
                   key=graph_b.index_of)
    dist = {v: 0.0 for v in image}
    heap = [(0.0, graph_b.index_of(v), v) for v in image]
    heapq.heapify(heap)
    done = set()
    while heap:
        du, _, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        for v in graph_b.neighbors(u):
            alt = du + graph_b.weight(u, v)
            if v not in dist or alt < dist[v]:
                dist[v] = alt
                heapq.heappush(heap, (alt, graph_b.index_of(v), v))
    fullness = max(dist[v] for v in graph_b.vertices())
    return QIReport(
        alpha=alpha_star,
        beta=beta_star,
        fullness=fullness,
        pairs=ndom * (ndom - 1) // 2,
        table=tuple(table),
    )


# ---------------------------------------------------------------------------
# Serialization


def _vertex_tag(label, kind_map, ring_kind_of_label) -> str:
    tag0 = label[0]
    if tag0 == "hub":
        return f"hub:{label[1]}"
    if tag0 in ("net", "m"):
        return f"{tag0}:{label[1]}:{label[2]}:{label[3]}:{ring_kind_of_label.get(label, kind_map.get(label, ''))}"
    if tag0 == "w":
        return f"w:{label[1]}:{label[2]}"
    if tag0 == "v":
        return f"v:{label[1]}"
    return str(label)


def to_edgelist(graph: Graph, tags: dict | None = None) -> str:
    """Plain-text graph format: '# vertex <idx> <tag>' headers in canonical
    order, then one edge per line as 'u v' or 'u v weight'."""
    order = graph.vertices()
    lines = []
    for i, v in enumerate(order):
        tag = tags.get(v, str(v)) if tags else str(v)
        lines.append(f"# vertex {i} {tag}")
    weighted = any(w != 1.0 for _, _, w in graph.edges())
    for u, v, w in graph.edges():
        iu, iv = graph.index_of(u), graph.index_of(v)
        if weighted:
            lines.append(f"{iu} {iv} {w!r}")
        else:
            lines.append(f"{iu} {iv}")
    return "\n".join(lines) + "\n"


def net_tags(net: NetGraph) -> dict:
    ring_kind = {}
    for ring in net.rings:
        for lab in ring.labels:
            ring_kind[lab] = ring.kind
    return {
        v: _vertex_tag(v, net.vertex_kind, ring_kind) for v in net.graph.vertices()
    }


def mesh_tags(mesh: Graph, kinds: dict) -> dict:
    ring_kind = {lab: kinds[lab] for lab in kinds if lab[0] == "m"}
    return {v: _vertex_tag(v, kinds, ring_kind) for v in mesh.vertices()}


def parse_edgelist(text: str):
    """Inverse of to_edgelist: returns (graph, tags) with integer vertex
    labels in header order."""
    g = Graph()
    tags: dict[int, str] = {}
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line.split()
            if len(parts) >= 4 and parts[1] == "vertex":
                idx = int(parts[2])
                tags[idx] = " ".join(parts[3:])
                g.add_vertex(idx)
            continue
        parts = line.split()
        if len(parts) == 2:
            g.add_edge(int(parts[0]), int(parts[1]))
        elif len(parts) == 3:
            g.add_edge(int(parts[0]), int(parts[1]), float(parts[2]))
        else:
            raise DomainError(f"bad edge list line {ln}: {raw!r}")
    return g, tags


def to_dot(graph: Graph, tags: dict | None = None, name: str = "net") -> str:
    order = graph.vertices()
    lines = [f"graph {name} {{"]
    for i, v in enumerate(order):
        tag = tags.get(v, str(v)) if tags else str(v)
        lines.append(f'  n{i} [label="{tag}"];')
    weighted = any(w != 1.0 for _, _, w in graph.edges())
    for u, v, w in graph.edges():
        iu, iv = graph.index_of(u), graph.index_of(v)
        if weighted:
            lines.append(f'  n{iu} -- n{iv} [label="{w:.6g}"];')
        else:
            lines.append(f"  n{iu} -- n{iv};")
    lines.append("}")
    return "\n".join(lines) + "\n"
