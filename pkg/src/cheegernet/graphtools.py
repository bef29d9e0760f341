"""Generic graph machinery: metric, Cheeger, hyperbolicity, boundary proxies.

Vertices are arbitrary hashable labels; insertion order is the canonical
vertex order and every report breaks ties toward it, so identical inputs
give byte-identical outputs.  numpy is used for the quartic hyperbolicity
scan and the subset enumerations; everything else is plain BFS/Dijkstra.
"""

from __future__ import annotations

import heapq
import itertools
import math
import random
from collections import deque
from dataclasses import dataclass

import numpy as np

from .hypmath import DomainError

__all__ = [
    "Graph",
    "gromov_product",
    "HyperbolicityReport",
    "hyperbolicity_delta",
    "CheegerReport",
    "cheeger",
    "ProxyReport",
    "boundary_proxy",
    "ultrametric_defect",
    "UPReport",
    "uniform_perfectness",
    "PoleReport",
    "geodesic_union_set",
    "has_pole",
]


class Graph:
    """Undirected graph with optional edge weights and no self-loops.

    Parallel edges collapse to the last weight written.  Vertex labels keep
    insertion order, which all algorithms treat as the canonical order.
    """

    def __init__(self):
        self._adj: dict = {}
        self._index: dict = {}

    def add_vertex(self, v) -> None:
        if v not in self._adj:
            self._index[v] = len(self._adj)
            self._adj[v] = {}

    def add_edge(self, u, v, weight: float = 1.0) -> None:
        if u == v:
            raise DomainError(f"self-loop at {u!r} not allowed")
        if not (math.isfinite(weight) and weight > 0.0):
            raise DomainError(f"edge weight must be positive, got {weight!r}")
        self.add_vertex(u)
        self.add_vertex(v)
        self._adj[u][v] = weight
        self._adj[v][u] = weight

    @property
    def n(self) -> int:
        return len(self._adj)

    def vertices(self) -> list:
        return list(self._adj)

    def index_of(self, v) -> int:
        return self._index[v]

    def has_vertex(self, v) -> bool:
        return v in self._adj

    def has_edge(self, u, v) -> bool:
        return u in self._adj and v in self._adj[u]

    def degree(self, v) -> int:
        return len(self._adj[v])

    def neighbors(self, v) -> list:
        return list(self._adj[v])

    def weight(self, u, v) -> float:
        return self._adj[u][v]

    def edges(self):
        """Each undirected edge once, ordered by (index(u), index(v))."""
        for u in self._adj:
            iu = self._index[u]
            for v, w in self._adj[u].items():
                if iu < self._index[v]:
                    yield u, v, w

    def edge_count(self) -> int:
        return sum(len(d) for d in self._adj.values()) // 2

    def bfs_distances(self, source) -> dict:
        dist = {source: 0}
        q = deque([source])
        while q:
            u = q.popleft()
            du = dist[u]
            for v in self._adj[u]:
                if v not in dist:
                    dist[v] = du + 1
                    q.append(v)
        return dist

    def dijkstra(self, source) -> dict:
        dist = {source: 0.0}
        heap = [(0.0, self._index[source], source)]
        done = set()
        while heap:
            du, _, u = heapq.heappop(heap)
            if u in done:
                continue
            done.add(u)
            for v, w in self._adj[u].items():
                alt = du + w
                if v not in dist or alt < dist[v]:
                    dist[v] = alt
                    heapq.heappush(heap, (alt, self._index[v], v))
        return dist

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        first = next(iter(self._adj))
        return len(self.bfs_distances(first)) == self.n

    def distance_matrix(self, weighted: bool = False) -> np.ndarray:
        """All-pairs distances in canonical vertex order.  Raises if the
        graph is disconnected: every metric routine here assumes one
        component."""
        order = self.vertices()
        n = self.n
        if weighted:
            mat = np.empty((n, n), dtype=np.float64)
            for i, v in enumerate(order):
                dist = self.dijkstra(v)
                if len(dist) != n:
                    raise DomainError("distance matrix of a disconnected graph")
                mat[i] = [dist[u] for u in order]
        else:
            mat = np.empty((n, n), dtype=np.int32)
            for i, v in enumerate(order):
                dist = self.bfs_distances(v)
                if len(dist) != n:
                    raise DomainError("distance matrix of a disconnected graph")
                mat[i] = [dist[u] for u in order]
        return mat

    def eccentricity(self, v) -> int:
        dist = self.bfs_distances(v)
        if len(dist) != self.n:
            raise DomainError("eccentricity in a disconnected graph")
        return max(dist.values())


def gromov_product(dmat: np.ndarray, i: int, j: int, o: int) -> float:
    return (float(dmat[i, o]) + float(dmat[j, o]) - float(dmat[i, j])) / 2.0


# ---------------------------------------------------------------------------
# Four-point hyperbolicity


@dataclass(frozen=True)
class HyperbolicityReport:
    delta: float
    witness: tuple
    exact: bool
    base_dependence: float
    quadruples: int

    def to_dict(self) -> dict:
        return {
            "delta": self.delta,
            "witness": [str(v) for v in self.witness],
            "exact": self.exact,
            "base_dependence": self.base_dependence,
            "quadruples": self.quadruples,
        }


def _four_point_block(D: np.ndarray, i: int, j: int):
    """Per-quadruple defect matrix over k,l > j for fixed i < j.

    Rows/cols index the vertices after j; entry (k,l) with k < l holds
    (largest pairing sum - middle pairing sum)/2 for the quadruple
    (i, j, j+1+k, j+1+l)."""
    sub = D[j + 1 :, j + 1 :]
    s1 = float(D[i, j]) + sub
    s2 = np.add.outer(D[i, j + 1 :], D[j, j + 1 :]).astype(s1.dtype)
    s3 = s2.T
    hi = np.maximum(np.maximum(s1, s2), s3)
    lo = np.minimum(np.minimum(s1, s2), s3)
    mid = s1 + s2 + s3 - hi - lo
    return (hi - mid) / 2.0


def _base_delta(P: np.ndarray) -> float:
    """max over x,y,z of min((x|z)_o, (z|y)_o) - (x|y)_o, P the product
    matrix at base o."""
    n = P.shape[0]
    best = 0.0
    for z in range(n):
        m = np.minimum(P[:, z][:, None], P[z, :][None, :]) - P
        val = float(m.max())
        if val > best:
            best = val
    return best


def hyperbolicity_delta(
    graph: Graph,
    exact_limit: int = 400,
    sample_count: int = 1_000_000,
    seed: int = 0,
    base_samples: int = 8,
) -> HyperbolicityReport:
    """Four-point hyperbolicity constant of a connected graph.

    Exhaustive over all quadruples up to exact_limit vertices, else a
    seeded random sample giving a lower bound.  base_dependence is the
    largest base-point delta over the witness quadruple plus sampled
    bases; for exact runs it equals delta because some witness vertex
    realizes the four-point value as a base.
    """
    n = graph.n
    if n < 4:
        order = graph.vertices()
        wit = tuple(order[: min(4, n)])
        return HyperbolicityReport(0.0, wit, True, 0.0, 0)
    D = graph.distance_matrix()
    Df = D.astype(np.float64)
    order = graph.vertices()
    rng = random.Random(seed)

    if n <= exact_limit:
        best = 0.0
        quadruples = 0
        for i in range(n - 3):
            for j in range(i + 1, n - 2):
                blk = _four_point_block(Df, i, j)
                m = blk.shape[0]
                quadruples += m * (m - 1) // 2
                iu = np.triu_indices(m, k=1)
                if iu[0].size:
                    v = float(blk[iu].max())
                    if v > best:
                        best = v
        witness = None
        for i in range(n - 3):
            if witness is not None:
                break
            for j in range(i + 1, n - 2):
                blk = _four_point_block(Df, i, j)
                m = blk.shape[0]
                hit = None
                for k in range(m - 1):
                    row = blk[k, k + 1 :]
                    idx = np.nonzero(row == best)[0]
                    if idx.size:
                        hit = (k, k + 1 + int(idx[0]))
                        break
                if hit is not None:
                    witness = (i, j, j + 1 + hit[0], j + 1 + hit[1])
                    break
        assert witness is not None
        exact = True
    else:
        batch = 100_000
        remaining = sample_count
        best = 0.0
        witness = (0, 1, 2, 3)
        np_rng = np.random.default_rng(rng.randrange(2**63))
        while remaining > 0:
            b = min(batch, remaining)
            remaining -= b
            q = np_rng.integers(0, n, size=(b, 4))
            s1 = Df[q[:, 0], q[:, 1]] + Df[q[:, 2], q[:, 3]]
            s2 = Df[q[:, 0], q[:, 2]] + Df[q[:, 1], q[:, 3]]
            s3 = Df[q[:, 0], q[:, 3]] + Df[q[:, 1], q[:, 2]]
            hi = np.maximum(np.maximum(s1, s2), s3)
            lo = np.minimum(np.minimum(s1, s2), s3)
            mid = s1 + s2 + s3 - hi - lo
            vals = (hi - mid) / 2.0
            k = int(vals.argmax())
            if float(vals[k]) > best:
                best = float(vals[k])
                witness = tuple(sorted(int(x) for x in q[k]))
        quadruples = sample_count
        exact = False

    bases = list(witness)
    pool = [i for i in range(n) if i not in set(witness)]
    bases += rng.sample(pool, min(base_samples, len(pool)))
    base_dep = 0.0
    for o in bases:
        P = (Df[:, o][:, None] + Df[o, :][None, :] - Df) / 2.0
        v = _base_delta(P)
        if v > base_dep:
            base_dep = v
    return HyperbolicityReport(
        delta=best,
        witness=tuple(order[i] for i in witness),
        exact=exact,
        base_dependence=base_dep,
        quadruples=quadruples,
    )


# ---------------------------------------------------------------------------
# Cheeger constants


@dataclass(frozen=True)
class CheegerReport:
    value: float
    witness: tuple
    exact: bool
    mode: str
    examined: int

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "witness": [str(v) for v in self.witness],
            "exact": self.exact,
            "mode": self.mode,
            "examined": self.examined,
        }


def _enumerate_cuts(adj: np.ndarray, subset_indices, size_cap):
    """Yield (cut_weight, size, index_tuple) for every nonempty subset of
    subset_indices, boundary weight measured in the full graph.  Chunked
    numpy evaluation; subsets are encoded as bitmasks over subset_indices."""
    m = len(subset_indices)
    total = 1 << m
    rows = adj[np.asarray(subset_indices), :]
    chunk = 1 << 14
    for lo in range(1, total, chunk):
        masks = np.arange(lo, min(lo + chunk, total), dtype=np.int64)
        bits = ((masks[:, None] >> np.arange(m)) & 1).astype(np.float64)
        sizes = bits.sum(axis=1)
        inner = bits @ rows[:, np.asarray(subset_indices)]
        cut = bits @ rows.sum(axis=1) - (inner * bits).sum(axis=1)
        ok = sizes <= size_cap
        yield masks, bits, sizes, cut, ok


def _mask_to_tuple(mask: int, subset_indices) -> tuple:
    out = []
    k = 0
    while mask:
        if mask & 1:
            out.append(subset_indices[k])
        mask >>= 1
        k += 1
    return tuple(out)


def _fiedler_order(graph: Graph) -> list[int]:
    n = graph.n
    adj = np.zeros((n, n))
    for u, v, w in graph.edges():
        iu, iv = graph.index_of(u), graph.index_of(v)
        adj[iu, iv] = w
        adj[iv, iu] = w
    lap = np.diag(adj.sum(axis=1)) - adj
    vals, vecs = np.linalg.eigh(lap)
    fiedler = vecs[:, 1]
    return sorted(range(n), key=lambda i: (fiedler[i], i))


def _sweep_candidates(graph: Graph, allowed: set[int], size_cap: int):
    """Prefix cuts along the Fiedler order, both directions, restricted to
    allowed vertices."""
    order = graph.vertices()
    idx_nbrs = [
        [graph.index_of(u) for u in graph.neighbors(v)] for v in order
    ]
    forward = _fiedler_order(graph)
    for seq in (forward, list(reversed(forward))):
        members: set[int] = set()
        cut = 0.0
        for i in seq:
            if i not in allowed:
                continue
            v = order[i]
            for jn, u in zip(idx_nbrs[i], graph.neighbors(v)):
                w = graph.weight(v, u)
                cut += -w if jn in members else w
            members.add(i)
            if members and len(members) <= size_cap:
                yield cut, len(members), tuple(sorted(members))


def _blob_candidates(graph: Graph, allowed: set[int], size_cap: int, rng, count=50):
    order = graph.vertices()
    allowed_sorted = sorted(allowed)
    idx_nbrs = {
        i: [graph.index_of(u) for u in graph.neighbors(order[i])] for i in allowed
    }
    for _ in range(count):
        start = rng.choice(allowed_sorted)
        target = rng.randrange(1, max(2, size_cap + 1))
        members = {start}
        frontier = [j for j in idx_nbrs[start] if j in allowed]
        while len(members) < target and frontier:
            j = frontier.pop(rng.randrange(len(frontier)))
            if j in members:
                continue
            members.add(j)
            frontier.extend(k for k in idx_nbrs[j] if k in allowed and k not in members)
        cut = 0.0
        for i in members:
            v = order[i]
            for jn, u in zip(idx_nbrs[i], graph.neighbors(v)):
                if jn not in members:
                    cut += graph.weight(v, u)
        yield cut, len(members), tuple(sorted(members))


def cheeger(
    graph: Graph,
    mode: str = "finite_half",
    interior=None,
    work_limit: int = 1 << 20,
    seed: int = 0,
) -> CheegerReport:
    """Edge Cheeger constant: min over vertex sets A of cut(A)/|A|.

    finite_half ranges A over all subsets with |A| <= n/2.  ambient ranges
    A over subsets of a marked interior while the cut is still measured in
    the whole graph; no size cap, matching the exhaustion of a space with
    designated outer edge.  Enumeration is exhaustive while 2^|pool| stays
    within work_limit; beyond that a Fiedler sweep plus seeded random blobs
    gives an upper bound flagged exact=False.
    """
    n = graph.n
    if n < 2:
        raise DomainError("cheeger needs at least two vertices")
    if not graph.is_connected():
        raise DomainError("cheeger of a disconnected graph")
    order = graph.vertices()
    if mode == "finite_half":
        pool = list(range(n))
        size_cap = n // 2
    elif mode == "ambient":
        if interior is None:
            raise DomainError("ambient mode needs an interior vertex set")
        pool = sorted(graph.index_of(v) for v in interior)
        if not pool:
            raise DomainError("ambient interior is empty")
        if len(pool) == n:
            raise DomainError("ambient interior must exclude some vertex")
        size_cap = len(pool)
    else:
        raise DomainError(f"unknown cheeger mode {mode!r}")

    adj = np.zeros((n, n))
    for u, v, w in graph.edges():
        iu, iv = graph.index_of(u), graph.index_of(v)
        adj[iu, iv] = w
        adj[iv, iu] = w

    best = math.inf
    best_tuple: tuple | None = None
    examined = 0
    exact = (1 << len(pool)) <= work_limit
    if exact:
        for masks, bits, sizes, cut, ok in _enumerate_cuts(adj, pool, size_cap):
            examined += int(ok.sum())
            vals = np.where(ok, cut / np.maximum(sizes, 1.0), np.inf)
            v = float(vals.min())
            if not math.isfinite(v) or v > best:
                continue
            for k in np.nonzero(vals == v)[0]:
                t = _mask_to_tuple(int(masks[k]), pool)
                if v < best or best_tuple is None or t < best_tuple:
                    best = v
                    best_tuple = t
    else:
        rng = random.Random(seed)
        allowed = set(pool)
        cands = []
        for i in pool:
            v = order[i]
            cands.append((float(sum(graph.weight(v, u) for u in graph.neighbors(v))), 1, (i,)))
        cands.extend(_sweep_candidates(graph, allowed, size_cap))
        cands.extend(_blob_candidates(graph, allowed, size_cap, rng))
        for cut, size, t in cands:
            examined += 1
            val = cut / size
            if val < best or (val == best and t < best_tuple):
                best = val
                best_tuple = t
    assert best_tuple is not None
    return CheegerReport(
        value=best,
        witness=tuple(order[i] for i in best_tuple),
        exact=exact,
        mode=mode,
        examined=examined,
    )


# ---------------------------------------------------------------------------
# Visual boundary proxy


@dataclass(frozen=True)
class ProxyReport:
    base: object
    radius: int
    points: tuple
    products: np.ndarray
    dists: np.ndarray
    a: float

    def to_dict(self) -> dict:
        return {
            "base": str(self.base),
            "radius": self.radius,
            "points": [str(p) for p in self.points],
            "a": self.a,
            "diameter": float(self.dists.max()) if len(self.points) else 0.0,
        }


def boundary_proxy(
    graph: Graph,
    base=None,
    radius: int | None = None,
    a: float = 2.0,
    keep=None,
) -> ProxyReport:
    """Sphere-at-infinity proxy: the set of kept vertices at graph distance
    exactly `radius` from `base`, in the visual metric a^-(x|y) with Gromov
    products taken at the base.

    Defaults: base is the first vertex of minimum eccentricity; radius is
    max(2, ecc(base) - 2), two steps inside the horizon so the sphere is
    populated all around.
    """
    if graph.n == 0:
        raise DomainError("boundary proxy of an empty graph")
    if a <= 1.0:
        raise DomainError(f"visual parameter a must exceed 1, got {a!r}")
    order = graph.vertices()
    if base is None:
        eccs = {}
        for v in order:
            eccs[v] = graph.eccentricity(v)
        m = min(eccs.values())
        base = next(v for v in order if eccs[v] == m)
    dist = graph.bfs_distances(base)
    if len(dist) != graph.n:
        raise DomainError("boundary proxy of a disconnected graph")
    ecc = max(dist.values())
    if radius is None:
        # Two steps inside the horizon; kept vertices may occupy alternate
        # layers, so walk inward to the first sphere with enough of them.
        radius = max(2, ecc - 2)
        while radius > 1:
            hits = sum(
                1
                for v in order
                if dist[v] == radius and (keep is None or keep(v))
            )
            if hits >= 3:
                break
            radius -= 1
    if radius < 1:
        raise DomainError(f"radius must be >= 1, got {radius}")
    points = [v for v in order if dist[v] == radius and (keep is None or keep(v))]
    if not points:
        raise DomainError(f"no proxy points at radius {radius} from {base!r}")
    m = len(points)
    # Both endpoints sit at distance `radius`, so (x|y) = radius - d(x,y)/2.
    sub = np.empty((m, m), dtype=np.float64)
    for i, p in enumerate(points):
        dp = graph.bfs_distances(p)
        sub[i] = [dp[q] for q in points]
    products = radius - sub / 2.0
    dists = np.power(a, -products)
    np.fill_diagonal(dists, 0.0)
    return ProxyReport(
        base=base,
        radius=radius,
        points=tuple(points),
        products=products,
        dists=dists,
        a=a,
    )


def ultrametric_defect(dists: np.ndarray) -> float:
    """Smallest K with d(x,z) <= K * max(d(x,y), d(y,z)) for all triples.
    For a visual metric of a delta-hyperbolic space this is at most a^delta.
    """
    n = dists.shape[0]
    if n < 3:
        return 1.0
    best = 1.0
    for y in range(n):
        m = np.maximum(dists[:, y][:, None], dists[y, :][None, :])
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(m > 0.0, dists / m, 1.0)
        np.fill_diagonal(ratio, 1.0)
        v = float(ratio.max())
        if v > best:
            best = v
    return best


# ---------------------------------------------------------------------------
# Uniform perfectness


@dataclass(frozen=True)
class UPReport:
    passed: bool
    s_value: float | None
    eps0: float | None
    reason: str
    table: tuple
    n_points: int
    floor: float

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "s_value": self.s_value,
            "eps0": self.eps0,
            "reason": self.reason,
            "n_points": self.n_points,
            "floor": self.floor,
            "table": [
                {
                    "s": s,
                    "eps0": e0,
                    "ok": ok,
                    "fail_scale": fail_eps,
                }
                for s, e0, ok, fail_eps in self.table
            ],
        }


def _annulus_scales(dists: np.ndarray, a: float, radius: int, eps0: float):
    """Test scales: realized distances plus a half-octave geometric ladder
    from eps0 down to the proxy resolution floor a^-(radius-1).  The ladder
    is the point: scale gaps with no realized distance must still be
    probed, otherwise a cluster-and-gap spectrum looks perfect."""
    floor = a ** (-(radius - 1))
    n = dists.shape[0]
    iu = np.triu_indices(n, k=1)
    realized = np.unique(dists[iu])
    dmax = float(realized.max()) if realized.size else 0.0
    scales = {float(r) for r in realized if floor <= r < dmax}
    step = a**-0.5
    e = eps0
    while e >= floor:
        if e < dmax:
            scales.add(e)
        e *= step
    return sorted(scales, reverse=True), floor, dmax


def uniform_perfectness(
    dists: np.ndarray,
    a: float = 2.0,
    radius: int = 8,
    s_grid=(1.5, 2.0, 3.0, 4.0, 6.0, 8.0),
    eps0_fractions=(1.0, 0.5, 0.25),
) -> UPReport:
    """Annulus test for S-uniform perfectness of a finite metric sample.

    A point x fails at scale eps if something lies beyond eps but the
    annulus (eps/S, eps] around x is empty.  The space passes at S when no
    point fails at any tested scale below some starting scale eps0.
    Reported: the least passing S from s_grid with the largest passing
    eps0, or a failure with the obstructing scale.
    """
    n = dists.shape[0]
    if n <= 2:
        return UPReport(
            passed=False,
            s_value=None,
            eps0=None,
            reason=f"degenerate proxy: {n} point(s)",
            table=(),
            n_points=n,
            floor=math.nan,
        )
    iu = np.triu_indices(n, k=1)
    dmax = float(dists[iu].max())
    if dmax == 0.0:
        return UPReport(
            passed=False,
            s_value=None,
            eps0=None,
            reason="degenerate proxy: all points coincide",
            table=(),
            n_points=n,
            floor=math.nan,
        )
    table = []
    best = None
    floor_out = math.nan
    for s in s_grid:
        for frac in sorted(eps0_fractions, reverse=True):
            eps0 = frac * dmax
            scales, floor, _ = _annulus_scales(dists, a, radius, eps0)
            floor_out = floor
            fail_eps = None
            for eps in scales:
                if eps > eps0:
                    continue
                lo = eps / s
                for x in range(n):
                    row = dists[x]
                    beyond = bool((row > eps).any())
                    if not beyond:
                        continue
                    hit = bool(((row > lo) & (row <= eps)).any())
                    if not hit:
                        fail_eps = eps
                        break
                if fail_eps is not None:
                    break
            ok = fail_eps is None and bool(scales)
            table.append((s, eps0, ok, fail_eps))
            if ok and best is None:
                best = (s, eps0)
            if ok:
                break
    if best is not None:
        return UPReport(
            passed=True,
            s_value=best[0],
            eps0=best[1],
            reason="",
            table=tuple(table),
            n_points=n,
            floor=floor_out,
        )
    return UPReport(
        passed=False,
        s_value=None,
        eps0=None,
        reason="empty annulus at every tested S",
        table=tuple(table),
        n_points=n,
        floor=floor_out,
    )


# ---------------------------------------------------------------------------
# Poles


@dataclass(frozen=True)
class PoleReport:
    has_pole: bool
    m_value: float | None
    needed: int
    base: object
    peripheral_count: int

    def to_dict(self) -> dict:
        return {
            "has_pole": self.has_pole,
            "m_value": self.m_value,
            "needed": self.needed,
            "base": str(self.base),
            "peripheral_count": self.peripheral_count,
        }


def geodesic_union_set(graph: Graph, base, peripheral) -> set:
    """Vertices lying on some shortest path from base to some peripheral
    vertex: x qualifies iff d(base,x) + d(x,u) = d(base,u)."""
    dv = graph.bfs_distances(base)
    if len(dv) != graph.n:
        raise DomainError("geodesic union in a disconnected graph")
    out = set()
    for u in peripheral:
        du = graph.bfs_distances(u)
        target = dv[u]
        for x, dx in dv.items():
            if dx + du[x] == target:
                out.add(x)
    return out


def has_pole(graph: Graph, base, peripheral, m_grid=(1, 2, 3, 4, 6, 8, 12)) -> PoleReport:
    """Whether every vertex is within some grid M of the union of geodesics
    from base to the peripheral set.  Distance to the union is exact: a
    multi-source BFS from the union set."""
    if not peripheral:
        raise DomainError("pole test needs a nonempty peripheral set")
    t_set = geodesic_union_set(graph, base, peripheral)
    dist = {x: 0 for x in t_set}
    q = deque(sorted(t_set, key=graph.index_of))
    while q:
        u = q.popleft()
        du = dist[u]
        for v in graph.neighbors(u):
            if v not in dist:
                dist[v] = du + 1
                q.append(v)
    needed = max(dist.values())
    for m in m_grid:
        if m >= needed:
            return PoleReport(True, float(m), needed, base, len(peripheral))
    return PoleReport(False, None, needed, base, len(peripheral))
