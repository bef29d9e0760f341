"""Shared test helpers: seeded random specs and graphs, brute-force
connectivity, and the acceptance-line printer."""

from __future__ import annotations

import random
import sys

from cheegernet.graphtools import Graph
from cheegernet.surface import OpenBoundary, SurfaceSpec, make_gluing

_CAPTURE_MANAGER = None


def pytest_configure(config):
    global _CAPTURE_MANAGER
    _CAPTURE_MANAGER = config.pluginmanager.getplugin("capturemanager")


def criterion_line(tag: str, passed: bool, detail: str = "") -> None:
    """One visible line per acceptance criterion.  Written with capture
    suspended so the verdicts land in piped output even for passing tests."""
    status = "PASS" if passed else "FAIL"
    msg = f"[{tag}] {status}"
    if detail:
        msg += f" {detail}"
    if _CAPTURE_MANAGER is not None:
        with _CAPTURE_MANAGER.global_and_fixture_disabled():
            sys.stdout.write(msg + "\n")
            sys.stdout.flush()
    else:
        sys.stdout.write(msg + "\n")
        sys.stdout.flush()


def random_spec(
    rng: random.Random,
    max_pieces: int = 10,
    min_pieces: int = 2,
    thin_below: float | None = None,
    max_length: float = 2.0,
) -> SurfaceSpec:
    """Random valid spec: spanning-tree gluings for connectivity, leftover
    slots split among extra gluings, cusps, and open edges."""
    k = rng.randint(min_pieces, max_pieces)

    def sample_length() -> float:
        if thin_below is not None and rng.random() < 0.35:
            return rng.uniform(0.02, 0.95 * thin_below)
        lo = 1.05 * thin_below if thin_below is not None else 0.1
        return rng.uniform(min(lo, max_length * 0.5), max_length)

    free = {p: [0, 1, 2] for p in range(k)}
    gluings = []
    for p in range(1, k):
        candidates = [q for q in range(p) if free[q]]
        q = rng.choice(candidates)
        sq = free[q].pop(rng.randrange(len(free[q])))
        sp = free[p].pop(rng.randrange(len(free[p])))
        gluings.append(make_gluing((q, sq), (p, sp), sample_length()))
    rest = [(p, s) for p in range(k) for s in free[p]]
    rng.shuffle(rest)
    cusps = []
    opens = []
    while rest:
        a = rest.pop()
        r = rng.random()
        if r < 0.3 and rest:
            b = rest.pop()
            gluings.append(make_gluing(a, b, sample_length()))
        elif r < 0.65:
            cusps.append(a)
        else:
            opens.append(OpenBoundary(a, sample_length()))
    return SurfaceSpec(
        pieces=k,
        gluings=tuple(gluings),
        cusps=tuple(sorted(cusps)),
        opens=tuple(sorted(opens, key=lambda o: o.at)),
    )


def random_connected_graph(rng: random.Random, n: int, extra: int) -> Graph:
    """Spanning tree plus `extra` random non-parallel edges."""
    g = Graph()
    for v in range(n):
        g.add_vertex(v)
    for v in range(1, n):
        g.add_edge(v, rng.randrange(v))
    tries = 0
    added = 0
    while added < extra and tries < 20 * extra + 20:
        tries += 1
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u != v and not g.has_edge(u, v):
            g.add_edge(u, v)
            added += 1
    return g


def random_tree(rng: random.Random, n: int) -> Graph:
    g = Graph()
    g.add_vertex(0)
    for v in range(1, n):
        g.add_edge(v, rng.randrange(v))
    return g


def cycle_graph(n: int) -> Graph:
    g = Graph()
    for v in range(n):
        g.add_vertex(v)
    for v in range(n):
        g.add_edge(v, (v + 1) % n)
    return g


def pieces_connected(spec: SurfaceSpec, members) -> bool:
    """Brute connectivity of a piece subset through gluings."""
    members = set(members)
    if not members:
        return False
    adj = {p: set() for p in members}
    for g in spec.gluings:
        pa, pb = g.a[0], g.b[0]
        if pa in members and pb in members:
            adj[pa].add(pb)
            adj[pb].add(pa)
    seen = set()
    stack = [next(iter(members))]
    while stack:
        p = stack.pop()
        if p in seen:
            continue
        seen.add(p)
        stack.extend(adj[p] - seen)
    return seen == members
