"""Isoperimetric ratios over geodesic domains.

The domain-level isoperimetric constant of a spec is the infimum of
L(boundary)/area over geodesic domains, here enumerated as connected piece
sets.  A surface-level Cheeger bound follows from h(S)^-1 <= h_g(S)^-1 + 1.

The regularity constant at scale delta is the worst ratio of long-boundary
length to the number of short boundary components; families with collapsing
regularity are the standard obstruction to a linear isoperimetric
inequality even when every single ratio stays positive.

Division by zero counts follows the x/0 = +inf convention.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .hypmath import DomainError, check_margulis, delta1
from .surface import (
    Family,
    GeodesicDomain,
    SurfaceSpec,
    boundary_length,
    connected_piece_subsets,
    domain_from_pieces,
    piece_adjacency,
    require_valid,
)

__all__ = [
    "IsoperimetricReport",
    "RegularityReport",
    "FamilyRow",
    "FamilyReport",
    "h_g_exact",
    "h_g_parametric",
    "regularity_constant",
    "boundary_split",
    "cheeger_lower_bound",
    "fit_loglog",
    "is_decaying",
    "lii_verdict",
    "family_report",
    "family_csv",
    "CSV_HEADER",
]


@dataclass(frozen=True)
class IsoperimetricReport:
    h_g: float
    best_domain: GeodesicDomain
    lower_bound_certified: bool
    method: str
    examined: int

    def to_dict(self) -> dict:
        return {
            "h_g": self.h_g,
            "best_domain_pieces": list(self.best_domain.piece_set),
            "best_domain_boundary_length": boundary_length(self.best_domain),
            "best_domain_area": self.best_domain.area,
            "lower_bound_certified": self.lower_bound_certified,
            "method": self.method,
            "examined": self.examined,
        }


@dataclass(frozen=True)
class RegularityReport:
    delta: float
    worst_c: float
    witness: GeodesicDomain | None
    examined: int

    def to_dict(self) -> dict:
        return {
            "delta": self.delta,
            "worst_c": "inf" if math.isinf(self.worst_c) else self.worst_c,
            "witness_pieces": list(self.witness.piece_set) if self.witness else None,
            "examined": self.examined,
        }


def _boundary_terms(spec: SurfaceSpec):
    """Per-piece incidence tables used by the subset enumeration fast path."""
    incident: list[list[tuple[int, int]]] = [[] for _ in range(spec.pieces)]
    for i, g in enumerate(spec.gluings):
        pa, pb = g.a[0], g.b[0]
        if pa != pb:
            incident[pa].append((i, pb))
            incident[pb].append((i, pa))
    opens = [(o.at[0], o.length) for o in spec.opens]
    return incident, opens


def _subset_boundary_length(spec, incident, opens, members: tuple[int, ...]) -> float:
    inset = set(members)
    cut: set[int] = set()
    for p in members:
        for gi, q in incident[p]:
            if q not in inset:
                cut.add(gi)
    total = 0.0
    for gi in sorted(cut):
        total += spec.gluings[gi].length
    for p, length in opens:
        if p in inset:
            total += length
    return total


def h_g_exact(spec: SurfaceSpec, max_pieces: int = 12) -> IsoperimetricReport:
    """Minimum of L(boundary)/area over all connected piece sets of size up
    to max_pieces.  The bound is certified exact when the enumeration covers
    every size.  Ties break to the lexicographically smallest piece set."""
    require_valid(spec)
    if max_pieces < 1:
        raise DomainError(f"max_pieces must be >= 1, got {max_pieces}")
    incident, opens = _boundary_terms(spec)
    best_ratio = math.inf
    best_members: tuple[int, ...] | None = None
    examined = 0
    for members in connected_piece_subsets(spec, max_pieces):
        examined += 1
        ratio = _subset_boundary_length(spec, incident, opens, members) / (
            2.0 * math.pi * len(members)
        )
        if ratio < best_ratio or (ratio == best_ratio and members < best_members):
            best_ratio = ratio
            best_members = members
    assert best_members is not None
    return IsoperimetricReport(
        h_g=best_ratio,
        best_domain=domain_from_pieces(spec, best_members),
        lower_bound_certified=max_pieces >= spec.pieces,
        method="exact",
        examined=examined,
    )


def _is_connected_subset(members: frozenset[int], nbrs: list[set[int]]) -> bool:
    it = iter(members)
    start = next(it)
    seen = {start}
    stack = [start]
    while stack:
        p = stack.pop()
        for q in nbrs[p]:
            if q in members and q not in seen:
                seen.add(q)
                stack.append(q)
    return len(seen) == len(members)


def h_g_parametric(
    spec: SurfaceSpec,
    budget: int = 20,
    seed: int = 0,
    max_pieces: int | None = None,
) -> IsoperimetricReport:
    """Heuristic isoperimetric minimum by Dinkelbach iteration.

    Each restart grows a random connected seed set, then alternates between
    minimizing L(boundary) - lam*area over single-piece moves (adds of an
    adjacent piece, connectivity-preserving removals) and re-setting lam to
    the current ratio.  Not a certified bound; never better than the true
    minimum over the same size range.
    """
    require_valid(spec)
    cap = spec.pieces if max_pieces is None else min(max_pieces, spec.pieces)
    if cap < 1:
        raise DomainError(f"max_pieces must be >= 1, got {max_pieces}")
    rng = random.Random(seed)
    incident, opens = _boundary_terms(spec)
    nbrs: list[set[int]] = [set(q for _, q in incident[p]) for p in range(spec.pieces)]

    def ratio_of(members: tuple[int, ...]) -> float:
        return _subset_boundary_length(spec, incident, opens, members) / (
            2.0 * math.pi * len(members)
        )

    def objective(members: tuple[int, ...], lam: float) -> float:
        return _subset_boundary_length(spec, incident, opens, members) - lam * (
            2.0 * math.pi * len(members)
        )

    def neighbors_of(state: frozenset[int]):
        adds = sorted(
            {q for p in state for q in nbrs[p] if q not in state}
        ) if len(state) < cap else []
        for q in adds:
            yield state | {q}
        if len(state) > 1:
            for p in sorted(state):
                cand = state - {p}
                if _is_connected_subset(cand, nbrs):
                    yield cand

    best_ratio = math.inf
    best_members: tuple[int, ...] | None = None
    examined = 0
    for _ in range(max(1, budget)):
        start = rng.randrange(spec.pieces)
        state = frozenset({start})
        for _ in range(rng.randrange(cap)):
            frontier = sorted({q for p in state for q in nbrs[p] if q not in state})
            if not frontier or len(state) >= cap:
                break
            state = state | {rng.choice(frontier)}

        lam = ratio_of(tuple(sorted(state)))
        for _ in range(200):
            # Steepest descent on the Dinkelbach objective at fixed lam.
            moved = True
            while moved:
                moved = False
                cur = objective(tuple(sorted(state)), lam)
                best_move, best_val = None, cur
                for cand in neighbors_of(state):
                    examined += 1
                    val = objective(tuple(sorted(cand)), lam)
                    if val < best_val - 1e-15:
                        best_move, best_val = cand, val
                if best_move is not None:
                    state = best_move
                    moved = True
            new_lam = ratio_of(tuple(sorted(state)))
            if new_lam >= lam - 1e-15:
                break
            lam = new_lam
        members = tuple(sorted(state))
        r = ratio_of(members)
        if r < best_ratio or (r == best_ratio and members < best_members):
            best_ratio = r
            best_members = members
    assert best_members is not None
    return IsoperimetricReport(
        h_g=best_ratio,
        best_domain=domain_from_pieces(spec, best_members),
        lower_bound_certified=False,
        method="parametric",
        examined=examined,
    )


def boundary_split(domain: GeodesicDomain, delta: float) -> tuple[float, int]:
    """(total length of boundary components with length >= delta,
    count of boundary components with length < delta)."""
    long_total = 0.0
    short_count = 0
    for c in domain.boundary:
        if c.length >= delta:
            long_total += c.length
        else:
            short_count += 1
    return long_total, short_count


def regularity_constant(
    spec: SurfaceSpec, delta: float, max_pieces: int = 12
) -> RegularityReport:
    """Worst ratio L(long boundary)/#(short boundary components) over the
    enumerated domains; +inf when no domain has short components."""
    require_valid(spec)
    if not (math.isfinite(delta) and delta > 0.0):
        raise DomainError(f"delta must be positive, got {delta!r}")
    worst = math.inf
    witness: tuple[int, ...] | None = None
    examined = 0
    for members in connected_piece_subsets(spec, max_pieces):
        examined += 1
        domain = domain_from_pieces(spec, members)
        long_total, short_count = boundary_split(domain, delta)
        ratio = long_total / short_count if short_count else math.inf
        if ratio < worst or (ratio == worst and witness is not None and members < witness):
            worst = ratio
            witness = members
    return RegularityReport(
        delta=delta,
        worst_c=worst,
        witness=domain_from_pieces(spec, witness) if witness is not None else None,
        examined=examined,
    )


def cheeger_lower_bound(h_g: float) -> float:
    """Surface Cheeger bound h >= h_g/(1 + h_g), from h^-1 <= h_g^-1 + 1."""
    if h_g < 0.0:
        raise DomainError(f"h_g must be >= 0, got {h_g!r}")
    if h_g == 0.0:
        return 0.0
    return h_g / (1.0 + h_g)


def fit_loglog(xs, ys) -> tuple[float, float]:
    """Least-squares slope and R^2 of log(y) against log(x)."""
    pts = [(math.log(x), math.log(y)) for x, y in zip(xs, ys)]
    if len(pts) < 2:
        raise DomainError("need at least two points for a trend fit")
    n = len(pts)
    mx = sum(p[0] for p in pts) / n
    my = sum(p[1] for p in pts) / n
    sxx = sum((p[0] - mx) ** 2 for p in pts)
    sxy = sum((p[0] - mx) * (p[1] - my) for p in pts)
    syy = sum((p[1] - my) ** 2 for p in pts)
    if sxx == 0.0:
        raise DomainError("degenerate trend fit: all x equal")
    slope = sxy / sxx
    ss_res = sum((p[1] - (my + slope * (p[0] - mx))) ** 2 for p in pts)
    r2 = 1.0 if syy == 0.0 else 1.0 - ss_res / syy
    return slope, r2


def is_decaying(params, values, tail: int = 5) -> tuple[bool, float | None, float | None]:
    """Trend call on the largest `tail` instances: decaying iff the log-log
    slope is < -0.5 with R^2 > 0.9.  Nonpositive values short-circuit to
    decaying (a zero ratio cannot be bounded away from zero)."""
    pairs = sorted(zip(params, values))[-tail:]
    if any(v <= 0.0 for _, v in pairs):
        return True, None, None
    if len(pairs) < 2:
        return False, None, None
    slope, r2 = fit_loglog([p for p, _ in pairs], [v for _, v in pairs])
    return slope < -0.5 and r2 > 0.9, slope, r2


@dataclass(frozen=True)
class FamilyRow:
    param: int
    h_g: float
    best_domain_size: int
    worst_c: float
    verdict: str


@dataclass(frozen=True)
class FamilyReport:
    name: str
    verdict: str  # "has_LII_evidence" | "no_LII_evidence"
    rows: tuple[FamilyRow, ...]
    slope: float | None
    r_squared: float | None
    h_lower_bound: float

    def to_dict(self) -> dict:
        return {
            "family": self.name,
            "verdict": self.verdict,
            "slope": self.slope,
            "r_squared": self.r_squared,
            "h_lower_bound": self.h_lower_bound,
            "rows": [
                {
                    "param": r.param,
                    "h_g": r.h_g,
                    "best_domain_size": r.best_domain_size,
                    "worst_c": "inf" if math.isinf(r.worst_c) else r.worst_c,
                    "verdict": r.verdict,
                }
                for r in self.rows
            ],
        }


def lii_verdict(
    family: Family,
    eps: float,
    delta: float,
    max_pieces: int = 12,
    values=None,
) -> FamilyReport:
    """Sweep a family and decide whether its isoperimetric ratios decay.

    Decaying ratios (log-log slope < -0.5, R^2 > 0.9 over the largest five
    instances) are evidence against a linear isoperimetric inequality;
    otherwise the ratios stay bounded below and the report attaches the
    surface Cheeger bound h >= h_g/(1 + h_g) for the largest instance.
    """
    check_margulis(eps)
    if not 0.0 < delta < delta1(eps):
        raise DomainError(
            f"delta must lie in (0, delta1(eps)) = (0, {delta1(eps)!r}), got {delta!r}"
        )
    vals = sorted(values) if values is not None else list(family.values())
    if not vals:
        raise DomainError("family sweep needs at least one parameter value")
    results = []
    for v in vals:
        spec = family.instance(v)
        iso = h_g_exact(spec, max_pieces=max_pieces)
        reg = regularity_constant(spec, delta, max_pieces=max_pieces)
        results.append((v, iso, reg))
    return family_report(family.name, results)


def family_report(name: str, results) -> FamilyReport:
    """Assemble a FamilyReport from per-instance (param, iso, reg) triples,
    already sorted by param."""
    params = [v for v, _, _ in results]
    hgs = [iso.h_g for _, iso, _ in results]
    decaying, slope, r2 = is_decaying(params, hgs)
    verdict = "no_LII_evidence" if decaying else "has_LII_evidence"
    rows = tuple(
        FamilyRow(
            param=v,
            h_g=iso.h_g,
            best_domain_size=len(iso.best_domain.piece_set),
            worst_c=reg.worst_c,
            verdict=verdict,
        )
        for v, iso, reg in results
    )
    return FamilyReport(
        name=name,
        verdict=verdict,
        rows=rows,
        slope=slope,
        r_squared=r2,
        h_lower_bound=cheeger_lower_bound(hgs[-1]),
    )


CSV_HEADER = "param,h_g,best_domain_size,worst_c,verdict"


def family_csv(report: FamilyReport) -> str:
    """CSV rendering of a family sweep (header plus one row per instance)."""
    lines = [CSV_HEADER]
    for r in report.rows:
        worst = "inf" if math.isinf(r.worst_c) else repr(r.worst_c)
        lines.append(f"{r.param},{r.h_g!r},{r.best_domain_size},{worst},{r.verdict}")
    return "\n".join(lines) + "\n"
