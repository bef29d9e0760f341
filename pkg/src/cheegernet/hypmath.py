"""Closed-form collar geometry for curvature -1 surfaces.

Every function here is a pure map on positive reals.  Lengths are measured
along geodesics, areas in the hyperbolic metric, and ``eps`` always denotes
a Margulis-type thinness parameter in (0, arcsinh(1)).  A geodesic of length
``l`` is called eps-thin when l < 2*eps.

Out-of-domain input raises :class:`DomainError`; no function returns NaN.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "ARCSINH_ONE",
    "DomainError",
    "CollarGeometry",
    "CuspCollar",
    "check_margulis",
    "collar_width",
    "collar_geometry",
    "thin_half_width",
    "thin_boundary_length",
    "thin_collar_area",
    "shrunk_collar_area_bound",
    "cusp_collar",
    "thin_separation",
    "ball_area",
    "ball_circumference",
    "quad_relation",
    "delta1",
]

ARCSINH_ONE = math.asinh(1.0)

# Below this offset, acosh(1+t) loses half its digits to cancellation and we
# switch to the series branch.
_ACOSH_SERIES_CUTOFF = 1e-8


class DomainError(ValueError):
    """Raised when an argument leaves the geometric domain of a formula."""


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return value


def _require_positive(name: str, value: float) -> float:
    value = _require_finite(name, value)
    if value <= 0.0:
        raise DomainError(f"{name} must be positive, got {value!r}")
    return value


def _acosh_stable(x: float) -> float:
    """acosh with a series branch near 1: acosh(1+t) = sqrt(2t)(1 - t/12 + ...)."""
    t = x - 1.0
    if t < 0.0:
        # Tolerate rounding dust just below 1; anything worse is a caller bug.
        if t > -1e-12:
            return 0.0
        raise DomainError(f"acosh argument below 1: {x!r}")
    if t < _ACOSH_SERIES_CUTOFF:
        return math.sqrt(2.0 * t) * (1.0 - t / 12.0 + 3.0 * t * t / 160.0)
    return math.acosh(x)


def check_margulis(eps: float) -> float:
    """Validate 0 < eps < arcsinh(1) and return eps as a float."""
    eps = _require_finite("eps", eps)
    if not 0.0 < eps < ARCSINH_ONE:
        raise DomainError(
            f"eps must lie in (0, arcsinh(1)) = (0, {ARCSINH_ONE!r}), got {eps!r}"
        )
    return eps


def collar_width(l: float) -> float:
    """Half-width arccosh(coth(l/2)) of the standard collar around a closed
    geodesic of length l.  Strictly decreasing in l."""
    l = _require_positive("l", l)
    th = math.tanh(0.5 * l)
    return _acosh_stable(1.0 / th)


def thin_half_width(l: float, eps: float) -> float:
    """Half-width arccosh(sinh(eps)/sinh(l/2)) of the eps-thin collar.

    Defined for 0 < l <= 2*eps; equals 0 at l = 2*eps and is smaller than
    collar_width(l) on the open range.
    """
    eps = check_margulis(eps)
    l = _require_positive("l", l)
    if l > 2.0 * eps:
        raise DomainError(f"need l <= 2*eps for a thin collar, got l={l!r}, eps={eps!r}")
    ratio = math.sinh(eps) / math.sinh(0.5 * l)
    if ratio < 1.0:
        # l == 2*eps up to rounding; the exact value is 1.
        ratio = 1.0
    return _acosh_stable(ratio)


def thin_boundary_length(l: float, eps: float) -> float:
    """Length l*sinh(eps)/sinh(l/2) of either boundary curve of the eps-thin
    collar.  Bounded above by 2*sinh(eps) < 2 and increasing toward that bound
    as l -> 0+."""
    eps = check_margulis(eps)
    l = _require_positive("l", l)
    if l > 2.0 * eps:
        raise DomainError(f"need l <= 2*eps for a thin collar, got l={l!r}, eps={eps!r}")
    return l * math.sinh(eps) / math.sinh(0.5 * l)


def thin_collar_area(l: float, eps: float) -> float:
    """Area (2l/sinh(l/2)) * sqrt(sinh(eps)^2 - sinh(l/2)^2) of the eps-thin
    collar; identical to 2*l*sinh(thin_half_width(l, eps))."""
    eps = check_margulis(eps)
    l = _require_positive("l", l)
    if l > 2.0 * eps:
        raise DomainError(f"need l <= 2*eps for a thin collar, got l={l!r}, eps={eps!r}")
    s = math.sinh(0.5 * l)
    gap = math.sinh(eps) ** 2 - s * s
    if gap < 0.0:
        gap = 0.0
    return (2.0 * l / s) * math.sqrt(gap)


def shrunk_collar_area_bound(l: float, eps: float, delta0: float) -> tuple[float, bool]:
    """Area of the collar shrunk by delta0, plus the half-area certificate.

    For delta0 <= ln(4/3) and l <= 2*arcsinh((sqrt(3)/4)*sinh(eps)) the shrunk
    collar C(gamma, h - delta0) still holds more than half the full collar
    area, which in turn is at least the closed-form floor
    (2d/sinh(d)) * sqrt(sinh(eps)^2 - sinh(d)^2) at d = arcsinh((sqrt(3)/4)*sinh(eps)).

    Returns (area_shrunk, holds) where holds checks both inequalities.
    """
    eps = check_margulis(eps)
    l = _require_positive("l", l)
    delta0 = _require_finite("delta0", delta0)
    if delta0 < 0.0:
        raise DomainError(f"delta0 must be >= 0, got {delta0!r}")
    if delta0 > math.log(4.0 / 3.0):
        raise DomainError(f"delta0 must be <= ln(4/3), got {delta0!r}")
    d = math.asinh(math.sqrt(3.0) / 4.0 * math.sinh(eps))
    if l > 2.0 * d:
        raise DomainError(
            f"need l <= 2*arcsinh((sqrt(3)/4)*sinh(eps)) = {2.0 * d!r}, got {l!r}"
        )
    h = thin_half_width(l, eps)
    if not delta0 < h:
        raise DomainError(f"delta0={delta0!r} does not stay below the half-width {h!r}")
    area_shrunk = 2.0 * l * math.sinh(h - delta0)
    floor = (2.0 * d / math.sinh(d)) * math.sqrt(
        max(math.sinh(eps) ** 2 - math.sinh(d) ** 2, 0.0)
    )
    holds = area_shrunk > 0.5 * thin_collar_area(l, eps) and area_shrunk > floor
    return area_shrunk, holds


@dataclass(frozen=True)
class CuspCollar:
    """Horocyclic cusp collar: boundary length and area both equal lam < 2."""

    lam: float

    @property
    def boundary_length(self) -> float:
        return self.lam

    @property
    def area(self) -> float:
        return self.lam


def cusp_collar(eps: float) -> CuspCollar:
    """Cusp collar with boundary horocycle of length lam = 2*sinh(eps)."""
    eps = check_margulis(eps)
    return CuspCollar(lam=2.0 * math.sinh(eps))


def thin_separation(l: float, eps: float) -> float:
    """Distance collar_width(l) - thin_half_width(l, eps) from the thin collar
    boundary to the full collar boundary.

    Strictly increasing in l on (0, 2*eps), always above ln(1/sinh(eps)), and
    tending to that floor as l -> 0+.  Two distinct eps-thin collars are
    therefore at least 2*ln(1/sinh(eps)) apart.
    """
    eps = check_margulis(eps)
    l = _require_positive("l", l)
    if l >= 2.0 * eps:
        raise DomainError(f"need l < 2*eps, got l={l!r}, eps={eps!r}")
    return collar_width(l) - thin_half_width(l, eps)


def ball_area(r: float) -> float:
    """Area 4*pi*sinh(r/2)^2 of the hyperbolic disc of radius r."""
    r = _require_positive("r", r)
    s = math.sinh(0.5 * r)
    return 4.0 * math.pi * s * s


def ball_circumference(r: float) -> float:
    """Circumference 2*pi*sinh(r) of the hyperbolic circle of radius r;
    equals d/dr ball_area(r)."""
    r = _require_positive("r", r)
    return 2.0 * math.pi * math.sinh(r)


def quad_relation(a: float, beta: float) -> float:
    """Side relation arcsinh(sinh(a)*cosh(beta)) of the right-angled
    quadrilateral with side a and opposite distance beta."""
    a = _require_positive("a", a)
    beta = _require_finite("beta", beta)
    if beta < 0.0:
        raise DomainError(f"beta must be >= 0, got {beta!r}")
    try:
        return math.asinh(math.sinh(a) * math.cosh(beta))
    except OverflowError as exc:
        raise DomainError(f"quad_relation overflow at a={a!r}, beta={beta!r}") from exc


def delta1(eps: float) -> float:
    """Net scale min(ln(1/sinh(eps)), arcsinh((sqrt(3)/4)*sinh(eps))).

    Always smaller than eps; net constructions require delta < delta1(eps).
    """
    eps = check_margulis(eps)
    return min(-math.log(math.sinh(eps)), math.asinh(math.sqrt(3.0) / 4.0 * math.sinh(eps)))


@dataclass(frozen=True)
class CollarGeometry:
    """Collar record: derived fields satisfy
    boundary_component_length = core_length*cosh(half_width) and
    area = 2*core_length*sinh(half_width)."""

    core_length: float
    half_width: float
    boundary_component_length: float
    area: float


def collar_geometry(core_length: float, half_width: float) -> CollarGeometry:
    """Build the collar record for a core geodesic and a half-width."""
    core_length = _require_positive("core_length", core_length)
    half_width = _require_finite("half_width", half_width)
    if half_width < 0.0:
        raise DomainError(f"half_width must be >= 0, got {half_width!r}")
    return CollarGeometry(
        core_length=core_length,
        half_width=half_width,
        boundary_component_length=core_length * math.cosh(half_width),
        area=2.0 * core_length * math.sinh(half_width),
    )
