"""The blown-up wave manifold in (z, t, Y) coordinates.

A point of the manifold encodes a candidate shock triple (W, W', s).  The
coordinates used here are z = (u - u') / (v - v'), the signed distance t from
the coincidence curve along the rules of the characteristic surface, and
Y = v - v'.  The characteristic surface C is the plane Y = 0; the sonic and
sonic' surfaces are the critical sets of the shock speed along Hugoniot and
Hugoniot' curves.
"""

from __future__ import annotations

import math
from enum import Enum
from typing import NamedTuple

from .model import (
    AmbiguousOnSurface,
    DegenerateDirection,
    ModelParams,
    DEFAULT_PARAMS,
    PoleAtZero,
    State,
    discriminant,
)

# Working bound: |z| beyond this is treated as escaping to the plane at z = infinity
Z_MAX = 1e3

# Surface membership tolerance on signed surface values after magnitude scaling
SURFACE_TOL = 1e-12


class MPoint(NamedTuple):
    """A manifold point (z, t, Y)."""

    z: float
    t: float
    Y: float


class StateTriple(NamedTuple):
    w: State
    wp: State
    s: float


def _midstate_coords(z: float, t: float, params: ModelParams):
    """(b1*U + a1 - a4, V + a3) of the rule point at (z, t)."""
    c = params.c
    ut = 2.0 * c * z / (z * z + 1.0) + c * t * (z * z - 1.0)
    v1 = c / (z * z + 1.0) + c * t * z
    return ut, v1


def manifold_to_states(q, params: ModelParams = DEFAULT_PARAMS) -> StateTriple:
    """Reconstruct (W, W', s) from a manifold point.

    W and W' differ by the blow-up offsets (z*Y/2, Y/2) around the mean state;
    the speed follows from the jump of g divided by v - v', which is exact for
    every parameter set (the Rankine-Hugoniot residual vanishes identically).
    """
    z, t, Y = q
    p = params
    ut, v1 = _midstate_coords(z, t, p)
    um = (ut - p.a1 + p.a4) / p.b1
    vm = v1 - p.a3
    w = State(um + z * Y / 2.0, vm + Y / 2.0)
    wp = State(um - z * Y / 2.0, vm - Y / 2.0)
    s = um + p.a4 + z * v1
    return StateTriple(w, wp, s)


def states_to_manifold(w, wp, params: ModelParams = DEFAULT_PARAMS) -> MPoint:
    """Invert the blow-up for a Rankine-Hugoniot compatible state pair.

    Raises DegenerateDirection when v = v' (the pair sits on the plane at
    z = infinity, outside this chart).
    """
    du = w[0] - wp[0]
    dv = w[1] - wp[1]
    if abs(dv) < 1e-12:
        raise DegenerateDirection("state pair has v = v'")
    z = du / dv
    p = params
    um = (w[0] + wp[0]) / 2.0
    vm = (w[1] + wp[1]) / 2.0
    ut = p.b1 * um + p.a1 - p.a4
    v1 = vm + p.a3
    c = p.c
    # two equivalent expressions for t; pick the better-conditioned one
    if abs(z * z - 1.0) >= abs(z):
        t = (ut / c - 2.0 * z / (z * z + 1.0)) / (z * z - 1.0)
    else:
        t = (v1 / c - 1.0 / (z * z + 1.0)) / z
    return MPoint(z, t, dv)


def shock_speed(z: float, t: float, params: ModelParams = DEFAULT_PARAMS) -> float:
    """Shock speed at (z, t, any Y); s does not depend on Y."""
    p = params
    ut, v1 = _midstate_coords(z, t, p)
    return (ut - p.a1 + p.a4) / p.b1 + p.a4 + z * v1


def _pqr(z: float, params: ModelParams):
    b1 = params.b1
    z2 = z * z
    p = (b1 + 1.0) * z2 * z2 * z + (b1 + 4.0) * z2 * z + 3.0 * z
    q = (b1 + 1.0) * z2 * z2 + b1 * z2 - 1.0
    r = (b1 - 1.0) * z2 + 1.0
    return p, q, r


def sonic_value(z, t, Y, params: ModelParams = DEFAULT_PARAMS):
    """Signed value whose zero set is the sonic surface."""
    p, q, r = _pqr(z, params)
    c = params.c
    return -2.0 * c * p * t - q * Y - 2.0 * c * r


def sonic_prime_value(z, t, Y, params: ModelParams = DEFAULT_PARAMS):
    """Signed value whose zero set is the sonic' surface (Y-reflection of sonic)."""
    p, q, r = _pqr(z, params)
    c = params.c
    return -2.0 * c * p * t + q * Y - 2.0 * c * r


def scaled_surface_value(val: float, z: float) -> float:
    """Normalize a surface value so the membership tolerance is z-uniform."""
    return val / (1.0 + abs(z)) ** 5


def sonic_prime_t(z: float, Y: float, params: ModelParams = DEFAULT_PARAMS) -> float:
    """The t-coordinate of the sonic' point over (z, Y); undefined at z = 0."""
    if z == 0.0:
        raise PoleAtZero("sonic' carries no graph over z = 0")
    p, q, r = _pqr(z, params)
    c = params.c
    return (q * Y - 2.0 * c * r) / (2.0 * c * p)


def inflection_t(z: float, params: ModelParams = DEFAULT_PARAMS) -> float:
    """t where sonic and sonic' meet the characteristic surface at this z.

    The shock speed is critical along rarefaction curves there.
    """
    if z == 0.0:
        raise PoleAtZero("the inflection locus does not cross z = 0")
    p, _, r = _pqr(z, params)
    return -r / p


def double_sonic(params: ModelParams = DEFAULT_PARAMS):
    """The two vertical lines (z fixed, t fixed, Y free) where sonic = sonic'.

    Returns ((z1, t1), (z2, t2)) with z1 = 1/sqrt(b1+1) = -z2 and t2 = -t1.
    """
    b1 = params.b1
    zc = 1.0 / math.sqrt(b1 + 1.0)
    t1 = -b1 * math.sqrt(b1 + 1.0) / (2.0 * (b1 + 2.0))
    return ((zc, t1), (-zc, -t1))


def hysteresis_point(z: float, params: ModelParams = DEFAULT_PARAMS) -> MPoint:
    """Point of the hysteresis' curve over z: where Hugoniot curves touch sonic'."""
    b1, c = params.b1, params.c
    z2 = z * z
    r = (b1 - 1.0) * z2 + 1.0
    den = (b1 + 1.0) ** 2 * z2 * z2 + 2.0 * (b1 + 3.0) * z2 + 1.0
    t = -(b1 + 2.0) * z * r / ((z2 + 1.0) * den)
    Y = -2.0 * c * r / den
    return MPoint(z, t, Y)


def scc_value(z, t, Y, params: ModelParams = DEFAULT_PARAMS):
    """Signed value of the surface swept by Hugoniot curves through the
    coincidence curve (the saturation of the coincidence curve).

    Computed as 4x the ellipse form at the W-state of the point, which reduces
    to the perfect square 4 c^2 t^2 (z^2+1)^2 on Y = 0.
    """
    w = manifold_to_states(MPoint(z, t, Y), params).w
    return 4.0 * discriminant(w, params)


def coincidence_value(z, t, Y, params: ModelParams = DEFAULT_PARAMS):
    """Eigenvalue discriminant of the W-state; zero set lifts the ellipse."""
    w = manifold_to_states(MPoint(z, t, Y), params).w
    return discriminant(w, params)


def coincidence_prime_value(z, t, Y, params: ModelParams = DEFAULT_PARAMS):
    """Same for the primed state W'."""
    wp = manifold_to_states(MPoint(z, t, Y), params).wp
    return discriminant(wp, params)


def l2_holds(q, params: ModelParams = DEFAULT_PARAMS) -> bool:
    """Closed-form speed-sandwich condition for shocks anchored at this point:
    z^2 < 1/(b1+1), strict at equality."""
    z = q[0]
    return z * z < 1.0 / (params.b1 + 1.0)


class RegionId(Enum):
    SS_POS_Z_POS_Y = "SS'(+z,+Y)"
    SS_POS_Z_NEG_Y = "SS'(+z,-Y)"
    SS_NEG_Z_POS_Y = "SS'(-z,+Y)"
    SS_NEG_Z_NEG_Y = "SS'(-z,-Y)"
    LATERAL_POS_Z_POS_Y = "Lateral(+z,+Y)"
    LATERAL_POS_Z_NEG_Y = "Lateral(+z,-Y)"
    LATERAL_NEG_Z_POS_Y = "Lateral(-z,+Y)"
    LATERAL_NEG_Z_NEG_Y = "Lateral(-z,-Y)"
    OVER_BRIDGE = "OverBridge"
    UNDER_BRIDGE = "UnderBridge"
    OVER_TUNNEL = "OverTunnel"
    UNDER_TUNNEL = "UnderTunnel"


def region_of(q, params: ModelParams = DEFAULT_PARAMS) -> RegionId:
    """One of the twelve regions the three surfaces cut out of the manifold.

    The sign pair (sonic, sonic') determines the region together with the sign
    of Y; the middle band |z| < 1/sqrt(b1+1) hosts the bridge/tunnel regions
    and the outer bands the SS' wedges.
    """
    z, t, Y = q
    son = sonic_value(z, t, Y, params)
    sonp = sonic_prime_value(z, t, Y, params)
    if (
        abs(Y) <= SURFACE_TOL
        or abs(scaled_surface_value(son, z)) <= SURFACE_TOL
        or abs(scaled_surface_value(sonp, z)) <= SURFACE_TOL
    ):
        raise AmbiguousOnSurface(f"point {tuple(q)} lies on a dividing surface")
    pos_y = Y > 0.0
    if son > 0.0 and sonp > 0.0:
        if pos_y:
            return RegionId.LATERAL_POS_Z_POS_Y if z > 0 else RegionId.LATERAL_NEG_Z_POS_Y
        return RegionId.LATERAL_POS_Z_NEG_Y if z > 0 else RegionId.LATERAL_NEG_Z_NEG_Y
    if son < 0.0 and sonp < 0.0:
        return RegionId.UNDER_BRIDGE if pos_y else RegionId.OVER_TUNNEL
    if son > 0.0:  # sonp < 0
        if pos_y:
            return RegionId.OVER_BRIDGE
        return RegionId.SS_POS_Z_NEG_Y if z > 0 else RegionId.SS_NEG_Z_NEG_Y
    # son < 0, sonp > 0
    if not pos_y:
        return RegionId.UNDER_TUNNEL
    return RegionId.SS_POS_Z_POS_Y if z > 0 else RegionId.SS_NEG_Z_POS_Y
