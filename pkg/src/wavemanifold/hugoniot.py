"""Hugoniot and Hugoniot' curves, their speed profiles and admissibility.

A Hugoniot curve fixes the unprimed state W of a shock triple; a Hugoniot'
curve fixes W'.  Both are graphs (t(z), Y(z)) over the z-coordinate with
polynomial numerators and everywhere-positive denominators, so they can be
evaluated anywhere in the chart.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .model import (
    ModelParams,
    DEFAULT_PARAMS,
    NoIntersection,
    StartOffLocus,
    State,
    Tangency,
    NotOnSurface,
)
from .manifold import (
    MPoint,
    Z_MAX,
    SURFACE_TOL,
    hysteresis_point,
    manifold_to_states,
    scaled_surface_value,
    shock_speed,
    sonic_prime_value,
    sonic_value,
)


@dataclass(frozen=True)
class HugoniotCurve:
    """Closed-form Hugoniot curve, parametric in z.

    For primed = False the W-state equals `base` at every point; for
    primed = True the curve is the Y-reflection construction and the
    W'-state equals `base` everywhere.
    """

    base: State
    params: ModelParams = DEFAULT_PARAMS
    primed: bool = False

    def t(self, z):
        p = self.params
        u0, v0 = self.base
        K = p.b1 * u0 + p.a1 - p.a4
        c = p.c
        num = (
            p.b1 * (v0 + p.a3) * z**3
            - K * z**2
            + (p.b1 * (v0 + p.a2) + 2.0 * c) * z
            - K
        )
        return num / (c * (z**2 + 1.0) * ((p.b1 - 1.0) * z**2 + 1.0))

    def Y(self, z):
        p = self.params
        u0, v0 = self.base
        K = p.b1 * u0 + p.a1 - p.a4
        num = -2.0 * (v0 + p.a3) * z**2 + 2.0 * K * z + 2.0 * (v0 + p.a2)
        out = num / ((p.b1 - 1.0) * z**2 + 1.0)
        return -out if self.primed else out

    def point(self, z: float) -> MPoint:
        return MPoint(z, float(self.t(z)), float(self.Y(z)))

    def s(self, z):
        return shock_speed(z, self.t(z), self.params)

    def ds_dz(self, z: float, h: float = 1e-7) -> float:
        return (self.s(z + h) - self.s(z - h)) / (2.0 * h)

    def c_quadratic(self):
        """Coefficients (A, B, C) of the Y-numerator quadratic A z^2 + B z + C
        whose roots are the characteristic-surface crossings."""
        p = self.params
        u0, v0 = self.base
        K = p.b1 * u0 + p.a1 - p.a4
        return (-(v0 + p.a3), K, v0 + p.a2)


def hugoniot_oracle(w0, z: float, params: ModelParams = DEFAULT_PARAMS):
    """(t, Y) over z for the curve with W fixed at w0, by solving the 2x2
    linear system that expresses u = const, v = const in chart coordinates.

    Ground truth for the closed forms in HugoniotCurve.
    """
    p = params
    c = p.c
    u0, v0 = w0
    K = p.b1 * u0 + p.a1 - p.a4
    a11 = 2.0 * c * (z * z - 1.0)
    a12 = p.b1 * z
    a21 = 2.0 * c * z
    a22 = 1.0
    b1_ = 2.0 * K - 4.0 * c * z / (z * z + 1.0)
    b2_ = 2.0 * (v0 + p.a2) + 2.0 * c * z * z / (z * z + 1.0)
    det = a11 * a22 - a12 * a21
    t = (b1_ * a22 - a12 * b2_) / det
    Y = (a11 * b2_ - b1_ * a21) / det
    return t, Y


def hugoniot_from_state(w0, params: ModelParams = DEFAULT_PARAMS) -> HugoniotCurve:
    return HugoniotCurve(State(*w0), params)


def hugoniot_through_point(q, params: ModelParams = DEFAULT_PARAMS) -> HugoniotCurve:
    """The Hugoniot curve through a manifold point: base = its W-state."""
    return HugoniotCurve(manifold_to_states(q, params).w, params)


def hugoniot_prime_through_point(q, params: ModelParams = DEFAULT_PARAMS) -> HugoniotCurve:
    """The Hugoniot' curve through a manifold point: W' fixed at its W'-state."""
    return HugoniotCurve(manifold_to_states(q, params).wp, params, primed=True)


class CProjections(NamedTuple):
    """Characteristic-surface crossings of the Hugoniot and Hugoniot' curves
    through a point: slow/fast by the sign of t."""

    us: MPoint
    uf: MPoint
    ups: MPoint
    upf: MPoint


def c_crossings(curve: HugoniotCurve, tangency_tol: float = 1e-12):
    """(slow, fast) crossings of the curve with the characteristic surface.

    The z-roots come from the Y-numerator quadratic, whose discriminant is the
    ellipse form of the base state: elliptic bases give no crossing.
    """
    A, B, C = curve.c_quadratic()
    disc = B * B - 4.0 * A * C
    scale = max(B * B, abs(4.0 * A * C), 1e-30)
    if disc < -tangency_tol * scale:
        raise NoIntersection("curve base is elliptic: no characteristic crossing")
    if disc <= tangency_tol * scale:
        raise Tangency("curve is tangent to the characteristic surface")
    if abs(A) < 1e-14 * max(abs(B), 1.0):
        raise NoIntersection("one characteristic crossing escapes to z = infinity")
    sq = math.sqrt(disc)
    # numerically stable quadratic roots
    qq = -(B + math.copysign(sq, B)) / 2.0
    z1, z2 = qq / A, C / qq
    pts = [MPoint(z, float(curve.t(z)), 0.0) for z in (z1, z2)]
    pts.sort(key=lambda pt: pt.t)
    slow, fast = pts
    if not (slow.t < 0.0 < fast.t):
        raise NoIntersection(
            f"crossings not split by the coincidence curve: t = {slow.t}, {fast.t}"
        )
    return slow, fast


def projections(q, params: ModelParams = DEFAULT_PARAMS) -> CProjections:
    """The four characteristic projections used by every admissibility check."""
    us, uf = c_crossings(hugoniot_through_point(q, params))
    ups, upf = c_crossings(hugoniot_prime_through_point(q, params))
    return CProjections(us, uf, ups, upf)


def _bisect_on_curve(fn, lo: float, hi: float, tol: float = 1e-10) -> float:
    flo = fn(lo)
    for _ in range(200):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        fmid = fn(mid)
        if flo * fmid <= 0.0:
            hi = mid
        else:
            lo, flo = mid, fmid
    return 0.5 * (lo + hi)


def sonic_prime_crossings(
    curve: HugoniotCurve,
    z_window: float = 60.0,
    n_scan: int = 6001,
    params: ModelParams | None = None,
):
    """Crossings of the curve with the sonic' surface, tagged 'slow'/'fast'.

    Found by sign scanning along the sampled curve; each root's speed matches
    the speed at one of the curve's characteristic crossings, which provides
    the tag.  Returns a list of (MPoint, tag).
    """
    p = params or curve.params
    zs = np.linspace(-z_window, z_window, n_scan)
    vals = np.asarray(sonic_prime_value(zs, curve.t(zs), curve.Y(zs), p), dtype=float)
    roots = []
    sign = np.sign(vals)
    flips = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
    fn = lambda z: sonic_prime_value(z, curve.t(z), curve.Y(z), p)
    for i in flips:
        roots.append((_bisect_on_curve(fn, zs[i], zs[i + 1]), "cross"))
    for i in np.nonzero(vals == 0.0)[0]:
        roots.append((float(zs[i]), "cross"))
    # tangential touches leave no sign change: refine dips of |son'|
    mag = np.abs(vals)
    dips = np.nonzero((mag[1:-1] < mag[:-2]) & (mag[1:-1] < mag[2:]))[0] + 1
    for i in dips:
        if sign[i - 1] * sign[i + 1] < 0 or vals[i] == 0.0:
            continue  # already found as a crossing
        lo, hi = zs[i - 1], zs[i + 1]
        for _ in range(80):
            m1 = lo + (hi - lo) / 3.0
            m2 = hi - (hi - lo) / 3.0
            if abs(fn(m1)) < abs(fn(m2)):
                hi = m2
            else:
                lo = m1
        z_min = 0.5 * (lo + hi)
        if abs(scaled_surface_value(fn(z_min), z_min)) < 1e-8:
            roots.append((z_min, "tangent"))
    roots.sort()
    out = []
    try:
        slow, fast = c_crossings(curve)
        s_slow = shock_speed(slow.z, slow.t, p)
        s_fast = shock_speed(fast.z, fast.t, p)
    except (NoIntersection, Tangency):
        s_slow = s_fast = None
    for z, how in roots:
        pt = curve.point(z)
        s = shock_speed(pt.z, pt.t, p)
        if s_slow is None:
            tag = "untagged"
        else:
            tag = "slow" if abs(s - s_slow) <= abs(s - s_fast) else "fast"
        if how == "tangent":
            tag = f"{tag}-tangent"
        out.append((pt, tag))
    return out


def sonic_prime_side(q, params: ModelParams = DEFAULT_PARAMS) -> str:
    """'slow' or 'fast' sheet of sonic' for a point on it.

    The sheets are separated by the hysteresis' curve and the line
    (z = 0, Y = -2c); the side follows from the sign of the t-coordinate of
    the equal-speed characteristic crossing.
    """
    z, t, Y = q
    if abs(scaled_surface_value(sonic_prime_value(z, t, Y, params), z)) > 1e-8:
        raise NotOnSurface(f"point {tuple(q)} is not on sonic'")
    hyst_y = hysteresis_point(z, params).Y if z != 0.0 else -2.0 * params.c
    above = Y - hyst_y
    if abs(above) <= SURFACE_TOL or abs(z) <= SURFACE_TOL:
        raise NotOnSurface("point lies on the slow/fast boundary of sonic'")
    if z > 0.0:
        return "slow" if above > 0.0 else "fast"
    return "fast" if above > 0.0 else "slow"


class LaxVerdict(NamedTuple):
    kind: str  # 'forward1' | 'backward2' | 'inadmissible'
    checked_at: MPoint
    conditions: dict

    @property
    def is_forward1(self) -> bool:
        return self.kind == "forward1"

    @property
    def is_backward2(self) -> bool:
        return self.kind == "backward2"


def lax_classify(q_from, q_to, params: ModelParams = DEFAULT_PARAMS, slack: float = 1e-9) -> LaxVerdict:
    """Classify the shock represented by q_to on the Hugoniot curve of q_from.

    L1.1 compares the speed against the slow characteristic crossing of the
    shared Hugoniot curve, L2.1 against the fast one; the two-sided condition
    L2 brackets the speed between the characteristic crossings of the
    Hugoniot' curve through the checked point.
    """
    s = shock_speed(q_to[0], q_to[1], params)
    proj = projections(q_to, params)
    s_us = shock_speed(proj.us.z, proj.us.t, params)
    s_uf = shock_speed(proj.uf.z, proj.uf.t, params)
    s_ups = shock_speed(proj.ups.z, proj.ups.t, params)
    s_upf = shock_speed(proj.upf.z, proj.upf.t, params)
    conds = {
        "L1.1": s <= s_us + slack,
        "L2.1": s >= s_uf - slack,
        "L2": (s_ups - slack <= s <= s_upf + slack),
    }
    if conds["L1.1"] and conds["L2"]:
        kind = "forward1"
    elif conds["L2.1"] and conds["L2"]:
        kind = "backward2"
    else:
        kind = "inadmissible"
    return LaxVerdict(kind, MPoint(*q_to), conds)


@dataclass
class WaveArc:
    """An oriented sampled curve in the manifold tagged with its wave type."""

    kind: str  # 'H1','H2','R1','R2','C1','C2','HUGP'
    z: np.ndarray
    t: np.ndarray
    Y: np.ndarray
    s: np.ndarray
    stop_event: str = ""
    lax: LaxVerdict | None = None
    meta: dict = field(default_factory=dict)

    @property
    def start(self) -> MPoint:
        return MPoint(float(self.z[0]), float(self.t[0]), float(self.Y[0]))

    @property
    def end(self) -> MPoint:
        return MPoint(float(self.z[-1]), float(self.t[-1]), float(self.Y[-1]))

    def __len__(self):
        return len(self.z)

    def states(self, params: ModelParams = DEFAULT_PARAMS):
        """Per-sample (u, v, u', v') arrays."""
        out = np.empty((len(self.z), 4))
        for i in range(len(self.z)):
            st = manifold_to_states(MPoint(self.z[i], self.t[i], self.Y[i]), params)
            out[i] = (st.w.u, st.w.v, st.wp.u, st.wp.v)
        return out


def _trace_shock_arc(
    curve: HugoniotCurve,
    z0: float,
    decreasing_s: bool,
    params: ModelParams,
    kind: str,
    rel_step: float = 1e-3,
    z_max: float = Z_MAX,
) -> WaveArc:
    """March along the curve in the direction of decreasing (or increasing)
    speed until the speed becomes critical (sonic surface) or z escapes."""
    d = curve.ds_dz(z0)
    want = -1.0 if decreasing_s else 1.0
    son0 = sonic_value(z0, curve.t(z0), curve.Y(z0), params)
    if abs(scaled_surface_value(son0, z0)) <= SURFACE_TOL or d == 0.0:
        pt = curve.point(z0)
        return WaveArc(
            kind,
            np.array([pt.z]),
            np.array([pt.t]),
            np.array([pt.Y]),
            np.array([curve.s(z0)]),
            stop_event="Sonic",
        )
    direction = math.copysign(1.0, d * want)
    zs = [z0]
    z = z0
    stop = "Escape"
    son_fn = lambda zz: sonic_value(zz, curve.t(zz), curve.Y(zz), params)
    prev_son = son0
    while abs(z) <= z_max:
        step = direction * rel_step * (1.0 + abs(z))
        z_new = z + step
        son_new = son_fn(z_new)
        if prev_son * son_new <= 0.0:
            z_stop = _bisect_on_curve(son_fn, min(z, z_new), max(z, z_new))
            zs.append(z_stop)
            stop = "Sonic"
            break
        z = z_new
        prev_son = son_new
        zs.append(z)
    z_arr = np.array(zs)
    return WaveArc(
        kind,
        z_arr,
        np.asarray(curve.t(z_arr), dtype=float),
        np.asarray(curve.Y(z_arr), dtype=float),
        np.asarray(curve.s(z_arr), dtype=float),
        stop_event=stop,
    )


def _require_on_locus(q, params: ModelParams, loci: str):
    z, t, Y = q
    on_c = abs(Y) <= 1e-9
    on_sonp = abs(scaled_surface_value(sonic_prime_value(z, t, Y, params), z)) <= 1e-8
    if "c" in loci and on_c:
        return "c"
    if "sonp" in loci and on_sonp:
        return "sonp"
    raise StartOffLocus(f"shock arc start {tuple(q)} is not on the admissible locus")


def forward_shock_arc(q_start, params: ModelParams = DEFAULT_PARAMS, **kw) -> WaveArc:
    """Forward (1-family) shock arc: decreasing speed from a start on the slow
    characteristic sheet or the slow sonic' sheet; stops on the sonic surface."""
    where = _require_on_locus(q_start, params, "c sonp")
    if where == "c" and not q_start[1] < 0.0:
        raise StartOffLocus("forward shock arcs start on the slow sheet (t < 0)")
    curve = hugoniot_through_point(q_start, params)
    arc = _trace_shock_arc(curve, q_start[0], True, params, "H1", **kw)
    if where == "sonp":
        verdict = lax_classify(q_start, q_start, params)
        arc.meta["non_local"] = True
        arc.lax = verdict
    else:
        arc.lax = LaxVerdict("forward1", MPoint(*q_start), {"on_cs": True})
    return arc


def backward_shock_arc(q_start, params: ModelParams = DEFAULT_PARAMS, **kw) -> WaveArc:
    """Backward (2-family) shock arc: increasing speed from the fast sheets."""
    where = _require_on_locus(q_start, params, "c sonp")
    if where == "c" and not q_start[1] > 0.0:
        raise StartOffLocus("backward shock arcs start on the fast sheet (t > 0)")
    curve = hugoniot_through_point(q_start, params)
    arc = _trace_shock_arc(curve, q_start[0], False, params, "H2", **kw)
    if where == "sonp":
        arc.meta["non_local"] = True
        arc.lax = lax_classify(q_start, q_start, params)
    else:
        arc.lax = LaxVerdict("backward2", MPoint(*q_start), {"on_cf": True})
    return arc
