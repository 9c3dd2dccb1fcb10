"""Rarefaction curves on the characteristic surface and composite curves on
the sonic' surface.

Rarefactions integrate the eigenvector line field written in (z, t); the
speed grows toward the inflection locus on the slow sheet.  Composites are
the pullback of rarefactions under the speed-preserving projection from
sonic' to the characteristic surface.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .model import ModelParams, DEFAULT_PARAMS, PoleAtZero, StartOffLocus, Tangency
from .hugoniot import WaveArc
from .manifold import (
    MPoint,
    Z_MAX,
    manifold_to_states,
    shock_speed,
    sonic_prime_t,
    sonic_prime_value,
)

ODE_STEP = 1e-3
EVENT_TOL = 1e-10
SINGULARITY_HALT = 1e-6


def rarefaction_field(z: float, t: float, params: ModelParams = DEFAULT_PARAMS) -> float:
    """dt/dz of the rarefaction line field; the denominator is positive for
    b1 > 1, so the field is a graph slope everywhere in the chart."""
    b1 = params.b1
    num = (
        -t * (b1 - 2.0) * z**5
        - 2.0 * t * (b1 - 2.0) * z**3
        + 2.0 * (b1 - 1.0) * z**2
        - t * (b1 - 2.0) * z
        + 2.0
    )
    den = (z * z + 1.0) ** 2 * (1.0 + (b1 - 1.0) * z * z)
    return num / den


def rarefaction_ds_numerator(z: float, t: float, params: ModelParams = DEFAULT_PARAMS) -> float:
    """Numerator of ds/dz along rarefactions; its zero set is the inflection
    locus, and its sign fixes the orientation of speed growth."""
    b1 = params.b1
    return z * (z * z + 1.0) * ((b1 + 1.0) * z * z + 3.0) * t + (b1 - 1.0) * z * z + 1.0


def rarefaction_ds_dz(z: float, t: float, params: ModelParams = DEFAULT_PARAMS) -> float:
    den = ((params.b1 - 1.0) * z * z + 1.0) * (z * z + 1.0)
    return params.c * rarefaction_ds_numerator(z, t, params) / den


def _rk4_step(fn, z: float, t: float, h: float) -> float:
    k1 = fn(z, t)
    k2 = fn(z + h / 2.0, t + h * k1 / 2.0)
    k3 = fn(z + h / 2.0, t + h * k2 / 2.0)
    k4 = fn(z + h, t + h * k3)
    return t + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0


def integrate_rarefaction(
    z0: float,
    t0: float,
    mode: str = "forward",
    params: ModelParams = DEFAULT_PARAMS,
    step: float = ODE_STEP,
    z_bound: float = Z_MAX,
    stop_at_inflection: bool = True,
    stop_at_coincidence: bool = True,
    direction: float | None = None,
) -> WaveArc:
    """Trace a rarefaction arc from (z0, t0) on the characteristic surface.

    mode 'forward' follows increasing speed (slow-sheet arcs, t < 0),
    'backward' decreasing speed (fast sheet, t > 0).  Stops when t crosses
    zero (Coincidence), when ds/dz vanishes (Inflection), or at the z bound;
    events are bisected to 1e-10 in z.  Passing an explicit marching
    direction (+1/-1 in z) bypasses the sheet checks; separatrix tracing
    uses that together with the disabled stop events.
    """
    if mode not in ("forward", "backward"):
        raise ValueError(f"mode must be forward or backward, not {mode!r}")
    if direction is None:
        if mode == "forward" and not t0 < 0.0:
            raise StartOffLocus("forward rarefactions start on the slow sheet (t < 0)")
        if mode == "backward" and not t0 > 0.0:
            raise StartOffLocus("backward rarefactions start on the fast sheet (t > 0)")
    fn = lambda z, t: rarefaction_field(z, t, params)
    n0 = rarefaction_ds_numerator(z0, t0, params)
    n_scale = (1.0 + abs(z0)) ** 5 * max(1.0, abs(t0))
    if abs(n0) <= 1e-12 * n_scale:
        n0 = 0.0
    kind = "R1" if mode == "forward" else "R2"
    if n0 == 0.0 and direction is None:
        return WaveArc(
            kind,
            np.array([z0]),
            np.array([t0]),
            np.array([0.0]),
            np.array([shock_speed(z0, t0, params)]),
            stop_event="Inflection",
        )
    if direction is None:
        want = 1.0 if mode == "forward" else -1.0
        direction = math.copysign(1.0, n0 * want)
    # cross t = 0 means leaving the sheet; sign of t0 fixes the crossing test
    t_sign = math.copysign(1.0, t0) if t0 != 0.0 else 1.0
    zs, ts = [z0], [t0]
    z, t = z0, t0
    stop = "Bound"
    while abs(z) <= z_bound:
        h = direction * step
        t_new = _rk4_step(fn, z, t, h)
        z_new = z + h
        crossed_c = stop_at_coincidence and (t_new * t_sign <= 0.0)
        n_new = rarefaction_ds_numerator(z_new, t_new, params)
        crossed_i = n_new * n0 <= 0.0 and n0 != 0.0
        if crossed_c or (crossed_i and stop_at_inflection):
            if crossed_c and crossed_i:
                # resolve which event fires first inside the step
                z_c = _bisect_event(fn, z, t, h, lambda zz, tt: tt * t_sign)
                z_i = _bisect_event(
                    fn, z, t, h, lambda zz, tt: rarefaction_ds_numerator(zz, tt, params) * n0
                )
                first_c = abs(z_c - z) <= abs(z_i - z)
            else:
                first_c = crossed_c
            ev = lambda zz, tt: (
                tt * t_sign if first_c else rarefaction_ds_numerator(zz, tt, params) * n0
            )
            z_ev = _bisect_event(fn, z, t, h, ev)
            t_ev = _rk4_step(fn, z, t, z_ev - z)
            zs.append(z_ev)
            ts.append(t_ev)
            stop = "Coincidence" if first_c else "Inflection"
            break
        z, t = z_new, t_new
        zs.append(z)
        ts.append(t)
    z_arr = np.array(zs)
    t_arr = np.array(ts)
    s_arr = np.array([shock_speed(zz, tt, params) for zz, tt in zip(zs, ts)])
    return WaveArc(kind, z_arr, t_arr, np.zeros_like(z_arr), s_arr, stop_event=stop)


def _bisect_event(fn, z: float, t: float, h: float, event, tol: float = EVENT_TOL) -> float:
    """Locate the zero of event(z, t(z)) inside one step by bisection on the
    step size; each trial re-integrates from the accepted point."""
    lo, hi = 0.0, h
    e0 = event(z, t)
    for _ in range(200):
        if abs(hi - lo) <= tol:
            break
        mid = 0.5 * (lo + hi)
        t_mid = _rk4_step(fn, z, t, mid)
        if event(z + mid, t_mid) * e0 <= 0.0:
            hi = mid
        else:
            lo = mid
    return z + 0.5 * (lo + hi)


def project_to_characteristic(z1: float, Y1: float, params: ModelParams = DEFAULT_PARAMS):
    """Speed-preserving projection from sonic' to the characteristic surface.

    The image lies on the Hugoniot curve through the sonic' point and carries
    the same shock speed.  Undefined over z1 = 0.
    """
    if z1 == 0.0:
        raise PoleAtZero("the projection is undefined at z1 = 0")
    a1, a2, a3, a4, b1 = params.a1, params.a2, params.a3, params.a4, params.b1
    c = params.c
    z2 = z1 * z1
    p_ = (b1 + 1.0) * z2 * z2 * z1 + (b1 + 4.0) * z2 * z1 + 3.0 * z1
    q_ = (b1 + 1.0) * z2 * z2 + b1 * z2 - 1.0
    r_ = (b1 - 1.0) * z2 + 1.0
    t1 = (q_ * Y1 - 2.0 * c * r_) / (2.0 * c * p_)
    # W-state of the sonic' point
    ut = 2.0 * c * z1 / (z2 + 1.0) + c * t1 * (z2 - 1.0)
    v1 = c / (z2 + 1.0) + c * t1 * z1
    um = (ut - a1 + a4) / b1
    vm = v1 - a3
    u0 = um + z1 * Y1 / 2.0
    v0 = vm + Y1 / 2.0
    s_here = um + a4 + z1 * v1
    # characteristic crossings of the Hugoniot curve through that state
    K = b1 * u0 + a1 - a4
    A = v0 + a3
    B = -K
    C = -(v0 + a2)
    disc = B * B - 4.0 * A * C
    scale = max(B * B, abs(4.0 * A * C), 1e-30)
    if abs(A) < 1e-300:
        raise Tangency("projection target escapes to z = infinity")
    if disc < -1e-12 * scale:
        raise Tangency("sonic' point has an elliptic state: no projection")
    if disc <= 1e-12 * scale:
        # double root: hysteresis' points project onto the coincidence curve
        roots = (-B / (2.0 * A),) * 2
    else:
        sq = math.sqrt(disc)
        qq = -(B + math.copysign(sq, B)) / 2.0
        roots = (qq / A, C / qq)
    c3 = b1 * (v0 + a3)
    c1_ = b1 * (v0 + a2) + 2.0 * c
    best = None
    best_gap = math.inf
    for z in roots:
        zq = z * z
        t = (c3 * zq * z - K * zq + c1_ * z - K) / (
            c * (zq + 1.0) * ((b1 - 1.0) * zq + 1.0)
        )
        utx = 2.0 * c * z / (zq + 1.0) + c * t * (zq - 1.0)
        v1x = c / (zq + 1.0) + c * t * z
        s = (utx - a1 + a4) / b1 + a4 + z * v1x
        gap = abs(s - s_here)
        if gap < best_gap:
            best_gap = gap
            best = (z, t)
    return best


def composite_field(z1: float, Y1: float, params: ModelParams = DEFAULT_PARAMS, h: float = 1e-7):
    """Unit direction of the composite curve at (z1, Y1) on sonic', as the
    pullback of the rarefaction field under the projection (chain rule with
    numerically differentiated projection).  Returns (direction, |det J|)."""
    zp = project_to_characteristic
    z_a, t_a = zp(z1 + h, Y1, params)
    z_b, t_b = zp(z1 - h, Y1, params)
    z_c, t_c = zp(z1, Y1 + h, params)
    z_d, t_d = zp(z1, Y1 - h, params)
    j11 = (z_a - z_b) / (2.0 * h)
    j12 = (z_c - z_d) / (2.0 * h)
    j21 = (t_a - t_b) / (2.0 * h)
    j22 = (t_c - t_d) / (2.0 * h)
    det = j11 * j22 - j12 * j21
    if abs(det) < 1e-9:
        raise Tangency("composite field singular here")
    zc2, tc2 = zp(z1, Y1, params)
    f = rarefaction_field(zc2, tc2, params)
    dz = (j22 * 1.0 - j12 * f) / det
    dy = (-j21 * 1.0 + j11 * f) / det
    nrm = math.hypot(dz, dy)
    return (dz / nrm, dy / nrm), abs(det)


@dataclass
class CompositeArc:
    """Composite arc on sonic' with the linked characteristic images."""

    z1: np.ndarray
    Y1: np.ndarray
    t: np.ndarray
    s: np.ndarray
    link_z: np.ndarray
    link_t: np.ndarray
    stop_event: str = ""
    kind: str = "C1"
    meta: dict = field(default_factory=dict)

    def to_wave_arc(self) -> WaveArc:
        return WaveArc(
            self.kind, self.z1, self.t, self.Y1, self.s, stop_event=self.stop_event
        )

    @property
    def end(self) -> MPoint:
        return MPoint(float(self.z1[-1]), float(self.t[-1]), float(self.Y1[-1]))

    def __len__(self):
        return len(self.z1)


def integrate_composite(
    z_start: float,
    mode: str = "forward",
    s_target: float | None = None,
    params: ModelParams = DEFAULT_PARAMS,
    step: float = ODE_STEP,
    bound: float = 60.0,
    max_steps: int = 2_000_000,
    image_direction: float | None = None,
) -> CompositeArc:
    """Trace a composite arc on sonic' starting at the inflection point over
    z_start (where sonic' meets the characteristic surface).

    The speed is critical along the curve at an inflection start, so the two
    branches cannot be told apart by the speed there; image_direction gives
    the z-direction the characteristic image must move in, which is opposite
    the direction the paired rarefaction arrived with.  Without it the branch
    is picked by a local speed probe (mode 'forward' decreasing, 'backward'
    increasing), which only separates branches away from the critical start.

    Stops at the double sonic lines |z1| = 1/sqrt(b1+1), when the speed
    reaches s_target, near a field singularity, or at the bound.
    """
    if z_start == 0.0:
        raise PoleAtZero("no inflection point over z = 0")
    zc = params.z_crit
    want_decreasing = mode == "forward"
    kind = "C1" if want_decreasing else "C2"

    def s_at(z1, Y1):
        return shock_speed(z1, sonic_prime_t(z1, Y1, params), params)

    # step off the characteristic surface to get a usable chart point
    y_eps = 1e-9
    px, py = z_start, y_eps
    (dx, dy), _ = composite_field(px, py, params)
    if image_direction is not None:
        z_img0, _ = project_to_characteristic(px, py, params)
        z_img1, _ = project_to_characteristic(px + 1e-6 * dx, py + 1e-6 * dy, params)
        if (z_img1 - z_img0) * image_direction < 0.0:
            dx, dy = -dx, -dy
    else:
        s_plus = s_at(px + 1e-6 * dx, py + 1e-6 * dy)
        s_minus = s_at(px - 1e-6 * dx, py - 1e-6 * dy)
        if (s_plus < s_minus) != want_decreasing:
            dx, dy = -dx, -dy
    # the start point itself (on the inflection locus, Y1 = 0)
    s0 = shock_speed(z_start, sonic_prime_t(z_start, y_eps, params), params)
    z1s, Y1s = [z_start], [0.0]
    stop = "Bound"
    ldx, ldy = dx, dy
    field = composite_field
    # the image retraces a rarefaction trajectory; carrying it alongside lets
    # every accepted sample be snapped onto the exact composite
    img_z, img_t = z_start, sonic_prime_t(z_start, 0.0, params)
    rfield = lambda zz, tt: rarefaction_field(zz, tt, params)

    def oriented(x, y, rx, ry):
        (ax, ay), _ = field(x, y, params)
        if ax * rx + ay * ry < 0.0:
            return -ax, -ay
        return ax, ay

    for i in range(max_steps):
        try:
            (dx, dy), det = field(px, py, params)
        except Tangency:
            stop = "Singularity"
            break
        if dx * ldx + dy * ldy < 0.0:
            dx, dy = -dx, -dy
        h2 = step / 2.0
        k2x, k2y = oriented(px + h2 * dx, py + h2 * dy, dx, dy)
        k3x, k3y = oriented(px + h2 * k2x, py + h2 * k2y, dx, dy)
        k4x, k4y = oriented(px + step * k3x, py + step * k3y, dx, dy)
        nx = px + step * (dx + 2.0 * k2x + 2.0 * k3x + k4x) / 6.0
        ny = py + step * (dy + 2.0 * k2y + 2.0 * k3y + k4y) / 6.0
        # corrector: advance the image rarefaction to the predicted image z
        # and snap the prediction onto the sonic' crossing of its curve
        try:
            z_img_pred, _ = project_to_characteristic(nx, ny, params)
            dz_img = z_img_pred - img_z
            n_sub = max(1, int(abs(dz_img) / ODE_STEP) + 1)
            t_run, z_run = img_t, img_z
            for _ in range(n_sub):
                t_run = _rk4_step(rfield, z_run, t_run, dz_img / n_sub)
                z_run += dz_img / n_sub
            w_img = manifold_to_states(MPoint(z_run, t_run, 0.0), params).w
            snapped = _correct_onto_composite(nx, ny, w_img, params)
        except (PoleAtZero, Tangency, ZeroDivisionError):
            snapped = None
        if snapped is not None:
            nx, ny = snapped
            img_z, img_t = z_run, t_run
        # events
        if (abs(nx) - zc) * (abs(px) - zc) <= 0.0:
            frac = _bisect_fraction((px, py), (nx, ny), lambda p: abs(p[0]) - zc)
            px, py = px + frac * (nx - px), py + frac * (ny - py)
            ldx, ldy = dx, dy
            z1s.append(px)
            Y1s.append(py)
            stop = "DoubleContact"
            break
        if s_target is not None:
            s_new = s_at(nx, ny)
            s_old = s_at(px, py)
            if (s_new - s_target) * (s_old - s_target) <= 0.0:
                frac = _bisect_fraction(
                    (px, py), (nx, ny), lambda p: s_at(p[0], p[1]) - s_target
                )
                px, py = px + frac * (nx - px), py + frac * (ny - py)
                z1s.append(px)
                Y1s.append(py)
                stop = "SpeedMatch"
                break
        if abs(nx) < SINGULARITY_HALT or _near_saddle((nx, ny), params):
            z1s.append(nx)
            Y1s.append(ny)
            stop = "Singularity"
            break
        if abs(nx) > bound or abs(ny) > bound:
            stop = "Bound"
            break
        px, py = nx, ny
        ldx, ldy = dx, dy
        z1s.append(px)
        Y1s.append(py)
    else:
        stop = "Bound"
    z1_arr = np.array(z1s)
    Y1_arr = np.array(Y1s)
    t_arr = np.array([sonic_prime_t(zz, yy, params) for zz, yy in zip(z1s, Y1s)])
    s_arr = np.array([shock_speed(zz, tt, params) for zz, tt in zip(z1_arr, t_arr)])
    link_z = np.empty_like(z1_arr)
    link_t = np.empty_like(z1_arr)
    for i, (zz, yy) in enumerate(zip(z1s, Y1s)):
        link_z[i], link_t[i] = project_to_characteristic(zz, yy if yy != 0.0 else y_eps, params)
    arc = CompositeArc(z1_arr, Y1_arr, t_arr, s_arr, link_z, link_t, stop, kind)
    arc.meta["s_start"] = s0
    return arc


def _near_saddle(p, params: ModelParams) -> bool:
    """The slow/fast boundary of sonic' crosses itself at (z=0, Y=-2c)."""
    return math.hypot(p[0], p[1] + 2.0 * params.c) < SINGULARITY_HALT


def _correct_onto_composite(z1_pred, Y1_pred, w_img, params):
    """Snap a predicted chart point onto the true composite sample: the
    sonic' crossing of the Hugoniot curve through the image state nearest the
    prediction.  Returns None when no crossing brackets nearby."""
    a1, a2, a3, a4, b1 = params.a1, params.a2, params.a3, params.a4, params.b1
    c = params.c
    u0, v0 = w_img
    K = b1 * u0 + a1 - a4
    c3 = b1 * (v0 + a3)
    c1 = b1 * (v0 + a2) + 2.0 * c
    y2 = -2.0 * (v0 + a3)
    y1 = 2.0 * K
    y0 = 2.0 * (v0 + a2)

    def curve_tY(zz):
        z2 = zz * zz
        rden = (b1 - 1.0) * z2 + 1.0
        t = (c3 * z2 * zz - K * z2 + c1 * zz - K) / (c * (z2 + 1.0) * rden)
        Y = (y2 * z2 + y1 * zz + y0) / rden
        return t, Y

    def g(zz):
        z2 = zz * zz
        p_ = (b1 + 1.0) * z2 * z2 * zz + (b1 + 4.0) * z2 * zz + 3.0 * zz
        q_ = (b1 + 1.0) * z2 * z2 + b1 * z2 - 1.0
        r_ = (b1 - 1.0) * z2 + 1.0
        t, Y = curve_tY(zz)
        return -2.0 * c * p_ * t + q_ * Y - 2.0 * c * r_

    half = 2e-3
    g0 = g(z1_pred)
    lo = None
    while half < 0.3:
        a, b = z1_pred - half, z1_pred + half
        ga, gb = g(a), g(b)
        if ga * g0 <= 0.0:
            lo, hi, glo, ghi = a, z1_pred, ga, g0
            break
        if gb * g0 <= 0.0:
            lo, hi, glo, ghi = z1_pred, b, g0, gb
            break
        half *= 2.0
    if lo is None:
        return None
    # Illinois iteration on the bracket
    for _ in range(80):
        if hi - lo < 1e-13 * (1.0 + abs(lo)):
            break
        mid = (lo * ghi - hi * glo) / (ghi - glo) if ghi != glo else 0.5 * (lo + hi)
        if not (lo < mid < hi):
            mid = 0.5 * (lo + hi)
        gm = g(mid)
        if gm == 0.0:
            lo = hi = mid
            break
        if gm * glo < 0.0:
            hi, ghi = mid, gm
            glo *= 0.5
        else:
            lo, glo = mid, gm
            ghi *= 0.5
    z1c = 0.5 * (lo + hi)
    Y1c = curve_tY(z1c)[1]
    if abs(z1c - z1_pred) > 0.05 or abs(Y1c - Y1_pred) > 0.05:
        return None
    return z1c, Y1c


def _bisect_fraction(a, b, event, tol: float = EVENT_TOL) -> float:
    lo, hi = 0.0, 1.0
    e0 = event(a)
    gap = math.hypot(b[0] - a[0], b[1] - a[1])
    for _ in range(120):
        if (hi - lo) * gap <= tol:
            break
        mid = 0.5 * (lo + hi)
        pm = (a[0] + mid * (b[0] - a[0]), a[1] + mid * (b[1] - a[1]))
        if event(pm) * e0 <= 0.0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)
