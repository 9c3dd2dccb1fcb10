"""Wave-curve assembly: slow-sheet region decomposition, forward wave curves,
backward (2-reverse) sequences, and saturation by Hugoniot' sweeps."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .model import ModelParams, DEFAULT_PARAMS, StartOffLocus
from .manifold import MPoint, manifold_to_states, shock_speed
from .hugoniot import (
    WaveArc,
    c_crossings,
    forward_shock_arc,
    backward_shock_arc,
    hugoniot_prime_through_point,
)
from .curves import (
    integrate_composite,
    integrate_rarefaction,
    rarefaction_ds_numerator,
)


class CsRegion(Enum):
    IA = "Ia"
    IB = "Ib"
    II = "II"
    III = "III"

    @property
    def roman(self) -> str:
        return "I" if self in (CsRegion.IA, CsRegion.IB) else self.value


@dataclass(frozen=True)
class Separatrices:
    """Cached dividing curves of the slow characteristic sheet.

    r_s is the rarefaction trajectory through the slow double-sonic tangency
    point; r_fs the slow-sheet branch of the trajectory through the fast one,
    which meets t = 0 at z_hat.
    """

    r_s_z: np.ndarray
    r_s_t: np.ndarray
    r_fs_z: np.ndarray
    r_fs_t: np.ndarray
    z_hat: float
    z_tangency: float

    def r_s_at(self, z: float) -> float:
        return float(np.interp(z, self.r_s_z, self.r_s_t))

    def r_fs_at(self, z: float) -> float:
        return float(np.interp(z, self.r_fs_z, self.r_fs_t))


_SEPARATRIX_CACHE: dict = {}


def _trace_through(z0, t0, params, z_lo, z_hi, step=1e-3):
    """Rarefaction trajectory through (z0, t0) as a graph over [z_lo, z_hi];
    no stop events, just the raw integral curve both ways."""
    right = integrate_rarefaction(
        z0, t0, params=params, step=step, z_bound=z_hi,
        stop_at_inflection=False, stop_at_coincidence=False, direction=+1.0,
    )
    left = integrate_rarefaction(
        z0, t0, params=params, step=step, z_bound=abs(z_lo),
        stop_at_inflection=False, stop_at_coincidence=False, direction=-1.0,
    )
    z = np.concatenate([left.z[::-1][:-1], right.z])
    t = np.concatenate([left.t[::-1][:-1], right.t])
    keep = np.argsort(z)
    return z[keep], t[keep]


def separatrices(params: ModelParams = DEFAULT_PARAMS, z_span: float = 40.0) -> Separatrices:
    key = params.key()
    if key in _SEPARATRIX_CACHE:
        return _SEPARATRIX_CACHE[key]
    zc = params.z_crit
    t1 = -params.b1 * math.sqrt(params.b1 + 1.0) / (2.0 * (params.b1 + 2.0))
    rs_z, rs_t = _trace_through(zc, t1, params, -z_span, z_span)
    rf_z, rf_t = _trace_through(-zc, -t1, params, -z_span, z_span)
    # slow-sheet branch of r_f: the part with t <= 0 (z <= z_hat)
    neg = rf_t <= 0.0
    if neg.any():
        z_hat = float(rf_z[neg].max())
        rfs_z, rfs_t = rf_z[neg], rf_t[neg]
    else:
        z_hat = -math.inf
        rfs_z, rfs_t = rf_z[:1], rf_t[:1]
    sep = Separatrices(rs_z, rs_t, rfs_z, rfs_t, z_hat, zc)
    _SEPARATRIX_CACHE[key] = sep
    return sep


def classify_cs_region(z: float, t: float, params: ModelParams = DEFAULT_PARAMS) -> CsRegion:
    """Region of a slow-sheet point (t < 0).

    Region I lies above the separatrix rarefaction through the tangency point
    (continued by the inflection branch past it): forward rarefactions from
    region I reach the coincidence curve.  Below it, the sign of ds/dz
    separates II (speed grows with z) from III (speed falls with z).
    """
    if not t < 0.0:
        raise StartOffLocus("slow-sheet region classification needs t < 0")
    sep = separatrices(params)
    if z <= sep.z_tangency:
        boundary = sep.r_s_at(z)
    else:
        p_, _, r_ = _pqr_local(z, params)
        boundary = -r_ / p_
    if t > boundary:
        if z <= sep.z_hat and t > sep.r_fs_at(z):
            return CsRegion.IA
        return CsRegion.IB
    if rarefaction_ds_numerator(z, t, params) > 0.0:
        return CsRegion.II
    return CsRegion.III


def _pqr_local(z, params):
    b1 = params.b1
    z2 = z * z
    return (
        (b1 + 1.0) * z2 * z2 * z + (b1 + 4.0) * z2 * z + 3.0 * z,
        (b1 + 1.0) * z2 * z2 + b1 * z2 - 1.0,
        (b1 - 1.0) * z2 + 1.0,
    )


@dataclass
class WaveCurve:
    """Ordered arcs of one family emanating from a base point."""

    base: MPoint
    family: int  # 1 (forward) or 2 (backward)
    arcs: list = field(default_factory=list)
    region: CsRegion | None = None
    incomplete: bool = False

    def arc(self, kind: str):
        for a in self.arcs:
            if a.kind == kind:
                return a
        return None

    @property
    def kinds(self):
        return [a.kind for a in self.arcs]


def forward_wave_curve(q0: MPoint, params: ModelParams = DEFAULT_PARAMS) -> WaveCurve:
    """Local forward wave curve from a slow-sheet point: shock arc one way,
    rarefaction the other, then composite and its continuations."""
    z0, t0, Y0 = q0
    if abs(Y0) > 1e-9 or not t0 < 0.0:
        raise StartOffLocus("forward wave curves start on the slow sheet")
    region = classify_cs_region(z0, t0, params)
    wc = WaveCurve(MPoint(*q0), 1, region=region)
    wc.arcs.append(forward_shock_arc(q0, params))
    rare = integrate_rarefaction(z0, t0, "forward", params)
    wc.arcs.append(rare)
    if rare.stop_event != "Inflection":
        return wc
    s_start = shock_speed(z0, t0, params)
    # the composite image retraces the rarefaction: opposite arrival direction
    arrival = math.copysign(1.0, rare.z[-1] - rare.z[0])
    comp = integrate_composite(
        float(rare.z[-1]),
        "forward",
        s_target=s_start,
        params=params,
        image_direction=-arrival,
    )
    wc.arcs.append(comp.to_wave_arc())
    wc.arcs[-1].meta["composite"] = comp
    if comp.stop_event == "SpeedMatch":
        # the composite has returned to the base Hugoniot curve's sonic'
        # crossing: continue with the non-local shock arc
        try:
            nl = forward_shock_arc(comp.end, params)
            nl.meta["non_local"] = True
            wc.arcs.append(nl)
        except StartOffLocus:
            wc.incomplete = True
    elif comp.stop_event == "DoubleContact":
        jump = hugoniot_prime_jump(comp.end, params)
        land = jump.end
        if land.t < 0.0:
            wc.arcs.append(jump)
            rare2 = integrate_rarefaction(land.z, land.t, "forward", params)
            rare2.meta["post_jump"] = True
            wc.arcs.append(rare2)
        # a composite that ran to the fast-sheet double contact has no
        # continuation in the local wave-curve cases; the curve ends there
    else:
        wc.incomplete = True
    return wc


def hugoniot_prime_jump(q_from: MPoint, params: ModelParams = DEFAULT_PARAMS) -> WaveArc:
    """Speed-preserving Hugoniot' arc from a double-contact point to the slow
    characteristic sheet (the discontinuous link of case-3 wave curves)."""
    curve = hugoniot_prime_through_point(q_from, params)
    slow, fast = c_crossings(curve)
    s_here = shock_speed(q_from.z, q_from.t, params)
    s_slow = shock_speed(slow.z, slow.t, params)
    s_fast = shock_speed(fast.z, fast.t, params)
    land = slow if abs(s_slow - s_here) <= abs(s_fast - s_here) else fast
    zs = np.linspace(q_from.z, land.z, 64)
    ts = np.asarray(curve.t(zs), dtype=float)
    Ys = np.asarray(curve.Y(zs), dtype=float)
    ss = np.asarray([shock_speed(zz, tt, params) for zz, tt in zip(zs, ts)])
    arc = WaveArc("HUGP", zs, ts, Ys, ss, stop_event="Landed")
    arc.meta["speed_preserved"] = abs(
        shock_speed(land.z, land.t, params) - s_here
    )
    return arc


def backward_wave_sequence(q0: MPoint, params: ModelParams = DEFAULT_PARAMS) -> WaveCurve:
    """2-reverse wave structure from a fast-sheet point: shock arc with
    increasing speed, rarefaction with decreasing speed toward the fast
    inflection branch, and the composite continuation past it."""
    z0, t0, Y0 = q0
    if abs(Y0) > 1e-9 or not t0 > 0.0:
        raise StartOffLocus("backward sequences start on the fast sheet")
    wc = WaveCurve(MPoint(*q0), 2)
    wc.arcs.append(backward_shock_arc(q0, params))
    rare = integrate_rarefaction(z0, t0, "backward", params)
    wc.arcs.append(rare)
    if rare.stop_event != "Inflection":
        return wc
    arrival = math.copysign(1.0, rare.z[-1] - rare.z[0])
    comp = integrate_composite(
        float(rare.z[-1]), "backward", params=params, image_direction=-arrival
    )
    arc = comp.to_wave_arc()
    arc.kind = "C2"
    comp.kind = "C2"
    arc.meta["composite"] = comp
    wc.arcs.append(arc)
    if comp.stop_event not in ("DoubleContact", "SpeedMatch", "Bound"):
        wc.incomplete = comp.stop_event == "Singularity"
    return wc


Z_WINDOW_DEFAULT = 20.0


@dataclass
class SaturatedSurface:
    """Union of Hugoniot' curves through every sample of a generating arc.

    Each fiber keeps W' constant, so the surface is implicitly the preimage
    of the generator's W'-track; that track is what intersection tests use.
    """

    generator: WaveArc
    params: ModelParams
    wp_track: np.ndarray  # (n, 2) primed states along the generator
    fiber_z: np.ndarray | None = None
    fibers: list | None = None

    @property
    def kind(self) -> str:
        return self.generator.kind

    def sample_fibers(self, z_window: float = Z_WINDOW_DEFAULT, n: int = 400):
        """Materialize the fiber curves for export."""
        self.fiber_z = np.linspace(-z_window, z_window, n)
        self.fibers = []
        for i in range(len(self.generator.z)):
            q = MPoint(
                float(self.generator.z[i]),
                float(self.generator.t[i]),
                float(self.generator.Y[i]),
            )
            curve = hugoniot_prime_through_point(q, self.params)
            self.fibers.append(
                (
                    np.asarray(curve.t(self.fiber_z), dtype=float),
                    np.asarray(curve.Y(self.fiber_z), dtype=float),
                )
            )
        return self


def saturate(arc: WaveArc, params: ModelParams = DEFAULT_PARAMS, thin: int = 1) -> SaturatedSurface:
    """Saturated surface of one wave arc: one Hugoniot' fiber per sample."""
    idx = np.arange(0, len(arc.z), max(1, thin))
    if idx[-1] != len(arc.z) - 1:
        idx = np.append(idx, len(arc.z) - 1)
    track = np.empty((len(idx), 2))
    for j, i in enumerate(idx):
        st = manifold_to_states(
            MPoint(float(arc.z[i]), float(arc.t[i]), float(arc.Y[i])), params
        )
        track[j] = (st.wp.u, st.wp.v)
    gen = WaveArc(
        arc.kind,
        arc.z[idx],
        arc.t[idx],
        arc.Y[idx],
        arc.s[idx],
        stop_event=arc.stop_event,
        lax=arc.lax,
        meta=dict(arc.meta),
    )
    return SaturatedSurface(gen, params, track)


def saturate_wave_curve(wc: WaveCurve, params: ModelParams = DEFAULT_PARAMS, thin: int = 1):
    """Per-arc saturated surfaces of a wave curve (kept separate by arc kind)."""
    return [saturate(a, params, thin) for a in wc.arcs if len(a) > 1]
