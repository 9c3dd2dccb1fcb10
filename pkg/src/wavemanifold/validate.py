"""Deterministic invariant suite over all modules.

Each check draws its own samples from a seeded generator, reports the worst
residual seen and compares it against the module threshold.  Fixed seed and
count give a byte-identical report.
"""

from __future__ import annotations

import json
import math
import zlib

import numpy as np

from . import exportio
from .model import (
    ModelParams,
    DEFAULT_PARAMS,
    RegionClass,
    classify_state,
    discriminant,
    eigen,
    flux,
    jacobian,
    rh_residual,
)
from .manifold import (
    MPoint,
    AmbiguousOnSurface,
    double_sonic,
    hysteresis_point,
    inflection_t,
    manifold_to_states,
    region_of,
    scc_value,
    shock_speed,
    sonic_prime_t,
    sonic_prime_value,
    sonic_value,
    states_to_manifold,
)
from .hugoniot import (
    c_crossings,
    hugoniot_oracle,
    hugoniot_from_state,
    hugoniot_prime_through_point,
)
from .curves import (
    integrate_rarefaction,
    project_to_characteristic,
    rarefaction_ds_dz,
)


def _sample_hyperbolic_states(rng, n, params, lo=-4.0, hi=4.0):
    out = []
    while len(out) < n:
        w = (rng.uniform(lo, hi), rng.uniform(lo, hi))
        if discriminant(w, params) > 1e-6:
            out.append(w)
    return out


def check_rh_residual(rng, n, params):
    worst = 0.0
    for _ in range(n):
        z, t, Y = rng.uniform(-10, 10, 3)
        st = manifold_to_states(MPoint(z, t, Y), params)
        r = rh_residual(st.w, st.wp, st.s, params)
        worst = max(worst, abs(r[0]), abs(r[1]))
    return worst


def check_blowup_relation(rng, n, params):
    worst = 0.0
    for _ in range(n):
        z, t, Y = rng.uniform(-10, 10, 3)
        st = manifold_to_states(MPoint(z, t, Y), params)
        worst = max(worst, abs((st.w.u - st.wp.u) - z * (st.w.v - st.wp.v)))
    return worst


def check_roundtrip(rng, n, params):
    worst = 0.0
    for _ in range(n):
        z, t, Y = rng.uniform(-5, 5, 3)
        if abs(Y) < 1e-6:
            Y = 1e-3
        st = manifold_to_states(MPoint(z, t, Y), params)
        q = states_to_manifold(st.w, st.wp, params)
        worst = max(worst, abs(q.z - z), abs(q.t - t), abs(q.Y - Y))
    return worst


def check_jacobian_fd(rng, n, params):
    worst = 0.0
    h = 1e-6
    for _ in range(n):
        u, v = rng.uniform(-3, 3, 2)
        J = jacobian((u, v), params)
        fd = [
            [
                (flux((u + h, v), params)[i] - flux((u - h, v), params)[i]) / (2 * h)
                for i in (0, 1)
            ],
            [
                (flux((u, v + h), params)[i] - flux((u, v - h), params)[i]) / (2 * h)
            for i in (0, 1)
            ],
        ]
        for i in (0, 1):
            for j in (0, 1):
                scale = max(1.0, abs(J[i][j]))
                worst = max(worst, abs(J[i][j] - fd[j][i]) / scale)
    return worst


def check_eigen_charpoly(rng, n, params):
    worst = 0.0
    for _ in range(n):
        u, v = rng.uniform(-3, 3, 2)
        e = eigen((u, v), params)
        if not e.is_real:
            continue
        J = jacobian((u, v), params)
        for lam in (e.lambda_s, e.lambda_f):
            det = (J[0][0] - lam) * (J[1][1] - lam) - J[0][1] * J[1][0]
            worst = max(worst, abs(det))
    return worst


def check_classify_sign(rng, n, params):
    bad = 0
    for _ in range(n):
        w = (rng.uniform(-2, 2), rng.uniform(-3, 2))
        cls = classify_state(w, params)
        if cls is RegionClass.BOUNDARY:
            continue
        ess = discriminant(w, params)
        if (cls is RegionClass.HYPERBOLIC) != (ess > 0):
            bad += 1
    return float(bad)


def check_oracle_equivalence(rng, n, params):
    worst = 0.0
    for _ in range(n):
        w0 = (rng.uniform(-3, 3), rng.uniform(-3, 3))
        z = rng.uniform(-8, 8)
        curve = hugoniot_from_state(w0, params)
        t_o, y_o = hugoniot_oracle(w0, z, params)
        worst = max(worst, abs(curve.t(z) - t_o), abs(curve.Y(z) - y_o))
    return worst


def check_state_constancy(rng, n, params):
    worst = 0.0
    for _ in range(n):
        z0, t0, Y0 = rng.uniform(-3, 3, 3)
        q = MPoint(z0, t0, Y0)
        st0 = manifold_to_states(q, params)
        curve = hugoniot_from_state(st0.w, params)
        pcurve = hugoniot_prime_through_point(q, params)
        for z in rng.uniform(-6, 6, 4):
            st = manifold_to_states(curve.point(z), params)
            worst = max(worst, abs(st.w.u - st0.w.u), abs(st.w.v - st0.w.v))
            stp = manifold_to_states(pcurve.point(z), params)
            worst = max(worst, abs(stp.wp.u - st0.wp.u), abs(stp.wp.v - st0.wp.v))
    return worst


def check_lemma1(rng, n, params):
    worst = 0.0
    for w0 in _sample_hyperbolic_states(rng, n, params):
        curve = hugoniot_from_state(w0, params)
        try:
            slow, fast = c_crossings(curve)
        except Exception:
            continue
        if not slow.t * fast.t < 0:
            return math.inf
        gap = shock_speed(fast.z, fast.t, params) - shock_speed(slow.z, slow.t, params)
        for base, other in ((slow, fast), (fast, slow)):
            ident = params.c * (base.z**2 + 1.0) * abs(base.t)
            worst = max(worst, abs(gap - ident))
    return worst


def check_speed_is_eigenvalue_on_c(rng, n, params):
    worst = 0.0
    for _ in range(n):
        z = rng.uniform(-5, 5)
        t = rng.uniform(-4, 4)
        if abs(t) < 1e-3:
            continue
        st = manifold_to_states(MPoint(z, t, 0.0), params)
        e = eigen(st.w, params)
        if not e.is_real:
            continue
        lam = e.lambda_s if t < 0 else e.lambda_f
        worst = max(worst, abs(shock_speed(z, t, params) - lam))
    return worst


def _son_prime_samples(rng, n, params, z_lo=0.08, z_hi=3.0):
    pts = []
    while len(pts) < n:
        z = rng.uniform(z_lo, z_hi) * (1 if rng.uniform() < 0.5 else -1)
        Y = rng.uniform(-4.0, 4.0)
        t = sonic_prime_t(z, Y, params)
        q = MPoint(z, t, Y)
        st = manifold_to_states(q, params)
        if discriminant(st.w, params) > 1e-6 and discriminant(st.wp, params) > 1e-6:
            pts.append(q)
    return pts


def check_sonic_prime_speed_identity(rng, n, params):
    worst = 0.0
    for q in _son_prime_samples(rng, n, params):
        zc, tc = project_to_characteristic(q.z, q.Y, params)
        worst = max(
            worst, abs(shock_speed(zc, tc, params) - shock_speed(q.z, q.t, params))
        )
    return worst


def _l2_bruteforce(q, params) -> bool:
    curve = hugoniot_prime_through_point(q, params)
    slow, fast = c_crossings(curve)
    s = shock_speed(q.z, q.t, params)
    return shock_speed(slow.z, slow.t, params) <= s <= shock_speed(fast.z, fast.t, params)


def check_l2_closed_form(rng, n, params):
    disagreements = 0
    zc = params.z_crit
    for q in _son_prime_samples(rng, n, params):
        if abs(abs(q.z) - zc) < 1e-3:
            continue
        closed = q.z * q.z < 1.0 / (params.b1 + 1.0)
        try:
            brute = _l2_bruteforce(q, params)
        except Exception:
            continue
        if closed != brute:
            disagreements += 1
    return float(disagreements)


def check_sonic_critical(rng, n, params):
    worst = 0.0
    h = 1e-6
    for w0 in _sample_hyperbolic_states(rng, n, params):
        curve = hugoniot_from_state(w0, params)
        zs = np.linspace(-6.0, 6.0, 1201)
        vals = sonic_value(zs, curve.t(zs), curve.Y(zs), params)
        sign = np.sign(vals)
        flips = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
        fn = lambda z: sonic_value(z, curve.t(z), curve.Y(z), params)
        for i in flips[:2]:
            lo, hi = zs[i], zs[i + 1]
            flo = fn(lo)
            for _ in range(60):
                mid = 0.5 * (lo + hi)
                if fn(mid) * flo <= 0:
                    hi = mid
                else:
                    lo, flo = mid, fn(mid)
            zc = 0.5 * (lo + hi)
            worst = max(worst, abs((curve.s(zc + h) - curve.s(zc - h)) / (2 * h)))
    return worst


def check_double_sonic_lines(rng, n, params):
    worst = 0.0
    (z1, t1), (z2, t2) = double_sonic(params)
    for _ in range(n):
        Y = rng.uniform(-8, 8)
        for zz, tt in ((z1, t1), (z2, t2)):
            worst = max(
                worst,
                abs(sonic_value(zz, tt, Y, params)),
                abs(sonic_prime_value(zz, tt, Y, params)),
            )
    return worst


def check_inflection_on_surfaces(rng, n, params):
    worst = 0.0
    for _ in range(n):
        z = rng.uniform(0.05, 4.0) * (1 if rng.uniform() < 0.5 else -1)
        t = inflection_t(z, params)
        worst = max(
            worst,
            abs(sonic_value(z, t, 0.0, params)) / (1 + abs(z)) ** 5,
            abs(sonic_prime_value(z, t, 0.0, params)) / (1 + abs(z)) ** 5,
            abs(rarefaction_ds_dz(z, t, params)),
        )
    return worst


def check_region_stability(rng, n, params):
    bad = 0
    for _ in range(n):
        z, t, Y = rng.uniform(-3, 3, 3)
        try:
            r0 = region_of(MPoint(z, t, Y), params)
        except AmbiguousOnSurface:
            continue
        stable = True
        for _ in range(4):
            dz, dt, dY = rng.uniform(-1e-6, 1e-6, 3)
            try:
                if region_of(MPoint(z + dz, t + dt, Y + dY), params) is not r0:
                    stable = False
            except AmbiguousOnSurface:
                stable = False
        if not stable:
            bad += 1
    return float(bad)


def check_scc(rng, n, params):
    worst = 0.0
    c = params.c
    for _ in range(n):
        z = rng.uniform(-4, 4)
        t = rng.uniform(-4, 4)
        val = scc_value(z, t, 0.0, params)
        ref = 4.0 * c * c * t * t * (z * z + 1.0) ** 2
        worst = max(worst, abs(val - ref) / max(ref, 1e-30))
        zh = rng.uniform(-3, 3)
        q = hysteresis_point(zh, params)
        worst = max(
            worst,
            abs(sonic_prime_value(q.z, q.t, q.Y, params)),
            abs(scc_value(q.z, q.t, q.Y, params)),
        )
    return worst


def check_rarefaction_eigen(rng, n, params):
    worst_angle = 0.0
    worst_speed = 0.0
    starts = [(-5.0, -0.065), (-1.0, -4.0), (1.0, -2.0)]
    for z0, t0 in starts[: max(1, n)]:
        arc = integrate_rarefaction(z0, t0, "forward", params)
        idx = np.linspace(0, len(arc.z) - 1, min(40, len(arc.z))).astype(int)
        for i in idx:
            z, t = float(arc.z[i]), float(arc.t[i])
            st = manifold_to_states(MPoint(z, t, 0.0), params)
            e = eigen(st.w, params)
            if not e.is_real:
                continue
            lam = e.lambda_s if t < 0 else e.lambda_f
            worst_speed = max(worst_speed, abs(shock_speed(z, t, params) - lam))
            # eigenvector direction from the Jacobian; curve tangent is (z, 1)
            J = jacobian(st.w, params)
            r = (J[0][1], lam - J[0][0])
            if math.hypot(*r) < 1e-12:
                r = (lam - J[1][1], J[1][0])
            ang_r = math.atan2(r[1], r[0])
            ang_t = math.atan2(1.0, z)
            d = abs(ang_r - ang_t) % math.pi
            worst_angle = max(worst_angle, min(d, math.pi - d))
    return max(worst_angle, worst_speed)


CHECKS = [
    ("rh_residual", check_rh_residual, 1e-9, 1.0),
    ("blowup_relation", check_blowup_relation, 1e-12, 1.0),
    ("manifold_roundtrip", check_roundtrip, 1e-9, 0.2),
    ("jacobian_finite_difference", check_jacobian_fd, 1e-6, 0.1),
    ("eigen_characteristic_poly", check_eigen_charpoly, 1e-10, 0.1),
    ("classify_sign_agreement", check_classify_sign, 0.5, 1.0),
    ("hugoniot_oracle_equivalence", check_oracle_equivalence, 1e-10, 0.2),
    ("hugoniot_state_constancy", check_state_constancy, 1e-9, 0.05),
    ("lemma1_crossings", check_lemma1, 1e-9, 0.1),
    ("speed_equals_eigenvalue_on_c", check_speed_is_eigenvalue_on_c, 1e-9, 0.2),
    ("sonic_prime_speed_identity", check_sonic_prime_speed_identity, 1e-9, 0.05),
    ("l2_closed_form_agreement", check_l2_closed_form, 0.5, 0.02),
    ("sonic_critical_speed", check_sonic_critical, 1e-6, 0.01),
    ("double_sonic_on_both", check_double_sonic_lines, 1e-9, 0.2),
    ("inflection_on_surfaces", check_inflection_on_surfaces, 1e-10, 0.2),
    ("region_local_constancy", check_region_stability, 0.5, 0.05),
    ("scc_square_and_hysteresis", check_scc, 1e-9, 0.1),
    ("rarefaction_eigen_tangency", check_rarefaction_eigen, 1e-6, 0.003),
]


def run_suite(seed: int = 0, n: int = 200, params: ModelParams = DEFAULT_PARAMS) -> dict:
    """Run every invariant check; n scales the per-check sample counts."""
    results = []
    for name, fn, threshold, frac in CHECKS:
        rng = np.random.default_rng((seed, zlib.crc32(name.encode())))
        count = max(1, int(round(n * frac))) if n > 0 else 0
        if count == 0:
            results.append(
                {"name": name, "n": 0, "worst": 0.0, "threshold": threshold, "pass": True}
            )
            continue
        worst = fn(rng, count, params)
        results.append(
            {
                "name": name,
                "n": count,
                "worst": float(worst),
                "threshold": threshold,
                "pass": bool(worst <= threshold),
            }
        )
    report = {
        "seed": seed,
        "n": n,
        "params": {
            "a1": params.a1,
            "a2": params.a2,
            "a3": params.a3,
            "a4": params.a4,
            "b1": params.b1,
            "c": params.c,
        },
        "checks": results,
        "all_pass": all(r["pass"] for r in results),
    }
    return report


def _round12(obj):
    if isinstance(obj, float):
        return float(exportio.fmt(obj))
    if isinstance(obj, dict):
        return {k: _round12(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round12(v) for v in obj]
    return obj


def report_bytes(report: dict) -> bytes:
    text = json.dumps(_round12(report), indent=1, sort_keys=True)
    return (text + "\n").encode()
