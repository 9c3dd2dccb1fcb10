"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -s` to see the per-criterion lines.
"""

import json
import math
import time

import numpy as np

import wavemanifold as wm
from wavemanifold.model import discriminant, eigen, jacobian, rh_residual
from wavemanifold.manifold import (
    MPoint,
    hysteresis_point,
    inflection_t,
    manifold_to_states,
    scc_value,
    shock_speed,
    sonic_prime_t,
    sonic_prime_value,
)
from wavemanifold.hugoniot import (
    c_crossings,
    hugoniot_from_state,
    hugoniot_oracle,
    hugoniot_prime_through_point,
)
from wavemanifold.curves import (
    integrate_rarefaction,
    project_to_characteristic,
    rarefaction_ds_dz,
    rarefaction_field,
)
from wavemanifold.riemann import continuity_probe, lift_state, solve

EX1_L = (-0.2430769231, -0.6365384615)
EX1_R = (0.85, 3.2)
EX2_L = (0.125, 0.5)
EX3_L = (-0.125, 3.5)
EX3_R = (9.048076925, 14.03846154)
EX4_L = (0.125, -2.5)
EX4_R = (3.0, 4.0)

# middle states pinned by the oracle-validated build (regression baseline)
BASELINE_MIDDLE = {
    "ex1": (-0.714919460038, -0.587998173737),
    "ex3": (-2.655009536237, 4.496137511455),
    "ex4": (-0.238930307931, 2.355263236621),
}


def _report(num, name, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {num:02d} {name}: {status}  {detail}")
    assert ok, f"criterion {num} ({name}) failed: {detail}"


def test_criterion_01_coordinate_fidelity():
    anchors = [
        ((-5.0, -0.065, 0.0), EX1_L),
        ((-1.0, -4.0, 0.0), EX3_L),
        ((1.0, -2.0, 0.0), EX4_L),
        ((2.0, 2.0, 0.0), EX1_R),
    ]
    worst = 0.0
    for q, w in anchors:
        st = manifold_to_states(MPoint(*q))
        worst = max(worst, abs(st.w.u - w[0]), abs(st.w.v - w[1]))
    _report(1, "coordinate-fidelity", worst < 1e-9, f"max deviation {worst:.3e}")


def test_criterion_02_erratum_corrected_hugoniot():
    curve = hugoniot_from_state(EX1_L)
    got = curve.t(-5.0)
    # the erroneous legacy numerator (sign errors on three terms) for record
    u0, v0 = EX1_L
    K = 8.0 * u0
    printed = ((v0 + 1.0) * 8.0 * (-5.0) ** 3 + K * 25.0 - (8.0 * v0 + 2.0) * (-5.0) + K) / (
        1.0 * 26.0 * (7.0 * 25.0 + 1.0)
    )
    ok = abs(got - (-0.065)) < 1e-9 and abs(printed - (-0.0939)) < 5e-4
    _report(
        2,
        "erratum-corrected-hugoniot",
        ok,
        f"corrected t(-5) = {got:.12f}; legacy form gives {printed:.6f}",
    )


def test_criterion_03_oracle_equivalence():
    rng = np.random.default_rng(100)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(1000):
        w0 = tuple(rng.uniform(-3, 3, 2))
        z = rng.uniform(-8, 8)
        curve = hugoniot_from_state(w0)
        t, Y = hugoniot_oracle(w0, z)
        worst = max(worst, abs(curve.t(z) - t), abs(curve.Y(z) - Y))
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-10 and elapsed < 2.0
    _report(3, "oracle-equivalence", ok, f"max dev {worst:.3e} in {elapsed:.2f}s")


def test_criterion_04_rankine_hugoniot_invariant():
    rng = np.random.default_rng(101)
    worst = 0.0
    for _ in range(10_000):
        z, t, Y = rng.uniform(-10, 10, 3)
        st = manifold_to_states(MPoint(z, t, Y))
        r = rh_residual(st.w, st.wp, st.s)
        worst = max(worst, abs(r[0]), abs(r[1]))
    _report(4, "rankine-hugoniot-invariant", worst < 1e-9, f"max |residual| {worst:.3e}")


def test_criterion_05_lemma1_suite():
    rng = np.random.default_rng(102)
    worst = 0.0
    signs_ok = True
    done = 0
    while done < 1000:
        w0 = tuple(rng.uniform(-4, 4, 2))
        if discriminant(w0) <= 1e-6:
            continue
        done += 1
        slow, fast = c_crossings(hugoniot_from_state(w0))
        signs_ok = signs_ok and (slow.t * fast.t < 0)
        gap = shock_speed(fast.z, fast.t) - shock_speed(slow.z, slow.t)
        for base in (slow, fast):
            worst = max(worst, abs(gap - (base.z**2 + 1.0) * abs(base.t)))
    ok = signs_ok and worst < 1e-9
    _report(5, "lemma1-suite", ok, f"max identity dev {worst:.3e}")


def test_criterion_06_double_sonic_locus():
    (z1, t1), (z2, t2) = wm.double_sonic()
    ok = (
        abs(z1 - 1.0 / 3.0) < 1e-15
        and abs(z2 + 1.0 / 3.0) < 1e-15
        and abs(t1 + 1.2) < 1e-12
        and abs(inflection_t(1.0 / 3.0) + 1.2) < 1e-12
    )
    _report(6, "double-sonic-locus", ok, f"z = +/-{z1:.12f}, t1 = {t1:.12f}")


def _son_prime_samples(rng, n):
    pts = []
    while len(pts) < n:
        z = rng.uniform(0.08, 3.0) * (1 if rng.uniform() < 0.5 else -1)
        Y = rng.uniform(-4.0, 4.0)
        t = sonic_prime_t(z, Y)
        st = manifold_to_states(MPoint(z, t, Y))
        if discriminant(st.w) > 1e-6 and discriminant(st.wp) > 1e-6:
            pts.append(MPoint(z, t, Y))
    return pts


def test_criterion_07_sonic_prime_identity_and_l2():
    rng = np.random.default_rng(103)
    samples = _son_prime_samples(rng, 1000)
    worst = 0.0
    disagreements = 0
    for q in samples:
        zc, tc = project_to_characteristic(q.z, q.Y)
        worst = max(worst, abs(shock_speed(zc, tc) - shock_speed(q.z, q.t)))
        if abs(abs(q.z) - 1.0 / 3.0) < 1e-3:
            continue
        closed = wm.l2_holds(q)
        slow, fast = c_crossings(hugoniot_prime_through_point(q))
        s = shock_speed(q.z, q.t)
        brute = shock_speed(slow.z, slow.t) <= s <= shock_speed(fast.z, fast.t)
        if closed != brute:
            disagreements += 1
    ok = worst < 1e-9 and disagreements == 0
    _report(
        7,
        "sonic-prime-identity-and-L2",
        ok,
        f"max speed dev {worst:.3e}, {disagreements} L2 disagreements",
    )


def test_criterion_08_scc_tangencies():
    rng = np.random.default_rng(104)
    worst_rel = 0.0
    for _ in range(500):
        z, t = rng.uniform(-4, 4, 2)
        ref = 4.0 * t * t * (z * z + 1.0) ** 2
        if ref < 1e-20:
            continue
        worst_rel = max(worst_rel, abs(scc_value(z, t, 0.0) - ref) / ref)
    worst_h = 0.0
    for z in np.linspace(-2.5, 2.5, 41):
        q = hysteresis_point(float(z))
        worst_h = max(
            worst_h,
            abs(sonic_prime_value(q.z, q.t, q.Y)),
            abs(scc_value(q.z, q.t, q.Y)),
        )
    ok = worst_rel < 1e-10 and worst_h < 1e-9
    _report(8, "scc-tangencies", ok, f"rel square dev {worst_rel:.3e}, hysteresis {worst_h:.3e}")


def test_criterion_09_rarefaction_correctness():
    worst_angle = 0.0
    worst_speed = 0.0
    for z0, t0 in [(-5.0, -0.065), (-1.0, -4.0), (1.0, -2.0)]:
        arc = integrate_rarefaction(z0, t0, "forward")
        n = len(arc.z)
        uv = np.empty((n, 2))
        for i in range(n):
            st = manifold_to_states(MPoint(float(arc.z[i]), float(arc.t[i]), 0.0))
            uv[i] = st.w
        h = float(arc.z[1] - arc.z[0])
        idx = np.linspace(4, n - 5, 100).astype(int)
        for i in idx:
            # fourth-order stencil tangent of the projected arc
            du = (-uv[i + 2, 0] + 8 * uv[i + 1, 0] - 8 * uv[i - 1, 0] + uv[i - 2, 0]) / (12 * h)
            dv = (-uv[i + 2, 1] + 8 * uv[i + 1, 1] - 8 * uv[i - 1, 1] + uv[i - 2, 1]) / (12 * h)
            w = tuple(uv[i])
            e = eigen(w)
            if e.alpha2 < 1e-10:
                continue
            lam = e.lambda_s
            J = jacobian(w)
            r = (J[0][1], lam - J[0][0])
            if math.hypot(*r) < 1e-10:
                r = (lam - J[1][1], J[1][0])
            ang = abs(math.atan2(dv, du) - math.atan2(r[1], r[0])) % math.pi
            worst_angle = max(worst_angle, min(ang, math.pi - ang))
            worst_speed = max(
                worst_speed, abs(shock_speed(float(arc.z[i]), float(arc.t[i])) - lam)
            )
    # ds/dz vanishes on the inflection locus
    worst_ds = max(
        abs(rarefaction_ds_dz(z, inflection_t(z))) for z in (-2.0, -0.9, 0.4, 1.1, 2.5)
    )
    # tangency of the rarefaction field with the inflection locus at +/- 1/3
    def gap(z):
        h = 1e-7
        slope = (inflection_t(z + h) - inflection_t(z - h)) / (2 * h)
        return rarefaction_field(z, inflection_t(z)) - slope

    locs = []
    for lo, hi in ((0.2, 0.45), (-0.45, -0.2)):
        glo = gap(lo)
        for _ in range(100):
            mid = 0.5 * (lo + hi)
            if gap(mid) * glo <= 0:
                hi = mid
            else:
                lo, glo = mid, gap(mid)
        locs.append(0.5 * (lo + hi))
    loc_err = max(abs(abs(z) - 1.0 / 3.0) for z in locs)
    ok = worst_angle < 1e-6 and worst_speed < 1e-8 and worst_ds < 1e-10 and loc_err < 1e-8
    _report(
        9,
        "rarefaction-correctness",
        ok,
        f"angle {worst_angle:.2e}, speed {worst_speed:.2e}, ds/dz {worst_ds:.2e}, tangency {loc_err:.2e}",
    )


def test_criterion_10_region_classification():
    got = []
    for w in (EX1_L, EX2_L, EX3_L, EX4_L):
        us = lift_state(w).us
        got.append(wm.classify_cs_region(us.z, us.t).roman)
    ok = got == ["I", "I", "II", "III"]
    _report(10, "region-classification", ok, f"got {got}")


def _solution_ok(sol, expected_kinds, baseline):
    if sol.wave_kinds != expected_kinds or not sol.compatible:
        return False, f"kinds {sol.wave_kinds}, compatible {sol.compatible}"
    prev = -math.inf
    for w in sol.waves:
        if w.speed is not None:
            r = rh_residual(w.from_state, w.to_state, w.speed)
            if max(abs(r[0]), abs(r[1])) >= 1e-8:
                return False, f"rh residual {max(abs(r[0]), abs(r[1])):.2e}"
            if w.speed < prev - 1e-7:
                return False, "speeds not monotone"
            prev = w.speed
        else:
            lo, hi = w.speed_range
            if lo < prev - 1e-7:
                return False, "speeds not monotone"
            prev = hi
    m = sol.middle_states[0]
    if math.hypot(m.u - baseline[0], m.v - baseline[1]) > 1e-6:
        return False, f"middle state {tuple(m)} deviates from baseline"
    return True, f"middle state ({m.u:.9f}, {m.v:.9f})"


def test_criterion_11_riemann_solutions():
    sol1 = solve(EX1_L, EX1_R)
    ok1, d1 = _solution_ok(sol1, ["S1", "C2-shock", "R2"], BASELINE_MIDDLE["ex1"])
    sol3 = solve(EX3_L, EX3_R)
    ok3, d3 = _solution_ok(sol3, ["S1", "R2"], BASELINE_MIDDLE["ex3"])
    sol4 = solve(EX4_L, EX4_R)
    ok4, d4 = _solution_ok(sol4, ["R1", "C1-shock", "R2"], BASELINE_MIDDLE["ex4"])
    _report(11, "riemann-solutions", ok1 and ok3 and ok4, f"ex1 {d1}; ex3 {d3}; ex4 {d4}")


def test_criterion_12_continuity_probe():
    rep1 = continuity_probe(EX1_L, EX1_R, delta=1e-4, n=6, seed=5)
    rep4 = continuity_probe(EX4_L, EX4_R, delta=1e-4, n=6, seed=6)
    ok = True
    details = []
    for name, rep in (("ex1", rep1), ("ex4", rep4)):
        ratio = rep["displacement_ratio"]
        ok = ok and rep["sequence_changes"] == 0 and rep["solve_failures"] == 0
        ok = ok and ratio < 100.0
        details.append(f"{name} ratio {ratio:.1f}")
    _report(12, "continuity-probe", ok, "; ".join(details))


def test_criterion_13_determinism(tmp_path):
    from wavemanifold.cli import main

    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert main(["--seed", "11", "--out", str(out1), "validate", "--n", "60"]) == 0
    assert main(["--seed", "11", "--out", str(out2), "validate", "--n", "60"]) == 0
    b1 = (out1 / "validate.json").read_bytes()
    b2 = (out2 / "validate.json").read_bytes()
    ok = b1 == b2 and json.loads(b1)["all_pass"]
    _report(13, "determinism", ok, f"{len(b1)} bytes, identical: {b1 == b2}")
