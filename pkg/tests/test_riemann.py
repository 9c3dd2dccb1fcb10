import math

import numpy as np
import pytest

from wavemanifold.model import (
    EllipticState,
    TangentState,
    eigen,
    rh_residual,
)
from wavemanifold.riemann import continuity_probe, lift_state, solve

EX1 = ((-0.2430769231, -0.6365384615), (0.85, 3.2))
EX3 = ((-0.125, 3.5), (9.048076925, 14.03846154))
EX4 = ((0.125, -2.5), (3.0, 4.0))


def test_lift_example3():
    lift = lift_state((-0.125, 3.5))
    assert lift.us.z == pytest.approx(-1.0, abs=1e-12)
    assert lift.us.t == pytest.approx(-4.0, abs=1e-9)
    assert lift.uf.z == pytest.approx(7.0 / 9.0, abs=1e-12)
    assert lift.uf.t > 0


def test_lift_example1_right():
    lift = lift_state((0.85, 3.2))
    assert lift.uf.z == pytest.approx(2.0, abs=1e-12)
    assert lift.uf.t == pytest.approx(2.0, abs=1e-9)


def test_lift_example4_right():
    lift = lift_state((3.0, 4.0))
    assert lift.uf.z == pytest.approx(4.961249694973139, abs=1e-9)


def test_lift_rejects_elliptic_and_tangent():
    with pytest.raises(EllipticState):
        lift_state((0.0, -0.5))
    with pytest.raises(TangentState):
        lift_state((0.0, 0.0))


def test_lift_roundtrips_through_states():
    from wavemanifold.manifold import manifold_to_states

    rng = np.random.default_rng(24)
    done = 0
    while done < 200:
        w = tuple(rng.uniform(-3, 3, 2))
        from wavemanifold.model import discriminant

        if discriminant(w) <= 1e-4:
            continue
        done += 1
        lift = lift_state(w)
        for q in (lift.us, lift.uf):
            st = manifold_to_states(q)
            assert st.w.u == pytest.approx(w[0], abs=1e-8)
            assert st.w.v == pytest.approx(w[1], abs=1e-8)
            assert st.wp == st.w


def _check_solution(sol):
    prev = -math.inf
    for w in sol.waves:
        if w.speed is not None:
            r = rh_residual(w.from_state, w.to_state, w.speed)
            assert max(abs(r[0]), abs(r[1])) < 1e-8
            assert w.speed >= prev - 1e-7
            prev = w.speed
        else:
            lo, hi = w.speed_range
            assert lo >= prev - 1e-7
            assert hi >= lo - 1e-7
            prev = hi


def test_solve_example1():
    sol = solve(*EX1)
    assert sol.wave_kinds == ["S1", "C2-shock", "R2"]
    assert sol.compatible
    _check_solution(sol)
    # the characteristic 2-shock travels at the fast eigenvalue of its right state
    c2 = sol.waves[1]
    assert c2.speed == pytest.approx(eigen(c2.to_state).lambda_f, abs=1e-7)
    assert len(sol.middle_states) == 1


def test_solve_example3():
    sol = solve(*EX3)
    assert sol.wave_kinds == ["S1", "R2"]
    assert sol.compatible
    _check_solution(sol)
    # rarefaction from the middle state starts at its fast eigenvalue
    r2 = sol.waves[1]
    assert r2.speed_range[0] == pytest.approx(
        eigen(r2.from_state).lambda_f, abs=1e-7
    )


def test_solve_example4():
    sol = solve(*EX4)
    assert sol.wave_kinds == ["R1", "C1-shock", "R2"]
    assert sol.compatible
    _check_solution(sol)
    # left-characteristic attachment: shock speed equals the slow eigenvalue
    c1 = sol.waves[1]
    assert c1.speed == pytest.approx(eigen(c1.from_state).lambda_s, abs=1e-7)
    # the rarefaction fan reaches exactly the attachment point
    r1 = sol.waves[0]
    assert r1.to_state == c1.from_state
    assert r1.speed_range[1] == pytest.approx(c1.speed, abs=1e-9)


def test_solve_example1_second_right_state():
    # (-0.6, -1.1) is hyperbolic; its documented solution shape is [S1, R2]
    sol = solve((-0.2430769231, -0.6365384615), (-0.6, -1.1))
    assert sol.wave_kinds == ["S1", "R2"]
    assert sol.compatible
    _check_solution(sol)


def test_solve_equal_data_is_constant():
    sol = solve((0.5, 1.0), (0.5, 1.0))
    assert sol.waves == []
    assert sol.middle_states == []
    assert sol.compatible


def test_solve_rejects_elliptic_data():
    with pytest.raises(EllipticState):
        solve((0.0, -0.5), (1.0, 1.0))


def test_solution_serialization():
    sol = solve(*EX4)
    d = sol.as_dict()
    assert d["left"] == [0.125, -2.5]
    assert [w["type"] for w in d["waves"]] == ["R1", "C1-shock", "R2"]
    assert d["compatible"] is True
    assert isinstance(d["alternates_count"], int)
    assert d["params"]["b1"] == 8.0


def test_continuity_probe_example1():
    report = continuity_probe(*EX1, delta=1e-4, n=6, seed=1)
    assert report["sequence_changes"] == 0
    assert report["solve_failures"] == 0
    assert report["max_middle_displacement"] / report["delta"] < 100.0
    assert report["base_sequence"] == ["S1", "C2-shock", "R2"]


def test_continuity_probe_zero_delta():
    report = continuity_probe(*EX4, delta=0.0, n=2, seed=0)
    assert report["max_middle_displacement"] == 0.0
    assert report["sequence_changes"] == 0


def test_synthetic_rarefaction_shock_closure_nondefault_params():
    # construct a solution by hand on a non-default parameter set and check
    # the solver recovers it through the backward-shock crossing path:
    # a 2-shock into WR fixes M; WL sits upstream on the rarefaction
    # through M's slow lift, so the solution is [R1, S2]
    from wavemanifold.model import ModelParams
    from wavemanifold.manifold import MPoint, manifold_to_states
    from wavemanifold.hugoniot import backward_shock_arc
    from wavemanifold.curves import integrate_rarefaction, rarefaction_ds_numerator

    p = ModelParams(a1=0.2, a2=-0.4, a3=1.6, a4=-0.1, b1=5.0)
    wr = (1.2, 2.0)
    h2 = backward_shock_arc(lift_state(wr, p).uf, p)
    j = len(h2) // 20
    m_target = manifold_to_states(
        MPoint(float(h2.z[j]), float(h2.t[j]), float(h2.Y[j])), p
    ).wp
    s2 = float(h2.s[j])
    us_m = lift_state(m_target, p).us
    n0 = rarefaction_ds_numerator(us_m.z, us_m.t, p)
    upstream = integrate_rarefaction(
        us_m.z, us_m.t, params=p, direction=-math.copysign(1.0, n0),
        stop_at_inflection=False, z_bound=abs(us_m.z) + 0.6,
    )
    wl = manifold_to_states(
        MPoint(float(upstream.z[-1]), float(upstream.t[-1]), 0.0), p
    ).w

    sol = solve(tuple(wl), wr, p)
    assert sol.wave_kinds == ["R1", "S2"]
    assert sol.compatible
    m = sol.middle_states[0]
    assert math.hypot(m.u - m_target.u, m.v - m_target.v) < 1e-9
    assert sol.waves[1].speed == pytest.approx(s2, abs=1e-9)
    r = rh_residual(sol.waves[1].from_state, sol.waves[1].to_state, sol.waves[1].speed, p)
    assert max(abs(r[0]), abs(r[1])) < 1e-9
