import numpy as np
import pytest

from wavemanifold.model import (
    AmbiguousOnSurface,
    DegenerateDirection,
    ModelParams,
    PoleAtZero,
    discriminant,
    eigen,
    rh_residual,
)
from wavemanifold.manifold import (
    MPoint,
    RegionId,
    coincidence_prime_value,
    coincidence_value,
    double_sonic,
    hysteresis_point,
    inflection_t,
    l2_holds,
    manifold_to_states,
    region_of,
    scc_value,
    shock_speed,
    sonic_prime_t,
    sonic_prime_value,
    sonic_value,
    states_to_manifold,
)

# coordinate anchors of the worked example data sets
REFERENCE_ANCHORS = [
    ((-5.0, -0.065, 0.0), (-0.2430769231, -0.6365384615)),
    ((-1.0, -4.0, 0.0), (-0.125, 3.5)),
    ((1.0, -2.0, 0.0), (0.125, -2.5)),
    ((2.0, 2.0, 0.0), (0.85, 3.2)),
]


@pytest.mark.parametrize("q,expected", REFERENCE_ANCHORS)
def test_state_reconstruction_anchors(q, expected):
    st = manifold_to_states(MPoint(*q))
    assert st.w.u == pytest.approx(expected[0], abs=1e-9)
    assert st.w.v == pytest.approx(expected[1], abs=1e-9)
    # Y = 0: primed state coincides
    assert st.wp == st.w


def test_origin_maps_to_umbilic():
    st = manifold_to_states(MPoint(0.0, 0.0, 0.0))
    assert st.w == (0.0, 0.0)
    assert st.s == 0.0


def test_speed_values():
    assert shock_speed(0.0, 0.0) == 0.0
    assert shock_speed(1.0, 0.0) == pytest.approx(0.625)
    assert shock_speed(-5.0, -0.065) == pytest.approx(-428.56 / 208, abs=1e-12)


def test_speed_independent_of_Y_and_rh_consistent():
    rng = np.random.default_rng(3)
    for _ in range(200):
        z, t, Y = rng.uniform(-5, 5, 3)
        st = manifold_to_states(MPoint(z, t, Y))
        r = rh_residual(st.w, st.wp, shock_speed(z, t))
        assert max(abs(r[0]), abs(r[1])) < 1e-10


def test_blowup_relation_exact():
    rng = np.random.default_rng(4)
    for _ in range(500):
        z, t, Y = rng.uniform(-10, 10, 3)
        st = manifold_to_states(MPoint(z, t, Y))
        assert abs((st.w.u - st.wp.u) - z * (st.w.v - st.wp.v)) < 1e-12


def test_roundtrip_through_states():
    for q in [(1.0, -2.0, 0.5), (-5.0, -0.065, 0.3), (0.3, 2.0, -1.7)]:
        st = manifold_to_states(MPoint(*q))
        back = states_to_manifold(st.w, st.wp)
        assert back.z == pytest.approx(q[0], abs=1e-9)
        assert back.t == pytest.approx(q[1], abs=1e-9)
        assert back.Y == pytest.approx(q[2], abs=1e-12)


def test_degenerate_direction():
    with pytest.raises(DegenerateDirection):
        states_to_manifold((1.0, 2.0), (0.5, 2.0))


def test_sonic_values_at_z0():
    # rule lines become horizontal: Y = +/- 2c
    for Y in (-3.0, 0.0, 1.5):
        assert sonic_value(0.0, 7.0, Y) == pytest.approx(Y - 2.0)
        assert sonic_prime_value(0.0, 7.0, Y) == pytest.approx(-Y - 2.0)


def test_sonic_reflection_symmetry():
    rng = np.random.default_rng(5)
    for _ in range(300):
        z, t, Y = rng.uniform(-6, 6, 3)
        assert sonic_value(z, t, Y) == pytest.approx(
            sonic_prime_value(z, t, -Y), abs=1e-12
        )


def test_inflection_values():
    assert inflection_t(1.0) == pytest.approx(-1.0 / 3.0)
    assert inflection_t(1.0 / 3.0) == pytest.approx(-1.2, abs=1e-12)
    assert inflection_t(-1.0) == pytest.approx(1.0 / 3.0)
    with pytest.raises(PoleAtZero):
        inflection_t(0.0)


def test_inflection_lies_on_all_three_surfaces():
    for z in (-2.0, -0.7, 0.4, 1.0, 3.0):
        t = inflection_t(z)
        assert abs(sonic_value(z, t, 0.0)) < 1e-10 * (1 + abs(z)) ** 5
        assert abs(sonic_prime_value(z, t, 0.0)) < 1e-10 * (1 + abs(z)) ** 5


def test_double_sonic_locus():
    (z1, t1), (z2, t2) = double_sonic()
    assert z1 == pytest.approx(1.0 / 3.0, abs=1e-15)
    assert t1 == pytest.approx(-1.2, abs=1e-12)
    assert z2 == -z1 and t2 == -t1
    # consistency with the inflection locus
    assert inflection_t(z1) == pytest.approx(t1, abs=1e-12)
    # the lines lie on both sonic surfaces for every Y
    for Y in np.linspace(-8, 8, 11):
        for zz, tt in ((z1, t1), (z2, t2)):
            assert abs(sonic_value(zz, tt, Y)) < 1e-9
            assert abs(sonic_prime_value(zz, tt, Y)) < 1e-9


def test_hysteresis_points():
    q0 = hysteresis_point(0.0)
    assert (q0.t, q0.Y) == (0.0, -2.0)
    q1 = hysteresis_point(1.0)
    assert q1.t == pytest.approx(-5.0 / 13.0)
    assert q1.Y == pytest.approx(-2.0 / 13.0)
    for z in np.linspace(-3, 3, 21):
        q = hysteresis_point(float(z))
        assert abs(sonic_prime_value(q.z, q.t, q.Y)) < 1e-10 * (1 + abs(z)) ** 5


def test_scc_reduces_to_perfect_square_on_characteristic():
    rng = np.random.default_rng(6)
    c = 1.0
    for _ in range(400):
        z, t = rng.uniform(-4, 4, 2)
        val = scc_value(z, t, 0.0)
        ref = 4.0 * c * c * t * t * (z * z + 1.0) ** 2
        assert val == pytest.approx(ref, rel=1e-10, abs=1e-12)
    assert scc_value(2.0, 0.0, 0.0) == pytest.approx(0.0, abs=1e-12)
    assert scc_value(2.0, 0.7, 0.0) > 0.0


def test_scc_vanishes_on_hysteresis_with_parallel_gradients():
    # tangency of the coincidence saturation with sonic'
    for z in (-1.5, -0.6, 0.5, 1.0, 2.0):
        q = hysteresis_point(z)
        assert abs(scc_value(q.z, q.t, q.Y)) < 1e-9
        h = 1e-6
        g_scc = np.array(
            [
                (scc_value(q.z, q.t + h, q.Y) - scc_value(q.z, q.t - h, q.Y)) / (2 * h),
                (scc_value(q.z, q.t, q.Y + h) - scc_value(q.z, q.t, q.Y - h)) / (2 * h),
            ]
        )
        g_son = np.array(
            [
                (sonic_prime_value(q.z, q.t + h, q.Y) - sonic_prime_value(q.z, q.t - h, q.Y))
                / (2 * h),
                (sonic_prime_value(q.z, q.t, q.Y + h) - sonic_prime_value(q.z, q.t, q.Y - h))
                / (2 * h),
            ]
        )
        cross = g_scc[0] * g_son[1] - g_scc[1] * g_son[0]
        assert abs(cross) < 1e-5 * np.linalg.norm(g_scc) * np.linalg.norm(g_son)


def test_coincidence_surface_values():
    # on the coincidence curve the states sit on the ellipse
    for z in (-2.0, 0.0, 1.5):
        assert abs(coincidence_value(z, 0.0, 0.0)) < 1e-12
    # reflection identity and agreement with the state discriminant
    rng = np.random.default_rng(8)
    for _ in range(300):
        z, t, Y = rng.uniform(-4, 4, 3)
        assert coincidence_value(z, t, Y) == pytest.approx(
            coincidence_prime_value(z, t, -Y), abs=1e-12
        )
        w = manifold_to_states(MPoint(z, t, Y)).w
        assert coincidence_value(z, t, Y) == pytest.approx(
            discriminant(w), abs=1e-12
        )


def test_l2_condition():
    assert l2_holds((0.2, 0.0, 0.0))
    assert not l2_holds((1.0, 0.0, 0.0))
    # strict at the double-sonic boundary
    assert not l2_holds((1.0 / 3.0, 0.0, 0.0))
    assert not l2_holds((-1.0 / 3.0, 0.0, 0.0))


def test_region_examples():
    assert region_of(MPoint(0.0, 0.0, 3.0)) is RegionId.OVER_BRIDGE
    assert region_of(MPoint(0.0, 0.0, 1.0)) is RegionId.UNDER_BRIDGE
    assert region_of(MPoint(0.0, 0.0, -1.0)) is RegionId.OVER_TUNNEL
    assert region_of(MPoint(0.0, 0.0, -3.0)) is RegionId.UNDER_TUNNEL


def test_region_rejects_surface_points():
    with pytest.raises(AmbiguousOnSurface):
        region_of(MPoint(1.0, -2.0, 0.0))  # on the characteristic plane
    with pytest.raises(AmbiguousOnSurface):
        region_of(MPoint(0.0, 5.0, 2.0))  # on the sonic sheet Y = 2c


def test_region_covers_all_twelve():
    rng = np.random.default_rng(9)
    seen = set()
    for _ in range(20_000):
        q = MPoint(*rng.uniform(-3, 3, 3))
        try:
            seen.add(region_of(q))
        except AmbiguousOnSurface:
            pass
    assert seen == set(RegionId)


def test_region_locally_constant():
    rng = np.random.default_rng(10)
    for _ in range(300):
        q = MPoint(*rng.uniform(-3, 3, 3))
        try:
            r0 = region_of(q)
        except AmbiguousOnSurface:
            continue
        for _ in range(4):
            dq = rng.uniform(-1e-6, 1e-6, 3)
            try:
                assert region_of(MPoint(q.z + dq[0], q.t + dq[1], q.Y + dq[2])) is r0
            except AmbiguousOnSurface:
                pass


def test_speed_is_eigenvalue_on_characteristic():
    # slow eigenvalue for t < 0, fast for t > 0
    rng = np.random.default_rng(11)
    for _ in range(400):
        z = rng.uniform(-5, 5)
        t = rng.uniform(-4, 4)
        if abs(t) < 1e-3:
            continue
        st = manifold_to_states(MPoint(z, t, 0.0))
        e = eigen(st.w)
        if not e.is_real:
            continue
        lam = e.lambda_s if t < 0 else e.lambda_f
        assert shock_speed(z, t) == pytest.approx(lam, abs=1e-9)


def test_sonic_prime_t_consistency():
    rng = np.random.default_rng(12)
    for _ in range(200):
        z = rng.uniform(0.1, 4.0) * (1 if rng.uniform() < 0.5 else -1)
        Y = rng.uniform(-4, 4)
        t = sonic_prime_t(z, Y)
        assert abs(sonic_prime_value(z, t, Y)) < 1e-9 * (1 + abs(z)) ** 5
    with pytest.raises(PoleAtZero):
        sonic_prime_t(0.0, 1.0)


def test_generalized_parameters_keep_identities():
    # a parameter set away from the defaults: the construction is exact there too
    p = ModelParams(a1=0.3, a2=-0.2, a3=0.9, a4=-0.1, b1=4.0)
    rng = np.random.default_rng(13)
    for _ in range(300):
        z, t, Y = rng.uniform(-5, 5, 3)
        st = manifold_to_states(MPoint(z, t, Y), p)
        r = rh_residual(st.w, st.wp, st.s, p)
        assert max(abs(r[0]), abs(r[1])) < 1e-9
        assert sonic_value(z, t, Y, p) == pytest.approx(
            sonic_prime_value(z, t, -Y, p), abs=1e-12
        )
    # speed still matches an eigenvalue on the characteristic surface
    for _ in range(100):
        z, t = rng.uniform(-3, 3, 2)
        if abs(t) < 1e-2:
            continue
        st = manifold_to_states(MPoint(z, t, 0.0), p)
        e = eigen(st.w, p)
        if e.is_real:
            lam = e.lambda_s if t < 0 else e.lambda_f
            assert shock_speed(z, t, p) == pytest.approx(lam, abs=1e-9)
