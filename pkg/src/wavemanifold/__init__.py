"""Wave-manifold geometry and Riemann solver for the symmetric quadratic-flux
system of two conservation laws with an elliptic region."""

from .model import (
    ModelParams,
    DEFAULT_PARAMS,
    State,
    RegionClass,
    EigenData,
    classify_state,
    coincidence_ellipse,
    eigen,
    flux,
    jacobian,
    load_params,
    rh_residual,
)
from .manifold import (
    MPoint,
    StateTriple,
    RegionId,
    Z_MAX,
    double_sonic,
    hysteresis_point,
    inflection_t,
    l2_holds,
    manifold_to_states,
    region_of,
    scc_value,
    shock_speed,
    sonic_prime_value,
    sonic_value,
    states_to_manifold,
)
from .hugoniot import (
    CProjections,
    HugoniotCurve,
    LaxVerdict,
    WaveArc,
    backward_shock_arc,
    c_crossings,
    forward_shock_arc,
    hugoniot_from_state,
    hugoniot_oracle,
    hugoniot_prime_through_point,
    hugoniot_through_point,
    lax_classify,
    projections,
    sonic_prime_crossings,
    sonic_prime_side,
)
from .curves import (
    CompositeArc,
    composite_field,
    integrate_composite,
    integrate_rarefaction,
    project_to_characteristic,
    rarefaction_ds_dz,
    rarefaction_field,
)
from .waves import (
    CsRegion,
    SaturatedSurface,
    WaveCurve,
    backward_wave_sequence,
    classify_cs_region,
    forward_wave_curve,
    saturate,
    saturate_wave_curve,
)
from .riemann import (
    LiftResult,
    RiemannSolution,
    Wave,
    continuity_probe,
    lift_state,
    solve,
)

__version__ = "0.1.0"
