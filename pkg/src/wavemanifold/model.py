"""Quadratic flux model, its Jacobian spectrum and state-space classification.

The system is u_t + F(u, v)_x = 0 with

    f(u, v) = v^2/2 + (b1 + 1) u^2/2 + a1 u + a2 v
    g(u, v) = u v + a3 u + a4 v

for b1 > 1 and c = a3 - a2 > 0.  The boundary between real and complex
eigenvalues of DF is an ellipse; its interior is the elliptic region.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple


class ModelError(Exception):
    """Base class for domain errors raised by this package."""


class InvalidParams(ModelError):
    pass


class DegenerateDirection(ModelError):
    """State pair with v = v' has no finite-z manifold representative."""


class PoleAtZero(ModelError):
    pass


class AmbiguousOnSurface(ModelError):
    """Point lies on a dividing surface within tolerance."""


class NoIntersection(ModelError):
    pass


class Tangency(ModelError):
    """Double root: the curve is tangent to the surface it was intersected with."""


class NotOnSurface(ModelError):
    pass


class EllipticState(ModelError):
    pass


class TangentState(ModelError):
    """State on the coincidence ellipse: the lift degenerates to a double root."""


class IncompatibleSequence(ModelError):
    pass


class StartOffLocus(ModelError):
    pass


# |alpha2_normalized| below this is reported as Boundary; solver paths use strict signs
BOUNDARY_TOL = 1e-12


class State(NamedTuple):
    """A point (u, v) in state space."""

    u: float
    v: float


@dataclass(frozen=True)
class ModelParams:
    """Flux coefficients.  c is derived: c = a3 - a2 and must be positive."""

    a1: float = 0.0
    a2: float = 0.0
    a3: float = 1.0
    a4: float = 0.0
    b1: float = 8.0

    def __post_init__(self):
        if not self.b1 > 1.0:
            raise InvalidParams(f"b1 must exceed 1, got {self.b1}")
        if not self.c > 0.0:
            raise InvalidParams(f"a3 - a2 must be positive, got {self.c}")

    @property
    def c(self) -> float:
        return self.a3 - self.a2

    @property
    def z_crit(self) -> float:
        """Half-width of the middle z-band: 1/sqrt(b1+1)."""
        return 1.0 / math.sqrt(self.b1 + 1.0)

    def key(self):
        return (self.a1, self.a2, self.a3, self.a4, self.b1)


DEFAULT_PARAMS = ModelParams()


def load_params(path: str) -> ModelParams:
    """Read ModelParams from a JSON object or key=value lines.

    A stored "c" that disagrees with a3 - a2 is a load error.
    """
    with open(path) as fh:
        text = fh.read()
    try:
        raw = json.loads(text)
        if not isinstance(raw, dict):
            raise InvalidParams(f"{path}: top-level JSON must be an object")
    except json.JSONDecodeError:
        raw = {}
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise InvalidParams(f"{path}: expected key=value, got {line!r}")
            key, val = line.split("=", 1)
            raw[key.strip()] = float(val)
    return params_from_dict(raw, source=path)


def params_from_dict(raw: dict, source: str = "<dict>") -> ModelParams:
    known = {"a1", "a2", "a3", "a4", "b1"}
    kwargs = {k: float(v) for k, v in raw.items() if k in known}
    extra = set(raw) - known - {"c"}
    if extra:
        raise InvalidParams(f"{source}: unknown parameter keys {sorted(extra)}")
    params = ModelParams(**{**{f: getattr(DEFAULT_PARAMS, f) for f in known}, **kwargs})
    if "c" in raw and abs(float(raw["c"]) - params.c) > 1e-12:
        raise InvalidParams(
            f"{source}: stored c={raw['c']} disagrees with a3-a2={params.c}"
        )
    return params


def flux(w, params: ModelParams = DEFAULT_PARAMS):
    """Evaluate (f, g) at a state (u, v)."""
    u, v = w
    p = params
    f = v * v / 2.0 + (p.b1 + 1.0) * u * u / 2.0 + p.a1 * u + p.a2 * v
    g = u * v + p.a3 * u + p.a4 * v
    return (f, g)


def jacobian(w, params: ModelParams = DEFAULT_PARAMS):
    """DF at a state, as a 2x2 nested tuple [[f_u, f_v], [g_u, g_v]]."""
    u, v = w
    p = params
    return ((((p.b1 + 1.0) * u + p.a1), v + p.a2), (v + p.a3, u + p.a4))


def discriminant(w, params: ModelParams = DEFAULT_PARAMS) -> float:
    """alpha2 = (2v+a2+a3)^2 + (b1 u + a1 - a4)^2 - c^2.

    Equals the ellipse form (b1 u + a1 - a4)^2 + 4 (v+a3)(v+a2) identically;
    positive on the hyperbolic region, negative inside the ellipse.
    """
    u, v = w
    p = params
    return (2.0 * v + p.a2 + p.a3) ** 2 + (p.b1 * u + p.a1 - p.a4) ** 2 - p.c**2


def discriminant_normalized(w, params: ModelParams = DEFAULT_PARAMS) -> float:
    """The ellipse form scaled to the unit circle: discriminant / c^2."""
    return discriminant(w, params) / params.c**2


class EigenData(NamedTuple):
    alpha1: float
    alpha2: float
    lambda_s: float  # nan when alpha2 < 0
    lambda_f: float  # nan when alpha2 < 0

    @property
    def is_real(self) -> bool:
        return self.alpha2 >= 0.0


def eigen(w, params: ModelParams = DEFAULT_PARAMS) -> EigenData:
    """Eigenvalues of DF: (alpha1 -/+ sqrt(alpha2)) / 2 when alpha2 >= 0."""
    u, _ = w
    p = params
    alpha1 = u * (p.b1 + 2.0) + p.a1 + p.a4
    alpha2 = discriminant(w, params)
    if alpha2 >= 0.0:
        root = math.sqrt(alpha2)
        return EigenData(alpha1, alpha2, (alpha1 - root) / 2.0, (alpha1 + root) / 2.0)
    return EigenData(alpha1, alpha2, math.nan, math.nan)


class RegionClass(Enum):
    HYPERBOLIC = "hyperbolic"
    ELLIPTIC = "elliptic"
    BOUNDARY = "boundary"


def classify_state(w, params: ModelParams = DEFAULT_PARAMS) -> RegionClass:
    a2n = discriminant_normalized(w, params)
    if abs(a2n) <= BOUNDARY_TOL:
        return RegionClass.BOUNDARY
    return RegionClass.HYPERBOLIC if a2n > 0.0 else RegionClass.ELLIPTIC


def rh_residual(w, wp, s: float, params: ModelParams = DEFAULT_PARAMS):
    """F(W) - F(W') - s (W - W'): the universal shock-correctness oracle."""
    f, g = flux(w, params)
    fp, gp = flux(wp, params)
    return (f - fp - s * (w[0] - wp[0]), g - gp - s * (w[1] - wp[1]))


def ellipse_center(params: ModelParams = DEFAULT_PARAMS) -> State:
    p = params
    return State(-(p.a1 - p.a4) / p.b1, -(p.a2 + p.a3) / 2.0)


def ellipse_semiaxes(params: ModelParams = DEFAULT_PARAMS):
    """(semi-axis in u, semi-axis in v) = (c/b1, c/2)."""
    return (params.c / params.b1, params.c / 2.0)


def coincidence_ellipse(params: ModelParams = DEFAULT_PARAMS, n: int = 256):
    """n states on the coincidence ellipse, parametrized by angle."""
    if n < 3:
        raise InvalidParams("need at least 3 points to trace the ellipse")
    cu, cv = ellipse_center(params)
    ru, rv = ellipse_semiaxes(params)
    pts = []
    for k in range(n):
        ang = 2.0 * math.pi * k / n
        pts.append(State(cu + ru * math.cos(ang), cv + rv * math.sin(ang)))
    return pts
