# State-space basics: the quadratic flux, its eigenvalues, and the elliptic
# region bounded by the coincidence ellipse.
#
# Run:  python3 demos/01_state_space.py            (prints a tour)
# Plots are written next to this script when matplotlib is available.

import numpy as np

from wavemanifold import (
    classify_state,
    coincidence_ellipse,
    eigen,
    flux,
    jacobian,
    lift_state,
    rh_residual,
)
from wavemanifold.model import ellipse_center, ellipse_semiaxes

print("Flux at a few states:")
for w in [(0.0, 0.0), (1.0, 0.0), (0.85, 3.2)]:
    print(f"  F{w} = {flux(w)}")

print("\nJacobian and spectrum:")
for w in [(1.0, 0.0), (-0.125, 3.5), (0.0, -0.5)]:
    e = eigen(w)
    if e.is_real:
        print(f"  DF{w}: lambda_s = {e.lambda_s:.6f}, lambda_f = {e.lambda_f:.6f}")
    else:
        print(f"  DF{w}: complex pair (alpha2 = {e.alpha2:.3f} < 0)")

print("\nClassification (the ellipse interior is elliptic):")
center = ellipse_center()
print(f"  ellipse center {tuple(center)}, semi-axes {ellipse_semiaxes()}")
for w in [(0.0, 0.0), (1.0, 0.0), (0.0, -0.5), (0.125, -2.5)]:
    print(f"  {w}: {classify_state(w).value}")

print("\nEvery hyperbolic state lifts to one slow and one fast point of the")
print("characteristic surface; the speeds there are its eigenvalues:")
for w in [(-0.125, 3.5), (0.85, 3.2)]:
    lift = lift_state(w)
    e = eigen(w)
    print(
        f"  {w}: slow (z,t) = ({lift.us.z:.4f}, {lift.us.t:.4f})"
        f"  fast (z,t) = ({lift.uf.z:.4f}, {lift.uf.t:.4f})"
        f"  [lambda_s = {e.lambda_s:.4f}, lambda_f = {e.lambda_f:.4f}]"
    )

# a shock pair read off the manifold satisfies Rankine-Hugoniot exactly
from wavemanifold import MPoint, manifold_to_states

st = manifold_to_states(MPoint(1.0, 0.0, 1.0))
r = rh_residual(st.w, st.wp, st.s)
print(f"\nShock triple from the manifold: W={tuple(st.w)}, W'={tuple(st.wp)}, s={st.s}")
print(f"  Rankine-Hugoniot residual: {r}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("\n(matplotlib not installed: skipping the figure)")
else:
    fig, ax = plt.subplots(figsize=(6, 6))
    ell = np.array(coincidence_ellipse(n=256))
    ax.fill(ell[:, 0], ell[:, 1], color="mistyrose", label="elliptic region")
    ax.plot(ell[:, 0], ell[:, 1], color="magenta", lw=1.5)
    rng = np.random.default_rng(0)
    pts = rng.uniform(-1, 1, (400, 2)) * [0.4, 1.5] + [0, -0.5]
    for u, v in pts:
        c = classify_state((u, v)).value
        ax.plot(u, v, ".", ms=2, color="tab:red" if c == "elliptic" else "tab:blue")
    ax.set_xlabel("u")
    ax.set_ylabel("v")
    ax.set_title("coincidence ellipse and classification")
    ax.legend(loc="upper right")
    fig.tight_layout()
    fig.savefig("demos/01_state_space.png", dpi=110)
    print("\nwrote demos/01_state_space.png")
