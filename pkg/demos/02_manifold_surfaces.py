# The wave manifold in (z, t, Y) and its organizing surfaces: the sonic and
# sonic' sheets, the inflection locus where they meet the characteristic
# plane, the double sonic lines, and the hysteresis' curve.

import numpy as np

from wavemanifold import (
    MPoint,
    double_sonic,
    hysteresis_point,
    inflection_t,
    region_of,
    scc_value,
    shock_speed,
    sonic_prime_value,
    sonic_value,
)

print("At z = 0 the sonic rule lines are horizontal: Y = +/- 2c")
print(f"  son(0, t, 2)  = {sonic_value(0.0, 5.0, 2.0):+.3f}  (zero on the sheet)")
print(f"  son'(0, t, -2) = {sonic_prime_value(0.0, 5.0, -2.0):+.3f}")

(z1, t1), (z2, t2) = double_sonic()
print(f"\nDouble sonic lines: z = {z1:.6f} (t = {t1}) and z = {z2:.6f} (t = {t2})")
print(f"  inflection locus passes through them: t({z1:.4f}) = {inflection_t(z1):.6f}")

print("\nHysteresis' curve samples (tangency of Hugoniot curves with sonic'):")
for z in (-1.0, 0.0, 1.0):
    q = hysteresis_point(z)
    print(f"  z = {z:+.1f}: (t, Y) = ({q.t:+.6f}, {q.Y:+.6f}),"
          f" scc = {scc_value(q.z, q.t, q.Y):.2e}")

print("\nTwelve-region tour along the Y axis at z = 0, t = 0:")
for Y in (3.0, 1.0, -1.0, -3.0):
    print(f"  Y = {Y:+.0f}: {region_of(MPoint(0.0, 0.0, Y)).value}")
print("and in the outer band z = 1:")
for Y, t in [(2.0, -3.0), (2.0, 3.0), (-2.0, -3.0)]:
    print(f"  (z,t,Y) = (1, {t:+.0f}, {Y:+.0f}): {region_of(MPoint(1.0, t, Y)).value}")

print("\nSpeed is independent of Y; on the characteristic plane it is an")
print("eigenvalue of the flux Jacobian:")
for z, t in [(-5.0, -0.065), (2.0, 2.0)]:
    print(f"  s({z}, {t}) = {shock_speed(z, t):.9f}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("\n(matplotlib not installed: skipping the figure)")
else:
    fig, axes = plt.subplots(1, 3, figsize=(13, 4.2), sharey=True)
    for ax, z in zip(axes, (-0.5, -1.0 / 3.0, 0.2)):
        ts = np.linspace(-6, 6, 400)
        Ys = np.linspace(-6, 6, 400)
        T, Yg = np.meshgrid(ts, Ys)
        ax.contour(T, Yg, sonic_value(z, T, Yg), levels=[0], colors="green")
        ax.contour(T, Yg, sonic_prime_value(z, T, Yg), levels=[0], colors="blue")
        ax.axhline(0, color="k", lw=0.8)
        ax.set_title(f"slice z = {z:.3f}")
        ax.set_xlabel("t")
    axes[0].set_ylabel("Y")
    fig.suptitle("sonic (green) and sonic' (blue) rule lines per z-slice")
    fig.tight_layout()
    fig.savefig("demos/02_manifold_surfaces.png", dpi=110)
    print("\nwrote demos/02_manifold_surfaces.png")
