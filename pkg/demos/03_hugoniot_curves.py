# Hugoniot curves: closed forms, speed profiles, characteristic crossings,
# sonic' crossings, and Lax-admissible shock arcs.

import numpy as np

from wavemanifold import (
    MPoint,
    backward_shock_arc,
    c_crossings,
    forward_shock_arc,
    hugoniot_from_state,
    hugoniot_oracle,
    lax_classify,
    manifold_to_states,
    shock_speed,
    sonic_prime_crossings,
)

L = (-0.2430769231, -0.6365384615)  # the first worked example's left state
curve = hugoniot_from_state(L)

print(f"Hugoniot curve of W0 = {L}:")
print(f"  t(-5) = {curve.t(-5.0):+.9f}   Y(-5) = {curve.Y(-5.0):+.2e}")
t_or, Y_or = hugoniot_oracle(L, -5.0)
print(f"  linear-solve oracle agrees: t = {t_or:+.9f}, Y = {Y_or:+.2e}")

slow, fast = c_crossings(curve)
print("\nCharacteristic crossings (one slow, one fast):")
print(f"  slow: (z, t) = ({slow.z:+.6f}, {slow.t:+.6f}), s = {shock_speed(slow.z, slow.t):+.6f}")
print(f"  fast: (z, t) = ({fast.z:+.6f}, {fast.t:+.6f}), s = {shock_speed(fast.z, fast.t):+.6f}")
gap = shock_speed(fast.z, fast.t) - shock_speed(slow.z, slow.t)
print(f"  speed gap = c (z0^2 + 1) |t0| = {gap:.6f}")

print("\nSonic' crossings carry the speed of one characteristic crossing:")
for pt, tag in sonic_prime_crossings(curve):
    print(f"  z = {pt.z:+.5f}: s = {shock_speed(pt.z, pt.t):+.6f}  [{tag}]")

print("\nForward shock arc from the slow crossing (decreasing speed):")
arc = forward_shock_arc(MPoint(slow.z, slow.t, 0.0))
print(f"  {len(arc)} samples, z from {arc.z[0]:+.3f} to {arc.z[-1]:+.3f},"
      f" s in [{arc.s.min():+.4f}, {arc.s.max():+.4f}], stop: {arc.stop_event}")
mid = MPoint(float(arc.z[len(arc) // 2]), float(arc.t[len(arc) // 2]), float(arc.Y[len(arc) // 2]))
print(f"  Lax check at an interior point: {lax_classify(arc.start, mid).kind}")

print("\nBackward shock arc from the fast lift of the right state (2, 2):")
arc2 = backward_shock_arc(MPoint(2.0, 2.0, 0.0))
print(f"  {len(arc2)} samples, increasing speed, stop: {arc2.stop_event}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("\n(matplotlib not installed: skipping the figure)")
else:
    zs = np.linspace(-6, 4, 800)
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 4.4))
    states = np.array([manifold_to_states(MPoint(float(z), float(curve.t(z)), float(curve.Y(z)))).wp
                       for z in zs])
    ax1.plot(states[:, 0], states[:, 1], color="k", lw=1)
    ax1.plot(*L, "rx", ms=8)
    ax1.set_xlabel("u'")
    ax1.set_ylabel("v'")
    ax1.set_title("Rankine-Hugoniot locus of W0 (state plane)")
    ax2.plot(zs, [curve.s(z) for z in zs], lw=1)
    for pt, color in ((slow, "tab:blue"), (fast, "tab:orange")):
        ax2.plot(pt.z, shock_speed(pt.z, pt.t), "o", color=color)
    ax2.set_xlabel("z")
    ax2.set_ylabel("s")
    ax2.set_title("speed along the Hugoniot curve")
    fig.tight_layout()
    fig.savefig("demos/03_hugoniot_curves.png", dpi=110)
    print("\nwrote demos/03_hugoniot_curves.png")
