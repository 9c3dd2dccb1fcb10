# Wave curves: rarefactions and composites, the three slow-sheet regions,
# and the forward/backward wave structures built from them.

import numpy as np

from wavemanifold import (
    MPoint,
    backward_wave_sequence,
    classify_cs_region,
    forward_wave_curve,
    integrate_composite,
    integrate_rarefaction,
    lift_state,
    shock_speed,
)

print("Slow-sheet regions of the four worked example left states:")
for w in [(-0.2430769231, -0.6365384615), (0.125, 0.5), (-0.125, 3.5), (0.125, -2.5)]:
    us = lift_state(w).us
    region = classify_cs_region(us.z, us.t)
    print(f"  {w} -> (z, t) = ({us.z:+.4f}, {us.t:+.4f}) -> region {region.value}")

print("\nRegion I: the forward rarefaction reaches the coincidence curve:")
arc = integrate_rarefaction(-5.0, -0.065, "forward")
print(f"  from (-5, -0.065): stop = {arc.stop_event}, end z = {arc.z[-1]:.4f}")

print("\nRegion II: the rarefaction stops on the inflection branch and a")
print("composite continues on sonic' (retracing the rarefaction's image):")
arc = integrate_rarefaction(-1.0, -4.0, "forward")
print(f"  rarefaction stop = {arc.stop_event} at z = {arc.z[-1]:.5f}")
comp = integrate_composite(float(arc.z[-1]), "forward", image_direction=-1.0)
print(f"  composite stop = {comp.stop_event} at (z1, Y1) = ({comp.z1[-1]:+.5f}, {comp.Y1[-1]:+.4f})")
print(f"  speeds fall from {comp.s[0]:+.4f} to {comp.s[-1]:+.4f}")

print("\nFull forward wave curves:")
for w, name in [((-0.2430769231, -0.6365384615), "example 1"),
                ((-0.125, 3.5), "example 3"),
                ((0.125, -2.5), "example 4")]:
    wc = forward_wave_curve(lift_state(w).us)
    kinds = " + ".join(wc.kinds)
    print(f"  {name} (region {wc.region.value}): {kinds}")

print("\n2-reverse structure from the right state of example 1:")
wc = backward_wave_sequence(MPoint(2.0, 2.0, 0.0))
for a in wc.arcs:
    print(f"  {a.kind}: {len(a)} samples, s in [{a.s.min():+.4f}, {a.s.max():+.4f}],"
          f" stop {a.stop_event}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("\n(matplotlib not installed: skipping the figure)")
else:
    from wavemanifold.manifold import inflection_t
    from wavemanifold.waves import separatrices

    sep = separatrices()
    fig, ax = plt.subplots(figsize=(7.5, 5.5))
    ax.plot(sep.r_s_z, sep.r_s_t, color="tab:purple", lw=1.4, label="separatrix rarefaction")
    ax.plot(sep.r_fs_z, sep.r_fs_t, color="tab:brown", lw=1.4, label="fast-side branch")
    zs = np.linspace(0.05, 6, 400)
    ax.plot(zs, [inflection_t(z) for z in zs], color="tab:blue", lw=1.2, label="slow inflection")
    for w, marker, name in [((-0.2430769231, -0.6365384615), "o", "ex1 (I)"),
                            ((0.125, 0.5), "s", "ex2 (I)"),
                            ((-0.125, 3.5), "^", "ex3 (II)"),
                            ((0.125, -2.5), "d", "ex4 (III)")]:
        us = lift_state(w).us
        ax.plot(us.z, us.t, marker, ms=7, label=name)
    ax.set_xlim(-6, 3)
    ax.set_ylim(-8, 0.2)
    ax.set_xlabel("z")
    ax.set_ylabel("t")
    ax.set_title("slow-sheet region decomposition")
    ax.legend(loc="lower left", fontsize=8)
    fig.tight_layout()
    fig.savefig("demos/04_wave_curves.png", dpi=110)
    print("\nwrote demos/04_wave_curves.png")
