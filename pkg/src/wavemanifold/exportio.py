"""File emission: CSV grids and polylines, triangle-soup meshes, solution
JSON and static SVG plots.  All numbers carry 12 significant digits so that
fixed inputs give byte-identical outputs."""

from __future__ import annotations

import json
import math
import os

import numpy as np

from .model import ModelParams, DEFAULT_PARAMS, coincidence_ellipse
from .manifold import (
    MPoint,
    hysteresis_point,
    inflection_t,
    manifold_to_states,
    scc_value,
    sonic_prime_value,
    sonic_value,
    double_sonic,
)


def fmt(x) -> str:
    """12 significant digits, plain decimal point."""
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    v = float(x)
    if v == 0.0:
        v = 0.0  # normalize -0.0
    return f"{v:.12g}"


def write_csv(path: str, header, rows):
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt(x) for x in row) + "\n")
    return path


def write_triangle_soup(path: str, vertices, triangles):
    """Indexed-triangle text: one 'v x y z' line per vertex, 'f i j k' per
    triangle (zero-based indices)."""
    with open(path, "w") as fh:
        for v in vertices:
            fh.write("v " + " ".join(fmt(x) for x in v) + "\n")
        for tri in triangles:
            fh.write("f {} {} {}\n".format(*tri))
    return path


def _grid_triangles(n_rows: int, n_cols: int):
    tris = []
    for i in range(n_rows - 1):
        for j in range(n_cols - 1):
            a = i * n_cols + j
            b = a + 1
            c = a + n_cols
            d = c + 1
            tris.append((a, b, c))
            tris.append((b, d, c))
    return tris


def _sonic_line(z: float, prime: bool, params: ModelParams, half_len: float, n: int):
    """Points of the sonic (or sonic') rule line in the (t, Y) plane at z."""
    b1, c = params.b1, params.c
    z2 = z * z
    p = (b1 + 1.0) * z2 * z2 * z + (b1 + 4.0) * z2 * z + 3.0 * z
    q = (b1 + 1.0) * z2 * z2 + b1 * z2 - 1.0
    r = (b1 - 1.0) * z2 + 1.0
    a_coef = -2.0 * c * p
    b_coef = q if prime else -q
    d_coef = 2.0 * c * r
    nrm = math.hypot(a_coef, b_coef)
    base = (d_coef * a_coef / nrm**2, d_coef * b_coef / nrm**2)
    direction = (b_coef / nrm, -a_coef / nrm)
    ss = np.linspace(-half_len, half_len, n)
    return [(base[0] + s * direction[0], base[1] + s * direction[1]) for s in ss]


def _conic_through(z: float, params: ModelParams, n: int):
    """Parametrize the section of the coincidence-saturation surface at z
    (an ellipse in the (t, Y) plane) from six point evaluations."""
    pts = [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0), (2.0, 0.0), (0.0, 2.0)]
    A = np.array([[t * t, t * y, y * y, t, y, 1.0] for t, y in pts])
    b = np.array([scc_value(z, t, y, params) for t, y in pts])
    coef = np.linalg.solve(A, b)  # a t^2 + b tY + c Y^2 + d t + e Y + f
    a_, b_, c_, d_, e_, f_ = coef
    M = np.array([[a_, b_ / 2.0], [b_ / 2.0, c_]])
    center = np.linalg.solve(2.0 * M, -np.array([d_, e_]))
    k = a_ * center[0] ** 2 + b_ * center[0] * center[1] + c_ * center[1] ** 2
    k += d_ * center[0] + e_ * center[1] + f_
    evals, evecs = np.linalg.eigh(M)
    if np.any(evals <= 0.0) and k < 0.0:
        radii = np.sqrt(-k / evals)
    elif np.any(evals >= 0.0) and k > 0.0:
        return []  # no real section
    else:
        radii = np.sqrt(np.abs(k / evals))
    out = []
    for ang in np.linspace(0.0, 2.0 * math.pi, n, endpoint=False):
        xy = center + radii[0] * math.cos(ang) * evecs[:, 0] + radii[1] * math.sin(ang) * evecs[:, 1]
        out.append((xy[0], xy[1]))
    return out


def export_surface(
    which: str,
    out_dir: str,
    params: ModelParams = DEFAULT_PARAMS,
    z_range=(-3.0, 3.0),
    n_z: int = 61,
    n_rule: int = 41,
    half_len: float = 8.0,
):
    """CSV grid of (z, t, Y) triplets plus a triangle-soup mesh for one of
    the named surfaces."""
    zs = np.linspace(z_range[0], z_range[1], n_z)
    rows = []
    verts = []
    if which == "characteristic":
        ts = np.linspace(-half_len, half_len, n_rule)
        for z in zs:
            for t in ts:
                rows.append((z, t, 0.0))
                verts.append((z, t, 0.0))
    elif which in ("son", "sonp"):
        for z in zs:
            for t, y in _sonic_line(float(z), which == "sonp", params, half_len, n_rule):
                rows.append((z, t, y))
                verts.append((z, t, y))
    elif which == "scc":
        for z in zs:
            ring = _conic_through(float(z), params, n_rule)
            if len(ring) != n_rule:
                ring = [(0.0, 0.0)] * n_rule
            for t, y in ring:
                rows.append((z, t, y))
                verts.append((z, t, y))
    else:
        raise ValueError(f"unknown surface {which!r}")
    os.makedirs(out_dir, exist_ok=True)
    csv_path = write_csv(os.path.join(out_dir, f"{which}.csv"), ("z", "t", "Y"), rows)
    tris = _grid_triangles(n_z, n_rule)
    mesh_path = write_triangle_soup(os.path.join(out_dir, f"{which}.tri"), verts, tris)
    return [csv_path, mesh_path]


def export_locus(
    which: str,
    out_dir: str,
    params: ModelParams = DEFAULT_PARAMS,
    z_range=(-3.0, 3.0),
    n: int = 601,
):
    """Polyline CSV for a named locus."""
    os.makedirs(out_dir, exist_ok=True)
    rows = []
    if which == "inflection":
        for z in np.linspace(z_range[0], z_range[1], n):
            if abs(z) < 1e-3:
                continue
            rows.append((z, inflection_t(float(z), params), 0.0))
        header = ("z", "t", "Y")
    elif which == "hysteresis":
        for z in np.linspace(z_range[0], z_range[1], n):
            q = hysteresis_point(float(z), params)
            rows.append((q.z, q.t, q.Y))
        header = ("z", "t", "Y")
    elif which == "ellipse":
        for w in coincidence_ellipse(params, n):
            rows.append((w.u, w.v))
        header = ("u", "v")
    elif which == "double_sonic":
        (z1, t1), (z2, t2) = double_sonic(params)
        for y in np.linspace(-4.0, 4.0, n):
            rows.append((z1, t1, y))
        for y in np.linspace(-4.0, 4.0, n):
            rows.append((z2, t2, y))
        header = ("z", "t", "Y")
    elif which == "coincidence":
        for z in np.linspace(z_range[0], z_range[1], n):
            rows.append((z, 0.0, 0.0))
        header = ("z", "t", "Y")
    else:
        raise ValueError(f"unknown locus {which!r}")
    return [write_csv(os.path.join(out_dir, f"{which}.csv"), header, rows)]


def arc_rows(arc, params: ModelParams = DEFAULT_PARAMS):
    """Per-sample rows (z, t, Y, u, v, u', v', s, son, sonp) of a wave arc."""
    rows = []
    for i in range(len(arc.z)):
        z, t, Y = float(arc.z[i]), float(arc.t[i]), float(arc.Y[i])
        st = manifold_to_states(MPoint(z, t, Y), params)
        rows.append(
            (
                z,
                t,
                Y,
                st.w.u,
                st.w.v,
                st.wp.u,
                st.wp.v,
                float(arc.s[i]),
                sonic_value(z, t, Y, params),
                sonic_prime_value(z, t, Y, params),
            )
        )
    return rows


ARC_HEADER = ("z", "t", "Y", "u", "v", "u_prime", "v_prime", "s", "son", "sonp")


def export_wave_curve(wc, out_dir: str, params: ModelParams = DEFAULT_PARAMS, stem: str = "wavecurve"):
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for i, arc in enumerate(wc.arcs):
        path = os.path.join(out_dir, f"{stem}_{i}_{arc.kind}.csv")
        paths.append(write_csv(path, ARC_HEADER, arc_rows(arc, params)))
    meta = {
        "base": [wc.base.z, wc.base.t, wc.base.Y],
        "family": wc.family,
        "region": wc.region.value if wc.region else None,
        "arcs": [
            {
                "kind": a.kind,
                "stop_event": a.stop_event,
                "n_samples": len(a),
                "speed_range": [float(np.min(a.s)), float(np.max(a.s))],
            }
            for a in wc.arcs
        ],
        "incomplete": wc.incomplete,
    }
    mpath = os.path.join(out_dir, f"{stem}.json")
    with open(mpath, "w") as fh:
        json.dump(meta, fh, indent=1, sort_keys=True, default=fmt)
        fh.write("\n")
    paths.append(mpath)
    return paths


def export_saturated(sats, out_dir: str, params: ModelParams = DEFAULT_PARAMS):
    """CSV grid rows (generator index, z, t, Y) per fiber of each sheet."""
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for k, sat in enumerate(sats):
        sat.sample_fibers()
        rows = []
        verts = []
        for i, (t_f, y_f) in enumerate(sat.fibers):
            for j, z in enumerate(sat.fiber_z):
                rows.append((i, z, t_f[j], y_f[j]))
                verts.append((z, t_f[j], y_f[j]))
        path = os.path.join(out_dir, f"saturated_{k}_{sat.kind}.csv")
        paths.append(write_csv(path, ("fiber", "z", "t", "Y"), rows))
        tris = _grid_triangles(len(sat.fibers), len(sat.fiber_z))
        paths.append(
            write_triangle_soup(
                os.path.join(out_dir, f"saturated_{k}_{sat.kind}.tri"), verts, tris
            )
        )
    return paths


def _svg_path(points, scale, offset) -> str:
    cmds = []
    for k, (x, y) in enumerate(points):
        sx = (x - offset[0]) * scale[0]
        sy = (offset[1] - y) * scale[1]
        cmds.append(("M" if k == 0 else "L") + f"{sx:.3f},{sy:.3f}")
    return " ".join(cmds)


def solution_svg(solution, path: str, size: int = 640):
    """State-plane picture of a Riemann solution: ellipse, data, wave path."""
    params = solution.params
    pts = [(solution.left.u, solution.left.v), (solution.right.u, solution.right.v)]
    for m in solution.middle_states:
        pts.append((m.u, m.v))
    ell = [(w.u, w.v) for w in coincidence_ellipse(params, 128)]
    allp = pts + ell
    xs = [p[0] for p in allp]
    ys = [p[1] for p in allp]
    pad = 0.15 * max(max(xs) - min(xs), max(ys) - min(ys), 1.0)
    x0, x1 = min(xs) - pad, max(xs) + pad
    y0, y1 = min(ys) - pad, max(ys) + pad
    span = max(x1 - x0, y1 - y0)
    scale = (size / span, size / span)
    offset = (x0, y1)
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
        f'<path d="{_svg_path(ell + ell[:1], scale, offset)}" fill="none" '
        'stroke="magenta" stroke-width="1"/>',
    ]
    colors = {"S1": "black", "R1": "red", "C1-shock": "green",
              "S2": "blue", "R2": "deeppink", "C2-shock": "darkcyan"}
    for w in solution.waves:
        seg = [(w.from_state.u, w.from_state.v), (w.to_state.u, w.to_state.v)]
        lines.append(
            f'<path d="{_svg_path(seg, scale, offset)}" fill="none" '
            f'stroke="{colors.get(w.kind, "gray")}" stroke-width="2"/>'
        )
    for (x, y), name in zip(pts, ["L", "R"] + ["M"] * (len(pts) - 2)):
        sx = (x - offset[0]) * scale[0]
        sy = (offset[1] - y) * scale[1]
        lines.append(f'<circle cx="{sx:.3f}" cy="{sy:.3f}" r="4" fill="black"/>')
        lines.append(f'<text x="{sx + 6:.3f}" y="{sy - 6:.3f}" font-size="14">{name}</text>')
    lines.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def solution_json(solution, path: str):
    with open(path, "w") as fh:
        json.dump(solution.as_dict(), fh, indent=1, sort_keys=True, default=fmt)
        fh.write("\n")
    return path
