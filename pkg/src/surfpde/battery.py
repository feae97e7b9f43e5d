"""Named residual checks for the verify and converge commands.

Every check turns one identity into a ResidualReport (or several); the
registry keeps them individually addressable so batteries can run in
parallel worker pools and convergence studies can sweep resolutions.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .bubble import (
    BubbleGeometry,
    bubble_conormal_checks,
    bubble_divergence_check,
    bubble_seam_checks,
    bubble_transport_check,
    charts_for,
    interface_alignment,
)
from .calculus import (
    EdgePairing,
    ResidualReport,
    divergence_theorem_residual,
    dissipation_variation_residual,
    sqrtG_evolution_residual,
    transport_theorem_residual,
    union_divergence_residual,
)
from .geometry import (
    BoundarySegment,
    ParamGrid,
    boundary_segments,
    conormal,
    frame,
    mean_curvature,
    normal_fd_derivatives,
    second_derivatives,
    weingarten_coeffs,
)
from .geometry.library import (
    cylinder,
    default_graph,
    disc,
    full_sphere,
    hemisphere_pair,
    sphere_cap,
    standard_corpus,
)


@dataclass(frozen=True)
class VerifyParams:
    """Resolution knobs of the battery; tolerances are per-check defaults
    unless ``tolerance`` overrides them globally."""

    n: int = 64
    m_edge: int = 256
    dt: float = 1e-4
    eps: float = 1e-4
    n_points: int = 200
    seed: int = 1234
    tolerance: float | None = None


REFERENCE_BUBBLE = BubbleGeometry.affine(1.0, 0.0, 1.2, 0.0, 0.8, 0.05)


def _interior_points(chart, rng, n):
    r_lo, r_hi, s_lo, s_hi = chart.domain
    pad_r = 0.02 * (r_hi - r_lo)
    pad_s = 0.02 * (s_hi - s_lo)
    r = rng.uniform(r_lo + pad_r, r_hi - pad_r, size=n)
    s = rng.uniform(s_lo + pad_s, s_hi - pad_s, size=n)
    return r, s


def verification_charts():
    """Corpus: the library presets plus the five bubble charts."""
    charts = standard_corpus()
    charts.extend(charts_for(REFERENCE_BUBBLE, 0.0).values())
    return charts


# --- standard test fields -------------------------------------------------

def field_position(x, t):
    return x


def field_yz(x, t):
    out = np.zeros_like(x)
    out[..., 1] = 0.5 * x[..., 1]
    out[..., 2] = 0.5 * x[..., 2]
    return out


def field_poly(x, t):
    out = np.empty_like(x)
    out[..., 0] = 0.1 * x[..., 1] * x[..., 2]
    out[..., 1] = 0.1 * (x[..., 0] + 0.2 * x[..., 2] ** 2)
    out[..., 2] = 0.1 * x[..., 0] * x[..., 1]
    return out


DIVERGENCE_FIELDS = (
    ("position", field_position),
    ("yz", field_yz),
    ("poly", field_poly),
)


def scalar_density(x, t):
    return 0.5 + 0.3 * x[..., 0] - 0.2 * x[..., 1] * x[..., 2] + 0.1 * np.cos(t + x[..., 2])


# --- individual checks ----------------------------------------------------

def check_frame_identities(p: VerifyParams, rng) -> list[ResidualReport]:
    worst = 0.0
    for chart in verification_charts():
        r, s = _interior_points(chart, rng, p.n_points)
        fr = frame(chart, (r, s), 0.0)
        eye = np.eye(2)
        dual = np.stack(
            [
                np.einsum("...i,...i->...", fr.gup1, fr.g1),
                np.einsum("...i,...i->...", fr.gup1, fr.g2),
                np.einsum("...i,...i->...", fr.gup2, fr.g1),
                np.einsum("...i,...i->...", fr.gup2, fr.g2),
            ],
            axis=-1,
        )
        worst = max(worst, float(np.max(np.abs(dual - eye.ravel()))))
        worst = max(worst, float(np.max(np.abs(np.einsum("...ij,...jk->...ik", fr.ginv_ab, fr.g_ab) - eye))))
        worst = max(worst, float(np.max(np.abs(np.linalg.norm(fr.n, axis=-1) - 1.0))))
        worst = max(worst, float(np.max(np.abs(np.einsum("...i,...i->...", fr.n, fr.g1)))))
        worst = max(worst, float(np.max(np.abs(np.einsum("...i,...i->...", fr.n, fr.g2)))))
        # determinant identity: g11 g22 - g12^2 equals |g1 x g2|^2
        worst = max(worst, float(np.max(np.abs(fr.G - fr.sqrtG**2) / np.maximum(fr.G, 1e-30))))
    return [
        ResidualReport(
            "frame_identities", worst, 1e-10, {"n_points": p.n_points, "charts": len(verification_charts())}
        )
    ]


def check_frame_cross_identities(p: VerifyParams, rng) -> list[ResidualReport]:
    """gup1 sqrtG = g2 x n and gup2 sqrtG = -(g1 x n)."""
    worst = 0.0
    for chart in verification_charts():
        r, s = _interior_points(chart, rng, p.n_points)
        fr = frame(chart, (r, s), 0.0)
        lhs1 = fr.gup1 * fr.sqrtG[..., None]
        lhs2 = fr.gup2 * fr.sqrtG[..., None]
        worst = max(worst, float(np.max(np.abs(lhs1 - np.cross(fr.g2, fr.n)))))
        worst = max(worst, float(np.max(np.abs(lhs2 + np.cross(fr.g1, fr.n)))))
    return [ResidualReport("frame_cross_identities", worst, 1e-10, {"n_points": p.n_points})]


def _weingarten_residual(chart, rng, n_points, force_fd: bool):
    r, s = _interior_points(chart, rng, n_points)
    target = chart if not force_fd else replace(chart, d2_map=None)
    c1, c2, c3, c4 = weingarten_coeffs(target, (r, s), 0.0)
    fr = frame(chart, (r, s), 0.0)
    dn1, dn2 = normal_fd_derivatives(chart, (r, s), 0.0)
    rec1 = c1[..., None] * fr.g1 + c2[..., None] * fr.g2
    rec2 = c3[..., None] * fr.g1 + c4[..., None] * fr.g2
    return max(
        float(np.max(np.abs(dn1 - rec1))),
        float(np.max(np.abs(dn2 - rec2))),
    )


def check_weingarten_analytic(p: VerifyParams, rng) -> list[ResidualReport]:
    worst = 0.0
    for chart in verification_charts():
        if chart.d2_map is None:
            continue
        worst = max(worst, _weingarten_residual(chart, rng, p.n_points, force_fd=False))
    return [ResidualReport("weingarten_analytic", worst, 1e-8, {"n_points": p.n_points})]


def check_weingarten_fd(p: VerifyParams, rng) -> list[ResidualReport]:
    worst = 0.0
    for chart in verification_charts():
        worst = max(worst, _weingarten_residual(chart, rng, p.n_points, force_fd=True))
    return [ResidualReport("weingarten_fd", worst, 1e-6, {"n_points": p.n_points, "h": "1e-5*extent"})]


def check_mean_curvature_presets(p: VerifyParams, rng) -> list[ResidualReport]:
    worst = 0.0
    cases = (
        (sphere_cap(radius0=1.0, angle=np.pi / 3), 2.0),
        (sphere_cap(radius0=2.0, angle=np.pi / 2, name="sphere_r2"), 1.0),
        (disc(), 0.0),
        (cylinder(), 1.0),
    )
    for chart, expected in cases:
        r, s = _interior_points(chart, rng, p.n_points)
        h_val = mean_curvature(chart, (r, s), 0.0)
        worst = max(worst, float(np.max(np.abs(np.abs(h_val) - expected))))
    return [ResidualReport("mean_curvature_presets", worst, 1e-8, {"n_points": p.n_points})]


def check_conormal_orthonormal(p: VerifyParams, rng) -> list[ResidualReport]:
    worst = 0.0
    for chart in verification_charts():
        for seg in boundary_segments(chart):
            ell, _ = seg.midpoints(64)
            nu = conormal(chart, seg, ell, 0.0)
            fr = frame(chart, seg.points(ell), 0.0)
            worst = max(worst, float(np.max(np.abs(np.linalg.norm(nu, axis=-1) - 1.0))))
            worst = max(worst, float(np.max(np.abs(np.einsum("...i,...i->...", nu, fr.n)))))
    return [ResidualReport("conormal_orthonormal", worst, 1e-12, {"m_edge": 64})]


def _divergence_on(chart, p: VerifyParams, tol: float) -> ResidualReport:
    worst = 0.0
    for _, f in DIVERGENCE_FIELDS:
        rep = divergence_theorem_residual(
            chart, f, 0.0, n_r=p.n, n_s=p.n, m_edge=p.m_edge, tolerance=tol
        )
        worst = max(worst, abs(rep.value))
    return ResidualReport(
        f"divergence_theorem[{chart.name}]",
        worst,
        tol,
        {"n_r": p.n, "n_s": p.n, "m_edge": p.m_edge, "fields": len(DIVERGENCE_FIELDS)},
    )


def check_divergence_theorem(p: VerifyParams, rng) -> list[ResidualReport]:
    tol = 2e-4 * (64.0 / p.n) ** 2 + 1e-9
    return [
        _divergence_on(disc(), p, tol),
        _divergence_on(sphere_cap(angle=np.pi / 3), p, tol),
        _divergence_on(default_graph(), p, tol),
    ]


def check_union_closed_sphere(p: VerifyParams, rng) -> list[ResidualReport]:
    north, south = hemisphere_pair()
    pairing = EdgePairing(0, "r1", 1, "r1")
    tol = 2e-4 * (64.0 / p.n) ** 2 + 1e-9
    out = []
    for fname, f in (("position", field_position), ("poly", field_poly)):
        reps = union_divergence_residual(
            [north, south],
            [pairing],
            f,
            0.0,
            n_r=p.n,
            n_s=p.n,
            m_edge=p.m_edge,
            tolerance=tol,
            name=f"union_closed_sphere[{fname}]",
        )
        out.append(reps[0])
    out.append(reps[1])  # equator anti-symmetry report (field-independent)
    return out


def check_transport_growing_sphere(p: VerifyParams, rng) -> list[ResidualReport]:
    chart = full_sphere(1.0, 0.1)
    rep = transport_theorem_residual(
        chart,
        lambda x, t: np.ones(x.shape[:-1]),
        0.0,
        dt=p.dt,
        n_r=p.n,
        n_s=p.n,
        tolerance=1.0,
    )
    scale = 8.0 * np.pi * 1.0 * 0.1
    return [
        ResidualReport(
            "transport_growing_sphere_rel",
            rep.value / scale,
            1e-6,
            {"n_r": p.n, "n_s": p.n, "dt": p.dt},
        )
    ]


def check_transport_bubble(p: VerifyParams, rng) -> list[ResidualReport]:
    return bubble_transport_check(
        REFERENCE_BUBBLE, scalar_density, 0.0, dt=p.dt, n_r=p.n, n_s=p.n, tolerance=1e-5
    )


def check_sqrtG_evolution(p: VerifyParams, rng) -> list[ResidualReport]:
    worst = 0.0
    charts = [full_sphere(1.0, 0.1)] + list(charts_for(REFERENCE_BUBBLE, 0.0).values())
    from .geometry.library import scaling_plane

    charts.append(scaling_plane(0.5))
    for chart in charts:
        r, s = _interior_points(chart, rng, 32)
        res = sqrtG_evolution_residual(chart, (r, s), 0.1, dt=p.dt)
        worst = max(worst, float(np.max(np.abs(res))))
    return [ResidualReport("sqrtG_evolution", worst, 1e-7, {"dt": p.dt})]


def _bump(x):
    y = (x - 0.2) * (0.8 - x)
    return np.where((x > 0.2) & (x < 0.8), y**3, 0.0)


def check_dissipation_variation(p: VerifyParams, rng) -> list[ResidualReport]:
    from .geometry.library import plane
    from .solver.energy import EnergyDensity

    chart = plane()
    n = max(p.n, 32)
    grid = ParamGrid.from_chart(chart, n, n)
    R, S = grid.centers()
    f_vals = 0.4 * np.sin(2.0 * np.pi * R) * np.cos(np.pi * S) + 0.3 * R * S
    psi = _bump(R) * _bump(S) * 4e2
    out = []
    for energy in (EnergyDensity.linear(), EnergyDensity.power(1.0), EnergyDensity.log()):
        rep = dissipation_variation_residual(
            chart,
            grid,
            f_vals,
            psi,
            energy,
            0.0,
            eps=p.eps,
            tolerance=1e-6,
            name=f"dissipation_variation[{energy.kind}]",
        )
        out.append(rep)
    return out


def check_bubble_conormals(p: VerifyParams, rng) -> list[ResidualReport]:
    return bubble_conormal_checks(REFERENCE_BUBBLE, 0.0, n_theta=64)


def check_bubble_alignment(p: VerifyParams, rng) -> list[ResidualReport]:
    value = interface_alignment(REFERENCE_BUBBLE, 0.0, n_theta=64)
    return [ResidualReport("bubble_interface_alignment", value, 1e-12, {"n_theta": 64})]


def check_bubble_divergence(p: VerifyParams, rng) -> list[ResidualReport]:
    tol = 5e-4 * (64.0 / p.n) ** 2 + 1e-9
    return bubble_divergence_check(
        REFERENCE_BUBBLE, field_poly, 0.0, n_r=p.n, n_s=p.n, m_edge=p.m_edge, tolerance=tol
    )


def check_bubble_seams(p: VerifyParams, rng) -> list[ResidualReport]:
    return bubble_seam_checks(REFERENCE_BUBBLE, 0.0, m=64)


CHECKS = {
    "frame_identities": check_frame_identities,
    "frame_cross_identities": check_frame_cross_identities,
    "weingarten_analytic": check_weingarten_analytic,
    "weingarten_fd": check_weingarten_fd,
    "mean_curvature_presets": check_mean_curvature_presets,
    "conormal_orthonormal": check_conormal_orthonormal,
    "divergence_theorem": check_divergence_theorem,
    "union_closed_sphere": check_union_closed_sphere,
    "transport_growing_sphere": check_transport_growing_sphere,
    "transport_bubble": check_transport_bubble,
    "sqrtG_evolution": check_sqrtG_evolution,
    "dissipation_variation": check_dissipation_variation,
    "bubble_conormals": check_bubble_conormals,
    "bubble_interface_alignment": check_bubble_alignment,
    "bubble_divergence": check_bubble_divergence,
    "bubble_seams": check_bubble_seams,
}


def run_battery(
    params: VerifyParams, names=None, threads: int = 1
) -> list[ResidualReport]:
    """Run the named checks (all by default) and collect their reports.

    Checks are independent and deterministic given the seed, so the thread
    pool changes only wall time, never output.
    """
    names = list(names) if names else list(CHECKS)
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise KeyError(f"unknown checks: {unknown}")

    def run_one(name):
        rng = np.random.default_rng(params.seed)
        return CHECKS[name](params, rng)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run_one, names))
    else:
        results = [run_one(n) for n in names]
    reports = [rep for group in results for rep in group]
    if params.tolerance is not None:
        reports = [replace(rep, tolerance=params.tolerance) for rep in reports]
    return reports


# --- convergence studies ---------------------------------------------------

def _fit_order(values, roundoff=1e-12):
    """Least-squares slope of log2|residual| per refinement level."""
    vals = np.abs(np.asarray(values, float))
    usable = vals > roundoff
    if np.count_nonzero(usable) < 2:
        return None
    idx = np.arange(len(vals))[usable]
    slope = np.polyfit(idx, np.log2(vals[usable]), 1)[0]
    return -slope


def study_divergence(chart_factory, base_n: int, levels: int, field=field_poly):
    rows = []
    for k in range(levels):
        n = base_n * 2**k
        rep = divergence_theorem_residual(
            chart_factory(), field, 0.0, n_r=n, n_s=n, m_edge=4 * n, tolerance=np.inf
        )
        rows.append((n, rep.value))
    order = _fit_order([v for _, v in rows])
    return rows, order


def study_sphere_area(base_n: int, levels: int):
    from .geometry.ops import surface_integral

    chart = full_sphere()
    rows = []
    for k in range(levels):
        n = base_n * 2**k
        grid = ParamGrid.from_chart(chart, n, n)
        area = surface_integral(chart, grid, np.ones((n, n)), 0.0)
        rows.append((n, area - 4.0 * np.pi))
    order = _fit_order([v for _, v in rows])
    return rows, order


def study_transport_dt(base_dt: float, levels: int, n: int = 64):
    chart = full_sphere(1.0, 0.1)

    def f(x, t):
        return np.cos(x[..., 2] + 0.5 * t) + 0.3 * x[..., 0] ** 2

    rows = []
    for k in range(levels):
        dt = base_dt / 2**k
        rep = transport_theorem_residual(chart, f, 0.2, dt=dt, n_r=n, n_s=n, tolerance=np.inf)
        rows.append((dt, rep.value))
    order = _fit_order([v for _, v in rows])
    return rows, order


STUDIES = {
    "divergence_disc": lambda base_n, levels: study_divergence(disc, base_n, levels),
    "divergence_graph": lambda base_n, levels: study_divergence(default_graph, base_n, levels),
    "divergence_sphere_cap": lambda base_n, levels: study_divergence(
        lambda: sphere_cap(angle=np.pi / 3), base_n, levels
    ),
    "quadrature_sphere_area": study_sphere_area,
    "transport_dt": lambda base_n, levels: study_transport_dt(1e-2, levels, n=base_n),
}
