"""End-to-end acceptance checks: ten oracle-backed criteria.

Each criterion is one test that prints a single PASS/FAIL line (visible under
``pytest tests/test_acceptance.py -q -s``).  All sampling is seeded, so the
run is deterministic.  Every numeric expectation is checked against an
independent oracle: hand-derived values, brute-force sweeps, finite
differences, or geometric constructions that never call the code under test
to produce the expected answer.
"""
import functools
import math
import os
import subprocess
import sys

import numpy as np

import rangegeom as rg
from rangegeom.kummer import _q3_residuals_general

from oracles import brute_fiber
from test_cli import CASES as CLI_CASES
from test_cli import _CSV_CASES, _golden_path, _run

RIGHT = rg.validate_config([(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)])


def _criterion(num, label):
    def deco(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"FAIL  criterion {num:2d}: {label}")
                raise
            print(f"PASS  criterion {num:2d}: {label}")

        return wrapper

    return deco


# ---------------------------------------------------------------------------
# seeded samplers

def _random_triangle(rng, lo=-2.0, hi=2.0, quality=0.05, dim=2):
    """A non-collinear receiver triangle with bounded aspect ratio."""
    while True:
        pts = rng.uniform(lo, hi, size=(3, dim))
        dmax = max(np.linalg.norm(pts[i] - pts[j]) for i, j in ((0, 1), (0, 2), (1, 2)))
        if dmax < 0.5:
            continue
        v1, v2 = pts[1] - pts[0], pts[2] - pts[0]
        if dim == 2:
            area2 = abs(v1[0] * v2[1] - v1[1] * v2[0])
        else:
            area2 = float(np.linalg.norm(np.cross(v1, v2)))
        if area2 < quality * dmax * dmax:
            continue
        try:
            cfg = rg.validate_config(pts)
        except rg.RangeGeomError:
            continue
        if cfg.is_collinear:
            continue
        return cfg


def _random_pair(rng, lo=-2.0, hi=2.0):
    while True:
        pts = rng.uniform(lo, hi, size=(2, 2))
        if np.linalg.norm(pts[1] - pts[0]) >= 0.5:
            return rg.validate_config(pts)


def _random_collinear(rng, lo=-3.0, hi=3.0):
    base = rng.uniform(lo, hi, size=2)
    ang = rng.uniform(0.0, 2.0 * math.pi)
    u = np.array([math.cos(ang), math.sin(ang)])
    length = rng.uniform(0.5, 4.0)
    rho = rng.uniform(0.1, 0.9)
    return rg.validate_config([base, base + length * u, base + rho * length * u])


def _circumcircle(cfg):
    m1, m2, m3 = [np.asarray(p, float) for p in cfg.receivers]
    A = 2.0 * np.stack([m2 - m1, m3 - m1])
    rhs = np.array([float(m2 @ m2 - m1 @ m1), float(m3 @ m3 - m1 @ m1)])
    o = np.linalg.solve(A, rhs)
    return o, float(np.linalg.norm(m1 - o))


# ---------------------------------------------------------------------------

@_criterion(1, "two-receiver round trip and fiber counts (2 interior / 1 boundary)")
def test_criterion_1_two_receiver_round_trip():
    rng = np.random.default_rng(101)
    for k in range(10_000):
        cfg = _random_pair(rng)
        m1, m2 = (np.asarray(p, float) for p in cfg.receivers)
        d21 = float(np.linalg.norm(m2 - m1))
        if k % 2 == 0:
            # boundary: source placed on the receiver line
            t = rng.uniform(-1.5, 2.5)
            x = m1 + t * (m2 - m1)
            if min(np.linalg.norm(x - m1), np.linalg.norm(x - m2)) < 1e-3 * d21:
                continue
            T = rg.forward2(cfg, x)
            cls = rg.classify2(cfg, T)
            assert cls.verdict == "Boundary" and cls.fiber == 1
            sol = rg.invert2(cfg, T)
            assert len(sol) == 1
            err = float(np.max(np.abs(np.asarray(sol[0]) - x)))
            assert err <= 1e-9 * d21
        else:
            # interior: source off the line by a set margin
            x = rng.uniform(-2.0 * d21, 2.0 * d21, size=2) + m1
            u = (m2 - m1) / d21
            if abs(rg.cross2(u, x - m1)) < 1e-3 * d21:
                continue
            T = rg.forward2(cfg, x)
            cls = rg.classify2(cfg, T)
            assert cls.verdict == "Interior" and cls.fiber == 2
            sol = rg.invert2(cfg, T)
            assert len(sol) == 2
            err = min(float(np.max(np.abs(np.asarray(p) - x))) for p in sol)
            assert err <= 1e-9 * d21
            for p in sol:
                assert np.max(np.abs(rg.forward2(cfg, p) - T)) <= 1e-9 * d21


@_criterion(2, "three-receiver round trip and reference independence of the exterior point")
def test_criterion_2_three_receiver_round_trip():
    rng = np.random.default_rng(202)
    for k in range(10_000):
        cfg = _random_triangle(rng)
        dmax = cfg.d_max
        x = rng.uniform(-2.0 * dmax, 2.0 * dmax, size=2)
        if min(np.linalg.norm(x - np.asarray(p, float)) for p in cfg.receivers) < 1e-3 * dmax:
            continue
        T = rg.forward3(cfg, x)
        sol = rg.invert3(cfg, T)
        err = min(float(np.max(np.abs(np.asarray(p) - x))) for p in sol.points)
        assert err <= 1e-9 * dmax
        pts = [rg.exterior_point(cfg, T, i) for i in (1, 2, 3)]
        spatial = np.array([[p.x, p.y] for p in pts])
        assert np.max(np.abs(spatial - spatial[0])) <= 1e-9 * dmax
        for i, p in enumerate(pts):
            assert p.t == -float(T[i])


@_criterion(3, "surface membership, 16 singular nodes, 12 tangent conics, exact -2 value")
def test_criterion_3_quartic_surface():
    # hand-derived oracle: on the unit right triangle all squared side
    # lengths are 1, 1, 2, and the quartic at T = (1,1,1) telescopes to -2
    assert rg.quartic_residual(RIGHT, (1.0, 1.0, 1.0)) == -2.0

    rng = np.random.default_rng(303)
    for s in range(20):
        cfg = _random_triangle(rng)
        xs = rng.uniform(-2.0 * cfg.d_max, 2.0 * cfg.d_max, size=(500, 2))
        res = rg.quartic_residual(cfg, rg.forward3(cfg, xs), normalized=True)
        assert np.max(np.abs(res)) <= 1e-10

    for s in range(8):
        cfg = RIGHT if s == 0 else _random_triangle(rng)
        form = rg.homogeneous_form(cfg)
        nt = rg.nodes_and_tropes(cfg)
        assert len(nt.nodes) == 16 and len(nt.tropes) == 16
        for node in nt.nodes:
            t = np.asarray(node.homogeneous, float)
            assert abs(form.evaluate(t)) <= 1e-9
            assert float(np.linalg.norm(form.gradient(t))) <= 1e-9
        for label in rg.ARC_LABELS:
            arc = rg.conic_arc(cfg, label)
            samples = arc.sample(n=9, extent=1.5)[1:-1]
            res = rg.quartic_residual(cfg, samples, normalized=True)
            assert np.max(np.abs(res)) <= 1e-9


@_criterion(4, "twelve facet inequalities: containment, non-redundancy, collinear reduction")
def test_criterion_4_q3_polyhedron():
    rng = np.random.default_rng(404)
    # containment of the range image
    for k in range(10_000):
        cfg = _random_triangle(rng)
        x = rng.uniform(-2.0 * cfg.d_max, 2.0 * cfg.d_max, size=2)
        rep = rg.q3_membership(cfg, rg.forward3(cfg, x))
        assert len(rep.residuals) == 12
        assert min(rep.residuals.values()) >= -1e-12 * cfg.d_max

    # non-redundancy: a constructed witness violating exactly one facet each
    for s in range(3):
        cfg = RIGHT if s == 0 else _random_triangle(rng)
        margin = 1e-9 * cfg.d_max
        for facet in rg.Q3_FACETS:
            witness = _facet_witness(cfg, facet, margin)
            assert witness is not None, f"no witness for {facet}"
            neg = [nm for nm, v in witness.items() if v < 0.0]
            assert neg == [facet]

    # collinear: the 4 reduced inequalities imply the general 12
    rng2 = np.random.default_rng(414)
    for s in range(4):
        cfg = _random_collinear(rng2)
        accepted = 0
        while accepted < 250:
            T = rng2.uniform(0.0, 3.0 * cfg.d_max, size=3)
            rep = rg.q3_membership(cfg, T)
            assert len(rep.residuals) == 4
            if min(rep.residuals.values()) < 0.0:
                continue
            general = _q3_residuals_general(cfg, float(T[0]), float(T[1]), float(T[2]))
            assert min(general.values()) >= -1e-12 * cfg.d_max
            accepted += 1


def _facet_witness(cfg, facet, margin):
    """A range triple violating `facet` alone, built by a guarded gradient step."""
    def residuals(T):
        return rg.q3_membership(cfg, T).residuals

    arc = rg.conic_arc(cfg, facet)
    samples = [np.asarray(T, float) for T in arc.sample(n=9, extent=1.0)[1:-1]]
    samples.sort(key=lambda T: -min(v for nm, v in residuals(T).items() if nm != facet))
    h = 1e-6 * cfg.d_max
    for T0 in samples:
        r0 = residuals(T0)
        grad = np.zeros(3)
        for i in range(3):
            Tp, Tm = T0.copy(), T0.copy()
            Tp[i] += h
            Tm[i] -= h
            grad[i] = (residuals(Tp)[facet] - residuals(Tm)[facet]) / (2.0 * h)
        step = grad / float(grad @ grad)
        for t in 1e-3 * cfg.d_max * 0.5 ** np.arange(14):
            rw = residuals(T0 - (t + r0[facet]) * step)
            if rw[facet] < -margin and min(v for nm, v in rw.items() if nm != facet) > margin:
                return rw
    return None


@_criterion(5, "curvature sign structure: positive core, vanishing loci, flips, far-field decay")
def test_criterion_5_curvature():
    rng = np.random.default_rng(505)
    configs = [RIGHT] + [_random_triangle(np.random.default_rng(550 + s)) for s in range(7)]

    # strictly positive on 1000 interior points (barycentric sampling)
    cnt = 0
    while cnt < 1000:
        cfg = configs[cnt % len(configs)]
        w = rng.dirichlet((1.0, 1.0, 1.0))
        if np.min(w) < 1e-3:
            continue
        x = sum(wi * np.asarray(p, float) for wi, p in zip(w, cfg.receivers))
        assert float(rg.gaussian_curvature(cfg, x)) > 0.0
        cnt += 1

    # vanishing on the three receiver lines and the circumcircle
    for cfg in configs:
        pts = [np.asarray(p, float) for p in cfg.receivers]
        o, R = _circumcircle(cfg)
        samples = []
        for i, j in ((0, 1), (0, 2), (1, 2)):
            ts = np.linspace(-1.0, 2.0, 340)
            samples.append(pts[i] + ts[:, None] * (pts[j] - pts[i]))
        th = np.linspace(0.0, 2.0 * math.pi, 340, endpoint=False)
        samples.append(o + R * np.stack([np.cos(th), np.sin(th)], axis=-1))
        P = np.concatenate(samples)
        keep = np.ones(len(P), dtype=bool)
        for q in pts:
            keep &= np.linalg.norm(P - q, axis=1) > 1e-6 * cfg.d_max
        assert np.count_nonzero(keep) >= 1000
        K = rg.gaussian_curvature(cfg, P[keep])
        assert float(np.max(np.abs(K))) * cfg.d_max ** 2 <= 1e-9

        # sign flip across each curve, probed where only that curve is crossed
        for idx, (i, j) in enumerate(((0, 1), (0, 2), (1, 2))):
            mid = 0.5 * (pts[i] + pts[j])
            u = (pts[j] - pts[i]) / np.linalg.norm(pts[j] - pts[i])
            pair = _crossing_pair(cfg, mid, np.array([-u[1], u[0]]), idx)
            assert pair is not None
            k1, k2 = (float(rg.gaussian_curvature(cfg, p)) for p in pair)
            assert k1 * k2 < 0.0
        ang = sorted(math.atan2(*(p - o)[::-1]) for p in pts)
        gaps = [(ang[(k + 1) % 3] - ang[k]) % (2.0 * math.pi) for k in range(3)]
        kmax = int(np.argmax(gaps))
        theta = ang[kmax] + 0.5 * gaps[kmax]
        u = np.array([math.cos(theta), math.sin(theta)])
        pair = _crossing_pair(cfg, o + R * u, u, 3)
        assert pair is not None
        k1, k2 = (float(rg.gaussian_curvature(cfg, p)) for p in pair)
        assert k1 * k2 < 0.0

        # far-field decay of |K| d1^2 along a log-spaced ray
        m1 = pts[0]
        direction = np.array([math.cos(0.7), math.sin(0.7)])
        radii = 3.0 * cfg.d_max * 2.0 ** np.arange(10)
        prod = [
            abs(float(rg.gaussian_curvature(cfg, m1 + r * direction))) * r * r for r in radii
        ]
        assert max(prod) <= 10.0 * prod[0]
        assert all(np.isfinite(prod))


def _curve_values(cfg, p):
    """Signed values of the four vanishing curves of K at p (3 lines + circle)."""
    pts = [np.asarray(q, float) for q in cfg.receivers]
    o, R = _circumcircle(cfg)
    vals = []
    for i, j in ((0, 1), (0, 2), (1, 2)):
        u = (pts[j] - pts[i]) / np.linalg.norm(pts[j] - pts[i])
        vals.append(float(rg.cross2(u, p - pts[i])))
    vals.append(float((p - o) @ (p - o) - R * R))
    return np.array(vals)


def _crossing_pair(cfg, base, nvec, which):
    """A probe pair straddling exactly one vanishing curve of the curvature."""
    for delta in 0.02 * cfg.d_max * 0.5 ** np.arange(12):
        a, b = base + delta * nvec, base - delta * nvec
        flips = np.sign(_curve_values(cfg, a)) * np.sign(_curve_values(cfg, b)) < 0
        if flips[which] and not np.any(np.delete(flips, which)):
            return a, b
    return None


@_criterion(6, "collinear receivers: compatibility equation, mirror fibers, square degeneration")
def test_criterion_6_collinear_model():
    rng = np.random.default_rng(606)
    for k in range(1000):
        cfg = _random_collinear(rng)
        dmax = cfg.d_max
        pts = [np.asarray(p, float) for p in cfg.receivers]
        i, j, _ = cfg.kind.order
        u = (pts[j] - pts[i]) / cfg.kind.d21
        x = rng.uniform(-2.0 * dmax, 2.0 * dmax, size=2)
        if min(np.linalg.norm(x - p) for p in pts) < 1e-3 * dmax:
            continue
        offset = rg.cross2(u, x - pts[i])
        if abs(offset) < 1e-3 * dmax:
            x = x - offset * np.array([-u[1], u[0]])  # project onto the line
            T = rg.forward3(cfg, x)
            rep = rg.classify3(cfg, T)
            assert abs(rep.quartic_or_quadric_residual) <= 1e-10
            assert rep.verdict == "Feasible" and rep.fiber == 1
            sol = rg.invert3_collinear(cfg, T)
            assert sol.kind == "One"
            assert float(np.max(np.abs(np.asarray(sol.points[0]) - x))) <= 1e-7 * dmax
        else:
            T = rg.forward3(cfg, x)
            rep = rg.classify3(cfg, T)
            assert abs(rep.quartic_or_quadric_residual) <= 1e-10
            assert rep.verdict == "Feasible" and rep.fiber == 2
            sol = rg.invert3_collinear(cfg, T)
            assert sol.kind == "Two"
            a, b = (np.asarray(p, float) for p in sol.points)
            err = min(np.max(np.abs(a - x)), np.max(np.abs(b - x)))
            assert err <= 1e-7 * dmax
            # mirrored pair: midpoint on the receiver line, difference normal
            assert abs(rg.cross2(u, 0.5 * (a + b) - pts[i])) <= 1e-9 * dmax
            assert abs(float((a - b) @ u)) <= 1e-9 * dmax

    # the quartic collapses to the square of the compatibility quadric
    rng2 = np.random.default_rng(616)
    for k in range(100):
        cfg = _random_collinear(rng2)
        assert float(rg.collinear_degeneration_check(cfg)) <= 1e-12


@_criterion(7, "shape-parameter surface: residuals, round trips, invalid parameter rejection")
def test_criterion_7_parameter_space():
    rng = np.random.default_rng(707)
    for k in range(10_000):
        cfg = _random_triangle(rng)
        assert abs(rg.cayley_residual(*rg.abc_from_config(cfg))) <= 1e-12

    def side_lengths(c):
        return sorted(
            float(np.linalg.norm(np.asarray(c.m(b)) - np.asarray(c.m(a))))
            for a, b in ((1, 2), (1, 3), (2, 3))
        )

    for k in range(1000):
        cfg = _random_triangle(rng)
        p = rg.param_from_config(cfg)
        cfg2 = rg.config_from_param(p)
        diff = np.max(np.abs(np.array(side_lengths(cfg)) - np.array(side_lengths(cfg2))))
        assert diff <= 1e-9 * p.scale

    for bad in (
        dict(a=1.0, c=0.2),
        dict(a=-1.0, c=0.2),
        dict(a=0.2, c=1.0),
        dict(a=0.2, c=-1.0),
        dict(a=0.5, c=-0.5),
        dict(a=-0.2, c=0.1),
    ):
        try:
            rg.ParamPoint(**bad)
        except rg.InvalidParam:
            continue
        raise AssertionError(f"ParamPoint accepted invalid {bad}")


@_criterion(8, "spatial model: mirror pairs across the receiver plane, solid inequality, circle fibers")
def test_criterion_8_spatial():
    rng = np.random.default_rng(808)
    for k in range(1000):
        cfg = _random_triangle(rng, dim=3)
        pts = [np.asarray(p, float) for p in cfg.receivers]
        n = np.cross(pts[1] - pts[0], pts[2] - pts[0])
        n /= np.linalg.norm(n)
        x = pts[0] + rng.uniform(-1.5, 1.5, size=3) * cfg.d_max
        height = float((x - pts[0]) @ n)
        T = rg.forward3d(cfg, x)
        rep = rg.classify3d_r3(cfg, T)
        assert rep.normalized <= 1e-9  # the solid inequality on the image
        if abs(height) < 1e-3 * cfg.d_max:
            continue
        if abs(height) >= 0.05 * cfg.d_max:
            assert rep.normalized < -1e-9
        sol = rg.invert3d_r3(cfg, T)
        assert sol.kind == "Pair"
        a, b = (np.asarray(p, float) for p in sol.points)
        assert abs(float((0.5 * (a + b) - pts[0]) @ n)) <= 1e-9 * cfg.d_max
        diff = a - b
        assert float(np.linalg.norm(diff - (diff @ n) * n)) <= 1e-9 * cfg.d_max
        err = min(np.max(np.abs(a - x)), np.max(np.abs(b - x)))
        assert err <= 1e-8 * cfg.d_max

    # equality exactly on the receiver plane
    for k in range(500):
        cfg = _random_triangle(rng, dim=3)
        pts = [np.asarray(p, float) for p in cfg.receivers]
        x = pts[0] + rng.uniform(-1.5, 1.5) * (pts[1] - pts[0]) + rng.uniform(-1.5, 1.5) * (
            pts[2] - pts[0]
        )
        rep = rg.classify3d_r3(cfg, rg.forward3d(cfg, x))
        assert abs(rep.normalized) <= 1e-9

    # circle fibers sampled at 16 angles: two receivers, then collinear three
    pair3d = rg.validate_config([(0.0, 0.0, 0.0), (1.0, 0.0, 0.0)])
    T = rg.forward3d(pair3d, (0.3, 0.4, 0.5))
    sol = rg.invert3d_r2(pair3d, T)
    assert sol.kind == "Circle"
    on = sol.circle.points(16)
    assert np.max(np.abs(pair3d.distances(on) - T)) <= 1e-9
    col3d = rg.validate_config([(0.0, 0.0, 0.0), (1.0, 0.0, 0.0), (0.5, 0.0, 0.0)])
    T = rg.forward3d(col3d, (0.3, 0.4, 0.5))
    sol = rg.invert3d_r3_collinear(col3d, T)
    assert sol.kind == "Circle"
    on = sol.circle.points(16)
    assert np.max(np.abs(col3d.distances(on) - T)) <= 1e-9


@_criterion(9, "range differences: projection, inversion, fibers vs brute force, tangency, roots")
def test_criterion_9_tdoa():
    rng = np.random.default_rng(909)
    # the projection discards the common offset exactly
    for s in range(20):
        cfg = _random_triangle(rng)
        xs = rng.uniform(-2.0 * cfg.d_max, 2.0 * cfg.d_max, size=(500, 2))
        gap = rg.project_pi(rg.forward3(cfg, xs)) - rg.tau_map(cfg, xs)
        assert np.max(np.abs(gap)) <= 1e-12

    # inversion recovers the source
    for k in range(10_000):
        cfg = _random_triangle(rng)
        x = rng.uniform(-2.0 * cfg.d_max, 2.0 * cfg.d_max, size=2)
        if min(np.linalg.norm(x - np.asarray(p, float)) for p in cfg.receivers) < 1e-2 * cfg.d_max:
            continue
        sol = rg.invert_tdoa(cfg, rg.tau_map(cfg, x))
        assert sol.kind in ("One", "Two")
        err = min(float(np.max(np.abs(np.asarray(p) - x))) for p in sol.points)
        assert err <= 1e-8 * cfg.d_max

    # fiber counts against a brute-force sweep oracle on 200 sampled points
    configs = [RIGHT] + [_random_triangle(np.random.default_rng(990 + s), lo=-1.5, hi=1.5) for s in range(2)]
    rng2 = np.random.default_rng(919)
    checked = 0
    per_config = 200 // len(configs) + 1
    fibers_seen = set()
    for cfg in configs:
        dmax = cfg.d_max
        pts = [np.asarray(p, float) for p in cfg.receivers]
        u13 = pts[0] - pts[2]
        u13 /= np.linalg.norm(u13)
        tangency = list(rg.tangency_points(cfg).values())
        done, trials = 0, 0
        while done < per_config and trials < 5000:
            trials += 1
            mode = rng2.integers(3)
            if mode == 0:
                x = rng2.uniform(-2.0 * dmax, 2.0 * dmax, size=2)
            elif mode == 1:
                x = pts[rng2.integers(3)] + rng2.uniform(-0.05, 0.05, size=2) * dmax
            else:
                tau = rng2.uniform(-1.2, 1.2, size=2) * dmax
                if rg.p2_membership(cfg, tau).verdict != "Outside":
                    continue
                assert rg.classify_tau(cfg, tau).fiber == 0
                assert brute_fiber(cfg, tau) == 0
                fibers_seen.add(0)
                done += 1
                checked += 1
                continue
            # the sweep oracle degenerates for sources on the 1-3 receiver axis
            if abs(rg.cross2(u13, x - pts[2])) < 0.05 * dmax:
                continue
            if min(np.linalg.norm(x - p) for p in pts) < 0.005 * dmax:
                continue
            tau = rg.tau_map(cfg, x)
            co = rg.tdoa_coeffs(cfg, tau)
            if abs(co.a) < 1e-3 * dmax ** 4 or abs(co.b) < 1e-3 * dmax ** 3:
                continue
            if any(np.max(np.abs(tau - tp)) < 0.05 * dmax for tp in tangency):
                continue
            fiber = rg.classify_tau(cfg, tau).fiber
            assert fiber in (1, 2)
            assert brute_fiber(cfg, tau) == fiber
            fibers_seen.add(fiber)
            done += 1
            checked += 1
    assert checked >= 200
    assert fibers_seen == {0, 1, 2}

    # six tangency points carry vanishing leading coefficient and discriminant
    for cfg in configs:
        tp = rg.tangency_points(cfg)
        assert set(tp) == set(rg.TANGENCY_IDS)
        for pt in tp.values():
            co = rg.tdoa_coeffs(cfg, pt)
            assert abs(co.a) <= 1e-10
            assert abs(co.b * co.b - co.a * co.c) <= 1e-10

    # root correspondence between the lifted quadratic and the cone quadratic
    cnt = 0
    rng3 = np.random.default_rng(929)
    for cfg in configs:
        for k in range(120):
            x = rng3.uniform(-2.0 * cfg.d_max, 2.0 * cfg.d_max, size=2)
            if min(np.linalg.norm(x - np.asarray(p, float)) for p in cfg.receivers) < 1e-2 * cfg.d_max:
                continue
            tau = rg.tau_map(cfg, x)
            co = rg.tdoa_coeffs(cfg, tau)
            if co.b * co.b - co.a * co.c < 1e-4 * cfg.d_max ** 8:
                continue  # double roots are covered by the tangency check
            A, B, C = rg.t_quadratic(cfg, tau)
            lam = np.roots([co.a, 2.0 * co.b, co.c])
            direct = np.roots([A, B, C])
            if not (np.all(np.isreal(lam)) and np.all(np.isreal(direct))):
                continue
            gap = np.max(np.abs(np.sort(-np.real(lam) * co.v_time) - np.sort(np.real(direct))))
            assert gap <= 1e-10
            cnt += 1
    assert cnt >= 200

    # collinear image: interior doubles, vertex rays with infinite fibers
    rng4 = np.random.default_rng(939)
    for s in range(3):
        cfg = _random_collinear(rng4)
        pts = [np.asarray(p, float) for p in cfg.receivers]
        i, j, mid = cfg.kind.order
        u = (pts[j] - pts[i]) / cfg.kind.d21
        x = pts[i] + rng4.uniform(-1.0, 2.0) * cfg.kind.d21 * u + 0.4 * cfg.d_max * np.array(
            [-u[1], u[0]]
        )
        reg = rg.classify_tau(cfg, rg.tau_map(cfg, x))
        assert reg.label == "CollinearInterior" and reg.fiber == 2
        assert np.max(np.abs(reg.lift - rg.forward3(cfg, x))) <= 1e-9 * cfg.d_max
        for rec, rid in ((i, "R1"), (j, "R2")):
            reg_v = rg.classify_tau(cfg, rg.tau_map(cfg, pts[rec]))
            assert reg_v.label == "VertexRay"
            assert reg_v.fiber == math.inf
            assert rid in reg_v.ids
        reg_m = rg.classify_tau(cfg, rg.tau_map(cfg, pts[mid]))
        assert reg_m.label == "BoundaryArc"
        edge_mid = 0.5 * (rg.tau_map(cfg, pts[i]) + rg.tau_map(cfg, pts[j]))
        assert rg.classify_tau(cfg, edge_mid).label == "OutsideIm"


@_criterion(10, "command line: golden outputs, sampled-surface residuals, determinism")
def test_criterion_10_cli():
    for name, argv in CLI_CASES.items():
        code1, out1 = _run(argv)
        code2, out2 = _run(argv)
        assert code1 == 0 and code2 == 0
        assert out1 == out2
        assert out1 == _golden_path(name).read_text(encoding="utf-8"), name

    # surface-sample residuals against direct evaluation
    text = _golden_path("surface_sample_grid").read_text(encoding="utf-8")
    lines = text.strip().split("\n")
    assert lines[0] == "x,y,T1,T2,T3,K"
    rows = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
    assert np.max(np.abs(rows[:, 2:5] - rg.forward3(RIGHT, rows[:, :2]))) <= 1e-10
    assert np.max(np.abs(rows[:, 5] - rg.gaussian_curvature(RIGHT, rows[:, :2]))) <= 1e-10

    # byte-identical across processes and thread counts
    for name in ("localize_toa_feasible", "surface_sample_grid"):
        outs = []
        for threads in ("1", "4"):
            env = dict(os.environ)
            env.update(
                OMP_NUM_THREADS=threads,
                OPENBLAS_NUM_THREADS=threads,
                MKL_NUM_THREADS=threads,
            )
            proc = subprocess.run(
                [sys.executable, "-m", "rangegeom.cli", *CLI_CASES[name]],
                capture_output=True,
                text=True,
                env=env,
            )
            assert proc.returncode == 0
            outs.append(proc.stdout)
        assert outs[0] == outs[1] == _golden_path(name).read_text(encoding="utf-8")
