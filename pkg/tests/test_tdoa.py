"""Range-difference model: projection, feasible regions, fibers, inversion."""
import math

import numpy as np
import pytest
from hypothesis import assume, given, settings

import rangegeom as rg

from conftest import away_from_receivers, collinear_triples, sources, triangles
from oracles import brute_fiber


def test_tau_map_pinned(right):
    tau = rg.tau_map(right, (0.3, 0.4))
    assert np.allclose(tau, [-0.1708203932499369, 0.1354053815799180], atol=1e-15)


def test_tau_map_batch(right):
    xs = np.array([[0.3, 0.4], [2.0, -1.0]])
    taus = rg.tau_map(right, xs)
    assert taus.shape == (2, 2)
    assert np.allclose(taus[0], rg.tau_map(right, xs[0]))


def test_projection_composition(right):
    xs = np.array([[0.3, 0.4], [2.0, -1.0], [-0.7, 0.2]])
    T = rg.forward3(right, xs)
    assert np.max(np.abs(rg.project_pi(T) - rg.tau_map(right, xs))) <= 1e-12


def test_pi_fiber_line(right):
    point, direction = rg.pi_fiber_line((0.25, -0.5))
    assert np.allclose(point, [0.25, -0.5, 0.0])
    assert np.allclose(direction, [1.0, 1.0, 1.0])
    # every point of the line projects to the same tau
    for t in (0.0, 0.7, 3.0):
        assert np.allclose(rg.project_pi(point + t * direction), [0.25, -0.5])


def test_p2_membership_names(right):
    rep = rg.p2_membership(right, (0.0, 0.0))
    assert set(rep.residuals) == set(rg.P2_FACETS)
    assert rep.verdict == "Interior"
    out = rg.p2_membership(right, (2.0, 0.0))
    assert out.verdict == "Outside"
    on = rg.p2_membership(right, (1.0, math.sqrt(2.0)))  # image of receiver 3
    assert on.verdict == "OnFacet"


def test_p2_collinear_drops_longest_pair(collinear_mid):
    rep = rg.p2_membership(collinear_mid, (0.0, 0.0))
    assert len(rep.residuals) == 4
    # the dropped pair is the endpoint separation tau1 - tau2 = +-d21 wall
    assert not any("tau2-tau1" in k for k in rep.residuals)


def test_coeffs_pinned(right):
    co = rg.tdoa_coeffs(right, (0.0, 0.0))
    assert abs(co.a + 1.0) <= 1e-12
    tau = rg.tau_map(right, (0.3, 0.4))
    co = rg.tdoa_coeffs(right, tau)
    assert abs(co.a + 0.8770461680797919) <= 1e-12


@given(triangles(), sources())
def test_coeffs_parity(cfg, x):
    tau = rg.tau_map(cfg, x)
    plus = rg.tdoa_coeffs(cfg, tau)
    minus = rg.tdoa_coeffs(cfg, -tau)
    scale3 = cfg.d_max ** 3
    scale4 = cfg.d_max ** 4
    assert abs(plus.a - minus.a) <= 1e-9 * scale4   # even
    assert abs(plus.b + minus.b) <= 1e-9 * scale3   # odd
    assert plus.c >= -1e-15                          # a squared norm


def test_coeffs_collinear_raises(collinear_mid):
    with pytest.raises(rg.DegenerateConfig):
        rg.tdoa_coeffs(collinear_mid, (0.1, 0.1))


def test_invert_recovers_pinned(right):
    tau = rg.tau_map(right, (0.3, 0.4))
    sol = rg.invert_tdoa(right, tau)
    assert sol.kind == "One"
    assert np.max(np.abs(sol.points[0] - [0.3, 0.4])) <= 1e-8


def test_invert_boundary_double_root(right):
    sol = rg.invert_tdoa(right, (-1.0, math.sqrt(2.0) - 2.0))
    assert sol.kind == "One"
    assert np.max(np.abs(sol.points[0] - [0.0, -1.0])) <= 1e-6


def test_invert_outside_empty(right):
    assert rg.invert_tdoa(right, (0.9, -0.8)).kind == "Empty"
    assert rg.invert_tdoa(right, (2.0, 0.0)).kind == "Empty"


@given(triangles(), sources())
def test_invert_round_trip(cfg, x):
    assume(away_from_receivers(cfg, x, margin=1e-2))
    tau = rg.tau_map(cfg, x)
    sol = rg.invert_tdoa(cfg, tau)
    assert sol.kind in ("One", "Two")
    err = min(float(np.max(np.abs(p - np.asarray(x)))) for p in sol.points)
    assert err <= 1e-8 * cfg.d_max
    for p in sol.points:
        assert np.max(np.abs(rg.tau_map(cfg, p) - tau)) <= 1e-8 * cfg.d_max


def test_classify_regions(right):
    # deep past region: one source
    reg = rg.classify_tau(right, rg.tau_map(right, (0.3, 0.4)))
    assert reg.label == "EMinus" and reg.fiber == 1
    # lens near each receiver image corner: two sources
    for i in (1, 2, 3):
        tau = rg.tau_map(right, right.m(i) + np.array([0.017, 0.011]))
        reg = rg.classify_tau(right, tau)
        assert reg.label == f"U_{i}" and reg.fiber == 2
    # outside the polyhedron: empty
    assert rg.classify_tau(right, (0.9, -0.8)).label == "OutsideIm"
    assert rg.classify_tau(right, (0.9, -0.8)).fiber == 0
    # mirrored lens: empty (the reflected corners are not in the image)
    tau_m = -rg.tau_map(right, right.m(1) + np.array([0.017, 0.011]))
    assert rg.classify_tau(right, tau_m).label == "OutsideIm"


def test_tangency_points(right):
    tp = rg.tangency_points(right)
    assert set(tp) == set(rg.TANGENCY_IDS)
    for tid, pt in tp.items():
        co = rg.tdoa_coeffs(right, pt)
        disc = co.b * co.b - co.a * co.c
        assert abs(co.a) <= 1e-10
        assert abs(co.b) <= 1e-10
        assert abs(disc) <= 1e-10
        assert rg.classify_tau(right, pt).label == "TangencyPoint"


@given(triangles())
def test_tangency_points_property(cfg):
    for pt in rg.tangency_points(cfg).values():
        co = rg.tdoa_coeffs(cfg, pt)
        scale4 = cfg.d_max ** 4
        assert abs(co.a) <= 1e-9 * scale4
        disc = co.b * co.b - co.a * co.c
        assert abs(disc) <= 1e-9 * scale4 * scale4 / cfg.d_max ** 2


def test_t_quadratic_matches_lift(right):
    for x in ((0.3, 0.4), (1.017, 0.011), (-0.4, 2.0)):
        tau = rg.tau_map(right, x)
        A, B, C = rg.t_quadratic(right, tau)
        d3 = float(np.linalg.norm(np.asarray(x) - right.m(3)))
        val = A * d3 * d3 + B * d3 + C
        scale = max(abs(A), abs(B), abs(C))
        assert abs(val) <= 1e-9 * scale
        # root correspondence with the null-cone quadratic
        co = rg.tdoa_coeffs(right, tau)
        lam = np.roots([co.a, 2.0 * co.b, co.c])
        if np.all(np.isreal(lam)):
            t_from = np.sort(-np.real(lam) * co.v_time)
            t_dir = np.sort(np.roots([A, B, C]).real)
            assert np.max(np.abs(t_from - t_dir)) <= 1e-10


@settings(max_examples=30)
@given(triangles(), sources(box=3.0))
def test_fiber_against_brute_oracle(cfg, x):
    assume(away_from_receivers(cfg, x, margin=2e-2))
    # the sweep oracle intersects circles about receivers 1 and 3, which
    # become tangent (and the root uncountable) for sources on their axis
    pts = [np.asarray(p, dtype=float) for p in cfg.receivers]
    u13 = pts[0] - pts[2]
    dist_line = abs(rg.cross2(u13 / np.linalg.norm(u13), np.asarray(x) - pts[2]))
    assume(dist_line >= 0.05 * cfg.d_max)
    tau = rg.tau_map(cfg, x)
    co = rg.tdoa_coeffs(cfg, tau)
    scale4 = cfg.d_max ** 4
    scale3 = cfg.d_max ** 3
    # stay away from the fold arcs and tangency points, where finite grids
    # and double roots make counting ambiguous
    assume(abs(co.a) >= 1e-3 * scale4)
    assume(abs(co.b) >= 1e-3 * scale3)
    for pt in rg.tangency_points(cfg).values():
        assume(np.max(np.abs(tau - pt)) >= 0.05 * cfg.d_max)
    reg = rg.classify_tau(cfg, tau)
    assert reg.fiber in (1, 2)
    assert brute_fiber(cfg, tau) == reg.fiber


def test_collinear_image_structure(collinear_mid):
    cfg = collinear_mid
    # off the line: two mirrored sources, lift matches the range triple
    tau = rg.tau_map(cfg, (0.3, 0.4))
    reg = rg.classify_tau(cfg, tau)
    assert reg.label == "CollinearInterior" and reg.fiber == 2
    assert np.max(np.abs(reg.lift - rg.forward3(cfg, (0.3, 0.4)))) <= 1e-9
    sol = rg.invert3_collinear(cfg, reg.lift)
    assert sol.kind == "Two"
    # endpoint vertex images carry infinite fibers (whole rays collapse)
    for i, rid in ((1, "R1"), (2, "R2")):
        reg_v = rg.classify_tau(cfg, rg.tau_map(cfg, cfg.m(i)))
        assert reg_v.label == "VertexRay"
        assert reg_v.fiber == math.inf
        assert rid in reg_v.ids
    # sources on the outer rays map to the endpoint vertex image
    tau_far = rg.tau_map(cfg, (-2.7, 0.0))
    assert np.max(np.abs(tau_far - rg.tau_map(cfg, cfg.m(1)))) <= 1e-12
    # middle receiver image is an ordinary boundary point
    reg_m = rg.classify_tau(cfg, rg.tau_map(cfg, cfg.m(3)))
    assert reg_m.label == "BoundaryArc" and reg_m.ids == ("R3",)
    # the open edge between the endpoint images is excluded
    mid = 0.5 * (rg.tau_map(cfg, cfg.m(1)) + rg.tau_map(cfg, cfg.m(2)))
    assert rg.classify_tau(cfg, mid).label == "OutsideIm"


@given(collinear_triples(), sources())
def test_collinear_tau_fibers(cfg, x):
    assume(away_from_receivers(cfg, x, margin=1e-2))
    x = np.asarray(x, dtype=float)
    i, j, _ = cfg.kind.order
    pts = [np.asarray(p, dtype=float) for p in cfg.receivers]
    u = (pts[j] - pts[i]) / cfg.kind.d21
    offset = abs(rg.cross2(u, x - pts[i]))
    assume(offset >= 1e-3 * cfg.d_max)
    tau = rg.tau_map(cfg, x)
    reg = rg.classify_tau(cfg, tau)
    assert reg.label == "CollinearInterior"
    assert reg.fiber == 2
    assert reg.lift is not None
    sol = rg.invert3_collinear(cfg, reg.lift)
    err = min(float(np.max(np.abs(p - x))) for p in sol.points)
    assert err <= 1e-7 * cfg.d_max


def test_tau_region_errors(right, pair):
    with pytest.raises(rg.DimensionMismatch):
        rg.tau_map(pair, (0.3, 0.4))
    with pytest.raises(rg.DimensionMismatch):
        rg.invert_tdoa(right, (0.1, 0.2, 0.3))
