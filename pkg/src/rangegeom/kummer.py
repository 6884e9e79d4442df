"""The range surface of three planar receivers: a Kummer-type quartic.

The image of the three-receiver range map x -> (T1, T2, T3) lies on a quartic
surface with 16 nodes and 16 trope planes (a tetrahedroid: a Kummer quartic
with extra symmetry).  This module exposes the surface algebraically:

* quartic_residual / homogeneous_form - the defining polynomial, raw and in
  rescaled coordinates where the coefficients are the three cosine parameters
  (a, b, c) of the receiver triangle;
* nodes_and_tropes - the 16 nodes (4 ideal, 3 receiver images, 9 further
  affine double points) and the 16 tangent trope planes, self-dual in the
  rescaled coordinates;
* conic_arc - the 12 labeled conics along which the tropes touch the surface;
  their preimages are the receiver lines (segments and outward rays) and the
  circumcircle, i.e. exactly the zero-curvature locus of the image;
* tangent_cone - the quadric cone of the surface at any node;
* gaussian_curvature - curvature of the image surface at a source position;
* q3_membership - the feasible polyhedron (facets = the 12 labeled tropes);
* hull_boundary_classify - the boundary decomposition of the convex hull of
  the image: four positively curved surface regions plus flat fills across
  the bounded arcs and strips along the unbounded ones;
* collinear_degeneration_check - as the receivers become collinear the
  quartic degenerates into d21^2 times the square of the Stewart quadric.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import SensorConfig, _canonical_collinear
from .errors import (
    DegenerateConfig,
    DimensionMismatch,
    NotANode,
    NotCollinear,
    NotOnBoundary,
    UnknownLabel,
)

_RTOL = 1e-9

ARC_LABELS = (
    "r10", "r1+", "r1-",
    "r20", "r2+", "r2-",
    "r30", "r3+", "r3-",
    "Gamma1", "Gamma2", "Gamma3",
)

Q3_FACETS = (
    "r30", "r3-", "r3+",
    "r20", "r2-", "r2+",
    "r10", "r1-", "r1+",
    "Gamma3", "Gamma2", "Gamma1",
)

# Facets that survive the collinear degeneration (in canonical labels:
# receivers 1, 2 are the endpoints, receiver 3 the middle).
Q3_FACETS_COLLINEAR = ("r30", "r2-", "r1-", "Gamma3")

HULL_COMPONENTS = (
    "V0", "V1", "V2", "V3",
    "F_123", "F_213", "F_312",
    "G_123", "G_213", "G_312",
    "L1+", "L1-", "L2+", "L2-", "L3+", "L3-",
)


def _require_triangle(config: SensorConfig) -> None:
    if config.n != 3:
        raise DimensionMismatch("expected a three-receiver configuration")
    if config.dimension != 2:
        raise DimensionMismatch("expected planar receivers")


def _require_general(config: SensorConfig) -> None:
    _require_triangle(config)
    if config.is_collinear:
        raise DegenerateConfig(
            "collinear receivers: the quartic degenerates (see "
            "collinear_degeneration_check)"
        )


def _abc(config: SensorConfig) -> tuple:
    """Cosine parameters of the triangle: a = cos(angle at m3),
    b = -cos(angle at m2), c = cos(angle at m1)."""
    a = float(config.vec(3, 1) @ config.vec(3, 2)) / (config.d31 * config.d32)
    b = float(config.vec(2, 1) @ config.vec(3, 2)) / (config.d21 * config.d32)
    c = float(config.vec(2, 1) @ config.vec(3, 1)) / (config.d21 * config.d31)
    return a, b, c


# ---------------------------------------------------------------------------
# polynomial-in-T helpers (terms: exponent triple -> coefficient)

def _poly_eval(terms: dict, T: np.ndarray) -> np.ndarray:
    T = np.asarray(T, dtype=float)
    out = np.zeros(T.shape[:-1])
    for (e1, e2, e3), coeff in terms.items():
        out = out + coeff * T[..., 0] ** e1 * T[..., 1] ** e2 * T[..., 2] ** e3
    return out


def _poly_mul(p: dict, q: dict) -> dict:
    out = {}
    for ep, cp in p.items():
        for eq, cq in q.items():
            key = (ep[0] + eq[0], ep[1] + eq[1], ep[2] + eq[2])
            out[key] = out.get(key, 0.0) + cp * cq
    return out


def _quartic_terms(config: SensorConfig) -> dict:
    """Coefficients of the defining quartic (no general-position gate)."""
    d21v, d31v, d32v = config.vec(2, 1), config.vec(3, 1), config.vec(3, 2)
    # squared lengths from dot products (not norm-then-square) keep the
    # coefficients exact on exactly-representable receiver coordinates
    g21, g31, g32 = float(d21v @ d21v), float(d31v @ d31v), float(d32v @ d32v)
    p12 = float(d21v @ d31v)   # d21 . d31
    p13 = float(d21v @ d32v)   # d21 . d32
    p23 = float(d31v @ d32v)   # d31 . d32
    return {
        (4, 0, 0): g32,
        (0, 4, 0): g31,
        (0, 0, 4): g21,
        (2, 2, 0): -2.0 * p23,
        (2, 0, 2): 2.0 * p13,
        (0, 2, 2): -2.0 * p12,
        (2, 0, 0): -2.0 * p12 * g32,
        (0, 2, 0): 2.0 * p13 * g31,
        (0, 0, 2): -2.0 * p23 * g21,
        (0, 0, 0): g21 * g31 * g32,
    }


def quartic_residual(config: SensorConfig, T, normalized: bool = False):
    """Value of the defining quartic at range triple(s) T.

    Zero exactly on the range surface.  With normalized=True the value is
    divided by d_max^6, making it scale-free (the polynomial has total length
    degree six).  Raises DegenerateConfig for collinear receivers.
    """
    _require_general(config)
    T = np.asarray(T, dtype=float)
    if T.shape[-1] != 3:
        raise DimensionMismatch("expected range triples with last axis 3")
    val = _poly_eval(_quartic_terms(config), T)
    if normalized:
        val = val / config.d_max ** 6
    if val.ndim == 0:
        return float(val)
    return val


# ---------------------------------------------------------------------------
# homogeneous (rescaled) form

@dataclass(frozen=True, eq=False)
class HomogeneousForm:
    """The quartic in rescaled homogeneous coordinates.

    t = (t0, t1, t2, t3) with t1 = T1/s1, t2 = T2/s2, t3 = T3/s3, t0 = 1 on
    the affine chart; the scales are s1 = sqrt(d21 d31), s2 = sqrt(d21 d32),
    s3 = sqrt(d31 d32).  In these coordinates

        F(t) = sum t_i^4 - 2a (t1^2 t2^2 + t0^2 t3^2)
                          + 2b (t1^2 t3^2 + t0^2 t2^2)
                          - 2c (t2^2 t3^2 + t0^2 t1^2)

    and the affine quartic equals kappa * F with kappa = d21^2 d31^2 d32^2.
    """

    abc: tuple
    scales: tuple
    kappa: float

    def embed(self, T) -> np.ndarray:
        """Affine chart embedding (T1,T2,T3) -> (1, T1/s1, T2/s2, T3/s3)."""
        T = np.asarray(T, dtype=float)
        s1, s2, s3 = self.scales
        return np.stack(
            [np.ones(T.shape[:-1]), T[..., 0] / s1, T[..., 1] / s2, T[..., 2] / s3],
            axis=-1,
        )

    def evaluate(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        a, b, c = self.abc
        sq = t * t
        quads = (
            sq[..., 1] * sq[..., 2] + sq[..., 0] * sq[..., 3],
            sq[..., 1] * sq[..., 3] + sq[..., 0] * sq[..., 2],
            sq[..., 2] * sq[..., 3] + sq[..., 0] * sq[..., 1],
        )
        val = np.sum(sq * sq, axis=-1) - 2 * a * quads[0] + 2 * b * quads[1] - 2 * c * quads[2]
        if val.ndim == 0:
            return float(val)
        return val

    def gradient(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        a, b, c = self.abc
        t0, t1, t2, t3 = t[..., 0], t[..., 1], t[..., 2], t[..., 3]
        g0 = 4 * t0 ** 3 - 4 * a * t0 * t3 ** 2 + 4 * b * t0 * t2 ** 2 - 4 * c * t0 * t1 ** 2
        g1 = 4 * t1 ** 3 - 4 * a * t1 * t2 ** 2 + 4 * b * t1 * t3 ** 2 - 4 * c * t0 ** 2 * t1
        g2 = 4 * t2 ** 3 - 4 * a * t1 ** 2 * t2 + 4 * b * t0 ** 2 * t2 - 4 * c * t2 * t3 ** 2
        g3 = 4 * t3 ** 3 - 4 * a * t0 ** 2 * t3 + 4 * b * t1 ** 2 * t3 - 4 * c * t2 ** 2 * t3
        return np.stack([g0, g1, g2, g3], axis=-1)

    def hessian(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float).reshape(4)
        a, b, c = self.abc
        t0, t1, t2, t3 = t
        H = np.zeros((4, 4))
        H[0, 0] = 12 * t0 ** 2 - 4 * a * t3 ** 2 + 4 * b * t2 ** 2 - 4 * c * t1 ** 2
        H[1, 1] = 12 * t1 ** 2 - 4 * a * t2 ** 2 + 4 * b * t3 ** 2 - 4 * c * t0 ** 2
        H[2, 2] = 12 * t2 ** 2 - 4 * a * t1 ** 2 + 4 * b * t0 ** 2 - 4 * c * t3 ** 2
        H[3, 3] = 12 * t3 ** 2 - 4 * a * t0 ** 2 + 4 * b * t1 ** 2 - 4 * c * t2 ** 2
        H[0, 1] = H[1, 0] = -8 * c * t0 * t1
        H[0, 2] = H[2, 0] = 8 * b * t0 * t2
        H[0, 3] = H[3, 0] = -8 * a * t0 * t3
        H[1, 2] = H[2, 1] = -8 * a * t1 * t2
        H[1, 3] = H[3, 1] = 8 * b * t1 * t3
        H[2, 3] = H[3, 2] = -8 * c * t2 * t3
        return H


def homogeneous_form(config: SensorConfig) -> HomogeneousForm:
    """Rescaled homogeneous quartic (see HomogeneousForm)."""
    _require_general(config)
    d21, d31, d32 = config.d21, config.d31, config.d32
    scales = (math.sqrt(d21 * d31), math.sqrt(d21 * d32), math.sqrt(d31 * d32))
    kappa = (d21 * d31 * d32) ** 2
    return HomogeneousForm(abc=_abc(config), scales=scales, kappa=kappa)


# ---------------------------------------------------------------------------
# nodes and tropes

@dataclass(frozen=True, eq=False)
class Node:
    """A double point of the quartic.

    label       : family + sign pair, e.g. "f2+-"
    homogeneous : rescaled coordinates (t0, t1, t2, t3), first nonzero +
    affine      : (T1, T2, T3) for affine nodes, None for ideal ones
    kind        : "ideal" | "receiver" | "affine"
    receiver    : receiver index 1..3 for receiver-image nodes, else None
    """

    label: str
    homogeneous: np.ndarray
    affine: object
    kind: str
    receiver: object


@dataclass(frozen=True, eq=False)
class Trope:
    """A tangent plane touching the quartic along a conic.

    Self-dual to a node: the plane coefficients in rescaled coordinates are
    the node's homogeneous coordinates.  `label` is the conic-arc label for
    the 12 tropes meeting the closed image, None for the remaining 4.
    """

    label: object
    node_label: str
    homogeneous: np.ndarray
    affine: np.ndarray


_TROPE_TAG = {
    "f1": {(1, 1): None, (1, -1): "Gamma3", (-1, 1): "Gamma2", (-1, -1): "Gamma1"},
    "f2": {(1, 1): None, (-1, -1): "r10", (1, -1): "r1+", (-1, 1): "r1-"},
    "f3": {(1, 1): None, (-1, -1): "r20", (-1, 1): "r2-", (1, -1): "r2+"},
    "f4": {(1, 1): None, (-1, -1): "r30", (-1, 1): "r3-", (1, -1): "r3+"},
}


@dataclass(frozen=True, eq=False)
class NodesAndTropes:
    nodes: tuple
    tropes: tuple

    def node(self, label: str) -> Node:
        for n in self.nodes:
            if n.label == label:
                return n
        raise UnknownLabel(f"no node labeled {label!r}")

    def trope(self, label: str) -> Trope:
        for t in self.tropes:
            if t.label == label or t.node_label == label:
                return t
        raise UnknownLabel(f"no trope labeled {label!r}")


def nodes_and_tropes(config: SensorConfig) -> NodesAndTropes:
    """The 16 nodes and 16 tropes of the range quartic.

    Nodes come in four families of four (sign choices e2, e3 = +-1):

        f1 : (0, sqrt(d32),    e2 sqrt(d31), e3 sqrt(d21))   ideal
        f2 : (sqrt(d32), 0,    e2 sqrt(d21), e3 sqrt(d31))   T1 = 0
        f3 : (sqrt(d31), e2 sqrt(d21), 0,    e3 sqrt(d32))   T2 = 0
        f4 : (sqrt(d21), e2 sqrt(d31), e3 sqrt(d32), 0)      T3 = 0

    The all-plus affine nodes are the receiver images (0,d21,d31),
    (d21,0,d32), (d31,d32,0).  Each trope plane has the coordinates of its
    node (the configuration is self-dual); the 12 tropes supporting the
    feasible polyhedron carry the matching conic-arc label.
    """
    _require_general(config)
    form = homogeneous_form(config)
    s1, s2, s3 = form.scales
    r21, r31, r32 = math.sqrt(config.d21), math.sqrt(config.d31), math.sqrt(config.d32)

    def build(family, base, slots):
        out = []
        for e2 in (1, -1):
            for e3 in (1, -1):
                t = np.array(base, dtype=float)
                t[slots[0]] *= e2
                t[slots[1]] *= e3
                t.setflags(write=False)
                label = f"{family}{'+' if e2 > 0 else '-'}{'+' if e3 > 0 else '-'}"
                if family == "f1":
                    affine, kind, receiver = None, "ideal", None
                else:
                    Tpt = np.array(
                        [s1 * t[1] / t[0], s2 * t[2] / t[0], s3 * t[3] / t[0]]
                    )
                    Tpt.setflags(write=False)
                    affine = Tpt
                    if e2 == 1 and e3 == 1:
                        kind = "receiver"
                        receiver = {"f2": 1, "f3": 2, "f4": 3}[family]
                    else:
                        kind, receiver = "affine", None
                out.append(
                    Node(label=label, homogeneous=t, affine=affine, kind=kind,
                         receiver=receiver)
                )
        return out

    nodes = []
    nodes += build("f1", (0.0, r32, r31, r21), (2, 3))
    nodes += build("f2", (r32, 0.0, r21, r31), (2, 3))
    nodes += build("f3", (r31, r21, 0.0, r32), (1, 3))
    nodes += build("f4", (r21, r31, r32, 0.0), (1, 2))

    tropes = []
    for n in nodes:
        family = n.label[:2]
        signs = (1 if n.label[2] == "+" else -1, 1 if n.label[3] == "+" else -1)
        # Affine plane: substitute t = (1, T1/s1, T2/s2, T3/s3) and clear the
        # scales; normalize so the first nonzero T coefficient is positive.
        p = n.homogeneous
        aff = np.array([p[0], p[1] / s1, p[2] / s2, p[3] / s3])
        lead = next(x for x in aff[1:] if abs(x) > 0.0)
        aff = aff / abs(lead) * (1.0 if lead > 0 else -1.0)
        aff.setflags(write=False)
        tropes.append(
            Trope(label=_TROPE_TAG[family][signs], node_label=n.label,
                  homogeneous=p, affine=aff)
        )
    return NodesAndTropes(nodes=tuple(nodes), tropes=tuple(tropes))


# ---------------------------------------------------------------------------
# conic arcs

@dataclass(frozen=True, eq=False)
class ConicArc:
    """One of the 12 conics where a trope touches the quartic.

    plane     : (c0, c1, c2, c3) with c0 + c1 T1 + c2 T2 + c3 T3 = 0
    quadratic : polynomial terms cutting the conic inside the plane
    bounded   : segment/circumcircle arcs are bounded, ray arcs are not
    endpoints : receiver-image endpoints (two if bounded, one if not)
    direction : ideal direction (1,1,1) for unbounded arcs, else None
    The preimage under the range map is a receiver segment, an outward ray,
    or a circumcircle arc; sample_sources/sample expose it.
    """

    label: str
    plane: np.ndarray
    quadratic: dict
    bounded: bool
    endpoints: tuple
    direction: object
    _config: SensorConfig

    def sample_sources(self, n: int = 64, extent: float = 3.0) -> np.ndarray:
        """Source positions whose images trace the arc."""
        cfg = self._config
        lbl = self.label
        if lbl.startswith("Gamma"):
            i = int(lbl[-1])
            j, k = [t for t in (1, 2, 3) if t != i]
            o, R = _circumcircle(cfg)
            ang = [math.atan2(*(cfg.m(t) - o)[::-1]) for t in (1, 2, 3)]
            th_j, th_k, th_i = ang[j - 1], ang[k - 1], ang[i - 1]
            # sweep from m_j to m_k counterclockwise, unless that passes m_i
            span = (th_k - th_j) % (2 * math.pi)
            rel_i = (th_i - th_j) % (2 * math.pi)
            if rel_i < span:
                th_j, span = th_k, 2 * math.pi - span
            ts = np.linspace(0.0, span, n)
            return o + R * np.stack([np.cos(th_j + ts), np.sin(th_j + ts)], axis=-1)
        i = int(lbl[1])
        if lbl[2] == "0":
            j, k = [t for t in (1, 2, 3) if t != i]
            ts = np.linspace(0.0, 1.0, n)[:, None]
            return cfg.m(j) * (1 - ts) + cfg.m(k) * ts
        # ray arcs: start receiver moving directly away from the other one
        start = {"r1+": (2, 3), "r1-": (3, 2), "r2+": (1, 3), "r2-": (3, 1),
                 "r3+": (1, 2), "r3-": (2, 1)}[lbl]
        p, q = cfg.m(start[0]), cfg.m(start[1])
        u = (p - q) / float(np.linalg.norm(p - q))
        ts = np.linspace(0.0, extent * cfg.d_max, n)[:, None]
        return p + ts * u

    def sample(self, n: int = 64, extent: float = 3.0) -> np.ndarray:
        """Range triples along the arc."""
        return self._config.distances(self.sample_sources(n=n, extent=extent))


def _circumcircle(config: SensorConfig) -> tuple:
    """Circumcenter and circumradius of the receiver triangle."""
    m1, m2, m3 = config.receivers
    A = 2.0 * np.stack([m2 - m1, m3 - m1])
    rhs = np.array([float(m2 @ m2 - m1 @ m1), float(m3 @ m3 - m1 @ m1)])
    o = np.linalg.solve(A, rhs)
    return o, float(np.linalg.norm(m1 - o))


def _arc_table(config: SensorConfig) -> dict:
    """Planes and quadratics of the 12 conic arcs."""
    a, b, c = _abc(config)
    d21, d31, d32 = config.d21, config.d31, config.d32
    N1 = np.array([0.0, d21, d31])
    N2 = np.array([d21, 0.0, d32])
    N3 = np.array([d31, d32, 0.0])
    one = np.ones(3)

    def arc(label, plane, quad, bounded, endpoints):
        return dict(label=label, plane=np.array(plane, dtype=float), quadratic=quad,
                    bounded=bounded, endpoints=endpoints,
                    direction=None if bounded else one)

    return {
        # bounded arcs over the receiver segments
        "r30": arc("r30", (-d21, 1, 1, 0),
                   {(2, 0, 0): 1.0, (0, 0, 2): -1.0, (1, 0, 0): -2 * c * d31,
                    (0, 0, 0): d31 * d31},
                   True, (N1, N2)),
        "r20": arc("r20", (-d31, 1, 0, 1),
                   {(2, 0, 0): 1.0, (0, 2, 0): -1.0, (1, 0, 0): -2 * c * d21,
                    (0, 0, 0): d21 * d21},
                   True, (N1, N3)),
        "r10": arc("r10", (-d32, 0, 1, 1),
                   {(2, 0, 0): 1.0, (0, 2, 0): -1.0, (0, 1, 0): -2 * b * d21,
                    (0, 0, 0): -d21 * d21},
                   True, (N2, N3)),
        # unbounded arcs over the outward rays
        "r3-": arc("r3-", (-d21, 1, -1, 0),
                   {(0, 2, 0): 1.0, (0, 0, 2): -1.0, (0, 1, 0): -2 * b * d32,
                    (0, 0, 0): d32 * d32},
                   False, (N2,)),
        "r3+": arc("r3+", (-d21, -1, 1, 0),
                   {(0, 2, 0): 1.0, (0, 0, 2): -1.0, (0, 1, 0): 2 * b * d32,
                    (0, 0, 0): d32 * d32},
                   False, (N1,)),
        "r2-": arc("r2-", (-d31, 1, 0, -1),
                   {(0, 2, 0): -1.0, (0, 0, 2): 1.0, (0, 0, 1): 2 * a * d32,
                    (0, 0, 0): d32 * d32},
                   False, (N3,)),
        "r2+": arc("r2+", (-d31, -1, 0, 1),
                   {(0, 2, 0): -1.0, (0, 0, 2): 1.0, (0, 0, 1): -2 * a * d32,
                    (0, 0, 0): d32 * d32},
                   False, (N1,)),
        "r1-": arc("r1-", (-d32, 0, 1, -1),
                   {(2, 0, 0): -1.0, (0, 0, 2): 1.0, (0, 0, 1): 2 * a * d31,
                    (0, 0, 0): d31 * d31},
                   False, (N3,)),
        "r1+": arc("r1+", (-d32, 0, -1, 1),
                   {(2, 0, 0): -1.0, (0, 0, 2): 1.0, (0, 0, 1): -2 * a * d31,
                    (0, 0, 0): d31 * d31},
                   False, (N2,)),
        # circumcircle arcs
        "Gamma3": arc("Gamma3", (0, d32, d31, -d21),
                      {(2, 0, 0): 1.0, (0, 2, 0): 1.0, (1, 1, 0): 2 * a,
                       (0, 0, 0): -d21 * d21},
                      True, (N1, N2)),
        "Gamma2": arc("Gamma2", (0, d32, -d31, d21),
                      {(2, 0, 0): 1.0, (0, 2, 0): 1.0, (1, 1, 0): -2 * a,
                       (0, 0, 0): -d21 * d21},
                      True, (N1, N3)),
        "Gamma1": arc("Gamma1", (0, -d32, d31, d21),
                      {(2, 0, 0): 1.0, (0, 2, 0): 1.0, (1, 1, 0): -2 * a,
                       (0, 0, 0): -d21 * d21},
                      True, (N2, N3)),
    }


def conic_arc(config: SensorConfig, label: str) -> ConicArc:
    """The labeled conic arc (see ARC_LABELS for the 12 valid labels)."""
    _require_general(config)
    table = _arc_table(config)
    if label not in table:
        raise UnknownLabel(f"unknown arc label {label!r}; valid: {ARC_LABELS}")
    data = table[label]
    for pt in data["endpoints"]:
        pt.setflags(write=False)
    data["plane"].setflags(write=False)
    return ConicArc(_config=config, **data)


# ---------------------------------------------------------------------------
# tangent cones at nodes

@dataclass(frozen=True, eq=False)
class TangentCone:
    """Quadric cone of the quartic at a node (vertex at the node).

    matrix is the Hessian of the rescaled quartic at the node, scaled to unit
    max-absolute entry; evaluate takes rescaled 4-vectors, evaluate_affine
    takes range triples.
    """

    node: Node
    matrix: np.ndarray
    form: HomogeneousForm

    def evaluate(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        val = np.einsum("...i,ij,...j->...", t, self.matrix, t)
        if val.ndim == 0:
            return float(val)
        return val

    def evaluate_affine(self, T) -> np.ndarray:
        return self.evaluate(self.form.embed(T))


def tangent_cone(config: SensorConfig, node) -> TangentCone:
    """Tangent cone at a node, given by Node, label, affine point, or 4-vector.

    Raises NotANode when the input matches none of the 16 nodes.
    """
    _require_general(config)
    nat = nodes_and_tropes(config)
    target = None
    if isinstance(node, Node):
        node = node.label
    if isinstance(node, str):
        try:
            target = nat.node(node)
        except UnknownLabel:
            raise NotANode(f"no node labeled {node!r}")
    else:
        v = np.asarray(node, dtype=float).reshape(-1)
        if v.shape[0] == 3:
            for cand in nat.nodes:
                if cand.affine is not None and (
                    np.linalg.norm(v - cand.affine) <= 1e-6 * config.d_max
                ):
                    target = cand
                    break
        elif v.shape[0] == 4:
            vn = v / np.linalg.norm(v)
            for cand in nat.nodes:
                pn = cand.homogeneous / np.linalg.norm(cand.homogeneous)
                if min(np.linalg.norm(vn - pn), np.linalg.norm(vn + pn)) <= 1e-6:
                    target = cand
                    break
        else:
            raise DimensionMismatch("node must be a label, a 3-vector, or a 4-vector")
        if target is None:
            raise NotANode("point does not match any node of the quartic")
    form = homogeneous_form(config)
    H = form.hessian(target.homogeneous)
    H = H / np.max(np.abs(H))
    H.setflags(write=False)
    return TangentCone(node=target, matrix=H, form=form)


# ---------------------------------------------------------------------------
# curvature of the image surface

def gaussian_curvature(config: SensorConfig, x):
    """Gaussian curvature of the range surface at the image of x.

    Vanishes exactly on the receiver lines and the circumcircle (whose images
    are the 12 conic arcs) and is undefined at the receivers themselves
    (NaN there: the image has a node).  Scales as 1/length^2.
    """
    _require_general(config)
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != 2:
        raise DimensionMismatch("expected planar points")
    d1 = x - config.m(1)
    d2 = x - config.m(2)
    d3 = x - config.m(3)

    def cr(u, v):
        return u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]

    h1, h2, h3 = cr(d2, d3), cr(d3, d1), cr(d1, d2)
    q1 = np.sum(d1 * d1, axis=-1)
    q2 = np.sum(d2 * d2, axis=-1)
    q3 = np.sum(d3 * d3, axis=-1)
    num = h1 * h2 * h3 * (q1 * h1 + q2 * h2 + q3 * h3)
    den = (q1 * h1 ** 2 + q2 * h2 ** 2 + q3 * h3 ** 2) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        K = np.where(den > 0.0, num / np.where(den > 0.0, den, 1.0), np.nan)
    tol = (_RTOL * config.d_max) ** 2
    at_receiver = np.minimum(np.minimum(q1, q2), q3) <= tol * 1e-6
    K = np.where(at_receiver, np.nan, K)
    if K.ndim == 0:
        return float(K)
    return K


# ---------------------------------------------------------------------------
# feasible polyhedron

@dataclass(frozen=True)
class Q3Report:
    """Membership in the feasible polyhedron.

    residuals : facet id -> signed slack (>= 0 means the inequality holds)
    verdict   : "Interior" | "OnFacet" | "Outside"
    active    : facet ids with |slack| within tolerance
    """

    residuals: dict
    verdict: str
    active: tuple


def _q3_residuals_general(config: SensorConfig, T1, T2, T3) -> dict:
    d21, d31, d32 = config.d21, config.d31, config.d32
    return {
        "r30": T1 + T2 - d21,
        "r3-": d21 - (T1 - T2),
        "r3+": d21 - (T2 - T1),
        "r20": T1 + T3 - d31,
        "r2-": d31 - (T1 - T3),
        "r2+": d31 - (T3 - T1),
        "r10": T2 + T3 - d32,
        "r1-": d32 - (T2 - T3),
        "r1+": d32 - (T3 - T2),
        "Gamma3": d32 * T1 + d31 * T2 - d21 * T3,
        "Gamma2": d32 * T1 - d31 * T2 + d21 * T3,
        "Gamma1": -d32 * T1 + d31 * T2 + d21 * T3,
    }


def q3_membership(config: SensorConfig, T, rtol: float = _RTOL) -> Q3Report:
    """Classify a range triple against the feasible polyhedron.

    General position: 12 facets, one per labeled trope.  Collinear triple:
    the polyhedron degenerates to 4 facets (canonical labels: endpoints are
    receivers 1 and 2, middle is 3); T is taken in the original receiver
    order and relabeled internally.
    """
    _require_triangle(config)
    T = np.asarray(T, dtype=float).reshape(-1)
    if T.shape[0] != 3:
        raise DimensionMismatch(f"expected 3 ranges, got {T.shape[0]}")
    tol_lin = rtol * config.d_max
    tol_quad = rtol * config.d_max ** 2

    if config.is_collinear:
        kind = config.kind
        Tc = T[list(kind.order)]
        d21 = kind.d21
        d31 = kind.rho * d21          # endpoint-1 to middle
        d32 = (1.0 - kind.rho) * d21  # endpoint-2 to middle
        residuals = {
            "r30": Tc[0] + Tc[1] - d21,
            "r2-": d31 - (Tc[0] - Tc[2]),
            "r1-": d32 - (Tc[1] - Tc[2]),
            "Gamma3": d32 * Tc[0] + d31 * Tc[1] - d21 * Tc[2],
        }
        tols = {"r30": tol_lin, "r2-": tol_lin, "r1-": tol_lin, "Gamma3": tol_quad}
    else:
        residuals = _q3_residuals_general(config, float(T[0]), float(T[1]), float(T[2]))
        tols = {k: (tol_quad if k.startswith("Gamma") else tol_lin) for k in residuals}

    residuals = {k: float(v) for k, v in residuals.items()}
    active = tuple(k for k, v in residuals.items() if abs(v) <= tols[k])
    if any(v < -tols[k] for k, v in residuals.items()):
        verdict = "Outside"
    elif active:
        verdict = "OnFacet"
    else:
        verdict = "Interior"
    return Q3Report(residuals=residuals, verdict=verdict, active=active)


# ---------------------------------------------------------------------------
# convex hull boundary of the image

@dataclass(frozen=True)
class HullComponent:
    """A boundary component of the convex hull of the range surface.

    name    : "V0".."V3" (positively curved surface regions), "F_ijk"
              (circumcircle-arc fills), "G_ijk" (segment-arc fills),
              "Li+"/"Li-" (unbounded strips), or "UnboundedEdgei"
    in_hull : False only for the three ideal edges, which the hull omits
    details : diagnostic values used by the classification
    """

    name: str
    in_hull: bool
    details: dict


def hull_boundary_classify(config: SensorConfig, T, rtol: float = _RTOL) -> HullComponent:
    """Name the hull-boundary component containing a range triple.

    Raises NotOnBoundary for points outside the feasible polyhedron, strictly
    inside the hull, or on a facet plane but beyond its fill region.
    """
    from .toa3 import invert3

    _require_general(config)
    T = np.asarray(T, dtype=float).reshape(-1)
    if T.shape[0] != 3:
        raise DimensionMismatch(f"expected 3 ranges, got {T.shape[0]}")
    d_max = config.d_max
    tol_lin = rtol * d_max
    tol_quad = rtol * d_max ** 2
    a, b, c = _abc(config)
    d21, d31, d32 = config.d21, config.d31, config.d32
    N = {1: np.array([0.0, d21, d31]), 2: np.array([d21, 0.0, d32]),
         3: np.array([d31, d32, 0.0])}

    # 1) ideal edges from the receiver-image nodes along (1,1,1)
    for i in (1, 2, 3):
        diff = T - N[i]
        t = float(np.mean(diff))
        if np.max(np.abs(diff - t)) <= tol_lin and t >= -tol_lin:
            return HullComponent(
                name=f"UnboundedEdge{i}", in_hull=False,
                details={"node": i, "parameter": t},
            )

    q3 = q3_membership(config, T, rtol=rtol)
    if q3.verdict == "Outside":
        raise NotOnBoundary("point lies outside the feasible polyhedron")

    # 2) on the quartic: positively curved surface regions V0..V3
    if abs(quartic_residual(config, T, normalized=True)) <= 1e-9:
        sols = invert3(config, T, rtol=1e-5)
        if sols.points:
            x = sols.points[0]
            m1, m2, m3 = config.receivers
            sgn = math.copysign(
                1.0, float((m2 - m1)[0] * (m3 - m1)[1] - (m2 - m1)[1] * (m3 - m1)[0])
            )

            def cr(u, v):
                return float(u[0] * v[1] - u[1] * v[0])

            d1, d2, d3 = x - m1, x - m2, x - m3
            h = np.array([cr(d2, d3), cr(d3, d1), cr(d1, d2)]) * sgn
            circ = float((d1 @ d1) * h[0] + (d2 @ d2) * h[1] + (d3 @ d3) * h[2])
            h_tol = rtol * d_max ** 2
            circ_tol = rtol * d_max ** 4
            neg = [i for i in range(3) if h[i] < -h_tol]
            details = {"source": x, "h": h, "circumcircle": circ}
            if not neg and circ >= -circ_tol:
                return HullComponent(name="V0", in_hull=True, details=details)
            if len(neg) == 1 and circ <= circ_tol:
                return HullComponent(name=f"V{neg[0] + 1}", in_hull=True, details=details)
        raise NotOnBoundary(
            "point is on the range surface but in a negatively curved region "
            "(interior of the hull)"
        )

    if q3.verdict != "OnFacet":
        raise NotOnBoundary("point is strictly inside the feasible polyhedron, off the surface")

    # 3) flat fills on the active facet planes (F over circumcircle arcs,
    #    G over segment arcs, L strips along ray arcs)
    T1, T2, T3 = float(T[0]), float(T[1]), float(T[2])

    def inside_F(name):
        if name == "Gamma3":
            quad = T1 * T1 + T2 * T2 + 2 * a * T1 * T2 - d21 * d21
            chord = T1 + T2 - d21
            chord_tol = tol_lin
        elif name == "Gamma2":
            quad = T1 * T1 + T2 * T2 - 2 * a * T1 * T2 - d21 * d21
            chord = (d21 - d32) * T1 + d31 * T2 - d21 * d31
            chord_tol = tol_quad
        else:  # Gamma1
            quad = T1 * T1 + T2 * T2 - 2 * a * T1 * T2 - d21 * d21
            chord = d32 * T1 - (d31 - d21) * T2 - d21 * d32
            chord_tol = tol_quad
        return (
            T1 >= -tol_lin and T2 >= -tol_lin
            and quad <= tol_quad and chord >= -chord_tol
        )

    def inside_G(name):
        if name == "r30":
            s, off = T1, T3
            span, curve_c, curve_d = d21, c * d31, d31
            lo, hi = d31, d32
        elif name == "r20":
            s, off = T1, T2
            span, curve_c, curve_d = d31, c * d21, d21
            lo, hi = d21, d32
        else:  # r10
            s, off = T2, T1
            span, curve_c, curve_d = d32, -b * d21, d21
            lo, hi = d21, d31
        if not (-tol_lin <= s <= span + tol_lin):
            return False
        curve = math.sqrt(max(s * s - 2 * curve_c * s + curve_d * curve_d, 0.0))
        chord = lo + (hi - lo) * s / span
        return curve - tol_lin <= off <= chord + tol_lin

    def inside_L(name):
        table = {
            "r1+": (T2, T1, -b * d21, d21, d21),
            "r1-": (T3, T1, a * d31, d31, d31),
            "r2+": (T1, T2, c * d21, d21, d21),
            "r2-": (T3, T2, a * d32, d32, d32),
            "r3+": (T1, T3, c * d31, d31, d31),
            "r3-": (T2, T3, -b * d32, d32, d32),
        }
        s, off, curve_c, curve_d, edge_c = table[name]
        if s < -tol_lin:
            return False
        curve = math.sqrt(max(s * s + 2 * curve_c * s + curve_d * curve_d, 0.0))
        return curve - tol_lin <= off <= s + edge_c + tol_lin

    fill_name = {
        "Gamma1": "F_123", "Gamma2": "F_213", "Gamma3": "F_312",
        "r10": "G_123", "r20": "G_213", "r30": "G_312",
        "r1+": "L1+", "r1-": "L1-", "r2+": "L2+", "r2-": "L2-",
        "r3+": "L3+", "r3-": "L3-",
    }
    order = ["Gamma1", "Gamma2", "Gamma3", "r10", "r20", "r30",
             "r1+", "r1-", "r2+", "r2-", "r3+", "r3-"]
    for facet in order:
        if facet not in q3.active:
            continue
        if facet.startswith("Gamma"):
            ok = inside_F(facet)
        elif facet.endswith("0"):
            ok = inside_G(facet)
        else:
            ok = inside_L(facet)
        if ok:
            return HullComponent(
                name=fill_name[facet], in_hull=True,
                details={"facet": facet, "q3": q3.residuals},
            )
    raise NotOnBoundary("point is on a facet plane but outside its fill region")


# ---------------------------------------------------------------------------
# collinear degeneration

def _collinear_structure(config: SensorConfig) -> tuple:
    """(order, rho, d21) via the dot test; tolerant of near-collinearity."""
    pts = list(config.receivers)
    dists = {}
    for i in range(3):
        for j in range(i + 1, 3):
            dists[(i, j)] = float(np.linalg.norm(pts[j] - pts[i]))
    res = _canonical_collinear(pts, dists)
    if res is None:
        raise NotCollinear(
            "no middle receiver (all angles acute); configuration is far from collinear"
        )
    return res


def _sigma_terms(config: SensorConfig) -> tuple:
    """Stewart quadric terms in canonical labels, plus (order, rho, d21)."""
    order, rho, d21 = _collinear_structure(config)
    terms = {
        (2, 0, 0): 1.0 - rho,
        (0, 2, 0): rho,
        (0, 0, 2): -1.0,
        (0, 0, 0): -rho * (1.0 - rho) * d21 * d21,
    }
    return terms, order, rho, d21


def _sigma_squared_terms(config: SensorConfig) -> dict:
    """d21^2 * sigma^2 as polynomial terms in the ORIGINAL receiver labels."""
    terms, order, _, d21 = _sigma_terms(config)
    sq = _poly_mul(terms, terms)
    out = {}
    for exp, coeff in sq.items():
        orig = [0, 0, 0]
        for pos in range(3):
            orig[order[pos]] = exp[pos]
        out[tuple(orig)] = coeff * d21 * d21
    return out


def collinear_degeneration_check(
    config: SensorConfig, n: int = 512, seed: int = 0, box: float = 3.0
) -> float:
    """Max normalized gap between the quartic and d21^2 * (Stewart quadric)^2.

    Samples n range triples uniformly in [0, box*d21]^3 and returns
    max |quartic(T) - d21^2 sigma(T)^2| / d_max^6.  Exactly zero (to rounding)
    for collinear receivers, and small of order (offset/d21)^2 for nearly
    collinear ones.  Raises NotCollinear when no middle receiver exists.
    """
    _require_triangle(config)
    quartic = _quartic_terms(config)
    sigma_sq = _sigma_squared_terms(config)
    _, _, d_end = _collinear_structure(config)
    rng = np.random.default_rng(seed)
    T = rng.uniform(0.0, box * d_end, size=(n, 3))
    gap = _poly_eval(quartic, T) - _poly_eval(sigma_sq, T)
    return float(np.max(np.abs(gap)) / config.d_max ** 6)
