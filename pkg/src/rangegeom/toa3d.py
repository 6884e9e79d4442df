"""Range (TOA) localization with receivers in three-dimensional space.

Two receivers see a source on the intersection of two spheres: generically a
circle around the baseline.  Three non-collinear receivers see a mirror pair
across their plane; the feasible region in range space is the solid side of
the same quartic that cuts the range surface in the planar problem (its sign
tells the two-point / one-point / empty fiber apart).  Three collinear
receivers again give circles around the receiver line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import CollinearTriple, SensorConfig, TwoReceivers
from .errors import DegenerateConfig, DimensionMismatch, Infeasible, NotCollinear
from .kummer import _poly_eval, _quartic_terms
from .toa2 import classify_pair
from .toa3 import SolutionSet  # noqa: F401  (re-exported companion type)

_RTOL = 1e-9


def _circle_frame(axis: np.ndarray) -> tuple:
    """Orthonormal (u, v) spanning the plane normal to axis (deterministic)."""
    k = int(np.argmin(np.abs(axis)))
    e = np.zeros(3)
    e[k] = 1.0
    u = e - float(e @ axis) * axis
    u = u / np.linalg.norm(u)
    v = np.cross(axis, u)
    return u, v


@dataclass(frozen=True, eq=False)
class Circle3D:
    """A circle in space: center, radius, unit axis, and an in-plane frame."""

    center: np.ndarray
    radius: float
    axis: np.ndarray
    u: np.ndarray
    v: np.ndarray

    def point(self, theta: float) -> np.ndarray:
        return self.center + self.radius * (
            math.cos(theta) * self.u + math.sin(theta) * self.v
        )

    def points(self, n: int = 64) -> np.ndarray:
        th = np.linspace(0.0, 2 * math.pi, n, endpoint=False)
        return (
            self.center
            + self.radius
            * (np.cos(th)[:, None] * self.u + np.sin(th)[:, None] * self.v)
        )


def make_circle(center, radius: float, axis) -> Circle3D:
    axis = np.asarray(axis, dtype=float)
    axis = axis / np.linalg.norm(axis)
    u, v = _circle_frame(axis)
    return Circle3D(
        center=np.asarray(center, dtype=float), radius=float(radius),
        axis=axis, u=u, v=v,
    )


@dataclass(frozen=True, eq=False)
class SolutionSet3D:
    """Solutions of a spatial range problem: points, or a whole circle."""

    points: tuple = ()
    circle: object = None

    @property
    def kind(self) -> str:
        if self.circle is not None:
            return "Circle"
        return {0: "Empty", 1: "One", 2: "Pair"}[len(self.points)]


@dataclass(frozen=True)
class Feasibility3DReport:
    """Feasibility of a range triple for three receivers in space.

    The quartic that defines the planar range surface here separates space:
    negative values are strictly realizable (mirror pair through the receiver
    plane), zero is the surface itself (source on the receiver plane), and
    positive values are unreachable.
    """

    quartic: float
    normalized: float
    verdict: str
    fiber: int


def _require_3d(config: SensorConfig, n: int) -> None:
    if config.dimension != 3:
        raise DimensionMismatch("expected receivers in 3D")
    if config.n != n:
        raise DimensionMismatch(f"expected {n} receivers, got {config.n}")


def forward3d(config: SensorConfig, x) -> np.ndarray:
    """Ranges from a spatial source position (two or three receivers)."""
    if config.dimension != 3:
        raise DimensionMismatch("expected receivers in 3D")
    return config.distances(x)


def invert3d_r2(config: SensorConfig, T, rtol: float = _RTOL) -> SolutionSet3D:
    """Two spheres: a circle around the baseline, a point on it, or nothing."""
    _require_3d(config, 2)
    if not isinstance(config.kind, TwoReceivers):
        raise DimensionMismatch("expected a two-receiver configuration")
    T = np.asarray(T, dtype=float).reshape(-1)
    if T.shape[0] != 2:
        raise DimensionMismatch(f"expected 2 ranges, got {T.shape[0]}")
    T1, T2 = float(T[0]), float(T[1])
    d21 = config.d21
    cls = classify_pair(T1, T2, d21, rtol=rtol)
    if cls.verdict == "Outside":
        return SolutionSet3D()
    u = config.vec(2, 1) / d21
    a = (d21 * d21 + T1 * T1 - T2 * T2) / (2.0 * d21)
    base = config.m(1) + a * u
    if cls.verdict == "Boundary":
        return SolutionSet3D(points=(base,))
    h = math.sqrt(max(T1 * T1 - a * a, 0.0))
    return SolutionSet3D(circle=make_circle(base, h, u))


def classify3d_r3(config: SensorConfig, T, rtol: float = _RTOL) -> Feasibility3DReport:
    """Sign of the quartic sorts spatial range triples into fibers 2 / 1 / 0."""
    _require_3d(config, 3)
    if config.is_collinear:
        raise DegenerateConfig(
            "collinear receivers: use invert3d_r3_collinear (circle fibers)"
        )
    T = np.asarray(T, dtype=float).reshape(-1)
    if T.shape[0] != 3:
        raise DimensionMismatch(f"expected 3 ranges, got {T.shape[0]}")
    raw = float(_poly_eval(_quartic_terms(config), T))
    normalized = raw / config.d_max ** 6
    if float(np.min(T)) < -rtol * config.d_max:
        verdict, fiber = "Outside", 0
    elif abs(normalized) <= rtol:
        verdict, fiber = "OnSurface", 1
    elif normalized < 0.0:
        verdict, fiber = "InteriorSolid", 2
    else:
        verdict, fiber = "Outside", 0
    return Feasibility3DReport(
        quartic=raw, normalized=normalized, verdict=verdict, fiber=fiber
    )


def invert3d_r3(config: SensorConfig, T, rtol: float = _RTOL) -> SolutionSet3D:
    """Three spheres, non-collinear centers: a mirror pair or its collapse.

    Raises Infeasible when the triple is off the feasible solid.
    """
    _require_3d(config, 3)
    if config.is_collinear:
        raise DegenerateConfig(
            "collinear receivers: use invert3d_r3_collinear (circle fibers)"
        )
    T = np.asarray(T, dtype=float).reshape(-1)
    if T.shape[0] != 3:
        raise DimensionMismatch(f"expected 3 ranges, got {T.shape[0]}")
    report = classify3d_r3(config, T, rtol=rtol)
    if report.verdict == "Outside":
        raise Infeasible(
            "range triple is not realizable in space",
            residuals={"quartic": report.quartic, "normalized": report.normalized},
        )
    d21v, d31v = config.vec(2, 1), config.vec(3, 1)
    T1, T2, T3 = (float(t) for t in T)
    alpha = float(d21v @ d21v) + T1 * T1 - T2 * T2
    beta = float(d31v @ d31v) + T1 * T1 - T3 * T3
    Q, R = np.linalg.qr(np.stack([d21v, d31v], axis=1))
    w = np.linalg.solve(R.T, 0.5 * np.array([alpha, beta]))
    u_pl = Q @ w
    if report.verdict == "OnSurface":
        return SolutionSet3D(points=(config.m(1) + u_pl,))
    n = np.cross(d21v, d31v)
    n = n / np.linalg.norm(n)
    h = math.sqrt(max(T1 * T1 - float(u_pl @ u_pl), 0.0))
    return SolutionSet3D(
        points=(config.m(1) + u_pl + h * n, config.m(1) + u_pl - h * n)
    )


def invert3d_r3_collinear(config: SensorConfig, T, rtol: float = _RTOL) -> SolutionSet3D:
    """Three spheres with collinear centers: circles around the receiver line.

    Stewart-incompatible or infeasible triples give an empty set (no errors);
    boundary triples give the single on-line point.
    """
    _require_3d(config, 3)
    if not isinstance(config.kind, CollinearTriple):
        raise NotCollinear("invert3d_r3_collinear requires a collinear configuration")
    T = np.asarray(T, dtype=float).reshape(-1)
    if T.shape[0] != 3:
        raise DimensionMismatch(f"expected 3 ranges, got {T.shape[0]}")
    kind = config.kind
    Tc = T[list(kind.order)]
    rho, d21 = kind.rho, kind.d21
    sigma = (
        (1.0 - rho) * Tc[0] ** 2
        + rho * Tc[1] ** 2
        - Tc[2] ** 2
        - rho * (1.0 - rho) * d21 * d21
    )
    if abs(sigma) > rtol * config.d_max ** 2:
        return SolutionSet3D()
    cls = classify_pair(float(Tc[0]), float(Tc[1]), d21, rtol=rtol)
    if cls.verdict == "Outside":
        return SolutionSet3D()
    e1 = config.receivers[kind.order[0]]
    e2 = config.receivers[kind.order[1]]
    u = (e2 - e1) / d21
    a = (d21 * d21 + Tc[0] ** 2 - Tc[1] ** 2) / (2.0 * d21)
    base = e1 + a * u
    if cls.verdict == "Boundary":
        return SolutionSet3D(points=(base,))
    h = math.sqrt(max(Tc[0] ** 2 - a * a, 0.0))
    return SolutionSet3D(circle=make_circle(base, h, u))
