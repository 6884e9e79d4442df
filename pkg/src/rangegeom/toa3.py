"""Three-receiver range (TOA) geometry in the plane.

The forward map sends a source position to its three receiver distances
(T1, T2, T3).  For receivers in general position the image is a surface: the
intersection of a quartic with the feasible polyhedron, and the map is
injective there (fiber size 1).  For collinear receivers the image is cut out
by a quadric (a consequence of Stewart's relation) and the generic fiber is a
mirror pair across the receiver line (fiber size 2).

Inversion is linear once the squared-range differences are formed; the
reference receiver is chosen to minimize the condition number of the 2x2
system, and every candidate is verified against the forward map.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import CollinearTriple, SensorConfig
from .errors import AtReceiver, DegenerateConfig, DimensionMismatch, NotCollinear
from .spacetime import SpacetimeVec3, hodge_cross, lift, triple_form
from .toa2 import classify_pair

_RTOL = 1e-9
_AT_RECEIVER_RTOL = 1e-12


@dataclass(frozen=True)
class SolutionSet:
    """A finite set of localized source positions."""

    points: tuple

    @property
    def kind(self) -> str:
        return {0: "Empty", 1: "One", 2: "Two"}[len(self.points)]


@dataclass(frozen=True, eq=False)
class JacobianReport:
    """Differential of the range map at a point.

    matrix     : (n, dim) array of unit vectors from receivers to the point
    rank       : numerical rank
    degenerate : True when the differential drops rank (receiver-line points)
    """

    matrix: np.ndarray
    rank: int
    degenerate: bool


@dataclass(frozen=True, eq=False)
class FeasibilityReport:
    """Feasibility of a range triple for a three-receiver configuration.

    in_octant                  : all ranges nonnegative
    quartic_or_quadric_residual: normalized defining-polynomial value
                                 (quartic / d_max^6 in general position,
                                 quadric / d_max^2 for collinear receivers)
    q3                         : polyhedral membership report
    verdict                    : "Feasible" | "Infeasible"
    fiber                      : generic number of source points
    reason                     : None when feasible, else first failed test
    """

    in_octant: bool
    quartic_or_quadric_residual: float
    q3: object
    verdict: str
    fiber: int
    reason: object


def _require_three_planar(config: SensorConfig) -> None:
    if config.n != 3:
        raise DimensionMismatch("expected a three-receiver configuration")
    if config.dimension != 2:
        raise DimensionMismatch("expected planar receivers (use the 3D variants otherwise)")


def forward3(config: SensorConfig, x) -> np.ndarray:
    """Ranges (T1, T2, T3) from source position x."""
    _require_three_planar(config)
    return config.distances(x)


def jacobian3(config: SensorConfig, x) -> JacobianReport:
    """Differential of the range map: rows are unit vectors receiver -> x.

    Raises AtReceiver when x coincides with a receiver (the map is not
    differentiable there).  The differential drops rank exactly on the
    receiver line of a collinear configuration.
    """
    _require_three_planar(config)
    x = np.asarray(x, dtype=float).reshape(-1)
    d = config.distances(x)
    if np.min(d) <= _AT_RECEIVER_RTOL * config.d_max:
        raise AtReceiver(f"point coincides with receiver {int(np.argmin(d)) + 1}")
    rows = np.stack([(x - config.m(i)) / d[i - 1] for i in (1, 2, 3)])
    s = np.linalg.svd(rows, compute_uv=False)
    rank = int(np.sum(s > _RTOL * s[0]))
    return JacobianReport(matrix=rows, rank=rank, degenerate=rank < 2)


def exterior_point(config: SensorConfig, T, i: int = 1) -> SpacetimeVec3:
    """Spacetime solution of the two linearized range-difference equations.

    Returns the past-pointing spacetime vector (x, -T_i): the spatial
    intersection point x of the three range circles -- independent of the
    chosen reference index -- computed via the Lorentzian cross product of
    the lifted constraint normals, with time component -T_i.  Requires
    receivers in general position.
    """
    _require_three_planar(config)
    if config.is_collinear:
        raise DegenerateConfig("exterior point construction needs non-collinear receivers")
    if i not in (1, 2, 3):
        raise DimensionMismatch(f"receiver index must be 1, 2 or 3, got {i}")
    T = np.asarray(T, dtype=float).reshape(-1)
    if T.shape[0] != 3:
        raise DimensionMismatch(f"expected 3 ranges, got {T.shape[0]}")
    j, k = [t for t in (1, 2, 3) if t != i]
    dj = config.vec(j, i)
    dk = config.vec(k, i)
    Ti, Tj, Tk = float(T[i - 1]), float(T[j - 1]), float(T[k - 1])
    alpha = float(dj @ dj) + Ti * Ti - Tj * Tj
    beta = float(dk @ dk) + Ti * Ti - Tk * Tk
    w = alpha * dk - beta * dj
    e3 = np.array([0.0, 0.0, 1.0])
    denom = 2.0 * triple_form(lift(dj), lift(dk), e3)
    u = hodge_cross(lift(w), e3) / denom
    p = config.m(i) + u[:2]
    return SpacetimeVec3(x=float(p[0]), y=float(p[1]), t=-Ti)


def invert3(config: SensorConfig, T, rtol: float = _RTOL) -> SolutionSet:
    """Invert the three-receiver range map; empty when T is not realizable.

    Solves the linear system of squared-range differences with the
    best-conditioned reference receiver, then verifies the candidate against
    the forward map at relative tolerance rtol.
    """
    _require_three_planar(config)
    if config.is_collinear:
        raise DegenerateConfig(
            "collinear receivers: use invert3_collinear (mirror-pair fibers)"
        )
    T = np.asarray(T, dtype=float).reshape(-1)
    if T.shape[0] != 3:
        raise DimensionMismatch(f"expected 3 ranges, got {T.shape[0]}")

    best = None
    for i in (1, 2, 3):
        j, k = [t for t in (1, 2, 3) if t != i]
        M = np.stack([config.vec(j, i), config.vec(k, i)])
        c = np.linalg.cond(M)
        if best is None or c < best[0]:
            best = (c, i, j, k, M)
    _, i, j, k, M = best
    Ti, Tj, Tk = (float(T[t - 1]) for t in (i, j, k))
    alpha = float(M[0] @ M[0]) + Ti * Ti - Tj * Tj
    beta = float(M[1] @ M[1]) + Ti * Ti - Tk * Tk
    u = np.linalg.solve(M, 0.5 * np.array([alpha, beta]))
    x = config.m(i) + u
    if np.max(np.abs(config.distances(x) - T)) <= rtol * config.d_max:
        return SolutionSet(points=(x,))
    return SolutionSet(points=())


def collinear_quadric_residual(config: SensorConfig, T) -> float:
    """Stewart quadric value at T (canonical labels) for a collinear triple.

    Zero exactly on the cone swept by the range map; the sign is positive
    off the receiver line's reach (endpoint-weighted mean square exceeding
    the middle range square).
    """
    if not isinstance(config.kind, CollinearTriple):
        raise NotCollinear("quadric residual is defined for collinear triples only")
    kind = config.kind
    T = np.asarray(T, dtype=float).reshape(-1)
    if T.shape[0] != 3:
        raise DimensionMismatch(f"expected 3 ranges, got {T.shape[0]}")
    Tc = T[list(kind.order)]
    rho, d21 = kind.rho, kind.d21
    return float(
        (1.0 - rho) * Tc[0] ** 2
        + rho * Tc[1] ** 2
        - Tc[2] ** 2
        - rho * (1.0 - rho) * d21 * d21
    )


def invert3_collinear(config: SensorConfig, T, rtol: float = _RTOL) -> SolutionSet:
    """Invert the range map for collinear receivers (mirror-pair fibers).

    Checks the Stewart quadric compatibility first, then solves the
    two-endpoint problem: interior pairs give the mirror pair across the
    receiver line, boundary pairs the single on-line point.
    """
    _require_three_planar(config)
    if not isinstance(config.kind, CollinearTriple):
        raise NotCollinear("invert3_collinear requires a collinear configuration")
    T = np.asarray(T, dtype=float).reshape(-1)
    if T.shape[0] != 3:
        raise DimensionMismatch(f"expected 3 ranges, got {T.shape[0]}")
    kind = config.kind
    sigma = collinear_quadric_residual(config, T)
    if abs(sigma) > rtol * config.d_max**2:
        return SolutionSet(points=())

    Tc = np.asarray(T, dtype=float)[list(kind.order)]
    d21 = kind.d21
    cls = classify_pair(float(Tc[0]), float(Tc[1]), d21, rtol=rtol)
    if cls.verdict == "Outside":
        return SolutionSet(points=())
    e1 = config.receivers[kind.order[0]]
    e2 = config.receivers[kind.order[1]]
    u = (e2 - e1) / d21
    a = (d21 * d21 + Tc[0] ** 2 - Tc[1] ** 2) / (2.0 * d21)
    base = e1 + a * u
    if cls.verdict == "Boundary":
        return SolutionSet(points=(base,))
    h = float(np.sqrt(max(Tc[0] ** 2 - a * a, 0.0)))
    n = np.array([-u[1], u[0]])
    return SolutionSet(points=(base + h * n, base - h * n))


def classify3(config: SensorConfig, T, rtol: float = _RTOL) -> FeasibilityReport:
    """Feasibility of a range triple: octant, defining polynomial, polyhedron.

    General position: T is realizable iff it is nonnegative, lies on the
    quartic range surface, and sits inside the feasible polyhedron; the fiber
    is a single point.  Collinear receivers: the quartic degenerates to the
    square of the Stewart quadric; interior points of the (four-facet)
    polyhedron have mirror-pair fibers.
    """
    _require_three_planar(config)
    from .kummer import q3_membership, quartic_residual

    T = np.asarray(T, dtype=float).reshape(-1)
    if T.shape[0] != 3:
        raise DimensionMismatch(f"expected 3 ranges, got {T.shape[0]}")
    tol = rtol * config.d_max
    in_octant = bool(np.min(T) >= -tol)
    q3 = q3_membership(config, T, rtol=rtol)

    if config.is_collinear:
        residual = collinear_quadric_residual(config, T) / config.d_max**2
        on_surface = abs(residual) <= rtol
        fiber_interior = 2
    else:
        residual = quartic_residual(config, T, normalized=True)
        on_surface = abs(residual) <= rtol
        fiber_interior = 1

    if not in_octant:
        verdict, fiber, reason = "Infeasible", 0, "not in first octant"
    elif not on_surface:
        verdict, fiber, reason = "Infeasible", 0, "not on range surface"
    elif q3.verdict == "Outside":
        verdict, fiber, reason = "Infeasible", 0, "outside the feasible polyhedron"
    elif q3.verdict == "OnFacet":
        verdict, fiber, reason = "Feasible", 1, None
    else:
        verdict, fiber, reason = "Feasible", fiber_interior, None
    return FeasibilityReport(
        in_octant=in_octant,
        quartic_or_quadric_residual=float(residual),
        q3=q3,
        verdict=verdict,
        fiber=fiber,
        reason=reason,
    )
