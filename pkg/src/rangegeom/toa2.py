"""Two-receiver range (TOA) geometry in the plane.

With two receivers the range pair (T1, T2) is realizable exactly when it lies
in the polyhedral cone Q2 cut out by the triangle inequalities

    T1 + T2 >= d21,   |T1 - T2| <= d21,   T1, T2 >= 0.

Interior points have a two-point fiber (mirror pair across the receiver
baseline), boundary points a single point on the baseline, and exterior
points none.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import SensorConfig, TwoReceivers
from .errors import DimensionMismatch, Infeasible

_Q2_RTOL = 1e-9

# Facet identifiers, paired with slack expressions (slack >= 0 inside).
Q2_FACETS = ("T1+T2=d21", "T1-T2=d21", "T2-T1=d21")


@dataclass(frozen=True)
class Q2Class:
    """Membership report for the two-receiver feasible cone Q2.

    verdict   : "Interior" | "Boundary" | "Outside"
    residuals : facet id -> signed slack (>= 0 means satisfied)
    active    : facet ids with |slack| within tolerance
    fiber     : generic number of source points (2 interior, 1 boundary, 0 outside)
    """

    verdict: str
    residuals: dict
    active: tuple
    fiber: int


def forward2(config: SensorConfig, x) -> np.ndarray:
    """Ranges (T1, T2) from source position x."""
    _require_two(config)
    return config.distances(x)


def q2_residuals(T1: float, T2: float, d21: float) -> dict:
    """Signed slacks of the three Q2 facets (nonnegative iff inside)."""
    return {
        "T1+T2=d21": T1 + T2 - d21,
        "T1-T2=d21": d21 - (T1 - T2),
        "T2-T1=d21": d21 - (T2 - T1),
    }


def classify_pair(T1: float, T2: float, d21: float, rtol: float = _Q2_RTOL) -> Q2Class:
    """Classify a range pair against Q2 for baseline length d21.

    Shared by the planar two-receiver solver and by slice tests elsewhere
    (any two ranges plus the distance between their receivers form a Q2).
    """
    tol = rtol * d21
    if min(T1, T2) < -tol:
        res = q2_residuals(T1, T2, d21)
        return Q2Class(verdict="Outside", residuals=res, active=(), fiber=0)
    res = q2_residuals(T1, T2, d21)
    worst = min(res.values())
    active = tuple(k for k in Q2_FACETS if abs(res[k]) <= tol)
    if worst < -tol:
        return Q2Class(verdict="Outside", residuals=res, active=active, fiber=0)
    if active:
        return Q2Class(verdict="Boundary", residuals=res, active=active, fiber=1)
    return Q2Class(verdict="Interior", residuals=res, active=active, fiber=2)


def classify2(config: SensorConfig, T, rtol: float = _Q2_RTOL) -> Q2Class:
    """Classify a range pair for a two-receiver configuration."""
    _require_two(config)
    T = np.asarray(T, dtype=float).reshape(-1)
    if T.shape[0] != 2:
        raise DimensionMismatch(f"expected 2 ranges, got {T.shape[0]}")
    return classify_pair(float(T[0]), float(T[1]), config.d21, rtol=rtol)


def invert2(config: SensorConfig, T, rtol: float = _Q2_RTOL) -> tuple:
    """Source positions realizing ranges (T1, T2); raises Infeasible outside Q2.

    Interior pairs return the mirror pair of intersection points of the two
    range circles; boundary pairs return the single point on the baseline.
    """
    _require_two(config)
    if config.dimension != 2:
        raise DimensionMismatch("two-receiver inversion requires planar receivers")
    T = np.asarray(T, dtype=float).reshape(-1)
    if T.shape[0] != 2:
        raise DimensionMismatch(f"expected 2 ranges, got {T.shape[0]}")
    T1, T2 = float(T[0]), float(T[1])
    cls = classify2(config, T, rtol=rtol)
    if cls.verdict == "Outside":
        raise Infeasible("range pair outside the feasible cone", residuals=cls.residuals)

    d21 = config.d21
    u = config.vec(2, 1) / d21  # unit vector along the baseline
    a = (d21 * d21 + T1 * T1 - T2 * T2) / (2.0 * d21)
    h2 = T1 * T1 - a * a
    base = config.m(1) + a * u
    if cls.verdict == "Boundary":
        return (base,)
    h = float(np.sqrt(max(h2, 0.0)))
    n = np.array([-u[1], u[0]])
    return (base + h * n, base - h * n)


def _require_two(config: SensorConfig) -> None:
    if not isinstance(config.kind, TwoReceivers):
        raise DimensionMismatch("expected a two-receiver configuration")
