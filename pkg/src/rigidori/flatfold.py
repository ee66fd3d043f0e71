"""Closed-form kinematics of Euclidean flat-foldable degree-4 vertices.

A Euclidean flat-foldable vertex has sectors (a, b, pi - a, pi - b). Its
configuration space consists of exactly two curves through the unfolded
state, the folding modes, which are linear in the half-angle tangents
t_i = tan(rho_i / 2):

    mode 1:  rho1 = rho3,  rho2 = -rho4,  t2 = -k1 * t1
    mode 2:  rho2 = rho4,  rho1 = -rho3,  t1 =  k2 * t2

with the mode constants

    k1 = cos((a + b) / 2) / cos((a - b) / 2)
    k2 = sin((a - b) / 2) / sin((a + b) / 2)

The crease-index placement of the two modes under the package convention
is fixed by the closure oracle (see tests/test_flatfold.py for the
regression anchor on the reference vertex).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateVertexError, InputError
from .numerics import DEFAULT_TOL, Tolerances
from .vertex import Curvature, FoldState, Vertex4, classify

MODE_1 = 1
MODE_2 = 2


@dataclass(frozen=True)
class ModeConstants:
    k1: float
    k2: float


def mode_constants(alpha: float, beta: float, tol: Tolerances = DEFAULT_TOL) -> ModeConstants:
    """Mode constants from the cosine/sine closed forms.

    The equivalent half-angle-tangent forms are k1 = (1 - ta*tb)/(1 + ta*tb)
    and k2 = (ta - tb)/(ta + tb) with ta = tan(alpha/2), tb = tan(beta/2);
    they are not used for evaluation.
    """
    if not (0.0 < alpha < math.pi and 0.0 < beta < math.pi):
        raise InputError("alpha and beta must lie in (0, pi)")
    den1 = math.cos(0.5 * (alpha - beta))
    den2 = math.sin(0.5 * (alpha + beta))
    if abs(den1) <= tol.angle_eps:
        raise DegenerateVertexError("k1 is singular: cos((alpha-beta)/2) vanishes")
    if abs(den2) <= tol.angle_eps:
        raise DegenerateVertexError("k2 is singular: sin((alpha+beta)/2) vanishes")
    return ModeConstants(
        k1=math.cos(0.5 * (alpha + beta)) / den1,
        k2=math.sin(0.5 * (alpha - beta)) / den2,
    )


def _coupled_angle(k: float, driver: float) -> float:
    """2*atan(k * tan(driver/2)) with the driver = +-pi limit handled."""
    if abs(abs(driver) - math.pi) < 1e-15:
        if k == 0.0:
            return 0.0
        return math.copysign(math.pi, k * driver)
    return 2.0 * math.atan(k * math.tan(0.5 * driver))


def fold_mode(
    v: Vertex4, mode: int, driver: float, tol: Tolerances = DEFAULT_TOL
) -> FoldState:
    """Fold state of a Euclidean flat-foldable vertex on one mode.

    Mode 1 is driven by rho1, mode 2 by rho2. A vanishing mode constant
    (k1 = 0 when alpha + beta = pi, k2 = 0 when alpha = beta) makes the
    coupled pair identically flat; the state is still returned.
    """
    cls = classify(v, tol)
    if cls.curvature is not Curvature.EUCLIDEAN or not cls.flat_foldable:
        raise InputError("fold_mode requires a Euclidean flat-foldable vertex")
    if not -math.pi <= driver <= math.pi:
        raise InputError("driver must lie in [-pi, pi]")
    k = mode_constants(v.alphas[0], v.alphas[1], tol)
    if mode == MODE_1:
        coupled = _coupled_angle(-k.k1, driver)
        return FoldState((driver, coupled, driver, -coupled))
    if mode == MODE_2:
        coupled = _coupled_angle(k.k2, driver)
        return FoldState((coupled, driver, -coupled, driver))
    raise InputError("mode must be 1 or 2")


def mode_driver_index(mode: int) -> int:
    """Crease index (1-based) that drives the given mode."""
    if mode == MODE_1:
        return 1
    if mode == MODE_2:
        return 2
    raise InputError("mode must be 1 or 2")
