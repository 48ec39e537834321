"""Analytic constrained test problems with published optima.

Every problem is written as minimize f(x) subject to g_j(x) >= 0. Sources
that state constraints as g(x) <= 0 are negated. A problem is only registered
after its best-known point reproduces the published optimum.
"""

import logging
import math
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import brentq

from gsdo.exceptions import UnknownProblemError
from gsdo.models import ConstraintKind, ProblemInfo, Scenario
from gsdo.services.problem import ConstraintDef, ProblemSpec, relabel

logger = logging.getLogger(__name__)

OPTIMUM_RTOL = 1e-3
VIOLATION_ATOL = 1e-3

VectorConstraints = Callable[[np.ndarray], np.ndarray]


def _split(constraints: VectorConstraints, m: int) -> Tuple[ConstraintDef, ...]:
    """One QRSK ConstraintDef per component of a vector-valued constraint function."""

    def component(j: int):
        return lambda x: float(constraints(x)[j])

    return tuple(
        ConstraintDef(kind=ConstraintKind.QRSK, evaluator=component(j), name=f"g{j + 1}")
        for j in range(m)
    )


def _spec(
    name: str,
    lower: Sequence[float],
    upper: Sequence[float],
    objective: Callable[[np.ndarray], float],
    constraints: VectorConstraints,
    m: int,
    f_star: float,
    x_star: Optional[Sequence[float]],
    source: str,
) -> ProblemSpec:
    return ProblemSpec(
        name=name,
        lower=tuple(float(v) for v in lower),
        upper=tuple(float(v) for v in upper),
        objective=objective,
        constraints=_split(constraints, m),
        known_optimum=f_star,
        best_known_x=None if x_star is None else tuple(float(v) for v in x_star),
        source=source,
    )


# ==================== G-suite ====================

def _g1() -> ProblemSpec:
    def f(x):
        return 5 * np.sum(x[:4]) - 5 * np.sum(x[:4] ** 2) - np.sum(x[4:])

    def g(x):
        return -np.array(
            [
                2 * x[0] + 2 * x[1] + x[9] + x[10] - 10,
                2 * x[0] + 2 * x[2] + x[9] + x[11] - 10,
                2 * x[1] + 2 * x[2] + x[10] + x[11] - 10,
                -8 * x[0] + x[9],
                -8 * x[1] + x[10],
                -8 * x[2] + x[11],
                -2 * x[3] - x[4] + x[9],
                -2 * x[5] - x[6] + x[10],
                -2 * x[7] - x[8] + x[11],
            ]
        )

    return _spec(
        "G1", [0] * 13, [1] * 9 + [100] * 3 + [1], f, g, 9,
        -15.0, [1] * 9 + [3, 3, 3] + [1], "CEC2006 g01",
    )


def _g2() -> ProblemSpec:
    def f(x):
        cos = np.cos(x)
        denom = np.sqrt(np.sum(np.arange(1, len(x) + 1) * x**2))
        return -np.abs(np.sum(cos**4) - 2 * np.prod(cos**2)) / denom

    def g(x):
        return np.array([np.prod(x) - 0.75, 7.5 * len(x) - np.sum(x)])

    return _spec("G2", [0] * 10, [10] * 10, f, g, 2, -0.4, None, "CEC2006 g02, d=10")


def _plog(y: float) -> float:
    return math.copysign(math.log1p(abs(y)), y)


def _g3mod() -> ProblemSpec:
    d = 20

    def f(x):
        return -_plog(math.sqrt(d) ** d * float(np.prod(x)))

    def g(x):
        return np.array([1.0 - np.sum(x**2)])

    return _spec(
        "G3MOD", [0] * d, [1] * d, f, g, 1,
        -math.log(2.0), [1 / math.sqrt(d)] * d, "CEC2006 g03, log-transformed, equality relaxed",
    )


def _g4() -> ProblemSpec:
    def f(x):
        return 5.3578547 * x[2] ** 2 + 0.8356891 * x[0] * x[4] + 37.293239 * x[0] - 40792.141

    def g(x):
        u = 85.334407 + 0.0056858 * x[1] * x[4] + 0.0006262 * x[0] * x[3] - 0.0022053 * x[2] * x[4]
        v = 80.51249 + 0.0071317 * x[1] * x[4] + 0.0029955 * x[0] * x[1] + 0.0021813 * x[2] ** 2
        w = 9.300961 + 0.0047026 * x[2] * x[4] + 0.0012547 * x[0] * x[2] + 0.0019085 * x[2] * x[3]
        return np.array([92 - u, u, 110 - v, v - 90, 25 - w, w - 20])

    return _spec(
        "G4", [78, 33, 27, 27, 27], [102, 45, 45, 45, 45], f, g, 6,
        -30665.539, [78, 33, 29.9952560256815985, 45, 36.7758129057882073], "CEC2006 g04",
    )


def _g5mod() -> ProblemSpec:
    def f(x):
        return 3 * x[0] + 1e-6 * x[0] ** 3 + 2 * x[1] + (2e-6 / 3) * x[1] ** 3

    def g(x):
        return -np.array(
            [
                x[2] - x[3] - 0.55,
                x[3] - x[2] - 0.55,
                1000 * (np.sin(-x[2] - 0.25) + np.sin(-x[3] - 0.25)) + 894.8 - x[0],
                1000 * (np.sin(x[2] - 0.25) + np.sin(x[2] - x[3] - 0.25)) + 894.8 - x[1],
                1000 * (np.sin(x[3] - 0.25) + np.sin(x[3] - x[2] - 0.25)) + 1294.8,
            ]
        )

    return _spec(
        "G5MOD", [0, 0, -0.55, -0.55], [1200, 1200, 0.55, 0.55], f, g, 5,
        5126.50,
        [679.945148297028709, 1026.06697600004691, 0.118876369094410433, -0.39623348521517826],
        "CEC2006 g05, equalities relaxed",
    )


def _g6() -> ProblemSpec:
    def f(x):
        return (x[0] - 10) ** 3 + (x[1] - 20) ** 3

    def g(x):
        return np.array(
            [
                (x[0] - 5) ** 2 + (x[1] - 5) ** 2 - 100,
                82.81 - (x[0] - 6) ** 2 - (x[1] - 5) ** 2,
            ]
        )

    return _spec(
        "G6", [13, 0], [100, 100], f, g, 2,
        -6961.8139, [14.095, 0.8429607892154795668], "CEC2006 g06",
    )


def _g7() -> ProblemSpec:
    def f(x):
        return (
            x[0] ** 2 + x[1] ** 2 + x[0] * x[1] - 14 * x[0] - 16 * x[1]
            + (x[2] - 10) ** 2 + 4 * (x[3] - 5) ** 2 + (x[4] - 3) ** 2
            + 2 * (x[5] - 1) ** 2 + 5 * x[6] ** 2 + 7 * (x[7] - 11) ** 2
            + 2 * (x[8] - 10) ** 2 + (x[9] - 7) ** 2 + 45
        )

    def g(x):
        return -np.array(
            [
                (4 * x[0] + 5 * x[1] - 3 * x[6] + 9 * x[7] - 105) / 105,
                (10 * x[0] - 8 * x[1] - 17 * x[6] + 2 * x[7]) / 370,
                (-8 * x[0] + 2 * x[1] + 5 * x[8] - 2 * x[9] - 12) / 158,
                (3 * (x[0] - 2) ** 2 + 4 * (x[1] - 3) ** 2 + 2 * x[2] ** 2 - 7 * x[3] - 120) / 1258,
                (5 * x[0] ** 2 + 8 * x[1] + (x[2] - 6) ** 2 - 2 * x[3] - 40) / 816,
                (x[0] ** 2 + 2 * (x[1] - 2) ** 2 - 2 * x[0] * x[1] + 14 * x[4] - 6 * x[5]) / 788,
                (0.5 * (x[0] - 8) ** 2 + 2 * (x[1] - 4) ** 2 + 3 * x[4] ** 2 - x[5] - 30) / 834,
                (-3 * x[0] + 6 * x[1] + 12 * (x[8] - 8) ** 2 - 7 * x[9]) / 788,
            ]
        )

    return _spec(
        "G7", [-10] * 10, [10] * 10, f, g, 8,
        24.3062,
        [2.17199634142692, 2.3636830416034, 8.77392573913157, 5.09598443745173,
         0.990654756560493, 1.43057392853463, 1.32164415364306, 9.82872576524495,
         8.2800915887356, 8.3759266477347],
        "CEC2006 g07, constraints scaled",
    )


def _g8() -> ProblemSpec:
    def f(x):
        return -(np.sin(2 * np.pi * x[0]) ** 3 * np.sin(2 * np.pi * x[1])) / (
            x[0] ** 3 * (x[0] + x[1])
        )

    def g(x):
        return np.array([x[1] - x[0] ** 2 - 1, x[0] - 1 - (x[1] - 4) ** 2])

    return _spec(
        "G8", [0, 0], [10, 10], f, g, 2,
        -0.0958, [1.22797135260752599, 4.24537336612274885], "CEC2006 g08",
    )


def _g9() -> ProblemSpec:
    def f(x):
        return (
            (x[0] - 10) ** 2 + 5 * (x[1] - 12) ** 2 + x[2] ** 4 + 3 * (x[3] - 11) ** 2
            + 10 * x[4] ** 6 + 7 * x[5] ** 2 + x[6] ** 4 - 4 * x[5] * x[6]
            - 10 * x[5] - 8 * x[6]
        )

    def g(x):
        return -np.array(
            [
                (2 * x[0] ** 2 + 3 * x[1] ** 4 + x[2] + 4 * x[3] ** 2 + 5 * x[4] - 127) / 127,
                (7 * x[0] + 3 * x[1] + 10 * x[2] ** 2 + x[3] - x[4] - 282) / 282,
                (23 * x[0] + x[1] ** 2 + 6 * x[5] ** 2 - 8 * x[6] - 196) / 196,
                4 * x[0] ** 2 + x[1] ** 2 - 3 * x[0] * x[1] + 2 * x[2] ** 2 + 5 * x[5] - 11 * x[6],
            ]
        )

    return _spec(
        "G9", [-10] * 7, [10] * 7, f, g, 4,
        680.6301,
        [2.33049935147405174, 1.95137236847114592, -0.477541399510615805,
         4.36572624923625874, -0.624486959100388983, 1.03813099410962173,
         1.5942266780671519],
        "CEC2006 g09, constraints scaled",
    )


def _g10() -> ProblemSpec:
    def f(x):
        return x[0] + x[1] + x[2]

    def g(x):
        return -np.array(
            [
                -1 + 0.0025 * (x[3] + x[5]),
                -1 + 0.0025 * (x[4] + x[6] - x[3]),
                -1 + 0.01 * (x[7] - x[4]),
                (-x[0] * x[5] + 833.33252 * x[3] + 100 * x[0] - 83333.333) / 83333.333,
                (-x[1] * x[6] + 1250 * x[4] + x[1] * x[3] - 1250 * x[3]) / 1250,
                (-x[2] * x[7] + 1250000 + x[2] * x[4] - 2500 * x[4]) / 1250000,
            ]
        )

    return _spec(
        "G10", [100, 1000, 1000] + [10] * 5, [10000] * 3 + [1000] * 5, f, g, 6,
        7049.3307,
        [579.306685017979589, 1359.97067807935605, 5109.97065743133317, 182.01769963061534,
         295.601173702746792, 217.982300369384632, 286.41652592786852, 395.60117370274673],
        "CEC2006 g10, constraints scaled",
    )


def _g18() -> ProblemSpec:
    def f(x):
        x1, x2, x3, x4, x5, x6, x7, x8, x9 = x
        return -0.5 * (x1 * x4 - x2 * x3 + x3 * x9 - x5 * x9 + x5 * x8 - x6 * x7)

    def g(x):
        x1, x2, x3, x4, x5, x6, x7, x8, x9 = x
        return np.array(
            [
                1 - x3**2 - x4**2,
                1 - x9**2,
                1 - x5**2 - x6**2,
                1 - x1**2 - (x2 - x9) ** 2,
                1 - (x1 - x5) ** 2 - (x2 - x6) ** 2,
                1 - (x1 - x7) ** 2 - (x2 - x8) ** 2,
                1 - (x3 - x5) ** 2 - (x4 - x6) ** 2,
                1 - (x3 - x7) ** 2 - (x4 - x8) ** 2,
                1 - x7**2 - (x8 - x9) ** 2,
                x1 * x4 - x2 * x3,
                x3 * x9,
                -x5 * x9,
                x5 * x8 - x6 * x7,
            ]
        )

    return _spec(
        "G18", [-10] * 8 + [0], [10] * 8 + [20], f, g, 13,
        -0.8660,
        [-0.657776192427943163, -0.153418773482438542, 0.323413871675240938,
         -0.946257611651304398, -0.657776194376798906, -0.753213434632691414,
         0.323413874123576972, -0.346462947962331735, 0.59979466285217542],
        "CEC2006 g18",
    )


_G19_B = np.array([-40, -2, -0.25, -4, -4, -1, -40, -60, 5, 1])
_G19_E = np.array([-15, -27, -36, -18, -12])
_G19_D = np.array([4, 8, 10, 6, 2])
_G19_C = np.array(
    [
        [30, -20, -10, 32, -10],
        [-20, 39, -6, -31, 32],
        [-10, -6, 10, -6, -10],
        [32, -31, -6, 39, -20],
        [-10, 32, -10, -20, 30],
    ]
)
_G19_A = np.array(
    [
        [-16, 2, 0, 1, 0],
        [0, -2, 0, 0.4, 2],
        [-3.5, 0, 2, 0, 0],
        [0, -2, 0, -4, -1],
        [0, -9, -2, 1, -2.8],
        [2, 0, -4, 0, 0],
        [-1, -1, -1, -1, -1],
        [-1, -2, -3, -2, -1],
        [1, 2, 3, 4, 5],
        [1, 1, 1, 1, 1],
    ]
)


def _g19() -> ProblemSpec:
    def f(x):
        y = x[10:]
        return float(y @ _G19_C @ y + 2 * np.sum(_G19_D * y**3) - _G19_B @ x[:10])

    def g(x):
        y = x[10:]
        return -(-2 * (_G19_C.T @ y) - 3 * _G19_D * y**2 - _G19_E + _G19_A.T @ x[:10])

    return _spec(
        "G19", [0] * 15, [10] * 15, f, g, 5,
        32.6556,
        [1.66991341326291344e-17, 3.95378229282456509e-16, 3.94599045143233784,
         1.06036597479721211e-16, 3.2831773458454161, 9.99999999999999822,
         1.12829414671605333e-17, 1.2026194599794709e-17, 2.50706276000769697e-15,
         2.24624122987970677e-15, 0.370764847417013987, 0.278456024942955571,
         0.523838487672241171, 0.388620152510322781, 0.298156764974678579],
        "CEC2006 g19",
    )


def _g24() -> ProblemSpec:
    def f(x):
        return -x[0] - x[1]

    def g(x):
        return np.array(
            [
                2 * x[0] ** 4 - 8 * x[0] ** 3 + 8 * x[0] ** 2 + 2 - x[1],
                4 * x[0] ** 4 - 32 * x[0] ** 3 + 88 * x[0] ** 2 - 96 * x[0] + 36 - x[1],
            ]
        )

    return _spec(
        "G24", [0, 0], [3, 4], f, g, 2,
        -5.5080, [2.32952019747762, 3.17849307411774], "CEC2006 g24",
    )


# ==================== Engineering Problems ====================

def _gtcd() -> ProblemSpec:
    def f(x):
        x1, x2, x3, x4 = x
        return (
            8.61e5 * x1**0.5 * x2 * x3 ** (-2 / 3) * x4**-0.5
            + 3.69e4 * x3
            + 7.72e8 / x1 * x2**0.219
            - 765.43e6 / x1
        )

    def g(x):
        return np.array([1 - x[3] / x[1] ** 2 - 1 / x[1] ** 2])

    return _spec(
        "GTCD", [20, 1, 20, 0.1], [50, 10, 50, 60], f, g, 1,
        2964893.85, [50, 1.178414, 24.59259, 0.388327], "gas transmission compressor design",
    )


def _hesse() -> ProblemSpec:
    def f(x):
        return -(
            25 * (x[0] - 2) ** 2 + (x[1] - 2) ** 2 + (x[2] - 1) ** 2
            + (x[3] - 4) ** 2 + (x[4] - 1) ** 2 + (x[5] - 4) ** 2
        )

    def g(x):
        return np.array(
            [
                x[0] + x[1] - 2,
                6 - x[0] - x[1],
                2 - x[1] + x[0],
                2 - x[0] + 3 * x[1],
                (x[2] - 3) ** 2 + x[3] - 4,
                (x[4] - 3) ** 2 + x[5] - 4,
            ]
        )

    return _spec(
        "Hesse", [0, 0, 1, 0, 1, 0], [5, 4, 5, 6, 5, 10], f, g, 6,
        -310.0, [5, 1, 5, 0, 5, 10], "Hesse",
    )


_PVD_VOLUME = 1296000.0
_PVD_LENGTH = 240.0


def _pvd_optimum() -> List[float]:
    """Thickness constraints and the volume constraint are active at the optimum."""
    radius = brentq(
        lambda r: math.pi * r**2 * _PVD_LENGTH + 4 / 3 * math.pi * r**3 - _PVD_VOLUME, 1.0, 50.0
    )
    return [0.0193 * radius, 0.00954 * radius, radius, _PVD_LENGTH]


def _pvd4() -> ProblemSpec:
    def f(x):
        x1, x2, x3, x4 = x
        return 0.6224 * x1 * x3 * x4 + 1.7781 * x2 * x3**2 + 3.1661 * x1**2 * x4 + 19.84 * x1**2 * x3

    def g(x):
        x1, x2, x3, x4 = x
        return np.array(
            [
                x1 - 0.0193 * x3,
                x2 - 0.00954 * x3,
                math.pi * x3**2 * x4 + 4 / 3 * math.pi * x3**3 - _PVD_VOLUME,
            ]
        )

    return _spec(
        "PVD4", [0, 0, 0, 0], [1, 1, 50, _PVD_LENGTH], f, g, 3,
        5804.45, _pvd_optimum(), "pressure vessel design",
    )


def _sr7() -> ProblemSpec:
    def f(x):
        x1, x2, x3, x4, x5, x6, x7 = x
        return (
            0.7854 * x1 * x2**2 * (3.3333 * x3**2 + 14.9334 * x3 - 43.0934)
            - 1.508 * x1 * (x6**2 + x7**2)
            + 7.4777 * (x6**3 + x7**3)
            + 0.7854 * (x4 * x6**2 + x5 * x7**2)
        )

    def g(x):
        x1, x2, x3, x4, x5, x6, x7 = x
        a1 = math.sqrt((745 * x4 / (x2 * x3)) ** 2 + 16.91e6)
        a2 = math.sqrt((745 * x5 / (x2 * x3)) ** 2 + 157.5e6)
        return -np.array(
            [
                (27 - x1 * x2**2 * x3) / 27,
                (397.5 - x1 * x2**2 * x3**2) / 397.5,
                (1.93 - x2 * x6**4 * x3 / x4**3) / 1.93,
                (1.93 - x2 * x7**4 * x3 / x5**3) / 1.93,
                (a1 / (0.1 * x6**3) - 1100) / 1100,
                (a2 / (0.1 * x7**3) - 850) / 850,
                (x2 * x3 - 40) / 40,
                (5 - x1 / x2) / 5,
                (x1 / x2 - 12) / 12,
                (1.9 + 1.5 * x6 - x4) / 1.9,
                (1.9 + 1.1 * x7 - x5) / 1.9,
            ]
        )

    return _spec(
        "SR7", [2.6, 0.7, 17, 7.3, 7.3, 2.9, 5.0], [3.6, 0.8, 28, 8.3, 8.3, 3.9, 5.5], f, g, 11,
        2994.42, [3.5, 0.7, 17, 7.3, 7.71532, 3.35021, 5.28665], "speed reducer",
    )


_WB_LOAD = 6000.0
_WB_LENGTH = 14.0
_WB_TAU_MAX = 13600.0
_WB_SIGMA_MAX = 30000.0
_WB_DELTA_MAX = 0.25


def _wb() -> ProblemSpec:
    def f(x):
        x1, x2, x3, x4 = x
        return 1.10471 * x1**2 * x2 + 0.04811 * x3 * x4 * (14 + x2)

    def g(x):
        x1, x2, x3, x4 = x
        r = math.sqrt(0.25 * (x2**2 + (x1 + x3) ** 2))
        tau_p = _WB_LOAD / (math.sqrt(2) * x1 * x2)
        tau_pp = (_WB_LOAD * (_WB_LENGTH + 0.5 * x2) * r) / (
            2 * math.sqrt(2) * x1 * x2 * (x2**2 / 12 + 0.25 * (x1 + x3) ** 2)
        )
        tau = math.sqrt(tau_p**2 + tau_pp**2 + x2 * tau_p * tau_pp / r)
        sigma = 504000 / (x4 * x3**2)
        delta = 2.1952 / (x3**3 * x4)
        buckling = 102372.449 * (1 - 0.0282346 * x3) * x3 * x4**3
        return np.array(
            [
                (_WB_TAU_MAX - tau) / _WB_TAU_MAX,
                (_WB_SIGMA_MAX - sigma) / _WB_SIGMA_MAX,
                x4 - x1,
                (5 - 0.10471 * x1**2 - 0.04811 * x3 * x4 * (14 + x2)) / 5,
                (_WB_DELTA_MAX - delta) / _WB_DELTA_MAX,
                (buckling - _WB_LOAD) / _WB_LOAD,
            ]
        )

    return _spec(
        "WB", [0.125, 0.1, 0.1, 0.1], [10, 10, 10, 10], f, g, 6,
        1.7250, [0.205730, 3.470489, 9.036624, 0.205730], "welded beam",
    )


_BUILDERS = [
    _g1, _g2, _g3mod, _g4, _g5mod, _g6, _g7, _g8, _g9, _g10, _g18, _g19, _g24,
    _gtcd, _hesse, _pvd4, _sr7, _wb,
]


# ==================== Registry ====================

def check_consistency(problem: ProblemSpec) -> Tuple[Optional[float], Optional[float]]:
    """
    (relative objective error, max constraint violation) at the best-known point.
    Both are None when no best-known point is stored.
    """
    if problem.best_known_x is None:
        return None, None
    x = np.asarray(problem.best_known_x, dtype=float)
    with np.errstate(all="ignore"):
        f = float(problem.objective(x))
        g = np.array([c.evaluator(x) for c in problem.constraints], dtype=float)
    f_star = problem.known_optimum
    rel = abs(f - f_star) / max(abs(f_star), 1e-12)
    violation = float(np.max(np.maximum(0.0, -g))) if g.size else 0.0
    return rel, violation


def _passes_gate(problem: ProblemSpec) -> bool:
    if problem.best_known_x is not None and len(problem.best_known_x) != problem.dimension:
        return False
    rel, violation = check_consistency(problem)
    if rel is None:
        return True
    if not (math.isfinite(rel) and rel <= OPTIMUM_RTOL and violation <= VIOLATION_ATOL):
        logger.warning(
            f"Rejected {problem.name}: relative error {rel:.3e}, violation {violation:.3e} "
            f"at the best-known point"
        )
        return False
    return True


def _build_registry() -> Dict[str, ProblemSpec]:
    registry = {}
    for builder in _BUILDERS:
        problem = builder()
        if _passes_gate(problem):
            registry[problem.name] = problem
    logger.debug(f"Registered {len(registry)} test problems")
    return registry


_REGISTRY: Dict[str, ProblemSpec] = _build_registry()
_BY_KEY = {name.casefold(): name for name in _REGISTRY}
_BY_KEY.update(
    {alias: name for alias, name in (("pvd", "PVD4"), ("sr", "SR7")) if name in _REGISTRY}
)


def get_problem(name: str, scenario: Union[Scenario, str, int] = Scenario.SET1) -> ProblemSpec:
    """Registered problem with constraint kinds relabeled for ``scenario``."""
    key = _BY_KEY.get(str(name).casefold())
    if key is None:
        raise UnknownProblemError(f"Unknown problem: {name!r}. Known: {', '.join(_REGISTRY)}")
    return relabel(_REGISTRY[key], scenario)


def list_problems(scenario: Union[Scenario, str, int] = Scenario.SET1) -> List[str]:
    """Set1 gets every problem; the relabeled scenarios need two or more constraints."""
    scenario = Scenario.parse(scenario)
    if scenario == Scenario.SET1:
        return list(_REGISTRY)
    return [name for name, p in _REGISTRY.items() if p.n_constraints >= 2]


def problem_metadata(scenario: Union[Scenario, str, int] = Scenario.SET1) -> List[ProblemInfo]:
    rows = []
    for name in list_problems(scenario):
        problem = get_problem(name, scenario)
        rows.append(
            ProblemInfo(
                name=problem.name,
                dimension=problem.dimension,
                constraints=problem.n_constraints,
                kinds=problem.kinds,
                known_optimum=problem.known_optimum,
                source=problem.source,
            )
        )
    return rows
