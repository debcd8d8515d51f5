"""Small 2D vector helpers.

Everything in the physics path goes through these functions so the order of
floating-point operations is fixed (replay determinism depends on it).
"""
from __future__ import annotations

import math

Point2 = tuple[float, float]

ZERO: Point2 = (0.0, 0.0)


def add(a: Point2, b: Point2) -> Point2:
    return (a[0] + b[0], a[1] + b[1])


def sub(a: Point2, b: Point2) -> Point2:
    return (a[0] - b[0], a[1] - b[1])


def scale(v: Point2, k: float) -> Point2:
    return (v[0] * k, v[1] * k)


def dot(a: Point2, b: Point2) -> float:
    return a[0] * b[0] + a[1] * b[1]


def norm(v: Point2) -> float:
    return math.hypot(v[0], v[1])


def dist(a: Point2, b: Point2) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def normalize(v: Point2) -> Point2:
    n = norm(v)
    if n == 0.0:
        return ZERO
    return (v[0] / n, v[1] / n)
