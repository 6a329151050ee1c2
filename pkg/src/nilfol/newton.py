"""Newton polyhedra of finite nonnegative integer supports.

The polyhedron of ``S`` is ``conv(S + R_+^d)``; it is determined by its
vertex set, which is what :class:`NewtonPolyhedron` stores.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ValidationError
from .poly import Polynomial, grlex_key
from .simplex import find_feasible

Point = tuple[int, ...]


@dataclass(frozen=True)
class SupportSet:
    dim: int
    points: tuple[Point, ...]

    def __init__(self, dim: int, points: Iterable[Sequence[int]]):
        pts = {tuple(p) for p in points}
        if dim < 1:
            raise ValidationError("support dimension must be positive")
        for p in pts:
            if len(p) != dim:
                raise ValidationError(f"point {p} does not have dimension {dim}")
            if any(isinstance(c, bool) or not isinstance(c, int) or c < 0 for c in p):
                raise ValidationError(f"point {p} must have nonnegative integer entries")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "points", tuple(sorted(pts, key=grlex_key)))

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, p):
        return tuple(p) in set(self.points)

    def as_lists(self) -> list[list[int]]:
        return [list(p) for p in self.points]


@dataclass(frozen=True)
class HullCertificate:
    """``point = sum(weights[q] * q) + slack`` with weights a probability vector."""

    point: Point
    weights: dict = field(hash=False)
    slack: tuple[Fraction, ...]

    def verify(self) -> bool:
        if any(w < 0 for w in self.weights.values()) or sum(self.weights.values()) != 1:
            return False
        if any(m < 0 for m in self.slack):
            return False
        d = len(self.point)
        for k in range(d):
            total = sum(w * q[k] for q, w in self.weights.items()) + self.slack[k]
            if total != self.point[k]:
                return False
        return True


@dataclass(frozen=True)
class NewtonPolyhedron:
    dim: int
    vertices: tuple[Point, ...]

    def as_lists(self) -> list[list[int]]:
        return [list(v) for v in self.vertices]


def _as_support(S, dim=None) -> SupportSet:
    if isinstance(S, SupportSet):
        return S
    pts = [tuple(p) for p in S]
    if dim is None:
        if not pts:
            raise ValidationError("empty support")
        dim = len(pts[0])
    return SupportSet(dim, pts)


def hull_certificate(S, p: Sequence[int]) -> HullCertificate | None:
    """Certificate that ``p`` lies in ``conv(S + R_+^d)``, or ``None``."""
    S = _as_support(S)
    p = tuple(p)
    if not S.points:
        raise ValidationError("hull membership against an empty support")
    if len(p) != S.dim:
        raise ValidationError("query point dimension differs from support dimension")
    d, pts = S.dim, S.points
    # columns: one lambda per support point, then one slack per coordinate
    A = [[q[k] for q in pts] + [int(j == k) for j in range(d)] for k in range(d)]
    A.append([1] * len(pts) + [0] * d)
    x = find_feasible(A, list(p) + [1])
    if x is None:
        return None
    weights = {q: x[i] for i, q in enumerate(pts) if x[i]}
    slack = tuple(x[len(pts):])
    return HullCertificate(p, weights, slack)


def hull_contains(S, p: Sequence[int]) -> bool:
    return hull_certificate(S, p) is not None


def vertices(S) -> NewtonPolyhedron:
    S = _as_support(S)
    if not S.points:
        raise ValidationError("the Newton polyhedron of an empty support is undefined")
    kept = []
    for v in S.points:
        rest = [q for q in S.points if q != v]
        # cheap exit: a point dominating another one is absorbed by the orthant
        if any(all(a <= b for a, b in zip(q, v)) for q in rest):
            continue
        if not rest or not hull_contains(SupportSet(S.dim, rest), v):
            kept.append(v)
    return NewtonPolyhedron(S.dim, tuple(sorted(kept, key=grlex_key)))


def newton_of_polynomial(p: Polynomial) -> NewtonPolyhedron:
    if p.is_zero():
        raise ValidationError("the zero polynomial has no Newton polyhedron")
    return vertices(SupportSet(p.context.count, p.support()))


def newton_of_1form(w) -> NewtonPolyhedron:
    from .forms import support_of_1form

    support = support_of_1form(w)
    if not support.points:
        raise ValidationError("the zero form has no Newton polyhedron")
    return vertices(support)


def polyhedra_equal(A: NewtonPolyhedron, B: NewtonPolyhedron) -> bool:
    if A.dim != B.dim:
        raise ValidationError(f"cannot compare polyhedra of dimension {A.dim} and {B.dim}")
    return A.vertices == B.vertices
