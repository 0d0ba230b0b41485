"""Curve and divisor classes, the intersection pairing, nef and ample tests.

Coordinates: both curve and divisor data are vectors indexed by the rays of a
fan.  A curve class is an integer relation among the rays (an element of the
kernel of the ray matrix); a divisor is a coefficient vector ``sum a_v D_v``,
with class equality modulo the row space of the ray matrix.  The pairing is
the plain dot product, well defined because kernel and row space are
orthogonal.

On a smooth fan the coefficient of a wall relation at a ray v equals the
intersection number ``D_v . C`` of the wall curve, and the coefficient sum is
its anticanonical degree.  On singular (still simplicial) fans wall classes
are stored primitive, so pairings are correct up to a positive rational per
wall; every decision made from them here is a sign or span test, which that
scaling cannot affect.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from . import linalg as la
from .fan import Fan, Wall, walls
from .linalg import Vector

CurveClass = tuple[int, ...]
DivisorClass = tuple  # int or Fraction entries, indexed by rays


@dataclass(frozen=True)
class IntersectionSpace:
    """The curve-class lattice of a fan with its canonical basis."""

    fan: Fan
    basis: tuple[Vector, ...]
    rho: int


@lru_cache(maxsize=None)
def intersection_space(fan: Fan) -> IntersectionSpace:
    basis = la.integer_kernel_basis(fan.ray_matrix()) if fan.n_rays else ()
    space = IntersectionSpace(fan=fan, basis=basis, rho=fan.n_rays - fan.dim)
    assert len(basis) == space.rho, "kernel rank must equal #rays - dim"
    return space


def wall_class(fan: Fan, wall: Wall) -> CurveClass:
    """Class of the invariant curve carried by a wall (the stored relation)."""
    assert wall in walls(fan)
    return wall.relation


def pair(divisor: Sequence, curve: Sequence) -> Fraction | int:
    """Intersection number ``D . C`` as a dot product of coefficient vectors."""
    return la.dot(divisor, curve)


def anticanonical(fan: Fan) -> DivisorClass:
    """-K as a torus-invariant divisor: the all-ones coefficient vector."""
    return (1,) * fan.n_rays


def ray_divisor(fan: Fan, ray_index: int) -> DivisorClass:
    """The prime invariant divisor of one ray as a coefficient vector."""
    return tuple(1 if i == ray_index else 0 for i in range(fan.n_rays))


def is_nef(fan: Fan, divisor: Sequence, strict: bool = False) -> bool:
    """Nefness of a divisor class: nonnegative against every wall curve.

    With ``strict=True`` this is the ampleness test on a complete simplicial
    fan (toric Kleiman), and in particular ``is_nef(f, anticanonical(f),
    strict=True)`` is the Fano test.
    """
    if fan.dim == 0:
        return True
    for w in walls(fan):
        d = pair(divisor, w.relation)
        if d < 0 or (strict and d == 0):
            return False
    return True
