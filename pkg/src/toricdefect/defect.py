"""The Lefschetz defect of a toric variety, from wall data.

For a prime invariant divisor D_v, the curve classes of walls containing the
ray v span the subspace of one-cycles supported on the divisor; the defect
c(D_v) is its codimension in the full curve space, and c_X is the maximum
over rays.  The value is computed over torus-invariant prime divisors only
(non-invariant divisors are not enumerable from fan data); an independent
oracle recomputes each c(D_v) as the kernel dimension of the divisor-class
restriction to the star fan, which never looks at wall spans, and the two
must agree on smooth fans.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import linalg as la
from .fan import Fan, divisor_star_fan, local_properties, walls
from .intersection import CurveClass, intersection_space

__all__ = [
    "LefschetzReport",
    "c_of_divisor",
    "lefschetz_defect",
    "n1_span_of_divisor",
    "restriction_kernel_oracle",
    "span_of_pair_intersection",
]


@dataclass(frozen=True)
class LefschetzReport:
    c_values: tuple[int, ...]        # per ray
    c_x: int                         # max over rays ("c_X (invariant)")
    argmax: tuple[int, ...]          # rays attaining the maximum
    spans: tuple[tuple[CurveClass, ...], ...]
    fano_warning: bool               # set when the input is not smooth Fano


def n1_span_of_divisor(fan: Fan, ray_index: int) -> tuple[CurveClass, ...]:
    """Classes of the walls containing the ray: curves inside the divisor."""
    return tuple(w.relation for w in walls(fan) if ray_index in w.rays)


def c_of_divisor(fan: Fan, ray_index: int) -> int:
    """Codimension of the span of curve classes supported on the divisor."""
    rho = intersection_space(fan).rho
    return rho - la.rank(n1_span_of_divisor(fan, ray_index))


@lru_cache(maxsize=None)
def lefschetz_defect(fan: Fan) -> LefschetzReport:
    """Per-ray defects and their maximum, with the attaining rays.

    Non-Fano (or singular) input gets a warning flag rather than an error;
    the definitions still make sense and the engine needs them on
    intermediate fans.
    """
    rho = intersection_space(fan).rho
    spans = tuple(n1_span_of_divisor(fan, i) for i in range(fan.n_rays))
    c_values = tuple(rho - la.rank(s) for s in spans)
    c_x = max(c_values, default=0)
    props = local_properties(fan)
    return LefschetzReport(
        c_values=c_values,
        c_x=c_x,
        argmax=tuple(i for i, c in enumerate(c_values) if c == c_x),
        spans=spans,
        fano_warning=not (props.smooth and props.fano),
    )


def restriction_kernel_oracle(fan: Fan, ray_index: int) -> int:
    """dim ker of the divisor-class restriction to the star fan of the ray.

    Computed on the quotient fan by restricting each invariant divisor class
    and taking the rank deficiency of the induced map on class spaces;
    independent of wall spans.  Exact for smooth complete fans.
    """
    star = divisor_star_fan(fan, ray_index)
    rho = intersection_space(fan).rho
    if star.dim == 0:
        return rho  # the divisor is a point: every class restricts to zero
    u = la.clearing_transform(fan.rays[ray_index])

    adjacent = {fan.index_of_label(lab): k for k, lab in enumerate(star.labels)}

    # <u[0], v> = 1, so subtracting div[v] * (<u[0], .>) zeroes the
    # coefficient at v without changing the class
    shift = tuple(la.dot(u[0], w) for w in fan.rays)

    def restrict(div):
        a = la.vec_sub(div, la.vec_scale(div[ray_index], shift))
        out = [0] * star.n_rays
        for i, k in adjacent.items():
            out[k] += a[i]
        return tuple(out)

    star_rows = list(star.ray_matrix())
    restricted = [
        restrict(tuple(1 if j == i else 0 for j in range(fan.n_rays)))
        for i in range(fan.n_rays)
    ]
    image_rank = la.rank(restricted + star_rows) - la.rank(star_rows)
    return rho - image_rank


def span_of_pair_intersection(fan: Fan, v: int, w: int) -> tuple[CurveClass, ...]:
    """Classes of walls containing both rays: curves in the divisor intersection.

    Empty when the rays never share a cone (disjoint divisors) and always
    empty on surfaces, where walls have a single ray.
    """
    if v == w:
        raise ValueError("need two distinct rays")
    return tuple(
        wl.relation for wl in walls(fan) if v in wl.rays and w in wl.rays
    )
