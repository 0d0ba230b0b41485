"""Complete simplicial fans: validation, surgery, and local singularity tests.

A fan is the sole representation of a toric variety here.  Rays are primitive
integer vectors; maximal cones are sets of ray indices, each of size equal to
the lattice rank (simplicial).  Ray identity is positional but every ray also
carries a stable string label, so divisor transforms along a birational run
can be tracked by label even as indices shift under surgery.

Completeness is validated structurally: every facet of a maximal cone must be
shared by exactly one other maximal cone, adjacent cones must lie on opposite
sides of the shared facet, the adjacency graph must be connected, and a
generic rational point must be covered exactly once.  Together these force
the cones to tile the ambient space.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from . import linalg as la
from .linalg import Matrix, Vector

__all__ = [
    "Fan",
    "InvalidFan",
    "PropertyFlags",
    "Wall",
    "canonical_key",
    "divisor_star_fan",
    "fan_from_polytope",
    "local_properties",
    "make_fan",
    "point_fan",
    "polytope_facets",
    "product_decompose",
    "remove_ray",
    "star_subdivision",
    "walls",
]


class InvalidFan(ValueError):
    """Raised when data does not describe a valid (complete simplicial) fan."""


@dataclass(frozen=True)
class Fan:
    dim: int
    rays: tuple[Vector, ...]
    cones: tuple[frozenset[int], ...]
    labels: tuple[str, ...]
    complete: bool = True

    @property
    def n_rays(self) -> int:
        return len(self.rays)

    def ray_matrix(self) -> Matrix:
        """Rays as columns (dim x n_rays)."""
        return tuple(tuple(v[i] for v in self.rays) for i in range(self.dim))

    def cone_vectors(self, cone: frozenset[int]) -> tuple[Vector, ...]:
        return tuple(self.rays[i] for i in sorted(cone))

    def index_of_label(self, label: str) -> int:
        return self.labels.index(label)

    def __repr__(self) -> str:  # keep tracebacks readable
        return f"Fan(dim={self.dim}, rays={self.n_rays}, cones={len(self.cones)})"


@dataclass(frozen=True)
class Wall:
    """A codimension-one cone shared by two maximal cones.

    ``relation`` is the primitive integer relation among the rays involved,
    indexed over all rays of the fan: zero outside ``side_a | side_b`` and
    positive on the two opposite rays.  It is the class of the invariant
    curve sitting on the wall.
    """

    rays: frozenset[int]
    side_a: frozenset[int]
    side_b: frozenset[int]
    relation: Vector


@dataclass(frozen=True)
class PropertyFlags:
    complete: bool
    simplicial: bool
    smooth: bool
    terminal: bool
    canonical: bool
    gorenstein: bool
    fano: bool


# ---------------------------------------------------------------------------
# construction and validation


def _default_labels(n: int) -> tuple[str, ...]:
    return tuple(f"v{i + 1}" for i in range(n))


def _fresh_label(labels: tuple[str, ...]) -> str:
    i = 1
    while f"s{i}" in labels:
        i += 1
    return f"s{i}"


def make_fan(
    rays,
    cones,
    labels=None,
    complete: bool = True,
    validate: bool = True,
) -> Fan:
    rays = tuple(tuple(int(x) for x in v) for v in rays)
    cones = tuple(frozenset(int(i) for i in c) for c in cones)
    dim = len(rays[0]) if rays else 0
    if labels is None:
        labels = _default_labels(len(rays))
    fan = Fan(dim=dim, rays=rays, cones=cones, labels=tuple(labels), complete=complete)
    if validate:
        validate_fan(fan)
    return fan


def point_fan() -> Fan:
    """The fan of a point (rank-zero lattice)."""
    return Fan(dim=0, rays=(), cones=(frozenset(),), labels=(), complete=True)


def _facet_normal(fan: Fan, facet: frozenset[int]) -> Vector:
    ker = la.integer_kernel_basis(tuple(fan.rays[i] for i in sorted(facet)))
    if len(ker) != 1:
        raise InvalidFan(f"facet {sorted(facet)} does not span a hyperplane")
    return ker[0]


def validate_fan(fan: Fan) -> None:
    """Raise :class:`InvalidFan` unless the data is a valid fan."""
    n = fan.dim
    if n == 0:
        if fan.rays or fan.cones != (frozenset(),):
            raise InvalidFan("a zero-dimensional fan is a single empty cone")
        return
    seen: set[Vector] = set()
    for v in fan.rays:
        if len(v) != n:
            raise InvalidFan(f"ray {v} has wrong dimension")
        if la.is_zero_vector(v):
            raise InvalidFan("zero ray")
        if la.primitive(v) != v:
            raise InvalidFan(f"ray {v} is not primitive")
        if v in seen:
            raise InvalidFan(f"duplicate ray {v}")
        seen.add(v)
    if len(fan.labels) != len(fan.rays) or len(set(fan.labels)) != len(fan.labels):
        raise InvalidFan("labels must be distinct, one per ray")
    if not fan.cones:
        raise InvalidFan("no maximal cones")
    used: set[int] = set()
    for c in fan.cones:
        if len(c) != n:
            raise InvalidFan(f"cone {sorted(c)} is not full-dimensional simplicial")
        if not all(0 <= i < fan.n_rays for i in c):
            raise InvalidFan(f"cone {sorted(c)} has out-of-range ray indices")
        if la.det(fan.cone_vectors(c)) == 0:
            raise InvalidFan(f"cone {sorted(c)} has dependent rays")
        used |= c
    if len(set(fan.cones)) != len(fan.cones):
        raise InvalidFan("duplicate maximal cones")
    if used != set(range(fan.n_rays)):
        raise InvalidFan("some ray belongs to no maximal cone")
    if not fan.complete:
        return

    if n == 1:
        if set(fan.rays) != {(1,), (-1,)}:
            raise InvalidFan("a complete fan of rank one has rays (1) and (-1)")
        return

    # facet pairing + local convexity
    facet_map: dict[frozenset[int], list[int]] = {}
    for ci, c in enumerate(fan.cones):
        for i in c:
            facet_map.setdefault(c - {i}, []).append(ci)
    adjacency: dict[int, set[int]] = {ci: set() for ci in range(len(fan.cones))}
    normals: list[Vector] = []
    for facet, sides in facet_map.items():
        if len(sides) != 2:
            raise InvalidFan(
                f"facet {sorted(facet)} lies in {len(sides)} maximal cones (want 2)"
            )
        ca, cb = sides
        h = _facet_normal(fan, facet)
        extra_a = next(iter(fan.cones[ca] - facet))
        extra_b = next(iter(fan.cones[cb] - facet))
        sa = la.dot(h, fan.rays[extra_a])
        sb = la.dot(h, fan.rays[extra_b])
        if sa == 0 or sb == 0 or (sa > 0) == (sb > 0):
            raise InvalidFan(
                f"cones {sorted(fan.cones[ca])} and {sorted(fan.cones[cb])} "
                "do not lie on opposite sides of their shared facet"
            )
        adjacency[ca].add(cb)
        adjacency[cb].add(ca)
        normals.append(h)

    # connectivity of the dual graph
    stack = [0]
    reached = {0}
    while stack:
        for nb in adjacency[stack.pop()]:
            if nb not in reached:
                reached.add(nb)
                stack.append(nb)
    if len(reached) != len(fan.cones):
        raise InvalidFan("support is disconnected")

    # a generic point must be covered exactly once
    p = _generic_point(n, normals)
    hits = 0
    for c in fan.cones:
        coords = la.solve_rational(la.transpose(fan.cone_vectors(c)), p)
        if coords is not None and all(x > 0 for x in coords):
            hits += 1
    if hits != 1:
        raise InvalidFan(f"generic point covered {hits} times (fan does not tile)")


def _generic_point(n: int, normals: list[Vector]) -> Vector:
    base = 2
    while True:
        p = tuple(base**i for i in range(n))
        if all(la.dot(h, p) != 0 for h in normals):
            return p
        base += 1


# ---------------------------------------------------------------------------
# polytope input


def polytope_facets(points: tuple[Vector, ...]) -> list[tuple[Vector, int, tuple[int, ...]]]:
    """Facets of ``conv(points)`` for a full-dimensional hull with 0 interior.

    Returns triples ``(normal a, level c, tight indices)`` with ``a`` integer
    primitive, ``c > 0``, ``<a, x> = c`` on the facet and ``<a, x> <= c`` on
    every point.  Exact brute force over normal candidates; fine for the
    handful of vertices a Fano polytope has.
    """
    n = len(points[0])
    if la.rank(points) != n:
        raise InvalidFan("points do not span the ambient space")
    # 0 interior iff 0 = sum lam_i p_i has a solution with every lam_i >= 1;
    # substituting lam = 1 + mu turns that into a nonnegative feasibility test.
    interior = la.solve_nonnegative(
        [tuple(p) for p in points], tuple(-sum(p[i] for p in points) for i in range(n))
    )
    if interior is None:
        raise InvalidFan("origin is not interior to the convex hull of the points")

    seen: dict[tuple[Vector, int], set[int]] = {}
    for subset in itertools.combinations(range(len(points)), n):
        mat = tuple(points[i] for i in subset)
        if la.det(mat) == 0:
            continue
        sol = la.solve_rational(mat, (1,) * n)
        if sol is None:
            continue
        denom = 1
        for x in sol:
            denom = denom * x.denominator // gcd(denom, x.denominator)
        a = la.primitive(tuple(int(x * denom) for x in sol))
        values = [la.dot(a, p) for p in points]
        c = values[subset[0]]
        if c <= 0:
            a, c = la.vec_neg(a), -c
            values = [-v for v in values]
        if all(v <= c for v in values):
            tight = tuple(i for i, v in enumerate(values) if v == c)
            seen.setdefault((a, c), set()).update(tight)
    return sorted((a, c, tuple(sorted(t))) for (a, c), t in seen.items())


def fan_from_polytope(vertices, labels=None) -> Fan:
    """Face fan of the convex hull of lattice points with 0 interior.

    Rays are the given points, maximal cones the cones over hull facets.
    Rejects non-simplicial facets and points that are not hull vertices.
    """
    pts = tuple(tuple(int(x) for x in v) for v in vertices)
    n = len(pts[0])
    for p in pts:
        if la.primitive(p) != p:
            raise InvalidFan(f"vertex {p} is not primitive")
    if len(set(pts)) != len(pts):
        raise InvalidFan("duplicate vertices")
    if n == 1:
        if set(pts) != {(1,), (-1,)}:
            raise InvalidFan("origin is not interior to the convex hull of the points")
        return make_fan(pts, [{i} for i in range(len(pts))], labels=labels)
    facets = polytope_facets(pts)
    cones = []
    covered: set[int] = set()
    for _a, _c, tight in facets:
        if len(tight) != n:
            raise InvalidFan(
                f"facet with vertices {tight} is not simplicial; only simplicial "
                "input is supported"
            )
        cones.append(frozenset(tight))
        covered.update(tight)
    if covered != set(range(len(pts))):
        missing = sorted(set(range(len(pts))) - covered)
        raise InvalidFan(f"points {missing} are not vertices of the hull")
    return make_fan(pts, cones, labels=labels)


# ---------------------------------------------------------------------------
# walls


@lru_cache(maxsize=None)
def walls(fan: Fan) -> tuple[Wall, ...]:
    """All walls of a complete simplicial fan, with primitive relations."""
    if not fan.complete:
        raise InvalidFan("walls are only defined for complete fans")
    if fan.dim == 0:
        return ()
    facet_map: dict[frozenset[int], list[int]] = {}
    for ci, c in enumerate(fan.cones):
        for i in c:
            facet_map.setdefault(c - {i}, []).append(ci)
    out = []
    for facet in sorted(facet_map, key=sorted):
        ca, cb = facet_map[facet]
        extra_a = next(iter(fan.cones[ca] - facet))
        extra_b = next(iter(fan.cones[cb] - facet))
        idx = sorted(facet | {extra_a, extra_b})
        ker = la.integer_kernel_basis(
            tuple(tuple(fan.rays[i][d] for i in idx) for d in range(fan.dim))
        )
        if len(ker) != 1:
            raise InvalidFan(f"wall {sorted(facet)} has no unique relation")
        rel_small = ker[0]
        pos = {i: rel_small[k] for k, i in enumerate(idx)}
        if pos[extra_a] < 0:
            pos = {i: -x for i, x in pos.items()}
        if pos[extra_a] <= 0 or pos[extra_b] <= 0:
            raise InvalidFan(
                f"wall {sorted(facet)} relation is not positive on opposite rays"
            )
        relation = tuple(pos.get(i, 0) for i in range(fan.n_rays))
        out.append(
            Wall(
                rays=facet,
                side_a=fan.cones[ca],
                side_b=fan.cones[cb],
                relation=relation,
            )
        )
    return tuple(out)


# ---------------------------------------------------------------------------
# local singularity classification


def _cone_lattice_points(fan: Fan, cone: frozenset[int]) -> list[tuple[Vector, Fraction]]:
    """Nonzero lattice points of conv({0} u generators) with their height.

    Height of ``x = sum t_i v_i`` is ``sum t_i``; generators have height 1.
    """
    gens = fan.cone_vectors(cone)
    n = fan.dim
    inv = la.invert_rational(la.transpose(gens))
    lo = [min(v[d] for v in gens + ((0,) * n,)) for d in range(n)]
    hi = [max(v[d] for v in gens + ((0,) * n,)) for d in range(n)]
    pts = []
    for coords in itertools.product(*(range(lo[d], hi[d] + 1) for d in range(n))):
        if all(x == 0 for x in coords):
            continue
        t = la.mat_vec(inv, coords)
        if all(x >= 0 for x in t) and sum(t) <= 1:
            pts.append((coords, sum(t)))
    return pts


def local_properties(fan: Fan) -> PropertyFlags:
    """Standard lattice criteria, cone by cone.

    smooth: every maximal cone unimodular; terminal: the only lattice points
    of conv({0} u generators) are 0 and the generators; canonical: no nonzero
    lattice point lies strictly below the hyperplane through the generators;
    gorenstein: the generators of each cone lie on an integral affine
    hyperplane at height one; fano: complete with the anticanonical class
    strictly positive on every wall.
    """
    if fan.dim == 0:
        return PropertyFlags(True, True, True, True, True, True, True)
    smooth = all(abs(la.det(fan.cone_vectors(c))) == 1 for c in fan.cones)
    terminal = True
    canonical = True
    gorenstein = True
    for c in fan.cones:
        if abs(la.det(fan.cone_vectors(c))) == 1:
            continue
        pts = _cone_lattice_points(fan, c)
        gens = set(fan.cone_vectors(c))
        if any(tuple(p) not in gens for p, _h in pts):
            terminal = False
        if any(h < 1 for _p, h in pts):
            canonical = False
        m = la.solve_rational(fan.cone_vectors(c), (1,) * fan.dim)
        if m is None or any(x.denominator != 1 for x in m):
            gorenstein = False
    fano = False
    if fan.complete:
        fano = all(sum(w.relation) > 0 for w in walls(fan))
    return PropertyFlags(
        complete=fan.complete,
        simplicial=True,
        smooth=smooth,
        terminal=terminal,
        canonical=canonical,
        gorenstein=gorenstein,
        fano=fano,
    )


# ---------------------------------------------------------------------------
# surgery


def star_subdivision(fan: Fan, face) -> Fan:
    """Star subdivision at the face spanned by the given ray indices.

    The new ray is the primitive sum of the face generators; every maximal
    cone containing the face is subdivided.  Faces of size < 2 are rejected
    (size one is the identity, size zero undefined).
    """
    face = frozenset(face)
    if len(face) < 2:
        raise InvalidFan("star subdivision requires a face with at least two rays")
    if not any(face <= c for c in fan.cones):
        raise InvalidFan(f"{sorted(face)} is not a face of any maximal cone")
    new_ray = la.primitive(
        tuple(sum(fan.rays[i][d] for i in face) for d in range(fan.dim))
    )
    if new_ray in fan.rays:
        raise InvalidFan(f"subdivision ray {new_ray} already present")
    new_index = fan.n_rays
    cones = []
    for c in fan.cones:
        if face <= c:
            for i in face:
                cones.append((c - {i}) | {new_index})
        else:
            cones.append(c)
    return make_fan(
        fan.rays + (new_ray,),
        cones,
        labels=fan.labels + (_fresh_label(fan.labels),),
    )


def remove_ray(fan: Fan, ray_index: int, wall_class=None) -> Fan:
    """Coarsen the fan by removing one ray (toric divisorial blow-down).

    The cones of the star of the ray are merged across the walls carrying
    the contracted curve class, and every merged group must re-glue into a
    simplicial cone on the surviving rays.  ``wall_class`` (the primitive
    relation of the contracted extremal ray) selects which walls are erased;
    without it every wall class negative on the ray is tried in turn, and
    the result must be unique.  A ray supporting two distinct negative
    classes with valid re-gluings admits two different blow-downs and is
    rejected as ambiguous.  Rejection (:class:`InvalidFan`) signals that no
    divisorial contraction of the requested shape removes this ray.
    """
    if not 0 <= ray_index < fan.n_rays:
        raise InvalidFan("ray index out of range")
    if wall_class is not None:
        return _remove_ray_along(fan, ray_index, tuple(wall_class))
    candidates = sorted(
        {
            w.relation
            for w in walls(fan)
            if ray_index in w.rays and w.relation[ray_index] < 0
        }
    )
    if not candidates:
        raise InvalidFan(
            "star of the ray does not re-triangulate (no wall class is "
            "negative on it)"
        )
    results: dict = {}
    failures = []
    for cls in candidates:
        try:
            g = _remove_ray_along(fan, ray_index, cls)
        except InvalidFan as exc:
            failures.append(str(exc))
            continue
        results[canonical_key(g)] = g
    if len(results) == 1:
        return next(iter(results.values()))
    if not results:
        raise InvalidFan(
            "star of the ray does not re-triangulate: " + "; ".join(failures)
        )
    raise InvalidFan(
        f"ambiguous blow-down: {len(results)} distinct contractions remove "
        "this ray; pass the contracted wall class"
    )


def _remove_ray_along(fan: Fan, ray_index: int, wall_class: Vector) -> Fan:
    star = [c for c in fan.cones if ray_index in c]
    rest = [c for c in fan.cones if ray_index not in c]
    wall_list = walls(fan)

    group = list(range(len(star)))

    def find(i: int) -> int:
        while group[i] != i:
            group[i] = group[group[i]]
            i = group[i]
        return i

    index_of = {c: i for i, c in enumerate(star)}
    for w in wall_list:
        if w.relation == wall_class:
            if w.side_a in index_of and w.side_b in index_of:
                a, b = find(index_of[w.side_a]), find(index_of[w.side_b])
                group[a] = b

    merged: dict[int, list[frozenset[int]]] = {}
    for i, c in enumerate(star):
        merged.setdefault(find(i), []).append(c)

    new_cones = []
    for members in merged.values():
        rays_of_group = frozenset().union(*members) - {ray_index}
        if len(rays_of_group) != fan.dim:
            raise InvalidFan(
                "star of the ray does not re-triangulate (group spans "
                f"{len(rays_of_group)} rays, want {fan.dim})"
            )
        gens = tuple(fan.rays[i] for i in sorted(rays_of_group))
        if la.det(gens) == 0:
            raise InvalidFan("star of the ray does not re-triangulate (degenerate)")
        # the removed ray and every member cone must sit inside the new cone
        for probe in [fan.rays[ray_index]] + [
            fan.rays[i] for c in members for i in c
        ]:
            coords = la.solve_rational(la.transpose(gens), probe)
            if coords is None or any(x < 0 for x in coords):
                raise InvalidFan(
                    "star of the ray does not re-triangulate (merged cone is "
                    "not the union of its pieces)"
                )
        new_cones.append(rays_of_group)

    keep = [i for i in range(fan.n_rays) if i != ray_index]
    remap = {old: new for new, old in enumerate(keep)}
    cones = [frozenset(remap[i] for i in c) for c in rest + new_cones]
    try:
        return make_fan(
            [fan.rays[i] for i in keep],
            cones,
            labels=tuple(fan.labels[i] for i in keep),
        )
    except InvalidFan as exc:
        raise InvalidFan(f"star of the ray does not re-triangulate: {exc}") from exc


def divisor_star_fan(fan: Fan, ray_index: int) -> Fan:
    """Fan of the invariant divisor of a ray, in the quotient lattice.

    Cones are the images of the cones containing the ray under the projection
    along it; the result has dimension ``dim - 1``.
    """
    if fan.dim == 1:
        return point_fan()
    u = la.clearing_transform(fan.rays[ray_index])
    proj = u[1:]
    star_rays: list[int] = []
    for c in fan.cones:
        if ray_index in c:
            for i in sorted(c):
                if i != ray_index and i not in star_rays:
                    star_rays.append(i)
    star_rays.sort()
    images = {i: la.primitive(la.mat_vec(proj, fan.rays[i])) for i in star_rays}
    if len(set(images.values())) != len(images):
        raise InvalidFan("distinct adjacent rays project to the same direction")
    remap = {i: k for k, i in enumerate(star_rays)}
    cones = [
        frozenset(remap[i] for i in c if i != ray_index)
        for c in fan.cones
        if ray_index in c
    ]
    return make_fan(
        [images[i] for i in star_rays],
        cones,
        labels=tuple(fan.labels[i] for i in star_rays),
    )


# ---------------------------------------------------------------------------
# product decomposition


def product_decompose(fan: Fan) -> list[Fan]:
    """Maximal splitting of the fan as a product of lower-dimensional fans.

    Partitions the rays into groups with linearly independent spans; for a
    complete simplicial fan this forces every maximal cone to be a join of
    group traces, and the traces form the factor fans.  Returns ``[fan]``
    when irreducible.
    """
    if fan.dim <= 1 or fan.n_rays == 0:
        return [fan]
    groups: list[set[int]] = [{i} for i in range(fan.n_rays)]

    def span_rank(g: set[int]) -> int:
        return la.rank([fan.rays[i] for i in sorted(g)])

    changed = True
    while changed:
        changed = False
        for a, b in itertools.combinations(range(len(groups)), 2):
            ga, gb = groups[a], groups[b]
            if span_rank(ga | gb) < span_rank(ga) + span_rank(gb):
                groups[a] = ga | gb
                del groups[b]
                changed = True
                break
        if changed:
            continue
        if sum(span_rank(g) for g in groups) > fan.dim and len(groups) > 2:
            # a dependency across three or more groups: merge a minimal set
            for size in range(3, len(groups) + 1):
                found = None
                for combo in itertools.combinations(range(len(groups)), size):
                    union = set().union(*(groups[i] for i in combo))
                    if span_rank(union) < sum(span_rank(groups[i]) for i in combo):
                        found = combo
                        break
                if found:
                    union = set().union(*(groups[i] for i in found))
                    groups = [g for i, g in enumerate(groups) if i not in found]
                    groups.append(union)
                    changed = True
                    break

    if len(groups) == 1:
        return [fan]
    groups.sort(key=min)

    factors = []
    for g in groups:
        members = sorted(g)
        basis = la.saturate_span([fan.rays[i] for i in members])
        coords = la.transpose(basis)
        factor_rays = []
        for i in members:
            sol = la.solve_rational(coords, fan.rays[i])
            assert sol is not None and all(x.denominator == 1 for x in sol)
            factor_rays.append(tuple(int(x) for x in sol))
        remap = {i: k for k, i in enumerate(members)}
        traces = {frozenset(remap[i] for i in c if i in g) for c in fan.cones}
        factors.append(
            make_fan(
                factor_rays,
                sorted(traces, key=sorted),
                labels=tuple(fan.labels[i] for i in members),
            )
        )
    return factors


def product_fan(a: Fan, b: Fan) -> Fan:
    """The fan of the product: block-embedded rays, joined maximal cones."""
    rays = [v + (0,) * b.dim for v in a.rays] + [(0,) * a.dim + v for v in b.rays]
    offset = a.n_rays
    cones = [
        ca | frozenset(i + offset for i in cb)
        for ca in a.cones
        for cb in b.cones
    ]
    labels = tuple(f"a.{lab}" for lab in a.labels) + tuple(
        f"b.{lab}" for lab in b.labels
    )
    return make_fan(rays, cones, labels=labels)


# ---------------------------------------------------------------------------
# canonical form


def canonical_key(fan: Fan, marked_ray: int | None = None):
    """Hashable canonical form: rays sorted, cones relabelled and sorted.

    Equality of keys is on-the-nose fan equality after relabelling, not
    equality up to lattice automorphism.  ``marked_ray`` (for memo keys that
    must remember a divisor) is translated to its position after sorting.
    """
    order = sorted(range(fan.n_rays), key=lambda i: fan.rays[i])
    remap = {old: new for new, old in enumerate(order)}
    rays = tuple(fan.rays[i] for i in order)
    cones = tuple(sorted(tuple(sorted(remap[i] for i in c)) for c in fan.cones))
    if marked_ray is None:
        return (fan.dim, rays, cones)
    return (fan.dim, rays, cones, remap[marked_ray])
