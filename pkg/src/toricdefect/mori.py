"""The Mori cone of a complete simplicial fan and its contractions.

Wall relations generate the cone of effective curve classes; extreme rays are
certified exactly, by infeasibility of a rational nonnegative-combination
system rather than by any floating-point test.  Reid's trichotomy reads the
contraction type off the sign pattern of the primitive relation: no negative
entries means fiber type, exactly one means divisorial, two or more means
small.  Divisorial contractions and flips are executed as fan surgery;
fiber-type contractions as quotients by the saturated span of the relation's
support.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import linalg as la
from .fan import Fan, InvalidFan, make_fan, point_fan, remove_ray, walls
from .intersection import CurveClass, intersection_space
from .linalg import Matrix, Vector

__all__ = [
    "ConeFace",
    "ContractionError",
    "ContractionInfo",
    "ExtremalRay",
    "classify_contraction",
    "cone_faces",
    "contract",
    "extremal_rays",
    "flip",
    "mori_generators",
]


class ContractionError(RuntimeError):
    """A contraction or flip could not be executed on the fan."""


@dataclass(frozen=True)
class ExtremalRay:
    generator: CurveClass            # primitive
    wall_indices: tuple[int, ...]    # indices into walls(fan) carrying this class
    kind: str                        # "fiber" | "divisorial" | "small"
    k_degree_sign: int               # sign of -K . generator

    @property
    def negative_support(self) -> tuple[int, ...]:
        return tuple(i for i, x in enumerate(self.generator) if x < 0)

    @property
    def positive_support(self) -> tuple[int, ...]:
        return tuple(i for i, x in enumerate(self.generator) if x > 0)


@dataclass(frozen=True)
class ContractionInfo:
    kind: str
    # divisorial
    removed_ray: int | None = None
    center: frozenset[int] | None = None
    center_weights: tuple | None = None    # removed ray = sum w_i v_i over sorted center
    smooth_codim2: bool | None = None
    # fiber
    kernel_basis: tuple[Vector, ...] | None = None
    projection: Matrix | None = None
    # small
    circuit: tuple[frozenset[int], frozenset[int]] | None = None  # (J+, J-)


def _kind_of(relation: CurveClass) -> str:
    negatives = sum(1 for x in relation if x < 0)
    if negatives == 0:
        return "fiber"
    if negatives == 1:
        return "divisorial"
    return "small"


def mori_generators(fan: Fan) -> list[CurveClass]:
    """Deduplicated wall classes, sorted; they generate the cone of curves."""
    return sorted({w.relation for w in walls(fan)})


@lru_cache(maxsize=None)
def extremal_rays(fan: Fan) -> tuple[ExtremalRay, ...]:
    """Extreme rays of the cone spanned by the wall classes.

    A generator is extreme iff it is not a nonnegative rational combination
    of the other generators (exact simplex feasibility).
    """
    gens = mori_generators(fan)
    ws = walls(fan)
    out = []
    for g in gens:
        others = [h for h in gens if h != g]
        if others and la.solve_nonnegative(others, g) is not None:
            continue
        supporting = tuple(i for i, w in enumerate(ws) if w.relation == g)
        out.append(
            ExtremalRay(
                generator=g,
                wall_indices=supporting,
                kind=_kind_of(g),
                k_degree_sign=(sum(g) > 0) - (sum(g) < 0),
            )
        )
    return tuple(sorted(out, key=lambda r: r.generator))


def classify_contraction(fan: Fan, ray: ExtremalRay) -> ContractionInfo:
    """Reid's trichotomy for the contraction of an extremal ray."""
    ws = walls(fan)
    if not ray.wall_indices:
        raise ContractionError("extremal ray without supporting walls")
    for i in ray.wall_indices:
        if ws[i].relation != ray.generator:
            raise ContractionError("supporting walls carry non-proportional classes")

    rel = ray.generator
    if ray.kind == "fiber":
        support = [i for i, x in enumerate(rel) if x != 0]
        kernel = la.saturate_span([fan.rays[i] for i in support])
        proj = _quotient_projection(fan.dim, kernel)
        return ContractionInfo(kind="fiber", kernel_basis=kernel, projection=proj)

    if ray.kind == "divisorial":
        (removed,) = [i for i, x in enumerate(rel) if x < 0]
        center = frozenset(i for i, x in enumerate(rel) if x > 0)
        weights = tuple(Fraction(rel[i], -rel[removed]) for i in sorted(center))
        smooth = False
        if sorted(rel[i] for i in center) == [1, 1] and rel[removed] == -1:
            try:
                target = remove_ray(fan, removed, wall_class=rel)
            except InvalidFan:
                target = None
            if target is not None:
                remap = _index_remap(fan, removed)
                image_center = frozenset(remap[i] for i in center)
                smooth = all(
                    abs(la.det(target.cone_vectors(c))) == 1
                    for c in target.cones
                    if image_center <= c
                )
        return ContractionInfo(
            kind="divisorial",
            removed_ray=removed,
            center=center,
            center_weights=weights,
            smooth_codim2=smooth,
        )

    j_plus = frozenset(i for i, x in enumerate(rel) if x > 0)
    j_minus = frozenset(i for i, x in enumerate(rel) if x < 0)
    return ContractionInfo(kind="small", circuit=(j_plus, j_minus))


def _index_remap(fan: Fan, removed: int) -> dict[int, int]:
    keep = [i for i in range(fan.n_rays) if i != removed]
    return {old: new for new, old in enumerate(keep)}


def _quotient_projection(dim: int, kernel: tuple[Vector, ...]) -> Matrix:
    """Canonical projection Z^dim -> Z^(dim-k) with the given saturated kernel."""
    k = len(kernel)
    if k == 0:
        return la.identity(dim)
    if k == dim:
        return ()
    perp = la.integer_kernel_basis(kernel)  # functionals vanishing on the kernel
    assert len(perp) == dim - k
    return la.hermite_row_basis(perp)


def contract(fan: Fan, ray: ExtremalRay) -> tuple[Fan, Matrix]:
    """Execute a divisorial or fiber-type extremal contraction.

    Returns the target fan and the lattice projection (identity for the
    divisorial case, where only a ray disappears).  Small rays are rejected:
    use :func:`flip`.
    """
    info = classify_contraction(fan, ray)
    if info.kind == "small":
        raise ContractionError("small extremal ray: contract has no fan target, use flip")
    if info.kind == "divisorial":
        try:
            target = remove_ray(fan, info.removed_ray, wall_class=ray.generator)
        except InvalidFan as exc:
            raise ContractionError(f"divisorial contraction failed: {exc}") from exc
        _check_rho_drop(fan, target, 1)
        return target, la.identity(fan.dim)

    proj = info.projection
    new_dim = fan.dim - len(info.kernel_basis)
    if new_dim == 0:
        return point_fan(), proj
    images: dict[int, Vector] = {}
    survivors: list[int] = []
    for i, v in enumerate(fan.rays):
        img = la.mat_vec(proj, v)
        if la.is_zero_vector(img):
            continue
        if la.primitive(img) != img:
            raise ContractionError(
                f"ray {fan.labels[i]} maps to the non-primitive vector {img}"
            )
        images[i] = img
        survivors.append(i)
    if len({images[i] for i in survivors}) != len(survivors):
        raise ContractionError("distinct rays collide in the quotient lattice")
    remap = {i: k for k, i in enumerate(survivors)}
    cones = {frozenset(remap[i] for i in c if i in images) for c in fan.cones}
    try:
        target = make_fan(
            [images[i] for i in survivors],
            sorted(cones, key=sorted),
            labels=tuple(fan.labels[i] for i in survivors),
        )
    except InvalidFan as exc:
        raise ContractionError(f"quotient is not a valid fan: {exc}") from exc
    _check_rho_drop(fan, target, 1)
    return target, proj


def _check_rho_drop(source: Fan, target: Fan, expected: int) -> None:
    drop = intersection_space(source).rho - intersection_space(target).rho
    if drop != expected:
        raise ContractionError(
            f"contraction changed the Picard number by {drop}, expected {expected}"
        )


def flip(fan: Fan, ray: ExtremalRay) -> Fan:
    """Replace the triangulation of a small ray's circuit by the opposite one.

    With circuit ``S = J+ u J-``, every maximal cone of the form
    ``(S \\ {i}) u T`` with ``i in J+`` is replaced by the cones
    ``(S \\ {j}) u T`` with ``j in J-``.  Rays are unchanged and the flipped
    curve class reverses sign against every divisor.
    """
    info = classify_contraction(fan, ray)
    if info.kind != "small":
        raise ContractionError(f"flip requires a small ray, got {info.kind}")
    j_plus, j_minus = info.circuit
    if len(j_minus) < 2 or len(j_plus) < 2:
        raise ContractionError("degenerate circuit: flips need |J+|, |J-| >= 2")
    support = j_plus | j_minus
    removed: list[frozenset[int]] = []
    links: set[frozenset[int]] = set()
    links_by_i: dict[int, set[frozenset[int]]] = {i: set() for i in j_plus}
    for c in fan.cones:
        hit = [i for i in j_plus if support - {i} <= c]
        if hit:
            (i,) = hit  # a simplicial cone cannot contain the whole circuit
            link = c - support
            removed.append(c)
            links.add(link)
            links_by_i[i].add(link)
    if not removed:
        raise ContractionError("no maximal cone contains a wall of the circuit")
    if any(links_by_i[i] != links for i in j_plus):
        raise ContractionError("circuit links are inconsistent; not a flippable ray")
    added = [
        (support - {j}) | link for j in sorted(j_minus) for link in sorted(links, key=sorted)
    ]
    cones = [c for c in fan.cones if c not in set(removed)] + added
    try:
        return make_fan(fan.rays, cones, labels=fan.labels)
    except InvalidFan as exc:
        raise ContractionError(f"flip produced an invalid fan: {exc}") from exc


# ---------------------------------------------------------------------------
# faces of the Mori cone (double description)


@dataclass(frozen=True)
class ConeFace:
    """A face of the cone of curves, recorded by the generators it contains."""

    generator_indices: tuple[int, ...]
    dim: int


def _primitive_fraction_vector(v) -> Vector:
    from math import gcd

    denom = 1
    for x in v:
        d = Fraction(x).denominator
        denom = denom * d // gcd(denom, d)
    return la.primitive(tuple(int(Fraction(x) * denom) for x in v))


def _facet_normals_dual(gens_coords: list[Vector], dim: int) -> list[Vector]:
    """Extreme rays of ``{y : <g, y> >= 0 for all g}``: the facet normals.

    Incremental double description with the rank-based adjacency test.  The
    cone of curves of a projective fan is full-dimensional and pointed, so
    its dual is as well; a final support check guards against misuse.
    """
    basis_idx: list[int] = []
    for i, g in enumerate(gens_coords):
        if la.rank([gens_coords[j] for j in basis_idx] + [g]) > len(basis_idx):
            basis_idx.append(i)
        if len(basis_idx) == dim:
            break
    if len(basis_idx) < dim:
        raise ContractionError("curve classes do not span: cone not full-dimensional")
    seed_inv = la.invert_rational(tuple(gens_coords[i] for i in basis_idx))
    rays = [
        _primitive_fraction_vector(tuple(seed_inv[r][col] for r in range(dim)))
        for col in range(dim)
    ]

    processed = [gens_coords[i] for i in basis_idx]
    for i, g in enumerate(gens_coords):
        if i in basis_idx:
            continue
        pos = [r for r in rays if la.dot(g, r) > 0]
        zero = [r for r in rays if la.dot(g, r) == 0]
        neg = [r for r in rays if la.dot(g, r) < 0]
        if not neg:
            processed.append(g)
            continue
        new_rays: list[Vector] = []
        for rp, rn in itertools.product(pos, neg):
            tight = [h for h in processed if la.dot(h, rp) == 0 and la.dot(h, rn) == 0]
            if la.rank(tight) < dim - 2:
                continue
            combo = la.vec_sub(
                la.vec_scale(la.dot(g, rp), rn), la.vec_scale(la.dot(g, rn), rp)
            )
            combo = la.primitive(combo)
            if not la.is_zero_vector(combo):
                new_rays.append(combo)
        rays = pos + zero + list(dict.fromkeys(new_rays))
        processed.append(g)

    normals = sorted(set(rays))
    for n in normals:
        if any(la.dot(n, g) < 0 for g in gens_coords):
            raise ContractionError("double description produced a non-supporting normal")
    return normals


def cone_faces(fan: Fan, codim: int) -> list[ConeFace]:
    """All faces of the Mori cone of the given codimension.

    Faces are found by exact facet enumeration (double description) followed
    by closure under intersection; each face is reported as the sorted set of
    cone generators (deduplicated wall classes) lying on it.
    """
    space = intersection_space(fan)
    rho = space.rho
    gens = mori_generators(fan)
    if rho == 0:
        return [ConeFace(generator_indices=(), dim=0)] if codim == 0 else []
    basis_cols = la.transpose(space.basis)
    coords = []
    for g in gens:
        sol = la.solve_rational(basis_cols, g)
        assert sol is not None and all(x.denominator == 1 for x in sol)
        coords.append(tuple(int(x) for x in sol))
    normals = _facet_normals_dual(coords, rho)

    def tight_set(normal) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(coords) if la.dot(normal, c) == 0)

    closure: set[tuple[int, ...]] = {tight_set(n) for n in normals}
    changed = True
    while changed:
        changed = False
        for a, b in itertools.combinations(sorted(closure), 2):
            inter = tuple(sorted(set(a) & set(b)))
            if inter not in closure:
                closure.add(inter)
                changed = True
                break
    closure.add(tuple(range(len(gens))))

    out = []
    for s in sorted(closure):
        d = la.rank([coords[i] for i in s])
        if rho - d == codim:
            out.append(ConeFace(generator_indices=s, dim=d))
    return out
