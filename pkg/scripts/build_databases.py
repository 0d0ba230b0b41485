#!/usr/bin/env python3
"""Regenerate the bundled smooth toric Fano databases.

Strategy: seed each dimension with projective spaces, products of
lower-dimensional entries, projectivized split bundles over Fano bases with
small twists, and the centrally symmetric (del Pezzo type) vertex sets; then
close under equivariant blow-ups (star subdivisions at faces) and blow-downs,
keeping only smooth Fano fans, deduplicating up to unimodular lattice
isomorphism.  The expected class counts in dimensions 2, 3, 4 are 5, 18 and
124; the script asserts them so a regeneration that drifts is loud.

Writes data/surfaces.txt, data/fano3.txt, data/fano4.txt.  Run from the
repository root:  python scripts/build_databases.py
"""

from __future__ import annotations

import itertools
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from toricdefect import linalg as la
from toricdefect.fan import (
    Fan,
    InvalidFan,
    canonical_key,
    fan_from_polytope,
    local_properties,
    make_fan,
    product_fan,
    remove_ray,
    star_subdivision,
    walls,
)

EXPECTED = {1: 1, 2: 5, 3: 18, 4: 124}


def is_smooth_fano(f: Fan) -> bool:
    p = local_properties(f)
    return p.smooth and p.fano


def fingerprint(f: Fan):
    degs = tuple(sorted(sum(w.relation) for w in walls(f)))
    return (f.dim, f.n_rays, len(f.cones), degs)


def isomorphic(f: Fan, g: Fan) -> bool:
    if fingerprint(f) != fingerprint(g):
        return False
    f_rays = set(f.rays)
    g_rays = set(g.rays)
    f_cones = {frozenset(f.rays[i] for i in c) for c in f.cones}
    g_cones = {frozenset(g.rays[i] for i in c) for c in g.cones}
    sigma = sorted(f.cones[0])
    base = tuple(f.rays[i] for i in sigma)
    base_inv = la.invert_rational(la.transpose(base))
    for tau in g.cones:
        for perm in itertools.permutations(sorted(tau)):
            target = tuple(g.rays[i] for i in perm)
            # want integer unimodular M with M * base_vec = target_vec
            m_rows = []
            ok = True
            cols = la.transpose(target)
            for row_idx in range(f.dim):
                row = tuple(
                    sum(base_inv[j][k] * cols[row_idx][j] for j in range(f.dim))
                    for k in range(f.dim)
                )
                if any(x.denominator != 1 for x in row):
                    ok = False
                    break
                m_rows.append(tuple(int(x) for x in row))
            if not ok:
                continue
            m = tuple(m_rows)
            if abs(la.det(m)) != 1:
                continue
            mapped = {la.mat_vec(m, v) for v in f_rays}
            if mapped != g_rays:
                continue
            mapped_cones = {
                frozenset(la.mat_vec(m, v) for v in cone) for cone in f_cones
            }
            if mapped_cones == g_cones:
                return True
    return False


class Collection:
    def __init__(self):
        self.classes: list[Fan] = []
        self.keys: set = set()
        self.by_fp: dict = {}

    def add(self, f: Fan) -> bool:
        key = canonical_key(f)
        if key in self.keys:
            return False
        fp = fingerprint(f)
        for other in self.by_fp.get(fp, []):
            if isomorphic(f, other):
                self.keys.add(key)
                return False
        self.keys.add(key)
        self.classes.append(f)
        self.by_fp.setdefault(fp, []).append(f)
        return True


def projective_space(n: int) -> Fan:
    verts = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    verts.append(tuple([-1] * n))
    return fan_from_polytope(verts)


def p1_bundles(base: Fan):
    """P(O + O(D)) over the base for small effective twists D."""
    m = base.n_rays
    supports = [()]
    supports += [(i,) for i in range(m)]
    supports += list(itertools.combinations(range(m), 2))
    for sup in supports:
        for vals in itertools.product((1, 2), repeat=len(sup)):
            twist = [0] * m
            for i, v in zip(sup, vals):
                twist[i] = v
            rays = [bv + (a,) for bv, a in zip(base.rays, twist)]
            rays += [(0,) * base.dim + (1,), (0,) * base.dim + (-1,)]
            cones = []
            for c in base.cones:
                cones.append(set(c) | {m})
                cones.append(set(c) | {m + 1})
            try:
                f = make_fan(rays, cones)
            except InvalidFan:
                continue
            yield f


def p2_bundles(base: Fan):
    """P(O + O(D1) + O(D2)) over the base for small twists."""
    m = base.n_rays
    fiber = [(1, 0), (0, 1), (-1, -1)]
    supports = [()] + [(i,) for i in range(m)] + list(
        itertools.combinations(range(m), 2)
    )
    for sup in supports:
        for vals in itertools.product(
            [(0, 1), (1, 0), (1, 1), (0, 2), (2, 0), (1, 2), (2, 1), (2, 2)],
            repeat=len(sup),
        ):
            twist = [(0, 0)] * m
            for i, v in zip(sup, vals):
                twist[i] = v
            rays = [bv + t for bv, t in zip(base.rays, twist)]
            rays += [(0,) * base.dim + fv for fv in fiber]
            cones = []
            for c in base.cones:
                for pair in itertools.combinations(range(3), 2):
                    cones.append(set(c) | {m + pair[0], m + pair[1]})
            try:
                f = make_fan(rays, cones)
            except InvalidFan:
                continue
            yield f


def p3_bundles_over_p1():
    for twist in itertools.product(range(0, 3), repeat=3):
        rays = [(1,) + twist, (-1, 0, 0, 0)]
        fiber = [
            (0, 1, 0, 0),
            (0, 0, 1, 0),
            (0, 0, 0, 1),
            (0, -1, -1, -1),
        ]
        rays += fiber
        cones = []
        for b in (0, 1):
            for trip in itertools.combinations(range(4), 3):
                cones.append({b} | {2 + t for t in trip})
        try:
            yield make_fan(rays, cones)
        except InvalidFan:
            continue


def del_pezzo_type(n: int):
    """Centrally symmetric candidates: +-e_i with one or both of +-(1..1)."""
    e = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    ones = tuple([1] * n)
    neg = [tuple(-x for x in v) for v in e]
    for extra in ([ones], [tuple(-x for x in ones)], [ones, tuple(-x for x in ones)]):
        verts = e + neg + extra
        try:
            yield fan_from_polytope(verts)
        except InvalidFan:
            continue


def closure(seeds: list[Fan], dim: int) -> list[Fan]:
    coll = Collection()
    frontier = []
    for f in seeds:
        if f.dim == dim and is_smooth_fano(f) and coll.add(f):
            frontier.append(f)
    while frontier:
        f = frontier.pop()
        # blow-ups at faces of every size >= 2
        faces = set()
        for c in f.cones:
            for size in range(2, dim + 1):
                faces.update(
                    frozenset(s) for s in itertools.combinations(sorted(c), size)
                )
        for face in sorted(faces, key=sorted):
            try:
                g = star_subdivision(f, face)
            except InvalidFan:
                continue
            if is_smooth_fano(g) and coll.add(g):
                frontier.append(g)
        # blow-downs at every ray
        for i in range(f.n_rays):
            try:
                g = remove_ray(f, i)
            except InvalidFan:
                continue
            if is_smooth_fano(g) and coll.add(g):
                frontier.append(g)
    return coll.classes


def build_dimension(dim: int, lower: dict[int, list[Fan]]) -> list[Fan]:
    seeds: list[Fan] = [projective_space(dim)]
    for d1 in range(1, dim):
        d2 = dim - d1
        if d2 < 1 or d2 > d1:
            continue
        for a in lower[d1]:
            for b in lower[d2]:
                seeds.append(product_fan(a, b))
    if dim >= 2:
        for base in lower[dim - 1]:
            seeds.extend(p1_bundles(base))
    if dim >= 3:
        for base in lower[dim - 2]:
            seeds.extend(p2_bundles(base))
    if dim == 4:
        seeds.extend(p3_bundles_over_p1())
    seeds.extend(del_pezzo_type(dim))
    return closure(seeds, dim)


def sort_key(f: Fan):
    return (f.n_rays, canonical_key(f))


def write_file(path: str, fans: list[Fan], prefix: str, names: dict | None = None):
    fans = sorted(fans, key=sort_key)
    lines = [
        "# smooth toric Fano varieties, as vertex sets of smooth Fano polytopes",
        f"# {len(fans)} entries, generated by scripts/build_databases.py",
        "",
    ]
    for k, f in enumerate(fans, start=1):
        name = None
        if names:
            for candidate_name, candidate in names.items():
                if canonical_key(f) == canonical_key(candidate) or isomorphic(
                    f, candidate
                ):
                    name = candidate_name
                    break
        vid = name or f"{prefix}{k:0{len(str(len(fans)))}d}"
        # polytope mode must reproduce the fan
        reconstructed = fan_from_polytope(f.rays)
        assert canonical_key(reconstructed) == canonical_key(f), vid
        lines.append(f"id={vid} dim={f.dim} rays={f.n_rays}")
        for v in f.rays:
            lines.append(" ".join(str(x) for x in v))
        lines.append("")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines))
    print(f"wrote {path}: {len(fans)} entries")


def main() -> None:
    here = os.path.dirname(os.path.abspath(__file__))
    data = os.path.join(here, "..", "data")
    os.makedirs(data, exist_ok=True)

    p1 = make_fan([(1,), (-1,)], [{0}, {1}])
    lower = {1: [p1]}
    for dim in (2, 3, 4):
        fans = build_dimension(dim, lower)
        lower[dim] = fans
        print(f"dim {dim}: {len(fans)} classes (expected {EXPECTED[dim]})")
        if len(fans) != EXPECTED[dim]:
            print("  WARNING: class count differs from the classification")

    p2 = projective_space(2)
    p1p1 = product_fan(p1, p1)
    f1 = star_subdivision(p2, {0, 1})
    s2 = star_subdivision(f1, {1, 2})
    # the hexagon: the unique smooth Fano blow-up of s2 at an invariant point
    s3 = None
    for c in s2.cones:
        g = star_subdivision(s2, c)
        if is_smooth_fano(g) and len(g.cones) == 6:
            s3 = g
            break
    assert s3 is not None
    names2 = {"P2": p2, "P1xP1": p1p1, "Bl1P2": f1, "Bl2P2": s2, "Bl3P2": s3}

    write_file(os.path.join(data, "surfaces.txt"), lower[2], "F2-", names2)
    write_file(os.path.join(data, "fano3.txt"), lower[3], "F3-")
    write_file(os.path.join(data, "fano4.txt"), lower[4], "F4-")


if __name__ == "__main__":
    main()
