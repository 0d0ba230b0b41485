import pytest
from conftest import FAN_CIRCUIT, FAN_F1, FAN_P1P1, FAN_P2, FAN_S2

from toricdefect import linalg as la
from toricdefect.fan import canonical_key, walls
from toricdefect.intersection import intersection_space, pair, ray_divisor
from toricdefect.mori import (
    ContractionError,
    classify_contraction,
    cone_faces,
    contract,
    extremal_rays,
    flip,
    mori_generators,
)


def ray_with_class(fan, cls):
    (r,) = [r for r in extremal_rays(fan) if r.generator == tuple(cls)]
    return r


# -- generators and extremal rays ---------------------------------------------

def test_mori_generators_s2():
    gens = mori_generators(FAN_S2)
    assert len(gens) == 5
    assert (0, 1, 1, 0, -1) in gens and (1, 0, 0, 0, 1) in gens


def test_mori_generators_p2():
    assert mori_generators(FAN_P2) == [(1, 1, 1)]


def test_mori_generators_f1():
    gens = mori_generators(FAN_F1)
    assert len(gens) == 3  # two of the four walls share the fiber class
    assert (0, 0, 1, 1) in gens


def test_extremal_rays_s2():
    rays = extremal_rays(FAN_S2)
    assert {r.generator for r in rays} == {
        (0, -1, 0, 1, 1),
        (1, 1, 0, -1, 0),
        (0, 1, 1, 0, -1),
    }
    # the remaining two wall classes are sums of extremal ones
    assert la.vec_add((0, -1, 0, 1, 1), (0, 1, 1, 0, -1)) == (0, 0, 1, 1, 0)
    assert la.vec_add((0, -1, 0, 1, 1), (1, 1, 0, -1, 0)) == (1, 0, 0, 0, 1)


def test_extremal_rays_p2_p1p1():
    assert len(extremal_rays(FAN_P2)) == 1
    rays = extremal_rays(FAN_P1P1)
    assert len(rays) == 2
    assert all(r.kind == "fiber" for r in rays)


def test_extremal_rays_subset_of_generators():
    for f in [FAN_P2, FAN_P1P1, FAN_F1, FAN_S2, FAN_CIRCUIT]:
        gens = set(mori_generators(f))
        for r in extremal_rays(f):
            assert r.generator in gens


# -- classification -------------------------------------------------------------

def test_classify_divisorial_smooth_codim2():
    r = ray_with_class(FAN_S2, (0, 1, 1, 0, -1))
    info = classify_contraction(FAN_S2, r)
    assert info.kind == "divisorial"
    assert info.removed_ray == 4
    assert info.center == frozenset({1, 2})
    assert info.smooth_codim2 is True


def test_classify_fiber_f1():
    r = ray_with_class(FAN_F1, (0, 0, 1, 1))
    info = classify_contraction(FAN_F1, r)
    assert info.kind == "fiber"
    assert set(info.kernel_basis) == {(1, 1)}
    assert info.projection == ((1, -1),)


def test_classify_small_circuit():
    r = ray_with_class(FAN_CIRCUIT, (-1, -1, 1, 1, 0))
    info = classify_contraction(FAN_CIRCUIT, r)
    assert info.kind == "small"
    assert info.circuit == (frozenset({2, 3}), frozenset({0, 1}))


def test_trichotomy_exhaustive():
    for f in [FAN_P2, FAN_P1P1, FAN_F1, FAN_S2, FAN_CIRCUIT]:
        for r in extremal_rays(f):
            info = classify_contraction(f, r)
            assert info.kind in {"fiber", "divisorial", "small"}
            negs = sum(1 for x in r.generator if x < 0)
            assert {0: "fiber", 1: "divisorial"}.get(negs, "small") == info.kind


def test_smooth_codim2_k_degree():
    # unit-coefficient codimension-two blow-downs have -K degree exactly 1
    r = ray_with_class(FAN_S2, (0, 1, 1, 0, -1))
    assert sum(r.generator) == 1


# -- contractions -----------------------------------------------------------------

def test_contract_divisorial_s2():
    r = ray_with_class(FAN_S2, (0, 1, 1, 0, -1))
    target, proj = contract(FAN_S2, r)
    assert canonical_key(target) == canonical_key(FAN_F1)
    assert proj == la.identity(2)


def test_contract_fiber_f1():
    r = ray_with_class(FAN_F1, (0, 0, 1, 1))
    target, proj = contract(FAN_F1, r)
    assert target.dim == 1
    assert set(target.rays) == {(1,), (-1,)}
    # the worked projection: (x, y) -> x - y
    assert la.mat_vec(proj, (1, 0)) == (1,)
    assert la.mat_vec(proj, (0, 1)) == (-1,)
    assert la.mat_vec(proj, (-1, -1)) == (0,)
    assert la.mat_vec(proj, (1, 1)) == (0,)


def test_contract_p2_to_point():
    (r,) = extremal_rays(FAN_P2)
    target, _ = contract(FAN_P2, r)
    assert target.dim == 0
    assert intersection_space(target).rho == 0


def test_contract_rejects_small():
    r = ray_with_class(FAN_CIRCUIT, (-1, -1, 1, 1, 0))
    with pytest.raises(ContractionError, match="flip"):
        contract(FAN_CIRCUIT, r)


def test_rho_drop_invariant():
    for f in [FAN_S2, FAN_F1, FAN_P1P1]:
        rho = intersection_space(f).rho
        for r in extremal_rays(f):
            if r.kind == "small":
                continue
            target, _ = contract(f, r)
            assert intersection_space(target).rho == rho - 1


# -- flips -------------------------------------------------------------------------

def test_flip_circuit():
    r = ray_with_class(FAN_CIRCUIT, (-1, -1, 1, 1, 0))
    flipped = flip(FAN_CIRCUIT, r)
    assert flipped.rays == FAN_CIRCUIT.rays
    assert frozenset({0, 2, 3}) in flipped.cones  # acd
    assert frozenset({1, 2, 3}) in flipped.cones  # bcd
    assert frozenset({0, 1, 2}) not in flipped.cones
    assert frozenset({0, 1, 3}) not in flipped.cones


def test_flip_involution():
    r = ray_with_class(FAN_CIRCUIT, (-1, -1, 1, 1, 0))
    flipped = flip(FAN_CIRCUIT, r)
    back_ray = ray_with_class(flipped, (1, 1, -1, -1, 0))
    assert canonical_key(flip(flipped, back_ray)) == canonical_key(FAN_CIRCUIT)


def test_flip_reverses_pairing_sign():
    r = ray_with_class(FAN_CIRCUIT, (-1, -1, 1, 1, 0))
    flipped = flip(FAN_CIRCUIT, r)
    d_a = ray_divisor(FAN_CIRCUIT, 0)
    before = pair(d_a, r.generator)
    after_class = next(
        w.relation for w in walls(flipped) if w.rays == frozenset({2, 3})
    )
    assert after_class == tuple(-x for x in r.generator)
    assert pair(d_a, after_class) == -before


def test_flip_preserves_rho_and_rays():
    r = ray_with_class(FAN_CIRCUIT, (-1, -1, 1, 1, 0))
    flipped = flip(FAN_CIRCUIT, r)
    assert intersection_space(flipped).rho == intersection_space(FAN_CIRCUIT).rho
    assert flipped.rays == FAN_CIRCUIT.rays


# -- cone faces ----------------------------------------------------------------------

def test_cone_faces_s2():
    faces = cone_faces(FAN_S2, 2)
    assert len(faces) == 3  # exactly the extremal rays
    gens = mori_generators(FAN_S2)
    face_gens = {tuple(gens[i] for i in f.generator_indices) for f in faces}
    assert face_gens == {
        ((0, -1, 0, 1, 1),),
        ((1, 1, 0, -1, 0),),
        ((0, 1, 1, 0, -1),),
    }


def test_cone_faces_whole_cone():
    faces = cone_faces(FAN_P2, 0)
    assert len(faces) == 1
    assert faces[0].dim == 1


def test_cone_faces_p1p1_facets():
    faces = cone_faces(FAN_P1P1, 1)
    assert len(faces) == 2


def test_cone_faces_match_extremal_rays():
    for f in [FAN_P1P1, FAN_F1, FAN_S2, FAN_CIRCUIT]:
        rho = intersection_space(f).rho
        gens = mori_generators(f)
        one_dim = cone_faces(f, rho - 1)
        face_rays = set()
        for face in one_dim:
            span = [gens[i] for i in face.generator_indices]
            assert la.rank(span) == 1
            face_rays.add(la.primitive(span[0]))
        assert face_rays == {r.generator for r in extremal_rays(f)}
