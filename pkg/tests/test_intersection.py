import itertools
import random

from conftest import FAN_F1, FAN_P1P1, FAN_P2, FAN_P3, FAN_S2, FAN_S3

from toricdefect import linalg as la
from toricdefect.fan import walls
from toricdefect.intersection import (
    anticanonical,
    intersection_space,
    is_nef,
    pair,
    ray_divisor,
    wall_class,
)

DEL_PEZZOS = [FAN_P2, FAN_P1P1, FAN_F1, FAN_S2, FAN_S3]


def wall_at(fan, ray_indices):
    (w,) = [w for w in walls(fan) if w.rays == frozenset(ray_indices)]
    return w


def test_picard_numbers():
    assert intersection_space(FAN_P2).rho == 1
    assert intersection_space(FAN_S2).rho == 3
    assert intersection_space(FAN_P1P1).rho == 2


def test_wall_classes_s2():
    f = FAN_S2
    assert wall_class(f, wall_at(f, [4])) == (0, 1, 1, 0, -1)
    assert sum(wall_class(f, wall_at(f, [4]))) == 1  # blow-down ray degree
    assert wall_class(f, wall_at(f, [0])) == (0, 0, 1, 1, 0)
    assert sum(wall_class(f, wall_at(f, [0]))) == 2  # conic fiber degree
    assert wall_class(f, wall_at(f, [2])) == (1, 0, 0, 0, 1)


def test_wall_class_p2():
    for w in walls(FAN_P2):
        assert wall_class(FAN_P2, w) == (1, 1, 1)
        assert pair(anticanonical(FAN_P2), w.relation) == 3


def test_pair_examples():
    f = FAN_S2
    e = wall_class(f, wall_at(f, [4]))
    assert pair(ray_divisor(f, 4), e) == -1  # exceptional self-intersection
    assert pair(anticanonical(f), wall_class(f, wall_at(f, [0]))) == 2
    assert pair(ray_divisor(f, 0), (0,) * 5) == 0


def test_anticanonical_degree_is_coefficient_sum():
    for f in DEL_PEZZOS + [FAN_P3]:
        for w in walls(f):
            assert pair(anticanonical(f), w.relation) == sum(w.relation)


def test_is_nef_examples():
    f = FAN_S2
    assert is_nef(f, anticanonical(f), strict=True)
    degrees = sorted(sum(w.relation) for w in walls(f))
    assert degrees == [1, 1, 1, 2, 2]
    d = tuple(a - b - c for a, b, c in zip(anticanonical(f), ray_divisor(f, 0), ray_divisor(f, 4)))
    assert d == (0, 1, 1, 1, 0)
    # per-wall degrees of -K - D_v1 - D_v5 on walls v1..v5 are (2, 0, 0, 0, 2)
    by_ray = {min(w.rays): pair(d, w.relation) for w in walls(f)}
    assert [by_ray[i] for i in range(5)] == [2, 0, 0, 0, 2]
    assert is_nef(f, d) and not is_nef(f, d, strict=True)
    assert not is_nef(f, ray_divisor(f, 4))


def test_pair_well_defined_modulo_row_space():
    # adding a character row to a divisor never changes any pairing
    rng = random.Random(7)
    for f in DEL_PEZZOS + [FAN_P3]:
        rows = f.ray_matrix()
        for _ in range(10):
            m = [rng.randint(-3, 3) for _ in range(f.dim)]
            shift = tuple(la.dot(m, v) for v in f.rays)
            div = tuple(rng.randint(-4, 4) for _ in range(f.n_rays))
            for w in walls(f):
                assert pair(div, w.relation) == pair(la.vec_add(div, shift), w.relation)
        del rows


def test_fiber_decomposition_on_pentagon():
    # the conic wall class at v1 is the coordinatewise sum of the classes at
    # v5 and v2 (the two components of the reducible fiber)
    f = FAN_S2
    ell = wall_class(f, wall_at(f, [0]))
    e = wall_class(f, wall_at(f, [4]))
    e_hat = wall_class(f, wall_at(f, [1]))
    assert ell == la.vec_add(e, e_hat)


def test_del_pezzo_minus_one_curves():
    # on each toric del Pezzo, walls of anticanonical degree 1 pair -1 with
    # their own ray divisor
    for f in DEL_PEZZOS:
        for w in walls(f):
            if sum(w.relation) == 1:
                (v,) = [i for i in w.rays if w.relation[i] < 0] or [None]
                if v is not None:
                    assert pair(ray_divisor(f, v), w.relation) == -1


def test_bilinearity():
    f = FAN_S2
    ws = walls(f)
    c1, c2 = ws[0].relation, ws[1].relation
    d = tuple(itertools.islice(itertools.cycle([1, -2, 3]), f.n_rays))
    assert pair(d, la.vec_add(c1, c2)) == pair(d, c1) + pair(d, c2)
