"""Shared fan fixtures.

All expected values asserted against these were derived by hand from the
wall-relation arithmetic before the implementation existed; see the inline
comments next to each assertion.
"""

from toricdefect.fan import make_fan

# P^1: rays (1), (-1)
FAN_P1 = make_fan([(1,), (-1,)], [{0}, {1}])

# P^2: rays e1, e2, -e1-e2
FAN_P2 = make_fan([(1, 0), (0, 1), (-1, -1)], [{0, 1}, {1, 2}, {2, 0}])

# P^1 x P^1: rays (1,0), (-1,0), (0,1), (0,-1)
FAN_P1P1 = make_fan(
    [(1, 0), (-1, 0), (0, 1), (0, -1)],
    [{0, 2}, {2, 1}, {1, 3}, {3, 0}],
)

# Blow-up of P^2 at one point: P^2 rays plus (1,1)
FAN_F1 = make_fan(
    [(1, 0), (0, 1), (-1, -1), (1, 1)],
    [{0, 3}, {3, 1}, {1, 2}, {2, 0}],
)

# Blow-up of P^2 at two points (degree-7 del Pezzo), the worked pentagon:
# rays v1..v5 = (1,0), (0,1), (-1,-1), (1,1), (-1,0)
FAN_S2 = make_fan(
    [(1, 0), (0, 1), (-1, -1), (1, 1), (-1, 0)],
    [{0, 3}, {3, 1}, {1, 4}, {4, 2}, {2, 0}],
)

# Blow-up of P^2 at three points (degree-6 del Pezzo), the hexagon
FAN_S3 = make_fan(
    [(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)],
    [{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}],
)

# P^3
FAN_P3 = make_fan(
    [(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1)],
    [{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}],
)

# P^2 x P^1 embedded in Z^3
FAN_P2xP1 = make_fan(
    [(1, 0, 0), (0, 1, 0), (-1, -1, 0), (0, 0, 1), (0, 0, -1)],
    [{0, 1, 3}, {1, 2, 3}, {2, 0, 3}, {0, 1, 4}, {1, 2, 4}, {2, 0, 4}],
)

# Three-fold with a small wall: rays a, b, c, d with c + d - a - b = 0,
# cones abc, abd, completed by the ray r = -(a + b).
FAN_CIRCUIT = make_fan(
    [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, -1), (-1, -1, 0)],
    [{0, 1, 2}, {0, 1, 3}, {0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4}],
)
