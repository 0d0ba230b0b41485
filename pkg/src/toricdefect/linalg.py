"""Exact integer and rational linear algebra over lattices.

Every routine works with arbitrary-precision Python ints and
:class:`fractions.Fraction`; nothing in this package ever touches floating
point.  Matrices are row-major sequences of sequences; vectors are tuples.

Conventions baked in here and relied on everywhere else:

* kernel bases are saturated (they generate the full lattice kernel, not a
  finite-index sublattice) and are returned in Hermite-reduced form with
  positive pivots, so class coordinates are reproducible across runs;
* Smith normal form returns ``(U, S, V)`` with ``U * M * V == S``.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Vector = tuple[int, ...]
Matrix = tuple[Vector, ...]


# ---------------------------------------------------------------------------
# vector / matrix basics


def vec_add(a: Sequence, b: Sequence) -> tuple:
    return tuple(x + y for x, y in zip(a, b, strict=True))

def vec_sub(a: Sequence, b: Sequence) -> tuple:
    return tuple(x - y for x, y in zip(a, b, strict=True))

def vec_scale(c, a: Sequence) -> tuple:
    return tuple(c * x for x in a)

def vec_neg(a: Sequence) -> tuple:
    return tuple(-x for x in a)

def dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b, strict=True))

def is_zero_vector(a: Sequence) -> bool:
    return all(x == 0 for x in a)


def primitive(v: Sequence[int]) -> Vector:
    """Divide an integer vector by the gcd of its entries (direction kept)."""
    g = 0
    for x in v:
        g = gcd(g, x)
    if g <= 1:
        return tuple(v)
    return tuple(x // g for x in v)


def mat_vec(m: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(dot(row, v) for row in m)

def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    bt = list(zip(*b))
    return tuple(tuple(dot(row, col) for col in bt) for row in a)

def transpose(m: Sequence[Sequence]) -> Matrix:
    return tuple(zip(*m))

def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def det(m: Sequence[Sequence[int]]) -> int:
    """Integer determinant via the Bareiss fraction-free algorithm."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Smith normal form


def _swap_rows(a, u, i, j):
    a[i], a[j] = a[j], a[i]
    u[i], u[j] = u[j], u[i]

def _swap_cols(a, v, i, j):
    for row in a:
        row[i], row[j] = row[j], row[i]
    for row in v:
        row[i], row[j] = row[j], row[i]

def _add_row(a, u, dst, src, c):
    a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
    u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

def _add_col(a, v, dst, src, c):
    for row in a:
        row[dst] += c * row[src]
    for row in v:
        row[dst] += c * row[src]


def smith_normal_form(m: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Return unimodular ``(U, S, V)`` with ``U*M*V == S`` diagonal, d1 | d2 | ...

    Diagonal entries are nonnegative and satisfy the divisibility chain.
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    a = [list(r) for r in m]
    u = [list(r) for r in identity(rows)]
    v = [list(r) for r in identity(cols)]

    def clear_at(t: int) -> None:
        # Bring the entry of minimal absolute value into position (t, t) and
        # run gcd elimination on row t and column t until both are clear.
        while True:
            best = None
            for i in range(t, rows):
                for j in range(t, cols):
                    if a[i][j] != 0 and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                return
            bi, bj = best
            if bi != t:
                _swap_rows(a, u, t, bi)
            if bj != t:
                _swap_cols(a, v, t, bj)
            p = a[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if a[i][t] != 0:
                    q = a[i][t] // p
                    _add_row(a, u, i, t, -q)
                    if a[i][t] != 0:
                        dirty = True
            for j in range(t + 1, cols):
                if a[t][j] != 0:
                    q = a[t][j] // p
                    _add_col(a, v, j, t, -q)
                    if a[t][j] != 0:
                        dirty = True
            if not dirty:
                if any(a[i][t] for i in range(t + 1, rows)) or any(
                    a[t][j] for j in range(t + 1, cols)
                ):
                    continue
                return

    k = min(rows, cols)
    for t in range(k):
        clear_at(t)

    # Divisibility chain: fold d_{t+1} into d_t until d_t | d_{t+1}.
    changed = True
    while changed:
        changed = False
        for t in range(k - 1):
            d0, d1 = a[t][t], a[t + 1][t + 1]
            if d1 != 0 and d0 == 0:
                _swap_rows(a, u, t, t + 1)
                _swap_cols(a, v, t, t + 1)
                changed = True
            elif d0 != 0 and d1 % d0 != 0:
                _add_row(a, u, t, t + 1, 1)
                clear_at(t)
                clear_at(t + 1)
                changed = True

    for t in range(k):
        if a[t][t] < 0:
            u[t] = [-x for x in u[t]]
            a[t] = [-x for x in a[t]]

    return (
        tuple(tuple(r) for r in u),
        tuple(tuple(r) for r in a),
        tuple(tuple(r) for r in v),
    )


def is_unimodular(m: Sequence[Sequence[int]]) -> bool:
    return len(m) == len(m[0]) and abs(det(m)) == 1


# ---------------------------------------------------------------------------
# Hermite form and kernels


def hermite_row_basis(rows: Sequence[Sequence[int]]) -> tuple[Vector, ...]:
    """Canonical basis of the lattice generated by integer row vectors.

    Row-style Hermite normal form: staircase shape, positive pivots, entries
    above each pivot reduced into ``[0, pivot)``, zero rows dropped.
    """
    work = [list(r) for r in rows if not is_zero_vector(r)]
    if not work:
        return ()
    width = len(work[0])
    pivot_rows: list[list[int]] = []
    rest = work
    for col in range(width):
        live = [r for r in rest if r[col] != 0]
        rest = [r for r in rest if r[col] == 0]
        if not live:
            continue
        # gcd-eliminate within this column
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            p = live[0]
            reduced = [p]
            for r in live[1:]:
                q = r[col] // p[col]
                r2 = [x - q * y for x, y in zip(r, p)]
                if r2[col] != 0:
                    reduced.append(r2)
                elif not is_zero_vector(r2):
                    rest.append(r2)
            live = reduced
        piv = live[0]
        if piv[col] < 0:
            piv = [-x for x in piv]
        # reduce earlier pivot rows above this pivot
        for r in pivot_rows:
            if r[col] != 0:
                q = r[col] // piv[col]
                for j in range(width):
                    r[j] -= q * piv[j]
        pivot_rows.append(list(piv))
    return tuple(tuple(r) for r in pivot_rows)


def integer_kernel_basis(m: Sequence[Sequence[int]]) -> tuple[Vector, ...]:
    """Basis of the saturated kernel lattice ``{x : M x = 0}``.

    The count is ``cols - rank(M)`` and any integer solution of ``M x = 0``
    is an integer combination of the returned vectors.
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    if cols == 0:
        return ()
    if rows == 0:
        return hermite_row_basis(identity(cols))
    _, s, v = smith_normal_form(m)
    r = sum(1 for t in range(min(rows, cols)) if s[t][t] != 0)
    vt = transpose(v)
    return hermite_row_basis(vt[r:]) if r < cols else ()


def saturate_span(vectors: Sequence[Sequence[int]]) -> tuple[Vector, ...]:
    """Basis of the saturation of the lattice spanned by integer vectors."""
    vecs = [tuple(v) for v in vectors if not is_zero_vector(v)]
    if not vecs:
        return ()
    perp = integer_kernel_basis(vecs)
    if not perp:
        return hermite_row_basis(identity(len(vecs[0])))
    return integer_kernel_basis(perp)


def clearing_transform(v: Sequence[int]) -> Matrix:
    """Unimodular ``U`` with ``U v = e1`` for a primitive integer vector."""
    col = tuple((x,) for x in v)
    u, s, w = smith_normal_form(col)
    if s[0][0] != 1:
        raise ValueError(f"vector {tuple(v)} is not primitive")
    # U M V = S with 1x1 V = (±1); then (V[0][0] * U) v = e1.
    c = w[0][0]
    return tuple(tuple(c * x for x in row) for row in u)


# ---------------------------------------------------------------------------
# rational rank / span / solving


def _echelon(vectors: Sequence[Sequence]) -> list[list[Fraction]]:
    work = [[Fraction(x) for x in v] for v in vectors]
    if not work:
        return []
    width = len(work[0])
    out: list[list[Fraction]] = []
    row = 0
    for col in range(width):
        piv = None
        for i in range(row, len(work)):
            if work[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        work[row], work[piv] = work[piv], work[row]
        p = work[row][col]
        for i in range(len(work)):
            if i != row and work[i][col] != 0:
                f = work[i][col] / p
                work[i] = [a - f * b for a, b in zip(work[i], work[row])]
        out.append(work[row])
        row += 1
        if row == len(work):
            break
    return work[:row]


def rank(vectors: Sequence[Sequence]) -> int:
    """Rank over the rationals of a list of vectors (possibly empty)."""
    return len(_echelon(list(vectors)))


def rank_fraction_free(vectors: Sequence[Sequence[int]]) -> int:
    """Independent rank oracle: Bareiss fraction-free elimination."""
    work = [list(v) for v in vectors]
    if not work:
        return 0
    width = len(work[0])
    r = 0
    prev = 1
    for col in range(width):
        piv = None
        for i in range(r, len(work)):
            if work[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        for i in range(r + 1, len(work)):
            for j in range(col + 1, width):
                work[i][j] = (work[i][j] * work[r][col] - work[i][col] * work[r][j]) // prev
            work[i][col] = 0
        prev = work[r][col]
        r += 1
        if r == len(work):
            break
    return r


def in_span(vectors: Sequence[Sequence], v: Sequence) -> bool:
    """True iff ``v`` lies in the rational span of ``vectors``."""
    if is_zero_vector(v):
        return True
    vecs = list(vectors)
    return rank(vecs) == rank(vecs + [tuple(v)])


def solve_rational(a: Sequence[Sequence], b: Sequence) -> tuple[Fraction, ...] | None:
    """One exact solution of ``A x = b`` or ``None`` if inconsistent."""
    n_rows = len(a)
    n_cols = len(a[0]) if n_rows else 0
    aug = [[Fraction(x) for x in row] + [Fraction(b[i])] for i, row in enumerate(a)]
    pivots: list[tuple[int, int]] = []
    row = 0
    for col in range(n_cols):
        piv = None
        for i in range(row, n_rows):
            if aug[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        p = aug[row][col]
        aug[row] = [x / p for x in aug[row]]
        for i in range(n_rows):
            if i != row and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[row])]
        pivots.append((row, col))
        row += 1
        if row == n_rows:
            break
    for i in range(row, n_rows):
        if aug[i][n_cols] != 0:
            return None
    x = [Fraction(0)] * n_cols
    for r, c in pivots:
        x[c] = aug[r][n_cols]
    return tuple(x)


def invert_rational(a: Sequence[Sequence]) -> tuple[tuple[Fraction, ...], ...]:
    """Exact inverse of a square nonsingular matrix."""
    n = len(a)
    aug = [[Fraction(x) for x in row] + [Fraction(1 if i == j else 0) for j in range(n)]
           for i, row in enumerate(a)]
    for col in range(n):
        piv = None
        for i in range(col, n):
            if aug[i][col] != 0:
                piv = i
                break
        if piv is None:
            raise ValueError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for i in range(n):
            if i != col and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


# ---------------------------------------------------------------------------
# exact nonnegative solving (phase-1 simplex with Bland's rule)


def solve_nonnegative(
    vectors: Sequence[Sequence], target: Sequence
) -> tuple[Fraction, ...] | None:
    """Exact feasibility: find ``x >= 0`` with ``sum x_j * vectors[j] = target``.

    Returns one solution or ``None``.  Phase-1 simplex over the rationals
    with an incrementally maintained objective row; pivots use Dantzig's rule
    and fall back to Bland's rule whenever the objective stalls, which keeps
    the method finite on the (heavily degenerate) cone-membership instances
    this package produces.
    """
    n = len(vectors)
    m = len(target)
    if m == 0:
        return tuple(Fraction(0) for _ in range(n))
    a = [[Fraction(vectors[j][i]) for j in range(n)] for i in range(m)]
    b = [Fraction(target[i]) for i in range(m)]
    for i in range(m):
        if b[i] < 0:
            a[i] = [-x for x in a[i]]
            b[i] = -b[i]
    width = n + 1
    tab = [a[i] + [b[i]] for i in range(m)]
    basis = [n + i for i in range(m)]  # artificial i lives only in basis markers
    # objective row: sum of artificials in terms of nonbasic columns
    obj = [Fraction(0)] * width
    for i in range(m):
        for j in range(width):
            obj[j] += tab[i][j]

    stall = 0
    while True:
        enter = None
        if stall < 12:
            best = Fraction(0)
            for j in range(n):
                if obj[j] > best:
                    best = obj[j]
                    enter = j
        else:  # Bland: smallest improving index, guarantees termination
            for j in range(n):
                if obj[j] > 0:
                    enter = j
                    break
        if enter is None:
            break
        leave = None
        best_ratio = None
        for i in range(m):
            if tab[i][enter] > 0:
                ratio = tab[i][n] / tab[i][enter]
                if (
                    best_ratio is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and basis[i] < basis[leave])
                ):
                    best_ratio = ratio
                    leave = i
        if leave is None:
            return None  # cannot happen: phase-1 objective bounded below
        before = obj[n]
        p = tab[leave][enter]
        if p != 1:
            tab[leave] = [x / p for x in tab[leave]]
        row = tab[leave]
        for i in range(m):
            if i != leave:
                f = tab[i][enter]
                if f:
                    tab[i] = [x - f * y for x, y in zip(tab[i], row)]
        f = obj[enter]
        if f:
            obj = [x - f * y for x, y in zip(obj, row)]
        basis[leave] = enter
        stall = stall + 1 if obj[n] == before else 0

    if obj[n] != 0:
        return None
    x = [Fraction(0)] * n
    for i, bv in enumerate(basis):
        if bv < n:
            x[bv] = tab[i][n]
    return tuple(x)
