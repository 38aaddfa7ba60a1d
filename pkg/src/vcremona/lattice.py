"""Exact integral lattice arithmetic.

Smith normal form, discriminant groups, dual bases, primitivity (saturation)
of sublattices, short-vector enumeration in positive definite lattices,
brute-force isometry testing in rank <= 3, and a representation solver for
positive definite binary quadratic forms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt, prod
from typing import Optional, Sequence

from .linalg import (
    Matrix,
    as_matrix,
    bilinear,
    congruent,
    det,
    identity,
    inverse,
    is_symmetric,
    matmul,
    transpose,
)


class LatticeError(ValueError):
    """Raised for invalid lattice input (degenerate, indefinite, out of range)."""


# ---------------------------------------------------------------------------
# Smith normal form


def smith_normal_form(m: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Return ``(D, U, V)`` with ``U * M * V == D``.

    ``D`` is diagonal with nonnegative entries d1 | d2 | ...; ``U`` and ``V``
    are unimodular. Works for any rectangular integer matrix.
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    a = [list(map(int, r)) for r in m]
    u = [list(r) for r in identity(rows)]
    v = [list(r) for r in identity(cols)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, k):  # row dst += k * row src
        a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, k):  # col dst += k * col src
        for r in a:
            r[dst] += k * r[src]
        for r in v:
            r[dst] += k * r[src]

    for t in range(min(rows, cols)):
        while True:
            entries = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
            if not entries:
                break
            _, pi, pj = min(entries)
            swap_rows(t, pi)
            swap_cols(t, pj)
            dirty = False
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(t, i, -(a[i][t] // a[t][t]))
                    dirty = dirty or a[i][t] != 0
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(t, j, -(a[t][j] // a[t][t]))
                    dirty = dirty or a[t][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % a[t][t]),
                None,
            )
            if bad is None:
                break
            add_row(bad, t, 1)
        if t < rows and t < cols and a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return as_matrix(a), as_matrix(u), as_matrix(v)


def invariant_factors(m: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Diagonal of the Smith normal form (length min(rows, cols))."""
    d, _, _ = smith_normal_form(m)
    return tuple(d[i][i] for i in range(min(len(d), len(d[0]) if d else 0)))


# ---------------------------------------------------------------------------
# Lattice types


@dataclass(frozen=True)
class GramLattice:
    """Nondegenerate integral lattice given by its Gram matrix."""

    gram: Matrix
    labels: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        g = as_matrix(self.gram)
        if not g or not is_symmetric(g):
            raise LatticeError("Gram matrix must be square and symmetric")
        if any(not isinstance(x, int) or isinstance(x, bool) for r in g for x in r):
            raise LatticeError("Gram entries must be integers")
        if det(g) == 0:
            raise LatticeError("degenerate lattice")
        if self.labels is not None and len(self.labels) != len(g):
            raise LatticeError("one label per basis vector")
        object.__setattr__(self, "gram", g)
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def det(self) -> int:
        return det(self.gram)

    @property
    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    @property
    def is_positive_definite(self) -> bool:
        return is_positive_definite(self.gram)

    def norm(self, x: Sequence[int]) -> int:
        return bilinear(self.gram, x, x)

    def pair(self, x: Sequence[int], y: Sequence[int]) -> int:
        return bilinear(self.gram, x, y)

    def to_json(self) -> list[list[int]]:
        return [list(r) for r in self.gram]


def direct_sum(*grams: Sequence[Sequence[int]]) -> Matrix:
    n = sum(len(g) for g in grams)
    out = [[0] * n for _ in range(n)]
    off = 0
    for g in grams:
        for i, row in enumerate(g):
            for j, x in enumerate(row):
                out[off + i][off + j] = x
        off += len(g)
    return as_matrix(out)


E8: Matrix = as_matrix([
    [2, -1, 0, 0, 0, 0, 0, 0],
    [-1, 2, -1, 0, 0, 0, 0, 0],
    [0, -1, 2, -1, 0, 0, 0, -1],
    [0, 0, -1, 2, -1, 0, 0, 0],
    [0, 0, 0, -1, 2, -1, 0, 0],
    [0, 0, 0, 0, -1, 2, -1, 0],
    [0, 0, 0, 0, 0, -1, 2, 0],
    [0, 0, -1, 0, 0, 0, 0, 2],
])
U: Matrix = ((0, 1), (1, 0))
A2: Matrix = ((2, -1), (-1, 2))
K_V: Matrix = ((3, 4), (4, 12))

# Coordinates in I_{21,2} = E8 + E8 + U1 + U2 + <1>^3 (23 coordinates).
E1, F1, E2, F2 = 16, 17, 18, 19
ONES = (20, 21, 22)
I21_2: Matrix = direct_sum(E8, E8, U, U, ((1,),), ((1,),), ((1,),))


def ambient_vector(*, e1=0, f1=0, e2=0, f2=0, ones=(0, 0, 0)) -> tuple[int, ...]:
    """Vector of I_{21,2} with the given hyperbolic and <1>^3 coordinates."""
    x = [0] * len(I21_2)
    x[E1], x[F1], x[E2], x[F2] = e1, f1, e2, f2
    for k, z in zip(ONES, ones):
        x[k] = z
    return tuple(x)


@dataclass(frozen=True)
class AmbientVectors:
    """Explicit generators of a sublattice of a fixed ambient lattice."""

    vectors: tuple[tuple[int, ...], ...]
    ambient: GramLattice = field(default_factory=lambda: GramLattice(I21_2))

    def __post_init__(self):
        vs = as_matrix(self.vectors)
        if any(len(v) != self.ambient.rank for v in vs):
            raise LatticeError("vector length does not match ambient rank")
        object.__setattr__(self, "vectors", vs)

    def gram(self) -> Matrix:
        return congruent(self.ambient.gram, self.vectors)

    def sub(self, *indices: int) -> "AmbientVectors":
        return AmbientVectors(tuple(self.vectors[i] for i in indices), self.ambient)

    def to_json(self) -> list[list[int]]:
        return [list(v) for v in self.vectors]


@dataclass(frozen=True)
class DiscGroup:
    """Discriminant group L*/L.

    ``generators[i]`` is an element of L* (coordinates over the basis of L,
    rational) whose class has order ``invariant_factors[i]``. Only factors
    greater than one are kept, so the trivial group has no generators.
    """

    invariant_factors: tuple[int, ...]
    generators: tuple[tuple[Fraction, ...], ...]

    @property
    def order(self) -> int:
        return prod(self.invariant_factors)

    @property
    def is_cyclic(self) -> bool:
        return len(self.invariant_factors) <= 1


def _gram_of(lat) -> Matrix:
    return lat.gram if isinstance(lat, GramLattice) else as_matrix(lat)


def discriminant_group(lat) -> DiscGroup:
    g = _gram_of(lat)
    if det(g) == 0:
        raise LatticeError("degenerate lattice")
    d, _, v = smith_normal_form(g)
    # G^{-1} = V D^{-1} U, so columns of V scaled by 1/d_i generate L*.
    factors, gens = [], []
    for i in range(len(g)):
        if d[i][i] > 1:
            factors.append(d[i][i])
            gens.append(tuple(Fraction(v[k][i], d[i][i]) for k in range(len(g))))
    return DiscGroup(tuple(factors), tuple(gens))


def dual_basis(lat) -> Matrix:
    """Rows are the coordinates (over the basis of L) of the dual basis vectors."""
    g = _gram_of(lat)
    if det(g) == 0:
        raise LatticeError("degenerate lattice")
    # G symmetric, so the rows of G^{-1} are its columns.
    return inverse(g)


# ---------------------------------------------------------------------------
# Saturation


def is_primitive(rows: Sequence[Sequence[int]]) -> bool:
    """True iff the integer row span is a primitive (saturated) sublattice of Z^n.

    Raises if the rows are linearly dependent.
    """
    rows = as_matrix(rows)
    factors = invariant_factors(rows)
    if len(factors) < len(rows) or any(f == 0 for f in factors):
        raise LatticeError("vectors are linearly dependent")
    return all(f == 1 for f in factors)


def is_saturated(s: AmbientVectors) -> bool:
    return is_primitive(s.vectors)


# ---------------------------------------------------------------------------
# Positive definite enumeration


def _completion_of_squares(g: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    """q[i][i] and q[i][j] (j > i) with x^T G x = sum_i q_ii (x_i + sum_j q_ij x_j)^2."""
    n = len(g)
    q = [[Fraction(x) for x in row] for row in g]
    for i in range(n):
        if q[i][i] == 0:
            return q  # caller checks positivity
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= q[k][i] * q[i][l]
    return q


def is_positive_definite(g: Sequence[Sequence[int]]) -> bool:
    q = _completion_of_squares(g)
    for i in range(len(g)):
        if q[i][i] <= 0:
            return False
    return True


def _require_posdef(g, what="enumeration requires positive definite"):
    if not is_positive_definite(g):
        raise LatticeError(what)


def _integer_window(center: Fraction, weight: Fraction, budget: Fraction) -> range:
    """Integers x with weight * (x + center)^2 <= budget, as a (superset) range."""
    r = isqrt(int(budget / weight)) + 1
    lo = -center - r
    hi = -center + r
    return range(int(lo) - 1, int(hi) + 2)


def short_vectors(lat, bound: int) -> list[tuple[int, ...]]:
    """All nonzero x with x^T G x <= bound, sorted lexicographically."""
    g = _gram_of(lat)
    _require_posdef(g)
    n = len(g)
    q = _completion_of_squares(g)
    out: list[tuple[int, ...]] = []
    x = [0] * n

    def rec(i: int, budget: Fraction):
        center = sum((q[i][j] * x[j] for j in range(i + 1, n)), Fraction(0))
        for xi in _integer_window(center, q[i][i], budget):
            used = q[i][i] * (xi + center) ** 2
            if used > budget:
                continue
            x[i] = xi
            if i == 0:
                if any(x):
                    out.append(tuple(x))
            else:
                rec(i - 1, budget - used)
        x[i] = 0

    rec(n - 1, Fraction(bound))
    out.sort()
    return out


def _sign_first_key(x: tuple[int, ...]):
    lead = next(c for c in x if c)
    return (lead < 0, x)


def vectors_of_norm(lat, n: int) -> list[tuple[int, ...]]:
    """Vectors of norm exactly n; those with positive leading entry come first,
    each half in lexicographic order."""
    g = _gram_of(lat)
    return sorted((x for x in short_vectors(g, n) if bilinear(g, x, x) == n), key=_sign_first_key)


def has_vector_of_norm(lat, n: int) -> tuple[bool, Optional[tuple[int, ...]]]:
    """(True, witness) if some nonzero integer vector has norm n, else (False, None).

    The witness is the lexicographically least such vector with positive
    leading coefficient.
    """
    g = _gram_of(lat)
    _require_posdef(g)
    vs = vectors_of_norm(g, n) if n > 0 else []
    return (True, vs[0]) if vs else (False, None)


def isometry_exists(g1, g2) -> Optional[Matrix]:
    """Return T with T^T G1 T = G2 if the lattices are isometric, else None.

    Brute force over vectors of the required norms; only rank <= 3 and
    positive definite input is supported. Candidates are tried in
    lexicographic order, so the returned witness is deterministic.
    """
    a, b = _gram_of(g1), _gram_of(g2)
    if len(a) != len(b) or len(a) > 3:
        raise LatticeError("out of supported range")
    if not (is_positive_definite(a) and is_positive_definite(b)):
        raise LatticeError("out of supported range")
    if det(a) != det(b):
        return None
    n = len(a)
    by_norm: dict[int, list] = {}
    for k in {b[i][i] for i in range(n)}:
        by_norm[k] = vectors_of_norm(a, k)
    cols: list[tuple[int, ...]] = []

    def rec(i: int) -> bool:
        if i == n:
            return True
        for t in by_norm[b[i][i]]:
            if all(bilinear(a, cols[j], t) == b[j][i] for j in range(i)):
                cols.append(t)
                if rec(i + 1):
                    return True
                cols.pop()
        return False

    if not rec(0):
        return None
    t = transpose(cols)
    assert matmul(matmul(transpose(t), a), t) == b
    return t


# ---------------------------------------------------------------------------
# Binary forms


@dataclass(frozen=True)
class BinaryForm:
    """Integral binary quadratic form a x^2 + b x y + c y^2."""

    a: int
    b: int
    c: int

    def __call__(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * x * y + self.c * y * y

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    @property
    def is_positive_definite(self) -> bool:
        return self.a > 0 and 4 * self.a * self.c - self.b * self.b > 0

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)


def _require_definite(f: BinaryForm):
    if not f.is_positive_definite:
        raise LatticeError(f"form {f.as_tuple()} is not positive definite")


def _y_bound(f: BinaryForm, n: int) -> int:
    # 4a f(x, y) = (2ax + by)^2 + (4ac - b^2) y^2
    return isqrt(4 * f.a * max(n, 0) // (4 * f.a * f.c - f.b * f.b))


def representations(f: BinaryForm, n: int) -> list[tuple[int, int]]:
    """All integer (x, y) with f(x, y) == n, sorted."""
    _require_definite(f)
    if n < 0:
        return []
    sols = []
    ymax = _y_bound(f, n)
    for y in range(-ymax, ymax + 1):
        # a x^2 + (b y) x + (c y^2 - n) = 0
        disc = (f.b * y) ** 2 - 4 * f.a * (f.c * y * y - n)
        if disc < 0:
            continue
        r = isqrt(disc)
        if r * r != disc:
            continue
        for num in {-f.b * y + r, -f.b * y - r}:
            if num % (2 * f.a) == 0:
                sols.append((num // (2 * f.a), y))
    return sorted(set(sols))


def _witness_key(s: tuple[int, int]):
    x, y = s
    return (abs(y), abs(x), -x, -y)


def represents(f: BinaryForm, n: int) -> Optional[tuple[int, int]]:
    """A canonical solution of f(x, y) == n (smallest |y|, then |x|, positive first)."""
    sols = representations(f, n)
    if not sols:
        return None
    return min(sols, key=_witness_key)


def form_values(f: BinaryForm, bound: int) -> dict[int, tuple[int, int]]:
    """Every value 0 < n <= bound taken by f, with a canonical witness.

    A primitive witness (gcd(x, y) == 1) is preferred when one exists.
    """
    _require_definite(f)
    found: dict[int, list] = {}
    ymax = _y_bound(f, bound)
    for y in range(-ymax, ymax + 1):
        # x range from a(x + by/2a)^2 <= bound - (c - b^2/4a) y^2
        rest = 4 * f.a * bound - (4 * f.a * f.c - f.b * f.b) * y * y
        if rest < 0:
            continue
        r = isqrt(rest) + 1
        lo = (-f.b * y - r) // (2 * f.a) - 1
        hi = (-f.b * y + r) // (2 * f.a) + 1
        for x in range(lo, hi + 1):
            val = f(x, y)
            if 0 < val <= bound:
                found.setdefault(val, []).append((x, y))
    out = {}
    for val, sols in found.items():
        prim = [s for s in sols if gcd(*s) == 1]
        out[val] = min(prim or sols, key=_witness_key)
    return dict(sorted(out.items()))


def local_obstruction(f: BinaryForm, n: int, max_modulus: int = 64) -> Optional[int]:
    """Smallest modulus m <= max_modulus with f(x, y) != n (mod m) for all x, y."""
    for m in range(2, max_modulus + 1):
        target = n % m
        if not any((f(x, y) - target) % m == 0 for x in range(m) for y in range(m)):
            return m
    return None
