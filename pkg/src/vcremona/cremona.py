"""The Cremona transformation of P^5 defined by a Veronese surface.

Two levels are covered. Symbolically, the map is given by the six cofactors
of a symmetric 3x3 matrix of linear forms, and composing it with itself
returns det(M) * M. On lattices, it acts on rank-3 Gram matrices marked by
(h^2, v, s), where h^2 is the square of the hyperplane class and v is the
Veronese class:

    (3 4 A; 4 12 B; A B C)  ->  (3 4 4A-B; 4 12 B; 4A-B B C+(3A-B)^2)
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .lattice import LatticeError, isometry_exists
from .linalg import Matrix, as_matrix, congruent, det, matmul, transpose
from .polynomial import SparsePoly, X

# Position of X_k in the symmetric matrix ((X0 X1 X5) (. X2 X3) (. . X4)).
SYMMETRIC_POSITIONS = ((0, 0), (0, 1), (1, 1), (1, 2), (2, 2), (0, 2))


class CremonaError(ValueError):
    pass


def symmetric_matrix(entries: Sequence) -> list[list]:
    """3x3 symmetric matrix with entries[k] placed at SYMMETRIC_POSITIONS[k]."""
    m = [[None] * 3 for _ in range(3)]
    for k, (i, j) in enumerate(SYMMETRIC_POSITIONS):
        m[i][j] = m[j][i] = entries[k]
    return m


def standard_matrix() -> list[list[SparsePoly]]:
    return symmetric_matrix([X(k) for k in range(6)])


def _det3(m) -> SparsePoly:
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def _adjugate3(m) -> list[list[SparsePoly]]:
    adj = [[None] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            r = [k for k in range(3) if k != j]
            c = [k for k in range(3) if k != i]
            minor = m[r[0]][c[0]] * m[r[1]][c[1]] - m[r[0]][c[1]] * m[r[1]][c[0]]
            adj[i][j] = minor if (i + j) % 2 == 0 else -minor
    return adj


def cofactor_quadrics(m: Sequence[Sequence[SparsePoly]], *, degree: int | None = 1) -> tuple[SparsePoly, ...]:
    """The six distinct entries of det(M) * M^{-1} (the adjugate), ordered so
    that the k-th one sits where X_k sits in the standard matrix."""
    if len(m) != 3 or any(len(r) != 3 for r in m):
        raise CremonaError("expected a 3x3 matrix")
    for i in range(3):
        for j in range(i):
            if m[i][j] != m[j][i]:
                raise CremonaError(f"matrix is not symmetric at ({i},{j})")
    if degree is not None:
        for row in m:
            for p in row:
                if not p.is_zero() and not p.is_homogeneous(degree):
                    raise CremonaError(f"entry {p} is not homogeneous of degree {degree}")
    adj = _adjugate3(m)
    return tuple(adj[i][j] for i, j in SYMMETRIC_POSITIONS)


@dataclass(frozen=True)
class InvolutionData:
    quadrics: tuple[SparsePoly, ...]
    quartics: tuple[SparsePoly, ...]
    determinant: SparsePoly


def involution_data() -> InvolutionData:
    m = standard_matrix()
    q = cofactor_quadrics(m)
    r = cofactor_quadrics(symmetric_matrix(q), degree=2)
    return InvolutionData(q, r, _det3(m))


def involution_check() -> bool:
    """Verify that the cofactors of the cofactor matrix equal det(M) * M."""
    data = involution_data()
    for k, (rk, xk) in enumerate(zip(data.quartics, (X(i) for i in range(6)))):
        if not rk.is_homogeneous(4):
            raise CremonaError(f"R{k} is not a quartic")
        if rk != data.determinant * xk:
            raise CremonaError(f"R{k} != det(M) * X{k}")
    return True


# ---------------------------------------------------------------------------
# Marked Gram matrices

VERONESE_BLOCK = ((3, 4), (4, 12))
SOURCE_LABELS = ("h2", "v", "s")
IMAGE_LABELS = ("h2'", "v'", "s'")


@dataclass(frozen=True)
class MarkedGram:
    """Rank-3 Gram matrix on (h^2, v, s) with the Veronese block in the corner."""

    gram: Matrix
    labels: tuple[str, str, str] = SOURCE_LABELS

    def __post_init__(self):
        g = as_matrix(self.gram)
        if len(g) != 3 or any(len(r) != 3 for r in g):
            raise CremonaError("marked Gram must be 3x3")
        if any(g[i][j] != g[j][i] for i in range(3) for j in range(i)):
            raise CremonaError("marked Gram must be symmetric")
        if (g[0][:2], g[1][:2]) != VERONESE_BLOCK:
            raise CremonaError("not in Veronese frame")
        object.__setattr__(self, "gram", g)
        object.__setattr__(self, "labels", tuple(self.labels))

    @classmethod
    def from_abc(cls, a: int, b: int, c: int, labels=SOURCE_LABELS) -> "MarkedGram":
        return cls(((3, 4, a), (4, 12, b), (a, b, c)), labels)

    @property
    def abc(self) -> tuple[int, int, int]:
        return (self.gram[0][2], self.gram[1][2], self.gram[2][2])

    @property
    def det(self) -> int:
        return det(self.gram)

    def to_json(self) -> dict:
        return {"gram": [list(r) for r in self.gram], "labels": list(self.labels)}

    @classmethod
    def from_json(cls, obj: dict) -> "MarkedGram":
        return cls(as_matrix(obj["gram"]), tuple(obj.get("labels", SOURCE_LABELS)))


def cremona_abc(a: int, b: int, c: int) -> tuple[int, int, int]:
    return (4 * a - b, b, c + (3 * a - b) ** 2)


def cremona_gram_image(g: MarkedGram) -> MarkedGram:
    return MarkedGram.from_abc(*cremona_abc(*g.abc), labels=IMAGE_LABELS)


def blowup_gram_image(g: MarkedGram, basis_change: Sequence[Sequence[int]]) -> Matrix:
    """Image Gram computed inside A(Y) = <h^2, v, s, l> from a basis change.

    ``basis_change`` has columns h'^2, v', l' over (h^2, v, l). The new
    third class is s' = s + (3A - B) l', which is orthogonal to l'.
    """
    a, b, c = g.abc
    gy = ((3, 4, a, 0), (4, 12, b, 0), (a, b, c, 0), (0, 0, 0, -1))
    cols = transpose(basis_change)

    def lift(col):  # (h2, v, l) coordinates -> (h2, v, s, l)
        return (col[0], col[1], 0, col[2])

    hp2, vp, lp = (lift(col) for col in cols)
    k = 3 * a - b
    sp = tuple(x + k * y for x, y in zip((0, 0, 1, 0), lp))
    full = congruent(gy, (hp2, vp, sp, lp))
    if any(full[3][i] for i in range(3)) or full[3][3] != -1:
        raise CremonaError("primed frame does not split off the line class")
    return tuple(row[:3] for row in full[:3])


def double_image_remarking(g: MarkedGram) -> Matrix:
    """Change of basis T with T^T G T equal to the Gram of the second image.

    Applying the law twice returns h^2 and v, with s replaced by
    s + (3A - B)(3h^2 - v).
    """
    a, b, _ = g.abc
    k = 3 * a - b
    return ((1, 0, 3 * k), (0, 1, -k), (0, 0, 1))


def gram_image_involutive(g: MarkedGram) -> bool:
    """Second image has the same determinant and is isometric to g."""
    once = cremona_gram_image(g)
    twice = cremona_gram_image(once)
    if twice.det != g.det or once.det != g.det:
        return False
    t = double_image_remarking(g)
    if matmul(matmul(transpose(t), g.gram), t) != twice.gram:
        return False
    try:
        return isometry_exists(twice.gram, g.gram) is not None
    except LatticeError:
        # indefinite input: the explicit re-marking above already settles it
        return True
