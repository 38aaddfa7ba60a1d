"""Counting Fourier-Mukai partners of a very general cubic fourfold in C_d, 9 not dividing d.

The count follows from an enumeration of even overlattices of S + T at the
level of glue residues b: for d = 2 (mod 6) the classes

    B_c = {b in (Z/d)^* : 3 b^2 c = 1 (mod 2d)}

and for d = 0 (mod 6)

    B_c = {b in (Z/(d/3))^* : b^2 = c (mod 2d/3)}.

Every nonempty B_c has the same size, which is the number of overlattices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from sympy import factorint

from .lattice import discriminant_group


class CountingError(ValueError):
    pass


def disc_nonempty(d: int) -> bool:
    """C_d is nonempty iff d >= 8 and d = 0, 2 (mod 6)."""
    return d >= 8 and d % 6 in (0, 2)


def admissible(d: int) -> bool:
    """d is not divisible by 4, 9 or any odd prime p = 2 (mod 3)."""
    if d <= 0 or d % 4 == 0 or d % 9 == 0:
        return False
    return all(p == 2 or p % 3 != 2 for p in factorint(d))


def _check(d: int):
    if not disc_nonempty(d) or d % 9 == 0:
        raise CountingError(f"d = {d} is outside counting hypothesis")


def m_of(d: int) -> int:
    _check(d)
    f = factorint(d)
    a = f.pop(2, 0)
    k = len(f)
    if k == 0:
        if a < 2:
            raise CountingError(f"d = {d} is outside counting hypothesis")
        return 1
    return 2 ** (k - 1) if a == 1 else 2**k


def fm_partner_count(d: int) -> int:
    m = m_of(d)
    if d % 6 == 2:
        return m
    if m % 2:
        raise CountingError(f"d = {d}: m = {m} is odd")
    return m // 2


def residue_case(d: int) -> str:
    return "2 mod 6" if d % 6 == 2 else "0 mod 6"


def glue_sizes(d: int) -> dict[int, int]:
    """|B_c| for each residue c with B_c nonempty."""
    _check(d)
    sizes: dict[int, int] = {}
    if d % 6 == 2:
        mod = 2 * d
        for b in range(1, d):
            if gcd(b, d) != 1:
                continue
            # 3 b^2 c = 1 (mod 2d): c = (3 b^2)^{-1}; 3 b^2 is a unit since d is prime to 3.
            c = pow(3 * b * b, -1, mod)
            sizes[c] = sizes.get(c, 0) + 1
    else:
        n = d // 3
        mod = 2 * n
        for b in range(1, n):
            if gcd(b, n) != 1:
                continue
            c = b * b % mod
            sizes[c] = sizes.get(c, 0) + 1
    if not sizes:
        raise CountingError(f"no glue residues for d = {d}")
    return dict(sorted(sizes.items()))


def glue_sizes_brute(d: int) -> dict[int, int]:
    """Same as glue_sizes, by looping over every (b, c) pair."""
    _check(d)
    out: dict[int, int] = {}
    if d % 6 == 2:
        for c in range(2 * d):
            n = sum(1 for b in range(d) if gcd(b, d) == 1 and (3 * b * b * c - 1) % (2 * d) == 0)
            if n:
                out[c] = n
    else:
        k = d // 3
        for c in range(2 * k):
            n = sum(1 for b in range(k) if gcd(b, k) == 1 and (b * b - c) % (2 * k) == 0)
            if n:
                out[c] = n
    return out


def overlattice_count(d: int) -> int:
    """|M_{S,T}|, the common size of the nonempty B_c."""
    sizes = set(glue_sizes(d).values())
    if len(sizes) != 1:
        raise CountingError(f"glue classes for d = {d} have unequal sizes {sorted(sizes)}")
    return sizes.pop()


@dataclass(frozen=True)
class SLatticeSpec:
    d: int
    ell_sq: int


def s_lattice(d: int) -> SLatticeSpec:
    """Generator norm of the rank-one lattice orthogonal to A_2 inside N(A_X)."""
    if not disc_nonempty(d):
        raise CountingError(f"C_{d} is empty")
    return SLatticeSpec(d, -3 * d if d % 6 == 2 else -(d // 3))


def labelling_gram(d: int) -> tuple[tuple[int, int], tuple[int, int]]:
    """Gram of a discriminant-d labelling <h^2, x>."""
    if not disc_nonempty(d):
        raise CountingError(f"C_{d} is empty")
    if d % 6 == 2:
        return ((3, 1), (1, (d + 1) // 3))
    return ((3, 0), (0, d // 3))


def labelling_disc_is_cyclic(d: int) -> bool:
    g = discriminant_group(labelling_gram(d))
    return g.is_cyclic and g.order == d


@dataclass(frozen=True)
class FMCountReport:
    d: int
    m: int
    partner_count: int
    residue_case: str
    glue_sizes: dict[int, int] = field(hash=False)

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "m": self.m,
            "partner_count": self.partner_count,
            "residue_case": self.residue_case,
            "glue_sizes": {str(c): n for c, n in self.glue_sizes.items()},
        }


def fm_report(d: int) -> FMCountReport:
    return FMCountReport(d, m_of(d), fm_partner_count(d), residue_case(d), glue_sizes(d))


def valid_counting_discs(d_max: int) -> list[int]:
    return [d for d in range(8, d_max + 1) if disc_nonempty(d) and d % 9]
