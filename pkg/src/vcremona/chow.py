"""Intersection numbers on the blowups of P^5 and of a cubic fourfold along a
Veronese surface.

Classes are coordinate vectors over fixed bases; every product is evaluated
through a table of top-degree monomials in the two divisor classes.

* ``V`` (the Veronese surface, ~ P^2): basis (1_V, l, pt), with l.l = pt.
* ``Gamma = Bl_V P^5``: divisor classes H (hyperplane) and E (exceptional).
* ``Y = Bl_V X`` for a cubic X containing V: divisor classes h and e.
  Codimension-2 classes are written over (h^2, he, e^2).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .linalg import Matrix, det, inverse, is_integral, matmul, solve, to_int_tuple, transpose


class ChowError(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# The surface ring  Q[l]/(l^3)


@dataclass(frozen=True)
class SurfaceClass:
    """a * 1_V + b * l + c * pt on V ~ P^2."""

    c0: Fraction
    c1: Fraction
    c2: Fraction

    def __post_init__(self):
        for name in ("c0", "c1", "c2"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    @classmethod
    def of(cls, *coeffs) -> "SurfaceClass":
        coeffs = tuple(coeffs) + (0,) * (3 - len(coeffs))
        return cls(*coeffs[:3])

    def __mul__(self, other: "SurfaceClass") -> "SurfaceClass":
        a, b = self.coeffs, other.coeffs
        return SurfaceClass(a[0] * b[0], a[0] * b[1] + a[1] * b[0], a[0] * b[2] + a[1] * b[1] + a[2] * b[0])

    def __add__(self, other: "SurfaceClass") -> "SurfaceClass":
        return SurfaceClass(*(x + y for x, y in zip(self.coeffs, other.coeffs)))

    def __pow__(self, k: int) -> "SurfaceClass":
        out = SurfaceClass(1, 0, 0)
        for _ in range(k):
            out = out * self
        return out

    def scale(self, k) -> "SurfaceClass":
        return SurfaceClass(*(k * x for x in self.coeffs))

    def inverse(self) -> "SurfaceClass":
        """Truncated power-series inverse; needs an invertible degree-0 part."""
        a0, a1, a2 = self.coeffs
        if a0 == 0:
            raise ChowError("class with zero rank part is not invertible")
        b0 = 1 / a0
        b1 = -a1 * b0 / a0
        b2 = -(a1 * b1 + a2 * b0) / a0
        return SurfaceClass(b0, b1, b2)

    def integrate(self) -> Fraction:
        return self.c2

    @property
    def coeffs(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.c0, self.c1, self.c2)


LINE = SurfaceClass(0, 1, 0)
ONE = SurfaceClass(1, 0, 0)


def chern_class_veronese() -> SurfaceClass:
    # c(P^2) = (1 + l)^3 = 1 + 3l + 3pt
    return (ONE + LINE) ** 3


def restricted_chern_class_p5() -> SurfaceClass:
    # i^* h = 2l, c(P^5) = (1 + h)^6
    return (ONE + LINE.scale(2)) ** 6


def segre_class_veronese() -> SurfaceClass:
    """s(V, P^5) = c(V) * i^*c(P^5)^{-1}."""
    return chern_class_veronese() * restricted_chern_class_p5().inverse()


# ---------------------------------------------------------------------------
# Monomial tables


@dataclass(frozen=True)
class ChowTable:
    """Top intersection numbers X^a Z^b (a + b = dim) of two divisor classes."""

    dim: int
    values: tuple[tuple[tuple[int, int], Fraction], ...]

    def __getitem__(self, key: tuple[int, int]) -> Fraction:
        return dict(self.values)[key]

    def as_dict(self) -> dict[tuple[int, int], Fraction]:
        return dict(self.values)

    def sequence(self) -> tuple[Fraction, ...]:
        """Values ordered X^dim, X^{dim-1} Z, ..., Z^dim."""
        d = self.as_dict()
        return tuple(d[(self.dim - k, k)] for k in range(self.dim + 1))

    def integrate(self, poly: dict[tuple[int, int], Fraction]) -> Fraction:
        """Degree of a homogeneous polynomial in the two classes."""
        d = self.as_dict()
        total = Fraction(0)
        for mono, coeff in poly.items():
            if sum(mono) != self.dim:
                raise ChowError(f"monomial {mono} is not of top degree {self.dim}")
            total += coeff * d[mono]
        return total

    def to_json(self) -> dict[str, int | str]:
        return {f"{a},{b}": _render(v) for (a, b), v in self.values}


def _render(x: Fraction) -> int | str:
    return int(x) if x.denominator == 1 else str(x)


def _make_table(dim: int, d: dict[tuple[int, int], Fraction]) -> ChowTable:
    return ChowTable(dim, tuple(sorted(((k, Fraction(v)) for k, v in d.items()), key=lambda kv: -kv[0][0])))


def gamma_table() -> ChowTable:
    """H^{5-k} E^k on Bl_V P^5.

    H^5 = 1; for k >= 1 the blowup formula gives
    H^{5-k} E^k = (-1)^{k-1} * integral of (2l)^{5-k} * s(V, P^5).
    """
    s = segre_class_veronese()
    vals = {(5, 0): Fraction(1)}
    for k in range(1, 6):
        vals[(5 - k, k)] = (-1) ** (k - 1) * ((LINE.scale(2) ** (5 - k)) * s).integrate()
    return _make_table(5, vals)


def poly_mul(p: dict, q: dict) -> dict:
    out: dict[tuple[int, int], Fraction] = {}
    for (a1, b1), c1 in p.items():
        for (a2, b2), c2 in q.items():
            key = (a1 + a2, b1 + b2)
            out[key] = out.get(key, 0) + Fraction(c1) * c2
    return {k: v for k, v in out.items() if v}


def poly_pow(p: dict, k: int) -> dict:
    out = {(0, 0): Fraction(1)}
    for _ in range(k):
        out = poly_mul(out, p)
    return out


def linear(x_coeff, z_coeff) -> dict:
    """The divisor class x_coeff * X + z_coeff * Z as a polynomial."""
    return {k: Fraction(v) for k, v in (((1, 0), x_coeff), ((0, 1), z_coeff)) if v}


def y_table() -> ChowTable:
    """h^a e^b on Y = Bl_V X, capping the Gamma table with [Y] = 3H - E."""
    g = gamma_table()
    vals = {}
    for k in range(5):
        mono = {(4 - k, k): Fraction(1)}
        vals[(4 - k, k)] = g.integrate(poly_mul(linear(3, -1), mono))
    return _make_table(4, vals)


def substituted_table(table: ChowTable, x_new: tuple, z_new: tuple) -> ChowTable:
    """Table of the classes x_new = (p, q) -> pX + qZ and z_new likewise."""
    vals = {}
    n = table.dim
    for k in range(n + 1):
        poly = poly_mul(poly_pow(linear(*x_new), n - k), poly_pow(linear(*z_new), k))
        vals[(n - k, k)] = table.integrate(poly)
    return _make_table(n, vals)


# H' = 2H - E and E' = 3H - 2E (same substitution for h', e' on Y)
PRIMED_DIVISORS = ((2, -1), (3, -2))


def primed_gamma_table() -> ChowTable:
    return substituted_table(gamma_table(), *PRIMED_DIVISORS)


def primed_y_table() -> ChowTable:
    return substituted_table(y_table(), *PRIMED_DIVISORS)


def mixed_h_hprime_table() -> ChowTable:
    """H^{5-k} H'^k on Gamma."""
    return substituted_table(gamma_table(), (1, 0), (2, -1))


# ---------------------------------------------------------------------------
# Codimension-2 classes on Y


@dataclass(frozen=True)
class Codim2Class:
    """x h^2 + y he + z e^2 on Y."""

    coords: tuple[Fraction, Fraction, Fraction]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(Fraction(c) for c in self.coords))

    @classmethod
    def of(cls, x, y, z) -> "Codim2Class":
        return cls((x, y, z))

    @classmethod
    def product(cls, d1: tuple, d2: tuple) -> "Codim2Class":
        """Product of divisor classes d1 = (p, q) ~ ph + qe and d2."""
        p = poly_mul(linear(*d1), linear(*d2))
        return cls((p.get((2, 0), 0), p.get((1, 1), 0), p.get((0, 2), 0)))

    def __add__(self, other):
        return Codim2Class(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        return Codim2Class(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __rmul__(self, k):
        return Codim2Class(tuple(k * a for a in self.coords))

    def as_poly(self) -> dict:
        x, y, z = self.coords
        return {k: v for k, v in (((2, 0), x), ((1, 1), y), ((0, 2), z)) if v}

    def dot(self, other: "Codim2Class", table: ChowTable | None = None) -> Fraction:
        table = table or y_table()
        return table.integrate(poly_mul(self.as_poly(), other.as_poly()))


H2 = Codim2Class.of(1, 0, 0)
HE = Codim2Class.of(0, 1, 0)
E2 = Codim2Class.of(0, 0, 1)


def pairing_matrix(classes: Sequence[Codim2Class], table: ChowTable | None = None) -> Matrix:
    table = table or y_table()
    return tuple(tuple(a.dot(b, table) for b in classes) for a in classes)


def integral_pairing_matrix(classes: Sequence[Codim2Class]) -> tuple[tuple[int, ...], ...]:
    m = pairing_matrix(classes)
    if not all(is_integral(r) for r in m):
        raise ChowError("pairing matrix is not integral")
    return tuple(to_int_tuple(r) for r in m)


def veronese_frame_classes() -> tuple[Codim2Class, Codim2Class]:
    """(l, v): the line class l = he/2 and the Veronese class v = 3l - e^2."""
    line = Fraction(1, 2) * HE
    vero = 3 * line - E2
    return line, vero


def primed_frame_classes() -> dict[str, Codim2Class]:
    """h'^2, e'^2, l', v' over (h^2, he, e^2)."""
    hp, ep = PRIMED_DIVISORS
    hp2 = Codim2Class.product(hp, hp)
    ep2 = Codim2Class.product(ep, ep)
    hpep = Codim2Class.product(hp, ep)
    linep = Fraction(1, 2) * hpep
    verop = 3 * linep - ep2
    return {"h2": hp2, "e2": ep2, "l": linep, "v": verop}


def coordinates_in(basis: Sequence[Codim2Class], x: Codim2Class) -> tuple[Fraction, ...]:
    """Coordinates of x over a basis of the (h^2, he, e^2) span."""
    cols = transpose([b.coords for b in basis])
    return solve(cols, x.coords)


def primed_transformation() -> tuple[tuple[int, ...], ...]:
    """Matrix whose columns give h'^2, v', l' over the basis (h^2, v, l)."""
    line, vero = veronese_frame_classes()
    basis = (H2, vero, line)
    p = primed_frame_classes()
    cols = [to_int_tuple(coordinates_in(basis, p[k])) for k in ("h2", "v", "l")]
    m = transpose(cols)
    if matmul(m, m) != ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
        raise ChowError("basis change is not involutive")
    return m


@dataclass(frozen=True)
class DiscActionCertificate:
    multiplier: int
    dual_e2: tuple[Fraction, ...]
    e2_in_primed: tuple[Fraction, ...]
    dual_e2_in_primed: tuple[Fraction, ...]
    lattice_element: tuple[int, ...]


def disc_action_certificate() -> DiscActionCertificate:
    """How the blowup identification acts on the discriminant group Z/20.

    Works in the basis (h^2, e^2, l) and its primed twin (h'^2, e'^2, l');
    the generator (e^2)* is sent to k (e'^2)* for the unique residue k mod 20
    making k (e'^2)* - (e^2)* a lattice vector.
    """
    line, _ = veronese_frame_classes()
    basis = (H2, E2, line)
    p = primed_frame_classes()
    pbasis = (p["h2"], p["e2"], p["l"])

    gram = integral_pairing_matrix(basis)
    pgram = integral_pairing_matrix(pbasis)
    if gram != pgram:
        raise ChowError("discriminant action inconsistent: primed Gram differs")
    dual = inverse(gram)
    order = abs(det(gram))
    dual_e2 = dual[1]

    # change of frame: coordinates of h^2, e^2, l over the primed basis
    to_primed = [coordinates_in(pbasis, b) for b in basis]
    e2_primed = to_primed[1]
    dual_e2_primed = tuple(sum(c * to_primed[i][j] for i, c in enumerate(dual_e2)) for j in range(3))
    dual_ep2 = inverse(pgram)[1]

    found = []
    for k in range(order):
        diff = tuple(k * a - b for a, b in zip(dual_ep2, dual_e2_primed))
        if is_integral(diff):
            found.append((k, to_int_tuple(diff)))
    if len(found) != 1:
        raise ChowError("discriminant action inconsistent")
    k, elem = found[0]
    return DiscActionCertificate(k, tuple(dual_e2), tuple(e2_primed), dual_e2_primed, elem)


def disc_action_multiplier() -> int:
    return disc_action_certificate().multiplier


def tables_json() -> dict:
    return {
        "gamma": gamma_table().to_json(),
        "y": y_table().to_json(),
        "M": [list(r) for r in primed_transformation()],
    }
