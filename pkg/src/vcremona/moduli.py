"""Components of intersections C_{d1} & C_{d2} and their images under the
Veronese Cremona involution on C_20.

A component is described by a rank-3 lattice M_tau = <alpha1, alpha2, alpha3>
inside I_{21,2}, with alpha1 = h^2. Membership of a cubic in C_d' is read off
from the labelling form: for x = a h^2 + b u + c w,

    disc <h^2, x> = 3 (x.x) - (h^2.x)^2,

a binary quadratic form in (b, c). A labelling is saturated iff gcd(b, c) = 1.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from math import gcd, isqrt
from typing import Optional, Sequence

from .cremona import MarkedGram, cremona_gram_image
from .fm import admissible, disc_nonempty
from .lattice import (
    AmbientVectors,
    BinaryForm,
    LatticeError,
    ambient_vector,
    form_values,
    has_vector_of_norm,
    is_positive_definite,
    invariant_factors,
    is_saturated,
    isometry_exists,
    vectors_of_norm,
)
from .linalg import Matrix, as_matrix, bilinear, congruent, det

EXCLUDED_DISCS = (2, 6, 8, 14, 18, 26, 38, 42)
DEFAULT_SEARCH_MAX = 500


class ComponentError(ValueError):
    pass


def search_max() -> int:
    """Default bound for open-ended discriminant searches (VC_MAX_SEARCH overrides)."""
    return int(os.environ.get("VC_MAX_SEARCH", DEFAULT_SEARCH_MAX))


# ---------------------------------------------------------------------------
# Component lattices


def tau_bound(d1: int, d2: int) -> int:
    """ceil(2 sqrt(n1 n2 - min(n1, n2)) - 1) with n_i = floor(d_i / 6), in integers."""
    for d in (d1, d2):
        if not disc_nonempty(d):
            raise ComponentError(f"C_{d} is empty")
    if d1 == d2:
        raise ComponentError("d1 and d2 must differ")
    n1, n2 = d1 // 6, d2 // 6
    x = 4 * (n1 * n2 - min(n1, n2))
    r = isqrt(x)
    if r * r < x:
        r += 1
    return r - 1


def congruence_case(d1: int, d2: int) -> str:
    return f"{d1 % 6}&{d2 % 6}"


def _normalize(d1: int, d2: int) -> tuple[int, int]:
    # the mixed template puts the 2 (mod 6) discriminant first
    if d1 % 6 == 0 and d2 % 6 == 2:
        return d2, d1
    return d1, d2


def template_vectors(d1: int, d2: int, tau: int) -> AmbientVectors:
    """alpha1, alpha2, alpha3 in I_{21,2}; no validity checks."""
    n1, n2 = d1 // 6, d2 // 6
    r1, r2 = d1 % 6, d2 % 6
    alpha1 = ambient_vector(ones=(1, 1, 1))
    alpha2 = ambient_vector(e1=1, f1=n1, f2=tau, ones=(0, 1 if r1 == 2 else 0, 0))
    alpha3 = ambient_vector(e2=1, f2=n2, ones=(0, 0, 1 if r2 == 2 else 0))
    return AmbientVectors((alpha1, alpha2, alpha3))


def template_gram(d1: int, d2: int, tau: int) -> Matrix:
    n1, n2 = d1 // 6, d2 // 6
    case = (d1 % 6, d2 % 6)
    if case == (2, 2):
        return ((3, 1, 1), (1, 2 * n1 + 1, tau), (1, tau, 2 * n2 + 1))
    if case == (2, 0):
        return ((3, 1, 0), (1, 2 * n1 + 1, tau), (0, tau, 2 * n2))
    if case == (0, 0):
        return ((3, 0, 0), (0, 2 * n1, tau), (0, tau, 2 * n2))
    raise ComponentError(f"no template for d = ({d1}, {d2})")


def closed_form_disc(d1: int, d2: int, tau: int) -> int:
    if d1 % 6 == 2 and d2 % 6 == 2:
        num = d1 * d2 - (1 - 3 * tau) ** 2
        if num % 3:
            raise ComponentError("closed form is not integral")
        return num // 3
    return d1 * d2 // 3 - 3 * tau * tau


@dataclass(frozen=True)
class ComponentSpec:
    d1: int
    d2: int
    tau: int
    case: str
    gram: Matrix
    ambient: AmbientVectors
    disc: int
    within_bound: bool

    def to_json(self) -> dict:
        return {
            "d1": self.d1,
            "d2": self.d2,
            "tau": self.tau,
            "case": self.case,
            "gram": [list(r) for r in self.gram],
            "ambient": self.ambient.to_json(),
            "disc": self.disc,
            "within_bound": self.within_bound,
        }


def component_gram(d1: int, d2: int, tau: int, *, strict: bool = True) -> ComponentSpec:
    """Build and verify the M_tau component lattice for C_{d1} & C_{d2}.

    With ``strict`` the parameter must lie in the guaranteed range
    (|tau| <= N, or 0 <= tau <= N when some d_i = 0 mod 6). The checks that
    make the component exist (saturation, no norm-2 vectors) always run.
    """
    d1, d2 = _normalize(d1, d2)
    bound = tau_bound(d1, d2)
    both_two = d1 % 6 == 2 and d2 % 6 == 2
    lo = -bound if both_two else 0
    within = lo <= tau <= bound
    if strict and not within:
        raise ComponentError(f"tau = {tau} out of range [{lo}, {bound}] for ({d1}, {d2})")
    gram = template_gram(d1, d2, tau)
    amb = template_vectors(d1, d2, tau)
    if amb.gram() != gram:
        raise ComponentError("ambient generators do not reproduce the template Gram")
    if not is_positive_definite(gram):
        raise ComponentError(f"M_tau for ({d1}, {d2}, {tau}) is not positive definite")
    for part in ((0, 1, 2), (0, 1), (0, 2)):
        if not is_saturated(amb.sub(*part)):
            raise ComponentError(f"sublattice {part} of M_tau is not saturated")
    if has_vector_of_norm(gram, 2)[0]:
        raise ComponentError("C_{M_tau} empty: lattice has a vector of norm 2")
    disc = det(gram)
    if disc != closed_form_disc(d1, d2, tau):
        raise ComponentError("determinant disagrees with the closed form")
    return ComponentSpec(d1, d2, tau, congruence_case(d1, d2), gram, amb, disc, within)


def locate_components(d1: int, d2: int, disc: int) -> list[int]:
    """Template parameters tau whose closed-form discriminant equals disc."""
    d1, d2 = _normalize(d1, d2)
    out = []
    if d1 % 6 == 2 and d2 % 6 == 2:
        sq = d1 * d2 - 3 * disc
        if sq >= 0 and isqrt(sq) ** 2 == sq:
            r = isqrt(sq)
            out = sorted({(1 - s) // 3 for s in (r, -r) if (1 - s) % 3 == 0})
    else:
        rest = d1 * d2 // 3 - disc
        if rest >= 0 and rest % 3 == 0 and isqrt(rest // 3) ** 2 == rest // 3:
            out = [isqrt(rest // 3)]
    return out


# ---------------------------------------------------------------------------
# Labellings and the Veronese frame


def labelling_form(g) -> BinaryForm:
    """Form (b, c) -> disc <h^2, b u + c w> for a Gram on (h^2, u, w)."""
    m = g.gram if isinstance(g, MarkedGram) else as_matrix(g)
    if m[0][0] != 3:
        raise ComponentError("first basis vector must be h^2 (norm 3)")
    p1, p2 = m[0][1], m[0][2]
    return BinaryForm(3 * m[1][1] - p1 * p1, 6 * m[1][2] - 2 * p1 * p2, 3 * m[2][2] - p2 * p2)


@dataclass(frozen=True)
class Labelling:
    disc: int
    witness: tuple[int, int]
    saturated: bool

    def to_json(self) -> dict:
        return {"disc": self.disc, "witness": list(self.witness), "saturated": self.saturated}


def represented_discs(g, d_max: int) -> dict[int, Labelling]:
    """Every d' <= d_max represented by the labelling form, with a witness.

    A primitive witness is preferred; ``saturated`` records whether one exists.
    """
    f = labelling_form(g)
    if not f.is_positive_definite:
        raise LatticeError("labelling form is not positive definite")
    return {d: Labelling(d, w, gcd(*w) == 1) for d, w in form_values(f, d_max).items()}


def veronese_candidates(g, within: Optional[Sequence[Sequence[int]]] = None) -> list[tuple[int, ...]]:
    """Classes v with v.v = 12, h^2.v = 4 and <h^2, v> saturated, in lexicographic order.

    ``within`` optionally restricts v to the integer span of the given rows.
    """
    m = as_matrix(g)
    if len(m) != 3 or m[0][0] != 3 or not is_positive_definite(m):
        raise ComponentError("expected a positive definite rank-3 Gram with h^2 first")
    out = []
    for v in sorted(vectors_of_norm(m, 12)):
        if bilinear(m, (1, 0, 0), v) != 4 or gcd(v[1], v[2]) != 1:
            continue
        if within is not None and not _in_span(within, v):
            continue
        out.append(v)
    return out


def _in_span(rows, v) -> bool:
    # v is in the integer span iff appending it leaves the nonzero invariant factors unchanged
    rows = as_matrix(rows)
    ext = [f for f in invariant_factors(rows + (tuple(v),)) if f]
    return ext == [f for f in invariant_factors(rows) if f]


def _complete_basis(v: tuple[int, ...]) -> tuple[int, ...]:
    """s with det(e1, v, s) = 1, normalized by reducing modulo v."""
    b, c = v[1], v[2]
    g, p, q = _egcd(b, c)
    if g != 1:
        raise ComponentError("<h^2, v> is not saturated")
    y, z = -q, p  # b z - c y = 1
    if b:
        k = (y % abs(b) - y) // b
    else:
        k = (z % abs(c) - z) // c
    return (0, y + k * b, z + k * c)


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return (abs(a), (1 if a >= 0 else -1), 0)
    g, x, y = _egcd(b, a % b)
    return (g, y, x - (a // b) * y)


@dataclass(frozen=True)
class VeroneseFrame:
    marked: MarkedGram
    basis: Matrix  # rows: h^2, v, s over the input basis


def veronese_frame_with_basis(g, within=None) -> VeroneseFrame:
    cands = veronese_candidates(g, within)
    if not cands:
        raise ComponentError("no Veronese frame")
    v = cands[0]
    s = _complete_basis(v)
    basis = ((1, 0, 0), v, s)
    return VeroneseFrame(MarkedGram(congruent(as_matrix(g), basis)), basis)


def veronese_frame(g, within=None) -> MarkedGram:
    """Re-express g on a basis (h^2, v, s) with v the lexicographically least Veronese class."""
    return veronese_frame_with_basis(g, within).marked


def component_frame(spec: ComponentSpec) -> VeroneseFrame:
    """Veronese frame of a component, taking v inside the discriminant-20 labelling
    <alpha1, alpha2> when d1 = 20 (that class is unique there)."""
    within = ((1, 0, 0), (0, 1, 0)) if spec.d1 == 20 else None
    return veronese_frame_with_basis(spec.gram, within)


# ---------------------------------------------------------------------------
# Cremona images of components


@dataclass(frozen=True)
class Identification:
    d1: int
    d2: int
    tau: int

    def to_json(self) -> dict:
        return {"d1": self.d1, "d2": self.d2, "tau": self.tau}


def identify_image(gram, discs: Sequence[int], d1: int = 20) -> list[Identification]:
    """Templates (d1, d', tau') isometric to gram, for the given d'."""
    out = []
    total = det(as_matrix(gram))
    for d2 in discs:
        if d2 == d1 or d2 < 2 or d2 % 6 not in (0, 2):
            continue
        a, b = _normalize(d1, d2)
        for tau in locate_components(a, b, total):
            t = template_gram(a, b, tau)
            if is_positive_definite(t) and isometry_exists(t, gram) is not None:
                out.append(Identification(d1, d2, tau))
    return out


@dataclass(frozen=True)
class RationalityReport:
    source: ComponentSpec
    marked_source: MarkedGram
    image: MarkedGram
    image_disc: int
    represented: dict[int, Labelling] = field(hash=False)
    excluded_list_clear: bool
    target_disc: int
    target_represented: bool
    image_equivalent: Optional[Identification]

    def to_json(self) -> dict:
        return {
            "source": self.source.to_json(),
            "marked_source": self.marked_source.to_json(),
            "image": self.image.to_json(),
            "image_disc": self.image_disc,
            "represented": [lab.to_json() for lab in self.represented.values()],
            "excluded": list(EXCLUDED_DISCS),
            "excluded_list_clear": self.excluded_list_clear,
            "target_disc": self.target_disc,
            "target_represented": self.target_represented,
            "image_equivalent": self.image_equivalent.to_json() if self.image_equivalent else None,
        }


NEW_RATIONAL_SOURCES = ((26, 0, 146), (38, -2, 62), (42, 1, 182))


def rationality_report(d: int, tau: int, target: int, d_max: int = 200) -> RationalityReport:
    try:
        spec = component_gram(20, d, tau)
    except ComponentError as exc:
        raise ComponentError(f"source component (20, {d}, {tau}): {exc}") from exc
    frame = component_frame(spec)
    image = cremona_gram_image(frame.marked)
    if image.det != spec.disc:
        raise ComponentError(f"image determinant {image.det} != source {spec.disc}")
    reps = represented_discs(image, max(d_max, target, max(EXCLUDED_DISCS)))
    clear = not any(e in reps for e in EXCLUDED_DISCS)
    hit = target in reps and reps[target].saturated
    ident = identify_image(image.gram, [target])
    return RationalityReport(
        spec, frame.marked, image, image.det, reps, clear, target, hit, ident[0] if ident else None
    )


def reproduce_new_rationals(d_max: int = 200) -> list[RationalityReport]:
    reports = []
    for d, tau, target in NEW_RATIONAL_SOURCES:
        r = rationality_report(d, tau, target, d_max)
        if not r.excluded_list_clear:
            raise ComponentError(f"d = {d}: image represents a discriminant in the excluded list")
        if not r.target_represented:
            raise ComponentError(f"d = {d}: image does not lie in C_{target}")
        reports.append(r)
    return reports


# ---------------------------------------------------------------------------
# Larger admissible discriminants


@dataclass(frozen=True)
class BiggerDiscReport:
    d: int
    source: ComponentSpec
    image: MarkedGram
    form: BinaryForm
    small_represented: tuple[int, ...]  # represented d' <= d with 20 not dividing d'
    clause1: bool
    witness: Optional[Labelling]
    search_max: int

    @property
    def verdict(self) -> str:
        return "witness found" if self.witness else "inconclusive below bound"

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "source": self.source.to_json(),
            "image": self.image.to_json(),
            "labelling_form": list(self.form.as_tuple()),
            "small_represented": list(self.small_represented),
            "clause1": self.clause1,
            "clause2": self.verdict,
            "witness": self.witness.to_json() if self.witness else None,
            "search_max": self.search_max,
        }


def bigger_disc_report(d: int, d_search_max: Optional[int] = None) -> BiggerDiscReport:
    if d < 14 or not admissible(d):
        raise ComponentError(f"d = {d} is not an admissible discriminant >= 14")
    bound = search_max() if d_search_max is None else d_search_max
    tau = 0 if d % 6 == 2 else 1
    spec = component_gram(20, d, tau)
    image = cremona_gram_image(component_frame(spec).marked)
    form = labelling_form(image)
    reps = represented_discs(image, max(bound, d))
    small = tuple(x for x in reps if x <= d and x % 20)
    witness = next((lab for x, lab in reps.items() if d < x <= bound and admissible(x) and lab.saturated), None)
    return BiggerDiscReport(d, spec, image, form, small, not small, witness, bound)


def admissible_range(lo: int, hi: int) -> list[int]:
    return [d for d in range(lo, hi + 1) if disc_nonempty(d) and admissible(d)]


# ---------------------------------------------------------------------------
# C_20 & C_14


@dataclass(frozen=True)
class SurveyRow:
    tau: int
    spec: ComponentSpec
    in_c8: bool
    conditional: bool
    image: MarkedGram
    image_discs: tuple[int, ...]  # labelling discriminants <= 200 of the image
    identifications: tuple[Identification, ...]
    singular: bool

    def to_json(self) -> dict:
        return {
            "tau": self.tau,
            "gram": [list(r) for r in self.spec.gram],
            "disc": self.spec.disc,
            "within_bound": self.spec.within_bound,
            "norm2_free": True,
            "saturated": True,
            "in_C8": self.in_c8,
            "conditional": self.conditional,
            "image": self.image.to_json(),
            "image_discs": list(self.image_discs),
            "identifications": [i.to_json() for i in self.identifications],
            "singular": self.singular,
        }


def c20_c14_survey(id_discs: Sequence[int] = (6, 14, 18, 26, 38, 42, 62)) -> list[SurveyRow]:
    rows = []
    for tau in range(-4, 5):
        spec = component_gram(20, 14, tau, strict=False)
        src_reps = represented_discs(spec.gram, 8)
        in_c8 = 8 in src_reps and src_reps[8].saturated
        image = cremona_gram_image(component_frame(spec).marked)
        reps = represented_discs(image, 200)
        discs = tuple(x for x, lab in reps.items() if lab.saturated)
        idents = tuple(identify_image(image.gram, [x for x in id_discs if x in discs]))
        rows.append(SurveyRow(tau, spec, in_c8, not spec.within_bound, image, discs, idents, 2 in discs or 6 in discs))
    return rows


# ---------------------------------------------------------------------------
# Invariance sweep (other components of C_20 & C_d)


@dataclass(frozen=True)
class SweepRow:
    d: int
    tau: int
    disc: int
    invariant: bool
    identifications: tuple[Identification, ...]


def component_sweep(d: int, id_max: int = 200) -> list[SweepRow]:
    """Image of every guaranteed component of C_20 & C_d, with isometry to the source.

    Images that are not isometric to their source are identified with templates
    (20, d', tau') for the saturated labelling discriminants d' <= id_max.
    """
    a, b = _normalize(20, d)
    bound = tau_bound(a, b)
    lo = -bound if (a % 6 == 2 and b % 6 == 2) else 0
    out = []
    for tau in range(lo, bound + 1):
        spec = component_gram(20, d, tau)
        image = cremona_gram_image(component_frame(spec).marked)
        invariant = isometry_exists(image.gram, spec.gram) is not None
        idents = ()
        if not invariant:
            reps = represented_discs(image, id_max)
            discs = [x for x, lab in reps.items() if lab.saturated and disc_nonempty(x) and x != 20]
            idents = tuple(identify_image(image.gram, discs))
        out.append(SweepRow(d, tau, spec.disc, invariant, idents))
    return out
