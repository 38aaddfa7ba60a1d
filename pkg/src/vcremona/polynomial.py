"""Sparse multivariate polynomials with exact rational coefficients.

Only what the cofactor computation needs: ring operations, equality,
homogeneity, and a readable rendering.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

NVARS = 6


class SparsePoly:
    """Polynomial in X0..X5 stored as {exponent tuple: Fraction}; zeros dropped."""

    __slots__ = ("_terms", "nvars")

    def __init__(self, terms: Mapping[tuple[int, ...], object] | None = None, nvars: int = NVARS):
        self.nvars = nvars
        clean = {}
        for mono, c in (terms or {}).items():
            c = Fraction(c)
            if len(mono) != nvars:
                raise ValueError(f"exponent {mono} has wrong length")
            if c:
                clean[tuple(mono)] = c
        self._terms = clean

    @classmethod
    def var(cls, i: int, nvars: int = NVARS) -> "SparsePoly":
        mono = [0] * nvars
        mono[i] = 1
        return cls({tuple(mono): 1}, nvars)

    @classmethod
    def const(cls, c, nvars: int = NVARS) -> "SparsePoly":
        return cls({(0,) * nvars: c}, nvars)

    @property
    def terms(self) -> dict[tuple[int, ...], Fraction]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def degrees(self) -> set[int]:
        return {sum(m) for m in self._terms}

    def is_homogeneous(self, degree: int | None = None) -> bool:
        ds = self.degrees()
        if not ds:
            return True
        return len(ds) == 1 and (degree is None or ds == {degree})

    @property
    def degree(self) -> int:
        ds = self.degrees()
        return max(ds) if ds else -1

    def _coerce(self, other) -> "SparsePoly":
        if isinstance(other, SparsePoly):
            return other
        return SparsePoly.const(other, self.nvars)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, 0) + c
        return SparsePoly(out, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return SparsePoly({m: -c for m, c in self._terms.items()}, self.nvars)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out: dict[tuple[int, ...], Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return SparsePoly(out, self.nvars)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = SparsePoly.const(1, self.nvars)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = SparsePoly.const(other, self.nvars)
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def substitute(self, images: Iterable["SparsePoly"]) -> "SparsePoly":
        """Replace X_i by images[i]."""
        images = list(images)
        powers: dict[tuple[int, int], SparsePoly] = {}

        def pw(i, k):
            if (i, k) not in powers:
                powers[(i, k)] = images[i] ** k
            return powers[(i, k)]

        total = SparsePoly({}, images[0].nvars if images else self.nvars)
        for mono, c in self._terms.items():
            term = SparsePoly.const(c, total.nvars)
            for i, k in enumerate(mono):
                if k:
                    term = term * pw(i, k)
            total = total + term
        return total

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for mono in sorted(self._terms, reverse=True):
            c = self._terms[mono]
            factors = []
            for i, k in enumerate(mono):
                if k == 1:
                    factors.append(f"X{i}")
                elif k > 1:
                    factors.append(f"X{i}^{k}")
            body = "*".join(factors)
            mag = abs(c)
            if body and mag == 1:
                text = body
            elif body:
                text = f"{mag}*{body}"
            else:
                text = str(mag)
            sign = "-" if c < 0 else "+"
            parts.append((sign, text))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, text in parts[1:]:
            out += f" {sign} {text}"
        return out

    def __repr__(self):
        return f"SparsePoly({self})"


def X(i: int) -> SparsePoly:
    return SparsePoly.var(i)
