"""Closed-form algebra for radial functions of the family

    c * lam^p * r^j * (r^2 + lam^2)^s

with c rational and p, s rational exponents.  The family is closed under
d/dr, division by r, and the radial Laplacian h'' + (n-1) h'/r, which is
everything the bubble identities and the test-function integrands need.
Coefficients stay exact; only evaluation produces floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

Term = tuple[Fraction, Fraction, int, Fraction]  # (c, lam_power, r_power, s)


class RadialTermSum:
    """Finite sum of terms c lam^p r^j (r^2+lam^2)^s at a fixed lam > 0."""

    __slots__ = ("lam", "terms")

    def __init__(self, lam: float, terms: list[Term] | None = None):
        if lam <= 0:
            raise ValueError("lam must be positive")
        self.lam = float(lam)
        merged: dict[tuple[Fraction, int, Fraction], Fraction] = {}
        for c, p, j, s in terms or []:
            c = Fraction(c)
            if c == 0:
                continue
            key = (Fraction(p), int(j), Fraction(s))
            acc = merged.get(key, Fraction(0)) + c
            if acc == 0:
                merged.pop(key, None)
            else:
                merged[key] = acc
        self.terms = [(c, p, j, s) for (p, j, s), c in sorted(merged.items())]

    @classmethod
    def single(cls, lam, c, lam_power, r_power, s) -> "RadialTermSum":
        return cls(lam, [(Fraction(c), Fraction(lam_power), int(r_power), Fraction(s))])

    def __add__(self, other: "RadialTermSum") -> "RadialTermSum":
        if other.lam != self.lam:
            raise ValueError("lam mismatch")
        return RadialTermSum(self.lam, [(c, p, j, s) for (c, p, j, s) in self.terms]
                             + [(c, p, j, s) for (c, p, j, s) in other.terms])

    def __sub__(self, other: "RadialTermSum") -> "RadialTermSum":
        return self + other.scale(-1)

    def scale(self, factor) -> "RadialTermSum":
        f = Fraction(factor)
        return RadialTermSum(self.lam, [(c * f, p, j, s) for (c, p, j, s) in self.terms])

    def diff(self) -> "RadialTermSum":
        out: list[Term] = []
        for c, p, j, s in self.terms:
            if j != 0:
                out.append((c * j, p, j - 1, s))
            if s != 0:
                out.append((2 * c * s, p, j + 1, s - 1))
        return RadialTermSum(self.lam, out)

    def div_r(self) -> "RadialTermSum":
        return RadialTermSum(self.lam, [(c, p, j - 1, s) for (c, p, j, s) in self.terms])

    def laplacian(self, n: int) -> "RadialTermSum":
        d = self.diff()
        return d.diff() + d.div_r().scale(n - 1)

    def bilaplacian(self, n: int) -> "RadialTermSum":
        return self.laplacian(n).laplacian(n)

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        lam = self.lam
        out = np.zeros_like(r)
        base = r * r + lam * lam
        for c, p, j, s in self.terms:
            piece = float(c) * lam ** float(p)
            if j != 0:
                piece = piece * r ** float(j)
            if s != 0:
                piece = piece * base ** float(s)
            out = out + piece
        return out if out.shape else float(out)

    def deriv(self, order: int) -> "RadialTermSum":
        out = self
        for _ in range(order):
            out = out.diff()
        return out
