"""Pointwise exact algebra of curvature data: Weyl tensors, the Schouten
Hessian, and the quartic polynomials they generate.

A Weyl-type tensor is stored densely as an integer numpy array together
with a single rational scale, so every component is an exact rational
while the heavy contractions (norms, quartic forms) run through int64
einsum.  Seeded generators produce tensors satisfying all the algebraic
symmetries exactly; the tests verify the symmetries by brute force rather
than trusting the construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .polyalg import HarmonicBlock, HomogPoly, laplacian

# int64 einsum is exact as long as no intermediate sum overflows; entries
# are kept far below this bound and asserted on every fast path.
_INT_SAFE_BOUND = 10**7


def _lcm(a: int, b: int) -> int:
    return a // math.gcd(a, b) * b


class WeylTensor:
    """Totally trace-free algebraic curvature tensor at a point.

    Components W[i,k,j,l] = scale * ints[i,k,j,l] with ``ints`` an int64
    array and ``scale`` a positive rational.  Index symmetries:
    antisymmetric in (i,k) and in (j,l), symmetric under pair exchange,
    first Bianchi identity over the last three slots, and every single
    trace vanishes.
    """

    __slots__ = ("n", "ints", "scale", "_quartic", "_gradsq")

    def __init__(self, n: int, ints: np.ndarray, scale: Fraction = Fraction(1)):
        self.n = n
        ints = np.asarray(ints, dtype=np.int64)
        if ints.shape != (n, n, n, n):
            raise ValueError(f"expected shape {(n,) * 4}, got {ints.shape}")
        if ints.size and int(np.abs(ints).max()) > _INT_SAFE_BOUND:
            raise ValueError("integer components too large for exact fast paths")
        self.ints = ints
        self.scale = Fraction(scale)
        self._quartic = None
        self._gradsq = None

    def component(self, i: int, k: int, j: int, l: int) -> Fraction:
        return self.scale * int(self.ints[i, k, j, l])

    def rescale(self, factor) -> "WeylTensor":
        return WeylTensor(self.n, self.ints.copy(), self.scale * Fraction(factor))

    def is_zero(self) -> bool:
        return not self.ints.any() or self.scale == 0

    # -- scalars -------------------------------------------------------

    def norm_sq(self) -> Fraction:
        """|W|^2 = sum over all four indices of the squared components."""
        flat = self.ints.reshape(-1)
        total = int(np.dot(flat, flat))
        return self.scale * self.scale * total

    def cross_contraction(self) -> Fraction:
        """sum W_{ikjl} W_{iljk}; equals |W|^2 / 2 for any Weyl tensor."""
        swapped = np.transpose(self.ints, (0, 3, 2, 1))  # (i,l,j,k) read as (i,k,j,l)
        total = int(np.dot(self.ints.reshape(-1), swapped.reshape(-1)))
        return self.scale * self.scale * total

    # -- polynomials ----------------------------------------------------

    def quartic_form(self) -> HomogPoly:
        """sum_{kl} ( W_{ikjl} x_i x_j )^2 as an exact degree-4 polynomial."""
        if self._quartic is not None:
            return self._quartic
        n = self.n
        W = self.ints
        # T[i,j,a,b] = sum_{kl} W_{ikjl} W_{akbl}; integer coefficients are
        # accumulated per sorted index before the Fraction scale comes in
        T = np.einsum("ikjl,akbl->ijab", W, W)
        sc = self.scale * self.scale
        int_terms: dict[tuple[int, ...], int] = {}
        nz = np.nonzero(T)
        vals = T[nz]
        for i, j, a, b, v in zip(*nz, vals):
            e = [0] * n
            for idx in (i, j, a, b):
                e[idx] += 1
            key = tuple(e)
            int_terms[key] = int_terms.get(key, 0) + int(v)
        terms = {e: sc * v for e, v in int_terms.items() if v}
        self._quartic = HomogPoly(n, 4, terms)
        return self._quartic

    def gradient_square_form(self) -> HomogPoly:
        """sum_{jkl} ( W_{ijkl} x_i + W_{ilkj} x_i )^2, a degree-2 polynomial.

        Half the Laplacian of the quartic form.
        """
        if self._gradsq is not None:
            return self._gradsq
        n = self.n
        V = self.ints + np.transpose(self.ints, (0, 3, 2, 1))
        M = np.einsum("ijkl,ajkl->ia", V, V)
        sc = self.scale * self.scale
        int_terms: dict[tuple[int, ...], int] = {}
        for i in range(n):
            for a in range(n):
                v = int(M[i, a])
                if v == 0:
                    continue
                e = [0] * n
                e[i] += 1
                e[a] += 1
                key = tuple(e)
                int_terms[key] = int_terms.get(key, 0) + v
        terms = {e: sc * v for e, v in int_terms.items() if v}
        self._gradsq = HomogPoly(n, 2, terms)
        return self._gradsq

    def quartic_harmonic_split(self) -> list[HarmonicBlock]:
        """Three-block harmonic split of the quartic form.

        The top block is the quartic minus r^2/(n+4) times the gradient
        square plus 3|W|^2 r^4 / (2(n+2)(n+4)); the middle block pairs the
        gradient square with -3|W|^2 r^2 / (n(n+4)); the radial block is
        the constant 3|W|^2 / (2n(n+2)).
        """
        n = self.n
        q = self.quartic_form()
        g = self.gradient_square_form()
        w2 = self.norm_sq()
        r2 = HomogPoly.r_squared(n)
        r4 = r2.mul_r2k(1)
        h0 = q - g.mul_r2k(1).scale(Fraction(1, n + 4)) + r4.scale(
            w2 * Fraction(3, 2 * (n + 2) * (n + 4))
        )
        h1 = g.scale(Fraction(1, n + 4)) - r2.scale(w2 * Fraction(3, n * (n + 4)))
        h2 = HomogPoly.constant(n, w2 * Fraction(3, 2 * n * (n + 2)))
        return [HarmonicBlock(0, h0), HarmonicBlock(1, h1), HarmonicBlock(2, h2)]

    def sphere_average_quartic(self) -> Fraction:
        """Integral of the quartic form over S^{n-1}, in units of omega_n.

        The harmonic blocks integrate to zero, leaving the radial block
        times the sphere area n omega_n: total 3|W|^2/(2(n+2)) * omega_n.
        The rational factor is returned; omega_n stays symbolic.
        """
        return self.norm_sq() * Fraction(3, 2 * (self.n + 2))

    # -- serialization ---------------------------------------------------

    def to_json(self) -> dict:
        n = self.n
        sc = self.scale

        def frac(i, k, j, l):
            c = sc * int(self.ints[i, k, j, l])
            return f"{c.numerator}/{c.denominator}"

        W = [
            [[[frac(i, k, j, l) for l in range(n)] for j in range(n)] for k in range(n)]
            for i in range(n)
        ]
        return {"n": n, "W": W}

    @classmethod
    def from_json(cls, obj: dict) -> "WeylTensor":
        n = int(obj["n"])
        fr = [
            [[[Fraction(obj["W"][i][k][j][l]) for l in range(n)] for j in range(n)] for k in range(n)]
            for i in range(n)
        ]
        return _from_fraction_array(n, fr)


def _from_fraction_array(n: int, fr) -> WeylTensor:
    den = 1
    for i in range(n):
        for k in range(n):
            for j in range(n):
                for l in range(n):
                    den = _lcm(den, fr[i][k][j][l].denominator)
    ints = np.zeros((n, n, n, n), dtype=object)
    for i in range(n):
        for k in range(n):
            for j in range(n):
                for l in range(n):
                    ints[i, k, j, l] = int(fr[i][k][j][l] * den)
    g = 0
    for v in ints.reshape(-1):
        g = math.gcd(g, abs(int(v)))
    if g > 1:
        ints = ints // g
        num = g
    else:
        num = 1
    worst = max((abs(int(v)) for v in ints.reshape(-1)), default=0)
    if worst > _INT_SAFE_BOUND:
        # astype would wrap silently; refuse before any conversion
        raise ValueError("rational components too large for exact fast paths")
    return WeylTensor(n, ints.astype(np.int64), Fraction(num, den))


@dataclass(frozen=True)
class SchoutenHessian:
    """Symmetric rational matrix J_ij (covariant Hessian of J at the point)."""

    n: int
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.n or any(len(row) != self.n for row in self.entries):
            raise ValueError("entries must be an n x n matrix")
        for i in range(self.n):
            for j in range(self.n):
                if self.entries[i][j] != self.entries[j][i]:
                    raise ValueError("Schouten Hessian must be symmetric")

    @classmethod
    def from_rows(cls, rows) -> "SchoutenHessian":
        n = len(rows)
        return cls(n, tuple(tuple(Fraction(v) for v in row) for row in rows))

    @classmethod
    def zero(cls, n: int) -> "SchoutenHessian":
        return cls(n, tuple(tuple(Fraction(0) for _ in range(n)) for _ in range(n)))

    @classmethod
    def identity(cls, n: int) -> "SchoutenHessian":
        return cls(
            n,
            tuple(
                tuple(Fraction(1 if i == j else 0) for j in range(n)) for i in range(n)
            ),
        )

    def trace(self) -> Fraction:
        return sum((self.entries[i][i] for i in range(self.n)), Fraction(0))

    def quadratic_form(self) -> HomogPoly:
        """J_ij x_i x_j as a degree-2 polynomial."""
        terms: dict[tuple[int, ...], Fraction] = {}
        for i in range(self.n):
            for j in range(self.n):
                c = self.entries[i][j]
                if c == 0:
                    continue
                e = [0] * self.n
                e[i] += 1
                e[j] += 1
                key = tuple(e)
                s = terms.get(key, Fraction(0)) + c
                if s == 0:
                    terms.pop(key, None)
                else:
                    terms[key] = s
        return HomogPoly(self.n, 2, terms)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "J": [
                [f"{c.numerator}/{c.denominator}" for c in row] for row in self.entries
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SchoutenHessian":
        return cls.from_rows([[Fraction(v) for v in row] for row in obj["J"]])


# -- generators --------------------------------------------------------------


def random_weyl(n: int, seed: int) -> WeylTensor:
    """Seeded random Weyl tensor with every algebraic invariant exact.

    Builds a random integer tensor, imposes the pair symmetries, projects
    out the totally antisymmetric part (first Bianchi), then removes the
    Ricci and scalar parts via the standard curvature decomposition.  All
    projections run in integer arithmetic with the denominator
    24(n-1)(n-2) tracked in the scale, so the result is exact.  For n <= 3
    the Weyl tensor vanishes identically and the zero tensor is returned.
    """
    if n <= 3:
        return WeylTensor(n, np.zeros((n, n, n, n), dtype=np.int64))
    rng = np.random.Generator(np.random.Philox(seed))
    R = rng.integers(-9, 10, size=(n, n, n, n)).astype(np.int64)

    # pair symmetries, cleared denominators (factor 8 absorbed into scale)
    R = R - np.transpose(R, (1, 0, 2, 3))
    R = R - np.transpose(R, (0, 1, 3, 2))
    R = R + np.transpose(R, (2, 3, 0, 1))

    # first Bianchi: 3R minus the cyclic sum over slots 2,3,4 (factor 3)
    cyc = R + np.transpose(R, (0, 2, 3, 1)) + np.transpose(R, (0, 3, 1, 2))
    R = 3 * R - cyc

    # remove all traces; multiply through by (n-1)(n-2) to stay integral
    ric = np.einsum("ikil->kl", R)
    scal = int(np.trace(ric))
    delta = np.eye(n, dtype=np.int64)
    kn = (
        np.einsum("ij,kl->ikjl", ric, delta)
        + np.einsum("kl,ij->ikjl", ric, delta)
        - np.einsum("il,kj->ikjl", ric, delta)
        - np.einsum("kj,il->ikjl", ric, delta)
    )
    gg = np.einsum("ij,kl->ikjl", delta, delta) - np.einsum("il,kj->ikjl", delta, delta)
    W = (n - 1) * (n - 2) * R - (n - 1) * kn + scal * gg

    g = int(np.gcd.reduce(np.abs(W.reshape(-1))))
    den = 24 * (n - 1) * (n - 2)
    if g > 1:
        W = W // g
    else:
        g = 1
    return WeylTensor(n, W, Fraction(g, den))


def random_schouten_hessian(n: int, seed: int, W: WeylTensor) -> SchoutenHessian:
    """Seeded symmetric matrix whose trace satisfies the conformal normal
    coordinate constraint trace = -|W|^2 / (12(n-1))."""
    rng = np.random.Generator(np.random.Philox(seed + (1 << 32)))
    raw = rng.integers(-9, 10, size=(n, n))
    sym = [[Fraction(int(raw[i, j] + raw[j, i]), 2) for j in range(n)] for i in range(n)]
    base = SchoutenHessian.from_rows(sym)
    return fix_trace(base, W)


def fix_trace(Jh: SchoutenHessian, W: WeylTensor) -> SchoutenHessian:
    """Shift the pure-trace part of Jh so trace(Jh) = -|W|^2/(12(n-1))."""
    n = Jh.n
    target = -W.norm_sq() / (12 * (n - 1))
    shift = (target - Jh.trace()) / n
    rows = [
        [Jh.entries[i][j] + (shift if i == j else 0) for j in range(n)]
        for i in range(n)
    ]
    return SchoutenHessian.from_rows(rows)


def schouten_quartic(W: WeylTensor, Jh: SchoutenHessian) -> HomogPoly:
    """The quartic jet of the Schouten tensor in conformal normal coordinates:

        -2/(9(n-2)) * quartic_form(W)  -  r^2/(n-2) * J_ij x_i x_j.
    """
    if W.n != Jh.n:
        raise ValueError("dimension mismatch")
    n = W.n
    return W.quartic_form().scale(Fraction(-2, 9 * (n - 2))) + Jh.quadratic_form().mul_r2k(
        1
    ).scale(Fraction(-1, n - 2))


# -- invariant checks ---------------------------------------------------------


def invariants_hold(W: WeylTensor) -> bool:
    """All symmetry, Bianchi, and trace invariants, checked exactly on the
    integer components via vectorized transposes."""
    A = W.ints
    if (A + np.transpose(A, (1, 0, 2, 3))).any():
        return False
    if (A + np.transpose(A, (0, 1, 3, 2))).any():
        return False
    if (A - np.transpose(A, (2, 3, 0, 1))).any():
        return False
    cyc = A + np.transpose(A, (0, 2, 3, 1)) + np.transpose(A, (0, 3, 1, 2))
    if cyc.any():
        return False
    for a, b in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]:
        if np.trace(A, axis1=a, axis2=b).any():
            return False
    return True


# -- brute-force helpers used by the tests -----------------------------------


def symmetry_residuals(W: WeylTensor) -> dict[str, Fraction]:
    """Max absolute residual of each defining symmetry, computed by loops
    independent of the construction."""
    n = W.n
    res = {
        "antisym_ik": Fraction(0),
        "antisym_jl": Fraction(0),
        "pair_swap": Fraction(0),
        "bianchi": Fraction(0),
    }
    for i in range(n):
        for k in range(n):
            for j in range(n):
                for l in range(n):
                    w = W.component(i, k, j, l)
                    res["antisym_ik"] = max(res["antisym_ik"], abs(w + W.component(k, i, j, l)))
                    res["antisym_jl"] = max(res["antisym_jl"], abs(w + W.component(i, k, l, j)))
                    res["pair_swap"] = max(res["pair_swap"], abs(w - W.component(j, l, i, k)))
                    b = w + W.component(i, j, l, k) + W.component(i, l, k, j)
                    res["bianchi"] = max(res["bianchi"], abs(b))
    return res


def trace_residual(W: WeylTensor) -> Fraction:
    """Max absolute value over all six index-pair contractions."""
    n = W.n
    worst = Fraction(0)
    axes_pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    for a, b in axes_pairs:
        tr = np.trace(W.ints, axis1=a, axis2=b)
        m = int(np.abs(tr).max()) if tr.size else 0
        worst = max(worst, abs(W.scale * m))
    return worst
