"""Green's-function expansion of the Paneitz operator near its pole.

Everything is normalized so the expanded object is
H = 2n(2-n)(4-n) omega_n G_{P,p}: flat metrics give H = r^{4-n} exactly,
and for curved metrics in conformal normal coordinates the first
correction is the degree-4 shell, driven by the source polynomial

    phi_4 = -(4(n-4)/9) sum_{kl}(W_{ikjl} x_i x_j)^2
            + 2(n-4)(n-6) r^2 J_ij x_i x_j
            + (n-4)|W|^2 r^4 / (24(n-1)),

inverted through A_{2-n} A_{4-n}.  For n >= 9 the inverse is log-free and
has a closed form; at n = 8 the radial kernel block forces a single
-|W|^2/1440 * r^4 log r term.  The recursion loop itself is generic in an
abstract degree-by-degree source so the flat case exercises it to any
order; curved sources beyond degree 4 would need metric Taylor data that
the curvature jet does not carry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .polyalg import (
    HomogPoly,
    LogRadialExpansion,
    apply_AA,
    solve_AA,
)
from .report import VerificationReport
from .tensor import (
    SchoutenHessian,
    WeylTensor,
    fix_trace,
    random_schouten_hessian,
    random_weyl,
)


@dataclass(frozen=True)
class CurvatureJet:
    """Curvature data at a point in conformal normal coordinates.

    The scalar constraint trace(Jh) = -|W|^2 / (12(n-1)) is part of the
    coordinate normalization and is enforced at construction.
    """

    n: int
    W: WeylTensor
    Jh: SchoutenHessian

    def __post_init__(self):
        if self.W.n != self.n or self.Jh.n != self.n:
            raise ValueError("dimension mismatch in jet")
        target = -self.W.norm_sq() / (12 * (self.n - 1))
        if self.Jh.trace() != target:
            raise ValueError(
                "Schouten Hessian trace violates the conformal normal "
                f"coordinate constraint: {self.Jh.trace()} != {target}"
            )

    @classmethod
    def flat(cls, n: int) -> "CurvatureJet":
        return cls(n, WeylTensor(n, np.zeros((n,) * 4, dtype=np.int64)), SchoutenHessian.zero(n))

    def is_flat(self) -> bool:
        return self.W.is_zero() and all(
            c == 0 for row in self.Jh.entries for c in row
        )

    def to_json(self) -> dict:
        return {"n": self.n, "W": self.W.to_json()["W"], "J": self.Jh.to_json()["J"]}

    @classmethod
    def from_json(cls, obj: dict) -> "CurvatureJet":
        n = int(obj["n"])
        W = WeylTensor.from_json({"n": n, "W": obj["W"]})
        Jh = SchoutenHessian.from_json({"n": n, "J": obj["J"]})
        return cls(n, W, Jh)


def random_jet(n: int, seed: int, normalize: bool = False) -> CurvatureJet:
    """Seeded jet with exact invariants.

    With ``normalize`` the Weyl part is rationally rescaled so |W|^2 is
    within 1e-6 of 1; the asymptotics fits rely on this to keep the
    neglected quadratic-in-curvature terms small.
    """
    W = random_weyl(n, seed)
    if normalize:
        w2 = float(W.norm_sq())
        s = Fraction(1.0 / math.sqrt(w2)).limit_denominator(10**9)
        W = W.rescale(s)
        rng = np.random.Generator(np.random.Philox(seed + (1 << 32)))
        raw = rng.integers(-9, 10, size=(n, n))
        scale = Fraction(1, 200)
        rows = [
            [Fraction(int(raw[i, j] + raw[j, i])) * scale for j in range(n)]
            for i in range(n)
        ]
        Jh = fix_trace(SchoutenHessian.from_rows(rows), W)
    else:
        Jh = random_schouten_hessian(n, seed, W)
    return CurvatureJet(n, W, Jh)


# -- degree-4 source and its inverse -----------------------------------------


def phi4(jet: CurvatureJet) -> HomogPoly:
    """Degree-4 shell of r^n P(r^{4-n}): the first source of the recursion."""
    n = jet.n
    if n < 5:
        raise ValueError("expansion needs n >= 5")
    q = jet.W.quartic_form().scale(Fraction(-4 * (n - 4), 9))
    jterm = jet.Jh.quadratic_form().mul_r2k(1).scale(Fraction(2 * (n - 4) * (n - 6)))
    w2 = jet.W.norm_sq()
    rterm = HomogPoly.r_squared(n).mul_r2k(1).scale(w2 * Fraction(n - 4, 24 * (n - 1)))
    return q + jterm + rterm


def psi4_solve(jet: CurvatureJet) -> LogRadialExpansion:
    """Invert A_{2-n} A_{4-n} against -phi4.

    Log-free for n >= 9; at n = 8 exactly one r^4 log r block appears.
    Below n = 8 the degree-4 correction is absorbed into the remainder
    class of the expansion and has no meaning here.
    """
    if jet.n < 8:
        raise ValueError("degree-4 correction only defined for n >= 8")
    return solve_AA(jet.n, phi4(jet))


def psi4_closed_form(jet: CurvatureJet) -> LogRadialExpansion:
    """Directly coded closed form of the degree-4 correction, n >= 9.

    Three harmonic pieces: the degree-4 harmonic part of the Weyl quartic
    over 40(n-2), a degree-2 harmonic part over 48(n-6) carrying the
    Schouten Hessian, and a pure r^4 multiple of |W|^2.
    """
    n = jet.n
    if n < 9:
        raise ValueError("closed form requires n >= 9")
    q = jet.W.quartic_form()
    g = jet.W.gradient_square_form()
    w2 = jet.W.norm_sq()
    jq = jet.Jh.quadratic_form()
    r2 = HomogPoly.r_squared(n)
    r4 = r2.mul_r2k(1)

    first = (
        q.scale(Fraction(2, 9))
        - g.mul_r2k(1).scale(Fraction(2, 9 * (n + 4)))
        + r4.scale(w2 * Fraction(1, 3 * (n + 2) * (n + 4)))
    ).scale(Fraction(1, 40 * (n - 2)))
    second = (
        g.scale(Fraction(4, 9 * (n + 4)))
        - jq.scale(Fraction(2 * (n - 6)))
        - r2.scale(w2 * Fraction(n * n + 6 * n - 32, 6 * n * (n + 4) * (n - 1)))
    ).mul_r2k(1).scale(Fraction(1, 48 * (n - 6)))
    third = r4.scale(
        w2
        * Fraction(
            (n - 4) * (3 * n * n - 2 * n - 64),
            576 * n * (n + 2) * (n - 1) * (n - 6) * (n - 8),
        )
    )
    total = first + second + third
    return LogRadialExpansion(n, 0, {(4, 0): total} if not total.is_zero() else None)


def n8_log_coefficient(jet: CurvatureJet) -> Fraction:
    """Coefficient of r^4 log r in the n=8 expansion: -|W|^2 / 1440."""
    if jet.n != 8:
        raise ValueError("log coefficient is an n=8 statement")
    return -jet.W.norm_sq() / 1440


# -- assembled expansions ------------------------------------------------------


@dataclass(frozen=True)
class GreenExpansion:
    """Expansion of H = 2n(2-n)(4-n) omega_n G_{P,p} near the pole.

    ``expansion`` holds r^{4-n} (1 + corrections); ``remainder`` records
    the O-class of the neglected part.  For n in {5,6,7} the constant in
    the expansion is carried as the opaque symbol ``constant_symbol``
    (its value comes from positive-mass arguments, never computed here).
    """

    n: int
    expansion: LogRadialExpansion
    remainder: str
    constant_symbol: str | None = None

    def log_terms(self) -> list[dict]:
        return [
            {"deg": i, "logpow": k, "poly": self.expansion.terms[(i, k)].to_json()}
            for (i, k) in sorted(self.expansion.terms)
            if k > 0
        ]

    def to_json(self) -> dict:
        out = {
            "n": self.n,
            "normalization": "H = 2n(2-n)(4-n) omega_n G_{P,p}",
            "expansion": self.expansion.to_json(),
            "remainder": self.remainder,
            "log_terms": self.log_terms(),
        }
        if self.constant_symbol is not None:
            out["constant_term"] = self.constant_symbol
        return out


def run_recursion(
    n: int, order: int, source: Callable[[int], HomogPoly]
) -> LogRadialExpansion:
    """Generic degree-by-degree inversion of A_{2-n} A_{4-n}.

    ``source(i)`` supplies the degree-i shell of the accumulated residual;
    each shell is killed by one solve.  The flat case has source zero at
    every degree and returns the bare expansion to any order.
    """
    acc = LogRadialExpansion(n, Fraction(4 - n), {(0, 0): HomogPoly.constant(n, 1)})
    for i in range(1, order + 1):
        phi_i = source(i)
        if phi_i.degree != i or phi_i.n != n:
            raise ValueError(f"source at degree {i} has wrong shape")
        if phi_i.is_zero():
            continue
        psi_i = solve_AA(n, phi_i)
        for (deg, k), poly in psi_i.terms.items():
            acc._add_term(deg, k, poly)
    return acc


def flat_expansion(n: int, order: int = 4) -> GreenExpansion:
    """Flat metric: H = r^{4-n} with no corrections at any order."""
    if n < 5:
        raise ValueError("n >= 5 required")
    zero_source = lambda i: HomogPoly.zero(n, i)
    acc = run_recursion(n, order, zero_source)
    return GreenExpansion(n=n, expansion=acc, remainder="Oinf(1)")


def green_leading(jet: CurvatureJet) -> GreenExpansion:
    """Leading expansion of H per dimension.

    n in {5,6,7}: r^{4-n} + A with A symbolic, remainder O4(r).
    n = 8: r^{-4} + log shell, remainder O4(1).
    n >= 9: r^{4-n}(1 + psi_4), remainder O4(r^{9-n}).
    """
    n = jet.n
    if n < 5:
        raise ValueError("n >= 5 required")
    if jet.is_flat():
        return flat_expansion(n)
    if n in (5, 6, 7):
        acc = LogRadialExpansion(n, Fraction(4 - n), {(0, 0): HomogPoly.constant(n, 1)})
        return GreenExpansion(n=n, expansion=acc, remainder="O4(r)", constant_symbol="A")
    acc = LogRadialExpansion(n, Fraction(4 - n), {(0, 0): HomogPoly.constant(n, 1)})
    for (deg, k), poly in psi4_solve(jet).terms.items():
        acc._add_term(deg, k, poly)
    remainder = "O4(1)" if n == 8 else "O4(r^{9-n})"
    return GreenExpansion(n=n, expansion=acc, remainder=remainder)


def verify_recursion_residual(jet: CurvatureJet, green: GreenExpansion) -> VerificationReport:
    """Check A_{2-n} A_{4-n} psi_4 + phi_4 = 0 on the degree-4 shell.

    Applies the operators with full log bookkeeping; the constant term of
    the expansion is annihilated automatically, so the whole correction
    part can be fed through.
    """
    n = jet.n
    correction = LogRadialExpansion(n, 0, dict(green.expansion.terms))
    applied = apply_AA(n, correction)
    src = phi4(jet) if not jet.is_flat() else HomogPoly.zero(n, 4)
    residual = applied + LogRadialExpansion.from_poly(src)
    ok = residual.is_zero()
    return VerificationReport(
        check_id="parametrix.recursion_residual",
        inputs={"n": n, "flat": jet.is_flat()},
        expected="0",
        provenance="degree-4 shell of the parametrix recursion",
        computed="0" if ok else repr(residual),
        tolerance="exact",
        passed=ok,
    )


def latex_lines(e: LogRadialExpansion) -> list[str]:
    """One LaTeX line per (degree, log power) shell of an expansion."""
    rho = e.radial_exp
    lines = []
    for (i, k) in sorted(e.terms):
        poly = e.terms[(i, k)]
        body = " + ".join(
            _latex_term(c, exp) for exp, c in sorted(poly.terms.items())
        )
        prefix = f"r^{{{rho}}}" if rho != 0 else ""
        logpart = "" if k == 0 else (r"\log r" if k == 1 else rf"\log^{{{k}}} r")
        lines.append(f"{prefix}\\left({body}\\right){logpart}".strip())
    return lines


def _latex_term(c: Fraction, exp: tuple[int, ...]) -> str:
    mono = " ".join(
        f"x_{{{i + 1}}}" + (f"^{{{e}}}" if e > 1 else "")
        for i, e in enumerate(exp)
        if e > 0
    )
    if c.denominator == 1:
        coeff = str(c.numerator)
    else:
        sign = "-" if c < 0 else ""
        coeff = rf"{sign}\frac{{{abs(c.numerator)}}}{{{c.denominator}}}"
    return f"{coeff} {mono}".strip()
