"""Closed-form quantities on R^n and the round sphere S^n.

Gamma-function moment integrals for bubble-type profiles, the bubble
profiles themselves with exact derivative structure, the sharp constants
of the fourth-order Sobolev quotient and its dual, and the spherical
Green's function in stereographic coordinates.  Stereographic convention:
coordinates come from projecting away from the north pole, so the pole of
the Green's function sits at x = infinity's antipode and all sphere/plane
transfers in the package share this one convention.

Floating evaluation goes through log-Gamma; rational quantities (the
sphere's Q value) stay exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .radial import RadialTermSum


def _gammaln(x: float) -> float:
    return math.lgamma(x)


def omega_n(n: int) -> float:
    """Volume of the unit ball in R^n: pi^{n/2} / Gamma(n/2 + 1)."""
    return math.exp(0.5 * n * math.log(math.pi) - _gammaln(0.5 * n + 1))


def sphere_area(n: int) -> float:
    """Surface area of the unit sphere S^n (embedded in R^{n+1})."""
    return (n + 1) * omega_n(n + 1)


def radial_moment(a: float, b: float, n: int) -> float:
    """Integral over R^n of |x|^b (|x|^2+1)^{-a}.

    Equals pi^{n/2} Gamma((b+n)/2) Gamma(a-(b+n)/2) / (Gamma(a) Gamma(n/2));
    requires b > -n and 2a - b > n for convergence.
    """
    if not b > -n:
        raise ValueError(f"need b > -n, got b={b}, n={n}")
    if not 2 * a - b > n:
        raise ValueError(f"need 2a - b > n, got a={a}, b={b}, n={n}")
    h = 0.5 * (b + n)
    logval = (
        0.5 * n * math.log(math.pi)
        + _gammaln(h)
        + _gammaln(a - h)
        - _gammaln(a)
        - _gammaln(0.5 * n)
    )
    return math.exp(logval)


# -- bubbles -------------------------------------------------------------------


@dataclass(frozen=True)
class RadialProfile:
    """Radial function with closed-form derivatives through any order."""

    kind: str
    lam: float
    n: int
    fn: RadialTermSum

    def value(self, r):
        return self.fn(r)

    def deriv(self, order: int, r):
        return self.fn.deriv(order)(r)

    def laplacian(self, r):
        return self.fn.laplacian(self.n)(r)

    def bilaplacian(self, r):
        return self.fn.bilaplacian(self.n)(r)


def bubble_u(lam: float, n: int) -> RadialProfile:
    """u_lam = (lam / (r^2 + lam^2))^{(n-4)/2}."""
    if n < 5:
        raise ValueError("bubbles require n >= 5")
    q = Fraction(n - 4, 2)
    fn = RadialTermSum.single(lam, 1, q, 0, -q)
    return RadialProfile("bubble_u", lam, n, fn)


def bubble_f(lam: float, n: int) -> RadialProfile:
    """f_lam = (lam / (r^2 + lam^2))^{(n+4)/2} = u_lam^{(n+4)/(n-4)}."""
    if n < 5:
        raise ValueError("bubbles require n >= 5")
    q = Fraction(n + 4, 2)
    fn = RadialTermSum.single(lam, 1, q, 0, -q)
    return RadialProfile("bubble_f", lam, n, fn)


def bilap_radial(p: RadialProfile, r):
    """Bilaplacian of a radial profile: (d^2/dr^2 + (n-1)/r d/dr) twice."""
    return p.bilaplacian(r)


def bubble_pde_residual(lam: float, n: int, r) -> np.ndarray:
    """Relative residual of Delta^2 u_lam = n(n+2)(n-2)(n-4) u_lam^{(n+4)/(n-4)}."""
    u = bubble_u(lam, n)
    lhs = np.asarray(bilap_radial(u, r), dtype=float)
    c = n * (n + 2) * (n - 2) * (n - 4)
    rhs = c * bubble_f(lam, n).value(r)
    return np.abs(lhs - rhs) / np.abs(rhs)


# -- sharp constants -----------------------------------------------------------


@dataclass(frozen=True)
class SharpConstants:
    n: int
    Y4_sphere: float
    Theta4_sphere: float
    Q_sphere: Fraction
    omega_n: float


def sharp_constants(n: int) -> SharpConstants:
    """Sphere values: Q = n(n+2)(n-2)/8 exactly,

        Y4(S^n) = n(n+2)(n-2)(n-4)/16 * 2^{4/n} pi^{2(n+1)/n}
                  / Gamma((n+1)/2)^{4/n},

    and Theta4 = 1/Y4.
    """
    if n < 5:
        raise ValueError("n >= 5 required")
    lead = n * (n + 2) * (n - 2) * (n - 4) / 16.0
    logval = (
        (4.0 / n) * math.log(2.0)
        + (2.0 * (n + 1) / n) * math.log(math.pi)
        - (4.0 / n) * _gammaln(0.5 * (n + 1))
    )
    y4 = lead * math.exp(logval)
    return SharpConstants(
        n=n,
        Y4_sphere=y4,
        Theta4_sphere=1.0 / y4,
        Q_sphere=Fraction(n * (n + 2) * (n - 2), 8),
        omega_n=omega_n(n),
    )


def u1_delta_norm_sq(n: int) -> float:
    """L^2 norm squared of Delta u_1 over R^n, assembled from moments.

    Delta u_1 = -(n-4) [ 2 (r^2+1)^{-(n-2)/2} + (n-2)(r^2+1)^{-n/2} ].
    """
    c = float((n - 4) ** 2)
    return c * (
        4.0 * radial_moment(n - 2, 0, n)
        + 4.0 * (n - 2) * radial_moment(n - 1, 0, n)
        + (n - 2) ** 2 * radial_moment(n, 0, n)
    )


def y4_ratio_from_moments(n: int) -> float:
    """The quotient ||Delta u_1||^2 / ||u_1||^2_{2n/(n-4)} via moments."""
    den = radial_moment(n, 0, n) ** ((n - 4) / n)
    return u1_delta_norm_sq(n) / den


def y4_ratio_by_quadrature(n: int) -> float:
    """Same quotient by adaptive quadrature on the closed-form profile.

    Fully independent of the Gamma identities: the integrands come from
    the derivative algebra and the integrals from scipy.
    """
    from scipy.integrate import quad

    u = bubble_u(1.0, n)
    lap = u.fn.laplacian(n)
    surf = n * omega_n(n)

    num, _ = quad(
        lambda r: lap(r) ** 2 * r ** (n - 1), 0.0, np.inf, epsabs=0.0, epsrel=1e-13, limit=300
    )
    den, _ = quad(
        lambda r: u.value(r) ** (2.0 * n / (n - 4)) * r ** (n - 1),
        0.0,
        np.inf,
        epsabs=0.0,
        epsrel=1e-13,
        limit=300,
    )
    return (surf * num) / (surf * den) ** ((n - 4) / n)


def green_north_profile(n: int) -> RadialProfile:
    """The spherical Green's function as a radial profile in |x|,

        (|x|^2 + 1)^{(n-4)/2} / ( n(n-2)(n-4) 2^{n-3} omega_n ),

    with closed-form radial derivatives (the lam slot is pinned to 1).
    The irrational 1/omega_n enters as the exact rational value of its
    double rounding; the derivative structure stays exact."""
    if n < 5:
        raise ValueError("n >= 5 required")
    pref = Fraction(1, n * (n - 2) * (n - 4) * 2 ** (n - 3)) * Fraction(1.0 / omega_n(n))
    fn = RadialTermSum.single(1.0, pref, 0, 0, Fraction(n - 4, 2))
    return RadialProfile("green_north", 1.0, n, fn)


def green_north(x, n: int) -> float:
    """Green's function of P on S^n with pole at the north pole,

        (|x|^2 + 1)^{(n-4)/2} / ( n(n-2)(n-4) 2^{n-3} omega_n ),

    in stereographic coordinates x.  Accepts a radius or a coordinate
    vector.
    """
    if n < 5:
        raise ValueError("n >= 5 required")
    x = np.asarray(x, dtype=float)
    r2 = float(np.dot(x, x)) if x.ndim == 1 else float(x) ** 2
    pref = 1.0 / (n * (n - 2) * (n - 4) * 2.0 ** (n - 3) * omega_n(n))
    return pref * (r2 + 1.0) ** ((n - 4) / 2.0)


def constants_table(n_values) -> list[dict]:
    """One row per n: sphere constants plus the cross-check residuals
    driven by the CLI `constants` subcommand."""
    rows = []
    for n in n_values:
        sc = sharp_constants(n)
        moments = y4_ratio_from_moments(n)
        duality = sc.Theta4_sphere * sc.Y4_sphere - 1.0
        rows.append(
            {
                "n": n,
                "Q_sphere": sc.Q_sphere,
                "omega_n": sc.omega_n,
                "Y4": sc.Y4_sphere,
                "Theta4": sc.Theta4_sphere,
                "resid_Y4_vs_moments": abs(moments - sc.Y4_sphere) / sc.Y4_sphere,
                "resid_duality": abs(duality),
            }
        )
    return rows
