"""Zonal spectral solver on the round sphere S^n.

Rotationally symmetric fields are expanded in Gegenbauer polynomials
C_l^{(n-1)/2}(cos theta), orthonormalized numerically against the module's
own Gauss-Jacobi quadrature so no closed-form normalization convention can
leak in.  The Paneitz operator is diagonal in this basis,

    mu_l = lam_l^2 + (n^2-2n-4)/2 lam_l + n(n+2)(n-2)(n-4)/16,
    lam_l = l(l+n-1),

with the exact factorization mu_l = (lam_l + n(n-2)/4)(lam_l + (n+2)(n-4)/4)
available as a rational-arithmetic oracle.  The fourth-order Sobolev
quotient, its dual, the second-order (conformal Laplacian) analogues, the
fixed-point iteration for the dual extremal problem, and conformal
dilations all run on top of the same transform pair.

Fractional powers of fields are evaluated on an oversampled grid (>= 3x)
and projected back to degree L; the projection error is the solver's
monitored dealiasing error, never assumed zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.special import roots_jacobi

from .sphereforms import omega_n, sphere_area


@dataclass
class ZonalField:
    """Coefficients of a zonal function in the orthonormal basis Z_l."""

    n: int
    L: int
    coeffs: np.ndarray

    def copy(self) -> "ZonalField":
        return ZonalField(self.n, self.L, self.coeffs.copy())


class PaneitzSpectrum:
    """Exact eigenvalues of P (and of the conformal Laplacian) on S^n."""

    def __init__(self, n: int, L: int):
        self.n = n
        self.L = L
        self.lam = [Fraction(l * (l + n - 1)) for l in range(L + 1)]
        c1 = Fraction(n * n - 2 * n - 4, 2)
        c0 = Fraction(n * (n + 2) * (n - 2) * (n - 4), 16)
        self.mu = [lam * lam + c1 * lam + c0 for lam in self.lam]
        # conformal Laplacian: nu_l = 4(n-1)/(n-2) lam_l + n(n-1)
        a = Fraction(4 * (n - 1), n - 2)
        self.nu = [a * lam + n * (n - 1) for lam in self.lam]
        self.mu_f = np.array([float(m) for m in self.mu])
        self.nu_f = np.array([float(v) for v in self.nu])

    def factorization_residuals(self) -> list[Fraction]:
        """mu_l - (lam_l + n(n-2)/4)(lam_l + (n+2)(n-4)/4), exactly."""
        n = self.n
        out = []
        for lam, mu in zip(self.lam, self.mu):
            prod = (lam + Fraction(n * (n - 2), 4)) * (lam + Fraction((n + 2) * (n - 4), 4))
            out.append(mu - prod)
        return out


class SphereSolver:
    """Transform pair, quadratures, and functionals for zonal fields on S^n."""

    def __init__(self, n: int, L: int, grid_nodes: int | None = None, oversample: int = 3):
        if n < 5:
            raise ValueError("solver targets n >= 5")
        if oversample < 3:
            raise ValueError("nonlinearity grid must oversample by at least 3x")
        self.n = n
        self.L = L
        self.M = grid_nodes if grid_nodes is not None else 2 * L + 2
        if self.M < L + 1:
            raise ValueError("quadrature too coarse for degree L")
        self.spectrum = PaneitzSpectrum(n, L)

        a = 0.5 * (n - 2)
        area_factor = n * omega_n(n)  # area of the S^{n-1} slice factor
        t, wj = roots_jacobi(self.M, a, a)
        self.t = t
        self.w = area_factor * wj
        t2, wj2 = roots_jacobi(oversample * self.M, a, a)
        self.t_over = t2
        self.w_over = area_factor * wj2

        self.basis = self._orthonormal_basis(self.t)
        self.basis_over = self._orthonormal_basis(self.t_over)
        self.area = sphere_area(n)

    # -- basis ----------------------------------------------------------

    def _gegenbauer_rows(self, t: np.ndarray) -> np.ndarray:
        alpha = 0.5 * (self.n - 1)
        rows = np.empty((self.L + 1, t.size))
        rows[0] = 1.0
        if self.L >= 1:
            rows[1] = 2.0 * alpha * t
        for l in range(1, self.L):
            rows[l + 1] = (
                2.0 * (l + alpha) * t * rows[l] - (l + 2.0 * alpha - 1.0) * rows[l - 1]
            ) / (l + 1.0)
        return rows

    def _orthonormal_basis(self, t: np.ndarray) -> np.ndarray:
        rows = self._gegenbauer_rows(t)
        if not hasattr(self, "_norms"):
            # norms come from the solver's own main-grid quadrature
            main = rows if t is self.t else self._gegenbauer_rows(self.t)
            self._norms = np.sqrt(np.sum(self.w * main * main, axis=1))
        return rows / self._norms[:, None]

    def gram_defect(self) -> float:
        G = (self.basis * self.w) @ self.basis.T
        return float(np.max(np.abs(G - np.eye(self.L + 1))))

    # -- transforms -------------------------------------------------------

    def analyze(self, values: np.ndarray, oversampled: bool = False) -> ZonalField:
        B = self.basis_over if oversampled else self.basis
        w = self.w_over if oversampled else self.w
        coeffs = B @ (w * values)
        return ZonalField(self.n, self.L, coeffs)

    def synthesize(self, field: ZonalField, oversampled: bool = False) -> np.ndarray:
        B = self.basis_over if oversampled else self.basis
        return B.T @ field.coeffs

    def synthesize_at(self, field: ZonalField, t: np.ndarray) -> np.ndarray:
        rows = self._gegenbauer_rows(np.asarray(t, dtype=float)) / self._norms[:, None]
        return rows.T @ field.coeffs

    def constant_field(self, c: float = 1.0) -> ZonalField:
        coeffs = np.zeros(self.L + 1)
        # Z_0 is the constant 1/sqrt(area)
        coeffs[0] = c * math.sqrt(self.area)
        return ZonalField(self.n, self.L, coeffs)

    def mode(self, l: int, amplitude: float = 1.0) -> ZonalField:
        coeffs = np.zeros(self.L + 1)
        coeffs[l] = amplitude
        return ZonalField(self.n, self.L, coeffs)

    # -- operators ---------------------------------------------------------

    def apply_P(self, u: ZonalField) -> ZonalField:
        return ZonalField(self.n, self.L, self.spectrum.mu_f * u.coeffs)

    def apply_GP(self, f: ZonalField) -> ZonalField:
        return ZonalField(self.n, self.L, f.coeffs / self.spectrum.mu_f)

    def apply_L(self, u: ZonalField) -> ZonalField:
        return ZonalField(self.n, self.L, self.spectrum.nu_f * u.coeffs)

    def apply_GL(self, f: ZonalField) -> ZonalField:
        return ZonalField(self.n, self.L, f.coeffs / self.spectrum.nu_f)

    def energy_E(self, u: ZonalField) -> float:
        return float(np.sum(self.spectrum.mu_f * u.coeffs**2))

    def energy_E2(self, u: ZonalField) -> float:
        return float(np.sum(self.spectrum.nu_f * u.coeffs**2))

    # -- norms and functionals ----------------------------------------------

    def lp_norm(self, field: ZonalField, p: float) -> float:
        vals = self.synthesize(field, oversampled=True)
        return float(np.sum(self.w_over * np.abs(vals) ** p) ** (1.0 / p))

    def theta4_functional(self, f: ZonalField) -> float:
        if not np.any(f.coeffs):
            raise ValueError("zero field")
        num = float(np.sum(f.coeffs**2 / self.spectrum.mu_f))
        den = self.lp_norm(f, 2.0 * self.n / (self.n + 4)) ** 2
        return num / den

    def y4_functional(self, u: ZonalField) -> float:
        if not np.any(u.coeffs):
            raise ValueError("zero field")
        return self.energy_E(u) / self.lp_norm(u, 2.0 * self.n / (self.n - 4)) ** 2

    def y4plus_functional(self, u: ZonalField) -> float:
        vals = self.synthesize(u, oversampled=True)
        if np.min(vals) <= 0:
            raise ValueError("field is not positive on the oversampled grid")
        return self.y4_functional(u)

    def theta2_functional(self, f: ZonalField) -> float:
        if not np.any(f.coeffs):
            raise ValueError("zero field")
        num = float(np.sum(f.coeffs**2 / self.spectrum.nu_f))
        den = self.lp_norm(f, 2.0 * self.n / (self.n + 2)) ** 2
        return num / den

    def yamabe_functional(self, u: ZonalField) -> float:
        if not np.any(u.coeffs):
            raise ValueError("zero field")
        return self.energy_E2(u) / self.lp_norm(u, 2.0 * self.n / (self.n - 2)) ** 2

    def quadrature_energy(self, u: ZonalField) -> float:
        """Pointwise quadrature of P u * u on the main grid (Parseval check)."""
        pu = self.synthesize(self.apply_P(u))
        uu = self.synthesize(u)
        return float(np.sum(self.w * pu * uu))

    # -- extremal iteration ---------------------------------------------------

    def extremal_iteration(
        self, f0: ZonalField, steps: int, damping: float = 0.5
    ) -> list[tuple[ZonalField, float]]:
        """Fixed-point iteration for the dual extremal problem.

        Each step sends f to the normalized positive part of (G_P f)
        raised to the critical power (n+4)/(n-4), evaluated on the
        oversampled grid and projected back to degree L, then blends with
        the previous iterate by ``damping``.  The trajectory of
        (field, dual-functional value) is returned; no monotonicity is
        claimed.
        """
        if not (0.0 < damping <= 1.0):
            raise ValueError("damping must lie in (0, 1]")
        if not np.any(f0.coeffs):
            raise ValueError("zero initial field")
        p_norm = 2.0 * self.n / (self.n + 4)
        expo = (self.n + 4.0) / (self.n - 4.0)

        f = f0.copy()
        f.coeffs /= self.lp_norm(f, p_norm)
        out = [(f.copy(), self.theta4_functional(f))]
        for _ in range(steps):
            g_vals = self.synthesize(self.apply_GP(f), oversampled=True)
            pos = np.maximum(g_vals, 0.0)
            if not np.any(pos > 0):
                raise ValueError("iterate collapsed: G_P f has no positive part")
            update = self.analyze(pos**expo, oversampled=True)
            update.coeffs /= self.lp_norm(update, p_norm)
            f = ZonalField(
                self.n, self.L, (1.0 - damping) * f.coeffs + damping * update.coeffs
            )
            f.coeffs /= self.lp_norm(f, p_norm)
            out.append((f.copy(), self.theta4_functional(f)))
        return out

    # -- conformal dilation ----------------------------------------------------

    def mobius_pullback(self, f: ZonalField, t: float) -> ZonalField:
        """Pull back under the dilation x -> t x of stereographic coordinates.

        The factor |Jacobian|^{(n+4)/(2n)} preserves the L^{2n/(n+4)} norm,
        which makes the dual functional invariant up to truncation error.
        """
        if t <= 0:
            raise ValueError("dilation parameter must be positive")
        n = self.n
        cos_th = self.t
        # rho = tan(theta/2) measured from the pole that maps to x = 0
        theta = np.arccos(np.clip(cos_th, -1.0, 1.0))
        rho = np.tan(0.5 * theta)
        rho_new = t * rho
        theta_new = 2.0 * np.arctan(rho_new)
        jac = (t * (1.0 + rho**2) / (1.0 + (t * rho) ** 2)) ** n
        weight = jac ** ((n + 4.0) / (2.0 * n))
        vals = self.synthesize_at(f, np.cos(theta_new)) * weight
        return self.analyze(vals)


def spectral_report(n: int, L: int, iters: int, damping: float, init: str, seed: int = 0) -> dict:
    """Assemble the JSON payload behind the `spectral` CLI subcommand."""
    solver = SphereSolver(n, L)
    if init == "constant":
        f0 = solver.constant_field(1.0)
    elif init == "perturbed":
        f0 = solver.constant_field(1.0)
        f0.coeffs[2] += 0.1 * f0.coeffs[0]
    else:
        raise ValueError(f"unknown init {init!r}")
    traj = solver.extremal_iteration(f0, iters, damping)
    values = [v for _, v in traj]
    const = solver.constant_field(1.0)
    theta4_const = solver.theta4_functional(const)
    invariance = []
    for tt in (1.5, 2.0, 4.0):
        pulled = solver.mobius_pullback(const, tt)
        invariance.append(
            {
                "t": tt,
                "theta4_drift": abs(solver.theta4_functional(pulled) - theta4_const)
                / theta4_const,
                "norm_drift": abs(
                    solver.lp_norm(pulled, 2 * n / (n + 4))
                    - solver.lp_norm(const, 2 * n / (n + 4))
                )
                / solver.lp_norm(const, 2 * n / (n + 4)),
            }
        )
    return {
        "n": n,
        "L": L,
        "damping": damping,
        "init": init,
        "functional_values": values,
        "final_coeffs": list(traj[-1][0].coeffs),
        "theta4_constant": theta4_const,
        "gram_defect": solver.gram_defect(),
        "invariance_checks": invariance,
    }
