"""Brute-force verification of the curvature-tensor algebra."""

import math
from fractions import Fraction

import numpy as np
import pytest

from qcurv.polyalg import HomogPoly, harmonic_decompose, laplacian, reassemble
from qcurv.tensor import (
    SchoutenHessian,
    WeylTensor,
    fix_trace,
    random_schouten_hessian,
    random_weyl,
    schouten_quartic,
    symmetry_residuals,
    trace_residual,
)

F = Fraction


def test_random_weyl_low_dimensions_vanish():
    for n in (1, 2, 3):
        assert random_weyl(n, seed=7).is_zero()


@pytest.mark.parametrize("n,seed", [(5, 1), (6, 2), (7, 3), (10, 4)])
def test_random_weyl_invariants_exact(n, seed):
    W = random_weyl(n, seed)
    assert not W.is_zero()
    res = symmetry_residuals(W)
    assert all(v == 0 for v in res.values()), res
    assert trace_residual(W) == 0


def test_norm_sq_matches_brute_force():
    W = random_weyl(5, seed=11)
    total = F(0)
    for i in range(5):
        for k in range(5):
            for j in range(5):
                for l in range(5):
                    total += W.component(i, k, j, l) ** 2
    assert W.norm_sq() == total
    assert W.rescale(2).norm_sq() == 4 * W.norm_sq()


def test_zero_tensor_scalars():
    W = WeylTensor(6, np.zeros((6,) * 4, dtype=np.int64))
    assert W.norm_sq() == 0
    assert W.cross_contraction() == 0
    assert W.quartic_form().is_zero()


@pytest.mark.parametrize("n", [5, 10])
def test_cross_contraction_is_half_norm(n):
    W = random_weyl(n, seed=23)
    assert W.cross_contraction() == W.norm_sq() / 2


def test_quartic_laplacian_identity():
    # Lap of the quartic equals twice the gradient-square quadratic
    W = random_weyl(6, seed=5)
    q = W.quartic_form()
    assert laplacian(q) == W.gradient_square_form().scale(2)


def test_quartic_bilaplacian_is_12_norm():
    for n, seed in [(5, 9), (8, 10)]:
        W = random_weyl(n, seed)
        lap2 = laplacian(laplacian(W.quartic_form()))
        assert lap2 == HomogPoly.constant(n, 12 * W.norm_sq())


def test_quartic_form_matches_componentwise_oracle():
    # direct quadruple-loop expansion with Fractions, n small
    n = 5
    W = random_weyl(n, seed=31)
    terms = {}
    for k in range(n):
        for l in range(n):
            # T_kl(x) = sum_{ij} W_{ikjl} x_i x_j, squared and accumulated
            quad = {}
            for i in range(n):
                for j in range(n):
                    c = W.component(i, k, j, l)
                    if c == 0:
                        continue
                    quad[(i, j)] = quad.get((i, j), F(0)) + c
            for (i, j), c1 in quad.items():
                for (a, b), c2 in quad.items():
                    e = [0] * n
                    for idx in (i, j, a, b):
                        e[idx] += 1
                    key = tuple(e)
                    terms[key] = terms.get(key, F(0)) + c1 * c2
    oracle = HomogPoly(n, 4, terms)
    assert W.quartic_form() == oracle


def test_harmonic_split_blocks_and_reassembly():
    for n, seed in [(5, 2), (7, 3)]:
        W = random_weyl(n, seed)
        q = W.quartic_form()
        blocks = W.quartic_harmonic_split()
        for b in blocks:
            assert laplacian(b.h).is_zero()
        assert reassemble(n, 4, blocks) == q
        # independent oracle: generic harmonic decomposition
        generic = {b.k: b.h for b in harmonic_decompose(q)}
        for b in blocks:
            if b.k in generic:
                assert generic[b.k] == b.h
            else:
                assert b.h.is_zero()
        # radial block coefficient
        assert blocks[2].h == HomogPoly.constant(
            n, W.norm_sq() * F(3, 2 * n * (n + 2))
        )


def test_sphere_average_scaling_and_zero():
    W = random_weyl(6, seed=8)
    assert W.rescale(2).sphere_average_quartic() == 4 * W.sphere_average_quartic()
    Z = WeylTensor(6, np.zeros((6,) * 4, dtype=np.int64))
    assert Z.sphere_average_quartic() == 0


def test_sphere_average_against_moment_oracle():
    # Gamma-function monomial moments over S^{n-1} as an independent
    # floating-point check of the exact average.
    n = 6
    W = random_weyl(n, seed=8)
    q = W.quartic_form()

    def monomial_integral(exp):
        if any(e % 2 for e in exp):
            return 0.0
        num = 2.0
        for e in exp:
            num *= math.gamma((e + 1) / 2)
        return num / math.gamma(sum(e + 1 for e in exp) / 2)

    total = sum(float(c) * monomial_integral(e) for e, c in q.terms.items())
    # expected: sphere_average_quartic * omega_n, with
    # integral over S^{n-1} of quartic = 3 omega_n |W|^2 / (2(n+2))
    omega_n = math.pi ** (n / 2) / math.gamma(n / 2 + 1)
    expected = float(W.sphere_average_quartic()) * omega_n
    assert abs(total - expected) <= 1e-10 * abs(expected)


def test_schouten_quartic_special_cases():
    n = 6
    Z = WeylTensor(n, np.zeros((n,) * 4, dtype=np.int64))
    zero = schouten_quartic(Z, SchoutenHessian.zero(n))
    assert zero.is_zero()
    r4 = HomogPoly.r_squared(n).mul_r2k(1)
    got = schouten_quartic(Z, SchoutenHessian.identity(n))
    assert got == r4.scale(F(-1, n - 2))


def test_schouten_quartic_generic_matches_expansion():
    n = 5
    W = random_weyl(n, seed=13)
    Jh = random_schouten_hessian(n, 13, W)
    got = schouten_quartic(W, Jh)
    want = W.quartic_form().scale(F(-2, 9 * (n - 2))) - Jh.quadratic_form().mul_r2k(1).scale(
        F(1, n - 2)
    )
    assert got == want


def test_fix_trace_enforces_constraint():
    n = 7
    W = random_weyl(n, seed=17)
    Jh = SchoutenHessian.identity(n)
    fixed = fix_trace(Jh, W)
    assert fixed.trace() == -W.norm_sq() / (12 * (n - 1))
    # off-diagonal part untouched
    assert fixed.entries[0][1] == Jh.entries[0][1]


def test_schouten_validation():
    with pytest.raises(ValueError):
        SchoutenHessian.from_rows([[0, 1], [2, 0]])


def test_weyl_json_round_trip():
    W = random_weyl(5, seed=3)
    W2 = WeylTensor.from_json(W.to_json())
    assert W2.n == W.n
    for idx in [(0, 1, 2, 3), (1, 2, 3, 4), (4, 3, 2, 1)]:
        assert W2.component(*idx) == W.component(*idx)
    assert W2.norm_sq() == W.norm_sq()


def test_schouten_json_round_trip():
    n = 5
    W = random_weyl(n, seed=3)
    J = random_schouten_hessian(n, 4, W)
    assert SchoutenHessian.from_json(J.to_json()) == J


def test_rejects_oversized_rational_components():
    # silent int64 wraparound must be impossible
    obj = random_weyl(5, seed=1).to_json()
    obj["W"][0][1][2][3] = "123456789012345678901/2"
    with pytest.raises(ValueError, match="too large"):
        WeylTensor.from_json(obj)
