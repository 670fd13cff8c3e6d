"""Exact identities for the polynomial algebra and the radial operators."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qcurv.polyalg import (
    HarmonicBlock,
    HomogPoly,
    LogRadialExpansion,
    UnresolvableBlockError,
    apply_A,
    apply_AA,
    apply_B,
    eigen_A,
    eigen_AA,
    harmonic_decompose,
    laplacian,
    reassemble,
    solve_AA,
)

F = Fraction


def poly_from_coeffs(n, entries):
    """entries: list of (exponent tuple, coeff)."""
    terms = {}
    for e, c in entries:
        terms[e] = terms.get(e, F(0)) + F(c)
    m = sum(next(iter(terms))) if terms else 0
    return HomogPoly(n, m, terms)


# ---------------------------------------------------------------- laplacian


def test_laplacian_of_x1_squared_is_2():
    for n in (2, 5, 9):
        p = HomogPoly.monomial(n, [2] + [0] * (n - 1))
        assert laplacian(p) == HomogPoly.constant(n, 2)


def test_laplacian_of_r2_is_2n():
    for n in (3, 6, 8):
        assert laplacian(HomogPoly.r_squared(n)) == HomogPoly.constant(n, 2 * n)


def test_laplacian_of_x1x2_is_zero():
    p = HomogPoly.monomial(4, [1, 1, 0, 0])
    assert laplacian(p).is_zero()


# ---------------------------------------------------- harmonic decomposition


def test_decompose_already_harmonic():
    p = HomogPoly.monomial(4, [1, 1, 0, 0])
    blocks = harmonic_decompose(p)
    assert len(blocks) == 1
    assert blocks[0].k == 0 and blocks[0].h == p


def test_decompose_r2():
    n = 5
    blocks = harmonic_decompose(HomogPoly.r_squared(n))
    assert len(blocks) == 1
    assert blocks[0].k == 1
    assert blocks[0].h == HomogPoly.constant(n, 1)


def test_decompose_x1_squared():
    # x1^2 = (x1^2 - r^2/n) + r^2 * (1/n)
    n = 5
    p = HomogPoly.monomial(n, [2, 0, 0, 0, 0])
    blocks = {b.k: b.h for b in harmonic_decompose(p)}
    assert set(blocks) == {0, 1}
    assert blocks[1] == HomogPoly.constant(n, F(1, n))
    expected_h0 = p - HomogPoly.r_squared(n).scale(F(1, n))
    assert blocks[0] == expected_h0
    assert laplacian(blocks[0]).is_zero()


@st.composite
def random_homog(draw):
    n = draw(st.integers(min_value=2, max_value=8))
    m = draw(st.integers(min_value=0, max_value=8))
    nterms = draw(st.integers(min_value=1, max_value=6))
    terms = []
    for _ in range(nterms):
        cuts = sorted(draw(st.lists(st.integers(0, m), min_size=n - 1, max_size=n - 1)))
        e = []
        prev = 0
        for c in cuts:
            e.append(c - prev)
            prev = c
        e.append(m - prev)
        num = draw(st.integers(-9, 9))
        den = draw(st.integers(1, 9))
        terms.append((tuple(e), F(num, den)))
    return poly_from_coeffs(n, terms) if any(c for _, c in terms) else HomogPoly.zero(n, m)


@settings(max_examples=40, deadline=None)
@given(random_homog())
def test_decompose_reassembles_exactly(p):
    blocks = harmonic_decompose(p)
    assert reassemble(p.n, p.degree, blocks) == p
    for b in blocks:
        assert laplacian(b.h).is_zero()


# ------------------------------------------------------------- A_a and B_a


def test_apply_A_eigenvalue_on_blocks():
    # A_a on r^{2k} h equals (a + 2k)(2m - 2k + a + n - 2) times the input
    n = 6
    h = HomogPoly.monomial(n, [1, 1, 0, 0, 0, 0])  # harmonic, degree 2
    for k in (0, 1, 2):
        m = 2 + 2 * k
        p = h.mul_r2k(k)
        for alpha in (F(0), F(4 - n), F(3, 2)):
            got = apply_A(alpha, LogRadialExpansion.from_poly(p))
            want = LogRadialExpansion.from_poly(p.scale(eigen_A(n, m, k, alpha)))
            assert got == want


@settings(max_examples=30, deadline=None)
@given(random_homog(), st.integers(-8, 8), st.integers(1, 5))
def test_eigen_consistency_on_all_blocks(p, num, den):
    # every harmonic block of a random polynomial is an eigenvector of A_a
    alpha = F(num, den)
    n, m = p.n, p.degree
    for block in harmonic_decompose(p):
        lifted = block.h.mul_r2k(block.k)
        got = apply_A(alpha, LogRadialExpansion.from_poly(lifted))
        want = LogRadialExpansion.from_poly(
            lifted.scale(eigen_A(n, m, block.k, alpha))
        )
        assert got == want


def test_apply_A_zero_alpha_on_constant():
    e = LogRadialExpansion.from_poly(HomogPoly.constant(5, 1))
    assert apply_A(0, e).is_zero()


def test_apply_A_4_minus_n_on_constant():
    # alpha (alpha + n - 2) with alpha = 4 - n and m = 0 gives 2(4 - n)
    for n in (5, 8, 11):
        e = LogRadialExpansion.from_poly(HomogPoly.constant(n, 1))
        got = apply_A(4 - n, e)
        want = LogRadialExpansion.from_poly(HomogPoly.constant(n, 2 * (4 - n)))
        assert got == want


def test_apply_B_scalar_on_degree_m():
    n = 7
    p = HomogPoly.monomial(n, [4, 0, 0, 0, 0, 0, 0])
    got = apply_B(4 - n, LogRadialExpansion.from_poly(p))
    assert got == LogRadialExpansion.from_poly(p.scale(14 - n))


def test_apply_B_kills_constant_at_half_shift():
    n = 9
    alpha = F(2 - n, 2)
    e = LogRadialExpansion.from_poly(HomogPoly.constant(n, 3))
    assert apply_B(alpha, e).is_zero()


def test_radial_prefactor_shift_law():
    # A_a(r^beta p) = r^beta A_{a+beta} p, exercised through radial_exp
    n = 5
    p = HomogPoly.monomial(n, [2, 1, 0, 0, 0])
    for beta in (F(4 - n), F(-7, 2), F(2)):
        for alpha in (F(1), F(-3, 4)):
            lifted = apply_A(alpha, LogRadialExpansion.from_poly(p, radial_exp=beta))
            plain = apply_A(alpha + beta, LogRadialExpansion.from_poly(p))
            assert lifted.terms == plain.terms


@settings(max_examples=25, deadline=None)
@given(random_homog(), st.integers(-6, 6), st.integers(1, 4), st.integers(0, 3))
def test_log_cascade_for_A(p, num, den, k):
    # A_a(p log^k r) = A_a p log^k + k B_a p log^{k-1} + k(k-1) p log^{k-2}
    alpha = F(num, den)
    n = p.n
    e = LogRadialExpansion(n, 0, {(p.degree, k): p}) if not p.is_zero() else LogRadialExpansion(n, 0)
    got = apply_A(alpha, e)
    want = LogRadialExpansion(n, 0)
    if not p.is_zero():
        want._add_term(p.degree, k, _apply_a(alpha, p))
        if k >= 1:
            want._add_term(p.degree, k - 1, _apply_b(alpha, p).scale(k))
        if k >= 2:
            want._add_term(p.degree, k - 2, p.scale(k * (k - 1)))
    assert got == want


def _apply_a(alpha, p):
    out = apply_A(alpha, LogRadialExpansion.from_poly(p))
    return out.get(p.degree, 0)


def _apply_b(alpha, p):
    out = apply_B(alpha, LogRadialExpansion.from_poly(p))
    return out.get(p.degree, 0)


@settings(max_examples=25, deadline=None)
@given(random_homog(), st.integers(0, 3))
def test_composite_AA_on_logs(p, k):
    # A_a A_b (p log^k r) expands per the four-term cascade; compare the
    # nested operator application against the directly assembled sum.
    n = p.n
    a, b = F(2 - n), F(4 - n)
    e = LogRadialExpansion(n, 0, {(p.degree, k): p} if not p.is_zero() else None)
    got = apply_A(a, apply_A(b, e))
    want = LogRadialExpansion(n, 0)
    if not p.is_zero():
        want._add_term(p.degree, k, _apply_a(a, _apply_a(b, p)))
        if k >= 1:
            mixed = _apply_a(a, _apply_b(b, p)) + _apply_b(a, _apply_a(b, p))
            want._add_term(p.degree, k - 1, mixed.scale(k))
        if k >= 2:
            second = _apply_a(a, p) + _apply_a(b, p) + _apply_b(a, _apply_b(b, p))
            want._add_term(p.degree, k - 2, second.scale(k * (k - 1)))
        if k >= 3:
            third = _apply_b(a, p) + _apply_b(b, p)
            want._add_term(p.degree, k - 3, third.scale(k * (k - 1) * (k - 2)))
        if k >= 4:
            want._add_term(p.degree, k - 4, p.scale(k * (k - 1) * (k - 2) * (k - 3)))
    assert got == want


# ------------------------------------------------------------------ eigen_AA


def test_eigen_AA_values():
    assert eigen_AA(5, 4, 0) == 240  # 8 * 10 * (-3) * (-1)
    assert eigen_AA(8, 4, 2) == 0  # kernel block forcing the n=8 log term
    for n in (5, 8, 12):
        assert eigen_AA(n, 0, 0) == 0


# ------------------------------------------------------------------ solve_AA


def test_solve_invertible_block():
    n = 5
    c = F(7, 3)
    rhs = HomogPoly.monomial(n, [1, 1, 1, 1, 0], c)
    psi = solve_AA(n, rhs)
    assert psi.max_log_power() == 0
    assert psi.get(4, 0) == rhs.scale(F(-1, 240))


def test_solve_zero_rhs():
    psi = solve_AA(6, HomogPoly.zero(6, 3))
    assert psi.is_zero()


def test_solve_n8_kernel_block_gives_log():
    # r^4 block at n=8: mixed operator eigenvalue -2(n-2)(n-4) = -48,
    # so the solution is (c/48) r^4 log r
    n = 8
    c = F(5, 2)
    rhs = HomogPoly.r_squared(n).mul_r2k(1).scale(c)
    psi = solve_AA(n, rhs)
    assert psi.max_log_power() == 1
    assert psi.get(4, 1) == rhs.scale(F(1, 48) / c).scale(c) * HomogPoly.constant(n, 1)
    assert psi.get(4, 1) == rhs.scale(F(1, 48))
    # applying the operator reproduces -rhs, including log bookkeeping
    residual = apply_AA(n, psi) + LogRadialExpansion.from_poly(rhs)
    assert residual.is_zero()


@settings(max_examples=30, deadline=None)
@given(random_homog())
def test_solver_inverts_exactly(p):
    psi = solve_AA(p.n, p)
    residual = apply_AA(p.n, psi) + LogRadialExpansion.from_poly(p)
    assert residual.is_zero()


def test_solver_log2_escalation_block():
    # at degree n-2 the block r^{n-2} H_0 has eigen_AA = 0 and a nonzero
    # mixed eigenvalue 2n(n-2); degree n-4 block r^{n-4} H_0 uses -2(n-2)(n-4)
    n = 8
    rhs = HomogPoly.r_squared(n).mul_r2k(2)  # r^6, degree n-2
    psi = solve_AA(n, rhs)
    residual = apply_AA(n, psi) + LogRadialExpansion.from_poly(rhs)
    assert residual.is_zero()


# -------------------------------------------------------------- serialization


def test_poly_json_round_trip():
    p = poly_from_coeffs(3, [((2, 1, 0), F(3, 4)), ((0, 1, 2), F(-5, 1))])
    obj = p.to_json()
    assert obj["terms"]["2,1,0"] == "3/4"
    assert HomogPoly.from_json(obj) == p


def test_expansion_json_round_trip():
    n = 5
    e = LogRadialExpansion(
        n,
        F(4 - n),
        {
            (0, 0): HomogPoly.constant(n, 1),
            (4, 1): HomogPoly.r_squared(n).mul_r2k(1).scale(F(-1, 48)),
        },
    )
    assert LogRadialExpansion.from_json(e.to_json()) == e


def test_poly_validation_errors():
    with pytest.raises(ValueError):
        HomogPoly(3, 2, {(1, 0, 0): F(1)})  # degree mismatch
    with pytest.raises(ValueError):
        HomogPoly(0, 1)
