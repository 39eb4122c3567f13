"""Polynomials, characteristic polynomials, and the closed-form family."""

import random
from fractions import Fraction
from math import comb

import pytest

from gkktau.charpoly import (
    InexactDivisionError,
    Polynomial,
    charpoly,
    charpoly_general,
    eta,
    g_poly,
    leading_charpolys,
    nu,
    phi,
    phi_tilde,
    poly_det,
    poly_gcd,
    psi,
    squarefree_decomposition,
    squarefree_part,
)
from gkktau.classify import subsets_lex
from gkktau.exact import IndexSet, RatMatrix, det, submatrix
from gkktau.family import FamilyParams, build_A, coeff_a

ONE_MINUS_X = Polynomial([1, -1])


def rand_matrix(rng, n):
    return RatMatrix(n, n, [Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(n * n)])


class TestPolynomialArithmetic:
    def test_normalization(self):
        assert Polynomial([1, 2, 0, 0]).coeffs == (1, 2)
        assert Polynomial([0, 0]).is_zero
        assert Polynomial().degree == -1

    def test_ring_ops(self):
        p = Polynomial([1, 1])
        q = Polynomial([-1, 1])
        assert (p * q).coeffs == (-1, 0, 1)
        assert (p + q).coeffs == (0, 2)
        assert (p - p).is_zero
        assert (p**3).coeffs == (1, 3, 3, 1)

    def test_eval_horner(self):
        p = Polynomial([2, 0, 1])
        assert p(Fraction(1, 2)) == Fraction(9, 4)
        assert p(0) == 2

    def test_divmod_exact_and_remainder(self):
        p = Polynomial([-1, 0, 1])
        q, r = p.divmod(Polynomial([1, 1]))
        assert q.coeffs == (-1, 1) and r.is_zero
        with pytest.raises(InexactDivisionError):
            Polynomial([1, 0, 1]).div_exact(Polynomial([1, 1]))

    def test_compose_neg_and_reverse(self):
        p = Polynomial([1, 2, 3])
        assert p.compose_neg().coeffs == (1, -2, 3)
        assert p.reversed().coeffs == (3, 2, 1)
        assert p.reversed(3).coeffs == (0, 3, 2, 1)
        with pytest.raises(ValueError):
            p.reversed(1)

    def test_gcd_and_squarefree(self):
        p = Polynomial([1, 1]) ** 2 * Polynomial([-2, 1])
        g = poly_gcd(p, p.derivative())
        assert g == Polynomial([1, 1])
        assert squarefree_part(p) == (Polynomial([1, 1]) * Polynomial([-2, 1])).monic()
        decomp = squarefree_decomposition(p)
        assert [(f.coeffs, m) for f, m in decomp] == [(((-2), 1), 1), ((1, 1), 2)]

    def test_json_round_trip(self):
        p = Polynomial([Fraction(1, 3), Fraction(-7, 2)])
        assert Polynomial.from_json(p.to_json()) == p


class TestCharpoly:
    def test_identity_2x2(self):
        p = charpoly(RatMatrix.identity(2))
        assert p.coeffs == (1, -2, 1)

    def test_family_order3(self):
        p = charpoly(build_A(FamilyParams(3, 1, Fraction(1, 2))))
        assert p.coeffs == (Fraction(1, 2), -3, 3, -1)

    def test_value_at_zero_is_det(self):
        rng = random.Random(17)
        for _ in range(25):
            n = rng.randint(1, 6)
            a = rand_matrix(rng, n)
            assert charpoly(a)(Fraction(0)) == det(a)

    def test_general_matrix_oracle_agreement(self):
        rng = random.Random(23)
        for _ in range(20):
            n = rng.randint(1, 5)
            a = rand_matrix(rng, n)
            assert charpoly(a) == charpoly_general(a)

    def test_leading_charpolys_chain(self):
        a = build_A(FamilyParams(7, 2, Fraction(1, 3)))
        chain = leading_charpolys(a)
        for m, p in enumerate(chain, start=1):
            block = IndexSet.interval(1, m, 7)
            assert p == charpoly_general(submatrix(a, block, block))

    def test_degree_and_leading_sign(self):
        for k in (1, 2):
            for j in range(1, k + 2):
                p = phi(k, Fraction(1, 2), j)
                assert p.degree == k + j + 1
                assert p.leading() == (-1) ** (k + j + 1)

    def test_alternating_coefficients_for_family(self):
        # strict sign alternation of the charpoly, a P-matrix consequence
        for n in range(2, 11):
            p = charpoly(build_A(FamilyParams(n, 2, Fraction(1, 2))))
            signs = [(-1) ** i * c for i, c in enumerate(p.coeffs)]
            assert all(s > 0 for s in signs) or all(s < 0 for s in signs)


class TestPhi:
    def test_j1_closed_form(self):
        for k in (1, 3):
            t = Fraction(1, 2)
            assert phi(k, t, 1) == ONE_MINUS_X ** (k + 2) - (1 - t)

    def test_value_at_zero(self):
        for k in range(1, 6):
            for t in (Fraction(1, 3), Fraction(1, 2)):
                for j in range(1, k + 2):
                    assert phi(k, t, j)(Fraction(0)) == t**j

    def test_matches_matrix_charpoly(self):
        for k in range(1, 5):
            for t in (Fraction(1, 4), Fraction(1, 2)):
                for j in range(1, k + 2):
                    assert phi(k, t, j) == charpoly(build_A(FamilyParams(k + j + 1, k, t)))

    def test_bracket_division_is_exact(self):
        # a nonzero remainder would raise InexactDivisionError
        for k in range(1, 7):
            for j in range(2, k + 2):
                phi(k, Fraction(2, 7), j)

    def test_last_row_recurrence(self):
        for k in range(1, 6):
            t = Fraction(1, 3)
            for j in range(2, k + 2):
                assert phi(k, t, j) == ONE_MINUS_X * phi(k, t, j - 1) + g_poly(k, t, j)

    def test_tilde_extraction(self):
        for k in (1, 2, 3):
            t = Fraction(1, 2)
            for j in range(1, k + 2):
                p = phi(k, t, j)
                tilde = phi_tilde(k, t, j)
                assert p == Polynomial([t**j]) - Polynomial([0, 1]) * tilde

    def test_range_validation(self):
        with pytest.raises(ValueError):
            phi(2, Fraction(1, 2), 4)
        with pytest.raises(ValueError):
            phi(2, Fraction(3, 2), 1)


class TestG:
    def test_constant_for_j1(self):
        assert g_poly(4, Fraction(1, 3), 1) == Polynomial([Fraction(-2, 3)])

    def test_value_at_zero(self):
        for k in (1, 2, 4):
            for j in range(1, 7):
                t = Fraction(2, 5)
                assert g_poly(k, t, j)(Fraction(0)) == t**j - t ** (j - 1)

    def test_first_row_recurrence(self):
        for k in (1, 2, 3):
            t = Fraction(1, 2)
            for j in range(2, 7):
                lhs = g_poly(k, t, j)
                rhs = ONE_MINUS_X * g_poly(k, t, j - 1) + (-1) ** (j + k) * coeff_a(k, t, j)
                assert lhs == rhs

    def test_border_determinant_definition(self):
        # g_j is (-1)^(k+1) times the determinant of the bordered bidiagonal
        for k in (1, 2):
            t = Fraction(1, 3)
            for j in range(1, 6):
                coeffs = [coeff_a(k, t, l) for l in range(1, j + 1)]
                rows = []
                for r in range(j):
                    row = [Polynomial.ZERO] * j
                    if r == j - 1:
                        row[j - 1] = Polynomial([coeffs[0]])
                    else:
                        row[r] = ONE_MINUS_X
                        row[j - 1] = Polynomial([coeffs[j - 1 - r]])
                    if 0 < r:
                        row[r - 1] = Polynomial.ONE
                    rows.append(row)
                assert g_poly(k, t, j) == (-1) ** (k + 1) * poly_det(rows)


class TestNu:
    def test_zero_at_origin(self):
        for k in (1, 2, 5):
            for j in range(1, k + 2):
                assert nu(k, j)(Fraction(0)) == 0

    def test_derivative_at_zero(self):
        for k in range(1, 7):
            for j in range(1, k + 2):
                assert -nu(k, j).derivative()(Fraction(0)) == k + 3 - j

    def test_displayed_form(self):
        k, j = 3, 2
        u = ONE_MINUS_X
        assert nu(k, j) == u ** (j + k + 1) - j * u ** (j - 1) + (j - 1) * u ** (j - 2)


class TestPsiEta:
    def test_psi_vanishes_at_zero(self):
        for k in range(1, 7):
            assert psi(k)(Fraction(0)) == 0

    def test_psi_reflection_identity(self):
        one_plus = Polynomial([1, 1])
        for k in range(1, 7):
            assert psi(k) * one_plus ** (k - 1) == nu(k, k + 1).compose_neg()

    def test_psi_displayed_sum(self):
        for k in range(1, 7):
            inner = Polynomial([0] * 0)
            inner = Polynomial([2])
            for j in range(0, k + 2):
                inner = inner + comb(k + 3, j) * Polynomial([0, 1]) ** (k + 2 - j)
            assert psi(k) == Polynomial([0, 1]) * inner

    def test_eta_shape(self):
        for k in range(1, 8):
            e = eta(k)
            assert e.degree == k + 2
            assert e.leading() == 2
            assert e.coeff(0) == 1

    def test_eta_root_reciprocity(self):
        import mpmath as mp

        from gkktau.rootfind import complex_roots

        k = 3
        e = eta(k)
        p = psi(k)
        with mp.workdps(50):
            for r in complex_roots(e):
                z = mp.mpc(r.re, r.im)
                if abs(z) > 1e-12:
                    assert abs(p(1 / z)) < mp.mpf("1e-30")


class TestPolyDet:
    def test_matches_scalar_det(self):
        rng = random.Random(31)
        for _ in range(10):
            n = rng.randint(1, 4)
            a = rand_matrix(rng, n)
            rows = [[Polynomial([a.entry(i, j)]) for j in range(n)] for i in range(n)]
            assert poly_det(rows) == Polynomial([det(a)])
