"""Real-root isolation, refinement, the root chain, complex roots."""

import random
from fractions import Fraction

import mpmath as mp
import pytest

from gkktau.charpoly import Polynomial, charpoly, nu, phi, phi_tilde
from gkktau.family import FamilyParams, build_A, build_B
from gkktau.rootfind import (
    ChainFailure,
    RootFindingError,
    cauchy_bound,
    compare_roots,
    complex_roots,
    count_real_roots,
    lambda_chain,
    refine,
    sturm_isolate,
)

X = Polynomial([0, 1])

# analytic reference: the real root of (1-x)^3 = 1/2 is 1 - 2^(-1/3)
CUBE_ROOT_REF = 0.2062994740159002


def poly_from_roots(roots):
    p = Polynomial([1])
    for r in roots:
        p = p * Polynomial([-Fraction(r), 1])
    return p


class TestSturmIsolate:
    def test_two_symmetric_roots(self):
        p = Polynomial([-1, 0, 1])
        found = sturm_isolate(p, Fraction(-2), Fraction(2))
        assert len(found) == 2
        assert found[0].lo < -1 <= found[0].hi
        assert found[1].lo < 1 <= found[1].hi

    def test_family_block_root(self):
        p = phi(1, Fraction(1, 2), 1)
        found = sturm_isolate(p, Fraction(0), Fraction(1))
        assert len(found) == 1
        e = refine(found[0], p, Fraction(1, 2**30))
        assert float(e.lo) <= CUBE_ROOT_REF <= float(e.hi)

    def test_nu_root_at_zero_is_simple(self):
        for k in (2, 4):
            for j in range(1, k + 2):
                p = nu(k, j)
                found = [e for e in sturm_isolate(p) if e.lo < 0 <= e.hi]
                assert len(found) == 1
                assert found[0].multiplicity_simple

    def test_counts_match_enclosures(self):
        rng = random.Random(13)
        for _ in range(20):
            roots = [Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(rng.randint(1, 5))]
            p = poly_from_roots(roots) * Polynomial([1, 0, 1])  # plus a complex pair
            distinct = len(set(roots))
            assert count_real_roots(p) == distinct
            assert len(sturm_isolate(p)) == distinct

    def test_multiplicity_flags(self):
        p = Polynomial([1, 1]) ** 3 * Polynomial([-2, 1])
        found = sturm_isolate(p)
        flags = {float(e.hi) >= -1 >= float(e.lo): e.multiplicity_simple for e in found}
        simple = [e for e in found if e.multiplicity_simple]
        triple = [e for e in found if not e.multiplicity_simple]
        assert len(simple) == 1 and len(triple) == 1
        assert triple[0].lo < -1 <= triple[0].hi
        assert simple[0].lo < 2 <= simple[0].hi

    def test_zero_polynomial_rejected(self):
        with pytest.raises(ValueError):
            sturm_isolate(Polynomial())

    def test_enclosures_disjoint(self):
        p = poly_from_roots([0, Fraction(1, 1000), 1]) * Polynomial([1, 1]) ** 2
        found = sturm_isolate(p)
        assert len(found) == 4
        for a, b in zip(found, found[1:]):
            assert a.hi <= b.lo


class TestRefine:
    def test_width_target(self):
        p = phi(1, Fraction(1, 2), 1)
        e = sturm_isolate(p, Fraction(0), Fraction(1))[0]
        tight = refine(e, p, Fraction(1, 2**80))
        assert tight.width() <= Fraction(1, 2**80)
        assert count_real_roots(p, tight.lo, tight.hi) == 1

    def test_already_narrow_unchanged(self):
        p = Polynomial([-1, 1])
        e = sturm_isolate(p)[0]
        wide = e.width()
        assert refine(e, p, wide) == e


class TestCompare:
    def test_orders_distinct_roots(self):
        p = poly_from_roots([1])
        q = poly_from_roots([2])
        ep = sturm_isolate(p)[0]
        eq = sturm_isolate(q)[0]
        assert compare_roots(ep, p, eq, q) == -1
        assert compare_roots(eq, q, ep, p) == 1

    def test_detects_exact_equality(self):
        # same root 1/3 through different polynomials
        third = Fraction(1, 3)
        p = poly_from_roots([third, 5])
        q = poly_from_roots([third]) * Polynomial([1, 0, 1])
        ep = [e for e in sturm_isolate(p) if e.lo < third <= e.hi][0]
        eq = sturm_isolate(q)[0]
        assert compare_roots(ep, p, eq, q) == 0


class TestLambdaChain:
    def test_small_t_strictly_decreasing(self):
        chain = lambda_chain(1, Fraction(1, 100))
        assert chain.strictly_decreasing
        assert len(chain.enclosures) == 2

    def test_enclosures_inside_unit_interval(self):
        for k, t in ((1, Fraction(1, 4)), (2, Fraction(1, 8))):
            chain = lambda_chain(k, t)
            for e in chain.enclosures:
                assert 0 <= e.lo < e.hi <= 1

    def test_defining_identity_at_midpoint(self):
        # lambda_j * phi_tilde(lambda_j) = t^j, up to enclosure width
        k, t = 2, Fraction(1, 8)
        chain = lambda_chain(k, t)
        for j, e in enumerate(chain.enclosures, start=1):
            p = phi(k, t, j)
            e = refine(e, p, Fraction(1, 2**40))
            mid = e.midpoint()
            value = mid * phi_tilde(k, t, j)(mid)
            assert abs(value - t**j) < Fraction(1, 2**20)

    def test_adjacent_enclosures_disjoint(self):
        chain = lambda_chain(3, Fraction(1, 16))
        assert chain.strictly_decreasing
        es = chain.enclosures
        assert all(es[j].hi <= es[j - 1].lo for j in range(1, len(es)))

    def test_decreasing_at_moderate_t_for_k21(self):
        chain = lambda_chain(21, Fraction(1, 2))
        assert chain.strictly_decreasing
        assert len(chain.enclosures) == 22


class TestComplexRoots:
    def test_pure_imaginary_pair(self):
        roots = complex_roots(Polynomial([1, 0, 1]))
        values = sorted((float(r.re), float(r.im)) for r in roots)
        assert abs(values[0][0]) < 1e-40 and abs(values[0][1] + 1) < 1e-40
        assert abs(values[1][0]) < 1e-40 and abs(values[1][1] - 1) < 1e-40

    def test_conjugate_closure_and_residuals(self):
        rng = random.Random(29)
        for _ in range(15):
            deg = rng.randint(1, 8)
            p = Polynomial([Fraction(rng.randint(-9, 9)) for _ in range(deg)] + [1])
            roots = complex_roots(p)
            assert len(roots) == p.degree
            pool = [(r.re, r.im) for r in roots]
            for re, im in pool:
                assert any(abs(re - r2) == 0 and abs(im + i2) == 0 for r2, i2 in pool)
            with mp.workdps(50):
                for r in roots:
                    scale = sum(
                        abs(mp.mpf(c.numerator) / c.denominator) * abs(mp.mpc(r.re, r.im)) ** i
                        for i, c in enumerate(p.coeffs)
                    )
                    assert r.residual <= mp.mpf(1e-20) * scale

    def test_multiple_roots_replicated(self):
        p = Polynomial([1, 1]) ** 4
        roots = complex_roots(p)
        assert len(roots) == 4
        for r in roots:
            assert abs(float(r.re) + 1) < 1e-40 and float(r.im) == 0

    def test_reference_values_order44(self):
        p = charpoly(build_A(FamilyParams(44, 21, Fraction(1, 2))))
        roots = sorted(complex_roots(p), key=lambda r: r.re)[:2]
        top = max(roots, key=lambda r: r.im)
        assert abs(float(top.re) - (-2.809929189497896e-2)) <= 1e-8
        assert abs(float(top.im) - 3.275076252367531e-1) <= 1e-8

    def test_reference_values_limit_matrix(self):
        p = charpoly(build_B(21))
        roots = sorted(complex_roots(p), key=lambda r: r.re)[:2]
        top = max(roots, key=lambda r: r.im)
        assert abs(float(top.re) - (-3.420708309454068e-2)) <= 1e-8
        assert abs(float(top.im) - 3.400425852703498e-1) <= 1e-8

    def test_degree_one(self):
        roots = complex_roots(Polynomial([3, 2]))
        assert len(roots) == 1
        assert abs(float(roots[0].re) + 1.5) < 1e-40

    def test_constant_rejected(self):
        with pytest.raises(ValueError):
            complex_roots(Polynomial([5]))


class TestRootContinuity:
    def test_family_roots_converge_to_limit_matrix(self):
        limit_roots = [
            mp.mpc(r.re, r.im) for r in complex_roots(charpoly(build_B(2)))
        ]
        prev = None
        for m in (2, 4, 6, 8):
            p = charpoly(build_A(FamilyParams(6, 2, Fraction(1, 2**m))))
            gap = max(
                float(min(abs(mp.mpc(r.re, r.im) - w) for w in limit_roots))
                for r in complex_roots(p)
            )
            if prev is not None:
                assert gap < prev
            prev = gap
        assert prev < 0.01


class TestBlockSpectrum:
    def test_union_of_leading_block_roots(self):
        # complex roots of the charpoly = union over the leading-block factors
        from gkktau.charpoly import leading_charpolys
        from gkktau.exact import IndexSet, submatrix

        a = build_A(FamilyParams(8, 2, Fraction(1, 2)))
        chain = leading_charpolys(a)
        alpha = IndexSet.of([1, 2, 4, 5, 6, 8], 8)  # runs of sizes 2, 3, 1
        sub = submatrix(a, alpha, alpha)
        product = chain[1] * chain[2] * chain[0]
        assert charpoly(sub) == product
        # numeric agreement: roots of the submatrix match the pooled factor roots
        pooled = []
        for run_size in (2, 3, 1):
            pooled.extend(mp.mpc(r.re, r.im) for r in complex_roots(chain[run_size - 1]))
        direct = [mp.mpc(r.re, r.im) for r in complex_roots(charpoly(sub))]
        for z in direct:
            assert float(min(abs(z - w) for w in pooled)) < 1e-30


class TestCauchyBound:
    def test_contains_all_real_roots(self):
        p = poly_from_roots([3, -7, Fraction(1, 2)])
        b = cauchy_bound(p)
        assert b > 7
        assert count_real_roots(p, -b, b) == 3


class TestClusterFlag:
    def test_near_pair_flagged_exact_multiple_not(self):
        from gkktau.rootfind import suspected_clusters

        eps = Fraction(1, 10**13)
        near = complex_roots(poly_from_roots([1, 1 + eps]))
        assert suspected_clusters(near) == [(0, 1)]
        exact = complex_roots(Polynomial([1, 1]) ** 2)
        assert suspected_clusters(exact) == []
