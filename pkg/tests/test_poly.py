import itertools
import math
import warnings
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from geomeasure import elim
from geomeasure.errors import DegenerateSpectrumError, ValidationError
from geomeasure.poly import (PolyMatrix, Polynomial, ZERO, common_nonneg_roots, det_polymatrix,
                             interpolate, multiplicity, real_roots_nonneg, sylvester)
from geomeasure.tensor_core import SymTensor
from oracles import rational_det

P = Polynomial


def soundness_bound(p, r, tol):
    return tol * (1 + abs(r)) ** p.degree * max(abs(c) for c in p.coeffs)


class TestPolynomial:
    def test_trims_and_degree(self):
        assert P([1, 2, 0, 0]).degree == 1
        assert P([0, 0]).is_zero() and P([0]).degree == -1

    def test_arithmetic(self):
        p, q = P([1, 1]), P([-1, 1])
        assert p * q == P([-1, 0, 1])
        assert p - p == ZERO
        assert (p + 2)(3.0) == 6.0
        assert P.from_roots([1, 2]) == P([2, -3, 1])

    def test_deriv(self):
        assert P([5, 3, 2]).deriv() == P([3, 4])


class TestRealRoots:
    def test_sqrt2(self):
        roots = real_roots_nonneg(P([-2, 0, 1]))
        assert roots == pytest.approx([math.sqrt(2)], abs=1e-14)

    def test_factored(self):
        p = P.from_roots([0, 1, -3])
        assert real_roots_nonneg(p) == pytest.approx([0, 1], abs=1e-14)

    def test_zero_polynomial(self):
        with pytest.raises(DegenerateSpectrumError, match="identically zero"):
            real_roots_nonneg(ZERO)

    def test_constant_has_no_roots(self):
        assert real_roots_nonneg(P([3.0])) == []

    def test_ghz_reduction(self):
        # n = 2 reduction for 3GHZ: q(t) = p0(t) - t p1(t) with p0 = t^2/sqrt2, p1 = 1/sqrt2
        s = 1 / math.sqrt(2)
        q = P([0, 0, s]) - P([0, 1]) * P([s])
        roots = real_roots_nonneg(q)
        assert any(abs(r - 1.0) < 1e-12 for r in roots)
        x = np.array([1.0, 1.0]) / math.sqrt(2)
        assert s * (x[0] ** 3 + x[1] ** 3) == pytest.approx(1 / 2, abs=1e-15)

    def test_double_root_multiplicity(self):
        p = P.from_roots([2, 2, 5])
        roots = real_roots_nonneg(p, with_multiplicity=True)
        assert [(round(r, 6), k) for r, k in roots] == [(2.0, 2), (5.0, 1)]
        assert multiplicity(p, 2.0) == 2

    def test_upper_limit(self):
        assert real_roots_nonneg(P.from_roots([0.5, 3]), upper=1.0) == pytest.approx([0.5])

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.floats(0, 10), min_size=1, max_size=8, unique=True),
           st.lists(st.floats(-10, -0.01), max_size=3, unique=True))
    def test_completeness_on_products(self, pos, neg):
        pos = sorted(pos)
        every = sorted(pos + neg)
        if any(b - a < 1e-3 for a, b in zip(every, every[1:])):
            return
        p = P.from_roots(pos + neg)
        # rounding the product's coefficients moves clustered roots, so the
        # reference is the high-precision root set of the float polynomial
        mpmath.mp.dps = 60
        exact = mpmath.polyroots([mpmath.mpf(float(c)) for c in p.coeffs[::-1]],
                                 maxsteps=500, extraprec=400)
        ref = sorted(float(z.real) for z in exact if abs(z.imag) < 1e-20 and z.real >= 0)
        roots = real_roots_nonneg(p)
        assert len(roots) == len(pos) == len(ref)
        np.testing.assert_allclose(roots, ref, atol=1e-8)
        np.testing.assert_allclose(roots, pos, atol=1e-4)
        for r in roots:
            assert abs(p(r)) <= soundness_bound(p, r, 1e-9)

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.one_of(st.just(0.0), st.floats(1e-3, 5), st.floats(-5, -1e-3)),
                    min_size=2, max_size=12))
    def test_soundness_on_random(self, coeffs):
        p = P(coeffs)
        if p.is_zero():
            return
        for r in real_roots_nonneg(p):
            assert r >= 0
            assert abs(p(r)) <= soundness_bound(p, r, 1e-9)


class TestCommonRoots:
    def test_shared(self):
        assert common_nonneg_roots(P([-1, 1]), P.from_roots([1, -2])) == pytest.approx([1])

    def test_disjoint(self):
        assert common_nonneg_roots(P([-1, 1]), P([-2, 1])) == []

    def test_both_zero(self):
        with pytest.raises(DegenerateSpectrumError):
            common_nonneg_roots(ZERO, ZERO)

    def test_one_zero_returns_other(self):
        assert common_nonneg_roots(ZERO, P([-3, 1])) == pytest.approx([3])

    @pytest.mark.parametrize("a,b", [(1 / 3, 2 / 3), (0.8, 0.6)])
    def test_two_level_qutrit_pair(self, a, b):
        # x3 = 0 on diag(a, b, c): rows give f(t) = a t^2 - b t with t = x1/x2,
        # and the third row vanishes identically
        f = P([0, -b, a])
        roots = common_nonneg_roots(f, ZERO)
        assert roots == pytest.approx([0.0, b / a], abs=1e-12)
        t = b / a
        x = np.array([t, 1.0, 0.0]) / math.hypot(t, 1.0)
        lam = a * x[0] ** 3 + b * x[1] ** 3
        assert lam == pytest.approx(a * b / math.hypot(a, b), rel=1e-12)
        np.testing.assert_allclose(x[:2], np.array([b, a]) / math.hypot(a, b), rtol=1e-12)


class TestSylvester:
    def test_layout(self):
        a0, a1, a2, b0, b1 = 2.0, 3.0, 5.0, 7.0, 11.0
        M = sylvester([a0, a1, a2], [b0, b1], m=2).evaluate(0.0)
        np.testing.assert_array_equal(M, [[a0, a1, a2], [b0, b1, 0], [0, b0, b1]])

    def test_degree_check(self):
        with pytest.raises(ValidationError):
            sylvester([1.0, 2.0], [1.0, 2.0], m=2)

    def test_common_root_gives_zero(self):
        M = sylvester([1.0, -1.0], [1.0, -1.0])
        assert det_polymatrix(M).is_zero()

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.integers(-4, 4), min_size=2, max_size=3),
           st.lists(st.integers(-4, 4), min_size=1, max_size=2), st.booleans())
    def test_resultant_law(self, fr, gr, share):
        # f, g built from roots; det(Syl) = 0 iff a root is shared
        if share:
            gr = [fr[0]] + gr[1:]
        f = P.from_roots(fr)
        g = P.from_roots(gr)
        M = sylvester(list(reversed(f.coeffs)), list(reversed(g.coeffs)))
        d = float(np.linalg.det(M.evaluate(0.0)))
        shared = bool(set(fr) & set(gr))
        assert (abs(d) < 1e-9) == shared


def _fractions(p):
    return [Fraction(c).limit_denominator(10**12) for c in p.coeffs]


class TestDeterminant:
    def test_2x2(self):
        M = PolyMatrix([[P([0, 1]), P([1])], [P([1]), P([0, 1])]])
        d = det_polymatrix(M)
        np.testing.assert_allclose(d.coeffs, [-1, 0, 1], atol=1e-12)

    def test_zero_row(self):
        M = PolyMatrix([[ZERO, ZERO], [P([1, 2]), P([3])]])
        assert det_polymatrix(M).is_zero()

    def test_non_square(self):
        with pytest.raises(ValidationError):
            det_polymatrix(PolyMatrix([[P([1]), P([2])]]))

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 4), deg=st.integers(0, 3))
    def test_matches_rational_cofactor(self, seed, n, deg):
        rng = np.random.default_rng(seed)
        C = rng.integers(-3, 4, size=(n, n, deg + 1))
        M = PolyMatrix([[P(C[i, j]) for j in range(n)] for i in range(n)])
        exact = rational_det([[[Fraction(int(c)) for c in C[i, j]] for j in range(n)] for i in range(n)])
        d = det_polymatrix(M)
        scale = max(1, max(abs(float(c)) for c in exact))
        got = list(d.coeffs) + [0.0] * (len(exact) - len(d.coeffs))
        np.testing.assert_allclose(got[: len(exact)], [float(c) for c in exact], atol=1e-8 * scale)
        assert all(abs(c) <= 1e-8 * scale for c in got[len(exact):])

    @pytest.mark.parametrize("seed", range(5))
    def test_qutrit_step_three_resultant(self, seed):
        # integer-valued qutrit tensor: the Sylvester determinant of its
        # bivariate system against exact rational cofactor expansion
        rng = np.random.default_rng(seed)
        a = rng.integers(0, 4, size=(3, 3, 3)).astype(float)
        a = sum(np.transpose(a, p) for p in itertools.permutations(range(3)))
        f, g = elim._bivariate_f_g(SymTensor(a))
        p, q = elim._u_degree(f), elim._u_degree(g)
        M = sylvester(elim._descending(f, p), elim._descending(g, q))
        exact = rational_det([[_fractions(M[i, j]) for j in range(M.shape[1])]
                              for i in range(M.shape[0])])
        d = det_polymatrix(M)
        scale = max(abs(float(c)) for c in exact)
        got = list(d.coeffs) + [0.0] * max(0, len(exact) - len(d.coeffs))
        np.testing.assert_allclose(got[: len(exact)], [float(c) for c in exact], atol=1e-8 * scale)

    def test_conditioning_warning(self):
        with pytest.warns(RuntimeWarning, match="span"):
            interpolate(lambda v: 10.0 ** (20 * v), 12)
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            interpolate(lambda v: 1 + v, 1, warn=False)
