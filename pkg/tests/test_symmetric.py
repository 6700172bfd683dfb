import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from calabi_hessian.errors import ConeViolation, InvalidArgument, SingularInput
from calabi_hessian.symmetric import (
    EigenVector,
    hessian_quotient,
    in_admissible_cone,
    newton_defect,
    sigma,
    sigma_all,
    sigma_table,
    structured_eigenvector,
    uniform_q_positive,
)

small_ints = st.integers(min_value=-6, max_value=6)
vectors = st.lists(small_ints, min_size=1, max_size=7)


def brute_sigma(k, vals):
    return sum(math.prod(c) for c in itertools.combinations(vals, k))


class TestSigma:
    @pytest.mark.parametrize("k, lam, expected", [
        (2, (1, 1, 1), 3),
        (0, (5, -7), 1),
        (2, (3, 1, -1), -1),
        (4, (1, 2, 3), 0),
        (-1, (1, 2), 0),
    ])
    def test_examples(self, k, lam, expected):
        assert sigma(k, lam) == expected

    @given(vectors)
    def test_matches_subset_enumeration(self, vals):
        assert sigma_all(vals) == [brute_sigma(k, vals) for k in range(len(vals) + 1)]

    def test_exact_for_fractions(self):
        value = sigma(2, (Fraction(1, 3), Fraction(1, 2), 2))
        assert value == Fraction(1, 6) + Fraction(2, 3) + 1
        assert isinstance(value, Fraction)

    def test_table_matches_rows(self):
        rng = np.random.default_rng(3)
        arr = rng.integers(-5, 6, size=(50, 6))
        table = sigma_table(arr)
        assert table.dtype == arr.dtype
        for row, e in zip(arr, table):
            assert list(e) == sigma_all(row.tolist())

    @pytest.mark.parametrize("length", range(0, 8))
    def test_linearity_in_last_entry(self, length):
        # exhaustive over a small alphabet for short vectors, sampled for longer ones
        alphabet = (-2, -1, 0, Fraction(1, 2), 3)
        if length <= 3:
            bases = itertools.product(alphabet, repeat=length)
        else:
            rng = np.random.default_rng(length)
            bases = (tuple(alphabet[i] for i in rng.integers(0, 5, size=length)) for _ in range(200))
        for base in bases:
            e = sigma_all(base)
            for t in alphabet:
                ext = sigma_all(base + (t,))
                for j in range(length + 2):
                    lower = e[j - 1] if j >= 1 else 0
                    upper = e[j] if j <= length else 0
                    assert ext[j] == upper + t * lower

    def test_accepts_eigenvector(self):
        lam = EigenVector((2, 2, 5), (2, 0, True))
        assert sigma(2, lam) == 4 + 10 + 10


class TestCone:
    @pytest.mark.parametrize("lam, k, expected", [
        ((1, 1, 1), 3, True),
        ((3, 1, -1), 1, True),
        ((3, 1, -1), 2, False),
        ((1, 0, 0), 2, False),
        ((0.0, 1.0), 1, True),
    ])
    def test_examples(self, lam, k, expected):
        assert in_admissible_cone(lam, k) is expected

    @pytest.mark.parametrize("k", [0, 4])
    def test_k_out_of_range(self, k):
        with pytest.raises(InvalidArgument):
            in_admissible_cone((1, 2, 3), k)

    def test_boundary_is_outside(self):
        # sigma_2 = 0 exactly
        assert not in_admissible_cone((1, 1, Fraction(-1, 2)), 2)

    @given(vectors.filter(lambda v: len(v) >= 2))
    def test_cones_are_nested(self, vals):
        for k in range(2, len(vals) + 1):
            if in_admissible_cone(vals, k):
                assert in_admissible_cone(vals, k - 1)


class TestNewton:
    @pytest.mark.parametrize("lam, r, expected", [
        ((1, 2), 1, Fraction(1, 4)),
        ((3, 1, -1), 1, Fraction(4, 3)),
        ((7, 7, 7, 7), 2, 0),
    ])
    def test_examples(self, lam, r, expected):
        assert newton_defect(lam, r) == expected

    @given(vectors.filter(lambda v: len(v) >= 2), st.data())
    def test_non_negative(self, vals, data):
        r = data.draw(st.integers(min_value=1, max_value=len(vals) - 1))
        assert newton_defect(vals, r) >= 0

    @given(st.integers(-9, 9), st.integers(2, 7), st.data())
    def test_zero_on_diagonal(self, t, n, data):
        r = data.draw(st.integers(min_value=1, max_value=n - 1))
        assert newton_defect((t,) * n, r) == 0

    def test_float_diagonal(self):
        assert abs(newton_defect((0.3,) * 5, 2)) <= 1e-12

    def test_positive_off_diagonal_in_cone(self):
        rng = np.random.default_rng(5)
        for _ in range(200):
            vals = tuple(int(v) for v in rng.integers(1, 9, size=4))
            if len(set(vals)) > 1:
                assert all(newton_defect(vals, r) > 0 for r in (1, 2, 3))

    @pytest.mark.parametrize("r", [0, 3])
    def test_r_out_of_range(self, r):
        with pytest.raises(InvalidArgument):
            newton_defect((1, 2, 3), r)


class TestHessianQuotient:
    @pytest.mark.parametrize("t, k, l", [(0.5, 2, 0), (3, 3, 1), (Fraction(2, 3), 4, 2)])
    def test_diagonal(self, t, k, l):
        assert hessian_quotient((t,) * 4, k, l) == pytest.approx(float(t), rel=1e-14)

    def test_example(self):
        assert hessian_quotient((2, 1), 2, 0) == pytest.approx(math.sqrt(2), rel=1e-15)

    def test_outside_cone(self):
        with pytest.raises(ConeViolation):
            hessian_quotient((3, 1, -1), 2, 0)

    def test_bad_indices(self):
        with pytest.raises(InvalidArgument):
            hessian_quotient((1, 1), 1, 1)

    @given(st.lists(st.integers(1, 9), min_size=2, max_size=6), st.data())
    def test_monotone(self, vals, data):
        n = len(vals)
        k = data.draw(st.integers(1, n))
        l = data.draw(st.integers(0, k - 1))
        d = data.draw(st.lists(st.integers(0, 3), min_size=n, max_size=n).filter(any))
        bumped = [a + b for a, b in zip(vals, d)]
        assert hessian_quotient(bumped, k, l) > hessian_quotient(vals, k, l)


class TestStructuredEigenvector:
    def test_interior(self):
        lam, check = structured_eigenvector(1, 1, 1, 1, 2, 3)
        assert lam.values == (2, 1.5, 3)
        assert check.values == (2, 1.5)
        assert lam.multiplicity_tag == (1, 1, True)

    def test_zero_section(self):
        t = Fraction(7, 3)
        lam, check = structured_eigenvector(1, 2, 1, 0, 0, t)
        assert lam.values == (t, t, 1, 1)
        assert check.values == (t, 1, 1)

    def test_check_without_yprime(self):
        lam, check = structured_eigenvector(2, 0, 0, 1, 1)
        assert lam is None
        assert check.values == (1, 1)

    @pytest.mark.parametrize("y, yprime", [(1, 2), (0, None)])
    def test_singular(self, y, yprime):
        with pytest.raises(SingularInput):
            structured_eigenvector(1, 1, 1, 0, y, yprime)

    def test_negative_x(self):
        with pytest.raises(InvalidArgument):
            structured_eigenvector(1, 1, 1, -1, 0, 1)

    def test_tag_validation(self):
        with pytest.raises(InvalidArgument):
            EigenVector((1, 2, 3), (2, 0, True))
        with pytest.raises(InvalidArgument):
            EigenVector((1, 2), (2, 1, False))

    def test_extended(self):
        _, check = structured_eigenvector(1, 1, 1, 2, 1)
        assert check.extended(5).multiplicity_tag == (1, 1, True)


class TestUniformPositivity:
    @pytest.mark.parametrize("lam, q, expected", [
        ((1, 1, 1), 0, True),
        ((3, 1, -1), 1, False),
        ((3, 1, -1), 2, True),
    ])
    def test_examples(self, lam, q, expected):
        assert uniform_q_positive(lam, q) is expected

    def test_q_too_large(self):
        with pytest.raises(InvalidArgument):
            uniform_q_positive((1, 2), 2)

    @given(st.lists(st.integers(-5, 5), min_size=1, max_size=6), st.data())
    def test_matches_all_subsets(self, vals, data):
        q = data.draw(st.integers(0, len(vals) - 1))
        expected = all(sum(c) > 0 for c in itertools.combinations(vals, q + 1))
        assert uniform_q_positive(vals, q) is expected

    @given(st.lists(st.integers(-6, 9), min_size=2, max_size=6), st.data())
    def test_cone_inclusion(self, vals, data):
        k = data.draw(st.integers(1, len(vals)))
        if in_admissible_cone(vals, k):
            assert uniform_q_positive(vals, len(vals) - k)
