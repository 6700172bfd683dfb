import json
from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, strategies as st

from calabi_hessian.criteria import VERDICTS, check_Dinf, check_P0, classify, fmt_real
from calabi_hessian.polynomials import CalabiParams, build_F

positive = st.fractions(min_value=Fraction(1, 8), max_value=3, max_denominator=8)


@st.composite
def shapes(draw, l_max=None):
    m = draw(st.integers(0, 3))
    n = draw(st.integers(1, 3))
    k = draw(st.integers(1, m + n + 1))
    l = draw(st.integers(0, k - 1))
    return m, n, k, l


class TestP0:
    def test_vacuous(self):
        rec = check_P0(CalabiParams(2, 1, 2, 0, 1, 1, 1), 1)
        assert (rec.rule, rec.applicable, rec.passed) == ("vacuous", False, True)

    @pytest.mark.parametrize("p, passed", [(Fraction(1, 2), True), (Fraction(-1, 2), False), (0, False)])
    def test_p_positive(self, p, passed):
        rec = check_P0(CalabiParams(0, 1, 2, 0, p, 1, 1), 1)
        assert rec.rule == "p_positive"
        assert rec.passed is passed

    def test_weighted_binomial(self):
        rec = check_P0(CalabiParams(0, 2, 2, 1, 1, 1, 1), Fraction(3, 2))
        assert rec.rule == "weighted_binomial"
        assert rec.value == Fraction(1, 2)
        assert rec.passed

    def test_weighted_binomial_failure(self):
        rec = check_P0(CalabiParams(0, 2, 2, 1, 1, 1, 1), 2)
        assert rec.value == 0 and not rec.passed


class TestDinf:
    def test_example(self):
        P = CalabiParams(0, 1, 1, 0, 1, 1, 1)
        tower = check_Dinf(P, 2)
        assert [(e.s, e.value) for e in tower] == [(1, 2)]

    @pytest.mark.parametrize("l, required", [(0, [True, True, False]), (1, [True, False, False]),
                                             (2, [True, False, False])])
    def test_required_set(self, l, required):
        P = CalabiParams(1, 1, 3, l, 1, 1, 1)
        assert [e.required for e in check_Dinf(P, P.mu.mu)] == required

    @given(shapes(), st.fractions(-3, 3, max_denominator=6), st.fractions(-3, 3, max_denominator=6),
           positive)
    def test_top_entry_positive_for_l_zero(self, shape, p, q, b):
        m, n, k, _ = shape
        P = CalabiParams(m, n, k, 0, p, q, b)
        top = check_Dinf(P, P.mu.mu)[-1]
        assert top.s == k and top.value > 0

    @given(shapes(), positive, positive)
    def test_proportional_class_is_positive(self, shape, t, b):
        P = CalabiParams(*shape, t, t * b, b)
        report = classify(P)
        assert all(e.value > 0 for e in report.dinf_tower)
        assert report.verdict == "pass"

    @pytest.mark.parametrize("shape", [(0, 1, 1, 0), (1, 1, 3, 0), (1, 2, 2, 1), (2, 1, 4, 2)])
    def test_finite_difference(self, shape):
        P = CalabiParams(*shape, Fraction(3, 2), Fraction(2, 3), 1)
        mu = P.mu.mu
        F = build_F(P, mu)
        h = Fraction(1, 10**4)
        for entry in check_Dinf(P, mu)[:3]:
            s = entry.s
            # central s-th difference, exact in rationals
            from math import comb
            diff = sum((-1) ** j * comb(s, j) * F(P.b, P.q + (Fraction(s, 2) - j) * h)
                       for j in range(s + 1)) / h**s
            assert abs(diff - entry.value) <= Fraction(1, 10**6) * max(1, abs(entry.value))

    @given(shapes(), positive, positive, positive)
    def test_scaling(self, shape, p, q, t):
        P = CalabiParams(*shape, p, q, 1)
        Pt = P.replace(p=t * p, q=t * q)
        base = check_Dinf(P, P.mu.mu) if P.mu.denominator else None
        if base is None:
            return
        for e, et in zip(base, check_Dinf(Pt, Pt.mu.mu)):
            assert et.value == t ** (P.k - e.s) * e.value


class TestClassify:
    @given(shapes(), positive)
    def test_identity_class(self, shape, b):
        assert classify(CalabiParams(*shape, 1, b, b)).verdict == "pass"

    @given(st.integers(0, 3), st.integers(1, 3), st.data())
    def test_nonpositive_q_fails_when_k_exceeds_n(self, m, n, data):
        k = data.draw(st.integers(n + 1, m + n + 1))
        p = data.draw(st.fractions(-3, 3, max_denominator=8))
        q = -data.draw(st.fractions(0, 3, max_denominator=6))
        report = classify(CalabiParams(m, n, k, 0, p, q, 1))
        assert report.verdict in ("fail_Dinf", "fail_total", "fail_P0")

    @pytest.mark.parametrize("args", [(0, 1, 1, 0, 1, Fraction(-1, 8)), (0, 3, 2, 0, 3, -1)])
    def test_nonpositive_q_can_pass_when_k_at_most_n(self, args):
        # only k-fold sums of eigenvalues need to be positive, so the base directions
        # can compensate a negative fibre coefficient
        from calabi_hessian.solver import solve

        result = solve(CalabiParams(*args, 1))
        assert result.criteria.verdict == "pass"
        assert result.solved

    def test_degenerate(self):
        report = classify(CalabiParams(0, 1, 2, 1, -2, 1, 1))
        assert report.verdict == "degenerate"
        assert report.mu is None and not report.passed

    def test_fail_P0(self):
        assert classify(CalabiParams(0, 1, 2, 0, Fraction(-1, 2), 1, 1)).verdict == "fail_P0"

    def test_fail_Dinf(self):
        report = classify(CalabiParams(1, 1, 2, 1, 1, Fraction(-1, 2), 1))
        assert report.verdict == "fail_Dinf"
        assert report.dinf_tower[0].value == -1

    @given(shapes(), st.fractions(-3, 3, max_denominator=6), st.fractions(-3, 3, max_denominator=6))
    def test_verdict_consistency(self, shape, p, q):
        report = classify(CalabiParams(*shape, p, q, 1))
        assert report.verdict in VERDICTS
        if report.verdict == "pass":
            assert report.p0.passed
            assert all(e.passed for e in report.dinf_tower if e.required)

    def test_json(self):
        report = classify(CalabiParams(1, 1, 2, 1, Fraction(3, 2), Fraction(1, 2), 1))
        data = json.loads(json.dumps(report.to_json()))
        assert set(data) >= {"mu", "p0", "dinf_tower", "verdict", "notes"}
        assert set(data["p0"]) == {"applicable", "value", "pass", "rule"}
        assert set(data["dinf_tower"][0]) >= {"s", "value", "pass"}
        assert data["mu"] == "0.6428571428571429" or float(data["mu"]) == float(Fraction(9, 14))
        assert "positive constant" in data["notes"]


def test_fmt_real():
    assert fmt_real(None) is None
    assert fmt_real(Fraction(1, 3)) == "0.33333333333333331"
    assert float(fmt_real(Fraction(2, 7))) == float(Fraction(2, 7))
