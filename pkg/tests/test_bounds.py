import random
from fractions import Fraction

import pytest

from hillvar.error_bounds import (
    ErrorBoundReport,
    bound_pipeline,
    fixed_point_root,
    implicit_root_series,
    l_series,
    order_magnitude,
    reference_report,
    refined_cubic,
    refined_map,
    refined_params,
    truncation_bound,
)
from hillvar.exactnum import render_interval, render_tagged
from hillvar.hill_coeffs import build_table
from hillvar.majorant_cert import majorant_root, majorant_root_series, reduce_params
from hillvar.reference import LUNAR_M, MAIN_TABLE, ONE_SEVENTH_H_AS_PRINTED, ONE_SEVENTH_H


@pytest.fixture(scope="module")
def lunar_refined(lunar_table3, lunar_params):
    return refined_params(lunar_table3, lunar_params, 2)


class TestOrderMagnitude:
    def test_first_order_is_epsilon(self, lunar_table3, lunar_params, lunar_lam):
        assert order_magnitude(lunar_table3, 1, lunar_lam) == lunar_params.epsilon

    def test_second_order(self, lunar_table3, lunar_lam):
        value = order_magnitude(lunar_table3, 2, lunar_lam)
        direct = sum(abs(lunar_table3.entry(2, s)) for s in (-2, 0, 2)) * lunar_lam**2
        assert value == direct
        assert (render_tagged(value, 10).text, render_tagged(value, 10).tag) == ("0.0000300091", "+")

    def test_third_order(self, lunar_table3, lunar_lam):
        r = render_tagged(order_magnitude(lunar_table3, 3, lunar_lam), 10)
        assert (r.text, r.tag) == ("0.0000002847", "+")

    def test_out_of_range(self, lunar_table3, lunar_lam):
        with pytest.raises(IndexError):
            order_magnitude(lunar_table3, 4, lunar_lam)


class TestRefinedParams:
    def test_closed_form_equality(self, lunar_table3, lunar_params, lunar_refined, lunar_lam):
        eps = lunar_params.epsilon
        eps1 = order_magnitude(lunar_table3, 2, lunar_lam)
        closed = eps + eps1 - (1 + 3 * lunar_params.h) * eps * eps
        assert lunar_refined.eps_prime == closed
        assert lunar_refined.delta == closed / (1 - eps)
        assert lunar_refined.g == lunar_params.h / (1 - eps)

    def test_published_strings(self, lunar_refined):
        assert render_tagged(lunar_refined.eps_prime, 10).text == "0.0097556965"
        assert render_tagged(lunar_refined.delta, 10).text == "0.0098563461"
        assert render_tagged(lunar_refined.g, 10).text == "1.2326998724"

    def test_vanishing_lam_limit(self, lunar_table3):
        p0 = reduce_params(LUNAR_M, Fraction(0))
        refined = refined_params(lunar_table3, p0, 2)
        assert refined.eps_prime == 0 and refined.delta == 0
        assert refined.g == p0.h

    def test_general_n_against_manual_expansion(self, lunar_table3, lunar_params, lunar_lam):
        # N = 3 correction includes the cubic gain term 6 v1 v2 + 4 v1^3
        refined = refined_params(lunar_table3, lunar_params, 3)
        eps_hat = reduce_params(LUNAR_M, Fraction(1)).epsilon
        v = [Fraction(0)] + [
            sum(abs(c) for c in lunar_table3.slice(r).coeffs) for r in (1, 2, 3)
        ]
        h = lunar_params.h
        l2 = eps_hat * v[1] + 3 * h * v[1] ** 2
        l3 = eps_hat * v[2] + h * (6 * v[1] * v[2] + 4 * v[1] ** 3)
        expected = (
            v[1] * lunar_lam + v[2] * lunar_lam**2 + v[3] * lunar_lam**3
            - l2 * lunar_lam**2 - l3 * lunar_lam**3
        )
        assert refined.eps_prime == expected

    def test_rejects_small_n(self, lunar_table3, lunar_params):
        with pytest.raises(ValueError):
            refined_params(lunar_table3, lunar_params, 1)

    def test_start_bound_invariant(self, lunar_refined):
        assert 0 < lunar_refined.start_bound < 1


class TestLSeries:
    def test_closed_forms(self, lunar_table3, lunar_params, lunar_lam):
        eps, h = lunar_params.epsilon, lunar_params.h
        eps1 = order_magnitude(lunar_table3, 2, lunar_lam)
        terms = l_series(lunar_table3, lunar_params, 2, 3)
        assert terms[0] == eps
        assert terms[1] == eps1
        assert terms[2] == (1 + 6 * h) * eps * eps1 + 4 * h * eps**3

    def test_published_strings(self, lunar_table3, lunar_params):
        terms = l_series(lunar_table3, lunar_params, 2, 3)
        assert render_tagged(terms[0], 10).text == "0.0102116577"
        assert render_tagged(terms[1], 10).text == "0.0000300091"
        assert render_tagged(terms[2], 10).text == "0.0000077468"

    def test_leading_term_is_epsilon_always(self):
        rng = random.Random(47)
        for _ in range(5):
            m = Fraction(rng.randint(1, 80), rng.randint(400, 900))
            table = build_table(m, 3)
            p = reduce_params(m, m * m)
            assert l_series(table, p, 2, 1)[0] == p.epsilon

    def test_degenerate_inhomogeneous_term(self):
        # with only the linear inhomogeneous part, grade 2 is (1 + 3h) v1^2
        v1, eps_hat, h = Fraction(2, 7), Fraction(5, 4), Fraction(9, 8)
        z = implicit_root_series([Fraction(0), v1], eps_hat, h, 2)
        assert z[1] == v1
        assert z[2] == eps_hat * v1 + 3 * h * v1**2

    def test_gain_free_case_is_geometric(self):
        # h = 0 turns the equation into z = e(lam) + eps_hat lam z
        e1, eps_hat = Fraction(1, 3), Fraction(1, 5)
        z = implicit_root_series([Fraction(0), e1], eps_hat, Fraction(0), 5)
        for j in range(1, 6):
            assert z[j] == e1 * eps_hat ** (j - 1)


class TestFixedPointRoot:
    def test_zero_delta(self, lunar_refined):
        zero = type(lunar_refined)(
            N=2, eps_prime=Fraction(0), delta=Fraction(0), g=lunar_refined.g,
            base=lunar_refined.base,
        )
        root = fixed_point_root(zero)
        assert root.lo == root.hi == 0

    def test_tiny_gain_approaches_delta(self, lunar_refined):
        small = type(lunar_refined)(
            N=2, eps_prime=lunar_refined.eps_prime, delta=Fraction(1, 100),
            g=Fraction(1, 10**9), base=lunar_refined.base,
        )
        root = fixed_point_root(small, Fraction(1, 10**14))
        assert abs(root.mid - Fraction(1, 100)) < Fraction(1, 10**10)

    def test_lunar_root_rendering(self, lunar_refined):
        root = fixed_point_root(lunar_refined, Fraction(1, 10**12))
        assert root.width <= Fraction(1, 10**12)
        r = render_interval(root, 8)
        assert (r.text, r.tag) == ("0.01025028", "-")

    def test_cubic_sign_bracketing(self, lunar_refined):
        root = fixed_point_root(lunar_refined, Fraction(1, 10**10))
        assert refined_cubic(lunar_refined, root.lo) <= 0 <= refined_cubic(lunar_refined, root.hi)

    def test_against_bisection_oracle(self, lunar_refined):
        root = fixed_point_root(lunar_refined, Fraction(1, 10**10))
        lo, hi = Fraction(0), lunar_refined.start_bound
        for _ in range(60):
            mid = (lo + hi) / 2
            if refined_map(lunar_refined, mid) >= mid:
                lo = mid
            else:
                hi = mid
        assert root.lo <= hi and lo <= root.hi

    def test_monotone_interleaving(self, lunar_refined):
        # small-denominator stand-in keeps the exact iterates tractable
        small = type(lunar_refined)(
            N=2, eps_prime=Fraction(1, 100), delta=Fraction(1, 100),
            g=Fraction(5, 4), base=lunar_refined.base,
        )
        lo, hi = Fraction(0), small.start_bound
        for _ in range(6):
            new_lo, new_hi = refined_map(small, lo), refined_map(small, hi)
            assert new_lo > lo and new_hi < hi
            assert new_lo < new_hi
            lo, hi = new_lo, new_hi
        root = fixed_point_root(small, Fraction(1, 10**12))
        assert lo <= root.lo and root.hi <= hi

    def test_invariant_violation_rejected(self, lunar_refined):
        bad = type(lunar_refined)(
            N=2, eps_prime=Fraction(2), delta=Fraction(2), g=Fraction(1, 10),
            base=lunar_refined.base,
        )
        with pytest.raises(ValueError):
            fixed_point_root(bad)


class TestTruncationBound:
    def test_published_bounds(self, lunar_table3, lunar_params, lunar_refined):
        terms = l_series(lunar_table3, lunar_params, 2, 3)
        z = fixed_point_root(lunar_refined, Fraction(1, 10**12))
        expected = {1: "0.00003862", 2: "0.00000861", 3: "0.00000086"}
        for n, text in expected.items():
            report = truncation_bound(z, terms, n, N=2)
            assert report.bound.lo >= 0
            assert render_interval(report.bound, 8).text == text

    def test_length_validation(self, lunar_refined):
        z = fixed_point_root(lunar_refined)
        with pytest.raises(ValueError):
            truncation_bound(z, [Fraction(1, 100)], 2)

    def test_refinement_tightens(self, lunar_table3, lunar_params, lunar_refined):
        # the refined bound is no worse than the plain majorant bound
        terms = l_series(lunar_table3, lunar_params, 2, 3)
        z_refined = fixed_point_root(lunar_refined, Fraction(1, 10**12))
        z_plain = majorant_root(lunar_params, Fraction(1, 10**12))
        plain_series = majorant_root_series(LUNAR_M, 3)
        lam = lunar_params.lam
        plain_terms = [plain_series[j] * lam**j for j in (1, 2, 3)]
        for n in (1, 2, 3):
            refined = truncation_bound(z_refined, terms, n).bound
            plain = truncation_bound(z_plain, plain_terms, n).bound
            assert refined.hi <= plain.lo

    def test_pipeline(self):
        report = bound_pipeline(Fraction(1, 12), J=4, N=2, n=2)
        assert isinstance(report, ErrorBoundReport)
        assert report.bound.lo >= 0
        assert report.N == 2 and report.n == 2


@pytest.fixture(scope="module")
def report():
    return reference_report(LUNAR_M, 10)


class TestReferenceReport:
    def test_match_flags_equal_forensic_expectations(self, report):
        expected = {key: ok for key, _, _, ok in MAIN_TABLE}
        got = {entry.name: entry.matches for entry in report.main}
        assert got == expected

    def test_root_and_bounds_flags(self, report):
        assert report.z_entry.matches is False  # inherits the published slip
        assert [b.matches for b in report.bounds] == [False, False, False]

    def test_combined_bound_reproduced(self, report):
        assert report.combined_n1.computed.text == "0.00003152"
        assert report.combined_n1.matches is True

    def test_approximation_strings(self, report):
        first = report.approximations["first_order"]
        assert first["xi_cos2"] == "-0.00718"
        assert first["eta_sin2"] == "0.01021"
        second = report.approximations["second_order"]
        assert second["xi_const"] == "0.00002"
        assert second["xi_cos4"] == "0.00001"
        assert second["eta_sin4"] == "0.00001"

    def test_notes_mention_known_discrepancies(self, report):
        joined = " ".join(report.notes)
        assert "53761/34888" in joined and "52761/34888" in joined
        assert ONE_SEVENTH_H_AS_PRINTED - ONE_SEVENTH_H == Fraction(1000, 34888)

    def test_serialization(self, report):
        data = report.to_dict()
        assert len(data["main"]) == 14
        assert data["digits"] == 10
        text = report.to_text()
        assert "a20_lam2" in text and "published:" in text
