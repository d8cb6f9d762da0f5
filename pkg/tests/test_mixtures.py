"""Random mixtures, the positivity certificate polynomial, pattern schedules."""

import math

import numpy as np
import pytest

from parrondo import (
    GameClass,
    InvalidSpecError,
    MixtureProblem,
    ParrondoSpec,
    PatternSchedule,
    SimConfig,
    ScheduledGame,
    WalkSpec,
    alternation_quotient,
    asymptotic_gain_cofactor,
    classify,
    fair_family,
    fairness_odds_check,
    make_parrondo,
    mixture_verdict,
    pattern_gain,
    q_diagnostics,
    q_polynomial,
    simulate,
)
from conftest import random_walk

A_GRID = (0.5, 1.0, 1.5, 2.0, 3.0)
LAM_GRID = (1 / 3, 1.0, 3.0)
R_GRID = (2, 3, 4, 5, 6)


def q_poly_oracle(a, lam, r):
    """Expand the defining product difference directly with numpy polynomials."""
    one = np.array([1.0])

    def polypow(c, k):
        out = one
        for _ in range(k):
            out = np.polynomial.polynomial.polymul(out, c)
        return out

    xr = np.zeros(r + 1)
    xr[r] = lam
    xr[0] = 1.0 + lam + a**r  # (1+lam+a^r) + lam*x^r
    left = np.polynomial.polynomial.polymul(xr, polypow(np.array([lam * a, (1 + lam) * a + 1]), r))
    yr = np.zeros(r + 1)
    yr[r] = 1.0 + (1 + lam) * a**r  # ((1+lam)a^r+1)x^r + lam*a^r
    yr[0] = lam * a**r
    right = np.polynomial.polynomial.polymul(yr, polypow(np.array([1 + lam + a, lam]), r))
    out = np.zeros(2 * r + 1)
    out[: left.size] += left
    out[: right.size] -= right
    return out


class TestFairnessOddsCheck:
    def test_fair_game_zero(self):
        assert abs(fairness_odds_check(ParrondoSpec(3, 0.75, 0.1))) < 1e-12

    def test_symmetric_exact_zero(self):
        assert fairness_odds_check(ParrondoSpec(3, 0.5, 0.5)) == 0.0

    def test_monotone_in_p_on(self):
        assert fairness_odds_check(ParrondoSpec(3, 0.75, 0.1 - 0.005)) < 0

    def test_sign_matches_classify(self, rng):
        for _ in range(40):
            spec = ParrondoSpec(
                int(rng.integers(1, 7)),
                float(rng.uniform(0.15, 0.85)),
                float(rng.uniform(0.15, 0.85)),
            )
            check = fairness_odds_check(spec)
            verdict = classify(make_parrondo(spec))
            if verdict is GameClass.WINNING:
                assert check > 0
            elif verdict is GameClass.LOSING:
                assert check < 0
            else:
                assert abs(check) < 1e-10


class TestQPolynomial:
    def test_frozen_triple_root_case(self):
        qp = q_polynomial(1.0, 1.0, 2)
        assert qp.coeffs == (-6.0, 12.0, 0.0, -12.0, 6.0)
        assert qp.sign_changes == 3

    def test_matches_direct_expansion(self):
        for a in A_GRID:
            for lam in LAM_GRID:
                for r in R_GRID:
                    got = np.array(q_polynomial(a, lam, r).coeffs)
                    want = q_poly_oracle(a, lam, r)
                    scale = np.max(np.abs(want))
                    assert np.max(np.abs(got - want)) < 1e-9 * scale, (a, lam, r)

    def test_double_root_at_a(self):
        from parrondo.mixtures import _derivative, _horner

        for a in A_GRID:
            for lam in LAM_GRID:
                for r in R_GRID:
                    qp = q_polynomial(a, lam, r)
                    scale = max(abs(c) for c in qp.coeffs) * max(1.0, a) ** (2 * r)
                    assert abs(_horner(qp.coeffs, a)) < 1e-9 * scale
                    assert abs(_horner(_derivative(qp.coeffs), a)) < 1e-9 * scale

    def test_second_derivative_sign(self):
        for a in A_GRID:
            for lam in LAM_GRID:
                for r in R_GRID:
                    d = q_diagnostics(q_polynomial(a, lam, r))
                    scale = max(abs(c) for c in q_polynomial(a, lam, r).coeffs)
                    if a > 1:
                        assert d.qsecond_at_a > 0, (a, lam, r)
                    elif a < 1:
                        assert d.qsecond_at_a < 0, (a, lam, r)
                    else:
                        assert abs(d.qsecond_at_a) < 1e-9 * scale

    def test_descartes_bound(self):
        for a in A_GRID:
            for lam in LAM_GRID:
                for r in R_GRID:
                    assert q_polynomial(a, lam, r).sign_changes <= 3

    def test_r1_vanishes_identically(self):
        for a in (0.5, 1.0, 2.0):
            for lam in LAM_GRID:
                qp = q_polynomial(a, lam, 1)
                scale = (1 + lam + a) ** 2
                assert all(abs(c) < 1e-12 * scale for c in qp.coeffs)
                assert qp.sign_changes == 0

    def test_input_validation(self):
        with pytest.raises(InvalidSpecError):
            q_polynomial(-1.0, 1.0, 2)
        with pytest.raises(InvalidSpecError):
            q_polynomial(1.0, 0.0, 2)
        with pytest.raises(InvalidSpecError):
            q_polynomial(1.0, 1.0, 0)

    def test_largest_root_is_a_for_a_ge_1(self):
        for a in (1.0, 1.5, 2.0, 3.0):
            for lam in LAM_GRID:
                d = q_diagnostics(q_polynomial(a, lam, 3))
                assert d.largest_positive_root == pytest.approx(a, rel=1e-6)

    def test_positive_beyond_a_when_a_ge_1(self):
        from parrondo.mixtures import _horner

        for a in (1.0, 1.5, 3.0):
            qp = q_polynomial(a, 2.0, 4)
            for x in np.linspace(a * 1.01, a * 10, 25):
                assert _horner(qp.coeffs, x) > 0


class TestMixtureProblem:
    def test_derived_odds(self):
        mp = MixtureProblem(ParrondoSpec(3, 0.75, 0.1), ParrondoSpec(3, 0.5, 0.5), 0.5)
        assert mp.lam == 1.0
        assert mp.x == pytest.approx(3.0)
        assert mp.y == pytest.approx(1 / 9)
        assert mp.xhat == pytest.approx(1.0)
        assert mp.yhat == pytest.approx(1.0)
        # mixed game G(3, 5/8, 3/10)
        assert mp.xbar == pytest.approx((5 / 8) / (3 / 8), rel=1e-13)
        assert mp.ybar == pytest.approx((3 / 10) / (7 / 10), rel=1e-13)

    def test_validation(self):
        a = ParrondoSpec(3, 0.75, 0.1)
        b = ParrondoSpec(3, 0.5, 0.5)
        with pytest.raises(InvalidSpecError):
            MixtureProblem(a, b, 0.0)
        with pytest.raises(InvalidSpecError):
            MixtureProblem(ParrondoSpec(4, 0.75, 0.1), b, 0.5)
        with pytest.raises(InvalidSpecError):
            MixtureProblem(b, a, 0.5)  # game_b odds exceed game_a's


class TestMixtureVerdict:
    def test_parrondo_example_wins(self):
        mp = MixtureProblem(ParrondoSpec(3, 0.75, 0.1), ParrondoSpec(3, 0.5, 0.5), 0.5)
        assert mixture_verdict(mp) is GameClass.WINNING

    def test_self_mixture_stays_fair(self):
        g = fair_family(4, 2.0)
        assert mixture_verdict(MixtureProblem(g, g, 0.3), 1e-12) is GameClass.FAIR

    def test_m2_fair_pairs_never_win(self):
        for x in (1.5, 2.0, 3.0):
            for pi in (0.1, 0.3, 0.5, 0.7, 0.9):
                mp = MixtureProblem(fair_family(2, x), fair_family(2, 1.0), pi)
                assert mixture_verdict(mp, 1e-12) is GameClass.FAIR

    def test_theorem_sweep_sample(self):
        for m in (3, 4, 5):
            for beta, p in ((0.5, 0.75), (0.6, 0.8), (0.7, 0.9)):
                ga = fair_family(m, p / (1 - p))
                gb = fair_family(m, beta / (1 - beta))
                for pi in (0.2, 0.5, 0.8):
                    assert mixture_verdict(MixtureProblem(ga, gb, pi)) is GameClass.WINNING


class TestPatternSchedule:
    def test_normalizes_and_validates(self):
        assert PatternSchedule("aabb").pattern == "AABB"
        assert PatternSchedule("AB").period == 2
        with pytest.raises(InvalidSpecError):
            PatternSchedule("")
        with pytest.raises(InvalidSpecError):
            PatternSchedule("ABC")


class TestPatternGain:
    def test_aabb_exact_value(self):
        a = make_parrondo(ParrondoSpec(3, 0.5, 0.5))
        b = make_parrondo(ParrondoSpec(3, 0.75, 0.1))
        assert pattern_gain(a, b, "AABB") == pytest.approx(4 / 163, abs=1e-13)

    def test_single_game_schedule(self, rng):
        for _ in range(10):
            m = int(rng.integers(1, 6))
            a = random_walk(rng, m, holds=bool(rng.integers(0, 2)))
            b = random_walk(rng, m)
            assert pattern_gain(a, b, "A") == pytest.approx(
                asymptotic_gain_cofactor(a), abs=1e-12
            )

    def test_ab_of_fair_games_odd_m(self, rng):
        for m in (3, 5):
            for x in (1.5, 2.0, 3.0):
                a = make_parrondo(fair_family(m, x))
                b = make_parrondo(fair_family(m, 1.0))
                assert abs(pattern_gain(a, b, "AB")) < 1e-12

    def test_even_m_ab_sign_matches_quotient(self, rng):
        for _ in range(20):
            a = make_parrondo(fair_family(4, float(rng.uniform(1.2, 3.0))))
            b = make_parrondo(fair_family(4, float(rng.uniform(0.4, 1.0))))
            gain = pattern_gain(a, b, "AB")
            quot = alternation_quotient(a, b, 0)
            if abs(quot - 1.0) > 1e-9:
                assert (gain > 0) == (quot > 1.0)
            else:
                assert abs(gain) < 1e-10

    def test_monte_carlo_cross_check(self, rng):
        cases = [
            (3, "AABB"),
            (4, "ABBABA"),
            (5, "AAB"),
        ]
        for m, sched in cases:
            a = random_walk(rng, m)
            b = random_walk(rng, m)
            exact = pattern_gain(a, b, sched)
            res = simulate(
                ScheduledGame(a, b, sched),
                SimConfig(steps=4000, replicas=1200, seed=int(rng.integers(2**32)), burn_in=100),
            )
            assert abs(res.mean_slope - exact) < 4 * res.stderr, (m, sched)

    def test_rejects_mismatched_m(self, rng):
        with pytest.raises(InvalidSpecError):
            pattern_gain(random_walk(rng, 3), random_walk(rng, 4), "AB")


class TestAlternationQuotient:
    def test_symmetric_is_one(self):
        w = make_parrondo(ParrondoSpec(4, 0.5, 0.5))
        assert alternation_quotient(w, w, 0) == pytest.approx(1.0, rel=1e-14)

    def test_fair_pair_with_quotient_away_from_one(self):
        a = make_parrondo(fair_family(4, 2.0))
        b = make_parrondo(fair_family(4, 3.0))
        assert abs(alternation_quotient(a, b, 0) - 1.0) > 1e-3

    def test_parity_product_is_one_for_fair_pairs(self, rng):
        for m in (4, 6):
            for _ in range(15):
                a = make_parrondo(fair_family(m, float(rng.uniform(0.5, 3.0))))
                b = make_parrondo(fair_family(m, float(rng.uniform(0.5, 3.0))))
                prod = alternation_quotient(a, b, 0) * alternation_quotient(a, b, 1)
                assert prod == pytest.approx(1.0, rel=1e-12)

    def test_rejections(self, rng):
        odd = random_walk(rng, 3)
        with pytest.raises(InvalidSpecError):
            alternation_quotient(odd, odd, 0)
        held = WalkSpec(4, (0.3,) * 4, (0.3,) * 4)
        with pytest.raises(InvalidSpecError):
            alternation_quotient(held, held, 0)
        even = random_walk(rng, 4)
        with pytest.raises(InvalidSpecError):
            alternation_quotient(even, even, 2)
