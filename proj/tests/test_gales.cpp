#include <doctest.h>

#include <cmath>

#include "fsdim/gales.hpp"
#include "helpers.hpp"

using namespace fsdim;

namespace {

FiniteStateGambler single_state_34() {
    return FiniteStateGambler(2, {{0, 0}}, 0, {{Rational(3, 4), Rational(1, 4)}});
}

RationalExponent half() { return {1, 2}; }
RationalExponent one() { return {1, 1}; }
RationalExponent two() { return {2, 1}; }

}  // namespace

TEST_SUITE("gales") {

TEST_CASE("capital doubles the bet fraction each step") {
    auto g = single_state_34();
    CHECK(martingale_eval_exact(g, SymbolString::from_digits(2, "00")) ==
          Rational(9, 4));
    CHECK(martingale_eval(g, SymbolString::from_digits(2, "00")).value ==
          doctest::Approx(2.25));
    CHECK(martingale_eval_exact(g, SymbolString::from_digits(2, "01")) ==
          Rational(3, 4));
    CHECK(martingale_eval_exact(g, SymbolString(2)) == 1);
}

TEST_CASE("gambler construction validates its tables") {
    CHECK_THROWS_WITH_AS(
        FiniteStateGambler(2, {{0, 2}}, 0, {{Rational(1, 2), Rational(1, 2)}}),
        doctest::Contains("MalformedFile"), DomainError);
    CHECK_THROWS_WITH_AS(
        FiniteStateGambler(2, {{0, 0}}, 0, {{Rational(1, 2), Rational(1, 4)}}),
        doctest::Contains("NonNormalizedMeasure"), DomainError);
    CHECK_THROWS_WITH_AS(
        FiniteStateGambler(2, {{0, 0}}, 0, {{Rational(3, 2), Rational(-1, 2)}}),
        doctest::Contains("NonPositiveMeasure"), DomainError);
    CHECK_THROWS_WITH_AS(
        FiniteStateGambler(2, {{0, 0}}, 1, {{Rational(1, 2), Rational(1, 2)}}),
        doctest::Contains("MalformedFile"), DomainError);
}

TEST_CASE("zero bets clear the nonvanishing flag and sink the capital") {
    FiniteStateGambler g(2, {{0, 0}}, 0, {{Rational(1), Rational(0)}});
    CHECK_FALSE(g.nonvanishing());
    CHECK(martingale_eval_exact(g, SymbolString::from_digits(2, "01")) == 0);
    CHECK(martingale_eval(g, SymbolString::from_digits(2, "01")).log2 ==
          -std::numeric_limits<double>::infinity());
}

TEST_CASE("payoff exponent reprices capital against the measure") {
    auto g = single_state_34();
    auto beta = ProbabilityMeasure::exact({Rational(1, 4), Rational(3, 4)});
    auto w = SymbolString::from_digits(2, "00");
    // d(w) = bets(w) / beta(w)^s with s = 1/2
    double expected = (0.75 * 0.75) / std::sqrt(0.25 * 0.25);
    CHECK(gale_eval(g, beta, 0.5, w).value == doctest::Approx(expected));
    // s = 1 against uniform is the plain martingale
    auto mu = ProbabilityMeasure::uniform(2);
    CHECK(gale_eval(g, mu, 1.0, w).value ==
          doctest::Approx(martingale_eval(g, w).value));
}

TEST_CASE("martingales obey the fair-split law at every node") {
    SplitMix64 rng(23);
    for (int t = 0; t < 50; ++t) {
        uint32_t k = 2 + rng.next() % 2;
        auto g = testhelp::random_gambler(rng, k, 1 + rng.next() % 4, true);
        auto form = GaleForm::martingale(g);
        auto rep = gale_condition_check(form, ProbabilityMeasure::uniform(k),
                                        one(), 4);
        CHECK(rep.exact);
        CHECK(rep.holds);
    }
}

TEST_CASE("gale forms obey their own betting law exactly") {
    SplitMix64 rng(29);
    for (int t = 0; t < 50; ++t) {
        uint32_t k = 2 + rng.next() % 2;
        auto g = testhelp::random_gambler(rng, k, 1 + rng.next() % 4);
        auto beta = testhelp::random_measure(rng, k);
        for (auto s : {half(), one(), two()}) {
            auto form = GaleForm::gale(g, beta, s);
            auto rep = gale_condition_check(form, beta, s, 4);
            CHECK(rep.exact);  // irrational powers cancel symbolically
            CHECK(rep.holds);
        }
    }
}

TEST_CASE("checking against the wrong law reports the first violation") {
    auto g = single_state_34();
    auto beta = ProbabilityMeasure::exact({Rational(1, 4), Rational(3, 4)});
    auto rep = gale_condition_check(GaleForm::martingale(g), beta, one(), 3);
    CHECK(rep.exact);
    CHECK_FALSE(rep.holds);
    REQUIRE(rep.first_violation.has_value());
    CHECK(rep.first_violation->empty());  // fails already at the root
}

TEST_CASE("float-level law check agrees on lawful evaluators") {
    auto g = single_state_34();
    auto beta = ProbabilityMeasure::exact({Rational(1, 4), Rational(3, 4)});
    auto eval = [&](const SymbolString& w) {
        return gale_eval(g, beta, 0.5, w).value;
    };
    auto rep = gale_condition_check(eval, beta, 0.5, 4);
    CHECK_FALSE(rep.exact);
    CHECK(rep.holds);
    CHECK(rep.max_rel_violation < 1e-9);
}

TEST_CASE("transforming a martingale yields a lawful gale") {
    SplitMix64 rng(31);
    for (int t = 0; t < 30; ++t) {
        uint32_t k = 2 + rng.next() % 2;
        auto g = testhelp::random_gambler(rng, k, 1 + rng.next() % 4);
        auto beta = testhelp::random_measure(rng, k);
        auto mu = ProbabilityMeasure::uniform(k);
        for (auto s : {half(), one(), two()}) {
            auto moved = GaleForm::martingale(g).transformed(mu, one(), beta, s);
            REQUIRE(moved.has_value());
            auto rep = gale_condition_check(*moved, beta, s, 4);
            CHECK(rep.exact);
            CHECK(rep.holds);
        }
    }
}

TEST_CASE("the transform multiplies by the stated price ratio") {
    auto g = single_state_34();
    auto mu = ProbabilityMeasure::uniform(2);
    auto beta = ProbabilityMeasure::exact({Rational(1, 4), Rational(3, 4)});
    auto moved = GaleForm::martingale(g).transformed(mu, one(), beta, half());
    REQUIRE(moved.has_value());
    SplitMix64 rng(37);
    for (int t = 0; t < 20; ++t) {
        auto w = testhelp::random_string(rng, 2, rng.next() % 10);
        auto base = [&](const SymbolString& u) {
            return martingale_eval(g, u).value;
        };
        double expected = gale_transform_eval(base, mu, 1.0, beta, 0.5, w);
        CHECK(moved->eval(w).value == doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("success traces snapshot the running capital") {
    auto g = single_state_34();
    auto mu = ProbabilityMeasure::uniform(2);
    auto S = SymbolString::from_digits(2, "00000000");
    auto t = success_trace(g, mu, 1.0, S, {2, 4, 8});
    REQUIRE(t.grid.size() == 3);
    CHECK(t.log2_values[0] ==
          doctest::Approx(martingale_eval(g, S.prefix(2)).log2));
    CHECK(t.log2_values[2] ==
          doctest::Approx(martingale_eval(g, S).log2));
    CHECK(t.states[2] == 0);
    // tail statistics cover the last half of the grid
    CHECK(t.tail_max == doctest::Approx(t.log2_values[2]));
}

TEST_CASE("success traces reject bad grids") {
    auto g = single_state_34();
    auto mu = ProbabilityMeasure::uniform(2);
    auto S = SymbolString::from_digits(2, "0000");
    CHECK_THROWS_WITH_AS(success_trace(g, mu, 1.0, S, {4, 2}),
                         doctest::Contains("MalformedFile"), DomainError);
    CHECK_THROWS_WITH_AS(success_trace(g, mu, 1.0, S, {2, 8}),
                         doctest::Contains("InsufficientPrefix"), DomainError);
}

}  // TEST_SUITE
