#include <doctest.h>

#include <cmath>

#include "fsdim/measures.hpp"
#include "helpers.hpp"

using namespace fsdim;

namespace {

ProbabilityMeasure biased34() {
    return ProbabilityMeasure::exact({Rational(3, 4), Rational(1, 4)});
}

ProbabilityMeasure biased14() {
    return ProbabilityMeasure::exact({Rational(1, 4), Rational(3, 4)});
}

}  // namespace

TEST_SUITE("measures") {

TEST_CASE("entropy of the 3/4 coin") {
    CHECK(entropy_bits(biased34()) ==
          doctest::Approx(0.81127812445913286391).epsilon(1e-14));
}

TEST_CASE("entropy of a uniform measure is log2 k") {
    CHECK(entropy_bits(ProbabilityMeasure::uniform(2)) == doctest::Approx(1.0));
    CHECK(entropy_bits(ProbabilityMeasure::uniform(8)) == doctest::Approx(3.0));
}

TEST_CASE("entropy treats zero weights as contributing nothing") {
    auto m = ProbabilityMeasure::exact({Rational(1), Rational(0)});
    CHECK(entropy_bits(m) == 0.0);
}

TEST_CASE("ternary entropy is exact on dyadic weights") {
    auto m = ProbabilityMeasure::exact(
        {Rational(1, 2), Rational(1, 4), Rational(1, 4)});
    CHECK(entropy_bits(m) == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("divergence from the uniform measure complements entropy") {
    auto alpha = biased34();
    double d = kl_divergence_bits(alpha, ProbabilityMeasure::uniform(2));
    CHECK(d == doctest::Approx(0.18872187554086713609).epsilon(1e-14));
    CHECK(entropy_bits(alpha) + d == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("divergence between the two biased coins") {
    double d = kl_divergence_bits(biased34(), biased14());
    // equals log2(3)/2 for this mirrored pair
    CHECK(d == doctest::Approx(0.79248125036057809073).epsilon(1e-14));
    CHECK(d == doctest::Approx(0.5 * std::log2(3.0)).epsilon(1e-14));
}

TEST_CASE("divergence is zero from a measure to itself") {
    CHECK(kl_divergence_bits(biased34(), biased34()) == 0.0);
    CHECK(kl_divergence_bits(biased14(), biased14()) == 0.0);
}

TEST_CASE("divergence needs matching alphabets") {
    CHECK_THROWS_WITH_AS(
        kl_divergence_bits(biased34(), ProbabilityMeasure::uniform(3)),
        doctest::Contains("AlphabetMismatch"), DomainError);
}

TEST_CASE("divergence rejects a zero reference weight under positive mass") {
    auto beta = ProbabilityMeasure::exact({Rational(1), Rational(0)});
    CHECK_THROWS_WITH_AS(kl_divergence_bits(biased34(), beta),
                         doctest::Contains("NonPositiveMeasure"), DomainError);
    // but a shared zero cell is fine
    auto alpha = ProbabilityMeasure::exact({Rational(1), Rational(0)});
    CHECK(kl_divergence_bits(alpha, beta) == 0.0);
}

TEST_CASE("self-information adds per-symbol log prices") {
    auto w = SymbolString::from_digits(2, "01");
    CHECK(self_information_bits(biased34(), w) ==
          doctest::Approx(2.4150374992788438185).epsilon(1e-14));
}

TEST_CASE("self-information demands a positive measure") {
    auto beta = ProbabilityMeasure::exact({Rational(1), Rational(0)});
    CHECK_THROWS_WITH_AS(
        self_information_bits(beta, SymbolString::from_digits(2, "0")),
        doctest::Contains("NonPositiveMeasure"), DomainError);
}

TEST_CASE("self-information rejects symbols outside the alphabet") {
    auto w = SymbolString::from_digits(3, "012");
    CHECK_THROWS_WITH_AS(self_information_bits(ProbabilityMeasure::uniform(2), w),
                         doctest::Contains("SymbolOutOfRange"), DomainError);
}

TEST_CASE("induced probability multiplies weights along the word") {
    auto w = SymbolString::from_digits(2, "001");
    CHECK(induced_probability_exact(biased34(), w) == Rational(9, 64));
    CHECK(induced_probability(biased34(), w) == doctest::Approx(9.0 / 64));
}

TEST_CASE("formula value for the 3/4 coin against uniform") {
    CHECK(divergence_formula(biased34(), ProbabilityMeasure::uniform(2)) ==
          doctest::Approx(0.81127812445913286391).epsilon(1e-14));
}

TEST_CASE("formula value for the 3/4 coin against the mirrored coin") {
    CHECK(divergence_formula(biased34(), biased14()) ==
          doctest::Approx(0.50586025384907503731).epsilon(1e-14));
}

TEST_CASE("formula is one when the measures agree") {
    CHECK(divergence_formula(biased34(), biased34()) == doctest::Approx(1.0));
}

TEST_CASE("formula denominator equals the mixed log price") {
    // H + D telescopes to sum_a alpha(a) log2(1/beta(a))
    double h = entropy_bits(biased34());
    double d = kl_divergence_bits(biased34(), biased14());
    CHECK(h + d == doctest::Approx(1.6037593748197109546).epsilon(1e-14));
}

TEST_CASE("formula is undefined on a single-letter alphabet") {
    auto point = ProbabilityMeasure::exact({Rational(1)});
    CHECK_THROWS_WITH_AS(divergence_formula(point, point),
                         doctest::Contains("DegenerateFormula"), DomainError);
}

TEST_CASE("summary carries base-k normalizations") {
    auto alpha = ProbabilityMeasure::exact(
        {Rational(1, 2), Rational(1, 4), Rational(1, 4)});
    InfoSummary s = info_summary(alpha, ProbabilityMeasure::uniform(3));
    CHECK(s.entropy_bits == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(s.entropy_base_k ==
          doctest::Approx(0.94639463035718615565).epsilon(1e-14));
    CHECK(s.formula_value ==
          doctest::Approx(0.94639463035718615565).epsilon(1e-14));
    CHECK(s.divergence_base_k ==
          doctest::Approx(1.0 - 0.94639463035718615565).epsilon(1e-12));
}

TEST_CASE("exact weights must sum to one") {
    CHECK_THROWS_WITH_AS(
        ProbabilityMeasure::exact({Rational(9, 10), Rational(0)}),
        doctest::Contains("NonNormalizedMeasure"), DomainError);
}

TEST_CASE("negative weights are rejected") {
    CHECK_THROWS_WITH_AS(
        ProbabilityMeasure::exact({Rational(3, 2), Rational(-1, 2)}),
        doctest::Contains("NonPositiveMeasure"), DomainError);
}

TEST_CASE("approximate weights tolerate only rounding error") {
    auto m = ProbabilityMeasure::approximate({0.1, 0.2, 0.7});
    CHECK(m.alphabet_size() == 3);
    CHECK_THROWS_WITH_AS(ProbabilityMeasure::approximate({0.5, 0.4}),
                         doctest::Contains("NonNormalizedMeasure"), DomainError);
}

TEST_CASE("random measures satisfy the entropy and divergence bounds") {
    SplitMix64 rng(101);
    for (int trial = 0; trial < 200; ++trial) {
        uint32_t k = 2 + rng.next() % 4;
        auto alpha = testhelp::random_measure(rng, k, true);
        auto beta = testhelp::random_measure(rng, k, false);
        double h = entropy_bits(alpha);
        double d = kl_divergence_bits(alpha, beta);
        double logk = std::log2(static_cast<double>(k));
        CHECK(h >= 0.0);
        CHECK(h <= doctest::Approx(logk));
        CHECK(d >= 0.0);
        double f = divergence_formula(alpha, beta);
        CHECK(f >= 0.0);
        CHECK(f <= 1.0 + 1e-12);
        // against uniform, divergence is exactly the entropy deficit
        CHECK(kl_divergence_bits(alpha, ProbabilityMeasure::uniform(k)) ==
              doctest::Approx(logk - h).epsilon(1e-12));
    }
}

}  // TEST_SUITE
