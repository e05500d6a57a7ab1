#include <doctest.h>

#include <cmath>

#include "fsdim/estimators.hpp"
#include "helpers.hpp"

using namespace fsdim;

namespace {

SymbolString alternating(size_t n) {
    SymbolString s(2);
    for (size_t i = 0; i < n; ++i) s.push_back(static_cast<Sym>(i % 2));
    return s;
}

}  // namespace

TEST_SUITE("estimators") {

TEST_CASE("block entropy rates follow the empirical block measure") {
    auto x = SymbolString::from_digits(2, "00011011");
    auto t = block_entropy_rate(x, 2, {1, 2, 4});
    REQUIRE(t.rates.size() == 3);
    CHECK(t.entropy_bits[0] == 0.0);
    CHECK(t.entropy_bits[1] == doctest::Approx(1.0));
    CHECK(t.entropy_bits[2] == doctest::Approx(2.0));
    CHECK(t.rates[2] == doctest::Approx(1.0));
    // tail statistics cover the last half of the grid
    CHECK(t.tail_min == doctest::Approx(0.5));
    CHECK(t.tail_max == doctest::Approx(1.0));
}

TEST_CASE("block entropy rejects malformed grids") {
    auto x = SymbolString::from_digits(2, "00011011");
    CHECK_THROWS_WITH_AS(block_entropy_rate(x, 2, {2, 2}),
                         doctest::Contains("MalformedFile"), DomainError);
    CHECK_THROWS_WITH_AS(block_entropy_rate(x, 2, {}),
                         doctest::Contains("EmptyInput"), DomainError);
    CHECK_THROWS_WITH_AS(block_entropy_rate(x, 2, {8}),
                         doctest::Contains("InsufficientPrefix"), DomainError);
    CHECK_THROWS_WITH_AS(block_entropy_rate(x, 0, {1}),
                         doctest::Contains("EmptyBlock"), DomainError);
}

TEST_CASE("an alternating prefix has dimension exactly zero at block two") {
    auto est = fs_dimension_estimate(alternating(100000), 2);
    CHECK(est.lower == 0.0);
    CHECK(est.upper == 0.0);
    REQUIRE(est.per_block_len.size() == 2);
    CHECK(est.per_block_len[0].tail_min == doctest::Approx(1.0));
    CHECK(est.per_block_len[1].tail_max == 0.0);
}

TEST_CASE("a constant string has dimension zero already at block one") {
    SymbolString s(2);
    for (int i = 0; i < 4096; ++i) s.push_back(0);
    auto est = fs_dimension_estimate(s, 3);
    CHECK(est.lower == 0.0);
    CHECK(est.upper == 0.0);
}

TEST_CASE("dimension estimates keep lower at or below upper") {
    SplitMix64 rng(71);
    for (int t = 0; t < 10; ++t) {
        uint32_t k = 2 + rng.next() % 2;
        auto alpha = testhelp::random_measure(rng, k);
        auto s = iid_sample(alpha, 20000, rng.next());
        auto est = fs_dimension_estimate(s, 4);
        CHECK(est.lower <= est.upper);
        CHECK(est.lower >= 0.0);
        CHECK(est.upper <= 1.0 + 1e-9);
    }
}

TEST_CASE("iid samples estimate near the entropy rate") {
    auto alpha = ProbabilityMeasure::exact({Rational(3, 4), Rational(1, 4)});
    auto s = iid_sample(alpha, 200000, 3);
    auto est = fs_dimension_estimate(s, 6);
    CHECK(std::abs(est.lower - 0.81127812445913286391) < 0.02);
    CHECK(std::abs(est.upper - 0.81127812445913286391) < 0.02);
}

TEST_CASE("an explicit prefix grid overrides the geometric one") {
    auto s = alternating(1000);
    EstimatorOptions opt;
    opt.prefix_grid = std::vector<size_t>{100, 500, 1000};
    auto est = fs_dimension_estimate(s, 2, opt);
    CHECK(est.per_block_len[0].grid == std::vector<size_t>{100, 500, 1000});
    CHECK(est.per_block_len[1].grid == std::vector<size_t>{50, 250, 500});
}

TEST_CASE("estimation requires at least one full block") {
    auto s = SymbolString::from_digits(2, "01");
    CHECK_THROWS_WITH_AS(fs_dimension_estimate(s, 4),
                         doctest::Contains("InsufficientPrefix"), DomainError);
    CHECK_THROWS_WITH_AS(fs_dimension_estimate(SymbolString(2), 2),
                         doctest::Contains("EmptyInput"), DomainError);
}

TEST_CASE("priced estimates validate their inputs") {
    auto s = alternating(64);
    CHECK_THROWS_WITH_AS(
        fs_beta_dimension_estimate(s, ProbabilityMeasure::uniform(3), 2),
        doctest::Contains("AlphabetMismatch"), DomainError);
    auto degenerate = ProbabilityMeasure::exact({Rational(1), Rational(0)});
    CHECK_THROWS_WITH_AS(fs_beta_dimension_estimate(s, degenerate, 2),
                         doctest::Contains("NonPositiveMeasure"), DomainError);
    CHECK_THROWS_WITH_AS(
        fs_beta_dimension_estimate(SymbolString(2), ProbabilityMeasure::uniform(2), 2),
        doctest::Contains("EmptyInput"), DomainError);
}

TEST_CASE("a single-letter alphabet leaves the formula undefined") {
    SymbolString s(1);
    for (int i = 0; i < 16; ++i) s.push_back(0);
    CHECK_THROWS_WITH_AS(
        fs_beta_dimension_estimate(s, ProbabilityMeasure::uniform(1), 2),
        doctest::Contains("DegenerateFormula"), DomainError);
}

TEST_CASE("uniform pricing leaves the dimension estimate unscaled") {
    auto alpha = ProbabilityMeasure::exact({Rational(3, 4), Rational(1, 4)});
    auto s = iid_sample(alpha, 50000, 5);
    auto est = fs_beta_dimension_estimate(s, ProbabilityMeasure::uniform(2), 4);
    CHECK(est.denominator == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(est.entropy_route_lower ==
          doctest::Approx(est.fs_dim.lower).epsilon(1e-9));
    CHECK(est.alpha_hat == letter_frequencies(s));
    CHECK(est.value() == est.entropy_route_lower);
}

TEST_CASE("both routes are reported and stay close on iid input") {
    auto alpha = ProbabilityMeasure::exact({Rational(3, 4), Rational(1, 4)});
    auto beta = ProbabilityMeasure::exact({Rational(1, 4), Rational(3, 4)});
    auto s = iid_sample(alpha, 100000, 7);
    auto est =
        fs_beta_dimension_estimate(s, beta, 4, BetaRoute::compression);
    CHECK(est.value() == est.compression_route);
    CHECK(est.compression_per_block_len.size() == 4);
    CHECK(std::abs(est.compression_route - est.entropy_route_lower) < 0.1);
    // the route minimum is what the headline value reports
    double least = est.compression_per_block_len[0].ratio;
    for (const auto& e : est.compression_per_block_len)
        least = std::min(least, e.ratio);
    CHECK(est.compression_route == least);
}

TEST_CASE("worker threads change the speed, never the numbers") {
    auto alpha = ProbabilityMeasure::exact({Rational(3, 4), Rational(1, 4)});
    auto s = iid_sample(alpha, 50000, 11);
    EstimatorOptions serial, parallel;
    serial.threads = 1;
    parallel.threads = 4;
    auto a = fs_beta_dimension_estimate(s, ProbabilityMeasure::uniform(2), 5,
                                        BetaRoute::entropy, serial);
    auto b = fs_beta_dimension_estimate(s, ProbabilityMeasure::uniform(2), 5,
                                        BetaRoute::entropy, parallel);
    CHECK(a.fs_dim.lower == b.fs_dim.lower);
    CHECK(a.fs_dim.upper == b.fs_dim.upper);
    CHECK(a.compression_route == b.compression_route);
    for (size_t l = 0; l < 5; ++l) {
        CHECK(a.fs_dim.per_block_len[l].rates == b.fs_dim.per_block_len[l].rates);
        CHECK(a.compression_per_block_len[l].compressed_bits ==
              b.compression_per_block_len[l].compressed_bits);
    }
}

TEST_CASE("verification grades the estimate against the prediction") {
    auto alpha = ProbabilityMeasure::exact({Rational(3, 4), Rational(1, 4)});
    auto report = verify_divergence(alpha, ProbabilityMeasure::uniform(2),
                                    50000, 13, 4);
    CHECK(report.n == 50000);
    CHECK(report.seed == 13);
    CHECK(report.info.formula_value ==
          doctest::Approx(0.81127812445913286391).epsilon(1e-12));
    CHECK(report.frequency_residual == 0.0);  // uniform pricing cancels exactly
    CHECK(report.dimension_gap_lower ==
          doctest::Approx(std::abs(report.estimate.fs_dim.lower -
                                   report.info.entropy_base_k)));
    // flags agree with the numbers they grade
    CHECK(report.pass_residual ==
          (std::abs(report.frequency_residual) <= report.tol.residual));
    CHECK(report.pass ==
          (report.pass_entropy_route && report.pass_dimension_gap &&
           report.pass_residual && report.pass_cross_route));
}

TEST_CASE("verification is deterministic in the seed") {
    auto alpha = ProbabilityMeasure::exact({Rational(3, 4), Rational(1, 4)});
    auto a = verify_divergence(alpha, ProbabilityMeasure::uniform(2), 20000, 3, 3);
    auto b = verify_divergence(alpha, ProbabilityMeasure::uniform(2), 20000, 3, 3);
    CHECK(a.estimate.fs_dim.lower == b.estimate.fs_dim.lower);
    CHECK(a.estimate.compression_route == b.estimate.compression_route);
    CHECK(a.frequency_residual == b.frequency_residual);
}

}  // TEST_SUITE
