#pragma once

#include <cstdint>
#include <vector>

#include "fsdim/errors.hpp"
#include "fsdim/rational.hpp"
#include "fsdim/symbols.hpp"

namespace fsdim {

// Probability measure on {0, ..., k-1}. Exact mode keeps rational weights
// that must sum to exactly 1; approximate mode takes doubles whose sum may be
// off by at most 1e-12 (each double is still stored as the exact dyadic
// rational it denotes, so downstream exact arithmetic stays consistent).
class ProbabilityMeasure {
public:
    static ProbabilityMeasure exact(std::vector<Rational> weights);
    static ProbabilityMeasure approximate(const std::vector<double>& weights);
    static ProbabilityMeasure uniform(uint32_t k);

    uint32_t alphabet_size() const { return static_cast<uint32_t>(weights_.size()); }
    bool is_exact() const { return exact_; }
    bool is_positive() const { return positive_; }

    const Rational& weight(Sym a) const;
    double probability(Sym a) const;
    double log2_probability(Sym a) const;  // -inf for zero weights
    const std::vector<Rational>& weights() const { return weights_; }

    bool operator==(const ProbabilityMeasure& other) const;

private:
    ProbabilityMeasure(std::vector<Rational> weights, bool exact);

    std::vector<Rational> weights_;
    std::vector<double> probs_;
    std::vector<double> log2_probs_;
    bool exact_ = true;
    bool positive_ = false;
};

struct InfoSummary {
    double entropy_bits = 0.0;      // H(alpha)
    double divergence_bits = 0.0;   // D(alpha || beta)
    double entropy_base_k = 0.0;    // H / log2(k)
    double divergence_base_k = 0.0; // D / log2(k)
    double formula_value = 0.0;     // H / (H + D)
};

// H(alpha) in bits, with the 0*log(1/0) = 0 convention.
double entropy_bits(const ProbabilityMeasure& alpha);

// D(alpha || beta) in bits; terms with alpha(a) = 0 contribute 0.
double kl_divergence_bits(const ProbabilityMeasure& alpha,
                          const ProbabilityMeasure& beta);

// I_beta(w) = sum over symbols of log2(1/beta(w[i])); beta must be positive.
double self_information_bits(const ProbabilityMeasure& beta,
                             const SymbolString& w);

// Product measure of w under alpha: prod alpha(w[i]).
double induced_probability(const ProbabilityMeasure& alpha,
                           const SymbolString& w);
Rational induced_probability_exact(const ProbabilityMeasure& alpha,
                                   const SymbolString& w);

// H(alpha) / (H(alpha) + D(alpha || beta)); the similarity score between a
// source alpha and a pricing measure beta.
double divergence_formula(const ProbabilityMeasure& alpha,
                          const ProbabilityMeasure& beta);

InfoSummary info_summary(const ProbabilityMeasure& alpha,
                         const ProbabilityMeasure& beta);

}  // namespace fsdim
