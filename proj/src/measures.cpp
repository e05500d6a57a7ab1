#include "fsdim/measures.hpp"

#include <cmath>
#include <limits>

namespace fsdim {

namespace {

const double kNegInf = -std::numeric_limits<double>::infinity();

void check_same_alphabet(const ProbabilityMeasure& a, const ProbabilityMeasure& b) {
    if (a.alphabet_size() != b.alphabet_size())
        fail("AlphabetMismatch", "measures on alphabets of size " +
                                     std::to_string(a.alphabet_size()) + " and " +
                                     std::to_string(b.alphabet_size()));
}

void check_positive(const ProbabilityMeasure& beta, const char* what) {
    if (!beta.is_positive())
        fail("NonPositiveMeasure", std::string(what) + " requires a positive measure");
}

}  // namespace

ProbabilityMeasure::ProbabilityMeasure(std::vector<Rational> weights, bool exact)
    : weights_(std::move(weights)), exact_(exact) {
    if (weights_.empty()) fail("AlphabetMismatch", "measure needs at least one symbol");
    if (weights_.size() > kMaxAlphabet)
        fail("AlphabetMismatch", "measure alphabet exceeds " + std::to_string(kMaxAlphabet));
    positive_ = true;
    probs_.reserve(weights_.size());
    log2_probs_.reserve(weights_.size());
    for (const Rational& w : weights_) {
        if (w < 0) fail("NonPositiveMeasure", "negative weight " + format_rational(w));
        if (w == 0) positive_ = false;
        probs_.push_back(rational_to_double(w));
        log2_probs_.push_back(w == 0 ? kNegInf : log2_rational(w));
    }
}

ProbabilityMeasure ProbabilityMeasure::exact(std::vector<Rational> weights) {
    Rational sum = 0;
    for (const Rational& w : weights) sum += w;
    if (sum != 1)
        fail("NonNormalizedMeasure", "weights sum to " + format_rational(sum) + ", not 1");
    return ProbabilityMeasure(std::move(weights), true);
}

ProbabilityMeasure ProbabilityMeasure::approximate(const std::vector<double>& weights) {
    std::vector<Rational> exact_weights;
    exact_weights.reserve(weights.size());
    Rational sum = 0;
    for (double w : weights) {
        if (!std::isfinite(w)) fail("NonPositiveMeasure", "non-finite weight");
        Rational r(w);  // the exact dyadic value of the double
        exact_weights.push_back(r);
        sum += r;
    }
    Rational gap = sum - 1;
    if (gap < 0) gap = -gap;
    if (gap > Rational(1, 1000000000000ll))
        fail("NonNormalizedMeasure",
             "weights sum to " + std::to_string(rational_to_double(sum)) + ", not 1");
    return ProbabilityMeasure(std::move(exact_weights), sum == 1);
}

ProbabilityMeasure ProbabilityMeasure::uniform(uint32_t k) {
    if (k == 0) fail("AlphabetMismatch", "alphabet size must be at least 1");
    return exact(std::vector<Rational>(k, Rational(1, k)));
}

const Rational& ProbabilityMeasure::weight(Sym a) const {
    if (a >= weights_.size())
        fail("SymbolOutOfRange", "symbol " + std::to_string(a) + " not below " +
                                     std::to_string(weights_.size()));
    return weights_[a];
}

double ProbabilityMeasure::probability(Sym a) const {
    if (a >= probs_.size())
        fail("SymbolOutOfRange", "symbol " + std::to_string(a) + " not below " +
                                     std::to_string(probs_.size()));
    return probs_[a];
}

double ProbabilityMeasure::log2_probability(Sym a) const {
    if (a >= log2_probs_.size())
        fail("SymbolOutOfRange", "symbol " + std::to_string(a) + " not below " +
                                     std::to_string(log2_probs_.size()));
    return log2_probs_[a];
}

bool ProbabilityMeasure::operator==(const ProbabilityMeasure& other) const {
    return weights_ == other.weights_;
}

double entropy_bits(const ProbabilityMeasure& alpha) {
    double h = 0.0;
    for (Sym a = 0; a < alpha.alphabet_size(); ++a) {
        double p = alpha.probability(a);
        if (p > 0.0) h -= p * alpha.log2_probability(a);
    }
    return h;
}

double kl_divergence_bits(const ProbabilityMeasure& alpha,
                          const ProbabilityMeasure& beta) {
    check_same_alphabet(alpha, beta);
    double d = 0.0;
    for (Sym a = 0; a < alpha.alphabet_size(); ++a) {
        if (alpha.weight(a) == 0) continue;
        if (beta.weight(a) == 0)
            fail("NonPositiveMeasure",
                 "divergence undefined: zero reference weight at symbol " + std::to_string(a));
        d += alpha.probability(a) * (alpha.log2_probability(a) - beta.log2_probability(a));
    }
    return d < 0.0 ? 0.0 : d;
}

double self_information_bits(const ProbabilityMeasure& beta, const SymbolString& w) {
    check_positive(beta, "self-information");
    double bits = 0.0;
    for (size_t i = 0; i < w.size(); ++i) bits -= beta.log2_probability(w[i]);
    return bits;
}

double induced_probability(const ProbabilityMeasure& alpha, const SymbolString& w) {
    double p = 1.0;
    for (size_t i = 0; i < w.size(); ++i) p *= alpha.probability(w[i]);
    return p;
}

Rational induced_probability_exact(const ProbabilityMeasure& alpha,
                                   const SymbolString& w) {
    Rational p = 1;
    for (size_t i = 0; i < w.size(); ++i) p *= alpha.weight(w[i]);
    return p;
}

double divergence_formula(const ProbabilityMeasure& alpha,
                          const ProbabilityMeasure& beta) {
    check_same_alphabet(alpha, beta);
    check_positive(beta, "the divergence formula");
    double h = entropy_bits(alpha);
    double d = kl_divergence_bits(alpha, beta);
    if (h == 0.0 && d == 0.0)
        fail("DegenerateFormula",
             "entropy and divergence are both zero; the ratio is undefined");
    return h / (h + d);
}

InfoSummary info_summary(const ProbabilityMeasure& alpha,
                         const ProbabilityMeasure& beta) {
    InfoSummary s;
    s.entropy_bits = entropy_bits(alpha);
    s.divergence_bits = kl_divergence_bits(alpha, beta);
    double logk = std::log2(static_cast<double>(alpha.alphabet_size()));
    s.entropy_base_k = logk > 0.0 ? s.entropy_bits / logk : 0.0;
    s.divergence_base_k = logk > 0.0 ? s.divergence_bits / logk : 0.0;
    s.formula_value = divergence_formula(alpha, beta);
    return s;
}

}  // namespace fsdim
